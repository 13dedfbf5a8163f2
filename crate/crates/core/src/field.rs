//! Finite-field arithmetic.
//!
//! [`Gf2mField`] is GF(2^m) in a polynomial basis over GF(2): an element is
//! the integer whose bit `i` is the coefficient of `x^i`, so addition is XOR.
//! Multiplication goes through precomputed exponent/logarithm tables for the
//! primitive element α = x.
//!
//! [`GfpField`] is the prime field GF(p) with its smallest primitive root and
//! a quadratic-residue table, which is all the projective-line constructions
//! need.

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Largest supported prime for [`GfpField`].
pub const MAX_PRIME: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} out of range 2..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#b} does not have degree {m}")]
    ModulusDegree { m: u32, modulus: u32 },
    #[error("modulus {modulus:#b} is not primitive: x^{power} repeats x^{earlier}")]
    NotPrimitive { modulus: u32, power: u32, earlier: u32 },
    #[error("element {value} is outside a field of order {order}")]
    OutOfRange { value: u32, order: u32 },
    #[error("logarithm of zero is undefined")]
    LogOfZero,
    #[error("{0} is not an odd prime in 3..={MAX_PRIME}")]
    NotOddPrime(u32),
}

/// Primitive polynomial used when no modulus is given, indexed by degree.
///
/// Degrees 3, 4 and 5 are x^3+x+1, x^4+x+1 and x^5+x^2+1; every entry is the
/// numerically smallest primitive polynomial of its degree.
const DEFAULT_MODULI: [u32; 15] = [
    0x7,     // 2: x^2+x+1
    0xb,     // 3: x^3+x+1
    0x13,    // 4: x^4+x+1
    0x25,    // 5: x^5+x^2+1
    0x43,    // 6: x^6+x+1
    0x83,    // 7: x^7+x+1
    0x11d,   // 8: x^8+x^4+x^3+x^2+1
    0x211,   // 9: x^9+x^4+1
    0x409,   // 10: x^10+x^3+1
    0x805,   // 11: x^11+x^2+1
    0x1053,  // 12: x^12+x^6+x^4+x+1
    0x201b,  // 13: x^13+x^4+x^3+x+1
    0x402b,  // 14: x^14+x^5+x^3+x+1
    0x8003,  // 15: x^15+x+1
    0x1002d, // 16: x^16+x^5+x^3+x^2+1
];

/// Built-in primitive polynomial for degree `m`, if `m` is supported.
pub fn default_modulus(m: u32) -> Option<u32> {
    (2..=MAX_DEGREE)
        .contains(&m)
        .then(|| DEFAULT_MODULI[(m - 2) as usize])
}

/// GF(2^m) with exponent and logarithm tables for α = x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2mField {
    m: u32,
    modulus: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2mField {
    /// Field of degree `m` with the built-in modulus.
    pub fn new(m: u32) -> Result<Self, FieldError> {
        let modulus = default_modulus(m).ok_or(FieldError::DegreeOutOfRange(m))?;
        Self::with_modulus(m, modulus)
    }

    /// Field of degree `m` defined by `modulus`, which must be primitive.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        if modulus >> m != 1 {
            return Err(FieldError::ModulusDegree { m, modulus });
        }
        let order = 1u32 << m;
        let n = order - 1;
        let mut exp = Vec::with_capacity(n as usize);
        // log[0] is never read; u32::MAX marks "not yet seen" while building.
        let mut log = vec![u32::MAX; order as usize];
        let mut x = 1u32;
        for k in 0..n {
            if x == 0 || log[x as usize] != u32::MAX {
                let earlier = if x == 0 { 0 } else { log[x as usize] };
                return Err(FieldError::NotPrimitive { modulus, power: k, earlier });
            }
            log[x as usize] = k;
            exp.push(x);
            x <<= 1;
            if x & order != 0 {
                x ^= modulus;
            }
        }
        if x != 1 {
            return Err(FieldError::NotPrimitive { modulus, power: n, earlier: 0 });
        }
        log[0] = 0;
        Ok(Self { m, modulus, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, 2^m.
    pub fn order(&self) -> u32 {
        1 << self.m
    }

    /// Order of the multiplicative group, 2^m − 1.
    pub fn multiplicative_order(&self) -> u32 {
        self.order() - 1
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.order()
    }

    pub fn check(&self, a: u32) -> Result<u32, FieldError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(FieldError::OutOfRange { value: a, order: self.order() })
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.multiplicative_order();
        let k = self.log[a as usize] + self.log[b as usize];
        self.exp[(if k >= n { k - n } else { k }) as usize]
    }

    /// α^k, with `k` reduced modulo 2^m − 1.
    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % self.multiplicative_order() as u64) as usize]
    }

    /// Discrete logarithm base α.
    pub fn log(&self, a: u32) -> Result<u32, FieldError> {
        self.check(a)?;
        if a == 0 {
            return Err(FieldError::LogOfZero);
        }
        Ok(self.log[a as usize])
    }

    /// Logarithm without the zero/range check.
    #[inline]
    pub(crate) fn log_unchecked(&self, a: u32) -> u32 {
        debug_assert!(a != 0 && self.contains(a));
        self.log[a as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 || !self.contains(a) {
            return None;
        }
        let n = self.multiplicative_order();
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    /// Multiply by α^k.
    #[inline]
    pub fn scale_by_power(&self, a: u32, k: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = self.multiplicative_order();
        self.exp[((self.log[a as usize] + k % n) % n) as usize]
    }

    /// Display name of an element in exponent form: "0", "1", "a^k".
    pub fn element_name(&self, a: u32) -> String {
        match a {
            0 => "0".to_string(),
            1 => "1".to_string(),
            _ => format!("a^{}", self.log[a as usize]),
        }
    }
}

/// The prime field GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfpField {
    p: u32,
    generator: u32,
    square: Vec<bool>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GfpField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p < 3 || p > MAX_PRIME || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        let mut square = vec![false; p as usize];
        for x in 1..p as u64 {
            square[(x * x % p as u64) as usize] = true;
        }
        let mut field = Self { p, generator: 0, square };
        let n = p - 1;
        let prime_factors: Vec<u32> = (2..=n).filter(|&d| n % d == 0 && is_prime(d)).collect();
        field.generator = (2..p)
            .find(|&g| prime_factors.iter().all(|&q| field.pow(g, (n / q) as u64) != 1))
            .unwrap_or(1); // p = 3 never reaches the fallback: 2 generates
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Smallest primitive root modulo p.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64 % self.p as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a as u64 % self.p as u64;
        let mut acc = 1u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a % self.p != 0).then(|| self.pow(a, (self.p - 2) as u64))
    }

    /// True for nonzero quadratic residues.
    pub fn is_square(&self, a: u32) -> bool {
        self.square[(a % self.p) as usize]
    }

    /// The (p − 1)/2 nonzero squares in increasing order.
    pub fn squares(&self) -> Vec<u32> {
        (1..self.p).filter(|&x| self.square[x as usize]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Multiply polynomials over GF(2) and reduce, bit by bit.
    fn slow_mul(mut a: u32, mut b: u32, m: u32, modulus: u32) -> u32 {
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> m & 1 == 1 {
                a ^= modulus;
            }
        }
        acc
    }

    fn slow_pow(k: u32, m: u32, modulus: u32) -> u32 {
        (0..k).fold(1, |acc, _| slow_mul(acc, 2, m, modulus))
    }

    #[test]
    fn default_polynomials_are_smallest_primitive() {
        for m in 2..=MAX_DEGREE {
            let first = ((1u32 << m) + 1..1u32 << (m + 1))
                .find(|&poly| Gf2mField::with_modulus(m, poly).is_ok())
                .unwrap();
            assert_eq!(default_modulus(m), Some(first), "m={m}");
        }
    }

    #[test]
    fn worked_example_polynomials() {
        let f3 = Gf2mField::new(3).unwrap();
        assert_eq!(f3.exp(3), 0b011);
        let f4 = Gf2mField::new(4).unwrap();
        assert_eq!(f4.exp(4), 0b0011);
        let f5 = Gf2mField::new(5).unwrap();
        assert_eq!(f5.exp(5), 0b00101);
    }

    #[test]
    fn add_and_log_examples() {
        let f3 = Gf2mField::new(3).unwrap();
        let alpha = f3.exp(1);
        assert_eq!(f3.add(alpha, 1), 0b011);
        assert_eq!(f3.log(f3.add(alpha, 1)), Ok(3));
        assert_eq!(f3.add(5, 0), 5);
        assert_eq!(f3.log(1), Ok(0));

        let f4 = Gf2mField::new(4).unwrap();
        // α^8 = α^2 + 1, worked out with the polynomial oracle.
        assert_eq!(slow_pow(8, 4, 0x13), 0b0101);
        assert_eq!(f4.add(f4.exp(2), f4.exp(8)), 1);
        assert_eq!(f4.log(0b0101), Ok(8));
    }

    #[test]
    fn mul_examples() {
        let f3 = Gf2mField::new(3).unwrap();
        assert_eq!(f3.mul(f3.exp(1), f3.exp(1)), f3.exp(2));
        assert_eq!(f3.mul(f3.exp(3), f3.exp(4)), 1);
        let f5 = Gf2mField::new(5).unwrap();
        assert_eq!(f5.mul(f5.exp(5), f5.exp(5)), f5.exp(10));
    }

    #[test]
    fn tables_match_polynomial_oracle() {
        for m in 2..=10 {
            let f = Gf2mField::new(m).unwrap();
            for k in 0..f.multiplicative_order() {
                assert_eq!(f.exp(k as u64), slow_pow(k, m, f.modulus()));
            }
            for a in 0..f.order() {
                for b in (0..f.order()).step_by(7) {
                    assert_eq!(f.mul(a, b), slow_mul(a, b, m, f.modulus()));
                }
            }
        }
    }

    #[test]
    fn primitivity_and_frobenius() {
        for m in 2..=MAX_DEGREE {
            let f = Gf2mField::new(m).unwrap();
            let n = f.multiplicative_order();
            assert_eq!(f.exp(n as u64), 1);
            for x in 1..f.order() {
                assert_eq!(f.exp(f.log(x).unwrap() as u64), x);
                assert_eq!(f.mul(x, x), f.exp(2 * f.log(x).unwrap() as u64));
            }
            let ones = (1..n).filter(|&k| f.exp(k as u64) == 1).count();
            assert_eq!(ones, 0, "m={m}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Gf2mField::new(1), Err(FieldError::DegreeOutOfRange(1)));
        assert_eq!(Gf2mField::new(17), Err(FieldError::DegreeOutOfRange(17)));
        assert!(matches!(
            Gf2mField::with_modulus(4, 0b111),
            Err(FieldError::ModulusDegree { .. })
        ));
        // x^4+x^3+x^2+x+1 is irreducible but α has order 5.
        assert_eq!(
            Gf2mField::with_modulus(4, 0b11111),
            Err(FieldError::NotPrimitive { modulus: 0b11111, power: 5, earlier: 0 })
        );
        let f = Gf2mField::new(3).unwrap();
        assert_eq!(f.log(0), Err(FieldError::LogOfZero));
        assert!(matches!(f.log(8), Err(FieldError::OutOfRange { .. })));
    }

    #[test]
    fn inverse_and_scale() {
        let f = Gf2mField::new(6).unwrap();
        for x in 1..f.order() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            assert_eq!(f.scale_by_power(x, 5), f.mul(x, f.exp(5)));
        }
        assert_eq!(f.inv(0), None);
        assert_eq!(f.element_name(0), "0");
        assert_eq!(f.element_name(1), "1");
        assert_eq!(f.element_name(f.exp(7)), "a^7");
    }

    #[test]
    fn prime_field_squares() {
        assert_eq!(GfpField::new(7).unwrap().squares(), vec![1, 2, 4]);
        assert_eq!(GfpField::new(3).unwrap().squares(), vec![1]);
        let f43 = GfpField::new(43).unwrap();
        let oracle: std::collections::BTreeSet<u32> = (1..43u32).map(|k| k * k % 43).collect();
        assert_eq!(f43.squares(), oracle.into_iter().collect::<Vec<_>>());
        assert_eq!(f43.squares().len(), 21);
        assert!(f43.is_square(9));
        assert_eq!(f43.generator(), 3);
        let g = f43.generator();
        assert!((1..42).all(|k| f43.pow(g, k) != 1));
        assert_eq!(f43.pow(g, 42), 1);
        // even powers of the generator are exactly the squares
        let even: std::collections::BTreeSet<u32> = (0..21).map(|k| f43.pow(g, 2 * k)).collect();
        assert_eq!(even.into_iter().collect::<Vec<_>>(), f43.squares());
    }

    #[test]
    fn prime_field_rejects() {
        for p in [0, 1, 2, 9, 65537 + 2] {
            assert_eq!(GfpField::new(p), Err(FieldError::NotOddPrime(p)));
        }
        let f = GfpField::new(43).unwrap();
        assert_eq!(f.inv(0), None);
        assert_eq!(f.mul(f.inv(5).unwrap(), 5), 1);
        assert_eq!(f.sub(3, 5), 41);
        assert_eq!(f.neg(0), 0);
    }
}

//! Embedded base-block tables, checked against frozen SHA-256 digests so a
//! damaged asset fails loudly instead of producing a wrong design.

use sha2::{Digest, Sha256};

use super::CatalogError;

struct Asset {
    name: &'static str,
    text: &'static str,
    sha256: &'static str,
}

const ASSETS: &[Asset] = &[
    Asset {
        name: "sqs10",
        text: include_str!("../../data/sqs10.txt"),
        sha256: "a4d6b41d5c711a28621ed81b752113b95a0eed2d41813cca201d54cb044cd66d",
    },
    Asset {
        name: "sqs14",
        text: include_str!("../../data/sqs14.txt"),
        sha256: "7678c43018f20fbc78d487802ba3fcb05449eddc943d63286bb6f709459935d5",
    },
    Asset {
        name: "sqs44",
        text: include_str!("../../data/sqs44.txt"),
        sha256: "6407ec9eb31adc9035b112732cbb67092565453448d1d9db4510b7dd3c6ebeea",
    },
    Asset {
        name: "sqs50",
        text: include_str!("../../data/sqs50.txt"),
        sha256: "454c57659afa2b98f84caf245171628a479910a4e75dc6b23fd3efa5a0249de6",
    },
    Asset {
        name: "sqs8-contiguous",
        text: include_str!("../../data/sqs8-contiguous.layout"),
        sha256: "7a6b5d582e823493c617bb1605bc4039955c75fd96da06bae393835255c6fa64",
    },
    Asset {
        name: "sqs8-baseline",
        text: include_str!("../../data/sqs8-baseline.layout"),
        sha256: "bceb7e7a43153d3e3dd8f2ca069178db644063ba015250f076cdb7299b440bd0",
    },
];

pub(crate) fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Text of a named asset after its digest has been checked.
pub fn asset(name: &str) -> Result<&'static str, CatalogError> {
    let a = ASSETS
        .iter()
        .find(|a| a.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let digest = sha256_hex(a.text);
    if digest != a.sha256 {
        return Err(CatalogError::AssetDigest { name: a.name, expected: a.sha256, found: digest });
    }
    Ok(a.text)
}

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

//! `nsqs`: build, verify and export nested Steiner quadruple systems.
//!
//! Exit status is 0 on success, 1 when a `--expect-*` check fails, 2 on bad
//! input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nested_sqs::catalog::{self, Existence};
use nested_sqs::fr::{self, FrCode, RepairPlan};
use nested_sqs::{
    nested_boolean_sqs, nested_orbit, parse_nsqs, to_rotational, verify, write_nsqs, Gf2mField, NestedDesign,
    UniformityClass, VerificationReport,
};

#[derive(Parser)]
#[command(name = "nsqs", version, about = "Nested Steiner quadruple systems and FR codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print the run manifest as JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a nested design and write it as .nsqs.
    Construct(ConstructArgs),
    /// Verify a .nsqs file and classify its pair multiplicities.
    Verify(VerifyArgs),
    /// Lay out a completely uniform nested design as an FR code.
    ExportFr(ExportArgs),
    /// Plan single-node repairs on an FR layout.
    Simulate(SimulateArgs),
    /// Known completely uniform nested SQS orders.
    Registry(RegistryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Field,
    Rotational,
}

#[derive(Args)]
struct ConstructArgs {
    /// boolean, orbit, catalog, or catalog:<name>.
    #[arg(long)]
    kind: String,
    /// Field degree for boolean and orbit.
    #[arg(long)]
    m: Option<u32>,
    /// Exponent of the orbit base block {0, 1 | a^j, a^j + 1}.
    #[arg(long, default_value_t = 1)]
    j: u32,
    /// Catalog entry: sqs8, sqs10, sqs14, sqs16, sqs44, sqs50.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_enum, default_value = "field")]
    form: Form,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    expect_class: Option<UniformityClass>,
    #[arg(long)]
    expect_mu: Option<u32>,
    /// Expected λ of the underlying 2-design.
    #[arg(long)]
    expect_lambda: Option<u32>,
    /// Require the underlying blocks to form an SQS.
    #[arg(long)]
    expect_sqs: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    /// Layout file, or builtin:sqs8-contiguous / builtin:sqs8-baseline.
    #[arg(long)]
    layout: PathBuf,
    /// 1-based node id, or `all`.
    #[arg(long)]
    fail: String,
    /// Write the repair report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RegistryArgs {
    /// Look up one order instead of listing the table.
    #[arg(long)]
    v: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    outputs: Vec<String>,
    verification_summary: Value,
}

/// A finished run: its manifest, the text summary, and any `--expect-*`
/// checks that did not hold.
struct Run {
    manifest: RunManifest,
    human: String,
    failed: Vec<String>,
}

/// Bad input; the run produced nothing.
struct InputError(String);

type Outcome = Result<Run, InputError>;

fn input_err(e: impl ToString) -> InputError {
    InputError(e.to_string())
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn summary(r: &VerificationReport) -> Value {
    json!({
        "v": r.v,
        "blocks": r.block_count,
        "sqs": r.is_sqs(),
        "t3": { "pass": r.t_design.pass, "lambda": r.t_design.lambda },
        "t2": { "pass": r.pair_design.pass, "lambda": r.pair_design.lambda },
        "class": r.class,
        "mu": r.mu,
        "histogram": r.histogram,
        "pairs_missing": r.pairs_missing,
    })
}

fn summary_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "v = {}, {} nested blocks", r.v, r.block_count);
    let t3 = &r.t_design;
    let _ = writeln!(s, "3-design: {} (lambda {})", if t3.pass { "pass" } else { "FAIL" }, t3.lambda);
    for (subset, count) in &t3.violations {
        let _ = writeln!(s, "  triple {subset:?} lies in {count} blocks");
    }
    let t2 = &r.pair_design;
    let _ = writeln!(s, "2-design: {} (lambda {})", if t2.pass { "pass" } else { "FAIL" }, t2.lambda);
    let hist: Vec<String> = r.histogram.iter().map(|(mu, n)| format!("{mu}: {n}")).collect();
    let _ = writeln!(s, "class: {}", r.class);
    let _ = writeln!(s, "pair multiplicities: {{{}}}, missing {}", hist.join(", "), r.pairs_missing);
    if let Some(mu) = r.mu {
        let _ = writeln!(s, "mu = {mu}");
    }
    s
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn construct(a: &ConstructArgs) -> Outcome {
    let (kind, name) = match a.kind.split_once(':') {
        Some(("catalog", n)) => ("catalog", Some(n.to_string())),
        _ => (a.kind.as_str(), a.name.clone()),
    };
    let field = |m: Option<u32>| -> Result<Gf2mField, InputError> {
        let m = m.ok_or_else(|| input_err(format!("--kind {kind} needs --m")))?;
        if m < 3 {
            return Err(input_err(format!("m = {m} is out of range (3..=16)")));
        }
        Gf2mField::new(m).map_err(input_err)
    };
    let mut p = vec![("kind", kind.to_string())];
    let design: NestedDesign = match kind {
        "boolean" | "orbit" => {
            let f = field(a.m)?;
            p.push(("m", f.m().to_string()));
            let d = if kind == "boolean" {
                nested_boolean_sqs(&f).map_err(input_err)?
            } else {
                p.push(("j", a.j.to_string()));
                nested_orbit(&f, a.j).map_err(input_err)?.into_design(&f)
            };
            match a.form {
                Form::Field => {
                    p.push(("form", "field".into()));
                    d
                }
                Form::Rotational => {
                    p.push(("form", "rotational".into()));
                    to_rotational(&f, &d).map_err(input_err)?
                }
            }
        }
        "catalog" => {
            let name = name.ok_or_else(|| input_err("--kind catalog needs --name"))?;
            if matches!(a.form, Form::Rotational) {
                return Err(input_err("--form applies to boolean and orbit designs only"));
            }
            p.push(("name", name.clone()));
            catalog::by_name(&name).map_err(input_err)?
        }
        other => return Err(input_err(format!("unknown kind {other:?} (boolean, orbit, catalog)"))),
    };
    let text = write_nsqs(&design);
    write(&a.out, &text)?;
    // summarize what was written, not the in-memory design
    let reread = parse_nsqs(&read(&a.out)?).map_err(input_err)?;
    let report = verify(&reread).map_err(input_err)?;
    p.push(("out", a.out.display().to_string()));
    let human = format!("wrote {}\n{}", a.out.display(), summary_text(&report));
    let manifest = RunManifest {
        command: "construct".into(),
        parameters: params(&p),
        outputs: vec![a.out.display().to_string()],
        verification_summary: summary(&report),
    };
    Ok(Run { manifest, human, failed: vec![] })
}

fn verify_cmd(a: &VerifyArgs) -> Outcome {
    let d = parse_nsqs(&read(&a.input)?).map_err(|e| input_err(format!("{}: {e}", a.input.display())))?;
    let report = verify(&d).map_err(input_err)?;
    let mut p = vec![("in", a.input.display().to_string())];
    let mut failed = Vec::new();
    if let Some(c) = a.expect_class {
        p.push(("expect-class", c.to_string()));
        if report.class != c {
            failed.push(format!("class is {}, expected {c}", report.class));
        }
    }
    if let Some(mu) = a.expect_mu {
        p.push(("expect-mu", mu.to_string()));
        if report.mu != Some(mu) {
            failed.push(format!("mu is {:?}, expected {mu}", report.mu));
        }
    }
    if let Some(l) = a.expect_lambda {
        p.push(("expect-lambda", l.to_string()));
        if !(report.pair_design.pass && report.pair_design.lambda == l) {
            failed.push(format!("not a 2-design with lambda {l}"));
        }
    }
    if a.expect_sqs {
        p.push(("expect-sqs", "true".into()));
        if !report.is_sqs() {
            failed.push("underlying blocks are not an SQS".into());
        }
    }
    let manifest = RunManifest {
        command: "verify".into(),
        parameters: params(&p),
        outputs: vec![],
        verification_summary: summary(&report),
    };
    Ok(Run { manifest, human: summary_text(&report), failed })
}

fn export_fr(a: &ExportArgs) -> Outcome {
    let d = parse_nsqs(&read(&a.input)?).map_err(|e| input_err(format!("{}: {e}", a.input.display())))?;
    let code = fr::to_fr_code(&d).map_err(|e| {
        let c = d.classify();
        let hist: Vec<String> = c.histogram.iter().map(|(mu, n)| format!("{mu}: {n}")).collect();
        input_err(format!("{e}\nclassification: {}, multiplicities {{{}}}", c.class, hist.join(", ")))
    })?;
    write(&a.out, &fr::write_layout(&code))?;
    let z = fr::verify_zero_skip(&code);
    let (b, k, r) = code.params();
    let human = format!(
        "wrote {}\n({b},{k},{r}) FR code on {} packets\nzero-skip repair: {} (max skip {}, locality {})\n",
        a.out.display(),
        code.v(),
        if z.pass { "pass" } else { "FAIL" },
        z.max_skip,
        z.max_locality
    );
    let manifest = RunManifest {
        command: "export-fr".into(),
        parameters: params(&[("in", a.input.display().to_string()), ("out", a.out.display().to_string())]),
        outputs: vec![a.out.display().to_string()],
        verification_summary: json!({
            "b": b, "k": k, "r": r, "v": code.v(),
            "zero_skip": z.pass, "max_skip": z.max_skip, "max_locality": z.max_locality,
        }),
    };
    Ok(Run { manifest, human, failed: vec![] })
}

fn plan_text(p: &RepairPlan, code: &FrCode) -> String {
    let reads: Vec<String> = p
        .helpers
        .iter()
        .map(|h| {
            let pk: Vec<String> = h.packets.iter().map(u32::to_string).collect();
            let pos: Vec<String> = h.positions.iter().map(usize::to_string).collect();
            format!("node {} reads {{{}}} at [{}] skip {}", h.node, pk.join(","), pos.join(","), h.skip)
        })
        .collect();
    let node: Vec<String> = code.node(p.failed).map(|n| n.map(|x| x.to_string()).to_vec()).unwrap_or_default();
    format!("fail {} ({}): {}; total skip {}", p.failed, node.join(","), reads.join("; "), p.total_skip)
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let code = match a.layout.to_str() {
        Some("builtin:sqs8-contiguous") => fr::contiguous_sqs8_layout().map_err(input_err)?,
        Some("builtin:sqs8-baseline") => fr::baseline_sqs8_layout().map_err(input_err)?,
        _ => fr::parse_layout(&read(&a.layout)?).map_err(|e| input_err(format!("{}: {e}", a.layout.display())))?,
    };
    let plans = if a.fail == "all" {
        fr::plan_all(&code).map_err(input_err)?
    } else {
        let id: usize = a.fail.parse().map_err(|_| input_err(format!("--fail takes a node id or `all`, got {:?}", a.fail)))?;
        vec![fr::plan_repair(&code, id).map_err(input_err)?]
    };
    let max_skip = plans.iter().map(|p| p.total_skip).max().unwrap_or(0);
    let total_skip: usize = plans.iter().map(|p| p.total_skip).sum();
    let max_locality = plans.iter().map(RepairPlan::locality).max().unwrap_or(0);
    let report = json!({
        "b": code.b(), "k": code.k(), "r": code.r(),
        "plans": plans,
        "total_skip": total_skip, "max_skip": max_skip, "max_locality": max_locality,
    });
    let mut outputs = vec![];
    let mut p = vec![("layout", a.layout.display().to_string()), ("fail", a.fail.clone())];
    if let Some(out) = &a.out {
        let mut text = serde_json::to_string_pretty(&report).expect("plain data");
        text.push('\n');
        write(out, &text)?;
        outputs.push(out.display().to_string());
        p.push(("out", out.display().to_string()));
    }
    let mut human: String = plans.iter().map(|pl| plan_text(pl, &code) + "\n").collect();
    let _ = writeln!(human, "{} repairs, max skip {max_skip}, total skip {total_skip}", plans.len());
    let manifest = RunManifest {
        command: "simulate".into(),
        parameters: params(&p),
        outputs,
        verification_summary: json!({
            "repairs": plans.len(), "total_skip": total_skip, "max_skip": max_skip, "max_locality": max_locality,
            "helpers": plans.iter().map(|p| p.helpers.iter().map(|h| h.node).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    };
    Ok(Run { manifest, human, failed: vec![] })
}

fn registry(a: &RegistryArgs) -> Outcome {
    let rows = match a.v {
        Some(v) => vec![catalog::lookup(v)],
        None => catalog::registry(),
    };
    let mut human = String::new();
    for r in &rows {
        let status = match r.status {
            Existence::Constructible => "constructible",
            Existence::External => "external",
            Existence::Unresolved => "unresolved",
            Existence::Impossible => "impossible",
        };
        let _ = write!(human, "{:>4}  {:<13}  {}", r.v, status, r.remark);
        if let Some(t) = &r.target {
            let _ = write!(human, "  [nsqs construct --kind {t}]");
        }
        human.push('\n');
    }
    let p = a.v.map(|v| vec![("v", v.to_string())]).unwrap_or_default();
    let manifest = RunManifest {
        command: "registry".into(),
        parameters: params(&p),
        outputs: vec![],
        verification_summary: json!({ "rows": rows }),
    };
    Ok(Run { manifest, human, failed: vec![] })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, json_out) = match &cli.command {
        Command::Construct(a) => (construct(a), a.common.json),
        Command::Verify(a) => (verify_cmd(a), a.common.json),
        Command::ExportFr(a) => (export_fr(a), a.common.json),
        Command::Simulate(a) => (simulate(a), a.common.json),
        Command::Registry(a) => (registry(a), a.common.json),
    };
    match outcome {
        Ok(run) => {
            if json_out {
                println!("{}", serde_json::to_string_pretty(&run.manifest).expect("plain data"));
            } else {
                print!("{}", run.human);
            }
            for msg in &run.failed {
                eprintln!("expectation failed: {msg}");
            }
            if run.failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

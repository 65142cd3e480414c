use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use qreuse::causal::{compute_cones, restrict_to_outputs};
use qreuse::circuit::ensure_valid;
use qreuse::gates::GateSource;
use qreuse::generators::{qaoa_u3r, Family};
use qreuse::io::{emit_json, import_qasm2_subset, parse_json};
use qreuse::order::{compile_order, Strategy};
use qreuse::rewrite::{AllocationPolicy, RewriteOptions};
use qreuse::sim::{exact_distribution, verify_circuits, BitOrder, DEFAULT_MAX_QUBITS};
use qreuse::{compile as compile_circuit, Circuit, CompileOptions, QubitId};

/// Metadata key for the hex SHA-256 of the compiled source file.
pub const SOURCE_SHA256_KEY: &str = "source_sha256";
/// Metadata key for the order strategy used.
pub const STRATEGY_KEY: &str = "strategy";

pub const DEFAULT_TIME_LIMIT_SECS: f64 = 600.0;

/// Reads a circuit as OpenQASM (`.qasm`) or the native JSON format, and
/// returns it with the raw file bytes.
pub fn read_circuit(path: &Path) -> Result<(Circuit, Vec<u8>)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let circuit = if path.extension().is_some_and(|e| e == "qasm") {
        import_qasm2_subset(&text)
    } else {
        parse_json(&text)
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    ensure_valid(&circuit).with_context(|| format!("validating {}", path.display()))?;
    Ok((circuit, bytes))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn time_limit(secs: f64) -> Result<Duration> {
    if !(secs > 0.0 && secs.is_finite()) {
        bail!("--time-limit must be a positive number of seconds");
    }
    Ok(Duration::from_secs_f64(secs))
}

fn parse_outputs(text: &str) -> Result<Vec<QubitId>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .trim_start_matches('q')
                .parse()
                .map(QubitId)
                .with_context(|| format!("bad output qubit {s:?}"))
        })
        .collect()
}

#[derive(Args)]
pub struct CompileArgs {
    /// Input circuit (`.qrc.json` or `.qasm`).
    pub input: PathBuf,
    /// Where to write the compiled circuit.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Order search: greedy, greedy-brute, exact or brute-force.
    #[arg(long, default_value = "greedy-brute")]
    pub strategy: Strategy,
    /// Also search the dual circuit and keep it when narrower.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub dual: bool,
    /// Use fresh wires until this many are in use before reusing.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Fail if the budget is below the achievable width.
    #[arg(long, requires = "budget")]
    pub strict_budget: bool,
    /// Time limit in seconds for the exact search.
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT_SECS)]
    pub time_limit: f64,
    /// Keep only these outputs (comma-separated qubit indices).
    #[arg(long)]
    pub outputs: Option<String>,
    /// Reset every wire after its final measurement.
    #[arg(long)]
    pub final_resets: bool,
}

#[derive(Serialize)]
struct CompileReport {
    input: String,
    output: String,
    original_width: usize,
    compiled_width: usize,
    strategy: String,
    via_dual: bool,
    optimal: bool,
    reuses: usize,
    elapsed_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

pub fn compile(args: CompileArgs) -> Result<u8> {
    let (mut circuit, bytes) = read_circuit(&args.input)?;
    if let Some(text) = &args.outputs {
        circuit = restrict_to_outputs(&circuit, &parse_outputs(text)?)?;
    }
    let options = CompileOptions {
        strategy: args.strategy,
        use_dual: args.dual,
        policy: args.budget.map_or(AllocationPolicy::ReuseFirst, AllocationPolicy::NewFirstUntil),
        rewrite: RewriteOptions {
            strict_budget: args.strict_budget,
            final_resets: args.final_resets,
        },
        time_limit: Some(time_limit(args.time_limit)?),
    };
    let result = compile_circuit(&circuit, &options)?;
    let mut out = result.compiled.circuit;
    out.metadata
        .insert(SOURCE_SHA256_KEY.into(), hex::encode(Sha256::digest(&bytes)));
    out.metadata.insert(STRATEGY_KEY.into(), args.strategy.to_string());
    fs::write(&args.output, emit_json(&out)?).with_context(|| format!("writing {}", args.output.display()))?;

    let original_width = circuit.num_qubits();
    let compiled_width = result.compiled.physical_width;
    let report = CompileReport {
        input: args.input.display().to_string(),
        output: args.output.display().to_string(),
        original_width,
        compiled_width,
        strategy: args.strategy.to_string(),
        via_dual: result.order.via_dual,
        optimal: result.order.optimal,
        reuses: out.count_kind("reset"),
        elapsed_s: result.order.elapsed.as_secs_f64(),
        note: (compiled_width >= original_width).then_some("no compression possible"),
    };
    eprintln!(
        "{}: {original_width} -> {compiled_width} qubits ({}{}, {:.3} s)",
        args.input.display(),
        args.strategy,
        if result.order.via_dual { ", via dual" } else { "" },
        report.elapsed_s
    );
    print_json(&report)?;
    Ok(0)
}

#[derive(Args)]
pub struct VerifyArgs {
    pub original: PathBuf,
    pub compiled: PathBuf,
    /// Largest total variation distance that counts as equivalent.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    pass: bool,
    tvd: f64,
    tol: f64,
    original_support: usize,
    compiled_support: usize,
}

pub fn verify(args: VerifyArgs) -> Result<u8> {
    let (original, _) = read_circuit(&args.original)?;
    let (compiled, _) = read_circuit(&args.compiled)?;
    let r = verify_circuits(&original, &compiled, args.tol, args.max_qubits)?;
    eprintln!("{} (tvd {:.3e})", if r.pass { "equivalent" } else { "NOT equivalent" }, r.tvd);
    print_json(&VerifyReport {
        pass: r.pass,
        tvd: r.tvd,
        tol: args.tol,
        original_support: r.original_support,
        compiled_support: r.compiled_support,
    })?;
    Ok(if r.pass { 0 } else { 1 })
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Brick1d,
    Brick2d,
    Mps,
    Ttn,
    Mera,
    Qcnn,
    Bv,
    Qaoa,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub family: FamilyName,
    /// Qubit count (brick1d, mps, qaoa).
    #[arg(long)]
    pub n: Option<usize>,
    /// Brickwork layers.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Periodic boundaries for brickwork.
    #[arg(long)]
    pub periodic: bool,
    /// MPS bond dimension (a power of two).
    #[arg(long)]
    pub chi: Option<usize>,
    /// Tree or MERA depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Bernstein-Vazirani secret bitstring.
    #[arg(long)]
    pub secret: Option<String>,
    /// QAOA rounds.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Seed for the QAOA graph.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw two-qubit gates Haar-randomly from this seed instead of using
    /// fixed named gates.
    #[arg(long)]
    pub haar_seed: Option<u64>,
    /// Output path; stdout if omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// For qaoa, also write the graph as an edge list.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("this family needs --{flag}"))
}

impl GenerateArgs {
    fn family(&self) -> Result<Family> {
        Ok(match self.family {
            FamilyName::Brick1d => Family::Brick1d {
                n: need(self.n, "n")?,
                k: need(self.k, "k")?,
                periodic: self.periodic,
            },
            FamilyName::Brick2d => Family::Brick2d {
                nx: need(self.nx, "nx")?,
                ny: need(self.ny, "ny")?,
                k: need(self.k, "k")?,
                periodic: self.periodic,
            },
            FamilyName::Mps => Family::Mps {
                n: need(self.n, "n")?,
                chi: need(self.chi, "chi")?,
            },
            FamilyName::Ttn => Family::Ttn { depth: need(self.depth, "depth")? },
            FamilyName::Mera => Family::Mera { depth: need(self.depth, "depth")? },
            FamilyName::Qcnn => Family::Qcnn { depth: need(self.depth, "depth")? },
            FamilyName::Bv => Family::Bv {
                secret: self.secret.clone().context("this family needs --secret")?,
            },
            FamilyName::Qaoa => Family::Qaoa {
                n: need(self.n, "n")?,
                p: self.p,
                seed: self.seed,
            },
        })
    }
}

pub fn generate(args: GenerateArgs) -> Result<u8> {
    let family = args.family()?;
    let source = args
        .haar_seed
        .map_or(GateSource::NamedFixed, |seed| GateSource::SeededHaarRandom { seed });
    let circuit = family.generate(source)?;
    if let Some(path) = &args.graph_out {
        let Family::Qaoa { n, p, seed } = family else {
            bail!("--graph-out only applies to the qaoa family");
        };
        let (graph, _) = qaoa_u3r(n, p, seed)?;
        fs::write(path, graph.to_edge_list()).with_context(|| format!("writing {}", path.display()))?;
    }
    write_text(args.output.as_deref(), &emit_json(&circuit)?)?;
    match family.predicted_width() {
        Ok(w) => eprintln!("{}: {} qubits, predicted compiled width {w}", family.name(), circuit.num_qubits()),
        Err(_) => eprintln!("{}: {} qubits", family.name(), circuit.num_qubits()),
    }
    Ok(0)
}

#[derive(Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    /// Also run the exact search.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT_SECS)]
    pub time_limit: f64,
}

#[derive(Serialize)]
struct ConeStats {
    min: usize,
    max: usize,
    mean: f64,
}

#[derive(Serialize)]
struct WidthEntry {
    strategy: String,
    dual: bool,
    width: usize,
    via_dual: bool,
    optimal: bool,
    elapsed_s: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    num_qubits: usize,
    num_outputs: usize,
    num_gates: usize,
    cone_size: ConeStats,
    widths: Vec<WidthEntry>,
}

pub fn analyze(args: AnalyzeArgs) -> Result<u8> {
    let (circuit, _) = read_circuit(&args.input)?;
    let cones = compute_cones(&circuit)?;
    let sizes: Vec<usize> = cones.cones().iter().map(|c| c.size()).collect();
    let cone_size = ConeStats {
        min: sizes.iter().copied().min().unwrap_or(0),
        max: sizes.iter().copied().max().unwrap_or(0),
        mean: sizes.iter().sum::<usize>() as f64 / sizes.len().max(1) as f64,
    };
    let mut strategies = vec![Strategy::Greedy, Strategy::GreedyBruteFirst];
    if args.exact {
        strategies.push(Strategy::Exact);
    }
    let limit = time_limit(args.time_limit)?;
    let mut widths = Vec::new();
    for strategy in strategies {
        for dual in [false, true] {
            let r = compile_order(&circuit, strategy, dual, Some(limit))?;
            widths.push(WidthEntry {
                strategy: strategy.to_string(),
                dual,
                width: r.width(),
                via_dual: r.via_dual,
                optimal: r.optimal,
                elapsed_s: r.elapsed.as_secs_f64(),
            });
        }
    }
    let best = widths.iter().map(|w| w.width).min().unwrap_or(0);
    eprintln!("{} qubits, best width found {best}", circuit.num_qubits());
    print_json(&AnalyzeReport {
        num_qubits: circuit.num_qubits(),
        num_outputs: cones.num_outputs(),
        num_gates: circuit.gate_count(),
        cone_size,
        widths,
    })?;
    Ok(0)
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BitOrderArg {
    /// Clbit 0 is the leftmost character.
    Clbit0Left,
    /// Clbit 0 is the rightmost character.
    Clbit0Right,
}

#[derive(Args)]
pub struct SimulateArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "clbit0-left")]
    pub bit_order: BitOrderArg,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
}

pub fn simulate(args: SimulateArgs) -> Result<u8> {
    let (circuit, _) = read_circuit(&args.input)?;
    let dist = exact_distribution(&circuit, args.max_qubits)?;
    let order = match args.bit_order {
        BitOrderArg::Clbit0Left => BitOrder::ClbitZeroLeft,
        BitOrderArg::Clbit0Right => BitOrder::ClbitZeroRight,
    };
    eprintln!("{} outcomes with nonzero probability", dist.support_size());
    print_json(&dist.to_bitstring_map(order))?;
    Ok(0)
}

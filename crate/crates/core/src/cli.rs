//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache::{cache_path, load_or_compute, CacheStatus};
use crate::divided::{is_a_annihilated, pairing, DividedPoly};
use crate::error::{Error, Result};
use crate::hit::HitBasis;
use crate::invariants::{analyze, format_weight, InvariantAnalysis};
use crate::lambda::{adem_reduce, differential, is_cocycle, Convention, LambdaPoly};
use crate::poly::{Monomial, Poly2};
use crate::preimage::{find_preimages_with, Event, Outcome, PreimageProblem, Strategy, DEFAULT_KERNEL_CAP};
use crate::sum::format_tuple;
use crate::transfer::{Transfer, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cohit", version, about = "Singer transfer preimages and GL_k-invariants of the cohit module over GF(2)")]
pub struct Cli {
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Suppress progress and warnings on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Summary,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Admissible monomial basis of (Q P_k)_d.
    Basis(BasisArgs),
    /// Σ_k- and GL_k-invariants of (Q P_k)_d.
    Invariants(InvariantsArgs),
    /// Search for x, z with φ_k(x) + δ(z) = y.
    Preimage(PreimageArgs),
    /// Apply the chain-level transfer to a divided power polynomial.
    Transfer(TransferArgs),
    /// Lambda algebra utilities.
    #[command(subcommand)]
    Lambda(LambdaCommand),
    /// Pairing of a divided power polynomial with a polynomial.
    Pair(PairArgs),
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: u32,
    /// Directory for cached bases.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_enum, default_value_t = Report::Summary)]
    pub report: Report,
}

#[derive(Args, Debug)]
pub struct PreimageArgs {
    #[arg(long)]
    pub k: usize,
    /// Target y as a sum of words, e.g. "3,3,2". A leading '@' reads a file.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum, default_value_t = Variant::ChonHa)]
    pub variant: Variant,
    #[arg(long, value_enum, default_value_t = Convention::Mirrored)]
    pub convention: Convention,
    #[arg(long, value_enum, default_value_t = Strategy::Ordered)]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 2)]
    pub max_z_terms: usize,
    #[arg(long, default_value_t = DEFAULT_KERNEL_CAP)]
    pub kernel_cap: u64,
    /// Report the first solution for every z instead of stopping at the first.
    #[arg(long)]
    pub all: bool,
    /// Allow λ_0 in z.
    #[arg(long)]
    pub widen_z: bool,
    /// Search even when δ(y) ≠ 0.
    #[arg(long)]
    pub allow_non_cocycle: bool,
}

#[derive(Args, Debug)]
pub struct TransferArgs {
    /// Expected number of variables.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Variant::ChonHa)]
    pub variant: Variant,
    /// Divided power polynomial, e.g. "3,3,2 + 3,4,1". A leading '@' reads a file.
    #[arg(long)]
    pub input: String,
}

#[derive(Subcommand, Debug)]
pub enum LambdaCommand {
    /// Adem normal form.
    Reduce {
        #[arg(long)]
        input: String,
    },
    /// Differential, reduced unless --raw.
    Diff {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Convention::Mirrored)]
        convention: Convention,
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// Divided power polynomial.
    #[arg(long)]
    pub x: String,
    /// Polynomial in x_1..x_k.
    #[arg(long)]
    pub f: String,
}

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?.split_whitespace().collect::<Vec<_>>().join(" ")),
        None => Ok(s.to_string()),
    }
}

/// Parses a sum whose terms all have the same arity, optionally a given one.
fn parse_uniform<T>(s: &str, arity: Option<usize>) -> Result<crate::sum::F2Sum<T>>
where
    T: Ord + Clone + crate::sum::Tuple,
{
    let p = crate::sum::F2Sum::<T>::parse(s, arity)?;
    if arity.is_none() {
        let mut lens = p.iter().map(|t| t.entries().len());
        if let Some(first) = lens.next() {
            if lens.any(|l| l != first) {
                return Err(Error::InvalidArgument("terms have different lengths".into()));
            }
        }
    }
    Ok(p)
}

fn arity<T: Ord + Clone + crate::sum::Tuple>(p: &crate::sum::F2Sum<T>) -> Option<usize> {
    p.iter().next().map(|t| t.entries().len())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::NotCocycle { .. } => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let quiet = cli.quiet;
    let mut warn = |msg: String| {
        if !quiet {
            let _ = writeln!(err, "{msg}");
        }
    };
    let result = match &cli.command {
        Command::Basis(a) => cmd_basis(a, cli.format, &mut warn),
        Command::Invariants(a) => cmd_invariants(a, cli.format, &mut warn),
        Command::Preimage(a) => cmd_preimage(a, cli.format, &mut warn),
        Command::Transfer(a) => cmd_transfer(a, cli.format),
        Command::Lambda(c) => cmd_lambda(c, cli.format),
        Command::Pair(a) => cmd_pair(a, cli.format),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

type Outcome2 = Result<(String, i32)>;

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_basis(s: &SpaceArgs, warn: &mut dyn FnMut(String)) -> Result<HitBasis> {
    if s.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let (basis, status) = load_or_compute(s.cache_dir.as_deref(), s.k, s.d, warn)?;
    match status {
        CacheStatus::Hit => warn(format!("loaded basis from {}", cache_path(s.cache_dir.as_deref().unwrap(), s.k, s.d).display())),
        CacheStatus::Stored => warn(format!("stored basis in {}", cache_path(s.cache_dir.as_deref().unwrap(), s.k, s.d).display())),
        CacheStatus::Disabled => {}
    }
    Ok(basis)
}

#[derive(Serialize)]
struct BasisJson {
    k: usize,
    d: u32,
    monomials: usize,
    dimension: usize,
    zero_count: usize,
    plus_count: usize,
    admissible: Vec<Vec<u32>>,
    zero: Vec<Vec<u32>>,
    plus: Vec<Vec<u32>>,
    cache_file: Option<String>,
}

fn cmd_basis(a: &BasisArgs, format: Format, warn: &mut dyn FnMut(String)) -> Outcome2 {
    let basis = load_basis(&a.space, warn)?;
    let (zero, plus) = basis.zero_plus_split();
    let cache_file = a.space.cache_dir.as_deref().map(|d| cache_path(d, basis.k, basis.d).display().to_string());
    let code = if basis.dim() == 0 { EXIT_EMPTY } else { EXIT_OK };
    let exps = |v: &[Monomial]| v.iter().map(|m| m.0.clone()).collect::<Vec<_>>();
    let text = match format {
        Format::Json => json(&BasisJson {
            k: basis.k,
            d: basis.d,
            monomials: basis.ordered.len(),
            dimension: basis.dim(),
            zero_count: zero.len(),
            plus_count: plus.len(),
            admissible: basis.admissible_monomials().map(|m| m.0.clone()).collect(),
            zero: exps(&zero),
            plus: exps(&plus),
            cache_file,
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "k = {}, d = {}: {} monomials", basis.k, basis.d, basis.ordered.len());
            let _ = writeln!(s, "dimension {} (zero part {}, plus part {})", basis.dim(), zero.len(), plus.len());
            if let Some(f) = cache_file {
                let _ = writeln!(s, "cache {f}");
            }
            for (j, m) in basis.admissible_monomials().enumerate() {
                let _ = writeln!(s, "{:>5}  {}  {}", j + 1, format_tuple(&m.0), m.to_x_string());
            }
            s
        }
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct StratumJson {
    weight: Vec<u32>,
    size: usize,
    components: Vec<usize>,
    sigma_dimension: usize,
    sigma_invariants: Vec<String>,
    glk_dimension: usize,
    glk_invariants: Vec<String>,
}

#[derive(Serialize)]
struct InvariantsJson {
    k: usize,
    d: u32,
    dimension_qp: usize,
    strata: Vec<StratumJson>,
    case: String,
    main_weight: Option<Vec<u32>>,
    h: Option<String>,
    h_prime: Option<String>,
    correction_system: Option<(usize, usize)>,
    global_sigma_basis: Vec<String>,
    equations: Vec<Vec<usize>>,
    dimension: usize,
    invariants: Vec<String>,
    warnings: Vec<String>,
}

fn invariants_json(a: &InvariantAnalysis, dim: usize) -> InvariantsJson {
    let c = &a.certificate;
    InvariantsJson {
        k: a.k,
        d: a.d,
        dimension_qp: dim,
        strata: a
            .strata
            .iter()
            .map(|s| StratumJson {
                weight: s.stratum.omega.clone(),
                size: s.stratum.members.len(),
                components: s.components.iter().map(|c| c.component.members.len()).collect(),
                sigma_dimension: s.sigma_invariants.len(),
                sigma_invariants: s.sigma_invariants.iter().map(|p| p.to_text()).collect(),
                glk_dimension: s.glk.invariants.len(),
                glk_invariants: s.glk.invariants.iter().map(|p| p.to_text()).collect(),
            })
            .collect(),
        case: c.case_tag.to_string(),
        main_weight: c.main_weight.clone(),
        h: c.h.as_ref().map(|p| p.to_text()),
        h_prime: c.h_prime.as_ref().map(|p| p.to_text()),
        correction_system: c.correction_shape,
        global_sigma_basis: c.global_sigma_basis.iter().map(|p| p.to_text()).collect(),
        equations: c.constraint_equations.clone(),
        dimension: c.invariant_basis.len(),
        invariants: c.invariant_basis.iter().map(|p| p.to_text()).collect(),
        warnings: c.warnings.clone(),
    }
}

fn x_poly(p: &Poly2) -> String {
    if p.is_zero() {
        "0".into()
    } else {
        p.iter().map(|m| m.to_x_string()).collect::<Vec<_>>().join(" + ")
    }
}

fn banner(s: &mut String, title: &str) {
    let rule = "=".repeat(72);
    let _ = writeln!(s, "\n{rule}\n{title}\n{rule}");
}

fn eq_text(eq: &[usize], var: &str) -> String {
    eq.iter().map(|i| format!("{var}_{i}")).collect::<Vec<_>>().join(" + ") + " = 0"
}

fn invariants_text(a: &InvariantAnalysis, basis: &HitBasis, full: bool) -> String {
    let mut s = String::new();
    let c = &a.certificate;
    let k = a.k;
    let _ = writeln!(s, "Invariants of (Q P_{k})_{} over GF(2)", a.d);
    let _ = writeln!(s, "dim (Q P_{k})_{} = {}", a.d, basis.dim());
    if full {
        banner(&mut s, "ADMISSIBLE BASIS");
        for (j, m) in basis.admissible_monomials().enumerate() {
            let _ = writeln!(s, "  a_{} = {}", j + 1, m.to_x_string());
        }
        banner(&mut s, "WEIGHT STRATA AND Σ-COMPONENTS");
        for st in &a.strata {
            let _ = writeln!(s, "weight {}: {} monomials", format_weight(&st.stratum.omega), st.stratum.members.len());
            for (ci, comp) in st.components.iter().enumerate() {
                let labels: Vec<String> = comp.component.members.iter().map(|m| (m + 1).to_string()).collect();
                let _ = writeln!(s, "  component {} ({} members): {}", ci + 1, labels.len(), labels.join(" "));
                let _ = writeln!(s, "    kernel dimension {}", comp.component.kernel.len());
                for (n, sel) in comp.selections.iter().enumerate() {
                    let _ = writeln!(s, "    solution {} ({} terms)", n + 1, sel.num_terms);
                }
            }
        }
    }
    banner(&mut s, "WEIGHT-WISE INVARIANT ANALYSIS");
    let mut label = 0;
    for st in &a.strata {
        let _ = writeln!(s, "\nweight {}", format_weight(&st.stratum.omega));
        let _ = writeln!(s, "  Σ_{k}-invariants: {}", st.sigma_invariants.len());
        for p in &st.sigma_invariants {
            label += 1;
            if full {
                let _ = writeln!(s, "    S_inv_{label} = {}", x_poly(p));
            } else {
                let _ = writeln!(s, "    S_inv_{label}: {} terms", p.len());
            }
        }
        let _ = writeln!(s, "  weight-wise GL_{k}-invariants: {}", st.glk.invariants.len());
        for (i, p) in st.glk.invariants.iter().enumerate() {
            let _ = writeln!(s, "    GL_inv_{} = {}", i + 1, x_poly(p));
        }
    }
    banner(&mut s, "CASE DETECTION");
    let _ = writeln!(s, "case {}", c.case_tag);
    if let Some(w) = &c.main_weight {
        let _ = writeln!(s, "main weight {}", format_weight(w));
    }
    if let (Some(h), Some(hp)) = (&c.h, &c.h_prime) {
        banner(&mut s, "CORRECTION");
        let _ = writeln!(s, "h = {}", x_poly(h));
        if let Some((r, n)) = c.correction_shape {
            let _ = writeln!(s, "system: {r} equations, {n} variables");
        }
        let _ = writeln!(s, "h' ({} terms) = {}", hp.len(), x_poly(hp));
    }
    for w in &c.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    banner(&mut s, &format!("GLOBAL Σ_{k}-INVARIANT BASIS"));
    let _ = writeln!(s, "dimension {}", c.global_sigma_basis.len());
    for (i, p) in c.global_sigma_basis.iter().enumerate() {
        let _ = writeln!(s, "  p_{i} ({} terms) = {}", p.len(), x_poly(p));
    }
    if !c.accepted.is_empty() || !c.rejected.is_empty() {
        let list = |v: &[usize]| v.iter().map(|l| format!("S_inv_{l}")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "accepted: {}", list(&c.accepted));
        if !c.rejected.is_empty() {
            let _ = writeln!(s, "rejected: {}", list(&c.rejected));
        }
    }
    banner(&mut s, &format!("GL_{k}-INVARIANT CONSTRAINTS"));
    for eq in &c.constraint_equations {
        let _ = writeln!(s, "  {}", eq_text(eq, "beta"));
    }
    for (n, v) in c.kernel.iter().enumerate() {
        let ones: Vec<String> = v.ones().map(|i| format!("beta_{i}")).collect();
        let _ = writeln!(s, "  solution {}: {} = 1, others 0", n + 1, ones.join(", "));
    }
    banner(&mut s, &format!("FINAL GL_{k}-INVARIANTS"));
    let _ = writeln!(s, "dim (Q P_{k})_{}^GL_{k} = {}", a.d, c.invariant_basis.len());
    for (i, g) in c.invariant_basis.iter().enumerate() {
        let _ = writeln!(s, "  invariant {} ({} terms) = {}", i + 1, g.len(), x_poly(g));
    }
    s
}

fn cmd_invariants(a: &InvariantsArgs, format: Format, warn: &mut dyn FnMut(String)) -> Outcome2 {
    let basis = load_basis(&a.space, warn)?;
    let analysis = analyze(&basis)?;
    for w in &analysis.certificate.warnings {
        warn(format!("warning: {w}"));
    }
    let code = if analysis.certificate.invariant_basis.is_empty() { EXIT_EMPTY } else { EXIT_OK };
    let text = match format {
        Format::Json => json(&invariants_json(&analysis, basis.dim())),
        Format::Text => invariants_text(&analysis, &basis, a.report == Report::Text),
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct PreimageJson {
    outcome: Outcome,
    candidates_checked: u64,
    z_candidates: u64,
    phi_rank: usize,
    kernel_dim: usize,
    solutions: Vec<crate::preimage::Certificate>,
}

fn cmd_preimage(a: &PreimageArgs, format: Format, warn: &mut dyn FnMut(String)) -> Outcome2 {
    let y = parse_uniform::<crate::lambda::Word>(&read_arg(&a.target)?, Some(a.k))?;
    let mut p = PreimageProblem::new(a.k, y)?;
    p.variant = a.variant;
    p.convention = a.convention;
    p.strategy = a.strategy;
    p.max_z_terms = a.max_z_terms;
    p.kernel_cap = a.kernel_cap;
    p.all = a.all;
    p.widen_z = a.widen_z;
    p.require_cocycle = !a.allow_non_cocycle;
    let report = find_preimages_with(&p, &mut |e| match e {
        Event::ZSize { n, combinations } => warn(format!("z with {n} terms: {combinations} candidates")),
        Event::Progress { checked } => warn(format!("checked {checked} candidates")),
        Event::Found { checked, z } => warn(format!("solution after {checked} candidates, z = {z}")),
    })?;
    let code = if report.outcome == Outcome::Found { EXIT_OK } else { EXIT_EMPTY };
    let text = match format {
        Format::Json => json(&PreimageJson {
            outcome: report.outcome,
            candidates_checked: report.candidates_checked,
            z_candidates: report.z_candidates,
            phi_rank: report.phi_rank,
            kernel_dim: report.kernel_dim,
            solutions: report.solutions.iter().map(|s| s.to_certificate(a.variant)).collect(),
        }),
        Format::Text => {
            let mut s = String::new();
            let outcome = match report.outcome {
                Outcome::Found => "found",
                Outcome::NoSolution => "no solution",
                Outcome::Truncated => "no solution within the kernel cap (truncated)",
            };
            let _ = writeln!(s, "outcome: {outcome}");
            let _ = writeln!(
                s,
                "candidates checked: {}, z candidates: {}, rank φ: {}, kernel dimension: {}",
                report.candidates_checked, report.z_candidates, report.phi_rank, report.kernel_dim
            );
            for (i, sol) in report.solutions.iter().enumerate() {
                let _ = writeln!(s, "\nsolution {}", i + 1);
                let _ = writeln!(s, "  z = {}", sol.z);
                let _ = writeln!(s, "  x ({} terms) = {}", sol.x.len(), sol.x);
                let _ = writeln!(s, "  reduced φ(x) + δ(z) = {}", sol.certificate);
            }
            s
        }
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct TransferJson {
    variant: Variant,
    annihilated: bool,
    unreduced: String,
    unreduced_terms: usize,
    reduced: String,
    reduced_terms: usize,
}

fn cmd_transfer(a: &TransferArgs, format: Format) -> Outcome2 {
    let x: DividedPoly = parse_uniform(&read_arg(&a.input)?, a.k)?;
    let k = arity(&x).unwrap_or(a.k.unwrap_or(0));
    if k == 0 {
        return Err(Error::InvalidArgument("input must have at least one variable".into()));
    }
    let raw = Transfer::new(a.variant).poly(&x);
    let reduced = adem_reduce(&raw);
    let annihilated = is_a_annihilated(&x);
    let code = if reduced.is_zero() { EXIT_EMPTY } else { EXIT_OK };
    let text = match format {
        Format::Json => json(&TransferJson {
            variant: a.variant,
            annihilated,
            unreduced: raw.to_text(),
            unreduced_terms: raw.len(),
            reduced: reduced.to_text(),
            reduced_terms: reduced.len(),
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "input: {} terms, annihilated: {}", x.len(), if annihilated { "yes" } else { "no" });
            let _ = writeln!(s, "Final unreduced result ({} terms): {raw}", raw.len());
            let _ = writeln!(s, "Final reduced result ({} terms): {reduced}", reduced.len());
            s
        }
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct LambdaJson {
    input: String,
    result: String,
    terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycle: Option<bool>,
}

fn cmd_lambda(c: &LambdaCommand, format: Format) -> Outcome2 {
    let (input, result, cocycle) = match c {
        LambdaCommand::Reduce { input } => {
            let p: LambdaPoly = parse_uniform(&read_arg(input)?, None)?;
            let r = adem_reduce(&p);
            (p, r, None)
        }
        LambdaCommand::Diff { input, convention, raw } => {
            let p: LambdaPoly = parse_uniform(&read_arg(input)?, None)?;
            let d = differential(&p, *convention);
            let r = if *raw { d } else { adem_reduce(&d) };
            let cyc = is_cocycle(&p, *convention);
            (p, r, Some(cyc))
        }
    };
    let text = match format {
        Format::Json => json(&LambdaJson { input: input.to_text(), terms: result.len(), result: result.to_text(), cocycle }),
        Format::Text => format!("{result}\n"),
    };
    Ok((text, EXIT_OK))
}

#[derive(Serialize)]
struct PairJson {
    pairing: u8,
    common_terms: Vec<String>,
}

fn cmd_pair(a: &PairArgs, format: Format) -> Outcome2 {
    let x: DividedPoly = parse_uniform(&read_arg(&a.x)?, None)?;
    let f: Poly2 = parse_uniform(&read_arg(&a.f)?, arity(&x))?;
    let bit = pairing(&x, &f);
    let common: Vec<String> = x.iter().filter(|m| f.contains(m)).map(|m| format_tuple(&m.0)).collect();
    let text = match format {
        Format::Json => json(&PairJson { pairing: bit as u8, common_terms: common }),
        Format::Text => format!("{}\n", bit as u8),
    };
    Ok((text, EXIT_OK))
}

/// Parses the process arguments, sizes the worker pool and runs.
pub fn main_with_args() -> i32 {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock())
}

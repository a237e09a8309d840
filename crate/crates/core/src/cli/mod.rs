//! Command line front end.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 a search stopped at
//! its budget (the output is still written, as a lower bound), 4 corpus
//! verification failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::johnson_bound;
use crate::corpus::{self, Filter, VerifyOptions};
use crate::diagrams::{DiagramView, FerrersDiagram, PivotVector};
use crate::ilpgen::{emit, IlpOptions, Variant};
use crate::search::{self, FrontRecord, Instance, ParetoFront, QMode, SolveReport, Stats};
use crate::spreads::{spread_clique, spread_polynomial, SpreadParams};
use crate::weights::{weight_histogram, LowerBoundEngine, LowerBoundWitness, Regime};
use crate::{check_params, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TRUNCATED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "cdc-bounds", version, about = "Bounds for constant dimension codes from weighted cliques of pivot vectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Upper,
    Lower,
    Spread,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Heaviest cliques for (n, d, k).
    Solve {
        n: u32,
        d: u32,
        k: u32,
        #[arg(long, value_enum, default_value = "upper")]
        regime: RegimeArg,
        /// all, Q, q>=Q or QMIN..QMAX
        #[arg(long, default_value = "all")]
        q: String,
        /// Clique size bound: a number, or `johnson` to compute one.
        #[arg(long)]
        ub: Option<String>,
        #[arg(long)]
        max_dive: Option<usize>,
        /// Field sizes up to this value get their own fixed-q run when splitting.
        #[arg(long, default_value_t = 4)]
        lambda: u64,
        /// Split into fixed-q runs even in the upper regime.
        #[arg(long)]
        split: bool,
        /// Wall clock budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Increasing ub values run first, each seeding the next.
        #[arg(long, value_delimiter = ',')]
        stages: Vec<usize>,
        /// JSON result of an earlier run whose cliques seed the search.
        #[arg(long)]
        seed_front: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Ferrers diagram of a pivot vector with its bounds.
    Diagram {
        /// Integer encoding or bit string.
        #[arg(long)]
        pivot: String,
        /// Vector length; taken from the bit string when omitted.
        #[arg(long)]
        n: Option<u32>,
        /// Rank distance.
        #[arg(long)]
        delta: Option<u32>,
        /// Smallest field size the lower bound must hold for.
        #[arg(long, default_value_t = 2)]
        q_floor: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Closed form for d = 2k.
    Spread {
        n: u32,
        k: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Write an integer programming model in LP format.
    Ilp {
        n: u32,
        d: u32,
        k: u32,
        /// edge, cover, weighted-fixed-q or counting
        #[arg(long, default_value = "edge")]
        variant: String,
        /// Emit pairwise constraints over compatible pairs, as literally written.
        #[arg(long)]
        literal: bool,
        #[arg(long)]
        q: Option<u64>,
        /// Counting objective as `i:c` pairs, e.g. `17:1,16:1`.
        #[arg(long, value_delimiter = ',')]
        objective: Vec<String>,
        /// Fixed counting variables as `i:value` pairs.
        #[arg(long, value_delimiter = ',')]
        fix: Vec<String>,
        #[arg(long)]
        ub: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive the tabulated results.
    #[command(alias = "verify-corpus")]
    Verify {
        /// 0 audits, 1 adds re-solves of small entries, 2 re-solves everything.
        #[arg(long, default_value_t = 0)]
        tier: u8,
        /// e.g. n=14,d=6,k=4,q=all
        #[arg(long, default_value = "")]
        filter: String,
        /// Per-instance re-solve budget in seconds.
        #[arg(long, default_value_t = 600.0)]
        budget: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Number of pivot vectors per weight exponent.
    Histogram {
        n: u32,
        d: u32,
        k: u32,
        #[arg(long, value_enum, default_value = "upper")]
        regime: RegimeArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => 1,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn emit_text(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::from(Error::Io(e))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::from(Error::Io(e))),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn parse_ub(arg: Option<&str>, n: u32, d: u32, k: u32) -> Result<usize, Failure> {
    match arg {
        Some("johnson") => Ok(johnson_bound(n, d, k) as usize),
        Some(s) => s.parse().map_err(|_| usage(format!("--ub expects a number or `johnson`, got {s:?}"))),
        None => corpus::load()?
            .ub(n, d, k)
            .ok_or_else(|| usage(format!("no tabulated clique size bound for ({n},{d},{k}); pass --ub N or --ub johnson"))),
    }
}

fn parse_pairs(items: &[String], what: &str) -> Result<std::collections::BTreeMap<u32, i64>, Failure> {
    let mut m = std::collections::BTreeMap::new();
    for it in items.iter().filter(|s| !s.is_empty()) {
        let (a, b) = it.split_once(':').ok_or_else(|| usage(format!("{what} expects i:value pairs, got {it:?}")))?;
        let i = a.trim().parse().map_err(|_| usage(format!("bad exponent in {it:?}")))?;
        let v = b.trim().parse().map_err(|_| usage(format!("bad value in {it:?}")))?;
        m.insert(i, v);
    }
    Ok(m)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Solve { n, d, k, regime, q, ub, max_dive, lambda, split, budget, stages, seed_front, out: path, format } => {
            check_params(n, d, k)?;
            let mode: QMode = q.parse()?;
            if let Some(b) = budget {
                if !(b > 0.0 && b.is_finite()) {
                    return Err(usage("--budget must be a positive number of seconds"));
                }
            }
            let report = if regime == RegimeArg::Spread {
                spread_report(n, d, k)?
            } else {
                let regime = if regime == RegimeArg::Lower { Regime::Lower } else { Regime::Upper };
                let ub = parse_ub(ub.as_deref(), n, d, k)?;
                let mut inst = Instance::new(n, d, k, regime, ub).with_mode(mode).with_max_dive(max_dive.unwrap_or(ub));
                inst.time_budget = budget.map(Duration::from_secs_f64);
                inst.validate()?;
                let seed = match &seed_front {
                    Some(p) => Some(seed_from_file(p, n, mode)?),
                    None => None,
                };
                let do_split = (split || regime == Regime::Lower) && mode != QMode::Fixed(mode.lowest_q());
                let (fronts, label) = if do_split {
                    let mut fronts = search::solve_split(&inst, lambda)?;
                    if let Some(s) = &seed {
                        // Re-run each part with the seed so that the seeding is not lost.
                        fronts = fronts
                            .iter()
                            .map(|f| search::staged_solve(&inst.clone().with_mode(f.mode), Some(s), &stages))
                            .collect::<crate::Result<_>>()?;
                    }
                    (fronts, format!("{mode} split at {lambda}"))
                } else if seed.is_some() || !stages.is_empty() {
                    (vec![search::staged_solve(&inst, seed.as_ref(), &stages)?], mode.to_string())
                } else {
                    (vec![search::solve(&inst)?], mode.to_string())
                };
                SolveReport::from_fronts(n, d, k, &regime.to_string(), &label, &fronts)
            };
            let text = match format {
                Format::Json => report.to_json()? + "\n",
                Format::Table => report.to_table(),
            };
            emit_text(&text, path.as_ref(), out)?;
            Ok(if report.incomplete { EXIT_TRUNCATED } else { EXIT_OK })
        }
        Command::Diagram { pivot, n, delta, q_floor, format } => {
            let v = parse_pivot(&pivot, n)?;
            let f = v.to_diagram();
            let view = DiagramReport::new(&v, &f, delta, q_floor);
            let text = match format {
                Format::Json => json(&view)?,
                Format::Table => view.to_table(),
            };
            emit_text(&text, None, out)?;
            Ok(EXIT_OK)
        }
        Command::Spread { n, k, format } => {
            let p = SpreadParams::new(n, k)?;
            let poly = spread_polynomial(p);
            let clique = spread_clique(p);
            let text = match format {
                Format::Json => json(&FrontRecord::new(n, &poly, &clique, "all".into(), "U"))?,
                Format::Table => format!(
                    "{}\nclique: {}\n",
                    poly.render(),
                    clique.iter().map(|v| v.bits().to_string()).collect::<Vec<_>>().join(",")
                ),
            };
            emit_text(&text, None, out)?;
            Ok(EXIT_OK)
        }
        Command::Ilp { n, d, k, variant, literal, q, objective, fix, ub, out: path } => {
            check_params(n, d, k)?;
            let mut variant: Variant = variant.parse()?;
            if literal {
                if variant != Variant::Edge {
                    return Err(usage("--literal only applies to the edge variant"));
                }
                variant = Variant::EdgeLiteral;
            }
            let a1 = if variant == Variant::Counting { Some(parse_ub(ub.as_deref(), n, d, k)? as u64) } else { None };
            let objective = parse_pairs(&objective, "--objective")?;
            let opts = IlpOptions {
                q,
                objective: if objective.is_empty() { None } else { Some(objective) },
                fixed: parse_pairs(&fix, "--fix")?,
                a1_bound: a1,
            };
            let model = emit(n, d, k, variant, &opts)?;
            emit_text(&model.to_lp(), path.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { tier, filter, budget, jobs, format } => {
            if tier > 2 {
                return Err(usage("--tier must be 0, 1 or 2"));
            }
            let filter: Filter = filter.parse()?;
            let opts = VerifyOptions { tier, filter, solve_budget: Some(Duration::from_secs_f64(budget.max(0.001))), jobs };
            let rep = corpus::verify(&corpus::load()?, &opts);
            let text = match format {
                Format::Json => json(&rep)?,
                Format::Table => rep.to_text(),
            };
            emit_text(&text, None, out)?;
            Ok(if rep.failed() > 0 { EXIT_VERIFY_FAILED } else { EXIT_OK })
        }
        Command::Histogram { n, d, k, regime, format } => {
            check_params(n, d, k)?;
            let regime = match regime {
                RegimeArg::Upper => Regime::Upper,
                RegimeArg::Lower => Regime::Lower,
                RegimeArg::Spread => return Err(usage("histogram supports the upper and lower regimes")),
            };
            let h = weight_histogram(n, d, k, regime);
            let text = match format {
                Format::Json => json(&h)?,
                Format::Table => h.iter().rev().map(|(e, c)| format!("m_{e}={c}\n")).collect(),
            };
            emit_text(&text, None, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn spread_report(n: u32, d: u32, k: u32) -> Result<SolveReport, Failure> {
    if d != 2 * k {
        return Err(usage(format!("the spread regime needs d = 2k, got d = {d}, k = {k}")));
    }
    let p = SpreadParams::new(n, k)?;
    let poly = spread_polynomial(p);
    let rec = FrontRecord::new(n, &poly, &spread_clique(p), "all".into(), "U");
    Ok(SolveReport {
        n,
        d,
        k,
        regime: "spread".into(),
        q_mode: "all".into(),
        fronts: vec![rec],
        stats: Stats::default(),
        incomplete: false,
    })
}

fn seed_from_file(path: &PathBuf, n: u32, mode: QMode) -> Result<ParetoFront, Failure> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let rep = SolveReport::from_json(&text)?;
    if rep.n != n {
        return Err(usage(format!("seed front is for n = {}, not {n}", rep.n)));
    }
    let mut u = Vec::new();
    for r in rep.fronts.iter().filter(|r| r.kind == "U") {
        let members = r.clique.iter().map(|&b| PivotVector::new(n, b)).collect::<crate::Result<Vec<_>>>()?;
        let weight: crate::QPolynomial = r.poly.parse()?;
        u.push(search::Clique { members, weight_hat: weight.clone(), weight });
    }
    Ok(ParetoFront { mode, u, u_hat: Vec::new(), stats: Stats::default(), incomplete: false })
}

fn parse_pivot(s: &str, n: Option<u32>) -> Result<PivotVector, Failure> {
    let s = s.trim();
    // A 0/1 string is read as bits when it has the stated length, or when no length is given.
    let is_bits = !s.is_empty() && s.chars().all(|c| c == '0' || c == '1') && n.map_or(true, |n| s.len() as u32 == n);
    if is_bits {
        return Ok(PivotVector::parse_bit_string(s)?);
    }
    let bits: u64 = s.parse().map_err(|_| usage(format!("--pivot expects an integer or a bit string, got {s:?}")))?;
    let n = n.ok_or_else(|| usage("--n is required with an integer pivot"))?;
    Ok(PivotVector::new(n, bits)?)
}

#[derive(Serialize)]
struct DiagramReport {
    pivot: u64,
    bits: String,
    n: u32,
    k: u32,
    rows: Vec<u32>,
    cols: Vec<u32>,
    dots: u32,
    bounds: Option<DiagramView>,
    witness: Option<LowerBoundWitness>,
}

fn innermost(w: &LowerBoundWitness) -> &LowerBoundWitness {
    match &w.construction {
        crate::weights::Construction::SubDiagram { inner } => innermost(inner),
        _ => w,
    }
}

impl DiagramReport {
    fn new(v: &PivotVector, f: &FerrersDiagram, delta: Option<u32>, q_floor: u64) -> Self {
        Self {
            pivot: v.bits(),
            bits: v.to_bit_string(),
            n: v.n(),
            k: v.weight(),
            rows: f.rows(),
            cols: f.cols().to_vec(),
            dots: f.dots(),
            bounds: delta.map(|d| DiagramView::new(f, d, Some(v))),
            witness: delta.map(|d| LowerBoundEngine::default().lower_bound(f, d, q_floor)),
        }
    }

    fn to_table(&self) -> String {
        let list = |xs: &[u32]| format!("[{}]", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let mut s = format!(
            "pivot: {} ({})\nn: {} k: {}\nrows: {}\ncols: {}\ndots: {}\n",
            self.pivot,
            self.bits,
            self.n,
            self.k,
            list(&self.rows),
            list(&self.cols),
            self.dots
        );
        if let Some(v) = &self.bounds {
            s.push_str(&format!("delta: {}\nnu: {}\nupper exponent: {}\n", v.delta, list(&v.nu), v.upper_exponent));
        }
        if let Some(w) = &self.witness {
            let inner = innermost(w);
            s.push_str(&format!(
                "lower dimension: {} via {}{} for q >= {}\n",
                w.dimension,
                inner.construction.tag(),
                if inner.transposed { " (transposed)" } else { "" },
                w.min_q
            ));
            let used = if inner.transposed { inner.diagram.transpose() } else { inner.diagram.clone() };
            if used.rows() != self.rows {
                s.push_str(&format!("sub-diagram rows: {}\n", list(&used.rows())));
            }
        }
        s
    }
}

/// Entry point used by the binary.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

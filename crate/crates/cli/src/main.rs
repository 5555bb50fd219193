use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zircon_core::corpus::Manifest;
use zircon_core::coxeter::{CoxeterSystem, CoxeterType, Side, DEFAULT_ORDER_CAP};
use zircon_core::matching::{special_violation, verify_lifting, LiftingViolation, MatchingJson, DEFAULT_MATCHING_CAP};
use zircon_core::poset::{are_isomorphic, MapJson, PosetJson};
use zircon_core::sweep::{self, run_sweep, SweepOptions};
use zircon_core::zircon::{fixed_point_matching, fixed_point_subposet, is_zircon, TripleReport};
use zircon_core::{Matching, MatchingError, Poset, PosetMap, ZirconError};

#[derive(Parser)]
#[command(name = "zircon", version, about = "Special matchings, zircons and fixed points of poset automorphisms")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Stop special-matching enumeration after this many matchings.
    #[arg(long, global = true, default_value_t = DEFAULT_MATCHING_CAP)]
    cap_matchings: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a matching (and optionally an automorphism) against a poset.
    Check {
        poset: PathBuf,
        matching: PathBuf,
        #[arg(long)]
        automorphism: Option<PathBuf>,
    },
    /// Run the invariant suite over a corpus manifest.
    Sweep {
        manifest: PathBuf,
        /// Include wall-clock duration in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Bruhat orders of finite Coxeter groups.
    Coxeter {
        /// Type such as A3, B3, D4 or I2:7.
        #[arg(value_name = "TYPE")]
        kind: String,
        action: CoxeterAction,
        /// Diagram automorphism: "id", "flip" or 1-based generator images like "3,2,1".
        #[arg(default_value = "id")]
        theta: String,
        /// Candidate type for fix-check.
        #[arg(long)]
        against: Option<String>,
        /// Output format for export.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Maximum group order.
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap_order: usize,
    },
    /// Render a poset as Graphviz DOT.
    Dot { poset: PathBuf },
    /// Möbius values of a poset: one pair, or all pairs x ≤ y.
    Mobius { poset: PathBuf, x: Option<String>, y: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoxeterAction {
    Export,
    ZirconCheck,
    Twisted,
    FixCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

/// Exit status of a successful run.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass = 0,
    Fail = 1,
    Panic = 3,
}

const INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Check { poset, matching, automorphism } => check(cli, poset, matching, automorphism.as_deref()),
        Command::Sweep { manifest, timing } => sweep_cmd(cli, manifest, *timing),
        Command::Coxeter { kind, action, theta, against, format, cap_order } => {
            coxeter(cli, kind, *action, theta, against.as_deref(), *format, *cap_order)
        }
        Command::Dot { poset } => {
            emit(cli, &load_poset(poset)?.to_dot())?;
            Ok(Status::Pass)
        }
        Command::Mobius { poset, x, y } => mobius(cli, poset, x.as_deref(), y.as_deref()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_poset(path: &Path) -> Result<Poset> {
    let json: PosetJson = read_json(path)?;
    Poset::from_json(&json).with_context(|| format!("invalid poset in {}", path.display()))
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(cli, &text)
}

fn pair(p: &Poset, (a, b): (usize, usize)) -> [String; 2] {
    [p.id(a).to_string(), p.id(b).to_string()]
}

#[derive(Serialize)]
struct CheckReport {
    is_matching: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    matching_error: Option<String>,
    special: bool,
    witness: Option<[String; 2]>,
    lifting: Option<LiftingViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed_point: Option<FixedPointReport>,
    pass: bool,
}

#[derive(Serialize)]
struct FixedPointReport {
    #[serde(flatten)]
    triple: Option<TripleReport>,
    /// M^φ on the fixed-point subposet.
    matching: Option<Vec<[String; 2]>>,
    error: Option<String>,
}

fn check(cli: &Cli, poset: &Path, matching: &Path, automorphism: Option<&Path>) -> Result<Status> {
    let p = load_poset(poset)?;
    let mj: MatchingJson = read_json(matching)?;
    let phi = match automorphism {
        Some(path) => {
            let json: MapJson = read_json(path)?;
            let f = PosetMap::from_json(&p, &json).with_context(|| format!("invalid map in {}", path.display()))?;
            if !zircon_core::poset::is_automorphism(&p, &f) {
                bail!("{} is not an automorphism of the poset", path.display());
            }
            Some(f)
        }
        None => None,
    };

    let mut report = CheckReport {
        is_matching: false,
        matching_error: None,
        special: false,
        witness: None,
        lifting: None,
        fixed_point: None,
        pass: false,
    };
    let m = match Matching::from_json(&p, &mj) {
        Ok(m) => m,
        Err(MatchingError::Poset(e)) => return Err(e).context("invalid matching"),
        Err(e) => {
            report.matching_error = Some(e.to_string());
            emit_json(cli, &report)?;
            return Ok(Status::Fail);
        }
    };
    report.is_matching = true;
    report.witness = special_violation(&p, &m).map(|v| pair(&p, v));
    report.special = report.witness.is_none();
    if report.special {
        report.lifting = verify_lifting(&p, &m)?;
        if let Some(phi) = &phi {
            report.fixed_point = Some(fixed_point_report(&p, &m, phi)?);
        }
    }
    report.pass = report.special
        && report.lifting.is_none()
        && report.fixed_point.as_ref().is_none_or(|f| f.error.is_none() && f.triple.as_ref().is_some_and(|t| t.special));
    emit_json(cli, &report)?;
    Ok(if report.pass { Status::Pass } else { Status::Fail })
}

fn fixed_point_report(p: &Poset, m: &Matching, phi: &PosetMap) -> Result<FixedPointReport> {
    match fixed_point_matching(p, m, phi) {
        Ok(r) => Ok(FixedPointReport {
            triple: Some(TripleReport::new(p, &r)),
            matching: Some(r.matching.to_json(&r.subposet).pairs),
            error: None,
        }),
        // Violated hypotheses are input errors; anything else is a failed check.
        Err(e @ (ZirconError::NotBounded | ZirconError::NoFixedPoints | ZirconError::Poset(_))) => Err(e.into()),
        Err(e) => Ok(FixedPointReport { triple: None, matching: None, error: Some(e.to_string()) }),
    }
}

fn sweep_cmd(cli: &Cli, manifest: &Path, timing: bool) -> Result<Status> {
    let config: Manifest = read_json(manifest)?;
    let corpus = config.corpus().context("building corpus")?;
    let random = matches!(config, Manifest::Random { .. });
    let opts = SweepOptions {
        cap_matchings: cli.cap_matchings,
        skip_identity: random,
        intervals: random,
        ..SweepOptions::default()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build()?;
    let start = Instant::now();
    let mut report = pool.install(|| run_sweep(&config, &corpus, &opts));
    if timing {
        report.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    emit_json(cli, &report)?;
    let s = &report.summary;
    eprintln!(
        "{} posets, {} cases, {} theorem triples, {} violations, {} panics",
        s.posets,
        s.cases,
        s.passed(sweep::THEOREM) + s.failed(sweep::THEOREM),
        s.violations,
        report.panics.len()
    );
    Ok(if !report.panics.is_empty() {
        Status::Panic
    } else if report.is_clean() {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn system(kind: &str, cap: usize) -> Result<CoxeterSystem> {
    let kind: CoxeterType = kind.parse()?;
    Ok(CoxeterSystem::with_cap(kind, cap)?)
}

#[derive(Serialize)]
struct ZirconCheckReport {
    r#type: String,
    elements: usize,
    zircon: bool,
    descent_matchings: usize,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct TwistedReport {
    r#type: String,
    theta: Vec<usize>,
    elements: usize,
    poset: PosetJson,
    equals_fixed_points: bool,
    zircon: bool,
    sphericity: String,
}

#[derive(Serialize)]
struct FixCheckReport {
    r#type: String,
    theta: Vec<usize>,
    elements: usize,
    against: String,
    against_elements: usize,
    isomorphic: bool,
    isomorphism: Option<MapJson>,
}

fn one_based(theta: &zircon_core::coxeter::DiagramAutomorphism) -> Vec<usize> {
    theta.generator_map().iter().map(|s| s + 1).collect()
}

fn coxeter(
    cli: &Cli,
    kind: &str,
    action: CoxeterAction,
    theta: &str,
    against: Option<&str>,
    format: Format,
    cap: usize,
) -> Result<Status> {
    let w = system(kind, cap)?;
    let name = w.kind().to_string();
    match action {
        CoxeterAction::Export => {
            let p = w.bruhat_poset();
            match format {
                Format::Json => emit_json(cli, &p.to_json())?,
                Format::Dot => emit(cli, &p.to_dot())?,
            }
            Ok(Status::Pass)
        }
        CoxeterAction::ZirconCheck => {
            let br = w.bruhat_poset();
            let mut failures = Vec::new();
            let mut count = 0;
            for x in 0..w.len() {
                for side in [Side::Left, Side::Right] {
                    for s in w.descents(x, side) {
                        count += 1;
                        let (ideal, m) = w.descent_matching_in(br, x, s, side)?;
                        if let Some(v) = special_violation(&ideal, &m) {
                            let [a, b] = pair(&ideal, v);
                            failures.push(format!("{} s{} {side:?}: {a} < {b}", w.label(x), s + 1));
                        }
                    }
                }
            }
            let report = ZirconCheckReport {
                r#type: name,
                elements: w.len(),
                zircon: is_zircon(br),
                descent_matchings: count,
                failures,
            };
            emit_json(cli, &report)?;
            Ok(if report.zircon && report.failures.is_empty() { Status::Pass } else { Status::Fail })
        }
        CoxeterAction::Twisted => {
            let t = w.parse_theta(theta)?;
            let br = w.twisted_involution_poset(&t);
            let fixed = fixed_point_subposet(w.bruhat_poset(), &w.twisted_map(&t)?)?;
            let report = TwistedReport {
                r#type: name,
                theta: one_based(&t),
                elements: br.len(),
                equals_fixed_points: br == fixed,
                zircon: is_zircon(&br),
                sphericity: match sweep::check_sphericity(&br) {
                    Ok(()) => "pass".to_string(),
                    Err(e) => format!("fail: {e}"),
                },
                poset: br.to_json(),
            };
            emit_json(cli, &report)?;
            let ok = report.equals_fixed_points && report.zircon && report.sphericity == "pass";
            Ok(if ok { Status::Pass } else { Status::Fail })
        }
        CoxeterAction::FixCheck => {
            let Some(against) = against else {
                bail!("fix-check needs --against TYPE");
            };
            let t = w.parse_theta(theta)?;
            let fix = w.fix_subgroup_poset(&t);
            let other = system(against, cap)?;
            let target = other.bruhat_poset();
            let iso = are_isomorphic(&fix, target);
            let report = FixCheckReport {
                r#type: name,
                theta: one_based(&t),
                elements: fix.len(),
                against: other.kind().to_string(),
                against_elements: target.len(),
                isomorphic: iso.is_some(),
                isomorphism: iso.map(|f| image_json(&fix, target, &f)),
            };
            emit_json(cli, &report)?;
            Ok(if report.isomorphic { Status::Pass } else { Status::Fail })
        }
    }
}

/// Map between two different posets, keyed by ids.
fn image_json(from: &Poset, to: &Poset, f: &PosetMap) -> MapJson {
    MapJson {
        map: (0..from.len()).map(|x| (from.id(x).to_string(), to.id(f.apply(x)).to_string())).collect(),
    }
}

#[derive(Serialize)]
struct MobiusEntry {
    x: String,
    y: String,
    mu: i64,
}

fn mobius(cli: &Cli, poset: &Path, x: Option<&str>, y: Option<&str>) -> Result<Status> {
    let p = load_poset(poset)?;
    let entries = match (x, y) {
        (Some(x), Some(y)) => {
            let mu = p.mobius_ids(x, y)?;
            vec![MobiusEntry { x: x.into(), y: y.into(), mu }]
        }
        (None, None) => {
            let mut out = Vec::new();
            for a in 0..p.len() {
                for b in p.up_set(a).ones() {
                    out.push(MobiusEntry { x: p.id(a).into(), y: p.id(b).into(), mu: p.mobius(a, b)? });
                }
            }
            out
        }
        _ => bail!("mobius needs both X and Y, or neither"),
    };
    emit_json(cli, &entries)?;
    Ok(Status::Pass)
}

//! Batch front end for the lorenz-pressure toolkit.
//!
//! Exit codes: 0 success, 2 configuration error, 3 budget exceeded,
//! 4 NOT_DECIDED verdict under `gap --strict`, 5 degenerate-case abort.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use lorenz_pressure::birkhoff::{
    boundary_limsup, BoundaryBase, LimsupConfig, LimsupMode, PiecewisePotential,
};
use lorenz_pressure::cutting::{
    admissible_flank_records, cutting_times, cutting_times_side, periodic_from_cutting,
    CuttingError, OrbitSide,
};
use lorenz_pressure::maps::{DynMap, MapSpec, Side, SidedPoint};
use lorenz_pressure::perturb::{densify, DensifyConfig, DensifyOutcome, PerturbError};
use lorenz_pressure::pressure::{
    h_membership, pressure, GapConfig, PressureConfig, PressureError, Subject, Verdict,
};
use lorenz_pressure::scalar::Scalar;
use lorenz_pressure::symbolic::{entropy_estimate, refine, SymbolicError, DEFAULT_BUDGET};
use lorenz_pressure::validate::{run_suite, Outcome};

use output::{fmt_f64, Header, Output};

#[derive(Parser)]
#[command(
    name = "lorenz-pressure",
    version,
    about = "Thermodynamic formalism on generalized beta-transformations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubjectArg {
    Full,
    Boundary,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Zero,
    One,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitSideArg {
    Plus,
    Minus,
    Both,
}

#[derive(Args)]
struct Common {
    /// Map description JSON.
    #[arg(long)]
    map: PathBuf,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Seed recorded in the header and used for randomized validation.
    #[arg(long, default_value = "0")]
    seed: u64,
    /// Enumeration budget override (cylinder operations); falls back to the
    /// LORENZ_PRESSURE_BUDGET environment variable, then the default.
    #[arg(long)]
    enum_budget: Option<u64>,
    /// Emit tidy long-format rows (series, n, value) instead of wide rows.
    #[arg(long)]
    plot_data: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a sided point and print the orbit.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Starting point; a float, or `num/den` for rational maps.
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value = "none")]
        side: SideArg,
        /// Number of steps (the orbit has n + 1 points).
        #[arg(long)]
        n: usize,
    },
    /// Enumerate depth-n cylinders with their affine branch data.
    Cylinders {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        depth: u32,
    },
    /// Cylinder-count entropy series converging to ln(beta).
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: u32,
    },
    /// Partition-sum pressure brackets over a depth range.
    Pressure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        subject: SubjectArg,
        /// Inclusive depth range, e.g. 4..18.
        #[arg(long, default_value = "4..18")]
        n: String,
        /// Tail window (in depths) for the series estimate.
        #[arg(long, default_value = "1")]
        window: usize,
    },
    /// Boundary Birkhoff limsup estimates.
    Boundary {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        base: BaseArg,
        #[arg(long, default_value = "2000")]
        n_max: usize,
        #[arg(long, default_value = "200")]
        window: usize,
    },
    /// Pressure-gap membership verdict (JSON).
    Gap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value = "0.01")]
        margin: f64,
        #[arg(long, default_value = "4..16")]
        n: String,
        /// Exit with status 4 when the verdict is NOT_DECIDED.
        #[arg(long)]
        strict: bool,
    },
    /// Cutting times with admissibility and solved periodic points.
    Cutting {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "40")]
        n_max: u32,
        #[arg(long, value_enum, default_value = "both")]
        side: OrbitSideArg,
    },
    /// Periodic orbits from discontinuity-flanking cylinders (per-depth
    /// test; also serves maps whose recursion degenerates).
    Periodic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "30")]
        n_max: u32,
        #[arg(long, value_enum, default_value = "both")]
        side: OrbitSideArg,
    },
    /// Search for a perturbation within sup-distance epsilon that clears
    /// the pressure-gap margin; writes the perturbed potential JSON.
    Densify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Maximum number of candidate constructions.
        #[arg(long, default_value = "200")]
        budget: u64,
        #[arg(long, default_value = "0.01")]
        margin: f64,
        #[arg(long, default_value = "4..16")]
        n: String,
        #[arg(long, default_value = "30")]
        depth_cap: u32,
    },
    /// Run the invariant suite against a map and potential.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Potential JSON; the zero potential when omitted.
        #[arg(long)]
        potential: Option<PathBuf>,
    },
}

/// Errors carrying their process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: 2,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<SymbolicError> for CliError {
    fn from(e: SymbolicError) -> Self {
        let code = match &e {
            SymbolicError::BudgetExceeded { .. } => 3,
            SymbolicError::Map(_) => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PressureError> for CliError {
    fn from(e: PressureError) -> Self {
        let code = match &e {
            PressureError::Symbolic(SymbolicError::BudgetExceeded { .. }) => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CuttingError> for CliError {
    fn from(e: CuttingError) -> Self {
        let code = match &e {
            CuttingError::DegenerateComponent { .. } => 5,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<lorenz_pressure::maps::MapError> for CliError {
    fn from(e: lorenz_pressure::maps::MapError) -> Self {
        CliError::config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn load_map_spec(path: &PathBuf) -> Result<MapSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("bad map spec {}: {e}", path.display())))
}

fn load_potential(path: &PathBuf) -> Result<(PiecewisePotential, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let phi: PiecewisePotential = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::config(format!("bad potential {}: {e}", path.display())))?;
    let hash = format!("{:x}", Sha256::digest(&bytes));
    Ok((phi, hash))
}

fn resolve_budget(common: &Common) -> u64 {
    common
        .enum_budget
        .or_else(|| {
            std::env::var("LORENZ_PRESSURE_BUDGET")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET)
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<u32>, CliError> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| CliError::config(format!("bad range '{text}', expected a..b")))?;
    let lo: u32 = a
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("bad range start '{a}'")))?;
    let hi: u32 = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| CliError::config(format!("bad range end '{b}'")))?;
    if lo < 1 || hi < lo {
        return Err(CliError::config(format!("empty range '{text}'")));
    }
    Ok(lo..=hi)
}

fn parse_scalar<S: Scalar>(text: &str) -> Result<S, CliError> {
    if let Some((n, d)) = text.split_once('/') {
        let num: i64 = n
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("bad numerator '{n}'")))?;
        let den: i64 = d
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("bad denominator '{d}'")))?;
        if den == 0 {
            return Err(CliError::config("zero denominator"));
        }
        return Ok(S::from_ratio(num, den));
    }
    if S::EXACT {
        let int: i64 = text.trim().parse().map_err(|_| {
            CliError::config(format!(
                "rational maps need exact inputs: '{text}' is neither an integer nor num/den"
            ))
        })?;
        Ok(S::from_int(int))
    } else {
        let x: f64 = text
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("bad number '{text}'")))?;
        // route through a dyadic to stay within the trait surface
        let scaled = (x * (1u64 << 53) as f64).round() as i64;
        Ok(S::from_ratio(scaled, 1i64 << 53))
    }
}

fn header(common: &Common, spec: &MapSpec, potential_sha256: Option<String>) -> Header {
    Header {
        map: spec.clone(),
        potential_sha256,
        seed: common.seed,
        budget: resolve_budget(common),
        extra: Vec::new(),
    }
}

fn side_of(arg: SideArg) -> Side {
    match arg {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
        SideArg::None => Side::None,
    }
}

macro_rules! with_map {
    ($spec:expr, |$m:ident| $body:expr) => {{
        match $spec.build()? {
            DynMap::Float($m) => $body,
            DynMap::Rational($m) => $body,
        }
    }};
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Orbit { common, x, side, n } => cmd_orbit(common, x, side, n),
        Command::Cylinders { common, depth } => cmd_cylinders(common, depth),
        Command::Entropy { common, n_max } => cmd_entropy(common, n_max),
        Command::Pressure {
            common,
            potential,
            subject,
            n,
            window,
        } => cmd_pressure(common, potential, subject, n, window),
        Command::Boundary {
            common,
            potential,
            base,
            n_max,
            window,
        } => cmd_boundary(common, potential, base, n_max, window),
        Command::Gap {
            common,
            potential,
            margin,
            n,
            strict,
        } => cmd_gap(common, potential, margin, n, strict),
        Command::Cutting {
            common,
            n_max,
            side,
        } => cmd_cutting(common, n_max, side),
        Command::Periodic {
            common,
            n_max,
            side,
        } => cmd_periodic(common, n_max, side),
        Command::Densify {
            common,
            potential,
            epsilon,
            budget,
            margin,
            n,
            depth_cap,
        } => cmd_densify(common, potential, epsilon, budget, margin, n, depth_cap),
        Command::Validate { common, potential } => cmd_validate(common, potential),
    }
}

fn emit_csv(out: &mut Output, header: &Header, rows: &[String], columns: &str) -> Result<(), CliError> {
    for line in header.csv_lines() {
        out.line(&line)?;
    }
    out.line(columns)?;
    for row in rows {
        out.line(row)?;
    }
    Ok(())
}

fn cmd_orbit(common: Common, x: String, side: SideArg, n: usize) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let hdr = header(&common, &spec, None);
    let (rows, hit) = with_map!(spec, |map| {
        let x = parse_scalar(&x)?;
        let start = SidedPoint::new(x, side_of(side));
        let orbit = map.orbit(&start, n)?;
        let rows: Vec<String> = orbit
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{i},{},{:?}", fmt_f64(p.x.to_f64()), p.side))
            .collect();
        (rows, orbit.hit_disc_at)
    });
    let mut hdr = hdr;
    if let Some(i) = hit {
        hdr.extra.push(("hit-disc-at".into(), i.to_string()));
    }
    let mut out = Output::create(&common.out)?;
    emit_csv(&mut out, &hdr, &rows, "step,x,side")?;
    out.finish()?;
    Ok(0)
}

fn cmd_cylinders(common: Common, depth: u32) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let hdr = header(&common, &spec, None);
    let budget = resolve_budget(&common);
    let rows = with_map!(spec, |map| {
        refine(&map, depth, budget)?
            .iter()
            .map(|c| {
                format!(
                    "{},{},{},{},{}",
                    c.word_string(),
                    fmt_f64(c.a.to_f64()),
                    fmt_f64(c.b.to_f64()),
                    fmt_f64(c.slope.to_f64()),
                    fmt_f64(c.intercept.to_f64())
                )
            })
            .collect::<Vec<_>>()
    });
    let mut out = Output::create(&common.out)?;
    emit_csv(&mut out, &hdr, &rows, "word,a,b,slope,intercept")?;
    out.finish()?;
    Ok(0)
}

fn cmd_entropy(common: Common, n_max: u32) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let mut hdr = header(&common, &spec, None);
    let budget = resolve_budget(&common);
    let (rows, within, target) = with_map!(spec, |map| {
        let series = entropy_estimate(&map, n_max, budget)?;
        let rows: Vec<String> = series
            .points
            .iter()
            .map(|p| {
                if common.plot_data {
                    format!("entropy,{},{}", p.depth, fmt_f64(p.estimate))
                } else {
                    format!("{},{},{}", p.depth, p.count, fmt_f64(p.estimate))
                }
            })
            .collect();
        (rows, series.within_class, map.beta_f64().ln())
    });
    hdr.extra
        .push(("ln-beta".into(), fmt_f64(target)));
    if !within {
        hdr.extra.push((
            "warning".into(),
            "map outside the beta > sqrt(2) class; series still returned".into(),
        ));
    }
    let mut out = Output::create(&common.out)?;
    let cols = if common.plot_data {
        "series,n,value"
    } else {
        "n,count,estimate"
    };
    emit_csv(&mut out, &hdr, &rows, cols)?;
    out.finish()?;
    Ok(0)
}

fn cmd_pressure(
    common: Common,
    potential: PathBuf,
    subject: SubjectArg,
    n: String,
    window: usize,
) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let (phi, hash) = load_potential(&potential)?;
    let mut hdr = header(&common, &spec, Some(hash));
    let n_range = parse_range(&n)?;
    let cfg = PressureConfig {
        estimate_window: window,
        budget: resolve_budget(&common),
    };
    let subject = match subject {
        SubjectArg::Full => Subject::Full,
        SubjectArg::Boundary => Subject::Boundary,
    };
    let series = with_map!(spec, |map| pressure(&map, &phi, subject, n_range, &cfg)?);
    hdr.extra
        .push(("estimate".into(), fmt_f64(series.estimate)));
    hdr.extra
        .push(("lower-estimate".into(), fmt_f64(series.lower_estimate)));
    hdr.extra
        .push(("upper-cert".into(), fmt_f64(series.upper_cert)));
    let rows: Vec<String> = if common.plot_data {
        series
            .brackets
            .iter()
            .flat_map(|b| {
                [
                    format!("lo,{},{}", b.depth, fmt_f64(b.lo)),
                    format!("hi,{},{}", b.depth, fmt_f64(b.hi)),
                ]
            })
            .collect()
    } else {
        series
            .brackets
            .iter()
            .map(|b| {
                format!(
                    "{},{},{},{}",
                    b.depth,
                    fmt_f64(b.lo),
                    fmt_f64(b.hi),
                    b.count
                )
            })
            .collect()
    };
    let mut out = Output::create(&common.out)?;
    let cols = if common.plot_data {
        "series,n,value"
    } else {
        "n,lo,hi,count"
    };
    emit_csv(&mut out, &hdr, &rows, cols)?;
    out.finish()?;
    Ok(0)
}

fn cmd_boundary(
    common: Common,
    potential: PathBuf,
    base: BaseArg,
    n_max: usize,
    window: usize,
) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let (phi, hash) = load_potential(&potential)?;
    let hdr = header(&common, &spec, Some(hash));
    let cfg = LimsupConfig {
        n_max,
        window,
        ..LimsupConfig::default()
    };
    let bases: Vec<BoundaryBase> = match base {
        BaseArg::Zero => vec![BoundaryBase::Zero],
        BaseArg::One => vec![BoundaryBase::One],
        BaseArg::Both => vec![BoundaryBase::Zero, BoundaryBase::One],
    };
    let mut rows = Vec::new();
    for b in bases {
        let est = with_map!(spec, |map| boundary_limsup(&map, &phi, b, &cfg));
        if common.plot_data {
            for (i, v) in est.series.iter().enumerate() {
                rows.push(format!("base{},{},{}", b.label(), i + 1, fmt_f64(*v)));
            }
        } else {
            rows.push(format!(
                "{},{},{},{},{}",
                b.label(),
                match est.mode {
                    LimsupMode::Asymptotic => "asymptotic",
                    LimsupMode::PeriodicExact => "periodic_exact",
                },
                fmt_f64(est.value),
                est.hit_at.map(|i| i.to_string()).unwrap_or_default(),
                est.tolerance_sensitive
            ));
        }
    }
    let mut out = Output::create(&common.out)?;
    let cols = if common.plot_data {
        "series,n,value"
    } else {
        "base,mode,value,hit_at,tolerance_sensitive"
    };
    emit_csv(&mut out, &hdr, &rows, cols)?;
    out.finish()?;
    Ok(0)
}

fn cmd_gap(
    common: Common,
    potential: PathBuf,
    margin: f64,
    n: String,
    strict: bool,
) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let (phi, hash) = load_potential(&potential)?;
    let hdr = header(&common, &spec, Some(hash));
    let cfg = GapConfig {
        margin,
        n_range: parse_range(&n)?,
        pressure: PressureConfig {
            estimate_window: 1,
            budget: resolve_budget(&common),
        },
        limsup: LimsupConfig::default(),
    };
    let verdict = with_map!(spec, |map| h_membership(&map, &phi, &cfg)?);
    let doc = serde_json::json!({
        "header": hdr.json_value(),
        "verdict": verdict,
    });
    let mut out = Output::create(&common.out)?;
    out.line(&serde_json::to_string_pretty(&doc).expect("verdict serializes"))?;
    out.finish()?;
    if strict && verdict.verdict == Verdict::NotDecided {
        return Ok(4);
    }
    Ok(0)
}

fn cmd_cutting(common: Common, n_max: u32, side: OrbitSideArg) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let mut hdr = header(&common, &spec, None);
    let (rows, degenerate) = with_map!(spec, |map| {
        let scan = match side {
            OrbitSideArg::Plus => cutting_times_side(&map, OrbitSide::Plus, n_max),
            OrbitSideArg::Minus => cutting_times_side(&map, OrbitSide::Minus, n_max),
            OrbitSideArg::Both => cutting_times(&map, n_max),
        };
        let mut rows = Vec::new();
        for rec in &scan.records {
            let (p, residual) = if rec.admissible {
                match periodic_from_cutting(&map, rec) {
                    Ok(orbit) => (fmt_f64(orbit.point), fmt_f64(orbit.residual)),
                    Err(_) => (String::new(), String::new()),
                }
            } else {
                (String::new(), String::new())
            };
            rows.push(format!(
                "{},{},{},{},{},{},{},{}",
                rec.step,
                rec.side.label(),
                rec.admissible,
                fmt_f64(rec.cylinder.a.to_f64()),
                fmt_f64(rec.cylinder.b.to_f64()),
                p,
                residual,
                rec.tolerance_sensitive
            ));
        }
        (rows, scan.degenerate_at)
    });
    if let Some((step, side, reason)) = &degenerate {
        hdr.extra.push((
            "degenerate".into(),
            format!("step {step} ({} side): {reason}", side.label()),
        ));
    }
    let mut out = Output::create(&common.out)?;
    emit_csv(
        &mut out,
        &hdr,
        &rows,
        "N,side,admissible,cyl_a,cyl_b,p,residual,tolerance_sensitive",
    )?;
    out.finish()?;
    Ok(0)
}

fn cmd_periodic(common: Common, n_max: u32, side: OrbitSideArg) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let hdr = header(&common, &spec, None);
    let sides: Vec<OrbitSide> = match side {
        OrbitSideArg::Plus => vec![OrbitSide::Plus],
        OrbitSideArg::Minus => vec![OrbitSide::Minus],
        OrbitSideArg::Both => vec![OrbitSide::Plus, OrbitSide::Minus],
    };
    let rows = with_map!(spec, |map| {
        let mut rows = Vec::new();
        for s in &sides {
            for rec in admissible_flank_records(&map, *s, n_max) {
                match periodic_from_cutting(&map, &rec) {
                    Ok(orbit) => rows.push(format!(
                        "{},{},{},{},{},{},{}",
                        orbit.period,
                        orbit.side.label(),
                        fmt_f64(orbit.point),
                        fmt_f64(orbit.residual),
                        fmt_f64(orbit.cylinder_a),
                        fmt_f64(orbit.cylinder_b),
                        rec.cylinder.word_string()
                    )),
                    Err(CuttingError::FixedPointEscaped { .. }) => {}
                    Err(e) => return Err(CliError::from(e)),
                }
            }
        }
        Ok::<_, CliError>(rows)
    })?;
    let mut out = Output::create(&common.out)?;
    emit_csv(&mut out, &hdr, &rows, "period,side,p,residual,cyl_a,cyl_b,word")?;
    out.finish()?;
    Ok(0)
}

fn cmd_densify(
    common: Common,
    potential: PathBuf,
    epsilon: f64,
    budget: u64,
    margin: f64,
    n: String,
    depth_cap: u32,
) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let (phi, hash) = load_potential(&potential)?;
    let hdr = header(&common, &spec, Some(hash));
    let cfg = DensifyConfig {
        gap: GapConfig {
            margin,
            n_range: parse_range(&n)?,
            pressure: PressureConfig {
                estimate_window: 1,
                budget: resolve_budget(&common),
            },
            limsup: LimsupConfig::default(),
        },
        depth_cap,
        limsup: LimsupConfig::default(),
    };
    let result = with_map!(spec, |map| densify(&map, &phi, epsilon, budget, &cfg));
    let out_path = common.out.clone();
    let write_potential = |p: &PiecewisePotential| -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(p).expect("potential serializes");
        match &out_path {
            Some(path) => std::fs::write(path, text + "\n").map_err(CliError::from),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    };
    match result {
        Ok(DensifyOutcome::AlreadyCertified(verdict)) => {
            write_potential(&phi)?;
            let report = serde_json::json!({
                "header": hdr.json_value(),
                "outcome": "already_certified",
                "verdict": verdict,
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(0)
        }
        Ok(DensifyOutcome::Perturbed {
            potential,
            verdict,
            attempts,
        }) => {
            write_potential(&potential.combined)?;
            let report = serde_json::json!({
                "header": hdr.json_value(),
                "outcome": "perturbed",
                "verdict": verdict,
                "attempts": attempts,
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(0)
        }
        Err(PerturbError::BudgetExhausted {
            budget,
            best_gap,
            best,
            attempts,
        }) => {
            if let Some(boxed) = &best {
                write_potential(&boxed.0.combined)?;
            }
            let report = serde_json::json!({
                "header": hdr.json_value(),
                "outcome": "budget_exhausted",
                "budget": budget,
                "best_gap": best_gap,
                "best_verdict": best.as_ref().map(|b| &b.1),
                "attempts": attempts,
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(3)
        }
        Err(PerturbError::Cutting(e)) => Err(CliError::from(e)),
        Err(PerturbError::Pressure(e)) => Err(CliError::from(e)),
        Err(e) => Err(CliError::config(e.to_string())),
    }
}

fn cmd_validate(common: Common, potential: Option<PathBuf>) -> Result<u8, CliError> {
    let spec = load_map_spec(&common.map)?;
    let (phi, hash) = match &potential {
        Some(p) => {
            let (phi, hash) = load_potential(p)?;
            (phi, Some(hash))
        }
        None => (PiecewisePotential::zero(), None),
    };
    let hdr = header(&common, &spec, hash);
    let reports = with_map!(spec, |map| run_suite(&map, &phi, common.seed));
    let mut out = Output::create(&common.out)?;
    match common.format {
        Format::Json => {
            let doc = serde_json::json!({
                "header": hdr.json_value(),
                "reports": reports,
            });
            out.line(&serde_json::to_string_pretty(&doc).unwrap())?;
        }
        Format::Csv => {
            for line in hdr.csv_lines() {
                out.line(&line)?;
            }
            for r in &reports {
                let tag = match r.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => "FAIL",
                    Outcome::Skip => "SKIP",
                };
                out.line(&format!("{tag} {}/{} — {}", r.module, r.name, r.detail))?;
            }
        }
    }
    out.finish()?;
    let failed = reports.iter().any(|r| r.outcome == Outcome::Fail);
    Ok(if failed { 1 } else { 0 })
}

//! Topological pressure from cylinder partition sums, with certified
//! brackets, the boundary-pressure shortcut, and the pressure-gap
//! membership test.
//!
//! The depth-`n` partition sum ranges over cylinders meeting the subject set
//! (everything, or the partition boundary `{0, disc, 1}`). On each cylinder
//! the Birkhoff sum varies by at most the distortion constant
//! `C = K / (1 - lambda^a)`, so evaluating at the midpoint brackets the
//! supremum: `lo = (1/n) log sum exp(S_n phi(mid))` and `hi = lo + C/n`
//! enclose the depth-`n` exponent. Sub-multiplicativity of the supremum
//! sums (`Z_{n+m} <= Z_n Z_m`) makes `(log M_n + C)/n` a certified upper
//! bound for the limiting pressure at every depth; certified lower bounds
//! come from Birkhoff averages of verified periodic orbits.

use serde::Serialize;
use thiserror::Error;

use crate::birkhoff::{
    boundary_limsup, BoundaryBase, BoundaryLimsupEstimate, LimsupConfig, LimsupMode,
    PiecewisePotential,
};
use crate::cutting::PeriodicOrbit;
use crate::maps::BetaMap;
use crate::scalar::{LogSumExp, Scalar};
use crate::symbolic::{boundary_cylinders, refine_levels, Cylinder, SymbolicError, DEFAULT_BUDGET};

#[derive(Debug, Error)]
pub enum PressureError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("non-finite Birkhoff sum at depth {depth} (cylinder {word})")]
    NonFinite { depth: u32, word: String },
    #[error("periodic orbit failed verification (residual {residual:e})")]
    UnverifiedOrbit { residual: f64 },
    #[error("empty depth range")]
    EmptyRange,
}

/// Which cylinders enter the partition sum.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Full,
    Boundary,
}

/// Distortion constant `C = K / (1 - lambda^a)` with `lambda = 1/beta`:
/// a uniform bound on `|S_n phi(x) - S_n phi(y)|` within any cylinder.
pub fn distortion_constant<S: Scalar>(map: &BetaMap<S>, phi: &PiecewisePotential) -> f64 {
    let lam = map.lambda();
    phi.holder.k / (1.0 - lam.powf(phi.holder.a))
}

/// Certified bracket for one depth-`n` partition-sum exponent.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PressureBracket {
    pub depth: u32,
    pub lo: f64,
    pub hi: f64,
    /// The distortion constant used for the upper side.
    pub slack: f64,
    /// Cylinders summed.
    pub count: usize,
}

impl PressureBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `(1/n) log` of the *mean* cylinder term instead of the sum:
    /// subtracts the multiplicity bias `ln(count)/n`, which dominates the
    /// small-count boundary sums at finite depth and vanishes in the limit.
    pub fn mean_exponent(&self) -> f64 {
        self.lo - (self.count as f64).ln() / self.depth as f64
    }
}

/// Walk the cylinder word from the midpoint and accumulate the potential;
/// the word certifies the branch at every step, so points that graze the
/// discontinuity window need no side resolution.
fn birkhoff_on_cylinder<S: Scalar>(
    bf: f64,
    af: f64,
    phi: &PiecewisePotential,
    cyl: &Cylinder<S>,
) -> f64 {
    let mut x = cyl.midpoint().to_f64();
    let mut sum = 0.0;
    for &branch in &cyl.word {
        sum += phi.eval_piece(branch, x);
        x = match branch {
            crate::maps::Branch::Left => bf * x + af,
            crate::maps::Branch::Right => bf * x + af - 1.0,
        };
    }
    sum
}

fn bracket_from_cylinders<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    depth: u32,
    cyls: &[&Cylinder<S>],
    slack: f64,
) -> Result<PressureBracket, PressureError> {
    let (bf, af) = (map.beta_f64(), map.alpha_f64());
    let mut lse = LogSumExp::new();
    for cyl in cyls {
        let s = birkhoff_on_cylinder(bf, af, phi, cyl);
        if !s.is_finite() {
            return Err(PressureError::NonFinite {
                depth,
                word: cyl.word_string(),
            });
        }
        lse.push(s);
    }
    let lo = lse.value() / depth as f64;
    Ok(PressureBracket {
        depth,
        lo,
        hi: lo + slack / depth as f64,
        slack,
        count: lse.count(),
    })
}

/// Bracket the depth-`n` partition-sum exponent for the chosen subject.
pub fn partition_sum<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    depth: u32,
    subject: Subject,
    budget: u64,
) -> Result<PressureBracket, PressureError> {
    let slack = distortion_constant(map, phi);
    match subject {
        Subject::Full => {
            let mut out = None;
            refine_levels(map, depth, budget, |n, level| {
                if n == depth {
                    let refs: Vec<&Cylinder<S>> = level.iter().collect();
                    out = Some(bracket_from_cylinders(map, phi, depth, &refs, slack));
                }
            })?;
            out.expect("refine_levels visits the requested depth")
        }
        Subject::Boundary => {
            let adjacency = boundary_cylinders(map, depth);
            let distinct = adjacency.distinct();
            bracket_from_cylinders(map, phi, depth, &distinct, slack)
        }
    }
}

/// Pressure estimation settings: depth window for the series estimate and
/// the enumeration budget.
#[derive(Clone, Copy, Debug)]
pub struct PressureConfig {
    /// Tail window (in depths) the estimate maximizes over. The depth-`n`
    /// exponents decrease toward the pressure, so the deepest midpoint is
    /// the tightest estimate; the default window is therefore 1.
    pub estimate_window: usize,
    pub budget: u64,
}

impl Default for PressureConfig {
    fn default() -> Self {
        PressureConfig {
            estimate_window: 1,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Brackets over a depth range plus the derived estimate and the certified
/// upper bound.
#[derive(Clone, Debug, Serialize)]
pub struct PressureSeries {
    pub subject: Subject,
    pub brackets: Vec<PressureBracket>,
    /// Tail-window maximum of bracket midpoints.
    pub estimate: f64,
    /// Tail-window maximum of bracket lower ends: a lower estimate that
    /// carries no distortion slack (the gap test compares this side).
    pub lower_estimate: f64,
    /// `min_n (log M_n + C)/n = min_n hi_n`: an upper bound for the limiting
    /// pressure by sub-multiplicativity of the supremum partition sums.
    pub upper_cert: f64,
    pub estimate_window: usize,
}

/// Partition-sum brackets for every depth in `n_range` in one sweep.
pub fn pressure<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    subject: Subject,
    n_range: std::ops::RangeInclusive<u32>,
    cfg: &PressureConfig,
) -> Result<PressureSeries, PressureError> {
    let (lo_n, hi_n) = (*n_range.start(), *n_range.end());
    if lo_n < 1 || hi_n < lo_n {
        return Err(PressureError::EmptyRange);
    }
    let slack = distortion_constant(map, phi);
    let mut brackets = Vec::with_capacity((hi_n - lo_n + 1) as usize);
    let mut failure = None;
    match subject {
        Subject::Full => {
            refine_levels(map, hi_n, cfg.budget, |n, level| {
                if n >= lo_n && failure.is_none() {
                    let refs: Vec<&Cylinder<S>> = level.iter().collect();
                    match bracket_from_cylinders(map, phi, n, &refs, slack) {
                        Ok(b) => brackets.push(b),
                        Err(e) => failure = Some(e),
                    }
                }
            })?;
        }
        Subject::Boundary => {
            for n in lo_n..=hi_n {
                let adjacency = boundary_cylinders(map, n);
                let distinct = adjacency.distinct();
                brackets.push(bracket_from_cylinders(map, phi, n, &distinct, slack)?);
            }
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(series_from_brackets(subject, brackets, cfg.estimate_window))
}

pub(crate) fn series_from_brackets(
    subject: Subject,
    brackets: Vec<PressureBracket>,
    estimate_window: usize,
) -> PressureSeries {
    let w = estimate_window.max(1).min(brackets.len());
    let tail = &brackets[brackets.len() - w..];
    let estimate = tail
        .iter()
        .map(|b| b.midpoint())
        .fold(f64::NEG_INFINITY, f64::max);
    let lower_estimate = tail.iter().map(|b| b.lo).fold(f64::NEG_INFINITY, f64::max);
    let upper_cert = brackets
        .iter()
        .map(|b| b.hi)
        .fold(f64::INFINITY, f64::min);
    PressureSeries {
        subject,
        brackets,
        estimate,
        lower_estimate,
        upper_cert,
        estimate_window,
    }
}

/// Boundary pressure via the shortcut: the maximum of the two boundary
/// Birkhoff limsups, an `O(n_max)` computation with no cylinder enumeration.
#[derive(Clone, Debug)]
pub struct BoundaryPressure {
    pub value: f64,
    /// Estimate at base 0 (the `disc^+` side).
    pub plus: BoundaryLimsupEstimate,
    /// Estimate at base 1 (the `disc^-` side).
    pub minus: BoundaryLimsupEstimate,
}

pub fn boundary_pressure_shortcut<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    cfg: &LimsupConfig,
) -> BoundaryPressure {
    let plus = boundary_limsup(map, phi, BoundaryBase::Zero, cfg);
    let minus = boundary_limsup(map, phi, BoundaryBase::One, cfg);
    BoundaryPressure {
        value: plus.value.max(minus.value),
        plus,
        minus,
    }
}

/// Residual tolerance below which a periodic orbit counts as verified.
pub const ORBIT_RESIDUAL_TOL: f64 = 1e-10;

/// Rigorous lower bound for the full pressure: the Birkhoff average of a
/// verified periodic orbit (the orbit measure has zero entropy, so the
/// average alone bounds the variational supremum from below).
pub fn periodic_orbit_lower_bound(
    phi: &PiecewisePotential,
    orbit: &PeriodicOrbit,
) -> Result<f64, PressureError> {
    if !(orbit.residual <= ORBIT_RESIDUAL_TOL) {
        return Err(PressureError::UnverifiedOrbit {
            residual: orbit.residual,
        });
    }
    Ok(orbit.birkhoff_average(phi))
}

/// Verdict of the pressure-gap membership test.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    InH,
    NotDecided,
}

/// Settings for the membership test.
#[derive(Clone, Debug)]
pub struct GapConfig {
    /// The gap must exceed this margin for an `IN_H` verdict; strictness at
    /// exact equality is undecidable numerically, the margin makes verdicts
    /// reproducible.
    pub margin: f64,
    pub n_range: std::ops::RangeInclusive<u32>,
    pub pressure: PressureConfig,
    pub limsup: LimsupConfig,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig {
            margin: 0.01,
            n_range: 4..=16,
            pressure: PressureConfig::default(),
            limsup: LimsupConfig::default(),
        }
    }
}

/// Outcome of comparing the full pressure against the boundary pressure.
///
/// `IN_H` certifies (at the configured margin) that the full pressure
/// strictly dominates both boundary limsups; the opposite can never be
/// certified from below, so the other verdict is `NOT_DECIDED`.
#[derive(Clone, Debug, Serialize)]
pub struct GapVerdict {
    pub verdict: Verdict,
    pub margin: f64,
    /// Best available lower estimate for the full pressure.
    pub full_lower: f64,
    /// The series lower estimate behind it.
    pub full_estimate: f64,
    /// Certified upper bound for the full pressure.
    pub upper_cert: f64,
    /// Best verified periodic-orbit lower bound folded in, if any.
    pub witness: Option<f64>,
    pub boundary_value: f64,
    pub boundary_plus: f64,
    pub boundary_plus_mode: LimsupMode,
    pub boundary_minus: f64,
    pub boundary_minus_mode: LimsupMode,
    /// Gap against base 0 and base 1 separately.
    pub gap_plus: f64,
    pub gap_minus: f64,
    /// The deciding gap: `full_lower - max(boundary limsups)`.
    pub gap_lo: f64,
    pub brackets: Vec<PressureBracket>,
}

/// Pressure-gap membership test, optionally strengthened by verified
/// periodic-orbit lower bounds.
pub fn h_membership_with_witnesses<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    cfg: &GapConfig,
    witnesses: &[&PeriodicOrbit],
) -> Result<GapVerdict, PressureError> {
    let series = pressure(map, phi, Subject::Full, cfg.n_range.clone(), &cfg.pressure)?;
    let boundary = boundary_pressure_shortcut(map, phi, &cfg.limsup);
    let witness = witnesses
        .iter()
        .map(|orbit| periodic_orbit_lower_bound(phi, orbit))
        .collect::<Result<Vec<f64>, _>>()?
        .into_iter()
        .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.max(v))));
    let full_lower = witness.map_or(series.lower_estimate, |w| w.max(series.lower_estimate));
    let gap_plus = full_lower - boundary.plus.value;
    let gap_minus = full_lower - boundary.minus.value;
    let gap_lo = gap_plus.min(gap_minus);
    let verdict = if gap_lo > cfg.margin {
        Verdict::InH
    } else {
        Verdict::NotDecided
    };
    Ok(GapVerdict {
        verdict,
        margin: cfg.margin,
        full_lower,
        full_estimate: series.lower_estimate,
        upper_cert: series.upper_cert,
        witness,
        boundary_value: boundary.value,
        boundary_plus: boundary.plus.value,
        boundary_plus_mode: boundary.plus.mode,
        boundary_minus: boundary.minus.value,
        boundary_minus_mode: boundary.minus.mode,
        gap_plus,
        gap_minus,
        gap_lo,
        brackets: series.brackets,
    })
}

pub fn h_membership<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    cfg: &GapConfig,
) -> Result<GapVerdict, PressureError> {
    h_membership_with_witnesses(map, phi, cfg, &[])
}

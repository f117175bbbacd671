//! Cutting times and periodic points near the discontinuity.
//!
//! The auxiliary interval family starts at `A_0 = (disc, 1)` and evolves by
//! `A_{n+1} = T(A_n)`, except that when the discontinuity lies inside `A_n`
//! (a *cutting time*) only the connected component of `A_n \ {disc}`
//! holding the critical image `T^n(disc^+)` is mapped forward. At an
//! admissible cutting time `N` (the image of the flank cylinder's free
//! endpoint overshoots it) the discontinuity-flanking depth-`N` cylinder is
//! covered by its own image, which pins a period-`N` point inside it. The
//! minus side mirrors the construction with `A_0 = (0, disc)`, critical
//! image `T^n(disc^-)`, and the undershoot condition.

use serde::Serialize;
use thiserror::Error;

use crate::birkhoff::{BoundaryBase, BoundaryLimsupEstimate, LimsupConfig, PiecewisePotential};
use crate::maps::{BetaMap, Branch, MapError, Side, SidedPoint};
use crate::scalar::Scalar;
use crate::symbolic::{boundary_cylinder, BasePoint, Cylinder};

/// Margin for the discontinuity-membership test in float mode.
pub const TAU_CUT: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CuttingError {
    #[error("degenerate component selection at step {step} ({side:?} side): {reason}")]
    DegenerateComponent {
        step: u32,
        side: OrbitSide,
        reason: String,
    },
    #[error("solved fixed point {p} escaped its cylinder ({a}, {b})")]
    FixedPointEscaped { p: f64, a: f64, b: f64 },
    #[error("record is not admissible (step {step})")]
    NotAdmissible { step: u32 },
    #[error("need at least {needed} records on the matching side, got {got}")]
    InsufficientRecords { needed: usize, got: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Which side of the discontinuity a construction lives on. `Plus` tracks
/// `disc^+` (whose orbit continues through 0), `Minus` tracks `disc^-`
/// (through 1).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitSide {
    Plus,
    Minus,
}

impl OrbitSide {
    pub fn label(self) -> &'static str {
        match self {
            OrbitSide::Plus => "plus",
            OrbitSide::Minus => "minus",
        }
    }

    pub fn flank(self) -> BasePoint {
        match self {
            OrbitSide::Plus => BasePoint::DiscPlus,
            OrbitSide::Minus => BasePoint::DiscMinus,
        }
    }

    /// The boundary base point the side's limsup collapses to.
    pub fn base(self) -> BoundaryBase {
        match self {
            OrbitSide::Plus => BoundaryBase::Zero,
            OrbitSide::Minus => BoundaryBase::One,
        }
    }
}

/// State of the auxiliary recursion after `step` iterations.
#[derive(Clone, Debug)]
pub struct AuxSetState<S> {
    pub step: u32,
    pub side: OrbitSide,
    /// Open interval `A_step = (lo, hi)`.
    pub lo: S,
    pub hi: S,
    /// The critical image `T^step(disc^side)`, carried with its side.
    pub critical: SidedPoint<S>,
    /// Whether the discontinuity lies strictly inside the interval.
    pub contains_disc: bool,
    /// Float mode only: the membership test ran within `10 * TAU_CUT` of an
    /// interval endpoint.
    pub near_boundary: bool,
}

fn tau_cut<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        TAU_CUT
    }
}

fn classify_state<S: Scalar>(map: &BetaMap<S>, side: OrbitSide, step: u32, lo: S, hi: S, critical: SidedPoint<S>) -> AuxSetState<S> {
    let tau = tau_cut::<S>();
    let disc = map.disc();
    let lo_gap = (disc.clone() - lo.clone()).to_f64();
    let hi_gap = (hi.clone() - disc.clone()).to_f64();
    let contains_disc = lo_gap > tau && hi_gap > tau;
    let near_boundary = !S::EXACT && (lo_gap.abs() <= 10.0 * TAU_CUT || hi_gap.abs() <= 10.0 * TAU_CUT);
    AuxSetState {
        step,
        side,
        lo,
        hi,
        critical,
        contains_disc,
        near_boundary,
    }
}

/// `A_0` for the chosen side.
pub fn aux_initial<S: Scalar>(map: &BetaMap<S>, side: OrbitSide) -> AuxSetState<S> {
    let (lo, hi, critical) = match side {
        OrbitSide::Plus => (
            map.disc().clone(),
            S::one(),
            SidedPoint::new(map.disc().clone(), Side::Right),
        ),
        OrbitSide::Minus => (
            S::zero(),
            map.disc().clone(),
            SidedPoint::new(map.disc().clone(), Side::Left),
        ),
    };
    classify_state(map, side, 0, lo, hi, critical)
}

/// One step of the recursion. At a cutting step the component of
/// `A_n \ {disc}` holding the critical image is selected before mapping;
/// the selection is refused (rather than guessed) when the critical image
/// sits at the split point, or at an interval endpoint that the map fixes —
/// the doubling-style case `T(disc^+) = 0 = T(0)` where the recursion would
/// loop without progress.
pub fn aux_step<S: Scalar>(
    map: &BetaMap<S>,
    state: &AuxSetState<S>,
) -> Result<AuxSetState<S>, CuttingError> {
    let tau = tau_cut::<S>();
    let disc = map.disc();
    let c = &state.critical;

    let (seg_lo, seg_hi) = if state.contains_disc {
        if c.x.approx_eq(disc, tau) {
            return Err(CuttingError::DegenerateComponent {
                step: state.step,
                side: state.side,
                reason: "critical image at the discontinuity".into(),
            });
        }
        let at_endpoint =
            c.x.approx_eq(&state.lo, tau) || c.x.approx_eq(&state.hi, tau);
        if at_endpoint {
            let image = map.eval(c)?;
            if image.x.approx_eq(&c.x, tau) {
                return Err(CuttingError::DegenerateComponent {
                    step: state.step,
                    side: state.side,
                    reason: "critical image at a fixed endpoint of the interval".into(),
                });
            }
        }
        if c.x < *disc {
            (state.lo.clone(), disc.clone())
        } else {
            (disc.clone(), state.hi.clone())
        }
    } else {
        (state.lo.clone(), state.hi.clone())
    };

    // endpoints of an open interval carry the inward approach side, so the
    // one-sided limits at the discontinuity come out exactly
    let lo_next = map.eval(&SidedPoint::new(seg_lo, Side::Right))?.x;
    let hi_next = map.eval(&SidedPoint::new(seg_hi, Side::Left))?.x;
    let critical = map.eval(c)?;
    Ok(classify_state(
        map,
        state.side,
        state.step + 1,
        lo_next,
        hi_next,
        critical,
    ))
}

/// A cutting time together with the flanking cylinder and the admissibility
/// of the periodic-point construction.
#[derive(Clone, Debug)]
pub struct CuttingRecord<S> {
    pub step: u32,
    pub side: OrbitSide,
    /// The depth-`step` cylinder abutting the discontinuity on this side.
    pub cylinder: Cylinder<S>,
    /// Overshoot (plus side) / undershoot (minus side) of the free endpoint
    /// under the branch composition.
    pub admissible: bool,
    /// Float mode: the membership decision ran close to tolerance.
    pub tolerance_sensitive: bool,
}

impl<S: Scalar> CuttingRecord<S> {
    /// Interval check of the covering relation: the image of the cylinder
    /// closure contains the closure.
    pub fn covering(&self) -> bool {
        let (ya, yb) = self.cylinder.image();
        ya <= self.cylinder.a && yb >= self.cylinder.b
    }
}

fn record_at<S: Scalar>(map: &BetaMap<S>, side: OrbitSide, step: u32) -> CuttingRecord<S> {
    let cylinder = boundary_cylinder(map, side.flank(), step);
    let (ya, yb) = cylinder.image();
    let admissible = match side {
        OrbitSide::Plus => yb > cylinder.b,
        OrbitSide::Minus => ya < cylinder.a,
    };
    let tolerance_sensitive = !S::EXACT && {
        let margin = match side {
            OrbitSide::Plus => (yb.to_f64() - cylinder.b.to_f64()).abs(),
            OrbitSide::Minus => (cylinder.a.to_f64() - ya.to_f64()).abs(),
        };
        margin <= 10.0 * TAU_CUT
    };
    CuttingRecord {
        step,
        side,
        cylinder,
        admissible,
        tolerance_sensitive,
    }
}

/// Result of scanning the recursion for cutting times. A degeneracy stops
/// the scan on its side; everything collected up to that step is kept.
#[derive(Clone, Debug)]
pub struct CuttingScan<S> {
    pub records: Vec<CuttingRecord<S>>,
    pub degenerate_at: Option<(u32, OrbitSide, String)>,
}

impl<S: Scalar> CuttingScan<S> {
    pub fn admissible(&self, side: OrbitSide) -> Vec<&CuttingRecord<S>> {
        self.records
            .iter()
            .filter(|r| r.side == side && r.admissible)
            .collect()
    }
}

/// All cutting times up to `n_max` on one side, via the recursion.
pub fn cutting_times_side<S: Scalar>(
    map: &BetaMap<S>,
    side: OrbitSide,
    n_max: u32,
) -> CuttingScan<S> {
    let mut records = Vec::new();
    let mut degenerate_at = None;
    let mut state = aux_initial(map, side);
    while state.step < n_max {
        match aux_step(map, &state) {
            Ok(next) => state = next,
            Err(CuttingError::DegenerateComponent { step, side, reason }) => {
                degenerate_at = Some((step, side, reason));
                break;
            }
            Err(_) => unreachable!("aux_step only fails with DegenerateComponent"),
        }
        if state.contains_disc {
            let mut rec = record_at(map, side, state.step);
            rec.tolerance_sensitive |= state.near_boundary;
            records.push(rec);
        }
    }
    CuttingScan {
        records,
        degenerate_at,
    }
}

/// Cutting times on both sides, merged and ordered by step.
pub fn cutting_times<S: Scalar>(map: &BetaMap<S>, n_max: u32) -> CuttingScan<S> {
    let plus = cutting_times_side(map, OrbitSide::Plus, n_max);
    let minus = cutting_times_side(map, OrbitSide::Minus, n_max);
    let mut records = plus.records;
    records.extend(minus.records);
    records.sort_by_key(|r| (r.step, r.side == OrbitSide::Minus));
    let degenerate_at = match (plus.degenerate_at, minus.degenerate_at) {
        (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
        (a, b) => a.or(b),
    };
    CuttingScan {
        records,
        degenerate_at,
    }
}

/// Direct cutting-time test at a single depth: build the flanking cylinder,
/// image it, and test membership of the discontinuity. Equivalent to the
/// recursion wherever the recursion is defined (the image of the flank
/// cylinder *is* the auxiliary interval), and still available for maps
/// whose recursion degenerates.
pub fn flank_record<S: Scalar>(
    map: &BetaMap<S>,
    side: OrbitSide,
    depth: u32,
) -> Option<CuttingRecord<S>> {
    let rec = record_at(map, side, depth);
    let (ya, yb) = rec.cylinder.image();
    let tau = tau_cut::<S>();
    let disc = map.disc();
    let inside = (disc.clone() - ya).to_f64() > tau && (yb - disc.clone()).to_f64() > tau;
    if inside {
        Some(rec)
    } else {
        None
    }
}

/// All admissible records on one side found by the direct per-depth test.
pub fn admissible_flank_records<S: Scalar>(
    map: &BetaMap<S>,
    side: OrbitSide,
    n_max: u32,
) -> Vec<CuttingRecord<S>> {
    (1..=n_max)
        .filter_map(|n| flank_record(map, side, n))
        .filter(|r| r.admissible)
        .collect()
}

/// A verified periodic orbit extracted from a flanking cylinder.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicOrbit {
    pub period: u32,
    pub side: OrbitSide,
    /// The fixed point of the branch composition, in float view.
    pub point: f64,
    /// The full orbit `p, T(p), ..., T^{period-1}(p)`.
    pub points: Vec<f64>,
    /// Itinerary of the orbit (the cylinder word).
    #[serde(skip)]
    pub word: Vec<Branch>,
    /// `|T^period(p) - p|`; exactly zero when solved in exact arithmetic.
    pub residual: f64,
    pub cylinder_a: f64,
    pub cylinder_b: f64,
    /// Solved in exact arithmetic.
    pub exact: bool,
}

impl PeriodicOrbit {
    /// Birkhoff average of the potential over the stored orbit, pieces
    /// selected by the itinerary word. This is the integral against the
    /// orbit's invariant measure.
    pub fn birkhoff_average(&self, phi: &PiecewisePotential) -> f64 {
        let n = self.points.len() as f64;
        self.points
            .iter()
            .zip(self.word.iter())
            .map(|(&x, &branch)| phi.eval_piece(branch, x))
            .sum::<f64>()
            / n
    }
}

/// Solve the fixed point of the branch composition on an admissible
/// record's cylinder: `p = intercept / (1 - slope)`, exact up to the
/// arithmetic of the map. The solved point must land strictly inside the
/// cylinder; escape signals admissibility misdetection near tolerance.
pub fn periodic_from_cutting<S: Scalar>(
    map: &BetaMap<S>,
    rec: &CuttingRecord<S>,
) -> Result<PeriodicOrbit, CuttingError> {
    if !rec.admissible {
        return Err(CuttingError::NotAdmissible { step: rec.step });
    }
    let cyl = &rec.cylinder;
    let p = cyl.intercept.clone() / (S::one() - cyl.slope.clone());
    if !(p > cyl.a && p < cyl.b) {
        return Err(CuttingError::FixedPointEscaped {
            p: p.to_f64(),
            a: cyl.a.to_f64(),
            b: cyl.b.to_f64(),
        });
    }
    // walk the word; for interior points the word is the true itinerary
    let mut points = Vec::with_capacity(cyl.word.len());
    let mut x = p.clone();
    for &branch in &cyl.word {
        points.push(x.to_f64());
        x = map.apply_branch(branch, &x);
    }
    let residual = if S::EXACT {
        debug_assert!(x == p, "exact affine fixed point must close up");
        if x == p {
            0.0
        } else {
            (x - p.clone()).to_f64().abs()
        }
    } else {
        (x.to_f64() - p.to_f64()).abs()
    };
    Ok(PeriodicOrbit {
        period: rec.step,
        side: rec.side,
        point: p.to_f64(),
        points,
        word: cyl.word.clone(),
        residual,
        cylinder_a: cyl.a.to_f64(),
        cylinder_b: cyl.b.to_f64(),
        exact: S::EXACT,
    })
}

/// One entry of the periodic-average convergence diagnostic.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergencePoint {
    pub period: u32,
    pub average: f64,
}

/// Periodic-orbit Birkhoff averages against the boundary-limsup reference:
/// as the periods grow the averages track the limsup at the matching base
/// point.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub base: BoundaryBase,
    pub points: Vec<ConvergencePoint>,
    pub reference: BoundaryLimsupEstimate,
    /// |last average - reference value|.
    pub final_deviation: f64,
}

pub fn orbit_average_convergence<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    records: &[&CuttingRecord<S>],
    base: BoundaryBase,
    cfg: &LimsupConfig,
) -> Result<ConvergenceReport, CuttingError> {
    let side = match base {
        BoundaryBase::Zero => OrbitSide::Plus,
        BoundaryBase::One => OrbitSide::Minus,
    };
    let matching: Vec<&&CuttingRecord<S>> = records
        .iter()
        .filter(|r| r.side == side && r.admissible)
        .collect();
    if matching.len() < 2 {
        return Err(CuttingError::InsufficientRecords {
            needed: 2,
            got: matching.len(),
        });
    }
    let mut points = Vec::with_capacity(matching.len());
    for rec in &matching {
        let orbit = periodic_from_cutting(map, rec)?;
        points.push(ConvergencePoint {
            period: orbit.period,
            average: orbit.birkhoff_average(phi),
        });
    }
    points.sort_by_key(|p| p.period);
    let reference = crate::birkhoff::boundary_limsup(map, phi, base, cfg);
    let final_deviation = (points.last().unwrap().average - reference.value).abs();
    Ok(ConvergenceReport {
        base,
        points,
        reference,
        final_deviation,
    })
}

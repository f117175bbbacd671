//! Tent-bump perturbations along periodic orbits, and the search that
//! pushes a potential across the pressure-gap threshold.
//!
//! Given admissible cutting records on both sides of the discontinuity, the
//! perturbed potential adds a tent of height `epsilon` at every point of
//! both periodic orbits, with a common radius chosen so the supports are
//! pairwise disjoint and clear of `{0, disc, 1}`. Each defining orbit then
//! sits on bump peaks, so its Birkhoff average rises by exactly `epsilon`
//! while the sup-norm moves by no more than `epsilon`; shrinking the radius
//! (the index `l`) keeps the boundary pressure pinned to that of the base
//! potential once the supports miss the truncated boundary orbits.

use serde::Serialize;
use thiserror::Error;

use crate::birkhoff::{
    boundary_orbit_points, sup_norm_distance, BumpTerm, LimsupConfig, PiecewisePotential,
};
use crate::cutting::{
    admissible_flank_records, cutting_times_side, periodic_from_cutting, CuttingError,
    CuttingRecord, OrbitSide, PeriodicOrbit,
};
use crate::maps::BetaMap;
use crate::pressure::{
    boundary_pressure_shortcut, h_membership, h_membership_with_witnesses, GapConfig, GapVerdict,
    PressureError, Verdict,
};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("epsilon must be positive (got {0})")]
    InvalidEpsilon(f64),
    #[error("shrink index must be at least 1")]
    InvalidShrink,
    #[error("orbit points collide within resolution; no disjoint bump radius exists")]
    DisjointnessImpossible,
    #[error("a truncated boundary orbit meets the bump orbit exactly (step {step})")]
    OrbitOverlap { step: usize },
    #[error("no admissible records on the {side:?} side within depth {depth_cap}")]
    NoRecords { side: OrbitSide, depth_cap: u32 },
    #[error("search budget of {budget} constructions exhausted; best gap {best_gap}")]
    BudgetExhausted {
        budget: u64,
        best_gap: f64,
        best: Option<Box<(PerturbedPotential, GapVerdict)>>,
        attempts: Vec<AttemptSummary>,
    },
    #[error(transparent)]
    Cutting(#[from] CuttingError),
    #[error(transparent)]
    Pressure(#[from] PressureError),
}

/// Bumps of height `epsilon` and radius `delta_base / shrink` centered on
/// one periodic orbit.
#[derive(Clone, Debug, Serialize)]
pub struct BumpFamily {
    pub side: OrbitSide,
    pub orbit: PeriodicOrbit,
    pub epsilon: f64,
    /// Base radius guaranteeing disjoint supports clear of `{0, disc, 1}`.
    pub delta_base: f64,
    /// Shrink index `l >= 1`.
    pub shrink: u32,
    /// Effective radius `delta_base / shrink`.
    pub delta: f64,
}

impl BumpFamily {
    pub fn eval(&self, x: f64) -> f64 {
        for &c in &self.orbit.points {
            let t = 1.0 - (x - c).abs() / self.delta;
            if t > 0.0 {
                return self.epsilon * t;
            }
        }
        0.0
    }

    pub fn bumps(&self) -> Vec<BumpTerm> {
        self.orbit
            .points
            .iter()
            .map(|&c| BumpTerm {
                center: c,
                radius: self.delta,
                height: self.epsilon,
            })
            .collect()
    }

    /// A potential holding just this family's bumps (zero elsewhere).
    pub fn as_potential(&self, disc: f64) -> PiecewisePotential {
        let mut phi = PiecewisePotential::zero();
        attach_bumps(&mut phi, &self.bumps(), disc);
        phi.holder.k = self.epsilon / self.delta;
        phi.sup_bound = self.epsilon;
        phi
    }
}

fn attach_bumps(phi: &mut PiecewisePotential, bumps: &[BumpTerm], disc: f64) {
    for &bump in bumps {
        if bump.center < disc {
            phi.left.bumps.push(bump);
        } else {
            phi.right.bumps.push(bump);
        }
    }
}

/// The two flanking orbits may share points (for period-2 words they are
/// the same cycle entered at different phases); shared centers carry a
/// single bump. Points closer than this merge.
const CENTER_MERGE_TOL: f64 = 1e-12;

/// Distinct bump centers from the union of both orbits.
fn merged_centers(points: &[f64]) -> Vec<f64> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    for p in sorted {
        match out.last() {
            Some(&last) if p - last <= CENTER_MERGE_TOL => {}
            _ => out.push(p),
        }
    }
    out
}

/// Largest bump radius keeping all supports pairwise disjoint and clear of
/// `{0, disc, 1}`: 0.4 times the minimum pairwise gap, capped by half the
/// minimum distance to the boundary points.
fn disjoint_radius(centers: &[f64], disc: f64) -> Result<f64, PerturbError> {
    let mut min_gap = f64::INFINITY;
    for w in centers.windows(2) {
        min_gap = min_gap.min(w[1] - w[0]);
    }
    let min_boundary = centers
        .iter()
        .map(|&p| p.min(1.0 - p).min((p - disc).abs()))
        .fold(f64::INFINITY, f64::min);
    let radius = (0.4 * min_gap).min(0.5 * min_boundary);
    if !(radius > 1e-13) {
        return Err(PerturbError::DisjointnessImpossible);
    }
    Ok(radius)
}

/// The base potential together with both bump families and the combined
/// perturbation. With disjoint nonnegative bumps the pointwise maximum of
/// the two one-sided perturbations equals the base plus all bumps, which is
/// how the combined potential is represented.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbedPotential {
    pub base: PiecewisePotential,
    pub plus: BumpFamily,
    pub minus: BumpFamily,
    pub combined: PiecewisePotential,
    /// Measured rise of the defining-orbit Birkhoff averages.
    pub increment_plus: f64,
    pub increment_minus: f64,
}

impl PerturbedPotential {
    pub fn epsilon(&self) -> f64 {
        self.plus.epsilon
    }

    pub fn sup_distance_from_base(&self, disc: f64) -> f64 {
        sup_norm_distance(&self.combined, &self.base, disc)
    }
}

/// Build the perturbed potential for one pair of admissible records.
pub fn build_perturbed<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    epsilon: f64,
    rec_plus: &CuttingRecord<S>,
    rec_minus: &CuttingRecord<S>,
    shrink: u32,
) -> Result<PerturbedPotential, PerturbError> {
    if !(epsilon > 0.0) {
        return Err(PerturbError::InvalidEpsilon(epsilon));
    }
    if shrink < 1 {
        return Err(PerturbError::InvalidShrink);
    }
    let orbit_plus = periodic_from_cutting(map, rec_plus)?;
    let orbit_minus = periodic_from_cutting(map, rec_minus)?;
    let disc = map.disc_f64();
    let mut all_points = orbit_plus.points.clone();
    all_points.extend_from_slice(&orbit_minus.points);
    let centers = merged_centers(&all_points);
    let delta_base = disjoint_radius(&centers, disc)?;
    let delta = delta_base / shrink as f64;

    let plus = BumpFamily {
        side: OrbitSide::Plus,
        orbit: orbit_plus,
        epsilon,
        delta_base,
        shrink,
        delta,
    };
    let minus = BumpFamily {
        side: OrbitSide::Minus,
        orbit: orbit_minus,
        epsilon,
        delta_base,
        shrink,
        delta,
    };

    let mut combined = phi.clone();
    let bumps: Vec<BumpTerm> = centers
        .iter()
        .map(|&c| BumpTerm {
            center: c,
            radius: delta,
            height: epsilon,
        })
        .collect();
    attach_bumps(&mut combined, &bumps, disc);
    combined.holder.k += epsilon / delta;
    combined.sup_bound += epsilon;

    let increment_plus =
        plus.orbit.birkhoff_average(&combined) - plus.orbit.birkhoff_average(phi);
    let increment_minus =
        minus.orbit.birkhoff_average(&combined) - minus.orbit.birkhoff_average(phi);

    Ok(PerturbedPotential {
        base: phi.clone(),
        plus,
        minus,
        combined,
        increment_plus,
        increment_minus,
    })
}

/// The truncated boundary orbits exactly as the limsup estimator visits
/// them (both bases concatenated).
fn truncated_boundary_orbits<S: Scalar>(map: &BetaMap<S>, cfg: &LimsupConfig) -> Vec<f64> {
    let mut pts = boundary_orbit_points(map, crate::birkhoff::BoundaryBase::Zero, cfg);
    pts.extend(boundary_orbit_points(
        map,
        crate::birkhoff::BoundaryBase::One,
        cfg,
    ));
    pts
}

/// First index (within the concatenated truncated orbits) sitting inside
/// one of the supports, if any.
fn orbit_support_entry(orbit_points: &[f64], centers: &[f64], delta: f64) -> Option<usize> {
    orbit_points
        .iter()
        .position(|&x| centers.iter().any(|&c| (x - c).abs() < delta))
}

/// Minimum distance from the truncated boundary orbits to the centers.
fn orbit_min_distance(orbit_points: &[f64], centers: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for &x in orbit_points {
        for &c in centers {
            best = best.min((x - c).abs());
        }
    }
    best
}

/// One entry of the bump-boundary-pressure decay series.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayPoint {
    pub shrink: u32,
    pub value: f64,
    /// First step at which a truncated boundary orbit sits inside a
    /// support, when that happens (the value may then be positive; it is
    /// reported, not hidden).
    pub overlap_at: Option<usize>,
}

/// Boundary pressure of the bump potential alone, per shrink index: it
/// vanishes for every `l` large enough that the supports miss the
/// truncated orbits of 0 and 1. A boundary orbit passing exactly through a
/// bump center can never be shrunk away and is a hard error.
pub fn bump_boundary_pressure_decay<S: Scalar>(
    map: &BetaMap<S>,
    family: &BumpFamily,
    shrinks: &[u32],
    cfg: &LimsupConfig,
) -> Result<Vec<DecayPoint>, PerturbError> {
    let centers = &family.orbit.points;
    let orbit_points = truncated_boundary_orbits(map, cfg);
    if let Some(step) = orbit_support_entry(&orbit_points, centers, 1e-15) {
        return Err(PerturbError::OrbitOverlap { step });
    }
    let disc = map.disc_f64();
    let mut out = Vec::with_capacity(shrinks.len());
    for &l in shrinks {
        if l < 1 {
            return Err(PerturbError::InvalidShrink);
        }
        let shrunk = BumpFamily {
            shrink: l,
            delta: family.delta_base / l as f64,
            ..family.clone()
        };
        let pot = shrunk.as_potential(disc);
        let bp = boundary_pressure_shortcut(map, &pot, cfg);
        let overlap_at = orbit_support_entry(&orbit_points, centers, shrunk.delta);
        out.push(DecayPoint {
            shrink: l,
            value: bp.value,
            overlap_at,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AttemptSummary {
    pub plus_period: u32,
    pub minus_period: u32,
    pub shrink: u32,
    pub gap_lo: f64,
    pub verdict: Verdict,
}

/// Outcome of the densification search.
#[derive(Debug)]
pub enum DensifyOutcome {
    /// The base potential already clears the margin; nothing is built.
    AlreadyCertified(GapVerdict),
    /// A perturbation crossed the margin.
    Perturbed {
        potential: Box<PerturbedPotential>,
        verdict: GapVerdict,
        attempts: Vec<AttemptSummary>,
    },
}

#[derive(Clone, Debug)]
pub struct DensifyConfig {
    pub gap: GapConfig,
    /// Largest record depth considered on each side.
    pub depth_cap: u32,
    pub limsup: LimsupConfig,
}

impl Default for DensifyConfig {
    fn default() -> Self {
        DensifyConfig {
            gap: GapConfig::default(),
            depth_cap: 30,
            limsup: LimsupConfig::default(),
        }
    }
}

fn side_records<S: Scalar>(
    map: &BetaMap<S>,
    side: OrbitSide,
    depth_cap: u32,
) -> Vec<CuttingRecord<S>> {
    let scan = cutting_times_side(map, side, depth_cap);
    let mut records: Vec<CuttingRecord<S>> = scan
        .records
        .into_iter()
        .filter(|r| r.admissible)
        .collect();
    if scan.degenerate_at.is_some() {
        // recursion truncated: extend with the direct per-depth test, which
        // agrees with the recursion wherever both are defined
        let have: Vec<u32> = records.iter().map(|r| r.step).collect();
        for rec in admissible_flank_records(map, side, depth_cap) {
            if !have.contains(&rec.step) {
                records.push(rec);
            }
        }
        records.sort_by_key(|r| r.step);
    }
    records
}

/// Search for a perturbation of `phi` within sup-distance `epsilon` whose
/// pressure gap clears the margin. Candidate pairs of admissible records
/// are taken in ascending depth; for each pair the shrink index starts at 1
/// and jumps to the first value whose supports miss the truncated boundary
/// orbits. Every attempt is scored by the membership test with the pair's
/// periodic averages as certified lower-bound witnesses; the best gap seen
/// is carried in the budget-exhausted error.
pub fn densify<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    epsilon: f64,
    budget: u64,
    cfg: &DensifyConfig,
) -> Result<DensifyOutcome, PerturbError> {
    if !(epsilon > 0.0) {
        return Err(PerturbError::InvalidEpsilon(epsilon));
    }
    let base_verdict = h_membership(map, phi, &cfg.gap)?;
    if base_verdict.verdict == Verdict::InH {
        return Ok(DensifyOutcome::AlreadyCertified(base_verdict));
    }

    let plus_records = side_records(map, OrbitSide::Plus, cfg.depth_cap);
    let minus_records = side_records(map, OrbitSide::Minus, cfg.depth_cap);
    if plus_records.is_empty() {
        return Err(PerturbError::NoRecords {
            side: OrbitSide::Plus,
            depth_cap: cfg.depth_cap,
        });
    }
    if minus_records.is_empty() {
        return Err(PerturbError::NoRecords {
            side: OrbitSide::Minus,
            depth_cap: cfg.depth_cap,
        });
    }

    let pairs = plus_records.len().min(minus_records.len());
    let mut attempts = Vec::new();
    let mut best: Option<Box<(PerturbedPotential, GapVerdict)>> = None;
    let mut best_gap = base_verdict.gap_lo;
    let mut used = 0u64;
    'search: for k in 0..pairs {
        let rec_plus = &plus_records[k];
        let rec_minus = &minus_records[k];
        // shrink ladder: start wide, then jump straight to the first index
        // whose supports clear the truncated boundary orbits
        let first = build_perturbed(map, phi, epsilon, rec_plus, rec_minus, 1)?;
        let mut centers = first.plus.orbit.points.clone();
        centers.extend_from_slice(&first.minus.orbit.points);
        let orbit_points = truncated_boundary_orbits(map, &cfg.limsup);
        let miss_dist = orbit_min_distance(&orbit_points, &centers);
        let mut shrinks = vec![1u32];
        if miss_dist > 0.0 && first.plus.delta >= miss_dist {
            let l = (first.plus.delta_base / (0.9 * miss_dist)).ceil() as u32;
            if l > 1 {
                shrinks.push(l);
            }
        }
        for l in shrinks {
            if used >= budget {
                break 'search;
            }
            used += 1;
            let candidate = if l == 1 {
                first.clone()
            } else {
                build_perturbed(map, phi, epsilon, rec_plus, rec_minus, l)?
            };
            let verdict = h_membership_with_witnesses(
                map,
                &candidate.combined,
                &cfg.gap,
                &[&candidate.plus.orbit, &candidate.minus.orbit],
            )?;
            attempts.push(AttemptSummary {
                plus_period: candidate.plus.orbit.period,
                minus_period: candidate.minus.orbit.period,
                shrink: l,
                gap_lo: verdict.gap_lo,
                verdict: verdict.verdict,
            });
            if verdict.gap_lo > best_gap {
                best_gap = verdict.gap_lo;
                best = Some(Box::new((candidate.clone(), verdict.clone())));
            }
            if verdict.verdict == Verdict::InH {
                return Ok(DensifyOutcome::Perturbed {
                    potential: Box::new(candidate),
                    verdict,
                    attempts,
                });
            }
        }
    }
    Err(PerturbError::BudgetExhausted {
        budget,
        best_gap,
        best,
        attempts,
    })
}

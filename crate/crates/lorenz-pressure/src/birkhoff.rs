//! Piecewise Holder potentials, Birkhoff sums, and the boundary limsups
//! `limsup (1/n) S_n phi(0)` and `limsup (1/n) S_n phi(1)`.
//!
//! A potential is one polynomial-plus-tent-bumps piece per partition
//! element, evaluated on the closures `[0, disc]` and `[disc, 1]`. The two
//! one-sided values at the discontinuity may differ. The declared Holder
//! exponent is named `a` throughout (the conventional exponent letter
//! collides with the map offset `alpha`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{BetaMap, Branch, MapError, SidedPoint, TAU_D};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("invalid potential: {0}")]
    Invalid(String),
}

/// A tent bump: peak `height` at `center`, linear to zero at distance
/// `radius`, zero outside. Lipschitz with constant `|height|/radius`, hence
/// in every Holder class with exponent at most 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BumpTerm {
    pub center: f64,
    pub radius: f64,
    pub height: f64,
}

impl BumpTerm {
    pub fn eval(&self, x: f64) -> f64 {
        let t = 1.0 - (x - self.center).abs() / self.radius;
        if t > 0.0 {
            self.height * t
        } else {
            0.0
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }
}

/// One evaluable piece: polynomial coefficients (constant term first) plus
/// tent bump addends.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Piece {
    #[serde(default)]
    pub poly: Vec<f64>,
    #[serde(default)]
    pub bumps: Vec<BumpTerm>,
}

impl Piece {
    pub fn poly(coeffs: Vec<f64>) -> Self {
        Piece {
            poly: coeffs,
            bumps: Vec::new(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for &c in self.poly.iter().rev() {
            v = v * x + c;
        }
        for bump in &self.bumps {
            v += bump.eval(x);
        }
        v
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HolderData {
    /// Exponent `a` in `(0, 1]`.
    pub a: f64,
    /// Constant `K >= 0` bounding `|phi(x) - phi(y)| / |x - y|^a` per piece.
    #[serde(rename = "K")]
    pub k: f64,
}

/// A piecewise Holder potential on the two-piece partition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PiecewisePotential {
    pub left: Piece,
    pub right: Piece,
    pub holder: HolderData,
    pub sup_bound: f64,
}

impl PiecewisePotential {
    pub fn new(left: Piece, right: Piece, holder: HolderData, sup_bound: f64) -> Result<Self, PotentialError> {
        if !(holder.a > 0.0 && holder.a <= 1.0) {
            return Err(PotentialError::Invalid(format!(
                "holder exponent a = {} outside (0, 1]",
                holder.a
            )));
        }
        if !(holder.k >= 0.0) || !holder.k.is_finite() {
            return Err(PotentialError::Invalid(format!(
                "holder constant K = {} invalid",
                holder.k
            )));
        }
        if !sup_bound.is_finite() {
            return Err(PotentialError::Invalid("sup_bound must be finite".into()));
        }
        Ok(PiecewisePotential {
            left,
            right,
            holder,
            sup_bound,
        })
    }

    /// The zero potential (Holder constant 0).
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        PiecewisePotential {
            left: Piece::poly(vec![c]),
            right: Piece::poly(vec![c]),
            holder: HolderData { a: 1.0, k: 0.0 },
            sup_bound: c.abs(),
        }
    }

    /// Same polynomial on both pieces; `K` defaults to the derivative bound
    /// `sum i*|c_i|` on `[0, 1]`.
    pub fn from_poly(coeffs: Vec<f64>) -> Self {
        let k = poly_lipschitz_bound(&coeffs);
        let sup = coeffs.iter().map(|c| c.abs()).sum();
        PiecewisePotential {
            left: Piece::poly(coeffs.clone()),
            right: Piece::poly(coeffs),
            holder: HolderData { a: 1.0, k },
            sup_bound: sup,
        }
    }

    pub fn from_pieces(left_poly: Vec<f64>, right_poly: Vec<f64>) -> Self {
        let k = poly_lipschitz_bound(&left_poly).max(poly_lipschitz_bound(&right_poly));
        let sup = left_poly
            .iter()
            .chain(right_poly.iter())
            .map(|c| c.abs())
            .sum();
        PiecewisePotential {
            left: Piece::poly(left_poly),
            right: Piece::poly(right_poly),
            holder: HolderData { a: 1.0, k },
            sup_bound: sup,
        }
    }

    pub fn piece(&self, branch: Branch) -> &Piece {
        match branch {
            Branch::Left => &self.left,
            Branch::Right => &self.right,
        }
    }

    /// Evaluate the chosen piece regardless of where `x` sits; used when an
    /// itinerary word certifies the piece.
    pub fn eval_piece(&self, branch: Branch, x: f64) -> f64 {
        self.piece(branch).eval(x)
    }

    /// Evaluate by position and approach side.
    pub fn eval_sided<S: Scalar>(
        &self,
        map: &BetaMap<S>,
        p: &SidedPoint<S>,
    ) -> Result<f64, MapError> {
        let branch = map.classify(p)?;
        Ok(self.eval_piece(branch, p.x.to_f64()))
    }

    /// The potential shifted by a constant.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        if out.left.poly.is_empty() {
            out.left.poly.push(0.0);
        }
        if out.right.poly.is_empty() {
            out.right.poly.push(0.0);
        }
        out.left.poly[0] += c;
        out.right.poly[0] += c;
        out.sup_bound += c.abs();
        out
    }

    /// Largest tent slope among the bumps, used to extend the declared
    /// Holder constant when bumps are attached.
    pub fn max_bump_slope(&self) -> f64 {
        self.left
            .bumps
            .iter()
            .chain(self.right.bumps.iter())
            .map(|b| (b.height / b.radius).abs())
            .fold(0.0, f64::max)
    }
}

/// Bound on `sup |p'(x)|` over `[0, 1]`: `sum i * |c_i|`.
pub fn poly_lipschitz_bound(coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c.abs())
        .sum()
}

/// Sup-norm distance `max over [0, 1] of |phi - psi|`, piecewise.
///
/// Each piece is split at every tent kink of either potential; on the
/// resulting segments the difference is a single polynomial (tents are
/// linear between kinks). Degree <= 3 segments are maximized exactly
/// through the quadratic roots of the derivative; higher degrees fall back
/// to dense sampling of the segment.
pub fn sup_norm_distance(phi: &PiecewisePotential, psi: &PiecewisePotential, disc: f64) -> f64 {
    let left = piece_sup_distance(&phi.left, &psi.left, 0.0, disc);
    let right = piece_sup_distance(&phi.right, &psi.right, disc, 1.0);
    left.max(right)
}

fn piece_sup_distance(a: &Piece, b: &Piece, lo: f64, hi: f64) -> f64 {
    let mut cuts = vec![lo, hi];
    for bump in a.bumps.iter().chain(b.bumps.iter()) {
        for x in [bump.center - bump.radius, bump.center, bump.center + bump.radius] {
            if x > lo && x < hi {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    // the assembled segment polynomial only locates interior extremum
    // candidates; values are taken through the piece evaluators, whose tent
    // arithmetic does not cancel for narrow bumps
    let diff_at = |x: f64| (a.eval(x) - b.eval(x)).abs();
    let mut best = 0.0f64;
    for w in cuts.windows(2) {
        let (s, e) = (w[0], w[1]);
        if e <= s {
            continue;
        }
        best = best.max(diff_at(s)).max(diff_at(e));
        let deg = a.poly.len().max(b.poly.len()).max(2);
        let mut diff = vec![0.0; deg];
        for (i, &c) in a.poly.iter().enumerate() {
            diff[i] += c;
        }
        for (i, &c) in b.poly.iter().enumerate() {
            diff[i] -= c;
        }
        let mid = 0.5 * (s + e);
        for (sign, piece) in [(1.0, a), (-1.0, b)] {
            for bump in &piece.bumps {
                if mid > bump.center - bump.radius && mid < bump.center + bump.radius {
                    // tent(x) = height - |x - center| * height/radius is
                    // linear on this segment
                    let slope = if mid < bump.center {
                        bump.height / bump.radius
                    } else {
                        -bump.height / bump.radius
                    };
                    diff[0] += sign * (bump.height - slope * bump.center);
                    diff[1] += sign * slope;
                }
            }
        }
        for x in interior_extrema(&diff, s, e) {
            best = best.max(diff_at(x));
        }
    }
    best
}

fn interior_extrema(coeffs: &[f64], s: f64, e: f64) -> Vec<f64> {
    let deg = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let mut out = Vec::new();
    match deg {
        0 | 1 => {}
        2 => {
            let x = -coeffs[1] / (2.0 * coeffs[2]);
            if x > s && x < e {
                out.push(x);
            }
        }
        3 => {
            // derivative: c1 + 2 c2 x + 3 c3 x^2
            let (a2, a1, a0) = (3.0 * coeffs[3], 2.0 * coeffs[2], coeffs[1]);
            let d = a1 * a1 - 4.0 * a2 * a0;
            if d >= 0.0 {
                let r = d.sqrt();
                for x in [(-a1 - r) / (2.0 * a2), (-a1 + r) / (2.0 * a2)] {
                    if x > s && x < e {
                        out.push(x);
                    }
                }
            }
        }
        _ => {
            for i in 1..512 {
                out.push(s + (e - s) * i as f64 / 512.0);
            }
        }
    }
    out
}

/// `S_n phi(p) = sum_{i=0}^{n-1} phi(T^i p)` with sided orbit semantics.
pub fn birkhoff_sum<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    p: &SidedPoint<S>,
    n: usize,
) -> Result<f64, MapError> {
    let mut current = p.clone();
    let mut sum = 0.0;
    for i in 0..n {
        sum += phi.eval_sided(map, &current)?;
        if i + 1 < n {
            current = map.eval(&current)?;
        }
    }
    Ok(sum)
}

/// Which boundary point the limsup is anchored at.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryBase {
    Zero,
    One,
}

impl BoundaryBase {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryBase::Zero => "0",
            BoundaryBase::One => "1",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimsupMode {
    Asymptotic,
    PeriodicExact,
}

/// Estimator configuration. `n_max` and `window` drive the asymptotic tail
/// maximum; `exact_scan` caps how many exact-arithmetic steps are spent on
/// discontinuity-hit detection before the series falls back to floats
/// (exact iterates grow without bound in digit size).
#[derive(Clone, Copy, Debug)]
pub struct LimsupConfig {
    pub n_max: usize,
    pub window: usize,
    pub exact_scan: usize,
}

impl Default for LimsupConfig {
    fn default() -> Self {
        LimsupConfig {
            n_max: 2000,
            window: 200,
            exact_scan: 128,
        }
    }
}

/// Estimate of a boundary Birkhoff limsup.
///
/// When the base orbit reaches the discontinuity at step `n0` the limsup
/// collapses to the finite cyclic average `(1/n0) S_{n0} phi(base)` and the
/// estimate is exact; otherwise it is the maximum of the last `window`
/// normalized sums, reported together with the whole series.
#[derive(Clone, Debug)]
pub struct BoundaryLimsupEstimate {
    /// `series[n-1] = (1/n) S_n phi(base)`.
    pub series: Vec<f64>,
    pub mode: LimsupMode,
    pub value: f64,
    pub window: usize,
    pub hit_at: Option<usize>,
    /// True when the hit was detected only up to the float tolerance.
    pub tolerance_sensitive: bool,
}

/// How a boundary-orbit walk ended.
pub(crate) enum WalkEnd {
    /// Reached the discontinuity window at this step (>= 1).
    Hit { step: usize, exact: bool },
    Exhausted,
}

/// Drive the orbit of a boundary base point exactly as the limsup
/// estimator does: branching and hit detection in the map's own arithmetic
/// for the first `exact_scan` steps, float continuation beyond. The visitor
/// receives `(x, branch)` for each orbit point before it is stepped.
pub(crate) fn walk_boundary_orbit<S: Scalar>(
    map: &BetaMap<S>,
    base: BoundaryBase,
    cfg: &LimsupConfig,
    mut visit: impl FnMut(f64, Branch),
) -> WalkEnd {
    let start = match base {
        BoundaryBase::Zero => S::zero(),
        BoundaryBase::One => S::one(),
    };
    let scan_len = if S::EXACT {
        cfg.exact_scan.min(cfg.n_max)
    } else {
        cfg.n_max
    };
    let mut x = start;
    let mut n = 0usize;
    while n < scan_len {
        // the base points 0 and 1 are never the discontinuity itself, so a
        // hit can only occur from step 1 on
        if n > 0 && map.at_disc(&x) {
            return WalkEnd::Hit {
                step: n,
                exact: S::EXACT,
            };
        }
        let branch = if x < *map.disc() { Branch::Left } else { Branch::Right };
        visit(x.to_f64(), branch);
        n += 1;
        x = map.apply_branch(branch, &x);
    }
    if S::EXACT && n < cfg.n_max {
        let (bf, af, df) = (map.beta_f64(), map.alpha_f64(), map.disc_f64());
        let mut xf = x.to_f64();
        while n < cfg.n_max {
            if n > 0 && (xf - df).abs() <= TAU_D {
                return WalkEnd::Hit {
                    step: n,
                    exact: false,
                };
            }
            let branch = if xf < df { Branch::Left } else { Branch::Right };
            visit(xf, branch);
            n += 1;
            xf = if branch == Branch::Left {
                bf * xf + af
            } else {
                bf * xf + af - 1.0
            };
        }
    }
    WalkEnd::Exhausted
}

/// The orbit points the limsup estimator visits (up to a discontinuity
/// hit), in float view. Overlap checks against bump supports must use this
/// trajectory, not an independent float iteration, to see the same points.
pub fn boundary_orbit_points<S: Scalar>(
    map: &BetaMap<S>,
    base: BoundaryBase,
    cfg: &LimsupConfig,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(cfg.n_max);
    walk_boundary_orbit(map, base, cfg, |x, _| out.push(x));
    out
}

/// Boundary limsup at `0` or `1`. Hit detection runs in the map's own
/// arithmetic for the first `exact_scan` steps; the long series is driven in
/// floats.
pub fn boundary_limsup<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    base: BoundaryBase,
    cfg: &LimsupConfig,
) -> BoundaryLimsupEstimate {
    let mut series = Vec::with_capacity(cfg.n_max);
    let mut sum = 0.0;
    let mut n = 0usize;
    let end = walk_boundary_orbit(map, base, cfg, |x, branch| {
        sum += phi.eval_piece(branch, x);
        n += 1;
        series.push(sum / n as f64);
    });

    if let WalkEnd::Hit { step: n0, exact } = end {
        // the orbit reaches the discontinuity at step n0 >= 1: the limsup
        // equals the exact cyclic average of the first n0 terms
        let value = series[n0 - 1];
        return BoundaryLimsupEstimate {
            series: series[..n0].to_vec(),
            mode: LimsupMode::PeriodicExact,
            value,
            window: cfg.window,
            hit_at: Some(n0),
            tolerance_sensitive: !exact,
        };
    }

    let w = cfg.window.min(series.len()).max(1);
    let value = series[series.len() - w..]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    BoundaryLimsupEstimate {
        series,
        mode: LimsupMode::Asymptotic,
        value,
        window: cfg.window,
        hit_at: None,
        tolerance_sensitive: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Side;
    use num::rational::BigRational;

    fn doubling() -> BetaMap<f64> {
        BetaMap::new(2.0, 0.0).unwrap()
    }

    fn beta18() -> BetaMap<f64> {
        BetaMap::new(1.8, 0.1).unwrap()
    }

    fn identity() -> PiecewisePotential {
        PiecewisePotential::from_poly(vec![0.0, 1.0])
    }

    #[test]
    fn zero_potential_everywhere() {
        let phi = PiecewisePotential::zero();
        let m = doubling();
        for x in [0.0, 0.3, 0.5, 1.0] {
            let p = SidedPoint::new(x, Side::Left);
            assert_eq!(phi.eval_sided(&m, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn sided_values_at_disc() {
        let m = doubling();
        let phi = identity();
        let v = phi
            .eval_sided(&m, &SidedPoint::new(0.5, Side::Left))
            .unwrap();
        assert_eq!(v, 0.5);
        // pieces (x, x - 1) disagree at the discontinuity
        let psi = PiecewisePotential::from_pieces(vec![0.0, 1.0], vec![-1.0, 1.0]);
        let v = psi
            .eval_sided(&m, &SidedPoint::new(0.5, Side::Right))
            .unwrap();
        assert_eq!(v, -0.5);
        assert!(psi
            .eval_sided(&m, &SidedPoint::unsided(0.5))
            .is_err());
    }

    #[test]
    fn birkhoff_sum_period_two() {
        // doubling orbit {2/3, 1/3}: S_2 = 1
        let m = doubling();
        let s = birkhoff_sum(&m, &identity(), &SidedPoint::unsided(2.0 / 3.0), 2).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn birkhoff_sum_constant() {
        let m = beta18();
        let phi = PiecewisePotential::constant(0.7);
        let s = birkhoff_sum(&m, &phi, &SidedPoint::unsided(0.3), 9).unwrap();
        assert!((s - 9.0 * 0.7).abs() < 1e-12);
    }

    #[test]
    fn birkhoff_sum_hand_value() {
        // orbit of 0 under (1.8, 0.1): 0, 0.1, 0.28 -> S_3 = 0.38
        let m = beta18();
        let s = birkhoff_sum(&m, &identity(), &SidedPoint::unsided(0.0), 3).unwrap();
        assert!((s - 0.38).abs() < 1e-12);
    }

    #[test]
    fn birkhoff_additivity() {
        let m = beta18();
        let phi = PiecewisePotential::from_pieces(vec![0.2, -1.0, 0.5], vec![0.0, 0.3]);
        let p = SidedPoint::unsided(0.37);
        let n = 11;
        let mm = 7;
        let s_nm = birkhoff_sum(&m, &phi, &p, n + mm).unwrap();
        let s_n = birkhoff_sum(&m, &phi, &p, n).unwrap();
        let q = m.orbit(&p, n).unwrap().points.pop().unwrap();
        let s_m = birkhoff_sum(&m, &phi, &q, mm).unwrap();
        assert!((s_nm - (s_n + s_m)).abs() < (n as f64) * 1e-12);
    }

    #[test]
    fn limsup_fixed_zero_is_potential_value() {
        // 0 is fixed for the doubling map and never reaches the discontinuity
        let est = boundary_limsup(
            &doubling(),
            &identity(),
            BoundaryBase::Zero,
            &LimsupConfig::default(),
        );
        assert_eq!(est.mode, LimsupMode::Asymptotic);
        assert!(est.value.abs() < 1e-15);
    }

    #[test]
    fn limsup_golden_mean_hits_exactly() {
        let beta = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let m = BetaMap::new(beta, 0.0).unwrap();
        let phi = PiecewisePotential::from_pieces(vec![0.3], vec![0.9]);
        let est = boundary_limsup(&m, &phi, BoundaryBase::One, &LimsupConfig::default());
        assert_eq!(est.mode, LimsupMode::PeriodicExact);
        assert_eq!(est.hit_at, Some(1));
        // n0 = 1: value = phi(1) = right piece
        assert_eq!(est.value, 0.9);
        assert!(est.tolerance_sensitive);
    }

    #[test]
    fn limsup_zero_potential_is_zero() {
        for base in [BoundaryBase::Zero, BoundaryBase::One] {
            let est = boundary_limsup(
                &beta18(),
                &PiecewisePotential::zero(),
                base,
                &LimsupConfig::default(),
            );
            assert_eq!(est.value, 0.0);
        }
    }

    #[test]
    fn limsup_constant_shift() {
        let m = beta18();
        let phi = identity();
        let cfg = LimsupConfig::default();
        let base_est = boundary_limsup(&m, &phi, BoundaryBase::Zero, &cfg);
        let shifted = boundary_limsup(&m, &phi.shifted(2.5), BoundaryBase::Zero, &cfg);
        assert!((shifted.value - (base_est.value + 2.5)).abs() < 1e-9);
    }

    #[test]
    fn limsup_sup_norm_contraction() {
        // |limsup(phi) - limsup(psi)| <= sup-norm distance, matched n grid
        let m = beta18();
        let cfg = LimsupConfig::default();
        let phi = PiecewisePotential::from_pieces(vec![0.1, 0.4], vec![-0.2, 0.25]);
        let psi = PiecewisePotential::from_pieces(vec![0.15, 0.4], vec![-0.2, 0.2]);
        // sup distance: |0.05| on the left piece, |0.05 x| on the right
        let dist = 0.05;
        for base in [BoundaryBase::Zero, BoundaryBase::One] {
            let a = boundary_limsup(&m, &phi, base, &cfg);
            let b = boundary_limsup(&m, &psi, base, &cfg);
            assert!((a.value - b.value).abs() <= dist + 1e-12);
        }
    }

    #[test]
    fn exact_map_limsup_uses_float_tail() {
        type Q = BigRational;
        let m = BetaMap::new(
            <Q as Scalar>::from_ratio(9, 5),
            <Q as Scalar>::from_ratio(1, 10),
        )
        .unwrap();
        let cfg = LimsupConfig::default();
        let est = boundary_limsup(&m, &identity(), BoundaryBase::Zero, &cfg);
        assert_eq!(est.mode, LimsupMode::Asymptotic);
        assert_eq!(est.series.len(), cfg.n_max);
        // the exact-prefix and all-float runs follow different pseudo-orbits
        // past the rounding horizon but estimate the same limsup
        let fm = BetaMap::new(1.8, 0.1).unwrap();
        let fest = boundary_limsup(&fm, &identity(), BoundaryBase::Zero, &cfg);
        assert!((est.value - fest.value).abs() < 0.02);
    }

    #[test]
    fn periodic_orbit_average_is_window_independent() {
        // for p with T^N p = p the normalized sums at multiples of N agree
        let m = doubling();
        let phi = identity();
        let p = SidedPoint::unsided(2.0 / 3.0);
        let s2 = birkhoff_sum(&m, &phi, &p, 2).unwrap() / 2.0;
        for k in [2usize, 5, 9] {
            let skn = birkhoff_sum(&m, &phi, &p, 2 * k).unwrap() / (2.0 * k as f64);
            assert!((skn - s2).abs() < 1e-12);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn birkhoff_sums_add_and_scale(
                x in 0.001f64..0.999,
                n in 1usize..15,
                k in 1usize..15,
                c0 in -1.0f64..1.0,
                c1 in -1.0f64..1.0,
                scale in -3.0f64..3.0,
            ) {
                let m = BetaMap::new(1.8, 0.1).unwrap();
                let phi = PiecewisePotential::from_poly(vec![c0, c1]);
                let p = SidedPoint::unsided(x);
                let s_full = birkhoff_sum(&m, &phi, &p, n + k).unwrap();
                let s_head = birkhoff_sum(&m, &phi, &p, n).unwrap();
                let q = m.orbit(&p, n).unwrap().points.pop().unwrap();
                let s_tail = birkhoff_sum(&m, &phi, &q, k).unwrap();
                prop_assert!((s_full - s_head - s_tail).abs() < (n + k) as f64 * 1e-12);

                let scaled = PiecewisePotential::from_poly(vec![scale * c0, scale * c1]);
                let s_scaled = birkhoff_sum(&m, &scaled, &p, n).unwrap();
                prop_assert!((s_scaled - scale * s_head).abs() < n as f64 * 1e-12);
            }

            #[test]
            fn sup_norm_distance_dominates_samples(
                a0 in -1.0f64..1.0, a1 in -1.0f64..1.0, a2 in -1.0f64..1.0, a3 in -1.0f64..1.0,
                b0 in -1.0f64..1.0, b1 in -1.0f64..1.0, b2 in -1.0f64..1.0, b3 in -1.0f64..1.0,
            ) {
                let phi = PiecewisePotential::from_pieces(vec![a0, a1, a2, a3], vec![b0, b1]);
                let psi = PiecewisePotential::from_pieces(vec![b0, b1, b2, b3], vec![a0, a1]);
                let disc = 0.5;
                let sup = sup_norm_distance(&phi, &psi, disc);
                for i in 0..=400 {
                    let x = i as f64 / 400.0;
                    let br = if x < disc { Branch::Left } else { Branch::Right };
                    let d = (phi.eval_piece(br, x) - psi.eval_piece(br, x)).abs();
                    prop_assert!(d <= sup + 1e-12);
                }
            }
        }
    }

    #[test]
    fn potential_json_round_trip() {
        let json = r#"{
            "left": {"poly": [0.1, 1.0], "bumps": [{"center": 0.2, "radius": 0.05, "height": 1.5}]},
            "right": {"poly": [-0.3]},
            "holder": {"a": 1.0, "K": 5.0},
            "sup_bound": 10.0
        }"#;
        let phi: PiecewisePotential = serde_json::from_str(json).unwrap();
        assert_eq!(phi.left.bumps.len(), 1);
        assert_eq!(phi.holder.k, 5.0);
        assert!((phi.eval_piece(Branch::Left, 0.2) - (0.1 + 0.2 + 1.5)).abs() < 1e-12);
        let back = serde_json::to_string(&phi).unwrap();
        let phi2: PiecewisePotential = serde_json::from_str(&back).unwrap();
        assert_eq!(phi2.right.poly, vec![-0.3]);
    }
}

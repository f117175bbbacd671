//! Generalized beta-transformations `T(x) = beta*x + alpha (mod 1)`.
//!
//! The map has a single discontinuity at `disc = (1 - alpha)/beta` with
//! one-sided limits `T(disc^+) = 0` and `T(disc^-) = 1`, and two increasing
//! affine branches of slope `beta`. Points carry an approach side so orbits
//! through the discontinuity and one-sided Birkhoff sums are well defined.

use num::rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Default width of the discontinuity window in float mode.
pub const TAU_D: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("invalid map parameters: {0}")]
    InvalidParameters(String),
    #[error("point at the discontinuity requires an approach side (x = {x})")]
    SideRequired { x: f64 },
    #[error("point outside [0, 1]: x = {x}")]
    Domain { x: f64 },
    #[error("value outside the image of the {branch:?} branch: y = {y}")]
    Range { branch: Branch, y: f64 },
}

/// Approach side of a point; `None` is only meaningful away from the
/// discontinuity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    None,
}

/// Partition piece / itinerary symbol: `Left` is `(0, disc)` (symbol 0),
/// `Right` is `(disc, 1)` (symbol 1).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn symbol(self) -> char {
        match self {
            Branch::Left => '0',
            Branch::Right => '1',
        }
    }

    pub fn side(self) -> Side {
        match self {
            Branch::Left => Side::Left,
            Branch::Right => Side::Right,
        }
    }
}

/// A point of `[0, 1]` together with its approach side.
#[derive(Clone, PartialEq, Debug)]
pub struct SidedPoint<S> {
    pub x: S,
    pub side: Side,
}

impl<S: Scalar> SidedPoint<S> {
    pub fn new(x: S, side: Side) -> Self {
        SidedPoint { x, side }
    }

    pub fn unsided(x: S) -> Self {
        SidedPoint {
            x,
            side: Side::None,
        }
    }
}

/// The dynamics: `T(x) = beta*x + alpha` below the discontinuity and
/// `beta*x + alpha - 1` above it, with `1 < beta <= 2`, `alpha >= 0`,
/// `alpha + beta <= 2`.
#[derive(Clone, Debug)]
pub struct BetaMap<S> {
    beta: S,
    alpha: S,
    disc: S,
    tau_d: f64,
}

impl<S: Scalar> BetaMap<S> {
    pub fn new(beta: S, alpha: S) -> Result<Self, MapError> {
        let one = S::one();
        let two = S::from_int(2);
        if !(beta > one) || !(beta <= two) {
            return Err(MapError::InvalidParameters(format!(
                "beta = {} outside (1, 2]",
                beta.to_f64()
            )));
        }
        if alpha < S::zero() {
            return Err(MapError::InvalidParameters(format!(
                "alpha = {} negative",
                alpha.to_f64()
            )));
        }
        if alpha.clone() + beta.clone() > two {
            return Err(MapError::InvalidParameters(format!(
                "alpha + beta = {} exceeds 2",
                (alpha.clone() + beta.clone()).to_f64()
            )));
        }
        let disc = (one - alpha.clone()) / beta.clone();
        debug_assert!(disc > S::zero() && disc < S::one());
        Ok(BetaMap {
            beta,
            alpha,
            disc,
            tau_d: if S::EXACT { 0.0 } else { TAU_D },
        })
    }

    pub fn beta(&self) -> &S {
        &self.beta
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// The discontinuity `(1 - alpha)/beta`.
    pub fn disc(&self) -> &S {
        &self.disc
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64()
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    pub fn disc_f64(&self) -> f64 {
        self.disc.to_f64()
    }

    /// Inverse-branch contraction factor `1/beta`.
    pub fn lambda(&self) -> f64 {
        1.0 / self.beta_f64()
    }

    pub fn tau_d(&self) -> f64 {
        self.tau_d
    }

    pub fn is_exact(&self) -> bool {
        S::EXACT
    }

    /// Whether the slope satisfies `beta > sqrt(2)`, the expansion the
    /// Lorenz-like class requires. Maps with smaller slope stay computable
    /// but are flagged by consumers.
    pub fn expanding_hypothesis(&self) -> bool {
        self.beta.clone() * self.beta.clone() > S::from_int(2)
    }

    /// True when `x` falls in the discontinuity window.
    pub fn at_disc(&self, x: &S) -> bool {
        x.approx_eq(&self.disc, self.tau_d)
    }

    /// Raw branch application with no domain checks; the caller vouches for
    /// the branch (e.g. when walking a cylinder word).
    pub fn apply_branch(&self, branch: Branch, x: &S) -> S {
        let y = self.beta.clone() * x.clone() + self.alpha.clone();
        match branch {
            Branch::Left => y,
            Branch::Right => y - S::one(),
        }
    }

    /// Which partition piece the point belongs to, resolving the
    /// discontinuity window by side.
    pub fn classify(&self, p: &SidedPoint<S>) -> Result<Branch, MapError> {
        self.check_domain(&p.x)?;
        if self.at_disc(&p.x) {
            match p.side {
                Side::Left => Ok(Branch::Left),
                Side::Right => Ok(Branch::Right),
                Side::None => Err(MapError::SideRequired { x: p.x.to_f64() }),
            }
        } else if p.x < self.disc {
            Ok(Branch::Left)
        } else {
            Ok(Branch::Right)
        }
    }

    fn check_domain(&self, x: &S) -> Result<(), MapError> {
        if *x < S::zero() || *x > S::one() {
            if x.approx_eq(&S::zero(), self.tau_d) || x.approx_eq(&S::one(), self.tau_d) {
                return Ok(());
            }
            return Err(MapError::Domain { x: x.to_f64() });
        }
        Ok(())
    }

    /// One step of the dynamics. At the discontinuity the side picks the
    /// one-sided limit (`right -> 0`, `left -> 1`), exactly. Both branches
    /// are increasing, so the approach side is preserved.
    pub fn eval(&self, p: &SidedPoint<S>) -> Result<SidedPoint<S>, MapError> {
        self.check_domain(&p.x)?;
        if self.at_disc(&p.x) {
            return match p.side {
                Side::Right => Ok(SidedPoint::new(S::zero(), Side::Right)),
                Side::Left => Ok(SidedPoint::new(S::one(), Side::Left)),
                Side::None => Err(MapError::SideRequired { x: p.x.to_f64() }),
            };
        }
        let branch = if p.x < self.disc {
            Branch::Left
        } else {
            Branch::Right
        };
        let mut y = self.apply_branch(branch, &p.x);
        if !S::EXACT {
            // rounding can push a branch image a few ulps past an endpoint
            if y > S::one() && y.approx_eq(&S::one(), self.tau_d) {
                y = S::one();
            } else if y < S::zero() && y.approx_eq(&S::zero(), self.tau_d) {
                y = S::zero();
            }
        }
        Ok(SidedPoint::new(y, p.side))
    }

    /// The first `n + 1` points of the orbit. A landing in the
    /// discontinuity window is recorded (`hit_disc_at`); iteration continues
    /// through the one-sided image given by the point's inherited side, and
    /// fails with `SideRequired` for unsided trajectories that must continue
    /// past the hit.
    pub fn orbit(&self, p: &SidedPoint<S>, n: usize) -> Result<Orbit<S>, MapError> {
        let mut points = Vec::with_capacity(n + 1);
        let mut hit_disc_at = None;
        let mut current = p.clone();
        self.check_domain(&current.x)?;
        for step in 0..=n {
            if hit_disc_at.is_none() && self.at_disc(&current.x) {
                hit_disc_at = Some(step);
            }
            points.push(current.clone());
            if step < n {
                current = self.eval(&current)?;
            }
        }
        Ok(Orbit {
            points,
            hit_disc_at,
        })
    }

    /// Preimage of `y` through the chosen branch.
    pub fn inverse_branch(&self, branch: Branch, y: &S) -> Result<S, MapError> {
        let (im_lo, im_hi) = match branch {
            Branch::Left => (self.alpha.clone(), S::one()),
            Branch::Right => (S::zero(), self.beta.clone() + self.alpha.clone() - S::one()),
        };
        let below = *y < im_lo && !y.approx_eq(&im_lo, self.tau_d);
        let above = *y > im_hi && !y.approx_eq(&im_hi, self.tau_d);
        if below || above {
            return Err(MapError::Range {
                branch,
                y: y.to_f64(),
            });
        }
        let x = match branch {
            Branch::Left => (y.clone() - self.alpha.clone()) / self.beta.clone(),
            Branch::Right => (y.clone() - self.alpha.clone() + S::one()) / self.beta.clone(),
        };
        Ok(x)
    }
}

/// An orbit segment with the index of the first landing in the
/// discontinuity window, if any.
#[derive(Clone, Debug)]
pub struct Orbit<S> {
    pub points: Vec<SidedPoint<S>>,
    pub hit_disc_at: Option<usize>,
}

/// Serializable map description; `arithmetic: rational` requires both
/// parameters to be rational literals (`{"num": 9, "den": 5}`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapSpec {
    pub kind: MapKind,
    pub beta: NumberOrRatio,
    pub alpha: NumberOrRatio,
    #[serde(default)]
    pub arithmetic: Arithmetic,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Beta,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Float64,
    Rational,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberOrRatio {
    Ratio { num: i64, den: i64 },
    Number(f64),
}

impl NumberOrRatio {
    pub fn as_f64(&self) -> f64 {
        match *self {
            NumberOrRatio::Number(x) => x,
            NumberOrRatio::Ratio { num, den } => num as f64 / den as f64,
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        match *self {
            NumberOrRatio::Ratio { num, den } if den != 0 => {
                Some(<BigRational as Scalar>::from_ratio(num, den))
            }
            _ => None,
        }
    }
}

/// A map in either arithmetic mode, as selected by a `MapSpec`.
#[derive(Clone, Debug)]
pub enum DynMap {
    Float(BetaMap<f64>),
    Rational(BetaMap<BigRational>),
}

impl MapSpec {
    pub fn build(&self) -> Result<DynMap, MapError> {
        match self.arithmetic {
            Arithmetic::Float64 => Ok(DynMap::Float(BetaMap::new(
                self.beta.as_f64(),
                self.alpha.as_f64(),
            )?)),
            Arithmetic::Rational => {
                let beta = self.beta.as_rational().ok_or_else(|| {
                    MapError::InvalidParameters(
                        "rational arithmetic requires beta as a {num, den} literal".into(),
                    )
                })?;
                let alpha = self.alpha.as_rational().ok_or_else(|| {
                    MapError::InvalidParameters(
                        "rational arithmetic requires alpha as a {num, den} literal".into(),
                    )
                })?;
                Ok(DynMap::Rational(BetaMap::new(beta, alpha)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling() -> BetaMap<f64> {
        BetaMap::new(2.0, 0.0).unwrap()
    }

    fn beta18() -> BetaMap<f64> {
        BetaMap::new(1.8, 0.1).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BetaMap::new(1.0, 0.0).is_err());
        assert!(BetaMap::new(2.1, 0.0).is_err());
        assert!(BetaMap::new(1.8, -0.1).is_err());
        assert!(BetaMap::new(1.8, 0.3).is_err()); // alpha + beta > 2
    }

    #[test]
    fn doubling_below_disc() {
        let m = doubling();
        let q = m.eval(&SidedPoint::unsided(0.25)).unwrap();
        assert_eq!(q.x, 0.5);
        assert_eq!(q.side, Side::None);
    }

    #[test]
    fn one_sided_limits_at_disc() {
        let m = doubling();
        let r = m.eval(&SidedPoint::new(0.5, Side::Right)).unwrap();
        assert_eq!(r.x, 0.0);
        assert_eq!(r.side, Side::Right);
        let l = m.eval(&SidedPoint::new(0.5, Side::Left)).unwrap();
        assert_eq!(l.x, 1.0);
        assert_eq!(l.side, Side::Left);
        assert!(matches!(
            m.eval(&SidedPoint::unsided(0.5)),
            Err(MapError::SideRequired { .. })
        ));
    }

    #[test]
    fn eval_endpoints() {
        let m = beta18();
        assert_eq!(m.eval(&SidedPoint::unsided(0.0)).unwrap().x, 0.1);
        let t1 = m.eval(&SidedPoint::unsided(1.0)).unwrap().x;
        assert!((t1 - 0.9).abs() < 1e-15);
    }

    #[test]
    fn eval_hand_value() {
        // 1.8 * 0.604 + 0.1 - 1 = 0.1872
        let m = beta18();
        let q = m.eval(&SidedPoint::unsided(0.604)).unwrap();
        assert!((q.x - 0.1872).abs() < 1e-15);
    }

    #[test]
    fn orbit_of_zero_is_fixed_for_doubling() {
        let m = doubling();
        let orb = m.orbit(&SidedPoint::unsided(0.0), 3).unwrap();
        assert_eq!(orb.points.len(), 4);
        assert!(orb.points.iter().all(|p| p.x == 0.0));
        assert_eq!(orb.hit_disc_at, None);
    }

    #[test]
    fn orbit_hand_values() {
        let m = beta18();
        let orb = m.orbit(&SidedPoint::unsided(0.0), 3).unwrap();
        let xs: Vec<f64> = orb.points.iter().map(|p| p.x).collect();
        assert!((xs[0] - 0.0).abs() < 1e-15);
        assert!((xs[1] - 0.1).abs() < 1e-15);
        assert!((xs[2] - 0.28).abs() < 1e-14);
        assert!((xs[3] - 0.604).abs() < 1e-14);
    }

    #[test]
    fn golden_mean_orbit_hits_disc() {
        // beta^2 = beta + 1 makes T(1) = beta - 1 = 1/beta = disc.
        let beta = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let m = BetaMap::new(beta, 0.0).unwrap();
        assert!((m.disc_f64() - (beta - 1.0)).abs() <= 1e-12);
        let orb = m.orbit(&SidedPoint::new(1.0, Side::Left), 2).unwrap();
        assert_eq!(orb.hit_disc_at, Some(1));
        assert_eq!(orb.points[2].x, 1.0);
    }

    #[test]
    fn unsided_orbit_errors_when_continuing_past_disc() {
        let beta = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let m = BetaMap::new(beta, 0.0).unwrap();
        // landing at the final index is fine, the hit is just recorded
        let orb = m.orbit(&SidedPoint::unsided(1.0), 1).unwrap();
        assert_eq!(orb.hit_disc_at, Some(1));
        // continuing past the landing needs a side
        assert!(matches!(
            m.orbit(&SidedPoint::unsided(1.0), 2),
            Err(MapError::SideRequired { .. })
        ));
    }

    #[test]
    fn inverse_branch_examples() {
        let m = doubling();
        assert_eq!(m.inverse_branch(Branch::Left, &0.5).unwrap(), 0.25);
        assert_eq!(m.inverse_branch(Branch::Right, &0.0).unwrap(), 0.5);
        let m = beta18();
        let x = m.inverse_branch(Branch::Right, &0.1872).unwrap();
        assert!((x - 0.604).abs() < 1e-15);
        assert!(matches!(
            m.inverse_branch(Branch::Right, &0.95),
            Err(MapError::Range { .. })
        ));
    }

    #[test]
    fn rational_doubling_is_exact() {
        type Q = BigRational;
        let m = BetaMap::new(<Q as Scalar>::from_int(2), <Q as Scalar>::zero()).unwrap();
        assert!(m.is_exact());
        assert_eq!(m.disc(), &<Q as Scalar>::from_ratio(1, 2));
        let p = SidedPoint::unsided(<Q as Scalar>::from_ratio(2, 3));
        let orb = m.orbit(&p, 2).unwrap();
        assert_eq!(orb.points[1].x, <Q as Scalar>::from_ratio(1, 3));
        assert_eq!(orb.points[2].x, <Q as Scalar>::from_ratio(2, 3));
    }

    #[test]
    fn expansion_hypothesis_flag() {
        assert!(beta18().expanding_hypothesis());
        assert!(!BetaMap::new(1.05, 0.0).unwrap().expanding_hypothesis());
        // exact boundary: beta^2 = 2 is not > 2
        type Q = BigRational;
        let m = BetaMap::new(<Q as Scalar>::from_ratio(7, 5), <Q as Scalar>::zero()).unwrap();
        assert!(!m.expanding_hypothesis()); // 49/25 < 2
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_map() -> impl Strategy<Value = BetaMap<f64>> {
            (1.05f64..2.0, 0.0f64..0.95).prop_map(|(beta, t)| {
                let alpha = t * (2.0 - beta);
                BetaMap::new(beta, alpha).unwrap()
            })
        }

        proptest! {
            #[test]
            fn inverse_branch_round_trips(map in arb_map(), frac in 0.001f64..0.999, right in any::<bool>()) {
                let branch = if right { Branch::Right } else { Branch::Left };
                let (lo, hi) = match branch {
                    Branch::Left => (map.alpha_f64(), 1.0),
                    Branch::Right => (0.0, map.beta_f64() + map.alpha_f64() - 1.0),
                };
                let y = lo + frac * (hi - lo);
                let x = map.inverse_branch(branch, &y).unwrap();
                prop_assert!((map.apply_branch(branch, &x) - y).abs() < 1e-12);
            }

            #[test]
            fn branches_are_monotone_and_expand_by_beta(
                map in arb_map(),
                s in 0.0f64..1.0,
                t in 0.0f64..1.0,
                right in any::<bool>(),
            ) {
                // squeeze both samples into one branch domain
                let (lo, hi) = if right {
                    (map.disc_f64(), 1.0)
                } else {
                    (0.0, map.disc_f64())
                };
                let (a, b) = (lo + s * (hi - lo), lo + t * (hi - lo));
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                prop_assume!(b - a > 1e-12);
                let branch = if right { Branch::Right } else { Branch::Left };
                let (ya, yb) = (map.apply_branch(branch, &a), map.apply_branch(branch, &b));
                prop_assert!(ya < yb);
                prop_assert!(((yb - ya) - map.beta_f64() * (b - a)).abs() < 1e-12);
            }

            #[test]
            fn sides_survive_the_discontinuity(map in arb_map()) {
                let d = *map.disc();
                let r = map.eval(&SidedPoint::new(d, Side::Right)).unwrap();
                let l = map.eval(&SidedPoint::new(d, Side::Left)).unwrap();
                prop_assert_eq!((r.x, r.side), (0.0, Side::Right));
                prop_assert_eq!((l.x, l.side), (1.0, Side::Left));
            }
        }
    }

    #[test]
    fn map_spec_json() {
        let spec: MapSpec = serde_json::from_str(
            r#"{"kind":"beta","beta":1.8,"alpha":0.1,"arithmetic":"float64"}"#,
        )
        .unwrap();
        match spec.build().unwrap() {
            DynMap::Float(m) => assert_eq!(m.beta_f64(), 1.8),
            _ => panic!("expected float map"),
        }
        let spec: MapSpec = serde_json::from_str(
            r#"{"kind":"beta","beta":{"num":9,"den":5},"alpha":{"num":1,"den":10},"arithmetic":"rational"}"#,
        )
        .unwrap();
        match spec.build().unwrap() {
            DynMap::Rational(m) => {
                assert_eq!(m.beta(), &<BigRational as Scalar>::from_ratio(9, 5))
            }
            _ => panic!("expected rational map"),
        }
        // rational mode with float literals is rejected
        let spec: MapSpec =
            serde_json::from_str(r#"{"kind":"beta","beta":1.8,"alpha":0.1,"arithmetic":"rational"}"#)
                .unwrap();
        assert!(spec.build().is_err());
    }
}

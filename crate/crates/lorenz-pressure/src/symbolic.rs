//! Cylinder enumeration for the two-piece partition `{(0, disc), (disc, 1)}`.
//!
//! A depth-`n` cylinder is the maximal open interval of points sharing the
//! first `n` itinerary symbols. On each cylinder the `n`-fold map is a single
//! affine branch composition `x -> beta^n * x + intercept`, which is tracked
//! alongside the interval: every refinement step is then one affine solve
//! (the pull-back of the discontinuity through the composition).

use serde::Serialize;
use thiserror::Error;

use crate::maps::{BetaMap, Branch, MapError};
use crate::scalar::Scalar;

/// Intervals thinner than this are pruned in float mode (forbidden words).
pub const TAU_CYL: f64 = 1e-14;

/// Default enumeration budget, counted in cylinders processed.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error)]
pub enum SymbolicError {
    #[error("enumeration budget exceeded ({used} of {budget} cylinder ops)")]
    BudgetExceeded { used: u64, budget: u64 },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A nonempty depth-`n` cylinder: itinerary word, open interval `(a, b)`,
/// and the affine data of the branch composition on its closure.
#[derive(Clone, Debug)]
pub struct Cylinder<S> {
    pub word: Vec<Branch>,
    pub a: S,
    pub b: S,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> Cylinder<S> {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn midpoint(&self) -> S {
        (self.a.clone() + self.b.clone()) / S::from_int(2)
    }

    pub fn width(&self) -> S {
        self.b.clone() - self.a.clone()
    }

    /// Image of the closed interval under the branch composition.
    pub fn image(&self) -> (S, S) {
        (
            self.slope.clone() * self.a.clone() + self.intercept.clone(),
            self.slope.clone() * self.b.clone() + self.intercept.clone(),
        )
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|b| b.symbol()).collect()
    }
}

fn depth_one<S: Scalar>(map: &BetaMap<S>) -> Vec<Cylinder<S>> {
    vec![
        Cylinder {
            word: vec![Branch::Left],
            a: S::zero(),
            b: map.disc().clone(),
            slope: map.beta().clone(),
            intercept: map.alpha().clone(),
        },
        Cylinder {
            word: vec![Branch::Right],
            a: map.disc().clone(),
            b: S::one(),
            slope: map.beta().clone(),
            intercept: map.alpha().clone() - S::one(),
        },
    ]
}

fn child<S: Scalar>(map: &BetaMap<S>, cyl: &Cylinder<S>, branch: Branch, a: S, b: S) -> Cylinder<S> {
    let mut word = cyl.word.clone();
    word.push(branch);
    let slope = cyl.slope.clone() * map.beta().clone();
    let intercept = match branch {
        Branch::Left => cyl.intercept.clone() * map.beta().clone() + map.alpha().clone(),
        Branch::Right => cyl.intercept.clone() * map.beta().clone() + map.alpha().clone() - S::one(),
    };
    Cylinder {
        word,
        a,
        b,
        slope,
        intercept,
    }
}

fn wide_enough<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        b > a
    } else {
        b.to_f64() - a.to_f64() > TAU_CYL
    }
}

/// Split each depth-`n` cylinder at the pull-back of the discontinuity,
/// producing depth `n + 1`. Empty or sub-tolerance children are pruned.
fn advance_level<S: Scalar>(
    map: &BetaMap<S>,
    level: &[Cylinder<S>],
    budget: &mut Budget,
) -> Result<Vec<Cylinder<S>>, SymbolicError> {
    let disc = map.disc();
    let mut next = Vec::with_capacity(level.len() * 2);
    for cyl in level {
        budget.charge(1)?;
        let (ya, yb) = cyl.image();
        if &ya < disc {
            // left child: points whose image falls below the discontinuity
            let b = if &yb <= disc {
                cyl.b.clone()
            } else {
                (disc.clone() - cyl.intercept.clone()) / cyl.slope.clone()
            };
            if wide_enough(&cyl.a, &b) {
                next.push(child(map, cyl, Branch::Left, cyl.a.clone(), b));
            }
        }
        if &yb > disc {
            let a = if &ya >= disc {
                cyl.a.clone()
            } else {
                (disc.clone() - cyl.intercept.clone()) / cyl.slope.clone()
            };
            if wide_enough(&a, &cyl.b) {
                next.push(child(map, cyl, Branch::Right, a, cyl.b.clone()));
            }
        }
    }
    Ok(next)
}

#[derive(Debug)]
struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    fn charge(&mut self, n: u64) -> Result<(), SymbolicError> {
        self.used += n;
        if self.used > self.limit {
            Err(SymbolicError::BudgetExceeded {
                used: self.used,
                budget: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// All nonempty depth-`n` cylinders, in interval order.
pub fn refine<S: Scalar>(
    map: &BetaMap<S>,
    depth: u32,
    budget: u64,
) -> Result<Vec<Cylinder<S>>, SymbolicError> {
    assert!(depth >= 1, "depth must be at least 1");
    let mut budget = Budget::new(budget);
    let mut level = depth_one(map);
    for _ in 1..depth {
        level = advance_level(map, &level, &mut budget)?;
    }
    Ok(level)
}

/// Visit every level from 1 to `depth` without retaining more than one.
pub fn refine_levels<S: Scalar>(
    map: &BetaMap<S>,
    depth: u32,
    budget: u64,
    mut visit: impl FnMut(u32, &[Cylinder<S>]),
) -> Result<(), SymbolicError> {
    assert!(depth >= 1, "depth must be at least 1");
    let mut budget = Budget::new(budget);
    let mut level = depth_one(map);
    visit(1, &level);
    for n in 2..=depth {
        level = advance_level(map, &level, &mut budget)?;
        visit(n, &level);
    }
    Ok(())
}

/// The boundary points a cylinder closure can meet.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasePoint {
    Zero,
    DiscMinus,
    DiscPlus,
    One,
}

impl BasePoint {
    pub const ALL: [BasePoint; 4] = [
        BasePoint::Zero,
        BasePoint::DiscMinus,
        BasePoint::DiscPlus,
        BasePoint::One,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BasePoint::Zero => "0",
            BasePoint::DiscMinus => "d-",
            BasePoint::DiscPlus => "d+",
            BasePoint::One => "1",
        }
    }
}

/// The up-to-four cylinders of a given depth whose closures meet
/// `{0, disc, 1}`, labeled by the boundary point each abuts. At depth 1 the
/// four labels collapse onto the two partition pieces.
#[derive(Clone, Debug)]
pub struct BoundaryAdjacency<S> {
    pub entries: Vec<(BasePoint, Cylinder<S>)>,
}

impl<S: Scalar> BoundaryAdjacency<S> {
    /// Distinct cylinders (entries may repeat a cylinder under two labels).
    pub fn distinct(&self) -> Vec<&Cylinder<S>> {
        let mut out: Vec<&Cylinder<S>> = Vec::new();
        for (_, cyl) in &self.entries {
            if !out.iter().any(|c| c.word == cyl.word) {
                out.push(cyl);
            }
        }
        out
    }
}

/// The boundary-adjacent cylinder at `depth` for one labeled base point,
/// built directly by following the anchored endpoint through refinement:
/// each step keeps the child abutting the anchor, so the cost is linear in
/// the depth rather than exponential.
pub fn boundary_cylinder<S: Scalar>(
    map: &BetaMap<S>,
    which: BasePoint,
    depth: u32,
) -> Cylinder<S> {
    assert!(depth >= 1);
    let (mut cyl, anchor_left) = match which {
        BasePoint::Zero => (depth_one(map).swap_remove(0), true),
        BasePoint::DiscMinus => (depth_one(map).swap_remove(0), false),
        BasePoint::DiscPlus => (depth_one(map).swap_remove(1), true),
        BasePoint::One => (depth_one(map).swap_remove(1), false),
    };
    let disc = map.disc();
    for _ in 1..depth {
        let (ya, yb) = cyl.image();
        let splits = &ya < disc && &yb > disc;
        if splits {
            let xd = (disc.clone() - cyl.intercept.clone()) / cyl.slope.clone();
            if anchor_left {
                cyl = child(map, &cyl, Branch::Left, cyl.a.clone(), xd);
            } else {
                cyl = child(map, &cyl, Branch::Right, xd, cyl.b.clone());
            }
        } else {
            // whole image on one side; an image endpoint exactly at the
            // discontinuity counts as that side's closure
            let branch = if &yb <= disc { Branch::Left } else { Branch::Right };
            cyl = child(map, &cyl, branch, cyl.a.clone(), cyl.b.clone());
        }
    }
    cyl
}

/// All four labeled boundary-adjacent cylinders at `depth`.
pub fn boundary_cylinders<S: Scalar>(map: &BetaMap<S>, depth: u32) -> BoundaryAdjacency<S> {
    BoundaryAdjacency {
        entries: BasePoint::ALL
            .iter()
            .map(|&which| (which, boundary_cylinder(map, which, depth)))
            .collect(),
    }
}

/// Cylinder-count entropy diagnostic: `(n, count, ln(count)/n)` per depth.
#[derive(Clone, Debug)]
pub struct EntropySeries {
    pub points: Vec<EntropyPoint>,
    /// False when the map sits outside the `beta > sqrt(2)` class.
    pub within_class: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropyPoint {
    pub depth: u32,
    pub count: usize,
    pub estimate: f64,
}

impl EntropySeries {
    pub fn final_estimate(&self) -> f64 {
        self.points.last().map(|p| p.estimate).unwrap_or(f64::NAN)
    }
}

/// Growth of `ln(cylinder count)/n`, converging to `ln(beta)`.
pub fn entropy_estimate<S: Scalar>(
    map: &BetaMap<S>,
    n_max: u32,
    budget: u64,
) -> Result<EntropySeries, SymbolicError> {
    let mut points = Vec::with_capacity(n_max as usize);
    refine_levels(map, n_max, budget, |n, level| {
        points.push(EntropyPoint {
            depth: n,
            count: level.len(),
            estimate: (level.len() as f64).ln() / n as f64,
        });
    })?;
    Ok(EntropySeries {
        points,
        within_class: map.expanding_hypothesis(),
    })
}

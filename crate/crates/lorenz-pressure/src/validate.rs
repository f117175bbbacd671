//! Runtime invariant suite: every module's contracts checked against a
//! concrete map and potential, with seeded sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::birkhoff::{
    birkhoff_sum, boundary_limsup, sup_norm_distance, BoundaryBase, LimsupConfig,
    PiecewisePotential,
};
use crate::cutting::{aux_initial, aux_step, cutting_times_side, periodic_from_cutting, OrbitSide};
use crate::maps::{BetaMap, Branch, Side, SidedPoint};
use crate::perturb::{build_perturbed, PerturbError};
use crate::pressure::{
    boundary_pressure_shortcut, distortion_constant, partition_sum, periodic_orbit_lower_bound,
    pressure, PressureConfig, Subject,
};
use crate::scalar::Scalar;
use crate::symbolic::{refine, DEFAULT_BUDGET};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub module: &'static str,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl InvariantReport {
    fn pass(module: &'static str, name: &'static str, detail: String) -> Self {
        InvariantReport {
            module,
            name,
            outcome: Outcome::Pass,
            detail,
        }
    }

    fn check(module: &'static str, name: &'static str, ok: bool, detail: String) -> Self {
        InvariantReport {
            module,
            name,
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail,
        }
    }

    fn skip(module: &'static str, name: &'static str, detail: String) -> Self {
        InvariantReport {
            module,
            name,
            outcome: Outcome::Skip,
            detail,
        }
    }
}

fn ftol<S: Scalar>(f: f64) -> f64 {
    if S::EXACT {
        0.0
    } else {
        f
    }
}

/// Run the whole suite. Invariants needing machinery the map cannot provide
/// (e.g. admissible records on a degenerate map) are reported as skipped.
pub fn run_suite<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    seed: u64,
) -> Vec<InvariantReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    maps_invariants(map, &mut rng, &mut out);
    symbolic_invariants(map, &mut out);
    birkhoff_invariants(map, phi, &mut rng, &mut out);
    pressure_invariants(map, phi, &mut rng, &mut out);
    cutting_invariants(map, phi, &mut out);
    perturb_invariants(map, phi, &mut out);
    potential_declaration(map, phi, &mut rng, &mut out);
    out
}

fn sample_point<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    // dyadic rationals stay exact in both arithmetic modes
    let k: i64 = rng.gen_range(1..(1 << 20));
    S::from_ratio(k, 1 << 20)
}

fn maps_invariants<S: Scalar>(
    map: &BetaMap<S>,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<InvariantReport>,
) {
    let m = "maps";
    let tol = ftol::<S>(1e-12);

    let mut worst = 0.0f64;
    for _ in 0..200 {
        let branch = if rng.gen_bool(0.5) {
            Branch::Left
        } else {
            Branch::Right
        };
        let x = sample_point::<S>(rng);
        // project into the branch domain
        let x = match branch {
            Branch::Left => x * map.disc().clone(),
            Branch::Right => {
                map.disc().clone() + x * (S::one() - map.disc().clone())
            }
        };
        let y = map.apply_branch(branch, &x);
        if y < S::zero() || y > S::one() {
            continue;
        }
        let back = map.inverse_branch(branch, &y).unwrap();
        let err = (map.apply_branch(branch, &back) - y).to_f64().abs();
        worst = worst.max(err);
    }
    out.push(InvariantReport::check(
        m,
        "inverse-branch round trip",
        worst <= tol,
        format!("worst residual {worst:.3e}"),
    ));

    let mut ok = true;
    let mut exp_worst = 0.0f64;
    for _ in 0..200 {
        let a = sample_point::<S>(rng);
        let b = sample_point::<S>(rng);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo == hi {
            continue;
        }
        // squeeze both into the left piece
        let lo = lo * map.disc().clone();
        let hi = hi * map.disc().clone();
        let ylo = map.apply_branch(Branch::Left, &lo);
        let yhi = map.apply_branch(Branch::Left, &hi);
        ok &= ylo < yhi;
        let stretch = (yhi - ylo) - map.beta().clone() * (hi - lo);
        exp_worst = exp_worst.max(stretch.to_f64().abs());
    }
    out.push(InvariantReport::check(
        m,
        "branches increase",
        ok,
        "monotone on 200 sampled pairs".into(),
    ));
    out.push(InvariantReport::check(
        m,
        "uniform expansion by beta",
        exp_worst <= ftol::<S>(1e-12),
        format!("worst |stretch - beta*gap| = {exp_worst:.3e}"),
    ));

    let right = map
        .eval(&SidedPoint::new(map.disc().clone(), Side::Right))
        .unwrap();
    let left = map
        .eval(&SidedPoint::new(map.disc().clone(), Side::Left))
        .unwrap();
    out.push(InvariantReport::check(
        m,
        "one-sided limits at the discontinuity",
        right.x == S::zero() && right.side == Side::Right && left.x == S::one()
            && left.side == Side::Left,
        "T(disc^+) = 0, T(disc^-) = 1, sides preserved".into(),
    ));
}

fn symbolic_invariants<S: Scalar>(map: &BetaMap<S>, out: &mut Vec<InvariantReport>) {
    let m = "symbolic";
    let depth = 6u32;
    let cyls = match refine(map, depth, DEFAULT_BUDGET) {
        Ok(c) => c,
        Err(e) => {
            out.push(InvariantReport::skip(m, "partition tiles [0,1]", e.to_string()));
            return;
        }
    };
    let tol = ftol::<S>(1e-12);

    let tiles = cyls[0].a.to_f64().abs() <= tol
        && (cyls.last().unwrap().b.to_f64() - 1.0).abs() <= tol
        && cyls
            .windows(2)
            .all(|w| (w[1].a.to_f64() - w[0].b.to_f64()).abs() <= tol.max(1e-12));
    out.push(InvariantReport::check(
        m,
        "partition tiles [0,1]",
        tiles,
        format!("{} cylinders at depth {depth}", cyls.len()),
    ));

    let mut itinerary_ok = true;
    let mut affine_worst = 0.0f64;
    for cyl in &cyls {
        let mid = cyl.midpoint();
        let mut x = mid.clone();
        for (i, &sym) in cyl.word.iter().enumerate() {
            let here = if map.at_disc(&x) {
                itinerary_ok = false;
                break;
            } else if x < *map.disc() {
                Branch::Left
            } else {
                Branch::Right
            };
            if here != sym {
                itinerary_ok = false;
                break;
            }
            let _ = i;
            x = map.apply_branch(sym, &x);
        }
        let predicted = cyl.slope.clone() * mid + cyl.intercept.clone();
        affine_worst = affine_worst.max((x - predicted).to_f64().abs());
    }
    out.push(InvariantReport::check(
        m,
        "midpoint itineraries match words",
        itinerary_ok,
        "first `depth` symbols checked".into(),
    ));
    out.push(InvariantReport::check(
        m,
        "affine branch-composition data",
        affine_worst <= ftol::<S>(1e-10),
        format!("worst deviation {affine_worst:.3e}"),
    ));

    let children = match refine(map, depth + 1, DEFAULT_BUDGET) {
        Ok(c) => c,
        Err(_) => return,
    };
    let nested = children.iter().all(|ch| {
        cyls.iter().any(|p| {
            p.word[..] == ch.word[..depth as usize]
                && p.a <= ch.a
                && ch.b <= p.b
        })
    });
    out.push(InvariantReport::check(
        m,
        "children nest in word-prefix parents",
        nested,
        format!("{} children at depth {}", children.len(), depth + 1),
    ));
}

fn scale_potential(phi: &PiecewisePotential, c: f64) -> PiecewisePotential {
    let mut out = phi.clone();
    for piece in [&mut out.left, &mut out.right] {
        for coeff in &mut piece.poly {
            *coeff *= c;
        }
        for bump in &mut piece.bumps {
            bump.height *= c;
        }
    }
    out.holder.k *= c.abs();
    out.sup_bound *= c.abs();
    out
}

fn birkhoff_invariants<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<InvariantReport>,
) {
    let m = "birkhoff";
    let cfg = LimsupConfig::default();

    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = SidedPoint::unsided(sample_point::<S>(rng));
        let n = rng.gen_range(1..12usize);
        let k = rng.gen_range(1..12usize);
        let (Ok(s_full), Ok(s_head)) = (
            birkhoff_sum(map, phi, &p, n + k),
            birkhoff_sum(map, phi, &p, n),
        ) else {
            continue;
        };
        let Ok(orbit) = map.orbit(&p, n) else { continue };
        let q = orbit.points.last().unwrap().clone();
        let Ok(s_tail) = birkhoff_sum(map, phi, &q, k) else {
            continue;
        };
        worst = worst.max((s_full - s_head - s_tail).abs());
    }
    out.push(InvariantReport::check(
        m,
        "Birkhoff sums are additive along orbits",
        worst <= 1e-10,
        format!("worst defect {worst:.3e}"),
    ));

    let mut worst = 0.0f64;
    let scaled = scale_potential(phi, -2.5);
    for _ in 0..20 {
        let p = SidedPoint::unsided(sample_point::<S>(rng));
        let n = rng.gen_range(1..12usize);
        let (Ok(s), Ok(sc)) = (birkhoff_sum(map, phi, &p, n), birkhoff_sum(map, &scaled, &p, n))
        else {
            continue;
        };
        worst = worst.max((sc - (-2.5) * s).abs());
    }
    out.push(InvariantReport::check(
        m,
        "Birkhoff sums scale with the potential",
        worst <= 1e-9,
        format!("worst defect {worst:.3e}"),
    ));

    let shift = 1.25;
    let mut worst = 0.0f64;
    for base in [BoundaryBase::Zero, BoundaryBase::One] {
        let a = boundary_limsup(map, phi, base, &cfg);
        let b = boundary_limsup(map, &phi.shifted(shift), base, &cfg);
        worst = worst.max((b.value - a.value - shift).abs());
    }
    out.push(InvariantReport::check(
        m,
        "boundary limsup shifts with constants",
        worst <= 1e-9,
        format!("worst defect {worst:.3e}"),
    ));

    let mut psi = phi.clone();
    if psi.left.poly.is_empty() {
        psi.left.poly.push(0.0);
    }
    if psi.right.poly.is_empty() {
        psi.right.poly.push(0.0);
    }
    let d1: f64 = rng.gen_range(-0.2..0.2);
    let d2: f64 = rng.gen_range(-0.2..0.2);
    psi.left.poly[0] += d1;
    psi.right.poly[0] += d2;
    let dist = sup_norm_distance(phi, &psi, map.disc_f64());
    let mut ok = true;
    for base in [BoundaryBase::Zero, BoundaryBase::One] {
        let a = boundary_limsup(map, phi, base, &cfg);
        let b = boundary_limsup(map, &psi, base, &cfg);
        ok &= (a.value - b.value).abs() <= dist + 1e-9;
    }
    out.push(InvariantReport::check(
        m,
        "boundary limsup is sup-norm Lipschitz",
        ok,
        format!("perturbation of sup-norm {dist:.3e}"),
    ));
}

fn pressure_invariants<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<InvariantReport>,
) {
    let m = "pressure";
    let limsup = LimsupConfig::default();
    let depths = [4u32, 8, 12];

    let mut ok = true;
    for &n in &depths {
        let (Ok(full), Ok(bdry)) = (
            partition_sum(map, phi, n, Subject::Full, DEFAULT_BUDGET),
            partition_sum(map, phi, n, Subject::Boundary, DEFAULT_BUDGET),
        ) else {
            ok = false;
            break;
        };
        ok &= bdry.lo <= full.hi + 1e-12;
    }
    out.push(InvariantReport::check(
        m,
        "boundary sum below full sum",
        ok,
        "sub-sum monotonicity at depths 4, 8, 12".into(),
    ));

    let c = distortion_constant(map, phi);
    let shortcut = boundary_pressure_shortcut(map, phi, &limsup).value;
    let mut ok = true;
    let mut worst = 0.0f64;
    for &n in &depths {
        if let Ok(b) = partition_sum(map, phi, n, Subject::Boundary, DEFAULT_BUDGET) {
            let dev = (shortcut - b.midpoint()).abs();
            worst = worst.max(dev - (c / n as f64 + 0.35));
            ok &= dev <= c / n as f64 + 0.35;
        }
    }
    out.push(InvariantReport::check(
        m,
        "boundary shortcut consistent with direct sums",
        ok,
        format!("worst excess over C/n + slack: {worst:.3e}"),
    ));

    let shift = 0.75;
    let mut ok = true;
    for &n in &depths {
        let (Ok(a), Ok(b)) = (
            partition_sum(map, phi, n, Subject::Full, DEFAULT_BUDGET),
            partition_sum(map, &phi.shifted(shift), n, Subject::Full, DEFAULT_BUDGET),
        ) else {
            ok = false;
            break;
        };
        ok &= (b.lo - a.lo - shift).abs() <= 1e-9;
    }
    out.push(InvariantReport::check(
        m,
        "additive constants shift brackets exactly",
        ok,
        format!("shift {shift}"),
    ));

    let mut psi = phi.clone();
    if psi.left.poly.len() < 2 {
        psi.left.poly.resize(2, 0.0);
    }
    psi.left.poly[1] += rng.gen_range(-0.1..0.1);
    let dist = sup_norm_distance(phi, &psi, map.disc_f64());
    let mut ok = true;
    for &n in &depths {
        let (Ok(a), Ok(b)) = (
            partition_sum(map, phi, n, Subject::Full, DEFAULT_BUDGET),
            partition_sum(map, &psi, n, Subject::Full, DEFAULT_BUDGET),
        ) else {
            ok = false;
            break;
        };
        ok &= (a.lo - b.lo).abs() <= dist + 1e-9;
    }
    out.push(InvariantReport::check(
        m,
        "pressure is sup-norm Lipschitz",
        ok,
        format!("perturbation of sup-norm {dist:.3e}"),
    ));

    // lower-bound soundness needs a verified orbit
    let records = crate::cutting::admissible_flank_records(map, OrbitSide::Plus, 14);
    if let Some(rec) = records.first() {
        match periodic_from_cutting(map, rec) {
            Ok(orbit) if orbit.residual <= crate::pressure::ORBIT_RESIDUAL_TOL => {
                let lower = periodic_orbit_lower_bound(phi, &orbit).unwrap();
                let series = pressure(
                    map,
                    phi,
                    Subject::Full,
                    4..=12,
                    &PressureConfig::default(),
                );
                match series {
                    Ok(s) => out.push(InvariantReport::check(
                        m,
                        "periodic lower bound below certified upper bound",
                        lower <= s.upper_cert + 1e-6,
                        format!("lower {lower:.6} vs upper {:.6}", s.upper_cert),
                    )),
                    Err(e) => out.push(InvariantReport::skip(
                        m,
                        "periodic lower bound below certified upper bound",
                        e.to_string(),
                    )),
                }
            }
            _ => out.push(InvariantReport::skip(
                m,
                "periodic lower bound below certified upper bound",
                "no verifiable orbit at depth <= 14".into(),
            )),
        }
    } else {
        out.push(InvariantReport::skip(
            m,
            "periodic lower bound below certified upper bound",
            "no admissible records at depth <= 14".into(),
        ));
    }
}

fn cutting_invariants<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    out: &mut Vec<InvariantReport>,
) {
    let m = "cutting";
    let _ = phi;
    let n_max = 25u32;

    // stretch factor between consecutive auxiliary intervals
    let mut state = aux_initial(map, OrbitSide::Plus);
    let mut stretch_worst = 0.0f64;
    let mut steps = 0;
    while state.step < n_max {
        let before = if state.contains_disc {
            if state.critical.x < *map.disc() {
                map.disc().clone() - state.lo.clone()
            } else {
                state.hi.clone() - map.disc().clone()
            }
        } else {
            state.hi.clone() - state.lo.clone()
        };
        match aux_step(map, &state) {
            Ok(next) => {
                let after = next.hi.clone() - next.lo.clone();
                stretch_worst = stretch_worst
                    .max((after - map.beta().clone() * before).to_f64().abs());
                state = next;
                steps += 1;
            }
            Err(_) => break,
        }
    }
    if steps == 0 {
        out.push(InvariantReport::skip(
            m,
            "auxiliary intervals stretch by beta",
            "recursion degenerate at step 0".into(),
        ));
    } else {
        out.push(InvariantReport::check(
            m,
            "auxiliary intervals stretch by beta",
            stretch_worst <= ftol::<S>(1e-10),
            format!("{steps} steps, worst defect {stretch_worst:.3e}"),
        ));
    }

    // critical image tracks the sided orbit of disc^+
    let orbit = map.orbit(&SidedPoint::new(map.disc().clone(), Side::Right), steps);
    match orbit {
        Ok(orbit) => {
            let mut state = aux_initial(map, OrbitSide::Plus);
            let mut ok = true;
            for n in 1..=steps {
                state = match aux_step(map, &state) {
                    Ok(s) => s,
                    Err(_) => break,
                };
                ok &= state.critical.x == orbit.points[n].x;
            }
            out.push(InvariantReport::check(
                m,
                "critical image tracks the sided orbit",
                ok,
                format!("{steps} steps"),
            ));
        }
        Err(e) => out.push(InvariantReport::skip(
            m,
            "critical image tracks the sided orbit",
            e.to_string(),
        )),
    }

    let scan = cutting_times_side(map, OrbitSide::Plus, n_max);
    let admissible = scan.admissible(OrbitSide::Plus);
    if admissible.is_empty() {
        out.push(InvariantReport::skip(
            m,
            "admissible records cover and verify",
            format!(
                "no admissible records up to {n_max}{}",
                scan.degenerate_at
                    .as_ref()
                    .map(|(s, _, r)| format!(" (degenerate at {s}: {r})"))
                    .unwrap_or_default()
            ),
        ));
        return;
    }
    let mut covering_ok = true;
    let mut verify_ok = true;
    let mut widths = Vec::new();
    for rec in &admissible {
        covering_ok &= rec.covering();
        match periodic_from_cutting(map, rec) {
            Ok(orbit) => {
                verify_ok &= orbit.residual <= ftol::<S>(1e-10).max(1e-10);
                verify_ok &= orbit.point > orbit.cylinder_a && orbit.point < orbit.cylinder_b;
            }
            Err(_) => verify_ok = false,
        }
        widths.push(rec.cylinder.width().to_f64());
    }
    out.push(InvariantReport::check(
        m,
        "admissible records cover and verify",
        covering_ok && verify_ok,
        format!("{} admissible records", admissible.len()),
    ));
    out.push(InvariantReport::check(
        m,
        "flanking cylinders shrink",
        widths.windows(2).all(|w| w[1] <= w[0]),
        format!("{} widths, last {:.3e}", widths.len(), widths.last().unwrap()),
    ));
}

fn perturb_invariants<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    out: &mut Vec<InvariantReport>,
) {
    let m = "perturb";
    let plus = crate::cutting::admissible_flank_records(map, OrbitSide::Plus, 20);
    let minus = crate::cutting::admissible_flank_records(map, OrbitSide::Minus, 20);
    let (Some(rp), Some(rm)) = (plus.first(), minus.first()) else {
        out.push(InvariantReport::skip(
            m,
            "perturbation contracts",
            "no admissible record pair at depth <= 20".into(),
        ));
        return;
    };
    let epsilon = 0.3;
    let built = match build_perturbed(map, phi, epsilon, rp, rm, 1) {
        Ok(b) => b,
        Err(PerturbError::DisjointnessImpossible) => {
            out.push(InvariantReport::skip(
                m,
                "perturbation contracts",
                "orbit points collide within resolution".into(),
            ));
            return;
        }
        Err(e) => {
            out.push(InvariantReport::skip(m, "perturbation contracts", e.to_string()));
            return;
        }
    };

    let disc = map.disc_f64();
    let sup = built.sup_distance_from_base(disc);
    let mut peak_ok = true;
    for piece in [&built.combined.left, &built.combined.right] {
        for bump in &piece.bumps {
            let lifted = built.combined.eval_piece(
                if bump.center < disc { Branch::Left } else { Branch::Right },
                bump.center,
            );
            let base = built.base.eval_piece(
                if bump.center < disc { Branch::Left } else { Branch::Right },
                bump.center,
            );
            peak_ok &= ((lifted - base) - epsilon).abs() <= 1e-10;
        }
    }
    out.push(InvariantReport::check(
        m,
        "sup-norm moves by exactly epsilon",
        sup <= epsilon + 1e-12 && peak_ok,
        format!("sup distance {sup:.6}"),
    ));

    let inc_ok = (built.increment_plus - epsilon).abs() <= 1e-10
        && (built.increment_minus - epsilon).abs() <= 1e-10;
    out.push(InvariantReport::check(
        m,
        "defining-orbit averages rise by epsilon",
        inc_ok,
        format!(
            "plus {:.12}, minus {:.12}",
            built.increment_plus, built.increment_minus
        ),
    ));

    // Holder class: sampled quotients within the declared constant
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_q = 0.0f64;
    for _ in 0..10_000 {
        let on_left = rng.gen_bool(0.5);
        let (lo, hi) = if on_left { (0.0, disc) } else { (disc, 1.0) };
        let x = rng.gen_range(lo..hi);
        let y = rng.gen_range(lo..hi);
        if (x - y).abs() < 1e-12 {
            continue;
        }
        let branch = if on_left { Branch::Left } else { Branch::Right };
        let dv = (built.combined.eval_piece(branch, x) - built.combined.eval_piece(branch, y))
            .abs();
        worst_q = worst_q.max(dv / (x - y).abs().powf(built.combined.holder.a));
    }
    out.push(InvariantReport::check(
        m,
        "combined potential stays in the declared Holder class",
        worst_q <= built.combined.holder.k + 1e-6,
        format!("worst quotient {worst_q:.3} vs K = {:.3}", built.combined.holder.k),
    ));
}

fn potential_declaration<S: Scalar>(
    map: &BetaMap<S>,
    phi: &PiecewisePotential,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<InvariantReport>,
) {
    let m = "potential";
    let disc = map.disc_f64();
    let mut worst_q = 0.0f64;
    let mut sup_seen = 0.0f64;
    for _ in 0..10_000 {
        let on_left = rng.gen_bool(0.5);
        let (lo, hi) = if on_left { (0.0, disc) } else { (disc, 1.0) };
        let x = rng.gen_range(lo..hi);
        let y = rng.gen_range(lo..hi);
        let branch = if on_left { Branch::Left } else { Branch::Right };
        let vx = phi.eval_piece(branch, x);
        sup_seen = sup_seen.max(vx.abs());
        if (x - y).abs() < 1e-12 {
            continue;
        }
        let q = (vx - phi.eval_piece(branch, y)).abs() / (x - y).abs().powf(phi.holder.a);
        worst_q = worst_q.max(q);
    }
    out.push(InvariantReport::check(
        m,
        "sampled Holder quotients within declared K",
        worst_q <= phi.holder.k + 1e-9,
        format!("worst {worst_q:.4} vs declared {:.4}", phi.holder.k),
    ));
    out.push(InvariantReport::check(
        m,
        "bounded by declared sup_bound",
        sup_seen <= phi.sup_bound + 1e-9,
        format!("largest sample {sup_seen:.4} vs bound {:.4}", phi.sup_bound),
    ));
    out.push(InvariantReport::pass(
        m,
        "one-sided values defined at the discontinuity",
        format!(
            "phi(disc^-) = {:.6}, phi(disc^+) = {:.6}",
            phi.eval_piece(Branch::Left, disc),
            phi.eval_piece(Branch::Right, disc)
        ),
    ));
}

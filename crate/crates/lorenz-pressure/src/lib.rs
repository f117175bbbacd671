//! Thermodynamic formalism on generalized beta-transformations.
//!
//! The toolkit covers the computational side of equilibrium-state theory for
//! one-dimensional Lorenz-like expanding maps, with the beta-transformation
//! `T(x) = beta*x + alpha (mod 1)` as the concrete dynamics:
//!
//! * [`maps`] — the dynamics itself, sided evaluation across the
//!   discontinuity, inverse branches, orbits;
//! * [`symbolic`] — cylinder enumeration with exact affine branch data,
//!   boundary-adjacent cylinders, cylinder-count entropy;
//! * [`birkhoff`] — piecewise Holder potentials, Birkhoff sums, boundary
//!   limsup estimators;
//! * [`pressure`] — certified partition-sum brackets, topological pressure
//!   series, boundary pressure by direct sum and by the boundary-limsup
//!   shortcut, the pressure-gap membership test;
//! * [`cutting`] — the auxiliary-interval recursion, cutting times, and
//!   periodic points extracted from discontinuity-flanking cylinders;
//! * [`perturb`] — tent-bump perturbations along periodic orbits and the
//!   search that pushes a potential across the pressure-gap threshold;
//! * [`validate`] — the runtime invariant suite behind `validate`.
//!
//! Maps with rational parameters can be driven in exact arithmetic (see
//! [`scalar::Scalar`]); everything involving potentials is `f64`.

// negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN
// along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod birkhoff;
pub mod cutting;
pub mod maps;
pub mod perturb;
pub mod pressure;
pub mod scalar;
pub mod symbolic;
pub mod validate;

pub use birkhoff::{
    birkhoff_sum, boundary_limsup, sup_norm_distance, BoundaryBase, BoundaryLimsupEstimate,
    BumpTerm, HolderData, LimsupConfig, LimsupMode, Piece, PiecewisePotential, PotentialError,
};
pub use perturb::{
    build_perturbed, bump_boundary_pressure_decay, densify, AttemptSummary, BumpFamily,
    DecayPoint, DensifyConfig, DensifyOutcome, PerturbError, PerturbedPotential,
};
pub use cutting::{
    admissible_flank_records, aux_initial, aux_step, cutting_times, cutting_times_side,
    flank_record, orbit_average_convergence, periodic_from_cutting, AuxSetState, ConvergencePoint,
    ConvergenceReport, CuttingError, CuttingRecord, CuttingScan, OrbitSide, PeriodicOrbit,
    TAU_CUT,
};
pub use pressure::{
    boundary_pressure_shortcut, distortion_constant, h_membership, h_membership_with_witnesses,
    partition_sum, periodic_orbit_lower_bound, pressure, BoundaryPressure, GapConfig, GapVerdict,
    PressureBracket, PressureConfig, PressureError, PressureSeries, Subject, Verdict,
    ORBIT_RESIDUAL_TOL,
};
pub use maps::{
    Arithmetic, BetaMap, Branch, DynMap, MapError, MapKind, MapSpec, NumberOrRatio, Orbit, Side,
    SidedPoint,
};
pub use scalar::{LogSumExp, Scalar};
pub use symbolic::{
    boundary_cylinder, boundary_cylinders, entropy_estimate, refine, refine_levels, BasePoint,
    BoundaryAdjacency, Cylinder, EntropyPoint, EntropySeries, SymbolicError, DEFAULT_BUDGET,
};
pub use validate::{run_suite, InvariantReport, Outcome};

//! Workbench for qudit contextuality on a family of exclusivity graphs:
//! builds the graphs and the measurement vectors/state realizing a Hardy-type
//! argument and an extended KCBS inequality, machine-checks every claimed
//! property, optimizes the inequality over states, renders Majorana
//! constellations, and simulates finite-shot measurement runs with
//! per-context imprecision.

pub mod construction;
pub mod error;
pub mod formats;
pub mod graph;
pub mod majorana;
pub mod optimize;
pub mod precision;
pub mod rng;
pub mod svg;
pub mod vector;
pub mod verification;

pub use construction::{
    build_measurements, decompose_state, simplex_rows, CoefficientMatrix, MeasurementFamily,
    CONSTRUCTION_TOL, PHYSICS_TOL,
};
pub use error::{Error, Result};
pub use graph::{build_family_graph, independence_number, maximal_cliques, Context, Graph};
pub use majorana::{
    constellation, majorana_polynomial, polynomial_roots, reconstruct_state, Constellation,
    ConstellationPoint,
};
pub use optimize::{max_violation_state, projector_sum, HermitianOperator, OptimizationOutcome};
pub use precision::{
    onc_threshold, perturb_family, simulate_contexts, MeasurementMap, OncThreshold,
    SimulationResult,
};
pub use vector::{flip_operator, ComplexVector, FlipOperator};
pub use verification::{
    audit_orthogonality, classical_analysis, hardy_quantum_report, kcbs_value, verify_family,
    Assignment, ClassicalAnalysis, VerificationReport,
};

//! Exact computation in Lipschitz-free spaces over finite pointed metric
//! spaces.
//!
//! Elements of the free space `F(M)` are finitely supported combinations of
//! evaluation functionals. Their norm is the optimal value of a base-pointed
//! transportation problem, solved here by a network simplex over exact
//! rationals (or `f64` with a certified tolerance).

pub mod error;
pub mod experiments;
pub mod free_vec;
pub mod io;
pub mod lipschitz;
pub mod metric;
pub mod order;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod transport;
pub mod weighting;
pub mod weights;

pub use error::{Error, Result};
pub use free_vec::{FreeVector, Molecule, MoleculeDecomposition};
pub use lipschitz::{lip_constant_of, mcshane_extend, LipschitzFunction, WeightFunction};
pub use metric::{PointedMetricSpace, RadialReport};
pub use scalar::{Mode, Rational, Value};
pub use transport::{dual_optimal_function, kr_norm, norm, oracle_norm, Plan, TransportPlan};
pub use weighting::{class_report, kalton_parts, WeightOperator};
pub use weights::WeightKind;

//! Iterated function systems as points of a dynamical system.
//!
//! The state space is the space of infinite sequences of affine
//! contractions of a compact box, metrised by a weighted sum of the
//! bounded uniform distances between corresponding maps. On it act the
//! right shift and the exponential scaling flow. The crate also renders
//! attractors and computes similarity and box-counting dimensions.

pub mod alphabet;
pub mod contraction;
pub mod dimension;
pub mod distance;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod hausdorff;
mod linalg;
pub mod metric;
pub mod osc;
pub mod periodicity;
pub mod random;
pub mod raster;
pub mod render;
pub mod scenario;
pub mod sequence;
pub mod space;
pub mod verify;

pub use alphabet::{ContractionAlphabet, Symbol};
pub use contraction::{validate_contraction, AffineContraction};
pub use dimension::{
    box_counting_dimension, evolved_dimension, moran_dimension, uniform_dimension,
    DimensionMethod, DimensionReport,
};
pub use distance::{sequence_distance, DistanceReport, SymbolDistanceTable, DEFAULT_TOLERANCE};
pub use dynamics::{
    shift, shift_distance_identity, shift_n, verify_group_property, EvolutionOperator,
    GroupPropertyReport, OperatorKind, ShiftIdentityReport, Time,
};
pub use error::{Error, Result};
pub use hausdorff::hausdorff_distance;
pub use linalg::spectral_norm;
pub use metric::{bounded_distance, sup_distance};
pub use osc::{osc_check, osc_preserved_under_shift, OscResult, OscVerdict};
pub use periodicity::{classify_periodicity, periodic_truncation, Periodicity, PeriodicityReport};
pub use raster::AttractorRaster;
pub use render::{attractor_chaos_game, attractor_deterministic, hutchinson_step};
pub use scenario::Scenario;
pub use sequence::{
    distinct_system, embed_finite, sequences_equal, FiniteIfs, IfsSequence, Representation,
    SequenceEquality,
};
pub use space::{OpenBox, SpaceBox};

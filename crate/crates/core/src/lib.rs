//! Discrete-time quantum-walk unitaries evaluated through rotated
//! frequency-bin measurements.
//!
//! The crate builds coin, shift, and composed walk unitaries on lines,
//! cycles, and hypercubes, extracts output statistics by projecting the
//! *input* state onto rotated measurement vectors (the conjugated rows
//! of the walk unitary), maps those projections onto a physical
//! frequency-bin grid as pump masks, and scores simulated-vs-theory
//! distributions with the Bhattacharyya coefficient. A configurable
//! crosstalk + shot-noise model stands in for experimental
//! non-idealities.
//!
//! Entry points:
//! - [`walk`] / [`coin`] / [`topology`]: walk construction and evolution
//! - [`measurement`]: rotated-POVM readout and its forward oracle
//! - [`fbgrid`]: bin layout, pump masks, noise model
//! - [`metrics`], [`efficiency`]: benchmark figures of merit
//! - [`scenario`] / [`export`]: config-driven runs and file emission

pub mod coin;
pub mod efficiency;
pub mod error;
pub mod export;
pub mod fbgrid;
pub mod measurement;
pub mod metrics;
pub mod rng;
pub mod scenario;
pub mod state;
pub mod topology;
pub mod unitary;
pub mod walk;

pub use coin::{build_coin, CoinSpec};
pub use error::{Error, Result};
pub use fbgrid::{
    apply_crosstalk, compile_mask, sample_counts, BinGrid, CountRecord, MaskBin, MeasurementModel,
    PumpMask,
};
pub use measurement::{
    coin_resolved_probabilities, forward_reference, position_distribution, rotated_povm_element,
    ModeDistribution, PositionDistribution, PovmElement,
};
pub use metrics::{bhattacharyya, mean_similarity, total_variation, SimilarityReport};
pub use state::{make_initial_state, InitialState, StateVector};
pub use topology::{ModeIndex, Topology};
pub use unitary::UnitaryMatrix;
pub use walk::{build_step_operator, build_step_unitary, compose_walk, evolve, WalkSpec};

/// Version string recorded in run provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

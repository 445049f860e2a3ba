//! Phase-hologram synthesis for multi-spot 3D focal patterns.
//!
//! Three algorithms compute a spatial light modulator phase mask that
//! focuses light onto a set of target spots:
//!
//! * random superposition ([`solvers::rs`]),
//! * weighted Gerchberg-Saxton ([`solvers::wgs`]),
//! * weighted Gerchberg-Saxton iterating on a random pixel subset before two
//!   full passes ([`solvers::cswgs`]).
//!
//! Kernels sum directly over pupil pixels; reductions have a fixed tree
//! shape so results are bit-identical for any number of worker threads.

pub mod bench;
pub mod error;
pub mod io;
pub mod kernels;
pub mod metrics;
pub mod optics;
#[cfg(test)]
mod properties;
pub mod scenarios;
pub mod simulate;
pub mod solvers;

pub use error::{HoloError, Result};
pub use kernels::{
    forward_project, reduce_complex, superpose, Executor, SpotCoefficients, SpotFields,
};
pub use metrics::{efficiency, evaluate, spot_intensities, uniformity, QualityReport};
pub use optics::{
    build_pupil, spot_phase, wrap_phase, CompressionPlan, Hologram, Illumination, Pixel, Pupil,
    PupilConfig, Spot, SpotSet,
};
pub use scenarios::{Rotation, Scenario};
pub use simulate::{render_plane, Exposure, FieldImage, Window};
pub use solvers::{
    budget_controller, cswgs, rs, solve, wgs, wgs_step, Algorithm, Budget, CostModel, Solution,
    SolverConfig, SolverTrace,
};

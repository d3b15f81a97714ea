//! Chip calibration data and calibration-aware chain selection.

mod chip;
mod library;

pub use chip::{ChipModel, Coupler, QubitCalibration};
pub use library::{
    SearchMode, Subchain, SubchainLibrary, SubchainRegistry, DEFAULT_BEAM_WIDTH, EXHAUSTIVE_LIMIT,
};

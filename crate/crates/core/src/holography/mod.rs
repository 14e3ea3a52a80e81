//! Tilings, transfer nodes, correlators and the sampling experiments built on them.

pub mod correlator;
pub mod frame;
pub mod node;
pub mod tiling;
pub mod violin;

pub use correlator::{
    brute_force_correlator, network_correlator, three_point_path, two_point_path, Attachment, BulkOperator,
    CorrelatorResult, Method,
    TileTensor,
};
pub use frame::{verify_frame, FrameReport};
pub use node::{node_matrix, rotation_spectrum_scan, scaling_dimension, TransferNode};
pub use tiling::{path_census, PathCensus, PathSpec, PathStep, TileNetwork, TilingSpec};
pub use violin::{violin_csv, violin_sample, UnitaryMode, ViolinRow};

//! Two-stage preparation in the binary Pauli-frame picture, experiments and bound suites.

pub mod adjudicate;
pub mod baseline;
pub mod bounds;
pub mod noise;
pub mod rng;
pub mod simulate;
pub mod stage1;
pub mod stage2;

pub use adjudicate::{adjudicate, final_decode_and_adjudicate};
pub use baseline::{repeated_measurement_baseline, spacetime_detector_matrix, BaselineDecoders};
pub use bounds::{composition_suite, stage1_bound_suite, stage2_bound_suite, BoundReport, Stage2BoundSpec, SyndromeErrorSet};
pub use noise::{Experiment, NoiseModel, ProtocolOptions};
pub use rng::{derive_seed, Stream};
pub use simulate::{
    full_protocol_simulate, run_trial, with_workers, Basis, Estimate, PointResult, ProtocolDecoders, ProtocolSetup,
    ProtocolTrace, RunSpec, TrialOutcome,
};
pub use stage1::{stage1_decode, stage1_simulate, Stage1Outcome};
pub use stage2::{
    algorithm1_collapse, algorithm1_star, collapse, reconstruct_sheet_views, sample_intrinsic_error, Collapse,
    SheetDecoder, SheetView, TrustOutcomes,
};

//! Material networks as reservoirs: state harvesting, linear readouts and
//! the diagnostics used to judge them (separation, memory, classification).

mod harvest;
mod metrics;
mod readout;
mod tasks;

pub use harvest::{harvest_states, separation_score, trajectory_separation, ReservoirConfig, StateMatrix};
pub use metrics::{accuracy, nrmse, r_squared, Standardizer};
pub use readout::{
    gd_objective_curvature, objective, objective_gradient, predict, train_gd, train_ridge, GdFit,
    OneVsRest, ReadoutWeights,
};
pub use tasks::{
    build_waveform_dataset, episode_features, memory_capacity, memory_capacity_from, memory_input_stream,
    memory_task_data, waveform_classification_task, ClassificationReport, ClassificationTaskConfig, Episode,
    EpisodeFeatures, MemoryCapacity, MemoryData, MemoryTaskConfig, Split, TaskDataset,
};

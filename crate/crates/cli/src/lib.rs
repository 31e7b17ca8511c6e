//! Library surface of the pipeline driver: dataset loading and validation,
//! stage orchestration, artifact emission, and the synthetic-dataset
//! generator. The `aquarisk` binary is a thin clap wrapper over these.

pub mod dataset;
pub mod pipeline;
pub mod report;
pub mod synth;

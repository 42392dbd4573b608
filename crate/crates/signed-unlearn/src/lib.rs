//! Certified unlearning for signed graphs.
//!
//! Removing edges, nodes, or features from a trained signed-graph link
//! predictor without retraining from scratch, with an
//! (epsilon, delta)-indistinguishability guarantee against the retrained
//! model. The pieces:
//!
//! - [`graph`]: the signed-graph data model, loaders for trust-network
//!   edge lists, triangle enumeration, and deletion scenarios.
//! - [`region`]: certification regions grown by triadic closure, plus a
//!   k-hop baseline.
//! - [`influence`]: balance- and status-based node influence, softmax
//!   normalization, and per-edge weights.
//! - [`model`]: a frozen signed encoder with a trainable logistic head;
//!   loss, gradients, and Hessian-vector products in closed form.
//! - [`unlearn`]: the influence-function update via conjugate gradient,
//!   per-edge sensitivity, Gaussian noise calibration, and a privacy
//!   budget ledger.
//! - [`eval`]: Macro-F1 sign prediction, membership-inference AUC, and
//!   retrain-distance diagnostics.
//! - [`pipeline`]: end-to-end experiment runs with JSON and CSV output.
//!
//! The `examples/` directory has one runnable program per capability;
//! `signed-unlearn` is the matching command-line entry point.

pub mod error;
pub mod eval;
pub mod graph;
pub mod influence;
pub mod model;
pub mod pipeline;
pub mod region;
pub mod rng;
pub mod synthetic;
pub mod unlearn;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{DeletionRequest, Edge, Scenario, Sign, SignedGraph};
pub use model::{EdgeBatch, Embeddings, EncodeConfig, PredictorState, TrainConfig};
pub use pipeline::{Method, RunConfig, RunReport};
pub use region::{CertRegion, RegionMode};
pub use synthetic::{synthetic_graph, SyntheticConfig};
pub use unlearn::{PrivacyBudget, UnlearnConfig, UnlearnResult};
pub use weights::{EdgeWeights, WeightMode};

//! Random-forest prediction of the quality-control label from the six
//! metadata features.

mod features;
mod forest;
mod metrics;
mod split;
pub mod tree;

pub use features::{extract_features, feature_table, labeled_features};
pub use forest::{
    feature_importances, predict, train_forest, ForestModel, ForestParams, Importances, Prediction,
};
pub use metrics::{evaluate, Metrics};
pub use split::{split, SplitSpec};
pub use tree::{gini, DecisionTree, Node, TreeParams};

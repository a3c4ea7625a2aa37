//! Random colored trees, the melonic graphs and ball skeletons they encode,
//! geodesic depth via distance arrays, and random walks on the graphs.

pub mod ball;
pub mod count;
pub mod coverage;
pub mod depth;
pub mod error;
pub mod fit;
pub mod graph;
pub mod par;
pub mod sampler;
pub mod series;
pub mod series_lab;
pub mod tree;
pub mod walk;
pub mod walk_algebra;
pub mod word;

pub use ball::BallSkeleton;
pub use error::{Error, Result};
pub use graph::MelonGraph;
pub use par::Exec;
pub use series::{Field, Rational, RationalSeries, TruncatedSeries};
pub use tree::{MelonTree, NodeId};
pub use word::{Color, ColoredWord};

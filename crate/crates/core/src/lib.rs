pub mod cut;
pub mod dual;
pub mod excess;
pub mod ext;
pub mod format;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod metric;
pub mod multiflow;
pub mod normalize;
pub mod oracle;
pub mod reduction;
pub mod solver;

pub use ext::Ext;
pub use graph::{Dart, EdgeId, EmbeddedGraph, FaceId, GraphError, VertexId};
pub use instance::{BoundaryCycle, Demand, Instance, InstanceError, TopologyEvent, ValidationReport};

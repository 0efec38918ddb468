pub mod age;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod harness;
pub mod nodeset;
pub mod sim;
pub mod subset;
pub mod topology;

pub use age::{AgeKind, AgeResult, Provenance};
pub use error::{Error, Result};
pub use nodeset::NodeSet;
pub use topology::{Family, Graph, GraphBuilder, Rates, TopologyDescriptor};

//! Declarative experiments: sweeps over a topology family evaluated with
//! exact solving, simulation, chains and closed forms, written as CSV.

mod crosscheck;
mod extremal;
mod run;
mod spec;

pub use crosscheck::*;
pub use extremal::*;
pub use run::*;
pub use spec::*;

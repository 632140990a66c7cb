//! Proto-algorithms: algorithm graphs over an alphabet, interpretations,
//! step semantics, equivalence checking and process-algebra proofs.

pub mod equiv;
pub mod exec;
pub mod frontend;
pub mod graph;
pub mod interp;
pub mod procalg;
pub mod prove;
pub mod translate;

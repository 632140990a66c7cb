//! Text format, fixtures, random instances and JSON reports.

pub mod fixtures;
pub mod generate;
pub mod parse;
pub mod pretty;
pub mod report;
pub mod selftest;

use thiserror::Error;

pub use parse::{parse, Code, Diagnostic, Document, Spans};
pub use pretty::{document_of, pretty};

use crate::exec::{ProtoAlgorithm, ProtoError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}", render(.0))]
    Syntax(Vec<Diagnostic>),
    #[error("document has no {0} section")]
    MissingSection(&'static str),
    #[error(transparent)]
    Invalid(#[from] ProtoError),
}

fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

impl Document {
    /// Assemble the graph and interpretation sections into a proto-algorithm.
    pub fn proto_algorithm(&self) -> Result<ProtoAlgorithm, LoadError> {
        let graph = self.graph.clone().ok_or(LoadError::MissingSection("GRAPH"))?;
        let interp = self.interp.clone().ok_or(LoadError::MissingSection("INTERP"))?;
        Ok(ProtoAlgorithm::new(self.alphabet.clone(), graph, interp)?)
    }
}

pub fn load_proto_algorithm(text: &str) -> Result<ProtoAlgorithm, LoadError> {
    parse(text).map_err(LoadError::Syntax)?.proto_algorithm()
}

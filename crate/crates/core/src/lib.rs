//! Hypergraphs with sources as a monad, polynomial operations, hyperedge
//! replacement grammars, tree decompositions, counting MSO over relational
//! encodings, finite recognising algebras and the vertex replacement monad.

pub mod algebra;
pub mod canon;
pub mod decomposition;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod grammar;
pub mod hypergraph;
pub mod laws;
pub mod mso;
pub mod polynomial;
pub mod ranked;
pub mod sample;
pub mod sexp;
pub mod vr;

pub use error::{Error, Result};
pub use hypergraph::{Hyperedge, Hypergraph, Label};
pub use ranked::{Ranked, RankedAlphabet, RankedMap, Symbol};

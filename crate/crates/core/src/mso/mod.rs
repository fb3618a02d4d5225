//! Relational models, counting MSO and logical equivalence.

pub mod base;
pub mod encode;
pub mod eval;
pub mod formula;
pub mod model;
pub mod ops;
pub mod powerset;
pub mod random;
pub mod types;

pub use base::{base_count_divisible, base_shared_vertex, count_label};
pub use encode::{encode_h, encode_v};
pub use eval::{eval_cmso, eval_formula};
pub use formula::{Formula, SetTerm, Term};
pub use model::{Model, Relation, Vocabulary};
pub use ops::{model_disjoint_union, model_product, qf_interpret, qf_restrict, Interpretation};
pub use powerset::{cmso_equiv, powerset_model, CmsoSignature, Generators};
pub use types::{equiv_r, rank_type, RankType, TypeContext};

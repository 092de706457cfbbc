//! Symbolic open sets of `I(X)` and `S(Y)`, membership, separation,
//! preimage formulas and sequence convergence.

mod atom;
mod convergence;
mod member;
mod preimage;
mod separate;
mod witness;

pub use atom::{BasicOpenSet, Literal, OpenSetExpr, SubbasicAtom, TopologyKind};
pub use convergence::{
    converges, converges_tau1, converges_tau2, converges_taupp, metric_convergence_agrees, metric_verdict,
    paired_topology, Agreement, MetricVerdict, Verdict,
};
pub use member::{atom_member, is_empty, member, member_basic, member_perm, witness};
pub use preimage::{preimage_compose, preimage_inverse, PairExpr};
pub use separate::{separate, SeparationWitness, Side};
pub use witness::{
    dom_im_image_of_basic, nowhere_dense_witness, nowhere_dense_witness_w1, translate_w1, Cylinder,
    NowhereDenseWitness, TranslateReport,
};

pub(crate) use atom::{parse_atom, parse_basic, parse_expr};

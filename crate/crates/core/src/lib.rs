//! Graph restricted tensors: dense tensors whose reduced states are
//! proportional to the identity on every clique of a constraint graph,
//! the symmetric solution families on pentagons and hexagons, and tools
//! for evaluating correlators on hyperbolic tilings built from them.

pub mod catalog;
pub mod constraints;
pub mod entanglement;
pub mod error;
pub mod format;
pub mod holography;
pub mod linalg;
pub mod network;
pub mod solver;
pub mod symmetry;
pub mod tensor;

pub use catalog::{Family, SolutionRecord};
pub use constraints::{
    check_graph_constrained, check_hypergraph_constrained, Constraint, ConstraintGraph,
    ConstraintHypergraph, ConstraintReport, SubsetCheck,
};
pub use entanglement::{entropy_profile, purity_delta, EntropyProfile};
pub use error::{GrtError, Result};
pub use symmetry::{orbits, OrbitTable, SymmetryElement, SymmetrySpec};
pub use tensor::{
    as_operator, contract, proportional_to_identity, reduce, Bipartition, DenseTensor,
    DensityMatrix, IdentityCheck, C64,
};

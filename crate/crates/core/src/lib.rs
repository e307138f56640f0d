pub mod circulant;
pub mod digraph;
pub mod error;
pub mod orthogonal;
pub mod recursion;
pub mod rotational;
pub mod solver;
pub mod verify;

pub use digraph::{
    circulant_digraph, complete_symmetric_arcs, cycle_type_of, rotate, Arc, ConnectionSet,
    CycleType, Decomposition, Digraph, DirectedCycle, Orbit, TwoFactor, Vertex,
};
pub use error::{Error, Result};
pub use verify::{
    verify_decomposition, verify_orthogonal, verify_two_factor, CertificateReport, FailureKind,
    Shape,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    pub mod certificates {}
    #[doc = include_str!("../../../book/src/rotational.md")]
    pub mod rotational {}
    #[doc = include_str!("../../../book/src/circulants.md")]
    pub mod circulants {}
    #[doc = include_str!("../../../book/src/orthogonal.md")]
    pub mod orthogonal {}
    #[doc = include_str!("../../../book/src/extension.md")]
    pub mod extension {}
    #[doc = include_str!("../../../book/src/solver.md")]
    pub mod solver {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

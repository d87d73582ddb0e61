//! Decides whether an anticanonically embedded Severi-Brauer surface over Q
//! (given by its 27 defining quadrics in P^9) is isomorphic to the projective
//! plane, and constructs the explicit linear parametrization when it is.
//!
//! The route goes through exact linear algebra: the Lie algebra of the
//! surface, its traceless part, a Cartan subalgebra and its splitting
//! behaviour, and in the non-split direction a central simple algebra with a
//! cyclic presentation whose norm equation settles the question.

pub mod rat;
pub mod scalar;

pub mod csa;
pub mod factorq;
pub mod latred;
pub mod liealg;
pub mod mat;
pub mod modp;
pub mod normeq;
pub mod numfield;
pub mod poly;
pub mod surface;

pub use rat::Rat;

/// Matrices over the rationals, the workhorse type of the surface pipeline.
pub type QMatrix = mat::Mat<Rat>;

/// Univariate rational polynomials.
pub type UniPoly = poly::Poly<Rat>;

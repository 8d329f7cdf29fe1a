//! Cup products in the étale cohomology of genus-one curves over finite fields.
//!
//! The crate computes, for an elliptic curve E over F_q with q = 1 mod ell,
//! Weil and Tate pairings, the Frobenius action on E[ell^n], the Legendre
//! derivative of Frobenius, and the cup and triple products on
//! H^1(E, mu_ell). A separate module checks the genus-two family of curves on
//! which the span of normalized cup products is large.

pub mod error;
pub mod cup;
pub mod curve;
pub mod field;
pub mod galois;
pub mod genus2;
pub mod linalg;
pub mod pairing;
pub mod poly;

pub use error::{Error, Result};
pub use field::{embed, make_context, make_context_capped, Embedding, FElem, FieldCtx, MuRoot};
pub use curve::{Curve, Ec, GroupStructure, Point, TorsionBasis};

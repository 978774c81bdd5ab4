//! Exact symbolic engine for the rank-d free boson vertex algebra M(1), its
//! theta-fixed subalgebra M(1)^+, the modules M(1,lam) and M(1)(theta), and a
//! catalog-driven verification harness.

pub mod boundary;
pub mod catalog;
pub mod error;
pub mod exactalg;
pub mod fock;
pub mod modp;
pub mod twisted;
pub mod vertex;
pub mod zhu;

pub use error::{Error, Result};
pub use exactalg::{PolyQ, Rat, UniPoly, Var};
pub use fock::{GenName, Half, ModuleKind, Monomial, State, VAElement};

//! The super jet ring: even coordinates `u^{i,s}`, odd coordinates `θ_i^s`,
//! with `u^{i,0}` carried inside the coefficients.

pub mod basis;
pub mod ext;
pub mod mono;
pub mod poly;

pub use ext::{eval_oracle, ExtDiffPoly, JetValues};
pub use mono::{Gen, Jet, Mono};
pub use poly::{DiffPoly, JetPoly};

use crate::coeffs::{LamPoly, RootExt};

pub type LamDiffPoly = JetPoly<LamPoly>;
pub type RootDiffPoly = JetPoly<RootExt>;

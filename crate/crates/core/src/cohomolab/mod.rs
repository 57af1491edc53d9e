//! Bidegree bookkeeping for the vanishing statements, monomial atlases of
//! the graded pieces, and bounded-degree linear probes.

mod ansatz;
mod atlas;
mod window;

pub use ansatz::{
    ansatz_solve, form_basis, AnsatzMode, AnsatzOutcome, AnsatzProblem, AnsatzReport, DEFAULT_CAP,
};
pub use atlas::{atlas, in_c, in_c_i, in_c_i_nontrivial, in_mixed, MonomialAtlas, Space};
pub use window::{omega_lambda_window, vbh_guaranteed_zero, Bidegree, BidegreeWindow, WindowCase};

//! Semisimple bihamiltonian structures of hydrodynamic type in canonical
//! coordinates and the constructions on their degree `(1, 2)` forms.

mod cocycle;
mod conformal;
mod oracle;
mod pair;
mod spectral;

pub use cocycle::{
    build_tau, indices, is_cocycle, normalize_cocycle, Gauge, IndexVector, NormalFormCocycle,
    Normalized,
};
pub use conformal::{
    conformal_central_invariants, conformal_check, euler_field, index_ode_check,
    CentralInvariantLaw, ConformalData, EulerField,
};
pub use oracle::mn_oracle;
pub use pair::{is_bihamiltonian, SemisimpleHydroPair};
pub use spectral::{
    delta_dhat, delta_minus_one, delta_minus_one_poly, dhat, psi, psi_form, rotation_coeffs, DHat,
    Direction,
};

//! Fermionic operators, Jordan–Wigner encoding and UCC excitations.

mod excitation;
mod operator;

pub use excitation::{generate_uccsd_pool, hardcore_boson_image, Excitation, ExcitationKind};
pub use operator::{jordan_wigner, jw_ladder, FermionOperator, Ladder};

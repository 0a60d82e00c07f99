//! Abstract finitely generated abelian groups with a Frobenius
//! endomorphism: the engine behind the return-set decompositions.

mod closedform;
mod decompose;
mod module;
mod recurrence;
mod text;

pub use closedform::{cyclic_closed_form, fit_doubling_powers};
pub use decompose::{decompose_index_set, Certification, Decomposition, FSetSpec};
pub use module::{EigenData, FgModule, FrobeniusSpec, FsetError, ModElem, QuadInt};
pub use recurrence::{phi_power_apply, recurrence_basis, LinRecSeq};
pub use text::{parse_frobenius_spec, render_decomposition};

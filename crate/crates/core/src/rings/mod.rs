//! The concrete ring contexts and their ideal arithmetic.

pub mod ideal;
pub mod padic;
pub mod polyring;
pub mod quadratic;

pub use ideal::{ideal_add, ideal_meet, PrincipalIdeal, RootPower};
pub use padic::padic_tcm;
pub use polyring::poly_seminorm;
pub use quadratic::{quad_approx, quad_inverse_approx, QuadApprox};

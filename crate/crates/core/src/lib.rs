//! Chinese remainder approximation over concretely representable topological
//! rings: `p`-adic integers, `Z[√2] ⊂ R` and polynomial rings with disk
//! seminorms. Every solver returns a certificate that can be re-checked with
//! exact arithmetic.

pub mod crat;
pub mod error;
pub mod exec;
pub mod hyperspace;
pub mod interp;
pub mod numeric;
pub mod ring;
pub mod rings;

pub use error::{Error, Result};
pub use ring::{Element, PseudoValuation, RingContext, RingKind, Valuation};
pub use rings::{PrincipalIdeal, RootPower};

use num_integer::Integer;

use crate::error::Result;
use crate::ring::RingContext;

use super::PrincipalIdeal;

/// `aZ` and `bZ` are topologically co-maximal in the `p`-adic topology
/// exactly when one of them is dense, i.e. when `p` fails to divide `a` or `b`.
pub fn padic_tcm(i: &PrincipalIdeal, j: &PrincipalIdeal, ctx: &RingContext) -> Result<bool> {
    let p = ctx.prime()?;
    let (a, b) = (i.int_generator()?, j.int_generator()?);
    Ok(!a.is_multiple_of(p) || !b.is_multiple_of(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characterization_examples() {
        let c5 = RingContext::padic(5).unwrap();
        let c3 = RingContext::padic(3).unwrap();
        let id = PrincipalIdeal::int;
        assert!(padic_tcm(&id(6), &id(10), &c5).unwrap());
        assert!(padic_tcm(&id(1), &id(9), &c3).unwrap());
        assert!(!padic_tcm(&id(3), &id(9), &c3).unwrap());
        assert!(!padic_tcm(&id(0), &id(0), &c3).unwrap());
        assert!(padic_tcm(&id(3), &id(9), &RingContext::quad()).is_err());
    }
}

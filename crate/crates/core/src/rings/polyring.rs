use num_rational::BigRational;
use num_traits::Zero;

use crate::numeric::CRational;
use crate::ring::{disk_norm, CPoly};

/// Disk seminorm `Σ |c_k| R^k`, with `|c|` the taxicab modulus of a Gaussian
/// rational. It dominates the sup norm on `|z| <= R`.
pub fn poly_seminorm(f: &CPoly, radius: &BigRational) -> BigRational {
    disk_norm(f, radius)
}

/// `|w|² <= R²`, decided exactly.
pub fn in_closed_disk(w: &CRational, radius: &BigRational) -> bool {
    w.modulus_sq() <= radius * radius
}

/// Rational lower bound for `|w|`: exact when `w` lies on an axis, otherwise
/// `max(|re|, |im|)`.
pub fn modulus_lower_bound(w: &CRational) -> BigRational {
    w.norm_inf()
}

/// `true` iff `modulus_lower_bound` is exact.
pub fn modulus_is_exact(w: &CRational) -> bool {
    w.re.is_zero() || w.im.is_zero()
}

/// `Π_k (z - z_k)` over the given roots.
pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a CRational>) -> CPoly {
    roots
        .into_iter()
        .fold(CPoly::one(), |acc, r| &acc * &CPoly::linear(r.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn seminorm_examples() {
        let one = rat(1, 1);
        assert_eq!(poly_seminorm(&CPoly::zero(), &one), rat(0, 1));
        let f = CPoly::new(vec![CRational::from_int(1), CRational::from_int(1)]);
        assert_eq!(poly_seminorm(&f, &one), rat(2, 1));
        let g = CPoly::monomial(CRational::from_int(3), 2);
        assert_eq!(poly_seminorm(&g, &rat(2, 1)), rat(12, 1));
        let h = CPoly::constant(CRational::new(rat(1, 2), rat(-1, 3)));
        assert_eq!(poly_seminorm(&h, &one), rat(5, 6));
    }

    #[test]
    fn disk_tests() {
        let r = rat(1, 1);
        assert!(in_closed_disk(&CRational::new(rat(3, 5), rat(4, 5)), &r));
        assert!(!in_closed_disk(&CRational::new(rat(3, 5), rat(5, 6)), &r));
        assert_eq!(
            from_roots(&[CRational::from_int(1), CRational::from_int(2)])
                .coeffs()
                .len(),
            3
        );
    }
}

//! Dense univariate polynomials over a ring tower.

pub mod finite_field;

pub use finite_field::{factor_over_finite_field, roots_in_finite_field, FiniteField, BRUTE_FORCE_LIMIT};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// Coefficients of X^0, X^1, …; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(ring: &Ring, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn constant(ring: &Ring, c: Elem) -> Poly {
        Poly::new(ring, vec![c])
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, ring.one())
    }

    /// The variable X.
    pub fn x(ring: &Ring) -> Poly {
        Poly::new(ring, vec![ring.zero(), ring.one()])
    }

    /// X − a.
    pub fn linear(ring: &Ring, a: &Elem) -> Poly {
        Poly::new(ring, vec![ring.neg(a), ring.one()])
    }

    pub fn from_ints(ring: &Ring, cs: &[i64]) -> Poly {
        Poly::new(ring, cs.iter().map(|&c| ring.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, ring: &Ring, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, ring: &Ring) -> bool {
        self.leading().is_some_and(|c| ring.is_one(c))
    }

    pub fn eq(&self, ring: &Ring, other: &Poly) -> bool {
        self.sub(ring, other).is_zero()
    }

    pub fn add(&self, ring: &Ring, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            ring,
            (0..n)
                .map(|i| ring.add(&self.coeff(ring, i), &other.coeff(ring, i)))
                .collect(),
        )
    }

    pub fn neg(&self, ring: &Ring) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| ring.neg(c)).collect(),
        }
    }

    pub fn sub(&self, ring: &Ring, other: &Poly) -> Poly {
        self.add(ring, &other.neg(ring))
    }

    pub fn mul(&self, ring: &Ring, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_structural_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
            }
        }
        Poly::new(ring, out)
    }

    pub fn scale(&self, ring: &Ring, c: &Elem) -> Poly {
        Poly::new(ring, self.coeffs.iter().map(|a| ring.mul(a, c)).collect())
    }

    pub fn pow(&self, ring: &Ring, e: usize) -> Poly {
        (0..e).fold(Poly::one(ring), |acc, _| acc.mul(ring, self))
    }

    pub fn product<'a>(ring: &Ring, items: impl IntoIterator<Item = &'a Poly>) -> Poly {
        items.into_iter().fold(Poly::one(ring), |acc, p| acc.mul(ring, p))
    }

    /// Division by a monic polynomial: `self = q·b + r`, `deg r < deg b`.
    pub fn divmod_monic(&self, ring: &Ring, b: &Poly) -> Result<(Poly, Poly)> {
        if !b.is_monic(ring) {
            return Err(Error::NonMonicDivisor);
        }
        let db = b.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![ring.zero(); rem.len() - db];
        for t in (db..rem.len()).rev() {
            let c = rem[t].clone();
            if ring.is_zero(&c) {
                continue;
            }
            q[t - db] = c.clone();
            for (j, bj) in b.coeffs.iter().enumerate() {
                let idx = t - db + j;
                rem[idx] = ring.sub(&rem[idx], &ring.mul(&c, bj));
            }
        }
        rem.truncate(db);
        Ok((Poly::new(ring, q), Poly::new(ring, rem)))
    }

    pub fn rem_monic(&self, ring: &Ring, b: &Poly) -> Result<Poly> {
        Ok(self.divmod_monic(ring, b)?.1)
    }

    pub fn derivative(&self, ring: &Ring) -> Poly {
        Poly::new(
            ring,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ring.mul(&ring.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Horner evaluation at `x`, which may live in an extension `target ⊇ ring`.
    pub fn evaluate_in(&self, ring: &Ring, target: &Ring, x: &Elem) -> Elem {
        self.coeffs.iter().rev().fold(target.zero(), |acc, c| {
            target.add(&target.mul(&acc, x), &target.embed(ring, c))
        })
    }

    pub fn evaluate(&self, ring: &Ring, x: &Elem) -> Elem {
        self.evaluate_in(ring, ring, x)
    }

    /// Coefficientwise image along a map of rings.
    pub fn map(&self, target: &Ring, f: impl Fn(&Elem) -> Elem) -> Poly {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    /// Image under a tower inclusion `sub → target`.
    pub fn embed(&self, sub: &Ring, target: &Ring) -> Poly {
        self.map(target, |c| target.embed(sub, c))
    }

    pub fn show(&self, ring: &Ring) -> String {
        ring.show_poly(&self.coeffs, "X")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divides_x2_plus_1_by_x_minus_2_mod_5() {
        let r = Ring::prime_field(5).unwrap();
        let a = Poly::from_ints(&r, &[1, 0, 1]);
        let b = Poly::from_ints(&r, &[-2, 1]);
        let (q, rem) = a.divmod_monic(&r, &b).unwrap();
        assert!(q.eq(&r, &Poly::from_ints(&r, &[2, 1])));
        assert!(rem.is_zero());
    }

    #[test]
    fn division_by_one_and_by_x2() {
        let z = Ring::integers();
        let a = Poly::from_ints(&z, &[3, -1, 4, 1]);
        let (q, rem) = a.divmod_monic(&z, &Poly::one(&z)).unwrap();
        assert_eq!(q, a);
        assert!(rem.is_zero());
        let (q, rem) = Poly::from_ints(&z, &[0, 0, 0, 1])
            .divmod_monic(&z, &Poly::from_ints(&z, &[0, 0, 1]))
            .unwrap();
        assert_eq!(q, Poly::x(&z));
        assert!(rem.is_zero());
    }

    #[test]
    fn non_monic_divisor_rejected() {
        let z = Ring::integers();
        let err = Poly::x(&z).divmod_monic(&z, &Poly::from_ints(&z, &[1, 2])).unwrap_err();
        assert_eq!(err, Error::NonMonicDivisor);
    }

    #[test]
    fn derivative_and_evaluation() {
        let r = Ring::zmod_pk(5, 2).unwrap();
        let f = Poly::from_ints(&r, &[1, 0, 1]);
        assert!(f.derivative(&r).eq(&r, &Poly::from_ints(&r, &[0, 2])));
        assert!(r.is_zero(&f.evaluate(&r, &r.from_int(7))));
        assert!(Poly::from_ints(&r, &[4]).derivative(&r).is_zero());
    }
}

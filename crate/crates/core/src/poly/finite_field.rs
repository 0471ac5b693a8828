//! Factorization and root finding over finite fields given as towers
//! 𝔽_p[y_1]/(g_1)[y_2]/(g_2)… with irreducible moduli.
//!
//! Square-free decomposition, distinct-degree factorization and
//! Cantor–Zassenhaus equal-degree splitting (trace map in characteristic 2).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// Fields up to this size are searched exhaustively for roots.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

const SPLIT_SEED: u64 = 0x5eed_f1e1d;

#[derive(Clone, Debug)]
pub struct FiniteField {
    ring: Ring,
    p: BigInt,
    degree: usize,
    size: BigInt,
}

impl FiniteField {
    pub fn new(ring: &Ring) -> Result<FiniteField> {
        let base = ring.base();
        let Some((p, 1)) = base.modular_params() else {
            return Err(Error::NotFiniteField(ring.describe()));
        };
        let p = p.clone();
        let degree = ring
            .rank_over(&base)
            .map_err(|_| Error::NotFiniteField(ring.describe()))?;
        let size = num_traits::pow(p.clone(), degree);
        Ok(FiniteField {
            ring: ring.clone(),
            p,
            degree,
            size,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn characteristic(&self) -> &BigInt {
        &self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> &BigInt {
        &self.size
    }

    pub fn monic(&self, f: &Poly) -> Poly {
        match f.leading() {
            None => Poly::zero(),
            Some(c) => {
                let inv = self.ring.inverse(c).expect("nonzero field element");
                f.scale(&self.ring, &inv)
            }
        }
    }

    /// Remainder of `a` modulo a nonzero `b`.
    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        let r = &self.ring;
        let lc_inv = r.inverse(b.leading().expect("nonzero divisor")).unwrap();
        let bm = b.scale(r, &lc_inv);
        a.rem_monic(r, &bm).unwrap()
    }

    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let r = &self.ring;
        let lc_inv = r.inverse(b.leading().expect("nonzero divisor")).unwrap();
        let (q, rem) = a.divmod_monic(r, &b.scale(r, &lc_inv)).unwrap();
        debug_assert!(rem.is_zero());
        q.scale(r, &lc_inv)
    }

    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` monic.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let r = &self.ring;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(r), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one(r));
        while !r1.is_zero() {
            let lc_inv = r.inverse(r1.leading().unwrap()).unwrap();
            let (q, rem) = r0.divmod_monic(r, &r1.scale(r, &lc_inv)).unwrap();
            let q = q.scale(r, &lc_inv);
            let s2 = s0.sub(r, &q.mul(r, &s1));
            let t2 = t0.sub(r, &q.mul(r, &t1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.leading() {
            None => (Poly::zero(), s0, t0),
            Some(c) => {
                let inv = r.inverse(c).unwrap();
                (r0.scale(r, &inv), s0.scale(r, &inv), t0.scale(r, &inv))
            }
        }
    }

    /// `base^e mod m` for monic `m`.
    pub fn powmod(&self, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
        let r = &self.ring;
        let base = base.rem_monic(r, m).unwrap();
        let mut acc = Poly::one(r).rem_monic(r, m).unwrap();
        for i in (0..e.bits()).rev() {
            acc = acc.mul(r, &acc).rem_monic(r, m).unwrap();
            if e.bit(i) {
                acc = acc.mul(r, &base).rem_monic(r, m).unwrap();
            }
        }
        acc
    }

    pub fn element_at(&self, i: &BigInt) -> Elem {
        self.ring.element_at(i).expect("finite field enumeration")
    }

    fn pth_root(&self, a: &Elem) -> Elem {
        let e: BigUint = (&self.size / &self.p).to_biguint().unwrap();
        self.ring.pow_big(a, &e)
    }

    /// Square-free decomposition of a monic `f`: pairs (square-free part, multiplicity).
    pub fn squarefree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let r = &self.ring;
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let c = self.gcd(f, &f.derivative(r));
        let mut w = self.div_exact(f, &c);
        let mut c = c;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = self.gcd(&w, &c);
            let fac = self.div_exact(&w, &y);
            if fac.degree().unwrap_or(0) > 0 {
                out.push((fac, i));
            }
            w = y;
            c = self.div_exact(&c, &w);
            i += 1;
        }
        if c.degree().unwrap_or(0) > 0 {
            // c is a p-th power
            let p = self.p.to_usize().expect("characteristic fits in usize");
            let root: Vec<Elem> = c.coeffs().iter().step_by(p).map(|a| self.pth_root(a)).collect();
            let root = Poly::new(r, root);
            for (g, m) in self.squarefree(&root) {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic square-free `f`.
    pub fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let r = &self.ring;
        let q = self.size.to_biguint().unwrap();
        let mut out = Vec::new();
        let mut g = f.clone();
        let x = Poly::x(r);
        let mut h = x.rem_monic(r, &g).unwrap();
        let mut i = 1;
        while g.degree().unwrap_or(0) >= 2 * i {
            h = self.powmod(&h, &q, &g);
            let d = self.gcd(&g, &h.sub(r, &x));
            if d.degree().unwrap_or(0) > 0 {
                g = self.div_exact(&g, &d);
                h = h.rem_monic(r, &g).unwrap();
                out.push((d, i));
            }
            i += 1;
        }
        if let Some(dg) = g.degree().filter(|&d| d > 0) {
            out.push((g, dg));
        }
        out
    }

    /// Splits a monic product of distinct irreducibles of degree `d`.
    pub fn equal_degree(&self, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let r = &self.ring;
        let n = f.degree().unwrap();
        if n == d {
            return vec![f.clone()];
        }
        let q = self.size.to_biguint().unwrap();
        loop {
            let a = Poly::new(r, (0..n).map(|_| r.random_elem(rng, 1)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if self.p == BigInt::from(2) {
                // trace map of 𝔽_{q^d} over 𝔽_2
                let steps = self.degree * d;
                let mut term = a.rem_monic(r, f).unwrap();
                let mut acc = term.clone();
                for _ in 1..steps {
                    term = term.mul(r, &term).rem_monic(r, f).unwrap();
                    acc = acc.add(r, &term);
                }
                acc
            } else {
                let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
                self.powmod(&a, &e, f).sub(r, &Poly::one(r))
            };
            let g = self.gcd(f, &b);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let other = self.div_exact(f, &g);
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&other, d, rng));
                return out;
            }
        }
    }

    /// Irreducible factorization of a monic polynomial, sorted canonically.
    pub fn factor(&self, f: &Poly) -> Result<Vec<(Poly, usize)>> {
        let r = &self.ring;
        if !f.is_monic(r) {
            return Err(Error::NonMonic);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut out = Vec::new();
        for (sf, mult) in self.squarefree(f) {
            for (part, d) in self.distinct_degree(&sf) {
                for g in self.equal_degree(&part, d, &mut rng) {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.degree(), &a.0).cmp(&(b.0.degree(), &b.0)));
        Ok(out)
    }

    /// Distinct roots of a nonzero polynomial, sorted.
    pub fn roots(&self, f: &Poly) -> Result<Vec<Elem>> {
        let r = &self.ring;
        if f.is_zero() {
            return Err(Error::Parse("roots of the zero polynomial".into()));
        }
        let f = self.monic(f);
        let mut roots = if self.size <= BigInt::from(BRUTE_FORCE_LIMIT) {
            let n = self.size.to_u64().unwrap();
            (0..n)
                .map(|i| self.element_at(&BigInt::from(i)))
                .filter(|x| r.is_zero(&f.evaluate(r, x)))
                .collect::<Vec<_>>()
        } else {
            self.factor(&f)?
                .into_iter()
                .filter(|(g, _)| g.degree() == Some(1))
                .map(|(g, _)| r.neg(&g.coeffs()[0]))
                .collect()
        };
        roots.sort();
        Ok(roots)
    }

    /// Is a monic `f` irreducible?
    pub fn is_irreducible(&self, f: &Poly) -> Result<bool> {
        let fs = self.factor(f)?;
        Ok(fs.len() == 1 && fs[0].1 == 1)
    }
}

pub fn factor_over_finite_field(ring: &Ring, f: &Poly) -> Result<Vec<(Poly, usize)>> {
    FiniteField::new(ring)?.factor(f)
}

pub fn roots_in_finite_field(ring: &Ring, f: &Poly) -> Result<Vec<Elem>> {
    FiniteField::new(ring)?.roots(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(r: &Ring, fs: &[(Poly, usize)]) -> Poly {
        fs.iter().fold(Poly::one(r), |acc, (g, m)| acc.mul(r, &g.pow(r, *m)))
    }

    #[test]
    fn x4_minus_1_over_f5_splits_into_linears() {
        let r = Ring::prime_field(5).unwrap();
        let f = Poly::from_ints(&r, &[-1, 0, 0, 0, 1]);
        let fs = factor_over_finite_field(&r, &f).unwrap();
        assert_eq!(fs.len(), 4);
        let mut roots: Vec<Elem> = fs.iter().map(|(g, _)| r.neg(&g.coeffs()[0])).collect();
        roots.sort();
        assert_eq!(roots, (1..=4).map(|i| r.from_int(i)).collect::<Vec<_>>());
        assert!(expand(&r, &fs).eq(&r, &f));
    }

    #[test]
    fn x2_plus_1_irreducible_over_f3() {
        let r = Ring::prime_field(3).unwrap();
        let f = Poly::from_ints(&r, &[1, 0, 1]);
        let fs = factor_over_finite_field(&r, &f).unwrap();
        assert_eq!(fs, vec![(f.clone(), 1)]);
        assert!(roots_in_finite_field(&r, &f).unwrap().is_empty());
    }

    #[test]
    fn x_squared_over_f2() {
        let r = Ring::prime_field(2).unwrap();
        let fs = factor_over_finite_field(&r, &Poly::from_ints(&r, &[0, 0, 1])).unwrap();
        assert_eq!(fs, vec![(Poly::x(&r), 2)]);
    }

    #[test]
    fn roots_of_x2_plus_1_mod_5() {
        let r = Ring::prime_field(5).unwrap();
        let roots = roots_in_finite_field(&r, &Poly::from_ints(&r, &[1, 0, 1])).unwrap();
        assert_eq!(roots, vec![r.from_int(2), r.from_int(3)]);
    }

    #[test]
    fn p_th_powers_in_characteristic_three() {
        // (X+1)^3 (X^2+1)^2 over 𝔽_3
        let r = Ring::prime_field(3).unwrap();
        let a = Poly::from_ints(&r, &[1, 1]);
        let b = Poly::from_ints(&r, &[1, 0, 1]);
        let f = a.pow(&r, 3).mul(&r, &b.pow(&r, 2));
        let fs = factor_over_finite_field(&r, &f).unwrap();
        assert_eq!(fs, vec![(a, 3), (b, 2)]);
    }

    #[test]
    fn factoring_over_f4() {
        let f2 = Ring::prime_field(2).unwrap();
        let f4 = f2.quotient("t", vec![f2.one(), f2.one(), f2.one()]).unwrap();
        // X^2 + X + 1 splits over 𝔽_4 as (X − t)(X − t²)
        let f = Poly::from_ints(&f4, &[1, 1, 1]);
        let fs = factor_over_finite_field(&f4, &f).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(expand(&f4, &fs).eq(&f4, &f));
        // degree-3 irreducible over 𝔽_2 stays irreducible over 𝔽_4
        let g = Poly::from_ints(&f4, &[1, 1, 0, 1]);
        assert!(FiniteField::new(&f4).unwrap().is_irreducible(&g).unwrap());
    }
}

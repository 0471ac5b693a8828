//! Universal decomposition algebras, the δ_i / Δ unramifiability test and
//! decisions in the Zariski lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::linalg::unit_ideal_test;
use crate::ring::{Elem, Ring};

/// Default bound on the degree of `f` when building a decomposition algebra.
pub const DEFAULT_MAX_DEGREE: usize = 6;

/// `L = R[x_1,…,x_n]` with `f = ∏(X − x_i)`, free of rank n! over R.
#[derive(Clone, Debug)]
pub struct DecompositionAlgebra {
    base: Ring,
    f: Poly,
    tower: Ring,
    roots: Vec<Elem>,
    /// `levels[i]` is the ring in which `x_{i+1}` was adjoined (or `tower` for the last root).
    levels: Vec<Ring>,
}

impl DecompositionAlgebra {
    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn ring(&self) -> &Ring {
        &self.tower
    }

    /// x_1, …, x_n as elements of L.
    pub fn roots(&self) -> &[Elem] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn rank(&self) -> usize {
        self.tower.rank_over(&self.base).expect("L is free over R")
    }

    /// The prefix R[x_1,…,x_i] of the tower (i = 0 gives R).
    pub fn prefix(&self, i: usize) -> &Ring {
        if i == 0 {
            &self.base
        } else {
            &self.levels[i - 1]
        }
    }

    /// Coefficients of ∏(X − x_i), computed in L.
    pub fn root_product(&self) -> Poly {
        let l = &self.tower;
        Poly::product(
            l,
            self.roots.iter().map(|x| Poly::linear(l, x)).collect::<Vec<_>>().iter(),
        )
    }
}

/// Builds the decomposition algebra of a monic `f` of degree at most `max_degree`.
///
/// The roots are adjoined one at a time: x_1 by R[X]/(f), then x_2 by the
/// quotient of f/(X − x_1), and so on. The last root is the negated constant
/// term of the final linear cofactor, so no degree-one step is added.
pub fn build_uda(ring: &Ring, f: &Poly, max_degree: usize) -> Result<DecompositionAlgebra> {
    if !f.is_monic(ring) || f.degree() == Some(0) {
        return Err(Error::NonMonic);
    }
    let n = f.degree().unwrap();
    if n > max_degree {
        return Err(Error::RankCapExceeded {
            degree: n,
            cap: max_degree,
        });
    }
    let mut current = ring.clone();
    let mut g = f.clone();
    let mut roots: Vec<Elem> = Vec::new();
    let mut levels = Vec::new();
    for i in 1..n {
        let next = current.quotient(&format!("x{i}"), g.coeffs().to_vec())?;
        let x = next.generator().unwrap();
        roots = roots.iter().map(|r| next.embed(&current, r)).collect();
        roots.push(x.clone());
        let (q, rem) = g.embed(&current, &next).divmod_monic(&next, &Poly::linear(&next, &x))?;
        debug_assert!(rem.is_zero());
        g = q;
        levels.push(next.clone());
        current = next;
    }
    roots.push(current.neg(&g.coeffs()[0]));
    levels.push(current.clone());
    let uda = DecompositionAlgebra {
        base: ring.clone(),
        f: f.clone(),
        tower: current,
        roots,
        levels,
    };
    if !uda.root_product().eq(&uda.tower, &f.embed(ring, &uda.tower)) {
        return Err(Error::Internal("∏(X − x_i) differs from f".into()));
    }
    Ok(uda)
}

/// δ_1, …, δ_n: the elementary symmetric functions of f′(x_1), …, f′(x_n),
/// read off from ∏(T − f′(x_i)) and brought back into R.
pub fn deltas(uda: &DecompositionAlgebra) -> Result<Vec<Elem>> {
    let l = uda.ring();
    let r = uda.base();
    let df = uda.poly().derivative(r);
    let g = Poly::product(
        l,
        uda.roots()
            .iter()
            .map(|x| Poly::linear(l, &df.evaluate_in(r, l, x)))
            .collect::<Vec<_>>()
            .iter(),
    );
    let n = uda.degree();
    (1..=n)
        .map(|i| {
            let c = g.coeff(l, n - i);
            let c = if i % 2 == 1 { l.neg(&c) } else { c };
            l.extract(r, &c).ok_or(Error::CoefficientNotInBase)
        })
        .collect()
}

/// Outcome of the unramifiability test, with both witnesses.
#[derive(Clone, Debug)]
pub struct Unramifiability {
    pub unramifiable: bool,
    pub deltas: Vec<Elem>,
    /// Cofactors `c_i ∈ R` with `Σ c_i δ_i = 1`.
    pub delta_cofactors: Option<Vec<Elem>>,
    /// Cofactors `d_i ∈ L` with `Σ d_i f′(x_i) = 1`.
    pub derivative_cofactors: Option<Vec<Elem>>,
}

/// Decides Δ(f) = 1, and cross-checks against (f′(x_1), …, f′(x_n)) = 1 in L.
pub fn is_unramifiable(ring: &Ring, f: &Poly, max_degree: usize) -> Result<Unramifiability> {
    let uda = build_uda(ring, f, max_degree)?;
    is_unramifiable_in(&uda)
}

pub fn is_unramifiable_in(uda: &DecompositionAlgebra) -> Result<Unramifiability> {
    let ds = deltas(uda)?;
    let delta_cofactors = unit_ideal_test(uda.base(), &ds)?;
    let l = uda.ring();
    let df = uda.poly().derivative(uda.base());
    let values: Vec<Elem> = uda.roots().iter().map(|x| df.evaluate_in(uda.base(), l, x)).collect();
    let derivative_cofactors = unit_ideal_test(l, &values)?;
    if delta_cofactors.is_some() != derivative_cofactors.is_some() {
        return Err(Error::Internal("Δ(f) and (f′(x_i)) disagree on the unit ideal".into()));
    }
    Ok(Unramifiability {
        unramifiable: delta_cofactors.is_some(),
        deltas: ds,
        delta_cofactors,
        derivative_cofactors,
    })
}

/// D(a_1, …, a_n): the radical of a finitely generated ideal.
#[derive(Clone, Debug)]
pub struct ZariskiElement {
    pub ring: Ring,
    pub generators: Vec<Elem>,
}

impl ZariskiElement {
    pub fn new(ring: &Ring, generators: Vec<Elem>) -> ZariskiElement {
        ZariskiElement {
            ring: ring.clone(),
            generators,
        }
    }

    pub fn principal(ring: &Ring, a: Elem) -> ZariskiElement {
        ZariskiElement::new(ring, vec![a])
    }

    pub fn bottom(ring: &Ring) -> ZariskiElement {
        ZariskiElement::new(ring, vec![])
    }

    pub fn top(ring: &Ring) -> ZariskiElement {
        ZariskiElement::new(ring, vec![ring.one()])
    }

    pub fn join(&self, other: &ZariskiElement) -> ZariskiElement {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        ZariskiElement::new(&self.ring, gens)
    }

    /// D(a_i b_j) over all pairs.
    pub fn meet(&self, other: &ZariskiElement) -> ZariskiElement {
        let r = &self.ring;
        let gens = self
            .generators
            .iter()
            .flat_map(|a| other.generators.iter().map(move |b| r.mul(a, b)))
            .collect();
        ZariskiElement::new(r, gens)
    }
}

pub fn zariski_is_top(z: &ZariskiElement) -> Result<bool> {
    Ok(unit_ideal_test(&z.ring, &z.generators)?.is_some())
}

/// Decides `y ≤ z`, i.e. every generator of y lies in the radical of z's ideal.
pub fn zariski_leq(y: &ZariskiElement, z: &ZariskiElement) -> Result<bool> {
    for b in &y.generators {
        if !in_radical(&z.ring, b, &z.generators)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn zariski_eq(y: &ZariskiElement, z: &ZariskiElement) -> Result<bool> {
    Ok(zariski_leq(y, z)? && zariski_leq(z, y)?)
}

fn in_radical(ring: &Ring, b: &Elem, gens: &[Elem]) -> Result<bool> {
    if ring.is_zero(b) {
        return Ok(true);
    }
    let flat = ring.flat()?;
    if flat.is_artinian() {
        let d = ring.length_bound() as u64;
        let target = ring.pow(b, d);
        let cols: Vec<Vec<Elem>> = gens.iter().map(|a| vec![a.clone()]).collect();
        return Ok(crate::ring::linalg::solve_module(ring, &cols, &[target])?.is_some());
    }
    if !flat.ring.same(ring) {
        return Err(Error::UnsupportedRing(format!(
            "radical membership over {} is not decided",
            ring.describe()
        )));
    }
    let num = |x: &Elem| -> BigInt {
        match x {
            Elem::Int(n) => n.clone(),
            Elem::Frac(n, _) => n.as_int().expect("integer numerator").clone(),
            _ => unreachable!("element of ℤ or ℤ[1/u]"),
        }
    };
    let mut g = gens.iter().fold(BigInt::zero(), |acc, a| acc.gcd(&num(a)));
    if let Some(Elem::Int(u)) = ring.localized_element() {
        g = strip_primes_of(&g, u);
    }
    if g.is_zero() {
        return Ok(false);
    }
    // every prime factor of g must divide b
    Ok(strip_primes_of(&g, &num(b)).is_one())
}

fn strip_primes_of(n: &BigInt, m: &BigInt) -> BigInt {
    let mut rest = n.abs();
    loop {
        let g = rest.gcd(m);
        if g.is_one() || rest.is_zero() {
            return rest;
        }
        while (&rest % &g).is_zero() {
            rest /= &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(r: &Ring, cs: &[i64]) -> Poly {
        Poly::from_ints(r, cs)
    }

    #[test]
    fn linear_uda_is_the_base() {
        let z = Ring::integers();
        let uda = build_uda(&z, &poly(&z, &[-5, 1]), 6).unwrap();
        assert!(uda.ring().same(&z));
        assert_eq!(uda.roots(), &[z.from_int(5)]);
        assert_eq!(deltas(&uda).unwrap(), vec![z.one()]);
    }

    #[test]
    fn x2_plus_1_over_q() {
        let q = Ring::rationals();
        let uda = build_uda(&q, &poly(&q, &[1, 0, 1]), 6).unwrap();
        assert_eq!(uda.rank(), 2);
        let l = uda.ring();
        assert!(l.eq(&uda.roots()[1], &l.neg(&uda.roots()[0])));
    }

    #[test]
    fn x3_minus_1_over_f7_has_rank_6() {
        let f7 = Ring::prime_field(7).unwrap();
        assert_eq!(build_uda(&f7, &poly(&f7, &[-1, 0, 0, 1]), 6).unwrap().rank(), 6);
    }

    #[test]
    fn deltas_of_x2_minus_a() {
        let z = Ring::integers();
        let uda = build_uda(&z, &poly(&z, &[-3, 0, 1]), 6).unwrap();
        assert_eq!(deltas(&uda).unwrap(), vec![z.zero(), z.from_int(-12)]);
        let uda = build_uda(&z, &poly(&z, &[0, 0, 1]), 6).unwrap();
        assert_eq!(deltas(&uda).unwrap(), vec![z.zero(), z.zero()]);
    }

    #[test]
    fn unramifiable_examples() {
        let z = Ring::integers();
        let z2 = z.localize(z.from_int(2)).unwrap();
        assert!(is_unramifiable(&z2, &poly(&z2, &[1, 0, 1]), 6).unwrap().unramifiable);
        let u = is_unramifiable(&z, &poly(&z, &[0, -1, 1]), 6).unwrap();
        assert!(u.unramifiable);
        assert_eq!(u.deltas, vec![z.zero(), z.from_int(-1)]);
        let z4 = Ring::zmod_pk(2, 2).unwrap();
        assert!(!is_unramifiable(&z4, &poly(&z4, &[0, 0, 1]), 6).unwrap().unramifiable);
    }

    #[test]
    fn rank_cap() {
        let z = Ring::integers();
        let f = poly(&z, &[1, 0, 0, 0, 1]);
        assert_eq!(
            build_uda(&z, &f, 3).unwrap_err(),
            Error::RankCapExceeded { degree: 4, cap: 3 }
        );
    }

    #[test]
    fn zariski_basics() {
        let z = Ring::integers();
        let d23 = ZariskiElement::new(&z, vec![z.from_int(2), z.from_int(3)]);
        assert!(zariski_is_top(&d23).unwrap());
        let d6 = ZariskiElement::principal(&z, z.from_int(6));
        let d12 = ZariskiElement::principal(&z, z.from_int(12));
        assert!(zariski_eq(&d6, &d12).unwrap());
        let d2 = ZariskiElement::principal(&z, z.from_int(2));
        assert!(!zariski_leq(&d2, &d6).unwrap());
        assert!(zariski_leq(&d6, &d2).unwrap());
        assert!(zariski_leq(&ZariskiElement::principal(&z, z.zero()), &ZariskiElement::bottom(&z)).unwrap());
    }

    #[test]
    fn sum_and_product_generate_the_same_radical() {
        let f7 = Ring::prime_field(7).unwrap();
        let r = f7
            .quotient("x", vec![f7.zero(), f7.zero(), f7.zero(), f7.one()])
            .unwrap();
        let x = r.generator().unwrap();
        let a = r.add(&x, &r.from_int(0));
        let b = r.mul(&x, &x);
        let lhs = ZariskiElement::new(&r, vec![a.clone(), b.clone()]);
        let rhs = ZariskiElement::new(&r, vec![r.add(&a, &b), r.mul(&a, &b)]);
        assert!(zariski_eq(&lhs, &rhs).unwrap());
    }
}

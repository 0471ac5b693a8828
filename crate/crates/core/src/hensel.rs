//! Hensel lifting over certified finite local rings: simple roots,
//! idempotents of monic quotients, coprime factorizations and idempotents of
//! finite algebras.

use crate::algebra::FiniteAlgebra;
use crate::decomp::{build_uda, is_unramifiable, DecompositionAlgebra, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::poly::{FiniteField, Poly, BRUTE_FORCE_LIMIT};
use crate::ring::linalg::solve_module;
use crate::ring::{Elem, LocalCertificate, Ring};

/// Highest degree accepted by the proof-following idempotent lift.
pub const PAPER_FAITHFUL_MAX_DEGREE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LiftMethod {
    #[default]
    Newton,
    PaperFaithful,
}

/// Number of doubling steps after which an error in 𝔪 vanishes.
fn newton_bound(cert: &LocalCertificate) -> usize {
    let l = cert.ring().length_bound().max(1);
    (usize::BITS - (l - 1).leading_zeros()) as usize + 1
}

/// Is `x`, an element of a free extension of the certified ring, in 𝔪·ring?
fn in_extended_ideal(cert: &LocalCertificate, ring: &Ring, x: &Elem) -> bool {
    ring.coords_over(cert.ring(), x)
        .expect("ring is free over the certified ring")
        .iter()
        .all(|c| cert.in_maximal_ideal(c))
}

/// The unique root of `p` reducing to the simple residual root `r0`.
pub fn lift_simple_root(p: &Poly, r0: &Elem, cert: &LocalCertificate) -> Result<Elem> {
    let r = cert.ring();
    let k = cert.residue_field();
    let pbar = cert.residue_poly(p);
    if !k.is_zero(&pbar.evaluate(k, r0)) {
        return Err(Error::ResidueMismatch(format!("{} is not a residual root", k.show(r0))));
    }
    if k.is_zero(&pbar.derivative(k).evaluate(k, r0)) {
        return Err(Error::NotSimpleRoot);
    }
    let dp = p.derivative(r);
    let mut a = cert.lift(r0);
    for _ in 0..=newton_bound(cert) {
        let v = p.evaluate(r, &a);
        if r.is_zero(&v) {
            return Ok(a);
        }
        let d = r.inverse(&dp.evaluate(r, &a))?;
        a = r.sub(&a, &r.mul(&v, &d));
    }
    Err(Error::Internal("Newton iteration did not stabilize".into()))
}

fn exact_roots_over(f: &Poly, cert: &LocalCertificate, rbar: &Elem) -> Result<Vec<Elem>> {
    let r = cert.ring();
    let size = r.finite_size().expect("certified rings are finite");
    if size > BRUTE_FORCE_LIMIT.into() {
        return Err(Error::NoResidualRoot(format!(
            "exact root search in {} exceeds {} elements",
            r.describe(),
            BRUTE_FORCE_LIMIT
        )));
    }
    let k = cert.residue_field();
    Ok(r.elements()
        .unwrap()
        .into_iter()
        .filter(|x| k.eq(&cert.residue(x), rbar) && r.is_zero(&f.evaluate(r, x)))
        .collect())
}

/// A root `a` of an unramifiable monic `f` with `f′(a)` invertible.
///
/// Roots are split off one at a time; if f = g·h is unramifiable so is each factor, so the
/// cofactor stays unramifiable as long as no simple root has been found.
pub fn find_simple_root(f: &Poly, cert: &LocalCertificate) -> Result<Elem> {
    let r = cert.ring();
    let k = cert.residue_field();
    if !f.is_monic(r) {
        return Err(Error::NonMonic);
    }
    if !is_unramifiable(r, f, DEFAULT_MAX_DEGREE)?.unramifiable {
        return Err(Error::NotUnramifiable);
    }
    let df = f.derivative(r);
    let ff = FiniteField::new(k)?;
    let mut g = f.clone();
    while g.degree().unwrap_or(0) > 0 {
        let gbar = cert.residue_poly(&g);
        let roots = ff.roots(&gbar)?;
        if roots.is_empty() {
            return Err(Error::NoResidualRoot(format!(
                "{} has no root in {}",
                gbar.show(k),
                k.describe()
            )));
        }
        let dgbar = gbar.derivative(k);
        let (simple, multiple): (Vec<Elem>, Vec<Elem>) =
            roots.into_iter().partition(|x| !k.is_zero(&dgbar.evaluate(k, x)));
        let mut peel = None;
        for rb in &simple {
            let a = lift_simple_root(&g, rb, cert)?;
            if r.is_invertible(&df.evaluate(r, &a)) {
                return Ok(a);
            }
            peel.get_or_insert(a);
        }
        for rb in &multiple {
            if let Some(a) = exact_roots_over(&g, cert, rb)?.into_iter().next() {
                peel = Some(a);
                break;
            }
        }
        let Some(a) = peel else {
            return Err(Error::NoResidualRoot(
                "residual roots do not lift to exact roots".into(),
            ));
        };
        let (q, rem) = g.divmod_monic(r, &Poly::linear(r, &a))?;
        debug_assert!(rem.is_zero());
        g = q;
        if g.degree().unwrap_or(0) > 0 && !is_unramifiable(r, &g, DEFAULT_MAX_DEGREE)?.unramifiable {
            return Err(Error::NoResidualRoot(
                "no simple root reachable by splitting off roots".into(),
            ));
        }
    }
    Err(Error::NoResidualRoot("every root found is multiple".into()))
}

fn check_quotient_over(s: &Ring, cert: &LocalCertificate) -> Result<Poly> {
    let parent = s.parent().filter(|p| s.is_quotient() && p.same(cert.ring()));
    let Some(parent) = parent else {
        return Err(Error::BaseRingMismatch);
    };
    Ok(Poly::new(parent, s.modulus().unwrap().to_vec()))
}

/// An idempotent `u` of `s = R[X]/(P)` with the same residue as `e`.
pub fn lift_idempotent_monic_quotient(s: &Ring, e: &Elem, cert: &LocalCertificate, method: LiftMethod) -> Result<Elem> {
    check_quotient_over(s, cert)?;
    if !in_extended_ideal(cert, s, &s.sub(&s.mul(e, e), e)) {
        return Err(Error::NotResiduallyIdempotent);
    }
    let u = match method {
        LiftMethod::Newton => newton_idempotent(s, e, cert)?,
        LiftMethod::PaperFaithful => paper_faithful_lift(s, e, cert)?.u,
    };
    if !s.eq(&s.mul(&u, &u), &u) || !in_extended_ideal(cert, s, &s.sub(&u, e)) {
        return Err(Error::Internal("lifted element is not an idempotent lift".into()));
    }
    Ok(u)
}

/// u ← 3u² − 2u³ in any commutative ring free over the certified ring.
fn newton_idempotent(s: &Ring, e: &Elem, cert: &LocalCertificate) -> Result<Elem> {
    let (three, two) = (s.from_int(3), s.from_int(2));
    let mut u = e.clone();
    for _ in 0..=newton_bound(cert) {
        let u2 = s.mul(&u, &u);
        if s.eq(&u2, &u) {
            return Ok(u);
        }
        let u3 = s.mul(&u2, &u);
        u = s.sub(&s.mul(&three, &u2), &s.mul(&two, &u3));
    }
    Err(Error::Internal("idempotent iteration did not stabilize".into()))
}

/// Intermediate data of the proof-following idempotent lift.
#[derive(Clone, Debug)]
pub struct PaperFaithfulLift {
    pub u: Elem,
    pub uda: DecompositionAlgebra,
    /// Size of the subsets I indexing the family.
    pub k: usize,
    pub subsets: Vec<Vec<usize>>,
    /// e_I for each subset, in L.
    pub residual_family: Vec<Elem>,
    /// v_I for each subset, an FSOI of L.
    pub family: Vec<Elem>,
    pub alpha: Elem,
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// The idempotent lift through the decomposition algebra of P: the products
/// e_I, the polynomial Q = ∏(X − e_I), its root α ≡ 1 and the family v_I.
pub fn paper_faithful_lift(s: &Ring, e: &Elem, cert: &LocalCertificate) -> Result<PaperFaithfulLift> {
    let p = check_quotient_over(s, cert)?;
    let r = cert.ring();
    let n = p.degree().unwrap();
    let uda = build_uda(r, &p, PAPER_FAITHFUL_MAX_DEGREE)?;
    let l = uda.ring().clone();
    let e_poly = Poly::new(r, e.as_poly().expect("quotient element").to_vec());
    let ex: Vec<Elem> = uda.roots().iter().map(|x| e_poly.evaluate_in(r, &l, x)).collect();
    let e_of = |set: &[usize]| l.product(set.iter().map(|&i| &ex[i]));
    let residually_zero = |x: &Elem| in_extended_ideal(cert, &l, x);

    let mut k = n;
    while k > 0 && subsets_of_size(n, k).iter().all(|set| residually_zero(&e_of(set))) {
        k -= 1;
    }
    let subsets = subsets_of_size(n, k);
    let residual_family: Vec<Elem> = subsets.iter().map(|set| e_of(set)).collect();
    if residual_family.iter().any(&residually_zero) {
        return Err(Error::Internal(
            "products e_I of equal size are not uniformly nonzero".into(),
        ));
    }

    let q_l = Poly::product(
        &l,
        residual_family
            .iter()
            .map(|x| Poly::linear(&l, x))
            .collect::<Vec<_>>()
            .iter(),
    );
    let q_coeffs = q_l
        .coeffs()
        .iter()
        .map(|c| l.extract(r, c).ok_or(Error::CoefficientNotInBase))
        .collect::<Result<Vec<_>>>()?;
    let q = Poly::new(r, q_coeffs);
    let kf = cert.residue_field();
    let big_n = subsets.len();
    let mut expected = vec![kf.zero(); big_n + 1];
    expected[big_n - 1] = kf.from_int(-1);
    expected[big_n] = kf.one();
    if !cert.residue_poly(&q).eq(kf, &Poly::new(kf, expected)) {
        return Err(Error::Internal("Q is not residually X^(N−1)(X−1)".into()));
    }
    let alpha = lift_simple_root(&q, &kf.one(), cert)?;
    let lambda_inv = r.inverse(&q.derivative(r).evaluate(r, &alpha))?;
    let alpha_l = l.embed(r, &alpha);
    let lambda_inv_l = l.embed(r, &lambda_inv);
    let family: Vec<Elem> = (0..big_n)
        .map(|i| {
            let others: Vec<Elem> = (0..big_n)
                .filter(|&j| j != i)
                .map(|j| l.sub(&alpha_l, &residual_family[j]))
                .collect();
            l.mul(&lambda_inv_l, &l.product(others.iter()))
        })
        .collect();
    let u_l = l.sum(
        subsets
            .iter()
            .zip(&family)
            .filter(|(set, _)| set.contains(&0))
            .map(|(_, v)| v),
    );
    let x1_ring = uda.prefix(1).clone();
    let u1 = l
        .extract(&x1_ring, &u_l)
        .ok_or_else(|| Error::Internal("Σ v_I is not in R[x_1]".into()))?;
    let u = if n == 1 {
        s.embed(r, &u1)
    } else {
        s.from_coeffs(u1.as_poly().unwrap())
    };
    Ok(PaperFaithfulLift {
        u,
        uda,
        k,
        subsets,
        residual_family,
        family,
        alpha,
    })
}

fn is_trivial_residue(p: &Poly) -> bool {
    p.degree() == Some(0)
}

/// Monic `F`, `G` with `P = F·G` lifting a coprime residual factorization `f·g`.
pub fn hensel_factor(p: &Poly, f: &Poly, g: &Poly, cert: &LocalCertificate) -> Result<(Poly, Poly)> {
    hensel_factor_with(p, f, g, cert, LiftMethod::Newton)
}

pub fn hensel_factor_with(
    p: &Poly,
    f: &Poly,
    g: &Poly,
    cert: &LocalCertificate,
    method: LiftMethod,
) -> Result<(Poly, Poly)> {
    let r = cert.ring();
    let k = cert.residue_field();
    if !p.is_monic(r) {
        return Err(Error::NonMonic);
    }
    if !f.is_monic(k) || !g.is_monic(k) {
        return Err(Error::ResidueMismatch("residual factors must be monic".into()));
    }
    if !cert.residue_poly(p).eq(k, &f.mul(k, g)) {
        return Err(Error::ResidueMismatch(format!(
            "residue of P is not {}·{}",
            f.show(k),
            g.show(k)
        )));
    }
    let ff = FiniteField::new(k)?;
    let (d, s_bez, _) = ff.xgcd(f, g);
    if d.degree() != Some(0) {
        return Err(Error::NotCoprime);
    }
    if is_trivial_residue(f) {
        return Ok((Poly::one(r), p.clone()));
    }
    if is_trivial_residue(g) {
        return Ok((p.clone(), Poly::one(r)));
    }
    let s = r.quotient("x", p.coeffs().to_vec())?;
    let ebar = s_bez.mul(k, f).rem_monic(k, &f.mul(k, g))?;
    let e0 = s.from_coeffs(cert.lift_poly(&ebar).coeffs());
    let e = lift_idempotent_monic_quotient(&s, &e0, cert, method)?;
    let one_minus_e = s.sub(&s.one(), &e);
    let big_g = annihilating_monic(&s, r, &e, g.degree().unwrap())?;
    let big_f = annihilating_monic(&s, r, &one_minus_e, f.degree().unwrap())?;
    if !big_f.mul(r, &big_g).eq(r, p) || !cert.residue_poly(&big_f).eq(k, f) || !cert.residue_poly(&big_g).eq(k, g) {
        return Err(Error::Internal("lifted factors do not multiply back to P".into()));
    }
    Ok((big_f, big_g))
}

/// Monic `G` of degree `m` with `e·G(x) = 0` in `s = R[X]/(P)`.
fn annihilating_monic(s: &Ring, r: &Ring, e: &Elem, m: usize) -> Result<Poly> {
    let x = s.generator().unwrap();
    let mut col = e.clone();
    let mut cols = Vec::with_capacity(m);
    for _ in 0..m {
        cols.push(s.coords_over(r, &col)?);
        col = s.mul(&col, &x);
    }
    let target: Vec<Elem> = s.coords_over(r, &s.neg(&col))?;
    let c =
        solve_module(r, &cols, &target)?.ok_or_else(|| Error::Internal("e·x^m is not in the span of e·x^j".into()))?;
    let mut coeffs = c;
    coeffs.push(r.one());
    Ok(Poly::new(r, coeffs))
}

/// Minimal-degree monic `F` with `F(a) = 0`, by linear dependence of 1, a, a², ….
pub fn minimal_annihilator(alg: &FiniteAlgebra, a: &[Elem]) -> Result<Poly> {
    let r = alg.ring();
    let mut powers = vec![alg.one()];
    loop {
        let next = alg.mul(powers.last().unwrap(), a);
        let target: Vec<Elem> = next.iter().map(|x| r.neg(x)).collect();
        if let Some(mut c) = solve_module(r, &powers, &target)? {
            c.push(r.one());
            return Ok(Poly::new(r, c));
        }
        powers.push(next);
        if powers.len() > alg.rank() * r.length_bound() + 1 {
            return Err(Error::Internal("no monic annihilator found".into()));
        }
    }
}

/// Evaluates `f` at an algebra element.
pub fn evaluate_in_algebra(alg: &FiniteAlgebra, f: &Poly, a: &[Elem]) -> Vec<Elem> {
    f.coeffs()
        .iter()
        .rev()
        .fold(alg.zero(), |acc, c| alg.add(&alg.mul(&acc, a), &alg.scalar(c)))
}

/// An idempotent of `alg` congruent to `a` modulo 𝔪·alg.
pub fn lift_idempotent_algebra(alg: &FiniteAlgebra, a: &[Elem], cert: &LocalCertificate) -> Result<Vec<Elem>> {
    let r = cert.ring();
    if !alg.ring().same(r) {
        return Err(Error::BaseRingMismatch);
    }
    let residually_zero = |v: &[Elem]| v.iter().all(|c| cert.in_maximal_ideal(c));
    let a2 = alg.mul(a, a);
    if !residually_zero(&alg.sub(&a2, a)) {
        return Err(Error::NotResiduallyIdempotent);
    }
    let e = lift_through_annihilator(alg, a, cert)?;
    if !alg.equal(&alg.mul(&e, &e), &e) || !residually_zero(&alg.sub(&e, a)) {
        return Err(Error::Internal("lifted element is not an idempotent lift".into()));
    }
    Ok(e)
}

fn lift_through_annihilator(alg: &FiniteAlgebra, a: &[Elem], cert: &LocalCertificate) -> Result<Vec<Elem>> {
    let r = cert.ring();
    let k = cert.residue_field();
    if alg.rank() == 0 {
        return Ok(vec![]);
    }
    let big_f = minimal_annihilator(alg, a)?;
    let mut rest = cert.residue_poly(&big_f);
    let x = Poly::x(k);
    let x_minus_1 = Poly::linear(k, &k.one());
    let mut n = 0;
    while let Ok((q, rem)) = rest.divmod_monic(k, &x) {
        if !rem.is_zero() {
            break;
        }
        rest = q;
        n += 1;
    }
    let mut m = 0;
    while let Ok((q, rem)) = rest.divmod_monic(k, &x_minus_1) {
        if !rem.is_zero() {
            break;
        }
        rest = q;
        m += 1;
    }
    // ā is a unit when X ∤ F̄ and ā − 1 is a unit when (X − 1) ∤ F̄.
    if n == 0 {
        return Ok(alg.one());
    }
    if m == 0 {
        return Ok(alg.zero());
    }
    let h = rest;
    let xn = x.pow(k, n);
    let qm = x_minus_1.pow(k, m);
    let (big_p, qh) = hensel_factor(&big_f, &xn, &qm.mul(k, &h), cert)?;
    let (big_q, _big_h) = hensel_factor(&qh, &qm, &h, cert)?;
    let big_q = if m % 2 == 1 { big_q.neg(r) } else { big_q };
    let pa = evaluate_in_algebra(alg, &big_p, a);
    let qa = evaluate_in_algebra(alg, &big_q, a);
    let mu = alg.inverse(&alg.add(&pa, &qa))?;
    Ok(alg.mul(&mu, &pa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::check_local;

    fn poly(r: &Ring, cs: &[i64]) -> Poly {
        Poly::from_ints(r, cs)
    }

    #[test]
    fn lifts_square_root_of_minus_one_mod_25() {
        let r = Ring::zmod_pk(5, 2).unwrap();
        let cert = check_local(&r).unwrap();
        let a = lift_simple_root(&poly(&r, &[1, 0, 1]), &Elem::int(2), &cert).unwrap();
        assert_eq!(a, r.from_int(7));
        let b = lift_simple_root(&poly(&r, &[0, 5, -1, 1]), &Elem::int(1), &cert).unwrap();
        assert_eq!(b, r.from_int(21));
        assert_eq!(
            lift_simple_root(&poly(&r, &[0, 0, 1]), &Elem::int(0), &cert).unwrap_err(),
            Error::NotSimpleRoot
        );
    }

    #[test]
    fn simple_roots_found_by_splitting() {
        let f5 = Ring::prime_field(5).unwrap();
        let cert = check_local(&f5).unwrap();
        // (X−1)²(X−2)
        let f = poly(&f5, &[-1, 1]).pow(&f5, 2).mul(&f5, &poly(&f5, &[-2, 1]));
        assert_eq!(find_simple_root(&f, &cert).unwrap(), f5.from_int(2));
        let z25 = Ring::zmod_pk(5, 2).unwrap();
        let cert = check_local(&z25).unwrap();
        assert_eq!(find_simple_root(&poly(&z25, &[0, 0, -1, 1]), &cert).unwrap(), z25.one());
    }

    #[test]
    fn worked_idempotent_over_z9() {
        let z9 = Ring::zmod_pk(3, 2).unwrap();
        let cert = check_local(&z9).unwrap();
        let s = z9
            .quotient("x", vec![z9.from_int(2), z9.from_int(-3), z9.one()])
            .unwrap();
        let e = s.from_coeffs(&[z9.from_int(2), z9.from_int(2)]);
        let expected = s.from_coeffs(&[z9.from_int(2), z9.from_int(-1)]);
        for method in [LiftMethod::Newton, LiftMethod::PaperFaithful] {
            let u = lift_idempotent_monic_quotient(&s, &e, &cert, method).unwrap();
            assert!(s.eq(&u, &expected), "{method:?}");
        }
    }

    #[test]
    fn constructed_family_is_an_fsoi() {
        let z27 = Ring::zmod_pk(3, 3).unwrap();
        let cert = check_local(&z27).unwrap();
        // P ≡ X(X−1)(X−2) mod 3
        let s = z27
            .quotient("x", vec![z27.from_int(3), z27.from_int(2), z27.from_int(-3), z27.one()])
            .unwrap();
        let e = s.generator().unwrap();
        let e = s.mul(&e, &s.sub(&s.from_int(2), &e));
        let lift = paper_faithful_lift(&s, &s.mul(&e, &e), &cert).unwrap();
        let l = lift.uda.ring();
        let total = l.sum(lift.family.iter());
        assert!(l.is_one(&total));
        for (i, a) in lift.family.iter().enumerate() {
            for (j, b) in lift.family.iter().enumerate() {
                let p = l.mul(a, b);
                assert!(if i == j { l.eq(&p, a) } else { l.is_zero(&p) });
            }
        }
    }

    #[test]
    fn factors_x2_plus_1_mod_25() {
        let r = Ring::zmod_pk(5, 2).unwrap();
        let cert = check_local(&r).unwrap();
        let k = cert.residue_field().clone();
        let (f, g) = hensel_factor(&poly(&r, &[1, 0, 1]), &poly(&k, &[-2, 1]), &poly(&k, &[-3, 1]), &cert).unwrap();
        assert!(f.eq(&r, &poly(&r, &[-7, 1])));
        assert!(g.eq(&r, &poly(&r, &[-18, 1])));
    }

    #[test]
    fn coprimality_and_residue_are_checked() {
        let r = Ring::zmod_pk(3, 2).unwrap();
        let cert = check_local(&r).unwrap();
        let k = cert.residue_field().clone();
        let p = poly(&r, &[1, 0, 1]);
        assert!(matches!(
            hensel_factor(&p, &poly(&k, &[1, 1]), &poly(&k, &[1, 1]), &cert),
            Err(Error::ResidueMismatch(_))
        ));
        let p = poly(&r, &[0, 0, 1]);
        assert_eq!(
            hensel_factor(&p, &poly(&k, &[0, 1]), &poly(&k, &[0, 1]), &cert).unwrap_err(),
            Error::NotCoprime
        );
    }

    #[test]
    fn idempotent_in_m2_z9() {
        let r = Ring::zmod_pk(3, 2).unwrap();
        let cert = check_local(&r).unwrap();
        let m2 = FiniteAlgebra::matrix_algebra(&r, 2);
        let a: Vec<Elem> = [1, 1, 3, 0].iter().map(|&x| r.from_int(x)).collect();
        let e = lift_idempotent_algebra(&m2, &a, &cert).unwrap();
        assert!(m2.equal(&m2.mul(&e, &e), &e));
        assert!(m2.sub(&e, &a).iter().all(|c| cert.in_maximal_ideal(c)));
        assert!(m2.equal(&lift_idempotent_algebra(&m2, &m2.one(), &cert).unwrap(), &m2.one()));
        assert!(m2.equal(&lift_idempotent_algebra(&m2, &m2.zero(), &cert).unwrap(), &m2.zero()));
    }
}

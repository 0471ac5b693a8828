//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use azumaya::algebra::FiniteAlgebra;
use azumaya::decomp::DecompositionAlgebra;
use azumaya::poly::FiniteField;
use azumaya::{Elem, LocalCertificate, Poly, Ring};
use num_bigint::BigInt;
use rand::Rng;

pub fn zmod(p: i64, k: u32) -> Ring {
    Ring::zmod_pk(p, k).unwrap()
}

pub fn z_loc(u: i64) -> Ring {
    let z = Ring::integers();
    z.localize(z.from_int(u)).unwrap()
}

/// 𝔽_4 as 𝔽_2[t]/(t² + t + 1).
pub fn f4() -> Ring {
    let f2 = Ring::prime_field(2).unwrap();
    f2.quotient("t", vec![f2.one(), f2.one(), f2.one()]).unwrap()
}

/// ℤ/9[x]/(X² + 1).
pub fn z9_i() -> Ring {
    let z9 = zmod(3, 2);
    z9.quotient("x", vec![z9.one(), z9.zero(), z9.one()]).unwrap()
}

/// Exhaustive search for `y` with `x·y = 1`.
pub fn brute_force_inverse(r: &Ring, x: &Elem) -> Option<Elem> {
    r.elements().unwrap().into_iter().find(|y| r.is_one(&r.mul(x, y)))
}

/// `n / 6^e` is a unit of ℤ[1/6] exactly when `n ≠ 0` has no prime factor besides 2 and 3.
pub fn is_unit_in_z_sixth(n: &BigInt) -> bool {
    let mut n = n.clone();
    if n == BigInt::from(0) {
        return false;
    }
    for p in [2, 3] {
        while &n % p == BigInt::from(0) {
            n /= p;
        }
    }
    n == BigInt::from(1) || n == BigInt::from(-1)
}

pub fn random_monic<R: Rng>(r: &Ring, rng: &mut R, degree: usize, bound: i64) -> Poly {
    let mut cs: Vec<Elem> = (0..degree).map(|_| r.random_elem(rng, bound)).collect();
    cs.push(r.one());
    Poly::new(r, cs)
}

/// Elementary symmetric polynomials of `ys`, computed by summing over subsets.
pub fn elementary_symmetric(l: &Ring, ys: &[Elem]) -> Vec<Elem> {
    let n = ys.len();
    let mut out = vec![l.zero(); n];
    for mask in 1u32..(1 << n) {
        let prod = l.product((0..n).filter(|i| mask & (1 << i) != 0).map(|i| &ys[i]));
        let size = mask.count_ones() as usize;
        out[size - 1] = l.add(&out[size - 1], &prod);
    }
    out
}

/// δ_i = σ_i(f′(x_1), …, f′(x_n)), as elements of the decomposition algebra.
pub fn deltas_by_subsets(uda: &DecompositionAlgebra) -> Vec<Elem> {
    let r = uda.base();
    let l = uda.ring();
    let df = uda.poly().derivative(r);
    let ys: Vec<Elem> = uda.roots().iter().map(|x| df.evaluate_in(r, l, x)).collect();
    elementary_symmetric(l, &ys)
}

/// All roots of `p` in the certified ring whose residue is `r0`.
pub fn brute_force_roots(p: &Poly, r0: &Elem, cert: &LocalCertificate) -> Vec<Elem> {
    let r = cert.ring();
    let k = cert.residue_field();
    r.elements()
        .unwrap()
        .into_iter()
        .filter(|x| k.eq(&cert.residue(x), r0) && r.is_zero(&p.evaluate(r, x)))
        .collect()
}

/// Linear Hensel lifting with fixed Bézout cofactors `s·G + t·H ≡ 1`:
/// `e = P − G·H`, `s·e = q·H + r`, `H += r`, `G += t·e + q·G` until `G·H = P`.
pub fn bezout_hensel(p: &Poly, f: &Poly, g: &Poly, cert: &LocalCertificate) -> (Poly, Poly) {
    let r = cert.ring();
    let k = cert.residue_field();
    let ff = FiniteField::new(k).unwrap();
    // H lifts f, G lifts g.
    let (d, s_bar, t_bar) = ff.xgcd(g, f);
    assert_eq!(d.degree(), Some(0));
    let d_inv = k.inverse(&d.coeffs()[0]).unwrap();
    let s = cert.lift_poly(&s_bar.scale(k, &d_inv));
    let t = cert.lift_poly(&t_bar.scale(k, &d_inv));
    let mut big_h = cert.lift_poly(f);
    let mut big_g = cert.lift_poly(g);
    for _ in 0..=r.length_bound() + 1 {
        let e = p.sub(r, &big_g.mul(r, &big_h));
        if e.is_zero() {
            return (big_h, big_g);
        }
        let (q, rem) = s.mul(r, &e).divmod_monic(r, &big_h).unwrap();
        big_h = big_h.add(r, &rem);
        big_g = big_g.add(r, &t.mul(r, &e)).add(r, &q.mul(r, &big_g));
    }
    panic!("Hensel iteration did not converge");
}

/// `ψ(x) = c·x·c⁻¹` as a matrix whose column `j` is `ψ(x_j)`.
pub fn conjugation(alg: &FiniteAlgebra, c: &[Elem]) -> Vec<Vec<Elem>> {
    let ci = alg.inverse(c).unwrap();
    let cols: Vec<Vec<Elem>> = (0..alg.rank())
        .map(|j| alg.mul(&alg.mul(c, &alg.basis(j)), &ci))
        .collect();
    azumaya::algebra::transpose(&cols, alg.rank())
}

pub fn random_unit<R: Rng>(alg: &FiniteAlgebra, rng: &mut R) -> Vec<Elem> {
    loop {
        let c: Vec<Elem> = (0..alg.rank()).map(|_| alg.ring().random_elem(rng, 10)).collect();
        if alg.inverse(&c).is_ok() {
            return c;
        }
    }
}

pub fn ints(r: &Ring, xs: &[i64]) -> Vec<Elem> {
    xs.iter().map(|&x| r.from_int(x)).collect()
}

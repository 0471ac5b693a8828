//! Exact linear algebra over the base of a ring tower.
//!
//! Every supported tower is a free module of finite rank over a *flat base*:
//! a field (ℚ, 𝔽_p), the chain ring ℤ/p^k, ℤ, or ℤ[1/u]. All of these are
//! Bézout rings in which divisibility is decidable, so a Smith-style
//! diagonalization with unimodular 2×2 steps solves linear systems and
//! computes kernels. Systems over a tower are expanded along the tower's
//! module basis first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Elem, Kind, Ring};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<Elem>>;

#[derive(Clone, Debug)]
pub(crate) enum FlatKind {
    Field,
    Chain {
        p: BigInt,
        k: u32,
    },
    Integers,
    /// ℤ[1/u] with u a nonzero integer.
    IntegersLocalized {
        u: BigInt,
    },
}

/// The base over which a tower is a free module, with its Bézout operations.
#[derive(Clone, Debug)]
pub struct Flat {
    pub ring: Ring,
    kind: FlatKind,
}

struct Xgcd {
    g: Elem,
    s: Elem,
    t: Elem,
    a1: Elem,
    b1: Elem,
}

impl Ring {
    /// The flat base of this tower: strip quotient steps, then require one of
    /// the supported base shapes.
    pub fn flat(&self) -> Result<Flat> {
        let mut r = self.clone();
        while r.is_quotient() {
            r = r.parent().unwrap().clone();
        }
        let kind = match &r.0.kind {
            Kind::Rationals => FlatKind::Field,
            Kind::Modular { p, k: 1, .. } => {
                let _ = p;
                FlatKind::Field
            }
            Kind::Modular { p, k, .. } => FlatKind::Chain { p: p.clone(), k: *k },
            Kind::Integers => FlatKind::Integers,
            Kind::Localize { u: Elem::Int(u) } if r.parent().unwrap().is_integers() => {
                FlatKind::IntegersLocalized { u: u.abs() }
            }
            _ => {
                return Err(Error::UnsupportedRing(format!(
                    "{} is not a quotient tower over ℤ, ℚ, 𝔽_p, ℤ/p^k or ℤ[1/u]",
                    self.describe()
                )))
            }
        };
        Ok(Flat { ring: r, kind })
    }

    /// Every element of the flat basis of `self`.
    pub fn flat_basis(&self) -> Result<Vec<Elem>> {
        let flat = self.flat()?;
        let n = self.rank_over(&flat.ring)?;
        (0..n)
            .map(|j| {
                let mut e = vec![flat.ring.zero(); n];
                e[j] = flat.ring.one();
                self.from_coords_over(&flat.ring, &e)
            })
            .collect()
    }
}

/// Removes from `n` every prime factor it shares with `u`.
fn strip_smooth(n: &BigInt, u: &BigInt) -> BigInt {
    let mut rest = n.abs();
    loop {
        let g = rest.gcd(u);
        if g.is_one() || rest.is_zero() {
            return rest;
        }
        while (&rest % &g).is_zero() {
            rest /= &g;
        }
    }
}

fn valuation(a: &BigInt, p: &BigInt) -> u32 {
    let mut v = 0;
    let mut a = a.clone();
    while !a.is_zero() && (&a % p).is_zero() {
        a /= p;
        v += 1;
    }
    v
}

impl Flat {
    pub fn is_field(&self) -> bool {
        matches!(self.kind, FlatKind::Field)
    }

    pub fn is_domain(&self) -> bool {
        !matches!(self.kind, FlatKind::Chain { .. })
    }

    /// Finite length (field or ℤ/p^k) as opposed to ℤ-based.
    pub fn is_artinian(&self) -> bool {
        matches!(self.kind, FlatKind::Field | FlatKind::Chain { .. })
    }

    pub(crate) fn numerator_bits(&self, a: &Elem) -> u64 {
        match (&self.kind, a) {
            (FlatKind::Integers, Elem::Int(n)) => n.bits(),
            (FlatKind::IntegersLocalized { u }, Elem::Frac(n, _)) => strip_smooth(n.as_int().unwrap(), u).bits(),
            _ => 1,
        }
    }

    fn is_zero(&self, a: &Elem) -> bool {
        a.is_structural_zero()
    }

    /// Pivot preference: smaller is better; only called on nonzero elements.
    fn norm(&self, a: &Elem) -> BigInt {
        match (&self.kind, a) {
            (FlatKind::Field, _) => BigInt::one(),
            (FlatKind::Chain { p, .. }, Elem::Int(n)) => BigInt::from(valuation(n, p)),
            (FlatKind::Integers, Elem::Int(n)) => n.abs(),
            (FlatKind::IntegersLocalized { u }, Elem::Frac(n, _)) => strip_smooth(n.as_int().unwrap(), u),
            _ => unreachable!("element not in flat base"),
        }
    }

    /// `q` with `a·q = c`, if it exists.
    pub fn divide(&self, c: &Elem, a: &Elem) -> Option<Elem> {
        let r = &self.ring;
        if self.is_zero(c) {
            return Some(r.zero());
        }
        if self.is_zero(a) {
            return None;
        }
        match (&self.kind, c, a) {
            (FlatKind::Field, _, _) => Some(r.mul(c, &r.inverse(a).ok()?)),
            (FlatKind::Chain { p, k }, Elem::Int(cn), Elem::Int(an)) => {
                let va = valuation(an, p);
                let vc = valuation(cn, p);
                if va > vc {
                    return None;
                }
                let pv = num_traits::pow(p.clone(), va as usize);
                let m = num_traits::pow(p.clone(), *k as usize);
                let w = an / &pv;
                let winv = w.extended_gcd(&m).x.mod_floor(&m);
                Some(Elem::Int((cn / &pv * winv).mod_floor(&m)))
            }
            (FlatKind::Integers, Elem::Int(cn), Elem::Int(an)) => {
                let (q, rem) = cn.div_rem(an);
                rem.is_zero().then_some(Elem::Int(q))
            }
            (FlatKind::IntegersLocalized { u }, Elem::Frac(cn, ce), Elem::Frac(an, ae)) => {
                // c/a = (cn·u^ae) / (an·u^ce); an's u-free part must divide cn.
                let cn = cn.as_int().unwrap();
                let an = an.as_int().unwrap();
                let a_free = strip_smooth(an, u);
                if !(cn % &a_free).is_zero() {
                    return None;
                }
                let a_unit = an / &a_free;
                let a_unit_inv = self.smooth_inverse(&a_unit);
                let num = r.from_bigint(&(cn / &a_free));
                let shift = r.normalize_frac(Elem::Int(num_traits::pow(u.clone(), *ae as usize)), *ce);
                let q = r.mul(&r.mul(&num, &shift), &a_unit_inv);
                debug_assert!(r.eq(&r.mul(a, &q), c));
                Some(q)
            }
            _ => unreachable!("element not in flat base"),
        }
    }

    /// Inverse in ℤ[1/u] of an integer whose prime factors all divide u.
    fn smooth_inverse(&self, n: &BigInt) -> Elem {
        let FlatKind::IntegersLocalized { u } = &self.kind else {
            unreachable!()
        };
        let mut k = 0u32;
        let mut uk = BigInt::one();
        while !(&uk % n).is_zero() {
            uk *= u;
            k += 1;
        }
        self.ring.normalize_frac(Elem::Int(uk / n), k)
    }

    /// Generator of the annihilator of `a`, or `None` for the zero ideal.
    pub fn annihilator(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return Some(self.ring.one());
        }
        match (&self.kind, a) {
            (FlatKind::Chain { p, k }, Elem::Int(n)) => {
                let v = valuation(n, p);
                Some(Elem::Int(num_traits::pow(p.clone(), (*k - v) as usize)))
            }
            _ => None,
        }
    }

    /// Unimodular combination data for a nonzero `a` and any `b`:
    /// `g = s·a + t·b`, `a = a1·g`, `b = b1·g`, `s·a1 + t·b1 = 1`.
    fn xgcd(&self, a: &Elem, b: &Elem) -> Xgcd {
        let r = &self.ring;
        if let Some(q) = self.divide(b, a) {
            return Xgcd {
                g: a.clone(),
                s: r.one(),
                t: r.zero(),
                a1: r.one(),
                b1: q,
            };
        }
        if let Some(q) = self.divide(a, b) {
            return Xgcd {
                g: b.clone(),
                s: r.zero(),
                t: r.one(),
                a1: q,
                b1: r.one(),
            };
        }
        match (&self.kind, a, b) {
            (FlatKind::Integers, Elem::Int(x), Elem::Int(y)) => {
                let e = x.extended_gcd(y);
                Xgcd {
                    g: Elem::Int(e.gcd.clone()),
                    s: Elem::Int(e.x),
                    t: Elem::Int(e.y),
                    a1: Elem::Int(x / &e.gcd),
                    b1: Elem::Int(y / &e.gcd),
                }
            }
            (FlatKind::IntegersLocalized { u }, Elem::Frac(xn, _), Elem::Frac(yn, _)) => {
                let xf = strip_smooth(xn.as_int().unwrap(), u);
                let yf = strip_smooth(yn.as_int().unwrap(), u);
                let e = xf.extended_gcd(&yf);
                // a = ua·xf, b = ub·yf with ua, ub units.
                let ua = self.divide(a, &r.from_bigint(&xf)).unwrap();
                let ub = self.divide(b, &r.from_bigint(&yf)).unwrap();
                let ua_inv = r.inverse(&ua).unwrap();
                let ub_inv = r.inverse(&ub).unwrap();
                Xgcd {
                    g: r.from_bigint(&e.gcd),
                    s: r.mul(&r.from_bigint(&e.x), &ua_inv),
                    t: r.mul(&r.from_bigint(&e.y), &ub_inv),
                    a1: r.mul(&ua, &r.from_bigint(&(&xf / &e.gcd))),
                    b1: r.mul(&ub, &r.from_bigint(&(&yf / &e.gcd))),
                }
            }
            _ => unreachable!("fields and chain rings always have a divisibility relation"),
        }
    }
}

/// Result of diagonalizing `m`: `P·m·Q = diag(pivots)` with unimodular P, Q.
pub struct Diagonal {
    pub pivots: Vec<Elem>,
    pub q: Matrix,
    /// The targets after applying P.
    pub targets: Vec<Vec<Elem>>,
    /// True when det(P)·det(Q) = −1.
    pub negated: bool,
    pub rows: usize,
    pub cols: usize,
}

/// Smith-style diagonalization over a flat base. Row operations are also
/// applied to each vector in `targets`.
pub fn diagonalize(flat: &Flat, mut m: Matrix, mut targets: Vec<Vec<Elem>>) -> Diagonal {
    let r = &flat.ring;
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut q: Matrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { r.one() } else { r.zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut negated = false;

    for t in 0..rows.min(cols) {
        // choose pivot of minimal norm
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if flat.is_zero(x) {
                    continue;
                }
                let n = flat.norm(x);
                if best.as_ref().is_none_or(|b| n < b.2) {
                    best = Some((i, j, n));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        if pi != t {
            m.swap(pi, t);
            for tv in targets.iter_mut() {
                tv.swap(pi, t);
            }
            negated = !negated;
        }
        if pj != t {
            for row in m.iter_mut() {
                row.swap(pj, t);
            }
            for row in q.iter_mut() {
                row.swap(pj, t);
            }
            negated = !negated;
        }
        loop {
            for i in t + 1..rows {
                if flat.is_zero(&m[i][t]) {
                    continue;
                }
                let x = flat.xgcd(&m[t][t], &m[i][t]);
                let nb1 = r.neg(&x.b1);
                for j in t..cols {
                    let (rt, ri) = (m[t][j].clone(), m[i][j].clone());
                    m[t][j] = r.add(&r.mul(&x.s, &rt), &r.mul(&x.t, &ri));
                    m[i][j] = r.add(&r.mul(&nb1, &rt), &r.mul(&x.a1, &ri));
                }
                for tv in targets.iter_mut() {
                    let (rt, ri) = (tv[t].clone(), tv[i].clone());
                    tv[t] = r.add(&r.mul(&x.s, &rt), &r.mul(&x.t, &ri));
                    tv[i] = r.add(&r.mul(&nb1, &rt), &r.mul(&x.a1, &ri));
                }
                debug_assert!(r.eq(&m[t][t], &x.g));
            }
            for j in t + 1..cols {
                if flat.is_zero(&m[t][j]) {
                    continue;
                }
                let x = flat.xgcd(&m[t][t], &m[t][j]);
                let nb1 = r.neg(&x.b1);
                for row in m.iter_mut().skip(t) {
                    let (ct, cj) = (row[t].clone(), row[j].clone());
                    row[t] = r.add(&r.mul(&x.s, &ct), &r.mul(&x.t, &cj));
                    row[j] = r.add(&r.mul(&nb1, &ct), &r.mul(&x.a1, &cj));
                }
                for row in q.iter_mut() {
                    let (ct, cj) = (row[t].clone(), row[j].clone());
                    row[t] = r.add(&r.mul(&x.s, &ct), &r.mul(&x.t, &cj));
                    row[j] = r.add(&r.mul(&nb1, &ct), &r.mul(&x.a1, &cj));
                }
            }
            if (t + 1..rows).all(|i| flat.is_zero(&m[i][t])) {
                break;
            }
        }
        pivots.push(m[t][t].clone());
    }
    Diagonal {
        pivots,
        q,
        targets,
        negated,
        rows,
        cols,
    }
}

fn mat_vec(r: &Ring, m: &Matrix, v: &[Elem]) -> Vec<Elem> {
    m.iter()
        .map(|row| r.sum(row.iter().zip(v).map(|(a, b)| r.mul(a, b)).collect::<Vec<_>>().iter()))
        .collect()
}

/// Solves `m·c = target` over the flat base.
pub fn solve_flat(flat: &Flat, m: Matrix, target: Vec<Elem>) -> Option<Vec<Elem>> {
    let r = &flat.ring;
    let rows = target.len();
    let d = diagonalize(flat, m, vec![target]);
    let y = &d.targets[0];
    let rank = d.pivots.len();
    if (rank..rows).any(|i| !flat.is_zero(&y[i])) {
        return None;
    }
    let mut z = vec![r.zero(); d.cols];
    for t in 0..rank {
        z[t] = flat.divide(&y[t], &d.pivots[t])?;
    }
    Some(mat_vec(r, &d.q, &z))
}

/// Generators of `{c : m·c = 0}` over the flat base.
pub fn kernel_flat(flat: &Flat, m: Matrix, cols: usize) -> Vec<Vec<Elem>> {
    let r = &flat.ring;
    if m.is_empty() {
        return (0..cols)
            .map(|j| (0..cols).map(|i| if i == j { r.one() } else { r.zero() }).collect())
            .collect();
    }
    let d = diagonalize(flat, m, vec![]);
    let mut out = Vec::new();
    for t in 0..d.cols {
        let scale = if t < d.pivots.len() {
            match flat.annihilator(&d.pivots[t]) {
                Some(a) => a,
                None => continue,
            }
        } else {
            r.one()
        };
        let v: Vec<Elem> = d.q.iter().map(|row| r.mul(&row[t], &scale)).collect();
        if !v.iter().all(|x| r.is_zero(x)) {
            out.push(v);
        }
    }
    out
}

/// Determinant. Flat bases use diagonalization; towers use Berkowitz.
pub fn determinant(ring: &Ring, m: &Matrix) -> Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if let Ok(flat) = ring.flat() {
        if flat.ring.same(ring) {
            let d = diagonalize(&flat, m.clone(), vec![]);
            if d.pivots.len() < n {
                return ring.zero();
            }
            let prod = ring.product(d.pivots.iter());
            return if d.negated { ring.neg(&prod) } else { prod };
        }
    }
    let cp = charpoly(ring, m);
    let c0 = cp[n].clone();
    if n % 2 == 1 {
        ring.neg(&c0)
    } else {
        c0
    }
}

/// Characteristic polynomial `det(tI − m)` by Berkowitz's division-free
/// algorithm; coefficients highest degree first (leading 1).
pub fn charpoly(ring: &Ring, m: &Matrix) -> Vec<Elem> {
    let n = m.len();
    let mut p = vec![ring.one()];
    for r in 1..=n {
        // leading (r-1)x(r-1) block A, row R, column C, corner a
        let a = &m[r - 1][r - 1];
        let row: Vec<Elem> = m[r - 1][..r - 1].to_vec();
        let mut col: Vec<Elem> = (0..r - 1).map(|i| m[i][r - 1].clone()).collect();
        let mut toeplitz = vec![ring.one(), ring.neg(a)];
        for _ in 0..r.saturating_sub(1) {
            let rc = ring.sum(
                row.iter()
                    .zip(&col)
                    .map(|(x, y)| ring.mul(x, y))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            toeplitz.push(ring.neg(&rc));
            col = (0..r - 1)
                .map(|i| {
                    ring.sum(
                        (0..r - 1)
                            .map(|j| ring.mul(&m[i][j], &col[j]))
                            .collect::<Vec<_>>()
                            .iter(),
                    )
                })
                .collect();
        }
        // p_new = T · p, T lower-triangular Toeplitz of size (r+1) x r
        let mut next = vec![ring.zero(); r + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                if i >= j && i - j < toeplitz.len() {
                    *slot = ring.add(slot, &ring.mul(&toeplitz[i - j], pj));
                }
            }
        }
        p = next;
    }
    p
}

/// Expands an S-linear system into one over the flat base of S.
/// Column `j·s + l` corresponds to unknown j's l-th flat coordinate.
fn expand(ring: &Ring, flat: &Flat, cols: &[Vec<Elem>]) -> Result<(Matrix, usize)> {
    let basis = ring.flat_basis()?;
    let s = basis.len();
    let len = cols.first().map_or(0, Vec::len);
    let mut m = vec![Vec::with_capacity(cols.len() * s); len * s];
    for col in cols {
        for b in &basis {
            let mut flat_col = Vec::with_capacity(len * s);
            for entry in col {
                flat_col.extend(ring.coords_over(&flat.ring, &ring.mul(b, entry))?);
            }
            for (row, x) in m.iter_mut().zip(flat_col) {
                row.push(x);
            }
        }
    }
    Ok((m, s))
}

/// Solves `Σ_j c_j·cols[j] = target` for `c_j ∈ ring`.
pub fn solve_module(ring: &Ring, cols: &[Vec<Elem>], target: &[Elem]) -> Result<Option<Vec<Elem>>> {
    let flat = ring.flat()?;
    let (m, s) = expand(ring, &flat, cols)?;
    let mut t = Vec::new();
    for x in target {
        t.extend(ring.coords_over(&flat.ring, x)?);
    }
    if cols.is_empty() {
        return Ok(t.iter().all(|x| flat.ring.is_zero(x)).then(Vec::new));
    }
    let Some(sol) = solve_flat(&flat, m, t) else {
        return Ok(None);
    };
    let out = sol
        .chunks(s)
        .map(|c| ring.from_coords_over(&flat.ring, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(out))
}

/// Generators (as a module over the flat base, hence over `ring`) of the
/// relations `{c : Σ_j c_j·cols[j] = 0}`.
pub fn kernel_module(ring: &Ring, cols: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
    let flat = ring.flat()?;
    let (m, s) = expand(ring, &flat, cols)?;
    let total = cols.len() * s;
    let m = if m.is_empty() || m[0].is_empty() { vec![] } else { m };
    kernel_flat(&flat, m, total)
        .into_iter()
        .map(|v| v.chunks(s).map(|c| ring.from_coords_over(&flat.ring, c)).collect())
        .collect()
}

/// Decides whether `elements` generate the unit ideal; on success returns
/// cofactors `c` with `Σ c_i·a_i = 1`, rechecked before returning.
pub fn unit_ideal_test(ring: &Ring, elements: &[Elem]) -> Result<Option<Vec<Elem>>> {
    let cols: Vec<Vec<Elem>> = elements.iter().map(|a| vec![a.clone()]).collect();
    let Some(c) = solve_module(ring, &cols, &[ring.one()])? else {
        return Ok(None);
    };
    let combo = ring.sum(
        c.iter()
            .zip(elements)
            .map(|(x, a)| ring.mul(x, a))
            .collect::<Vec<_>>()
            .iter(),
    );
    if !ring.is_one(&combo) {
        return Err(Error::Internal("unit ideal cofactors do not recombine to 1".into()));
    }
    Ok(Some(c))
}

/// Matrix product over a ring.
pub fn mat_mul(ring: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    ring.sum(
                        (0..inner)
                            .map(|k| ring.mul(&row[k], &b[k][j]))
                            .collect::<Vec<_>>()
                            .iter(),
                    )
                })
                .collect()
        })
        .collect()
}

pub fn identity(ring: &Ring, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

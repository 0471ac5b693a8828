//! Computable commutative rings presented as towers over a decidable base.
//!
//! A tower starts at one of ℤ, ℚ, 𝔽_p or ℤ/p^k and is extended by monic
//! quotients `S[X]/(P)` and localizations `S[1/u]`. Elements are plain
//! [`Elem`] values; all arithmetic goes through the [`Ring`] handle that
//! knows how to interpret them.

pub mod linalg;
pub mod local;

pub use local::{check_local, LocalCertificate};

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Normal-form data of a ring element. Its meaning depends on the ring.
///
/// * `Int`: an integer (ℤ) or canonical residue in `[0, m)` (𝔽_p, ℤ/p^k).
/// * `Rat`: a rational number.
/// * `Poly`: coefficients (degree 0 first) of a monic-quotient element, always
///   of length `deg(modulus)`.
/// * `Frac(a, e)`: the fraction `a / u^e` of a localization at `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Rat(BigRational),
    Poly(Vec<Elem>),
    Frac(Box<Elem>, u32),
}

impl Elem {
    pub fn int(n: i64) -> Elem {
        Elem::Int(BigInt::from(n))
    }

    /// Structural zero. Equivalent to `is_zero` in canonical rings.
    pub fn is_structural_zero(&self) -> bool {
        match self {
            Elem::Int(n) => n.is_zero(),
            Elem::Rat(q) => q.is_zero(),
            Elem::Poly(cs) => cs.iter().all(Elem::is_structural_zero),
            Elem::Frac(a, _) => a.is_structural_zero(),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Elem::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&[Elem]> {
        match self {
            Elem::Poly(cs) => Some(cs),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseRing {
    Integers,
    Rationals,
    PrimeField { p: BigInt },
    IntegersModPrimePower { p: BigInt, k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionStep {
    /// `S[var]/(modulus)`; `modulus` lists all coefficients, degree 0 first,
    /// with leading coefficient 1.
    MonicQuotient {
        var: String,
        modulus: Vec<Elem>,
    },
    Localize {
        u: Elem,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDescriptor {
    pub base: BaseRing,
    pub steps: Vec<ExtensionStep>,
}

#[derive(Debug)]
enum Kind {
    Integers,
    Rationals,
    Modular { p: BigInt, k: u32, m: BigInt },
    Quotient { var: String, modulus: Vec<Elem> },
    Localize { u: Elem },
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    parent: Option<Ring>,
    descriptor: RingDescriptor,
    depth: usize,
    canonical: bool,
    length_bound: usize,
}

/// Handle to a computable commutative ring. Cheap to clone; immutable.
#[derive(Clone, Debug)]
pub struct Ring(Arc<Node>);

pub fn is_prime(p: &BigInt) -> bool {
    if *p < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *p {
        if (p % &d).is_zero() {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds a ring from its descriptor, validating every step.
pub fn make_ring(descriptor: &RingDescriptor) -> Result<Ring> {
    let mut ring = Ring::from_base(&descriptor.base)?;
    for step in &descriptor.steps {
        ring = match step {
            ExtensionStep::MonicQuotient { var, modulus } => ring.quotient(var, modulus.clone())?,
            ExtensionStep::Localize { u } => ring.localize(u.clone())?,
        };
    }
    Ok(ring)
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        self.same(other)
    }
}

impl Ring {
    fn base_node(kind: Kind, base: BaseRing, length_bound: usize) -> Ring {
        Ring(Arc::new(Node {
            kind,
            parent: None,
            descriptor: RingDescriptor { base, steps: vec![] },
            depth: 0,
            canonical: true,
            length_bound,
        }))
    }

    pub fn from_base(base: &BaseRing) -> Result<Ring> {
        match base {
            BaseRing::Integers => Ok(Ring::integers()),
            BaseRing::Rationals => Ok(Ring::rationals()),
            BaseRing::PrimeField { p } => Ring::prime_field(p.clone()),
            BaseRing::IntegersModPrimePower { p, k } => Ring::zmod_pk(p.clone(), *k),
        }
    }

    pub fn integers() -> Ring {
        Ring::base_node(Kind::Integers, BaseRing::Integers, 1)
    }

    pub fn rationals() -> Ring {
        Ring::base_node(Kind::Rationals, BaseRing::Rationals, 1)
    }

    pub fn prime_field(p: impl Into<BigInt>) -> Result<Ring> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::NonPrimeModulus(p.to_string()));
        }
        let kind = Kind::Modular {
            p: p.clone(),
            k: 1,
            m: p.clone(),
        };
        Ok(Ring::base_node(kind, BaseRing::PrimeField { p }, 1))
    }

    pub fn zmod_pk(p: impl Into<BigInt>, k: u32) -> Result<Ring> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::NonPrimeModulus(p.to_string()));
        }
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let m = num_traits::pow(p.clone(), k as usize);
        let kind = Kind::Modular { p: p.clone(), k, m };
        Ok(Ring::base_node(
            kind,
            BaseRing::IntegersModPrimePower { p, k },
            k as usize,
        ))
    }

    /// `self[var]/(modulus)` for a monic modulus of degree ≥ 1.
    pub fn quotient(&self, var: &str, modulus: Vec<Elem>) -> Result<Ring> {
        let mut modulus = modulus;
        while modulus.len() > 1 && self.is_zero(modulus.last().unwrap()) {
            modulus.pop();
        }
        if modulus.len() < 2 || !self.eq(modulus.last().unwrap(), &self.one()) {
            return Err(Error::NonMonicModulus);
        }
        let last = modulus.len() - 1;
        modulus[last] = self.one();
        let deg = modulus.len() - 1;
        let mut descriptor = self.0.descriptor.clone();
        descriptor.steps.push(ExtensionStep::MonicQuotient {
            var: var.to_string(),
            modulus: modulus.clone(),
        });
        Ok(Ring(Arc::new(Node {
            kind: Kind::Quotient {
                var: var.to_string(),
                modulus,
            },
            parent: Some(self.clone()),
            descriptor,
            depth: self.0.depth + 1,
            canonical: self.0.canonical,
            length_bound: deg * self.0.length_bound,
        })))
    }

    /// `self[1/u]`. Rejected when `u` is nilpotent (the result would be the
    /// zero ring) or when `self` admits no linear-algebra backend.
    pub fn localize(&self, u: Elem) -> Result<Ring> {
        let bound = self.0.length_bound.max(1);
        if self.is_zero(&self.pow(&u, bound as u64)) {
            return Err(Error::ZeroLocalization);
        }
        let over_integers = matches!(self.0.kind, Kind::Integers);
        if !over_integers && self.flat().is_err() {
            return Err(Error::UnsupportedRing(
                "localization is supported over ℤ and over quotient towers of ℤ, ℚ, 𝔽_p, ℤ/p^k, ℤ[1/u]".into(),
            ));
        }
        let mut descriptor = self.0.descriptor.clone();
        descriptor.steps.push(ExtensionStep::Localize { u: u.clone() });
        Ok(Ring(Arc::new(Node {
            kind: Kind::Localize { u },
            parent: Some(self.clone()),
            descriptor,
            depth: self.0.depth + 1,
            canonical: over_integers,
            length_bound: self.0.length_bound,
        })))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.descriptor
    }

    pub fn parent(&self) -> Option<&Ring> {
        self.0.parent.as_ref()
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    /// Bound on the length of the ring as a module over its base (ℤ, ℚ and
    /// 𝔽_p count 1, ℤ/p^k counts k). Used for nilpotency and annihilator
    /// stabilization.
    pub fn length_bound(&self) -> usize {
        self.0.length_bound
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }

    /// The prefix of the tower at the given depth.
    pub fn ancestor(&self, depth: usize) -> Option<Ring> {
        let mut r = self.clone();
        while r.depth() > depth {
            r = r.parent()?.clone();
        }
        (r.depth() == depth).then_some(r)
    }

    pub fn base(&self) -> Ring {
        self.ancestor(0).expect("every tower has a base")
    }

    pub fn is_quotient(&self) -> bool {
        matches!(self.0.kind, Kind::Quotient { .. })
    }

    pub fn is_localization(&self) -> bool {
        matches!(self.0.kind, Kind::Localize { .. })
    }

    /// Degree of the top quotient step, if the top step is a quotient.
    pub fn quotient_degree(&self) -> Option<usize> {
        match &self.0.kind {
            Kind::Quotient { modulus, .. } => Some(modulus.len() - 1),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&[Elem]> {
        match &self.0.kind {
            Kind::Quotient { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn var_name(&self) -> Option<&str> {
        match &self.0.kind {
            Kind::Quotient { var, .. } => Some(var),
            _ => None,
        }
    }

    pub fn localized_element(&self) -> Option<&Elem> {
        match &self.0.kind {
            Kind::Localize { u } => Some(u),
            _ => None,
        }
    }

    /// `(p, k)` of a ℤ/p^k or 𝔽_p (k = 1) base node.
    pub fn modular_params(&self) -> Option<(&BigInt, u32)> {
        match &self.0.kind {
            Kind::Modular { p, k, .. } => Some((p, *k)),
            _ => None,
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self.0.kind, Kind::Integers)
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.0.kind, Kind::Rationals)
    }

    fn inner(&self) -> &Ring {
        self.0.parent.as_ref().expect("extension step has a parent")
    }

    // ---- constants ----

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            Kind::Integers | Kind::Modular { .. } => Elem::Int(BigInt::zero()),
            Kind::Rationals => Elem::Rat(BigRational::zero()),
            Kind::Quotient { modulus, .. } => {
                let z = self.inner().zero();
                Elem::Poly(vec![z; modulus.len() - 1])
            }
            Kind::Localize { .. } => Elem::Frac(Box::new(self.inner().zero()), 0),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under the structure map ℤ → self.
    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(n.clone()),
            Kind::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            Kind::Modular { m, .. } => Elem::Int(n.mod_floor(m)),
            Kind::Quotient { .. } => self.embed_one_step(&self.inner().from_bigint(n)),
            Kind::Localize { .. } => Elem::Frac(Box::new(self.inner().from_bigint(n)), 0),
        }
    }

    /// The adjoined variable of a quotient step.
    pub fn generator(&self) -> Option<Elem> {
        let d = self.quotient_degree()?;
        let inner = self.inner();
        let mut cs = vec![inner.zero(); d];
        if d == 1 {
            // X ≡ −modulus[0] when the modulus is linear.
            cs[0] = inner.neg(&self.modulus().unwrap()[0]);
        } else {
            cs[1] = inner.one();
        }
        Some(Elem::Poly(cs))
    }

    /// Quotient element with the given coefficients (reduced if too long).
    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Elem {
        let modulus = self.modulus().expect("from_coeffs on a quotient ring");
        let inner = self.inner();
        let d = modulus.len() - 1;
        let mut cs: Vec<Elem> = coeffs.to_vec();
        if cs.len() < d {
            cs.resize(d, inner.zero());
        }
        reduce_in_place(inner, modulus, &mut cs);
        Elem::Poly(cs)
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (Kind::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Kind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Kind::Modular { m, .. }, Elem::Int(x), Elem::Int(y)) => {
                let s = x + y;
                Elem::Int(if &s >= m { s - m } else { s })
            }
            (Kind::Quotient { .. }, Elem::Poly(x), Elem::Poly(y)) => {
                let inner = self.inner();
                Elem::Poly(x.iter().zip(y).map(|(u, v)| inner.add(u, v)).collect())
            }
            (Kind::Localize { u }, Elem::Frac(x, m), Elem::Frac(y, n)) => {
                let inner = self.inner();
                let top = (*m).max(*n);
                let xs = inner.mul(x, &inner.pow(u, (top - m) as u64));
                let ys = inner.mul(y, &inner.pow(u, (top - n) as u64));
                self.normalize_frac(inner.add(&xs, &ys), top)
            }
            _ => panic!("element does not belong to ring {}", self.describe()),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.0.kind, a) {
            (Kind::Integers, Elem::Int(x)) => Elem::Int(-x),
            (Kind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (Kind::Modular { m, .. }, Elem::Int(x)) => Elem::Int(if x.is_zero() { x.clone() } else { m - x }),
            (Kind::Quotient { .. }, Elem::Poly(x)) => {
                let inner = self.inner();
                Elem::Poly(x.iter().map(|u| inner.neg(u)).collect())
            }
            (Kind::Localize { .. }, Elem::Frac(x, e)) => Elem::Frac(Box::new(self.inner().neg(x)), *e),
            _ => panic!("element does not belong to ring {}", self.describe()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (Kind::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (Kind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Kind::Modular { m, .. }, Elem::Int(x), Elem::Int(y)) => Elem::Int((x * y) % m),
            (Kind::Quotient { modulus, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                let inner = self.inner();
                let d = modulus.len() - 1;
                let mut prod = vec![inner.zero(); 2 * d - 1];
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_structural_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if yj.is_structural_zero() {
                            continue;
                        }
                        prod[i + j] = inner.add(&prod[i + j], &inner.mul(xi, yj));
                    }
                }
                reduce_in_place(inner, modulus, &mut prod);
                Elem::Poly(prod)
            }
            (Kind::Localize { .. }, Elem::Frac(x, m), Elem::Frac(y, n)) => {
                let inner = self.inner();
                self.normalize_frac(inner.mul(x, y), m + n)
            }
            _ => panic!("element does not belong to ring {}", self.describe()),
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    fn normalize_frac(&self, num: Elem, mut exp: u32) -> Elem {
        let inner = self.inner();
        if let (Kind::Localize { u: Elem::Int(u) }, Elem::Int(n)) = (&self.0.kind, &num) {
            if inner.is_integers() {
                let mut n = n.clone();
                if n.is_zero() {
                    return Elem::Frac(Box::new(Elem::Int(n)), 0);
                }
                while exp > 0 && (&n % u).is_zero() {
                    n /= u;
                    exp -= 1;
                }
                return Elem::Frac(Box::new(Elem::Int(n)), exp);
            }
        }
        if inner.0.canonical && num.is_structural_zero() {
            return Elem::Frac(Box::new(num), 0);
        }
        Elem::Frac(Box::new(num), exp)
    }

    // ---- decisions ----

    pub fn is_zero(&self, a: &Elem) -> bool {
        match (&self.0.kind, a) {
            (Kind::Integers | Kind::Modular { .. }, Elem::Int(x)) => x.is_zero(),
            (Kind::Rationals, Elem::Rat(x)) => x.is_zero(),
            (Kind::Quotient { .. }, Elem::Poly(xs)) => {
                let inner = self.inner();
                xs.iter().all(|x| inner.is_zero(x))
            }
            (Kind::Localize { u }, Elem::Frac(x, _)) => {
                let inner = self.inner();
                if inner.0.canonical && inner.is_integers() {
                    return x.is_structural_zero();
                }
                let k = inner.length_bound() as u64;
                inner.is_zero(&inner.mul(&inner.pow(u, k), x))
            }
            _ => panic!("element does not belong to ring {}", self.describe()),
        }
    }

    pub fn eq(&self, a: &Elem, b: &Elem) -> bool {
        if self.0.canonical {
            a == b
        } else {
            self.is_zero(&self.sub(a, b))
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        self.eq(a, &self.one())
    }

    pub fn is_invertible(&self, a: &Elem) -> bool {
        self.try_inverse(a).is_some()
    }

    pub fn inverse(&self, a: &Elem) -> Result<Elem> {
        self.try_inverse(a).ok_or(Error::NotInvertible)
    }

    /// Inverse if `a` is a unit. Quotient steps use the characteristic
    /// polynomial of multiplication by `a` (division free), localizations
    /// reduce to a membership problem in the inner ring.
    pub fn try_inverse(&self, a: &Elem) -> Option<Elem> {
        match (&self.0.kind, a) {
            (Kind::Integers, Elem::Int(x)) => (x.abs().is_one()).then(|| Elem::Int(x.clone())),
            (Kind::Rationals, Elem::Rat(x)) => (!x.is_zero()).then(|| Elem::Rat(x.recip())),
            (Kind::Modular { m, .. }, Elem::Int(x)) => {
                let e = x.extended_gcd(m);
                e.gcd.is_one().then(|| Elem::Int(e.x.mod_floor(m)))
            }
            (Kind::Quotient { .. }, Elem::Poly(_)) => {
                let inner = self.inner();
                let mat = self.multiplication_matrix(a);
                let cp = linalg::charpoly(inner, &mat);
                let d = cp.len() - 1;
                let c0 = &cp[d];
                let c0_inv = inner.try_inverse(c0)?;
                // a·(a^{d-1} + c_{d-1} a^{d-2} + … + c_1) = −c_0
                let mut acc = self.zero();
                for c in cp.iter().take(d) {
                    acc = self.add(&self.mul(&acc, a), &self.embed_one_step(c));
                }
                let scale = self.embed_one_step(&inner.neg(&c0_inv));
                Some(self.mul(&acc, &scale))
            }
            (Kind::Localize { u }, Elem::Frac(x, e)) => {
                let inner = self.inner();
                let (b, k) = if let (true, Elem::Int(n), Elem::Int(uu)) = (inner.is_integers(), x.as_ref(), u) {
                    // n is a unit in ℤ[1/u] iff its prime factors all divide u.
                    let mut rest = n.abs();
                    if rest.is_zero() {
                        return None;
                    }
                    let mut k = 0u32;
                    let mut uk = BigInt::one();
                    loop {
                        let g = rest.gcd(uu);
                        if g.is_one() {
                            break;
                        }
                        while (&rest % &g).is_zero() {
                            rest /= &g;
                        }
                    }
                    if !rest.is_one() {
                        return None;
                    }
                    while !(&uk % n).is_zero() {
                        uk *= uu;
                        k += 1;
                    }
                    (Elem::Int(uk / n), k)
                } else {
                    let k = self.unit_search_bound(x);
                    let target = inner.pow(u, k as u64);
                    let sol = linalg::solve_module(inner, &[vec![(**x).clone()]], &[target])
                        .expect("localization inner ring is flattenable")?;
                    (sol.into_iter().next().unwrap(), k)
                };
                let num = inner.mul(&b, &inner.pow(u, *e as u64));
                Some(self.normalize_frac(num, k))
            }
            _ => panic!("element does not belong to ring {}", self.describe()),
        }
    }

    /// Exponent K such that `x` is a unit after inverting `u` iff `u^K ∈ (x)`.
    fn unit_search_bound(&self, x: &Elem) -> u32 {
        let inner = self.inner();
        let l = inner.length_bound() as u32;
        let Ok(flat) = inner.flat() else { return l };
        if flat.is_artinian() {
            return l;
        }
        // ℤ-based: the quotient by (x) has order |N(x)|, so nilpotency
        // indices are bounded by its bit length.
        let m = inner.flat_multiplication_matrix(x).expect("flattenable");
        let det = linalg::determinant(&flat.ring, &m);
        let bits = flat.numerator_bits(&det);
        l + bits.max(8) as u32
    }

    // ---- structure maps ----

    fn embed_one_step(&self, x: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Quotient { modulus, .. } => {
                let inner = self.inner();
                let mut cs = vec![inner.zero(); modulus.len() - 1];
                cs[0] = x.clone();
                Elem::Poly(cs)
            }
            Kind::Localize { .. } => self.normalize_frac(x.clone(), 0),
            _ => panic!("base rings have no inner ring"),
        }
    }

    /// Image of `x ∈ sub` under the tower inclusion `sub → self`.
    pub fn embed(&self, sub: &Ring, x: &Elem) -> Elem {
        if self.same(sub) {
            return x.clone();
        }
        let inner = self.parent().expect("sub is not a prefix of this tower");
        self.embed_one_step(&inner.embed(sub, x))
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn extract(&self, sub: &Ring, x: &Elem) -> Option<Elem> {
        if self.same(sub) {
            return Some(x.clone());
        }
        let inner = self.parent()?;
        let y = match (&self.0.kind, x) {
            (Kind::Quotient { .. }, Elem::Poly(cs)) => {
                if cs.len() > 1 && !cs[1..].iter().all(|c| inner.is_zero(c)) {
                    return None;
                }
                cs[0].clone()
            }
            (Kind::Localize { .. }, Elem::Frac(a, 0)) => (**a).clone(),
            _ => return None,
        };
        inner.extract(sub, &y)
    }

    /// Coordinates of `x` over a prefix ring `sub` reached through quotient
    /// steps only. Outer coefficient index is most significant.
    pub fn coords_over(&self, sub: &Ring, x: &Elem) -> Result<Vec<Elem>> {
        if self.same(sub) {
            return Ok(vec![x.clone()]);
        }
        match (&self.0.kind, x) {
            (Kind::Quotient { .. }, Elem::Poly(cs)) => {
                let inner = self.inner();
                let mut out = Vec::new();
                for c in cs {
                    out.extend(inner.coords_over(sub, c)?);
                }
                Ok(out)
            }
            _ => Err(Error::UnsupportedRing(format!(
                "cannot flatten {} over {}",
                self.describe(),
                sub.describe()
            ))),
        }
    }

    pub fn from_coords_over(&self, sub: &Ring, coords: &[Elem]) -> Result<Elem> {
        if self.same(sub) {
            return Ok(coords[0].clone());
        }
        match &self.0.kind {
            Kind::Quotient { modulus, .. } => {
                let inner = self.inner();
                let d = modulus.len() - 1;
                let chunk = inner.rank_over(sub)?;
                let cs = (0..d)
                    .map(|i| inner.from_coords_over(sub, &coords[i * chunk..(i + 1) * chunk]))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Elem::Poly(cs))
            }
            _ => Err(Error::UnsupportedRing(format!("cannot flatten {}", self.describe()))),
        }
    }

    /// Rank of `self` as a free module over the prefix `sub`.
    pub fn rank_over(&self, sub: &Ring) -> Result<usize> {
        if self.same(sub) {
            return Ok(1);
        }
        match &self.0.kind {
            Kind::Quotient { modulus, .. } => Ok((modulus.len() - 1) * self.inner().rank_over(sub)?),
            _ => Err(Error::UnsupportedRing(format!(
                "{} is not free over {}",
                self.describe(),
                sub.describe()
            ))),
        }
    }

    /// Matrix (over the inner ring) of multiplication by `a` in a quotient step,
    /// column j = coefficients of `a·X^j`.
    pub fn multiplication_matrix(&self, a: &Elem) -> Vec<Vec<Elem>> {
        let d = self.quotient_degree().expect("quotient ring");
        let inner = self.inner();
        let x = self.generator().unwrap();
        let mut col = a.clone();
        let mut m = vec![vec![inner.zero(); d]; d];
        for j in 0..d {
            if let Elem::Poly(cs) = &col {
                for i in 0..d {
                    m[i][j] = cs[i].clone();
                }
            }
            col = self.mul(&col, &x);
        }
        m
    }

    /// Matrix over the flat base of multiplication by `a`.
    pub fn flat_multiplication_matrix(&self, a: &Elem) -> Result<Vec<Vec<Elem>>> {
        let flat = self.flat()?;
        let n = self.rank_over(&flat.ring)?;
        let mut m = vec![vec![flat.ring.zero(); n]; n];
        for j in 0..n {
            let mut e = vec![flat.ring.zero(); n];
            e[j] = flat.ring.one();
            let bj = self.from_coords_over(&flat.ring, &e)?;
            let col = self.coords_over(&flat.ring, &self.mul(a, &bj))?;
            for i in 0..n {
                m[i][j] = col[i].clone();
            }
        }
        Ok(m)
    }

    // ---- finite rings ----

    /// Number of elements, for quotient towers over 𝔽_p or ℤ/p^k.
    pub fn finite_size(&self) -> Option<BigInt> {
        let base = self.base();
        let (p, k) = base.modular_params()?;
        let rank = self.rank_over(&base).ok()?;
        Some(num_traits::pow(p.clone(), k as usize * rank))
    }

    /// The element with the given index in a fixed enumeration of a finite ring.
    pub fn element_at(&self, index: &BigInt) -> Option<Elem> {
        let base = self.base();
        let (p, k) = base.modular_params()?;
        let m = num_traits::pow(p.clone(), k as usize);
        let rank = self.rank_over(&base).ok()?;
        let mut rest = index.clone();
        let mut coords = Vec::with_capacity(rank);
        for _ in 0..rank {
            let (q, r) = rest.div_mod_floor(&m);
            coords.push(Elem::Int(r));
            rest = q;
        }
        self.from_coords_over(&base, &coords).ok()
    }

    /// All elements of a finite ring (intended for small rings).
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let size = self.finite_size()?;
        let n: usize = size.try_into().ok()?;
        Some((0..n).map(|i| self.element_at(&BigInt::from(i)).unwrap()).collect())
    }

    /// A pseudo-random element; integer parts are drawn from `[-bound, bound]`.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Elem {
        match &self.0.kind {
            Kind::Integers => Elem::Int(BigInt::from(rng.gen_range(-bound..=bound))),
            Kind::Rationals => {
                let n = rng.gen_range(-bound..=bound);
                let d = rng.gen_range(1..=bound.max(1));
                Elem::Rat(BigRational::new(n.into(), d.into()))
            }
            Kind::Modular { m, .. } => {
                let m64: Option<u64> = m.try_into().ok();
                match m64 {
                    Some(m64) => Elem::Int(BigInt::from(rng.gen_range(0..m64))),
                    None => Elem::Int(BigInt::from(rng.gen::<u64>()).mod_floor(m)),
                }
            }
            Kind::Quotient { modulus, .. } => {
                let inner = self.inner();
                Elem::Poly((0..modulus.len() - 1).map(|_| inner.random_elem(rng, bound)).collect())
            }
            Kind::Localize { .. } => {
                let inner = self.inner();
                let e = rng.gen_range(0..=2u32);
                self.normalize_frac(inner.random_elem(rng, bound), e)
            }
        }
    }

    // ---- display ----

    pub fn describe(&self) -> String {
        let mut s = match &self.0.descriptor.base {
            BaseRing::Integers => "ℤ".to_string(),
            BaseRing::Rationals => "ℚ".to_string(),
            BaseRing::PrimeField { p } => format!("𝔽_{p}"),
            BaseRing::IntegersModPrimePower { p, k } => format!("ℤ/{p}^{k}"),
        };
        let mut r = Some(self.clone());
        let mut chain = vec![];
        while let Some(node) = r {
            chain.push(node.clone());
            r = node.parent().cloned();
        }
        for node in chain.iter().rev().skip(1) {
            let inner = node.parent().unwrap();
            match &node.0.kind {
                Kind::Quotient { var, modulus } => {
                    let _ = write!(s, "[{var}]/({})", inner.show_poly(modulus, var));
                }
                Kind::Localize { u } => {
                    let _ = write!(s, "[1/{}]", inner.show(u));
                }
                _ => {}
            }
        }
        s
    }

    pub fn show(&self, a: &Elem) -> String {
        match (&self.0.kind, a) {
            (_, Elem::Int(n)) => n.to_string(),
            (_, Elem::Rat(q)) => q.to_string(),
            (Kind::Quotient { var, .. }, Elem::Poly(cs)) => self.inner().show_poly(cs, var),
            (Kind::Localize { u }, Elem::Frac(x, e)) => {
                let inner = self.inner();
                if *e == 0 {
                    inner.show(x)
                } else {
                    format!("({})/({})^{e}", inner.show(x), inner.show(u))
                }
            }
            _ => format!("{a:?}"),
        }
    }

    /// Renders a coefficient list (degree 0 first) over `self`.
    pub fn show_poly(&self, cs: &[Elem], var: &str) -> String {
        let terms: Vec<String> = cs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.is_zero(c))
            .map(|(i, c)| {
                let c = self.show(c);
                match i {
                    0 => c,
                    1 => format!("({c})*{var}"),
                    _ => format!("({c})*{var}^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Reduces `cs` modulo a monic `modulus` in place, leaving `deg(modulus)` entries.
fn reduce_in_place(inner: &Ring, modulus: &[Elem], cs: &mut Vec<Elem>) {
    let d = modulus.len() - 1;
    while cs.len() > d {
        let t = cs.len() - 1;
        let c = cs.pop().unwrap();
        if c.is_structural_zero() {
            continue;
        }
        for j in 0..d {
            let idx = t - d + j;
            cs[idx] = inner.sub(&cs[idx], &inner.mul(&c, &modulus[j]));
        }
    }
    while cs.len() < d {
        cs.push(inner.zero());
    }
}

#[cfg(test)]
mod tests;

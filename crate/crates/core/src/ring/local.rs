//! Locality certificates for finite local towers over 𝔽_p or ℤ/p^k.
//!
//! A tower of monic quotients is local when every modulus is, over the
//! residue field reached so far, a power of a single irreducible polynomial.
//! The certificate carries the residue field (a tower over 𝔽_p), the images of
//! the adjoined variables in it, and a set-theoretic section used for lifting.

use num_bigint::BigInt;

use super::{Elem, Ring};
use crate::error::{Error, Result};
use crate::poly::{FiniteField, Poly};

#[derive(Clone, Debug)]
struct Level {
    ring: Ring,
    field: Ring,
    /// Image of this level's adjoined variable (absent at the base).
    xi: Option<Elem>,
    /// Whether this level's residue field is a proper extension of the previous one.
    extends: bool,
}

/// Witness that a ring is local and residually discrete, with its residue map.
#[derive(Clone, Debug)]
pub struct LocalCertificate {
    ring: Ring,
    levels: Vec<Level>,
    maximal_ideal: Vec<Elem>,
}

/// Certifies that `ring` is local. Only quotient towers over 𝔽_p or ℤ/p^k
/// are supported.
pub fn check_local(ring: &Ring) -> Result<LocalCertificate> {
    let base = ring.base();
    let Some((p, k)) = base.modular_params() else {
        return Err(Error::UnsupportedBase(format!(
            "locality is certified only over 𝔽_p and ℤ/p^k, not {}",
            ring.describe()
        )));
    };
    let residue0 = Ring::prime_field(p.clone())?;
    let mut levels = vec![Level {
        ring: base.clone(),
        field: residue0,
        xi: None,
        extends: false,
    }];
    let mut maximal_ideal = Vec::new();
    if k > 1 {
        maximal_ideal.push(ring.from_bigint(p));
    }
    let chain: Vec<Ring> = (1..=ring.depth()).map(|d| ring.ancestor(d).unwrap()).collect();
    for node in chain {
        if !node.is_quotient() {
            return Err(Error::UnsupportedBase(
                "localization steps are not allowed in a certified local tower".into(),
            ));
        }
        let partial = LocalCertificate {
            ring: node.parent().unwrap().clone(),
            levels: levels.clone(),
            maximal_ideal: vec![],
        };
        let prev_field = levels.last().unwrap().field.clone();
        let modulus = Poly::new(node.parent().unwrap(), node.modulus().unwrap().to_vec());
        let reduced = partial.residue_poly(&modulus);
        let factors = FiniteField::new(&prev_field)?.factor(&reduced)?;
        if factors.len() != 1 {
            return Err(Error::NotLocal(format!(
                "modulus of {} is residually a product of {} distinct irreducibles",
                node.describe(),
                factors.len()
            )));
        }
        let g = &factors[0].0;
        let (field, xi, extends) = if g.degree() == Some(1) {
            (prev_field.clone(), prev_field.neg(&g.coeffs()[0]), false)
        } else {
            let name = format!("{}̄", node.var_name().unwrap_or("y"));
            let f = prev_field.quotient(&name, g.coeffs().to_vec())?;
            let gen = f.generator().unwrap();
            (f, gen, true)
        };
        let lifted_g = partial.lift_poly(g);
        let gen = lifted_g.evaluate_in(node.parent().unwrap(), &node, &node.generator().unwrap());
        if !node.is_zero(&gen) {
            maximal_ideal.push(ring.embed(&node, &gen));
        }
        levels.push(Level {
            ring: node.clone(),
            field,
            xi: Some(xi),
            extends,
        });
    }
    Ok(LocalCertificate {
        ring: ring.clone(),
        levels,
        maximal_ideal,
    })
}

impl LocalCertificate {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn residue_field(&self) -> &Ring {
        &self.levels.last().unwrap().field
    }

    pub fn maximal_ideal_generators(&self) -> &[Elem] {
        &self.maximal_ideal
    }

    pub fn residue_field_size(&self) -> BigInt {
        self.residue_field().finite_size().expect("finite residue field")
    }

    /// Residue-field data for a prefix of the certified tower.
    pub fn restrict(&self, depth: usize) -> LocalCertificate {
        let levels = self.levels[..=depth].to_vec();
        let ring = levels[depth].ring.clone();
        let maximal_ideal = self
            .maximal_ideal
            .iter()
            .filter_map(|g| self.ring.extract(&ring, g))
            .collect();
        LocalCertificate {
            ring,
            levels,
            maximal_ideal,
        }
    }

    fn residue_at(&self, depth: usize, x: &Elem) -> Elem {
        let level = &self.levels[depth];
        if depth == 0 {
            return level.field.from_bigint(x.as_int().expect("base residue"));
        }
        let prev = &self.levels[depth - 1];
        let cs = x.as_poly().expect("quotient element");
        let xi = level.xi.as_ref().unwrap();
        let f = &level.field;
        cs.iter().rev().fold(f.zero(), |acc, c| {
            let rc = self.residue_at(depth - 1, c);
            let rc = if level.extends { f.embed(&prev.field, &rc) } else { rc };
            f.add(&f.mul(&acc, xi), &rc)
        })
    }

    fn lift_at(&self, depth: usize, a: &Elem) -> Elem {
        let level = &self.levels[depth];
        if depth == 0 {
            return a.clone();
        }
        let prev = &self.levels[depth - 1];
        if level.extends {
            let cs: Vec<Elem> = a
                .as_poly()
                .unwrap()
                .iter()
                .map(|c| self.lift_at(depth - 1, c))
                .collect();
            level.ring.from_coeffs(&cs)
        } else {
            level.ring.embed(&prev.ring, &self.lift_at(depth - 1, a))
        }
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue(&self, x: &Elem) -> Elem {
        self.residue_at(self.levels.len() - 1, x)
    }

    /// A fixed section of the residue map.
    pub fn lift(&self, a: &Elem) -> Elem {
        self.lift_at(self.levels.len() - 1, a)
    }

    pub fn in_maximal_ideal(&self, x: &Elem) -> bool {
        self.residue_field().is_zero(&self.residue(x))
    }

    pub fn residue_poly(&self, f: &Poly) -> Poly {
        f.map(self.residue_field(), |c| self.residue(c))
    }

    pub fn lift_poly(&self, f: &Poly) -> Poly {
        f.map(&self.ring, |c| self.lift(c))
    }

    pub fn residue_field_ff(&self) -> FiniteField {
        FiniteField::new(self.residue_field()).expect("residue field is a finite field")
    }
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_witness, MatrixUnitWitness, Mode, SplitTree, TreeNode};
use crate::algebra::{is_azumaya, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::hensel::lift_idempotent_algebra;
use crate::poly::{FiniteField, Poly};
use crate::ring::linalg::solve_module;
use crate::ring::{check_local, Elem, LocalCertificate, Ring};

/// Random draws allowed while searching for a splitting idempotent.
pub const DEFAULT_RETRY_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Matrix,
    Quaternion,
    FiniteLocal,
}

fn matrix_size(alg: &FiniteAlgebra) -> Result<usize> {
    let r = alg.rank();
    let n = (r as f64).sqrt().round() as usize;
    if n * n != r {
        return Err(Error::NotAzumaya(format!("rank {r} is not a square")));
    }
    Ok(n)
}

/// Row-reduces over a field and returns the indices of a maximal independent subset.
fn independent_subset(field: &Ring, vectors: &[Vec<Elem>]) -> Vec<usize> {
    let mut rows: Vec<(usize, Vec<Elem>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        for (p, row) in &rows {
            if !field.is_zero(&v[*p]) {
                let c = v[*p].clone();
                v = v
                    .iter()
                    .zip(row)
                    .map(|(a, b)| field.sub(a, &field.mul(&c, b)))
                    .collect();
            }
        }
        if let Some(p) = v.iter().position(|x| !field.is_zero(x)) {
            let inv = field.inverse(&v[p]).expect("field element");
            let v: Vec<Elem> = v.iter().map(|x| field.mul(x, &inv)).collect();
            rows.push((p, v));
            chosen.push(idx);
        }
    }
    chosen
}

/// Dimension over a field of the span of `vectors`.
pub(super) fn residual_rank(field: &Ring, vectors: &[Vec<Elem>]) -> usize {
    independent_subset(field, vectors).len()
}

fn corner_dimension(alg: &FiniteAlgebra, e: &[Elem]) -> usize {
    let vs: Vec<Vec<Elem>> = (0..alg.rank())
        .map(|i| alg.mul(&alg.mul(e, &alg.basis(i)), e))
        .collect();
    independent_subset(alg.ring(), &vs).len()
}

/// Evaluates `f` at `x` inside the corner algebra with unit `e`.
fn evaluate_in_corner(alg: &FiniteAlgebra, f: &Poly, x: &[Elem], e: &[Elem]) -> Vec<Elem> {
    f.coeffs()
        .iter()
        .rev()
        .fold(alg.zero(), |acc, c| alg.add(&alg.mul(&acc, x), &alg.scale(c, e)))
}

/// Minimal polynomial of `x` in the corner algebra with unit `e`, over a field.
fn corner_minimal_polynomial(alg: &FiniteAlgebra, x: &[Elem], e: &[Elem]) -> Result<Poly> {
    let k = alg.ring();
    let mut powers = vec![e.to_vec()];
    loop {
        let next = alg.mul(powers.last().unwrap(), x);
        let target: Vec<Elem> = next.iter().map(|c| k.neg(c)).collect();
        if let Some(mut c) = solve_module(k, &powers, &target)? {
            c.push(k.one());
            return Ok(Poly::new(k, c));
        }
        powers.push(next);
    }
}

/// Matrix units `e_ij` with `e_ij·v_k = δ_jk·v_i`, solved over the base ring.
fn units_from_module_basis(alg: &FiniteAlgebra, v: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
    let n = v.len();
    let cols: Vec<Vec<Elem>> = (0..alg.rank())
        .map(|m| v.iter().flat_map(|vk| alg.mul(&alg.basis(m), vk)).collect())
        .collect();
    let mut units = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let target: Vec<Elem> = (0..n)
                .flat_map(|k| if k == j { v[i].clone() } else { alg.zero() })
                .collect();
            let e = solve_module(alg.ring(), &cols, &target)?
                .ok_or_else(|| Error::NotAzumaya("A does not act as End(Ae)".into()))?;
            units.push(e);
        }
    }
    Ok(units)
}

/// Matrix units of a central simple algebra over a finite field.
pub fn split_over_finite_field(alg: &FiniteAlgebra, seed: u64, budget: usize) -> Result<MatrixUnitWitness> {
    let k = alg.ring();
    let ff = FiniteField::new(k)?;
    if !is_azumaya(alg)? {
        return Err(Error::NotAzumaya("canonical map is not invertible".into()));
    }
    let n = matrix_size(alg)?;
    if n == 0 {
        return Ok(MatrixUnitWitness { n: 0, units: vec![] });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = alg.one();
    let mut dim = alg.rank();
    let mut draws = 0;
    while dim > 1 {
        if draws == budget {
            return Err(Error::RandomnessExhausted(budget));
        }
        draws += 1;
        let y: Vec<Elem> = (0..alg.rank()).map(|_| k.random_elem(&mut rng, 1)).collect();
        let x = alg.mul(&alg.mul(&e, &y), &e);
        let m = corner_minimal_polynomial(alg, &x, &e)?;
        let factors = ff.factor(&m)?;
        if factors.len() < 2 {
            continue;
        }
        let f = factors[0].0.pow(k, factors[0].1);
        let g = ff.div_exact(&m, &f);
        let (_, s, _) = ff.xgcd(&f, &g);
        let eps = evaluate_in_corner(alg, &s.mul(k, &f).rem_monic(k, &m)?, &x, &e);
        let other = alg.sub(&e, &eps);
        let (d1, d2) = (corner_dimension(alg, &eps), corner_dimension(alg, &other));
        if d1 == 0 || d2 == 0 {
            continue;
        }
        (e, dim) = if d1 <= d2 { (eps, d1) } else { (other, d2) };
    }
    let ae: Vec<Vec<Elem>> = (0..alg.rank()).map(|i| alg.mul(&alg.basis(i), &e)).collect();
    let idx = independent_subset(k, &ae);
    if idx.len() != n {
        return Err(Error::Internal(format!(
            "Ae has dimension {} instead of {n}",
            idx.len()
        )));
    }
    let v: Vec<Vec<Elem>> = idx.iter().map(|&i| ae[i].clone()).collect();
    let w = MatrixUnitWitness {
        n,
        units: units_from_module_basis(alg, &v)?,
    };
    check_witness(alg, &w).map_err(Error::Internal)?;
    Ok(w)
}

/// Reduces an algebra over a certified ring to its residue field.
fn residual_algebra(alg: &FiniteAlgebra, cert: &LocalCertificate) -> Result<FiniteAlgebra> {
    let sc = alg
        .structure_constants()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|c| cert.residue(c)).collect())
                .collect()
        })
        .collect();
    let unit = alg.unit().iter().map(|c| cert.residue(c)).collect();
    FiniteAlgebra::new(cert.residue_field(), sc, unit)
}

/// Matrix units of an Azumaya algebra over a certified finite local ring:
/// split residually, lift e_11 to an idempotent, and solve on `Ae`.
pub fn split_over_finite_local(alg: &FiniteAlgebra, cert: &LocalCertificate, seed: u64) -> Result<MatrixUnitWitness> {
    if !alg.ring().same(cert.ring()) {
        return Err(Error::BaseRingMismatch);
    }
    if !is_azumaya(alg)? {
        return Err(Error::NotAzumaya("canonical map is not invertible".into()));
    }
    let n = matrix_size(alg)?;
    if n == 0 {
        return Ok(MatrixUnitWitness { n: 0, units: vec![] });
    }
    let residual = residual_algebra(alg, cert)?;
    let wbar = split_over_finite_field(&residual, seed, DEFAULT_RETRY_BUDGET)?;
    let lift = |v: &[Elem]| -> Vec<Elem> { v.iter().map(|c| cert.lift(c)).collect() };
    let e = lift_idempotent_algebra(alg, &lift(wbar.unit(0, 0)), cert)?;
    let v: Vec<Vec<Elem>> = (0..n).map(|k| alg.mul(&lift(wbar.unit(k, 0)), &e)).collect();
    let w = MatrixUnitWitness {
        n,
        units: units_from_module_basis(alg, &v)?,
    };
    check_witness(alg, &w).map_err(Error::Internal)?;
    Ok(w)
}

/// Matrix units of (a, b) over `s = R[x]/(x² − a)` in the basis 1, i, j, ij:
/// E11 = (1 + (x/a)i)/2, E12 = (j + (x/a)ij)/2, E21 = (j − (x/a)ij)/(2b), E22 = (1 − (x/a)i)/2.
pub fn quaternion_leaf_units(s: &Ring, a: &Elem, b: &Elem) -> Result<MatrixUnitWitness> {
    let r = s.parent().ok_or(Error::BaseRingMismatch)?;
    let two = r.from_int(2);
    let half = r.inverse(&two)?;
    let a_inv = r.inverse(a)?;
    let b_inv = r.inverse(b)?;
    let x = s.generator().unwrap();
    let h = s.embed(r, &half);
    let xa2 = s.mul(&x, &s.embed(r, &r.mul(&a_inv, &half)));
    let inv2b = s.embed(r, &r.mul(&half, &b_inv));
    let xab2 = s.mul(&xa2, &s.embed(r, &b_inv));
    let z = s.zero();
    let units = vec![
        vec![h.clone(), xa2.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), h.clone(), xa2.clone()],
        vec![z.clone(), z.clone(), inv2b, s.neg(&xab2)],
        vec![h, s.neg(&xa2), z.clone(), z],
    ];
    Ok(MatrixUnitWitness { n: 2, units })
}

fn is_structurally(alg: &FiniteAlgebra, model: &FiniteAlgebra) -> bool {
    model.rank() == alg.rank()
        && alg.equal(alg.unit(), model.unit())
        && alg
            .structure_constants()
            .iter()
            .flatten()
            .zip(model.structure_constants().iter().flatten())
            .all(|(x, y)| alg.equal(x, y))
}

/// The quaternion parameters (a, b) if `alg` is literally `quaternion(a, b)`.
fn quaternion_parameters(alg: &FiniteAlgebra) -> Option<(Elem, Elem)> {
    if alg.rank() != 4 {
        return None;
    }
    let sc = alg.structure_constants();
    let (a, b) = (sc[1][1][0].clone(), sc[2][2][0].clone());
    is_structurally(alg, &FiniteAlgebra::quaternion(alg.ring(), &a, &b)).then_some((a, b))
}

fn matrix_parameter(alg: &FiniteAlgebra) -> Option<usize> {
    let n = matrix_size(alg).ok()?;
    is_structurally(alg, &FiniteAlgebra::matrix_algebra(alg.ring(), n)).then_some(n)
}

fn standard_units(n: usize, ring: &Ring) -> MatrixUnitWitness {
    let alg = FiniteAlgebra::matrix_algebra(ring, n);
    MatrixUnitWitness {
        n,
        units: (0..n * n).map(|i| alg.basis(i)).collect(),
    }
}

/// Builds a splitting tree for a supported family; `None` picks the first
/// family that applies.
pub fn build_tree(alg: &FiniteAlgebra, family: Option<Family>, mode: Mode, seed: u64) -> Result<SplitTree> {
    let ring = alg.ring();
    let family = match family {
        Some(f) => f,
        None if matrix_parameter(alg).is_some() => Family::Matrix,
        None if check_local(ring).is_ok() => Family::FiniteLocal,
        None if quaternion_parameters(alg).is_some() => Family::Quaternion,
        None => {
            return Err(Error::UnsupportedFamily(
                "no supported family recognizes this algebra".into(),
            ))
        }
    };
    let node = match family {
        Family::Matrix => {
            let n =
                matrix_parameter(alg).ok_or_else(|| Error::UnsupportedFamily("not in the matrix-unit basis".into()))?;
            TreeNode::leaf(standard_units(n, ring)).with_algebra(alg.clone())
        }
        Family::FiniteLocal => {
            let cert = check_local(ring)?;
            TreeNode::leaf(split_over_finite_local(alg, &cert, seed)?).with_algebra(alg.clone())
        }
        Family::Quaternion => {
            let (a, b) = quaternion_parameters(alg)
                .ok_or_else(|| Error::UnsupportedFamily("not a quaternion algebra in the basis 1, i, j, ij".into()))?;
            if let Ok(cert) = check_local(ring) {
                TreeNode::leaf(split_over_finite_local(alg, &cert, seed)?).with_algebra(alg.clone())
            } else {
                let two_ab = ring.mul(&ring.from_int(2), &ring.mul(&a, &b));
                if !ring.is_invertible(&two_ab) {
                    return Err(Error::NotAzumaya("2ab is not invertible".into()));
                }
                let p = Poly::new(ring, vec![ring.neg(&a), ring.zero(), ring.one()]);
                let s = super::adjoin_ring(ring, &p, 1)?;
                let leaf_alg = alg.base_change(&s)?;
                let w = quaternion_leaf_units(&s, &a, &b)?;
                TreeNode::adjoin(p, TreeNode::leaf(w).with_algebra(leaf_alg))
            }
        }
    };
    let tree = SplitTree {
        mode,
        ring: ring.clone(),
        algebra: alg.clone(),
        node,
    };
    let report = super::verify_tree(&tree);
    if let Some(f) = report.failure {
        return Err(Error::Internal(format!("built tree fails at {}: {}", f.path, f.reason)));
    }
    Ok(tree)
}

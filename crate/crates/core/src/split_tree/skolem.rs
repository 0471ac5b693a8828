use super::MatrixUnitWitness;
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::ring::linalg::{determinant, kernel_module, solve_module, Matrix};
use crate::ring::{Elem, LocalCertificate};

fn apply(alg: &FiniteAlgebra, psi: &Matrix, a: &[Elem]) -> Vec<Elem> {
    let r = alg.ring();
    psi.iter()
        .map(|row| r.sum(row.iter().zip(a).map(|(m, x)| r.mul(m, x)).collect::<Vec<_>>().iter()))
        .collect()
}

/// Checks that `psi` (column j = ψ(x_j)) is a unital, multiplicative, invertible map.
pub fn check_automorphism(alg: &FiniteAlgebra, psi: &Matrix) -> Result<()> {
    let r = alg.rank();
    let ring = alg.ring();
    if psi.len() != r || psi.iter().any(|row| row.len() != r) {
        return Err(Error::NotAutomorphism(format!("expected a {r}×{r} matrix")));
    }
    if !alg.equal(&apply(alg, psi, alg.unit()), alg.unit()) {
        return Err(Error::NotAutomorphism("ψ(1) ≠ 1".into()));
    }
    let images: Vec<Vec<Elem>> = (0..r).map(|j| apply(alg, psi, &alg.basis(j))).collect();
    for i in 0..r {
        for j in 0..r {
            if !alg.equal(&apply(alg, psi, &alg.mul_basis(i, j)), &alg.mul(&images[i], &images[j])) {
                return Err(Error::NotAutomorphism(format!("ψ(x{i}·x{j}) ≠ ψ(x{i})·ψ(x{j})")));
            }
        }
    }
    if !ring.is_invertible(&determinant(ring, psi)) {
        return Err(Error::NotAutomorphism("ψ is not invertible".into()));
    }
    Ok(())
}

fn to_matrix(alg: &FiniteAlgebra, w: &MatrixUnitWitness, y: &[Elem]) -> Result<Matrix> {
    let c = solve_module(alg.ring(), &w.units, y)?
        .ok_or_else(|| Error::Internal("matrix units do not span the algebra".into()))?;
    Ok(c.chunks(w.n).map(<[Elem]>::to_vec).collect())
}

fn from_matrix(alg: &FiniteAlgebra, w: &MatrixUnitWitness, m: &Matrix) -> Vec<Elem> {
    let n = w.n;
    (0..n * n).fold(alg.zero(), |acc, t| {
        alg.add(&acc, &alg.scale(&m[t / n][t % n], &w.units[t]))
    })
}

/// A unit `a` with `ψ(x) = a·x·a⁻¹`: w_1 spans the image of ψ(e_11),
/// w_j = ψ(e_j1)·w_1, and `a` maps the standard basis to the w_j.
pub fn skolem_noether_matrix(
    alg: &FiniteAlgebra,
    w: &MatrixUnitWitness,
    psi: &Matrix,
    cert: &LocalCertificate,
) -> Result<Vec<Elem>> {
    let ring = alg.ring();
    if !ring.same(cert.ring()) {
        return Err(Error::BaseRingMismatch);
    }
    check_automorphism(alg, psi)?;
    let n = w.n;
    if n == 0 {
        return Ok(vec![]);
    }
    let p1 = to_matrix(alg, w, &apply(alg, psi, w.unit(0, 0)))?;
    let (col, row) = (0..n)
        .flat_map(|c| (0..n).map(move |r| (c, r)))
        .find(|&(c, r)| ring.is_invertible(&p1[r][c]))
        .ok_or_else(|| Error::NotLocal("ψ(e11) has no unit entry".into()))?;
    let scale = ring.inverse(&p1[row][col])?;
    let w1: Vec<Elem> = (0..n).map(|i| ring.mul(&p1[i][col], &scale)).collect();
    let mut a_m = vec![vec![ring.zero(); n]; n];
    for j in 0..n {
        let pj = to_matrix(alg, w, &apply(alg, psi, w.unit(j, 0)))?;
        for (i, slot) in a_m.iter_mut().enumerate() {
            slot[j] = ring.sum((0..n).map(|k| ring.mul(&pj[i][k], &w1[k])).collect::<Vec<_>>().iter());
        }
    }
    let a = from_matrix(alg, w, &a_m);
    alg.inverse(&a)
        .map_err(|_| Error::Internal("conjugator is not a unit".into()))?;
    for t in 0..alg.rank() {
        let x = alg.basis(t);
        if !alg.equal(&alg.mul(&apply(alg, psi, &x), &a), &alg.mul(&a, &x)) {
            return Err(Error::Internal(format!("ψ(x{t})·a ≠ a·x{t}")));
        }
    }
    Ok(a)
}

/// M = {a : a·x = ψ(x)·a for all x}.
#[derive(Clone, Debug)]
pub struct SkolemNoetherModule {
    pub generators: Vec<Vec<Elem>>,
    /// Minimal number of generators, when the ring is certified local.
    pub rank: Option<usize>,
    /// A generator of M that is a unit of the algebra, when M is free of rank 1.
    pub unit_generator: Option<Vec<Elem>>,
}

pub fn skolem_noether_module(
    alg: &FiniteAlgebra,
    psi: &Matrix,
    cert: Option<&LocalCertificate>,
) -> Result<SkolemNoetherModule> {
    check_automorphism(alg, psi)?;
    let r = alg.rank();
    let images: Vec<Vec<Elem>> = (0..r).map(|j| apply(alg, psi, &alg.basis(j))).collect();
    let cols: Vec<Vec<Elem>> = (0..r)
        .map(|m| {
            let xm = alg.basis(m);
            (0..r)
                .flat_map(|j| alg.sub(&alg.mul_basis(m, j), &alg.mul(&images[j], &xm)))
                .collect()
        })
        .collect();
    let generators: Vec<Vec<Elem>> = if r == 0 {
        vec![]
    } else {
        kernel_module(alg.ring(), &cols)?
            .into_iter()
            .filter(|g| !alg.is_zero(g))
            .collect()
    };
    let Some(cert) = cert else {
        return Ok(SkolemNoetherModule {
            generators,
            rank: None,
            unit_generator: None,
        });
    };
    let k = cert.residue_field();
    let residues: Vec<Vec<Elem>> = generators
        .iter()
        .map(|g| g.iter().map(|c| cert.residue(c)).collect())
        .collect();
    let rank = super::build::residual_rank(k, &residues);
    let mut unit_generator = None;
    if rank == 1 {
        if let Some(u) = generators.iter().find(|g| alg.inverse(g).is_ok()) {
            let all_multiples = generators.iter().all(|g| {
                solve_module(alg.ring(), std::slice::from_ref(u), g)
                    .ok()
                    .flatten()
                    .is_some()
            });
            if !all_multiples {
                return Err(Error::Internal("M is not generated by its unit element".into()));
            }
            unit_generator = Some(u.clone());
        }
    }
    Ok(SkolemNoetherModule {
        generators,
        rank: Some(rank),
        unit_generator,
    })
}

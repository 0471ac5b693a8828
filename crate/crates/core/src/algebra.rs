//! Associative unital algebras given by structure constants over a ring
//! tower, and the Azumaya canonical map `A ⊗ A^op → End(A)`.
//!
//! Elements are coordinate vectors over the base ring.

use crate::error::{Error, Result};
use crate::ring::linalg::{determinant, kernel_module, solve_module, Matrix};
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    ring: Ring,
    rank: usize,
    /// `x_i·x_j = Σ_k sc[i][j][k]·x_k`.
    sc: Vec<Vec<Vec<Elem>>>,
    unit: Vec<Elem>,
}

impl FiniteAlgebra {
    /// Validates shapes, associativity and the unit laws on basis elements.
    pub fn new(ring: &Ring, sc: Vec<Vec<Vec<Elem>>>, unit: Vec<Elem>) -> Result<FiniteAlgebra> {
        let rank = unit.len();
        let shape_ok = sc.len() == rank
            && sc
                .iter()
                .all(|row| row.len() == rank && row.iter().all(|v| v.len() == rank));
        if !shape_ok {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must be {rank}×{rank}×{rank}"
            )));
        }
        let alg = FiniteAlgebra {
            ring: ring.clone(),
            rank,
            sc,
            unit,
        };
        alg.check_laws()?;
        Ok(alg)
    }

    fn check_laws(&self) -> Result<()> {
        let r = self.rank;
        for i in 0..r {
            let xi = self.basis(i);
            if !self.equal(&self.mul(&self.unit, &xi), &xi) || !self.equal(&self.mul(&xi, &self.unit), &xi) {
                return Err(Error::InvalidAlgebra(format!("unit law fails on basis element {i}")));
            }
            for j in 0..r {
                let xij = self.mul_basis(i, j);
                for k in 0..r {
                    let left = self.mul(&xij, &self.basis(k));
                    let right = self.mul(&xi, &self.mul_basis(j, k));
                    if !self.equal(&left, &right) {
                        return Err(Error::InvalidAlgebra(format!("associativity fails on ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Elem>>] {
        &self.sc
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    pub fn one(&self) -> Vec<Elem> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![self.ring.zero(); self.rank]
    }

    pub fn basis(&self, i: usize) -> Vec<Elem> {
        let mut v = self.zero();
        v[i] = self.ring.one();
        v
    }

    pub fn scalar(&self, c: &Elem) -> Vec<Elem> {
        self.scale(c, &self.unit)
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[Elem]) -> Vec<Elem> {
        a.iter().map(|x| self.ring.neg(x)).collect()
    }

    pub fn scale(&self, c: &Elem, a: &[Elem]) -> Vec<Elem> {
        a.iter().map(|x| self.ring.mul(c, x)).collect()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<Elem> {
        self.sc[i][j].clone()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if r.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if r.is_zero(bj) {
                    continue;
                }
                let c = r.mul(ai, bj);
                for (o, s) in out.iter_mut().zip(&self.sc[i][j]) {
                    if !s.is_structural_zero() {
                        *o = r.add(o, &r.mul(&c, s));
                    }
                }
            }
        }
        out
    }

    pub fn equal(&self, a: &[Elem], b: &[Elem]) -> bool {
        a.iter().zip(b).all(|(x, y)| self.ring.eq(x, y))
    }

    pub fn is_zero(&self, a: &[Elem]) -> bool {
        a.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank).all(|i| (0..i).all(|j| self.equal(&self.sc[i][j], &self.sc[j][i])))
    }

    /// Matrix of left multiplication by `a`: column j holds the coordinates of `a·x_j`.
    pub fn left_matrix(&self, a: &[Elem]) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.rank).map(|j| self.mul(a, &self.basis(j))).collect();
        transpose(&cols, self.rank)
    }

    /// Two-sided inverse, if `a` is a unit.
    pub fn inverse(&self, a: &[Elem]) -> Result<Vec<Elem>> {
        let cols: Vec<Vec<Elem>> = (0..self.rank).map(|j| self.mul(a, &self.basis(j))).collect();
        let y = solve_module(&self.ring, &cols, &self.unit)?.ok_or(Error::NotInvertible)?;
        // a·y = 1 makes left multiplication by a surjective, hence bijective on a
        // free module of finite rank, so y·a = 1 as well.
        if !self.equal(&self.mul(&y, a), &self.unit) {
            return Err(Error::NotInvertible);
        }
        Ok(y)
    }

    /// Coordinates of `x` in the basis `basis`, if they exist.
    pub fn coordinates_in(&self, basis: &[Vec<Elem>], x: &[Elem]) -> Result<Option<Vec<Elem>>> {
        solve_module(&self.ring, basis, x)
    }

    // ---- constructors ----

    /// The trivial algebra (rank 0).
    pub fn trivial(ring: &Ring) -> FiniteAlgebra {
        FiniteAlgebra {
            ring: ring.clone(),
            rank: 0,
            sc: vec![],
            unit: vec![],
        }
    }

    /// The base ring as a rank-one algebra over itself.
    pub fn base(ring: &Ring) -> FiniteAlgebra {
        FiniteAlgebra {
            ring: ring.clone(),
            rank: 1,
            sc: vec![vec![vec![ring.one()]]],
            unit: vec![ring.one()],
        }
    }

    /// `M_n(R)` in the matrix-unit basis, `e_ij` at index `i·n + j`.
    pub fn matrix_algebra(ring: &Ring, n: usize) -> FiniteAlgebra {
        let r = n * n;
        let mut sc = vec![vec![vec![ring.zero(); r]; r]; r];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    sc[i * n + j][j * n + l][i * n + l] = ring.one();
                }
            }
        }
        let mut unit = vec![ring.zero(); r];
        for i in 0..n {
            unit[i * n + i] = ring.one();
        }
        FiniteAlgebra {
            ring: ring.clone(),
            rank: r,
            sc,
            unit,
        }
    }

    /// The quaternion algebra (a, b) with basis 1, i, j, ij.
    pub fn quaternion(ring: &Ring, a: &Elem, b: &Elem) -> FiniteAlgebra {
        let r = ring;
        let z = r.zero();
        let ab = r.mul(a, b);
        let e = |k: usize, c: Elem| {
            let mut out = vec![z.clone(); 4];
            out[k] = c;
            out
        };
        let one = r.one();
        let m1 = r.neg(&one);
        let basis = |k: usize| e(k, one.clone());
        let sc = vec![
            (0..4).map(basis).collect(),
            vec![basis(1), e(0, a.clone()), basis(3), e(2, a.clone())],
            vec![basis(2), e(3, m1.clone()), e(0, b.clone()), e(1, r.neg(b))],
            vec![basis(3), e(2, r.neg(a)), e(1, b.clone()), e(0, r.neg(&ab))],
        ];
        let unit = basis(0);
        FiniteAlgebra {
            ring: r.clone(),
            rank: 4,
            sc,
            unit,
        }
    }

    /// `s = R[X]/(P)` as an algebra over R with basis 1, x, …, x^{d−1}.
    pub fn from_monic_quotient(s: &Ring) -> Result<FiniteAlgebra> {
        let (Some(d), Some(r)) = (s.quotient_degree(), s.parent()) else {
            return Err(Error::InvalidAlgebra(format!(
                "{} is not a monic quotient",
                s.describe()
            )));
        };
        let x = s.generator().unwrap();
        let powers: Vec<Elem> = (0..2 * d).map(|i| s.pow(&x, i as u64)).collect();
        let sc = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| s.coords_over(r, &powers[i + j]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = s.coords_over(r, &s.one())?;
        Ok(FiniteAlgebra {
            ring: r.clone(),
            rank: d,
            sc,
            unit,
        })
    }

    pub fn opposite(&self) -> FiniteAlgebra {
        let r = self.rank;
        let sc = (0..r)
            .map(|i| (0..r).map(|j| self.sc[j][i].clone()).collect())
            .collect();
        FiniteAlgebra {
            ring: self.ring.clone(),
            rank: r,
            sc,
            unit: self.unit.clone(),
        }
    }

    /// `A ⊗ B` with basis `x_i ⊗ y_p` at index `i·rank(B) + p`.
    pub fn tensor(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if !self.ring.same(&other.ring) {
            return Err(Error::BaseRingMismatch);
        }
        let r = &self.ring;
        let (ra, rb) = (self.rank, other.rank);
        let n = ra * rb;
        let mut sc = vec![vec![vec![r.zero(); n]; n]; n];
        for i in 0..ra {
            for p in 0..rb {
                for j in 0..ra {
                    for q in 0..rb {
                        let slot = &mut sc[i * rb + p][j * rb + q];
                        for k in 0..ra {
                            let a = &self.sc[i][j][k];
                            if r.is_zero(a) {
                                continue;
                            }
                            for s in 0..rb {
                                slot[k * rb + s] = r.mul(a, &other.sc[p][q][s]);
                            }
                        }
                    }
                }
            }
        }
        let mut unit = Vec::with_capacity(n);
        for a in &self.unit {
            for b in &other.unit {
                unit.push(r.mul(a, b));
            }
        }
        Ok(FiniteAlgebra {
            ring: r.clone(),
            rank: n,
            sc,
            unit,
        })
    }

    /// Extension of scalars along a tower inclusion `ring → target`.
    pub fn base_change(&self, target: &Ring) -> Result<FiniteAlgebra> {
        match target.ancestor(self.ring.depth()) {
            Some(a) if a.same(&self.ring) => {}
            _ => return Err(Error::BaseRingMismatch),
        }
        let emb = |x: &Elem| target.embed(&self.ring, x);
        let sc = self
            .sc
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(emb).collect()).collect())
            .collect();
        let unit = self.unit.iter().map(emb).collect();
        Ok(FiniteAlgebra {
            ring: target.clone(),
            rank: self.rank,
            sc,
            unit,
        })
    }

    /// The same algebra in a new basis, given by coordinates in the old one.
    pub fn rebase(&self, new_basis: &[Vec<Elem>]) -> Result<FiniteAlgebra> {
        if new_basis.len() != self.rank {
            return Err(Error::InvalidAlgebra("a basis needs rank-many elements".into()));
        }
        let coords = |x: &[Elem]| -> Result<Vec<Elem>> {
            self.coordinates_in(new_basis, x)?
                .ok_or_else(|| Error::InvalidAlgebra("vectors do not form a basis".into()))
        };
        let sc = new_basis
            .iter()
            .map(|a| {
                new_basis
                    .iter()
                    .map(|b| coords(&self.mul(a, b)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = coords(&self.unit)?;
        let m: Matrix = transpose(new_basis, self.rank);
        if !self.ring.is_invertible(&determinant(&self.ring, &m)) {
            return Err(Error::InvalidAlgebra("vectors do not form a basis".into()));
        }
        FiniteAlgebra::new(&self.ring, sc, unit)
    }
}

/// Turns a list of columns into a row-major matrix with `rows` rows.
pub fn transpose(cols: &[Vec<Elem>], rows: usize) -> Matrix {
    (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Matrix of `A ⊗ A^op → End(A)`: entry `[k·r + l][a·r + b]` is the k-th
/// coordinate of `x_a·x_l·x_b`.
pub fn canonical_map_matrix(alg: &FiniteAlgebra) -> Matrix {
    let r = alg.rank();
    let ring = alg.ring();
    let mut m = vec![vec![ring.zero(); r * r]; r * r];
    for a in 0..r {
        for l in 0..r {
            let al = alg.mul_basis(a, l);
            for b in 0..r {
                let alb = alg.mul(&al, &alg.basis(b));
                for (k, c) in alb.into_iter().enumerate() {
                    m[k * r + l][a * r + b] = c;
                }
            }
        }
    }
    m
}

/// Determinant of the canonical map and its inverse when it is a unit.
#[derive(Clone, Debug)]
pub struct AzumayaWitness {
    pub determinant: Elem,
    pub inverse: Option<Elem>,
}

impl AzumayaWitness {
    pub fn is_azumaya(&self) -> bool {
        self.inverse.is_some()
    }
}

pub fn azumaya_witness(alg: &FiniteAlgebra) -> Result<AzumayaWitness> {
    let ring = alg.ring();
    let det = determinant(ring, &canonical_map_matrix(alg));
    let inverse = ring.try_inverse(&det);
    Ok(AzumayaWitness {
        determinant: det,
        inverse,
    })
}

/// Is the canonical map an isomorphism? The trivial algebra counts.
pub fn is_azumaya(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(azumaya_witness(alg)?.is_azumaya())
}

/// Module generators of `{a : a·x = x·a for all x}`.
pub fn center(alg: &FiniteAlgebra) -> Result<Vec<Vec<Elem>>> {
    let r = alg.rank();
    if r == 0 {
        return Ok(vec![]);
    }
    let cols: Vec<Vec<Elem>> = (0..r)
        .map(|i| {
            (0..r)
                .flat_map(|j| alg.sub(&alg.mul_basis(i, j), &alg.mul_basis(j, i)))
                .collect()
        })
        .collect();
    let gens = kernel_module(alg.ring(), &cols)?;
    Ok(gens.into_iter().filter(|g| !alg.is_zero(g)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_units_multiply() {
        let q = Ring::rationals();
        let m2 = FiniteAlgebra::matrix_algebra(&q, 2);
        assert!(FiniteAlgebra::new(&q, m2.sc.clone(), m2.unit.clone()).is_ok());
        assert!(m2.equal(&m2.mul_basis(1, 2), &m2.basis(0)));
        assert!(m2.equal(&m2.mul_basis(0, 0), &m2.basis(0)));
        assert!(m2.is_zero(&m2.mul_basis(0, 3)));
    }

    #[test]
    fn quaternions_are_associative() {
        let q = Ring::rationals();
        let h = FiniteAlgebra::quaternion(&q, &q.from_int(-1), &q.from_int(-1));
        assert!(FiniteAlgebra::new(&q, h.sc.clone(), h.unit.clone()).is_ok());
        assert!(is_azumaya(&h).unwrap());
    }

    #[test]
    fn dual_numbers_are_not_azumaya() {
        let q = Ring::rationals();
        let s = q.quotient("e", vec![q.zero(), q.zero(), q.one()]).unwrap();
        let a = FiniteAlgebra::from_monic_quotient(&s).unwrap();
        let w = azumaya_witness(&a).unwrap();
        assert!(q.is_zero(&w.determinant));
        assert_eq!(center(&a).unwrap().len(), 2);
    }

    #[test]
    fn center_of_matrices_is_scalar() {
        let z9 = Ring::zmod_pk(3, 2).unwrap();
        let m2 = FiniteAlgebra::matrix_algebra(&z9, 2);
        let c = center(&m2).unwrap();
        assert_eq!(c.len(), 1);
        assert!(z9.is_invertible(&c[0][0]));
        assert!(m2.equal(&m2.scale(&c[0][0], &m2.one()), &c[0]));
    }

    #[test]
    fn tensor_rank_and_identity() {
        let f5 = Ring::prime_field(5).unwrap();
        let m2 = FiniteAlgebra::matrix_algebra(&f5, 2);
        assert_eq!(m2.tensor(&m2).unwrap().rank(), 16);
        let t = m2.tensor(&FiniteAlgebra::base(&f5)).unwrap();
        assert_eq!(t.structure_constants(), m2.structure_constants());
    }

    #[test]
    fn inverse_in_matrix_algebra() {
        let z9 = Ring::zmod_pk(3, 2).unwrap();
        let m2 = FiniteAlgebra::matrix_algebra(&z9, 2);
        let a: Vec<Elem> = [1, 1, 0, 1].iter().map(|&x| z9.from_int(x)).collect();
        let b = m2.inverse(&a).unwrap();
        assert!(m2.equal(&m2.mul(&a, &b), &m2.one()));
        let n: Vec<Elem> = [3, 0, 0, 1].iter().map(|&x| z9.from_int(x)).collect();
        assert_eq!(m2.inverse(&n).unwrap_err(), Error::NotInvertible);
    }
}

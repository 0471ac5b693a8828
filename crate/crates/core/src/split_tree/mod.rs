//! Splitting-tree certificates: covers by localizations, root adjunctions,
//! and matrix-unit witnesses at the leaves.

mod build;
mod skolem;

pub use build::{
    build_tree, quaternion_leaf_units, split_over_finite_field, split_over_finite_local, Family, DEFAULT_RETRY_BUDGET,
};
pub use skolem::{check_automorphism, skolem_noether_matrix, skolem_noether_module, SkolemNoetherModule};

use crate::algebra::{transpose, FiniteAlgebra};
use crate::decomp::{is_unramifiable, DEFAULT_MAX_DEGREE};
use crate::error::Result;
use crate::poly::Poly;
use crate::ring::linalg::{determinant, unit_ideal_test};
use crate::ring::{Elem, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Etale,
    Fppf,
}

/// Matrix units `e_ij` (stored at index `i·n + j`) as coordinate vectors.
#[derive(Clone, Debug)]
pub struct MatrixUnitWitness {
    pub n: usize,
    pub units: Vec<Vec<Elem>>,
}

impl MatrixUnitWitness {
    pub fn unit(&self, i: usize, j: usize) -> &[Elem] {
        &self.units[i * self.n + j]
    }
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    Leaf(MatrixUnitWitness),
    Cover { units: Vec<Elem>, children: Vec<TreeNode> },
    Adjoin { poly: Poly, child: Box<TreeNode> },
}

/// A node, optionally restating the algebra it carries (checked against base change).
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub algebra: Option<FiniteAlgebra>,
    pub kind: NodeKind,
}

impl TreeNode {
    pub fn leaf(witness: MatrixUnitWitness) -> TreeNode {
        TreeNode {
            algebra: None,
            kind: NodeKind::Leaf(witness),
        }
    }

    pub fn cover(units: Vec<Elem>, children: Vec<TreeNode>) -> TreeNode {
        TreeNode {
            algebra: None,
            kind: NodeKind::Cover { units, children },
        }
    }

    pub fn adjoin(poly: Poly, child: TreeNode) -> TreeNode {
        TreeNode {
            algebra: None,
            kind: NodeKind::Adjoin {
                poly,
                child: Box::new(child),
            },
        }
    }

    pub fn with_algebra(mut self, algebra: FiniteAlgebra) -> TreeNode {
        self.algebra = Some(algebra);
        self
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            NodeKind::Leaf(_) => "leaf",
            NodeKind::Cover { .. } => "cover",
            NodeKind::Adjoin { .. } => "adjoin",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SplitTree {
    pub mode: Mode,
    pub ring: Ring,
    pub algebra: FiniteAlgebra,
    pub node: TreeNode,
}

/// First failing check: where (e.g. `node.child.children[1]`), what kind of node, and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub path: String,
    pub kind: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub checked_nodes: usize,
    pub failure: Option<Failure>,
}

/// Ring obtained by the `i`-th root adjunction along a path.
pub fn adjoin_ring(ring: &Ring, poly: &Poly, level: usize) -> Result<Ring> {
    ring.quotient(&format!("x{level}"), poly.coeffs().to_vec())
}

/// Checks every node of the tree; stops at the first failure.
pub fn verify_tree(tree: &SplitTree) -> VerifyReport {
    let mut checked = 0;
    let failure = if !tree.algebra.ring().same(&tree.ring) {
        Some(Failure {
            path: "algebra".into(),
            kind: "root".into(),
            reason: "root algebra is not over the root ring".into(),
        })
    } else {
        verify_node(
            tree.mode,
            &tree.ring,
            &tree.algebra,
            &tree.node,
            "node",
            0,
            &mut checked,
        )
        .err()
    };
    VerifyReport {
        valid: failure.is_none(),
        checked_nodes: checked,
        failure,
    }
}

type Check = std::result::Result<(), Failure>;

fn verify_node(
    mode: Mode,
    ring: &Ring,
    algebra: &FiniteAlgebra,
    node: &TreeNode,
    path: &str,
    adjoins: usize,
    checked: &mut usize,
) -> Check {
    *checked += 1;
    let fail = |reason: String| Failure {
        path: path.to_string(),
        kind: node.kind_name().into(),
        reason,
    };
    if let Some(declared) = &node.algebra {
        if !same_algebra(declared, algebra) {
            return Err(fail("algebra is not the base change of its parent".into()));
        }
    }
    match &node.kind {
        NodeKind::Leaf(w) => check_witness(algebra, w).map_err(fail),
        NodeKind::Cover { units, children } => {
            if units.len() != children.len() {
                return Err(fail(format!("{} units but {} children", units.len(), children.len())));
            }
            match unit_ideal_test(ring, units) {
                Ok(Some(_)) => {}
                Ok(None) => return Err(fail("cover units do not generate the unit ideal".into())),
                Err(e) => return Err(fail(format!("unit ideal test failed: {e}"))),
            }
            for (i, (u, child)) in units.iter().zip(children).enumerate() {
                let sub = ring
                    .localize(u.clone())
                    .map_err(|e| fail(format!("cannot localize at unit {i}: {e}")))?;
                let alg = algebra.base_change(&sub).map_err(|e| fail(e.to_string()))?;
                verify_node(
                    mode,
                    &sub,
                    &alg,
                    child,
                    &format!("{path}.children[{i}]"),
                    adjoins,
                    checked,
                )?;
            }
            Ok(())
        }
        NodeKind::Adjoin { poly, child } => {
            if !poly.is_monic(ring) || poly.degree().unwrap_or(0) == 0 {
                return Err(fail("adjoined polynomial must be monic and nonconstant".into()));
            }
            if mode == Mode::Etale {
                match is_unramifiable(ring, poly, DEFAULT_MAX_DEGREE) {
                    Ok(u) if u.unramifiable => {}
                    Ok(_) => return Err(fail(format!("{} is not unramifiable", poly.show(ring)))),
                    Err(e) => return Err(fail(format!("unramifiability test failed: {e}"))),
                }
            }
            let sub = adjoin_ring(ring, poly, adjoins + 1).map_err(|e| fail(e.to_string()))?;
            let alg = algebra.base_change(&sub).map_err(|e| fail(e.to_string()))?;
            verify_node(mode, &sub, &alg, child, &format!("{path}.child"), adjoins + 1, checked)
        }
    }
}

fn same_algebra(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    let r = b.ring();
    a.ring().same(r)
        && a.rank() == b.rank()
        && b.equal(a.unit(), b.unit())
        && a.structure_constants()
            .iter()
            .flatten()
            .zip(b.structure_constants().iter().flatten())
            .all(|(x, y)| b.equal(x, y))
}

/// Checks all n⁴ relations `e_ij·e_kl = δ_jk·e_il`, `Σ e_ii = 1`, and that
/// the units form a basis.
pub fn check_witness(algebra: &FiniteAlgebra, w: &MatrixUnitWitness) -> std::result::Result<(), String> {
    let n = w.n;
    let r = algebra.rank();
    if w.units.len() != n * n {
        return Err(format!("expected {} matrix units, found {}", n * n, w.units.len()));
    }
    if n * n != r {
        return Err(format!("{n}×{n} matrix units cannot span an algebra of rank {r}"));
    }
    if let Some(i) = w.units.iter().position(|u| u.len() != r) {
        return Err(format!("matrix unit {i} has the wrong length"));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let prod = algebra.mul(w.unit(i, j), w.unit(k, l));
                    let expected = if j == k { w.unit(i, l).to_vec() } else { algebra.zero() };
                    if !algebra.equal(&prod, &expected) {
                        return Err(format!(
                            "e{}{}·e{}{} ≠ {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1,
                            if j == k {
                                format!("e{}{}", i + 1, l + 1)
                            } else {
                                "0".into()
                            }
                        ));
                    }
                }
            }
        }
    }
    let diag_sum = (0..n).fold(algebra.zero(), |acc, i| algebra.add(&acc, w.unit(i, i)));
    if !algebra.equal(&diag_sum, algebra.unit()) {
        return Err("Σ e_ii ≠ 1".into());
    }
    let ring = algebra.ring();
    let det = determinant(ring, &transpose(&w.units, r));
    if !ring.is_invertible(&det) {
        return Err("matrix units are not a basis".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::check_local;

    fn conj_matrix(alg: &FiniteAlgebra, c: &[Elem]) -> Vec<Vec<Elem>> {
        let ci = alg.inverse(c).unwrap();
        let cols: Vec<Vec<Elem>> = (0..alg.rank())
            .map(|j| alg.mul(&alg.mul(c, &alg.basis(j)), &ci))
            .collect();
        transpose(&cols, alg.rank())
    }

    #[test]
    fn quaternions_over_z_half_split_after_adjoining_i() {
        let z = Ring::integers();
        let r = z.localize(z.from_int(2)).unwrap();
        let m1 = r.from_int(-1);
        let h = FiniteAlgebra::quaternion(&r, &m1, &m1);
        let t = build_tree(&h, Some(Family::Quaternion), Mode::Etale, 1).unwrap();
        assert!(matches!(t.node.kind, NodeKind::Adjoin { .. }));
        assert!(verify_tree(&t).valid);
    }

    #[test]
    fn quaternions_over_z9_split_at_a_single_leaf() {
        let r = Ring::zmod_pk(3, 2).unwrap();
        let m1 = r.from_int(-1);
        let h = FiniteAlgebra::quaternion(&r, &m1, &m1);
        let t = build_tree(&h, None, Mode::Etale, 7).unwrap();
        assert!(matches!(t.node.kind, NodeKind::Leaf(_)));
        assert!(verify_tree(&t).valid);
    }

    #[test]
    fn scrambled_m2_over_z25() {
        let r = Ring::zmod_pk(5, 2).unwrap();
        let m2 = FiniteAlgebra::matrix_algebra(&r, 2);
        let basis: Vec<Vec<Elem>> = [[1, 2, 0, 1], [0, 1, 3, 0], [0, 0, 1, 4], [1, 0, 0, 1]]
            .iter()
            .map(|v| v.iter().map(|&x| r.from_int(x)).collect())
            .collect();
        let scrambled = m2.rebase(&basis).unwrap();
        let cert = check_local(&r).unwrap();
        let w = split_over_finite_local(&scrambled, &cert, 3).unwrap();
        assert!(check_witness(&scrambled, &w).is_ok());
    }

    #[test]
    fn cover_of_m2_over_z() {
        let z = Ring::integers();
        let m2 = FiniteAlgebra::matrix_algebra(&z, 2);
        let leaf = |u: i64| {
            let s = z.localize(z.from_int(u)).unwrap();
            let alg = m2.base_change(&s).unwrap();
            TreeNode::leaf(MatrixUnitWitness {
                n: 2,
                units: (0..4).map(|i| alg.basis(i)).collect(),
            })
        };
        let good = SplitTree {
            mode: Mode::Etale,
            ring: z.clone(),
            algebra: m2.clone(),
            node: TreeNode::cover(vec![z.from_int(2), z.from_int(3)], vec![leaf(2), leaf(3)]),
        };
        assert!(verify_tree(&good).valid);
        let mut bad = good.clone();
        bad.node = TreeNode::cover(vec![z.from_int(2), z.from_int(4)], vec![leaf(2), leaf(4)]);
        let report = verify_tree(&bad);
        assert_eq!(report.failure.unwrap().path, "node");
    }

    #[test]
    fn finite_field_split_of_quaternions_mod_5() {
        let f5 = Ring::prime_field(5).unwrap();
        let h = FiniteAlgebra::quaternion(&f5, &f5.from_int(-1), &f5.from_int(-1));
        let w = split_over_finite_field(&h, 11, DEFAULT_RETRY_BUDGET).unwrap();
        assert_eq!(w.n, 2);
    }

    #[test]
    fn skolem_noether_recovers_conjugation() {
        let r = Ring::zmod_pk(3, 2).unwrap();
        let cert = check_local(&r).unwrap();
        let m2 = FiniteAlgebra::matrix_algebra(&r, 2);
        let w = MatrixUnitWitness {
            n: 2,
            units: (0..4).map(|i| m2.basis(i)).collect(),
        };
        let c: Vec<Elem> = [1, 1, 0, 1].iter().map(|&x| r.from_int(x)).collect();
        let psi = conj_matrix(&m2, &c);
        let a = skolem_noether_matrix(&m2, &w, &psi, &cert).unwrap();
        // a·c⁻¹ is central
        let q = m2.mul(&a, &m2.inverse(&c).unwrap());
        for t in 0..4 {
            let x = m2.basis(t);
            assert!(m2.equal(&m2.mul(&q, &x), &m2.mul(&x, &q)));
        }
        let module = skolem_noether_module(&m2, &psi, Some(&cert)).unwrap();
        assert_eq!(module.rank, Some(1));
        assert!(module.unit_generator.is_some());
    }
}

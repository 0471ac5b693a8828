//! JSON encodings of rings, elements, polynomials, algebras and splitting trees.
//!
//! Scalars are decimal strings (`"a/b"` over ℚ); JSON integers are accepted on
//! input. Quotient elements are coefficient arrays, degree 0 first.
//! Localization elements are `{"num": x, "exp": e}` meaning `x / u^e`; a bare
//! inner element is accepted as `exp = 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{BaseRing, Elem, ExtensionStep, Ring};
use crate::split_tree::{adjoin_ring, MatrixUnitWitness, Mode, NodeKind, SplitTree, TreeNode, VerifyReport};

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(path, format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn usize_of(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(path, "expected a nonnegative integer"))
}

fn str_of<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(path, "expected a string"))
}

fn bigint_of(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().unwrap()),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| bad(path, format!("invalid integer \"{s}\""))),
        _ => Err(bad(path, "expected an integer")),
    }
}

fn rational_of(v: &Value, path: &str) -> Result<BigRational> {
    let Value::String(s) = v else {
        return Ok(BigRational::from_integer(bigint_of(v, path)?));
    };
    let invalid = || bad(path, format!("invalid rational \"{s}\""));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| invalid())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = d.trim().parse().map_err(|_| invalid())?;
            if d == BigInt::from(0) {
                return Err(bad(path, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

// ---- elements ----

pub fn elem_to_json(x: &Elem) -> Value {
    match x {
        Elem::Int(n) => Value::String(n.to_string()),
        Elem::Rat(q) => Value::String(q.to_string()),
        Elem::Poly(cs) => Value::Array(cs.iter().map(elem_to_json).collect()),
        Elem::Frac(a, e) => json!({ "num": elem_to_json(a), "exp": e }),
    }
}

pub fn elem_from_json(ring: &Ring, v: &Value, path: &str) -> Result<Elem> {
    if ring.is_localization() {
        let inner = ring.parent().unwrap();
        if let Value::Object(_) = v {
            let num = elem_from_json(inner, field(v, path, "num")?, &format!("{path}.num"))?;
            let exp = field(v, path, "exp")?
                .as_u64()
                .ok_or_else(|| bad(&format!("{path}.exp"), "expected a nonnegative integer"))?;
            let u = ring.embed(inner, ring.localized_element().unwrap());
            let u_inv = ring.inverse(&u).map_err(|e| bad(path, e))?;
            return Ok(ring.mul(&ring.embed(inner, &num), &ring.pow(&u_inv, exp)));
        }
        return Ok(ring.embed(inner, &elem_from_json(inner, v, path)?));
    }
    if ring.is_quotient() {
        let inner = ring.parent().unwrap();
        let Value::Array(items) = v else {
            return Ok(ring.embed(inner, &elem_from_json(inner, v, path)?));
        };
        let cs = items
            .iter()
            .enumerate()
            .map(|(i, c)| elem_from_json(inner, c, &format!("{path}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        return Ok(ring.from_coeffs(&cs));
    }
    if ring.is_rationals() {
        return Ok(Elem::Rat(rational_of(v, path)?));
    }
    Ok(ring.from_bigint(&bigint_of(v, path)?))
}

pub fn vector_to_json(xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(elem_to_json).collect())
}

pub fn vector_from_json(ring: &Ring, v: &Value, path: &str) -> Result<Vec<Elem>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| elem_from_json(ring, x, &format!("{path}[{i}]")))
        .collect()
}

// ---- polynomials ----

pub fn poly_to_json(p: &Poly) -> Value {
    vector_to_json(p.coeffs())
}

pub fn poly_from_json(ring: &Ring, v: &Value, path: &str) -> Result<Poly> {
    Ok(Poly::new(ring, vector_from_json(ring, v, path)?))
}

// ---- rings ----

pub fn ring_to_json(ring: &Ring) -> Value {
    let d = ring.descriptor();
    let base = match &d.base {
        BaseRing::Integers => json!({ "kind": "integers" }),
        BaseRing::Rationals => json!({ "kind": "rationals" }),
        BaseRing::PrimeField { p } => json!({ "kind": "prime_field", "p": number(p) }),
        BaseRing::IntegersModPrimePower { p, k } => json!({ "kind": "zmod_pk", "p": number(p), "k": k }),
    };
    let steps: Vec<Value> = d
        .steps
        .iter()
        .map(|s| match s {
            ExtensionStep::MonicQuotient { var, modulus } => {
                json!({ "kind": "monic_quotient", "var": var, "modulus": vector_to_json(modulus) })
            }
            ExtensionStep::Localize { u } => json!({ "kind": "localize", "u": elem_to_json(u) }),
        })
        .collect();
    json!({ "base": base, "steps": steps })
}

fn number(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(small) => Value::from(small),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn ring_from_json(v: &Value, path: &str) -> Result<Ring> {
    let bpath = format!("{path}.base");
    let base = field(v, path, "base")?;
    let kind = str_of(field(base, &bpath, "kind")?, &format!("{bpath}.kind"))?;
    let p = || bigint_of(field(base, &bpath, "p")?, &format!("{bpath}.p"));
    let base = match kind {
        "integers" => BaseRing::Integers,
        "rationals" => BaseRing::Rationals,
        "prime_field" => BaseRing::PrimeField { p: p()? },
        "zmod_pk" => {
            let k = usize_of(field(base, &bpath, "k")?, &format!("{bpath}.k"))?;
            BaseRing::IntegersModPrimePower { p: p()?, k: k as u32 }
        }
        other => return Err(bad(&format!("{bpath}.kind"), format!("unknown base ring \"{other}\""))),
    };
    let mut ring = Ring::from_base(&base).map_err(|e| bad(&bpath, e))?;
    let steps = match v.get("steps") {
        None => return Ok(ring),
        Some(s) => array(s, &format!("{path}.steps"))?,
    };
    for (i, step) in steps.iter().enumerate() {
        let spath = format!("{path}.steps[{i}]");
        let kind = str_of(field(step, &spath, "kind")?, &format!("{spath}.kind"))?;
        ring = match kind {
            "monic_quotient" => {
                let var = str_of(field(step, &spath, "var")?, &format!("{spath}.var"))?;
                let modulus = vector_from_json(&ring, field(step, &spath, "modulus")?, &format!("{spath}.modulus"))?;
                ring.quotient(var, modulus).map_err(|e| bad(&spath, e))?
            }
            "localize" => {
                let u = elem_from_json(&ring, field(step, &spath, "u")?, &format!("{spath}.u"))?;
                ring.localize(u).map_err(|e| bad(&spath, e))?
            }
            other => return Err(bad(&format!("{spath}.kind"), format!("unknown step \"{other}\""))),
        };
    }
    Ok(ring)
}

// ---- algebras ----

pub fn algebra_to_json(alg: &FiniteAlgebra) -> Value {
    let sc: Vec<Value> = alg
        .structure_constants()
        .iter()
        .map(|row| Value::Array(row.iter().map(|v| vector_to_json(v)).collect()))
        .collect();
    json!({
        "ring": ring_to_json(alg.ring()),
        "rank": alg.rank(),
        "sc": sc,
        "unit": vector_to_json(alg.unit()),
    })
}

pub fn algebra_from_json(v: &Value, path: &str) -> Result<FiniteAlgebra> {
    let ring = ring_from_json(field(v, path, "ring")?, &format!("{path}.ring"))?;
    let rank = usize_of(field(v, path, "rank")?, &format!("{path}.rank"))?;
    let unit = vector_from_json(&ring, field(v, path, "unit")?, &format!("{path}.unit"))?;
    if unit.len() != rank {
        return Err(bad(&format!("{path}.unit"), format!("expected {rank} coordinates")));
    }
    let sc_path = format!("{path}.sc");
    let rows = array(field(v, path, "sc")?, &sc_path)?;
    if rows.len() != rank {
        return Err(bad(&sc_path, format!("expected {rank} rows")));
    }
    let mut sc = Vec::with_capacity(rank);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{sc_path}[{i}]");
        let cells = array(row, &rpath)?;
        if cells.len() != rank {
            return Err(bad(&rpath, format!("expected {rank} entries")));
        }
        let mut out = Vec::with_capacity(rank);
        for (j, cell) in cells.iter().enumerate() {
            let cpath = format!("{rpath}[{j}]");
            let xs = vector_from_json(&ring, cell, &cpath)?;
            if xs.len() != rank {
                return Err(bad(&cpath, format!("expected {rank} coordinates")));
            }
            out.push(xs);
        }
        sc.push(out);
    }
    FiniteAlgebra::new(&ring, sc, unit).map_err(|e| bad(path, e))
}

// ---- splitting trees ----

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Etale => "etale",
        Mode::Fppf => "fppf",
    }
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "etale" => Some(Mode::Etale),
        "fppf" => Some(Mode::Fppf),
        _ => None,
    }
}

pub fn tree_to_json(tree: &SplitTree) -> Value {
    json!({
        "mode": mode_name(tree.mode),
        "ring": ring_to_json(&tree.ring),
        "algebra": algebra_to_json(&tree.algebra),
        "node": node_to_json(&tree.node),
    })
}

fn node_to_json(node: &TreeNode) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), node.kind_name().into());
    match &node.kind {
        NodeKind::Leaf(w) => {
            m.insert("n".into(), w.n.into());
            m.insert(
                "units".into(),
                Value::Array(w.units.iter().map(|u| vector_to_json(u)).collect()),
            );
        }
        NodeKind::Cover { units, children } => {
            m.insert("units".into(), vector_to_json(units));
            m.insert(
                "children".into(),
                Value::Array(children.iter().map(node_to_json).collect()),
            );
        }
        NodeKind::Adjoin { poly, child } => {
            m.insert("poly".into(), poly_to_json(poly));
            m.insert("child".into(), node_to_json(child));
        }
    }
    if let Some(alg) = &node.algebra {
        m.insert("algebra".into(), algebra_to_json(alg));
    }
    Value::Object(m)
}

pub fn tree_from_json(v: &Value) -> Result<SplitTree> {
    let mode_str = str_of(field(v, "tree", "mode")?, "mode")?;
    let mode = parse_mode(mode_str).ok_or_else(|| bad("mode", format!("unknown mode \"{mode_str}\"")))?;
    let ring = ring_from_json(field(v, "tree", "ring")?, "ring")?;
    let algebra = algebra_from_json(field(v, "tree", "algebra")?, "algebra")?;
    let node = node_from_json(&ring, field(v, "tree", "node")?, "node", 0)?;
    Ok(SplitTree {
        mode,
        ring,
        algebra,
        node,
    })
}

fn node_from_json(ring: &Ring, v: &Value, path: &str, adjoins: usize) -> Result<TreeNode> {
    let kind = str_of(field(v, path, "kind")?, &format!("{path}.kind"))?;
    let mut node = match kind {
        "leaf" => {
            let n = usize_of(field(v, path, "n")?, &format!("{path}.n"))?;
            let upath = format!("{path}.units");
            let units = array(field(v, path, "units")?, &upath)?
                .iter()
                .enumerate()
                .map(|(i, u)| vector_from_json(ring, u, &format!("{upath}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            TreeNode::leaf(MatrixUnitWitness { n, units })
        }
        "cover" => {
            let units = vector_from_json(ring, field(v, path, "units")?, &format!("{path}.units"))?;
            let cpath = format!("{path}.children");
            let items = array(field(v, path, "children")?, &cpath)?;
            let mut children = Vec::with_capacity(items.len());
            for (i, (u, c)) in units.iter().zip(items).enumerate() {
                let sub = ring
                    .localize(u.clone())
                    .map_err(|e| bad(&format!("{path}.units[{i}]"), e))?;
                children.push(node_from_json(&sub, c, &format!("{cpath}[{i}]"), adjoins)?);
            }
            if items.len() != units.len() {
                return Err(bad(
                    &cpath,
                    format!("{} units but {} children", units.len(), items.len()),
                ));
            }
            TreeNode::cover(units, children)
        }
        "adjoin" => {
            let poly = poly_from_json(ring, field(v, path, "poly")?, &format!("{path}.poly"))?;
            let sub = adjoin_ring(ring, &poly, adjoins + 1).map_err(|e| bad(&format!("{path}.poly"), e))?;
            let child = node_from_json(&sub, field(v, path, "child")?, &format!("{path}.child"), adjoins + 1)?;
            TreeNode::adjoin(poly, child)
        }
        other => return Err(bad(&format!("{path}.kind"), format!("unknown node kind \"{other}\""))),
    };
    if let Some(a) = v.get("algebra") {
        node = node.with_algebra(algebra_from_json(a, &format!("{path}.algebra"))?);
    }
    Ok(node)
}

pub fn report_to_json(report: &VerifyReport) -> Value {
    let failure = match &report.failure {
        None => Value::Null,
        Some(f) => json!({ "path": f.path, "kind": f.kind, "reason": f.reason }),
    };
    json!({ "valid": report.valid, "checked_nodes": report.checked_nodes, "failure": failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_descriptor_round_trip() {
        let v: Value = serde_json::from_str(
            r#"{"base": {"kind": "zmod_pk", "p": 5, "k": 2}, "steps": [{"kind": "monic_quotient", "var": "x", "modulus": [1, 0, 1]}]}"#,
        )
        .unwrap();
        let r = ring_from_json(&v, "ring").unwrap();
        assert_eq!(
            r.describe(),
            Ring::zmod_pk(5, 2)
                .unwrap()
                .quotient("x", vec![Elem::int(1), Elem::int(0), Elem::int(1)])
                .unwrap()
                .describe()
        );
        let back = ring_from_json(&ring_to_json(&r), "ring").unwrap();
        assert!(back.same(&r));
    }

    #[test]
    fn elements_round_trip() {
        let z = Ring::integers();
        let r = z.localize(z.from_int(6)).unwrap();
        let x = r.inverse(&r.from_int(4)).unwrap();
        let back = elem_from_json(&r, &elem_to_json(&x), "x").unwrap();
        assert!(r.eq(&back, &x));
        let q = Ring::rationals();
        assert_eq!(
            elem_from_json(&q, &json!("-3/6"), "x").unwrap(),
            Elem::Rat(BigRational::new((-1).into(), 2.into()))
        );
        assert_eq!(
            elem_to_json(&Elem::Rat(BigRational::new(3.into(), 1.into()))),
            json!("3")
        );
    }

    #[test]
    fn errors_name_the_field() {
        let v = json!({"base": {"kind": "zmod_pk", "p": 6, "k": 2}});
        let err = ring_from_json(&v, "ring").unwrap_err().to_string();
        assert!(err.contains("ring.base"), "{err}");
        let v = json!({"base": {"kind": "integers"}, "steps": [{"kind": "monic_quotient", "var": "x", "modulus": [1, "a"]}]});
        let err = ring_from_json(&v, "ring").unwrap_err().to_string();
        assert!(err.contains("ring.steps[0].modulus[1]"), "{err}");
    }
}

mod common;

use azumaya::algebra::{is_azumaya, FiniteAlgebra};
use azumaya::decomp::{zariski_eq, zariski_leq, ZariskiElement};
use azumaya::json::{elem_from_json, elem_to_json};
use azumaya::split_tree::{build_tree, verify_tree, Mode};
use azumaya::{Elem, Poly, Ring};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rings() -> Vec<Ring> {
    vec![
        Ring::rationals(),
        Ring::prime_field(5).unwrap(),
        f4(),
        zmod(5, 2),
        zmod(3, 3),
        z_loc(6),
        z9_i(),
    ]
}

fn triple(r: &Ring, seed: u64) -> (Elem, Elem, Elem) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        r.random_elem(&mut rng, 20),
        r.random_elem(&mut rng, 20),
        r.random_elem(&mut rng, 20),
    )
}

fn rand_poly(r: &Ring, seed: u64, degree: usize) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Poly::new(r, (0..=degree).map(|_| r.random_elem(&mut rng, 9)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutative_ring_axioms(idx in 0usize..7, seed in any::<u64>()) {
        let r = &rings()[idx];
        let (a, b, c) = triple(r, seed);
        prop_assert!(r.eq(&r.add(&a, &b), &r.add(&b, &a)));
        prop_assert!(r.eq(&r.mul(&a, &b), &r.mul(&b, &a)));
        prop_assert!(r.eq(&r.add(&r.add(&a, &b), &c), &r.add(&a, &r.add(&b, &c))));
        prop_assert!(r.eq(&r.mul(&r.mul(&a, &b), &c), &r.mul(&a, &r.mul(&b, &c))));
        prop_assert!(r.eq(&r.mul(&a, &r.add(&b, &c)), &r.add(&r.mul(&a, &b), &r.mul(&a, &c))));
        prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
        prop_assert!(r.eq(&r.mul(&a, &r.one()), &a));
    }

    #[test]
    fn inverses_are_inverses(idx in 0usize..7, seed in any::<u64>()) {
        let r = &rings()[idx];
        let (a, _, _) = triple(r, seed);
        match r.try_inverse(&a) {
            Some(b) => prop_assert!(r.is_one(&r.mul(&a, &b))),
            None => {
                if let Some(true) = r.finite_size().map(|n| n <= 10_000.into()) {
                    prop_assert!(brute_force_inverse(r, &a).is_none());
                }
            }
        }
    }

    #[test]
    fn monic_division(idx in 0usize..7, seed in any::<u64>(), da in 0usize..6, db in 1usize..4) {
        let r = &rings()[idx];
        let a = rand_poly(r, seed, da);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let b = random_monic(r, &mut rng, db, 9);
        let (q, rem) = a.divmod_monic(r, &b).unwrap();
        prop_assert!(q.mul(r, &b).add(r, &rem).eq(r, &a));
        prop_assert!(rem.degree().is_none_or(|d| d < db));
    }

    #[test]
    fn derivative_and_evaluation_are_compatible_with_products(idx in 0usize..7, seed in any::<u64>()) {
        let r = &rings()[idx];
        let f = rand_poly(r, seed, 3);
        let g = rand_poly(r, seed.wrapping_add(1), 2);
        let fg = f.mul(r, &g);
        let rhs = f.derivative(r).mul(r, &g).add(r, &f.mul(r, &g.derivative(r)));
        prop_assert!(fg.derivative(r).eq(r, &rhs));
        let (x, _, _) = triple(r, seed.wrapping_add(2));
        prop_assert!(r.eq(&fg.evaluate(r, &x), &r.mul(&f.evaluate(r, &x), &g.evaluate(r, &x))));
    }

    #[test]
    fn tower_coordinates_round_trip(seed in any::<u64>()) {
        let r = z9_i();
        let base = r.base();
        let (a, _, _) = triple(&r, seed);
        let cs = r.coords_over(&base, &a).unwrap();
        prop_assert!(r.eq(&r.from_coords_over(&base, &cs).unwrap(), &a));
        let c = cs[0].clone();
        prop_assert_eq!(r.extract(&base, &r.embed(&base, &c)), Some(c));
    }

    #[test]
    fn elements_survive_json(idx in 0usize..7, seed in any::<u64>()) {
        let r = &rings()[idx];
        let (a, _, _) = triple(r, seed);
        let back = elem_from_json(r, &elem_to_json(&a), "x").unwrap();
        prop_assert!(r.eq(&back, &a));
    }

    #[test]
    fn zariski_lattice_laws(a in -60i64..60, b in -60i64..60, c in -60i64..60, ring in 0usize..3) {
        let r = [Ring::integers(), zmod(2, 4), z_loc(6)][ring].clone();
        let d = |x: i64| ZariskiElement::principal(&r, r.from_int(x));
        let (da, db, dc) = (d(a), d(b), d(c));
        prop_assert!(zariski_eq(&da.join(&db), &db.join(&da)).unwrap());
        prop_assert!(zariski_eq(&da.meet(&db), &db.meet(&da)).unwrap());
        prop_assert!(zariski_eq(&da.join(&da.meet(&db)), &da).unwrap());
        prop_assert!(zariski_eq(&da.meet(&da.join(&db)), &da).unwrap());
        prop_assert!(zariski_eq(&da.meet(&db.join(&dc)), &da.meet(&db).join(&da.meet(&dc))).unwrap());
        prop_assert!(zariski_leq(&da.meet(&db), &da).unwrap());
        prop_assert!(zariski_leq(&ZariskiElement::bottom(&r), &da).unwrap());
        prop_assert!(zariski_leq(&da, &ZariskiElement::top(&r)).unwrap());
        // D(ab) = D(a) ∧ D(b)
        prop_assert!(zariski_eq(&d(a * b), &da.meet(&db)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scrambled_matrix_algebras_split_over_finite_fields(seed in any::<u64>(), p in prop::sample::select(vec![2i64, 3, 5]), n in 1usize..4) {
        let f = Ring::prime_field(p).unwrap();
        let m = FiniteAlgebra::matrix_algebra(&f, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_unit(&m, &mut rng);
        // Basis c·e_ij, an invertible change of coordinates.
        let basis: Vec<Vec<Elem>> = (0..m.rank()).map(|i| m.mul(&c, &m.basis(i))).collect();
        let scrambled = m.rebase(&basis).unwrap();
        prop_assert!(is_azumaya(&scrambled).unwrap());
        let tree = build_tree(&scrambled, None, Mode::Etale, seed).unwrap();
        prop_assert!(verify_tree(&tree).valid);
    }
}

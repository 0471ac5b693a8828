use super::*;

#[test]
fn zmod25_has_25_elements() {
    let r = Ring::zmod_pk(5, 2).unwrap();
    assert_eq!(r.finite_size(), Some(BigInt::from(25)));
    assert!(r.is_zero(&r.from_int(25)));
}

#[test]
fn non_prime_and_non_monic_rejected() {
    assert!(matches!(Ring::prime_field(6), Err(Error::NonPrimeModulus(_))));
    let z = Ring::integers();
    assert_eq!(
        z.quotient("x", vec![z.one(), z.from_int(2)]).unwrap_err(),
        Error::NonMonicModulus
    );
    assert_eq!(z.localize(Elem::int(0)).unwrap_err(), Error::ZeroLocalization);
    let z25 = Ring::zmod_pk(5, 2).unwrap();
    assert_eq!(z25.localize(Elem::int(5)).unwrap_err(), Error::ZeroLocalization);
}

#[test]
fn f4_every_nonzero_element_invertible() {
    let f2 = Ring::prime_field(2).unwrap();
    let f4 = f2.quotient("t", vec![f2.one(), f2.one(), f2.one()]).unwrap();
    let elems = f4.elements().unwrap();
    assert_eq!(elems.len(), 4);
    for x in &elems {
        if f4.is_zero(x) {
            assert!(!f4.is_invertible(x));
        } else {
            let y = f4.inverse(x).unwrap();
            assert!(f4.is_one(&f4.mul(x, &y)));
        }
    }
    let t = f4.generator().unwrap();
    let m = f4.add(&f4.add(&f4.mul(&t, &t), &t), &f4.one());
    assert!(f4.is_zero(&m));
}

#[test]
fn localized_integers_cross_multiply() {
    let r = Ring::integers().localize(Elem::int(6)).unwrap();
    let four_sixths = Elem::Frac(Box::new(Elem::int(4)), 1);
    // 2/3 = 4/6
    let two_thirds = r.mul(&r.from_int(2), &r.inverse(&r.from_int(3)).unwrap());
    assert!(r.is_zero(&r.sub(&four_sixths, &two_thirds)));
    let inv4 = r.inverse(&r.from_int(4)).unwrap();
    assert!(r.eq(&inv4, &Elem::Frac(Box::new(Elem::int(9)), 2)));
    assert!(!r.is_invertible(&r.from_int(5)));
}

#[test]
fn zmod25_inverses() {
    let r = Ring::zmod_pk(5, 2).unwrap();
    assert_eq!(r.inverse(&r.from_int(7)).unwrap(), r.from_int(18));
    assert!(!r.is_invertible(&r.from_int(5)));
}

#[test]
fn localization_over_quotient_uses_annihilators() {
    // 𝔽_5[x]/(x² − x)[1/x] ≅ 𝔽_5: (1 − x) becomes zero, x becomes one
    let f5 = Ring::prime_field(5).unwrap();
    let q = f5.quotient("x", vec![f5.zero(), f5.from_int(-1), f5.one()]).unwrap();
    let x = q.generator().unwrap();
    let l = q.localize(x.clone()).unwrap();
    let xl = l.embed(&q, &x);
    assert!(l.is_zero(&l.sub(&l.one(), &xl)));
    assert!(l.is_invertible(&xl));
    let inv = l.inverse(&xl).unwrap();
    assert!(l.is_one(&l.mul(&inv, &xl)));
}

#[test]
fn quotient_over_localization_inverse() {
    // ℤ[1/2][x]/(x² + 1): 1 + x has norm 2, a unit
    let r = Ring::integers().localize(Elem::int(2)).unwrap();
    let s = r.quotient("x", vec![r.one(), r.zero(), r.one()]).unwrap();
    let a = s.add(&s.one(), &s.generator().unwrap());
    let inv = s.inverse(&a).unwrap();
    assert!(s.is_one(&s.mul(&a, &inv)));
    let b = s.add(&s.from_int(3), &s.generator().unwrap());
    assert!(!s.is_invertible(&b));
}

#[test]
fn unit_search_in_localized_integer_tower() {
    // in ℤ[x]/(x² + 1) localized at 2, 1 + x divides 2
    let z = Ring::integers();
    let s = z.quotient("x", vec![z.one(), z.zero(), z.one()]).unwrap();
    let l = s.localize(s.from_int(2)).unwrap();
    let a = l.embed(&s, &s.add(&s.one(), &s.generator().unwrap()));
    let inv = l.inverse(&a).unwrap();
    assert!(l.is_one(&l.mul(&a, &inv)));
}

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rcf_core::abgroup::Subgroup;
use rcf_core::chars::{conductor, extend_to_group, Character};
use rcf_core::qfield::{Ideal, QuadField, QuadInt};
use rcf_core::rayclass::{omega_of, principal_part_bruteforce, ModulusTower, RayClassGroup};
use rcf_core::siegel::siegel_g;
use rcf_core::bigcomplex::BigComplex;

const CASES: [(i64, u64); 8] = [(-3, 7), (-4, 5), (-4, 6), (-7, 8), (-11, 3), (-15, 4), (-23, 6), (-20, 9)];

fn case() -> impl Strategy<Value = (i64, u64)> {
    prop::sample::select(CASES.to_vec())
}

fn rcg(d: i64, m: u64) -> RayClassGroup {
    let f = QuadField::new(d).unwrap();
    RayClassGroup::new(&f, &Ideal::rational(&f, m).unwrap()).unwrap()
}

#[test]
fn order_formula() {
    // |Cl_f| = h * #(O/f)^x / #(unit image)
    for (d, m) in CASES {
        let g = rcg(d, m);
        let f = g.field();
        let h = g.class_group().class_number() as u64;
        let units = f.w() as u64 / omega_of(f, g.modulus()) as u64;
        assert_eq!(g.order(), h * g.ring().phi() / units, "d={d} f={m}");
        assert_eq!(principal_part_bruteforce(f, g.modulus()).unwrap() * h, g.order());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_map_is_multiplicative((d, m) in case(), x in (-30i64..30, -30i64..30), y in (-30i64..30, -30i64..30)) {
        let g = rcg(d, m);
        let f = g.field().clone();
        let (x, y) = (QuadInt::new(x.0, x.1), QuadInt::new(y.0, y.1));
        let xy = f.mul(&x, &y);
        let ok = |z: &QuadInt| !z.is_zero() && Ideal::principal(&f, z).unwrap().coprime(g.modulus()).unwrap();
        prop_assume!(ok(&x) && ok(&y));
        let cx = g.class_of_element(&x).unwrap();
        let cy = g.class_of_element(&y).unwrap();
        prop_assert_eq!(g.class_of_element(&xy).unwrap(), g.group().add(&cx, &cy));
        let via_ideal = g.class_of_ideal(&Ideal::principal(&f, &x).unwrap()).unwrap();
        prop_assert_eq!(via_ideal, cx);
    }

    #[test]
    fn representatives_land_in_their_class((d, m) in case(), i in any::<u64>()) {
        let g = rcg(d, m);
        let c = g.group().element_at(i % g.order());
        prop_assert_eq!(g.class_of_ideal(g.representative(&c)).unwrap(), c);
    }

    #[test]
    fn characters_extend((d, m) in case(), i in any::<u64>(), e in any::<u64>()) {
        let g = rcg(d, m);
        let grp = g.group().clone();
        let h = Subgroup::generated(&grp, &[grp.element_at(i % grp.order())]).unwrap();
        let exps: Vec<u64> = grp.invariants().iter().map(|n| e % n).collect();
        let chi = Character::new(&grp, exps).unwrap().restrict(&h);
        let ext = extend_to_group(&chi).unwrap();
        for x in h.elements() {
            prop_assert_eq!(Some(ext.value(&x)), chi.value(&x));
        }
        // [G:H] extensions of each character of H
        let agrees = |c: &Character| h.elements().all(|x| Some(c.value(&x)) == chi.value(&x));
        let count = Character::all(&grp).filter(agrees).count() as u64;
        prop_assert_eq!(count, grp.order() / h.order());
    }

    #[test]
    fn conductor_is_minimal((d, m) in case(), e in any::<u64>()) {
        let g = rcg(d, m);
        let grp = g.group().clone();
        let exps: Vec<u64> = grp.invariants().iter().map(|n| e % n).collect();
        let chi = Character::new(&grp, exps).unwrap();
        let t = ModulusTower::new(g).unwrap();
        let c = conductor(&t, &chi).unwrap();
        for l in t.levels() {
            let factors = chi.is_trivial_on(&l.kernel);
            prop_assert_eq!(factors, c.modulus.divides(&l.modulus).unwrap(), "level {}", l.modulus);
        }
    }

    #[test]
    fn siegel_doubling(a in 1i64..12, b in 0i64..12, n in 2i64..13, t in 0i64..8) {
        prop_assume!(a % n != 0 || b % n != 0);
        let r1 = BigRational::new(BigInt::from(a), BigInt::from(n));
        let r2 = BigRational::new(BigInt::from(b), BigInt::from(n));
        let tau = BigComplex::from_f64(300, t as f64 / 16.0, 0.9 + t as f64 / 8.0);
        let lo = siegel_g(&r1, &r2, &tau, 96).unwrap();
        let hi = siegel_g(&r1, &r2, &tau, 192).unwrap();
        let rel = hi.sub(&lo.with_prec(192)).log2_abs() - hi.log2_abs();
        prop_assert!(rel < -90.0, "rel {rel}");
    }
}

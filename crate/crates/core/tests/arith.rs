use proptest::prelude::*;
use rcf_core::abgroup::{decompose, FinAbGroup, Subgroup};
use rcf_core::clgroup::{class_number_bruteforce, form_of_ideal, ClassGroup};
use rcf_core::qfield::{factor_ideal, principal_generator, Ideal, QuadField, QuadInt};

const DISCS: [i64; 10] = [-3, -4, -7, -8, -11, -15, -20, -23, -47, -84];

fn disc() -> impl Strategy<Value = i64> {
    prop::sample::select(DISCS.to_vec())
}

fn element() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..40, -40i64..40).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative(d in disc(), x in element(), y in element()) {
        let f = QuadField::new(d).unwrap();
        let (x, y) = (QuadInt::new(x.0, x.1), QuadInt::new(y.0, y.1));
        prop_assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
    }

    #[test]
    fn principal_ideal_has_generator(d in disc(), x in element()) {
        let f = QuadField::new(d).unwrap();
        let x = QuadInt::new(x.0, x.1);
        let i = Ideal::principal(&f, &x).unwrap();
        prop_assert_eq!(i.norm(), f.norm(&x));
        let g = principal_generator(&f, &i).unwrap();
        prop_assert_eq!(Ideal::principal(&f, &g).unwrap(), i);
    }

    #[test]
    fn factorization_recomposes(d in disc(), n in 2u64..300) {
        let f = QuadField::new(d).unwrap();
        let i = Ideal::rational(&f, n).unwrap();
        let mut prod = Ideal::unit(&f);
        for (p, e) in factor_ideal(&f, &i).unwrap() {
            prod = prod.mul(&p.pow(e)).unwrap();
        }
        prop_assert_eq!(prod, i);
    }

    #[test]
    fn class_of_product(d in disc(), x in element(), y in element(), z in element()) {
        let f = QuadField::new(d).unwrap();
        let cl = ClassGroup::new(&f).unwrap();
        let i = Ideal::from_generators(&f, &[QuadInt::new(x.0, x.1), QuadInt::new(z.0, z.1)]).unwrap();
        let j = Ideal::from_generators(&f, &[QuadInt::new(y.0, y.1), QuadInt::new(z.1, z.0)]).unwrap();
        let ij = i.mul(&j).unwrap();
        prop_assert_eq!(cl.class_index(&ij), cl.compose(cl.class_index(&i), cl.class_index(&j)));
        prop_assert_eq!(form_of_ideal(&f, &i).disc(), d);
    }

    #[test]
    fn decompose_recomposes(mods in prop::collection::vec(2u64..13, 1..4)) {
        // black box: (Z/m1) x (Z/m2) x ... as tuples of residues
        let k = mods.len();
        let gens: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
        let m = mods.clone();
        let dec = decompose(&gens, vec![0; k], move |a, b| {
            a.iter().zip(b).zip(&m).map(|((x, y), q)| (x + y) % q).collect()
        }, 100_000).unwrap();
        prop_assert_eq!(dec.group.order(), mods.iter().product::<u64>());
        for x in &dec.elements {
            let c = dec.coords(x).unwrap();
            prop_assert_eq!(dec.element(&c), x);
        }
    }

    #[test]
    fn join_meet_orders(inv in prop::collection::vec(2u64..9, 1..3), a in any::<u64>(), b in any::<u64>()) {
        let g = FinAbGroup::from_orders(&inv);
        let n = g.order();
        let s = Subgroup::generated(&g, &[g.element_at(a % n)]).unwrap();
        let t = Subgroup::generated(&g, &[g.element_at(b % n)]).unwrap();
        let join = s.join(&t).unwrap();
        let meet = s.intersect(&t).unwrap();
        prop_assert_eq!(join.order() * meet.order(), s.order() * t.order());
        prop_assert!(meet.is_subgroup_of(&s) && s.is_subgroup_of(&join));
    }
}

#[test]
fn class_numbers_match_form_count() {
    for d in DISCS {
        let f = QuadField::new(d).unwrap();
        assert_eq!(ClassGroup::new(&f).unwrap().class_number(), class_number_bruteforce(d), "d={d}");
    }
}

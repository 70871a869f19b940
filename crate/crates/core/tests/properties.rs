use modcat_core::catalog::{self, deligne_product, NAMES};
use modcat_core::condense::{self, verify_condensation, CondenseOptions};
use modcat_core::exchange::ExchangeDocument;
use modcat_core::ribbon::{self, CategorySpec};
use modcat_core::tannakian;
use modcat_core::CycloNum;
use proptest::prelude::*;

fn spec(i: usize) -> CategorySpec {
    catalog::load_named(NAMES[i]).unwrap()
}

fn names_of(s: &CategorySpec, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&a| s.name(a).to_string()).collect()
}

const MODULAR: [&str; 4] = ["toric_code", "ising", "fibonacci", "semion"];
const POINTED_REPS: [&str; 3] = ["rep_z2", "rep_z3", "rep_z2z2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_centre_is_product_of_centres(i in 0..NAMES.len(), j in 0..NAMES.len()) {
        let (a, b) = (spec(i), spec(j));
        let p = deligne_product(&a, &b);
        let ca = names_of(&a, &ribbon::centre(&a));
        let cb = names_of(&b, &ribbon::centre(&b));
        let mut expected: Vec<String> = ca
            .iter()
            .flat_map(|x| cb.iter().map(move |y| format!("({x},{y})")))
            .collect();
        expected.sort();
        let mut got = names_of(&p, &ribbon::centre(&p));
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn product_determinant_is_kronecker(i in 0..NAMES.len(), j in 0..NAMES.len()) {
        let (a, b) = (spec(i), spec(j));
        let p = deligne_product(&a, &b);
        let da = ribbon::determinant(&ribbon::s_matrix(&a).unwrap().entries);
        let db = ribbon::determinant(&ribbon::s_matrix(&b).unwrap().entries);
        let dp = ribbon::determinant(&ribbon::s_matrix(&p).unwrap().entries);
        let expected = &da.pow(b.rank() as u32) * &db.pow(a.rank() as u32);
        prop_assert_eq!(dp, expected);
    }

    #[test]
    fn s_matrix_symmetries(i in 0..NAMES.len(), j in 0..NAMES.len()) {
        let p = deligne_product(&spec(i), &spec(j));
        let s = ribbon::s_matrix(&p).unwrap();
        for a in 0..p.rank() {
            for b in 0..p.rank() {
                prop_assert_eq!(s.get(a, b), s.get(b, a));
                let bd = p.ring().dual(b);
                prop_assert_eq!(s.get(a, bd), &s.get(a, b).conj());
            }
        }
    }

    #[test]
    fn documents_round_trip(i in 0..NAMES.len(), j in 0..NAMES.len()) {
        let p = deligne_product(&spec(i), &spec(j));
        let doc = ExchangeDocument::from_spec(&p, Some("product"));
        let text = doc.to_json();
        let back = ExchangeDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.spec().unwrap(), p);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn single_entry_increments_are_caught(i in 0..NAMES.len(), a in 0usize..5, b in 0usize..5, c in 0usize..5) {
        let s = spec(i);
        let r = s.rank();
        let (a, b, c) = (a % r, b % r, c % r);
        let mut ring = s.ring().clone();
        ring.set_n(a, b, c, ring.n(a, b, c) + 1);
        let mutated = s.with_ring(ring).unwrap();
        prop_assert!(!ribbon::validate_spec(&mutated, Default::default()).passed());
    }

    #[test]
    fn pointed_condensation_conserves(g in 0..POINTED_REPS.len(), m in 0..MODULAR.len()) {
        let rep = catalog::load_named(POINTED_REPS[g]).unwrap();
        let target = catalog::load_named(MODULAR[m]).unwrap();
        let p = deligne_product(&rep, &target);
        let t = tannakian::maximal_tannakian(&p).unwrap();
        let res = condense::condense(&p, &t, &CondenseOptions::default()).unwrap();
        let report = verify_condensation(&res, &p, &t);
        prop_assert!(report.passed(), "{:?}", report.failures());
        prop_assert!(ribbon::find_equivalence(&res.condensed, &target).is_some());
        let total: CycloNum = res.condensed.exact_dims().unwrap().iter().map(|d| d * &d.conj()).sum();
        let before: CycloNum = p.exact_dims().unwrap().iter().map(|d| d * &d.conj()).sum();
        prop_assert_eq!(&total * &CycloNum::from_int(t.group_order as i64), before);
    }

    #[test]
    fn cyclic_products_have_gcd_multipliers(a in 1usize..6, b in 1usize..6) {
        prop_assume!(a * b <= 16);
        let g = tannakian::FiniteGroup::product(
            &tannakian::FiniteGroup::cyclic(a),
            &tannakian::FiniteGroup::cyclic(b),
        );
        let h = tannakian::h2(&g).unwrap();
        prop_assert_eq!(h.order(), num_integer::gcd(a, b) as u64);
    }
}

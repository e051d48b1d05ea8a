use proptest::prelude::*;
use torsionlab_core::symplectic::*;
use torsionlab_core::Status;

#[test]
fn commutator_relations_hold_under_fixed_convention() {
    for (g, r1, r2) in [(2, 0, 4), (3, 24, 12)] {
        let o = verify_commutator_relations(g).unwrap();
        assert_eq!(o.status, Status::Pass, "g={g}");
        assert_eq!(o.witness["instances_relation_1"], r1);
        assert_eq!(o.witness["instances_relation_2"], r2);
        // both conventions happen to satisfy every instance
        assert_eq!(o.witness["conventions_satisfying_all"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn delta_generators_have_commutator_witnesses() {
    let o = verify_delta_in_commutators(3).unwrap();
    assert_eq!(o.status, Status::Pass);
    for w in o.witness["witnessed"].as_array().unwrap() {
        let inst: RelationInstance = serde_json::from_value(w["instance"].clone()).unwrap();
        assert!(inst.holds(3, COMMUTATOR_CONVENTION).unwrap());
    }
    // at g=2 relation (1) has no instances, so off-diagonal generators lack witnesses
    let o = verify_delta_in_commutators(2).unwrap();
    assert_eq!(o.status, Status::Fail);
    let missing = o.counterexample.unwrap()["without_witness"].as_array().unwrap().len();
    assert!(missing > 0);
}

#[test]
fn delta_generator_shapes() {
    for g in [2, 3] {
        let gens = delta_generators(g).unwrap();
        for d in &gens {
            assert!(delta_shape(&d.matrix).is_some(), "{}", d.label);
            assert!(in_gamma12(&d.matrix).unwrap(), "{}", d.label);
        }
        assert!(gens.iter().any(|d| d.label == "E1,4"));
        let e22sq = gens.iter().find(|d| d.label == "E2,2^2").unwrap();
        assert_eq!(e22sq.matrix.get(g, 0), 2);
        assert_eq!(delta_shape(&e22sq.matrix), Some("lower"));
    }
}

#[test]
fn sp4_action_and_sign() {
    let o = verify_sp4_s6().unwrap();
    assert_eq!(o.status, Status::Pass);
    assert_eq!(o.witness["order"], 720);
    assert_eq!(o.witness["e14_cycle_type"], serde_json::json!([2, 2, 2]));
    assert_eq!(sign_character(&SympMatrix::identity(2)), Ok(1));
    assert_eq!(sign_character(&elementary_matrix(1, 4, 2).unwrap()), Ok(-1));
    assert_eq!(sign_character(&elementary_matrix(1, 1, 2).unwrap()), Ok(-1));
}

#[test]
fn e11_does_not_fix_the_printed_odd_form() {
    let o = verify_e11_fixed_odd_form().unwrap();
    assert_eq!(o.status, Status::Fail);
    assert_eq!(o.witness["parity"], "odd");
    let fixed = o.witness["odd_forms_fixed_by_e11"].as_array().unwrap();
    assert_eq!(fixed.len(), 4);
    assert!(fixed.iter().all(|f| f.as_str().unwrap().contains("+x1")));
    assert_eq!(o.witness["other_e_ii_fixing_form"], serde_json::json!(["E3,3", "E4,4"]));
}

#[test]
fn action_preserves_parity_on_sp4() {
    let forms = enumerate_forms(2).unwrap();
    for m in sp4_f2() {
        for (q, par) in &forms {
            assert_eq!(form_parity(&q.act(&m)).unwrap(), *par);
        }
    }
}

#[test]
fn lagrangian_counts() {
    for (p, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let o = verify_lagrangian_count(p, r, DEFAULT_LAGRANGIAN_LIMIT).unwrap();
        assert_eq!(o.status, Status::Pass);
        assert_eq!(covering_degree_prime_check(p, r, DEFAULT_LAGRANGIAN_LIMIT).unwrap().status, Status::Pass);
    }
    assert_eq!(covering_degree_prime_check(5, 1, DEFAULT_LAGRANGIAN_LIMIT).unwrap().witness["gcd"], "1");
}

fn word(g: usize, idx: &[usize]) -> SympMatrix {
    let s: Vec<_> = sigma(g).into_iter().filter(|(i, j)| i != j).collect();
    idx.iter()
        .fold(SympMatrix::identity(g), |acc, &t| acc.mul(&elementary_matrix(s[t % s.len()].0, s[t % s.len()].1, g).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma12_closed_under_products_and_inverses(
        g in 2usize..4,
        a in proptest::collection::vec(0usize..100, 1..5),
        b in proptest::collection::vec(0usize..100, 1..5),
    ) {
        let x = word(g, &a);
        let y = word(g, &b);
        prop_assert!(in_gamma12(&x).unwrap());
        prop_assert!(in_gamma12(&x.mul(&y)).unwrap());
        prop_assert!(in_gamma12(&x.inverse()).unwrap());
        prop_assert_eq!(x.mul(&x.inverse()), SympMatrix::identity(g));
    }

    #[test]
    fn g3_action_preserves_parity(idx in proptest::collection::vec(0usize..200, 1..6), lin in 0u32..64) {
        // words in all E_ij, including the non-Gamma_{1,2} diagonal ones
        let s = sigma(3);
        let m = idx.iter().fold(SympMatrix::identity(3), |acc, &t| {
            acc.mul(&elementary_matrix(s[t % s.len()].0, s[t % s.len()].1, 3).unwrap())
        });
        let q = QuadraticFormF2::new(3, lin).unwrap();
        prop_assert_eq!(form_parity(&q.act(&m.mod2())).unwrap(), form_parity(&q).unwrap());
    }
}

use proptest::prelude::*;
use torsionlab_core::poly::*;
use torsionlab_core::special_maps::PeriodicMap;
use torsionlab_core::{Error, Status};

fn binom(n: u64, r: u64) -> u128 {
    if n < r {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[test]
fn lemma_val_suite() {
    for p in [3, 5, 7, 11, 13] {
        let o = verify_lemma_val(p).unwrap();
        assert_eq!(o.status, Status::Pass, "{p}");
        let vals: Vec<u64> = serde_json::from_value(o.witness["valuations"].clone()).unwrap();
        assert_eq!(vals, (0..p).rev().collect::<Vec<_>>());
        assert_eq!(verify_sr_congruence(p).unwrap().status, Status::Pass);
        assert_eq!(verify_sr_identities(p, 2 * p).unwrap().status, Status::Pass);
    }
}

#[test]
fn degree_g_plus_two_map_breaks_divisibility() {
    for (p, n, g) in [(5u64, 2u32, 2u32), (3, 2, 1), (7, 1, 3), (5, 1, 1)] {
        let period = p.pow(n);
        let phi = PeriodicMap::from_fn(p, 1, n, |x| (binom(x % period, g as u64 + 2) % p as u128) as i128).unwrap();
        assert_eq!(phi.degree(), g as u64 + 2);
        let o = verify_degree_divisibility(&phi, g).unwrap();
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.witness["divisible"], false);
    }
}

#[test]
fn special_kernel_maps_satisfy_divisibility() {
    for (p, k, n, g) in [(5, 1, 2, 2), (5, 2, 2, 4), (3, 1, 2, 1)] {
        let kern = torsionlab_core::special_maps::special_kernel(p, k, n, g).unwrap();
        for phi in kern.maps() {
            let o = verify_degree_divisibility(phi, g).unwrap();
            assert_eq!(o.status, Status::Pass);
            assert_eq!(o.witness["divisible"], true);
        }
    }
}

fn nonzero_poly(p: u64, max_len: usize) -> impl Strategy<Value = PolyOverZpk> {
    proptest::collection::vec(0i128..p as i128, 1..max_len)
        .prop_map(move |c| PolyOverZpk::new(p, 1, c).unwrap())
        .prop_filter("nonzero", |q| !q.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_additive(a in nonzero_poly(5, 12), b in nonzero_poly(5, 12)) {
        let v = a.mul(&b).t1_valuation().unwrap();
        prop_assert_eq!(v, a.t1_valuation().unwrap() + b.t1_valuation().unwrap());
    }

    #[test]
    fn routes_agree_below_p(a in nonzero_poly(7, 7), e in 0u32..6) {
        let q = a.mul(&PolyOverZpk::t_minus_one_pow(7, 1, e).unwrap());
        match q.t1_valuation_by_derivatives() {
            Ok(v) => prop_assert_eq!(v, q.t1_valuation().unwrap()),
            Err(Error::Inapplicable(_)) => prop_assert!(q.t1_valuation().unwrap() >= 7),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn generating_poly_is_linear(
        a in proptest::collection::vec(0i128..9, 9),
        b in proptest::collection::vec(0i128..9, 9),
        c in -20i128..20,
    ) {
        let x = PeriodicMap::new(3, 2, 2, a).unwrap();
        let y = PeriodicMap::new(3, 2, 2, b).unwrap();
        prop_assert_eq!(
            generating_poly(&x.add(&y.scale(c))),
            generating_poly(&x).add(&generating_poly(&y).scale(c))
        );
    }

    #[test]
    fn degree_divisibility_equivalence(
        vals in proptest::collection::vec(0i128..5, 25),
        g in 1u32..6,
        k2 in proptest::collection::vec(0i128..9, 9),
    ) {
        let phi = PeriodicMap::new(5, 1, 2, vals).unwrap();
        prop_assert_eq!(verify_degree_divisibility(&phi, g).unwrap().status, Status::Pass);
        let psi = PeriodicMap::new(3, 2, 2, k2).unwrap();
        prop_assert_eq!(verify_degree_divisibility(&psi, g).unwrap().status, Status::Pass);
    }
}

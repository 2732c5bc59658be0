use fanokit::harness::{
    oracle_anticanonical_volume, oracle_h0_quotient, oracle_lct_bruteforce, oracle_profile_value,
};
use fanokit::lct::{
    lct_chart, lct_chart_lp, ChartIdeal, IdealSequenceOnXxA1, IdealSheaf, SubschemeSpec,
};
use fanokit::rational::{frac, q};
use fanokit::toricmodel::{by_name, catalog};
use fanokit::volumes::blowup_volume_profile;
use proptest::prelude::*;

#[test]
fn anticanonical_volume_matches_box_counts() {
    for model in catalog() {
        let k_max = if model.dim() == 3 { 8 } else { 7 };
        let oracle = oracle_anticanonical_volume(&model, k_max).unwrap();
        assert_eq!(oracle, model.anticanonical_volume(), "{}", model.name());
    }
}

#[test]
fn quotient_dimension_matches_raw_expansion() {
    for (name, sub) in [
        ("P2", "point:0"),
        ("P1xP1", "thick:1:2"),
        ("dP6", "divisor:2"),
    ] {
        let model = by_name(name).unwrap();
        let z = SubschemeSpec::parse_short(sub)
            .unwrap()
            .build(&model)
            .unwrap();
        let seqs = [
            IdealSequenceOnXxA1::new(&model, vec![z.ideal().clone()]).unwrap(),
            IdealSequenceOnXxA1::new(&model, vec![z.ideal().clone(), z.ideal().power(2)]).unwrap(),
            IdealSequenceOnXxA1::new(&model, vec![IdealSheaf::unit(&model), z.ideal().clone()])
                .unwrap(),
        ];
        for seq in &seqs {
            for k in 1..=3u32 {
                let fast = seq.power(k).quotient_dimension(&model, i64::from(k));
                let slow = oracle_h0_quotient(&model, seq, 1, k).unwrap();
                assert_eq!(fast, slow, "{name} {sub} M={} k={k}", seq.m());
            }
        }
    }
}

#[test]
fn profile_values_match_lattice_counts() {
    let model = by_name("P1xP1").unwrap();
    let z = SubschemeSpec::parse_short("thick:0:2")
        .unwrap()
        .build(&model)
        .unwrap();
    let profile = blowup_volume_profile(&model, &z).unwrap();
    for x in [frac(1, 2), q(1), frac(3, 2)] {
        let oracle = oracle_profile_value(&model, &z, &x, 40).unwrap();
        assert_eq!(oracle.value, profile.eval(&x).unwrap(), "x = {x}");
    }
}

fn random_chart_ideal() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(0i64..=4, n), 1..=4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lct_routes_agree((n, gens) in random_chart_ideal()) {
        let ideal = ChartIdeal::new(n, gens).unwrap();
        prop_assume!(!ideal.is_unit());
        let facets = lct_chart(&ideal).unwrap();
        let lp = lct_chart_lp(&ideal).unwrap();
        prop_assert_eq!(&facets, &lp);
        // Clearing denominators in a vertex of the blocker gives an integer
        // weight whose entries are sums of at most three 2x2 minors of the
        // exponent matrix, so 48 bounds them for exponents up to 4.
        let brute = oracle_lct_bruteforce(n, ideal.generators(), 48);
        prop_assert_eq!(facets.finite(), brute.as_ref());
    }
}

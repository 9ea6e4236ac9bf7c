use proptest::prelude::*;
use qcalab::classical::{
    eca_step, is_reversible_on_ring, run_trace, step, CaSpec, Config, EcaRule, FiniteConfig, PeriodicConfig,
};

fn row(cells: &[bool], origin: i64) -> Config {
    FiniteConfig::from_cells(
        1,
        0,
        cells.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| ([origin + i as i64, 0], 1)),
    )
    .into()
}

#[test]
fn wolfram_round_trip_all_rules() {
    for n in 0..256u32 {
        let rule = EcaRule::new(n).unwrap();
        assert_eq!(EcaRule::from_table(&rule.table()).unwrap(), rule);
        for p in 0..8u8 {
            let (l, c, r) = (p >> 2, (p >> 1) & 1, p & 1);
            assert_eq!(rule.output(l, c, r), ((n >> p) & 1) as u8);
        }
    }
    assert!(EcaRule::new(256).is_err());
}

#[test]
fn shift_rule_is_bijective_and_254_is_not() {
    let shift = EcaRule::new(170).unwrap();
    let or = EcaRule::new(254).unwrap();
    for n in 1..=12 {
        assert!(is_reversible_on_ring(&shift, n).unwrap().bijective);
        if n == 1 {
            // a single cell sees only itself
            assert!(is_reversible_on_ring(&or, n).unwrap().bijective);
            continue;
        }
        let report = is_reversible_on_ring(&or, n).unwrap();
        assert!(!report.bijective);
        let (a, b) = report.witness.unwrap();
        assert_ne!(a, b);
        let image = |c: Vec<u8>| step(&PeriodicConfig::ring(c).unwrap().into(), &or).unwrap();
        assert_eq!(image(a), image(b));
    }
}

#[test]
fn blinker_has_period_two() {
    let life = CaSpec::game_of_life();
    let blinker: Config = FiniteConfig::from_grid(".....\n..#..\n..#..\n..#..\n.....").into();
    let trace = run_trace(&blinker, &life, 2).unwrap();
    assert_ne!(trace[1], trace[0]);
    assert_eq!(trace[2], trace[0]);
}

proptest! {
    #[test]
    fn eca_commutes_with_shift(n in 0u32..256, cells in prop::collection::vec(any::<bool>(), 1..24), by in -20i64..20) {
        let rule = EcaRule::new(n).unwrap();
        prop_assume!(rule.output(0, 0, 0) == 0);
        let c = row(&cells, 0);
        let shifted = row(&cells, by);
        let a = eca_step(&c, rule).unwrap();
        let b = eca_step(&shifted, rule).unwrap();
        let f = a.as_finite().unwrap().translate([by, 0]);
        prop_assert_eq!(Config::from(f), b);
    }

    #[test]
    fn periodic_agrees_with_finite_inside_light_cone(n in 0u32..256, cells in prop::collection::vec(any::<bool>(), 1..16), steps in 0usize..8) {
        let rule = EcaRule::new(n).unwrap();
        prop_assume!(rule.output(0, 0, 0) == 0);
        let pad = steps + 1;
        let width = cells.len() + 2 * pad;
        let mut ring = vec![0u8; width];
        for (i, &b) in cells.iter().enumerate() {
            ring[pad + i] = b as u8;
        }
        let finite = run_trace(&row(&cells, pad as i64), &rule, steps).unwrap();
        let periodic = run_trace(&PeriodicConfig::ring(ring).unwrap().into(), &rule, steps).unwrap();
        for (f, p) in finite.iter().zip(&periodic) {
            for i in 0..width as i64 {
                prop_assert_eq!(f.get([i, 0]), p.get([i, 0]));
            }
        }
    }

    #[test]
    fn spec_view_matches_rule(n in 0u32..256, cells in prop::collection::vec(any::<bool>(), 1..20)) {
        let rule = EcaRule::new(n).unwrap();
        prop_assume!(rule.output(0, 0, 0) == 0);
        let c = row(&cells, 0);
        prop_assert_eq!(eca_step(&c, rule).unwrap(), step(&c, &rule.to_spec()).unwrap());
    }
}

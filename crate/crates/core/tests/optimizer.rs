use macfcs_core::{
    feasible_split, min_power, Objective, SearchConfig, SourceTriple, Strategy, Topology,
};

fn quick() -> SearchConfig {
    SearchConfig {
        multistarts: 3,
        grid_resolution: 3,
        bisection_tol: 1e-3,
        power_cap: 500.0,
        ..SearchConfig::default()
    }
}

#[test]
fn min_power_is_deterministic() {
    let topo = Topology::triangle(0.7, 1.0, 1.2, 1.0).unwrap();
    let triple = SourceTriple::new(0.4, 0.3, 0.2).unwrap();
    for s in [Strategy::Df, Strategy::Cf] {
        let a = min_power(s, &topo, &triple, Objective::Symmetric, &quick()).unwrap();
        let b = min_power(s, &topo, &triple, Objective::Symmetric, &quick()).unwrap();
        assert_eq!(a, b, "{s}");
    }
}

#[test]
fn min_power_grows_with_the_sources() {
    let topo = Topology::triangle(0.5, 1.0, 1.0, 1.0).unwrap();
    let base = SourceTriple::new(0.3, 0.3, 0.3).unwrap();
    for s in [Strategy::Maccc, Strategy::Df] {
        let mut last = 0.0;
        for t in [0.5, 1.0, 1.5] {
            let p = min_power(s, &topo, &base.scaled(t), Objective::Symmetric, &quick())
                .unwrap()
                .p_star;
            assert!(p + quick().bisection_tol >= last, "{s}: {p} after {last}");
            last = p;
        }
    }
}

#[test]
fn witness_is_feasible_at_p_star() {
    let topo = Topology::triangle(0.5, 1.0, 1.0, 1.0).unwrap();
    let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
    let m = min_power(Strategy::Df, &topo, &triple, Objective::Symmetric, &quick()).unwrap();
    let at = topo.with_power_limits(m.powers.to_vec()).unwrap();
    let report = m.witness.unwrap().evaluate(&at, &triple).unwrap();
    assert!(report.feasible);
}

#[test]
fn more_power_keeps_a_split_feasible() {
    let topo = Topology::triangle(0.5, 1.0, 1.0, 1.0).unwrap();
    let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
    for p in [3.0, 5.0, 10.0] {
        assert!(
            feasible_split(Strategy::Df, &topo, &triple, [p, p], &quick())
                .unwrap()
                .is_some()
        );
    }
}

#[test]
fn seed_only_matters_through_random_starts() {
    let topo = Topology::triangle(1.5, 1.0, 1.0, 1.0).unwrap();
    let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
    let mut cfg = quick();
    let a = min_power(Strategy::Df, &topo, &triple, Objective::Symmetric, &cfg).unwrap();
    cfg.rng_seed = 99;
    let b = min_power(Strategy::Df, &topo, &triple, Objective::Symmetric, &cfg).unwrap();
    assert!(
        (a.p_star - b.p_star).abs() <= 0.05 * a.p_star,
        "{} vs {}",
        a.p_star,
        b.p_star
    );
}

#[test]
fn best_strategy_never_needs_more_than_the_mac() {
    let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
    let cfg = quick();
    for topo in [
        Topology::triangle(0.3, 1.0, 1.0, 1.0).unwrap(),
        Topology::triangle(3.0, 1.0, 1.0, 1.0).unwrap(),
        Topology::triangle(1.0, 0.7, 1.6, 1.0).unwrap(),
    ] {
        let p = |s| {
            min_power(s, &topo, &triple, Objective::Symmetric, &cfg)
                .unwrap()
                .p_star
        };
        let mac = p(Strategy::Maccc);
        let best = p(Strategy::Df).min(p(Strategy::Cf));
        // MACCC sits on the strict boundary of both parameter spaces
        assert!(best <= mac + 2.0 * cfg.bisection_tol, "{best} vs {mac}");
    }
}

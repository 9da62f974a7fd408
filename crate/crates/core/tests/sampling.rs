use conserve::analysis::{
    absolute_output_bound, chi_square_prefixes, latency_empirical, monte_carlo_efficiency, verify_reduction_lazy,
};
use conserve::combinators::{build_restart, build_serial, epoch_stats, serial_partial_efficiency, RestartSpec};
use conserve::reductions::{
    biased_to_uniform, uniform_to_arbitrary, uniform_to_rational, uniform_to_uniform, uniform_to_uniform_chain,
};
use conserve::{ratio, ratio_to_f64, Dist, ExactSampler, PrefixCode, Protocol};

const SE_WIDTH: f64 = 3.0;

fn expected_efficiency(spec: &RestartSpec) -> f64 {
    epoch_stats(spec).efficiency_bits
}

#[test]
fn empirical_latency_matches_the_exact_value() {
    let spec = uniform_to_uniform(3, 2, 2).unwrap();
    let p = build_restart(&spec).unwrap();
    let est = latency_empirical(&p, spec.mu(), 20_000, 9).unwrap();
    let exact = ratio_to_f64(epoch_stats(&spec).latency.as_ref().unwrap());
    assert_eq!(exact, 2.25);
    assert!((est.mean - exact).abs() <= SE_WIDTH * est.std_error, "{est:?}");
}

#[test]
fn rational_block_of_one_digit_never_waits() {
    let spec = uniform_to_rational(4, &[1, 3], 1).unwrap();
    let p = build_restart(&spec).unwrap();
    let est = latency_empirical(&p, spec.mu(), 1_000, 1).unwrap();
    assert_eq!(est.mean, 1.0);
    assert_eq!(est.std_error, 0.0);
}

#[test]
fn silent_protocols_are_reported() {
    let code = PrefixCode::new(2, vec![vec![0], vec![1]]).unwrap();
    let spec = RestartSpec::new(
        code,
        vec![vec![], vec![]],
        Dist::uniform(2).unwrap(),
        Dist::uniform(2).unwrap(),
    )
    .unwrap();
    let p = build_restart(&spec).unwrap();
    assert!(latency_empirical(&p, spec.mu(), 1, 0).is_err());
}

#[test]
fn monte_carlo_agrees_with_exact_efficiency() {
    let seeds: Vec<u64> = (1..=10).collect();
    for spec in [
        uniform_to_uniform(10, 2, 1).unwrap(),
        uniform_to_uniform(3, 2, 2).unwrap(),
        uniform_to_rational(10, &[3, 7], 1).unwrap(),
        biased_to_uniform(3, 2).unwrap(),
    ] {
        let p = build_restart(&spec).unwrap();
        let block = spec.code().lengths().into_iter().max().unwrap() as u64;
        let n = 100_000 / block * block;
        let est = monte_carlo_efficiency(&p, spec.mu(), spec.nu(), n, &seeds).unwrap();
        let exact = expected_efficiency(&spec);
        assert!(
            (est.mean - exact).abs() <= SE_WIDTH * est.std_error + 1.0 / n as f64,
            "mean {} exact {exact} se {}",
            est.mean,
            est.std_error
        );
        let bound = absolute_output_bound(spec.mu(), spec.nu()).unwrap();
        for &out in &est.outputs {
            assert!(out as f64 <= bound.max_output(n as usize) + 1e-9);
        }
    }
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let spec = uniform_to_uniform(10, 2, 1).unwrap();
    let p = build_restart(&spec).unwrap();
    let a = monte_carlo_efficiency(&p, spec.mu(), spec.nu(), 5_000, &[3, 4, 5]).unwrap();
    let b = monte_carlo_efficiency(&p, spec.mu(), spec.nu(), 5_000, &[3, 4, 5]).unwrap();
    assert_eq!(a, b);
    assert!(monte_carlo_efficiency(&p, spec.mu(), spec.nu(), 0, &[1]).is_err());
    assert!(monte_carlo_efficiency(&p, spec.mu(), spec.nu(), 10, &[]).is_err());
}

#[test]
fn chi_square_accepts_correct_and_rejects_biased_output() {
    let good = uniform_to_rational(4, &[1, 3], 2).unwrap();
    let p = build_restart(&good).unwrap();
    let report = chi_square_prefixes(&p, good.mu(), good.nu(), 3, 20_000, 7).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(report.degrees_of_freedom, 7);

    let code = PrefixCode::new(2, vec![vec![0], vec![1, 0], vec![1, 1]]).unwrap();
    let bits = Dist::uniform(2).unwrap();
    let bad = RestartSpec::new(code, vec![vec![0], vec![1], vec![]], bits.clone(), bits).unwrap();
    let p = build_restart(&bad).unwrap();
    let report = chi_square_prefixes(&p, bad.mu(), bad.nu(), 2, 20_000, 7).unwrap();
    assert!(!report.passed, "{report:?}");
}

#[test]
fn chi_square_demands_enough_trials() {
    let spec = uniform_to_uniform(3, 2, 2).unwrap();
    let p = build_restart(&spec).unwrap();
    assert!(chi_square_prefixes(&p, spec.mu(), spec.nu(), 3, 799, 0).is_err());
    assert!(chi_square_prefixes(&p, spec.mu(), spec.nu(), 3, 800, 0).is_ok());
}

#[test]
fn staged_protocol_passes_chi_square() {
    let target = Dist::new(vec![ratio(2, 5), ratio(3, 5)]).unwrap();
    let staged = uniform_to_arbitrary(4, &target, 2).unwrap();
    let report = chi_square_prefixes(&staged, &Dist::uniform(4).unwrap(), &target, 3, 20_000, 5).unwrap();
    assert!(report.passed, "{report:?}");
    let lazy = verify_reduction_lazy(&staged, &target, 3, 4).unwrap();
    let shallow = verify_reduction_lazy(&staged, &target, 3, 2).unwrap();
    assert!(lazy.max_deviation <= shallow.max_deviation);
    assert!(lazy.max_deviation <= lazy.deviation_bound);
}

#[test]
fn serial_chain_efficiency_stays_below_one() {
    let chain = uniform_to_uniform_chain(3, 2, 1, None).unwrap();
    let mut last = 0.0;
    for n in [1, 5, 20, 60] {
        let e = serial_partial_efficiency(&chain, n).unwrap();
        assert!(e.bits <= 1.0, "n={n}: {}", e.bits);
        assert!(e.bits >= last - 0.05, "n={n}: {} after {last}", e.bits);
        last = e.bits;
    }

    let p = build_serial(&chain).unwrap();
    let mu = Dist::uniform(3).unwrap();
    let input = ExactSampler::new(&mu, 2).unwrap().fill(60);
    let (_, out) = p.step_word(p.start(), &input).unwrap();
    let bound = absolute_output_bound(&mu, &Dist::uniform(2).unwrap()).unwrap();
    assert!(out.len() as f64 <= bound.max_output(input.len()));
    assert!(p.materialized_components() >= 2);
}

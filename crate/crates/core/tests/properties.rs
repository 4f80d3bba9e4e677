use entangle_core::apf::{Apf, BipartiteSplit};
use entangle_core::entanglement::{
    chain_beta, correlation_immunity, graph_beta, nonlinear_order, par_l_exact_lp, par_l_optimize,
    parl_bounds, parl_bounds_plain, pattern_orders, se_search, state_order,
    weight_hierarchy_spectral, ParlConfig,
};
use entangle_core::gf2::LinearCode;
use entangle_core::random::{random_aleph, random_code, random_lp};
use entangle_core::real::Real;
use entangle_core::state::StateVector;
use entangle_core::transforms::{apply_gate, apply_hadamards, hi_multispectra, Gate2x2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lp(seed: u64, n: usize) -> Apf {
    random_lp(n, 0.45, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Code spanned by the support of a flat state on a linear subspace.
fn support_code(s: &StateVector) -> LinearCode {
    let words: Vec<u64> = s.support().into_iter().map(|x| x as u64).collect();
    LinearCode::from_spanning(s.n(), &words).unwrap()
}

#[test]
fn fast_par_matches_numeric_on_examples() {
    for (text, n) in [
        ("x0*x1+x1*x2+x2*x3", 4),
        ("x3*x0+x0*x2+x2*x1+x1*x4+x4*x0", 5),
        ("x0*x1+x0*x3+x0*x4+x1*x2+x2*x3+x2*x4", 5),
        ("x0*x1+x0*x3+x0*x5+x1*x2+x1*x4+x2*x3+x2*x5+x3*x4+x4*x5", 6),
        (
            "x0*x1+x0*x3+x0*x4+x1*x2+x1*x5+x2*x3+x2*x6+x3*x7+x4*x5+x4*x7+x5*x6+x6*x7",
            8,
        ),
    ] {
        let a = Apf::parse(text, Some(n)).unwrap();
        let split = a.is_lp().unwrap();
        let table = hi_multispectra(&a.expand().unwrap()).unwrap();
        for m in 0..1u64 << n {
            let fast = a
                .fast_par_by_rank(&split, m & split.t_cperp, m & split.t_c)
                .unwrap();
            assert_eq!(fast, table.get(m), "{text} at {m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fast_par_matches_numeric(seed in any::<u64>(), n in 2usize..=10) {
        let a = lp(seed, n);
        let split = a.is_lp().unwrap();
        let table = hi_multispectra(&a.expand().unwrap()).unwrap();
        for m in 0..1u64 << n {
            let fast = a.fast_par_by_rank(&split, m & split.t_cperp, m & split.t_c).unwrap();
            prop_assert_eq!(fast, table.get(m));
        }
    }

    #[test]
    fn exact_lp_is_spectral_max(seed in any::<u64>(), n in 2usize..=10) {
        let a = lp(seed, n);
        let table = hi_multispectra(&a.expand().unwrap()).unwrap();
        let r = par_l_exact_lp(&a).unwrap();
        prop_assert_eq!(r.par_l, table.max().1);
        prop_assert_eq!(r.witness_mask(), Some(table.max().0));
    }

    #[test]
    fn spectral_hierarchy_matches_oracle(seed in any::<u64>(), n in 1usize..=8, k in 0usize..=4) {
        let code = random_code(n, k.min(n), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(weight_hierarchy_spectral(&code).unwrap(), code.weight_hierarchy_oracle().unwrap());
    }

    #[test]
    fn code_components_match_factorizer(seed in any::<u64>(), n in 1usize..=9, k in 0usize..=5) {
        let code = random_code(n, k.min(n), &mut ChaCha8Rng::seed_from_u64(seed));
        let s = StateVector::indicator_from_code(&code).unwrap();
        let mut want = s.tensor_factorize().unwrap().blocks;
        let mut got = code.components();
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn state_order_matches_factorizer(seed in any::<u64>(), n in 2usize..=8, mask in any::<u64>()) {
        let a = lp(seed, n);
        let s = apply_hadamards(&a.expand().unwrap(), mask & ((1 << n) - 1)).unwrap();
        prop_assert_eq!(state_order(&s).unwrap(), s.entanglement_order().unwrap());
    }

    #[test]
    fn bounds_and_rank_lower_bound(seed in any::<u64>(), n in 2usize..=10) {
        let a = lp(seed, n);
        let exact = par_l_exact_lp(&a).unwrap().par_l;
        let [lo, hi] = parl_bounds_plain(&a.expand().unwrap()).unwrap();
        let log = Real::int(exact.exact_log2().unwrap() as i128);
        prop_assert!(lo <= log && log <= hi, "{} not in [{}, {}]", log, lo, hi);
        let split = a.is_lp().unwrap();
        let r = split.t_c.count_ones().max(split.t_cperp.count_ones());
        prop_assert!(exact >= Real::pow2(r as i64));
    }

    #[test]
    fn beta_is_monotone_and_starts_at_the_state_order(seed in any::<u64>(), n in 2usize..=8) {
        let a = lp(seed, n);
        let r = se_search(&a).unwrap();
        prop_assert_eq!(r.beta[0], 0);
        prop_assert!(r.beta.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(*r.beta.last().unwrap(), state_order(&a.expand().unwrap()).unwrap());
        prop_assert_eq!(r.trajectory.beta.len(), r.trajectory.steps.iter().filter(|s| s.qubit.is_some() && s.outcome.is_some()).count() + 1);
    }

    #[test]
    fn optimizer_never_exceeds_exact(seed in any::<u64>(), n in 2usize..=4) {
        let a = lp(seed, n);
        let exact = par_l_exact_lp(&a).unwrap().par_l.to_f64();
        let cfg = ParlConfig { random_seeds: 64, seed, ..ParlConfig::default() };
        let opt = par_l_optimize(&a.expand().unwrap(), &cfg).unwrap().par_l.to_f64();
        prop_assert!(opt <= exact * (1.0 + 1e-9), "{} > {}", opt, exact);
    }
}

/// Fully entangled states whose maximum PAR is attained by a single HI
/// transform (two when `k = n/2`) should have stubbornness equal to the
/// weight hierarchy of the code at that transform. Stubbornness never
/// exceeds it.
#[test]
fn unique_maximum_gives_weight_hierarchy() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut checked, mut mismatches) = (0, Vec::new());
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let a = random_lp(n, 0.45, &mut rng);
        let s = a.expand().unwrap();
        if state_order(&s).unwrap() != n {
            continue;
        }
        let table = hi_multispectra(&s).unwrap();
        let (mask, peak) = table.max();
        let count = table.entries().iter().filter(|&&v| v == peak).count();
        let k = n as i64 - peak.exact_log2().unwrap();
        if !(count == 1 || (count == 2 && 2 * k == n as i64)) {
            continue;
        }
        let code = support_code(&apply_hadamards(&s, mask).unwrap());
        let d = code.weight_hierarchy_oracle().unwrap();
        let r = se_search(&a).unwrap();
        assert_eq!(r.beta.len(), d.as_slice().len(), "{a}");
        assert!(r.beta.iter().zip(d.as_slice()).all(|(b, d)| b <= d), "{a}");
        if r.beta != d.as_slice() {
            mismatches.push(format!("{a}: beta {:?}, d {:?}", r.beta, d.as_slice()));
        }
        checked += 1;
    }
    assert!(
        checked >= 10,
        "only {checked} states met the uniqueness condition"
    );
    assert!(
        mismatches.is_empty(),
        "{} of {checked} states differ:\n{}",
        mismatches.len(),
        mismatches.join("\n")
    );
}

/// The correlation-immunity refinement fails on a sizeable share of random
/// states; the plain bounds never do.
#[test]
fn refined_bound_is_often_violated() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut total, mut violated, mut violated_immune) = (0, 0, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(3..=10);
        let a = random_lp(n, rng.gen_range(0.3..0.9), &mut rng);
        let s = a.expand().unwrap();
        let log = Real::int(par_l_exact_lp(&a).unwrap().par_l.exact_log2().unwrap() as i128);
        let [lo, hi] = parl_bounds_plain(&s).unwrap();
        assert!(lo <= log && log <= hi, "{a}: {log} not in [{lo}, {hi}]");
        let [_, refined] = parl_bounds(&s).unwrap();
        total += 1;
        if log > refined {
            violated += 1;
            if correlation_immunity(&s).unwrap() >= 1 {
                violated_immune += 1;
            }
        }
    }
    eprintln!("refined bound: {violated}/{total} violated, {violated_immune} with t >= 1");
    assert!(violated > 0);
}

#[test]
fn graph_model_matches_state_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..12 {
        let n = rng.gen_range(2..=6);
        let a = random_lp(n, 0.5, &mut rng);
        let s = a.expand().unwrap();
        let orders = pattern_orders(&a.adjacency()).unwrap();
        let per_m: Vec<usize> = graph_beta(&a.adjacency())
            .unwrap()
            .into_iter()
            .map(|p| p.0)
            .collect();
        let mut brute = vec![usize::MAX; n + 1];
        for code in 0..3usize.pow(n as u32) {
            let (mut c, mut xs, mut meas) = (code, 0u64, 0u64);
            for v in 0..n {
                match c % 3 {
                    1 => meas |= 1 << v,
                    2 => {
                        meas |= 1 << v;
                        xs |= 1 << v;
                    }
                    _ => {}
                }
                c /= 3;
            }
            let mut t = apply_hadamards(&s, xs).unwrap();
            for v in (0..n).rev() {
                if meas >> v & 1 == 1 {
                    t = t.measure(v, 0).or_else(|_| t.measure(v, 1)).unwrap().0;
                }
            }
            let order = if t.n() == 0 {
                0
            } else {
                t.entanglement_order().unwrap()
            };
            assert_eq!(orders[code], order, "{a} pattern {code}");
            let m = meas.count_ones() as usize;
            brute[m] = brute[m].min(order);
        }
        assert_eq!(per_m, brute, "{a}");
        let (k_prime, _) = chain_beta(&a.adjacency()).unwrap();
        assert_eq!(k_prime, brute.iter().position(|&o| o == 0).unwrap());
    }
}

/// Measuring in arbitrary single-qubit bases does not beat the HI bases on
/// small states.
#[test]
fn unrestricted_bases_do_not_beat_hi_at_three_qubits() {
    let states = [
        Apf::parse("x0*x1", Some(2)).unwrap(),
        Apf::parse("x0*x1+x1*x2", Some(3)).unwrap(),
        Apf::parse("x0*x1+x0*x2", Some(3)).unwrap(),
        Apf::parse("x0*x2+x1*x2", Some(3)).unwrap(),
    ];
    let grid: Vec<Gate2x2> = (0..8)
        .flat_map(|i| {
            (0..8).map(move |j| Gate2x2::Generic {
                theta: i as f64 * std::f64::consts::FRAC_PI_2 / 7.0,
                w: j as f64 * std::f64::consts::TAU / 8.0,
            })
        })
        .collect();
    for a in &states {
        let n = a.n();
        let s = a.expand().unwrap().to_float();
        let hi: Vec<usize> = graph_beta(&a.adjacency())
            .unwrap()
            .into_iter()
            .map(|p| p.0)
            .collect();
        for measured in 1u64..1 << n {
            let qubits: Vec<usize> = (0..n).filter(|q| measured >> q & 1 == 1).collect();
            let combos = grid.len().pow(qubits.len() as u32);
            for mut c in 0..combos {
                let mut t = s.clone();
                for &q in &qubits {
                    t = apply_gate(&t, q, grid[c % grid.len()]).unwrap();
                    c /= grid.len();
                }
                for &q in qubits.iter().rev() {
                    let (s0, p0) = t
                        .measure(q, 0)
                        .unwrap_or_else(|_| (t.clone(), Real::Float(0.0)));
                    t = if p0.to_f64() >= 0.5 {
                        s0
                    } else {
                        t.measure(q, 1).unwrap().0
                    };
                }
                let order = if t.n() == 0 {
                    0
                } else {
                    t.entanglement_order().unwrap()
                };
                assert!(
                    order >= hi[qubits.len()],
                    "{a}: general basis reached {order} with {} measurements",
                    qubits.len()
                );
            }
        }
    }
}

#[test]
fn aleph_members_reduce_to_indicators() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut indicators = 0;
    let total = 60;
    for _ in 0..total {
        let n = rng.gen_range(3..=8);
        let t_cperp = rng.gen_range(1..(1u64 << n) - 1);
        let split = BipartiteSplit::new(n, t_cperp).unwrap();
        let a = random_aleph(&split, &mut rng);
        if a.aleph_reduce_numeric(&split).unwrap().is_indicator {
            indicators += 1;
        }
    }
    eprintln!("aleph: {indicators}/{total} random members reduced to indicators");
}

#[test]
fn nonlinear_order_of_examples() {
    let s = Apf::parse(
        "x0*x1+x0*x3+x0*x5+x1*x2+x1*x4+x2*x3+x2*x5+x3*x4+x4*x5",
        Some(6),
    )
    .unwrap()
    .expand()
    .unwrap();
    assert_eq!(nonlinear_order(&s).unwrap(), Real::int(2));
}

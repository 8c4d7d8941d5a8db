use proptest::prelude::*;
use qopt_core::bench::{equivalent, generate_bv, oracle_min_depth, simulate};
use qopt_core::circuit::schedule_asap;
use qopt_core::qlearn::{agent_rng, run_epoch_observed, QTable};
use qopt_core::rewards::{fosel_reward, r_pow, ratio, signed_pow};
use qopt_core::rewrite::{apply_match, find_matches, RuleId};
use qopt_core::text::{parse_circuit, serialize_circuit};
use qopt_core::{Action, AgentConfig, Circuit, Gate, QubitId, RewardKind, RewardParams};

fn gate(n: u32) -> impl Strategy<Value = Gate> {
    let h = (0..n).prop_map(Gate::h);
    let cx = (0..n, proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..n as usize)).prop_filter_map(
        "control among targets",
        |(c, ts)| {
            let ts: Vec<u32> = ts.into_iter().filter(|&t| t != c).collect();
            (!ts.is_empty()).then(|| Gate::cx(c, &ts))
        },
    );
    prop_oneof![h, cx]
}

/// Random CNOT+H circuits on 2..=5 wires with up to 20 gates. Gates are
/// biased toward repeats so that cancel and merge patterns actually occur.
fn circuit() -> impl Strategy<Value = Circuit> {
    (2u32..=5).prop_flat_map(|n| {
        proptest::collection::vec((gate(n), any::<bool>()), 0..=20).prop_map(move |gs| {
            let mut out: Vec<Gate> = Vec::new();
            for (g, dup) in gs {
                out.push(g.clone());
                if dup && out.len() < 20 {
                    out.push(g);
                }
            }
            out.truncate(20);
            Circuit::new(n, out).unwrap()
        })
    })
}

fn pair_sums(c: &Circuit) -> Vec<usize> {
    let n = c.n_qubits();
    let mut v = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            v.push(c.pair_strength(QubitId(a), QubitId(b)).unwrap());
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_roundtrip(c in circuit()) {
        prop_assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn schedule_invariants(c in circuit()) {
        let s = schedule_asap(&c);
        prop_assert_eq!(&s, &schedule_asap(&c.clone()));
        prop_assert_eq!(s.depth(), c.depth());
        prop_assert_eq!(c.depth() == 0, c.is_empty());
        prop_assert!(c.depth() <= c.len());
        for layer in s.layers() {
            let mut wires: Vec<QubitId> = layer.iter().flat_map(|&i| c.gates()[i].wires().collect::<Vec<_>>()).collect();
            let total = wires.len();
            wires.sort();
            wires.dedup();
            prop_assert_eq!(wires.len(), total, "wire reused within a layer");
        }
        for (i, g) in c.gates().iter().enumerate() {
            let expect = 1 + c.gates()[..i]
                .iter()
                .enumerate()
                .filter(|(_, h)| g.wires().any(|w| h.touches(w)))
                .map(|(j, _)| s.layer_of_gate[j])
                .max()
                .unwrap_or(0);
            prop_assert_eq!(s.layer_of_gate[i], expect);
        }
    }

    #[test]
    fn pair_strength_symmetric(c in circuit()) {
        let n = c.n_qubits();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    prop_assert_eq!(
                        c.pair_strength(QubitId(a), QubitId(b)),
                        c.pair_strength(QubitId(b), QubitId(a))
                    );
                }
            }
        }
        let total: usize = pair_sums(&c).iter().sum();
        prop_assert_eq!(total, c.interaction_sum());
    }

    #[test]
    fn rewrites_preserve_unitary_and_frame(c in circuit()) {
        for m in find_matches(&c) {
            prop_assert!(m.positions.windows(2).all(|p| p[0] < p[1]));
            let after = apply_match(&c, &m).unwrap();
            prop_assert!(equivalent(&c, &after).unwrap(), "{} at {:?} broke\n{}", m.rule, m.positions, c);

            // untouched gates keep their relative order
            let kept: Vec<&Gate> = c.gates().iter().enumerate()
                .filter(|(i, _)| !m.positions.contains(i)).map(|(_, g)| g).collect();
            let mut it = after.gates().iter();
            for g in kept {
                prop_assert!(it.any(|h| h == g), "frame violated by {}", m.rule);
            }

            let (before_pairs, after_pairs) = (pair_sums(&c), pair_sums(&after));
            match m.rule {
                RuleId::CnotCancel => {
                    prop_assert!(after_pairs.iter().zip(&before_pairs).all(|(a, b)| a <= b));
                    prop_assert!(after.interaction_strength() <= c.interaction_strength());
                }
                _ => {
                    prop_assert_eq!(&after_pairs, &before_pairs);
                    prop_assert_eq!(after.interaction_strength(), c.interaction_strength());
                }
            }
        }
    }

    #[test]
    fn single_target_cancel_drops_pair_by_two(c in circuit()) {
        for m in find_matches(&c).into_iter().filter(|m| m.rule == RuleId::CnotCancel) {
            let after = apply_match(&c, &m).unwrap();
            let k = match &c.gates()[m.positions[0]] {
                Gate::Cnot { targets, .. } => targets.len(),
                Gate::H(_) => unreachable!(),
            };
            prop_assert_eq!(c.interaction_sum() - after.interaction_sum(), 2 * k);
        }
    }

    #[test]
    fn matches_are_deterministic(c in circuit()) {
        let a = find_matches(&c);
        prop_assert_eq!(&a, &find_matches(&c));
        let order: Vec<(RuleId, usize)> = a.iter().map(|m| (m.rule, m.positions[0])).collect();
        let mut sorted = order.clone();
        sorted.sort();
        prop_assert_eq!(order, sorted);
    }

    #[test]
    fn simulation_preserves_norm(c in circuit(), k in 0usize..32) {
        let k = k % (1 << c.n_qubits());
        prop_assert!((simulate(&c, k).unwrap().norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equivalence_reflexive_and_symmetric(a in circuit(), b in circuit()) {
        prop_assert!(equivalent(&a, &a).unwrap());
        if a.n_qubits() == b.n_qubits() {
            prop_assert_eq!(equivalent(&a, &b).unwrap(), equivalent(&b, &a).unwrap());
        }
    }

    #[test]
    fn reward_identities(a in circuit(), b in circuit()) {
        prop_assert!((fosel_reward(&a, &b) + fosel_reward(&b, &a)).abs() < 1e-12);
        if !a.is_empty() {
            prop_assert_eq!(ratio(&a, &a).unwrap(), 1.0);
            prop_assert_eq!(r_pow(&a, &a, Action::Reject, &RewardParams::default()).unwrap(), 0.0);
        }
        if !b.is_empty() {
            let r = ratio(&a, &b).unwrap();
            prop_assert_eq!(r > 1.0, a.depth() > b.depth());
        }
    }

    #[test]
    fn apply_reward_at_least_cost(c in circuit(), cost in 0.001f64..=0.2) {
        let p = RewardParams::new(cost).unwrap();
        for m in find_matches(&c) {
            let after = apply_match(&c, &m).unwrap();
            if let Ok(r) = r_pow(&c, &after, Action::Apply, &p) {
                prop_assert!(r >= cost);
            }
        }
    }

    #[test]
    fn signed_pow_is_odd(x in -50.0f64..50.0, p in 0.01f64..5.0) {
        prop_assert_eq!(signed_pow(-x, p), -signed_pow(x, p));
    }

    #[test]
    fn exponent_monotonicity(d in 0.01f64..5.0, r1 in 0.1f64..4.0, r2 in 0.1f64..4.0) {
        prop_assume!(r1 < r2 && (d - 1.0).abs() > 1e-6);
        if d > 1.0 {
            prop_assert!(signed_pow(d, r1) < signed_pow(d, r2));
        } else {
            prop_assert!(signed_pow(d, r1) > signed_pow(d, r2));
        }
    }
}

#[test]
fn bv_formulas() {
    for n in 2..=12u32 {
        let c = generate_bv(n).unwrap();
        assert_eq!(c.depth(), n as usize + 1);
        assert_eq!(c.gate_count(), 3 * n as usize - 1);
        assert_eq!(c.interaction_strength(), 2.0 / n as f64);
    }
}

#[test]
fn oracle_visits_only_equivalent_circuits() {
    let root = generate_bv(3).unwrap();
    let mut visited = 0;
    let r = qopt_core::bench::oracle::oracle_min_depth_observed(&root, 2000, |c| {
        assert!(equivalent(&root, c).unwrap(), "oracle admitted\n{c}");
        visited += 1;
    });
    assert_eq!(visited, r.nodes_explored);
    assert_eq!(r, oracle_min_depth(&root, 2000));
}

fn episode_config(n: u32, kind: RewardKind) -> AgentConfig {
    let mut cfg = AgentConfig::for_qubits(n, kind);
    cfg.epochs = 200;
    cfg
}

#[test]
fn episodes_stay_equivalent_and_bounded() {
    for n in 3..=5u32 {
        let start = generate_bv(n).unwrap();
        for kind in [RewardKind::Rpow, RewardKind::Ratio, RewardKind::Fosel] {
            let cfg = episode_config(n, kind);
            let mut q = QTable::new();
            let mut rng = agent_rng(n as u64);
            for epoch in 0..40 {
                let mut seen = 0;
                let ep = run_epoch_observed(&start, &mut q, epoch, &cfg, &mut rng, |c| {
                    seen += 1;
                    if seen % 5 == 1 {
                        assert!(equivalent(&start, c).unwrap());
                    }
                })
                .unwrap();
                let r = &ep.record;
                assert!(r.steps >= r.applied);
                assert!(r.final_depth <= start.depth() + 2 * cfg.max_steps);
                assert_eq!(r.final_depth, ep.final_circuit.depth());
                assert_eq!(r.final_count, ep.final_circuit.gate_count());
                assert_eq!(r.final_str, ep.final_circuit.interaction_strength());
                assert!(equivalent(&start, &ep.final_circuit).unwrap());
            }
        }
    }
}

/// Replays an episode by hand to check that cum_reward is the plain sum of
/// step rewards and that every Q value stays inside the reward bounds scaled
/// by 1 / (1 - gamma).
#[test]
fn cumulative_reward_and_q_bounds() {
    let start = generate_bv(4).unwrap();
    let cfg = episode_config(4, RewardKind::Rpow);
    let mut q = QTable::new();
    let mut rng = agent_rng(99);
    // R_pow rewards on BV lie in [0, cost_c]
    let (lo, hi) = (0.0, cfg.reward_params.cost_c());
    let bound = |v: f64| v >= lo / (1.0 - cfg.gamma) - 1e-12 && v <= hi / (1.0 - cfg.gamma) + 1e-12;
    for epoch in 0..cfg.epochs {
        let ep = run_epoch_observed(&start, &mut q, epoch, &cfg, &mut rng, |_| {}).unwrap();
        let expect = ep.record.applied as f64 * cfg.reward_params.cost_c();
        assert!((ep.record.cum_reward - expect).abs() < 1e-9);
        for (_, [r, a]) in q.entries() {
            assert!(bound(r) && bound(a), "q value out of bounds: {r} {a}");
        }
    }
}

#[test]
fn seeded_episode_stream_replays() {
    let start = parse_circuit("qubits 3\ncx 0 1\ncx 0 2\nh 1\nh 1\ncx 2 1\n").unwrap();
    let cfg = episode_config(3, RewardKind::Fosel);
    let run = || {
        let mut q = QTable::new();
        let mut rng = agent_rng(5);
        (0..30)
            .map(|e| run_epoch_observed(&start, &mut q, e, &cfg, &mut rng, |_| {}).unwrap().record)
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

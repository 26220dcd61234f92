//! Property tests tying the solvers to each other and to the oracle.

use proptest::prelude::*;

use semsel::knapsack::{
    brute_force_solve, dp_solve, dp_table, fptas_solve, integerize, validate_solution, Instance,
    Item, SolveOutcome,
};
use semsel::scenario::{
    eligible_models, generate_scenario, item_weight, scenario_to_instance, uplink_rate,
    ChannelParams, GenerationParams,
};

fn real_items() -> impl Strategy<Value = Vec<Item>> {
    prop::collection::vec(
        (0.0..100.0f64, 0.0..50.0f64).prop_map(|(w, v)| Item::new(w, v)),
        1..=4,
    )
}

fn integer_items() -> impl Strategy<Value = Vec<Item>> {
    prop::collection::vec(
        (0.0..100.0f64, 0..=50u64).prop_map(|(w, v)| Item::new(w, v as f64)),
        1..=4,
    )
}

prop_compose! {
    fn real_instance()(groups in prop::collection::vec(real_items(), 1..=5),
                       capacity in 0.0..300.0f64) -> Instance {
        Instance::new(groups, capacity).expect("generated fields are valid")
    }
}

prop_compose! {
    fn integer_instance()(groups in prop::collection::vec(integer_items(), 1..=5),
                          capacity in 0.0..300.0f64) -> Instance {
        Instance::new(groups, capacity).expect("generated fields are valid")
    }
}

fn eps_choice() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.05),
        Just(0.1),
        Just(0.2),
        Just(0.4),
        Just(0.7),
        Just(1.0)
    ]
}

proptest! {
    /// Every feasible solution from every solver selects exactly one item
    /// per group and carries consistent totals.
    #[test]
    fn solvers_emit_valid_solutions(instance in real_instance(), eps in eps_choice()) {
        let outcomes = [
            brute_force_solve(&instance).unwrap(),
            fptas_solve(&instance, eps).unwrap(),
        ];
        for outcome in &outcomes {
            if let SolveOutcome::Feasible(solution) = outcome {
                let report = validate_solution(&instance, solution);
                prop_assert!(report.is_valid(), "violations: {:?}", report.violations);
                prop_assert_eq!(solution.choices.len(), instance.group_count());
            }
        }
    }

    /// The exact DP agrees with full enumeration on feasibility and on the
    /// optimal value, exactly.
    #[test]
    fn dp_matches_the_oracle(instance in integer_instance()) {
        let oracle = brute_force_solve(&instance).unwrap();
        let dp = dp_solve(&integerize(&instance).unwrap()).unwrap();
        prop_assert_eq!(dp.is_feasible(), oracle.is_feasible());
        if let (Some(a), Some(b)) = (dp.value(), oracle.value()) {
            prop_assert_eq!(a, b);
        }
        if let SolveOutcome::Feasible(solution) = &dp {
            prop_assert!(validate_solution(&instance, solution).is_valid());
        }
    }

    /// The FPTAS is sandwiched between `(1 - eps)` of the optimum and the
    /// optimum, and is infeasible exactly when the oracle is.
    #[test]
    fn fptas_sandwich_and_completeness(instance in real_instance(), eps in eps_choice()) {
        let oracle = brute_force_solve(&instance).unwrap();
        let fptas = fptas_solve(&instance, eps).unwrap();
        prop_assert_eq!(fptas.is_feasible(), oracle.is_feasible());
        if let (Some(approx), Some(optimum)) = (fptas.value(), oracle.value()) {
            prop_assert!(approx >= (1.0 - eps) * optimum,
                "{approx} below (1-{eps}) x {optimum}");
            prop_assert!(approx <= optimum);
        }
    }

    /// Backtracking any reachable table cell re-sums to exactly its column
    /// value and exactly its recorded weight.
    #[test]
    fn dp_table_prefixes_resum_exactly(instance in integer_instance()) {
        let integral = integerize(&instance).unwrap();
        let table = dp_table(&integral).unwrap();
        for prefix in 1..=integral.group_count() {
            for value in 0..=table.max_total_value() {
                let Some(recorded_weight) = table.min_weight(prefix, value) else { continue };
                let mut remaining = value;
                let mut chosen = vec![0usize; prefix];
                for group in (0..prefix).rev() {
                    let item = table.choice(group, remaining).expect("reachable cell");
                    chosen[group] = item;
                    remaining -= integral.groups()[group][item].value;
                }
                prop_assert_eq!(remaining, 0);
                let resummed: u64 = (0..prefix).map(|g| integral.groups()[g][chosen[g]].value).sum();
                prop_assert_eq!(resummed, value);
                // bit-exact: summing in group order reproduces the exact
                // association the recursion used to build the cell
                let weight = (0..prefix).fold(0.0f64, |acc, g| integral.groups()[g][chosen[g]].weight + acc);
                prop_assert_eq!(weight, recorded_weight);
            }
        }
    }

    /// Raising the capacity never lowers the optimum.
    #[test]
    fn optimum_is_monotone_in_capacity(
        groups in prop::collection::vec(real_items(), 1..=5),
        lo in 0.0..300.0f64,
        delta in 0.0..300.0f64,
    ) {
        let tight = Instance::new(groups.clone(), lo).unwrap();
        let loose = Instance::new(groups, lo + delta).unwrap();
        let tight_value = brute_force_solve(&tight).unwrap().value();
        let loose_value = brute_force_solve(&loose).unwrap().value();
        match (tight_value, loose_value) {
            (Some(a), Some(b)) => prop_assert!(b >= a),
            (Some(_), None) => prop_assert!(false, "feasibility lost with more capacity"),
            _ => {}
        }
    }

    /// Value scaling lands every retained item in `[0, floor(M/eps)]`, so
    /// the scaled table stays polynomial in `M` and `1/eps`.
    #[test]
    fn scaled_values_stay_in_range(instance in real_instance(), eps in eps_choice()) {
        let group_count = instance.group_count() as f64;
        let cap = (group_count / eps).floor();
        let mut candidates: Vec<f64> = instance
            .groups()
            .iter()
            .flat_map(|g| g.items().iter().map(|i| i.value))
            .filter(|&v| v > 0.0)
            .collect();
        candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        candidates.dedup();
        for v_max in candidates {
            let theta = eps * v_max / group_count;
            let mut scaled_total = 0.0f64;
            for group in instance.groups() {
                let scaled_max = group
                    .items()
                    .iter()
                    .filter(|i| i.value <= v_max)
                    .map(|i| (i.value / theta).floor())
                    .fold(f64::NEG_INFINITY, f64::max);
                if scaled_max.is_finite() {
                    prop_assert!(scaled_max <= cap, "{scaled_max} > {cap}");
                    scaled_total += scaled_max;
                }
            }
            prop_assert!(scaled_total <= group_count * cap);
            prop_assert!(group_count * cap <= group_count * group_count / eps);
        }
    }

    /// The uplink rate grows strictly with bandwidth and with link gain;
    /// the reserved CPU rate shrinks strictly as the deadline loosens.
    #[test]
    fn physical_derivations_are_monotone(
        bandwidth in 1e6..1e8f64,
        extra_bandwidth in 1e5..1e7f64,
        gain in 1e-12..1e-6f64,
        gain_scale in 1.1..10.0f64,
        cycles in 1e6..1e9f64,
        upload in 0.1..1.0f64,
        slack in 0.01..2.0f64,
        extra_slack in 0.01..2.0f64,
    ) {
        let channel = ChannelParams { bandwidth_hz: bandwidth, tx_power_w: 0.1, noise_power_w: 1e-15 };
        let wider = ChannelParams { bandwidth_hz: bandwidth + extra_bandwidth, ..channel };
        prop_assert!(uplink_rate(&wider, gain).unwrap() > uplink_rate(&channel, gain).unwrap());
        prop_assert!(uplink_rate(&channel, gain * gain_scale).unwrap() > uplink_rate(&channel, gain).unwrap());

        let tight = item_weight(cycles, upload + slack, upload).unwrap();
        let loose = item_weight(cycles, upload + slack + extra_slack, upload).unwrap();
        prop_assert!(loose < tight);
    }

    /// The mapping loses nothing: the best total semantic rate over raw
    /// model assignments (enumerated directly from scenario fields, without
    /// the knapsack detour) equals the oracle optimum of the mapped
    /// instance, and raw unservability coincides with mapping failure.
    #[test]
    fn mapping_is_complete(seed in any::<u64>()) {
        let params = GenerationParams {
            devices: 3,
            classes: 2,
            models_per_class: 3,
            es_capacity_cycles_s: 1.2e9,
            ..GenerationParams::default()
        };
        let scenario = generate_scenario(&params, seed).unwrap();

        // raw route: per task, the models usable straight from the physics
        let mut usable: Vec<Vec<(usize, f64, f64)>> = Vec::new(); // (model, weight, rate)
        let mut task_hopeless = false;
        for task in &scenario.tasks {
            let device = &scenario.devices[task.device];
            let gain = 1e-3 * device.fading_gain / (device.distance_m * device.distance_m);
            let snr = scenario.channel.tx_power_w * gain / scenario.channel.noise_power_w;
            let rate = scenario.channel.bandwidth_hz * (1.0 + snr).log2();
            let upload = task.input_bits / rate;
            if upload >= task.max_delay_s {
                task_hopeless = true;
                break;
            }
            let eligible: Vec<(usize, f64, f64)> = scenario.models[task.class]
                .iter()
                .enumerate()
                .filter(|(_, m)| m.accuracy >= task.min_accuracy)
                .map(|(k, m)| (k, m.cycles / (task.max_delay_s - upload), m.semantic_rate_suts_s))
                .collect();
            if eligible.is_empty() {
                task_hopeless = true;
                break;
            }
            usable.push(eligible);
        }

        let mapped = scenario_to_instance(&scenario);
        prop_assert_eq!(mapped.is_err(), task_hopeless);
        let Ok(mapped) = mapped else { return Ok(()) };

        // exhaust raw assignments with an odometer over the usable sets
        let mut best_raw: Option<f64> = None;
        let mut counters = vec![0usize; usable.len()];
        loop {
            let mut reserved = 0.0f64;
            let mut total_rate = 0.0f64;
            for (t, &slot) in counters.iter().enumerate() {
                let (_, weight, rate) = usable[t][slot];
                reserved += weight;
                total_rate += rate;
            }
            if reserved <= scenario.es_capacity_cycles_s * (1.0 + 1e-12)
                && best_raw.is_none_or(|b| total_rate > b)
            {
                best_raw = Some(total_rate);
            }
            let mut advanced = false;
            for t in (0..counters.len()).rev() {
                counters[t] += 1;
                if counters[t] < usable[t].len() {
                    advanced = true;
                    break;
                }
                counters[t] = 0;
            }
            if !advanced {
                break;
            }
        }

        let oracle = brute_force_solve(&mapped.instance).unwrap();
        prop_assert_eq!(oracle.is_feasible(), best_raw.is_some());
        if let (Some(via_knapsack), Some(raw)) = (oracle.value(), best_raw) {
            let scale = raw.abs().max(via_knapsack.abs());
            prop_assert!((via_knapsack - raw).abs() <= 1e-12 * scale,
                "knapsack optimum {via_knapsack} vs raw optimum {raw}");
        }
    }

    /// Any feasible selection of a mapped scenario, decoded back to model
    /// assignments, satisfies the original constraints re-derived from raw
    /// scenario fields: one model per task, accuracy floors met, and total
    /// reserved CPU within the server budget.
    #[test]
    fn mapped_solutions_decode_to_valid_assignments(seed in any::<u64>()) {
        let params = GenerationParams { devices: 4, classes: 3, models_per_class: 6, ..GenerationParams::default() };
        let scenario = generate_scenario(&params, seed).unwrap();
        let Ok(mapped) = scenario_to_instance(&scenario) else {
            return Ok(()); // hopeless tasks are legitimate; nothing to decode
        };
        let Some(solution) = brute_force_solve(&mapped.instance).unwrap().solution().cloned() else {
            return Ok(());
        };

        prop_assert_eq!(solution.choices.len(), scenario.tasks.len());
        let mut reserved = 0.0f64;
        for choice in &solution.choices {
            let task = &scenario.tasks[choice.group];
            let model_id = mapped.model_ids[choice.group][choice.item];
            let model = &scenario.models[task.class][model_id];
            prop_assert!(model.accuracy >= task.min_accuracy);
            prop_assert!(
                eligible_models(task, &scenario.models[task.class]).any(|(k, _)| k == model_id)
            );

            // re-derive the CPU reservation from raw fields
            let device = &scenario.devices[task.device];
            let gain = 1e-3 * device.fading_gain / (device.distance_m * device.distance_m);
            let snr = scenario.channel.tx_power_w * gain / scenario.channel.noise_power_w;
            let rate = scenario.channel.bandwidth_hz * (1.0 + snr).log2();
            let upload = task.input_bits / rate;
            prop_assert!(upload < task.max_delay_s);
            reserved += model.cycles / (task.max_delay_s - upload);
        }
        prop_assert!(
            reserved <= scenario.es_capacity_cycles_s * (1.0 + 1e-9),
            "reserved {reserved} over budget {}",
            scenario.es_capacity_cycles_s
        );
    }
}

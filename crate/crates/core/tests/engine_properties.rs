use olsconv::ols::{prepare_filters, transform_filters};
use olsconv::oracle::{direct_convolve, max_relative_error};
use olsconv::postproc::apply_global;
use olsconv::synth::{random_filters, random_signal};
use olsconv::{Engine, EngineConfig, EngineVariant, Mode, PostProc, Samples, SegmentPlan, SegmentSize, ValueKind};
use proptest::prelude::*;

fn kind(mode: Mode) -> ValueKind {
    match mode {
        Mode::C2c => ValueKind::Complex,
        Mode::R2r => ValueKind::Real,
    }
}

fn mode_strategy() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::C2c), Just(Mode::R2r)]
}

fn bits(rows: &[Samples<f32>]) -> Vec<u32> {
    rows.iter()
        .flat_map(|r| (0..r.len()).flat_map(move |i| [r.get(i).re.to_bits(), r.get(i).im.to_bits()]))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn engine_matches_oracle(
        mode in mode_strategy(),
        ns in 1usize..3000,
        m in 1usize..80,
        nfil in 1usize..4,
        log_n in 0u32..4,
        origin_frac in 0.0f64..1.0,
        seed in any::<u64>(),
        pipelined in any::<bool>(),
    ) {
        let n = (m.next_power_of_two().max(8) << log_n).min(4096);
        let origin = ((m as f64) * origin_frac) as usize;
        let variant = if pipelined { EngineVariant::Pipelined } else { EngineVariant::Fused };
        let signal = random_signal::<f64>(ns, kind(mode), seed).unwrap();
        let filters = random_filters::<f64>(nfil, m, kind(mode), origin, seed ^ 1).unwrap();
        let plan = SegmentPlan::for_variant(variant, ns, m, mode, origin, SegmentSize::Fixed(n)).unwrap();
        let prepared = prepare_filters(&filters, &plan, variant).unwrap();
        let out = Engine::serial().convolve(&signal, &prepared, &plan, variant, &PostProc::None).unwrap();
        let reference = direct_convolve(&signal, &filters).unwrap();
        for (got, want) in out.iter().zip(&reference.outputs) {
            prop_assert!(max_relative_error(got, want) <= 1e-10);
        }
    }

    #[test]
    fn derivative_matches_global(
        mode in mode_strategy(),
        ns in 1usize..2000,
        m in 1usize..40,
        seed in any::<u64>(),
    ) {
        let n = (m + 2).next_power_of_two().max(8);
        let signal = random_signal::<f64>(ns, kind(mode), seed).unwrap();
        let filters = random_filters::<f64>(2, m, ValueKind::Real, 0, seed ^ 1).unwrap();
        let plan = SegmentPlan::new(ns, m, mode, 0, SegmentSize::Fixed(n)).unwrap();
        let prepared = transform_filters(&filters, &plan, plan.layout()).unwrap();
        let out = Engine::serial().convolve(&signal, &prepared, &plan, EngineVariant::Fused, &PostProc::Derivative).unwrap();
        let reference = direct_convolve(&signal, &filters).unwrap();
        for (got, want) in out.iter().zip(&reference.outputs) {
            let want = apply_global(want, &PostProc::Derivative).unwrap();
            prop_assert!(max_relative_error(got, &want) <= 1e-10);
        }
    }

    #[test]
    fn worker_count_does_not_change_bits(
        mode in mode_strategy(),
        ns in 1000usize..20000,
        m in 1usize..200,
        seed in any::<u64>(),
        postproc in prop_oneof![Just(PostProc::None), Just(PostProc::MagnitudeSquared), Just(PostProc::Derivative)],
    ) {
        let signal = random_signal::<f32>(ns, kind(mode), seed).unwrap();
        let filters = random_filters::<f32>(3, m, ValueKind::Real, m / 2, seed ^ 1).unwrap();
        let plan = SegmentPlan::new(ns, m, mode, m / 2, SegmentSize::Fixed(512)).unwrap();
        let prepared = transform_filters(&filters, &plan, plan.layout()).unwrap();
        let serial = Engine::serial().convolve(&signal, &prepared, &plan, EngineVariant::Fused, &postproc).unwrap();
        let parallel = Engine::new(EngineConfig { workers: 4, ..EngineConfig::default() }).unwrap();
        let fused = parallel.convolve(&signal, &prepared, &plan, EngineVariant::Fused, &postproc).unwrap();
        prop_assert_eq!(bits(&serial), bits(&fused));
    }
}

#[test]
fn variants_agree_on_a_filter_bank() {
    let (ns, m) = (50_000, 129);
    for mode in [Mode::C2c, Mode::R2r] {
        let signal = random_signal::<f64>(ns, kind(mode), 5).unwrap();
        let filters = random_filters::<f64>(4, m, ValueKind::Real, 64, 6).unwrap();
        let mut results = Vec::new();
        for variant in EngineVariant::ALL {
            let plan = SegmentPlan::for_variant(variant, ns, m, mode, 64, SegmentSize::Auto).unwrap();
            let prepared = prepare_filters(&filters, &plan, variant).unwrap();
            results.push(Engine::serial().convolve(&signal, &prepared, &plan, variant, &PostProc::Scale(0.5)).unwrap());
        }
        for other in &results[..3] {
            for (a, b) in other.iter().zip(&results[3]) {
                assert!(max_relative_error(a, b) <= 1e-10);
            }
        }
    }
}

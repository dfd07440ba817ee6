//! Every valid segment length for one filter bank: results agree to rounding
//! while run time changes.

use std::time::Instant;

use olsconv::ols::transform_filters;
use olsconv::oracle::max_relative_error;
use olsconv::synth::{random_filters, random_signal};
use olsconv::{Engine, EngineVariant, Mode, PostProc, SegmentPlan, SegmentSize, ValueKind};

fn main() -> olsconv::Result<()> {
    let (ns, m) = (1 << 20, 129);
    let signal = random_signal::<f32>(ns, ValueKind::Real, 3)?;
    let filters = random_filters::<f32>(4, m, ValueKind::Real, 0, 4)?;
    let engine = Engine::serial();

    let mut first = None;
    let mut n = m.next_power_of_two();
    while n <= 4096 {
        let plan = SegmentPlan::new(ns, m, Mode::R2r, 0, SegmentSize::Fixed(n))?;
        let prepared = transform_filters(&filters, &plan, plan.layout())?;
        let start = Instant::now();
        let out = engine.convolve(&signal, &prepared, &plan, EngineVariant::Fused, &PostProc::None)?;
        let elapsed = start.elapsed().as_secs_f64();
        let reference = first.get_or_insert_with(|| out.clone());
        let diff = out.iter().zip(reference.iter()).map(|(a, b)| max_relative_error(a, b)).fold(0.0, f64::max);
        println!(
            "N={n:5}  L={:5}  segments={:6}  {:7.2} ms  diff vs first {diff:.1e}",
            plan.valid_len(),
            plan.segment_count(),
            elapsed * 1e3
        );
        n *= 2;
    }
    Ok(())
}

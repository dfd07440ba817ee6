//! Derivative post-processing inside the segmented engine. Each segment
//! carries a one-sample halo, so seams match a derivative taken over the
//! whole convolved signal.

use olsconv::ols::transform_filters;
use olsconv::oracle::{direct_convolve, max_relative_error};
use olsconv::postproc::apply_global;
use olsconv::{Engine, EngineVariant, FilterSet, Mode, PostProc, SegmentPlan, SegmentSize, Signal};

fn main() -> olsconv::Result<()> {
    let ns = 5_000;
    let signal = Signal::real((0..ns).map(|i| (i as f64 * 0.01).sin() + 0.1 * (i as f64 * 0.37).cos()).collect())?;
    let filters = FilterSet::real(vec![vec![1.0 / 9.0; 9]], 4)?;
    let plan = SegmentPlan::new(ns, 9, Mode::R2r, 4, SegmentSize::Fixed(64))?;
    let geom = plan.geometry(PostProc::Derivative.halo())?;
    println!("N=64 M=9: {} segments, {} output samples each", geom.segments, geom.stride);

    let prepared = transform_filters(&filters, &plan, plan.layout())?;
    let fused = Engine::serial().convolve(&signal, &prepared, &plan, EngineVariant::Fused, &PostProc::Derivative)?;
    let global = apply_global(&direct_convolve(&signal, &filters)?.outputs[0], &PostProc::Derivative)?;
    println!("max rel err vs global derivative: {:.2e}", max_relative_error(&fused[0], &global));

    let seam = geom.output_window(1).start;
    let (a, b) = (fused[0].as_real().unwrap(), global.as_real().unwrap());
    for n in seam - 2..seam + 2 {
        println!("n={n:4}  {:+.10}  {:+.10}", a[n], b[n]);
    }
    Ok(())
}

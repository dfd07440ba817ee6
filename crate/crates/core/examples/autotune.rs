//! Pick the fastest segment length per filter length on this machine.

use olsconv::ols::{autotune_segment_size, TuneOptions};
use olsconv::{Engine, Mode};

fn main() -> olsconv::Result<()> {
    let engine = Engine::serial();
    let candidates = [256, 512, 1024, 2048, 4096];
    let options = TuneOptions {
        probe_len: 1 << 18,
        filters: 4,
        ..TuneOptions::default()
    };
    for m in [17, 65, 257, 1025] {
        let report = autotune_segment_size::<f32>(&engine, m, Mode::R2r, &candidates, &options)?;
        let times: Vec<String> = report.timings.iter().map(|(n, t)| format!("{n}:{:.1}ms", t * 1e3)).collect();
        println!("M={m:5} -> N={:5}   {}", report.chosen, times.join(" "));
    }
    Ok(())
}

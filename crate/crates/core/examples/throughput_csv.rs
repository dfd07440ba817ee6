//! A small benchmark sweep written as CSV to stdout. The same sweep can be
//! described in TOML and run with `olsconv bench`.

use olsconv::bench::{run_sweep, write_csv, SweepConfig};

const SWEEP: &str = r#"
variants = ["fused", "pipelined", "full_fft_baseline"]
modes = ["r2r"]
ns = [262144, 524288]
m = [65, 257]
nfil = [4]
n = ["auto"]
repeats = 3
warmup = 1
"#;

fn main() -> olsconv::Result<()> {
    let config = SweepConfig::from_toml(SWEEP)?;
    let outcome = run_sweep(&config)?;
    for skipped in &outcome.skipped {
        eprintln!("skipped {}: {}", skipped.description, skipped.reason);
    }
    write_csv(&outcome.records, std::io::stdout().lock())
}

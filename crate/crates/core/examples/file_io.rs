//! Write a signal and a filter bank to disk, read them back and store the
//! convolved outputs, once in the binary format and once as text.

use olsconv::io::{read_records, write_records, Format};
use olsconv::ols::transform_filters;
use olsconv::{Engine, EngineVariant, FilterSet, Mode, PostProc, Samples, SegmentPlan, SegmentSize, Signal};

fn main() -> olsconv::Result<()> {
    let dir = std::env::temp_dir().join("olsconv-file-io");
    std::fs::create_dir_all(&dir).map_err(|source| olsconv::Error::Io { path: dir.clone(), source })?;
    let (signal_path, filter_path) = (dir.join("signal.bin"), dir.join("filters.txt"));

    write_records(&signal_path, &[Samples::Real((0..32).map(|i| i as f32).collect())], Format::Binary)?;
    write_records(
        &filter_path,
        &[Samples::Real(vec![1.0f32, -1.0]), Samples::Real(vec![0.5f32, 0.5])],
        Format::Text,
    )?;

    let signal = Signal::<f32>::new(read_records(&signal_path)?[0].to_precision())?;
    let filters = FilterSet::<f32>::new(read_records(&filter_path)?.iter().map(|r| r.to_precision()).collect(), 0)?;
    let plan = SegmentPlan::new(signal.len(), filters.tap_length(), Mode::R2r, 0, SegmentSize::Auto)?;
    let prepared = transform_filters(&filters, &plan, plan.layout())?;
    let outputs = Engine::serial().convolve(&signal, &prepared, &plan, EngineVariant::Fused, &PostProc::None)?;

    for (path, format) in [(dir.join("out.bin"), Format::Binary), (dir.join("out.txt"), Format::Text)] {
        write_records(&path, &outputs, format)?;
        let size = std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
        println!("{} ({size} bytes, {} records)", path.display(), read_records(&path)?.len());
    }
    Ok(())
}

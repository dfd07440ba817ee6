use std::path::Path;
use std::process::{Command, Output};

use olsconv::bench::{read_csv, CSV_HEADER};
use olsconv::io::{read_records, write_records, Format};
use olsconv::oracle::{direct_convolve, max_relative_error};
use olsconv::synth::{random_filters, random_signal};
use olsconv::{EngineVariant, Samples, ValueKind};

fn olsconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_olsconv")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn delta_filter_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("signal.bin");
    let filter = dir.path().join("delta.txt");
    let output = dir.path().join("out.bin");
    let samples = vec![0.5f32, -1.25, 3.0, 7.5, -0.125, 2.0, 9.0, 1.0, 0.0, -4.0];
    write_records(&input, &[Samples::Real(samples.clone())], Format::Binary).unwrap();
    std::fs::write(&filter, "1\n").unwrap();
    let run = olsconv(&["convolve", "-i", path(&input), "--filter-file", path(&filter), "-o", path(&output)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let records = read_records(&output).unwrap();
    assert_eq!(records.len(), 1);
    assert!(max_relative_error(&records[0].to_precision::<f32>(), &Samples::Real(samples)) <= 1e-6);
}

#[test]
fn generated_filter_bank_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("bank.bin");
    let run = olsconv(&[
        "convolve", "--mode", "r2r", "--fft-len", "1024", "--filters", "8", "--filter-len", "100", "--signal-len",
        "20000", "--seed", "11", "-o", path(&output),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let records = read_records(&output).unwrap();
    assert_eq!(records.len(), 8);
    let signal = random_signal::<f32>(20000, ValueKind::Real, 11).unwrap();
    let filters = random_filters::<f32>(8, 100, ValueKind::Real, 0, 11 ^ 1).unwrap();
    let reference = direct_convolve(&signal, &filters).unwrap();
    for (record, want) in records.iter().zip(&reference.outputs) {
        assert!(max_relative_error(&record.to_precision::<f32>(), want) <= 1e-4);
    }
}

#[test]
fn missing_file_exits_2_and_names_it() {
    let run = olsconv(&["convolve", "-i", "/nonexistent/signal.bin", "-o", "/tmp/never.bin"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("/nonexistent/signal.bin"));
}

#[test]
fn plan_errors_exit_2() {
    let run = olsconv(&["convolve", "--filter-len", "100", "--fft-len", "64", "--signal-len", "500", "-o", "/tmp/x.bin"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(!run.stderr.is_empty());
}

#[test]
fn verify_exit_codes() {
    let args = ["verify", "--signal-len", "400", "--filter-len", "3,33", "--filters", "1,2"];
    let ok = olsconv(&args);
    assert_eq!(ok.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(stdout.matches("PASS").count(), 8);

    let double = olsconv(&[&args[..], &["--precision", "double"]].concat());
    assert!(String::from_utf8_lossy(&double.stdout).contains("tol=1e-10"));

    let corrupt = olsconv(&[&args[..], &["--corrupt"]].concat());
    assert_eq!(corrupt.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&corrupt.stdout).contains("FAIL"));
}

#[test]
fn bench_writes_parseable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &config,
        "variants = [\"fused\", \"pipelined\"]\nns = [5000]\nm = [17, 65, 9000]\nnfil = [2]\nn = [\"auto\"]\nrepeats = 1\nwarmup = 0\n",
    )
    .unwrap();
    let run = olsconv(&["bench", path(&config), "--csv", path(&csv)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let records = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(records.len(), 5);
    assert_eq!(records[0].variant, EngineVariant::Fused);
    assert_eq!(records[1].variant, EngineVariant::Pipelined);
    assert!(String::from_utf8_lossy(&run.stderr).contains("m=9000"));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with(CSV_HEADER));
}

#[test]
fn empty_sweep_prints_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("empty.toml");
    std::fs::write(&config, "ns = []\nm = [3]\nnfil = [1]\n").unwrap();
    let run = olsconv(&["bench", path(&config)]);
    assert!(run.status.success());
    assert_eq!(String::from_utf8(run.stdout).unwrap(), format!("{CSV_HEADER}\n"));
}

#[test]
fn tune_reports_each_filter_length() {
    let run = olsconv(&["tune", "--filter-len", "17,65", "--candidates", "128,256", "--probe-len", "8192", "--repeats", "1"]);
    assert!(run.status.success());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("m=17 chosen="));
    assert!(stdout.contains("m=65 chosen="));
}

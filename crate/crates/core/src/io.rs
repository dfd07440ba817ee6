//! Signal and filter files.
//!
//! Binary files are one or more records, each a 16-byte header followed by
//! little-endian samples (complex values interleaved `re, im`):
//!
//! ```text
//! offset  size  field
//!      0     4  magic "OLS1"
//!      4     1  value kind: 0 = real, 1 = complex
//!      5     1  precision:  0 = single (f32), 1 = double (f64)
//!      6     2  reserved, zero
//!      8     8  sample count, u64 LE
//! ```
//!
//! Text files hold one sample per line (two columns for complex), records
//! separated by blank lines; `#` starts a comment. A signal file carries one
//! record, a filter file one record per filter.

use std::fs;
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::types::{Precision, Real, Samples, ValueKind};

pub const MAGIC: &[u8; 4] = b"OLS1";
pub const HEADER_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Binary,
    Text,
}

impl Format {
    /// `.txt` and `.text` paths are text; everything else is binary.
    pub fn for_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("txt" | "text") => Format::Text,
            _ => Format::Binary,
        }
    }
}

/// One decoded record. Samples are widened to `f64`, which is exact for
/// single-precision files.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub precision: Precision,
    pub samples: Samples<f64>,
}

impl Record {
    pub fn to_precision<T: Real>(&self) -> Samples<T> {
        self.samples.cast()
    }
}

pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let format_err = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    if bytes.starts_with(MAGIC) {
        decode_binary(&bytes).map_err(format_err)
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| format_err("neither an OLS1 file nor UTF-8 text".into()))?;
        parse_text(text).map_err(format_err)
    }
}

pub fn write_records<T: Real>(path: &Path, records: &[Samples<T>], format: Format) -> Result<()> {
    let bytes = match format {
        Format::Binary => encode_binary(records),
        Format::Text => format_text(records).into_bytes(),
    };
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn encode_binary<T: Real>(records: &[Samples<T>]) -> Vec<u8> {
    let mut out = Vec::new();
    for record in records {
        out.extend_from_slice(MAGIC);
        out.push(match record.kind() {
            ValueKind::Real => 0,
            ValueKind::Complex => 1,
        });
        out.push(match T::PRECISION {
            Precision::Single => 0,
            Precision::Double => 1,
        });
        out.extend_from_slice(&[0, 0]);
        out.extend_from_slice(&(record.len() as u64).to_le_bytes());
        match record {
            Samples::Real(v) => v.iter().for_each(|x| x.write_le(&mut out)),
            Samples::Complex(v) => v.iter().for_each(|z| {
                z.re.write_le(&mut out);
                z.im.write_le(&mut out);
            }),
        }
    }
    out
}

pub fn decode_binary(mut bytes: &[u8]) -> Result<Vec<Record>, String> {
    let mut records = Vec::new();
    while !bytes.is_empty() {
        if bytes.len() < HEADER_LEN {
            return Err(format!("truncated header in record {}", records.len()));
        }
        let (header, rest) = bytes.split_at(HEADER_LEN);
        if &header[..4] != MAGIC {
            return Err(format!("bad magic in record {}", records.len()));
        }
        let complex = match header[4] {
            0 => false,
            1 => true,
            k => return Err(format!("unknown value kind {k}")),
        };
        let precision = match header[5] {
            0 => Precision::Single,
            1 => Precision::Double,
            p => return Err(format!("unknown precision code {p}")),
        };
        let count = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        let width = match precision {
            Precision::Single => 4,
            Precision::Double => 8,
        };
        let scalars = if complex { 2 * count } else { count };
        let body_len = scalars
            .checked_mul(width)
            .filter(|&n| n <= rest.len())
            .ok_or_else(|| format!("record {} declares {count} samples but the file is shorter", records.len()))?;
        let (body, tail) = rest.split_at(body_len);
        let values: Vec<f64> = match precision {
            Precision::Single => body.chunks_exact(4).map(|c| f32::read_le(c) as f64).collect(),
            Precision::Double => body.chunks_exact(8).map(f64::read_le).collect(),
        };
        let samples = if complex {
            Samples::Complex(values.chunks_exact(2).map(|p| Complex::new(p[0], p[1])).collect())
        } else {
            Samples::Real(values)
        };
        records.push(Record { precision, samples });
        bytes = tail;
    }
    if records.is_empty() {
        return Err("file holds no records".into());
    }
    Ok(records)
}

pub fn parse_text(text: &str) -> Result<Vec<Record>, String> {
    let mut records = Vec::new();
    let mut current: Vec<Vec<f64>> = Vec::new();
    let mut flush = |current: &mut Vec<Vec<f64>>| -> Result<(), String> {
        if current.is_empty() {
            return Ok(());
        }
        let cols = current[0].len();
        if current.iter().any(|r| r.len() != cols) {
            return Err(format!("record {} mixes real and complex lines", records.len()));
        }
        let samples = match cols {
            1 => Samples::Real(current.iter().map(|r| r[0]).collect()),
            _ => Samples::Complex(current.iter().map(|r| Complex::new(r[0], r[1])).collect()),
        };
        records.push(Record {
            precision: Precision::Double,
            samples,
        });
        current.clear();
        Ok(())
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            flush(&mut current)?;
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| format!("line {}: `{t}` is not a number", lineno + 1)))
            .collect::<Result<Vec<f64>, String>>()?;
        if row.len() > 2 {
            return Err(format!("line {}: expected one or two columns", lineno + 1));
        }
        current.push(row);
    }
    flush(&mut current)?;
    if records.is_empty() {
        return Err("file holds no samples".into());
    }
    Ok(records)
}

pub fn format_text<T: Real>(records: &[Samples<T>]) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match record {
            Samples::Real(v) => v.iter().for_each(|x| out.push_str(&format!("{x}\n"))),
            Samples::Complex(v) => v.iter().for_each(|z| out.push_str(&format!("{} {}\n", z.re, z.im))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let bytes = encode_binary(&[Samples::Complex(vec![Complex::new(1.0f32, -2.0)])]);
        assert_eq!(&bytes[..4], b"OLS1");
        assert_eq!(bytes[4], 1);
        assert_eq!(bytes[5], 0);
        assert_eq!(&bytes[6..8], &[0, 0]);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1);
        assert_eq!(bytes.len(), 16 + 8);
        assert_eq!(&bytes[16..20], &1.0f32.to_le_bytes());
    }

    #[test]
    fn rejects_truncated() {
        let mut bytes = encode_binary(&[Samples::Real(vec![1.0f64, 2.0])]);
        bytes.pop();
        assert!(decode_binary(&bytes).is_err());
        assert!(decode_binary(&bytes[..10]).is_err());
    }

    #[test]
    fn text_records() {
        let text = "# two filters\n1\n1\n\n1\n-1\n";
        let recs = parse_text(text).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].samples, Samples::Real(vec![1.0, -1.0]));
        let recs = parse_text("1 0\n0, 1\n").unwrap();
        assert_eq!(recs[0].samples.kind(), ValueKind::Complex);
        assert!(parse_text("1\n1 2\n").is_err());
        assert!(parse_text("abc\n").is_err());
        assert!(parse_text("# nothing\n\n").is_err());
    }

    proptest! {
        #[test]
        fn binary_round_trip_is_bit_exact(v in prop::collection::vec(-1e30f32..1e30, 1..64), complex in any::<bool>()) {
            let samples = if complex {
                Samples::Complex(v.chunks(2).map(|c| Complex::new(c[0], *c.get(1).unwrap_or(&0.0))).collect())
            } else {
                Samples::Real(v.clone())
            };
            let decoded = decode_binary(&encode_binary(&[samples.clone(), samples.clone()])).unwrap();
            prop_assert_eq!(decoded.len(), 2);
            prop_assert_eq!(decoded[0].precision, Precision::Single);
            let back: Samples<f32> = decoded[1].to_precision();
            let bits = |s: &Samples<f32>| (0..s.len()).flat_map(|i| { let z = s.get(i); [z.re.to_bits(), z.im.to_bits()] }).collect::<Vec<_>>();
            prop_assert_eq!(bits(&back), bits(&samples));
        }

        #[test]
        fn text_round_trip_is_exact(v in prop::collection::vec(-1e6f64..1e6, 1..32)) {
            let text = format_text(&[Samples::Real(v.clone())]);
            let recs = parse_text(&text).unwrap();
            prop_assert_eq!(&recs[0].samples, &Samples::Real(v));
        }
    }
}

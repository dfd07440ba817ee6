//! Sample types, precision selection and the signal / filter containers shared
//! by every convolution path.

use std::fmt;
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::SpectrumLayout;

/// One complex value in the working precision.
pub type ComplexSample<T> = Complex<T>;

/// Floating-point scalar the engine can run in.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Default + Send + Sync + fmt::Debug + fmt::Display + 'static
{
    const PRECISION: Precision;
    /// Size of one scalar in bytes.
    const BYTES: usize;

    fn lit(v: f64) -> Self;
    fn as_f64(self) -> f64;
    fn write_le(self, out: &mut Vec<u8>);
    /// Panics if `bytes` is shorter than `Self::BYTES`.
    fn read_le(bytes: &[u8]) -> Self;
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Single;
    const BYTES: usize = 4;

    fn lit(v: f64) -> Self {
        v as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn read_le(bytes: &[u8]) -> Self {
        f32::from_le_bytes(bytes[..4].try_into().unwrap())
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Double;
    const BYTES: usize = 8;

    fn lit(v: f64) -> Self {
        v
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn read_le(bytes: &[u8]) -> Self {
        f64::from_le_bytes(bytes[..8].try_into().unwrap())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    /// Oracle-equivalence tolerance on the L-infinity error normalised by the
    /// peak output magnitude.
    pub fn convolution_tolerance(self) -> f64 {
        match self {
            Precision::Single => 1e-4,
            Precision::Double => 1e-10,
        }
    }

    /// Tolerance for transform kernels against the literal DFT.
    pub fn fft_tolerance(self) -> f64 {
        match self {
            Precision::Single => 1e-5,
            Precision::Double => 1e-12,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Precision::Single => "single",
            Precision::Double => "double",
        })
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            other => Err(Error::Parse(format!("unknown precision `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Time,
    Frequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Real,
    Complex,
}

/// A sequence of samples with a real-scalar or complex backing store.
#[derive(Debug, Clone, PartialEq)]
pub enum Samples<T> {
    Real(Vec<T>),
    Complex(Vec<Complex<T>>),
}

impl<T: Real> Samples<T> {
    pub fn len(&self) -> usize {
        match self {
            Samples::Real(v) => v.len(),
            Samples::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            Samples::Real(_) => ValueKind::Real,
            Samples::Complex(_) => ValueKind::Complex,
        }
    }

    pub fn as_real(&self) -> Option<&[T]> {
        match self {
            Samples::Real(v) => Some(v),
            Samples::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&[Complex<T>]> {
        match self {
            Samples::Complex(v) => Some(v),
            Samples::Real(_) => None,
        }
    }

    /// Sample `i` promoted to complex.
    pub fn get(&self, i: usize) -> Complex<T> {
        match self {
            Samples::Real(v) => Complex::new(v[i], T::zero()),
            Samples::Complex(v) => v[i],
        }
    }

    pub fn to_complex(&self) -> Vec<Complex<T>> {
        match self {
            Samples::Real(v) => v.iter().map(|&x| Complex::new(x, T::zero())).collect(),
            Samples::Complex(v) => v.clone(),
        }
    }

    /// Index of the first NaN or infinite component, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        match self {
            Samples::Real(v) => v.iter().position(|x| !x.is_finite()),
            Samples::Complex(v) => v.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())),
        }
    }

    /// Convert to another precision (rounding when narrowing).
    pub fn cast<U: Real>(&self) -> Samples<U> {
        match self {
            Samples::Real(v) => Samples::Real(v.iter().map(|&x| U::lit(x.as_f64())).collect()),
            Samples::Complex(v) => Samples::Complex(
                v.iter()
                    .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                    .collect(),
            ),
        }
    }
}

/// A long one-dimensional signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    samples: Samples<T>,
    domain: Domain,
}

impl<T: Real> Signal<T> {
    /// Builds a time-domain signal.
    pub fn new(samples: Samples<T>) -> Result<Self> {
        Self::in_domain(samples, Domain::Time)
    }

    pub fn in_domain(samples: Samples<T>, domain: Domain) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(index) = samples.first_non_finite() {
            return Err(Error::NonFinite { index });
        }
        Ok(Signal { samples, domain })
    }

    pub fn real(values: Vec<T>) -> Result<Self> {
        Self::new(Samples::Real(values))
    }

    pub fn complex(values: Vec<Complex<T>>) -> Result<Self> {
        Self::new(Samples::Complex(values))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a signal holds at least one sample.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn value_kind(&self) -> ValueKind {
        self.samples.kind()
    }

    pub fn samples(&self) -> &Samples<T> {
        &self.samples
    }

    pub fn into_samples(self) -> Samples<T> {
        self.samples
    }
}

/// Frequency-domain filters, all transformed with one forward variant.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpectra<T> {
    pub layout: SpectrumLayout,
    pub fft_len: usize,
    /// One spectrum per filter: `fft_len` bins, or `fft_len / 2 + 1` for
    /// half-packed real spectra.
    pub bins: Vec<Vec<Complex<T>>>,
}

/// A bank of equal-length FIR filters sharing one origin.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet<T> {
    taps: Vec<Samples<T>>,
    tap_length: usize,
    origin: usize,
    spectra: Option<FilterSpectra<T>>,
}

impl<T: Real> FilterSet<T> {
    pub fn new(taps: Vec<Samples<T>>, origin: usize) -> Result<Self> {
        let first = taps.first().ok_or(Error::EmptyInput)?;
        let tap_length = first.len();
        let kind = first.kind();
        if tap_length == 0 {
            return Err(Error::EmptyInput);
        }
        for filter in &taps {
            if filter.len() != tap_length {
                return Err(Error::RaggedFilters {
                    expected: tap_length,
                    found: filter.len(),
                });
            }
            if filter.kind() != kind {
                return Err(Error::KindMismatch("filters mix real and complex taps"));
            }
            if let Some(index) = filter.first_non_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        if origin >= tap_length {
            return Err(Error::BadOrigin {
                origin,
                taps: tap_length,
            });
        }
        Ok(FilterSet {
            taps,
            tap_length,
            origin,
            spectra: None,
        })
    }

    pub fn real(taps: Vec<Vec<T>>, origin: usize) -> Result<Self> {
        Self::new(taps.into_iter().map(Samples::Real).collect(), origin)
    }

    pub fn complex(taps: Vec<Vec<Complex<T>>>, origin: usize) -> Result<Self> {
        Self::new(taps.into_iter().map(Samples::Complex).collect(), origin)
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    /// Always false; a filter set holds at least one filter.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tap_length(&self) -> usize {
        self.tap_length
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn value_kind(&self) -> ValueKind {
        self.taps[0].kind()
    }

    pub fn taps(&self) -> &[Samples<T>] {
        &self.taps
    }

    pub fn spectra(&self) -> Option<&FilterSpectra<T>> {
        self.spectra.as_ref()
    }

    /// Attaches spectra; the cache is write-once.
    pub(crate) fn with_spectra(&self, spectra: FilterSpectra<T>) -> Self {
        debug_assert_eq!(spectra.bins.len(), self.taps.len());
        FilterSet {
            taps: self.taps.clone(),
            tap_length: self.tap_length,
            origin: self.origin,
            spectra: Some(spectra),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_signal_examples() {
        let s = Signal::real(vec![1.0f32]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.domain(), Domain::Time);
        assert_eq!(s.value_kind(), ValueKind::Real);

        let s = Signal::complex(vec![Complex::new(1.0f64, 0.0), Complex::new(0.0, 1.0)]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.value_kind(), ValueKind::Complex);

        assert!(matches!(Signal::<f64>::real(vec![]), Err(Error::EmptyInput)));
    }

    #[test]
    fn rejects_non_finite() {
        let err = Signal::real(vec![1.0f32, f32::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 1 }));
        let err = FilterSet::real(vec![vec![f64::INFINITY]], 0).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 0 }));
    }

    #[test]
    fn make_filterset_examples() {
        let f = FilterSet::real(vec![vec![1.0f64]], 0).unwrap();
        assert_eq!((f.len(), f.tap_length(), f.origin()), (1, 1, 0));
        assert!(f.spectra().is_none());

        let f = FilterSet::real(vec![vec![1.0f64, 1.0], vec![1.0, -1.0]], 0).unwrap();
        assert_eq!((f.len(), f.tap_length()), (2, 2));

        let err = FilterSet::real(vec![vec![1.0f64], vec![1.0, 1.0]], 0).unwrap_err();
        assert!(matches!(err, Error::RaggedFilters { expected: 1, found: 2 }));
    }

    #[test]
    fn filterset_origin_and_kinds() {
        assert!(FilterSet::real(vec![vec![1.0f32; 3]], 2).is_ok());
        assert!(matches!(
            FilterSet::real(vec![vec![1.0f32; 3]], 3),
            Err(Error::BadOrigin { origin: 3, taps: 3 })
        ));
        assert!(matches!(FilterSet::<f32>::real(vec![], 0), Err(Error::EmptyInput)));
        assert!(matches!(FilterSet::<f32>::real(vec![vec![]], 0), Err(Error::EmptyInput)));
        let mixed = vec![
            Samples::Real(vec![1.0f32]),
            Samples::Complex(vec![Complex::new(1.0, 0.0)]),
        ];
        assert!(matches!(FilterSet::new(mixed, 0), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn precision_parsing() {
        assert_eq!("single".parse::<Precision>().unwrap(), Precision::Single);
        assert_eq!("double".parse::<Precision>().unwrap(), Precision::Double);
        assert!("half".parse::<Precision>().is_err());
        assert_eq!(Precision::Double.to_string(), "double");
    }

    #[test]
    fn cast_widening_is_exact() {
        let s = Samples::Real(vec![0.1f32, -3.25, 1e-7]);
        let wide: Samples<f64> = s.cast();
        let back: Samples<f32> = wide.cast();
        assert_eq!(back, s);
    }
}

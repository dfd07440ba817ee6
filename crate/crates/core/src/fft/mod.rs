//! Power-of-two transform kernels used by the convolution engines.
//!
//! Three plan variants share one twiddle table layout:
//!
//! * [`FftVariant::CtDifPermuted`]: radix-2 Cooley-Tukey, decimation in
//!   frequency, with the bit-reversal pass left out. The forward transform
//!   leaves the spectrum in bit-reversed order and the matching inverse
//!   consumes that order directly. Pointwise products do not care about bin
//!   order as long as both operands share it, so convolution never pays for
//!   the reorder. Not useful as a general-purpose FFT.
//! * [`FftVariant::Stockham`]: auto-sort radix-2 transform with a ping-pong
//!   scratch buffer; natural order in and out.
//! * [`FftVariant::RealPacked`]: `N` reals packed into `N/2` complex values,
//!   a length-`N/2` Stockham transform, then an even/odd split that yields
//!   bins `0..=N/2`.
//!
//! Forward transforms are unscaled; inverses carry the `1/N`.

mod kernels;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::types::{Precision, Real};

/// Largest transform length accepted by [`FftPlan::new`].
pub const DEFAULT_MAX_FFT_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FftVariant {
    CtDifPermuted,
    Stockham,
    RealPacked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Bin ordering of a stored spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumLayout {
    Natural,
    /// Bin `k` stored at index `bit_reverse(k)`; only produced and consumed
    /// by [`FftVariant::CtDifPermuted`] plans.
    BitReversed,
    /// Bins `0..=N/2` of a real-input transform.
    HalfPacked,
}

#[derive(Debug, Clone)]
pub struct FftPlan<T> {
    len: usize,
    variant: FftVariant,
    twiddles: Vec<Complex<T>>,
}

impl<T: Real> FftPlan<T> {
    pub fn new(len: usize, variant: FftVariant) -> Result<Self> {
        Self::with_max_len(len, variant, DEFAULT_MAX_FFT_LEN)
    }

    pub fn with_max_len(len: usize, variant: FftVariant, max_len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::BadLength {
                len,
                reason: "not a power of two",
            });
        }
        if len < 4 {
            return Err(Error::BadLength {
                len,
                reason: "shorter than 4",
            });
        }
        if len > max_len {
            return Err(Error::BadLength {
                len,
                reason: "longer than the configured maximum",
            });
        }
        if variant == FftVariant::RealPacked && len < 8 {
            return Err(Error::BadLength {
                len,
                reason: "real packing needs at least 8 samples",
            });
        }
        let twiddles = (0..len / 2)
            .map(|j| {
                let angle = -2.0 * std::f64::consts::PI * j as f64 / len as f64;
                let (s, c) = angle.sin_cos();
                Complex::new(T::lit(c), T::lit(s))
            })
            .collect();
        Ok(FftPlan {
            len,
            variant,
            twiddles,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; plans have at least four points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn variant(&self) -> FftVariant {
        self.variant
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    /// `exp(-2*pi*i*j/N)` for `j < N/2`.
    pub fn twiddles(&self) -> &[Complex<T>] {
        &self.twiddles
    }

    /// Layout of the spectra this plan's forward transform produces.
    pub fn layout(&self) -> SpectrumLayout {
        match self.variant {
            FftVariant::CtDifPermuted => SpectrumLayout::BitReversed,
            FftVariant::Stockham => SpectrumLayout::Natural,
            FftVariant::RealPacked => SpectrumLayout::HalfPacked,
        }
    }

    /// Number of complex bins in a spectrum from this plan.
    pub fn spectrum_len(&self) -> usize {
        match self.variant {
            FftVariant::RealPacked => self.len / 2 + 1,
            _ => self.len,
        }
    }

    fn expect(&self, variant: FftVariant) -> Result<()> {
        if self.variant != variant {
            return Err(Error::VariantMismatch {
                expected: variant,
                found: self.variant,
            });
        }
        Ok(())
    }

    fn check_len(&self, got: usize, expected: usize) -> Result<()> {
        if got != expected {
            return Err(Error::BadLength {
                len: got,
                reason: "buffer length does not match the plan",
            });
        }
        Ok(())
    }

    /// In-place forward transform; the result is in bit-reversed order.
    pub fn forward_permuted(&self, buf: &mut [Complex<T>]) -> Result<()> {
        self.expect(FftVariant::CtDifPermuted)?;
        self.check_len(buf.len(), self.len)?;
        kernels::dif_forward(buf, &self.twiddles);
        Ok(())
    }

    /// In-place inverse of [`Self::forward_permuted`]; bit-reversed in,
    /// natural out, scaled by `1/N`.
    pub fn inverse_permuted(&self, buf: &mut [Complex<T>]) -> Result<()> {
        self.expect(FftVariant::CtDifPermuted)?;
        self.check_len(buf.len(), self.len)?;
        kernels::dit_inverse(buf, &self.twiddles);
        Ok(())
    }

    pub fn stockham(&self, buf: &mut [Complex<T>], direction: Direction) -> Result<()> {
        let mut scratch = vec![Complex::default(); self.len];
        self.stockham_with_scratch(buf, &mut scratch, direction)
    }

    /// As [`Self::stockham`] with a caller-provided ping-pong buffer of
    /// length `N`.
    pub fn stockham_with_scratch(
        &self,
        buf: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
        direction: Direction,
    ) -> Result<()> {
        self.expect(FftVariant::Stockham)?;
        self.check_len(buf.len(), self.len)?;
        self.check_len(scratch.len(), self.len)?;
        kernels::stockham(buf, scratch, &self.twiddles, direction == Direction::Inverse);
        Ok(())
    }

    /// Real-input forward transform: `N` reals to bins `0..=N/2`.
    pub fn rfft(&self, input: &[T], output: &mut [Complex<T>]) -> Result<()> {
        let mut scratch = vec![Complex::default(); self.len];
        self.rfft_with_scratch(input, output, &mut scratch)
    }

    /// As [`Self::rfft`] with a caller-provided scratch buffer of length `N`
    /// (two half-length complex buffers).
    pub fn rfft_with_scratch(
        &self,
        input: &[T],
        output: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
    ) -> Result<()> {
        self.expect(FftVariant::RealPacked)?;
        self.check_len(input.len(), self.len)?;
        self.check_len(output.len(), self.len / 2 + 1)?;
        self.check_len(scratch.len(), self.len)?;
        let h = self.len / 2;
        let (packed, pong) = scratch.split_at_mut(h);
        for (z, pair) in packed.iter_mut().zip(input.chunks_exact(2)) {
            *z = Complex::new(pair[0], pair[1]);
        }
        kernels::stockham(packed, pong, &self.twiddles, false);
        kernels::real_split(packed, output, &self.twiddles);
        Ok(())
    }

    /// Inverse of [`Self::rfft`], scaled by `1/N`. Edge bins `0` and `N/2`
    /// must be real.
    pub fn irfft(&self, input: &[Complex<T>], output: &mut [T]) -> Result<()> {
        self.expect(FftVariant::RealPacked)?;
        self.check_len(input.len(), self.len / 2 + 1)?;
        let peak = input.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let tol = T::epsilon().sqrt() * peak.max(T::one());
        let h = self.len / 2;
        for edge in [input[0], input[h]] {
            if edge.im.abs() > tol {
                return Err(Error::BadSpectrum {
                    imag: edge.im.as_f64(),
                });
            }
        }
        let mut scratch = vec![Complex::default(); self.len];
        self.irfft_with_scratch(input, output, &mut scratch)
    }

    /// As [`Self::irfft`] with caller-provided scratch of length `N`. Skips
    /// the edge-bin check; imaginary parts of the edge bins are ignored.
    pub fn irfft_with_scratch(
        &self,
        input: &[Complex<T>],
        output: &mut [T],
        scratch: &mut [Complex<T>],
    ) -> Result<()> {
        self.expect(FftVariant::RealPacked)?;
        self.check_len(input.len(), self.len / 2 + 1)?;
        self.check_len(output.len(), self.len)?;
        self.check_len(scratch.len(), self.len)?;
        let h = self.len / 2;
        let (packed, pong) = scratch.split_at_mut(h);
        kernels::real_merge(input, packed, &self.twiddles);
        kernels::stockham(packed, pong, &self.twiddles, true);
        for (pair, z) in output.chunks_exact_mut(2).zip(packed.iter()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    }

    /// Forward transform in this plan's native layout. Complex plans only.
    pub fn forward_native(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) -> Result<()> {
        match self.variant {
            FftVariant::CtDifPermuted => self.forward_permuted(buf),
            FftVariant::Stockham => self.stockham_with_scratch(buf, scratch, Direction::Forward),
            FftVariant::RealPacked => Err(Error::VariantMismatch {
                expected: FftVariant::Stockham,
                found: self.variant,
            }),
        }
    }

    /// Inverse transform consuming this plan's native layout. Complex plans only.
    pub fn inverse_native(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) -> Result<()> {
        match self.variant {
            FftVariant::CtDifPermuted => self.inverse_permuted(buf),
            FftVariant::Stockham => self.stockham_with_scratch(buf, scratch, Direction::Inverse),
            FftVariant::RealPacked => Err(Error::VariantMismatch {
                expected: FftVariant::Stockham,
                found: self.variant,
            }),
        }
    }
}

/// Reverses the low `bits` bits of `i`.
pub fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        return 0;
    }
    i.reverse_bits() >> (usize::BITS - bits)
}

/// Reorders a bit-reversed spectrum into natural order.
pub fn unpermute<T: Copy>(buf: &[T]) -> Vec<T> {
    let bits = buf.len().trailing_zeros();
    (0..buf.len()).map(|k| buf[bit_reverse(k, bits)]).collect()
}

/// Reorders a natural-order spectrum into bit-reversed order.
pub fn permute<T: Copy>(buf: &[T]) -> Vec<T> {
    // Bit reversal is an involution.
    unpermute(buf)
}

/// Literal O(N^2) DFT, accumulated in double precision. Any length; the
/// inverse carries `1/N`.
pub fn naive_dft<T: Real>(buf: &[Complex<T>], direction: Direction) -> Vec<Complex<T>> {
    let n = buf.len();
    if n == 0 {
        return Vec::new();
    }
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let roots: Vec<Complex<f64>> = (0..n)
        .map(|j| Complex::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    let input: Vec<Complex<f64>> = buf
        .iter()
        .map(|z| Complex::new(z.re.as_f64(), z.im.as_f64()))
        .collect();
    let norm = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => 1.0 / n as f64,
    };
    (0..n)
        .map(|k| {
            let mut acc = Complex::new(0.0, 0.0);
            for (j, x) in input.iter().enumerate() {
                acc += x * roots[(j * k) % n];
            }
            acc *= norm;
            Complex::new(T::lit(acc.re), T::lit(acc.im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &[Complex<f64>], b: &[Complex<f64>], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn reals(v: &[f64]) -> Vec<Complex<f64>> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn make_plan_examples() {
        assert_eq!(FftPlan::<f32>::new(4096, FftVariant::CtDifPermuted).unwrap().len(), 4096);
        assert_eq!(FftPlan::<f32>::new(4, FftVariant::Stockham).unwrap().len(), 4);
        assert!(matches!(
            FftPlan::<f32>::new(3000, FftVariant::Stockham),
            Err(Error::BadLength { len: 3000, .. })
        ));
        assert!(FftPlan::<f32>::new(8192, FftVariant::Stockham).is_err());
        assert!(FftPlan::<f32>::with_max_len(8192, FftVariant::Stockham, 1 << 16).is_ok());
        assert!(FftPlan::<f32>::new(2, FftVariant::Stockham).is_err());
        assert!(FftPlan::<f32>::new(4, FftVariant::RealPacked).is_err());
        assert!(FftPlan::<f32>::new(8, FftVariant::RealPacked).is_ok());
    }

    #[test]
    fn twiddles_have_unit_magnitude() {
        let plan = FftPlan::<f32>::new(4096, FftVariant::Stockham).unwrap();
        for w in plan.twiddles() {
            assert!((w.norm_sqr() - 1.0).abs() <= 4.0 * f32::EPSILON);
        }
        let plan = FftPlan::<f64>::new(4096, FftVariant::Stockham).unwrap();
        for w in plan.twiddles() {
            assert!((w.norm_sqr() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn bit_reverse_examples() {
        assert_eq!(bit_reverse(0, 3), 0);
        assert_eq!(bit_reverse(1, 3), 4);
        assert_eq!(bit_reverse(6, 4), 6);
        assert_eq!(bit_reverse(0, 0), 0);
    }

    #[test]
    fn permuted_forward_examples() {
        let plan = FftPlan::<f64>::new(4, FftVariant::CtDifPermuted).unwrap();
        let mut buf = reals(&[1.0, 0.0, 0.0, 0.0]);
        plan.forward_permuted(&mut buf).unwrap();
        assert!(close(&buf, &reals(&[1.0; 4]), 1e-15));

        let mut buf = reals(&[1.0; 4]);
        plan.forward_permuted(&mut buf).unwrap();
        assert!(close(&buf, &reals(&[4.0, 0.0, 0.0, 0.0]), 1e-15));

        // DFT of [0,1,2,3] is [6, -2+2i, -2, -2-2i]; bit-reversed presentation swaps bins 1 and 2.
        let mut buf = reals(&[0.0, 1.0, 2.0, 3.0]);
        plan.forward_permuted(&mut buf).unwrap();
        assert!(close(&buf, &[c(6.0, 0.0), c(-2.0, 0.0), c(-2.0, 2.0), c(-2.0, -2.0)], 1e-14));
    }

    #[test]
    fn permuted_inverse_examples() {
        let plan = FftPlan::<f64>::new(4, FftVariant::CtDifPermuted).unwrap();
        let x = reals(&[1.0, 2.0, 3.0, 4.0]);
        let mut buf = x.clone();
        plan.forward_permuted(&mut buf).unwrap();
        plan.inverse_permuted(&mut buf).unwrap();
        assert!(close(&buf, &x, 1e-14));

        let mut buf = reals(&[4.0, 0.0, 0.0, 0.0]);
        plan.inverse_permuted(&mut buf).unwrap();
        assert!(close(&buf, &reals(&[1.0; 4]), 1e-15));

        let mut buf = vec![c(6.0, 0.0), c(-2.0, 0.0), c(-2.0, 2.0), c(-2.0, -2.0)];
        plan.inverse_permuted(&mut buf).unwrap();
        assert!(close(&buf, &reals(&[0.0, 1.0, 2.0, 3.0]), 1e-14));
    }

    #[test]
    fn stockham_examples() {
        let plan = FftPlan::<f64>::new(4, FftVariant::Stockham).unwrap();
        let mut buf = reals(&[1.0, 0.0, 0.0, 0.0]);
        plan.stockham(&mut buf, Direction::Forward).unwrap();
        assert!(close(&buf, &reals(&[1.0; 4]), 1e-15));

        let mut buf = reals(&[0.0, 1.0, 2.0, 3.0]);
        plan.stockham(&mut buf, Direction::Forward).unwrap();
        assert!(close(&buf, &[c(6.0, 0.0), c(-2.0, 2.0), c(-2.0, 0.0), c(-2.0, -2.0)], 1e-14));
        plan.stockham(&mut buf, Direction::Inverse).unwrap();
        assert!(close(&buf, &reals(&[0.0, 1.0, 2.0, 3.0]), 1e-14));
    }

    #[test]
    fn stockham_odd_stage_count() {
        // log2(8) = 3 stages leaves the result in the scratch buffer.
        let plan = FftPlan::<f64>::new(8, FftVariant::Stockham).unwrap();
        let x: Vec<_> = (0..8).map(|i| c(i as f64, -(i as f64) * 0.5)).collect();
        let mut buf = x.clone();
        plan.stockham(&mut buf, Direction::Forward).unwrap();
        assert!(close(&buf, &naive_dft(&x, Direction::Forward), 1e-12));
    }

    #[test]
    fn rfft_examples() {
        let plan = FftPlan::<f64>::new(8, FftVariant::RealPacked).unwrap();
        let mut out = vec![Complex::default(); 5];
        plan.rfft(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], &mut out).unwrap();
        assert!(close(&out, &reals(&[1.0; 5]), 1e-15));

        plan.rfft(&[1.0; 8], &mut out).unwrap();
        assert!(close(&out, &reals(&[8.0, 0.0, 0.0, 0.0, 0.0]), 1e-14));

        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        plan.rfft(&x, &mut out).unwrap();
        let full = naive_dft(&reals(&x), Direction::Forward);
        assert!(close(&out, &full[..5], 1e-13));
        assert_eq!(out[0].im, 0.0);
        assert_eq!(out[4].im, 0.0);
    }

    #[test]
    fn irfft_examples() {
        let plan = FftPlan::<f64>::new(8, FftVariant::RealPacked).unwrap();
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let mut bins = vec![Complex::default(); 5];
        plan.rfft(&x, &mut bins).unwrap();
        let mut back = [0.0; 8];
        plan.irfft(&bins, &mut back).unwrap();
        for (a, b) in back.iter().zip(x.iter()) {
            assert!((a - b).abs() < 1e-13);
        }

        plan.irfft(&reals(&[8.0, 0.0, 0.0, 0.0, 0.0]), &mut back).unwrap();
        for v in back {
            assert!((v - 1.0).abs() < 1e-15);
        }

        let bad = [c(8.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(plan.irfft(&bad, &mut back), Err(Error::BadSpectrum { .. })));
    }

    #[test]
    fn wrong_variant_and_length() {
        let plan = FftPlan::<f32>::new(8, FftVariant::Stockham).unwrap();
        let mut buf = vec![Complex::default(); 8];
        assert!(matches!(plan.forward_permuted(&mut buf), Err(Error::VariantMismatch { .. })));
        let mut short = vec![Complex::default(); 4];
        assert!(matches!(
            plan.stockham(&mut short, Direction::Forward),
            Err(Error::BadLength { len: 4, .. })
        ));
    }

    #[test]
    fn naive_dft_examples() {
        assert!(close(&naive_dft(&reals(&[1.0, 0.0]), Direction::Forward), &reals(&[1.0, 1.0]), 1e-15));
        assert!(close(&naive_dft(&reals(&[1.0, 1.0]), Direction::Forward), &reals(&[2.0, 0.0]), 1e-15));
        let x: Vec<_> = (0..16).map(|i| c((i * 7 % 5) as f64 - 2.0, (i % 3) as f64)).collect();
        let spec = naive_dft(&x, Direction::Forward);
        let e_time: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let e_freq: f64 = spec.iter().map(|z| z.norm_sqr()).sum::<f64>() / 16.0;
        assert!((e_time - e_freq).abs() < 1e-10 * e_time);
        // Non power-of-two lengths are fine for the oracle.
        let y = naive_dft(&reals(&[1.0, 2.0, 3.0]), Direction::Forward);
        let back = naive_dft(&y, Direction::Inverse);
        assert!(close(&back, &reals(&[1.0, 2.0, 3.0]), 1e-14));
    }
}

use num_complex::Complex;

use super::{EngineVariant, Mode, SegmentPlan};
use crate::error::{Error, Result};
use crate::fft::{FftPlan, FftVariant, SpectrumLayout};
use crate::types::{FilterSet, FilterSpectra, Real, Samples};

pub(crate) fn fft_variant(layout: SpectrumLayout) -> FftVariant {
    match layout {
        SpectrumLayout::BitReversed => FftVariant::CtDifPermuted,
        SpectrumLayout::Natural => FftVariant::Stockham,
        SpectrumLayout::HalfPacked => FftVariant::RealPacked,
    }
}

/// Zero-pads every filter to the segment length and transforms it with the
/// forward kernel matching `layout`. The spectra are computed once and then
/// shared read-only by every segment.
pub fn transform_filters<T: Real>(
    filters: &FilterSet<T>,
    plan: &SegmentPlan,
    layout: SpectrumLayout,
) -> Result<FilterSet<T>> {
    if filters.tap_length() != plan.filter_len() {
        return Err(Error::PlanMismatch(format!(
            "filters have {} taps, plan expects {}",
            filters.tap_length(),
            plan.filter_len()
        )));
    }
    if filters.origin() != plan.origin() {
        return Err(Error::PlanMismatch(format!(
            "filter origin {} differs from plan origin {}",
            filters.origin(),
            plan.origin()
        )));
    }
    let layout_ok = matches!(
        (plan.mode(), layout),
        (Mode::C2c, SpectrumLayout::BitReversed | SpectrumLayout::Natural) | (Mode::R2r, SpectrumLayout::HalfPacked)
    );
    if !layout_ok {
        return Err(Error::LayoutMismatch {
            expected: plan.layout(),
            found: layout,
        });
    }
    let n = plan.fft_len();
    let fft = FftPlan::<T>::with_max_len(n, fft_variant(layout), plan.max_fft_len())?;
    let mut scratch = vec![Complex::default(); n];
    let bins = filters
        .taps()
        .iter()
        .map(|taps| -> Result<Vec<Complex<T>>> {
            match (plan.mode(), taps) {
                (Mode::R2r, Samples::Real(h)) => {
                    let mut padded = vec![T::zero(); n];
                    padded[..h.len()].copy_from_slice(h);
                    let mut out = vec![Complex::default(); n / 2 + 1];
                    fft.rfft_with_scratch(&padded, &mut out, &mut scratch)?;
                    Ok(out)
                }
                (Mode::R2r, Samples::Complex(_)) => Err(Error::KindMismatch("real-to-real mode needs real filter taps")),
                (Mode::C2c, taps) => {
                    let mut padded = vec![Complex::default(); n];
                    for (k, p) in padded.iter_mut().take(taps.len()).enumerate() {
                        *p = taps.get(k);
                    }
                    fft.forward_native(&mut padded, &mut scratch)?;
                    Ok(padded)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(filters.with_spectra(FilterSpectra { layout, fft_len: n, bins }))
}

/// Filters ready for `variant`: transformed for the segmented engines,
/// unchanged for the baseline and the oracle.
pub fn prepare_filters<T: Real>(filters: &FilterSet<T>, plan: &SegmentPlan, variant: EngineVariant) -> Result<FilterSet<T>> {
    match variant {
        EngineVariant::Fused | EngineVariant::Pipelined => transform_filters(filters, plan, plan.layout()),
        _ => Ok(filters.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::unpermute;
    use crate::ols::SegmentSize;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn delta_is_flat() {
        let f = FilterSet::real(vec![vec![1.0f64]], 0).unwrap();
        let plan = SegmentPlan::new(100, 1, Mode::C2c, 0, SegmentSize::Fixed(8)).unwrap();
        for layout in [SpectrumLayout::BitReversed, SpectrumLayout::Natural] {
            let t = transform_filters(&f, &plan, layout).unwrap();
            let s = t.spectra().unwrap();
            assert_eq!(s.layout, layout);
            assert!(s.bins[0].iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));
        }
        let plan = SegmentPlan::new(100, 1, Mode::R2r, 0, SegmentSize::Fixed(8)).unwrap();
        let t = transform_filters(&f, &plan, SpectrumLayout::HalfPacked).unwrap();
        assert_eq!(t.spectra().unwrap().bins[0], vec![c(1.0, 0.0); 5]);
    }

    #[test]
    fn two_tap_natural() {
        // DFT of [1,1,0,0] = [2, 1-i, 0, 1+i]
        let f = FilterSet::real(vec![vec![1.0f64, 1.0]], 0).unwrap();
        let plan = SegmentPlan::new(100, 2, Mode::C2c, 0, SegmentSize::Fixed(4)).unwrap();
        let expected = [c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.0), c(1.0, 1.0)];
        let nat = transform_filters(&f, &plan, SpectrumLayout::Natural).unwrap();
        let br = transform_filters(&f, &plan, SpectrumLayout::BitReversed).unwrap();
        let br = unpermute(&br.spectra().unwrap().bins[0]);
        for (got, want) in nat.spectra().unwrap().bins[0].iter().zip(&expected) {
            assert!((got - want).norm() < 1e-15);
        }
        for (got, want) in br.iter().zip(&expected) {
            assert!((got - want).norm() < 1e-15);
        }
    }

    #[test]
    fn mismatches() {
        let f = FilterSet::real(vec![vec![1.0f64, 1.0]], 0).unwrap();
        let plan = SegmentPlan::new(100, 3, Mode::C2c, 0, SegmentSize::Fixed(8)).unwrap();
        assert!(matches!(transform_filters(&f, &plan, SpectrumLayout::BitReversed), Err(Error::PlanMismatch(_))));
        let plan = SegmentPlan::new(100, 2, Mode::C2c, 0, SegmentSize::Fixed(8)).unwrap();
        assert!(matches!(
            transform_filters(&f, &plan, SpectrumLayout::HalfPacked),
            Err(Error::LayoutMismatch { .. })
        ));
        let cf = FilterSet::complex(vec![vec![c(1.0, 1.0), c(0.0, 0.0)]], 0).unwrap();
        let plan = SegmentPlan::new(100, 2, Mode::R2r, 0, SegmentSize::Fixed(8)).unwrap();
        assert!(matches!(
            transform_filters(&cf, &plan, SpectrumLayout::HalfPacked),
            Err(Error::KindMismatch(_))
        ));
    }
}

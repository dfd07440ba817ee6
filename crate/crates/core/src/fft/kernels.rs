//! Radix-2 butterflies. Every kernel reads twiddles from a shared table of
//! `W_N^j = exp(-2*pi*i*j/N)`, `j < N/2`; a length-`n` transform uses every
//! `N/n`-th entry.

use num_complex::Complex;

use crate::types::Real;

/// Decimation-in-frequency, natural order in, bit-reversed order out.
pub(crate) fn dif_forward<T: Real>(buf: &mut [Complex<T>], twiddles: &[Complex<T>]) {
    let n = buf.len();
    let mut half = n / 2;
    let mut step = 2 * twiddles.len() / n;
    while half >= 1 {
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = (x - y) * twiddles[j * step];
            }
        }
        half /= 2;
        step *= 2;
    }
}

/// Decimation-in-time with conjugate twiddles, bit-reversed order in, natural
/// order out. Applies the 1/n scale.
pub(crate) fn dit_inverse<T: Real>(buf: &mut [Complex<T>], twiddles: &[Complex<T>]) {
    let n = buf.len();
    let mut half = 1;
    let mut step = twiddles.len() * 2 / n * (n / 2);
    while half < n {
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let t = *b * twiddles[j * step].conj();
                let x = *a;
                *a = x + t;
                *b = x - t;
            }
        }
        half *= 2;
        step /= 2;
    }
    scale(buf, T::one() / T::lit(n as f64));
}

/// Stockham auto-sort transform; natural order in and out. `scratch` must be
/// the same length as `buf`. Inverse applies the 1/n scale.
pub(crate) fn stockham<T: Real>(
    buf: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
    twiddles: &[Complex<T>],
    inverse: bool,
) {
    let n = buf.len();
    debug_assert_eq!(scratch.len(), n);
    let base = 2 * twiddles.len() / n;
    let mut x: &mut [Complex<T>] = buf;
    let mut y: &mut [Complex<T>] = scratch;
    let mut len = n;
    let mut stride = 1;
    let mut swapped = false;
    while len > 1 {
        let m = len / 2;
        for p in 0..m {
            let w = twiddles[p * stride * base];
            let w = if inverse { w.conj() } else { w };
            let src_a = &x[stride * p..stride * (p + 1)];
            let src_b = &x[stride * (p + m)..stride * (p + m + 1)];
            let (dst_a, dst_b) = y[stride * 2 * p..stride * (2 * p + 2)].split_at_mut(stride);
            for q in 0..stride {
                let a = src_a[q];
                let b = src_b[q];
                dst_a[q] = a + b;
                dst_b[q] = (a - b) * w;
            }
        }
        std::mem::swap(&mut x, &mut y);
        swapped = !swapped;
        len = m;
        stride *= 2;
    }
    // After an odd number of stages the result sits in `scratch`.
    if swapped {
        y.copy_from_slice(x);
    }
    if inverse {
        let s = T::one() / T::lit(n as f64);
        let out = if swapped { y } else { x };
        scale(out, s);
    }
}

/// Split step of the half-length real transform: `z` holds the length-`h`
/// transform of the packed sequence, `out` receives bins `0..=h` of the
/// length-`2h` real-input DFT.
pub(crate) fn real_split<T: Real>(z: &[Complex<T>], out: &mut [Complex<T>], twiddles: &[Complex<T>]) {
    let h = z.len();
    debug_assert_eq!(out.len(), h + 1);
    let half = T::lit(0.5);
    out[0] = Complex::new(z[0].re + z[0].im, T::zero());
    out[h] = Complex::new(z[0].re - z[0].im, T::zero());
    let step = 2 * twiddles.len() / (2 * h);
    for k in 1..h {
        let zk = z[k];
        let zc = z[h - k].conj();
        let even = (zk + zc) * half;
        // (zk - zc) / 2i
        let d = zk - zc;
        let odd = Complex::new(d.im, -d.re) * half;
        out[k] = even + twiddles[k * step] * odd;
    }
}

/// Inverse of [`real_split`]: rebuilds the length-`h` packed spectrum from
/// bins `0..=h`.
pub(crate) fn real_merge<T: Real>(bins: &[Complex<T>], z: &mut [Complex<T>], twiddles: &[Complex<T>]) {
    let h = z.len();
    debug_assert_eq!(bins.len(), h + 1);
    let half = T::lit(0.5);
    let step = 2 * twiddles.len() / (2 * h);
    for k in 0..h {
        let xk = bins[k];
        let xc = bins[h - k].conj();
        let even = (xk + xc) * half;
        let odd = (xk - xc) * half * twiddles[k * step].conj();
        // even + i * odd
        z[k] = Complex::new(even.re - odd.im, even.im + odd.re);
    }
}

fn scale<T: Real>(buf: &mut [Complex<T>], s: T) {
    for v in buf {
        *v *= s;
    }
}

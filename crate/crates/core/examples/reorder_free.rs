//! Circular convolution without ever restoring natural order: both spectra
//! stay bit-reversed, the product is taken slot by slot, and the inverse
//! kernel consumes the bit-reversed product directly.

use num_complex::Complex;
use olsconv::fft::{FftPlan, FftVariant};

fn main() -> olsconv::Result<()> {
    let n = 8;
    let a: Vec<Complex<f64>> = (0..n).map(|i| Complex::new(i as f64 + 1.0, 0.0)).collect();
    let b: Vec<Complex<f64>> = [1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]
        .iter()
        .map(|&r| Complex::new(r, 0.0))
        .collect();

    let plan = FftPlan::<f64>::new(n, FftVariant::CtDifPermuted)?;
    let (mut fa, mut fb) = (a.clone(), b.clone());
    plan.forward_permuted(&mut fa)?;
    plan.forward_permuted(&mut fb)?;
    let mut product: Vec<_> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    plan.inverse_permuted(&mut product)?;

    for i in 0..n {
        let direct: Complex<f64> = (0..n).map(|k| a[k] * b[(i + n - k) % n]).sum();
        println!("{i}  {:+.12}  {:+.12}", product[i].re, direct.re);
    }
    Ok(())
}

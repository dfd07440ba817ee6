//! The three transform kernels on one input: Cooley-Tukey with bit-reversed
//! output, Stockham in natural order, and the packed real transform.

use num_complex::Complex;
use olsconv::fft::{bit_reverse, naive_dft, unpermute, Direction, FftPlan, FftVariant};

fn main() -> olsconv::Result<()> {
    let n = 16;
    let x: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
    let xc: Vec<Complex<f64>> = x.iter().map(|&r| Complex::new(r, 0.0)).collect();
    let reference = naive_dft(&xc, Direction::Forward);

    let ct = FftPlan::<f64>::new(n, FftVariant::CtDifPermuted)?;
    let mut permuted = xc.clone();
    ct.forward_permuted(&mut permuted)?;

    let st = FftPlan::<f64>::new(n, FftVariant::Stockham)?;
    let mut natural = xc.clone();
    st.stockham(&mut natural, Direction::Forward)?;

    let rp = FftPlan::<f64>::new(n, FftVariant::RealPacked)?;
    let mut half = vec![Complex::default(); n / 2 + 1];
    rp.rfft(&x, &mut half)?;

    println!("  k  rev(k)  ct slot k = bin rev(k)  stockham        real-packed         naive");
    for k in 0..n {
        let packed = half.get(k).map(|z| format!("{z:+.3}")).unwrap_or_default();
        println!(
            "{k:3}  {:6}  {:+.3}              {:+.3}  {packed:18}  {:+.3}",
            bit_reverse(k, n.trailing_zeros()),
            permuted[k],
            natural[k],
            reference[k]
        );
    }
    let worst = unpermute(&permuted)
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("ct after unpermute vs naive: {worst:.2e}");
    Ok(())
}

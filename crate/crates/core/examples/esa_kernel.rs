//! Relative error of the exponential-sum approximation of `x^{-α}` over
//! `[τ/T, 1]` and the number of terms it needs.

use vo_tfmid::esa::esa_params;

fn main() -> vo_tfmid::Result<()> {
    let tau = 1.0 / 1024.0;
    for eps in [1e-4, 1e-8, 1e-12] {
        let q = esa_params(0.4, 0.9, eps, 1.0, tau)?;
        let mut worst: f64 = 0.0;
        for k in 0..=400 {
            let x = tau.powf(k as f64 / 400.0);
            for alpha in [0.4, 0.65, 0.9] {
                let want = x.powf(-alpha);
                worst = worst.max((q.kernel(alpha, x)? - want).abs() / want);
            }
        }
        println!("eps = {eps:.0e}  R = {:>3}  max relative error = {worst:.3e}", q.len());
    }
    Ok(())
}

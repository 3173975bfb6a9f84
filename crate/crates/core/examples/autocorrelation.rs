//! ACF and integrated autocorrelation time of an AR(1) series against the
//! exact values `rho^t` and `1/2 + rho/(1-rho)`.
//!
//! cargo run --release --example autocorrelation -- [rho]

use qgarch_acs::diagnostics::{batch_means_error, estimate_act};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> qgarch_acs::Result<()> {
    let rho: f64 = std::env::args()
        .nth(1)
        .map_or(0.9, |s| s.parse().expect("rho"));
    let n = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut x = 0.0;
    let series: Vec<f64> = (0..n)
        .map(|_| {
            x = rho * x + rng.sample::<f64, _>(StandardNormal);
            x
        })
        .collect();

    let (acf, est) = estimate_act(&series)?;
    println!("lag   acf      exact");
    for t in [0, 1, 2, 5, 10, 20] {
        if t <= acf.t_max() {
            println!("{t:>3}  {:.4}  {:.4}", acf.values()[t], rho.powi(t as i32));
        }
    }
    let exact = 0.5 + rho / (1.0 - rho);
    println!(
        "tau   {:.3} ± {:.3}  (exact {exact:.3}, window {})",
        est.tau, est.tau_error, est.window
    );

    let sd = (series.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    let se = sd * (2.0 * est.tau / n as f64).sqrt();
    let bm = batch_means_error(&series, (20.0 * est.tau).ceil() as usize)?;
    println!("SE    {se:.5} from tau, {bm:.5} from batch means");
    Ok(())
}

//! Fits a Student's t proposal to correlated Gaussian draws and checks that
//! its samples reproduce the fitted covariance.
//!
//! cargo run --example student_t_proposal

use qgarch_acs::sampler::{fit_proposal, MomentAccumulator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> qgarch_acs::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // x = (z1, 0.5 z1 + z2)
    let source: Vec<[f64; 2]> = (0..50_000)
        .map(|_| {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            [z1, 0.5 * z1 + z2]
        })
        .collect();

    let spec = fit_proposal(&source, 10.0)?;
    println!("mean        {:?}", spec.mean());
    println!("Sigma       {:?}", spec.sigma());
    println!(
        "covariance  {:?}  (target [[1, 0.5], [0.5, 1.25]])",
        spec.covariance()
    );

    let mut check = MomentAccumulator::<2>::new();
    for _ in 0..200_000 {
        check.push(&spec.sample(&mut rng));
    }
    println!("draws cov   {:?}", check.covariance());
    println!("log q(mean) {:.4}", spec.log_density(&spec.mean()));
    Ok(())
}

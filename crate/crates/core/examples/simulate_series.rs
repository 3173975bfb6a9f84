//! Simulates a QGARCH(1,1) series and compares its moments with the model's.
//!
//! cargo run --example simulate_series -- [n] [seed]

use qgarch_acs::model::{simulate, QgarchParams, DEFAULT_SIM_BURN_IN};

fn main() -> qgarch_acs::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100_000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let params = QgarchParams::reference();
    let data = simulate(&params, n, seed, DEFAULT_SIM_BURN_IN)?;
    let y = data.values();

    let mean = y.iter().sum::<f64>() / n as f64;
    let kurt = y.iter().map(|v| v.powi(4)).sum::<f64>() / n as f64 / data.sample_variance().powi(2);
    // asymmetry: variance after negative vs positive returns
    let (mut neg, mut pos) = (Vec::new(), Vec::new());
    for w in y.windows(2) {
        if w[0] < 0.0 {
            neg.push(w[1] * w[1])
        } else {
            pos.push(w[1] * w[1])
        }
    }
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;

    println!("params            {params:?}");
    println!("observations      {n}");
    println!("mean              {mean:.4}");
    println!(
        "variance          {:.4} (unconditional {:.4})",
        data.sample_variance(),
        params.unconditional_variance().unwrap()
    );
    println!("kurtosis          {kurt:.2} (normal 3)");
    println!("E[y^2 | y_prev<0] {:.4}", avg(&neg));
    println!("E[y^2 | y_prev>0] {:.4}", avg(&pos));
    Ok(())
}

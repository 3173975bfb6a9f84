//! Fixtures and reference calculations shared by the integration tests.
#![allow(dead_code)]

use qgarch_acs::diagnostics::summarize_series;
use qgarch_acs::model::SeriesData;
use qgarch_acs::sampler::ProposalSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Stationary AR(1) with unit innovations.
pub fn ar1(n: usize, phi: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = rng.sample::<f64, _>(StandardNormal) / (1.0 - phi * phi).sqrt();
    (0..n)
        .map(|_| {
            x = phi * x + rng.sample::<f64, _>(StandardNormal);
            x
        })
        .collect()
}

/// A correlated four-dimensional proposal with unequal scales.
pub fn spec4() -> ProposalSpec<4> {
    let mean = [0.1, -2.0, 0.5, 3.0];
    let sigma = [
        [0.04, 0.01, 0.0, -0.005],
        [0.01, 0.09, 0.02, 0.0],
        [0.0, 0.02, 0.25, 0.03],
        [-0.005, 0.0, 0.03, 0.01],
    ];
    ProposalSpec::new(mean, sigma, 10.0).unwrap()
}

/// Checks sample means within 3 SE and covariances within 2% of
/// `sqrt(C_ii C_jj)`.
pub fn check_moments(draws: &[[f64; 4]], mean: [f64; 4], cov: [[f64; 4]; 4]) -> Result<(), String> {
    let n = draws.len() as f64;
    let mut m = [0.0; 4];
    for d in draws {
        for i in 0..4 {
            m[i] += d[i] / n;
        }
    }
    let mut c = [[0.0; 4]; 4];
    for d in draws {
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] += (d[i] - m[i]) * (d[j] - m[j]) / n;
            }
        }
    }
    for i in 0..4 {
        let se = (cov[i][i] / n).sqrt();
        if (m[i] - mean[i]).abs() >= 3.0 * se {
            return Err(format!("mean[{i}] {} vs {} (se {se:.2e})", m[i], mean[i]));
        }
        for j in 0..4 {
            let scale = (cov[i][i] * cov[j][j]).sqrt();
            if (c[i][j] - cov[i][j]).abs() >= 0.02 * scale {
                return Err(format!("cov[{i}][{j}] {} vs {}", c[i][j], cov[i][j]));
            }
        }
    }
    Ok(())
}

/// Midpoint rule for `exp(log_density)` on the box `mean +- 7 sqrt(Sigma_ii)`
/// with `k` nodes per axis.
pub fn integrate_density(spec: &ProposalSpec<4>, k: usize) -> f64 {
    let m = spec.mean();
    let sd: [f64; 4] = std::array::from_fn(|i| spec.sigma()[i][i].sqrt());
    let h: [f64; 4] = std::array::from_fn(|i| 14.0 * sd[i] / k as f64);
    let node = |i: usize, a: usize| m[i] - 7.0 * sd[i] + (a as f64 + 0.5) * h[i];
    let mut total = 0.0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let x = [node(0, a), node(1, b), node(2, c), node(3, d)];
                    total += spec.log_density(&x).exp();
                }
            }
        }
    }
    total * h.iter().product::<f64>()
}

/// Posterior of omega under alpha = beta = gamma = 0 with a flat prior:
/// proportional to omega^(-m/2) exp(-S / (2 omega)), where the sum runs over
/// all but the first observation (whose variance is fixed).
pub struct OmegaOracle {
    pub m: f64,
    pub s: f64,
}

impl OmegaOracle {
    pub fn new(data: &SeriesData) -> Self {
        let tail = &data.values()[1..];
        Self {
            m: tail.len() as f64,
            s: tail.iter().map(|v| v * v).sum(),
        }
    }

    /// Inverse-gamma mean, `S / (m - 4)`.
    pub fn closed_form_mean(&self) -> f64 {
        self.s / (self.m - 4.0)
    }

    pub fn mode(&self) -> f64 {
        self.s / self.m
    }

    /// Dense midpoint quadrature of the unnormalized density.
    pub fn quadrature_mean(&self) -> f64 {
        let mode = self.mode();
        let (lo, hi) = (mode * 0.2, mode * 4.0);
        let k = 400_000;
        let h = (hi - lo) / k as f64;
        let log_pdf = |w: f64| -0.5 * self.m * w.ln() - self.s / (2.0 * w);
        let peak = log_pdf(mode);
        let (mut z, mut first) = (0.0, 0.0);
        for i in 0..k {
            let w = lo + (i as f64 + 0.5) * h;
            let p = (log_pdf(w) - peak).exp();
            z += p;
            first += w * p;
        }
        first / z
    }
}

/// 200 iid N(0, 1.69) observations.
pub fn omega_data() -> SeriesData {
    SeriesData::new(normals(200, 10).into_iter().map(|v| 1.3 * v).collect()).unwrap()
}

/// Chain mean within 3 SE of `truth`, using the library's SE.
pub fn check_mean_within_3se(label: &str, series: &[f64], truth: f64) -> Result<String, String> {
    let s = summarize_series(label, series).map_err(|e| format!("{label}: {e}"))?;
    let se =
        s.se.ok_or_else(|| format!("{label}: tau did not converge"))?;
    let msg = format!("{label} {:.5} vs {truth:.5} (se {se:.1e})", s.mean);
    if (s.mean - truth).abs() < 3.0 * se {
        Ok(msg)
    } else {
        Err(msg)
    }
}

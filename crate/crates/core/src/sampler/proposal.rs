use std::f64::consts::PI;

use nalgebra::{Cholesky, SMatrix, SVector};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Multivariate Student's t proposal with location `M`, scatter `Sigma` and shape `nu`.
///
/// Its covariance is `nu / (nu - 2) * Sigma`.
#[derive(Debug, Clone)]
pub struct ProposalSpec<const D: usize> {
    mean: SVector<f64, D>,
    sigma: SMatrix<f64, D, D>,
    nu: f64,
    chol: SMatrix<f64, D, D>,
    log_norm: f64,
    chi2: ChiSquared<f64>,
}

impl<const D: usize> ProposalSpec<D> {
    /// Symmetrizes `sigma` and fails unless it is positive definite and `nu > 2`.
    pub fn new(mean: [f64; D], sigma: [[f64; D]; D], nu: f64) -> Result<Self> {
        let sigma = SMatrix::<f64, D, D>::from_fn(|i, j| sigma[i][j]);
        Self::from_matrix(SVector::from(mean), sigma, nu)
    }

    pub(crate) fn from_matrix(
        mean: SVector<f64, D>,
        sigma: SMatrix<f64, D, D>,
        nu: f64,
    ) -> Result<Self> {
        if !(nu > 2.0 && nu.is_finite()) {
            return Err(Error::InvalidConfig(format!("nu must be > 2, got {nu}")));
        }
        if mean.iter().chain(sigma.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let sigma = (sigma + sigma.transpose()) * 0.5;
        let chol = Cholesky::new(sigma)
            .ok_or(Error::NotPositiveDefinite)?
            .unpack();
        let log_det: f64 = 2.0 * chol.diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let p = D as f64;
        let log_norm = ln_gamma((nu + p) / 2.0)
            - ln_gamma(nu / 2.0)
            - 0.5 * log_det
            - 0.5 * p * (nu * PI).ln();
        let chi2 = ChiSquared::new(nu).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(Self {
            mean,
            sigma,
            nu,
            chol,
            log_norm,
            chi2,
        })
    }

    pub fn mean(&self) -> [f64; D] {
        self.mean.into()
    }

    pub fn sigma(&self) -> [[f64; D]; D] {
        to_rows(&self.sigma)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Lower-triangular factor `L` with `L L^t = Sigma`.
    pub fn cholesky_factor(&self) -> [[f64; D]; D] {
        to_rows(&self.chol)
    }

    /// `nu / (nu - 2) * Sigma`.
    pub fn covariance(&self) -> [[f64; D]; D] {
        to_rows(&(self.sigma * (self.nu / (self.nu - 2.0))))
    }

    /// Draws `M + L z sqrt(nu / w)` with `z ~ N(0, I)` and `w ~ chi^2(nu)`.
    ///
    /// Consumes `D` normal deviates and then one chi-square deviate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; D] {
        let z = self.standard_normals(rng);
        let w = self.chi2.sample(rng);
        self.transform(z, w)
    }

    /// The `nu -> infinity` limit: mixing variable pinned at its mean, giving a
    /// Gaussian with covariance `Sigma`.
    pub fn sample_gaussian_limit<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; D] {
        let z = self.standard_normals(rng);
        self.transform(z, self.nu)
    }

    fn standard_normals<R: Rng + ?Sized>(&self, rng: &mut R) -> SVector<f64, D> {
        SVector::from_fn(|_, _| StandardNormal.sample(rng))
    }

    fn transform(&self, z: SVector<f64, D>, w: f64) -> [f64; D] {
        (self.mean + self.chol * z * (self.nu / w).sqrt()).into()
    }

    /// Exact log-density, including the normalization constant.
    pub fn log_density(&self, x: &[f64; D]) -> f64 {
        let d = SVector::from(*x) - self.mean;
        let u = self
            .chol
            .solve_lower_triangular(&d)
            .expect("Cholesky factor has a positive diagonal");
        let q = u.norm_squared();
        self.log_norm - 0.5 * (self.nu + D as f64) * (q / self.nu).ln_1p()
    }
}

fn to_rows<const D: usize>(m: &SMatrix<f64, D, D>) -> [[f64; D]; D] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

/// Running mean and scatter of absorbed vectors.
///
/// `covariance()` is `V = E[(x - M)(x - M)^t]`, normalized by the count.
#[derive(Debug, Clone)]
pub struct MomentAccumulator<const D: usize> {
    count: usize,
    mean: SVector<f64, D>,
    scatter: SMatrix<f64, D, D>,
}

impl<const D: usize> Default for MomentAccumulator<D> {
    fn default() -> Self {
        Self::new()
    }
}

impl<const D: usize> MomentAccumulator<D> {
    pub fn new() -> Self {
        Self {
            count: 0,
            mean: SVector::zeros(),
            scatter: SMatrix::zeros(),
        }
    }

    pub fn push(&mut self, x: &[f64; D]) {
        self.count += 1;
        let n = self.count as f64;
        let delta = SVector::from(*x) - self.mean;
        self.mean += delta / n;
        // (n-1)/n * delta delta^t keeps the scatter exactly symmetric.
        self.scatter += delta * delta.transpose() * ((n - 1.0) / n);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> [f64; D] {
        self.mean.into()
    }

    pub fn covariance(&self) -> [[f64; D]; D] {
        to_rows(&self.covariance_matrix())
    }

    fn covariance_matrix(&self) -> SMatrix<f64, D, D> {
        if self.count == 0 {
            SMatrix::zeros()
        } else {
            self.scatter / self.count as f64
        }
    }

    /// Fits a Student's t proposal with `Sigma = V (nu - 2) / nu`.
    ///
    /// If `Sigma` cannot be factorized, `eps I` is added with
    /// `eps = 1e-8 * trace(V) / D`.
    pub fn fit(&self, nu: f64) -> Result<ProposalSpec<D>> {
        if self.count < D + 1 {
            return Err(Error::InsufficientSamples {
                got: self.count,
                need: D + 1,
            });
        }
        let v = self.covariance_matrix();
        if v.iter().all(|&e| e == 0.0) {
            return Err(Error::DegenerateScatter);
        }
        if !(nu > 2.0 && nu.is_finite()) {
            return Err(Error::InvalidConfig(format!("nu must be > 2, got {nu}")));
        }
        let sigma = v * ((nu - 2.0) / nu);
        match ProposalSpec::from_matrix(self.mean, sigma, nu) {
            Err(Error::NotPositiveDefinite) => {
                let eps = 1e-8 * v.trace() / D as f64;
                ProposalSpec::from_matrix(
                    self.mean,
                    sigma + SMatrix::<f64, D, D>::identity() * eps,
                    nu,
                )
            }
            other => other,
        }
    }
}

/// Fits a Student's t proposal to the sample mean and covariance of `samples`.
pub fn fit_proposal<const D: usize>(samples: &[[f64; D]], nu: f64) -> Result<ProposalSpec<D>> {
    let mut acc = MomentAccumulator::new();
    for s in samples {
        acc.push(s);
    }
    acc.fit(nu)
}

pub fn sample_student_t<const D: usize, R: Rng + ?Sized>(
    spec: &ProposalSpec<D>,
    rng: &mut R,
) -> [f64; D] {
    spec.sample(rng)
}

pub fn student_t_log_density<const D: usize>(theta: &[f64; D], spec: &ProposalSpec<D>) -> f64 {
    spec.log_density(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity4() -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
    }

    #[test]
    fn log_density_at_mode() {
        let sigma = [
            [2.0, 0.3, 0.0, 0.0],
            [0.3, 1.0, 0.1, 0.0],
            [0.0, 0.1, 0.5, 0.0],
            [0.0, 0.0, 0.0, 3.0],
        ];
        let spec = ProposalSpec::new([1.0, -2.0, 0.5, 0.0], sigma, 10.0).unwrap();
        let det = nalgebra::Matrix4::from_fn(|i, j| sigma[i][j]).determinant();
        let expected = ln_gamma(7.0) - ln_gamma(5.0) - 0.5 * det.ln() - 2.0 * (10.0 * PI).ln();
        assert!((spec.log_density(&[1.0, -2.0, 0.5, 0.0]) - expected).abs() < 1e-12);
    }

    #[test]
    fn log_density_unit_offset_ratio() {
        let spec = ProposalSpec::new([0.0; 4], identity4(), 10.0).unwrap();
        let ratio = spec.log_density(&[1.0, 0.0, 0.0, 0.0]) - spec.log_density(&[0.0; 4]);
        assert!((ratio - (-7.0 * 1.1f64.ln())).abs() < 1e-13);
        assert!((ratio + 0.6672).abs() < 1e-4);
        assert!((ratio.exp() - 0.5132).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_shape_and_indefinite_scatter() {
        assert!(ProposalSpec::new([0.0; 4], identity4(), 2.0).is_err());
        let mut s = identity4();
        s[2][2] = -1.0;
        assert!(matches!(
            ProposalSpec::new([0.0; 4], s, 10.0),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn construction_symmetrizes() {
        let mut s = identity4();
        s[0][1] = 0.2;
        s[1][0] = 0.4;
        let spec = ProposalSpec::new([0.0; 4], s, 10.0).unwrap();
        let out = spec.sigma();
        assert_eq!(out[0][1], out[1][0]);
        assert!((out[0][1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn fit_errors() {
        let same = vec![[0.1, 0.8, 0.1, 0.0]; 10];
        assert!(matches!(
            fit_proposal(&same, 10.0),
            Err(Error::DegenerateScatter)
        ));
        let two = [[0.0, 0.0, 1.0, 0.0], [0.2, 0.0, 1.0, 0.0]];
        assert!(matches!(
            fit_proposal(&two, 10.0),
            Err(Error::InsufficientSamples { got: 2, need: 5 })
        ));
    }

    #[test]
    fn fit_regularizes_rank_deficient_scatter() {
        // variation in the first coordinate only
        let samples: Vec<[f64; 4]> = (0..20).map(|i| [i as f64 * 0.01, 0.8, 0.1, 0.0]).collect();
        let spec = fit_proposal(&samples, 10.0).unwrap();
        let s = spec.sigma();
        assert!(s[1][1] > 0.0 && s[1][1] < 1e-9);
    }

    #[test]
    fn accumulator_matches_two_pass_moments() {
        let samples: Vec<[f64; 3]> = (0..50)
            .map(|i| {
                let t = i as f64;
                [t.sin(), (0.3 * t).cos() * 2.0, t * 0.01]
            })
            .collect();
        let mut acc = MomentAccumulator::<3>::new();
        samples.iter().for_each(|s| acc.push(s));
        let n = samples.len() as f64;
        let mean: [f64; 3] = std::array::from_fn(|k| samples.iter().map(|s| s[k]).sum::<f64>() / n);
        let cov = acc.covariance();
        for i in 0..3 {
            assert!((acc.mean()[i] - mean[i]).abs() < 1e-14);
            for j in 0..3 {
                let direct = samples
                    .iter()
                    .map(|s| (s[i] - mean[i]) * (s[j] - mean[j]))
                    .sum::<f64>()
                    / n;
                assert!((cov[i][j] - direct).abs() < 1e-13);
                assert_eq!(cov[i][j], cov[j][i]);
            }
        }
    }
}

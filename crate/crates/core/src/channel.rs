//! Rician small-scale fading between a ULA and a single-antenna device.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Point, Result};

/// Rician factors at or above this are treated as the pure line-of-sight limit.
pub const LOS_ONLY_K: f64 = 1e12;

/// A half-wavelength spaced uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UlaConfig {
    pub antennas: usize,
    /// Boresight heading in the ground plane, radians from the x axis.
    pub orientation: f64,
}

impl UlaConfig {
    pub fn new(antennas: usize, orientation: f64) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::invalid("antennas", "must be >= 1"));
        }
        Ok(UlaConfig {
            antennas,
            orientation,
        })
    }
}

/// One channel draw, `h` has one entry per array element.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.h.iter().map(|x| x.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone)]
struct Covariance {
    matrix: DMatrix<Complex64>,
    // factor * factor^H == matrix
    factor: DMatrix<Complex64>,
}

/// Rician factor plus the covariance of the scattered component.
#[derive(Debug, Clone)]
pub struct FadingParams {
    rician_k: f64,
    covariance: Option<Covariance>,
}

impl FadingParams {
    /// Rician fading with i.i.d. unit-power scattering across elements.
    pub fn new(rician_k: f64) -> Result<Self> {
        if !(rician_k >= 0.0) {
            return Err(Error::invalid("rician_k", "must be >= 0"));
        }
        Ok(FadingParams {
            rician_k,
            covariance: None,
        })
    }

    /// Uses `rows` as the scattered-component covariance. The matrix must be
    /// Hermitian positive semidefinite; singular matrices are accepted.
    pub fn with_covariance(mut self, rows: &[Vec<Complex64>]) -> Result<Self> {
        let q = rows.len();
        if q == 0 {
            return Err(Error::Covariance("matrix is empty".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != q) {
            return Err(Error::Covariance(format!(
                "matrix is not square: row of length {} in a {q}-row matrix",
                bad.len()
            )));
        }
        let matrix = DMatrix::from_fn(q, q, |i, j| rows[i][j]);
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let tol = 1e-9 * scale;
        for i in 0..q {
            for j in 0..q {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > tol {
                    return Err(Error::Covariance(format!(
                        "entry ({i}, {j}) breaks Hermitian symmetry"
                    )));
                }
            }
        }
        let eig = matrix.clone().symmetric_eigen();
        if let Some(&min) = eig.eigenvalues.iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -tol {
                return Err(Error::Covariance(format!("negative eigenvalue {min}")));
            }
        }
        let mut factor = eig.eigenvectors.clone();
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            let s = lambda.max(0.0).sqrt();
            for i in 0..q {
                factor[(i, j)] *= s;
            }
        }
        self.covariance = Some(Covariance { matrix, factor });
        Ok(self)
    }

    pub fn rician_k(&self) -> f64 {
        self.rician_k
    }

    pub fn is_los_only(&self) -> bool {
        self.rician_k >= LOS_ONLY_K
    }

    /// Amplitude weight of the line-of-sight term.
    pub fn los_weight(&self) -> f64 {
        if self.is_los_only() {
            1.0
        } else {
            (self.rician_k / (1.0 + self.rician_k)).sqrt()
        }
    }

    /// Amplitude weight of the scattered term.
    pub fn nlos_weight(&self) -> f64 {
        if self.is_los_only() {
            0.0
        } else {
            (1.0 / (1.0 + self.rician_k)).sqrt()
        }
    }

    /// Size of the configured covariance, `None` for the identity default.
    pub fn covariance_dim(&self) -> Option<usize> {
        self.covariance.as_ref().map(|c| c.matrix.nrows())
    }

    pub fn check_antennas(&self, q: usize) -> Result<()> {
        match self.covariance_dim() {
            Some(n) if n != q => Err(Error::DimensionMismatch {
                expected: q,
                actual: n,
            }),
            _ => Ok(()),
        }
    }

    /// Fills `out` with a draw of the scattered component `CN(0, R)`.
    pub fn draw_nlos<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [Complex64]) -> Result<()> {
        self.check_antennas(out.len())?;
        for z in out.iter_mut() {
            *z = complex_normal(rng);
        }
        if let Some(cov) = &self.covariance {
            let white: Vec<Complex64> = out.to_vec();
            for (i, o) in out.iter_mut().enumerate() {
                *o = (0..white.len())
                    .map(|j| cov.factor[(i, j)] * white[j])
                    .sum();
            }
        }
        Ok(())
    }
}

/// Unit-variance circularly-symmetric complex Gaussian.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Azimuth of `device` seen from a beacon at `pb` whose boresight points
/// along `orientation`. Zero is boresight; the result lies in `[0, 2 pi)`.
/// Coincident ground positions return zero.
pub fn azimuth(pb: Point, orientation: f64, device: Point) -> f64 {
    let dx = device[0] - pb[0];
    let dy = device[1] - pb[1];
    if dx == 0.0 && dy == 0.0 {
        return 0.0;
    }
    wrap_angle(dy.atan2(dx) - orientation)
}

pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Line-of-sight steering vector, entry `t` is `exp(-i t pi sin(theta))`.
pub fn los_vector(theta: f64, q: usize) -> Vec<Complex64> {
    let step = -PI * theta.sin();
    (0..q)
        .map(|t| Complex64::from_polar(1.0, step * t as f64))
        .collect()
}

/// Draws one channel vector.
pub fn sample<R: Rng + ?Sized>(
    theta: f64,
    fading: &FadingParams,
    q: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if q == 0 {
        return Err(Error::invalid("antennas", "must be >= 1"));
    }
    let mut h = vec![Complex64::new(0.0, 0.0); q];
    fading.draw_nlos(rng, &mut h)?;
    combine(&los_vector(theta, q), fading, &mut h);
    Ok(ChannelRealization { h })
}

/// Turns a scattered draw in `nlos` into the full Rician vector in place.
pub fn combine(los: &[Complex64], fading: &FadingParams, nlos: &mut [Complex64]) {
    let a = fading.los_weight();
    let b = fading.nlos_weight();
    for (h, l) in nlos.iter_mut().zip(los) {
        *h = l * a + *h * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn azimuth_cases() {
        assert_eq!(azimuth([0.0, 0.0], 0.0, [3.0, 0.0]), 0.0);
        assert_relative_eq!(
            azimuth([0.0, 0.0], 0.0, [1.0, 1.0]),
            PI / 4.0,
            max_relative = 1e-15
        );
        assert_eq!(azimuth([1.0, 1.0], 0.3, [1.0, 1.0]), 0.0);
        let a = azimuth([0.5, -1.0], 0.2, [2.0, 3.0]);
        let b = azimuth([0.5, -1.0], 0.2 + PI, [2.0, 3.0]);
        assert_relative_eq!(wrap_angle(a - b), PI, max_relative = 1e-12);
        for dev in [[1.0, -1.0], [-1.0, -0.1], [0.0, 2.0]] {
            let t = azimuth([0.0, 0.0], 1.0, dev);
            assert!((0.0..TAU).contains(&t));
        }
    }

    #[test]
    fn los_vector_cases() {
        assert!(los_vector(0.0, 5).iter().all(|z| *z == c(1.0, 0.0)));
        let v = los_vector(PI / 2.0, 4);
        for (got, want) in v.iter().zip([1.0, -1.0, 1.0, -1.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-12);
        }
        let v = los_vector(PI / 6.0, 2);
        assert!((v[1] - c(0.0, -1.0)).norm() < 1e-12);
        assert_eq!(v[0], c(1.0, 0.0));
    }

    #[test]
    fn los_phase_is_linear_in_index() {
        let theta = 0.73;
        let v = los_vector(theta, 9);
        let step = -PI * theta.sin();
        for (t, z) in v.iter().enumerate() {
            let expected = Complex64::from_polar(1.0, step * t as f64);
            assert!((z - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn los_limit() {
        let fading = FadingParams::new(1e12).unwrap();
        let mut rng = stream(1, Purpose::Fading, &[]);
        let h = sample(0.4, &fading, 6, &mut rng).unwrap();
        for (a, b) in h.h.iter().zip(los_vector(0.4, 6)) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn same_seed_same_draw() {
        let fading = FadingParams::new(3.0).unwrap();
        let a = sample(1.0, &fading, 4, &mut stream(9, Purpose::Fading, &[2])).unwrap();
        let b = sample(1.0, &fading, 4, &mut stream(9, Purpose::Fading, &[2])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rayleigh_second_moment() {
        let fading = FadingParams::new(0.0).unwrap();
        let mut rng = stream(5, Purpose::Fading, &[]);
        let n = 100_000;
        let mut acc = [0.0; 3];
        for _ in 0..n {
            let h = sample(0.0, &fading, 3, &mut rng).unwrap();
            for (a, z) in acc.iter_mut().zip(&h.h) {
                *a += z.norm_sqr();
            }
        }
        for a in acc {
            assert!((a / n as f64 - 1.0).abs() < 0.02, "{}", a / n as f64);
        }
    }

    #[test]
    fn mean_is_scaled_los() {
        let k = 4.0;
        let theta = 1.1;
        let fading = FadingParams::new(k).unwrap();
        let mut rng = stream(6, Purpose::Fading, &[]);
        let n = 100_000;
        let q = 4;
        let mut mean = vec![c(0.0, 0.0); q];
        let mut energy = 0.0;
        for _ in 0..n {
            let h = sample(theta, &fading, q, &mut rng).unwrap();
            energy += h.norm_sqr();
            for (m, z) in mean.iter_mut().zip(&h.h) {
                *m += z;
            }
        }
        let scale = (k / (1.0 + k)).sqrt();
        for (m, l) in mean.iter().zip(los_vector(theta, q)) {
            assert!((m / n as f64 - l * scale).norm() < 0.02);
        }
        assert!((energy / n as f64 / q as f64 - 1.0).abs() < 0.02);
    }

    #[test]
    fn correlated_scattering_matches_covariance() {
        let rho = c(0.6, 0.3);
        let rows = vec![vec![c(1.0, 0.0), rho], vec![rho.conj(), c(1.0, 0.0)]];
        let fading = FadingParams::new(0.0)
            .unwrap()
            .with_covariance(&rows)
            .unwrap();
        let mut rng = stream(8, Purpose::Fading, &[]);
        let mut buf = [c(0.0, 0.0); 2];
        let n = 100_000;
        let mut cross = c(0.0, 0.0);
        let mut p0 = 0.0;
        for _ in 0..n {
            fading.draw_nlos(&mut rng, &mut buf).unwrap();
            cross += buf[0] * buf[1].conj();
            p0 += buf[0].norm_sqr();
        }
        assert!((cross / n as f64 - rho).norm() < 0.02);
        assert!((p0 / n as f64 - 1.0).abs() < 0.02);
    }

    #[test]
    fn covariance_validation() {
        let not_psd = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0)],
        ];
        assert!(matches!(
            FadingParams::new(1.0).unwrap().with_covariance(&not_psd),
            Err(Error::Covariance(_))
        ));
        let not_herm = vec![
            vec![c(1.0, 0.0), c(0.1, 0.2)],
            vec![c(0.1, 0.2), c(1.0, 0.0)],
        ];
        assert!(FadingParams::new(1.0)
            .unwrap()
            .with_covariance(&not_herm)
            .is_err());
        let ragged = vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(FadingParams::new(1.0)
            .unwrap()
            .with_covariance(&ragged)
            .is_err());
        // rank one is fine
        let ones = vec![vec![c(1.0, 0.0); 3]; 3];
        let f = FadingParams::new(1.0)
            .unwrap()
            .with_covariance(&ones)
            .unwrap();
        assert!(f.check_antennas(4).is_err());
        assert!(f.check_antennas(3).is_ok());
        assert!(FadingParams::new(-1.0).is_err());
    }
}

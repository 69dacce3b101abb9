//! Large-scale attenuation of an above-ground to buried link.
//!
//! The total loss is the product of three factors: free-space style air loss
//! up to the ground point above the device, a refraction factor at the
//! air-soil interface, and exponential attenuation over the vertical soil
//! path. Everything here is a pure function of its inputs.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability (CODATA 2018), H/m.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (CODATA 2018), F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Electromagnetic description of the soil layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoilProperties {
    /// Volumetric water content, fraction.
    pub vwc: f64,
    /// Clay mass fraction.
    pub clay: f64,
    /// Relative permeability.
    pub mu_r: f64,
    /// Real part of the relative permittivity.
    pub eps_real: f64,
    /// Imaginary (loss) part of the relative permittivity.
    pub eps_imag: f64,
}

impl SoilProperties {
    pub fn new(vwc: f64, clay: f64, mu_r: f64, eps_real: f64, eps_imag: f64) -> Result<Self> {
        let soil = SoilProperties {
            vwc,
            clay,
            mu_r,
            eps_real,
            eps_imag,
        };
        soil.validate()?;
        Ok(soil)
    }

    /// Non-magnetic soil with a known permittivity. Moisture and clay are
    /// recorded as zero since they are not used on this path.
    pub fn from_permittivity(eps_real: f64, eps_imag: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 1.0, eps_real, eps_imag)
    }

    /// Runs `model` for the given moisture and clay content at `frequency`.
    pub fn from_model(
        model: &dyn DielectricModel,
        vwc: f64,
        clay: f64,
        mu_r: f64,
        frequency: f64,
    ) -> Result<Self> {
        let (eps_real, eps_imag) = model.permittivity(vwc, clay, frequency)?;
        Self::new(vwc, clay, mu_r, eps_real, eps_imag)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_real > 0.0 && self.eps_real.is_finite()) {
            return Err(Error::invalid("eps_real", "must be finite and > 0"));
        }
        if !(self.eps_imag >= 0.0 && self.eps_imag.is_finite()) {
            return Err(Error::invalid("eps_imag", "must be finite and >= 0"));
        }
        if !(self.mu_r > 0.0 && self.mu_r.is_finite()) {
            return Err(Error::invalid("mu_r", "must be finite and > 0"));
        }
        if !(0.0..=1.0).contains(&self.vwc) {
            return Err(Error::invalid("vwc", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.clay) {
            return Err(Error::invalid("clay", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Distances of one beacon-to-device link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Antenna to the ground point directly above the device, meters.
    pub air_distance: f64,
    /// Vertical path inside the soil (the burial depth), meters.
    pub soil_distance: f64,
    /// Antenna height above ground, meters.
    pub pb_height: f64,
}

impl LinkGeometry {
    pub fn new(horizontal: f64, pb_height: f64, burial_depth: f64) -> Result<Self> {
        if !(pb_height > 0.0) {
            return Err(Error::invalid("pb_height", "must be > 0"));
        }
        if !(burial_depth > 0.0) {
            return Err(Error::invalid("burial_depth", "must be > 0"));
        }
        if !(horizontal >= 0.0 && horizontal.is_finite()) {
            return Err(Error::invalid(
                "horizontal distance",
                "must be finite and >= 0",
            ));
        }
        Ok(LinkGeometry {
            air_distance: horizontal.hypot(pb_height),
            soil_distance: burial_depth,
            pb_height,
        })
    }
}

/// Carrier and air propagation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfParams {
    /// Carrier frequency, Hz.
    pub frequency: f64,
    /// Air path-loss exponent.
    pub path_loss_exponent: f64,
}

impl RfParams {
    pub fn new(frequency: f64, path_loss_exponent: f64) -> Result<Self> {
        let rf = RfParams {
            frequency,
            path_loss_exponent,
        };
        rf.validate()?;
        Ok(rf)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::invalid("frequency", "must be finite and > 0"));
        }
        if !(self.path_loss_exponent >= 2.0 && self.path_loss_exponent.is_finite()) {
            return Err(Error::invalid(
                "path_loss_exponent",
                "must be finite and >= 2",
            ));
        }
        Ok(())
    }

    pub fn angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency
    }
}

/// Attenuation constant (Np/m) and phase constant (rad/m) of the soil.
pub fn attenuation_constants(soil: &SoilProperties, rf: &RfParams) -> Result<(f64, f64)> {
    if !(soil.eps_real > 0.0) {
        return Err(Error::invalid(
            "eps_real",
            "must be > 0 for the loss tangent",
        ));
    }
    let loss_tangent = soil.eps_imag / soil.eps_real;
    let root = (1.0 + loss_tangent * loss_tangent).sqrt();
    let base = soil.mu_r * MU0 * soil.eps_real * EPS0 / 2.0;
    let omega = rf.angular_frequency();
    let alpha = omega * (base * (root - 1.0)).sqrt();
    let beta = omega * (base * (root + 1.0)).sqrt();
    Ok((alpha, beta))
}

/// Air attenuation `(4 pi f / c)^2 * l^tau`.
pub fn air_loss(geom: &LinkGeometry, rf: &RfParams) -> f64 {
    let k = 4.0 * std::f64::consts::PI * rf.frequency / SPEED_OF_LIGHT;
    k * k * geom.air_distance.powf(rf.path_loss_exponent)
}

/// Loss factor at the air-soil boundary.
pub fn refraction_loss(soil: &SoilProperties) -> f64 {
    let magnitude = soil.eps_real.hypot(soil.eps_imag);
    let n = ((magnitude + soil.eps_real) / 2.0).sqrt();
    let t = (n + 1.0) / 4.0;
    t * t
}

/// In-soil attenuation `(2 beta d e^{alpha d})^2`.
pub fn soil_loss(geom: &LinkGeometry, alpha: f64, beta: f64) -> f64 {
    let d = geom.soil_distance;
    let t = 2.0 * beta * d / (-alpha * d).exp();
    t * t
}

/// Breakdown of a link's attenuation into its factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLoss {
    pub air: f64,
    pub refraction: f64,
    pub soil: f64,
}

impl PathLoss {
    pub fn total(&self) -> f64 {
        self.air * self.refraction * self.soil
    }
}

pub fn path_loss_components(
    geom: &LinkGeometry,
    soil: &SoilProperties,
    rf: &RfParams,
) -> Result<PathLoss> {
    soil.validate()?;
    rf.validate()?;
    if !(geom.air_distance > 0.0) {
        return Err(Error::invalid("air_distance", "must be > 0"));
    }
    if !(geom.soil_distance > 0.0) {
        return Err(Error::invalid("soil_distance", "must be > 0"));
    }
    let (alpha, beta) = attenuation_constants(soil, rf)?;
    Ok(PathLoss {
        air: air_loss(geom, rf),
        refraction: refraction_loss(soil),
        soil: soil_loss(geom, alpha, beta),
    })
}

/// Total linear path loss `delta` of a link.
pub fn total_path_loss(geom: &LinkGeometry, soil: &SoilProperties, rf: &RfParams) -> Result<f64> {
    Ok(path_loss_components(geom, soil, rf)?.total())
}

/// Source of complex relative permittivity for a soil sample.
pub trait DielectricModel: Send + Sync {
    fn permittivity(&self, vwc: f64, clay: f64, frequency: f64) -> Result<(f64, f64)>;
}

/// Returns a configured permittivity regardless of moisture or frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPermittivity {
    pub eps_real: f64,
    pub eps_imag: f64,
}

impl DielectricModel for FixedPermittivity {
    fn permittivity(&self, _vwc: f64, _clay: f64, _frequency: f64) -> Result<(f64, f64)> {
        Ok((self.eps_real, self.eps_imag))
    }
}

/// Mineralogy-based spectroscopic dielectric model for moist soils
/// (Mironov et al., IEEE TGRS 2009).
///
/// The soil is treated as a refractive mixture of dry minerals, bound water
/// and free water. Both water phases follow a Debye relaxation with ionic
/// conductivity; their parameters are regressions on the clay percentage.
/// The model was fitted for 0.3 to 26.5 GHz and clay contents up to 76 %.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MineralogyModel;

impl MineralogyModel {
    pub const MIN_FREQUENCY: f64 = 0.3e9;
    pub const MAX_FREQUENCY: f64 = 26.5e9;
    pub const MAX_CLAY: f64 = 0.76;
    pub const MAX_VWC: f64 = 0.5;

    const EPS_INF: f64 = 4.9;
    const EPS_STATIC_FREE: f64 = 100.0;
    const TAU_FREE: f64 = 8.5e-12;
}

/// Refractive index and normalized attenuation of a Debye medium.
fn debye_refraction(frequency: f64, eps_static: f64, tau: f64, sigma: f64) -> (f64, f64) {
    let omega_tau = 2.0 * std::f64::consts::PI * frequency * tau;
    let relax = (eps_static - MineralogyModel::EPS_INF) / (1.0 + omega_tau * omega_tau);
    let eps_r = MineralogyModel::EPS_INF + relax;
    let eps_i = relax * omega_tau + sigma / (2.0 * std::f64::consts::PI * frequency * EPS0);
    let magnitude = eps_r.hypot(eps_i);
    let n = ((magnitude + eps_r) / 2.0).sqrt();
    let k = ((magnitude - eps_r) / 2.0).sqrt();
    (n, k)
}

impl DielectricModel for MineralogyModel {
    fn permittivity(&self, vwc: f64, clay: f64, frequency: f64) -> Result<(f64, f64)> {
        let check = |field, value: f64, min, max| {
            if !(value >= min && value <= max) {
                Err(Error::OutOfRange {
                    field,
                    value,
                    min,
                    max,
                })
            } else {
                Ok(())
            }
        };
        check(
            "frequency",
            frequency,
            Self::MIN_FREQUENCY,
            Self::MAX_FREQUENCY,
        )?;
        check("vwc", vwc, 0.0, Self::MAX_VWC)?;
        check("clay", clay, 0.0, Self::MAX_CLAY)?;

        // regressions are in clay percent
        let c = clay * 100.0;
        let n_dry = 1.634 - 0.539e-2 * c + 0.2748e-4 * c * c;
        let k_dry = 0.03952 - 0.04038e-2 * c;
        let max_bound = 0.02863 + 0.30673e-2 * c;
        let eps_static_bound = 79.8 - 85.4e-2 * c + 32.7e-4 * c * c;
        let tau_bound = 1.062e-11 + 3.450e-12 * 1e-2 * c;
        let sigma_bound = 0.3112 + 0.467e-2 * c;
        let sigma_free = 0.3631 + 1.217e-2 * c;

        let (n_b, k_b) = debye_refraction(frequency, eps_static_bound, tau_bound, sigma_bound);
        let (n_u, k_u) =
            debye_refraction(frequency, Self::EPS_STATIC_FREE, Self::TAU_FREE, sigma_free);

        let (n, k) = if vwc <= max_bound {
            (n_dry + (n_b - 1.0) * vwc, k_dry + k_b * vwc)
        } else {
            let free = vwc - max_bound;
            (
                n_dry + (n_b - 1.0) * max_bound + (n_u - 1.0) * free,
                k_dry + k_b * max_bound + k_u * free,
            )
        };
        Ok((n * n - k * k, 2.0 * n * k))
    }
}

/// Permittivity from the mineralogy-based model.
pub fn dielectric(vwc: f64, clay: f64, frequency: f64) -> Result<(f64, f64)> {
    MineralogyModel.permittivity(vwc, clay, frequency)
}

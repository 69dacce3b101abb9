//! CSI-free transmission schemes and the incident RF power they produce.
//!
//! A scheme is described by `K` energy signals, each with a transmit power
//! `p_k` and a precoding vector `v_k`. Energy symbols are i.i.d. unit power,
//! so the waveform average collapses to `sum_k p_k |v_k^T h|^2 / delta`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{combine, los_vector, FadingParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Switching antennas: one element active per sub-block.
    #[serde(rename = "SA")]
    Sa,
    /// All antennas, independent signals.
    #[serde(rename = "AA_IS")]
    AaIs,
    /// All antennas, same signal; beam on boresight.
    #[serde(rename = "AA_SS_I")]
    AaSsI,
    /// All antennas, same signal with alternating pi phase; beam off boresight.
    #[serde(rename = "AA_SS_II")]
    AaSsII,
    /// Rotary antenna beamforming: AA_SS_II on a servo-rotated array.
    #[serde(rename = "RAB")]
    Rab,
    /// Full-CSI max-min precoder. Named so configs and reports can refer to
    /// it, but not simulated.
    #[serde(rename = "FULL_CSI")]
    FullCsi,
}

impl SchemeKind {
    pub const CSI_FREE: [SchemeKind; 5] = [
        SchemeKind::Sa,
        SchemeKind::AaIs,
        SchemeKind::AaSsI,
        SchemeKind::AaSsII,
        SchemeKind::Rab,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Sa => "SA",
            SchemeKind::AaIs => "AA_IS",
            SchemeKind::AaSsI => "AA_SS_I",
            SchemeKind::AaSsII => "AA_SS_II",
            SchemeKind::Rab => "RAB",
            SchemeKind::FullCsi => "FULL_CSI",
        }
    }

    /// Checks the scheme can run on a `q`-element array.
    pub fn check(self, q: usize) -> Result<()> {
        match self {
            SchemeKind::FullCsi => Err(Error::NotImplemented("the FULL_CSI precoder")),
            _ if q == 0 => Err(Error::invalid("antennas", "must be >= 1")),
            SchemeKind::Rab if q < 2 => Err(Error::SchemeConstraint(format!(
                "RAB needs at least 2 antennas per beacon, got {q}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        Ok(match key.as_str() {
            "SA" => SchemeKind::Sa,
            "AA_IS" => SchemeKind::AaIs,
            "AA_SS_I" => SchemeKind::AaSsI,
            "AA_SS_II" => SchemeKind::AaSsII,
            "RAB" => SchemeKind::Rab,
            "FULL_CSI" => SchemeKind::FullCsi,
            _ => return Err(Error::invalid("scheme", format!("unknown scheme `{s}`"))),
        })
    }
}

/// Energy signals of one beacon: powers `p_k` and precoders `v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSpec {
    pub per_signal_power: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl PrecoderSpec {
    /// Builds the precoder a scheme uses with total transmit power `p` on a
    /// `q`-element array. SA's vector is the single active element of one
    /// sub-block; RAB uses the AA_SS_II precoder at every rotation step.
    ///
    /// AA_SS vectors have unit-magnitude entries (not unit norm) with
    /// `p_k = p / Q`, which puts `p Q` on the beam peak.
    pub fn for_scheme(kind: SchemeKind, q: usize, p: f64) -> Result<Self> {
        kind.check(q)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(match kind {
            SchemeKind::Sa => PrecoderSpec {
                per_signal_power: vec![p],
                vectors: vec![vec![one]],
            },
            SchemeKind::AaIs => PrecoderSpec {
                per_signal_power: vec![p / q as f64; q],
                vectors: (0..q)
                    .map(|k| {
                        (0..q)
                            .map(|i| {
                                if i == k {
                                    one
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            })
                            .collect()
                    })
                    .collect(),
            },
            SchemeKind::AaSsI => PrecoderSpec {
                per_signal_power: vec![p / q as f64],
                vectors: vec![vec![one; q]],
            },
            SchemeKind::AaSsII | SchemeKind::Rab => PrecoderSpec {
                per_signal_power: vec![p / q as f64],
                vectors: vec![alternating(q)],
            },
            SchemeKind::FullCsi => unreachable!("rejected by check"),
        })
    }

    pub fn signals(&self) -> usize {
        self.vectors.len()
    }

    /// Radiated power `sum_k p_k ||v_k||^2`.
    pub fn total_power(&self) -> f64 {
        self.per_signal_power
            .iter()
            .zip(&self.vectors)
            .map(|(p, v)| p * v.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `sum_k p_k |v_k^T h|^2`, the incident power before path loss.
    pub fn gain(&self, h: &[Complex64]) -> Result<f64> {
        let mut total = 0.0;
        for (p, v) in self.per_signal_power.iter().zip(&self.vectors) {
            if v.len() != h.len() {
                return Err(Error::DimensionMismatch {
                    expected: v.len(),
                    actual: h.len(),
                });
            }
            let inner: Complex64 = v.iter().zip(h).map(|(a, b)| a * b).sum();
            total += p * inner.norm_sqr();
        }
        Ok(total)
    }
}

/// AA_SS_II precoder: entry `q` (1-based) is `exp(i mod(q - 1, 2) pi)`.
pub fn alternating(q: usize) -> Vec<Complex64> {
    (0..q)
        .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect()
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("delta", "path loss must be finite and > 0"))
    }
}

/// Waveform-averaged incident power of one beacon at one device, watts.
pub fn incident_power(h: &[Complex64], spec: &PrecoderSpec, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(spec.gain(h)? / delta)
}

/// Block-averaged incident power under antenna switching: element `q` is
/// active with full power `p` for `T / Q` of the block.
pub fn incident_power_sa(h_per_subblock: &[Complex64], p: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if h_per_subblock.is_empty() {
        return Err(Error::Empty("SA needs at least one sub-block channel"));
    }
    let sum: f64 = h_per_subblock.iter().map(|h| p * h.norm_sqr()).sum();
    Ok(sum / h_per_subblock.len() as f64 / delta)
}

/// Rotation offsets of the RAB steps, `q pi / Q` for `q = 1..=Q`.
pub fn rab_offsets(q: usize) -> Vec<f64> {
    (1..=q).map(|s| s as f64 * PI / q as f64).collect()
}

/// Average incident power while the array visits `theta0 + offset` for each
/// offset, with the scattered component `nlos` held fixed.
pub fn incident_power_rotating(
    theta0: f64,
    offsets: &[f64],
    nlos: &[Complex64],
    fading: &FadingParams,
    spec: &PrecoderSpec,
    delta: f64,
) -> Result<f64> {
    if offsets.is_empty() {
        return Err(Error::Empty("rotation needs at least one step"));
    }
    let mut total = 0.0;
    let mut h = vec![Complex64::new(0.0, 0.0); nlos.len()];
    for off in offsets {
        h.copy_from_slice(nlos);
        combine(&los_vector(theta0 + off, nlos.len()), fading, &mut h);
        total += incident_power(&h, spec, delta)?;
    }
    Ok(total / offsets.len() as f64)
}

/// RAB incident power: AA_SS_II averaged over `Q` equal rotation steps
/// covering a half turn. The scattered component is drawn once per block.
pub fn incident_power_rab<R: Rng + ?Sized>(
    theta0: f64,
    fading: &FadingParams,
    q: usize,
    p: f64,
    delta: f64,
    rng: &mut R,
) -> Result<f64> {
    SchemeKind::Rab.check(q)?;
    let spec = PrecoderSpec::for_scheme(SchemeKind::Rab, q, p)?;
    let mut nlos = vec![Complex64::new(0.0, 0.0); q];
    fading.draw_nlos(rng, &mut nlos)?;
    incident_power_rotating(theta0, &rab_offsets(q), &nlos, fading, &spec, delta)
}

/// Like [`incident_power_rab`] but with a fresh scattered draw at every
/// rotation step.
pub fn incident_power_rab_redraw<R: Rng + ?Sized>(
    theta0: f64,
    fading: &FadingParams,
    q: usize,
    p: f64,
    delta: f64,
    rng: &mut R,
) -> Result<f64> {
    SchemeKind::Rab.check(q)?;
    let spec = PrecoderSpec::for_scheme(SchemeKind::Rab, q, p)?;
    let mut nlos = vec![Complex64::new(0.0, 0.0); q];
    let mut total = 0.0;
    for off in rab_offsets(q) {
        fading.draw_nlos(rng, &mut nlos)?;
        total += incident_power_rotating(theta0, &[off], &nlos, fading, &spec, delta)?;
    }
    Ok(total / q as f64)
}

/// Energy available at a device from all beacons (independent signals add).
pub fn total_incident(xi_per_pb: &[f64]) -> Result<f64> {
    if let Some(bad) = xi_per_pb.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::invalid(
            "incident power",
            format!("{bad} is negative"),
        ));
    }
    Ok(xi_per_pb.iter().sum())
}

/// Linear energy harvesting model `g(xi) = zeta xi`.
pub fn harvested_power(xi: f64, efficiency: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&efficiency) {
        return Err(Error::invalid("efficiency", "must lie in [0, 1)"));
    }
    if !(xi >= 0.0) {
        return Err(Error::invalid("incident power", "must be >= 0"));
    }
    Ok(efficiency * xi)
}

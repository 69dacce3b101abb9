//! Monte Carlo experiments: device deployments, fading, coverage and sweeps.
//!
//! A run repeats `trials.deployments` times: scatter devices uniformly over
//! the disk, place the beacons, then average every device's incident power
//! over `trials.fading_draws` independent blocks. The worst device of each
//! deployment is recorded and those minima are aggregated across deployments.
//!
//! Randomness comes from [`crate::rng`] streams keyed by replicate, beacon and
//! device, so schemes evaluated on the same seed see the same devices,
//! orientations and scattered draws.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{azimuth, los_vector, FadingParams};
use crate::placement::{self, Deployment, EffcParams, KMeansConfig, OrientationPolicy};
use crate::power::{rab_max_antennas, transmit_power, MotorParams, PowerBudget, PowerSystem};
use crate::rng::{stream, Purpose, SimRng};
use crate::schemes::{alternating, rab_offsets, SchemeKind};
use crate::soil::{path_loss_components, LinkGeometry, MineralogyModel, RfParams, SoilProperties};
use crate::units::{db_to_linear, dbm_to_watts, watts_to_dbm};
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trials {
    pub deployments: usize,
    /// Fading blocks averaged per device and deployment.
    pub fading_draws: usize,
}

/// How per-deployment minima are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    #[default]
    Mean,
    Median,
}

/// When RAB redraws the scattered component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RabFading {
    /// Once per block, shared by all rotation steps.
    #[default]
    Block,
    /// Independently at every rotation step.
    Step,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementMethod {
    /// A single beacon at the origin.
    Center,
    Kmeans,
    #[default]
    Effc,
    /// Positions listed in [`PlacementSpec::positions`].
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSpec {
    pub method: PlacementMethod,
    pub orientation: OrientationPolicy,
    /// EFFC radius scan step; `None` means `radius / 500`.
    pub effc_step: Option<f64>,
    pub kmeans_restarts: usize,
    pub kmeans_max_iterations: usize,
    pub positions: Vec<Point>,
}

impl Default for PlacementSpec {
    fn default() -> Self {
        let km = KMeansConfig::default();
        PlacementSpec {
            method: PlacementMethod::default(),
            orientation: OrientationPolicy::default(),
            effc_step: None,
            kmeans_restarts: km.restarts,
            kmeans_max_iterations: km.max_iterations,
            positions: Vec::new(),
        }
    }
}

/// Soil description. Without an explicit permittivity the mineralogy-based
/// model computes it from moisture, clay and carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoilSpec {
    pub vwc: f64,
    pub clay: f64,
    pub mu_r: f64,
    /// `[eps_real, eps_imag]`.
    pub permittivity: Option<[f64; 2]>,
}

impl Default for SoilSpec {
    fn default() -> Self {
        SoilSpec {
            vwc: 0.15,
            clay: 0.38,
            mu_r: 1.0,
            permittivity: None,
        }
    }
}

impl SoilSpec {
    pub fn resolve(&self, frequency: f64) -> Result<SoilProperties> {
        match self.permittivity {
            Some([re, im]) => SoilProperties::new(self.vwc, self.clay, self.mu_r, re, im),
            None => SoilProperties::from_model(
                &MineralogyModel,
                self.vwc,
                self.clay,
                self.mu_r,
                frequency,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingSpec {
    /// Linear Rician factor.
    pub rician_k: f64,
    /// Scattered-component covariance as rows of `[re, im]`; identity when
    /// absent.
    pub covariance: Option<Vec<Vec<[f64; 2]>>>,
}

impl Default for FadingSpec {
    fn default() -> Self {
        FadingSpec {
            rician_k: 10.0,
            covariance: None,
        }
    }
}

impl FadingSpec {
    pub fn params(&self) -> Result<FadingParams> {
        let base = FadingParams::new(self.rician_k)?;
        match &self.covariance {
            None => Ok(base),
            Some(rows) => {
                let rows: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                    .collect();
                base.with_covariance(&rows)
            }
        }
    }
}

/// Everything a run needs. Powers are watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub radius: f64,
    pub device_count: usize,
    pub burial_depth: f64,
    pub pb_height: f64,
    pub pb_count: usize,
    pub antennas_per_pb: usize,
    pub scheme: SchemeKind,
    pub placement: PlacementSpec,
    pub soil: SoilSpec,
    pub rf: RfParams,
    pub fading: FadingSpec,
    pub power_system: PowerSystem,
    pub budget: PowerBudget,
    pub motor: MotorParams,
    /// Energy harvesting sensitivity, W.
    pub eh_threshold: f64,
    pub trials: Trials,
    pub aggregate: Aggregate,
    pub rab_fading: RabFading,
    /// Fading blocks averaged per heatmap cell.
    pub heatmap_draws: usize,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            radius: 5.0,
            device_count: 64,
            burial_depth: 0.35,
            pb_height: 1.5,
            pb_count: 1,
            antennas_per_pb: 4,
            scheme: SchemeKind::Rab,
            placement: PlacementSpec::default(),
            soil: SoilSpec::default(),
            rf: RfParams {
                frequency: 433e6,
                path_loss_exponent: 2.0,
            },
            fading: FadingSpec::default(),
            power_system: PowerSystem::Ideal,
            budget: PowerBudget {
                budget: 10.0,
                amp_efficiency: 0.38,
                circuit: 0.1,
                rf_chain: 0.06,
            },
            motor: MotorParams::default(),
            eh_threshold: dbm_to_watts(-22.0),
            trials: Trials {
                deployments: 100,
                fading_draws: 200,
            },
            aggregate: Aggregate::Mean,
            rab_fading: RabFading::Block,
            heatmap_draws: 500,
            seed: 1,
        }
    }
}

/// Scenario quantities derived once per run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub soil: SoilProperties,
    pub fading: FadingParams,
    /// Per-beacon transmit power, W.
    pub transmit_power: f64,
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, "must be finite and > 0"))
    }
}

impl Scenario {
    /// Runs every check the simulation would hit and derives the soil
    /// permittivity, fading model and transmit power.
    pub fn prepare(&self) -> Result<Prepared> {
        positive("radius", self.radius)?;
        positive("burial_depth", self.burial_depth)?;
        positive("pb_height", self.pb_height)?;
        positive("eh_threshold", self.eh_threshold)?;
        if self.device_count == 0 {
            return Err(Error::invalid("device_count", "must be >= 1"));
        }
        if self.pb_count == 0 {
            return Err(Error::invalid("pb_count", "must be >= 1"));
        }
        if self.trials.deployments == 0 || self.trials.fading_draws == 0 {
            return Err(Error::invalid(
                "trials",
                "deployments and fading_draws must be >= 1",
            ));
        }
        if self.heatmap_draws == 0 {
            return Err(Error::invalid("heatmap_draws", "must be >= 1"));
        }
        let q = self.antennas_per_pb;
        self.scheme.check(q)?;
        self.motor.validate()?;
        if self.scheme == SchemeKind::Rab {
            let max = rab_max_antennas(&self.motor);
            if q > max {
                return Err(Error::SchemeConstraint(format!(
                    "RAB with {q} antennas needs {q} rotation steps per block; the motor fits at most {max}"
                )));
            }
        }
        self.check_placement()?;
        self.rf.validate()?;
        let soil = self.soil.resolve(self.rf.frequency)?;
        let fading = self.fading.params()?;
        fading.check_antennas(q)?;
        let p = transmit_power(self.power_system, &self.budget, &self.motor, self.scheme, q)?;
        Ok(Prepared {
            soil,
            fading,
            transmit_power: p,
        })
    }

    fn effc_params(&self) -> EffcParams {
        let mut params = EffcParams::new(self.pb_count, self.rf.path_loss_exponent, self.radius);
        if let Some(step) = self.placement.effc_step {
            params.step = step;
        }
        params
    }

    fn check_placement(&self) -> Result<()> {
        let m = self.pb_count;
        match self.placement.method {
            PlacementMethod::Center if m != 1 => Err(Error::invalid(
                "placement.method",
                "center placement needs pb_count = 1",
            )),
            PlacementMethod::Kmeans if m > self.device_count => Err(Error::invalid(
                "pb_count",
                format!(
                    "K-Means cannot place {m} beacons for {} devices",
                    self.device_count
                ),
            )),
            PlacementMethod::Kmeans
                if self.placement.kmeans_restarts == 0
                    || self.placement.kmeans_max_iterations == 0 =>
            {
                Err(Error::invalid(
                    "placement",
                    "kmeans_restarts and kmeans_max_iterations must be >= 1",
                ))
            }
            PlacementMethod::Effc => self.effc_params().validate(),
            PlacementMethod::Fixed if self.placement.positions.len() != m => Err(Error::invalid(
                "placement.positions",
                format!(
                    "{} positions for pb_count = {m}",
                    self.placement.positions.len()
                ),
            )),
            PlacementMethod::Fixed
                if self
                    .placement
                    .positions
                    .iter()
                    .flatten()
                    .any(|v| !v.is_finite()) =>
            {
                Err(Error::invalid("placement.positions", "must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Beacon layout for deployment replicate `replicate`.
    pub fn place_beacons(&self, devices: &[Point], replicate: u64) -> Result<Deployment> {
        let positions = match self.placement.method {
            PlacementMethod::Center => vec![[0.0, 0.0]],
            PlacementMethod::Fixed => self.placement.positions.clone(),
            PlacementMethod::Effc => placement::effc_place(&self.effc_params())?.positions,
            PlacementMethod::Kmeans => {
                let config = KMeansConfig {
                    restarts: self.placement.kmeans_restarts,
                    max_iterations: self.placement.kmeans_max_iterations,
                };
                let mut rng = stream(self.seed, Purpose::Placement, &[replicate]);
                placement::kmeans(devices, self.pb_count, config, &mut rng)?.centroids
            }
        };
        let orientations = positions
            .iter()
            .enumerate()
            .map(|(m, p)| {
                let mut rng = stream(self.seed, Purpose::Orientation, &[replicate, m as u64]);
                placement::orientations(&[*p], self.placement.orientation, &mut rng)[0]
            })
            .collect();
        Deployment::new(positions, orientations)
    }
}

/// `n` points uniform over the disk of radius `radius`.
pub fn deploy_devices<R: Rng + ?Sized>(radius: f64, n: usize, rng: &mut R) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let phi = rng.gen::<f64>() * TAU;
            [r * phi.cos(), r * phi.sin()]
        })
        .collect()
}

/// Precomputed quantities of one beacon-device link.
#[derive(Debug, Clone)]
pub struct Link {
    pub delta: f64,
    pub theta: f64,
    los: Vec<Complex64>,
    /// `v^T a(theta + offset)` per rotation step (RAB) or once (AA_SS).
    array_factors: Vec<Complex64>,
}

/// Per-draw incident power of a scheme, specialized for speed. Results match
/// the reference rules in [`crate::schemes`] fed with the same random stream.
#[derive(Debug, Clone)]
pub struct LinkModel {
    scheme: SchemeKind,
    q: usize,
    p: f64,
    fading: FadingParams,
    rab_fading: RabFading,
    precoder: Vec<Complex64>,
    offsets: Vec<f64>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinkModel {
    pub fn new(scenario: &Scenario, prepared: &Prepared) -> Self {
        let q = scenario.antennas_per_pb;
        let precoder = match scenario.scheme {
            SchemeKind::AaSsII | SchemeKind::Rab => alternating(q),
            _ => vec![Complex64::new(1.0, 0.0); q],
        };
        LinkModel {
            scheme: scenario.scheme,
            q,
            p: prepared.transmit_power,
            fading: prepared.fading.clone(),
            rab_fading: scenario.rab_fading,
            precoder,
            offsets: if scenario.scheme == SchemeKind::Rab {
                rab_offsets(q)
            } else {
                vec![0.0]
            },
        }
    }

    pub fn link(&self, delta: f64, theta: f64) -> Link {
        let array_factors = match self.scheme {
            SchemeKind::AaSsI | SchemeKind::AaSsII | SchemeKind::Rab => self
                .offsets
                .iter()
                .map(|off| dot(&self.precoder, &los_vector(theta + off, self.q)))
                .collect(),
            _ => Vec::new(),
        };
        Link {
            delta,
            theta,
            los: los_vector(theta, self.q),
            array_factors,
        }
    }

    /// Incident power of one fading block. `buf` must hold `Q` entries.
    pub fn draw<R: Rng + ?Sized>(
        &self,
        link: &Link,
        rng: &mut R,
        buf: &mut [Complex64],
    ) -> Result<f64> {
        let a = self.fading.los_weight();
        let b = self.fading.nlos_weight();
        let per_signal = self.p / self.q as f64;
        self.fading.draw_nlos(rng, buf)?;
        let gain = match self.scheme {
            SchemeKind::Sa | SchemeKind::AaIs => {
                per_signal
                    * link
                        .los
                        .iter()
                        .zip(buf.iter())
                        .map(|(l, w)| (l * a + w * b).norm_sqr())
                        .sum::<f64>()
            }
            SchemeKind::AaSsI | SchemeKind::AaSsII => {
                per_signal * (link.array_factors[0] * a + dot(&self.precoder, buf) * b).norm_sqr()
            }
            SchemeKind::Rab => {
                let mut total = 0.0;
                for (s, af) in link.array_factors.iter().enumerate() {
                    if s > 0 && self.rab_fading == RabFading::Step {
                        self.fading.draw_nlos(rng, buf)?;
                    }
                    total += (af * a + dot(&self.precoder, buf) * b).norm_sqr();
                }
                per_signal * total / self.q as f64
            }
            SchemeKind::FullCsi => return Err(Error::NotImplemented("the FULL_CSI precoder")),
        };
        Ok(gain / link.delta)
    }

    /// Mean over `draws` blocks.
    pub fn average<R: Rng + ?Sized>(&self, link: &Link, draws: usize, rng: &mut R) -> Result<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.q];
        let mut total = 0.0;
        for _ in 0..draws {
            total += self.draw(link, rng, &mut buf)?;
        }
        Ok(total / draws as f64)
    }
}

/// Total path loss between a beacon and a device whose ground projections
/// are `horizontal` meters apart.
pub fn link_path_loss(scenario: &Scenario, prepared: &Prepared, horizontal: f64) -> Result<f64> {
    let geom = LinkGeometry::new(horizontal, scenario.pb_height, scenario.burial_depth)?;
    Ok(path_loss_components(&geom, &prepared.soil, &scenario.rf)?.total())
}

fn make_link(
    scenario: &Scenario,
    prepared: &Prepared,
    model: &LinkModel,
    pb: Point,
    orientation: f64,
    device: Point,
) -> Result<Link> {
    let horizontal = (device[0] - pb[0]).hypot(device[1] - pb[1]);
    let delta = link_path_loss(scenario, prepared, horizontal)?;
    Ok(model.link(delta, azimuth(pb, orientation, device)))
}

/// Incident power at `device` from a beacon at `pb` during one fading block.
pub fn evaluate_link<R: Rng + ?Sized>(
    scenario: &Scenario,
    pb: Point,
    orientation: f64,
    device: Point,
    rng: &mut R,
) -> Result<f64> {
    let prepared = scenario.prepare()?;
    let model = LinkModel::new(scenario, &prepared);
    let link = make_link(scenario, &prepared, &model, pb, orientation, device)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); scenario.antennas_per_pb];
    model.draw(&link, rng, &mut buf)
}

/// One deployment replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateReport {
    pub devices: Vec<Point>,
    pub beacons: Deployment,
    /// Fading-averaged total incident power per device, W.
    pub avg_power: Vec<f64>,
    /// Smallest entry of `avg_power`.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub scheme: SchemeKind,
    pub transmit_power: f64,
    /// Per-replicate worst device, aggregated over replicates, W.
    pub worst_case_avg: f64,
    /// Mean of all per-device averages, W.
    pub mean_avg_power: f64,
    /// Fraction of (replicate, device) pairs at or above the threshold.
    pub coverage: f64,
    pub eh_threshold: f64,
    pub aggregate: Aggregate,
    pub seed: u64,
    pub replicates: Vec<ReplicateReport>,
}

impl EnergyReport {
    pub fn per_device_avg_power(&self) -> impl Iterator<Item = f64> + '_ {
        self.replicates
            .iter()
            .flat_map(|r| r.avg_power.iter().copied())
    }

    pub fn worst_per_replicate(&self) -> Vec<f64> {
        self.replicates.iter().map(|r| r.worst).collect()
    }

    pub fn worst_case_dbm(&self) -> f64 {
        watts_to_dbm(self.worst_case_avg)
    }

    /// Coverage at another threshold, W.
    pub fn coverage_at(&self, threshold: f64) -> f64 {
        coverage(self.per_device_avg_power(), threshold)
    }
}

fn coverage(values: impl Iterator<Item = f64>, threshold: f64) -> f64 {
    let (hit, n) = values.fold((0usize, 0usize), |(h, n), v| {
        (h + usize::from(v >= threshold), n + 1)
    });
    if n == 0 {
        0.0
    } else {
        hit as f64 / n as f64
    }
}

pub fn aggregate(values: &[f64], how: Aggregate) -> f64 {
    match how {
        Aggregate::Mean => values.iter().sum::<f64>() / values.len() as f64,
        Aggregate::Median => {
            let mut v = values.to_vec();
            v.sort_by(f64::total_cmp);
            let n = v.len();
            if n % 2 == 1 {
                v[n / 2]
            } else {
                (v[n / 2 - 1] + v[n / 2]) / 2.0
            }
        }
    }
}

fn run_replicate(
    scenario: &Scenario,
    prepared: &Prepared,
    model: &LinkModel,
    replicate: u64,
) -> Result<ReplicateReport> {
    let devices = deploy_devices(
        scenario.radius,
        scenario.device_count,
        &mut stream(scenario.seed, Purpose::Deployment, &[replicate]),
    );
    let beacons = scenario.place_beacons(&devices, replicate)?;
    let avg_power = devices
        .par_iter()
        .enumerate()
        .map(|(i, &dev)| {
            let mut g = 0.0;
            for (m, (&pb, &orient)) in beacons
                .positions
                .iter()
                .zip(&beacons.orientations)
                .enumerate()
            {
                let link = make_link(scenario, prepared, model, pb, orient, dev)?;
                let mut rng: SimRng = stream(
                    scenario.seed,
                    Purpose::Fading,
                    &[replicate, m as u64, i as u64],
                );
                g += model.average(&link, scenario.trials.fading_draws, &mut rng)?;
            }
            Ok(g)
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = avg_power.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ReplicateReport {
        devices,
        beacons,
        avg_power,
        worst,
    })
}

/// Runs all deployment replicates. Results do not depend on thread count.
pub fn run(scenario: &Scenario) -> Result<EnergyReport> {
    let prepared = scenario.prepare()?;
    let model = LinkModel::new(scenario, &prepared);
    let replicates = (0..scenario.trials.deployments as u64)
        .into_par_iter()
        .map(|r| run_replicate(scenario, &prepared, &model, r))
        .collect::<Result<Vec<_>>>()?;
    let worst: Vec<f64> = replicates.iter().map(|r| r.worst).collect();
    let count: usize = replicates.iter().map(|r| r.avg_power.len()).sum();
    let mean_avg_power = replicates
        .iter()
        .flat_map(|r| r.avg_power.iter())
        .sum::<f64>()
        / count as f64;
    let coverage = coverage(
        replicates.iter().flat_map(|r| r.avg_power.iter().copied()),
        scenario.eh_threshold,
    );
    Ok(EnergyReport {
        scheme: scenario.scheme,
        transmit_power: prepared.transmit_power,
        worst_case_avg: aggregate(&worst, scenario.aggregate),
        mean_avg_power,
        coverage,
        eh_threshold: scenario.eh_threshold,
        aggregate: scenario.aggregate,
        seed: scenario.seed,
        replicates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Heatmap {
    pub resolution: usize,
    /// Cell-center coordinates, shared by both axes, meters.
    pub axis: Vec<f64>,
    /// `values_dbm[row][col]` at `(axis[col], axis[row])`; NaN outside the
    /// disk.
    pub values_dbm: Vec<Vec<f64>>,
    pub beacons: Deployment,
    /// Fraction of in-disk cells at or above the threshold.
    pub area_coverage: f64,
    pub draws: usize,
}

impl Heatmap {
    pub fn cell_center(&self, row: usize, col: usize) -> Point {
        [self.axis[col], self.axis[row]]
    }
}

/// Fading-averaged incident power at devices buried under each grid cell
/// center. Beacons are placed as in deployment replicate 0.
pub fn heatmap(scenario: &Scenario, resolution: usize) -> Result<Heatmap> {
    if resolution < 16 {
        return Err(Error::invalid("resolution", "must be >= 16"));
    }
    let prepared = scenario.prepare()?;
    let model = LinkModel::new(scenario, &prepared);
    let devices = deploy_devices(
        scenario.radius,
        scenario.device_count,
        &mut stream(scenario.seed, Purpose::Deployment, &[0]),
    );
    let beacons = scenario.place_beacons(&devices, 0)?;
    let width = 2.0 * scenario.radius / resolution as f64;
    let axis: Vec<f64> = (0..resolution)
        .map(|j| -scenario.radius + (j as f64 + 0.5) * width)
        .collect();
    let draws = scenario.heatmap_draws;

    let watts = (0..resolution)
        .into_par_iter()
        .map(|row| {
            (0..resolution)
                .map(|col| {
                    let cell = [axis[col], axis[row]];
                    if cell[0].hypot(cell[1]) > scenario.radius {
                        return Ok(f64::NAN);
                    }
                    let mut g = 0.0;
                    for (m, (&pb, &orient)) in beacons
                        .positions
                        .iter()
                        .zip(&beacons.orientations)
                        .enumerate()
                    {
                        let link = make_link(scenario, &prepared, &model, pb, orient, cell)?;
                        let mut rng = stream(
                            scenario.seed,
                            Purpose::Heatmap,
                            &[row as u64, col as u64, m as u64],
                        );
                        g += model.average(&link, draws, &mut rng)?;
                    }
                    Ok(g)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let area_coverage = coverage(
        watts.iter().flatten().copied().filter(|v| !v.is_nan()),
        scenario.eh_threshold,
    );
    let values_dbm = watts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&w| {
                    if w.is_nan() {
                        f64::NAN
                    } else {
                        watts_to_dbm(w)
                    }
                })
                .collect()
        })
        .collect();
    Ok(Heatmap {
        resolution,
        axis,
        values_dbm,
        beacons,
        area_coverage,
        draws,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `L = M Q` with `M` fixed; values must be multiples of `M`.
    #[serde(alias = "L")]
    TotalAntennas,
    Vwc,
    Depth,
    /// Linear Rician factor.
    RicianK,
    RicianKDb,
    /// Threshold in watts.
    EhThreshold,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::TotalAntennas => "total_antennas",
            SweepAxis::Vwc => "vwc",
            SweepAxis::Depth => "depth",
            SweepAxis::RicianK => "rician_k",
            SweepAxis::RicianKDb => "rician_k_db",
            SweepAxis::EhThreshold => "eh_threshold",
        }
    }

    /// Copy of `base` with this axis set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = base.clone();
        match self {
            SweepAxis::TotalAntennas => {
                let m = base.pb_count;
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(Error::invalid(
                        "total_antennas",
                        format!("{value} is not a positive integer"),
                    ));
                }
                let l = value as usize;
                if !l.is_multiple_of(m) {
                    return Err(Error::invalid(
                        "total_antennas",
                        format!("{l} is not a multiple of pb_count = {m}"),
                    ));
                }
                s.antennas_per_pb = l / m;
            }
            SweepAxis::Vwc => s.soil.vwc = value,
            SweepAxis::Depth => s.burial_depth = value,
            SweepAxis::RicianK => s.fading.rician_k = value,
            SweepAxis::RicianKDb => s.fading.rician_k = db_to_linear(value),
            SweepAxis::EhThreshold => s.eh_threshold = value,
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepStats {
    pub transmit_power: f64,
    pub worst_case_avg: f64,
    pub mean_avg_power: f64,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub scheme: SchemeKind,
    pub antennas_per_pb: usize,
    /// `None` when the cell is infeasible.
    pub stats: Option<SweepStats>,
    pub infeasible: Option<String>,
}

/// One row per `(value, scheme)`, values outermost. Every scheme runs on the
/// base seed. Cells whose budget cannot cover the scheme, or whose antenna
/// count the scheme cannot use, are kept with an infeasibility reason.
pub fn sweep(
    base: &Scenario,
    axis: SweepAxis,
    values: &[f64],
    schemes: &[SchemeKind],
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::Empty("sweep needs at least one value"));
    }
    if schemes.is_empty() {
        return Err(Error::Empty("sweep needs at least one scheme"));
    }
    let cells: Vec<(f64, Scenario)> = values
        .iter()
        .map(|&v| axis.apply(base, v).map(|s| (v, s)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(values.len() * schemes.len());
    for (value, scenario) in &cells {
        for &scheme in schemes {
            let mut s = scenario.clone();
            s.scheme = scheme;
            let (stats, infeasible) = match run(&s) {
                Ok(r) => (
                    Some(SweepStats {
                        transmit_power: r.transmit_power,
                        worst_case_avg: r.worst_case_avg,
                        mean_avg_power: r.mean_avg_power,
                        coverage: r.coverage,
                    }),
                    None,
                ),
                Err(e @ (Error::InsufficientBudget { .. } | Error::SchemeConstraint(_))) => {
                    (None, Some(e.to_string()))
                }
                Err(e) => return Err(e),
            };
            rows.push(SweepRow {
                value: *value,
                scheme,
                antennas_per_pb: s.antennas_per_pb,
                stats,
                infeasible,
            });
        }
    }
    Ok(rows)
}

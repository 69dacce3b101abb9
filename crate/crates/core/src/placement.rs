//! Where to put the power beacons.
//!
//! Two strategies: K-Means on the ground projections of known device
//! positions, and the position-agnostic equally-far-from-center (EFFC) ring
//! search which only needs the beacon count, path-loss exponent and radius.

use std::f64::consts::{PI, TAU};

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Beacon positions and array headings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deployment {
    pub positions: Vec<Point>,
    pub orientations: Vec<f64>,
}

impl Deployment {
    pub fn new(positions: Vec<Point>, orientations: Vec<f64>) -> Result<Self> {
        if positions.len() != orientations.len() {
            return Err(Error::DimensionMismatch {
                expected: positions.len(),
                actual: orientations.len(),
            });
        }
        Ok(Deployment {
            positions,
            orientations,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn fits_within(&self, radius: f64) -> bool {
        self.positions
            .iter()
            .all(|p| p[0].hypot(p[1]) <= radius * (1.0 + 1e-12))
    }
}

/// How beacon arrays are pointed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationPolicy {
    /// Independent uniform heading per beacon and replicate.
    #[default]
    Random,
    /// Every boresight along +x.
    Fixed,
    /// Boresight toward the area center (beacons at the center use +x).
    Radial,
}

pub fn orientations<R: Rng + ?Sized>(
    positions: &[Point],
    policy: OrientationPolicy,
    rng: &mut R,
) -> Vec<f64> {
    positions
        .iter()
        .map(|p| match policy {
            OrientationPolicy::Random => rng.gen::<f64>() * TAU,
            OrientationPolicy::Fixed => 0.0,
            OrientationPolicy::Radial if p[0] == 0.0 && p[1] == 0.0 => 0.0,
            OrientationPolicy::Radial => (-p[1]).atan2(-p[0]).rem_euclid(TAU),
        })
        .collect()
}

fn dist2(a: Point, b: Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iterations: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            restarts: 10,
            max_iterations: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Vec<Point>,
    /// Cluster of each input device, in input order.
    pub assignment: Vec<usize>,
    /// Sum of squared device-to-centroid distances.
    pub objective: f64,
    /// Objective after every assignment step of the winning restart.
    pub trace: Vec<f64>,
    /// False only if `max_iterations` was hit.
    pub converged: bool,
}

/// Lloyd's algorithm from `m` random devices, keeping the best of
/// `config.restarts` runs. Devices are processed in a canonical (sorted)
/// order so the result does not depend on how the input is ordered.
pub fn kmeans<R: Rng + ?Sized>(
    devices: &[Point],
    m: usize,
    config: KMeansConfig,
    rng: &mut R,
) -> Result<KMeansResult> {
    if devices.is_empty() {
        return Err(Error::Empty("K-Means needs at least one device"));
    }
    if m == 0 {
        return Err(Error::invalid("pb_count", "must be >= 1"));
    }
    if m > devices.len() {
        return Err(Error::invalid(
            "pb_count",
            format!("{m} beacons for {} devices", devices.len()),
        ));
    }
    let mut order: Vec<usize> = (0..devices.len()).collect();
    order.sort_by(|&a, &b| {
        devices[a][0]
            .total_cmp(&devices[b][0])
            .then(devices[a][1].total_cmp(&devices[b][1]))
    });
    let sorted: Vec<Point> = order.iter().map(|&i| devices[i]).collect();

    let mut best: Option<KMeansResult> = None;
    for _ in 0..config.restarts.max(1) {
        let start: Vec<Point> = index::sample(rng, sorted.len(), m)
            .into_iter()
            .map(|i| sorted[i])
            .collect();
        let run = lloyd(&sorted, start, config.max_iterations);
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one restart");
    let mut assignment = vec![0; devices.len()];
    for (slot, &orig) in order.iter().enumerate() {
        assignment[orig] = best.assignment[slot];
    }
    best.assignment = assignment;
    Ok(best)
}

fn lloyd(points: &[Point], mut centroids: Vec<Point>, max_iterations: usize) -> KMeansResult {
    let m = centroids.len();
    let mut assignment: Vec<usize> = vec![usize::MAX; points.len()];
    let mut trace = Vec::new();
    let mut converged = false;

    for _ in 0..max_iterations {
        // assignment step; ties keep the current cluster
        let mut changed = false;
        for (p, a) in points.iter().zip(assignment.iter_mut()) {
            let mut pick = *a;
            let mut best = if pick < m {
                dist2(*p, centroids[pick])
            } else {
                f64::INFINITY
            };
            for (j, c) in centroids.iter().enumerate() {
                let d = dist2(*p, *c);
                if d < best {
                    best = d;
                    pick = j;
                }
            }
            if pick != *a {
                *a = pick;
                changed = true;
            }
        }
        trace.push(objective(points, &centroids, &assignment));
        if !changed {
            converged = true;
            break;
        }

        // update step
        let mut sums = vec![[0.0, 0.0]; m];
        let mut counts = vec![0usize; m];
        for (p, &a) in points.iter().zip(&assignment) {
            sums[a][0] += p[0];
            sums[a][1] += p[1];
            counts[a] += 1;
        }
        for j in 0..m {
            if counts[j] > 0 {
                centroids[j] = [sums[j][0] / counts[j] as f64, sums[j][1] / counts[j] as f64];
            }
        }
        // empty clusters restart on the device worst served by its centroid
        for j in 0..m {
            if counts[j] == 0 {
                let far = points
                    .iter()
                    .zip(&assignment)
                    .enumerate()
                    .filter(|(_, (_, &a))| counts[a] > 1)
                    .max_by(|(_, (p, &a)), (_, (q, &b))| {
                        dist2(**p, centroids[a]).total_cmp(&dist2(**q, centroids[b]))
                    })
                    .map(|(i, _)| i);
                if let Some(i) = far {
                    counts[assignment[i]] -= 1;
                    centroids[j] = points[i];
                    assignment[i] = j;
                    counts[j] = 1;
                }
            }
        }
    }
    let objective = objective(points, &centroids, &assignment);
    KMeansResult {
        centroids,
        assignment,
        objective,
        trace,
        converged,
    }
}

fn objective(points: &[Point], centroids: &[Point], assignment: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(p, &a)| dist2(*p, centroids[a]))
        .sum()
}

/// K-Means placement with all arrays at heading zero.
pub fn kmeans_place<R: Rng + ?Sized>(
    devices: &[Point],
    m: usize,
    rng: &mut R,
) -> Result<Deployment> {
    let result = kmeans(devices, m, KMeansConfig::default(), rng)?;
    let n = result.centroids.len();
    Deployment::new(result.centroids, vec![0.0; n])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffcParams {
    pub pb_count: usize,
    /// Path-loss exponent used in the energy estimates.
    pub exponent: f64,
    pub radius: f64,
    /// Radius scan step.
    pub step: f64,
}

impl EffcParams {
    /// Default scan step is `radius / 500`.
    pub fn new(pb_count: usize, exponent: f64, radius: f64) -> Self {
        EffcParams {
            pb_count,
            exponent,
            radius,
            step: radius / 500.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pb_count == 0 {
            return Err(Error::invalid("pb_count", "must be >= 1"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::invalid("radius", "must be finite and > 0"));
        }
        if !(self.step > 0.0 && self.step < self.radius) {
            return Err(Error::invalid("effc_step", "must lie in (0, radius)"));
        }
        if !(self.exponent > 0.0 && self.exponent.is_finite()) {
            return Err(Error::invalid("exponent", "must be finite and > 0"));
        }
        Ok(())
    }
}

/// The two EFFC layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EffcConfiguration {
    /// All beacons on a ring of radius r.
    Ring,
    /// One beacon at the center, the rest on the ring.
    CenterRing,
}

/// Energy proxies of both layouts at one ring radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffcEstimates {
    /// Ring layout, sensor at the center.
    pub center: f64,
    /// Ring layout, sensor on the area edge between two beacons.
    pub edge_ring: f64,
    /// Center-ring layout, sensor equidistant to the center and two
    /// neighbouring ring beacons.
    pub equidistant: f64,
    /// Center-ring layout, sensor on the edge.
    pub edge_center_ring: f64,
}

impl EffcEstimates {
    pub fn ring_score(&self) -> f64 {
        self.center.min(self.edge_ring)
    }

    pub fn center_ring_score(&self) -> f64 {
        self.equidistant.min(self.edge_center_ring)
    }
}

/// Whether the center-ring layout is geometrically defined. The
/// equidistant point sits at `r / (2 cos(pi / (M - 1)))`, which is negative
/// for M = 2 and unbounded for M = 3.
pub fn center_ring_feasible(pb_count: usize) -> bool {
    pb_count >= 4
}

/// Evaluates the four EFFC estimates at ring radius `r`. The equidistant
/// estimate is zero when the center-ring layout is infeasible.
pub fn effc_estimates(params: &EffcParams, r: f64) -> Result<EffcEstimates> {
    params.validate()?;
    if !(r > 0.0 && r <= params.radius * (1.0 + 1e-12)) {
        return Err(Error::invalid("r", "must lie in (0, radius]"));
    }
    let m = params.pb_count;
    let tau = params.exponent;
    let big_r = params.radius;
    let mf = m as f64;
    let ring_term = |a: f64, b: f64, gap: f64, k: usize| {
        (a * a + b * b - 2.0 * a * b * (gap * (k as f64 - 1.5)).cos()).powf(-tau / 2.0)
    };

    let center = mf * r.powf(-tau);
    let edge_ring: f64 = (1..=m).map(|k| ring_term(r, big_r, TAU / mf, k)).sum();
    let ring_gap = if m > 1 { TAU / (mf - 1.0) } else { 0.0 };
    let edge_center_ring = big_r.powf(-tau)
        + (1..m)
            .map(|k| ring_term(big_r, r, ring_gap, k))
            .sum::<f64>();
    let equidistant = if center_ring_feasible(m) {
        let x = r / (2.0 * (PI / (mf - 1.0)).cos());
        x.powf(-tau) + (1..m).map(|k| ring_term(x, r, ring_gap, k)).sum::<f64>()
    } else {
        0.0
    };
    Ok(EffcEstimates {
        center,
        edge_ring,
        equidistant,
        edge_center_ring,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffcSolution {
    pub configuration: EffcConfiguration,
    pub ring_radius: f64,
    /// Min-estimate of the selected layout.
    pub score: f64,
    pub positions: Vec<Point>,
}

/// Scans ring radii `r = k * step < radius` and keeps the layout whose
/// min-estimate is the highest seen so far, starting from `M R^-tau`. If no
/// radius beats that start (M = 2), the beacons stay on the area edge.
pub fn effc_solve(params: &EffcParams) -> Result<EffcSolution> {
    params.validate()?;
    let m = params.pb_count;
    // the initial estimate is the ring layout on the area edge
    let mut best_score = m as f64 * params.radius.powf(-params.exponent);
    let mut best = (EffcConfiguration::Ring, params.radius);

    let mut k = 1usize;
    loop {
        let r = k as f64 * params.step;
        if k > 1 && r >= params.radius {
            break;
        }
        let est = effc_estimates(params, r)?;
        let (ring, center_ring) = (est.ring_score(), est.center_ring_score());
        if ring > center_ring {
            if best_score < ring {
                best_score = ring;
                best = (EffcConfiguration::Ring, r);
            }
        } else if best_score < center_ring {
            best_score = center_ring;
            best = (EffcConfiguration::CenterRing, r);
        }
        k += 1;
    }

    let (configuration, ring_radius) = best;
    Ok(EffcSolution {
        configuration,
        ring_radius,
        score: best_score,
        positions: effc_positions(m, configuration, ring_radius),
    })
}

/// Beacon coordinates of a layout.
pub fn effc_positions(m: usize, configuration: EffcConfiguration, r: f64) -> Vec<Point> {
    match configuration {
        EffcConfiguration::Ring => {
            let phi = TAU / m as f64;
            (0..m).map(|k| polar(r, phi * k as f64)).collect()
        }
        EffcConfiguration::CenterRing => {
            let phi = TAU / (m - 1) as f64;
            std::iter::once([0.0, 0.0])
                .chain((0..m - 1).map(|k| polar(r, phi * k as f64)))
                .collect()
        }
    }
}

fn polar(r: f64, angle: f64) -> Point {
    [r * angle.cos(), r * angle.sin()]
}

/// EFFC placement with all arrays at heading zero. A single beacon goes to
/// the center.
pub fn effc_place(params: &EffcParams) -> Result<Deployment> {
    params.validate()?;
    if params.pb_count == 1 {
        return Deployment::new(vec![[0.0, 0.0]], vec![0.0]);
    }
    let sol = effc_solve(params)?;
    let n = sol.positions.len();
    Deployment::new(sol.positions, vec![0.0; n])
}

//! Derivative-free searches over parameterized Blaschke families.
//!
//! [`minimize_slack`] drives a boundary inequality's slack toward zero with a
//! multistart Nelder-Mead search over the family parameters and the boundary
//! angle jointly. [`separation_scan`] samples the family away from the known
//! equality locus and reports the smallest slack seen there.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, EquationTag};
use crate::diskmap::{BoundaryPoint, DiskPoint, DiskSelfMap};
use crate::error::{Error, Result};
use crate::harness::{sample_stream, uniform_disk_point};

/// Any slack below `-FALSIFICATION_TOLERANCE` aborts a search.
pub const FALSIFICATION_TOLERANCE: f64 = 1e-9;
pub const STARTS: usize = 8;
pub const MIN_BUDGET: usize = 100;

const INITIAL_STEP: f64 = 0.5;
/// Simplex convergence: spread of values and of vertices.
const VALUE_SPREAD: f64 = 1e-16;
const VERTEX_SPREAD: f64 = 1e-10;
/// Stream offset separating scan samples from optimizer starts.
const SCAN_STREAM: u64 = 1 << 32;

/// A family of maps `e^{iφ} z^k Π_j B_{a_j}(z)` with `degree - k` free zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub degree: u32,
    pub origin_multiplicity: u32,
    pub phase_free: bool,
    pub zero_modulus_cap: f64,
    /// Pins every free zero to this modulus; each zero then contributes one
    /// parameter (its angle) instead of two.
    pub zero_modulus: Option<f64>,
}

impl FamilySpec {
    pub fn new(degree: u32, origin_multiplicity: u32) -> Result<Self> {
        let spec = FamilySpec {
            degree,
            origin_multiplicity,
            phase_free: false,
            zero_modulus_cap: 0.95,
            zero_modulus: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_zero_modulus(mut self, modulus: f64) -> Result<Self> {
        self.zero_modulus = Some(modulus);
        self.validate()?;
        Ok(self)
    }

    pub fn with_free_phase(mut self) -> Self {
        self.phase_free = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.origin_multiplicity > self.degree {
            return Err(Error::InvalidParameter {
                name: "family",
                reason: format!(
                    "degree {} with origin multiplicity {}",
                    self.degree, self.origin_multiplicity
                ),
            });
        }
        if !(self.zero_modulus_cap > 0.0 && self.zero_modulus_cap < 1.0) {
            return Err(Error::InvalidParameter {
                name: "zero_modulus_cap",
                reason: format!("{} is outside (0, 1)", self.zero_modulus_cap),
            });
        }
        if let Some(m) = self.zero_modulus {
            if !(0.0..=self.zero_modulus_cap).contains(&m) {
                return Err(Error::InvalidParameter {
                    name: "zero_modulus",
                    reason: format!("{m} is outside [0, {}]", self.zero_modulus_cap),
                });
            }
        }
        Ok(())
    }

    pub fn free_zeros(&self) -> usize {
        (self.degree - self.origin_multiplicity) as usize
    }

    fn per_zero(&self) -> usize {
        if self.zero_modulus.is_some() {
            1
        } else {
            2
        }
    }

    /// Length of the parameter vector: zero coordinates (or angles), then
    /// the phase if it is free.
    pub fn parameter_len(&self) -> usize {
        self.per_zero() * self.free_zeros() + usize::from(self.phase_free)
    }

    /// Builds the map for a parameter vector in natural coordinates (zero
    /// real/imaginary parts, or zero angles when the modulus is pinned).
    pub fn map(&self, params: &[f64]) -> Result<DiskSelfMap> {
        if params.len() != self.parameter_len() {
            return Err(Error::InvalidParameter {
                name: "params",
                reason: format!(
                    "expected {} values, got {}",
                    self.parameter_len(),
                    params.len()
                ),
            });
        }
        let mut zeros = Vec::with_capacity(self.free_zeros() + 1);
        if self.origin_multiplicity > 0 {
            zeros.push((DiskPoint::ORIGIN, self.origin_multiplicity));
        }
        let (zero_params, phase) = params.split_at(self.per_zero() * self.free_zeros());
        for chunk in zero_params.chunks(self.per_zero()) {
            let point = match self.zero_modulus {
                Some(m) => DiskPoint::polar(m, chunk[0])?,
                None => DiskPoint::new(num_complex::Complex64::new(chunk[0], chunk[1]))?,
            };
            if point.modulus() > self.zero_modulus_cap {
                return Err(Error::InvalidParameter {
                    name: "params",
                    reason: format!("zero modulus {} exceeds the cap", point.modulus()),
                });
            }
            zeros.push((point, 1));
        }
        DiskSelfMap::new(phase.first().copied().unwrap_or(0.0), zeros, None)
    }

    /// Maps unconstrained search coordinates to natural parameters. A free
    /// zero `(x, y)` lands at `cap (x, y) / sqrt(1 + x^2 + y^2)`.
    fn decode(&self, search: &[f64]) -> Vec<f64> {
        let n = self.per_zero() * self.free_zeros();
        let mut out = Vec::with_capacity(self.parameter_len());
        if self.zero_modulus.is_some() {
            out.extend_from_slice(&search[..n]);
        } else {
            for pair in search[..n].chunks(2) {
                let scale =
                    self.zero_modulus_cap / (1.0 + pair[0] * pair[0] + pair[1] * pair[1]).sqrt();
                out.push(pair[0] * scale);
                out.push(pair[1] * scale);
            }
        }
        out.extend_from_slice(&search[n..self.parameter_len()]);
        out
    }

    fn random_search_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_len() + 1);
        for _ in 0..self.free_zeros() {
            match self.zero_modulus {
                Some(_) => out.push(rng.gen_range(0.0..TAU)),
                None => {
                    // inverse of `decode` for a uniform point of the capped disk
                    let z = uniform_disk_point(rng, self.zero_modulus_cap).value()
                        / self.zero_modulus_cap;
                    let stretch = 1.0 / (1.0 - z.norm_sqr()).sqrt();
                    out.push(z.re * stretch);
                    out.push(z.im * stretch);
                }
            }
        }
        if self.phase_free {
            out.push(rng.gen_range(0.0..TAU));
        }
        out.push(rng.gen_range(0.0..TAU));
        out
    }

    fn random_natural_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let search = self.random_search_point(rng);
        self.decode(&search)
    }
}

/// Slack of a boundary inequality for `minimize_slack`.
fn boundary_slack(equation: EquationTag, f: &DiskSelfMap, b: BoundaryPoint) -> Result<f64> {
    let report = match equation {
        EquationTag::Eq1 => bounds::bound_lemma1(f, b)?,
        EquationTag::Eq2 => bounds::magnification(f, b)?.report,
        EquationTag::Eq8 => bounds::general_boundary_bound(f, b)?,
        EquationTag::Eq16 => bounds::kth_boundary_bound(f, b)?,
        EquationTag::Eq17 => bounds::julia_type_bound(f, b)?,
        other => return Err(Error::UnsupportedEquation { equation: other }),
    };
    Ok(report.slack)
}

fn check_family_for(equation: EquationTag, family: &FamilySpec) -> Result<()> {
    family.validate()?;
    let needs_origin = matches!(
        equation,
        EquationTag::Eq1 | EquationTag::Eq2 | EquationTag::Eq16
    );
    if needs_origin && family.origin_multiplicity == 0 {
        return Err(Error::InvalidParameter {
            name: "family",
            reason: format!("{equation} needs maps with f(0) = 0 (origin multiplicity >= 1)"),
        });
    }
    Ok(())
}

fn falsified(
    equation: EquationTag,
    slack: f64,
    family: &FamilySpec,
    params: &[f64],
    angle: f64,
    f: &DiskSelfMap,
) -> Error {
    let details = serde_json::json!({
        "family": family,
        "params": params,
        "boundary_angle": angle,
        "map": f,
    });
    Error::Falsified {
        equation,
        slack,
        tolerance: FALSIFICATION_TOLERANCE,
        details: details.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub best_slack: f64,
}

/// Everything needed to re-run a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub seed: u64,
    pub family: FamilySpec,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub equation: EquationTag,
    pub min_slack: f64,
    /// Natural parameters (see [`FamilySpec::map`]).
    pub argmin_parameters: Vec<f64>,
    pub argmin_boundary_angle: f64,
    pub argmin_map: DiskSelfMap,
    /// Index of the start that produced the minimum.
    pub best_start: usize,
    pub iterations: usize,
    pub evaluations: usize,
    pub trace: Vec<TracePoint>,
    pub reproduction: Reproduction,
}

impl SharpnessResult {
    pub fn argmin_boundary_point(&self) -> BoundaryPoint {
        BoundaryPoint::new(self.argmin_boundary_angle).expect("finite angle")
    }
}

struct StartOutcome {
    search: Vec<f64>,
    value: f64,
    iterations: usize,
    evaluations: usize,
    trace: Vec<(usize, f64)>,
}

/// Nelder-Mead with standard coefficients, restarted from the best vertex
/// until a restart stops improving or the budget runs out.
fn nelder_mead<F>(objective: &mut F, x0: Vec<f64>, budget: usize) -> Result<StartOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut iterations = 0usize;
    let mut trace = Vec::new();
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        objective(x)
    };

    let mut best_x = x0;
    let mut best_f = eval(&best_x, &mut evaluations)?;
    loop {
        let before = best_f;
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best_x.clone(), best_f)];
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += INITIAL_STEP;
            let fx = eval(&x, &mut evaluations)?;
            simplex.push((x, fx));
        }
        while evaluations < budget {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let f_best = simplex[0].1;
            let f_worst = simplex[n].1;
            let vertex_spread = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if f_worst - f_best <= VALUE_SPREAD && vertex_spread <= VERTEX_SPREAD {
                break;
            }
            iterations += 1;
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let along = |t: f64, worst: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(worst)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let worst = simplex[n].0.clone();
            let reflected = along(1.0, &worst);
            let f_reflected = eval(&reflected, &mut evaluations)?;
            if f_reflected < f_best {
                let expanded = along(2.0, &worst);
                let f_expanded = eval(&expanded, &mut evaluations)?;
                simplex[n] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
            } else if f_reflected < simplex[n - 1].1 {
                simplex[n] = (reflected, f_reflected);
            } else {
                let (contracted, reference) = if f_reflected < f_worst {
                    (along(0.5, &worst), f_reflected)
                } else {
                    (along(-0.5, &worst), f_worst)
                };
                let f_contracted = eval(&contracted, &mut evaluations)?;
                if f_contracted < reference {
                    simplex[n] = (contracted, f_contracted);
                } else {
                    let anchor = simplex[0].0.clone();
                    for vertex in simplex.iter_mut().skip(1) {
                        let shrunk: Vec<f64> = anchor
                            .iter()
                            .zip(&vertex.0)
                            .map(|(a, x)| a + 0.5 * (x - a))
                            .collect();
                        let f_shrunk = eval(&shrunk, &mut evaluations)?;
                        *vertex = (shrunk, f_shrunk);
                    }
                }
            }
            let current = simplex.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
            trace.push((iterations, current.min(best_f)));
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_f {
            best_x = simplex[0].0.clone();
            best_f = simplex[0].1;
        }
        if evaluations >= budget || before - best_f <= VALUE_SPREAD {
            break;
        }
    }
    Ok(StartOutcome {
        search: best_x,
        value: best_f,
        iterations,
        evaluations,
        trace,
    })
}

/// Multistart search for the smallest slack of `equation` over `family`
/// and the boundary angle.
///
/// Starts are drawn from per-start RNG streams of `seed` and may run
/// concurrently; the minimum over starts (ties to the lowest index) is
/// deterministic. Any evaluated slack below `-1e-9` aborts with
/// [`Error::Falsified`].
pub fn minimize_slack(
    family: &FamilySpec,
    equation: EquationTag,
    budget: usize,
    seed: u64,
) -> Result<SharpnessResult> {
    check_family_for(equation, family)?;
    if budget < MIN_BUDGET {
        return Err(Error::InvalidParameter {
            name: "budget",
            reason: format!("{budget} is below the minimum of {MIN_BUDGET} evaluations"),
        });
    }
    let per_start = budget / STARTS;
    let n = family.parameter_len();

    let objective = |search: &[f64]| -> Result<f64> {
        let params = family.decode(search);
        let angle = search[n];
        let f = family.map(&params)?;
        let slack = boundary_slack(equation, &f, BoundaryPoint::new(angle)?)?;
        if slack < -FALSIFICATION_TOLERANCE {
            return Err(falsified(equation, slack, family, &params, angle, &f));
        }
        Ok(slack)
    };

    let outcomes = (0..STARTS)
        .into_par_iter()
        .map(|start| {
            let mut rng = sample_stream(seed, start as u64);
            let x0 = family.random_search_point(&mut rng);
            let mut objective = objective;
            nelder_mead(&mut objective, x0, per_start)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best_start = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best_start].value {
            best_start = i;
        }
    }
    let mut trace = Vec::new();
    let mut running = f64::INFINITY;
    let mut offset = 0;
    for o in &outcomes {
        for &(iteration, best) in &o.trace {
            running = running.min(best);
            trace.push(TracePoint {
                iteration: offset + iteration,
                best_slack: running,
            });
        }
        offset += o.iterations;
    }

    let best = &outcomes[best_start];
    let argmin_parameters = family.decode(&best.search);
    let argmin_map = family.map(&argmin_parameters)?;
    let argmin_boundary_angle = BoundaryPoint::new(best.search[n])?.angle();
    Ok(SharpnessResult {
        equation,
        min_slack: best.value,
        argmin_parameters,
        argmin_boundary_angle,
        argmin_map,
        best_start,
        iterations: outcomes.iter().map(|o| o.iterations).sum(),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        trace,
        reproduction: Reproduction {
            seed,
            family: family.clone(),
            budget,
        },
    })
}

/// Distance of a one-free-zero minimizer to the rotated extremal family
/// `z^k (z + a) / (1 + a z)` at `b = 1`: after rotating `b` to 1 the free zero
/// must sit on the negative real axis, so the distance is `|α + |α| b|`.
///
/// Families without free zeros are extremal themselves (distance 0);
/// families with several free zeros have no single extremal curve and
/// yield `None`.
pub fn extremal_distance(result: &SharpnessResult) -> Option<f64> {
    let free: Vec<_> = result
        .argmin_map
        .zeros()
        .iter()
        .filter(|z| !z.point.is_origin())
        .collect();
    match free.as_slice() {
        [] => Some(0.0),
        [zero] if zero.multiplicity == 1 => {
            let alpha = zero.point.value();
            let b = result.argmin_boundary_point().point();
            Some((alpha + b * alpha.norm()).norm())
        }
        _ => None,
    }
}

/// Outcome of [`separation_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationScan {
    pub equation: EquationTag,
    pub exclusion_radius: f64,
    /// Smallest slack over accepted samples (infinite if none were accepted).
    pub min_slack: f64,
    pub accepted: usize,
    pub excluded: usize,
}

/// Parameter distance from the equality locus of each separation target.
///
/// * eq2 (`|f'(b)| >= 1`, equality only for rotations): the largest
///   `1 - |a_j|` over free zeros, since the map approaches a rotation only
///   when every free zero approaches the circle.
/// * eq16 (`|f'(b)| >= k`, equality only for `e^{iα} z^k`): `1 - |a_k|`.
/// * eq17 (equality only for automorphisms): the second largest
///   `1 - |a_j|` over all zeros with multiplicity, the origin counting as 1.
fn locus_distance(equation: EquationTag, f: &DiskSelfMap) -> Result<f64> {
    let gaps = || {
        f.zeros()
            .iter()
            .flat_map(|z| std::iter::repeat_n(1.0 - z.point.modulus(), z.multiplicity as usize))
    };
    match equation {
        EquationTag::Eq2 => {
            if f.origin_multiplicity() > 1 {
                return Ok(f64::INFINITY);
            }
            Ok(f.zeros()
                .iter()
                .filter(|z| !z.point.is_origin())
                .map(|z| 1.0 - z.point.modulus())
                .fold(0.0, f64::max))
        }
        EquationTag::Eq16 => Ok(1.0 - f.leading_order().coefficient.norm()),
        EquationTag::Eq17 => {
            let mut all: Vec<f64> = gaps().collect();
            all.sort_by(|a, b| b.total_cmp(a));
            Ok(all.get(1).copied().unwrap_or(0.0))
        }
        other => Err(Error::UnsupportedEquation { equation: other }),
    }
}

/// Slack of the weak consequence whose equality case is rigid.
fn separation_slack(equation: EquationTag, f: &DiskSelfMap, b: BoundaryPoint) -> Result<f64> {
    match equation {
        EquationTag::Eq2 => Ok(bounds::magnification(f, b)?.report.slack),
        EquationTag::Eq16 => {
            let k = f.leading_order().order;
            Ok(bounds::kth_boundary_bound(f, b)?.measured - f64::from(k))
        }
        EquationTag::Eq17 => Ok(bounds::julia_type_bound(f, b)?.slack),
        other => Err(Error::UnsupportedEquation { equation: other }),
    }
}

/// Minimum over the circle: a 256-point scan followed by golden-section
/// refinement around the best node.
fn min_over_circle(slack: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    const NODES: usize = 256;
    let step = TAU / NODES as f64;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..NODES {
        let theta = i as f64 * step;
        let value = slack(theta)?;
        if value < best.1 {
            best = (theta, value);
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (slack(x1)?, slack(x2)?);
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = slack(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = slack(x2)?;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Samples the family, discards draws within `exclusion_radius` of the
/// equality locus, and returns the smallest slack (minimized over the
/// boundary point) among the rest.
///
/// Supported targets are eq2, eq16 and eq17, measured through the weak
/// consequence with a unique equality case (see [`locus_distance`]). With a
/// positive exclusion radius a non-positive minimum is an error.
pub fn separation_scan(
    family: &FamilySpec,
    equation: EquationTag,
    exclusion_radius: f64,
    samples: usize,
    seed: u64,
) -> Result<SeparationScan> {
    check_family_for(equation, family)?;
    if exclusion_radius.is_nan() || exclusion_radius < 0.0 {
        return Err(Error::InvalidParameter {
            name: "exclusion_radius",
            reason: format!("{exclusion_radius} is negative"),
        });
    }
    let per_sample = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<Option<f64>> {
            let mut rng = sample_stream(seed, SCAN_STREAM + i as u64);
            let params = family.random_natural_point(&mut rng);
            let f = family.map(&params)?;
            if locus_distance(equation, &f)? < exclusion_radius {
                return Ok(None);
            }
            let (angle, slack) = min_over_circle(|theta| {
                separation_slack(equation, &f, BoundaryPoint::new(theta)?)
            })?;
            if slack < -FALSIFICATION_TOLERANCE {
                return Err(falsified(equation, slack, family, &params, angle, &f));
            }
            Ok(Some(slack))
        })
        .collect::<Result<Vec<_>>>()?;

    let accepted: Vec<f64> = per_sample.iter().flatten().copied().collect();
    let scan = SeparationScan {
        equation,
        exclusion_radius,
        min_slack: accepted.iter().copied().fold(f64::INFINITY, f64::min),
        accepted: accepted.len(),
        excluded: samples - accepted.len(),
    };
    if exclusion_radius > 0.0 && scan.accepted > 0 && scan.min_slack <= 0.0 {
        return Err(Error::Falsified {
            equation,
            slack: scan.min_slack,
            tolerance: 0.0,
            details: format!(
                "slack reached {} at distance >= {exclusion_radius} from the equality locus",
                scan.min_slack
            ),
        });
    }
    Ok(scan)
}

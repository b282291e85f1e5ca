//! Seeded corpora of disk self-maps and the suite driver that sweeps the
//! inequality evaluators over them.
//!
//! Every sample owns an RNG stream derived from `(seed, index)`, so samples
//! can be generated and checked in any order, on any number of threads, and
//! still produce the same summary.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, EquationTag, SlackReport, Verdict};
use crate::diskmap::{BoundaryPoint, DiskPoint, DiskSelfMap};
use crate::error::{Error, Result};
use crate::numerics::{self, ArcSpec};

/// Environment variable capping the worker count. Affects speed only.
pub const THREADS_ENV: &str = "SCHWARZ_LAB_THREADS";

/// Maximum number of failure bundles kept in a summary; the violation count
/// is always exact.
pub const MAX_BUNDLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_degree: u32,
    /// Lower end of the degree range (raised automatically to what the origin
    /// multiplicity requires).
    pub min_degree: u32,
    pub zero_modulus_cap: f64,
    pub origin_multiplicity: u32,
    pub with_post_shift: bool,
    pub post_shift_modulus_cap: f64,
    pub samples: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            max_degree: 8,
            min_degree: 1,
            zero_modulus_cap: 0.95,
            origin_multiplicity: 1,
            with_post_shift: false,
            post_shift_modulus_cap: 0.8,
            samples: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let cap_ok = |c: f64| c > 0.0 && c < 1.0;
        if !cap_ok(self.zero_modulus_cap) {
            return Err(Error::InvalidParameter {
                name: "zero_modulus_cap",
                reason: format!("{} is outside (0, 1)", self.zero_modulus_cap),
            });
        }
        if !cap_ok(self.post_shift_modulus_cap) {
            return Err(Error::InvalidParameter {
                name: "post_shift_modulus_cap",
                reason: format!("{} is outside (0, 1)", self.post_shift_modulus_cap),
            });
        }
        if self.max_degree < self.lowest_degree() {
            return Err(Error::InvalidParameter {
                name: "max_degree",
                reason: format!(
                    "{} cannot hold origin multiplicity {} (minimum degree {})",
                    self.max_degree,
                    self.origin_multiplicity,
                    self.lowest_degree()
                ),
            });
        }
        Ok(())
    }

    fn lowest_degree(&self) -> u32 {
        let required = self.origin_multiplicity + u32::from(self.origin_multiplicity == 0);
        self.min_degree.max(required)
    }
}

/// The RNG stream owned by sample `index`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point of the disk `|z| < radius` (area measure).
pub fn uniform_disk_point<R: Rng>(rng: &mut R, radius: f64) -> DiskPoint {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..TAU);
    DiskPoint::polar(r, theta).expect("radius is below one")
}

fn generate(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<DiskSelfMap> {
    let degree = rng.gen_range(config.lowest_degree()..=config.max_degree);
    let free = degree - config.origin_multiplicity;
    let mut zeros = Vec::with_capacity(free as usize + 1);
    if config.origin_multiplicity > 0 {
        zeros.push((DiskPoint::ORIGIN, config.origin_multiplicity));
    }
    for _ in 0..free {
        zeros.push((uniform_disk_point(rng, config.zero_modulus_cap), 1));
    }
    let phase = rng.gen_range(0.0..TAU);
    let post_shift = if config.with_post_shift {
        let mut c = uniform_disk_point(rng, config.post_shift_modulus_cap);
        while c.is_origin() {
            c = uniform_disk_point(rng, config.post_shift_modulus_cap);
        }
        Some(c)
    } else {
        None
    };
    DiskSelfMap::new(phase, zeros, post_shift)
}

fn sample(config: &GeneratorConfig, index: usize) -> Result<(DiskSelfMap, ChaCha8Rng)> {
    config.validate()?;
    if index >= config.samples {
        return Err(Error::InvalidParameter {
            name: "index",
            reason: format!("{index} is not below the sample count {}", config.samples),
        });
    }
    let mut rng = sample_stream(config.seed, index as u64);
    let map = generate(config, &mut rng)?;
    Ok((map, rng))
}

/// The `index`-th map of the corpus described by `config`.
pub fn random_map(config: &GeneratorConfig, index: usize) -> Result<DiskSelfMap> {
    sample(config, index).map(|(map, _)| map)
}

/// Sampling density of each sample's checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub boundary_points: usize,
    pub grid_radii: usize,
    pub grid_angles: usize,
    pub arcs: usize,
    pub probe_depth: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            boundary_points: 16,
            grid_radii: 16,
            grid_angles: 16,
            arcs: 1,
            probe_depth: 24,
        }
    }
}

/// What a single check was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckInput {
    Boundary { angle: f64 },
    Interior { re: f64, im: f64 },
    Arc { start: f64, end: f64 },
    ProbeRung { angle: f64, depth: u32, rung: usize },
    TransformIdentity { angle: f64 },
    TransformInequality { angle: f64 },
}

/// A self-contained record of one violated check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureBundle {
    pub seed: u64,
    pub sample_index: usize,
    pub equation: EquationTag,
    pub map: DiskSelfMap,
    pub input: CheckInput,
    pub report: SlackReport,
}

/// Re-runs the check recorded in a bundle.
pub fn replay(bundle: &FailureBundle) -> Result<SlackReport> {
    evaluate(bundle.equation, &bundle.map, bundle.input)
}

fn unsupported(equation: EquationTag) -> Error {
    Error::UnsupportedEquation { equation }
}

/// Evaluates one check. Strictness of `|f'(b)| > 1` for non-rotations is
/// folded into the eq2 verdict.
pub fn evaluate(equation: EquationTag, f: &DiskSelfMap, input: CheckInput) -> Result<SlackReport> {
    use EquationTag::*;
    match (equation, input) {
        (Eq1, CheckInput::Boundary { angle }) => {
            bounds::bound_lemma1(f, BoundaryPoint::new(angle)?)
        }
        (Eq2, CheckInput::Boundary { angle }) => {
            let m = bounds::magnification(f, BoundaryPoint::new(angle)?)?;
            let mut report = m.report;
            if !m.strictness_holds() {
                report.verdict = Verdict::Violated;
            }
            Ok(report)
        }
        (Eq4, CheckInput::Arc { start, end }) => {
            Ok(numerics::loewner_check(f, ArcSpec::new(start, end)?)?.report)
        }
        (Eq5, CheckInput::ProbeRung { angle, depth, rung }) => {
            let probe = bounds::sequence_probe(f, BoundaryPoint::new(angle)?, depth)?;
            probe
                .rung_reports()
                .get(rung)
                .copied()
                .ok_or(Error::InvalidParameter {
                    name: "rung",
                    reason: format!("{rung} is beyond depth {depth}"),
                })
        }
        (Eq6, CheckInput::Interior { re, im }) => {
            bounds::interior_bound(f, DiskPoint::new(Complex64::new(re, im))?)
        }
        (Eq7, CheckInput::Interior { re, im }) => {
            bounds::quotient_map_bound(f, DiskPoint::new(Complex64::new(re, im))?)
        }
        (Chain, CheckInput::Interior { re, im }) => {
            bounds::proof_chain_pointwise(f, DiskPoint::new(Complex64::new(re, im))?)
        }
        (Eq15, CheckInput::Interior { re, im }) => {
            bounds::kth_interior_bound(f, DiskPoint::new(Complex64::new(re, im))?)
        }
        (Eq8, CheckInput::Boundary { angle }) => {
            bounds::general_boundary_bound(f, BoundaryPoint::new(angle)?)
        }
        (Eq11, CheckInput::TransformIdentity { angle }) => {
            Ok(bounds::f_transform_derivative_identity(f, BoundaryPoint::new(angle)?)?.identity)
        }
        (Eq11, CheckInput::TransformInequality { angle }) => {
            Ok(bounds::f_transform_derivative_identity(f, BoundaryPoint::new(angle)?)?.inequality)
        }
        (Eq16, CheckInput::Boundary { angle }) => {
            bounds::kth_boundary_bound(f, BoundaryPoint::new(angle)?)
        }
        (Eq17, CheckInput::Boundary { angle }) => {
            bounds::julia_type_bound(f, BoundaryPoint::new(angle)?)
        }
        (eq, _) => Err(unsupported(eq)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationSummary {
    pub equation: EquationTag,
    pub checks: u64,
    /// Samples whose map is outside the equation's hypotheses.
    pub skipped: u64,
    pub worst_slack: Option<f64>,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub config: GeneratorConfig,
    pub options: SuiteOptions,
    pub equations: Vec<EquationSummary>,
    pub failures: u64,
    pub bundles: Vec<FailureBundle>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn equation(&self, tag: EquationTag) -> Option<&EquationSummary> {
        self.equations.iter().find(|e| e.equation == tag)
    }
}

/// Per-sample tallies, merged in index order afterwards.
#[derive(Default)]
struct SampleOutcome {
    per_equation: BTreeMap<EquationTag, EquationSummary>,
    bundles: Vec<FailureBundle>,
}

impl SampleOutcome {
    fn entry(&mut self, equation: EquationTag) -> &mut EquationSummary {
        self.per_equation
            .entry(equation)
            .or_insert_with(|| EquationSummary {
                equation,
                checks: 0,
                skipped: 0,
                worst_slack: None,
                violations: 0,
            })
    }

    fn skip(&mut self, equation: EquationTag) {
        self.entry(equation).skipped += 1;
    }

    fn record(
        &mut self,
        seed: u64,
        index: usize,
        equation: EquationTag,
        map: &DiskSelfMap,
        input: CheckInput,
    ) -> Result<()> {
        let report = evaluate(equation, map, input)?;
        let entry = self.entry(equation);
        entry.checks += 1;
        entry.worst_slack = Some(
            entry
                .worst_slack
                .map_or(report.slack, |w| w.min(report.slack)),
        );
        if report.verdict == Verdict::Violated {
            entry.violations += 1;
            self.bundles.push(FailureBundle {
                seed,
                sample_index: index,
                equation,
                map: map.clone(),
                input,
                report,
            });
        }
        Ok(())
    }
}

fn check_sample(
    config: &GeneratorConfig,
    options: &SuiteOptions,
    equations: &[EquationTag],
    index: usize,
) -> Result<SampleOutcome> {
    use EquationTag::*;
    let (f, mut rng) = sample(config, index)?;
    // maps with f(0) != 0 enter the origin-fixing checks through F
    let normalized = if f.fixes_origin() {
        f.clone()
    } else {
        f.f_transform()
    };
    let pure_origin = f.is_pure() && f.fixes_origin();

    let offset = rng.gen_range(0.0..1.0);
    let boundary: Vec<f64> = (0..options.boundary_points)
        .map(|j| (j as f64 + offset) * TAU / options.boundary_points as f64)
        .collect();
    let grid_offset = rng.gen_range(0.0..1.0);
    let interior: Vec<(f64, f64)> = grid_radii(options.grid_radii)
        .into_iter()
        .flat_map(|r| {
            (0..options.grid_angles).map(move |j| {
                let theta = (j as f64 + grid_offset) * TAU / options.grid_angles as f64;
                let z = Complex64::from_polar(r, theta);
                (z.re, z.im)
            })
        })
        .collect();
    let arcs: Vec<(f64, f64)> = (0..options.arcs)
        .map(|_| {
            let start = rng.gen_range(0.0..TAU);
            let length = TAU * (1.0 - rng.gen::<f64>());
            (start, start + length)
        })
        .collect();

    let mut out = SampleOutcome::default();
    let seed = config.seed;
    for &eq in equations {
        match eq {
            Eq1 | Eq2 => {
                for &angle in &boundary {
                    out.record(seed, index, eq, &normalized, CheckInput::Boundary { angle })?;
                }
            }
            Eq8 | Eq17 => {
                for &angle in &boundary {
                    out.record(seed, index, eq, &f, CheckInput::Boundary { angle })?;
                }
            }
            Eq11 => {
                for &angle in &boundary {
                    out.record(seed, index, eq, &f, CheckInput::TransformIdentity { angle })?;
                    out.record(
                        seed,
                        index,
                        eq,
                        &f,
                        CheckInput::TransformInequality { angle },
                    )?;
                }
            }
            Eq16 if pure_origin => {
                for &angle in &boundary {
                    out.record(seed, index, eq, &f, CheckInput::Boundary { angle })?;
                }
            }
            Eq6 | Eq7 | Chain => {
                for &(re, im) in &interior {
                    out.record(
                        seed,
                        index,
                        eq,
                        &normalized,
                        CheckInput::Interior { re, im },
                    )?;
                }
            }
            Eq15 if pure_origin => {
                for &(re, im) in &interior {
                    out.record(seed, index, eq, &f, CheckInput::Interior { re, im })?;
                }
            }
            Eq15 | Eq16 => out.skip(eq),
            Eq4 => {
                for &(start, end) in &arcs {
                    out.record(seed, index, eq, &normalized, CheckInput::Arc { start, end })?;
                }
            }
            Eq5 => {
                let Some(&angle) = boundary.first() else {
                    continue;
                };
                let depth = options.probe_depth;
                for rung in 0..depth as usize {
                    out.record(
                        seed,
                        index,
                        eq,
                        &normalized,
                        CheckInput::ProbeRung { angle, depth, rung },
                    )?;
                }
            }
        }
    }
    Ok(out)
}

/// Radii from 0.1 to 0.999 inclusive.
pub fn grid_radii(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.999],
        n => (0..n)
            .map(|i| 0.1 + (0.999 - 0.1) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Runs `f` on a dedicated pool with the given worker count (or rayon's
/// default when `None`).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Worker count requested through [`THREADS_ENV`].
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok()
}

pub fn run_suite(config: &GeneratorConfig, equations: &[EquationTag]) -> Result<SuiteSummary> {
    run_suite_with(config, equations, SuiteOptions::default())
}

pub fn run_suite_with(
    config: &GeneratorConfig,
    equations: &[EquationTag],
    options: SuiteOptions,
) -> Result<SuiteSummary> {
    config.validate()?;
    let mut equations = equations.to_vec();
    equations.sort();
    equations.dedup();

    let outcomes = (0..config.samples)
        .into_par_iter()
        .map(|index| check_sample(config, &options, &equations, index))
        .collect::<Result<Vec<_>>>()?;

    let mut totals: BTreeMap<EquationTag, EquationSummary> = equations
        .iter()
        .map(|&equation| {
            (
                equation,
                EquationSummary {
                    equation,
                    checks: 0,
                    skipped: 0,
                    worst_slack: None,
                    violations: 0,
                },
            )
        })
        .collect();
    let mut bundles = Vec::new();
    let mut failures = 0;
    for outcome in outcomes {
        for (tag, part) in outcome.per_equation {
            let total = totals.get_mut(&tag).expect("tag was requested");
            total.checks += part.checks;
            total.skipped += part.skipped;
            total.violations += part.violations;
            total.worst_slack = match (total.worst_slack, part.worst_slack) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        failures += outcome.bundles.len() as u64;
        for bundle in outcome.bundles {
            if bundles.len() < MAX_BUNDLES {
                bundles.push(bundle);
            }
        }
    }
    Ok(SuiteSummary {
        config: config.clone(),
        options,
        equations: totals.into_values().collect(),
        failures,
        bundles,
    })
}

//! Numerical cross-checks that do not use the closed-form boundary
//! derivative: a Richardson-extrapolated radial difference quotient and
//! adaptive Simpson quadrature of the boundary speed `|f'(e^{iθ})|`.

use std::f64::consts::TAU;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{lemma1_bound, EquationTag, SlackReport};
use crate::diskmap::{BoundaryPoint, DiskSelfMap};
use crate::error::{Error, Result};

/// Radial steps `h` of the one-sided difference ladder.
pub const RADIAL_STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// Upper limit on the halving ladder of [`radial_derivative`].
pub const MAX_RADIAL_LEVELS: usize = 8;

/// Relative agreement between successive extrapolants that ends the ladder.
pub const RADIAL_AGREEMENT: f64 = 1e-9;

/// Absolute tolerance of [`image_arc_length`].
pub const ARC_TOLERANCE: f64 = 1e-10;

/// Hard cap on accepted Simpson panels.
pub const MAX_PANELS: usize = 1 << 20;

/// Slack tolerance of [`loewner_check`]; quadrature error sits well inside it.
pub const LOEWNER_TOLERANCE: f64 = 1e-8;

/// Estimates `f'(b)` from the radial quotients `(f(b) - f(t b)) / (1 - t)`
/// by Richardson extrapolation over halving steps.
///
/// The ladder starts at [`RADIAL_STEPS`] (two extrapolation levels). When the
/// last two diagonal entries still disagree, which happens when a zero sits
/// within a few hundredths of `b`, further halvings are appended up to
/// [`MAX_RADIAL_LEVELS`].
///
/// The quotients converge to the radial derivative `b f'(b)`; the result is
/// divided by `b` so it is directly comparable with
/// [`DiskSelfMap::boundary_derivative`].
pub fn radial_derivative(f: &DiskSelfMap, b: BoundaryPoint) -> Complex64 {
    let point = b.point();
    let at_b = f.eval_boundary(b);
    let quotient = |h: f64| {
        let inner = f
            .eval(point * (1.0 - h))
            .expect("radial points lie inside the disk");
        (at_b - inner) / h
    };
    // one-sided error expands in h, h^2, ...; each column removes one power
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(MAX_RADIAL_LEVELS);
    let mut h = RADIAL_STEPS[0];
    loop {
        let mut row = vec![quotient(h)];
        if let Some(prev) = rows.last() {
            for j in 1..=prev.len() {
                let scale = f64::powi(2.0, j as i32);
                let next = (row[j - 1] * scale - prev[j - 1]) / (scale - 1.0);
                row.push(next);
            }
        }
        rows.push(row);
        let n = rows.len();
        if n >= RADIAL_STEPS.len() {
            let latest = rows[n - 1][n - 1];
            let before = rows[n - 2][n - 2];
            let settled = (latest - before).norm() <= RADIAL_AGREEMENT * latest.norm().max(1.0);
            if settled || n == MAX_RADIAL_LEVELS {
                return latest / point;
            }
        }
        h *= 0.5;
    }
}

/// A counterclockwise arc `[theta_start, theta_end]` of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSpec {
    theta_start: f64,
    theta_end: f64,
}

impl ArcSpec {
    pub fn new(theta_start: f64, theta_end: f64) -> Result<Self> {
        let length = theta_end - theta_start;
        if !(theta_start.is_finite() && theta_end.is_finite()) || !(length > 0.0 && length <= TAU) {
            return Err(Error::InvalidArc {
                start: theta_start,
                end: theta_end,
            });
        }
        Ok(ArcSpec {
            theta_start,
            theta_end,
        })
    }

    pub fn full_circle() -> Self {
        ArcSpec {
            theta_start: 0.0,
            theta_end: TAU,
        }
    }

    pub fn theta_start(&self) -> f64 {
        self.theta_start
    }

    pub fn theta_end(&self) -> f64 {
        self.theta_end
    }

    pub fn length(&self) -> f64 {
        self.theta_end - self.theta_start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

struct Simpson<'a, F> {
    integrand: &'a F,
    max_panels: usize,
    panels: usize,
    min_width: f64,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    fn panel(&self, a: f64, b: f64, fa: f64, fb: f64) -> Panel {
        let m = 0.5 * (a + b);
        let fm = (self.integrand)(m);
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole: (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        }
    }

    /// Returns `(value, error_estimate)` for one panel.
    fn integrate(&mut self, p: Panel, tol: f64, depth: u32) -> Result<(f64, f64)> {
        let m = 0.5 * (p.a + p.b);
        let left = self.panel(p.a, m, p.fa, p.fm);
        let right = self.panel(m, p.b, p.fm, p.fb);
        let diff = left.whole + right.whole - p.whole;
        if diff.abs() <= 15.0 * tol || p.b - p.a <= self.min_width || depth >= 60 {
            self.panels += 1;
            if self.panels > self.max_panels {
                return Err(Error::QuadratureDiverged {
                    panels: self.max_panels,
                });
            }
            return Ok((left.whole + right.whole + diff / 15.0, diff.abs() / 15.0));
        }
        let (lv, le) = self.integrate(left, 0.5 * tol, depth + 1)?;
        let (rv, re) = self.integrate(right, 0.5 * tol, depth + 1)?;
        Ok((lv + rv, le + re))
    }
}

/// Sums in a fixed binary tree so the result does not depend on how the
/// terms were produced.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// Adaptive Simpson quadrature of `g` over `[a, b]` split into
/// `initial_panels` equal panels, each refined to its share of `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    g: &F,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
    max_panels: usize,
) -> Result<QuadratureResult> {
    let n = initial_panels.max(1);
    let width = (b - a) / n as f64;
    let mut simpson = Simpson {
        integrand: g,
        max_panels,
        panels: 0,
        min_width: (b - a).abs() * 1e-13,
    };
    let mut values = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    let mut left = a;
    let mut f_left = g(a);
    for i in 1..=n {
        let right = if i == n { b } else { a + width * i as f64 };
        let f_right = g(right);
        let panel = simpson.panel(left, right, f_left, f_right);
        let (v, e) = simpson.integrate(panel, tol / n as f64, 0)?;
        values.push(v);
        errors.push(e);
        left = right;
        f_left = f_right;
    }
    Ok(QuadratureResult {
        value: pairwise_sum(&values),
        error_estimate: pairwise_sum(&errors),
        panels: simpson.panels,
    })
}

/// Shortest length scale of `|f'|` on the circle: the distance of the
/// closest zero (or of the post-composed shift) to the circle.
fn boundary_feature_scale(f: &DiskSelfMap) -> f64 {
    let zeros = f.zeros().iter().map(|z| 1.0 - z.point.modulus());
    let shift = f.post_shift().map(|c| 1.0 - c.modulus());
    zeros.chain(shift).fold(1.0, f64::min).max(1e-6)
}

/// Enough initial panels that no peak of `|f'|` can hide between the first
/// Simpson nodes.
fn initial_panels(f: &DiskSelfMap, length: f64) -> usize {
    let width = 0.25 * boundary_feature_scale(f);
    ((length / width).ceil() as usize).clamp(8, MAX_PANELS / 4)
}

fn boundary_speed(f: &DiskSelfMap, theta: f64) -> f64 {
    f.derivative(Complex64::from_polar(1.0, theta))
        .expect("circle points lie in the closed disk")
        .norm()
}

/// Length of `f(C)` counted with multiplicity: `∫_C |f'(e^{iθ})| dθ`.
pub fn image_arc_length(f: &DiskSelfMap, arc: ArcSpec) -> Result<QuadratureResult> {
    let speed = |theta: f64| boundary_speed(f, theta);
    adaptive_simpson(
        &speed,
        arc.theta_start,
        arc.theta_end,
        ARC_TOLERANCE,
        initial_panels(f, arc.length()),
        MAX_PANELS,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerCheck {
    pub arc: ArcSpec,
    pub quadrature: QuadratureResult,
    /// `σ >= 2 s / (1 + |f'(0)|)`
    pub report: SlackReport,
    /// `σ >= s`
    pub classical: SlackReport,
}

impl LoewnerCheck {
    /// `σ / s`
    pub fn ratio(&self) -> f64 {
        self.quadrature.value / self.arc.length()
    }
}

/// Arc-length magnification for a map fixing the origin.
pub fn loewner_check(f: &DiskSelfMap, arc: ArcSpec) -> Result<LoewnerCheck> {
    if !f.fixes_origin() {
        return Err(Error::OriginNotFixed {
            modulus: f.eval(Complex64::new(0.0, 0.0))?.norm(),
        });
    }
    let quadrature = image_arc_length(f, arc)?;
    let s = arc.length();
    let bound = lemma1_bound(f.derivative_at_origin().norm()) * s;
    Ok(LoewnerCheck {
        arc,
        quadrature,
        report: SlackReport::lower(EquationTag::Eq4, bound, quadrature.value, LOEWNER_TOLERANCE),
        classical: SlackReport::lower(EquationTag::Eq4, s, quadrature.value, LOEWNER_TOLERANCE),
    })
}

/// One row of the plot dump along an arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSample {
    pub theta: f64,
    pub speed: f64,
    pub cumulative_sigma: f64,
}

/// Samples `|f'|` and the running image length at `points` equally spaced
/// angles (endpoints included).
pub fn arc_profile(f: &DiskSelfMap, arc: ArcSpec, points: usize) -> Result<Vec<ArcSample>> {
    if points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: "an arc profile needs at least two samples".into(),
        });
    }
    let step = arc.length() / (points - 1) as f64;
    let speed = |theta: f64| boundary_speed(f, theta);
    let panels_per_step = initial_panels(f, step).max(1);
    let mut out = Vec::with_capacity(points);
    let mut cumulative = 0.0;
    let mut theta_prev = arc.theta_start;
    for i in 0..points {
        let theta = if i + 1 == points {
            arc.theta_end
        } else {
            arc.theta_start + step * i as f64
        };
        if i > 0 {
            let piece = adaptive_simpson(
                &speed,
                theta_prev,
                theta,
                ARC_TOLERANCE / (points - 1) as f64,
                panels_per_step,
                MAX_PANELS,
            )?;
            cumulative += piece.value;
        }
        out.push(ArcSample {
            theta,
            speed: speed(theta),
            cumulative_sigma: cumulative,
        });
        theta_prev = theta;
    }
    Ok(out)
}

pub fn write_arc_csv<W: Write>(samples: &[ArcSample], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,abs_derivative,cumulative_sigma")?;
    for s in samples {
        writeln!(out, "{},{},{}", s.theta, s.speed, s.cumulative_sigma)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;
    use crate::diskmap::{extremal_lemma1, DiskPoint};
    use std::f64::consts::PI;

    #[test]
    fn radial_derivative_examples() {
        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let d = radial_derivative(&sq, BoundaryPoint::one());
        assert!((d - Complex64::new(2.0, 0.0)).norm() < 1e-6);

        let rot = DiskSelfMap::rotation(0.8).unwrap();
        let d = radial_derivative(&rot, BoundaryPoint::new(2.5).unwrap());
        assert!((d.norm() - 1.0).abs() < 1e-9);

        let ext = extremal_lemma1(0.5).unwrap();
        let d = radial_derivative(&ext, BoundaryPoint::one());
        assert!((d - Complex64::new(4.0 / 3.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn arc_validation() {
        assert!(ArcSpec::new(0.0, 0.0).is_err());
        assert!(ArcSpec::new(1.0, 0.5).is_err());
        assert!(ArcSpec::new(0.0, TAU + 1e-6).is_err());
        assert!(ArcSpec::new(-1.0, 1.0).is_ok());
        assert_eq!(ArcSpec::full_circle().length(), TAU);
    }

    #[test]
    fn simpson_on_polynomials_and_trig() {
        let cubic = |x: f64| x * x * x - 2.0 * x;
        let r = adaptive_simpson(&cubic, 0.0, 2.0, 1e-12, 1, 1000).unwrap();
        assert!((r.value - 0.0).abs() < 1e-12);
        let s = |x: f64| x.sin();
        let r = adaptive_simpson(&s, 0.0, PI, 1e-10, 4, 1 << 16).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn simpson_panel_cap() {
        let spiky = |x: f64| (1.0 / (x - 0.5).abs().max(1e-300)).min(1e300);
        let r = adaptive_simpson(&spiky, 0.0, 1.0, 1e-14, 1, 64);
        assert!(matches!(r, Err(Error::QuadratureDiverged { panels: 64 })));
    }

    #[test]
    fn arc_length_examples() {
        let rot = DiskSelfMap::rotation(0.2).unwrap();
        let arc = ArcSpec::new(0.3, 1.7).unwrap();
        let r = image_arc_length(&rot, arc).unwrap();
        assert!((r.value - 1.4).abs() < 1e-10);

        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let r = image_arc_length(&sq, ArcSpec::full_circle()).unwrap();
        assert!((r.value - 4.0 * PI).abs() < 1e-10);

        let ext = extremal_lemma1(0.5).unwrap();
        let mut last = f64::INFINITY;
        for half in [0.2, 0.05, 0.01, 0.001] {
            let arc = ArcSpec::new(-half, half).unwrap();
            let ratio = image_arc_length(&ext, arc).unwrap().value / (2.0 * half);
            let gap = (ratio - 4.0 / 3.0).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn loewner_examples() {
        let sq = DiskSelfMap::power(2, 1.0).unwrap();
        let c = loewner_check(&sq, ArcSpec::new(0.5, 2.0).unwrap()).unwrap();
        assert_eq!(c.report.verdict, Verdict::Equality);
        assert!((c.ratio() - 2.0).abs() < 1e-10);

        let rot = DiskSelfMap::rotation(0.0).unwrap();
        let c = loewner_check(&rot, ArcSpec::new(1.0, 4.0).unwrap()).unwrap();
        assert_eq!(c.report.verdict, Verdict::Equality);
        assert_eq!(c.classical.verdict, Verdict::Equality);

        let aut = DiskSelfMap::automorphism(DiskPoint::real(0.2).unwrap()).unwrap();
        assert!(loewner_check(&aut, ArcSpec::full_circle()).is_err());
    }

    #[test]
    fn arc_profile_accumulates_total_length() {
        let ext = extremal_lemma1(0.7).unwrap();
        let arc = ArcSpec::full_circle();
        let profile = arc_profile(&ext, arc, 65).unwrap();
        assert_eq!(profile.len(), 65);
        assert_eq!(profile[0].cumulative_sigma, 0.0);
        assert!(profile
            .windows(2)
            .all(|w| w[1].cumulative_sigma > w[0].cumulative_sigma));
        assert!((profile[64].cumulative_sigma - 4.0 * PI).abs() < 1e-9);

        let mut buf = Vec::new();
        write_arc_csv(&profile[..2], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta,abs_derivative,cumulative_sigma\n0,"));
        assert_eq!(text.lines().count(), 3);
    }
}

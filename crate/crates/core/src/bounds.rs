//! Evaluators for the boundary, interior and k-th order Schwarz-type
//! inequalities.
//!
//! Every evaluator returns a [`SlackReport`] whose `slack` is
//! `measured - bound` for lower bounds and `bound - measured` for upper
//! bounds, so `slack >= -tolerance` is the one predicate for "the inequality
//! holds".

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diskmap::{BoundaryPoint, DiskPoint, DiskSelfMap};
use crate::error::{Error, Result};

/// Holds/Violated threshold used by the evaluators.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Threshold for exact identities and equality classification.
pub const EQUALITY_TOLERANCE: f64 = 1e-10;
/// How far `|f(b)|` may sit from 1 before `b` is rejected as a boundary point
/// of the image.
pub const CIRCLE_TOLERANCE: f64 = 1e-10;

/// Label of the inequality a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationTag {
    /// `|f'(b)| >= 2 / (1 + |f'(0)|)`
    Eq1,
    /// `|f'(b)| >= 1`
    Eq2,
    /// arc-length magnification `σ >= 2 s / (1 + |f'(0)|)`
    Eq4,
    /// radial quotient ladder
    Eq5,
    /// `|f(z)| <= |z| (|z| + |f'(0)|) / (1 + |f'(0)| |z|)`
    Eq6,
    /// the same bound for `f(z) / z`
    Eq7,
    /// general boundary bound for `f(0) ≠ 0`
    Eq8,
    /// derivative identity of the F-transform
    Eq11,
    /// k-th order interior bound
    Eq15,
    /// k-th order boundary bound
    Eq16,
    /// `|f'(b)| >= (1 - |f(0)|) / (1 + |f(0)|)`
    Eq17,
    /// `(1 - |f(z)|) / (1 - |z|) >= (1 + |z|) / (1 + |f'(0)| |z|)`
    Chain,
}

impl EquationTag {
    pub const ALL: [EquationTag; 12] = [
        EquationTag::Eq1,
        EquationTag::Eq2,
        EquationTag::Eq4,
        EquationTag::Eq5,
        EquationTag::Eq6,
        EquationTag::Eq7,
        EquationTag::Eq8,
        EquationTag::Eq11,
        EquationTag::Eq15,
        EquationTag::Eq16,
        EquationTag::Eq17,
        EquationTag::Chain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EquationTag::Eq1 => "eq1",
            EquationTag::Eq2 => "eq2",
            EquationTag::Eq4 => "eq4",
            EquationTag::Eq5 => "eq5",
            EquationTag::Eq6 => "eq6",
            EquationTag::Eq7 => "eq7",
            EquationTag::Eq8 => "eq8",
            EquationTag::Eq11 => "eq11",
            EquationTag::Eq15 => "eq15",
            EquationTag::Eq16 => "eq16",
            EquationTag::Eq17 => "eq17",
            EquationTag::Chain => "chain",
        }
    }
}

impl fmt::Display for EquationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EquationTag::ALL
            .into_iter()
            .find(|tag| tag.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "equation",
                reason: format!("unknown equation tag `{s}`"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Equality,
}

impl Verdict {
    pub fn classify(slack: f64, tolerance: f64) -> Verdict {
        if slack.abs() <= tolerance {
            Verdict::Equality
        } else if slack < -tolerance || slack.is_nan() {
            Verdict::Violated
        } else {
            Verdict::Holds
        }
    }
}

/// One evaluated inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub equation: EquationTag,
    pub bound: f64,
    pub measured: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl SlackReport {
    /// `measured >= bound`
    pub fn lower(equation: EquationTag, bound: f64, measured: f64, tolerance: f64) -> Self {
        Self::from_slack(equation, bound, measured, measured - bound, tolerance)
    }

    /// `measured <= bound`
    pub fn upper(equation: EquationTag, bound: f64, measured: f64, tolerance: f64) -> Self {
        Self::from_slack(equation, bound, measured, bound - measured, tolerance)
    }

    /// `measured == bound`; the slack is minus the absolute discrepancy.
    pub fn identity(equation: EquationTag, bound: f64, measured: f64, tolerance: f64) -> Self {
        Self::from_slack(
            equation,
            bound,
            measured,
            -(measured - bound).abs(),
            tolerance,
        )
    }

    fn from_slack(
        equation: EquationTag,
        bound: f64,
        measured: f64,
        slack: f64,
        tolerance: f64,
    ) -> Self {
        SlackReport {
            equation,
            bound,
            measured,
            slack,
            tolerance,
            verdict: Verdict::classify(slack, tolerance),
        }
    }

    /// Re-classifies the verdict under a different tolerance.
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        SlackReport {
            tolerance,
            verdict: Verdict::classify(self.slack, tolerance),
            ..self
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Violated
    }
}

fn require_fixed_origin(f: &DiskSelfMap) -> Result<()> {
    if f.fixes_origin() {
        Ok(())
    } else {
        Err(Error::OriginNotFixed {
            modulus: f.eval_disk(DiskPoint::ORIGIN).norm(),
        })
    }
}

fn require_on_circle(f: &DiskSelfMap, b: BoundaryPoint) -> Result<Complex64> {
    let fb = f.eval_boundary(b);
    if (fb.norm() - 1.0).abs() > CIRCLE_TOLERANCE {
        return Err(Error::NotOnBoundary { modulus: fb.norm() });
    }
    Ok(fb)
}

fn require_pure(f: &DiskSelfMap) -> Result<()> {
    if f.is_pure() {
        Ok(())
    } else {
        Err(Error::PostShiftPresent)
    }
}

/// `2 / (1 + a)`
pub fn lemma1_bound(derivative_modulus_at_origin: f64) -> f64 {
    2.0 / (1.0 + derivative_modulus_at_origin)
}

/// `(k - 1) + 2 / (1 + a)`, written so that `k = 1` reproduces
/// [`lemma1_bound`] exactly. Equals `k + (1 - a) / (1 + a)`.
pub fn order_k_boundary_bound(k: u32, leading_modulus: f64) -> f64 {
    f64::from(k - 1) + lemma1_bound(leading_modulus)
}

/// `r (r + a) / (1 + a r)`
pub fn interior_bound_value(r: f64, a: f64) -> f64 {
    r * (r + a) / (1.0 + a * r)
}

/// Boundary Schwarz bound `|f'(b)| >= 2 / (1 + |f'(0)|)` for maps with
/// `f(0) = 0`.
pub fn bound_lemma1(f: &DiskSelfMap, b: BoundaryPoint) -> Result<SlackReport> {
    require_fixed_origin(f)?;
    let bound = lemma1_bound(f.derivative_at_origin().norm());
    let measured = f.boundary_derivative(b).norm();
    Ok(SlackReport::lower(
        EquationTag::Eq1,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// The magnification consequences of the boundary bound at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Magnification {
    /// `|f'(b)| >= 1`
    pub report: SlackReport,
    pub is_rotation: bool,
    /// `|f'(b)| > 1`
    pub strict: bool,
}

impl Magnification {
    /// Strict magnification unless `f` is a rotation.
    pub fn strictness_holds(&self) -> bool {
        self.is_rotation || self.strict
    }
}

pub fn magnification(f: &DiskSelfMap, b: BoundaryPoint) -> Result<Magnification> {
    require_fixed_origin(f)?;
    let measured = f.boundary_derivative(b).norm();
    Ok(Magnification {
        report: SlackReport::lower(EquationTag::Eq2, 1.0, measured, DEFAULT_TOLERANCE),
        is_rotation: f.is_rotation(),
        strict: measured > 1.0,
    })
}

/// Interior bound `|f(z)| <= |z| (|z| + |f'(0)|) / (1 + |f'(0)| |z|)`.
pub fn interior_bound(f: &DiskSelfMap, z: DiskPoint) -> Result<SlackReport> {
    require_fixed_origin(f)?;
    let a = f.derivative_at_origin().norm();
    let bound = interior_bound_value(z.modulus(), a);
    let measured = f.eval_disk(z).norm();
    Ok(SlackReport::upper(
        EquationTag::Eq6,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// The same bound stated for `g(z) = f(z) / z`:
/// `|g(z)| <= (|z| + a) / (1 + a |z|)` with `a = |g(0)| = |f'(0)|`.
///
/// Its slack is the interior slack divided by `|z|`.
pub fn quotient_map_bound(f: &DiskSelfMap, z: DiskPoint) -> Result<SlackReport> {
    require_fixed_origin(f)?;
    if z.is_origin() {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: "the quotient f(z)/z is evaluated away from the origin".into(),
        });
    }
    let a = f.derivative_at_origin().norm();
    let r = z.modulus();
    let bound = (r + a) / (1.0 + a * r);
    let measured = f.eval_disk(z).norm() / r;
    Ok(SlackReport::upper(
        EquationTag::Eq7,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// Diameter endpoints `((a - r) / (1 - a r), (a + r) / (1 + a r))` of the
/// image of `|z| < r` under `G(z) = (z + a) / (1 + a z)`.
pub fn schwarz_pick_disk(a: f64, r: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: format!("{a} is outside [0, 1)"),
        });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("{r} is outside (0, 1)"),
        });
    }
    Ok(((a - r) / (1.0 - a * r), (a + r) / (1.0 + a * r)))
}

/// Pointwise step of the boundary argument:
/// `(1 - |f(z)|) / (1 - |z|) >= (1 + |z|) / (1 + |f'(0)| |z|)`.
pub fn proof_chain_pointwise(f: &DiskSelfMap, z: DiskPoint) -> Result<SlackReport> {
    require_fixed_origin(f)?;
    let a = f.derivative_at_origin().norm();
    let r = z.modulus();
    let measured = (1.0 - f.eval_disk(z).norm()) / (1.0 - r);
    let bound = (1.0 + r) / (1.0 + a * r);
    Ok(SlackReport::lower(
        EquationTag::Chain,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// Radial quotients `(1 - |f(t b)|) / (1 - t)` along `t_j = 1 - 2^{-j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceProbe {
    pub angle: f64,
    pub radii: Vec<f64>,
    pub quotients: Vec<f64>,
    /// `(1 + t_j) / (1 + |f'(0)| t_j)` for each rung.
    pub rung_bounds: Vec<f64>,
    /// `2 / (1 + |f'(0)|)`
    pub limit_bound: f64,
    /// `|f'(b)|`
    pub boundary_derivative: f64,
}

impl SequenceProbe {
    /// One lower-bound report per rung. The tolerance of rung `j` adds the
    /// rounding of `1 - |f(t_j b)|`, amplified by `1 / (1 - t_j) = 2^j`.
    pub fn rung_reports(&self) -> Vec<SlackReport> {
        self.quotients
            .iter()
            .zip(&self.rung_bounds)
            .zip(&self.radii)
            .map(|((&q, &bound), &t)| {
                let tolerance = DEFAULT_TOLERANCE + 8.0 * f64::EPSILON / (1.0 - t);
                SlackReport::lower(EquationTag::Eq5, bound, q, tolerance)
            })
            .collect()
    }

    /// `| last quotient - |f'(b)| |`
    pub fn limit_gap(&self) -> f64 {
        self.quotients
            .last()
            .map_or(f64::INFINITY, |q| (q - self.boundary_derivative).abs())
    }
}

pub fn sequence_probe(f: &DiskSelfMap, b: BoundaryPoint, depth: u32) -> Result<SequenceProbe> {
    require_fixed_origin(f)?;
    if depth < 2 {
        return Err(Error::InvalidParameter {
            name: "depth",
            reason: "the ladder needs at least two rungs".into(),
        });
    }
    // 1 - 2^-j stops being representable below 1 past j = 53
    if depth > 52 {
        return Err(Error::InvalidParameter {
            name: "depth",
            reason: format!("{depth} rungs exceed double precision (max 52)"),
        });
    }
    let a = f.derivative_at_origin().norm();
    let point = b.point();
    let mut radii = Vec::with_capacity(depth as usize);
    let mut quotients = Vec::with_capacity(depth as usize);
    let mut rung_bounds = Vec::with_capacity(depth as usize);
    for j in 1..=depth {
        let gap = 0.5f64.powi(j as i32);
        let t = 1.0 - gap;
        let value = f.eval(point * t)?;
        radii.push(t);
        quotients.push((1.0 - value.norm()) / gap);
        rung_bounds.push((1.0 + t) / (1.0 + a * t));
    }
    Ok(SequenceProbe {
        angle: b.angle(),
        radii,
        quotients,
        rung_bounds,
        limit_bound: lemma1_bound(a),
        boundary_derivative: f.boundary_derivative(b).norm(),
    })
}

/// `F(z) = (f(z) - f(0)) / (1 - conj(f(0)) f(z))`
pub fn f_transform(f: &DiskSelfMap) -> DiskSelfMap {
    f.f_transform()
}

/// Both halves of the derivative relation between `f` and its F-transform
/// at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformIdentity {
    /// `|F'(b)| = |f'(b)| (1 - |f(0)|^2) / |1 - conj(f(0)) f(b)|^2`
    pub identity: SlackReport,
    /// `|F'(b)| <= |f'(b)| (1 + |f(0)|) / (1 - |f(0)|)`
    pub inequality: SlackReport,
}

pub fn f_transform_derivative_identity(
    f: &DiskSelfMap,
    b: BoundaryPoint,
) -> Result<TransformIdentity> {
    let fb = require_on_circle(f, b)?;
    let p = f.eval_disk(DiskPoint::ORIGIN);
    let transformed = f.f_transform();
    let lhs = transformed.boundary_derivative(b).norm();
    let df = f.boundary_derivative(b).norm();
    let den = (Complex64::new(1.0, 0.0) - p.conj() * fb).norm_sqr();
    let rhs = df * (1.0 - p.norm_sqr()) / den;
    let modulus = p.norm();
    let upper = df * (1.0 + modulus) / (1.0 - modulus);
    Ok(TransformIdentity {
        identity: SlackReport::identity(EquationTag::Eq11, rhs, lhs, EQUALITY_TOLERANCE),
        inequality: SlackReport::upper(EquationTag::Eq11, upper, lhs, DEFAULT_TOLERANCE),
    })
}

/// `(1 - |f(0)|) / (1 + |f(0)|)`
fn julia_factor(f: &DiskSelfMap) -> f64 {
    let p = f.eval_disk(DiskPoint::ORIGIN).norm();
    (1.0 - p) / (1.0 + p)
}

/// General boundary bound
/// `|f'(b)| >= [2 / (1 + |F'(0)|)] (1 - |f(0)|) / (1 + |f(0)|)`.
pub fn general_boundary_bound(f: &DiskSelfMap, b: BoundaryPoint) -> Result<SlackReport> {
    require_on_circle(f, b)?;
    let transformed = f.f_transform();
    let bound = lemma1_bound(transformed.derivative_at_origin().norm()) * julia_factor(f);
    let measured = f.boundary_derivative(b).norm();
    Ok(SlackReport::lower(
        EquationTag::Eq8,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// `|f'(b)| >= (1 - |f(0)|) / (1 + |f(0)|)`, dominated by
/// [`general_boundary_bound`].
pub fn julia_type_bound(f: &DiskSelfMap, b: BoundaryPoint) -> Result<SlackReport> {
    require_on_circle(f, b)?;
    let bound = julia_factor(f);
    let measured = f.boundary_derivative(b).norm();
    Ok(SlackReport::lower(
        EquationTag::Eq17,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// k-th order interior bound `|f(z)| <= |z|^k (|z| + |a_k|) / (1 + |a_k| |z|)`.
pub fn kth_interior_bound(f: &DiskSelfMap, z: DiskPoint) -> Result<SlackReport> {
    require_pure(f)?;
    require_fixed_origin(f)?;
    let leading = f.leading_order();
    let a = leading.coefficient.norm();
    let r = z.modulus();
    let bound = r.powi(leading.order as i32) * (r + a) / (1.0 + a * r);
    let measured = f.eval_disk(z).norm();
    Ok(SlackReport::upper(
        EquationTag::Eq15,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

/// k-th order boundary bound `|f'(b)| >= k + (1 - |a_k|) / (1 + |a_k|)`.
pub fn kth_boundary_bound(f: &DiskSelfMap, b: BoundaryPoint) -> Result<SlackReport> {
    require_pure(f)?;
    require_fixed_origin(f)?;
    let leading = f.leading_order();
    let bound = order_k_boundary_bound(leading.order, leading.coefficient.norm());
    let measured = f.boundary_derivative(b).norm();
    Ok(SlackReport::lower(
        EquationTag::Eq16,
        bound,
        measured,
        DEFAULT_TOLERANCE,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskmap::{extremal_lemma1, extremal_order_k};

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn real(x: f64) -> DiskPoint {
        DiskPoint::real(x).unwrap()
    }

    #[test]
    fn verdict_classification() {
        assert_eq!(Verdict::classify(0.0, 1e-9), Verdict::Equality);
        assert_eq!(Verdict::classify(-1e-9, 1e-9), Verdict::Equality);
        assert_eq!(Verdict::classify(-2e-9, 1e-9), Verdict::Violated);
        assert_eq!(Verdict::classify(2e-9, 1e-9), Verdict::Holds);
        assert_eq!(Verdict::classify(f64::NAN, 1e-9), Verdict::Violated);
    }

    #[test]
    fn slack_sign_convention() {
        let low = SlackReport::lower(EquationTag::Eq1, 1.0, 1.5, 1e-9);
        assert_eq!(low.slack, 0.5);
        let up = SlackReport::upper(EquationTag::Eq6, 1.0, 0.25, 1e-9);
        assert_eq!(up.slack, 0.75);
        let id = SlackReport::identity(EquationTag::Eq11, 1.0, 1.25, 1e-9);
        assert_eq!(id.slack, -0.25);
        assert_eq!(id.verdict, Verdict::Violated);
    }

    #[test]
    fn report_json_shape() {
        let r = SlackReport::lower(EquationTag::Chain, 1.0, 1.0, 1e-9);
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        assert_eq!(v["equation"], "chain");
        assert_eq!(v["verdict"], "equality");
        assert_eq!(v.as_object().unwrap().len(), 6);
    }

    #[test]
    fn tags_parse() {
        for tag in EquationTag::ALL {
            assert_eq!(tag.as_str().parse::<EquationTag>().unwrap(), tag);
        }
        assert!("bogus".parse::<EquationTag>().is_err());
    }

    #[test]
    fn bound_lemma1_examples() {
        let rot = DiskSelfMap::rotation(0.7).unwrap();
        let r = bound_lemma1(&rot, BoundaryPoint::new(2.0).unwrap()).unwrap();
        approx(r.bound, 1.0, 1e-15);
        approx(r.measured, 1.0, 1e-15);
        assert_eq!(r.verdict, Verdict::Equality);

        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let r = bound_lemma1(&sq, BoundaryPoint::new(4.0).unwrap()).unwrap();
        assert_eq!(r.bound, 2.0);
        approx(r.measured, 2.0, 1e-14);
        assert_eq!(r.verdict, Verdict::Equality);

        let ext = extremal_lemma1(0.5).unwrap();
        let r = bound_lemma1(&ext, BoundaryPoint::one()).unwrap();
        approx(r.bound, 4.0 / 3.0, 1e-15);
        approx(r.measured, 4.0 / 3.0, 1e-15);
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn bound_lemma1_rejects_shifted_maps() {
        let aut = DiskSelfMap::automorphism(real(0.5)).unwrap();
        assert!(matches!(
            bound_lemma1(&aut, BoundaryPoint::one()),
            Err(Error::OriginNotFixed { .. })
        ));
    }

    #[test]
    fn magnification_strictness() {
        let rot = DiskSelfMap::rotation(0.0).unwrap();
        let m = magnification(&rot, BoundaryPoint::one()).unwrap();
        assert!(m.is_rotation && m.strictness_holds());
        let ext = extremal_lemma1(0.9).unwrap();
        let m = magnification(&ext, BoundaryPoint::new(1.0).unwrap()).unwrap();
        assert!(!m.is_rotation && m.strict);
        assert_eq!(m.report.verdict, Verdict::Holds);
    }

    #[test]
    fn interior_bound_examples() {
        let rot = DiskSelfMap::rotation(1.0).unwrap();
        let z = DiskPoint::polar(0.6, 2.0).unwrap();
        let r = interior_bound(&rot, z).unwrap();
        approx(r.bound, 0.6, 1e-15);
        approx(r.measured, 0.6, 1e-15);
        assert_eq!(r.verdict, Verdict::Equality);

        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let r = interior_bound(&sq, real(0.5)).unwrap();
        assert_eq!(r.bound, 0.25);
        assert_eq!(r.measured, 0.25);

        let ext = extremal_lemma1(0.5).unwrap();
        let r = interior_bound(&ext, real(0.5)).unwrap();
        approx(r.bound, 0.4, 1e-15);
        approx(r.measured, 0.4, 1e-15);
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn quotient_map_examples() {
        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let r = quotient_map_bound(&sq, real(0.7)).unwrap();
        approx(r.measured, 0.7, 1e-15);
        approx(r.bound, 0.7, 1e-15);

        let ext = extremal_lemma1(0.5).unwrap();
        let r = quotient_map_bound(&ext, real(0.5)).unwrap();
        approx(r.measured, 0.8, 1e-15);
        approx(r.bound, 0.8, 1e-15);
        assert_eq!(r.verdict, Verdict::Equality);

        let rot = DiskSelfMap::rotation(0.0).unwrap();
        let r = quotient_map_bound(&rot, real(0.3)).unwrap();
        approx(r.measured, 1.0, 1e-15);
        approx(r.bound, 1.0, 1e-15);

        assert!(quotient_map_bound(&rot, DiskPoint::ORIGIN).is_err());
    }

    #[test]
    fn schwarz_pick_disk_examples() {
        assert_eq!(schwarz_pick_disk(0.0, 0.5).unwrap(), (-0.5, 0.5));
        let (lo, hi) = schwarz_pick_disk(0.5, 0.5).unwrap();
        approx(lo, 0.0, 1e-16);
        approx(hi, 0.8, 1e-15);
        let (lo, hi) = schwarz_pick_disk(0.5, 1.0 - 1e-12).unwrap();
        approx(lo, -1.0, 1e-11);
        approx(hi, 1.0, 1e-11);
        assert!(schwarz_pick_disk(1.0, 0.5).is_err());
        assert!(schwarz_pick_disk(0.5, 0.0).is_err());
        assert!(schwarz_pick_disk(0.5, 1.0).is_err());
    }

    #[test]
    fn proof_chain_examples() {
        let rot = DiskSelfMap::rotation(0.0).unwrap();
        let r = proof_chain_pointwise(&rot, real(0.9)).unwrap();
        approx(r.measured, 1.0, 1e-14);
        approx(r.bound, 1.0, 1e-15);
        assert_eq!(r.verdict, Verdict::Equality);

        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let r = proof_chain_pointwise(&sq, real(0.9)).unwrap();
        approx(r.measured, 1.9, 1e-13);
        approx(r.bound, 1.9, 1e-15);

        let ext = extremal_lemma1(0.5).unwrap();
        let r = proof_chain_pointwise(&ext, real(0.99)).unwrap();
        approx(r.measured, r.bound, 1e-12);
        assert!((r.bound - 4.0 / 3.0).abs() < 1e-2);
    }

    #[test]
    fn sequence_probe_examples() {
        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        let p = sequence_probe(&sq, BoundaryPoint::new(0.3).unwrap(), 20).unwrap();
        assert_eq!(p.radii.len(), 20);
        assert_eq!(p.radii[0], 0.5);
        assert!(p.radii.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
        assert!(p.rung_reports().iter().all(SlackReport::holds));
        // quotients are 1 + t_j, rising to the limit 2
        assert!(p.quotients.windows(2).all(|w| w[0] < w[1]));
        assert!(p.limit_gap() < 2e-5);
        assert_eq!(p.limit_bound, 2.0);

        let rot = DiskSelfMap::rotation(0.0).unwrap();
        let p = sequence_probe(&rot, BoundaryPoint::one(), 30).unwrap();
        assert!(p.quotients.iter().all(|&q| q == 1.0));

        let ext = extremal_lemma1(0.5).unwrap();
        let p = sequence_probe(&ext, BoundaryPoint::one(), 30).unwrap();
        assert!(p.rung_reports().iter().all(SlackReport::holds));
        // rounding in 1 - |f| is amplified by 2^j on the deepest rungs
        assert!(p.quotients.iter().all(|&q| q <= 4.0 / 3.0 + 1e-6));
        assert!(p.limit_gap() < 1e-6 * 30.0);

        assert!(sequence_probe(&rot, BoundaryPoint::one(), 1).is_err());
        assert!(sequence_probe(&rot, BoundaryPoint::one(), 60).is_err());
    }

    #[test]
    fn transform_identity_examples() {
        let ext = extremal_lemma1(0.5).unwrap();
        let t = f_transform_derivative_identity(&ext, BoundaryPoint::new(1.3).unwrap()).unwrap();
        assert_eq!(t.identity.measured, t.identity.bound);

        let aut = DiskSelfMap::automorphism(real(0.5)).unwrap();
        let t = f_transform_derivative_identity(&aut, BoundaryPoint::one()).unwrap();
        approx(t.identity.measured, 1.0, 1e-15);
        approx(t.identity.bound, 1.0, 1e-14);
        assert_eq!(t.identity.verdict, Verdict::Equality);
        // (1/3) * 1.5 / 0.5
        approx(t.inequality.bound, 1.0, 1e-15);
    }

    #[test]
    fn general_bound_examples() {
        let ext = extremal_lemma1(0.3).unwrap();
        let b = BoundaryPoint::new(2.2).unwrap();
        let g = general_boundary_bound(&ext, b).unwrap();
        let l = bound_lemma1(&ext, b).unwrap();
        assert_eq!(g.bound, l.bound);
        assert_eq!(g.measured, l.measured);

        let aut = DiskSelfMap::automorphism(real(0.5)).unwrap();
        let g = general_boundary_bound(&aut, BoundaryPoint::one()).unwrap();
        approx(g.bound, 1.0 / 3.0, 1e-15);
        approx(g.measured, 1.0 / 3.0, 1e-15);
        assert_eq!(g.verdict, Verdict::Equality);

        let shifted = ext.post_compose(real(0.4));
        let g = general_boundary_bound(&shifted, BoundaryPoint::new(0.8).unwrap()).unwrap();
        assert_eq!(g.verdict, Verdict::Holds);
        assert!(g.slack > 0.0);
    }

    #[test]
    fn julia_bound_examples() {
        let ext = extremal_lemma1(0.3).unwrap();
        let j = julia_type_bound(&ext, BoundaryPoint::new(0.1).unwrap()).unwrap();
        assert_eq!(j.bound, 1.0);

        let aut = DiskSelfMap::automorphism(real(0.5)).unwrap();
        let j = julia_type_bound(&aut, BoundaryPoint::one()).unwrap();
        approx(j.bound, 1.0 / 3.0, 1e-15);
        approx(j.measured, 1.0 / 3.0, 1e-15);
        assert_eq!(j.verdict, Verdict::Equality);
    }

    #[test]
    fn kth_interior_examples() {
        let p = DiskSelfMap::power(3, 0.4).unwrap();
        for z in [real(0.5), DiskPoint::polar(0.8, 2.0).unwrap()] {
            let r = kth_interior_bound(&p, z).unwrap();
            assert_eq!(r.verdict, Verdict::Equality);
        }
        let e = extremal_order_k(2, 0.5).unwrap();
        let r = kth_interior_bound(&e, real(0.5)).unwrap();
        assert!(r.slack.abs() <= 1e-12);

        let g = DiskSelfMap::new(0.0, [(DiskPoint::ORIGIN, 2), (real(0.4), 1)], None).unwrap();
        let r = kth_interior_bound(&g, DiskPoint::new(Complex64::new(0.0, 0.3)).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.slack > 0.0);

        let shifted = e.post_compose(real(0.1));
        assert!(matches!(
            kth_interior_bound(&shifted, real(0.5)),
            Err(Error::PostShiftPresent)
        ));
    }

    #[test]
    fn kth_boundary_examples() {
        for k in 1..=4 {
            let p = DiskSelfMap::power(k, 1.7).unwrap();
            let r = kth_boundary_bound(&p, BoundaryPoint::new(0.9).unwrap()).unwrap();
            assert_eq!(r.bound, f64::from(k));
            approx(r.measured, f64::from(k), 1e-13);
        }
        let e = extremal_order_k(2, 0.5).unwrap();
        let r = kth_boundary_bound(&e, BoundaryPoint::one()).unwrap();
        approx(r.bound, 7.0 / 3.0, 1e-15);
        approx(r.measured, 7.0 / 3.0, 1e-14);
        assert_eq!(r.verdict, Verdict::Equality);

        let e1 = extremal_lemma1(0.5).unwrap();
        let r = kth_boundary_bound(&e1, BoundaryPoint::one()).unwrap();
        let l = bound_lemma1(&e1, BoundaryPoint::one()).unwrap();
        assert_eq!(r.bound, l.bound);
        approx(r.bound, 4.0 / 3.0, 1e-15);
    }

    #[test]
    fn order_k_bound_matches_printed_form() {
        for k in 1..6u32 {
            for i in 0..100 {
                let a = f64::from(i) / 100.0;
                let printed = f64::from(k) + (1.0 - a) / (1.0 + a);
                approx(order_k_boundary_bound(k, a), printed, 1e-14);
                assert!(order_k_boundary_bound(k, a) >= f64::from(k));
            }
        }
    }
}

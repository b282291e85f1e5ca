//! Holomorphic self-maps of the unit disk represented as finite Blaschke
//! products, optionally post-composed with a disk automorphism.
//!
//! A map is stored in factored form
//!
//! ```text
//! f(z) = S_c( e^{iφ} · Π_j ((z - a_j) / (1 - conj(a_j) z))^{m_j} ),   S_c(w) = (w + c) / (1 + conj(c) w)
//! ```
//!
//! and never expanded into polynomial coefficients, so zeros close to the
//! circle do not cause cancellation. Every such map is analytic across the
//! closed disk and unimodular on the circle, which makes boundary
//! derivatives available in closed form.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `|z| <= 1` before a point counts as outside the closed disk.
pub const CLOSED_DISK_SLACK: f64 = 1e-12;

fn ensure_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { re: z.re, im: z.im })
    }
}

fn cis(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(value: Complex64) -> Result<Self> {
        ensure_finite(value)?;
        let modulus = value.norm();
        if modulus < 1.0 {
            Ok(DiskPoint(value))
        } else {
            Err(Error::NotInDisk { modulus })
        }
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn polar(radius: f64, angle: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(radius, angle))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    pub fn is_origin(self) -> bool {
        self.0 == Complex64::new(0.0, 0.0)
    }
}

/// A point `e^{iθ}` of the unit circle, stored by its angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidParameter {
                name: "angle",
                reason: format!("{angle} is not finite"),
            });
        }
        let mut angle = angle.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        if angle >= TAU {
            angle = 0.0;
        }
        Ok(BoundaryPoint { angle })
    }

    /// The point `b = 1`.
    pub fn one() -> Self {
        BoundaryPoint { angle: 0.0 }
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn point(self) -> Complex64 {
        cis(self.angle)
    }
}

/// The degree-one map `(z - a) / (1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeFactor {
    zero: DiskPoint,
}

impl BlaschkeFactor {
    pub fn new(zero: DiskPoint) -> Self {
        BlaschkeFactor { zero }
    }

    pub fn zero(&self) -> DiskPoint {
        self.zero
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let a = self.zero.0;
        (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let a = self.zero.0;
        let den = Complex64::new(1.0, 0.0) - a.conj() * z;
        Complex64::new(1.0 - a.norm_sqr(), 0.0) / (den * den)
    }
}

/// A zero of a Blaschke product together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub point: DiskPoint,
    pub multiplicity: u32,
}

/// Order of vanishing at the origin and the first non-zero Taylor coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingOrder {
    pub order: u32,
    pub coefficient: Complex64,
}

/// `S_c(w) = (w + c) / (1 + conj(c) w)`
fn shift(c: Complex64, w: Complex64) -> Complex64 {
    (w + c) / (Complex64::new(1.0, 0.0) + c.conj() * w)
}

fn shift_derivative(c: Complex64, w: Complex64) -> Complex64 {
    let den = Complex64::new(1.0, 0.0) + c.conj() * w;
    Complex64::new(1.0 - c.norm_sqr(), 0.0) / (den * den)
}

/// A holomorphic self-map of the unit disk: a finite Blaschke product with a
/// rotation phase, optionally followed by a disk automorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::MapRepr", into = "repr::MapRepr")]
pub struct DiskSelfMap {
    phase: f64,
    zeros: Vec<Zero>,
    post_shift: Option<DiskPoint>,
}

impl DiskSelfMap {
    /// Builds `S_c(e^{iφ} Π_j B_{a_j}^{m_j})`. Repeated zeros are merged into
    /// one entry with summed multiplicity.
    pub fn new(
        phase: f64,
        zeros: impl IntoIterator<Item = (DiskPoint, u32)>,
        post_shift: Option<DiskPoint>,
    ) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase",
                reason: format!("{phase} is not finite"),
            });
        }
        let mut merged: Vec<Zero> = Vec::new();
        for (point, multiplicity) in zeros {
            if multiplicity == 0 {
                return Err(Error::InvalidParameter {
                    name: "multiplicity",
                    reason: "zero multiplicity must be at least 1".into(),
                });
            }
            match merged.iter_mut().find(|z| z.point == point) {
                Some(existing) => existing.multiplicity += multiplicity,
                None => merged.push(Zero {
                    point,
                    multiplicity,
                }),
            }
        }
        if merged.is_empty() {
            return Err(Error::InvalidParameter {
                name: "zeros",
                reason: "a self-map needs degree at least 1".into(),
            });
        }
        let post_shift = post_shift.filter(|c| !c.is_origin());
        Ok(DiskSelfMap {
            phase,
            zeros: merged,
            post_shift,
        })
    }

    /// A pure Blaschke product with the given zeros (each of multiplicity one
    /// unless repeated).
    pub fn blaschke(phase: f64, zeros: impl IntoIterator<Item = DiskPoint>) -> Result<Self> {
        Self::new(phase, zeros.into_iter().map(|z| (z, 1)), None)
    }

    /// `e^{iα} z`
    pub fn rotation(alpha: f64) -> Result<Self> {
        Self::power(1, alpha)
    }

    /// `e^{iα} z^k`
    pub fn power(k: u32, alpha: f64) -> Result<Self> {
        Self::new(alpha, [(DiskPoint::ORIGIN, k)], None)
    }

    /// `(z + c) / (1 + conj(c) z)`
    pub fn automorphism(c: DiskPoint) -> Result<Self> {
        Self::new(0.0, [(DiskPoint::ORIGIN, 1)], Some(c))
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn post_shift(&self) -> Option<DiskPoint> {
        self.post_shift
    }

    pub fn is_pure(&self) -> bool {
        self.post_shift.is_none()
    }

    pub fn degree(&self) -> u32 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    pub fn origin_multiplicity(&self) -> u32 {
        self.zeros
            .iter()
            .filter(|z| z.point.is_origin())
            .map(|z| z.multiplicity)
            .sum()
    }

    /// True when `f(0)` evaluates to exactly zero.
    pub fn fixes_origin(&self) -> bool {
        self.eval_unchecked(Complex64::new(0.0, 0.0)) == Complex64::new(0.0, 0.0)
    }

    /// Degree-one maps fixing the origin are exactly the rotations.
    pub fn is_rotation(&self) -> bool {
        self.degree() == 1 && self.fixes_origin()
    }

    pub fn is_automorphism(&self) -> bool {
        self.degree() == 1
    }

    /// Returns `S_c ∘ self`. The composition of two shifts is again a shift
    /// after a rotation, and the rotation is absorbed into the phase.
    pub fn post_compose(&self, c: DiskPoint) -> Self {
        let c = c.value();
        let d = self
            .post_shift
            .map_or(Complex64::new(0.0, 0.0), |p| p.value());
        let one = Complex64::new(1.0, 0.0);
        let turn = (one + d.conj() * c) / (one + c.conj() * d);
        let new_shift = shift(c, d);
        DiskSelfMap {
            phase: self.phase + turn.arg(),
            zeros: self.zeros.clone(),
            post_shift: DiskPoint::new(new_shift).ok().filter(|s| !s.is_origin()),
        }
    }

    fn blaschke_part(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(cis(self.phase), |acc, zero| {
            acc * BlaschkeFactor::new(zero.point)
                .eval(z)
                .powu(zero.multiplicity)
        })
    }

    fn blaschke_part_derivative(&self, z: Complex64) -> Complex64 {
        let values: Vec<Complex64> = self
            .zeros
            .iter()
            .map(|zero| {
                BlaschkeFactor::new(zero.point)
                    .eval(z)
                    .powu(zero.multiplicity)
            })
            .collect();
        let n = values.len();
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1] * values[j];
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, zero) in self.zeros.iter().enumerate() {
            let factor = BlaschkeFactor::new(zero.point);
            let m = zero.multiplicity;
            let d_power = factor.eval(z).powu(m - 1) * factor.derivative(z) * f64::from(m);
            sum += prefix * d_power * suffix[j + 1];
            prefix *= values[j];
        }
        cis(self.phase) * sum
    }

    fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let w = self.blaschke_part(z);
        match self.post_shift {
            Some(c) => shift(c.value(), w),
            None => w,
        }
    }

    fn derivative_unchecked(&self, z: Complex64) -> Complex64 {
        let dw = self.blaschke_part_derivative(z);
        match self.post_shift {
            Some(c) => shift_derivative(c.value(), self.blaschke_part(z)) * dw,
            None => dw,
        }
    }

    fn check_domain(z: Complex64) -> Result<()> {
        ensure_finite(z)?;
        let modulus = z.norm();
        if modulus > 1.0 + CLOSED_DISK_SLACK {
            return Err(Error::OutsideClosedDisk { modulus });
        }
        Ok(())
    }

    /// `f(z)` for `|z| <= 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub fn eval_disk(&self, z: DiskPoint) -> Complex64 {
        self.eval_unchecked(z.value())
    }

    pub fn eval_boundary(&self, b: BoundaryPoint) -> Complex64 {
        self.eval_unchecked(b.point())
    }

    /// `f'(z)` for `|z| <= 1`, by the product rule over the factors and the
    /// chain rule through the post-composed shift.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        Ok(self.derivative_unchecked(z))
    }

    pub fn derivative_disk(&self, z: DiskPoint) -> Complex64 {
        self.derivative_unchecked(z.value())
    }

    pub fn boundary_derivative(&self, b: BoundaryPoint) -> Complex64 {
        self.derivative_unchecked(b.point())
    }

    /// `f'(0)`. A simple zero at the origin yields the first Taylor
    /// coefficient in closed form, so this agrees bit-for-bit with
    /// [`leading_order`](Self::leading_order) when `k = 1`.
    pub fn derivative_at_origin(&self) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let inner = match self.origin_multiplicity() {
            0 => self.blaschke_part_derivative(zero),
            1 => self.leading_blaschke_coefficient(),
            _ => zero,
        };
        match self.post_shift {
            Some(c) => shift_derivative(c.value(), self.blaschke_part(zero)) * inner,
            None => inner,
        }
    }

    /// `e^{iφ} Π_{a_j ≠ 0} (-a_j)^{m_j}`, the coefficient of `z^k` in the
    /// Blaschke part.
    fn leading_blaschke_coefficient(&self) -> Complex64 {
        self.zeros
            .iter()
            .filter(|z| !z.point.is_origin())
            .fold(cis(self.phase), |acc, z| {
                acc * (-z.point.value()).powu(z.multiplicity)
            })
    }

    /// Order `k` of the zero at the origin and the Taylor coefficient `a_k`.
    ///
    /// Maps with `f(0) ≠ 0` report `(0, f(0))`. A post-composed map that
    /// still fixes the origin (the output of an F-transform) reports
    /// `(1, f'(0))`.
    pub fn leading_order(&self) -> LeadingOrder {
        let k = self.origin_multiplicity();
        if self.is_pure() && k > 0 {
            return LeadingOrder {
                order: k,
                coefficient: self.leading_blaschke_coefficient(),
            };
        }
        if self.fixes_origin() {
            LeadingOrder {
                order: 1,
                coefficient: self.derivative_at_origin(),
            }
        } else {
            LeadingOrder {
                order: 0,
                coefficient: self.eval_unchecked(Complex64::new(0.0, 0.0)),
            }
        }
    }

    /// The normalization `F(z) = (f(z) - f(0)) / (1 - conj(f(0)) f(z))`.
    ///
    /// `F` is `f` followed by the shift `S_{-f(0)}`. The resulting rotation
    /// is folded into the phase and the new shift is set to `-B(0)` of the
    /// rotated Blaschke part, so `F(0)` evaluates to exactly zero.
    pub fn f_transform(&self) -> Self {
        let origin = Complex64::new(0.0, 0.0);
        let p = self.eval_unchecked(origin);
        if p == origin {
            return self.clone();
        }
        let one = Complex64::new(1.0, 0.0);
        let d = self.post_shift.map_or(origin, |s| s.value());
        let turn = (one - d.conj() * p) / (one - p.conj() * d);
        let mut transformed = DiskSelfMap {
            phase: self.phase + turn.arg(),
            zeros: self.zeros.clone(),
            post_shift: None,
        };
        let base = transformed.blaschke_part(origin);
        transformed.post_shift = DiskPoint::new(-base).ok().filter(|s| !s.is_origin());
        transformed
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_extremal_parameter(a: f64) -> Result<()> {
    if (0.0..1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "a",
            reason: format!("{a} is outside [0, 1)"),
        })
    }
}

/// `z (z + a) / (1 + a z)`: equality case of the boundary and interior
/// bounds for `|f'(0)| = a`.
pub fn extremal_lemma1(a: f64) -> Result<DiskSelfMap> {
    extremal_order_k(1, a)
}

/// `z^k (z + a) / (1 + a z)`: equality case of the k-th order bounds.
pub fn extremal_order_k(k: u32, a: f64) -> Result<DiskSelfMap> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "order must be at least 1".into(),
        });
    }
    check_extremal_parameter(a)?;
    DiskSelfMap::new(
        0.0,
        [(DiskPoint::ORIGIN, k), (DiskPoint::real(-a)?, 1)],
        None,
    )
}

mod repr {
    use num_complex::Complex64;
    use serde::{Deserialize, Serialize};

    use super::{DiskPoint, DiskSelfMap};
    use crate::error::Error;

    #[derive(Serialize, Deserialize)]
    pub struct ZeroRepr {
        pub re: f64,
        pub im: f64,
        pub mult: u32,
    }

    #[derive(Serialize, Deserialize)]
    pub struct PointRepr {
        pub re: f64,
        pub im: f64,
    }

    #[derive(Serialize, Deserialize)]
    pub struct MapRepr {
        pub phase: f64,
        pub zeros: Vec<ZeroRepr>,
        pub post_shift: Option<PointRepr>,
    }

    impl TryFrom<MapRepr> for DiskSelfMap {
        type Error = Error;

        fn try_from(repr: MapRepr) -> Result<Self, Error> {
            let zeros = repr
                .zeros
                .iter()
                .map(|z| Ok((DiskPoint::new(Complex64::new(z.re, z.im))?, z.mult)))
                .collect::<Result<Vec<_>, Error>>()?;
            let post_shift = repr
                .post_shift
                .map(|c| DiskPoint::new(Complex64::new(c.re, c.im)))
                .transpose()?;
            DiskSelfMap::new(repr.phase, zeros, post_shift)
        }
    }

    impl From<DiskSelfMap> for MapRepr {
        fn from(map: DiskSelfMap) -> Self {
            MapRepr {
                phase: map.phase,
                zeros: map
                    .zeros
                    .iter()
                    .map(|z| ZeroRepr {
                        re: z.point.value().re,
                        im: z.point.value().im,
                        mult: z.multiplicity,
                    })
                    .collect(),
                post_shift: map.post_shift.map(|c| PointRepr {
                    re: c.value().re,
                    im: c.value().im,
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eval_examples() {
        let id = DiskSelfMap::rotation(0.0).unwrap();
        assert_eq!(id.eval(c(0.3, 0.0)).unwrap(), c(0.3, 0.0));

        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        assert!(close(sq.eval(c(0.0, 1.0)).unwrap(), c(-1.0, 0.0), 1e-15));

        // 0.5 * (1.0 / 1.25)
        let f = extremal_lemma1(0.5).unwrap();
        assert!(close(f.eval(c(0.5, 0.0)).unwrap(), c(0.4, 0.0), 1e-15));
    }

    #[test]
    fn eval_rejects_points_outside_closed_disk() {
        let f = DiskSelfMap::rotation(0.0).unwrap();
        assert!(matches!(
            f.eval(c(1.0 + 1e-9, 0.0)),
            Err(Error::OutsideClosedDisk { .. })
        ));
        assert!(f.eval(c(1.0 + 1e-13, 0.0)).is_ok());
        assert!(matches!(
            f.eval(c(f64::NAN, 0.0)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let sq = DiskSelfMap::power(2, 0.0).unwrap();
        assert!(close(
            sq.derivative(c(1.0, 0.0)).unwrap(),
            c(2.0, 0.0),
            1e-15
        ));

        let f = extremal_lemma1(0.5).unwrap();
        assert!(close(
            f.derivative(c(1.0, 0.0)).unwrap(),
            c(4.0 / 3.0, 0.0),
            1e-15
        ));

        let aut = DiskSelfMap::automorphism(DiskPoint::real(0.5).unwrap()).unwrap();
        assert!(close(
            aut.derivative(c(1.0, 0.0)).unwrap(),
            c(1.0 / 3.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn derivative_at_zero_of_the_map() {
        // product rule must not divide by a factor that vanishes
        let f = DiskSelfMap::blaschke(0.0, [DiskPoint::real(0.4).unwrap()]).unwrap();
        let expected = c(1.0 / (1.0 - 0.16), 0.0);
        assert!(close(f.derivative(c(0.4, 0.0)).unwrap(), expected, 1e-14));
    }

    #[test]
    fn derivative_at_origin_examples() {
        let rot = DiskSelfMap::rotation(1.1).unwrap();
        assert!((rot.derivative_at_origin().norm() - 1.0).abs() < 1e-15);
        assert_eq!(
            DiskSelfMap::power(2, 0.0).unwrap().derivative_at_origin(),
            c(0.0, 0.0)
        );
        let f = extremal_lemma1(0.5).unwrap();
        assert!(close(f.derivative_at_origin(), c(0.5, 0.0), 1e-15));
        assert!(close(
            f.derivative_at_origin(),
            f.derivative(c(0.0, 0.0)).unwrap(),
            1e-15
        ));
    }

    #[test]
    fn boundary_derivative_examples() {
        let sq = DiskSelfMap::power(2, 0.7).unwrap();
        for angle in [0.0, 0.4, 2.0, 5.9] {
            let b = BoundaryPoint::new(angle).unwrap();
            assert!((sq.boundary_derivative(b).norm() - 2.0).abs() < 1e-14);
        }
        let rot = DiskSelfMap::rotation(0.3).unwrap();
        assert!(
            (rot.boundary_derivative(BoundaryPoint::new(1.0).unwrap())
                .norm()
                - 1.0)
                .abs()
                < 1e-15
        );
        let f = extremal_lemma1(0.5).unwrap();
        assert!((f.boundary_derivative(BoundaryPoint::one()).norm() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn leading_order_examples() {
        let p = DiskSelfMap::power(3, 0.9).unwrap().leading_order();
        assert_eq!(p.order, 3);
        assert!(close(p.coefficient, cis(0.9), 1e-15));

        let f = extremal_lemma1(0.5).unwrap().leading_order();
        assert_eq!(f.order, 1);
        assert!(close(f.coefficient, c(0.5, 0.0), 1e-15));

        let g = extremal_order_k(2, 0.3).unwrap().leading_order();
        assert_eq!(g.order, 2);
        assert!(close(g.coefficient, c(0.3, 0.0), 1e-15));
    }

    #[test]
    fn leading_order_without_origin_zero_reports_value_at_origin() {
        let f = DiskSelfMap::blaschke(0.0, [DiskPoint::real(0.25).unwrap()]).unwrap();
        let lo = f.leading_order();
        assert_eq!(lo.order, 0);
        assert!(close(lo.coefficient, c(-0.25, 0.0), 1e-16));
    }

    #[test]
    fn extremal_constructors() {
        assert_eq!(
            extremal_lemma1(0.0).unwrap(),
            DiskSelfMap::power(2, 0.0).unwrap()
        );
        assert_eq!(
            extremal_order_k(2, 0.0).unwrap(),
            DiskSelfMap::power(3, 0.0).unwrap()
        );
        assert_eq!(
            extremal_order_k(1, 0.5).unwrap(),
            extremal_lemma1(0.5).unwrap()
        );
        assert!(close(
            extremal_lemma1(0.9).unwrap().derivative_at_origin(),
            c(0.9, 0.0),
            1e-15
        ));

        let f = extremal_order_k(2, 0.5).unwrap();
        assert!((f.boundary_derivative(BoundaryPoint::one()).norm() - 7.0 / 3.0).abs() < 1e-14);

        assert!(extremal_lemma1(1.0).is_err());
        assert!(extremal_lemma1(-0.1).is_err());
        assert!(extremal_order_k(0, 0.5).is_err());
    }

    #[test]
    fn constant_maps_are_unrepresentable() {
        assert!(DiskSelfMap::new(0.0, [], None).is_err());
        assert!(DiskSelfMap::new(0.0, [(DiskPoint::ORIGIN, 0)], None).is_err());
    }

    #[test]
    fn repeated_zeros_merge() {
        let a = DiskPoint::real(0.2).unwrap();
        let f = DiskSelfMap::new(0.0, [(a, 1), (DiskPoint::ORIGIN, 1), (a, 2)], None).unwrap();
        assert_eq!(f.zeros().len(), 2);
        assert_eq!(f.degree(), 4);
    }

    #[test]
    fn disk_point_rejects_boundary_and_beyond() {
        assert!(DiskPoint::real(1.0).is_err());
        assert!(DiskPoint::new(c(1.5, 0.0)).is_err());
        assert!(DiskPoint::real(0.999_999).is_ok());
    }

    #[test]
    fn boundary_point_normalizes_angle() {
        let b = BoundaryPoint::new(-0.5).unwrap();
        assert!((b.angle() - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(BoundaryPoint::new(TAU).unwrap().angle(), 0.0);
        assert!(BoundaryPoint::new(f64::INFINITY).is_err());
        assert_eq!(BoundaryPoint::one().point(), c(1.0, 0.0));
    }

    #[test]
    fn f_transform_examples() {
        let f = extremal_lemma1(0.5).unwrap();
        assert_eq!(f.f_transform(), f);

        let aut = DiskSelfMap::automorphism(DiskPoint::real(0.5).unwrap()).unwrap();
        let id = aut.f_transform();
        assert_eq!(id, DiskSelfMap::rotation(0.0).unwrap());

        let shifted = f.post_compose(DiskPoint::real(0.3).unwrap());
        let big_f = shifted.f_transform();
        assert!(big_f.eval(c(0.0, 0.0)).unwrap().norm() <= 1e-14);
        assert!(big_f.fixes_origin());
        for z in [c(0.3, 0.1), c(-0.5, 0.6), c(0.0, -0.9)] {
            let p = shifted.eval(c(0.0, 0.0)).unwrap();
            let w = shifted.eval(z).unwrap();
            let expected = (w - p) / (c(1.0, 0.0) - p.conj() * w);
            assert!(close(big_f.eval(z).unwrap(), expected, 1e-14));
        }
    }

    #[test]
    fn post_compose_matches_direct_composition() {
        let f = DiskSelfMap::new(
            0.4,
            [
                (DiskPoint::new(c(0.2, -0.3)).unwrap(), 1),
                (DiskPoint::ORIGIN, 2),
            ],
            Some(DiskPoint::new(c(-0.1, 0.5)).unwrap()),
        )
        .unwrap();
        let cc = c(0.35, 0.2);
        let g = f.post_compose(DiskPoint::new(cc).unwrap());
        for z in [c(0.1, 0.2), c(-0.7, 0.1), c(0.0, 1.0)] {
            let expected = shift(cc, f.eval(z).unwrap());
            assert!(close(g.eval(z).unwrap(), expected, 1e-14));
        }
    }

    #[test]
    fn json_schema_and_validation() {
        let f = DiskSelfMap::new(
            0.25,
            [
                (DiskPoint::ORIGIN, 2),
                (DiskPoint::new(c(0.1, -0.2)).unwrap(), 1),
            ],
            Some(DiskPoint::new(c(0.3, 0.0)).unwrap()),
        )
        .unwrap();
        let value: serde_json::Value = serde_json::from_str(&f.to_json().unwrap()).unwrap();
        assert_eq!(value["phase"], 0.25);
        assert_eq!(value["zeros"][0]["mult"], 2);
        assert_eq!(value["zeros"][1]["im"], -0.2);
        assert_eq!(value["post_shift"]["re"], 0.3);

        let pure = DiskSelfMap::power(1, 0.0).unwrap().to_json().unwrap();
        assert!(pure.contains("\"post_shift\":null"));

        let bad = r#"{"phase":0,"zeros":[{"re":1.5,"im":0,"mult":1}],"post_shift":null}"#;
        assert!(DiskSelfMap::from_json(bad).is_err());
        let empty = r#"{"phase":0,"zeros":[],"post_shift":null}"#;
        assert!(DiskSelfMap::from_json(empty).is_err());
    }
}

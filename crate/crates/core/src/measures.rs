//! Spherical measures `S¹…S⁴` and Riemannian volume/area of `g_ε` on
//! parametrized objects.
//!
//! All universal proportionality constants are fixed to 1: `S⁴ = dx dy dz`,
//! `dS³ = |θ|_S|_ε · d area_ε`, `S²` integrates `|θ|` along transverse
//! curves and `S¹` is length along horizontal ones.

use serde::{Deserialize, Serialize};

use crate::domains::VoxelDomain;
use crate::error::{positive, Error, Result};
use crate::group::{
    dilate_unchecked, group_mul, left_pushforward, metric_tensor_unchecked, quad_form, theta,
    GroupPoint,
};
use crate::quadrature::{estimate_unit_interval, estimate_unit_square};

/// Default Gauss–Legendre order per axis; the error estimate doubles it.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    S1,
    S2,
    S3,
    S4,
    #[serde(rename = "riem_volume")]
    RiemVolume,
    #[serde(rename = "riem_area")]
    RiemArea,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub kind: MeasureKind,
    pub value: f64,
    #[serde(rename = "err")]
    pub estimated_quadrature_error: f64,
}

impl MeasureValue {
    pub fn exact(kind: MeasureKind, value: f64) -> Self {
        Self {
            kind,
            value,
            estimated_quadrature_error: 0.0,
        }
    }
}

/// Axis-aligned coordinate box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl CoordBox {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if !(lo[a].is_finite() && hi[a].is_finite() && hi[a] >= lo[a]) {
                return Err(Error::InvalidParameter {
                    name: "box",
                    reason: format!("axis {a}: need finite lo <= hi, got [{}, {}]", lo[a], hi[a]),
                });
            }
        }
        Ok(Self { lo, hi })
    }

    /// `[0, t) × [0, t) × [0, t²)`, the fundamental box of `Γ_t`.
    pub fn fundamental(t: f64) -> Self {
        Self {
            lo: [0.0; 3],
            hi: [t, t, t * t],
        }
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn volume(&self) -> f64 {
        self.extent(0) * self.extent(1) * self.extent(2)
    }
}

/// Regions on which the volume measures can be evaluated.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    Box(CoordBox),
    Voxels(&'a VoxelDomain),
}

pub fn s4_volume(region: Region<'_>) -> MeasureValue {
    let v = match region {
        Region::Box(b) => b.volume(),
        Region::Voxels(d) => d.occupied_count() as f64 * d.cell_volume(),
    };
    MeasureValue::exact(MeasureKind::S4, v)
}

/// The density of `g_ε` is the constant `1/ε`.
pub fn riem_volume(region: Region<'_>, eps: f64) -> Result<MeasureValue> {
    positive("epsilon", eps)?;
    Ok(MeasureValue::exact(
        MeasureKind::RiemVolume,
        s4_volume(region).value / eps,
    ))
}

/// A smooth map `[0, 1]² → H`.
pub trait SurfacePatch: Sync {
    fn point(&self, u: f64, v: f64) -> GroupPoint;

    /// Coordinate partial derivatives `(∂_u, ∂_v)`; central differences by default.
    fn tangents(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
        let h = 1e-6;
        let d = |a: GroupPoint, b: GroupPoint| {
            [
                (b.x - a.x) / (2.0 * h),
                (b.y - a.y) / (2.0 * h),
                (b.z - a.z) / (2.0 * h),
            ]
        };
        (
            d(self.point(u - h, v), self.point(u + h, v)),
            d(self.point(u, v - h), self.point(u, v + h)),
        )
    }

    fn quad_order(&self) -> usize {
        DEFAULT_ORDER
    }
}

/// Gram matrix `[[aa, ab], [ab, bb]]` of the tangents under `g_ε`.
fn gram(p: &GroupPoint, a: &[f64; 3], b: &[f64; 3], eps: f64) -> (f64, f64, f64) {
    let g = metric_tensor_unchecked(p.x, eps);
    (
        quad_form(&g, a, a),
        quad_form(&g, a, b),
        quad_form(&g, b, b),
    )
}

struct LocalDensities {
    area: f64,
    theta_norm: f64,
}

fn local_densities<S: SurfacePatch + ?Sized>(
    s: &S,
    u: f64,
    v: f64,
    eps: f64,
) -> Result<LocalDensities> {
    let p = s.point(u, v);
    let (a, b) = s.tangents(u, v);
    let (gaa, gab, gbb) = gram(&p, &a, &b, eps);
    let det = gaa * gbb - gab * gab;
    if !(det > 1e-14 * gaa * gbb) || !det.is_finite() {
        return Err(Error::DegenerateTangent { u, v });
    }
    let wa = theta(&p, a);
    let wb = theta(&p, b);
    let num = gbb * wa * wa - 2.0 * gab * wa * wb + gaa * wb * wb;
    Ok(LocalDensities {
        area: det.sqrt(),
        theta_norm: (num.max(0.0) / det).sqrt(),
    })
}

/// `g_ε`-norm of `θ` restricted to the tangent plane at `(u, v)`; lies in `[0, ε]`.
pub fn theta_density<S: SurfacePatch + ?Sized>(s: &S, eps: f64, u: f64, v: f64) -> Result<f64> {
    positive("epsilon", eps)?;
    Ok(local_densities(s, u, v, eps)?.theta_norm)
}

/// Riemannian area element `sqrt(det Gram)` at `(u, v)`.
pub fn area_density<S: SurfacePatch + ?Sized>(s: &S, eps: f64, u: f64, v: f64) -> Result<f64> {
    positive("epsilon", eps)?;
    Ok(local_densities(s, u, v, eps)?.area)
}

pub fn riem_area<S: SurfacePatch + ?Sized>(s: &S, eps: f64) -> Result<MeasureValue> {
    positive("epsilon", eps)?;
    let (value, err) = estimate_unit_square(s.quad_order(), |u, v| {
        local_densities(s, u, v, eps).map(|d| d.area)
    })?;
    Ok(MeasureValue {
        kind: MeasureKind::RiemArea,
        value,
        estimated_quadrature_error: err,
    })
}

/// `S³(S) = ∫ |θ|_S|_ε d area_ε`; the result does not depend on `ε`.
pub fn s3_area<S: SurfacePatch + ?Sized>(s: &S, eps: f64) -> Result<MeasureValue> {
    positive("epsilon", eps)?;
    let (value, err) = estimate_unit_square(s.quad_order(), |u, v| {
        local_densities(s, u, v, eps).map(|d| d.theta_norm * d.area)
    })?;
    Ok(MeasureValue {
        kind: MeasureKind::S3,
        value,
        estimated_quadrature_error: err,
    })
}

/// Axis-aligned coordinate rectangle: `normal_axis` is held at `level`, the
/// other two axes (in increasing order) span `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePatch {
    pub normal_axis: usize,
    pub level: f64,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub order: usize,
}

impl PlanePatch {
    pub fn new(normal_axis: usize, level: f64, lo: [f64; 2], hi: [f64; 2]) -> Self {
        assert!(normal_axis < 3);
        Self {
            normal_axis,
            level,
            lo,
            hi,
            order: DEFAULT_ORDER,
        }
    }

    fn axes(&self) -> (usize, usize) {
        match self.normal_axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }
}

impl SurfacePatch for PlanePatch {
    fn point(&self, u: f64, v: f64) -> GroupPoint {
        let (a, b) = self.axes();
        let mut c = [0.0; 3];
        c[self.normal_axis] = self.level;
        c[a] = self.lo[0] + u * (self.hi[0] - self.lo[0]);
        c[b] = self.lo[1] + v * (self.hi[1] - self.lo[1]);
        GroupPoint::from(c)
    }

    fn tangents(&self, _u: f64, _v: f64) -> ([f64; 3], [f64; 3]) {
        let (a, b) = self.axes();
        let mut ta = [0.0; 3];
        let mut tb = [0.0; 3];
        ta[a] = self.hi[0] - self.lo[0];
        tb[b] = self.hi[1] - self.lo[1];
        (ta, tb)
    }

    fn quad_order(&self) -> usize {
        self.order
    }
}

/// Coordinate sphere; `u` is the polar angle over `[0, π]`, `v` the azimuth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePatch {
    pub center: GroupPoint,
    pub radius: f64,
    pub order: usize,
}

impl SurfacePatch for SpherePatch {
    fn point(&self, u: f64, v: f64) -> GroupPoint {
        let (ph, ps) = (std::f64::consts::PI * u, 2.0 * std::f64::consts::PI * v);
        GroupPoint::new(
            self.center.x + self.radius * ph.sin() * ps.cos(),
            self.center.y + self.radius * ph.sin() * ps.sin(),
            self.center.z + self.radius * ph.cos(),
        )
    }

    fn tangents(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
        let pi = std::f64::consts::PI;
        let (ph, ps) = (pi * u, 2.0 * pi * v);
        let r = self.radius;
        (
            [
                r * pi * ph.cos() * ps.cos(),
                r * pi * ph.cos() * ps.sin(),
                -r * pi * ph.sin(),
            ],
            [
                -2.0 * pi * r * ph.sin() * ps.sin(),
                2.0 * pi * r * ph.sin() * ps.cos(),
                0.0,
            ],
        )
    }

    fn quad_order(&self) -> usize {
        self.order
    }
}

/// Patch given by a closure; tangents by finite differences.
pub struct FnPatch<F> {
    pub f: F,
    pub order: usize,
}

impl<F: Fn(f64, f64) -> GroupPoint + Sync> SurfacePatch for FnPatch<F> {
    fn point(&self, u: f64, v: f64) -> GroupPoint {
        (self.f)(u, v)
    }

    fn quad_order(&self) -> usize {
        self.order
    }
}

/// Image of a patch under left translation by `by`.
pub struct LeftTranslated<'a, S: ?Sized> {
    pub by: GroupPoint,
    pub inner: &'a S,
}

impl<S: SurfacePatch + ?Sized> SurfacePatch for LeftTranslated<'_, S> {
    fn point(&self, u: f64, v: f64) -> GroupPoint {
        group_mul(&self.by, &self.inner.point(u, v))
    }

    fn tangents(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
        let (a, b) = self.inner.tangents(u, v);
        (left_pushforward(&self.by, a), left_pushforward(&self.by, b))
    }

    fn quad_order(&self) -> usize {
        self.inner.quad_order()
    }
}

/// Image of a patch under `δ_t`.
pub struct Dilated<'a, S: ?Sized> {
    pub t: f64,
    pub inner: &'a S,
}

impl<S: SurfacePatch + ?Sized> SurfacePatch for Dilated<'_, S> {
    fn point(&self, u: f64, v: f64) -> GroupPoint {
        dilate_unchecked(self.t, &self.inner.point(u, v))
    }

    fn tangents(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
        let (a, b) = self.inner.tangents(u, v);
        let t = self.t;
        (
            [t * a[0], t * a[1], t * t * a[2]],
            [t * b[0], t * b[1], t * t * b[2]],
        )
    }

    fn quad_order(&self) -> usize {
        self.inner.quad_order()
    }
}

/// A smooth map `[0, 1] → H`.
pub trait CurveSegment: Sync {
    fn point(&self, s: f64) -> GroupPoint;
    fn velocity(&self, s: f64) -> [f64; 3];

    fn quad_order(&self) -> usize {
        DEFAULT_ORDER
    }
}

/// Coordinate-linear segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegment {
    pub from: GroupPoint,
    pub to: GroupPoint,
}

impl CurveSegment for LineSegment {
    fn point(&self, s: f64) -> GroupPoint {
        GroupPoint::new(
            self.from.x + s * (self.to.x - self.from.x),
            self.from.y + s * (self.to.y - self.from.y),
            self.from.z + s * (self.to.z - self.from.z),
        )
    }

    fn velocity(&self, _s: f64) -> [f64; 3] {
        [
            self.to.x - self.from.x,
            self.to.y - self.from.y,
            self.to.z - self.from.z,
        ]
    }
}

/// Curve given by a position closure and a velocity closure.
pub struct FnCurve<P, V> {
    pub point: P,
    pub velocity: V,
}

impl<P, V> CurveSegment for FnCurve<P, V>
where
    P: Fn(f64) -> GroupPoint + Sync,
    V: Fn(f64) -> [f64; 3] + Sync,
{
    fn point(&self, s: f64) -> GroupPoint {
        (self.point)(s)
    }

    fn velocity(&self, s: f64) -> [f64; 3] {
        (self.velocity)(s)
    }
}

/// Relative tolerance on `|θ(ċ)| / |ċ|` for a curve to count as horizontal.
pub const HORIZONTAL_TOL: f64 = 1e-9;

/// `S¹` (horizontal length) or `S²` (`∫|θ(ċ)|`) of a curve.
pub fn curve_measure<C: CurveSegment + ?Sized>(c: &C, kind: MeasureKind) -> Result<MeasureValue> {
    let order = c.quad_order();
    let sample = |s: f64| -> Result<(f64, f64)> {
        let v = c.velocity(s);
        let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(speed > 0.0) {
            return Err(Error::DegenerateVelocity { t: s });
        }
        Ok((theta(&c.point(s), v), speed))
    };
    match kind {
        MeasureKind::S1 => {
            let rule = crate::quadrature::GaussLegendre::new(2 * order);
            let mut worst: f64 = 0.0;
            for &s in &rule.nodes {
                let (th, speed) = sample(s)?;
                worst = worst.max(th.abs() / speed);
            }
            if worst > HORIZONTAL_TOL {
                return Err(Error::NotHorizontal {
                    max_violation: worst,
                });
            }
            let (value, err) = estimate_unit_interval(order, |s| {
                let v = c.velocity(s);
                Ok::<_, Error>((v[0] * v[0] + v[1] * v[1]).sqrt())
            })?;
            Ok(MeasureValue {
                kind,
                value,
                estimated_quadrature_error: err,
            })
        }
        MeasureKind::S2 => {
            let (value, err) =
                estimate_unit_interval(order, |s| sample(s).map(|(th, _)| th.abs()))?;
            Ok(MeasureValue {
                kind,
                value,
                estimated_quadrature_error: err,
            })
        }
        other => Err(Error::InvalidParameter {
            name: "kind",
            reason: format!("curve measures are S1 or S2, got {other:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_volumes() {
        let t: f64 = 1.7;
        let f = CoordBox::fundamental(t);
        assert_eq!(s4_volume(Region::Box(f)).value, t.powi(4));
        assert!((riem_volume(Region::Box(f), 0.3).unwrap().value - t.powi(4) / 0.3).abs() < 1e-12);
        let half = CoordBox::new([0.0; 3], [0.5, 1.0, 1.0]).unwrap();
        assert_eq!(s4_volume(Region::Box(half)).value, 0.5);
        assert_eq!(
            riem_volume(Region::Box(half), 1.0).unwrap().value,
            s4_volume(Region::Box(half)).value
        );
        assert!(riem_volume(Region::Box(half), 0.0).is_err());
    }

    #[test]
    fn horizontal_unit_square_area() {
        // plane z = 0, x ∈ [0, 1], y ∈ [0, 1]: ∫∫ sqrt(1 + x²) = (sqrt 2 + asinh 1)/2
        let p = PlanePatch::new(2, 0.0, [0.0, 0.0], [1.0, 1.0]);
        let want = (2f64.sqrt() + 1f64.asinh()) / 2.0;
        let a = riem_area(&p, 1.0).unwrap();
        assert!((a.value - want).abs() < 1e-12);
        assert!((want - 1.1478).abs() < 1e-4);
        // S³ on the same slice is ∫|x| = 1/2
        assert!((s3_area(&p, 1.0).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn x_fiber_densities() {
        for eps in [0.1, 0.5, 2.0] {
            let p = PlanePatch::new(0, 0.0, [0.0, 0.0], [1.0, 1.0]);
            assert!((riem_area(&p, eps).unwrap().value - 1.0 / eps).abs() < 1e-12);
            let q = PlanePatch::new(0, 0.7, [0.0, 0.0], [1.0, 1.0]);
            assert!((s3_area(&q, eps).unwrap().value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_density_examples() {
        // y = 0 plane spanned by ∂x, ∂z: dual norm ε
        let p = PlanePatch::new(1, 0.0, [0.0, 0.0], [1.0, 1.0]);
        for eps in [0.05, 1.0, 3.0] {
            assert!((theta_density(&p, eps, 0.3, 0.6).unwrap() - eps).abs() < 1e-12);
        }
        // the horizontal plane through the identity is tangent to ker θ there
        let h = PlanePatch::new(2, 0.0, [-1.0, -1.0], [1.0, 1.0]);
        assert!(theta_density(&h, 1.0, 0.5, 0.5).unwrap().abs() < 1e-15);
    }

    #[test]
    fn degenerate_patch_is_rejected() {
        let p = PlanePatch::new(0, 0.0, [0.0, 0.0], [0.0, 1.0]);
        assert!(matches!(
            riem_area(&p, 1.0),
            Err(Error::DegenerateTangent { .. })
        ));
    }

    #[test]
    fn curve_examples() {
        let seg = LineSegment {
            from: GroupPoint::IDENTITY,
            to: GroupPoint::new(1.0, 0.0, 0.0),
        };
        assert!((curve_measure(&seg, MeasureKind::S1).unwrap().value - 1.0).abs() < 1e-14);
        let up = LineSegment {
            from: GroupPoint::IDENTITY,
            to: GroupPoint::new(0.0, 0.0, 2.5),
        };
        assert!((curve_measure(&up, MeasureKind::S2).unwrap().value - 2.5).abs() < 1e-14);
        let circle = FnCurve {
            point: |s: f64| {
                let a = 2.0 * std::f64::consts::PI * s;
                GroupPoint::new(a.cos() - 1.0, a.sin(), 0.0)
            },
            velocity: |s: f64| {
                let a = 2.0 * std::f64::consts::PI * s;
                let w = 2.0 * std::f64::consts::PI;
                [-w * a.sin(), w * a.cos(), 0.0]
            },
        };
        assert!(matches!(
            curve_measure(&circle, MeasureKind::S1),
            Err(Error::NotHorizontal { .. })
        ));
        assert!(curve_measure(&seg, MeasureKind::S3).is_err());
    }

    #[test]
    fn measure_value_json() {
        let m = MeasureValue::exact(MeasureKind::RiemArea, 2.0);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"kind":"riem_area","value":2.0,"err":0.0}"#
        );
    }
}

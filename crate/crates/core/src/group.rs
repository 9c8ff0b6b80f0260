//! Heisenberg group arithmetic in the unipotent-matrix coordinates
//!
//! ```text
//!     | 1  x  z |
//!     | 0  1  y |
//!     | 0  0  1 |
//! ```
//!
//! The product is `(x, y, z)·(x', y', z') = (x + x', y + y', z + z' + x y')`.
//! The left-invariant coframe is `dx, dy, θ = dz − x dy` and the metric
//! `g_ε = dx² + dy² + θ²/ε²`.

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// A point of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct GroupPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for GroupPoint {
    fn from(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }
}

impl From<GroupPoint> for [f64; 3] {
    fn from(p: GroupPoint) -> Self {
        p.coords()
    }
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Like [`GroupPoint::new`] but rejects NaN and infinities.
    pub fn checked(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Self { x, y, z })
        } else {
            Err(Error::NonFinite("group point"))
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// The 3×3 unipotent matrix of this point, row-major.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [[1.0, self.x, self.z], [0.0, 1.0, self.y], [0.0, 0.0, 1.0]]
    }

    pub fn mul(&self, q: &GroupPoint) -> GroupPoint {
        group_mul(self, q)
    }

    pub fn inv(&self) -> GroupPoint {
        group_inv(self)
    }

    pub fn max_abs_diff(&self, other: &GroupPoint) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

pub fn group_mul(p: &GroupPoint, q: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: p.x + q.x,
        y: p.y + q.y,
        z: p.z + q.z + p.x * q.y,
    }
}

pub fn group_inv(p: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: -p.x,
        y: -p.y,
        z: -p.z + p.x * p.y,
    }
}

/// The automorphism `δ_t(x, y, z) = (t x, t y, t² z)`.
pub fn dilate(t: f64, p: &GroupPoint) -> Result<GroupPoint> {
    positive("t", t)?;
    Ok(dilate_unchecked(t, p))
}

pub(crate) fn dilate_unchecked(t: f64, p: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: t * p.x,
        y: t * p.y,
        z: t * t * p.z,
    }
}

/// Pushforward of a tangent vector at any base point under left
/// translation by `g`.
pub fn left_pushforward(g: &GroupPoint, v: [f64; 3]) -> [f64; 3] {
    [v[0], v[1], v[2] + g.x * v[1]]
}

/// Parameters selecting the metric `g_ε` and the lattice `Γ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub epsilon: f64,
    pub t: f64,
}

impl MetricParams {
    pub fn new(epsilon: f64, t: f64) -> Result<Self> {
        positive("epsilon", epsilon)?;
        positive("t", t)?;
        Ok(Self { epsilon, t })
    }

    /// Riemannian volume of the nilmanifold `N_{t,ε}`.
    pub fn quotient_volume(&self) -> f64 {
        self.t.powi(4) / self.epsilon
    }
}

/// Coefficient rows of `dx`, `dy`, `θ` at a base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotangentFrame {
    pub dx: [f64; 3],
    pub dy: [f64; 3],
    pub theta: [f64; 3],
}

impl CotangentFrame {
    pub fn at(p: &GroupPoint) -> Self {
        Self {
            dx: [1.0, 0.0, 0.0],
            dy: [0.0, 1.0, 0.0],
            theta: [0.0, -p.x, 1.0],
        }
    }

    pub fn theta_of(&self, v: [f64; 3]) -> f64 {
        dot(&self.theta, &v)
    }
}

/// `θ_p(v) = v_z − x v_y`.
pub fn theta(p: &GroupPoint, v: [f64; 3]) -> f64 {
    v[2] - p.x * v[1]
}

/// Coordinate matrix of `g_ε` at `p`, rows and columns ordered `(x, y, z)`.
pub fn metric_tensor_at(p: &GroupPoint, eps: f64) -> Result<[[f64; 3]; 3]> {
    positive("epsilon", eps)?;
    Ok(metric_tensor_unchecked(p.x, eps))
}

pub(crate) fn metric_tensor_unchecked(x: f64, eps: f64) -> [[f64; 3]; 3] {
    let e2 = eps * eps;
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0 + x * x / e2, -x / e2],
        [0.0, -x / e2, 1.0 / e2],
    ]
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn quad_form(g: &[[f64; 3]; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i] * g[i][j] * b[j];
        }
    }
    s
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Element `δ_t(j, k, m)` of `Γ_t`, stored by its integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeElement {
    pub j: i64,
    pub k: i64,
    pub m: i64,
}

impl LatticeElement {
    pub const IDENTITY: LatticeElement = LatticeElement { j: 0, k: 0, m: 0 };

    pub const fn new(j: i64, k: i64, m: i64) -> Self {
        Self { j, k, m }
    }

    /// Group law of `H_Z`; `δ_t` is an automorphism so this is also the law of `Γ_t`.
    pub fn compose(&self, other: &LatticeElement) -> LatticeElement {
        LatticeElement {
            j: self.j + other.j,
            k: self.k + other.k,
            m: self.m + other.m + self.j * other.k,
        }
    }

    pub fn inverse(&self) -> LatticeElement {
        LatticeElement {
            j: -self.j,
            k: -self.k,
            m: -self.m + self.j * self.k,
        }
    }

    pub fn to_point(&self, t: f64) -> GroupPoint {
        GroupPoint::new(t * self.j as f64, t * self.k as f64, t * t * self.m as f64)
    }

    /// Left action `γ·p`.
    pub fn act(&self, t: f64, p: &GroupPoint) -> GroupPoint {
        group_mul(&self.to_point(t), p)
    }
}

/// `n` such that `value + n·period` lies in `[0, period)`, robust to rounding.
fn wrap_shift(value: f64, period: f64) -> i64 {
    let mut n = -(value / period).floor() as i64;
    for _ in 0..4 {
        let r = value + n as f64 * period;
        if r < 0.0 {
            n += 1;
        } else if r >= period {
            n -= 1;
        } else {
            break;
        }
    }
    n
}

/// Canonical representative of `Γ_t·p` in the box
/// `[0, t) × [0, t) × [0, t²)` together with the `γ` such that `γ·p = q`.
///
/// Reduction order is x, then y, then z. Left multiplication by `(a, b, c)`
/// sends `z` to `z + c + a y`, so reducing x first and z last terminates.
pub fn canonical_rep(p: &GroupPoint, t: f64) -> Result<(GroupPoint, LatticeElement)> {
    positive("t", t)?;
    if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
        return Err(Error::NonFinite("canonical_rep input"));
    }
    let j = wrap_shift(p.x, t);
    let g1 = LatticeElement::new(j, 0, 0);
    let q1 = g1.act(t, p);
    let k = wrap_shift(q1.y, t);
    let g2 = LatticeElement::new(0, k, 0);
    let q2 = g2.act(t, &q1);
    let m = wrap_shift(q2.z, t * t);
    let g3 = LatticeElement::new(0, 0, m);
    let mut q = g3.act(t, &q2);
    // Guard the half-open box against last-bit rounding.
    q.x = q.x.clamp(0.0, t * (1.0 - f64::EPSILON));
    q.y = q.y.clamp(0.0, t * (1.0 - f64::EPSILON));
    q.z = q.z.clamp(0.0, t * t * (1.0 - f64::EPSILON));
    Ok((q, g3.compose(&g2).compose(&g1)))
}

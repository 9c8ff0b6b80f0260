//! Budget bookkeeping for a manifold whose isoperimetric profile jumps at
//! `v = 1`: a disjoint union of shrinking Riemannian nilmanifold beads,
//! then the same beads joined by thin tubes into an infinite necklace.
//!
//! Tubes and the balls removed at the necks are represented only by their
//! volume and area budgets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{lb_riem_nilmanifold, CertificateConfig};

/// `(36π)^{−1/2}`: volume of a Euclidean ball per `area^{3/2}`.
pub const BALL_KAPPA: f64 = 0.09403159725795938;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecklaceConfig {
    pub n_max: usize,
    pub c: f64,
    /// Tube volumes `w_1 … w_{n_max}`.
    pub w: Vec<f64>,
    /// Neck areas `a_1 … a_{n_max + 1}`; the last entry bounds the far neck
    /// of bead `n_max`.
    pub a: Vec<f64>,
}

pub fn tau(n: usize) -> f64 {
    1.0 / n as f64
}

pub fn eps(n: usize) -> f64 {
    tau(n).powi(3)
}

pub fn t(n: usize) -> f64 {
    let s = tau(n);
    s.powf(0.75) * (1.0 + s).powf(0.25)
}

/// Volume `t_n⁴ / ε_n` of bead `n`.
pub fn bead_volume(n: usize) -> f64 {
    t(n).powi(4) / eps(n)
}

pub fn default_w(n: usize) -> f64 {
    2f64.powi(-(n as i32) - 2)
}

pub fn default_a(c: f64) -> impl Fn(usize) -> f64 {
    move |n| c / 32.0 * 2f64.powi(-(n as i32))
}

/// Build and validate a configuration. Budgets: `Σ w_n < 1/2` and
/// `Σ a_n < c/16` over the stored terms.
pub fn build_config<W, A>(
    n_max: usize,
    w_rule: W,
    a_rule: A,
    cfg: &CertificateConfig,
) -> Result<NecklaceConfig>
where
    W: Fn(usize) -> f64,
    A: Fn(usize) -> f64,
{
    if n_max < 2 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: format!("need at least 2, got {n_max}"),
        });
    }
    let w: Vec<f64> = (1..=n_max).map(&w_rule).collect();
    let a: Vec<f64> = (1..=n_max + 1).map(&a_rule).collect();
    if let Some((i, x)) = w
        .iter()
        .chain(&a)
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x > 0.0))
    {
        return Err(Error::InvalidParameter {
            name: "rules",
            reason: format!("term {i} is {x}; tube volumes and neck areas must be positive"),
        });
    }
    let sw: f64 = w.iter().sum();
    if !(sw < 0.5) {
        return Err(Error::Budget {
            inequality: "tube volume budget: sum w_n < 1/2",
            detail: format!("sum = {sw}"),
        });
    }
    let sa: f64 = a.iter().sum();
    if !(sa < cfg.c / 16.0) {
        return Err(Error::Budget {
            inequality: "neck area budget: sum a_n < c/16",
            detail: format!("sum = {sa}, c/16 = {}", cfg.c / 16.0),
        });
    }
    for n in 1..=n_max {
        let err = (bead_volume(n) - (1.0 + tau(n))).abs();
        if err > 1e-12 * (1.0 + tau(n)) {
            return Err(Error::Budget {
                inequality: "t_n^4 / eps_n = 1 + tau_n",
                detail: format!("n = {n}: mismatch {err:e}"),
            });
        }
    }
    Ok(NecklaceConfig {
        n_max,
        c: cfg.c,
        w,
        a,
    })
}

impl NecklaceConfig {
    pub fn default_for(n_max: usize, cfg: &CertificateConfig) -> Result<Self> {
        build_config(n_max, default_w, default_a(cfg.c), cfg)
    }

    fn certificate(&self) -> CertificateConfig {
        // `c` was validated when the configuration was built; the bead bounds
        // only use `c`.
        CertificateConfig {
            c: self.c,
            eta: self.c * 2f64.powf(-0.75),
        }
    }
}

/// Uniform bound `c/8` on the disjoint union for volumes in `[1/16, 1]`.
/// A part of volume at least half its bead gives at least `c` through the
/// complement branch; otherwise concavity gives `Σ c v_n^{3/4} ≥ c v^{3/4}
/// ≥ c (1/16)^{3/4}`.
pub fn disjoint_lower_bound(v: f64, cfg: &NecklaceConfig) -> Result<f64> {
    if !(1.0 / 16.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter {
            name: "v",
            reason: format!("disjoint bound holds on [1/16, 1], got {v}"),
        });
    }
    Ok(cfg.c / 8.0)
}

/// `a^α + b^α ≥ (a + b)^α` at every sample.
pub fn concavity_check(alpha: f64, samples: &[(f64, f64)]) -> Result<bool> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must lie in [0, 1], got {alpha}"),
        });
    }
    for &(a, b) in samples {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("need a, b >= 0, got ({a}, {b})"),
            });
        }
    }
    Ok(samples.iter().all(|&(a, b)| {
        let lhs = a.powf(alpha) + b.powf(alpha);
        let rhs = (a + b).powf(alpha);
        lhs >= rhs * (1.0 - 1e-12)
    }))
}

/// Volumes `v_n` of the parts of a domain in the beads `n = 1, 2, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeadPartition {
    parts: Vec<f64>,
}

impl BeadPartition {
    pub fn new(parts: Vec<f64>) -> Result<Self> {
        if let Some(x) = parts.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "partition",
                reason: format!("bead volumes must be finite and >= 0, got {x}"),
            });
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[f64] {
        &self.parts
    }

    pub fn total(&self) -> f64 {
        self.parts.iter().sum()
    }
}

/// Sum over beads of the Riemannian nilmanifold bound, with the complement
/// branch; bead `n` has `t = t_n`, `ε = ε_n`.
pub fn partition_lower_bound(p: &BeadPartition, cfg: &NecklaceConfig) -> Result<f64> {
    if p.parts().len() > cfg.n_max {
        return Err(Error::InvalidParameter {
            name: "partition",
            reason: format!(
                "{} parts but only {} beads configured",
                p.parts().len(),
                cfg.n_max
            ),
        });
    }
    let cert = cfg.certificate();
    p.parts()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let n = i + 1;
            if v > bead_volume(n) * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter {
                    name: "partition",
                    reason: format!("v_{n} = {v} exceeds bead volume {}", bead_volume(n)),
                });
            }
            lb_riem_nilmanifold(v.min(bead_volume(n)), t(n), eps(n), &cert)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeckPoint {
    pub n: usize,
    /// `1 + α_n`, volume of bead `n` minus its two neck balls.
    pub volume: f64,
    /// `a_n + a_{n+1}`, area of the two neck spheres bounding it.
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscontinuityReport {
    pub config: NecklaceConfig,
    pub tau: Vec<f64>,
    pub eps: Vec<f64>,
    pub t: Vec<f64>,
    /// Illustrative neck-ball volumes `κ (a_n / 2)^{3/2}`.
    pub removed_ball_volumes: Vec<f64>,
    pub points: Vec<NeckPoint>,
    /// `c/16`: the disjoint bound `c/8` minus the full neck budget `c/16`.
    pub lower_bound_at_one: f64,
    /// `c/8 − Σ a_n` for the configured necks; at least `c/16`.
    pub lower_bound_at_one_actual: f64,
    pub sum_a: f64,
    /// Upper bound at the largest `n`; the sequence decreases, so this is
    /// the finite-range estimate of its tail.
    pub tail_upper: f64,
    pub gap: bool,
}

pub fn assemble_necklace(cfg: &NecklaceConfig) -> Result<DiscontinuityReport> {
    let n_max = cfg.n_max;
    if cfg.w.len() != n_max || cfg.a.len() != n_max + 1 {
        return Err(Error::InvalidParameter {
            name: "necklace config",
            reason: format!("expected {n_max} tube and {} neck terms", n_max + 1),
        });
    }
    let balls: Vec<f64> = cfg
        .a
        .iter()
        .map(|a| BALL_KAPPA * (0.5 * a).powf(1.5))
        .collect();
    let points: Vec<NeckPoint> = (1..=n_max)
        .map(|n| {
            let prev = if n == 1 { 0.0 } else { balls[n - 2] };
            NeckPoint {
                n,
                volume: 1.0 + tau(n) - prev - balls[n - 1],
                upper: cfg.a[n - 1] + cfg.a[n],
            }
        })
        .collect();
    let sum_a: f64 = cfg.a.iter().sum();
    let lower = cfg.c / 16.0;
    let tail_upper = points.last().map(|p| p.upper).unwrap_or(f64::INFINITY);
    Ok(DiscontinuityReport {
        config: cfg.clone(),
        tau: (1..=n_max).map(tau).collect(),
        eps: (1..=n_max).map(eps).collect(),
        t: (1..=n_max).map(t).collect(),
        removed_ball_volumes: balls,
        points,
        lower_bound_at_one: lower,
        lower_bound_at_one_actual: cfg.c / 8.0 - sum_a,
        sum_a,
        tail_upper,
        gap: lower > tail_upper,
    })
}

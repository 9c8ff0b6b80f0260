//! Profile brackets: upper curves from candidate domains and the lower-bound
//! certificate functions, each tagged with its direction and space.
//!
//! The profile is the infimum of boundary measures over domains of a given
//! volume, so candidates give upper bounds and certificates lower bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutting::SMALL_VOLUME;
use crate::domains::{boundary_measure, make_candidate, AreaKind, CandidateFamily};
use crate::error::{positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceTag {
    #[serde(rename = "H_g_eps")]
    HGEps,
    #[serde(rename = "N1_cc")]
    N1Cc,
    #[serde(rename = "Nt_cc")]
    NtCc,
    #[serde(rename = "Nt_eps")]
    NtEps,
}

impl SpaceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SpaceTag::HGEps => "H_g_eps",
            SpaceTag::N1Cc => "N1_cc",
            SpaceTag::NtCc => "Nt_cc",
            SpaceTag::NtEps => "Nt_eps",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub v: f64,
    pub value: f64,
    pub provenance: String,
}

/// Sampled bound on a profile. Volumes are strictly increasing and values
/// non-negative; the direction is fixed at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    samples: Vec<Sample>,
    direction: Direction,
    space: SpaceTag,
    provenance: String,
}

impl ProfileCurve {
    pub fn new(
        samples: Vec<Sample>,
        direction: Direction,
        space: SpaceTag,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if let Some(w) = samples.windows(2).find(|w| !(w[1].v > w[0].v)) {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!(
                    "volumes must increase strictly, got {} then {}",
                    w[0].v, w[1].v
                ),
            });
        }
        if let Some(s) = samples
            .iter()
            .find(|s| !(s.value >= 0.0) || !s.v.is_finite() || !s.value.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("need finite v and value >= 0, got ({}, {})", s.v, s.value),
            });
        }
        Ok(Self {
            samples,
            direction,
            space,
            provenance: provenance.into(),
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Value at exactly `v`, if sampled.
    pub fn value_at(&self, v: f64) -> Option<f64> {
        self.samples.iter().find(|s| s.v == v).map(|s| s.value)
    }
}

/// Constants of the nilmanifold certificates. `c` is not known effectively,
/// so it is configuration; `η` bounds the profile on the middle volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateConfig {
    pub c: f64,
    pub eta: f64,
}

pub const DEFAULT_C: f64 = 0.01;

impl Default for CertificateConfig {
    fn default() -> Self {
        Self {
            c: DEFAULT_C,
            eta: DEFAULT_C * 2f64.powf(-0.75),
        }
    }
}

impl CertificateConfig {
    /// Enforces `c ≤ min{1/2, 2^{3/4} η}` up to a relative `1e-12`.
    pub fn new(c: f64, eta: f64) -> Result<Self> {
        positive("c", c)?;
        positive("eta", eta)?;
        let cap = 0.5f64.min(2f64.powf(0.75) * eta);
        if c > cap * (1.0 + 1e-12) {
            return Err(Error::Budget {
                inequality: "c <= min(1/2, 2^(3/4) eta)",
                detail: format!("c = {c}, eta = {eta}, cap = {cap}"),
            });
        }
        Ok(Self { c, eta })
    }

    /// Default `η` for a given `c`: the smallest admissible one.
    pub fn with_c(c: f64) -> Result<Self> {
        Self::new(c, c * 2f64.powf(-0.75))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and >= 0, got {v}"),
        })
    }
}

/// Isoperimetric lower bound in `(H, d_c)`: `v^{3/4}`.
pub fn lb_heisenberg(v: f64) -> Result<f64> {
    non_negative("v", v)?;
    Ok(v.powf(0.75))
}

/// Lower bound in `(H, g_ε)`: `v^{3/4} / ε^{1/4}`.
pub fn lb_heis_riemannian(v: f64, eps: f64) -> Result<f64> {
    non_negative("v", v)?;
    positive("epsilon", eps)?;
    Ok(v.powf(0.75) / eps.powf(0.25))
}

/// Small-volume bound in `(N₁, d_c)`: `½ v^{3/4}` for `v ≤ 12⁻⁴`.
pub fn lb_cc_smallvol(v: f64) -> Result<f64> {
    non_negative("v", v)?;
    if v > SMALL_VOLUME * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter {
            name: "v",
            reason: format!("small-volume bound needs v <= 12^-4 = {SMALL_VOLUME:.6e}, got {v}"),
        });
    }
    Ok(0.5 * v.powf(0.75))
}

fn in_closed(name: &'static str, v: f64, total: f64) -> Result<()> {
    if v.is_finite() && (0.0..=total).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must lie in [0, {total}], got {v}"),
        })
    }
}

/// `c · min{v, 1 − v}^{3/4}` on `N₁`; zero at the endpoints.
pub fn lb_nilmanifold_cc(v: f64, cfg: &CertificateConfig) -> Result<f64> {
    in_closed("v", v, 1.0)?;
    Ok(cfg.c * v.min(1.0 - v).max(0.0).powf(0.75))
}

/// `(c / ε^{1/4}) · min{v, t⁴/ε − v}^{3/4}` on `(N_t, g_ε)`; zero at the
/// endpoints of `[0, t⁴/ε]`.
pub fn lb_riem_nilmanifold(v: f64, t: f64, eps: f64, cfg: &CertificateConfig) -> Result<f64> {
    positive("t", t)?;
    positive("epsilon", eps)?;
    let total = t.powi(4) / eps;
    in_closed("v", v, total * (1.0 + 1e-12))?;
    Ok(cfg.c / eps.powf(0.25) * v.min(total - v).max(0.0).powf(0.75))
}

/// Volume, best `(value, family id)` if any family reaches it, notes.
type EnvelopePoint = (f64, Option<(f64, &'static str)>, Vec<String>);

/// Upper envelope over candidate families: for each volume, the least
/// boundary measure among the families that reach it. Volumes no family
/// reaches are dropped and reported in the returned warnings.
pub fn upper_profile(
    space: SpaceTag,
    families: &[CandidateFamily],
    volumes: &[f64],
    area: AreaKind,
) -> Result<(ProfileCurve, Vec<String>)> {
    let mut vs: Vec<f64> = volumes.to_vec();
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    let results: Vec<EnvelopePoint> = vs
        .par_iter()
        .map(|&v| {
            let mut best: Option<(f64, &'static str)> = None;
            let mut notes = Vec::new();
            for f in families {
                match make_candidate(f, v).and_then(|d| boundary_measure(&d, area)) {
                    Ok(m) => {
                        if best.is_none_or(|b| m.value < b.0) {
                            best = Some((m.value, f.id()));
                        }
                    }
                    Err(e) => notes.push(format!("v = {v}: family {} skipped: {e}", f.id())),
                }
            }
            (v, best, notes)
        })
        .collect();
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for (v, best, notes) in results {
        match best {
            Some((value, id)) => samples.push(Sample {
                v,
                value,
                provenance: id.into(),
            }),
            None => {
                warnings.extend(notes);
                warnings.push(format!(
                    "v = {v}: no family reached this volume; sample omitted"
                ));
            }
        }
    }
    let ids: Vec<&str> = families.iter().map(|f| f.id()).collect();
    Ok((
        ProfileCurve::new(samples, Direction::Upper, space, ids.join("+"))?,
        warnings,
    ))
}

/// Lower curve from a certificate function; volumes where it is undefined
/// are skipped.
pub fn lower_profile<F>(
    space: SpaceTag,
    certificate: &str,
    volumes: &[f64],
    f: F,
) -> Result<ProfileCurve>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut vs: Vec<f64> = volumes.to_vec();
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    let samples = vs
        .into_iter()
        .filter_map(|v| {
            f(v).ok().map(|value| Sample {
                v,
                value,
                provenance: certificate.into(),
            })
        })
        .collect();
    ProfileCurve::new(samples, Direction::Lower, space, certificate)
}

/// Least-squares slope of `log value` against `log v` over `window`.
pub fn asymptotic_slope(curve: &ProfileCurve, window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .samples()
        .iter()
        .filter(|s| s.v >= window.0 && s.v <= window.1 && s.v > 0.0 && s.value > 0.0)
        .map(|s| (s.v.ln(), s.value.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: format!(
                "need at least 2 positive samples in [{}, {}]",
                window.0, window.1
            ),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "all samples share one volume".into(),
        });
    }
    Ok(sxy / sxx)
}

/// Volumes where a lower curve exceeds an upper curve by more than `tol`.
pub fn bracket_violations(
    lower: &ProfileCurve,
    upper: &ProfileCurve,
    tol: f64,
) -> Vec<(f64, f64, f64)> {
    lower
        .samples()
        .iter()
        .filter_map(|l| {
            upper
                .value_at(l.v)
                .filter(|&u| l.value > u + tol)
                .map(|u| (l.v, l.value, u))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Ambient;

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lb_heisenberg(0.0).unwrap(), 0.0);
        assert!((lb_heisenberg(16.0).unwrap() - 8.0).abs() < 1e-12);
        assert!((lb_heis_riemannian(1.0, 1.0 / 16.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((lb_cc_smallvol(SMALL_VOLUME).unwrap() - 1.0 / 3456.0).abs() < 1e-15);
        assert!((lb_cc_smallvol(1e-6).unwrap() - 1.5811388e-5).abs() < 1e-11);
        assert!(lb_cc_smallvol(1e-3).is_err());
        assert!(lb_heisenberg(-1.0).is_err());
    }

    #[test]
    fn nilmanifold_bounds() {
        let cfg = CertificateConfig::default();
        let half = lb_nilmanifold_cc(0.5, &cfg).unwrap();
        assert!((half - cfg.c * 0.5f64.powf(0.75)).abs() < 1e-15);
        assert!(
            (lb_nilmanifold_cc(0.3, &cfg).unwrap() - lb_nilmanifold_cc(0.7, &cfg).unwrap()).abs()
                < 1e-15
        );
        let r = lb_riem_nilmanifold(0.5, 1.0, 1.0, &cfg).unwrap();
        assert!((r - half).abs() < 1e-15);
        assert!(lb_riem_nilmanifold(3.0, 1.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn config_invariant() {
        assert!(CertificateConfig::new(0.6, 1.0).is_err());
        assert!(CertificateConfig::new(0.1, 0.01).is_err());
        assert!(CertificateConfig::new(0.1, 0.1 * 2f64.powf(-0.75)).is_ok());
        assert!(CertificateConfig::with_c(0.5).is_ok());
        assert!(CertificateConfig::new(0.0, 1.0).is_err());
    }

    #[test]
    fn curve_invariants() {
        let s = |v: f64, value: f64| Sample {
            v,
            value,
            provenance: "x".into(),
        };
        assert!(ProfileCurve::new(
            vec![s(1.0, 1.0), s(1.0, 2.0)],
            Direction::Upper,
            SpaceTag::N1Cc,
            "x"
        )
        .is_err());
        assert!(
            ProfileCurve::new(vec![s(1.0, -1.0)], Direction::Upper, SpaceTag::N1Cc, "x").is_err()
        );
        let pow: Vec<Sample> = (0..10)
            .map(|i| 10f64.powi(-i))
            .rev()
            .map(|v| s(v, v.powf(0.75)))
            .collect();
        let c = ProfileCurve::new(pow, Direction::Lower, SpaceTag::HGEps, "x").unwrap();
        assert!((asymptotic_slope(&c, (0.0, 1.0)).unwrap() - 0.75).abs() < 1e-12);
        let flat: Vec<Sample> = (1..5).map(|i| s(i as f64, 2.0)).collect();
        let c = ProfileCurve::new(flat, Direction::Lower, SpaceTag::HGEps, "x").unwrap();
        assert!(asymptotic_slope(&c, (0.0, 10.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn half_box_upper_value() {
        let fam = [CandidateFamily::CoordinateBox {
            ambient: Ambient::Quotient { t: 1.0 },
            dims: [16; 3],
        }];
        let (curve, warnings) =
            upper_profile(SpaceTag::N1Cc, &fam, &[0.5, 2.0], AreaKind::S3).unwrap();
        assert_eq!(curve.samples().len(), 1);
        assert_eq!(warnings.len(), 2);
        assert!((curve.samples()[0].value - 2.0).abs() < 1e-12);
        let cfg = CertificateConfig::default();
        let lower = lower_profile(SpaceTag::N1Cc, "nilmanifold_cc", &[0.5], |v| {
            lb_nilmanifold_cc(v, &cfg)
        })
        .unwrap();
        assert!(bracket_violations(&lower, &curve, 1e-12).is_empty());
    }
}

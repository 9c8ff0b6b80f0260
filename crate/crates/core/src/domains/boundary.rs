//! Exact boundary measures of voxel domains.
//!
//! Every face plane of the grid is classified as open (both sides count
//! separately), glued plainly (a face is exposed when the occupancy differs
//! across it) or glued through the lattice shear on the x-wall. Face
//! densities of `S³` and of the `g_ε` area are integrated in closed form.

use rayon::prelude::*;

use super::{Ambient, VoxelDomain};
use crate::error::{positive, Result};
use crate::measures::{MeasureKind, MeasureValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaKind {
    S3,
    RiemArea(f64),
}

impl AreaKind {
    fn validate(self) -> Result<()> {
        match self {
            AreaKind::S3 => Ok(()),
            AreaKind::RiemArea(eps) => positive("epsilon", eps),
        }
    }

    pub fn measure_kind(self) -> MeasureKind {
        match self {
            AreaKind::S3 => MeasureKind::S3,
            AreaKind::RiemArea(_) => MeasureKind::RiemArea,
        }
    }

    /// Density of x- and y-faces per unit coordinate area.
    fn side_density(self) -> f64 {
        match self {
            AreaKind::S3 => 1.0,
            AreaKind::RiemArea(eps) => 1.0 / eps,
        }
    }

    /// Integral over `[x0, x1]` of the z-face density.
    pub(crate) fn z_face_integral(self, x0: f64, x1: f64) -> f64 {
        match self {
            AreaKind::S3 => 0.5 * (x1 * x1.abs() - x0 * x0.abs()),
            AreaKind::RiemArea(eps) => {
                let f = |x: f64| {
                    (x * (x * x + eps * eps).sqrt() + eps * eps * (x / eps).asinh()) / (2.0 * eps)
                };
                f(x1) - f(x0)
            }
        }
    }
}

/// How the two sides of a face plane are related.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gluing {
    Open,
    Plain,
    /// x-wall of a lattice quotient with scale `t`.
    Sheared(f64),
}

/// Face measures on one grid plane: `left` and `right` are the occupied
/// faces seen from either side, `both` the part where both sides are
/// occupied after gluing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneStats {
    pub gluing: Gluing,
    pub left: f64,
    pub right: f64,
    pub both: f64,
}

impl PlaneStats {
    pub fn exposed(&self) -> f64 {
        match self.gluing {
            Gluing::Open => self.left + self.right,
            _ => (self.left + self.right - 2.0 * self.both).max(0.0),
        }
    }
}

pub(crate) fn plane_gluing(d: &VoxelDomain, axis: usize, p: usize) -> Gluing {
    match *d.ambient() {
        Ambient::HBox { .. } => {
            if p == 0 {
                Gluing::Open
            } else {
                Gluing::Plain
            }
        }
        Ambient::Quotient { t } => {
            if p == 0 && axis == 0 {
                Gluing::Sheared(t)
            } else {
                Gluing::Plain
            }
        }
        Ambient::ZSlab { cut } => {
            if axis < 2 && p == cut[axis] {
                Gluing::Open
            } else if p == 0 && axis == 0 {
                Gluing::Sheared(1.0)
            } else {
                Gluing::Plain
            }
        }
    }
}

/// Merge occupied cells `k` (with `occupied(k)`) of a column into maximal
/// coordinate intervals starting at `z0` with spacing `dz`.
pub(crate) fn merge_runs<F: Fn(usize) -> bool>(
    n: usize,
    z0: f64,
    dz: f64,
    occupied: F,
) -> Vec<(f64, f64)> {
    let mut runs = Vec::new();
    let mut start = None;
    for k in 0..=n {
        let on = k < n && occupied(k);
        match (on, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                runs.push((z0 + s as f64 * dz, z0 + k as f64 * dz));
                start = None;
            }
            _ => {}
        }
    }
    runs
}

/// `∫_{d0}^{d1} |L ∩ (R + δ mod period)| dδ` for unions of disjoint
/// intervals inside `[0, period]`. The integrand is piecewise linear in `δ`
/// so the trapezoid rule between its kinks is exact.
pub(crate) fn sheared_overlap_integral(
    l: &[(f64, f64)],
    r: &[(f64, f64)],
    period: f64,
    d0: f64,
    d1: f64,
) -> f64 {
    let mut total = 0.0;
    let mut pts = Vec::with_capacity(6);
    for &(a0, a1) in l {
        for &(rb0, rb1) in r {
            for m in -1..=1 {
                let b0 = rb0 + m as f64 * period;
                let b1 = rb1 + m as f64 * period;
                if b0 + d0 >= a1 || b1 + d1 <= a0 {
                    continue;
                }
                let f = |d: f64| (a1.min(b1 + d) - a0.max(b0 + d)).max(0.0);
                pts.clear();
                pts.extend([d0, d1]);
                for k in [a0 - b1, a0 - b0, a1 - b1, a1 - b0] {
                    if k > d0 && k < d1 {
                        pts.push(k);
                    }
                }
                pts.sort_by(f64::total_cmp);
                total += pts
                    .windows(2)
                    .map(|w| 0.5 * (w[1] - w[0]) * (f(w[0]) + f(w[1])))
                    .sum::<f64>();
            }
        }
    }
    total
}

/// Face statistics on the plane `p` (`0 ≤ p < dims[axis]`) orthogonal to
/// `axis`. Plane 0 is the wall; its left side is the last cell layer.
pub fn plane_stats(d: &VoxelDomain, axis: usize, p: usize, kind: AreaKind) -> Result<PlaneStats> {
    kind.validate()?;
    Ok(plane_stats_unchecked(d, axis, p, kind))
}

pub(crate) fn plane_stats_unchecked(
    d: &VoxelDomain,
    axis: usize,
    p: usize,
    kind: AreaKind,
) -> PlaneStats {
    let dims = d.dims();
    let h = d.spacing();
    let n = dims[axis];
    let lp = (p + n - 1) % n;
    let gluing = plane_gluing(d, axis, p);
    let (mut left, mut right, mut both) = (0.0, 0.0, 0.0);

    match (axis, gluing) {
        (0, Gluing::Sheared(t)) => {
            let rho = kind.side_density();
            let z0 = d.bounds().lo[2];
            let y0 = d.bounds().lo[1];
            let period = d.bounds().extent(2);
            for j in 0..dims[1] {
                let lr = merge_runs(dims[2], z0, h[2], |k| d.get(lp, j, k));
                let rr = merge_runs(dims[2], z0, h[2], |k| d.get(p, j, k));
                let ll: f64 = lr.iter().map(|r| r.1 - r.0).sum();
                let rl: f64 = rr.iter().map(|r| r.1 - r.0).sum();
                left += rho * h[1] * ll;
                right += rho * h[1] * rl;
                let ya = y0 + j as f64 * h[1];
                let i = sheared_overlap_integral(&lr, &rr, period, t * ya, t * (ya + h[1]));
                both += rho * i / t;
            }
        }
        (0, _) => {
            let w = kind.side_density() * h[1] * h[2];
            for k in 0..dims[2] {
                for j in 0..dims[1] {
                    let (a, b) = (d.get(lp, j, k), d.get(p, j, k));
                    left += w * a as u8 as f64;
                    right += w * b as u8 as f64;
                    both += w * (a && b) as u8 as f64;
                }
            }
        }
        (1, _) => {
            let w = kind.side_density() * h[0] * h[2];
            for k in 0..dims[2] {
                for i in 0..dims[0] {
                    let (a, b) = (d.get(i, lp, k), d.get(i, p, k));
                    left += w * a as u8 as f64;
                    right += w * b as u8 as f64;
                    both += w * (a && b) as u8 as f64;
                }
            }
        }
        _ => {
            let weights: Vec<f64> = (0..dims[0])
                .map(|i| h[1] * kind.z_face_integral(d.cell_lo(0, i), d.cell_lo(0, i) + h[0]))
                .collect();
            for j in 0..dims[1] {
                for (i, &w) in weights.iter().enumerate() {
                    let (a, b) = (d.get(i, j, lp), d.get(i, j, p));
                    left += w * a as u8 as f64;
                    right += w * b as u8 as f64;
                    both += w * (a && b) as u8 as f64;
                }
            }
        }
    }
    PlaneStats {
        gluing,
        left,
        right,
        both,
    }
}

/// `S³` or Riemannian area of the boundary of a voxel domain in its ambient.
pub fn boundary_measure(d: &VoxelDomain, kind: AreaKind) -> Result<MeasureValue> {
    kind.validate()?;
    let dims = d.dims();
    let planes: Vec<(usize, usize)> = (0..3)
        .flat_map(|a| (0..dims[a]).map(move |p| (a, p)))
        .collect();
    let total: f64 = planes
        .par_iter()
        .map(|&(a, p)| plane_stats_unchecked(d, a, p, kind).exposed())
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(MeasureValue::exact(kind.measure_kind(), total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::voxelize;

    #[test]
    fn overlap_integral_matches_sampling() {
        let l = [(0.1, 0.4), (0.6, 0.95)];
        let r = [(0.0, 0.2), (0.5, 0.7)];
        let (period, d0, d1) = (1.0, 0.15, 0.55);
        let exact = sheared_overlap_integral(&l, &r, period, d0, d1);
        // Oracle: midpoint rule in δ, overlap by fine sampling in z.
        let (nd, nz) = (200, 4000);
        let mut acc = 0.0;
        for s in 0..nd {
            let d = d0 + (s as f64 + 0.5) / nd as f64 * (d1 - d0);
            let hit = (0..nz)
                .filter(|&q| {
                    let z = (q as f64 + 0.5) / nz as f64;
                    let zr = (z - d).rem_euclid(period);
                    l.iter().any(|&(a, b)| z >= a && z < b)
                        && r.iter().any(|&(a, b)| zr >= a && zr < b)
                })
                .count();
            acc += hit as f64 / nz as f64;
        }
        let approx = acc / nd as f64 * (d1 - d0);
        assert!(
            (exact - approx).abs() < 2e-3,
            "exact {exact} approx {approx}"
        );
    }

    #[test]
    fn runs_merge() {
        let occ = [true, true, false, true, false, false, true, true];
        let r = merge_runs(8, 0.0, 0.5, |k| occ[k]);
        assert_eq!(r, vec![(0.0, 1.0), (1.5, 2.0), (3.0, 4.0)]);
    }

    #[test]
    fn slab_and_full_quotient() {
        let t = 1.0;
        let amb = Ambient::Quotient { t };
        let full = voxelize(|_| true, amb, [16; 3]).unwrap();
        assert!(boundary_measure(&full, AreaKind::S3).unwrap().value.abs() < 1e-12);
        // Slab x < 1/2: two x-faces of area t·t² = 1 each.
        let slab = voxelize(|p| p.x < 0.5, amb, [16; 3]).unwrap();
        let v = boundary_measure(&slab, AreaKind::S3).unwrap().value;
        assert!((v - 2.0).abs() < 1e-12, "{v}");
        let r = boundary_measure(&slab, AreaKind::RiemArea(0.5))
            .unwrap()
            .value;
        assert!((r - 4.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn complement_symmetry_quotient() {
        let amb = Ambient::Quotient { t: 1.2 };
        let d = voxelize(
            |p| (p.x - 0.3).powi(2) + (p.y - 0.9).powi(2) + (p.z - 0.2).powi(2) < 0.2,
            amb,
            [16, 16, 16],
        )
        .unwrap();
        let a = boundary_measure(&d, AreaKind::S3).unwrap().value;
        let b = boundary_measure(&d.complement(), AreaKind::S3)
            .unwrap()
            .value;
        assert!((a - b).abs() < 1e-10 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn box_in_h_matches_closed_form() {
        // Box [0,1]×[0,1]×[0,1] inside a larger HBox: sides 1 each (x, y
        // faces), z faces ∫|x| = 1/2 each.
        let amb = Ambient::HBox {
            lo: [-1.0; 3],
            hi: [2.0; 3],
        };
        let d = voxelize(
            |p| (0.0..1.0).contains(&p.x) && (0.0..1.0).contains(&p.y) && (0.0..1.0).contains(&p.z),
            amb,
            [12; 3],
        )
        .unwrap();
        let v = boundary_measure(&d, AreaKind::S3).unwrap().value;
        assert!((v - 5.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn z_face_integrals() {
        assert!((AreaKind::S3.z_face_integral(-1.0, 2.0) - 2.5).abs() < 1e-15);
        let eps = 0.3;
        let num = crate::quadrature::GaussLegendre::new(40)
            .integrate(-0.4, 1.1, |x| (1.0 + x * x / (eps * eps)).sqrt());
        assert!((AreaKind::RiemArea(eps).z_face_integral(-0.4, 1.1) - num).abs() < 1e-10);
    }
}

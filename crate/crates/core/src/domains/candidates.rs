//! Candidate domains for upper bounds on the isoperimetric profile.

use super::{lattice_coordinate_distance, Ambient, VoxelDomain};
use crate::error::{positive, Error, Result};
use crate::group::GroupPoint;

/// Grid for a coordinate ball.
#[derive(Debug, Clone, PartialEq)]
pub enum BallGrid {
    /// A fixed ambient; the ball is filled cell by cell in order of
    /// coordinate distance from the center.
    Fixed { ambient: Ambient, dims: [usize; 3] },
    /// An `HBox` of half-width `1.25 r` around the center with `n³` cells,
    /// so the discretisation scales with the radius.
    Fitted { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateFamily {
    CoordinateBall {
        center: GroupPoint,
        grid: BallGrid,
    },
    /// Lexicographic fill: whole x-layers first, then y-rows, then z-cells.
    CoordinateBox {
        ambient: Ambient,
        dims: [usize; 3],
    },
    /// `δ_t` applied to a base domain in an `HBox`.
    DilatedSeed {
        base: VoxelDomain,
    },
}

const FITTED_MARGIN: f64 = 1.25;

impl CandidateFamily {
    pub fn id(&self) -> &'static str {
        match self {
            CandidateFamily::CoordinateBall { .. } => "coordinate_ball",
            CandidateFamily::CoordinateBox { .. } => "coordinate_box",
            CandidateFamily::DilatedSeed { .. } => "dilated_seed",
        }
    }
}

/// Fill the first `round(target / cell volume)` cells in increasing
/// `(level, index)` order. This is the limit of bisecting on the level
/// threshold and breaking ties by index, and meets the target to half a cell.
fn fill_by_level(
    mut d: VoxelDomain,
    target: f64,
    family: &'static str,
    bound: f64,
    level: impl Fn(&VoxelDomain, usize, usize, usize) -> Option<f64>,
) -> Result<VoxelDomain> {
    if target > bound * (1.0 + 1e-12) {
        return Err(Error::Unreachable {
            family,
            target,
            bound,
        });
    }
    let [nx, ny, nz] = d.dims();
    let mut order = Vec::with_capacity(nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if let Some(l) = level(&d, i, j, k) {
                    order.push((l, d.index(i, j, k)));
                }
            }
        }
    }
    let count = ((target / d.cell_volume()).round() as usize).min(order.len());
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut occ = vec![false; nx * ny * nz];
    for &(_, idx) in &order[..count] {
        occ[idx] = true;
    }
    d = VoxelDomain::new(*d.ambient(), d.dims(), occ)?;
    Ok(d)
}

pub fn make_candidate(f: &CandidateFamily, target_volume: f64) -> Result<VoxelDomain> {
    if !(target_volume.is_finite() && target_volume >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "target_volume",
            reason: format!("must be finite and non-negative, got {target_volume}"),
        });
    }
    match f {
        CandidateFamily::CoordinateBall { center, grid } => match grid {
            BallGrid::Fixed { ambient, dims } => {
                let base = VoxelDomain::empty(*ambient, *dims)?;
                let c = *center;
                match *ambient {
                    Ambient::HBox { lo, hi } => {
                        let rmax = (0..3)
                            .map(|a| (c.coords()[a] - lo[a]).min(hi[a] - c.coords()[a]))
                            .fold(f64::INFINITY, f64::min)
                            .max(0.0);
                        let level = |d: &VoxelDomain, i, j, k| {
                            let p = d.cell_center(i, j, k);
                            let r =
                                ((p.x - c.x).powi(2) + (p.y - c.y).powi(2) + (p.z - c.z).powi(2))
                                    .sqrt();
                            (r <= rmax).then_some(r)
                        };
                        let inside = (0..base.occupancy().len())
                            .filter(|&idx| {
                                let [nx, ny, _] = base.dims();
                                level(&base, idx % nx, idx / nx % ny, idx / (nx * ny)).is_some()
                            })
                            .count();
                        let bound = inside as f64 * base.cell_volume();
                        fill_by_level(base, target_volume, f.id(), bound, level)
                    }
                    amb => {
                        let t = amb.t().unwrap_or(1.0);
                        let bound = amb.bounds().volume();
                        fill_by_level(base, target_volume, f.id(), bound, |d, i, j, k| {
                            Some(lattice_coordinate_distance(&d.cell_center(i, j, k), &c, t))
                        })
                    }
                }
            }
            BallGrid::Fitted { n } => {
                let n = *n;
                let c = *center;
                // Cell pattern is radius independent; count it on the unit ball.
                let half = FITTED_MARGIN;
                let unit = VoxelDomain::empty(
                    Ambient::HBox {
                        lo: [c.x - half, c.y - half, c.z - half],
                        hi: [c.x + half, c.y + half, c.z + half],
                    },
                    [n; 3],
                )?;
                let inside = |d: &VoxelDomain, i, j, k| {
                    let p = d.cell_center(i, j, k);
                    (p.x - c.x).powi(2) + (p.y - c.y).powi(2) + (p.z - c.z).powi(2) <= 1.0
                };
                let mut occ = vec![false; n * n * n];
                let mut count = 0usize;
                for k in 0..n {
                    for j in 0..n {
                        for i in 0..n {
                            if inside(&unit, i, j, k) {
                                occ[unit.index(i, j, k)] = true;
                                count += 1;
                            }
                        }
                    }
                }
                if target_volume == 0.0 || count == 0 {
                    return Err(Error::Unreachable {
                        family: f.id(),
                        target: target_volume,
                        bound: 0.0,
                    });
                }
                // volume(r) = count · (2 · 1.25 r / n)³ is strictly monotone in r.
                let r = (target_volume / count as f64).cbrt() * n as f64 / (2.0 * half);
                let hr = half * r;
                VoxelDomain::new(
                    Ambient::HBox {
                        lo: [c.x - hr, c.y - hr, c.z - hr],
                        hi: [c.x + hr, c.y + hr, c.z + hr],
                    },
                    [n; 3],
                    occ,
                )
            }
        },
        CandidateFamily::CoordinateBox { ambient, dims } => {
            let base = VoxelDomain::empty(*ambient, *dims)?;
            let bound = ambient.bounds().volume();
            let [nx, ny, nz] = *dims;
            fill_by_level(base, target_volume, f.id(), bound, |_, i, j, k| {
                Some(((i * ny + j) * nz + k) as f64 / nx as f64)
            })
        }
        CandidateFamily::DilatedSeed { base } => {
            let v0 = base.occupied_count() as f64 * base.cell_volume();
            if v0 == 0.0 {
                return Err(Error::Unreachable {
                    family: f.id(),
                    target: target_volume,
                    bound: 0.0,
                });
            }
            positive("target_volume", target_volume)?;
            base.dilated((target_volume / v0).powf(0.25))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{boundary_measure, domain_volume, voxelize, AreaKind, VolumeKind};

    #[test]
    fn box_fill_gives_half_box() {
        let t = 1.5;
        let amb = Ambient::Quotient { t };
        let f = CandidateFamily::CoordinateBox {
            ambient: amb,
            dims: [16; 3],
        };
        let d = make_candidate(&f, t.powi(4) / 2.0).unwrap();
        let expect = voxelize(|p| p.x < t / 2.0, amb, [16; 3]).unwrap();
        assert_eq!(d, expect);
        assert!(make_candidate(&f, t.powi(4) * 1.01).is_err());
    }

    #[test]
    fn ball_volume_within_half_cell() {
        let amb = Ambient::HBox {
            lo: [-1.0; 3],
            hi: [1.0; 3],
        };
        let f = CandidateFamily::CoordinateBall {
            center: GroupPoint::IDENTITY,
            grid: BallGrid::Fixed {
                ambient: amb,
                dims: [24; 3],
            },
        };
        for target in [1e-3, 0.05, 1.0] {
            let d = make_candidate(&f, target).unwrap();
            let v = domain_volume(&d, VolumeKind::S4).unwrap().value;
            assert!((v - target).abs() <= 0.5 * d.cell_volume() + 1e-15);
        }
        // Largest inscribed ball has volume about 4π/3.
        match make_candidate(&f, 5.0) {
            Err(Error::Unreachable { bound, .. }) => assert!((bound - 4.18879).abs() < 0.2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fitted_ball_hits_target() {
        let f = CandidateFamily::CoordinateBall {
            center: GroupPoint::new(0.0, 0.0, 0.0),
            grid: BallGrid::Fitted { n: 16 },
        };
        for target in [1e-6, 1e-3, 1.0] {
            let d = make_candidate(&f, target).unwrap();
            let v = domain_volume(&d, VolumeKind::S4).unwrap().value;
            assert!((v / target - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dilated_seed_scales() {
        let amb = Ambient::HBox {
            lo: [-1.0; 3],
            hi: [1.0; 3],
        };
        let base = voxelize(|p| p.x * p.x + p.y * p.y + p.z * p.z < 0.6, amb, [16; 3]).unwrap();
        let v0 = domain_volume(&base, VolumeKind::S4).unwrap().value;
        let s0 = boundary_measure(&base, AreaKind::S3).unwrap().value;
        let f = CandidateFamily::DilatedSeed { base };
        let d = make_candidate(&f, 16.0 * v0).unwrap();
        let v = domain_volume(&d, VolumeKind::S4).unwrap().value;
        let s = boundary_measure(&d, AreaKind::S3).unwrap().value;
        assert!((v / v0 - 16.0).abs() < 1e-9);
        assert!((s / s0 - 8.0).abs() < 1e-9);
    }
}

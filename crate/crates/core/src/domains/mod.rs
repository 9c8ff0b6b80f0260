//! Voxel representations of domains in `H`, in the nilmanifolds `N_t` and
//! in the cyclic cover `Z`, with volume and boundary-measure evaluation and
//! candidate families for profile upper bounds.

mod boundary;
mod candidates;
mod io;

pub(crate) use boundary::merge_runs;
pub(crate) use boundary::plane_stats_unchecked;
pub use boundary::{boundary_measure, plane_stats, AreaKind, Gluing, PlaneStats};
pub use candidates::{make_candidate, BallGrid, CandidateFamily};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::group::{GroupPoint, LatticeElement};
use crate::measures::{CoordBox, MeasureKind, MeasureValue};

/// Minimum number of cells per axis.
pub const MIN_DIM: usize = 8;

/// Default grid resolution per axis.
pub const DEFAULT_DIM: usize = 96;

/// Where the grid lives and how its walls are identified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ambient {
    /// Plain coordinate box in `H`; every wall is a boundary.
    HBox { lo: [f64; 3], hi: [f64; 3] },
    /// Fundamental box `[0,t)×[0,t)×[0,t²)` of `Γ_t` with the lattice
    /// identifications: the x-walls glue through `(t, y, z) ~ (0, y, z − t y)`,
    /// the y- and z-walls by plain translation.
    Quotient { t: f64 },
    /// A pillar chart in `Z = ζ\H`: the `N_1` fundamental box with the cut
    /// surface `G_u` opened along the grid planes `cut = [ix, iy]`. Cells with
    /// `x ≥ s` (when `s > 0`) lift by `(−1, 0, 0)` and cells with `y ≥ s′`
    /// (when `s′ > 0`) by `(0, −1, 0)`, so the lift projects into
    /// `[s−1, s) × [s′−1, s′)` (or `[0, 1)` on an axis cut at 0).
    ZSlab { cut: [usize; 2] },
}

impl Ambient {
    pub fn name(&self) -> &'static str {
        match self {
            Ambient::HBox { .. } => "h_box",
            Ambient::Quotient { .. } => "quotient",
            Ambient::ZSlab { .. } => "z_slab",
        }
    }

    /// Lattice scale for quotient-type ambients.
    pub fn t(&self) -> Option<f64> {
        match self {
            Ambient::HBox { .. } => None,
            Ambient::Quotient { t } => Some(*t),
            Ambient::ZSlab { .. } => Some(1.0),
        }
    }

    pub fn bounds(&self) -> CoordBox {
        match self {
            Ambient::HBox { lo, hi } => CoordBox { lo: *lo, hi: *hi },
            Ambient::Quotient { t } => CoordBox::fundamental(*t),
            Ambient::ZSlab { .. } => CoordBox::fundamental(1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Ambient::HBox { lo, hi } => {
                let b = CoordBox::new(*lo, *hi)?;
                for a in 0..3 {
                    if !(b.extent(a) > 0.0) {
                        return Err(Error::InvalidParameter {
                            name: "ambient",
                            reason: format!("box has empty extent on axis {a}"),
                        });
                    }
                }
                Ok(())
            }
            Ambient::Quotient { t } => positive("t", *t),
            Ambient::ZSlab { .. } => Ok(()),
        }
    }
}

/// Occupancy grid; index `i + nx (j + ny k)` (x fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelDomain {
    ambient: Ambient,
    dims: [usize; 3],
    occupancy: Vec<bool>,
}

impl VoxelDomain {
    pub fn new(ambient: Ambient, dims: [usize; 3], occupancy: Vec<bool>) -> Result<Self> {
        ambient.validate()?;
        if dims.iter().any(|&n| n < MIN_DIM) {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: format!("need at least {MIN_DIM} cells per axis, got {dims:?}"),
            });
        }
        let len = dims[0] * dims[1] * dims[2];
        if occupancy.len() != len {
            return Err(Error::InvalidParameter {
                name: "occupancy",
                reason: format!("length {} does not match dims {dims:?}", occupancy.len()),
            });
        }
        if let Ambient::ZSlab { cut } = ambient {
            if cut[0] >= dims[0] || cut[1] >= dims[1] {
                return Err(Error::InvalidParameter {
                    name: "cut",
                    reason: format!("cut planes {cut:?} outside dims {dims:?}"),
                });
            }
        }
        Ok(Self {
            ambient,
            dims,
            occupancy,
        })
    }

    pub fn empty(ambient: Ambient, dims: [usize; 3]) -> Result<Self> {
        Self::new(ambient, dims, vec![false; dims[0] * dims[1] * dims[2]])
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub fn bounds(&self) -> CoordBox {
        self.ambient.bounds()
    }

    pub fn spacing(&self) -> [f64; 3] {
        let b = self.bounds();
        [
            b.extent(0) / self.dims[0] as f64,
            b.extent(1) / self.dims[1] as f64,
            b.extent(2) / self.dims[2] as f64,
        ]
    }

    pub fn cell_volume(&self) -> f64 {
        let h = self.spacing();
        h[0] * h[1] * h[2]
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.occupancy[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: bool) {
        let idx = self.index(i, j, k);
        self.occupancy[idx] = value;
    }

    pub fn cell_lo(&self, axis: usize, i: usize) -> f64 {
        self.bounds().lo[axis] + i as f64 * self.spacing()[axis]
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> GroupPoint {
        let b = self.bounds();
        let h = self.spacing();
        GroupPoint::new(
            b.lo[0] + (i as f64 + 0.5) * h[0],
            b.lo[1] + (j as f64 + 0.5) * h[1],
            b.lo[2] + (k as f64 + 0.5) * h[2],
        )
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.occupancy.iter().any(|&b| b)
    }

    /// Same ambient, complementary occupancy.
    pub fn complement(&self) -> Self {
        Self {
            ambient: self.ambient,
            dims: self.dims,
            occupancy: self.occupancy.iter().map(|b| !b).collect(),
        }
    }

    pub(crate) fn with_ambient(&self, ambient: Ambient) -> Self {
        Self {
            ambient,
            dims: self.dims,
            occupancy: self.occupancy.clone(),
        }
    }

    /// Image under `δ_t` of a domain in an `HBox` ambient: same cells, box
    /// scaled by `(t, t, t²)`.
    pub fn dilated(&self, t: f64) -> Result<Self> {
        positive("t", t)?;
        match self.ambient {
            Ambient::HBox { lo, hi } => {
                let s = [t, t, t * t];
                Ok(self.with_ambient(Ambient::HBox {
                    lo: [lo[0] * s[0], lo[1] * s[1], lo[2] * s[2]],
                    hi: [hi[0] * s[0], hi[1] * s[1], hi[2] * s[2]],
                }))
            }
            other => Err(Error::WrongAmbient {
                expected: "h_box",
                found: other.name().into(),
            }),
        }
    }

    /// Occupancy at an arbitrary chart point (cell containing it), `false`
    /// outside the chart box.
    pub fn contains_chart_point(&self, p: &GroupPoint) -> bool {
        let b = self.bounds();
        let h = self.spacing();
        let c = p.coords();
        let mut idx = [0usize; 3];
        for a in 0..3 {
            let f = (c[a] - b.lo[a]) / h[a];
            if !(f >= 0.0) || f >= self.dims[a] as f64 {
                return false;
            }
            idx[a] = (f as usize).min(self.dims[a] - 1);
        }
        self.get(idx[0], idx[1], idx[2])
    }
}

/// Cell occupied iff `indicator` holds at the cell center.
pub fn voxelize<F>(indicator: F, ambient: Ambient, dims: [usize; 3]) -> Result<VoxelDomain>
where
    F: Fn(&GroupPoint) -> bool + Sync,
{
    let mut d = VoxelDomain::empty(ambient, dims)?;
    let [nx, ny, _] = dims;
    let slab = nx * ny;
    let probe = d.clone();
    d.occupancy
        .par_chunks_mut(slab)
        .enumerate()
        .for_each(|(k, chunk)| {
            for j in 0..ny {
                for i in 0..nx {
                    chunk[i + nx * j] = indicator(&probe.cell_center(i, j, k));
                }
            }
        });
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeKind {
    S4,
    Riem(f64),
}

pub fn domain_volume(d: &VoxelDomain, kind: VolumeKind) -> Result<MeasureValue> {
    let s4 = d.occupied_count() as f64 * d.cell_volume();
    match kind {
        VolumeKind::S4 => Ok(MeasureValue::exact(MeasureKind::S4, s4)),
        VolumeKind::Riem(eps) => {
            positive("epsilon", eps)?;
            Ok(MeasureValue::exact(MeasureKind::RiemVolume, s4 / eps))
        }
    }
}

/// Coordinate distance from `p` to the closest `Γ_t`-translate of `center`
/// among the 27 neighbouring translates.
pub fn lattice_coordinate_distance(p: &GroupPoint, center: &GroupPoint, t: f64) -> f64 {
    let mut best = f64::INFINITY;
    for j in -1..=1 {
        for k in -1..=1 {
            for m in -1..=1 {
                let c = LatticeElement::new(j, k, m).act(t, center);
                let d = ((p.x - c.x).powi(2) + (p.y - c.y).powi(2) + (p.z - c.z).powi(2)).sqrt();
                best = best.min(d);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_half_volumes() {
        let t = 1.3;
        let amb = Ambient::Quotient { t };
        let full = voxelize(|_| true, amb, [16, 16, 16]).unwrap();
        let v = domain_volume(&full, VolumeKind::S4).unwrap().value;
        assert!((v - t.powi(4)).abs() < 1e-12);
        let r = domain_volume(&full, VolumeKind::Riem(0.25)).unwrap().value;
        assert!((r - t.powi(4) / 0.25).abs() < 1e-12);

        let half = voxelize(|p| p.x < t / 2.0, amb, [16, 16, 16]).unwrap();
        let hv = domain_volume(&half, VolumeKind::S4).unwrap().value;
        assert!((hv - t.powi(4) / 2.0).abs() <= t.powi(4) / 16.0);
    }

    #[test]
    fn rejects_small_dims_and_bad_lengths() {
        assert!(VoxelDomain::empty(Ambient::Quotient { t: 1.0 }, [4, 8, 8]).is_err());
        assert!(
            VoxelDomain::new(Ambient::Quotient { t: 1.0 }, [8, 8, 8], vec![false; 10]).is_err()
        );
        assert!(VoxelDomain::empty(
            Ambient::HBox {
                lo: [0.0; 3],
                hi: [1.0, 0.0, 1.0]
            },
            [8, 8, 8]
        )
        .is_err());
        assert!(VoxelDomain::empty(Ambient::ZSlab { cut: [8, 0] }, [8, 8, 8]).is_err());
    }

    #[test]
    fn dilation_scales_cell_volume() {
        let amb = Ambient::HBox {
            lo: [-1.0; 3],
            hi: [1.0; 3],
        };
        let d = voxelize(
            |p| p.x * p.x + p.y * p.y + p.z * p.z < 0.5,
            amb,
            [12, 12, 12],
        )
        .unwrap();
        let v0 = domain_volume(&d, VolumeKind::S4).unwrap().value;
        let v1 = domain_volume(&d.dilated(2.0).unwrap(), VolumeKind::S4)
            .unwrap()
            .value;
        assert!((v1 / v0 - 16.0).abs() < 1e-12);
        assert!(voxelize(|_| true, Ambient::Quotient { t: 1.0 }, [8; 3])
            .unwrap()
            .dilated(2.0)
            .is_err());
    }

    #[test]
    fn chart_point_lookup() {
        let d = voxelize(|p| p.x < 0.5, Ambient::Quotient { t: 1.0 }, [8; 3]).unwrap();
        assert!(d.contains_chart_point(&GroupPoint::new(0.1, 0.5, 0.5)));
        assert!(!d.contains_chart_point(&GroupPoint::new(0.9, 0.5, 0.5)));
        assert!(!d.contains_chart_point(&GroupPoint::new(1.1, 0.5, 0.5)));
    }
}

//! Seeded random test domains: unions of coordinate ellipsoids, measured
//! with lattice-periodic distance in quotient ambients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::{voxelize, Ambient, VoxelDomain};
use crate::error::Result;
use crate::group::{GroupPoint, LatticeElement};

fn inside(p: &GroupPoint, c: &GroupPoint, r: &[f64; 3]) -> bool {
    let d = [(p.x - c.x) / r[0], (p.y - c.y) / r[1], (p.z - c.z) / r[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2] < 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Lobe {
    center: GroupPoint,
    radii: [f64; 3],
}

/// A union of 1 to 4 random ellipsoids. In quotient ambients each lobe is
/// repeated over the neighbouring lattice translates; in an `HBox` the lobes
/// stay inside the box. `scale` multiplies all radii.
pub fn random_blob(
    seed: u64,
    ambient: Ambient,
    dims: [usize; 3],
    scale: f64,
) -> Result<VoxelDomain> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = ambient.bounds();
    let ext = [b.extent(0), b.extent(1), b.extent(2)];
    let count = rng.gen_range(1..=4);
    let lobes: Vec<Lobe> = (0..count)
        .map(|_| {
            let radii = [
                scale * ext[0] * rng.gen_range(0.08..0.3),
                scale * ext[1] * rng.gen_range(0.08..0.3),
                scale * ext[2] * rng.gen_range(0.08..0.3),
            ];
            let mut c = [0.0; 3];
            for a in 0..3 {
                let margin = if ambient.t().is_some() {
                    0.0
                } else {
                    radii[a].min(0.45 * ext[a])
                };
                c[a] = b.lo[a] + margin + rng.gen::<f64>() * (ext[a] - 2.0 * margin);
            }
            Lobe {
                center: c.into(),
                radii,
            }
        })
        .collect();
    let t = ambient.t();
    voxelize(
        move |p| {
            lobes.iter().any(|l| match t {
                Some(t) => {
                    let r = l.radii;
                    (-1..=1).any(|j| {
                        (-1..=1).any(|k| {
                            (-1..=1).any(|m| {
                                let c = LatticeElement::new(j, k, m).act(t, &l.center);
                                inside(p, &c, &r)
                            })
                        })
                    })
                }
                None => inside(p, &l.center, &l.radii),
            })
        },
        ambient,
        dims,
    )
}

//! Quick invariant suite behind `nilprofile verify`.

use std::f64::consts::PI;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nilprofile::cutting::full_reduction;
use nilprofile::domains::{
    boundary_measure, domain_volume, Ambient, AreaKind, VolumeKind, VoxelDomain,
};
use nilprofile::geodesy::{d_cc, d_eps};
use nilprofile::group::{dilate, group_inv, group_mul};
use nilprofile::necklace::{assemble_necklace, NecklaceConfig};
use nilprofile::profiles::CertificateConfig;
use nilprofile::samples::random_blob;
use nilprofile::GroupPoint;

use super::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, err: f64, tol: f64) -> Check {
    Check {
        name,
        pass: err <= tol,
        detail: format!("error {err:.3e}, tolerance {tol:.1e}"),
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> GroupPoint {
    GroupPoint::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
}

pub fn run_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    let mut assoc: f64 = 0.0;
    let mut inv: f64 = 0.0;
    let mut hom: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b, c) = (
            random_point(&mut rng),
            random_point(&mut rng),
            random_point(&mut rng),
        );
        assoc = assoc.max(
            group_mul(&group_mul(&a, &b), &c).max_abs_diff(&group_mul(&a, &group_mul(&b, &c))),
        );
        inv = inv.max(group_mul(&a, &group_inv(&a)).max_abs_diff(&GroupPoint::IDENTITY));
        let t = rng.gen_range(0.1..3.0);
        let lhs = dilate(t, &group_mul(&a, &b))?;
        let rhs = group_mul(&dilate(t, &a)?, &dilate(t, &b)?);
        hom = hom.max(lhs.max_abs_diff(&rhs));
    }
    out.push(check("group associativity", assoc, 1e-12));
    out.push(check("group inverse", inv, 1e-12));
    out.push(check("dilation is a homomorphism", hom, 1e-12));

    // A closed horizontal loop with k edges enclosing area z is at least the
    // regular k-gon, of length sqrt(4 k tan(π/k) z).
    let (z, k) = (0.3, 32);
    let dv = d_cc(&GroupPoint::IDENTITY, &GroupPoint::new(0.0, 0.0, z), k)?.value;
    let kf = k as f64;
    out.push(check(
        "d_cc to the vertical axis",
        (dv - (4.0 * kf * (PI / kf).tan() * z).sqrt()).abs(),
        1e-5,
    ));
    let dh = d_eps(
        &GroupPoint::IDENTITY,
        &GroupPoint::new(0.7, 0.0, 0.0),
        cfg.eps,
        8,
    )?
    .value;
    out.push(check(
        "d_eps along a horizontal line",
        (dh - 0.7).abs(),
        1e-9,
    ));

    let blob = random_blob(cfg.seed, Ambient::Quotient { t: 1.0 }, [48; 3], 1.0)?;
    let s = boundary_measure(&blob, AreaKind::S3)?.value;
    let sc = boundary_measure(&blob.complement(), AreaKind::S3)?.value;
    out.push(check(
        "boundary of complement in N_1",
        (s - sc).abs(),
        1e-9 * s.max(1.0),
    ));
    let full = VoxelDomain::new(
        Ambient::Quotient { t: 1.0 },
        [16; 3],
        vec![true; 16 * 16 * 16],
    )?;
    out.push(check(
        "closed manifold has no boundary",
        boundary_measure(&full, AreaKind::RiemArea(cfg.eps))?.value,
        1e-12,
    ));
    let vol = domain_volume(&full, VolumeKind::S4)?.value;
    out.push(check("fundamental domain volume", (vol - 1.0).abs(), 1e-12));

    let small = random_blob(cfg.seed, Ambient::Quotient { t: 1.0 }, [48; 3], 0.5)?;
    let red = full_reduction(&small)?;
    let worst = red
        .certificates
        .iter()
        .map(|c| (-c.slack - c.tol).max(0.0))
        .fold(0.0, f64::max);
    out.push(check("cutting certificates", worst, 0.0));

    let cert = CertificateConfig::new(cfg.c, cfg.eta)?;
    let report = assemble_necklace(&NecklaceConfig::default_for(cfg.n_max, &cert)?)?;
    out.push(Check {
        name: "necklace gap at v = 1",
        pass: report.gap,
        detail: format!(
            "lower {:.3e} vs last upper {:.3e}",
            report.lower_bound_at_one, report.tail_upper
        ),
    });
    Ok(out)
}

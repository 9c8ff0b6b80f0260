use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use nilprofile::cutting::full_reduction;
use nilprofile::domains::{
    boundary_measure, domain_volume, Ambient, AreaKind, BallGrid, CandidateFamily, VolumeKind,
    VoxelDomain,
};
use nilprofile::geodesy::{cc_quotient_distance_with, d_cc_with, d_eps_with, DistanceOptions};
use nilprofile::measures::{riem_area, s3_area, SpherePatch};
use nilprofile::necklace::{assemble_necklace, NecklaceConfig};
use nilprofile::profiles::{
    asymptotic_slope, bracket_violations, lb_cc_smallvol, lb_heis_riemannian, lb_nilmanifold_cc,
    lower_profile, upper_profile, CertificateConfig, ProfileCurve, SpaceTag,
};
use nilprofile::report::{profile_plot, write_profile_csv, Plot, Series, SeriesStyle};
use nilprofile::samples::random_blob;
use nilprofile::GroupPoint;

use super::config::RunConfig;
use super::verify;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Results were written but some certificate or invariant failed.
    Violation,
}

fn out_path(cfg: &RunConfig, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    Ok(cfg.out.join(name))
}

fn write_json<T: Serialize>(cfg: &RunConfig, name: &str, result: &T) -> Result<PathBuf> {
    let path = out_path(cfg, name)?;
    let doc = json!({ "run_config": cfg, "result": result });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_svg(cfg: &RunConfig, name: &str, plot: &Plot) -> Result<PathBuf> {
    let path = out_path(cfg, name)?;
    std::fs::write(&path, plot.render(Some(&cfg.to_json()))?)?;
    Ok(path)
}

fn point_param(cfg: &RunConfig, key: &str, default: [f64; 3]) -> Result<GroupPoint> {
    match cfg.param_list(key)? {
        None => Ok(default.into()),
        Some(v) if v.len() == 3 => Ok(GroupPoint::checked(v[0], v[1], v[2])?),
        Some(v) => bail!("parameter `{key}` needs 3 coordinates, got {}", v.len()),
    }
}

fn dims3(cfg: &RunConfig) -> [usize; 3] {
    [cfg.dims; 3]
}

fn load_or_sample(cfg: &RunConfig, ambient: Ambient, scale: f64) -> Result<(VoxelDomain, String)> {
    match cfg.param_str("domain")? {
        Some(p) => {
            let d = VoxelDomain::load(p.as_ref()).with_context(|| format!("loading domain {p}"))?;
            Ok((d, p.to_string()))
        }
        None => Ok((
            random_blob(cfg.seed, ambient, dims3(cfg), scale)?,
            format!("random_blob(seed = {})", cfg.seed),
        )),
    }
}

pub fn dist(cfg: &RunConfig) -> Result<Status> {
    let p = point_param(cfg, "from", [0.0; 3])?;
    let q = point_param(cfg, "to", [1.0, 0.0, 0.0])?;
    let k = cfg.param_usize("k")?.unwrap_or(32);
    let opts = DistanceOptions {
        seed: cfg.seed,
        ..DistanceOptions::default()
    };
    let cc = d_cc_with(&p, &q, k, &opts)?;
    let de = d_eps_with(&p, &q, cfg.eps, k, &opts)?;
    let qt = cc_quotient_distance_with(&p, &q, cfg.t, k, &opts)?;
    println!("d_cc       = {:.9} (converged: {})", cc.value, cc.converged);
    println!(
        "d_eps      = {:.9} (eps = {}, converged: {})",
        de.value, cfg.eps, de.converged
    );
    println!("d_cc in N_t = {:.9} (t = {})", qt.value, cfg.t);
    let path = write_json(
        cfg,
        "dist.json",
        &json!({ "d_cc": cc, "d_eps": de, "d_cc_quotient": qt }),
    )?;
    println!("wrote {}", path.display());
    Ok(Status::Ok)
}

pub fn measure(cfg: &RunConfig) -> Result<Status> {
    let (d, source) = load_or_sample(cfg, Ambient::Quotient { t: cfg.t }, 1.0)?;
    if let Some(p) = cfg.param_str("save_domain")? {
        d.save(p.as_ref())
            .with_context(|| format!("saving domain to {p}"))?;
    }
    let s4 = domain_volume(&d, VolumeKind::S4)?;
    let rv = domain_volume(&d, VolumeKind::Riem(cfg.eps))?;
    let s3 = boundary_measure(&d, AreaKind::S3)?;
    let ra = boundary_measure(&d, AreaKind::RiemArea(cfg.eps))?;
    let radius = cfg.param_f64("sphere_radius")?.unwrap_or(0.5);
    let sphere = SpherePatch {
        center: GroupPoint::IDENTITY,
        radius,
        order: cfg.quad_order,
    };
    let sphere_s3 = s3_area(&sphere, cfg.eps)?;
    let sphere_area = riem_area(&sphere, cfg.eps)?;
    println!(
        "domain {source}: S4 = {:.9}, S3 = {:.9}",
        s4.value, s3.value
    );
    println!(
        "riemannian (eps = {}): volume = {:.9}, area = {:.9}",
        cfg.eps, rv.value, ra.value
    );
    println!(
        "coordinate sphere r = {radius}: S3 = {:.9} ± {:.1e}",
        sphere_s3.value, sphere_s3.estimated_quadrature_error
    );
    let path = write_json(
        cfg,
        "measure.json",
        &json!({
            "domain": { "source": source, "ambient": d.ambient(), "dims": d.dims(),
                        "s4": s4, "riem_volume": rv, "s3": s3, "riem_area": ra },
            "sphere": { "radius": radius, "s3": sphere_s3, "riem_area": sphere_area },
        }),
    )?;
    println!("wrote {}", path.display());
    Ok(Status::Ok)
}

pub fn cut(cfg: &RunConfig) -> Result<Status> {
    let (d, source) = load_or_sample(cfg, Ambient::Quotient { t: 1.0 }, 0.6)?;
    let red = full_reduction(&d)?;
    for c in &red.certificates {
        println!(
            "{:<11} in S3 = {:.6e}  out S3 = {:.6e}  error term = {:.6e}  slack = {:.6e}",
            c.step, c.input_boundary_s3, c.output_boundary_s3, c.error_term, c.slack
        );
    }
    match &red.final_bound {
        Some(b) => println!("conditional final bound: S3(boundary) >= {:.6e}", b.value),
        None => println!("chain only: volume above the small-volume threshold"),
    }
    let path = write_json(
        cfg,
        "cut.json",
        &json!({ "source": source, "reduction": red }),
    )?;
    println!("wrote {}", path.display());
    Ok(Status::Ok)
}

fn default_volumes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

pub fn profile(cfg: &RunConfig) -> Result<Status> {
    let cert = CertificateConfig::new(cfg.c, cfg.eta)?;
    let volumes = cfg
        .param_list("volumes")?
        .unwrap_or_else(|| default_volumes(1e-5, 0.5, 15));
    let spaces = cfg
        .param_str("spaces")?
        .unwrap_or("N1_cc,H_g_eps")
        .to_string();
    let dims = dims3(cfg);
    let mut curves: Vec<ProfileCurve> = Vec::new();
    let mut warnings = Vec::new();
    let mut violations = Vec::new();
    let mut slopes = serde_json::Map::new();
    let tol = 1e-12;

    for space in spaces.split(',').map(str::trim) {
        match space {
            "N1_cc" => {
                let amb = Ambient::Quotient { t: 1.0 };
                let fams = [
                    CandidateFamily::CoordinateBox { ambient: amb, dims },
                    CandidateFamily::CoordinateBall {
                        center: GroupPoint::new(0.5, 0.5, 0.5),
                        grid: BallGrid::Fixed { ambient: amb, dims },
                    },
                ];
                let (up, w) = upper_profile(SpaceTag::N1Cc, &fams, &volumes, AreaKind::S3)?;
                warnings.extend(w);
                let lo = lower_profile(SpaceTag::N1Cc, "nilmanifold_cc", &volumes, |v| {
                    lb_nilmanifold_cc(v, &cert)
                })?;
                let small =
                    lower_profile(SpaceTag::N1Cc, "cc_small_volume", &volumes, lb_cc_smallvol)?;
                for l in [&lo, &small] {
                    violations.extend(
                        bracket_violations(l, &up, tol)
                            .into_iter()
                            .map(|v| (space, v)),
                    );
                }
                curves.extend([up, lo, small]);
            }
            "H_g_eps" => {
                let eps = cfg.eps;
                let fams = [CandidateFamily::CoordinateBall {
                    center: GroupPoint::IDENTITY,
                    grid: BallGrid::Fitted { n: cfg.dims },
                }];
                // Candidates are sized in S⁴; the Riemannian volume is S⁴/ε.
                let targets: Vec<f64> = volumes.iter().map(|v| v * eps).collect();
                let (raw, w) =
                    upper_profile(SpaceTag::HGEps, &fams, &targets, AreaKind::RiemArea(eps))?;
                warnings.extend(w);
                let samples = raw
                    .samples()
                    .iter()
                    .map(|s| nilprofile::profiles::Sample {
                        v: s.v / eps,
                        ..s.clone()
                    })
                    .collect();
                let up =
                    ProfileCurve::new(samples, raw.direction(), raw.space(), raw.provenance())?;
                let lo = lower_profile(SpaceTag::HGEps, "heisenberg_riemannian", &volumes, |v| {
                    lb_heis_riemannian(v, eps)
                })?;
                violations.extend(
                    bracket_violations(&lo, &up, tol)
                        .into_iter()
                        .map(|v| (space, v)),
                );
                if let Ok(s) = asymptotic_slope(&up, (0.0, f64::INFINITY)) {
                    slopes.insert("H_g_eps_upper".into(), s.into());
                }
                curves.extend([up, lo]);
            }
            other => bail!("unknown space `{other}`; expected N1_cc or H_g_eps"),
        }
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    for c in &curves {
        println!(
            "{} {} ({}): {} samples",
            c.space().as_str(),
            c.direction().as_str(),
            c.provenance(),
            c.samples().len()
        );
    }
    let csv_path = out_path(cfg, "profile.csv")?;
    let file = std::fs::File::create(&csv_path)?;
    write_profile_csv(&curves, Some(&cfg.to_json()), std::io::BufWriter::new(file))?;
    let viol: Vec<_> = violations
        .iter()
        .map(|(s, (v, l, u))| json!({ "space": s, "v": v, "lower": l, "upper": u }))
        .collect();
    write_json(
        cfg,
        "profile.json",
        &json!({ "curves": curves, "warnings": warnings, "bracket_violations": viol, "slopes": slopes }),
    )?;
    let mut plot = profile_plot(&curves, cfg.log_axes)?;
    plot.title = format!("Profile brackets (c = {})", cfg.c);
    write_svg(cfg, "profile.svg", &plot)?;
    println!("wrote {}", cfg.out.display());
    if viol.is_empty() {
        Ok(Status::Ok)
    } else {
        for v in &viol {
            eprintln!("bracket violation: {v}");
        }
        Ok(Status::Violation)
    }
}

pub fn necklace(cfg: &RunConfig) -> Result<Status> {
    let cert = CertificateConfig::new(cfg.c, cfg.eta)?;
    let nc = NecklaceConfig::default_for(cfg.n_max, &cert)?;
    let report = assemble_necklace(&nc)?;
    for p in &report.points {
        println!(
            "n = {:>3}  volume 1+alpha = {:.9}  upper = {:.6e}",
            p.n, p.volume, p.upper
        );
    }
    println!(
        "lower bound at v = 1: {:.6e} (c/16); configured budget gives {:.6e}",
        report.lower_bound_at_one, report.lower_bound_at_one_actual
    );
    println!("gap: {}", report.gap);
    write_json(cfg, "necklace.json", &report)?;
    let plot = Plot {
        title: format!("Profile bracket near v = 1 (c = {})", cfg.c),
        x_label: "volume".into(),
        y_label: "boundary area".into(),
        log_axes: cfg.log_axes,
        series: vec![
            Series {
                label: "upper at 1+alpha_n".into(),
                points: report.points.iter().map(|p| (p.volume, p.upper)).collect(),
                style: SeriesStyle::Scatter,
            },
            Series {
                label: "lower at v = 1".into(),
                points: vec![(1.0, report.lower_bound_at_one)],
                style: SeriesStyle::HLine(report.lower_bound_at_one),
            },
        ],
    };
    write_svg(cfg, "necklace.svg", &plot)?;
    println!("wrote {}", cfg.out.display());
    Ok(Status::Ok)
}

pub fn verify(cfg: &RunConfig) -> Result<Status> {
    let results = verify::run_suite(cfg)?;
    let mut ok = true;
    for r in &results {
        println!(
            "[{}] {}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        ok &= r.pass;
    }
    write_json(cfg, "verify.json", &results)?;
    Ok(if ok { Status::Ok } else { Status::Violation })
}

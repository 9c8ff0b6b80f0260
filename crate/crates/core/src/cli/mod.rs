//! Command-line front end.

mod commands;
pub mod config;
mod verify;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

pub use commands::Status;
use config::{parse_list, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "nilprofile",
    version,
    about = "Isoperimetric profiles of Heisenberg nilmanifolds"
)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// JSON run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Voxels per axis.
    #[arg(long, global = true)]
    dims: Option<usize>,
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    /// Certificate constant for the lower bounds.
    #[arg(long, global = true)]
    c: Option<f64>,
    #[arg(long, global = true)]
    eta: Option<f64>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Logarithmic plot axes.
    #[arg(long, global = true)]
    log: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sub-Riemannian and Riemannian distances between two points.
    Dist {
        /// Start point `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        /// End point `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        /// Waypoints on the discrete path.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Volume and boundary measures of a voxel domain.
    Measure {
        /// Domain file; a seeded random blob otherwise.
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Also save the measured domain to this file.
        #[arg(long)]
        save_domain: Option<PathBuf>,
    },
    /// Pillar and logarithmic cuts with their certificates.
    Cut {
        #[arg(long)]
        domain: Option<PathBuf>,
    },
    /// Upper and lower profile curves.
    Profile {
        /// Comma-separated volumes.
        #[arg(long)]
        volumes: Option<String>,
        /// Comma-separated spaces: `N1_cc`, `H_g_eps`.
        #[arg(long)]
        spaces: Option<String>,
    },
    /// Necklace bracket showing the jump at volume 1.
    Necklace,
    /// Run the invariant suite.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dist { .. } => "dist",
            Command::Measure { .. } => "measure",
            Command::Cut { .. } => "cut",
            Command::Profile { .. } => "profile",
            Command::Necklace => "necklace",
            Command::Verify => "verify",
        }
    }
}

fn point_value(s: &str) -> Result<Value> {
    let v = parse_list(s)?;
    anyhow::ensure!(v.len() == 3, "a point needs 3 coordinates, got `{s}`");
    Ok(serde_json::to_value(v)?)
}

impl Cli {
    fn flags(&self) -> Result<Map<String, Value>> {
        let g = &self.global;
        let mut m = Map::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        put(
            "out",
            g.out.as_ref().map(|p| p.display().to_string().into()),
        );
        put("seed", g.seed.map(Into::into));
        put("dims", g.dims.map(Into::into));
        put("quad_order", g.quad_order.map(Into::into));
        put("c", g.c.map(Into::into));
        put("eta", g.eta.map(Into::into));
        put("n_max", g.n_max.map(Into::into));
        put("eps", g.eps.map(Into::into));
        put("t", g.t.map(Into::into));
        put("log_axes", g.log.then_some(true.into()));

        let mut params = Map::new();
        match &self.command {
            Command::Dist { from, to, k } => {
                if let Some(s) = from {
                    params.insert("from".into(), point_value(s)?);
                }
                if let Some(s) = to {
                    params.insert("to".into(), point_value(s)?);
                }
                if let Some(k) = k {
                    params.insert("k".into(), (*k).into());
                }
            }
            Command::Measure {
                domain,
                save_domain,
            } => {
                if let Some(p) = domain {
                    params.insert("domain".into(), p.display().to_string().into());
                }
                if let Some(p) = save_domain {
                    params.insert("save_domain".into(), p.display().to_string().into());
                }
            }
            Command::Cut { domain } => {
                if let Some(p) = domain {
                    params.insert("domain".into(), p.display().to_string().into());
                }
            }
            Command::Profile { volumes, spaces } => {
                if let Some(s) = volumes {
                    params.insert("volumes".into(), serde_json::to_value(parse_list(s)?)?);
                }
                if let Some(s) = spaces {
                    params.insert("spaces".into(), s.clone().into());
                }
            }
            Command::Necklace | Command::Verify => {}
        }
        if !params.is_empty() {
            m.insert("params".into(), Value::Object(params));
        }
        Ok(m)
    }

    pub fn run(&self) -> Result<Status> {
        let name = self.command.name();
        let cfg = RunConfig::resolve(name, self.global.config.as_deref(), self.flags()?)?;
        match self.command {
            Command::Dist { .. } => commands::dist(&cfg),
            Command::Measure { .. } => commands::measure(&cfg),
            Command::Cut { .. } => commands::cut(&cfg),
            Command::Profile { .. } => commands::profile(&cfg),
            Command::Necklace => commands::necklace(&cfg),
            Command::Verify => commands::verify(&cfg),
        }
    }
}

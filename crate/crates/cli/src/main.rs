//! `fdiv`: f-divergences of convex bodies from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fdiv_core::surface_body::divergence_via_limit;
use fdiv_core::{
    f_divergence_with, kl_divergence, lp_asa, mixed_divergence, renyi, verify, Body, DivergenceResult, Direction,
    LadderConfig, Matrix, Normalization, QuadratureConfig, Report,
};
use output::{err, ext, num, Table};
use spec::{load_body, GenSpec};

#[derive(Parser)]
#[command(name = "fdiv", version, about = "f-divergences of convex bodies with respect to their cone measures")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Nodes of the circle rule.
    #[arg(long, global = true, value_name = "M")]
    quadrature: Option<usize>,
    /// Level of the product rule on the 2-sphere.
    #[arg(long, global = true, value_name = "L")]
    sphere_level: Option<usize>,
    /// Integrate ellipsoids numerically instead of using the closed form.
    #[arg(long, global = true)]
    force_quadrature: bool,
    /// Tolerance for check reports.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Accepted and ignored; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Pq,
    Qp,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Pq => Direction::PQ,
            Dir::Qp => Direction::QP,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Normalized,
    Tilde,
}

#[derive(Subcommand)]
enum Command {
    /// One divergence: value, error, branch.
    Divergence {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        generator: GenSpec,
        #[arg(long, value_enum, default_value = "pq")]
        direction: Dir,
        #[arg(long, value_enum, default_value = "normalized")]
        mode: Mode,
    },
    /// L_p affine surface area.
    Asa {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
    },
    /// Relative entropy.
    Kl {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value = "pq")]
        direction: Dir,
    },
    /// Rényi divergence of order alpha.
    Renyi {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Mixed divergence of n bodies in dimension n.
    Mixed {
        #[arg(long, value_delimiter = ',', required = true)]
        bodies: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<GenSpec>,
        #[arg(long, value_enum, default_value = "pq")]
        direction: Dir,
    },
    /// Volume and polar volume.
    Polar {
        #[arg(long)]
        body: PathBuf,
    },
    /// Surface-body deficit ladder, extrapolated limit and the direct divergence.
    SurfaceLimit {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        generator: GenSpec,
        #[arg(long, value_enum, default_value = "pq")]
        direction: Dir,
        /// `s0,halvings`.
        #[arg(long, default_value = "0.2,6")]
        ladder: String,
        #[arg(long, default_value_t = 1024)]
        directions: usize,
    },
    /// Numerical checks with one pass/fail row each.
    Check {
        #[command(subcommand)]
        which: Check,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Linear invariance under the map `a,b,c,d` (row-major).
    Invariance {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        generator: GenSpec,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        map: Vec<f64>,
    },
    /// Valuation identity for the slabs cut by `⟨x, axis⟩ = lower` and `= upper`.
    Valuation {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        generator: GenSpec,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0")]
        axis: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lower: f64,
        #[arg(long, allow_hyphen_values = true)]
        upper: f64,
    },
    /// Lower and upper bounds and the ellipsoid and degenerate cases.
    Bounds {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        generator: GenSpec,
    },
}

enum Failure {
    Usage(String),
    Compute(fdiv_core::Error),
}

impl From<fdiv_core::Error> for Failure {
    fn from(e: fdiv_core::Error) -> Self {
        Failure::Compute(e)
    }
}

fn body(path: &Path) -> Result<Body, Failure> {
    load_body(path).map_err(Failure::Usage)
}

fn generator(g: &GenSpec, dim: usize) -> Result<fdiv_core::Gen, Failure> {
    g.build(dim).map_err(Failure::Usage)
}

fn result_table(d: &DivergenceResult<f64>) -> String {
    let mut t = Table::new(&["value", "error", "branch"]);
    t.row([ext(d.value), err(d.error), d.branch.to_string()]);
    t.finish()
}

fn report_table(r: &Report<f64>) -> String {
    let mut t = Table::new(&["check", "row", "lhs", "rhs", "slack", "passed"]);
    for row in &r.rows {
        t.row([r.check.to_string(), row.name.clone(), ext(row.lhs), ext(row.rhs), ext(row.slack), row.passed.to_string()]);
    }
    t.finish()
}

fn parse_ladder(text: &str) -> Result<LadderConfig<f64>, Failure> {
    let bad = || Failure::Usage(format!("--ladder expects `s0,halvings`, got `{text}`"));
    let (s0, k) = text.split_once(',').ok_or_else(bad)?;
    let s0 = s0.trim().parse::<f64>().map_err(|_| bad())?;
    let halvings = k.trim().parse::<usize>().map_err(|_| bad())?;
    Ok(LadderConfig { s0, halvings, ..Default::default() })
}

fn config(g: &Global) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::default();
    if let Some(m) = g.quadrature {
        cfg.circle_nodes = m;
    }
    if let Some(l) = g.sphere_level {
        cfg.sphere_level = l;
    }
    cfg.force_quadrature = g.force_quadrature;
    cfg
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = config(&cli.global);
    let tol = cli.global.tol;
    if !(tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    match cli.command {
        Command::Divergence { body: path, generator: g, direction, mode } => {
            let k = body(&path)?;
            let f = generator(&g, k.dim())?;
            let norm = match mode {
                Mode::Normalized => Normalization::Normalized,
                Mode::Tilde => Normalization::Tilde,
            };
            Ok(result_table(&f_divergence_with(&f, &k, direction.into(), norm, &cfg)?))
        }
        Command::Asa { body: path, p } => {
            let k = body(&path)?;
            let r = lp_asa(p, &k, &cfg)?;
            let mut t = Table::new(&["value", "error", "branch", "concave_family"]);
            t.row([ext(r.result.value), err(r.result.error), r.result.branch.to_string(), r.concave_family.to_string()]);
            Ok(t.finish())
        }
        Command::Kl { body: path, direction } => Ok(result_table(&kl_divergence(&body(&path)?, direction.into(), &cfg)?)),
        Command::Renyi { body: path, alpha } => {
            let r = renyi(&body(&path)?, alpha, &cfg)?;
            let mut t = Table::new(&["value", "source", "error", "branch", "degenerate"]);
            t.row([ext(r.value), ext(r.source.value), err(r.source.error), r.source.branch.to_string(), r.degenerate.to_string()]);
            Ok(t.finish())
        }
        Command::Mixed { bodies, generators, direction } => {
            let ks = bodies.iter().map(|p| body(p)).collect::<Result<Vec<_>, _>>()?;
            let dim = ks.first().map_or(0, Body::dim);
            let fs = generators.iter().map(|g| generator(g, dim)).collect::<Result<Vec<_>, _>>()?;
            Ok(result_table(&mixed_divergence(&ks, &fs, direction.into(), &cfg)?))
        }
        Command::Polar { body: path } => {
            let k = body(&path)?;
            let mut t = Table::new(&["polar_volume", "volume"]);
            t.row([num(k.polar_volume()), num(k.volume())]);
            Ok(t.finish())
        }
        Command::SurfaceLimit { body: path, generator: g, direction, ladder, directions } => {
            let k = body(&path)?;
            let f = generator(&g, k.dim())?;
            let ladder = LadderConfig { directions, ..parse_ladder(&ladder)? };
            let lim = divergence_via_limit(&k, &f, direction.into(), &ladder, &cfg)?;
            let direct = f_divergence_with(&f, &k, direction.into(), Normalization::Normalized, &cfg)?;
            let c2 = fdiv_core::surface_body::C2;
            let mut t = Table::new(&["s", "deficit", "scaled_deficit", "direct", "uncertainty", "limit"]);
            for &(s, d) in &lim.table {
                t.row([num(s), num(d), num(c2 * d / (s * s)), ext(direct.value), num(lim.uncertainty), num(lim.limit)]);
            }
            Ok(t.finish())
        }
        Command::Check { which } => {
            let report = match which {
                Check::Invariance { body: path, generator: g, map } => {
                    let k = body(&path)?;
                    let n = k.dim();
                    if map.len() != n * n {
                        return Err(Failure::Usage(format!("--map needs {} entries for a {n}-dimensional body", n * n)));
                    }
                    let rows: Vec<Vec<f64>> = map.chunks(n).map(<[f64]>::to_vec).collect();
                    let t = Matrix::from_rows(&rows).map_err(|e| Failure::Usage(e.to_string()))?;
                    verify::check_gl_invariance(&k, &generator(&g, n)?, &t, tol, &cfg)?
                }
                Check::Valuation { body: path, generator: g, axis, lower, upper } => {
                    let k = body(&path)?;
                    let [a, b] = axis[..] else {
                        return Err(Failure::Usage("--axis needs two entries".into()));
                    };
                    verify::check_valuation(&k, [a, b], lower, upper, &generator(&g, k.dim())?, tol, &cfg)?
                }
                Check::Bounds { body: path, generator: g } => {
                    let k = body(&path)?;
                    verify::check_bounds(&k, &generator(&g, k.dim())?, &cfg)?
                }
            };
            Ok(report_table(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

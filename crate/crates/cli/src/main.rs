//! `tropmod`: command-line front end.
//!
//! Exit status is 0 on success, 1 on user error (bad arguments, malformed
//! input, refused scale) and 2 when an internal invariant fails.

mod render;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use tropmod_core::compare::coverage_with;
use tropmod_core::cone::{float, fiber, product_dist, separation, stratum_of, ConeMode, ExtendedPoint};
use tropmod_core::contraction::{betti_decomposition, contract_ids};
use tropmod_core::enumerate::{
    enumerate_regular_with, enumerate_stable_weighted_with, enumerate_regular_by_growth_with,
};
use tropmod_core::io::{parse_graph, parse_point};
use tropmod_core::iso::{aut_counts, automorphisms, canonical_form, CanonicalKey};
use tropmod_core::strata::strata_of_with;
use tropmod_core::{Limits, WeightedGraph};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] tropmod_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_integrity() => 2,
            _ => 1,
        }
    }
}

type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Parser)]
#[command(name = "tropmod", version, about = "Moduli of tropicalizations of pointed Riemann surfaces")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Md,
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    leaves: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Regular tropicalizations (connected, trivalent, weight 0) of type (g, n).
    GenRegular {
        #[command(flatten)]
        ty: TypeArgs,
        /// Use the growth generator instead of half-edge pairing.
        #[arg(long)]
        growth: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stable weighted graphs of type (g, n).
    GenStable {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Weighted contraction of a set of edges.
    Contract {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated edge ids; empty for the identity contraction.
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Automorphism group: order, edge action, kernel and generators.
    Aut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stratification poset of the compactified cone over a base graph.
    Strata {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also write the Hasse diagram here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also write the JSON poset here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Stratum, contracted graph and surviving lengths of a point.
    ClassifyPoint {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// All points identified with a point by the quotient.
    Fiber {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Product distance between two points over the same base.
    Dist {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        /// Distance between fibers instead of between the points.
        #[arg(long)]
        quotient: bool,
        /// Evaluate in floating point.
        #[arg(long)]
        float: bool,
        /// Float-mode values below this print as 0.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Map from strata to nodal classes for every regular base of type (g, n).
    Compare {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Markdown report: census, strata and coverage tables for type (g, n).
    Report {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn unsupported(format: Format, command: &str) -> CliError {
    CliError::Usage(format!("format {format:?} is not available for {command}").to_lowercase())
}

fn keyed(graphs: &[WeightedGraph]) -> Result<Vec<CanonicalKey>> {
    Ok(graphs.iter().map(canonical_form).collect::<Result<_, _>>()?)
}

fn graph_list(title: &str, graphs: &[WeightedGraph], ty: &TypeArgs, format: Format, command: &str) -> Result<String> {
    let keys = keyed(graphs)?;
    Ok(match format {
        Format::Json => render::graph_list_json(&keys, graphs, ty.genus, ty.leaves),
        Format::Csv => render::graph_list_csv(&keys, graphs),
        Format::Md => render::graph_list_md(title, &keys, graphs),
        Format::Dot => return Err(unsupported(format, command)),
    })
}

fn load_point(path: &Path) -> Result<ExtendedPoint> {
    Ok(parse_point(&read(path)?)?)
}

fn format_radians(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

fn run(cli: Cli) -> Result<String> {
    let limits = &Limits::from_env();
    match cli.command {
        Command::GenRegular { ty, growth, format } => {
            let graphs = if growth {
                enumerate_regular_by_growth_with(ty.genus, ty.leaves, limits)?
            } else {
                enumerate_regular_with(ty.genus, ty.leaves, limits)?
            };
            let title = format!("Regular tropicalizations of type ({}, {})", ty.genus, ty.leaves);
            graph_list(&title, &graphs, &ty, format, "gen-regular")
        }
        Command::GenStable { ty, format } => {
            let graphs = enumerate_stable_weighted_with(ty.genus, ty.leaves, limits)?;
            let title = format!("Stable weighted graphs of type ({}, {})", ty.genus, ty.leaves);
            graph_list(&title, &graphs, &ty, format, "gen-stable")
        }
        Command::Contract { graph, edges, format } => {
            let g = parse_graph(&read(&graph)?)?;
            let ids: Vec<&str> = edges.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let c = contract_ids(&g, &ids)?;
            match format {
                Format::Json => Ok(render::contraction_json(&c, &betti_decomposition(&c)?)),
                Format::Dot => Ok(render::graph_dot(&c.result)),
                _ => Err(unsupported(format, "contract")),
            }
        }
        Command::Aut { graph, format } => {
            let g = parse_graph(&read(&graph)?)?;
            let counts = aut_counts(&g)?;
            let group = match automorphisms(&g) {
                Ok(group) => Some(group),
                Err(tropmod_core::Error::GroupTooLarge(_)) => None,
                Err(e) => return Err(e.into()),
            };
            match format {
                Format::Json => Ok(render::aut_json(&counts, group.as_ref(), &g)),
                Format::Md => Ok(render::aut_md(&counts, group.as_ref(), &g)),
                _ => Err(unsupported(format, "aut")),
            }
        }
        Command::Strata { graph, format, dot, json } => {
            let g = parse_graph(&read(&graph)?)?;
            let p = strata_of_with(&g, limits)?;
            if let Some(path) = dot {
                write(&path, &render::strata_dot(&p))?;
            }
            if let Some(path) = json {
                write(&path, &render::strata_json(&p))?;
            }
            Ok(match format {
                Format::Json => render::strata_json(&p),
                Format::Dot => render::strata_dot(&p),
                Format::Csv => render::strata_csv(&p),
                Format::Md => render::strata_md(&p),
            })
        }
        Command::ClassifyPoint { point, format } => {
            let p = load_point(&point)?;
            let s = stratum_of(&p)?;
            let key = canonical_form(s.graph())?;
            match format {
                Format::Json => Ok(render::classify_json(&s, p.base(), &key)),
                Format::Dot => Ok(render::graph_dot(s.graph())),
                _ => Err(unsupported(format, "classify-point")),
            }
        }
        Command::Fiber { point, format } => {
            let points = fiber(&load_point(&point)?)?;
            match format {
                Format::Json => Ok(render::fiber_json(&points)),
                Format::Csv => Ok(render::fiber_csv(&points)),
                _ => Err(unsupported(format, "fiber")),
            }
        }
        Command::Dist {
            p,
            q,
            quotient,
            float: float_mode,
            tolerance,
            format,
        } => {
            let (p, q) = (load_point(&p)?, load_point(&q)?);
            if p.mode() == ConeMode::Closed || q.mode() == ConeMode::Closed {
                return Err(tropmod_core::Error::ClosedCone.into());
            }
            let (radians, gap) = if float_mode {
                if quotient {
                    return Err(CliError::Usage("--quotient is exact only; drop --float".into()));
                }
                if p.base() != q.base() {
                    return Err(tropmod_core::Error::MismatchedBase.into());
                }
                let ts = |x: &ExtendedPoint| -> Vec<f64> {
                    x.coords().iter().map(|c| c.angle() / std::f64::consts::TAU).collect()
                };
                let d = float::product_dist(&ts(&p), &ts(&q));
                (if d < tolerance { 0.0 } else { d }, None)
            } else {
                let d = if quotient { separation(&p, &q)? } else { product_dist(&p, &q)? };
                (d.radians(), Some(d.gap.to_string()))
            };
            match format {
                None => Ok(format!("{}\n", format_radians(radians))),
                Some(Format::Json) => Ok(render::pretty(&serde_json::json!({
                    "distance": radians,
                    "gap": gap,
                    "quotient": quotient,
                }))),
                Some(other) => Err(unsupported(other, "dist")),
            }
        }
        Command::Compare { ty, format, csv, dot } => {
            let report = coverage_with(ty.genus, ty.leaves, limits)?;
            if let Some(path) = csv {
                write(&path, &render::coverage_csv(&report))?;
            }
            if let Some(path) = dot {
                write(&path, &render::coverage_dot(&report))?;
            }
            Ok(match format {
                Format::Csv => render::coverage_csv(&report),
                Format::Json => render::coverage_json(&report),
                Format::Dot => render::coverage_dot(&report),
                Format::Md => render::coverage_md(&report),
            })
        }
        Command::Report { ty, out } => {
            let text = report(&ty, limits)?;
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn report(ty: &TypeArgs, limits: &Limits) -> Result<String> {
    let regular = enumerate_regular_with(ty.genus, ty.leaves, limits)?;
    let stable = enumerate_stable_weighted_with(ty.genus, ty.leaves, limits)?;
    let cov = coverage_with(ty.genus, ty.leaves, limits)?;
    let mut out = format!("# tropmod report, (g, n) = ({}, {})\n\n", ty.genus, ty.leaves);
    let _ = writeln!(
        out,
        "## Census\n\n| family | classes |\n|---|---|\n| regular tropicalizations | {} |\n| stable weighted graphs | {} |\n",
        regular.len(),
        stable.len()
    );
    out.push_str("## Strata per regular base\n\n| base | strata | dimensions | Hasse edges |\n|---|---|---|---|\n");
    for b in &cov.bases {
        let dims: Vec<String> = b.poset.dimensions().iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            out,
            "| `{}` | {} | {} | {} |",
            b.base_key,
            b.poset.strata.len(),
            dims.join(" "),
            b.poset.hasse.len()
        );
    }
    out.push('\n');
    out.push_str(&render::coverage_md(&cov));
    let _ = writeln!(
        out,
        "\n_limits: generation {} edges, strata {} edges_",
        limits.generation_edges, limits.strata_edges
    );
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

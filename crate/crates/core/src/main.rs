use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vrac_spanner::geometry::{AnchorConfig, CoordVariant};
use vrac_spanner::graph::{check_planarity, generate_random_udg, io as gio, Rect, UnitDiskGraph};
use vrac_spanner::harness::{default_r_values, emit_csv, render_svg, run_experiment, ExperimentConfig};
use vrac_spanner::planarizer::{build, BuildMode, PlanarOverlay};
use vrac_spanner::routing::{Outcome, Router, RouterConfig};
use vrac_spanner::NodeId;

/// Planar spanners from virtual raw anchor coordinates, and Zig-Zag routing.
#[derive(Parser)]
#[command(name = "vrac-sim", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Height,
    Euclidean,
}

impl From<Variant> for CoordVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Height => CoordVariant::TriangleHeight,
            Variant::Euclidean => CoordVariant::EuclideanDistance,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    GtildeCapped,
    GtildePrime,
    EuclideanAnnounce,
}

impl From<Mode> for BuildMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::GtildeCapped => BuildMode::GtildeCapped,
            Mode::GtildePrime => BuildMode::GtildePrime,
            Mode::EuclideanAnnounce => BuildMode::EuclideanAnnounce,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Zigzag,
    Greedy,
}

#[derive(Subcommand)]
enum Command {
    /// Random deployment in the unit square under the default anchors.
    Generate {
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Variant::Height)]
        variant: Variant,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an overlay for a graph file and write its edge set.
    Planarize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::GtildePrime)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Route one message and print `node mode dist_to_target` per hop.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        overlay: PathBuf,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long, value_enum, default_value_t = Algo::Zigzag)]
        algo: Algo,
    },
    /// Run the radius sweep and write one CSV row per radius.
    Experiment {
        #[arg(long, default_value_t = 300)]
        n: usize,
        /// Comma-separated radii; defaults to 0.11..0.225.
        #[arg(long, value_delimiter = ',')]
        r_values: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
        /// 100 trials per radius instead of 1000.
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = 30)]
        routes: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Variant::Height)]
        variant: Variant,
        /// Directory for `experiment.csv` when `--out` is not given.
        #[arg(long, env = "VRAC_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a graph, its overlay and optionally one route as SVG.
    Render {
        #[arg(long)]
        graph: PathBuf,
        /// Edge file; the virtual-edge overlay is built when omitted.
        #[arg(long)]
        overlay: Option<PathBuf>,
        #[arg(long, requires = "to")]
        from: Option<u32>,
        #[arg(long, requires = "from")]
        to: Option<u32>,
        #[arg(long, value_enum, default_value_t = Algo::Zigzag)]
        algo: Algo,
        #[arg(long)]
        out: PathBuf,
    },
}

type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

fn open(path: &Path) -> BoxResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn output(path: Option<&Path>) -> BoxResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| format!("{}: {e}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_overlay<'g>(g: &'g UnitDiskGraph, path: Option<&Path>) -> BoxResult<PlanarOverlay<'g>> {
    Ok(match path {
        Some(p) => PlanarOverlay::from_edges(g, gio::read_edges(open(p)?)?)?,
        None => build(g, BuildMode::GtildePrime)?.0,
    })
}

fn run(cli: Cli) -> BoxResult<bool> {
    match cli.cmd {
        Command::Generate { n, r, seed, variant, out } => {
            let g = generate_random_udg(n, r, Rect::UNIT, AnchorConfig::unit_square_default(), variant.into(), seed)?;
            gio::write_graph(&g, output(out.as_deref())?)?;
            Ok(true)
        }
        Command::Planarize { graph, mode, out } => {
            let g = gio::read_graph(open(&graph)?)?;
            let (overlay, ledger) = build(&g, mode.into())?;
            let crossings = check_planarity(&g, overlay.edges())?;
            gio::write_edges(overlay.edges(), output(out.as_deref())?)?;
            eprintln!(
                "edges {} virtual {} ids_broadcast {} rounds {} crossings {}",
                overlay.edges().len(),
                overlay.virtual_count(),
                ledger.ids_broadcast,
                ledger.rounds,
                crossings.len()
            );
            Ok(crossings.is_empty())
        }
        Command::Route { graph, overlay, from, to, algo } => {
            let g = gio::read_graph(open(&graph)?)?;
            let overlay = load_overlay(&g, Some(&overlay))?;
            let router = Router::new(&overlay, RouterConfig::for_graph(&g))?;
            let (s, t) = (NodeId(from), NodeId(to));
            let trace = match algo {
                Algo::Zigzag => router.zigzag(s, t)?,
                Algo::Greedy => router.greedy(s, t)?,
            };
            let mut out = io::stdout().lock();
            writeln!(out, "{} start {}", s, g.dist(s, t)?)?;
            for hop in &trace.hops {
                writeln!(out, "{} {} {}", hop.node, hop.mode, g.dist(hop.node, t)?)?;
            }
            match trace.outcome {
                Outcome::Delivered => writeln!(out, "# delivered length {} hops {}", trace.euclid_length, trace.hop_count)?,
                Outcome::Failed(reason) => writeln!(out, "# failed {reason:?} after {} hops", trace.hop_count)?,
            }
            Ok(trace.delivered())
        }
        Command::Experiment { n, r_values, trials, fast, routes, seed, variant, out_dir, out } => {
            let cfg = ExperimentConfig {
                n,
                r_values: r_values.unwrap_or_else(default_r_values),
                trials_per_r: trials.unwrap_or(if fast { 100 } else { 1000 }),
                route_samples_per_trial: routes,
                seed,
                coordinate_variant: variant.into(),
                ..ExperimentConfig::default()
            };
            let records = run_experiment(&cfg)?;
            let path = out.unwrap_or_else(|| out_dir.join("experiment.csv"));
            emit_csv(&records, &path)?;
            for rec in &records {
                eprintln!(
                    "r={:.3} deg={:.2} virtual={:.3} zz_stretch={:.3} gr_stretch={:.3} zz_ok={:.3} gr_ok={:.3} ids={:.1} crossings={} aborted={}",
                    rec.r,
                    rec.avg_degree_udg,
                    rec.avg_virtual_edges,
                    rec.avg_zigzag_stretch.unwrap_or(f64::NAN),
                    rec.avg_greedy_stretch.unwrap_or(f64::NAN),
                    rec.zigzag_success_rate.unwrap_or(f64::NAN),
                    rec.greedy_success_rate.unwrap_or(f64::NAN),
                    rec.avg_ids_broadcast,
                    rec.planarity_violations,
                    rec.aborted_trials
                );
            }
            eprintln!("wrote {}", path.display());
            Ok(records.iter().all(|r| r.planarity_violations == 0 && r.aborted_trials == 0))
        }
        Command::Render { graph, overlay, from, to, algo, out } => {
            let g = gio::read_graph(open(&graph)?)?;
            let overlay = load_overlay(&g, overlay.as_deref())?;
            let trace = match (from, to) {
                (Some(s), Some(t)) => {
                    let router = Router::new(&overlay, RouterConfig::for_graph(&g))?;
                    Some(match algo {
                        Algo::Zigzag => router.zigzag(NodeId(s), NodeId(t))?,
                        Algo::Greedy => router.greedy(NodeId(s), NodeId(t))?,
                    })
                }
                _ => None,
            };
            render_svg(&g, &overlay, trace.as_ref(), &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

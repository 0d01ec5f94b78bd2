mod commands;
mod config;
mod record;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::ConfigFile;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Casimir energies and forces between perfect conductors")]
struct Cli {
    /// `key = value` run file; flags given here override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// write the result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// directory for cached Ψ samples (mesh runs)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Derjaguin,
    TwoScatter,
    Full,
}

impl MethodArg {
    pub fn tag(self) -> &'static str {
        match self {
            MethodArg::Exact => "exact",
            MethodArg::Derjaguin => "derjaguin",
            MethodArg::TwoScatter => "two-scatter",
            MethodArg::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Sphere,
    Cylinder,
    Plates,
    SpherePlane,
    SpherePair,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepTarget {
    Plates,
    SpherePlane,
}

value_enum_from_str!(Format, MethodArg, Shape, SweepTarget);

#[derive(Subcommand, Debug)]
enum Command {
    /// Parallel plates: pressure, force and free energy
    Plates(PlatesArgs),
    /// Sphere above a plane
    SpherePlane(SpherePlaneArgs),
    /// Ψ(y) profile and free energy of a meshed geometry
    Mesh(MeshArgs),
    /// Interaction of two perpendicular wedges, with convergence report
    Wedge(WedgeArgs),
    /// Free-energy density near a curved foil
    Density(DensityArgs),
    /// Smoothed mode-density terms (wedges, folds, sphere)
    Modes(ModesArgs),
    /// One row per parameter point, for plotting
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Default)]
pub struct PlatesArgs {
    /// separation L (m)
    #[arg(long)]
    pub gap: Option<f64>,
    /// temperature (K)
    #[arg(long)]
    pub temp: Option<f64>,
    /// plate area (m²), default 1
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Args, Debug, Default)]
pub struct SpherePlaneArgs {
    /// sphere radius R (m)
    #[arg(long)]
    pub radius: Option<f64>,
    /// closest distance L (m)
    #[arg(long)]
    pub gap: Option<f64>,
    #[arg(long)]
    pub temp: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Args, Debug, Default)]
pub struct MeshArgs {
    #[arg(long, value_enum)]
    pub shape: Option<Shape>,
    /// sphere or cylinder radius (m)
    #[arg(long)]
    pub radius: Option<f64>,
    /// cylinder length (m)
    #[arg(long)]
    pub length: Option<f64>,
    /// closest distance between bodies (m)
    #[arg(long)]
    pub gap: Option<f64>,
    /// plate side (m)
    #[arg(long)]
    pub side: Option<f64>,
    /// target panel count
    #[arg(long)]
    pub panels: Option<usize>,
    /// mesh file for `--shape file`
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub temp: Option<f64>,
    /// keep only scatterings involving two different sheets (default: on for several sheets)
    #[arg(long)]
    pub interaction_only: Option<bool>,
    /// number of y samples
    #[arg(long)]
    pub n_y: Option<usize>,
    /// largest y in units of 1/ℓ (ℓ = gap, or the size of a single body), default 40
    #[arg(long)]
    pub y_max: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct WedgeArgs {
    /// half opening angle θ (rad)
    #[arg(long)]
    pub theta: Option<f64>,
    /// apex distance L (m)
    #[arg(long)]
    pub gap: Option<f64>,
    /// face extent in units of L
    #[arg(long)]
    pub size: Option<f64>,
    /// guard band in units of L
    #[arg(long)]
    pub guard: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct DensityArgs {
    /// distance from the surface (m)
    #[arg(long)]
    pub distance: Option<f64>,
    /// signed mean curvature radius (m), positive on the convex side
    #[arg(long, allow_hyphen_values = true)]
    pub curvature_radius: Option<f64>,
    #[arg(long)]
    pub temp: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct ModesArgs {
    /// fold or wedge angle (rad)
    #[arg(long)]
    pub theta: Option<f64>,
    /// wave number for the sphere Weyl terms (1/m)
    #[arg(long)]
    pub q: Option<f64>,
    /// sphere radius for the Weyl terms (m)
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub target: Option<SweepTarget>,
    /// `start:stop:count` (linear, inclusive) or a single value (m)
    #[arg(long)]
    pub gap: Option<String>,
    #[arg(long)]
    pub temp: Option<f64>,
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

fn merge(cmd: &mut Command, c: &ConfigFile) -> Result<()> {
    match cmd {
        Command::Plates(a) => {
            c.fill(&mut a.gap, "gap")?;
            c.fill(&mut a.temp, "temp")?;
            c.fill(&mut a.area, "area")?;
            c.fill(&mut a.method, "method")?;
        }
        Command::SpherePlane(a) => {
            c.fill(&mut a.radius, "radius")?;
            c.fill(&mut a.gap, "gap")?;
            c.fill(&mut a.temp, "temp")?;
            c.fill(&mut a.method, "method")?;
        }
        Command::Mesh(a) => {
            c.fill(&mut a.shape, "shape")?;
            c.fill(&mut a.radius, "radius")?;
            c.fill(&mut a.length, "length")?;
            c.fill(&mut a.gap, "gap")?;
            c.fill(&mut a.side, "side")?;
            c.fill(&mut a.panels, "panels")?;
            c.fill(&mut a.file, "file")?;
            c.fill(&mut a.method, "method")?;
            c.fill(&mut a.temp, "temp")?;
            c.fill(&mut a.interaction_only, "interaction_only")?;
            c.fill(&mut a.n_y, "n_y")?;
            c.fill(&mut a.y_max, "y_max")?;
        }
        Command::Wedge(a) => {
            c.fill(&mut a.theta, "theta")?;
            c.fill(&mut a.gap, "gap")?;
            c.fill(&mut a.size, "size")?;
            c.fill(&mut a.guard, "guard")?;
        }
        Command::Density(a) => {
            c.fill(&mut a.distance, "distance")?;
            c.fill(&mut a.curvature_radius, "curvature_radius")?;
            c.fill(&mut a.temp, "temp")?;
        }
        Command::Modes(a) => {
            c.fill(&mut a.theta, "theta")?;
            c.fill(&mut a.q, "q")?;
            c.fill(&mut a.radius, "radius")?;
        }
        Command::Sweep(a) => {
            c.fill(&mut a.target, "target")?;
            c.fill(&mut a.gap, "gap")?;
            c.fill(&mut a.temp, "temp")?;
            c.fill(&mut a.area, "area")?;
            c.fill(&mut a.radius, "radius")?;
            c.fill(&mut a.method, "method")?;
        }
    }
    Ok(())
}

fn command_from_name(name: &str) -> Result<Command> {
    Ok(match name {
        "plates" => Command::Plates(Default::default()),
        "sphere-plane" | "sphere_plane" => Command::SpherePlane(Default::default()),
        "mesh" => Command::Mesh(Default::default()),
        "wedge" => Command::Wedge(Default::default()),
        "density" => Command::Density(Default::default()),
        "modes" => Command::Modes(Default::default()),
        "sweep" => Command::Sweep(Default::default()),
        other => bail!("unknown command `{other}` in config"),
    })
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let mut cmd = match cli.command {
        Some(c) => c,
        None => match cfg.get::<String>("command")? {
            Some(name) => command_from_name(&name)?,
            None => bail!("no command given (pass one, or set `command = ...` in the config file)"),
        },
    };
    merge(&mut cmd, &cfg)?;
    let mut format = cli.format;
    cfg.fill(&mut format, "format")?;
    let mut output = cli.output;
    cfg.fill(&mut output, "output")?;
    let mut cache_dir = cli.cache_dir;
    cfg.fill(&mut cache_dir, "cache_dir")?;

    let is_sweep = matches!(cmd, Command::Sweep(_));
    let rec = match &cmd {
        Command::Plates(a) => commands::plates(a)?,
        Command::SpherePlane(a) => commands::sphere_plane(a)?,
        Command::Mesh(a) => commands::mesh(a, cache_dir.as_deref())?,
        Command::Wedge(a) => commands::wedge(a)?,
        Command::Density(a) => commands::density(a)?,
        Command::Modes(a) => commands::modes(a)?,
        Command::Sweep(a) => commands::sweep(a)?,
    };
    let format = format.unwrap_or(if is_sweep { Format::Csv } else { Format::Json });
    let text = match format {
        Format::Json => rec.to_json(),
        Format::Csv => rec.to_csv(),
    };
    match output {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

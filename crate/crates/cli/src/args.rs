use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "vdw",
    version,
    about = "Van der Waals energies of two atoms with electrons confined to 1, 2 or 3 dimensions",
    long_about = "Van der Waals energies of two atoms with electrons confined to 1, 2 or 3 dimensions.\n\n\
                  All quantities are in reduced units (k = e²/4πε₀ = 1, lengths in a, energies in k/a) \
                  unless --si is given."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact rational multipole expansion of the interaction.
    Expand(ExpandArgs),
    /// Ground-state coordinate moments of a single atom.
    Moments(MomentsArgs),
    /// Electrostatic potential of one atom at field points.
    Potential(PotentialArgs),
    /// Energy corrections against separation.
    Curve(CurveArgs),
    /// Exact energy of the dipole-coupled Drude pair.
    Exact(ExactArgs),
    /// Run the self-consistency and oracle checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dim: u8,
    /// Highest inverse power of R to keep.
    #[arg(long, default_value_t = 5)]
    pub order: u32,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AtomPreset {
    Drude,
    Ring,
    Hydrogen1d,
}

#[derive(Debug, Args)]
pub struct AtomArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dim: u8,
    #[arg(long, value_enum, default_value_t = AtomPreset::Drude)]
    pub atom: AtomPreset,
    /// Two-column radial density table `r ρ(r)`; overrides --atom.
    #[arg(long)]
    pub density_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub atom: AtomArgs,
    /// Highest total degree listed.
    #[arg(long, default_value_t = 4)]
    pub max_degree: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialMethodArg {
    Quadrature,
    Multipole3,
    Multipole5,
    All,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 3.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = 12.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub atom: AtomArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Angle from the electron manifold towards z, in degrees.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, value_enum, default_value_t = PotentialMethodArg::All)]
    pub method: PotentialMethodArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnergyPreset {
    /// ħω = k/(2a).
    Bohr,
    /// ħω from --hbar-omega, with --a and --k.
    Custom,
}

#[derive(Debug, Args)]
pub struct DrudeArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dim: u8,
    #[arg(long, value_enum, default_value_t = EnergyPreset::Bohr)]
    pub preset: EnergyPreset,
    /// Oscillator quantum ħω (custom preset), in the energy unit of --k/--a.
    #[arg(long)]
    pub hbar_omega: Option<f64>,
    /// Characteristic length a (metres with --si).
    #[arg(long)]
    pub a: Option<f64>,
    /// Coulomb constant k = e²/4πε₀ (J·m with --si).
    #[arg(long)]
    pub k: Option<f64>,
    /// Report energies in joules and separations in metres; needs --a and --k.
    #[arg(long)]
    pub si: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub drude: DrudeArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Add the independent-route values of each term.
    #[arg(long)]
    pub components: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub drude: DrudeArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Perturb one R⁻⁴ coefficient before the golden comparison.
    GoldenCoefficient,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    pub level: Level,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
    #[command(flatten)]
    pub out: OutputArgs,
}

//! `aptkit`: JSON-in, JSON-out access to the aptkit library.

mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use aptkit::FieldTag;
use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "aptkit", version, about = "Exact persistence, almost-module and fan computations")]
pub struct Cli {
    /// Coefficient field for rank computations: q, f2, f<p>.
    #[arg(long, global = true, env = "APTKIT_FIELD", default_value = "q", value_parser = parse_field)]
    pub field: FieldTag,
    /// JSON input file (`-` for stdin).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Named catalog entry used instead of `--input`.
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub group: Group,
}

fn parse_field(s: &str) -> Result<FieldTag, String> {
    s.parse::<FieldTag>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Polyhedral cones.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Fans.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Decorated barcodes.
    #[command(subcommand)]
    Barcode(BarcodeCmd),
    /// Interleaving distance.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Microlocal cut-off combinatorics.
    #[command(subcommand)]
    Cutoff(CutoffCmd),
    /// Novikov toric charts and gluing.
    #[command(subcommand)]
    Toric(ToricCmd),
    /// Finitely presented graded modules.
    #[command(subcommand)]
    Module(ModuleCmd),
}

#[derive(Debug, Subcommand)]
pub enum ConeCmd {
    /// The dual cone.
    Dual,
    /// Whether the cone contains no line.
    Proper,
    /// All faces.
    Faces,
}

#[derive(Debug, Subcommand)]
pub enum FanCmd {
    /// Check the fan axioms.
    Validate,
    /// Whether the support is the whole space.
    Complete,
    /// Separating vector of two cones.
    Separate(PairArgs),
    /// Support membership and star of a point.
    Support(PointArgs),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Id of the first cone.
    #[arg(long)]
    pub sigma1: String,
    /// Id of the second cone.
    #[arg(long)]
    pub sigma2: String,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Comma-separated rational coordinates, e.g. `1/2,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args)]
pub struct OtherArgs {
    /// JSON file with the second operand.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Catalog name of the second operand.
    #[arg(long)]
    pub other_catalog: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum BarcodeCmd {
    /// Dimension per degree at a grade.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// `T_c`: intervals move by `−c`.
    Shift {
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Derived Day convolution.
    Convolve(OtherArgs),
    /// Almost-normal form.
    Almostize,
    /// K₀ class in ℤ[ℚ].
    K0,
    /// Whether `τ_c` vanishes.
    Torsion {
        #[arg(long)]
        c: String,
    },
    /// Quotient by the constant (local) objects.
    QuotientLoc,
    /// Torsion-free Hom dimension.
    Homdim(OtherArgs),
}

#[derive(Debug, Subcommand)]
pub enum DistCmd {
    /// Interleaving distance and an optimal certificate.
    Compute(OtherArgs),
    /// Check an interleaving certificate.
    Verify {
        #[command(flatten)]
        other: OtherArgs,
        /// Certificate JSON file.
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct OffsetArgs {
    /// Offsets per ray id, as a JSON object, e.g. `{"r0": "1", "r1": "inf"}`.
    #[arg(long)]
    pub offsets: String,
}

#[derive(Debug, Subcommand)]
pub enum CutoffCmd {
    /// `Δ_Θ(d)`, or `Δ_Θ(d(θ))` with `--cone-id`.
    Delta {
        #[command(flatten)]
        offsets: OffsetArgs,
        #[arg(long)]
        cone_id: Option<String>,
    },
    /// Minkowski identity `Δ_Θ(d(θ)) = Δ_Θ(d) + int θ^∨` for one cone.
    Mink {
        #[command(flatten)]
        offsets: OffsetArgs,
        #[arg(long)]
        cone_id: String,
    },
    /// γ-basis witness for an open polyhedron (`--input`) and a point.
    BasisWitness {
        #[command(flatten)]
        point: PointArgs,
        /// Cone JSON file for γ.
        #[arg(long)]
        gamma: PathBuf,
    },
    /// Stalk cohomology of the star complex at a point.
    StarHomology(PointArgs),
    /// Convolution-unit check at every stratum.
    UnitCheck,
    /// `1_A ⋆ 1_B` for open polyhedra (`--input`, `--other`).
    IndicatorConvolve {
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GradingArgs {
    /// Grading group: `Q` or `1/k`.
    #[arg(long, default_value = "Q")]
    pub grading: String,
}

#[derive(Debug, Subcommand)]
pub enum ToricCmd {
    /// The whole atlas: charts, transitions, cocycles, boundary.
    Charts(GradingArgs),
    /// Gluing datum between two cones.
    Transition(PairArgs),
    /// Cocycle comparison on three cones.
    Cocycle {
        /// Three comma-separated cone ids.
        #[arg(long)]
        ids: String,
    },
    /// Idempotency of the boundary ideal of every chart.
    Boundary,
    /// Root-ladder level of a monomial exponent.
    RootLevel {
        #[arg(long)]
        cone_id: String,
        #[command(flatten)]
        point: PointArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModuleCmd {
    /// `dim_k M_a`.
    Eval {
        /// Comma-separated grade.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// `H₀` of the tensor product.
    Tensor(OtherArgs),
    /// Barcode of a 1-D presentation.
    Barcode,
    /// Presentation of a barcode (`--input` is a barcode).
    Present,
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli).and_then(|value| {
        let text = serde_json::to_string_pretty(&value)?;
        emit(&cli, &text)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            let text = serde_json::to_string_pretty(&e.to_json()).expect("error JSON");
            // Ignore a closed stdout: the exit code still reports the failure.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(e.exit_code())
        }
    }
}

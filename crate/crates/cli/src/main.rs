use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use decaykit_cli::output::{write_csv, write_json};
use decaykit_cli::spec::{parse_complex, parse_dipole};
use decaykit_cli::{
    exit, run_preset, run_scan, Axis, CliError, Format, MethodFlag, Model, Preset, PresetOptions, Range,
    ScanSpec, ScanTable,
};
use decaykit_core::medium::{PermittivityTable, DEFAULT_COUPLING_SQ};
use decaykit_core::ComplexPermittivity;

/// Spontaneous-decay rates and line shifts near absorbing dielectrics.
#[derive(Parser)]
#[command(name = "decaykit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter of one model.
    Scan(ScanArgs),
    /// Reproduce a figure: fig1-left, fig1-right, fig2-left, fig2-right, fig3, fig4.
    Preset(PresetArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Exit with status 3 if any point fails to evaluate.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// planar, real-cavity or virtual-cavity.
    #[arg(long)]
    model: Model,
    /// omega, distance (planar), radius (cavities) or index (real n, ε = n²).
    #[arg(long)]
    axis: Axis,
    /// start:stop:points.
    #[arg(long)]
    range: Range,
    /// Lorentz damping γ/ω_T.
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    /// Lorentz coupling ω_P²/ω_T².
    #[arg(long, default_value_t = DEFAULT_COUPLING_SQ)]
    coupling_sq: f64,
    /// Frequency-independent permittivity 're,im' instead of the Lorentz model.
    #[arg(long, conflicts_with = "eps_table")]
    eps: Option<String>,
    /// Tabulated permittivity: whitespace-separated 'omega re im' lines.
    #[arg(long)]
    eps_table: Option<PathBuf>,
    /// ω_A/ω_T when not scanned.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Planar distance qz = ω_A z / c when not scanned.
    #[arg(long)]
    qz: Option<f64>,
    /// Cavity size R ω_A / c when not scanned.
    #[arg(long)]
    size: Option<f64>,
    /// Dipole direction x,y,z.
    #[arg(long, default_value = "0,0,1")]
    dipole: String,
    /// quadrature | asymptotic | leading (planar), exact | small-radius (real cavity).
    #[arg(long)]
    method: Option<MethodFlag>,
    /// Include the frequency-integral term of the planar line shift.
    #[arg(long)]
    include_integral_term: bool,
    /// Upper cutoff of that integral, in units of ω_T.
    #[arg(long, default_value_t = ScanSpec::DEFAULT_OMEGA_MAX)]
    omega_max: f64,
    #[arg(long, default_value_t = ScanSpec::DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PresetArgs {
    name: Preset,
    /// Points per curve.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = ScanSpec::DEFAULT_TOL)]
    tol: f64,
    /// Leave the frequency-integral term out of the fig2 shifts.
    #[arg(long)]
    no_integral_term: bool,
    #[arg(long, default_value_t = ScanSpec::DEFAULT_OMEGA_MAX)]
    omega_max: f64,
    #[command(flatten)]
    out: OutputArgs,
}

fn permittivity(args: &ScanArgs) -> Result<ComplexPermittivity, CliError> {
    if let Some(eps) = &args.eps {
        return Ok(ComplexPermittivity::Constant(parse_complex(eps)?));
    }
    if let Some(path) = &args.eps_table {
        let file = File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
        return Ok(ComplexPermittivity::Table(PermittivityTable::parse(BufReader::new(file))?));
    }
    Ok(ComplexPermittivity::Lorentz {
        coupling_sq: args.coupling_sq,
        gamma: args.gamma,
    })
}

fn scan_spec(args: &ScanArgs) -> Result<ScanSpec, CliError> {
    let mut spec = ScanSpec::new(args.model, args.axis, args.range);
    spec.permittivity = permittivity(args)?;
    spec.omega = args.omega;
    spec.qz = args.qz;
    spec.size = args.size;
    spec.dipole = parse_dipole(&args.dipole)?;
    spec.method = args.method.unwrap_or(MethodFlag::default_for(args.model));
    spec.include_integral_term = args.include_integral_term;
    spec.omega_max = args.omega_max;
    spec.tol = args.tol;
    Ok(spec)
}

fn emit(table: &ScanTable, out: &OutputArgs) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &out.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match out.format {
        Format::Csv => write_csv(table, &mut sink)?,
        Format::Json => write_json(table, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (table, out) = match &cli.command {
        Command::Scan(args) => (run_scan(&scan_spec(args)?)?, &args.out),
        Command::Preset(args) => {
            let opts = PresetOptions {
                points: args.points,
                tol: args.tol,
                include_integral_term: !args.no_integral_term,
                omega_max: args.omega_max,
            };
            (run_preset(args.name, &opts)?, &args.out)
        }
    };
    emit(&table, out)?;
    let failed = table.rows.iter().filter(|r| r.is_error()).count();
    if failed > 0 {
        eprintln!("decaykit: {failed} of {} points failed to evaluate", table.rows.len());
        if out.strict {
            return Ok(exit::NUMERICAL);
        }
    }
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("decaykit: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}

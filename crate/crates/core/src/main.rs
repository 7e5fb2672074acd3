//! Scenario-driven CLI for GNS representations, reduced-state entropies and
//! gauge-entropy scans.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gnsrep::scenario::{Scenario, load_scenario};
use gnsrep::{decomposition, entropy};

#[derive(Parser)]
#[command(
    name = "gnsrep",
    about = "GNS representations of states on finite-dimensional C*-algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// GNS dimensions, Gram spectrum and null-ideal size
    Gns(CommonArgs),
    /// Multiplicities, uniqueness flag and the seeded density spectrum
    Reduce(CommonArgs),
    /// Spectrum and von Neumann entropy of the extracted density operator
    Entropy(CommonArgs),
    /// Max deviation between state restriction and partial trace
    Compare(CommonArgs),
    /// Entropies of gauge-deformed density operators over Haar draws
    ScanGauge(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (JSON)
    scenario: PathBuf,
    /// Seed override for decompositions and scans
    #[arg(long)]
    seed: Option<u64>,
    /// Relative null-space cutoff override
    #[arg(long)]
    tol: Option<f64>,
    /// Sample count override
    #[arg(long)]
    samples: Option<usize>,
    /// Run the local entropy ascent from the best scan sample
    #[arg(long)]
    refine: bool,
    /// Also print entropies in bits
    #[arg(long)]
    bits: bool,
    /// Write the Gram matrix as CSV of re,im pairs
    #[arg(long, value_name = "PATH")]
    dump_gram: Option<PathBuf>,
    /// Write the scan CSV to a file instead of standard output
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Print extra diagnostics
    #[arg(long)]
    verbose: bool,
}

impl CommonArgs {
    fn load(&self) -> gnsrep::Result<Scenario> {
        let mut scenario = load_scenario(&self.scenario)?;
        if let Some(seed) = self.seed {
            scenario.options.seed = seed;
        }
        if let Some(tol) = self.tol {
            scenario.options.tol = tol;
        }
        if let Some(samples) = self.samples {
            scenario.options.samples = samples;
        }
        Ok(scenario)
    }
}

/// Formats with 12 significant digits, plain decimal.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let decimals = (11 - x.abs().log10().floor() as i32).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn join_sig12(values: &[f64]) -> String {
    values.iter().map(|v| sig12(*v)).collect::<Vec<_>>().join(", ")
}

fn run_gns(args: &CommonArgs) -> gnsrep::Result<()> {
    let scenario = args.load()?;
    let gns = scenario.build_gns()?;
    println!("hilbert_dim = {}", gns.hilbert_dim());
    println!("null_dim = {}", gns.null_dim());
    println!("gram_spectrum = {}", join_sig12(gns.gram_spectrum()));
    if args.verbose {
        println!("cyclic = {}", gns.check_cyclic());
    }
    if let Some(path) = &args.dump_gram {
        let mut out = String::new();
        for i in 0..gns.gram().nrows() {
            let row: Vec<String> = (0..gns.gram().ncols())
                .flat_map(|j| {
                    let z = gns.gram()[(i, j)];
                    [format!("{}", z.re), format!("{}", z.im)]
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        std::fs::write(path, out)?;
    }
    Ok(())
}

fn run_reduce(args: &CommonArgs) -> gnsrep::Result<()> {
    let scenario = args.load()?;
    let gns = scenario.build_gns()?;
    let report = decomposition::multiplicities(&gns)?;
    println!("multiplicities:");
    for (dim, mult) in &report.census {
        println!("  irrep_dim {dim} x {mult}");
    }
    println!("unique = {}", report.unique);
    let family = decomposition::irreducible_projectors(&gns, scenario.options.seed)?;
    let rho = decomposition::density_from_projectors(&gns, &family)?;
    let spectrum = entropy::spectrum(&rho)?;
    println!("rho_spectrum = {}", join_sig12(spectrum.eigenvalues()));
    if args.verbose {
        println!("seed = {}", scenario.options.seed);
        println!(
            "pairing_deviation = {:.3e}",
            decomposition::verify_pairing(
                &gns,
                &rho,
                &scenario.effective_state()?,
                scenario.options.samples,
                scenario.options.seed,
            )?
        );
        println!(
            "note: gauge-deformed families conjugate the diagonal projections as \
             J pi(u p u*) J (adjoint on the right factor) so that each member \
             stays idempotent"
        );
    }
    Ok(())
}

fn run_entropy(args: &CommonArgs) -> gnsrep::Result<()> {
    let scenario = args.load()?;
    let (gns, _, spectrum, nats) = scenario.entropy_pipeline()?;
    if args.verbose {
        println!("hilbert_dim = {}", gns.hilbert_dim());
    }
    println!("spectrum = {}", join_sig12(&spectrum));
    println!("entropy_nats = {}", sig12(nats));
    if args.bits {
        println!("entropy_bits = {}", sig12(nats / std::f64::consts::LN_2));
    }
    Ok(())
}

fn run_compare(args: &CommonArgs) -> gnsrep::Result<()> {
    let scenario = args.load()?;
    let deviation = scenario.compare_deviation()?;
    println!("max_deviation = {deviation:.12e}");
    Ok(())
}

fn run_scan(args: &CommonArgs) -> gnsrep::Result<()> {
    let scenario = args.load()?;
    let report = scenario.scan_gauge(scenario.options.samples, scenario.options.seed, args.refine)?;

    let mut csv = String::from("sample,entropy_nats\n");
    for (index, s) in report.entropies.iter().enumerate() {
        csv.push_str(&format!("{index},{}\n", sig12(*s)));
    }
    match &args.csv {
        Some(path) => std::fs::write(path, &csv)?,
        None => print!("{csv}"),
    }

    let mut summary = format!(
        "baseline={} min={} max={}",
        sig12(report.baseline_entropy),
        sig12(report.min_entropy),
        sig12(report.max_entropy)
    );
    if let Some((refined, _)) = &report.refined {
        summary.push_str(&format!(" refined={}", sig12(*refined)));
    }
    println!("{summary}");
    if args.verbose {
        println!("seed = {}", report.seed);
        println!("argmax_index = {}", report.argmax_index);
        println!(
            "argmax_unitary_deviation = {:.3e}",
            report.argmax_unitary.unitary_deviation()
        );
        let n = scenario.effective_state()?.spec().blocks()[0];
        println!("entropy_bound_ln_n = {}", sig12((n as f64).ln()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gns(args) => run_gns(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Entropy(args) => run_entropy(args),
        Command::Compare(args) => run_compare(args),
        Command::ScanGauge(args) => run_scan(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

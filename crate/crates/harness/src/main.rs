use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncfourier_harness::commands::{self, Common, NormArgs, SpectrumArgs};

#[derive(Parser)]
#[command(name = "ncfourier", version, about = "Noncommutative Fourier analysis laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the verification suites; exit 1 on any violation.
    Verify(Common),
    /// Run only the exactly provable identities.
    Certify(Common),
    /// Estimate a multiplier norm from below and compare with the bound.
    Norm(NormArgs),
    /// Dump the singular value function as CSV with a norm summary.
    Spectrum(SpectrumArgs),
    /// Regenerate the calibration file from the cyclic(2)/cyclic(3) sweep.
    Calibrate(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Verify(c) => commands::verify(c),
        Cmd::Certify(c) => commands::certify(c),
        Cmd::Norm(a) => commands::norm(a),
        Cmd::Spectrum(a) => commands::spectrum(a),
        Cmd::Calibrate(c) => commands::calibrate(c),
    };
    match res {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

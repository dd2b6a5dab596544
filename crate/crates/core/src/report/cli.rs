use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use super::{compute, TwistSpec, DEFAULT_TRUNCATION};
use crate::error::Error;
use crate::rootsys::{CartanType, Family};
use crate::twist::AutomorphismSpec;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Poincaré series of twisted loop group classifying spaces.
#[derive(Debug, Parser)]
#[command(name = "twistloop", version)]
struct Args {
    /// Lie type family, A to G.
    #[arg(long = "type", value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    rank: usize,
    /// identity, flip, triality, triality2, or perm=i1,i2,... (1-based images of the simple roots).
    #[arg(long = "auto", default_value = "identity")]
    auto: String,
    #[arg(long = "truncate", default_value_t = DEFAULT_TRUNCATION)]
    truncate: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also count invariants directly when the group is small enough.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    let mut chars = s.chars();
    match (chars.next().map(|c| c.to_ascii_uppercase()), chars.next()) {
        (Some(c), None) => Family::from_letter(c).ok_or_else(|| format!("unknown family {s:?}")),
        _ => Err(format!("expected a single letter A-G, got {s:?}")),
    }
}

fn run(args: Args) -> Result<(), Error> {
    let cartan_type = CartanType::new(args.family, args.rank)?;
    let automorphism: AutomorphismSpec = args.auto.parse()?;
    let spec = TwistSpec::new(cartan_type, automorphism)
        .with_truncation(args.truncate)
        .with_workers(args.workers as usize)
        .with_oracle(args.check);
    let report = compute(&spec)?;
    let body = match args.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
    };
    match args.out {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Parses arguments, runs the pipeline, and returns the process exit code:
/// 0 on success, 1 on input errors, 2 when a resource cap is hit.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match run(args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_cap() {
                2
            } else {
                1
            }
        }
    }
}

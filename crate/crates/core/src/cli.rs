//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 unreadable or invalid input,
//! 4 a classification check failed. Results go to standard output and
//! diagnostics to standard error. A path of `-` reads standard input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::enumeration::{
    enumerate_levels, generating_script, main_fiber, verify_with, EnumerationOptions, TheoremReport,
};
use crate::fiber::{self, FiberConfig, FiberKind};
use crate::models::{grc_models, serialize_models};
use crate::render::{to_ascii, to_dot};
use crate::resolution::{resolve, serialize_report};
use crate::script::{apply_script, BlowUpScript};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_THEOREM: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "conic-fibers",
    version,
    about = "Degenerate fibres of conic-ruled surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the main fibre of a kind and level.
    Gen {
        #[arg(long, value_parser = parse_kind)]
        kind: FiberKind,
        #[arg(long)]
        level: usize,
        /// Self-intersection of the bisecant divisor to track.
        #[arg(long, allow_hyphen_values = true)]
        d_self: Option<i64>,
    },
    /// Apply a blow-up script to a configuration.
    Blowup { config: PathBuf, script: PathBuf },
    /// Print the resolution report of a configuration.
    Resolve { config: PathBuf },
    /// List all configurations of a level up to isomorphism.
    Enumerate {
        #[arg(long)]
        level: usize,
        /// Restrict centres as for main fibres.
        #[arg(long)]
        main_only: bool,
        /// Also write one config file per class and a manifest here.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Check the classification for every level up to the maximum.
    Verify {
        #[arg(long)]
        max_level: usize,
    },
    /// List the geometrically ruled models of a main fibre.
    Models { config: PathBuf },
    /// Draw a configuration.
    Render {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Dot)]
        format: RenderFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Dot,
    Ascii,
}

fn parse_kind(s: &str) -> Result<FiberKind, String> {
    s.parse::<FiberKind>().map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            if self.stdin_used {
                return Err(input_error("standard input can only be read once"));
            }
            self.stdin_used = true;
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| input_error(format!("reading standard input: {e}")))?;
            Ok(text)
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
    }

    fn config(&mut self, path: &PathBuf) -> Result<FiberConfig, Failure> {
        let text = self.read(path)?;
        fiber::parse(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }
}

fn verify_table(report: &TheoremReport) -> String {
    let mut out = String::new();
    for t in &report.levels {
        let _ = writeln!(
            out,
            "level {}: {} classes ({} main, {} non-main)",
            t.level, t.configs, t.main, t.non_main
        );
        for (signature, count) in &t.outcomes {
            let _ = writeln!(out, "  {count:>4}  {signature}");
        }
    }
    for f in &report.violations {
        let _ = writeln!(
            out,
            "violation at level {} [{}]: {}",
            f.level, f.key, f.reason
        );
    }
    for f in &report.claim_failures {
        let _ = writeln!(
            out,
            "claim failure at level {} [{}]: {}",
            f.level, f.key, f.reason
        );
    }
    let _ = writeln!(
        out,
        "{} violations, {} claim failures",
        report.violations.len(),
        report.claim_failures.len()
    );
    out
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<(String, u8), Failure> {
    let ok = |text: String| Ok((text, EXIT_OK));
    match command {
        Command::Gen {
            kind,
            level,
            d_self,
        } => {
            let config = match d_self {
                // replay the generating script so D^2 is tracked through it
                Some(d) => {
                    let script = generating_script(kind, level).map_err(input_error)?;
                    apply_script(&FiberConfig::smooth(Some(d)), &script).map_err(input_error)?
                }
                None => main_fiber(kind, level).map_err(input_error)?,
            };
            ok(fiber::serialize(&config))
        }
        Command::Blowup { config, script } => {
            let c = io.config(&config)?;
            let text = io.read(&script)?;
            let s: BlowUpScript = text
                .parse()
                .map_err(|e| input_error(format!("{}: {e}", script.display())))?;
            let out = apply_script(&c, &s).map_err(input_error)?;
            ok(fiber::serialize(&out))
        }
        Command::Resolve { config } => {
            let c = io.config(&config)?;
            let report = resolve(&c).map_err(input_error)?;
            ok(serialize_report(&report))
        }
        Command::Enumerate {
            level,
            main_only,
            export,
        } => {
            let options = EnumerationOptions {
                include_non_main: !main_only,
                ..EnumerationOptions::default()
            };
            let result = enumerate_levels(level, &options)
                .map_err(input_error)?
                .pop()
                .expect("level 0 is always present");
            if let Some(dir) = export {
                result
                    .export(&dir)
                    .map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
            }
            ok(result.manifest())
        }
        Command::Verify { max_level } => {
            let report =
                verify_with(max_level, &EnumerationOptions::default()).map_err(input_error)?;
            let code = if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_THEOREM
            };
            Ok((verify_table(&report), code))
        }
        Command::Models { config } => {
            let c = io.config(&config)?;
            let models = grc_models(&c).map_err(input_error)?;
            ok(serialize_models(&models))
        }
        Command::Render { config, format } => {
            let c = io.config(&config)?;
            ok(match format {
                RenderFormat::Dot => to_dot(&c),
                RenderFormat::Ascii => to_ascii(&c),
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io {
        stdin,
        stdin_used: false,
    };
    match execute(cli.command, &mut io) {
        Ok((text, code)) => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            let _ = stdout.flush();
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rtrivial::io::{analyze, cayley_dot, hasse_dot, lattice_summary, load, parse_spec, system_output, system_text};
use rtrivial::suite::invariant_suite;
use rtrivial::{e_system, verify_system, weak_preorder, Error, Mode, Monoid, RTriviality, WeaklyOrderedMonoid};

macro_rules! out {
    ($o:expr, $($t:tt)*) => {{
        let _ = write!($o, $($t)*);
    }};
}

macro_rules! outln {
    ($o:expr, $($t:tt)*) => {{
        let _ = writeln!($o, $($t)*);
    }};
}

const EXIT_VERIFICATION: u8 = 1;
const EXIT_NOT_R_TRIVIAL: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Primitive orthogonal idempotents for monoid algebras of finite R-trivial monoids.
///
/// A SPEC is either inline JSON (starting with `{`) or the path of a JSON file.
#[derive(Parser)]
#[command(name = "rtrivial", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, R- and J-triviality, chain length, semilattice size and weak-order axioms.
    Analyze {
        spec: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute and verify the system of idempotents e_J.
    Idempotents {
        spec: String,
        #[arg(long, default_value = "auto")]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the semilattice nodes and Hasse edges.
    Lattice {
        spec: String,
        /// Write the Hasse diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the right Cayley graph as DOT.
        #[arg(long)]
        cayley: Option<PathBuf>,
    },
    /// Run the complete invariant suite.
    Verify {
        spec: String,
        #[arg(long, default_value = "auto")]
        mode: Mode,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotRTrivial { .. } => EXIT_NOT_R_TRIVIAL,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::NonStabilizing { .. } | Error::Inconsistent(_) => EXIT_VERIFICATION,
        _ => EXIT_INPUT,
    }
}

fn read_spec(arg: &str) -> Result<Monoid, Error> {
    let text = if arg.trim_start().starts_with('{') { arg.to_owned() } else { fs::read_to_string(arg)? };
    load(&parse_spec(&text)?)
}

fn not_r_trivial(m: &Monoid, e: Error) -> Error {
    if let Error::NotRTrivial { x, y } = e {
        eprintln!(
            "monoid is not R-trivial: {} and {} generate the same right ideal",
            m.render_element(x),
            m.render_element(y)
        );
    }
    e
}

fn weakly_ordered(m: &Monoid) -> Result<WeaklyOrderedMonoid<'_>, Error> {
    WeaklyOrderedMonoid::new(m).map_err(|e| not_r_trivial(m, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents)?;
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn run(cli: Cli, out: &mut String) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze { spec, format } => {
            let m = read_spec(&spec)?;
            let a = analyze(&m)?;
            match format {
                Format::Json => outln!(out, "{}", to_json(&a)?),
                Format::Text => {
                    outln!(out, "size: {}", a.size);
                    outln!(out, "generators: {}", a.generators.join(", "));
                    outln!(out, "R-trivial: {}", a.r_trivial);
                    if let Some((x, y)) = &a.witness {
                        outln!(out, "witness: {x} and {y} generate the same right ideal");
                    }
                    outln!(out, "J-trivial: {}", a.j_trivial);
                    if let Some(l) = a.chain_length {
                        outln!(out, "chain length: {l}");
                    }
                    if let Some(n) = a.lattice_size {
                        outln!(out, "semilattice size: {n}");
                    }
                    if let Some(axioms) = &a.axioms {
                        out!(out, "{axioms}");
                    }
                }
            }
            Ok(match &a.axioms {
                None => EXIT_NOT_R_TRIVIAL,
                Some(r) if !r.passed() => EXIT_VERIFICATION,
                Some(_) => 0,
            })
        }
        Command::Idempotents { spec, mode, format } => {
            let m = read_spec(&spec)?;
            let w = weakly_ordered(&m)?;
            let sys = e_system(&w, mode)?;
            let report = verify_system(&w, &sys)?;
            let passed = report.passed();
            match format {
                Format::Json => outln!(out, "{}", to_json(&system_output(&w, &sys, report))?),
                Format::Text => out!(out, "{}", system_text(&w, &sys, &report)),
            }
            Ok(if passed { 0 } else { EXIT_VERIFICATION })
        }
        Command::Lattice { spec, dot, cayley } => {
            let m = read_spec(&spec)?;
            let w = weakly_ordered(&m)?;
            let l = w.lattice();
            for node in lattice_summary(&m, l) {
                outln!(out, "J{} {} |Se| = {}", node.node_id, node.label, node.ideal_size);
            }
            for (a, b) in l.hasse_edges() {
                outln!(out, "{} < {}", l.label(&m, a), l.label(&m, b));
            }
            if let Some(path) = dot {
                write_file(&path, &hasse_dot(&m, l))?;
            }
            if let Some(path) = cayley {
                write_file(&path, &cayley_dot(&m))?;
            }
            Ok(0)
        }
        Command::Verify { spec, mode } => {
            let m = read_spec(&spec)?;
            if let RTriviality::NotRTrivial { x, y } = rtrivial::order::is_r_trivial(&weak_preorder(&m)) {
                return Err(not_r_trivial(&m, Error::NotRTrivial { x, y }));
            }
            let (report, _) = invariant_suite(&m, mode)?;
            out!(out, "{report}");
            let failures = report.failures().count();
            if failures == 0 {
                outln!(out, "all {} checks passed", report.checks.len());
                Ok(0)
            } else {
                outln!(out, "{failures} of {} checks failed", report.checks.len());
                Ok(EXIT_VERIFICATION)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !matches!(e, Error::NotRTrivial { .. }) {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

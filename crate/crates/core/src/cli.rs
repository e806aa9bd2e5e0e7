//! The `mdi` command line.
//!
//! Exit status: 0 success, 1 an inconsistent conjunction, 2 bad usage or
//! input, 3 the oracle found the encoding unfaithful.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::encoder::{compile_encoding, EncodingTable};
use crate::features::validate_features;
use crate::hierarchy::{build_hierarchy, parse_declarations, Hierarchy, TypeConj};
use crate::oracle::{check_faithfulness, network_breakdown};
use crate::systemic::{count_possibilities, lift_disjunctions, parse_network, translate};
use crate::term::symbol_count;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNFAITHFUL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mdi", version, about = "Multi-dimensional type hierarchies compiled to terms")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a declaration file.
    Check { file: PathBuf },
    /// Print the term encoding of a type conjunction.
    Encode {
        file: PathBuf,
        #[arg(long = "type")]
        ty: String,
    },
    /// Conjoin two type conjunctions.
    Conj {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Translate a systemic network into declarations.
    Convert {
        network: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count complete classifications of a declaration file or network.
    Count { file: PathBuf },
    /// Per-type arity and template size.
    Stats { file: PathBuf },
    /// Check the encoding against the reference implementation.
    Oracle {
        file: PathBuf,
        /// Rename a functor in every template before checking, as `from=to`.
        #[arg(long, value_name = "FROM=TO")]
        corrupt: Option<String>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// `file:line:col: message` when the error carries a position.
fn located(path: &Path, has_span: bool, e: impl Display) -> Failure {
    if has_span {
        usage(format!("{}:{e}", path.display()))
    } else {
        usage(format!("{}: {e}", path.display()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_hierarchy(path: &Path) -> Result<(Hierarchy, EncodingTable), Failure> {
    let text = read(path)?;
    let decls = parse_declarations(&text).map_err(|e| located(path, true, e))?;
    let h = build_hierarchy(&decls).map_err(|e| located(path, e.span().is_some(), e))?;
    let feats = validate_features(&h, &decls.feature_decls).map_err(|e| located(path, true, e))?;
    let tab = compile_encoding(&h, &feats);
    Ok((h, tab))
}

fn conj(text: &str) -> Result<TypeConj, Failure> {
    TypeConj::parse(text).map_err(|e| usage(format!("`{text}`: {e}")))
}

fn is_network(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "sysnet")
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let lines = cli.format == Format::Lines;
    let io = |e: std::io::Error| usage(format!("write failed: {e}"));
    match &cli.command {
        Command::Check { file } => {
            let (h, tab) = load_hierarchy(file)?;
            for w in h.warnings() {
                writeln!(err, "{}:{w}", file.display()).map_err(io)?;
            }
            let root = h.name(h.root());
            if lines {
                writeln!(
                    out,
                    "types={}\ndimensions={}\nroot={root}\nmax_arity={}",
                    h.type_count(),
                    h.dims().len(),
                    tab.max_arity()
                )
                .map_err(io)?;
            } else {
                writeln!(out, "ok: {} types, {} dimensions, root `{root}`", h.type_count(), h.dims().len())
                    .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Encode { file, ty } => {
            let (h, tab) = load_hierarchy(file)?;
            let c = conj(ty)?;
            h.conj_ids(&c).map_err(|e| usage(e.to_string()))?;
            match tab.encode(&c) {
                Ok(t) => {
                    writeln!(out, "{t}").map_err(io)?;
                    Ok(EXIT_OK)
                }
                Err(_) => {
                    writeln!(out, "INCONSISTENT").map_err(io)?;
                    Ok(EXIT_INCONSISTENT)
                }
            }
        }
        Command::Conj { file, a, b } => {
            let (h, tab) = load_hierarchy(file)?;
            let (a, b) = (conj(a)?, conj(b)?);
            let joined = h.conjoin(&a, &b).map_err(|e| usage(e.to_string()))?;
            match joined {
                Some(c) => {
                    let t = tab.encode(&c).map_err(|e| usage(e.to_string()))?;
                    if lines {
                        writeln!(out, "types={c}\nterm={t}").map_err(io)?;
                    } else {
                        writeln!(out, "{c}\n{t}").map_err(io)?;
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "INCONSISTENT").map_err(io)?;
                    Ok(EXIT_INCONSISTENT)
                }
            }
        }
        Command::Convert { network, out: target } => {
            let text = read(network)?;
            let net = parse_network(&text).map_err(|e| located(network, e.span().is_some(), e))?;
            let lifted = lift_disjunctions(&net);
            let decls = translate(&lifted.network).map_err(|e| usage(e.to_string()))?;
            let h = build_hierarchy(&decls).map_err(|e| located(network, false, e))?;
            let rendered = decls.render();
            // the summary goes wherever the declarations do not
            let summary: &mut dyn Write = match target {
                Some(path) => {
                    std::fs::write(path, &rendered).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    out
                }
                None => {
                    write!(out, "{rendered}").map_err(io)?;
                    err
                }
            };
            for p in &lifted.pairs {
                writeln!(summary, "lifted `{}` into `{}` as {} / {}", p.target, p.enclosing, p.positive, p.negative)
                    .map_err(io)?;
            }
            writeln!(
                summary,
                "{} disjunctive entries lifted; {} types, {} dimensions",
                lifted.pairs.len(),
                h.type_count(),
                h.dims().len()
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Count { file } => {
            if is_network(file) {
                let text = read(file)?;
                let net = parse_network(&text).map_err(|e| located(file, e.span().is_some(), e))?;
                let decls = translate(&lift_disjunctions(&net).network).map_err(|e| usage(e.to_string()))?;
                let h = build_hierarchy(&decls).map_err(|e| located(file, false, e))?;
                let n = count_possibilities(&h);
                let breakdown = network_breakdown(&net).map_err(|e| usage(e.to_string()))?;
                if lines {
                    writeln!(out, "count={n}").map_err(io)?;
                    for (alt, k) in &breakdown {
                        writeln!(out, "{alt}={k}").map_err(io)?;
                    }
                } else {
                    writeln!(out, "{n} classifications").map_err(io)?;
                    for (alt, k) in &breakdown {
                        writeln!(out, "  {alt}: {k}").map_err(io)?;
                    }
                }
            } else {
                let (h, _) = load_hierarchy(file)?;
                let n = count_possibilities(&h);
                if lines {
                    writeln!(out, "count={n}").map_err(io)?;
                } else {
                    writeln!(out, "{n} classifications").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Stats { file } => {
            let (h, tab) = load_hierarchy(file)?;
            let stats = tab.stats();
            let max_symbols = stats.iter().map(|s| symbol_count(&s.template)).max().unwrap_or(0);
            if lines {
                for s in &stats {
                    writeln!(out, "{s}").map_err(io)?;
                }
                writeln!(out, "types={}\nmax_arity={}\nmax_symbols={max_symbols}", h.type_count(), tab.max_arity())
                    .map_err(io)?;
            } else {
                let width = stats.iter().map(|s| s.name.len()).max().unwrap_or(4).max(4);
                writeln!(out, "{:width$}  arity  symbols  template", "type").map_err(io)?;
                for s in &stats {
                    writeln!(out, "{:width$}  {:>5}  {:>7}  {}", s.name, s.arity, s.symbols, s.template).map_err(io)?;
                }
                writeln!(out, "{} types, max arity {}, max symbols {max_symbols}", h.type_count(), tab.max_arity())
                    .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Oracle { file, corrupt } => {
            let (h, mut tab) = load_hierarchy(file)?;
            if let Some(spec) = corrupt {
                let (from, to) =
                    spec.split_once('=').ok_or_else(|| usage(format!("--corrupt expects FROM=TO, got `{spec}`")))?;
                h.lookup(from).map_err(|e| usage(e.to_string()))?;
                tab = tab.with_renamed_functor(from, to);
            }
            let report = check_faithfulness(&tab);
            let text = if lines { report.to_lines() } else { report.to_text() };
            write!(out, "{text}").map_err(io)?;
            Ok(if report.is_faithful() { EXIT_OK } else { EXIT_UNFAITHFUL })
        }
    }
}

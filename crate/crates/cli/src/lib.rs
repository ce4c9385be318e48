//! Command-line front end. `run` parses arguments, dispatches to the
//! subcommand and maps library errors to exit codes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use burstlattice::constructions::{find_primitive_mode, ConditionMode};
use burstlattice::errorball::enumerate_ball;
use burstlattice::groups::first_collision;
use burstlattice::search::{search_splitting, SearchOptions, DEFAULT_NODE_BUDGET};
use burstlattice::tables::{goodq220_report, reproduce_table2, tables345_report, Table2Row};
use burstlattice::{
    ball_size, code_from_splitting, construct_cyclic_2_10, construct_noncyclic_2_10,
    construct_ralpha, construct_salpha, e_param, enumerate_abelian_groups, is_perfect_splitting,
    AbelianGroup, BallSpec, Error, FieldCtx, Family, SplittingSequence,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod specfile;

pub use specfile::CodeSpecFile;

pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const UNSUPPORTED: u8 = 2;
    pub const NOT_FOUND: u8 = 3;
    pub const RESOURCE: u8 = 4;
    pub const PARSE: u8 = 5;
    pub const USAGE: u8 = 64;
}

#[derive(Parser, Debug)]
#[command(name = "burstlattice", version, about = "Perfect lattice codes for bursts of limited-magnitude errors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size of an error ball, optionally listing its vectors.
    Ball {
        /// e.g. "n=3 b=2 kplus=1 kminus=0 cyclic=true"
        #[arg(long)]
        ball: BallSpec,
        #[arg(long)]
        list: bool,
    },
    /// Check that a sequence splits a group perfectly.
    Verify(CodeArgs),
    /// Build a splitting sequence from one of the explicit constructions.
    Construct(ConstructArgs),
    /// Exhaustive search for a perfect splitting.
    Search(SearchArgs),
    /// Reproduce a published table as a plain-text report.
    Tables(TablesArgs),
    /// Syndrome-decode a received vector.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Received vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Encode random messages, add random bursts and decode.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Message entries are drawn from [-m, m].
        #[arg(long, default_value_t = 1000)]
        magnitude: i64,
    },
}

/// A code given as a file or inline.
#[derive(Args, Debug)]
struct CodeArgs {
    /// Three-line code file: ball, group, sequence.
    #[arg(long, conflicts_with_all = ["ball", "group", "seq"])]
    code: Option<PathBuf>,
    #[arg(long, requires_all = ["group", "seq"])]
    ball: Option<BallSpec>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seq: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// Non-cyclic 2-bursts of (1,0) errors over Z_2n.
    N210,
    /// Cyclic 2-bursts of (1,0) errors over Z_(2n+1).
    C210,
    /// Powers of a primitive element, cyclic b-bursts over GF(q).
    Salpha,
    /// Interleaved sequence for 2-bursts of (1,1) errors over GF(q).
    Ralpha,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 2)]
    b: usize,
    #[arg(long, default_value_t = 1)]
    kplus: u32,
    #[arg(long, default_value_t = 0)]
    kminus: u32,
    /// Field element code of the primitive element; searched for when absent.
    #[arg(long)]
    alpha: Option<u64>,
    /// Use the fixed residue assignment (3-bursts of (1,1) errors only).
    #[arg(long)]
    fixed: bool,
    /// Write the code file here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    ball: BallSpec,
    #[arg(long)]
    group_order: Option<u64>,
    /// Search this group instead of the cyclic group of the given order.
    #[arg(long)]
    group: Option<String>,
    /// Search every Abelian group of the order; exit 3 when none splits.
    #[arg(long)]
    all_groups: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long)]
    no_prune_orbit: bool,
    #[arg(long)]
    no_prune_rotation: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "5")]
    Five,
    #[value(name = "goodq220")]
    GoodQ220,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = 1000)]
    qmax: u64,
    /// Restrict table 2 to one row (T44, T48, T45, T46).
    #[arg(long)]
    row: Option<Table2Row>,
    /// For tables 3-5, also find each row's splitting by search.
    #[arg(long)]
    search: bool,
}

/// Outcome of a subcommand that did not hit a library error.
type Exit = Result<u8, Error>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => exit::OK,
                clap::error::ErrorKind::ValueValidation => exit::PARSE,
                _ => exit::USAGE,
            };
            let _ = if code == exit::OK {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_code(&e)
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => exit::PARSE,
        Error::Parameter(_) | Error::Unsupported(_) => exit::UNSUPPORTED,
        Error::Resource(_) => exit::RESOURCE,
        Error::Precondition(_) | Error::ConditionUnsatisfied(_) | Error::Internal(_) => exit::VERIFY_FAILED,
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Resource(format!("writing output: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Exit {
    match cmd {
        Command::Ball { ball, list } => cmd_ball(&ball, list, out),
        Command::Verify(code) => cmd_verify(&code, out),
        Command::Construct(args) => cmd_construct(&args, out),
        Command::Search(args) => cmd_search(&args, out),
        Command::Tables(args) => cmd_tables(&args, out),
        Command::Decode { code, y } => cmd_decode(&code, &y, out),
        Command::Simulate {
            code,
            trials,
            seed,
            magnitude,
        } => cmd_simulate(&code, trials, seed, magnitude, out),
    }
}

fn load_code(args: &CodeArgs) -> Result<CodeSpecFile, Error> {
    match (&args.code, &args.ball, &args.group, &args.seq) {
        (Some(path), _, _, _) => CodeSpecFile::load(path),
        (None, Some(ball), Some(group), Some(seq)) => {
            let group: AbelianGroup = group.parse()?;
            CodeSpecFile::new(*ball, SplittingSequence::parse_elems(group, seq)?)
        }
        _ => Err(Error::Parse("give --code FILE or all of --ball, --group and --seq".into())),
    }
}

fn parse_vector(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in vector")))
        })
        .collect()
}

fn csv(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_ball(spec: &BallSpec, list: bool, out: &mut dyn Write) -> Exit {
    let size = ball_size(spec)?;
    let e = e_param(spec.b, spec.k_plus, spec.k_minus)?;
    writeln!(out, "{spec}\nsize={size} e={e}").map_err(io)?;
    if list {
        for v in enumerate_ball(spec)? {
            writeln!(out, "{v}").map_err(io)?;
        }
    }
    Ok(exit::OK)
}

fn cmd_verify(args: &CodeArgs, out: &mut dyn Write) -> Exit {
    let code = load_code(args)?;
    let spec = &code.ball;
    let s = &code.sequence;
    if s.len() != spec.n {
        return Err(Error::Parse(format!("sequence length {} differs from n={}", s.len(), spec.n)));
    }
    if let Some(c) = first_collision(spec, s)? {
        writeln!(out, "not a splitting\ncollision {c}").map_err(io)?;
        return Ok(exit::VERIFY_FAILED);
    }
    let size = ball_size(spec)?;
    if is_perfect_splitting(spec, s)? {
        writeln!(out, "perfect splitting of {} by {spec}", s.group).map_err(io)?;
        Ok(exit::OK)
    } else {
        writeln!(
            out,
            "splitting but not perfect: |ball|={size} |{}|={}",
            s.group,
            s.group.order()
        )
        .map_err(io)?;
        Ok(exit::VERIFY_FAILED)
    }
}

fn emit_code(file: &CodeSpecFile, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Error> {
    let text = file.to_string();
    if let Some(p) = path {
        fs::write(p, &text).map_err(|e| Error::Resource(format!("writing {}: {e}", p.display())))?;
    }
    out.write_all(text.as_bytes()).map_err(io)
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> Exit {
    let need_n = || a.n.ok_or_else(|| Error::Parse("--n is required for this kind".into()));
    let need_q = || a.q.ok_or_else(|| Error::Parse("--q is required for this kind".into()));
    let (ball, seq) = match a.kind {
        Kind::N210 => {
            let n = need_n()?;
            (BallSpec::noncyclic(n, 2, 1, 0)?, construct_noncyclic_2_10(n)?)
        }
        Kind::C210 => {
            let n = need_n()?;
            (BallSpec::cyclic(n, 2, 1, 0)?, construct_cyclic_2_10(n)?)
        }
        Kind::Salpha | Kind::Ralpha => {
            let f = Arc::new(FieldCtx::of_order(need_q()?)?);
            let family = match a.kind {
                Kind::Salpha => Family::burst(a.b, a.kplus, a.kminus),
                _ => Family::Interleaved,
            };
            let mode = if a.fixed {
                ConditionMode::FixedAssignment
            } else {
                ConditionMode::Coverage
            };
            if !family.admissible(f.order())? {
                return Err(Error::Unsupported(format!("q={} is not admissible for {family}", f.order())));
            }
            let alpha = match a.alpha {
                Some(code) => f.elem(code)?,
                None => match find_primitive_mode(&f, family, mode)? {
                    Some((alpha, report)) => {
                        writeln!(out, "# {report}").map_err(io)?;
                        alpha
                    }
                    None => {
                        writeln!(out, "no primitive element of GF({}) satisfies {family}", f.order())
                            .map_err(io)?;
                        return Ok(exit::NOT_FOUND);
                    }
                },
            };
            match a.kind {
                Kind::Salpha => {
                    let s = construct_salpha(&f, a.b, a.kplus, a.kminus, alpha, true)?;
                    (BallSpec::cyclic(s.len(), a.b, a.kplus, a.kminus)?, s)
                }
                _ => {
                    let s = construct_ralpha(&f, alpha, true)?;
                    (BallSpec::cyclic(s.len(), 2, 1, 1)?, s)
                }
            }
        }
    };
    emit_code(&CodeSpecFile::new(ball, seq)?, a.out.as_ref(), out)?;
    Ok(exit::OK)
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> Exit {
    let opts = SearchOptions {
        prune_orbit: !a.no_prune_orbit,
        prune_rotation: !a.no_prune_rotation,
        jobs: a.jobs.max(1),
        node_budget: a.budget,
        checkpoint: a.checkpoint.clone(),
        ..SearchOptions::default()
    };
    let groups = match (&a.group, a.group_order) {
        (Some(g), _) => vec![g.parse::<AbelianGroup>()?],
        (None, Some(order)) if a.all_groups => enumerate_abelian_groups(order)?,
        (None, Some(order)) => vec![AbelianGroup::cyclic(order)?],
        (None, None) => return Err(Error::Parse("give --group-order or --group".into())),
    };
    let mut any = false;
    for g in &groups {
        let report = search_splitting(&a.ball, g, &opts)?;
        match report.found() {
            Some(s) => {
                any = true;
                writeln!(out, "# found over {g} after {} nodes", report.nodes_visited).map_err(io)?;
                out.write_all(CodeSpecFile::new(a.ball, s.clone())?.to_string().as_bytes())
                    .map_err(io)?;
            }
            None => writeln!(out, "# none over {g} after {} nodes", report.nodes_visited).map_err(io)?,
        }
        if any && !a.all_groups {
            break;
        }
    }
    if !any && a.all_groups {
        writeln!(out, "no Abelian group of order {} is split by {}", groups[0].order(), a.ball)
            .map_err(io)?;
    }
    Ok(if any { exit::OK } else { exit::NOT_FOUND })
}

fn cmd_tables(a: &TablesArgs, out: &mut dyn Write) -> Exit {
    let search = SearchOptions::default();
    let search = a.search.then_some(&search);
    let text = match a.which {
        Which::Two => {
            let rows = match a.row {
                Some(r) => vec![r],
                None => Table2Row::ALL.to_vec(),
            };
            let mut text = String::new();
            for r in rows {
                text.push_str(&reproduce_table2(r, a.qmax)?.report());
            }
            text
        }
        Which::Three => tables345_report(3, search)?,
        Which::Four => tables345_report(4, search)?,
        Which::Five => tables345_report(5, search)?,
        Which::GoodQ220 => goodq220_report(a.qmax)?,
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(exit::OK)
}

fn cmd_decode(args: &CodeArgs, y: &str, out: &mut dyn Write) -> Exit {
    let file = load_code(args)?;
    let code = code_from_splitting(&file.ball, &file.sequence)?;
    let y = parse_vector(y)?;
    let (c, e) = code.decode(&y)?;
    writeln!(out, "codeword={}\nerror={e}", csv(&c)).map_err(io)?;
    Ok(exit::OK)
}

fn cmd_simulate(args: &CodeArgs, trials: u64, seed: u64, magnitude: i64, out: &mut dyn Write) -> Exit {
    let file = load_code(args)?;
    let code = code_from_splitting(&file.ball, &file.sequence)?;
    let r = code.simulate(trials, seed, magnitude.abs())?;
    writeln!(out, "trials={} successes={} failures={}", r.trials, r.successes, r.failures).map_err(io)?;
    Ok(if r.failures == 0 { exit::OK } else { exit::VERIFY_FAILED })
}

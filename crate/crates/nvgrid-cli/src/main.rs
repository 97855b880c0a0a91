//! `nvgrid`: canonical forms, group operations, words and experiments for
//! the higher-dimensional Thompson groups nV.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 validation error,
//! 4 missing/failed rewrite rule, 5 internal contract violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nvgrid::io::{parse_element, parse_word, render_element, render_word};
use nvgrid::metrics::{length_bounds, permutation_count_experiment, refinement_bound_suite};
use nvgrid::words::{normal_form_parts, render_verbose, RuleTable};
use nvgrid::{
    canon, gridify, interpret, normal_form, CoordTree, Element, Error, Point, Side, Word,
};

mod selfcheck;

#[derive(Parser)]
#[command(
    name = "nvgrid",
    version,
    about = "Exact computation in the Thompson groups nV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Source,
    Target,
}

#[derive(Args)]
struct OutputArg {
    /// Write to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize an element: unique reduced grid diagram with an
    /// `# leaves ... M ...` header
    Canon {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Decide equality of two elements via canonical forms
    Eq {
        left: PathBuf,
        right: PathBuf,
        /// Cross-check the canonical verdict against the refinement oracle
        #[arg(long)]
        verify: bool,
    },
    /// Compose two elements (the left file acts first)
    Compose {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Invert an element
    Invert {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Evaluate an element at an exact dyadic point
    Eval {
        input: PathBuf,
        /// Point as comma-separated dyadic rationals, e.g. "3/8,5/8"
        #[arg(long)]
        point: String,
    },
    /// Emit the canonical word P Pi N^-1 of a dim-2 element
    Word {
        input: PathBuf,
        /// List zero-exponent letters of the positive part
        #[arg(long)]
        zeros: bool,
        /// Grid the source (default) or the target
        #[arg(long, value_enum, default_value = "source")]
        side: SideArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Interpret a word file into an element
    Interp {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Rewrite a word onto the finite generating set
    Rewrite {
        input: PathBuf,
        /// Custom rule table file of `LHS := RHS` lines
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Highest index covered by the default rules
        #[arg(long, default_value_t = 16)]
        max_index: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Grid an element without reducing
    Grid {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "source")]
        side: SideArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Generate a seeded random element
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        budget: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Experiments and bound reports
    Stats {
        #[command(subcommand)]
        what: StatsCommand,
    },
    /// Run the self-consistency suite
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Refinement-bound suite over seeded random elements
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        budget: usize,
        /// Emit CSV instead of line-oriented text
        #[arg(long)]
        csv: bool,
    },
    /// Length bounds of one element
    Bounds { input: PathBuf },
    /// Factorial counting experiment on an all-right grid
    Perms {
        /// Per-coordinate leaf counts, e.g. "2,2"
        #[arg(long)]
        leaves: String,
        #[arg(long, default_value_t = 7)]
        cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Overlap(_)
        | Error::Gap(_)
        | Error::NotTreeGenerated(_)
        | Error::DimMismatch(_, _)
        | Error::CountMismatch(_, _)
        | Error::DimUnsupported(_)
        | Error::NegativeIndex { .. }
        | Error::CapExceeded(_, _) => 3,
        Error::NoRuleConfigured(_) | Error::RuleVerificationFailed { .. } => 4,
        Error::UnsupportedFamily(_) => 4,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: &OutputArg, text: String) -> Result<(), Error> {
    match &out.output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
        }
    }
}

fn side_of(arg: SideArg) -> Side {
    match arg {
        SideArg::Source => Side::Source,
        SideArg::Target => Side::Target,
    }
}

fn header_counts(counts: &[usize], m: usize) -> String {
    let leaves: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    format!("leaves {} M {m}", leaves.join(" "))
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Canon { input, out } => {
            let f = parse_element(&read(&input)?)?;
            let rgd = canon(&f);
            let text = render_element(
                &rgd.induced_element(),
                &[header_counts(&rgd.leaf_counts(), rgd.caret_count())],
            );
            emit(&out, text)
        }
        Command::Eq {
            left,
            right,
            verify,
        } => {
            let f = parse_element(&read(&left)?)?;
            let g = parse_element(&read(&right)?)?;
            if f.dim() != g.dim() {
                return Err(Error::DimMismatch(f.dim(), g.dim()));
            }
            let by_canon = canon(&f) == canon(&g);
            if verify {
                let by_oracle = f.equals(&g);
                if by_canon != by_oracle {
                    // canonical form disagreeing with the oracle is a bug
                    eprintln!(
                        "internal contract violation: canon says {by_canon}, oracle says {by_oracle}"
                    );
                    std::process::exit(5);
                }
            }
            println!("{}", if by_canon { "equal" } else { "distinct" });
            Ok(())
        }
        Command::Compose { left, right, out } => {
            let f = parse_element(&read(&left)?)?;
            let g = parse_element(&read(&right)?)?;
            emit(&out, render_element(&f.compose(&g)?, &[]))
        }
        Command::Invert { input, out } => {
            let f = parse_element(&read(&input)?)?;
            emit(&out, render_element(&f.invert(), &[]))
        }
        Command::Eval { input, point } => {
            let f = parse_element(&read(&input)?)?;
            let x = Point::parse(&point)?;
            if x.dim() != f.dim() {
                return Err(Error::DimMismatch(f.dim(), x.dim()));
            }
            println!("{}", f.evaluate(&x));
            Ok(())
        }
        Command::Word {
            input,
            zeros,
            side,
            out,
        } => {
            let f = parse_element(&read(&input)?)?;
            let text = match side_of(side) {
                Side::Source => word_text(&f, zeros)?,
                // target gridding: the inverse of the source-gridded word
                // of the inverse element
                Side::Target => {
                    if zeros {
                        let (pos, mid, neg) = normal_form_parts(&f.invert())?;
                        // inverse of P Pi N^-1 is N Pi^-1 P^-1; zeros apply
                        // to the positive part of the inverse factorization
                        let mut pieces = Vec::new();
                        let n = mid.inverse();
                        if !neg.is_empty() {
                            pieces.push(neg.to_string());
                        }
                        if !n.is_empty() {
                            pieces.push(n.to_string());
                        }
                        let p_inv = Word::from_letters(pos).inverse();
                        if !p_inv.is_empty() {
                            pieces.push(p_inv.to_string());
                        }
                        format!("{}\n", pieces.join(" "))
                    } else {
                        render_word(&normal_form(&f.invert())?.inverse())
                    }
                }
            };
            emit(&out, text)
        }
        Command::Interp { input, out } => {
            let w = parse_word(&read(&input)?)?;
            emit(&out, render_element(&interpret(&w)?, &[]))
        }
        Command::Rewrite {
            input,
            rules,
            max_index,
            out,
        } => {
            let w = parse_word(&read(&input)?)?;
            let table = match rules {
                Some(path) => RuleTable::parse(&read(&path)?)?,
                None => RuleTable::with_default_rules(max_index)?,
            };
            eprintln!("verified {} rewrite rules", table.rules().count());
            let rewritten = table.rewrite(&w)?;
            emit(&out, render_word(&rewritten))
        }
        Command::Grid { input, side, out } => {
            let f = parse_element(&read(&input)?)?;
            let gd = gridify(&f, side_of(side));
            let counts: Vec<String> = gd
                .coord_trees()
                .iter()
                .map(|t| t.leaf_count().to_string())
                .collect();
            let side_name = match gd.side() {
                Side::Source => "source",
                Side::Target => "target",
            };
            let header = format!(
                "grid {side_name} leaves {} cells {}",
                counts.join(" "),
                gd.cell_count()
            );
            emit(&out, render_element(&gd.induced_element(), &[header]))
        }
        Command::Random {
            seed,
            budget,
            dim,
            out,
        } => {
            if dim == 0 {
                return Err(Error::Parse("dimension must be at least 1".into()));
            }
            let f = Element::random(seed, dim, budget);
            emit(&out, render_element(&f, &[]))
        }
        Command::Stats { what } => run_stats(what),
        Command::Check { seed } => {
            if selfcheck::run(seed) {
                Ok(())
            } else {
                std::process::exit(5);
            }
        }
    }
}

fn word_text(f: &Element, zeros: bool) -> Result<String, Error> {
    if zeros {
        let (pos, mid, neg) = normal_form_parts(f)?;
        let mut pieces = Vec::new();
        if !pos.is_empty() {
            pieces.push(render_verbose(&pos));
        }
        if !mid.is_empty() {
            pieces.push(mid.to_string());
        }
        let n_inv = neg.inverse();
        if !n_inv.is_empty() {
            pieces.push(n_inv.to_string());
        }
        Ok(format!("{}\n", pieces.join(" ")))
    } else {
        Ok(render_word(&normal_form(f)?))
    }
}

fn run_stats(what: StatsCommand) -> Result<(), Error> {
    match what {
        StatsCommand::Suite {
            seed,
            trials,
            dim,
            budget,
            csv,
        } => {
            if dim == 0 {
                return Err(Error::Parse("dimension must be at least 1".into()));
            }
            let report = refinement_bound_suite(seed, trials, dim, budget);
            if csv {
                print!("{}", report.to_csv());
            } else {
                print!("{}", report.to_text());
            }
            if report.violations > 0 {
                std::process::exit(5);
            }
            Ok(())
        }
        StatsCommand::Bounds { input } => {
            let f = parse_element(&read(&input)?)?;
            let b = length_bounds(&f);
            println!(
                "M {} lower {:.6} upper {:.6} max_coord_carets {}",
                b.caret_count, b.lower, b.upper, b.max_coord_carets
            );
            Ok(())
        }
        StatsCommand::Perms { leaves, cap } => {
            let counts = leaves
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| Error::Parse(format!("bad leaf count {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let parts: Vec<CoordTree> = counts
                .iter()
                .map(|&n| CoordTree::all_right(n - 1))
                .collect();
            let r = permutation_count_experiment(&parts, cap)?;
            println!(
                "cells {} expected {} observed {}",
                r.cells, r.expected, r.observed
            );
            if r.observed != r.expected {
                std::process::exit(5);
            }
            Ok(())
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use oncross::classify::{classify, classify_with_oracle, theta_cardinality, IsoVerdict};
use oncross::lsection::{dual_r_cross_section, render_arrows, FullTreeDocument, MarkedTree};
use oncross::oracle::{
    brute_force_cross_sections, count_summary, verify_description_theorem, verify_dual_theorem, verify_l_theorem,
    SearchOptions, Verification,
};
use oncross::phi::{phi, phi_semigroup, theta_set};
use oncross::tree::{enumerate_decreasing, require_decreasing};
use oncross::{ConvexPartition, CrossSection, Error, GreenRelation, Limits, OrderedTree, Transformation};

/// Cross-sections of Green's relations on the order-preserving transformation
/// monoid O_n. Maps act on the right and compose left to right: x(ab) = (xa)b.
#[derive(Parser)]
#[command(name = "oncross", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List decreasing binary search trees on 1..n as JSON.
    EnumerateTrees {
        #[arg(long)]
        n: usize,
        /// List every binary search tree, decreasing or not.
        #[arg(long)]
        all: bool,
    },
    /// The R-cross-section of a decreasing tree, or one of its elements.
    Phi {
        #[arg(long)]
        tree: PathBuf,
        /// Only the element with this kernel, e.g. "1,2|3,4|5".
        #[arg(long)]
        partition: Option<String>,
        /// Print a kernel/map table instead of JSON.
        #[arg(long, conflicts_with = "partition")]
        table: bool,
    },
    /// Idempotents onto ω(x) for skeleton vertices x, with their count law.
    Theta {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        vertex: Option<u8>,
    },
    /// Compare a construction with exhaustive search.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        force: bool,
        /// Wall-time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Find every R- or L-cross-section of O_n by search.
    BruteForce {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "R")]
        relation: GreenRelation,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Decide whether two decreasing trees give isomorphic R-cross-sections.
    Classify {
        /// Two tree files.
        #[arg(long, num_args = 1, required = true)]
        tree: Vec<PathBuf>,
        /// Also search for an explicit isomorphism.
        #[arg(long)]
        oracle: bool,
    },
    /// Dual R-cross-section of O_{n+1} from an L-cross-section of O_n.
    Dual {
        #[arg(long = "l-section")]
        l_section: PathBuf,
        /// Value of the added constant: 1 or n+1.
        #[arg(long)]
        fix: String,
        /// Print each map beside its dual instead of JSON.
        #[arg(long)]
        arrows: bool,
    },
    /// L-cross-section of a respectful full binary tree.
    LSection {
        #[arg(long)]
        tree: PathBuf,
        /// Linear order of the points, e.g. "2,1,3"; defaults to 1..n.
        #[arg(long)]
        order: Option<String>,
    },
    /// Counts of maps, trees and cross-sections for n = 1..N.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Draw a tree.
    Render {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Description,
    LSections,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Dot,
    Json,
}

enum Failure {
    /// Bad input or arguments.
    Usage(String),
    /// A check ran and did not pass.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_tree(path: &Path) -> std::result::Result<OrderedTree, Failure> {
    read_json(path)
}

fn read_decreasing(path: &Path) -> std::result::Result<OrderedTree, Failure> {
    let t = read_tree(path)?;
    require_decreasing(&t).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(t)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&serde_json::to_string_pretty(value).expect("output types serialize"));
    emit("\n");
}

fn search_options(force: bool, budget: Option<f64>) -> std::result::Result<SearchOptions, Failure> {
    let budget = budget
        .map(|s| Duration::try_from_secs_f64(s).map_err(|e| Failure::Usage(format!("--budget: {e}"))))
        .transpose()?;
    Ok(SearchOptions { force, budget })
}

fn run(command: Command) -> Outcome {
    let limits = Limits::default();
    match command {
        Command::EnumerateTrees { n, all } => {
            let trees = if all {
                OrderedTree::all(n, &limits)?
            } else {
                enumerate_decreasing(n, &limits)?
            };
            print_json(&trees);
        }
        Command::Phi { tree, partition, table } => {
            let t = read_decreasing(&tree)?;
            if let Some(p) = partition {
                let k: ConvexPartition = p.parse()?;
                print_json(&phi(&t, &k)?);
            } else if table {
                emit(&phi_semigroup(&t)?.render_table());
            } else {
                print_json(&phi_semigroup(&t)?.to_cross_section());
            }
        }
        Command::Theta { tree, vertex } => {
            #[derive(Serialize)]
            struct Row {
                vertex: u8,
                cardinality: u64,
                members: Vec<Transformation>,
            }
            let t = read_decreasing(&tree)?;
            let s = phi_semigroup(&t)?;
            let vertices = match vertex {
                Some(x) => vec![x],
                None => t.skeleton(),
            };
            let mut rows = Vec::new();
            for x in vertices {
                let cardinality = theta_cardinality(&t, x)?;
                let set = theta_set(&s, x);
                set.check(&t)?;
                if set.len() as u64 != cardinality {
                    return Err(Failure::Verification(format!(
                        "vertex {x}: count law gives {cardinality}, found {}",
                        set.len()
                    )));
                }
                rows.push(Row {
                    vertex: x,
                    cardinality,
                    members: set.members,
                });
            }
            print_json(&rows);
        }
        Command::Verify {
            theorem,
            n,
            force,
            budget,
        } => {
            let options = search_options(force, budget)?;
            let limits = if force { Limits::unlimited() } else { limits };
            let v: Verification = match theorem {
                Theorem::Description => verify_description_theorem(n, &limits, &options)?,
                Theorem::LSections => verify_l_theorem(n, &limits, &options)?,
                Theorem::Dual => verify_dual_theorem(n, &limits, &options)?,
            };
            print_json(&v);
            if !v.passed() {
                return Err(Failure::Verification(format!(
                    "{} discrepancies",
                    v.discrepancies.len()
                )));
            }
        }
        Command::BruteForce {
            n,
            relation,
            force,
            budget,
        } => {
            #[derive(Serialize)]
            struct Report {
                n: usize,
                relation: GreenRelation,
                count: usize,
                nodes_explored: u64,
                found: Vec<CrossSection>,
            }
            let options = search_options(force, budget)?;
            let limits = if force { Limits::unlimited() } else { limits };
            let r = brute_force_cross_sections(n, relation, &limits, &options)?;
            // timing goes to stderr so stdout stays reproducible
            eprintln!("searched in {:.3}s", r.wall_time.as_secs_f64());
            print_json(&Report {
                n: r.n,
                relation: r.relation,
                count: r.found.len(),
                nodes_explored: r.nodes_explored,
                found: r.found,
            });
        }
        Command::Classify { tree, oracle } => {
            let [a, b] = <[PathBuf; 2]>::try_from(tree)
                .map_err(|v| Failure::Usage(format!("classify takes exactly two --tree files, got {}", v.len())))?;
            let (t1, t2) = (read_decreasing(&a)?, read_decreasing(&b)?);
            let verdict: IsoVerdict = if oracle {
                classify_with_oracle(&t1, &t2, &limits)?
            } else {
                classify(&t1, &t2)?
            };
            print_json(&verdict);
        }
        Command::Dual { l_section, fix, arrows } => {
            let l: CrossSection = read_json(&l_section)?;
            let n = l.n();
            let fix = parse_fix(&fix, n)?;
            if arrows {
                emit(&render_arrows(&l)?);
            }
            let r = dual_r_cross_section(&l, fix)?;
            if !arrows {
                print_json(&r);
            }
        }
        Command::LSection { tree, order } => {
            let doc: FullTreeDocument = read_json(&tree)?;
            let g = doc.to_tree()?;
            let marked = match order {
                Some(o) => {
                    let order = o
                        .split(',')
                        .map(|s| s.trim().parse::<u8>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Failure::Usage(format!("--order: {e}")))?;
                    MarkedTree::new(&g, &order)?
                }
                None => MarkedTree::natural(&g)?,
            };
            print_json(&marked.l_cross_section()?);
        }
        Command::Count { n } => {
            print_json(&count_summary(n, &limits)?);
        }
        Command::Render { tree, format } => {
            let t = read_tree(&tree)?;
            match format {
                Format::Ascii => emit(&t.render_ascii()),
                Format::Dot => emit(&t.render_dot()),
                Format::Json => print_json(&t),
            }
        }
    }
    Ok(())
}

fn parse_fix(text: &str, n: usize) -> std::result::Result<u8, Failure> {
    let value = match text.trim() {
        "1" => 1,
        "n+1" => n + 1,
        other => other
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("--fix must be 1 or n+1, got {other:?}")))?,
    };
    if value == 1 || value == n + 1 {
        Ok(value as u8)
    } else {
        Err(Failure::Usage(format!("--fix must be 1 or {}, got {value}", n + 1)))
    }
}

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use critgraph::classify::verdict_json;
use critgraph::constructive::{
    egyptian_check, egyptian_search, kn_witness_from_solution, parse_solution, seed_catalogue, trivial_group_structure,
    unit_witness, value_witness,
};
use critgraph::density::{density_certificate, empirical_density, progressions_from_certificate, union_density};
use critgraph::json::{int_array, int_value, matrix_from_json, parse_graph};
use critgraph::repro::{reproduce, target_ids};
use critgraph::sieve::{sieve, sieve_oracle, SieveMode};
use critgraph::structures::enumerate_structures;
use critgraph::{matrix_at, DiagonalAssignment, Error, Multigraph};

#[derive(Parser)]
#[command(name = "critgraph", version, about = "Values of det(Diag(x) - A_G) and arithmetical structures on multigraphs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the r = 2 seed catalogue and exit.
    #[arg(long)]
    seed_catalogue: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Any,
    Pd,
    PdCyclic,
    StructureZero,
}

impl From<Mode> for SieveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Any => SieveMode::Any,
            Mode::Pd => SieveMode::Pd,
            Mode::PdCyclic => SieveMode::PdCyclic,
            Mode::StructureZero => SieveMode::StructureZero,
        }
    }
}

#[derive(Args)]
struct GraphArg {
    /// Family name (A5, ~E7, C7+, K(2,3), cone(A3), banana(2), A3(2,1)) or JSON {"n":..,"edges":[[i,j,m],..]}.
    graph: String,
}

#[derive(Subcommand)]
enum Command {
    /// Determinant, positive definiteness and group at one diagonal.
    Eval {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, value_delimiter = ',')]
        diag: Vec<BigInt>,
    },
    /// Values of d_G up to --max with witnesses.
    Sieve {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, value_enum, default_value = "any")]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        r: u64,
        #[arg(long, default_value_t = 100)]
        max: u64,
        /// Per-coordinate upper bound (default: max + 2).
        #[arg(long = "box")]
        bx: Option<u64>,
        /// Unpruned scan of the whole box instead of the pruned search.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Arithmetical structures with diagonal entries in [r, bound].
    Structures {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 2)]
        r: u64,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Positive definite diagonal with the given determinant and cyclic group.
    Witness {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value = "1")]
        value: BigInt,
        #[arg(long, default_value_t = 2)]
        r: u64,
    },
    /// Arithmetical structure with trivial group.
    TrivialStructure {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Family, all-2 test, type and positivity verdict.
    Classify {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Coprime linear form certificate and the progressions it yields.
    Density {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 5)]
        budget: usize,
        /// Also sieve [0, N] and report the observed density.
        #[arg(long)]
        empirical: Option<u64>,
    },
    /// Invariant factors of M_G(diag), or of a matrix given as JSON {"rows": [[..],..]}.
    Snf {
        /// Graph, when --diag is given.
        graph: Option<String>,
        #[arg(long, value_delimiter = ',')]
        diag: Vec<BigInt>,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Search or check solutions of sum 1/y_i + 1/prod y_i = 1.
    Egyptian {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        min: u64,
        /// File with a solution to verify and turn into a K_n witness.
        #[arg(long)]
        check: Option<std::path::PathBuf>,
    },
    /// Re-run a published complement list.
    Reproduce {
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        max: Option<u64>,
        #[arg(long = "box")]
        bx: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Contract(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidFamily { .. } | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Contract(e.to_string()),
        }
    }
}

fn graph(g: &GraphArg) -> Result<Multigraph, Failure> {
    Ok(parse_graph(&g.graph)?)
}

fn phi_json(m: &critgraph::ExactMatrix) -> Value {
    int_array(&m.smith_normal_form().nontrivial())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.seed_catalogue {
        let cat: Vec<Value> = seed_catalogue(8)
            .into_iter()
            .map(|e| json!({"seed": e.family.to_string(), "diag": e.diag, "note": e.source}))
            .collect();
        println!("{}", json!({"seeds": cat, "tadpoles": "C_m^+ for every m >= 3 at (3,2,...,2)"}));
        return Ok(());
    }
    let Some(cmd) = cli.command else {
        return Err(Failure::Usage("no subcommand given".into()));
    };
    let out: Value = match cmd {
        Command::Eval { g, diag } => {
            let g = graph(&g)?;
            let d = DiagonalAssignment::new(diag)?;
            let m = matrix_at(&g, &d)?;
            let det = m.determinant();
            eprintln!("det = {det}");
            json!({"det": int_value(&det), "pd": m.is_positive_definite()?, "phi": phi_json(&m)})
        }
        Command::Sieve { g, mode, r, max, bx, oracle, format } => {
            let g = graph(&g)?;
            let bx = bx.unwrap_or(max + 2);
            let rep = if oracle { sieve_oracle(&g, mode.into(), r, max, bx)? } else { sieve(&g, mode.into(), r, max, bx)? };
            eprintln!("{} values hit, {} missed, complete: {}", rep.hits.len(), rep.complement.len(), rep.complete);
            if let Format::Csv = format {
                print!("{}", rep.to_csv());
                return Ok(());
            }
            rep.to_json()
        }
        Command::Structures { g, r, bound } => {
            let g = graph(&g)?;
            let e = enumerate_structures(&g, r, bound)?;
            eprintln!("{} structures, complete within box: {}", e.structures.len(), e.complete_within_box);
            json!({
                "r": r,
                "bound": bound,
                "complete_within_box": e.complete_within_box,
                "structures": e.structures.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            })
        }
        Command::Witness { g, value, r } => {
            let g = graph(&g)?;
            if r == 0 || r > 2 {
                return Err(Failure::Usage("--r must be 1 or 2".into()));
            }
            let mut diag = value_witness(&g, &value, r)?;
            if diag.is_none() && value == BigInt::from(1) {
                diag = unit_witness(&g, r)?.map(|w| w.diag);
            }
            match diag {
                Some(d) => {
                    let m = matrix_at(&g, &d)?;
                    json!({
                        "value": int_value(&value),
                        "diag": int_array(d.values()),
                        "det": int_value(&m.determinant()),
                        "pd": m.is_positive_definite()?,
                        "phi": phi_json(&m),
                    })
                }
                None => {
                    eprintln!("no seed found; no witness produced");
                    json!({"value": int_value(&value), "diag": null})
                }
            }
        }
        Command::TrivialStructure { g } => trivial_group_structure(&graph(&g)?)?.to_json(),
        Command::Classify { g } => verdict_json(&graph(&g)?)?,
        Command::Density { g, budget, empirical } => {
            let g = graph(&g)?;
            let mut v = json!({"certificate": null});
            if let Some(c) = density_certificate(&g)? {
                let (u, _) = progressions_from_certificate(&c, budget)?;
                let d = union_density(&u)?;
                v = json!({
                    "certificate": c.to_json(),
                    "progressions": u.to_json(),
                    "union_density": d.to_string(),
                });
            } else {
                eprintln!("no certificate found");
            }
            if let Some(n) = empirical {
                let rep = sieve(&g, SieveMode::Any, 2, n, n + 2)?;
                let e = empirical_density(&rep.bitmap(), n)?;
                v["empirical_density"] = json!(e.to_string());
                v["empirical_complete"] = json!(rep.complete);
            }
            v
        }
        Command::Snf { graph: gs, diag, matrix } => {
            let m = match (matrix, gs) {
                (Some(text), _) => {
                    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                    matrix_from_json(&v)?
                }
                (None, Some(gs)) => matrix_at(&parse_graph(&gs)?, &DiagonalAssignment::new(diag)?)?,
                (None, None) => return Err(Failure::Usage("give a graph with --diag, or --matrix".into())),
            };
            let f = m.smith_normal_form();
            json!({"rank": f.rank, "factors": int_array(&f.factors), "phi": int_array(&f.nontrivial()), "cyclic": f.is_cyclic()})
        }
        Command::Egyptian { n, min, check } => match check {
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                let y = parse_solution(&text)?;
                let ok = egyptian_check(&y);
                let mut v = json!({"n": y.len(), "solution": ok});
                if ok && y.iter().all(|x| *x >= BigInt::from(3)) {
                    let w = kn_witness_from_solution(&y)?;
                    v["kn_witness"] = int_array(w.diag.values());
                    v["det"] = json!(1);
                    v["pd"] = json!(true);
                }
                v
            }
            None => {
                let s = egyptian_search(n, min);
                eprintln!("{}", if s.is_some() { "solution found" } else { "no solution" });
                json!({"n": n, "min": min, "solution": s.map(|y| int_array(&y))})
            }
        },
        Command::Reproduce { table, all, max, bx } => {
            let ids: Vec<String> = match (table, all) {
                (Some(t), _) => vec![t],
                (None, true) => target_ids().into_iter().map(String::from).collect(),
                (None, false) => return Err(Failure::Usage(format!("give --table ID or --all; targets: {}", target_ids().join(", ")))),
            };
            let mut rows = Vec::new();
            for id in ids {
                let o = reproduce(&id, max, bx)?;
                eprintln!("{}: {}", o.id, if o.pass { "PASS" } else { "FAIL" });
                rows.push(o.to_json());
            }
            json!(rows)
        }
    };
    println!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().ok();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Contract(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

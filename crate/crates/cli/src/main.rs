use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use thicket::discrete::min_hitting_set;
use thicket::games::{
    clique_grid_game, clique_half_game, grid_rowcol_game, primal_gap_game, thicket_game,
    CoalitionGame, ImplicitPathPowerGame,
};
use thicket::graph::{generate, parse_graph, Family, Graph};
use thicket::rational::{int, to_text};
use thicket::report::{
    parse_certificate, parse_game_document, run_experiment, tables_to_csv, verify_certificate,
    Certificate, ExperimentConfig, ExperimentTable, GameDocument, GraphRef, RowStatus,
    DEFAULT_SEED, EXPERIMENTS,
};
use thicket::stability::{
    gap_report, sqrt_allocation, vine_allocation, Allocation, BoundCheck, PackingWitness,
};
use thicket::vc::{vc_dimension_exact, verify_shatter_witness, ShatterWitness};
use thicket::width::{
    minmax_exact, thicket_number_exact, treewidth_exact, validate_vine, vinewidth_exact,
    VineDecomposition,
};
use thicket::{Error, Limits};

/// Exact width parameters, covering/packing gaps and stable allocations for
/// coalition games on interaction graphs.
#[derive(Parser, Debug)]
#[command(name = "thicket", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Node budget for each exact search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: Option<u64>,
    /// Seed for every random choice of `reproduce`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Expected thicket number: asserted by `params`, used as the bound by `gaps`.
    #[arg(long, global = true)]
    assert_tau: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// τ, ν, ω and d of a graph, with certificates.
    Params { graph: PathBuf },
    /// κ, κ^f, ρ, ρ^f and their ratios for a game document.
    Gaps { game: PathBuf },
    /// A stable allocation for a game document.
    Allocate {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Vine)]
        method: Method,
        /// Vine decomposition (JSON with `labels` and `links`); computed exactly when absent.
        #[arg(long)]
        vine: Option<PathBuf>,
    },
    /// An edge list (`graph FAMILY PARAMS..`) or a game document (`game KIND PARAMS..`).
    ///
    /// Graph families: path, star, clique, grid, path_power.
    /// Game kinds: thicket FAMILY PARAMS.., primal-gap FAMILY PARAMS.., grid-rowcol K,
    /// clique-grid N, clique-half N, path-power N R K.
    Generate {
        #[arg(value_enum)]
        what: Generated,
        name: String,
        params: Vec<String>,
    },
    /// Runs a named experiment, or `all`, and emits its table.
    Reproduce { experiment: String },
    /// Re-validates a certificate document.
    VerifyCert { certificate: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Vine,
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Generated {
    Graph,
    Game,
}

const EXIT_ASSERTION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_budget() => EXIT_BUDGET,
        Some(Error::Inconsistency(_)) => EXIT_ASSERTION,
        _ => EXIT_INPUT,
    }
}

fn limits(common: &Common) -> Limits {
    match common.budget_nodes {
        Some(n) => Limits::with_nodes(n),
        None => Limits::default(),
    }
}

fn emit(common: &Common, text: &str) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| {
        anyhow!(Error::InvalidInput(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}

fn base_dir(path: &Path) -> &Path {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_game(path: &Path) -> anyhow::Result<CoalitionGame> {
    Ok(parse_game_document(&read(path)?, base_dir(path))?)
}

/// Two-column `field,value` CSV.
fn key_values(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("field,value\n");
    for (k, v) in pairs {
        if v.contains([',', '"', '\n']) {
            out.push_str(&format!("{k},\"{}\"\n", v.replace('"', "\"\"")));
        } else {
            out.push_str(&format!("{k},{v}\n"));
        }
    }
    out
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let common = &cli.common;
    match &cli.command {
        Command::Params { graph } => params(common, graph),
        Command::Gaps { game } => gaps(common, game),
        Command::Allocate { game, method, vine } => {
            allocate(common, game, *method, vine.as_deref())
        }
        Command::Generate { what, name, params } => generate_cmd(common, *what, name, params),
        Command::Reproduce { experiment } => reproduce(common, experiment),
        Command::VerifyCert { certificate } => verify(common, certificate),
    }
}

#[derive(Serialize)]
struct ParamsReport {
    n: usize,
    m: usize,
    tau: usize,
    nu: usize,
    omega: usize,
    d: usize,
    shatter_witness: ShatterWitness,
    certificates: Vec<Certificate>,
    checks: Vec<BoundCheck>,
}

fn params(common: &Common, path: &Path) -> anyhow::Result<u8> {
    let g = load_graph(path)?;
    let l = limits(common);
    let (tau, thicket, vine) = minmax_exact(&g, &l)?;
    let omega = treewidth_exact(&g, &l)?;
    let (d, witness) = vc_dimension_exact(&g, &l)?;
    if !verify_shatter_witness(&g, &witness).is_empty() {
        return Err(Error::Inconsistency("shatter witness does not verify".into()).into());
    }
    let mut checks = Vec::new();
    if let Some(expected) = common.assert_tau {
        checks.push(BoundCheck {
            name: format!("tau == {expected}"),
            holds: tau == expected,
        });
    }
    let report = ParamsReport {
        n: g.n(),
        m: g.edge_count(),
        tau,
        nu: tau,
        omega,
        d,
        shatter_witness: witness,
        certificates: vec![
            Certificate::Thicket {
                graph: GraphRef::inline(&g),
                thicket,
            },
            Certificate::Vine {
                graph: GraphRef::inline(&g),
                decomposition: vine,
            },
        ],
        checks,
    };
    let text = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut pairs = vec![
                ("n", report.n.to_string()),
                ("m", report.m.to_string()),
                ("tau", tau.to_string()),
                ("nu", report.nu.to_string()),
                ("omega", omega.to_string()),
                ("d", d.to_string()),
                (
                    "shattered_set",
                    report.shatter_witness.shattered_set.to_string(),
                ),
            ];
            pairs.extend(
                report
                    .checks
                    .iter()
                    .map(|c| ("check", format!("{}: {}", c.name, pass(c.holds)))),
            );
            key_values(&pairs)
        }
    };
    emit(common, &text)?;
    Ok(if report.checks.iter().all(|c| c.holds) {
        0
    } else {
        EXIT_ASSERTION
    })
}

fn pass(holds: bool) -> &'static str {
    if holds {
        "pass"
    } else {
        "fail"
    }
}

fn gaps(common: &Common, path: &Path) -> anyhow::Result<u8> {
    let game = load_game(path)?;
    let report = gap_report(&game, common.assert_tau, &limits(common))?;
    let text = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut pairs = vec![
                ("kappa", to_text(&report.kappa)),
                ("kappa_f", to_text(&report.kappa_f)),
                ("rho", to_text(&report.rho)),
                ("rho_f", to_text(&report.rho_f)),
                ("ratio_pc", to_text(&report.ratio_pc)),
                ("gap_primal", to_text(&report.gap_primal)),
                ("gap_dual", to_text(&report.gap_dual)),
                ("alpha_star", to_text(&report.alpha_star)),
            ];
            if let Some(t) = report.tau {
                pairs.push(("tau", t.to_string()));
            }
            pairs.extend(
                report
                    .checks
                    .iter()
                    .map(|c| ("check", format!("{}: {}", c.name, pass(c.holds)))),
            );
            key_values(&pairs)
        }
    };
    emit(common, &text)?;
    Ok(if report.all_hold() { 0 } else { EXIT_ASSERTION })
}

#[derive(Serialize)]
struct AllocationReport {
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<usize>,
    allocation: Allocation,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<PackingWitness>,
    checks: Vec<BoundCheck>,
}

fn allocate(
    common: &Common,
    path: &Path,
    method: Method,
    vine: Option<&Path>,
) -> anyhow::Result<u8> {
    let game = load_game(path)?;
    let l = limits(common);
    let report = match method {
        Method::Vine => {
            let decomposition = match vine {
                Some(p) => {
                    let d: VineDecomposition = serde_json::from_str(&read(p)?)
                        .map_err(|e| Error::InvalidInput(format!("vine decomposition: {e}")))?;
                    let problems = validate_vine(game.graph(), &d);
                    if !problems.is_empty() {
                        bail!(Error::InvalidInput(format!(
                            "invalid vine decomposition: {}",
                            problems.join("; ")
                        )));
                    }
                    d
                }
                None => vinewidth_exact(game.graph(), &l)?.1,
            };
            let out = vine_allocation(&game, &decomposition)?;
            let bound = int(out.width as i64) * int(out.witness.value as i64);
            let checks = vec![
                BoundCheck {
                    name: "feasible".into(),
                    holds: out.allocation.check(&game).is_empty(),
                },
                BoundCheck {
                    name: "witness is a disjoint packing".into(),
                    holds: out.witness.check(&game).is_empty(),
                },
                BoundCheck {
                    name: "cost <= width * witness".into(),
                    holds: out.allocation.cost <= bound,
                },
            ];
            AllocationReport {
                method: "vine",
                width: Some(out.width),
                allocation: out.allocation,
                witness: Some(out.witness),
                checks,
            }
        }
        Method::Sqrt => {
            let allocation = sqrt_allocation(&game);
            let checks = vec![BoundCheck {
                name: "feasible".into(),
                holds: allocation.check(&game).is_empty(),
            }];
            AllocationReport {
                method: "sqrt",
                width: None,
                allocation,
                witness: None,
                checks,
            }
        }
    };
    let text = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut out = String::from("agent,value\n");
            for (i, v) in report.allocation.values.iter().enumerate() {
                out.push_str(&format!("{i},{}\n", to_text(v)));
            }
            out.push_str(&format!("cost,{}\n", to_text(&report.allocation.cost)));
            out
        }
    };
    emit(common, &text)?;
    Ok(if report.checks.iter().all(|c| c.holds) {
        0
    } else {
        EXIT_ASSERTION
    })
}

fn numbers(params: &[String]) -> anyhow::Result<Vec<usize>> {
    params
        .iter()
        .map(|p| {
            p.parse::<usize>().map_err(|_| {
                anyhow!(Error::InvalidInput(format!(
                    "parameter {p:?} is not a non-negative integer"
                )))
            })
        })
        .collect()
}

fn family_graph(params: &[String]) -> anyhow::Result<Graph> {
    let (name, rest) = params
        .split_first()
        .ok_or_else(|| anyhow!(Error::InvalidInput("expected a graph family".into())))?;
    Ok(generate(Family::from_name(name, &numbers(rest)?)?)?)
}

fn exactly<const N: usize>(kind: &str, params: &[String]) -> anyhow::Result<[usize; N]> {
    let values = numbers(params)?;
    values.try_into().map_err(|_| {
        anyhow!(Error::InvalidInput(format!(
            "game {kind} takes {N} parameter(s)"
        )))
    })
}

fn generate_cmd(
    common: &Common,
    what: Generated,
    name: &str,
    params: &[String],
) -> anyhow::Result<u8> {
    let l = limits(common);
    let text = match what {
        Generated::Graph => {
            let mut all = vec![name.to_string()];
            all.extend(params.iter().cloned());
            family_graph(&all)?.to_edge_list()
        }
        Generated::Game => {
            let game = match name {
                "thicket" => {
                    let g = family_graph(params)?;
                    let (_, t) = thicket_number_exact(&g, &l)?;
                    thicket_game(&g, &t)?
                }
                "primal-gap" => {
                    let g = family_graph(params)?;
                    let (_, t) = thicket_number_exact(&g, &l)?;
                    let x = min_hitting_set(&t.sets, g.n(), &l)?;
                    primal_gap_game(&g, &t, &x, &l)?
                }
                "grid-rowcol" => grid_rowcol_game(exactly::<1>(name, params)?[0])?,
                "clique-grid" => clique_grid_game(exactly::<1>(name, params)?[0])?,
                "clique-half" => clique_half_game(exactly::<1>(name, params)?[0])?,
                "path-power" => {
                    let [n, r, k] = exactly::<3>(name, params)?;
                    ImplicitPathPowerGame::new(n, r, k)?.explicit(l.pathpower_vertices)?
                }
                other => bail!(Error::InvalidInput(format!("unknown game kind {other:?}"))),
            };
            json(&GameDocument::from_game(&game))?
        }
    };
    emit(common, &text)?;
    Ok(0)
}

fn reproduce(common: &Common, name: &str) -> anyhow::Result<u8> {
    let names: Vec<&str> = if name == "all" {
        EXPERIMENTS.to_vec()
    } else if EXPERIMENTS.contains(&name) {
        vec![name]
    } else {
        bail!(Error::InvalidInput(format!(
            "unknown experiment {name:?}; expected all or one of {}",
            EXPERIMENTS.join(", ")
        )));
    };
    let l = limits(common);
    let mut tables: Vec<ExperimentTable> = Vec::new();
    for n in names {
        let table = run_experiment(&ExperimentConfig::new(n, common.seed, l.clone()))?;
        eprintln!(
            "{n}: {} rows, {} pass, {} fail, {} budget, {} error",
            table.rows.len(),
            table.count(RowStatus::Pass),
            table.count(RowStatus::Fail),
            table.count(RowStatus::Budget),
            table.count(RowStatus::Error)
        );
        tables.push(table);
    }
    let text = match common.format {
        Format::Json if tables.len() == 1 => json(&tables[0])?,
        Format::Json => json(&tables)?,
        Format::Csv => tables_to_csv(&tables),
    };
    emit(common, &text)?;
    let count = |s| tables.iter().map(|t| t.count(s)).sum::<usize>();
    Ok(if count(RowStatus::Fail) + count(RowStatus::Error) > 0 {
        EXIT_ASSERTION
    } else if count(RowStatus::Budget) > 0 {
        EXIT_BUDGET
    } else {
        0
    })
}

#[derive(Serialize)]
struct Verdict {
    valid: bool,
    problems: Vec<String>,
}

fn verify(common: &Common, path: &Path) -> anyhow::Result<u8> {
    let cert = parse_certificate(&read(path)?)?;
    let problems = verify_certificate(&cert, base_dir(path))?;
    let verdict = Verdict {
        valid: problems.is_empty(),
        problems,
    };
    let text = match common.format {
        Format::Json => json(&verdict)?,
        Format::Csv => {
            let mut pairs = vec![("valid", verdict.valid.to_string())];
            pairs.extend(verdict.problems.iter().map(|p| ("problem", p.clone())));
            key_values(&pairs)
        }
    };
    emit(common, &text)?;
    Ok(if verdict.valid { 0 } else { EXIT_ASSERTION })
}

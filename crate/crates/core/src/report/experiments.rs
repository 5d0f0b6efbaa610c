use std::fmt::Display;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::corpus::connected_graphs;
use crate::config::Limits;
use crate::discrete::{all_min_hitting_sets, integral_covering, integral_packing, min_hitting_set};
use crate::error::{Error, Result};
use crate::games::{
    clique_half_game, grid_rowcol_game, pathpower_cover_number, pathpower_frac_upper,
    primal_gap_game, thicket_game, CoalitionGame, ImplicitPathPowerGame,
};
use crate::graph::{
    enumerate_connected_sets, generate, min_vertex_separator, random, Family, Graph, VertexSet,
};
use crate::lp::{covering_lp, packing_lp};
use crate::rational::{int, ratio, to_text, Rational};
use crate::stability::{sqrt_allocation, sqrt_bound_holds, vine_allocation, BoundCheck};
use crate::vc::{is_shattered, vc_dimension_exact};
use crate::width::{
    clique_halves_vine, grid_column_vine, node_separator_check, path_power_vine,
    thicket_number_exact, trivial_vine, validate_thicket, validate_tree, vine_to_tree,
    vinewidth_exact, Thicket, VineDecomposition,
};

/// Experiment names, in acceptance order.
pub const EXPERIMENTS: [&str; 12] = [
    "minmax",
    "strong-duality",
    "sandwich",
    "dual-grid",
    "primal-clique",
    "primal-gap",
    "path-power",
    "allocation",
    "vc-dim",
    "trees",
    "separators",
    "conversion",
];

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub limits: Limits,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>, seed: u64, limits: Limits) -> Self {
        ExperimentConfig {
            name: name.into(),
            seed,
            limits,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    Budget,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub values: Vec<Field>,
    pub checks: Vec<BoundCheck>,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl ReportRow {
    pub fn new(instance: impl Into<String>) -> Self {
        ReportRow {
            instance: instance.into(),
            values: Vec::new(),
            checks: Vec::new(),
            status: RowStatus::Pass,
            message: None,
        }
    }

    pub fn value(&mut self, name: &str, value: impl Display) -> &mut Self {
        self.values.push(Field {
            name: name.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn check(&mut self, name: &str, holds: bool) -> &mut Self {
        self.checks.push(BoundCheck {
            name: name.into(),
            holds,
        });
        if !holds && self.status == RowStatus::Pass {
            self.status = RowStatus::Fail;
        }
        self
    }

    fn failed(instance: String, err: &Error) -> Self {
        let mut row = ReportRow::new(instance);
        row.status = if err.is_budget() {
            RowStatus::Budget
        } else {
            RowStatus::Error
        };
        row.message = Some(err.to_string());
        row
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub experiment: String,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
}

impl ExperimentTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Pass)
    }

    pub fn count(&self, status: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn failing(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status != RowStatus::Pass)
    }

    pub fn to_csv(&self) -> String {
        tables_to_csv(std::slice::from_ref(self))
    }
}

/// One line per row: experiment, instance, values in first-seen column order,
/// checks as `pass`/`fail`, then status. Fields are quoted when needed.
pub fn tables_to_csv(tables: &[ExperimentTable]) -> String {
    let mut values: Vec<String> = Vec::new();
    let mut checks: Vec<String> = Vec::new();
    for row in tables.iter().flat_map(|t| &t.rows) {
        for f in &row.values {
            if !values.contains(&f.name) {
                values.push(f.name.clone());
            }
        }
        for c in &row.checks {
            if !checks.contains(&c.name) {
                checks.push(c.name.clone());
            }
        }
    }
    let mut out = String::new();
    let mut header = vec!["experiment".to_string(), "instance".to_string()];
    header.extend(values.iter().cloned());
    header.extend(checks.iter().map(|c| format!("check: {c}")));
    header.push("status".into());
    header.push("message".into());
    out.push_str(&csv_line(&header));
    for (table, row) in tables
        .iter()
        .flat_map(|t| t.rows.iter().map(move |r| (t, r)))
    {
        let mut line = vec![table.experiment.clone(), row.instance.clone()];
        for name in &values {
            line.push(
                row.values
                    .iter()
                    .find(|f| &f.name == name)
                    .map(|f| f.value.clone())
                    .unwrap_or_default(),
            );
        }
        for name in &checks {
            line.push(match row.checks.iter().find(|c| &c.name == name) {
                Some(c) if c.holds => "pass".into(),
                Some(_) => "fail".into(),
                None => String::new(),
            });
        }
        line.push(
            serde_json::to_value(row.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        );
        line.push(row.message.clone().unwrap_or_default());
        out.push_str(&csv_line(&line));
    }
    out
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn q(x: &Rational) -> String {
    to_text(x)
}

fn r_of(x: u64) -> Rational {
    int(x as i64)
}

/// Runs `body` for one instance; solver errors become marked rows.
fn attempt(
    rows: &mut Vec<ReportRow>,
    instance: String,
    body: impl FnOnce(&mut ReportRow) -> Result<()>,
) {
    let mut row = ReportRow::new(instance.clone());
    match body(&mut row) {
        Ok(()) => rows.push(row),
        Err(e) => rows.push(ReportRow::failed(instance, &e)),
    }
}

/// Runs a named experiment. The seed fixes every random choice.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentTable> {
    let seed = config.seed;
    let l = &config.limits;
    let mut rows = match config.name.as_str() {
        "minmax" => minmax(seed, l)?,
        "strong-duality" => strong_duality(seed),
        "sandwich" => sandwich(seed, l),
        "dual-grid" => dual_grid(l),
        "primal-clique" => primal_clique(seed, l),
        "primal-gap" => primal_gap(l),
        "path-power" => path_power(l),
        "allocation" => allocation(seed, l),
        "vc-dim" => vc_dim(seed, l)?,
        "trees" => trees(seed, l),
        "separators" => separators(seed, l)?,
        "conversion" => conversion(seed, l)?,
        other => {
            return Err(Error::invalid(format!(
                "unknown experiment {other:?}; expected one of {}",
                EXPERIMENTS.join(", ")
            )))
        }
    };
    rows.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(ExperimentTable {
        experiment: config.name.clone(),
        seed,
        rows,
    })
}

/// Wall-clock timing wrapper used by callers that enforce time budgets.
pub fn timed_experiment(
    config: &ExperimentConfig,
) -> Result<(ExperimentTable, std::time::Duration)> {
    let start = Instant::now();
    let table = run_experiment(config)?;
    Ok((table, start.elapsed()))
}

// ---- instance families -------------------------------------------------

/// Stream ids keep the families independent under one seed.
const MINMAX_STREAM: u64 = 1 << 20;
const GAME_STREAM: u64 = 2 << 20;
const CLIQUE_STREAM: u64 = 3 << 20;
const TREE_STREAM: u64 = 4 << 20;
const SQRT_STREAM: u64 = 5 << 20;
const THICKET_STREAM: u64 = 6 << 20;

/// All connected graphs on at most six vertices, then 50 random connected
/// graphs on seven vertices (edge probability 1/2).
pub fn minmax_graphs(seed: u64) -> Result<Vec<(String, Graph)>> {
    let mut out: Vec<(String, Graph)> = connected_graphs(6)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| (format!("corpus-{i:03}"), g))
        .collect();
    for i in 0..50 {
        let mut rng = random::stream(seed, MINMAX_STREAM + i);
        out.push((
            format!("random7-{i:02}"),
            random::connected_gnp(7, 0.5, &mut rng),
        ));
    }
    Ok(out)
}

fn sampled_game(
    g: Graph,
    rng: &mut impl Rng,
    max_coalitions: usize,
    max_value: u64,
    tag: String,
) -> CoalitionGame {
    let n = g.n();
    let sets = enumerate_connected_sets(&g, 1, n).expect("valid bounds");
    let m = rng.gen_range(1..=max_coalitions);
    let picked = random::sample_subset(&sets, m, rng);
    let coalitions: Vec<(VertexSet, u64)> = picked
        .into_iter()
        .map(|s| (s, rng.gen_range(1..=max_value)))
        .collect();
    CoalitionGame::new(g, coalitions, tag).expect("sampled coalitions are connected")
}

/// 200 games: `n` uniform in 3..=8 on G(n, 1/2) conditioned on connectivity,
/// 1..=15 connected coalitions sampled uniformly, values uniform in 1..=3.
pub fn random_games(seed: u64) -> Vec<CoalitionGame> {
    (0..200)
        .map(|i| {
            let mut rng = random::stream(seed, GAME_STREAM + i);
            let n = rng.gen_range(3..=8);
            let g = random::connected_gnp(n, 0.5, &mut rng);
            sampled_game(g, &mut rng, 15, 3, format!("random-{i:03}"))
        })
        .collect()
}

/// 100 simple games on `K_n` with 1..=15 coalitions each.
pub fn random_clique_games(seed: u64, n: usize) -> Vec<CoalitionGame> {
    (0..100)
        .map(|i| {
            let mut rng = random::stream(seed, CLIQUE_STREAM + 1000 * n as u64 + i);
            let g = generate(Family::Clique(n)).expect("clique");
            sampled_game(g, &mut rng, 15, 1, format!("clique{n}-{i:03}"))
        })
        .collect()
}

/// 100 games on uniform random trees with 2..=10 vertices.
pub fn random_tree_games(seed: u64) -> Vec<CoalitionGame> {
    (0..100)
        .map(|i| {
            let mut rng = random::stream(seed, TREE_STREAM + i);
            let n = rng.gen_range(2..=10);
            let g = random::tree(n, &mut rng);
            sampled_game(g, &mut rng, 12, 3, format!("tree-{i:03}"))
        })
        .collect()
}

/// 100 games with 2..=16 agents on G(n, 0.35) conditioned on connectivity.
pub fn sqrt_games(seed: u64) -> Vec<CoalitionGame> {
    (0..100)
        .map(|i| {
            let mut rng = random::stream(seed, SQRT_STREAM + i);
            let n = rng.gen_range(2..=16);
            let g = random::connected_gnp(n, 0.35, &mut rng);
            sampled_game(g, &mut rng, 15, 4, format!("sqrt-{i:03}"))
        })
        .collect()
}

/// Named graphs whose maximum thicket yields a tight thicket game.
fn tight_graphs() -> Result<Vec<(String, Graph, VineDecomposition)>> {
    Ok(vec![
        (
            "path5".into(),
            generate(Family::Path(5))?,
            trivial_vine(&generate(Family::Path(5))?)?,
        ),
        (
            "K4".into(),
            generate(Family::Clique(4))?,
            clique_halves_vine(4),
        ),
        (
            "K6".into(),
            generate(Family::Clique(6))?,
            clique_halves_vine(6),
        ),
        ("R3".into(), generate(Family::Grid(3))?, grid_column_vine(3)),
    ])
}

// ---- experiments -------------------------------------------------------

fn minmax(seed: u64, l: &Limits) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (id, g) in minmax_graphs(seed)? {
        attempt(&mut rows, id, |row| {
            let (tau, _) = thicket_number_exact(&g, l)?;
            let (nu, _) = vinewidth_exact(&g, l)?;
            row.value("n", g.n())
                .value("m", g.edge_count())
                .value("tau", tau)
                .value("nu", nu);
            row.check("tau == nu", tau == nu);
            Ok(())
        });
    }
    Ok(rows)
}

fn strong_duality(seed: u64) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for game in random_games(seed) {
        attempt(&mut rows, game.tag().to_string(), |row| {
            let cover = covering_lp(&game)?.objective;
            let pack = packing_lp(&game)?.objective;
            row.value("n", game.graph().n())
                .value("coalitions", game.len())
                .value("kappa_f", q(&cover))
                .value("rho_f", q(&pack));
            row.check("kappa_f == rho_f", cover == pack);
            Ok(())
        });
    }
    rows
}

fn sandwich(seed: u64, l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for game in random_games(seed) {
        attempt(&mut rows, game.tag().to_string(), |row| {
            let kappa = integral_covering(&game, l)?.cost;
            let rho = integral_packing(&game, l)?.value;
            let frac = packing_lp(&game)?.objective;
            let (tau, _) = thicket_number_exact(game.graph(), l)?;
            row.value("n", game.graph().n())
                .value("tau", tau)
                .value("kappa", kappa)
                .value("rho", rho)
                .value("rho_f", q(&frac));
            row.check(
                "rho <= rho_f <= kappa",
                r_of(rho) <= frac && frac <= r_of(kappa),
            );
            row.check("kappa/rho <= tau", kappa <= tau as u64 * rho);
            Ok(())
        });
    }
    match tight_graphs() {
        Ok(list) => {
            for (name, g, _) in list {
                attempt(&mut rows, format!("thicket-game-{name}"), |row| {
                    let (tau, t) = thicket_number_exact(&g, l)?;
                    let game = thicket_game(&g, &t)?;
                    let kappa = integral_covering(&game, l)?.cost;
                    let rho = integral_packing(&game, l)?.value;
                    row.value("n", g.n())
                        .value("tau", tau)
                        .value("kappa", kappa)
                        .value("rho", rho);
                    row.check("kappa/rho == tau", kappa == tau as u64 * rho);
                    Ok(())
                });
            }
        }
        Err(e) => rows.push(ReportRow::failed("thicket-games".into(), &e)),
    }
    rows
}

fn dual_grid(l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for k in 3..=5usize {
        attempt(&mut rows, format!("grid-rowcol-{k}"), |row| {
            let game = grid_rowcol_game(k)?;
            let rho = integral_packing(&game, l)?.value;
            let frac = packing_lp(&game)?.objective;
            row.value("k", k).value("rho", rho).value("rho_f", q(&frac));
            row.check("rho == 1", rho == 1);
            row.check("rho_f == k/2", frac == ratio(k as i64, 2));
            Ok(())
        });
    }
    rows
}

fn primal_clique(seed: u64, l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for n in 4..=8usize {
        attempt(&mut rows, format!("clique-half-{n}"), |row| {
            let game = clique_half_game(n)?;
            let kappa = integral_covering(&game, l)?.cost;
            let frac = covering_lp(&game)?.objective;
            let half = n.div_ceil(2);
            row.value("n", n)
                .value("kappa", kappa)
                .value("kappa_f", q(&frac));
            row.check("kappa == floor(n/2)+1", kappa as usize == n / 2 + 1);
            row.check(
                "kappa_f == n/ceil(n/2)",
                frac == ratio(n as i64, half as i64),
            );
            Ok(())
        });
    }
    for n in 4..=7usize {
        let bound = ratio(n.div_ceil(2) as i64, 2) + int(1);
        for game in random_clique_games(seed, n) {
            attempt(&mut rows, game.tag().to_string(), |row| {
                let kappa = r_of(integral_covering(&game, l)?.cost);
                let frac = covering_lp(&game)?.objective;
                let gap = &kappa / &frac;
                row.value("n", n)
                    .value("coalitions", game.len())
                    .value("kappa", q(&kappa))
                    .value("kappa_f", q(&frac))
                    .value("gap_primal", q(&gap));
                row.check("kappa/kappa_f <= ceil(n/2)/2 + 1", gap <= bound);
                Ok(())
            });
        }
    }
    rows
}

fn primal_gap(l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for (name, family) in [("R3", Family::Grid(3)), ("K6", Family::Clique(6))] {
        attempt(&mut rows, format!("primal-gap-{name}"), |row| {
            let g = generate(family)?;
            let (tau, t) = thicket_number_exact(&g, l)?;
            let x = min_hitting_set(&t.sets, g.n(), l)?;
            let game = primal_gap_game(&g, &t, &x, l)?;
            let kappa = r_of(integral_covering(&game, l)?.cost);
            let frac = covering_lp(&game)?.objective;
            let gap = &kappa / &frac;
            row.value("tau", tau)
                .value("coalitions", game.len())
                .value("kappa", q(&kappa))
                .value("kappa_f", q(&frac))
                .value("gap_primal", q(&gap));
            row.check("kappa_f <= 2", frac <= int(2));
            row.check(
                "kappa >= floor(tau/2)+1",
                kappa >= int((tau / 2 + 1) as i64),
            );
            row.check("kappa/kappa_f >= tau/4", gap >= ratio(tau as i64, 4));
            Ok(())
        });
    }
    rows
}

/// Instances `(n, r, k)` with `n <= 12` for the lazy-versus-explicit comparison.
pub fn small_path_power_games() -> Vec<ImplicitPathPowerGame> {
    let mut out = Vec::new();
    for n in 3..=12 {
        for r in 1..=n / 3 {
            for k in 1..=4 {
                out.push(ImplicitPathPowerGame::new(n, r, k).expect("n >= 3r"));
            }
        }
    }
    out
}

fn path_power(l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for (n, r) in [(6, 1), (6, 2), (8, 2), (9, 3)] {
        attempt(&mut rows, format!("tau-path-power-{n}-{r}"), |row| {
            let (tau, _) = thicket_number_exact(&generate(Family::PathPower(n, r))?, l)?;
            row.value("n", n).value("r", r).value("tau", tau);
            row.check("tau == r", tau == r);
            Ok(())
        });
    }
    attempt(&mut rows, "gap-path-power-27-2-3".into(), |row| {
        let game = ImplicitPathPowerGame::new(27, 2, 3)?;
        let kappa = pathpower_cover_number(&game, l)?;
        let upper = pathpower_frac_upper(&game)?;
        let gap_lower = r_of(kappa as u64) / &upper;
        let target = (int(1) - ratio(2, 3)) * int(2);
        row.value("kappa", kappa)
            .value("kappa_f_upper", q(&upper))
            .value("gap_primal_lower", q(&gap_lower));
        row.check("kappa >= 4", kappa >= 4);
        row.check("kappa_f_upper == 3", upper == int(3));
        row.check("gap_primal >= 4/3", gap_lower >= ratio(4, 3));
        row.check("gap_primal >= (1-2/k)r", gap_lower >= target);
        Ok(())
    });
    for game in small_path_power_games() {
        let (n, r, k) = (game.n, game.r, game.k);
        attempt(&mut rows, format!("lazy-vs-explicit-{n}-{r}-{k}"), |row| {
            let lazy = pathpower_cover_number(&game, l)?;
            let explicit_game = game.explicit(12)?;
            let explicit = integral_covering(&explicit_game, l)?.cost as usize;
            let frac = covering_lp(&explicit_game)?.objective;
            row.value("n", n)
                .value("r", r)
                .value("k", k)
                .value("kappa_lazy", lazy)
                .value("kappa_explicit", explicit)
                .value("kappa_f", q(&frac));
            row.check("lazy == explicit", lazy == explicit);
            row.check("kappa_f <= k", frac <= int(k as i64));
            // The gap bound is asserted only where its size condition holds.
            if n >= k * k * (r + 1) {
                let target = (int(1) - ratio(2, k as i64)) * int(r as i64);
                row.check(
                    "gap_primal >= (1-2/k)r",
                    r_of(lazy as u64) / &frac >= target,
                );
            }
            Ok(())
        });
    }
    rows
}

/// Every explicit game of the duality, clique, grid, gap and path-power
/// experiments paired with a vine decomposition of width `τ`.
pub fn allocation_instances(
    seed: u64,
    l: &Limits,
) -> Result<Vec<(CoalitionGame, VineDecomposition)>> {
    let mut out = Vec::new();
    for game in random_games(seed) {
        let (_, vine) = vinewidth_exact(game.graph(), l)?;
        out.push((game, vine));
    }
    for (_, g, vine) in tight_graphs()? {
        let (_, t) = thicket_number_exact(&g, l)?;
        out.push((thicket_game(&g, &t)?, vine));
    }
    for k in 3..=5 {
        out.push((grid_rowcol_game(k)?, grid_column_vine(k)));
    }
    for n in 4..=8 {
        out.push((clique_half_game(n)?, clique_halves_vine(n)));
    }
    for n in 4..=7 {
        for game in random_clique_games(seed, n) {
            out.push((game, clique_halves_vine(n)));
        }
    }
    for (family, vine) in [
        (Family::Grid(3), grid_column_vine(3)),
        (Family::Clique(6), clique_halves_vine(6)),
    ] {
        let g = generate(family)?;
        let (_, t) = thicket_number_exact(&g, l)?;
        let x = min_hitting_set(&t.sets, g.n(), l)?;
        out.push((primal_gap_game(&g, &t, &x, l)?, vine));
    }
    for game in small_path_power_games() {
        out.push((game.explicit(12)?, path_power_vine(game.n, game.r)));
    }
    Ok(out)
}

fn allocation(seed: u64, l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    match allocation_instances(seed, l) {
        Ok(instances) => {
            for (i, (game, vine)) in instances.iter().enumerate() {
                attempt(&mut rows, format!("vine-{i:03}-{}", game.tag()), |row| {
                    let out = vine_allocation(game, vine)?;
                    let rho = integral_packing(game, l)?.value;
                    let width = r_of(out.width as u64);
                    row.value("width", out.width)
                        .value("cost", q(&out.allocation.cost))
                        .value("residual_sum", out.residual_sum)
                        .value("witness", out.witness.value)
                        .value("rho", rho);
                    row.check("feasible", out.allocation.check(game).is_empty());
                    row.check(
                        "witness is a disjoint packing",
                        out.witness.check(game).is_empty(),
                    );
                    row.check(
                        "cost <= width * witness",
                        out.allocation.cost <= &width * r_of(out.witness.value),
                    );
                    row.check(
                        "cost <= width * rho",
                        out.allocation.cost <= &width * r_of(rho),
                    );
                    Ok(())
                });
            }
        }
        Err(e) => rows.push(ReportRow::failed("vine-instances".into(), &e)),
    }
    for game in sqrt_games(seed) {
        attempt(&mut rows, game.tag().to_string(), |row| {
            let a = sqrt_allocation(&game);
            let rho = integral_packing(&game, l)?.value;
            let n = game.graph().n();
            row.value("n", n)
                .value("cost", q(&a.cost))
                .value("rho", rho);
            row.check("feasible", a.check(&game).is_empty());
            row.check("cost^2 <= 4 n rho^2", sqrt_bound_holds(&a.cost, n, rho));
            Ok(())
        });
    }
    rows
}

/// Adds every connected set meeting all current members, in canonical order,
/// until the thicket is maximal under inclusion.
pub fn extend_to_maximal(g: &Graph, t: &Thicket) -> Result<Thicket> {
    let mut sets = t.sets.clone();
    for s in enumerate_connected_sets(g, 1, g.n())? {
        if !sets.contains(&s) && sets.iter().all(|m| m.intersects(&s)) {
            sets.push(s);
        }
    }
    Ok(Thicket::new(sets))
}

fn vc_dim(seed: u64, l: &Limits) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (id, g) in minmax_graphs(seed)? {
        attempt(&mut rows, id, |row| {
            let (tau, t) = thicket_number_exact(&g, l)?;
            let (d, _) = vc_dimension_exact(&g, l)?;
            let maximal = extend_to_maximal(&g, &t)?;
            let x = min_hitting_set(&maximal.sets, g.n(), l)?;
            let shattered = is_shattered(&g, &x.members, l)?.is_shattered();
            row.value("n", g.n())
                .value("tau", tau)
                .value("d", d)
                .value("hitting_set", &x.members);
            row.check("tau <= d", tau <= d);
            row.check("hitting set shattered", shattered);
            Ok(())
        });
    }
    for leaves in 3..=6 {
        attempt(&mut rows, format!("star-{leaves}"), |row| {
            let g = generate(Family::Star(leaves))?;
            let (tau, _) = thicket_number_exact(&g, l)?;
            let (d, _) = vc_dimension_exact(&g, l)?;
            row.value("leaves", leaves).value("tau", tau).value("d", d);
            row.check("d == leaves", d == leaves);
            row.check("tau == 1", tau == 1);
            Ok(())
        });
    }
    for game in random_games(seed) {
        attempt(&mut rows, game.tag().to_string(), |row| {
            let kappa = integral_covering(&game, l)?.cost;
            let rho = integral_packing(&game, l)?.value;
            let (d, _) = vc_dimension_exact(game.graph(), l)?;
            row.value("d", d).value("kappa", kappa).value("rho", rho);
            row.check("kappa/rho <= d", kappa <= d as u64 * rho);
            Ok(())
        });
    }
    Ok(rows)
}

fn trees(seed: u64, l: &Limits) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for game in random_tree_games(seed) {
        attempt(&mut rows, game.tag().to_string(), |row| {
            let kappa = r_of(integral_covering(&game, l)?.cost);
            let rho = r_of(integral_packing(&game, l)?.value);
            let kf = covering_lp(&game)?.objective;
            let rf = packing_lp(&game)?.objective;
            row.value("n", game.graph().n())
                .value("kappa", q(&kappa))
                .value("rho", q(&rho))
                .value("kappa_f", q(&kf))
                .value("rho_f", q(&rf));
            row.check(
                "kappa == rho == kappa_f == rho_f",
                kappa == rho && rho == kf && kf == rf,
            );
            Ok(())
        });
    }
    rows
}

fn separator_rows(rows: &mut Vec<ReportRow>, id: String, g: &Graph, vine: &VineDecomposition) {
    attempt(rows, id, |row| {
        let internal = vine.internal_nodes();
        let mut ok = true;
        for &t in &internal {
            ok &= node_separator_check(g, vine, t)?;
        }
        row.value("nodes", vine.node_count())
            .value("internal", internal.len());
        row.check("every internal label separates", ok);
        Ok(())
    });
}

/// A random thicket: connected sets in random order, each kept if it meets
/// every set kept so far.
fn random_thicket(g: &Graph, rng: &mut impl Rng) -> Result<Thicket> {
    let sets = enumerate_connected_sets(g, 1, g.n())?;
    let order = random::sample_subset(&(0..sets.len()).collect::<Vec<_>>(), sets.len(), rng);
    let mut keys: Vec<(u32, usize)> = order.iter().map(|&i| (rng.gen(), i)).collect();
    keys.sort_unstable();
    let mut kept: Vec<VertexSet> = Vec::new();
    for (_, i) in keys {
        let s = &sets[i];
        if kept.iter().all(|k| k.intersects(s)) {
            kept.push(s.clone());
        }
        if kept.len() >= 12 {
            break;
        }
    }
    Ok(Thicket::new(kept))
}

fn separators(seed: u64, l: &Limits) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (id, g) in minmax_graphs(seed)? {
        match vinewidth_exact(&g, l) {
            Ok((_, vine)) => separator_rows(&mut rows, format!("minmax-{id}"), &g, &vine),
            Err(e) => rows.push(ReportRow::failed(format!("minmax-{id}"), &e)),
        }
    }
    match allocation_instances(seed, l) {
        Ok(instances) => {
            for (i, (game, vine)) in instances.iter().enumerate() {
                separator_rows(
                    &mut rows,
                    format!("allocation-{i:03}-{}", game.tag()),
                    game.graph(),
                    vine,
                );
            }
        }
        Err(e) => rows.push(ReportRow::failed("allocation-instances".into(), &e)),
    }
    let mut found = 0;
    let mut attempt_id = 0u64;
    while found < 50 && attempt_id < 5000 {
        let mut rng = random::stream(seed, THICKET_STREAM + attempt_id);
        attempt_id += 1;
        let n = rng.gen_range(4..=8);
        let g = random::connected_gnp(n, 0.45, &mut rng);
        let t = random_thicket(&g, &mut rng)?;
        if !validate_thicket(&g, &t).is_empty() {
            continue;
        }
        let all = all_min_hitting_sets(&t.sets, n, l)?;
        if all.len() < 2 {
            continue;
        }
        found += 1;
        attempt(
            &mut rows,
            format!("thicket-{:02}-attempt-{}", found - 1, attempt_id - 1),
            |row| {
                let h = all[0].len();
                let sep = min_vertex_separator(&g, &all[0], &all[1])?;
                row.value("n", n)
                    .value("members", t.len())
                    .value("hitting_size", h)
                    .value("x1", &all[0])
                    .value("x2", &all[1])
                    .value("separator", sep);
                row.check("separator >= hitting size", sep >= h);
                Ok(())
            },
        );
    }
    if found < 50 {
        let mut row = ReportRow::new("thicket-sampling");
        row.value("found", found);
        row.check("50 thickets with two minimum hitting sets", false);
        rows.push(row);
    }
    Ok(rows)
}

fn conversion(seed: u64, l: &Limits) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (id, g) in minmax_graphs(seed)? {
        attempt(&mut rows, id, |row| {
            let (nu, vine) = vinewidth_exact(&g, l)?;
            let tree = vine_to_tree(&g, &vine)?;
            row.value("nu", nu).value("tree_width", tree.width());
            row.check(
                "tree decomposition valid",
                validate_tree(&g, &tree).is_empty(),
            );
            row.check("width <= 2 nu - 1", tree.width() < 2 * nu);
            Ok(())
        });
    }
    for n in [4usize, 6] {
        attempt(&mut rows, format!("K{n}"), |row| {
            let g = generate(Family::Clique(n))?;
            let (nu, vine) = vinewidth_exact(&g, l)?;
            let exact = vine_to_tree(&g, &vine)?;
            let halves = vine_to_tree(&g, &clique_halves_vine(n))?;
            row.value("nu", nu)
                .value("witness_width", exact.width())
                .value("halves_width", halves.width());
            row.check(
                "valid",
                validate_tree(&g, &exact).is_empty() && validate_tree(&g, &halves).is_empty(),
            );
            row.check("witness conversion width == n-1", exact.width() == n - 1);
            row.check("halves conversion width == n-1", halves.width() == n - 1);
            Ok(())
        });
    }
    Ok(rows)
}

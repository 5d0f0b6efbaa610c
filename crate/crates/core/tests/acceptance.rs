//! The twelve acceptance criteria, one experiment each, at their stated
//! tolerances. Prints one line per criterion and fails if any criterion fails.
//!
//! Run with `cargo test -p thicket --test acceptance -- --nocapture`.

use std::time::Duration;

use thicket::report::{timed_experiment, ExperimentConfig, RowStatus, DEFAULT_SEED, EXPERIMENTS};
use thicket::Limits;

/// Wall-clock limits stated by the criteria that carry one.
fn time_limit(name: &str) -> Option<Duration> {
    match name {
        "minmax" => Some(Duration::from_secs(15 * 60)),
        "strong-duality" => Some(Duration::from_secs(2 * 60)),
        "dual-grid" => Some(Duration::from_secs(60)),
        _ => None,
    }
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (i, name) in EXPERIMENTS.iter().enumerate() {
        let config = ExperimentConfig::new(*name, DEFAULT_SEED, Limits::default());
        let line = match timed_experiment(&config) {
            Ok((table, elapsed)) => {
                let in_time = time_limit(name).is_none_or(|limit| elapsed <= limit);
                let ok = table.passed() && !table.rows.is_empty() && in_time;
                let mut line = format!(
                    "criterion {:>2} {:<15} {}  rows={} pass={} fail={} budget={} error={} time={:.2?}",
                    i + 1,
                    name,
                    if ok { "PASS" } else { "FAIL" },
                    table.rows.len(),
                    table.count(RowStatus::Pass),
                    table.count(RowStatus::Fail),
                    table.count(RowStatus::Budget),
                    table.count(RowStatus::Error),
                    elapsed
                );
                if !in_time {
                    line.push_str(&format!(
                        "  over the limit of {:?}",
                        time_limit(name).unwrap()
                    ));
                }
                for row in table.failing().take(5) {
                    let values: Vec<String> = row
                        .values
                        .iter()
                        .map(|f| format!("{}={}", f.name, f.value))
                        .collect();
                    let broken: Vec<&str> = row
                        .checks
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| c.name.as_str())
                        .collect();
                    line.push_str(&format!(
                        "\n      {} [{}] failed: {} {}",
                        row.instance,
                        values.join(" "),
                        broken.join(", "),
                        row.message.as_deref().unwrap_or("")
                    ));
                }
                if !ok {
                    failed.push(*name);
                }
                line
            }
            Err(e) => {
                failed.push(*name);
                format!("criterion {:>2} {:<15} FAIL  {e}", i + 1, name)
            }
        };
        println!("{line}");
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

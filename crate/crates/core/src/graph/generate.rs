use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Named graph families with a fixed vertex numbering.
///
/// * `Path(n)`: vertices `0..n` along the path.
/// * `Star(leaves)`: center `0`, leaves `1..=leaves`.
/// * `Clique(n)`: complete graph on `0..n`.
/// * `Grid(k)`: `k x k` grid, vertex `(row, col)` is `row * k + col`.
/// * `PathPower(n, r)`: path `0..n` plus every pair at path distance `<= r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path(usize),
    Star(usize),
    Clique(usize),
    Grid(usize),
    PathPower(usize, usize),
}

impl Family {
    /// Parses `name` plus positional parameters, e.g. `("path_power", [5, 2])`.
    pub fn from_name(name: &str, params: &[usize]) -> Result<Family> {
        let name = name.replace('-', "_");
        let one = || match params {
            [p] => Ok(*p),
            _ => Err(Error::invalid(format!("family {name} takes one parameter"))),
        };
        Ok(match name.as_str() {
            "path" => Family::Path(one()?),
            "star" => Family::Star(one()?),
            "clique" => Family::Clique(one()?),
            "grid" => Family::Grid(one()?),
            "path_power" => match params {
                [n, r] => Family::PathPower(*n, *r),
                _ => {
                    return Err(Error::invalid(
                        "family path_power takes two parameters (n, r)",
                    ))
                }
            },
            other => return Err(Error::invalid(format!("unknown graph family {other:?}"))),
        })
    }
}

pub fn generate(family: Family) -> Result<Graph> {
    let positive = |p: usize, what: &str| {
        if p == 0 {
            Err(Error::invalid(format!("{what} must be positive")))
        } else {
            Ok(p)
        }
    };
    match family {
        Family::Path(n) => {
            positive(n, "path length")?;
            Graph::new(n, (1..n).map(|i| (i - 1, i)))
        }
        Family::Star(leaves) => {
            positive(leaves, "leaf count")?;
            Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)))
        }
        Family::Clique(n) => {
            positive(n, "clique size")?;
            Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Family::Grid(k) => {
            positive(k, "grid side")?;
            let mut edges = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    let v = i * k + j;
                    if j + 1 < k {
                        edges.push((v, v + 1));
                    }
                    if i + 1 < k {
                        edges.push((v, v + k));
                    }
                }
            }
            Graph::new(k * k, edges)
        }
        Family::PathPower(n, r) => {
            positive(n, "path length")?;
            positive(r, "power")?;
            if r >= n {
                return Err(Error::invalid(format!(
                    "path power needs r < n, got r = {r}, n = {n}"
                )));
            }
            Graph::new(
                n,
                (0..n).flat_map(|u| (u + 1..n.min(u + r + 1)).map(move |v| (u, v))),
            )
        }
    }
}

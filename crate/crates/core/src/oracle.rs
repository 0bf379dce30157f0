//! Exhaustive minimum covers for small graphs.
//!
//! Nothing here relies on block-graph structure: paths come from BFS layers
//! and the search only knows the two cover conditions.

use std::collections::HashMap;

use thiserror::Error;

use crate::cover::Cover;
use crate::graph::{bfs_distances, Graph, IsometricPath, UNREACHABLE};
use crate::labeling::VertexLabeling;

/// Largest graph [`enumerate_isometric_paths`] accepts.
pub const ENUMERATION_LIMIT: usize = 16;
/// Largest graph [`brute_force_ip`] accepts.
pub const SEARCH_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; the limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("labeling has {found} entries for a graph on {expected} vertices")]
    LabelCount { expected: usize, found: usize },
}

/// Where iterative deepening starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchStart {
    /// Half the total label, rounded up: every path has only two ends.
    #[default]
    EndpointBound,
    /// Size one, for runs that must not lean on any counting argument.
    One,
}

/// All trivial paths, then every shortest path between each pair `u < v`,
/// oriented from `u` to `v`.
pub fn enumerate_isometric_paths(g: &Graph) -> Result<Vec<IsometricPath>, OracleError> {
    let n = g.vertex_count();
    if n > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut out: Vec<IsometricPath> = (0..n).map(IsometricPath::trivial).collect();
    for u in 0..n {
        let dist = bfs_distances(g, u);
        for v in u + 1..n {
            if dist[v] == UNREACHABLE {
                continue;
            }
            let mut suffix = vec![v];
            walk_back(g, &dist, &mut suffix, &mut out);
        }
    }
    Ok(out)
}

// Extends `suffix` (reversed path ending at the target) one BFS layer at a
// time towards the source.
fn walk_back(g: &Graph, dist: &[usize], suffix: &mut Vec<usize>, out: &mut Vec<IsometricPath>) {
    let head = *suffix.last().unwrap();
    if dist[head] == 0 {
        out.push(IsometricPath::new(suffix.iter().rev().copied().collect()));
        return;
    }
    for &w in g.neighbors(head) {
        if dist[w] != UNREACHABLE && dist[w] + 1 == dist[head] {
            suffix.push(w);
            walk_back(g, dist, suffix, out);
            suffix.pop();
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Demand {
    /// Label-0 vertices not yet on any chosen path.
    uncovered: u32,
    /// Remaining endpoint requirement per vertex.
    deficit: Vec<u32>,
}

impl Demand {
    fn is_met(&self) -> bool {
        self.uncovered == 0 && self.deficit.iter().all(|&d| d == 0)
    }

    fn lower_bound(&self) -> u64 {
        let total: u64 = self.deficit.iter().map(|&d| u64::from(d)).sum();
        let bound = total.div_ceil(2);
        if bound == 0 && self.uncovered != 0 {
            1
        } else {
            bound
        }
    }
}

struct PathInfo {
    path: IsometricPath,
    mask: u32,
    ends: [usize; 2],
}

struct Searcher {
    paths: Vec<PathInfo>,
    /// Largest budget known to be insufficient for each demand state.
    failed: HashMap<Demand, u64>,
    chosen: Vec<usize>,
}

impl Searcher {
    fn apply(&self, state: &Demand, idx: usize) -> Demand {
        let info = &self.paths[idx];
        let mut next = state.clone();
        next.uncovered &= !info.mask;
        for &e in &info.ends {
            next.deficit[e] = next.deficit[e].saturating_sub(1);
        }
        next
    }

    fn solve(&mut self, state: Demand, budget: u64) -> bool {
        if state.is_met() {
            return true;
        }
        if state.lower_bound() > budget {
            return false;
        }
        if self.failed.get(&state).is_some_and(|&b| b >= budget) {
            return false;
        }
        // Branch on the first unmet vertex; some path in any completion serves it.
        let target = state.deficit.iter().position(|&d| d > 0);
        let candidates: Vec<usize> = match target {
            Some(v) => (0..self.paths.len())
                .filter(|&i| self.paths[i].ends.contains(&v))
                .collect(),
            None => {
                let v = state.uncovered.trailing_zeros();
                (0..self.paths.len())
                    .filter(|&i| self.paths[i].mask & (1 << v) != 0)
                    .collect()
            }
        };
        for idx in candidates {
            let next = self.apply(&state, idx);
            self.chosen.push(idx);
            if self.solve(next, budget - 1) {
                return true;
            }
            self.chosen.pop();
        }
        let entry = self.failed.entry(state).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }
}

/// Minimum number of shortest paths meeting the cover conditions for `f`,
/// with a witness cover. `f` is used as given.
pub fn brute_force_ip(
    g: &Graph,
    f: &VertexLabeling,
    start: SearchStart,
) -> Result<(u64, Cover), OracleError> {
    let n = g.vertex_count();
    if n > SEARCH_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: SEARCH_LIMIT,
        });
    }
    if f.len() != n {
        return Err(OracleError::LabelCount {
            expected: n,
            found: f.len(),
        });
    }
    if n == 0 {
        return Ok((0, Cover::new()));
    }

    let paths = enumerate_isometric_paths(g)?
        .into_iter()
        .map(|path| {
            let mask = path.vertices().iter().fold(0u32, |m, &v| m | (1 << v));
            let ends = [path.first().unwrap(), path.last().unwrap()];
            PathInfo { path, mask, ends }
        })
        .collect();
    let initial = Demand {
        uncovered: (0..n)
            .filter(|&v| f.get(v) == 0)
            .fold(0, |m, v| m | (1 << v)),
        deficit: f.as_slice().to_vec(),
    };

    let mut searcher = Searcher {
        paths,
        failed: HashMap::new(),
        chosen: Vec::new(),
    };
    let mut k = match start {
        SearchStart::EndpointBound => initial.lower_bound().max(1),
        SearchStart::One => 1,
    };
    loop {
        if searcher.solve(initial.clone(), k) {
            let cover = Cover::from_paths(
                searcher
                    .chosen
                    .iter()
                    .map(|&i| searcher.paths[i].path.clone()),
            );
            return Ok((searcher.chosen.len() as u64, cover));
        }
        k += 1;
    }
}

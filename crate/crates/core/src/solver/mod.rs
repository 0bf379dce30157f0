//! Isometric-path numbers of block graphs and optimal covers.
//!
//! The value is `ceil(s / 2)` per connected component, where `s` is the sum
//! of the regularized labels. The cover comes from peeling leaf blocks down to
//! one vertex per component and replaying the peel backwards.

mod peel;
mod reconstruct;

use std::fmt;

use thiserror::Error;

use crate::cover::Cover;
use crate::decomposition::{
    blocks_and_cut_vertices, check_block_graph, BlockCutStructure, DecompositionError,
};
use crate::graph::{connected_components, Graph};
use crate::labeling::VertexLabeling;
use crate::verify::{certify_cover, VerificationReport};

pub use peel::{peel, PeelOutcome, Root, StackFrame};
pub use reconstruct::{initial_copies, reconstruct, search, Stuck};

/// Search nodes the fallback reconstruction may visit.
pub const FALLBACK_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("not a block graph: block {vertices:?} does not induce a clique")]
    NotBlockGraph { block: usize, vertices: Vec<usize> },
    #[error("label sum {sum} exceeds the 32-bit range")]
    LabelOverflow { sum: u64 },
    #[error("labeling has {found} entries for a graph on {expected} vertices")]
    LabelCount { expected: usize, found: usize },
    #[error("labeling is not regular: non-cut vertex {vertex} has label 0")]
    NotRegular { vertex: usize },
    #[error("internal error: {0}")]
    Internal(Box<InternalFailure>),
}

impl From<DecompositionError> for SolveError {
    fn from(e: DecompositionError) -> Self {
        match e {
            DecompositionError::NotBlockGraph { block, vertices } => {
                SolveError::NotBlockGraph { block, vertices }
            }
        }
    }
}

impl SolveError {
    pub(crate) fn internal(message: String, frames: Vec<StackFrame>) -> Self {
        SolveError::Internal(Box::new(InternalFailure {
            message,
            frames,
            stuck: None,
            report: None,
        }))
    }
}

/// A solver bug: the constructed cover could not be completed or failed its
/// own check. Carries the peel trace for diagnosis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalFailure {
    pub message: String,
    pub frames: Vec<StackFrame>,
    pub stuck: Option<Stuck>,
    pub report: Option<VerificationReport>,
}

impl fmt::Display for InternalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)?;
        if let Some(stuck) = &self.stuck {
            write!(
                f,
                "; greedy pass stuck at frame {} (x={}, y={}, i={}): {}",
                stuck.frame_index, stuck.frame.x, stuck.frame.y, stuck.frame.demand, stuck.message
            )?;
        }
        if let Some(report) = &self.report {
            for v in &report.violations {
                write!(f, "; {v}")?;
            }
        }
        write!(f, "; peel stack:")?;
        for fr in &self.frames {
            write!(f, " ({},{},{})", fr.x, fr.y, fr.demand)?;
        }
        Ok(())
    }
}

/// Raises the label of every non-cut vertex to at least 1.
pub fn regularize(g: &Graph, f: &VertexLabeling) -> VertexLabeling {
    regularize_with(&blocks_and_cut_vertices(g), f)
}

pub fn regularize_with(bc: &BlockCutStructure, f: &VertexLabeling) -> VertexLabeling {
    let mut out = f.clone();
    for v in 0..f.len() {
        if !bc.is_cut_vertex(v) && f.get(v) == 0 {
            out.set(v, 1);
        }
    }
    out
}

/// Sum of all labels, rejected when it leaves the 32-bit range.
pub fn s_value(f: &VertexLabeling) -> Result<u32, SolveError> {
    let sum: u64 = f.as_slice().iter().map(|&v| u64::from(v)).sum();
    u32::try_from(sum).map_err(|_| SolveError::LabelOverflow { sum })
}

fn prepare(
    g: &Graph,
    f: &VertexLabeling,
) -> Result<(BlockCutStructure, VertexLabeling), SolveError> {
    if f.len() != g.vertex_count() {
        return Err(SolveError::LabelCount {
            expected: g.vertex_count(),
            found: f.len(),
        });
    }
    let bc = blocks_and_cut_vertices(g);
    check_block_graph(g, &bc)?;
    let regular = regularize_with(&bc, f);
    s_value(&regular)?;
    Ok((bc, regular))
}

/// The f-isometric-path number, summed over connected components.
pub fn ip_f_value(g: &Graph, f: &VertexLabeling) -> Result<u64, SolveError> {
    let (_, regular) = prepare(g, f)?;
    Ok(connected_components(g)
        .iter()
        .map(|part| {
            let s: u64 = part.iter().map(|&v| u64::from(regular.get(v))).sum();
            s.div_ceil(2)
        })
        .sum())
}

/// The isometric-path number: half the number of non-cut vertices, rounded up,
/// per component.
pub fn ip_value(g: &Graph) -> Result<u64, SolveError> {
    ip_f_value(g, &VertexLabeling::zeros(g.vertex_count()))
}

/// Result of [`solve`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub value: u64,
    pub cover: Cover,
    pub regularized: VertexLabeling,
    /// Set when the greedy slot policy got stuck and the exhaustive
    /// reconstruction produced the cover.
    pub used_fallback: bool,
    pub peel: PeelOutcome,
}

/// Computes the f-isometric-path number and an optimal cover, checking the
/// cover before returning it.
pub fn solve(g: &Graph, f: &VertexLabeling) -> Result<Solution, SolveError> {
    let (bc, regular) = prepare(g, f)?;
    let outcome = peel(g, &bc, &regular)?;
    let value: u64 = outcome.roots.iter().map(|r| initial_copies(r.label)).sum();

    let (cover, used_fallback) = match reconstruct(g, &outcome) {
        Ok(cover) => (cover, false),
        Err(stuck) => match search(g, &bc, &outcome, FALLBACK_BUDGET) {
            Some(cover) => (cover, true),
            None => {
                return Err(SolveError::Internal(Box::new(InternalFailure {
                    message: "no slot assignment completes the cover".into(),
                    frames: outcome.frames,
                    stuck: Some(stuck),
                    report: None,
                })))
            }
        },
    };

    let report = certify_cover(g, &bc, &regular, &cover);
    if !report.is_valid() || cover.len() != value {
        return Err(SolveError::Internal(Box::new(InternalFailure {
            message: format!(
                "constructed cover of {} paths failed verification",
                cover.len()
            ),
            frames: outcome.frames,
            stuck: None,
            report: Some(report),
        })));
    }

    Ok(Solution {
        value,
        cover,
        regularized: regular,
        used_fallback,
        peel: outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, IsometricPath};

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn triangle_pendant() -> Graph {
        parse_edge_list("4 4\n0 1\n1 2\n0 2\n1 3").unwrap()
    }

    #[test]
    fn regularize_examples() {
        let g = triangle_pendant();
        assert_eq!(
            regularize(&g, &VertexLabeling::zeros(4)).as_slice(),
            &[1, 0, 1, 1]
        );
        let regular = VertexLabeling::from(vec![2, 0, 1, 3]);
        assert_eq!(regularize(&g, &regular), regular);

        let k3 = complete(3);
        assert_eq!(
            regularize(&k3, &VertexLabeling::from(vec![5, 0, 0])).as_slice(),
            &[5, 1, 1]
        );
    }

    #[test]
    fn s_value_examples() {
        assert_eq!(s_value(&VertexLabeling::constant(5, 1)), Ok(5));
        assert_eq!(s_value(&VertexLabeling::zeros(5)), Ok(0));
        assert_eq!(s_value(&VertexLabeling::from(vec![2, 3])), Ok(5));
        assert_eq!(
            s_value(&VertexLabeling::from(vec![u32::MAX, 1])),
            Err(SolveError::LabelOverflow {
                sum: u64::from(u32::MAX) + 1
            })
        );
    }

    #[test]
    fn value_examples() {
        for n in 1..=6 {
            assert_eq!(ip_value(&complete(n)).unwrap(), n.div_ceil(2) as u64);
        }
        let p4 = parse_edge_list("4 3\n0 1\n1 2\n2 3").unwrap();
        assert_eq!(ip_value(&p4).unwrap(), 1);
        let edge = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!(
            ip_f_value(&edge, &VertexLabeling::from(vec![3, 1])).unwrap(),
            2
        );
        assert_eq!(ip_value(&Graph::empty(1)).unwrap(), 1);
        assert_eq!(ip_value(&triangle_pendant()).unwrap(), 2);
        let star = parse_edge_list("6 5\n0 1\n0 2\n0 3\n0 4\n0 5").unwrap();
        assert_eq!(ip_value(&star).unwrap(), 3);
    }

    #[test]
    fn value_sums_over_components() {
        let g = parse_edge_list("5 2\n0 1\n2 3").unwrap();
        assert_eq!(ip_value(&g).unwrap(), 3);
    }

    #[test]
    fn rejects_non_block_graphs() {
        let c4 = parse_edge_list("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert!(matches!(
            ip_value(&c4),
            Err(SolveError::NotBlockGraph { .. })
        ));
        assert!(matches!(
            solve(&c4, &VertexLabeling::zeros(4)),
            Err(SolveError::NotBlockGraph { ref vertices, .. }) if vertices == &[0, 1, 2, 3]
        ));
    }

    #[test]
    fn rejects_overflowing_labels() {
        let edge = parse_edge_list("2 1\n0 1").unwrap();
        let f = VertexLabeling::from(vec![u32::MAX, 1]);
        assert!(matches!(
            solve(&edge, &f),
            Err(SolveError::LabelOverflow { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let p5 = parse_edge_list("5 4\n0 1\n1 2\n2 3\n3 4").unwrap();
        let sol = solve(&p5, &VertexLabeling::zeros(5)).unwrap();
        assert_eq!(sol.value, 1);
        assert_eq!(
            sol.cover.canonical(),
            vec![IsometricPath::new(vec![0, 1, 2, 3, 4])]
        );

        let sol = solve(&Graph::empty(1), &VertexLabeling::zeros(1)).unwrap();
        assert_eq!(sol.value, 1);
        assert_eq!(sol.cover.canonical(), vec![IsometricPath::trivial(0)]);

        let sol = solve(&complete(4), &VertexLabeling::zeros(4)).unwrap();
        assert_eq!(sol.value, 2);
        let paths = sol.cover.canonical();
        assert!(paths.iter().all(|p| p.len() == 2));
        let mut touched: Vec<_> = paths.iter().flat_map(|p| p.vertices().to_vec()).collect();
        touched.sort();
        assert_eq!(touched, vec![0, 1, 2, 3]);
    }

    #[test]
    fn large_labels_use_multiplicities() {
        let edge = parse_edge_list("2 1\n0 1").unwrap();
        let f = VertexLabeling::from(vec![1_000_000, 1_000_000]);
        let sol = solve(&edge, &f).unwrap();
        assert_eq!(sol.value, 1_000_000);
        assert!(sol.cover.entries().len() <= 3);
    }

    #[test]
    fn internal_failure_display_carries_the_trace() {
        let failure = InternalFailure {
            message: "boom".into(),
            frames: vec![StackFrame {
                x: 1,
                y: 0,
                demand: 2,
                block: 0,
            }],
            stuck: None,
            report: None,
        };
        assert_eq!(failure.to_string(), "boom; peel stack: (1,0,2)");
    }
}

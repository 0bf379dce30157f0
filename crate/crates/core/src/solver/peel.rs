use crate::decomposition::{peel_order, BlockCutStructure};
use crate::graph::Graph;
use crate::labeling::VertexLabeling;

use super::SolveError;

/// A peeled vertex `x`, the anchor `y` that absorbed its demand, the demand
/// moved, and the block holding both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StackFrame {
    pub x: usize,
    pub y: usize,
    pub demand: u32,
    pub block: usize,
}

/// The vertex a component shrinks to, with the demand it accumulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Root {
    pub vertex: usize,
    pub label: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelOutcome {
    /// Frames in push order; reconstruction pops from the end.
    pub frames: Vec<StackFrame>,
    /// One root per connected component, in increasing vertex order.
    pub roots: Vec<Root>,
}

/// Removes the non-anchor vertices of each block in peel order, in
/// increasing id within a block, moving each one's demand onto the anchor.
///
/// The labeling must be regular. Demand is conserved: the roots' labels sum
/// to the total of `f`.
pub fn peel(
    g: &Graph,
    bc: &BlockCutStructure,
    f: &VertexLabeling,
) -> Result<PeelOutcome, SolveError> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(SolveError::LabelCount {
            expected: n,
            found: f.len(),
        });
    }
    if let Some(v) = (0..n).find(|&v| !bc.is_cut_vertex(v) && f.get(v) == 0) {
        return Err(SolveError::NotRegular { vertex: v });
    }
    super::s_value(f)?;

    let order = peel_order(g, bc)?;
    let mut label: Vec<u32> = f.as_slice().to_vec();
    let mut removed = vec![false; n];
    let mut frames = Vec::with_capacity(n.saturating_sub(1));

    for step in order {
        let y = step.anchor;
        for &x in bc.block(step.block) {
            if x == y {
                continue;
            }
            let demand = label[x];
            if demand == 0 || removed[x] {
                return Err(SolveError::internal(
                    format!("peeling vertex {x} into {y} with demand {demand}"),
                    frames,
                ));
            }
            frames.push(StackFrame {
                x,
                y,
                demand,
                block: step.block,
            });
            // s_value bounds every partial sum.
            label[y] += demand;
            label[x] = 0;
            removed[x] = true;
        }
    }

    let roots = (0..n)
        .filter(|&v| !removed[v])
        .map(|v| Root {
            vertex: v,
            label: label[v],
        })
        .collect();
    Ok(PeelOutcome { frames, roots })
}

//! Biconnected-component decomposition, cut vertices, block-graph recognition
//! and the leaf-block peel ordering.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Graph;

const UNVISITED: usize = usize::MAX;

/// Blocks of a graph together with its cut vertices.
///
/// Blocks are numbered in DFS discovery order: the DFS runs from each
/// unvisited vertex in increasing id order and a block's number follows the
/// discovery time of the tree edge that enters it. An isolated vertex is a
/// block of its own.
#[derive(Clone, Debug)]
pub struct BlockCutStructure {
    block_offsets: Vec<usize>,
    block_vertices: Vec<usize>,
    is_cut: Vec<bool>,
    vertex_block_offsets: Vec<usize>,
    vertex_block_ids: Vec<usize>,
    /// Block of each arc, indexed like the graph's flat adjacency array.
    arc_block: Vec<usize>,
    /// Block whose tree edge enters each vertex; a DFS root has none unless
    /// it is isolated.
    entry_block: Vec<usize>,
    /// The vertex through which the DFS entered each block.
    block_head: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("not a block graph: block {vertices:?} does not induce a clique")]
    NotBlockGraph { block: usize, vertices: Vec<usize> },
}

/// One step of the peel: a block that is a leaf of the remaining graph and
/// the vertex of it that stays behind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub block: usize,
    pub anchor: usize,
}

impl BlockCutStructure {
    pub fn block_count(&self) -> usize {
        self.block_offsets.len() - 1
    }

    /// Sorted vertex set of a block.
    pub fn block(&self, b: usize) -> &[usize] {
        &self.block_vertices[self.block_offsets[b]..self.block_offsets[b + 1]]
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        (0..self.block_count()).map(|b| self.block(b))
    }

    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.is_cut[v]
    }

    pub fn cut_vertices(&self) -> Vec<usize> {
        (0..self.is_cut.len()).filter(|&v| self.is_cut[v]).collect()
    }

    /// Number of vertices that are not cut vertices.
    pub fn non_cut_count(&self) -> usize {
        self.is_cut.iter().filter(|&&c| !c).count()
    }

    /// Blocks containing `v`, in increasing block number.
    pub fn blocks_of(&self, v: usize) -> &[usize] {
        &self.vertex_block_ids[self.vertex_block_offsets[v]..self.vertex_block_offsets[v + 1]]
    }

    /// Block of the edge `u v`, if the edge exists.
    pub fn edge_block(&self, g: &Graph, u: usize, v: usize) -> Option<usize> {
        g.arc_index(u, v).map(|a| self.arc_block[a])
    }

    /// The block holding both `u` and `v`, if any. Two vertices share at
    /// most one block. In a block graph this is `edge_block` without a
    /// search through the adjacency lists.
    pub fn common_block(&self, u: usize, v: usize) -> Option<usize> {
        let (bu, bv) = (self.entry_block[u], self.entry_block[v]);
        if u == v {
            None
        } else if bu == bv && bu != UNVISITED {
            Some(bu)
        } else if bv != UNVISITED && self.block_head[bv] == u {
            Some(bv)
        } else if bu != UNVISITED && self.block_head[bu] == v {
            Some(bu)
        } else {
            None
        }
    }
}

/// Lowpoint DFS, iterative so deep graphs do not exhaust the call stack.
/// Linear in `n + m` apart from sorting each block's vertex list.
pub fn blocks_and_cut_vertices(g: &Graph) -> BlockCutStructure {
    let n = g.vertex_count();
    let mut disc = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![UNVISITED; n];
    let mut next_arc: Vec<usize> = (0..n).map(|v| g.arc_range(v).start).collect();

    // Blocks in the order they close; `key` is the discovery time of the
    // vertex entering the block, `tree_block[w]` the closing index of the
    // block holding the tree edge into `w` (or `w` itself for a root).
    let mut members = Vec::with_capacity(2 * n);
    let mut closed: Vec<(usize, usize)> = Vec::new();
    let mut heads = Vec::new();
    let mut key_slot = vec![UNVISITED; n];
    let mut tree_block = vec![UNVISITED; n];

    let mut time = 0;
    let mut call_stack = Vec::new();
    let mut vertex_stack = Vec::new();

    for root in 0..n {
        if disc[root] != UNVISITED {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        if g.degree(root) == 0 {
            key_slot[disc[root]] = closed.len();
            tree_block[root] = closed.len();
            closed.push((members.len(), disc[root]));
            heads.push(root);
            members.push(root);
            continue;
        }
        call_stack.push(root);
        while let Some(&u) = call_stack.last() {
            if next_arc[u] < g.arc_range(u).end {
                let arc = next_arc[u];
                next_arc[u] += 1;
                let v = g.arc_target(arc);
                if disc[v] == UNVISITED {
                    parent[v] = u;
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    vertex_stack.push(v);
                    call_stack.push(v);
                } else if v != parent[u] {
                    low[u] = low[u].min(disc[v]);
                }
                continue;
            }

            call_stack.pop();
            let p = parent[u];
            if p == UNVISITED {
                continue;
            }
            low[p] = low[p].min(low[u]);
            if low[u] >= disc[p] {
                let slot = closed.len();
                key_slot[disc[u]] = slot;
                closed.push((members.len(), disc[u]));
                heads.push(p);
                members.push(p);
                loop {
                    let w = vertex_stack.pop().expect("block vertices are stacked");
                    tree_block[w] = slot;
                    members.push(w);
                    if w == u {
                        break;
                    }
                }
            }
        }
    }

    // Renumber blocks in key order and lay their vertex sets out flat.
    let mut renumber = vec![0; closed.len()];
    let mut block_offsets = Vec::with_capacity(closed.len() + 1);
    let mut block_head = Vec::with_capacity(closed.len());
    let mut block_vertices = Vec::with_capacity(members.len());
    block_offsets.push(0);
    for &slot in key_slot.iter().filter(|&&s| s != UNVISITED) {
        renumber[slot] = block_offsets.len() - 1;
        block_head.push(heads[slot]);
        let start = closed[slot].0;
        let end = closed.get(slot + 1).map_or(members.len(), |c| c.0);
        let from = block_vertices.len();
        block_vertices.extend_from_slice(&members[start..end]);
        block_vertices[from..].sort_unstable();
        block_offsets.push(block_vertices.len());
    }

    // An edge lies in the block of the tree edge entering its deeper end.
    let mut arc_block = vec![UNVISITED; g.arc_count()];
    for u in 0..n {
        for arc in g.arc_range(u) {
            let v = g.arc_target(arc);
            let deeper = if disc[u] > disc[v] { u } else { v };
            arc_block[arc] = renumber[tree_block[deeper]];
        }
    }

    let mut counts = vec![0usize; n];
    for &v in &block_vertices {
        counts[v] += 1;
    }
    let mut vertex_block_offsets = Vec::with_capacity(n + 1);
    vertex_block_offsets.push(0);
    for c in &counts {
        vertex_block_offsets.push(vertex_block_offsets.last().unwrap() + c);
    }
    let mut fill = vertex_block_offsets[..n].to_vec();
    let mut vertex_block_ids = vec![0; vertex_block_offsets[n]];
    for b in 0..block_offsets.len() - 1 {
        for &v in &block_vertices[block_offsets[b]..block_offsets[b + 1]] {
            vertex_block_ids[fill[v]] = b;
            fill[v] += 1;
        }
    }

    BlockCutStructure {
        block_offsets,
        block_vertices,
        is_cut: counts.iter().map(|&c| c >= 2).collect(),
        vertex_block_offsets,
        vertex_block_ids,
        arc_block,
        entry_block: tree_block
            .iter()
            .map(|&t| {
                if t == UNVISITED {
                    UNVISITED
                } else {
                    renumber[t]
                }
            })
            .collect(),
        block_head,
    }
}

/// Checks that every block induces a clique, reporting the first that does not.
pub fn check_block_graph(g: &Graph, bc: &BlockCutStructure) -> Result<(), DecompositionError> {
    debug_assert_eq!(bc.arc_block.len(), g.arc_count());
    let mut edges_in_block = vec![0usize; bc.block_count()];
    for (arc, &b) in bc.arc_block.iter().enumerate() {
        debug_assert!(b != UNVISITED, "arc {arc} without a block");
        edges_in_block[b] += 1;
    }
    for (b, block) in bc.blocks().enumerate() {
        let k = block.len();
        // Each edge contributes two arcs.
        if edges_in_block[b] != k * (k - 1) {
            return Err(DecompositionError::NotBlockGraph {
                block: b,
                vertices: block.to_vec(),
            });
        }
    }
    Ok(())
}

pub fn is_block_graph(g: &Graph) -> bool {
    check_block_graph(g, &blocks_and_cut_vertices(g)).is_ok()
}

/// Blocks with at most one cut vertex, with their anchor: the unique cut
/// vertex, or the smallest vertex id when the block has none.
pub fn leaf_blocks(bc: &BlockCutStructure) -> Vec<PeelStep> {
    bc.blocks()
        .enumerate()
        .filter_map(|(b, block)| {
            let mut cuts = block.iter().filter(|&&v| bc.is_cut[v]);
            let first = cuts.next();
            match (first, cuts.next()) {
                (Some(&y), None) => Some(PeelStep {
                    block: b,
                    anchor: y,
                }),
                (None, _) => Some(PeelStep {
                    block: b,
                    anchor: block[0],
                }),
                _ => None,
            }
        })
        .collect()
}

/// Orders all blocks so that each is a leaf block of the graph left after
/// removing the non-anchor vertices of its predecessors.
///
/// Leaves of the block-cut forest are trimmed through a FIFO queue seeded in
/// block order. A block whose vertices belong to no other remaining block is
/// the last of its component and is anchored at its smallest vertex; every
/// component therefore ends with exactly one surviving vertex.
pub fn peel_order(g: &Graph, bc: &BlockCutStructure) -> Result<Vec<PeelStep>, DecompositionError> {
    check_block_graph(g, bc)?;

    let n = g.vertex_count();
    let mut alive_blocks_at: Vec<usize> = (0..n).map(|v| bc.blocks_of(v).len()).collect();
    let mut cut_count: Vec<usize> = bc
        .blocks()
        .map(|block| block.iter().filter(|&&v| alive_blocks_at[v] >= 2).count())
        .collect();
    let mut removed = vec![false; bc.block_count()];
    let mut queued = vec![false; bc.block_count()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (b, &c) in cut_count.iter().enumerate() {
        if c <= 1 {
            queued[b] = true;
            queue.push_back(b);
        }
    }

    let mut order = Vec::with_capacity(bc.block_count());
    while let Some(b) = queue.pop_front() {
        let block = bc.block(b);
        let anchor = if cut_count[b] == 0 {
            block[0]
        } else {
            *block
                .iter()
                .find(|&&v| alive_blocks_at[v] >= 2)
                .expect("leaf block has a cut vertex")
        };
        removed[b] = true;
        order.push(PeelStep { block: b, anchor });

        if cut_count[b] == 0 {
            continue;
        }
        alive_blocks_at[anchor] -= 1;
        if alive_blocks_at[anchor] == 1 {
            // The anchor stops being a cut vertex of its last remaining block.
            let rest = bc
                .blocks_of(anchor)
                .iter()
                .copied()
                .find(|&other| !removed[other])
                .expect("anchor still lies in a block");
            cut_count[rest] -= 1;
            if cut_count[rest] <= 1 && !queued[rest] {
                queued[rest] = true;
                queue.push_back(rest);
            }
        }
    }
    debug_assert_eq!(order.len(), bc.block_count());
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn triangle_pendant() -> Graph {
        parse_edge_list("4 4\n0 1\n1 2\n0 2\n1 3").unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn triangle_with_pendant() {
        let bc = blocks_and_cut_vertices(&triangle_pendant());
        assert_eq!(
            bc.blocks().map(<[usize]>::to_vec).collect::<Vec<_>>(),
            [vec![0, 1, 2], vec![1, 3]]
        );
        assert_eq!(bc.cut_vertices(), vec![1]);
        assert_eq!(bc.blocks_of(1), &[0, 1]);
    }

    #[test]
    fn path_and_clique() {
        let p3 = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        let bc = blocks_and_cut_vertices(&p3);
        assert_eq!(
            bc.blocks().map(<[usize]>::to_vec).collect::<Vec<_>>(),
            [vec![0, 1], vec![1, 2]]
        );
        assert_eq!(bc.cut_vertices(), vec![1]);

        let bc = blocks_and_cut_vertices(&complete(4));
        assert_eq!(
            bc.blocks().map(<[usize]>::to_vec).collect::<Vec<_>>(),
            [vec![0, 1, 2, 3]]
        );
        assert!(bc.cut_vertices().is_empty());
    }

    #[test]
    fn isolated_vertices_are_blocks() {
        let g = parse_edge_list("4 1\n1 2").unwrap();
        let bc = blocks_and_cut_vertices(&g);
        assert_eq!(
            bc.blocks().map(<[usize]>::to_vec).collect::<Vec<_>>(),
            [vec![0], vec![1, 2], vec![3]]
        );
        assert!(bc.cut_vertices().is_empty());
    }

    #[test]
    fn edge_blocks_are_recorded() {
        let g = triangle_pendant();
        let bc = blocks_and_cut_vertices(&g);
        assert_eq!(bc.edge_block(&g, 0, 2), Some(0));
        assert_eq!(bc.edge_block(&g, 3, 1), Some(1));
        assert_eq!(bc.edge_block(&g, 0, 3), None);
    }

    #[test]
    fn block_graph_recognition() {
        let c4 = parse_edge_list("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert!(!is_block_graph(&c4));
        let err = check_block_graph(&c4, &blocks_and_cut_vertices(&c4)).unwrap_err();
        assert_eq!(
            err,
            DecompositionError::NotBlockGraph {
                block: 0,
                vertices: vec![0, 1, 2, 3]
            }
        );
        let tree = parse_edge_list("6 5\n0 1\n0 2\n2 3\n2 4\n4 5").unwrap();
        assert!(is_block_graph(&tree));
        let bowtie = parse_edge_list("5 6\n0 1\n1 2\n0 2\n2 3\n3 4\n2 4").unwrap();
        assert!(is_block_graph(&bowtie));
        assert!(is_block_graph(&complete(5)));
    }

    #[test]
    fn leaf_block_examples() {
        let p3 = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        let leaves = leaf_blocks(&blocks_and_cut_vertices(&p3));
        assert_eq!(
            leaves,
            vec![
                PeelStep {
                    block: 0,
                    anchor: 1
                },
                PeelStep {
                    block: 1,
                    anchor: 1
                }
            ]
        );
        assert_eq!(
            leaf_blocks(&blocks_and_cut_vertices(&complete(4))),
            vec![PeelStep {
                block: 0,
                anchor: 0
            }]
        );
        assert_eq!(
            leaf_blocks(&blocks_and_cut_vertices(&triangle_pendant())),
            vec![
                PeelStep {
                    block: 0,
                    anchor: 1
                },
                PeelStep {
                    block: 1,
                    anchor: 1
                }
            ]
        );
    }

    #[test]
    fn peel_order_examples() {
        let edge = parse_edge_list("2 1\n0 1").unwrap();
        let bc = blocks_and_cut_vertices(&edge);
        assert_eq!(
            peel_order(&edge, &bc).unwrap(),
            vec![PeelStep {
                block: 0,
                anchor: 0
            }]
        );

        let p3 = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        let bc = blocks_and_cut_vertices(&p3);
        assert_eq!(
            peel_order(&p3, &bc).unwrap(),
            vec![
                PeelStep {
                    block: 0,
                    anchor: 1
                },
                PeelStep {
                    block: 1,
                    anchor: 1
                }
            ]
        );

        let star = parse_edge_list("4 3\n1 0\n1 2\n1 3").unwrap();
        let bc = blocks_and_cut_vertices(&star);
        let order = peel_order(&star, &bc).unwrap();
        assert_eq!(order.len(), 3);
        assert!(order.iter().all(|s| s.anchor == 1));
    }

    #[test]
    fn peel_order_rejects_non_block_graphs() {
        let c4 = parse_edge_list("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        let bc = blocks_and_cut_vertices(&c4);
        assert!(matches!(
            peel_order(&c4, &bc),
            Err(DecompositionError::NotBlockGraph { .. })
        ));
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let bc = blocks_and_cut_vertices(&g);
        assert_eq!(bc.block_count(), n - 1);
        assert_eq!(bc.non_cut_count(), 2);
    }
}

//! Seeded random block graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::labeling::VertexLabeling;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorParams {
    pub block_count: usize,
    pub min_block_size: usize,
    pub max_block_size: usize,
    pub max_label: u32,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("block_count must be at least 1")]
    NoBlocks,
    #[error("block sizes must satisfy 2 <= min <= max, got [{min}, {max}]")]
    BadSizeRange { min: usize, max: usize },
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.block_count == 0 {
            return Err(GeneratorError::NoBlocks);
        }
        if self.min_block_size < 2 || self.min_block_size > self.max_block_size {
            return Err(GeneratorError::BadSizeRange {
                min: self.min_block_size,
                max: self.max_block_size,
            });
        }
        Ok(())
    }
}

/// Attaches cliques one at a time, each sharing one uniformly chosen existing
/// vertex with the graph built so far; labels are uniform in `0..=max_label`.
/// The same parameters always give the same graph.
pub fn random_block_graph(p: &GeneratorParams) -> Result<(Graph, VertexLabeling), GeneratorError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut n = 0usize;
    let mut edges = Vec::new();

    for block in 0..p.block_count {
        let size = rng.random_range(p.min_block_size..=p.max_block_size);
        let mut members = Vec::with_capacity(size);
        if block > 0 {
            members.push(rng.random_range(0..n));
        }
        while members.len() < size {
            members.push(n);
            n += 1;
        }
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                edges.push((u, v));
            }
        }
    }

    let labels = (0..n)
        .map(|_| rng.random_range(0..=p.max_label))
        .collect::<Vec<_>>();
    let g = Graph::from_edges(n, &edges).expect("generated edges are simple");
    Ok((g, VertexLabeling::from(labels)))
}

/// Parameters whose graph has about `target_vertices` vertices.
pub fn params_for_size(
    target_vertices: usize,
    min: usize,
    max: usize,
    max_label: u32,
    seed: u64,
) -> GeneratorParams {
    // Each block after the first adds (size - 1) fresh vertices on average.
    let fresh = (min + max) as f64 / 2.0 - 1.0;
    let block_count = ((target_vertices as f64 - 1.0) / fresh).round().max(1.0) as usize;
    GeneratorParams {
        block_count,
        min_block_size: min,
        max_block_size: max,
        max_label,
        seed,
    }
}

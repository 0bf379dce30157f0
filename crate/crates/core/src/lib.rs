//! Isometric-path numbers of block graphs.
//!
//! An isometric path is a shortest path between its ends; a single vertex is
//! a trivial one. Given per-vertex demands `f`, a cover is a multiset of
//! isometric paths in which every vertex with `f(v) = 0` lies on some path and
//! every other vertex ends at least `f(v)` paths (a trivial path at `v` ends
//! there twice). For block graphs, where every biconnected block is a clique,
//! [`solve`] returns the minimum cover size and a cover attaining it in linear
//! time.
//!
//! ```
//! use isopath::{parse_edge_list, solve, VertexLabeling};
//!
//! let g = parse_edge_list("4 4\n0 1\n1 2\n0 2\n1 3").unwrap();
//! let sol = solve(&g, &VertexLabeling::zeros(4)).unwrap();
//! assert_eq!(sol.value, 2);
//! ```

pub mod cli;
pub mod cover;
pub mod decomposition;
pub mod generate;
pub mod graph;
pub mod labeling;
pub mod oracle;
pub mod solver;
pub mod verify;

pub use cover::{parse_cover_text, write_cover_text, Cover, CoverEntry, StructuredOutput};
pub use decomposition::{
    blocks_and_cut_vertices, check_block_graph, is_block_graph, leaf_blocks, peel_order,
    BlockCutStructure, DecompositionError, PeelStep,
};
pub use generate::{random_block_graph, GeneratorParams};
pub use graph::{
    bfs_distances, connected_components, is_isometric_path, parse_edge_list, write_edge_list,
    Graph, IsometricPath, UNREACHABLE,
};
pub use labeling::{parse_labels, write_labels, VertexLabeling};
pub use oracle::{brute_force_ip, enumerate_isometric_paths, OracleError, SearchStart};
pub use solver::{
    ip_f_value, ip_value, peel, reconstruct, regularize, s_value, solve, Solution, SolveError,
    StackFrame,
};
pub use verify::{certify_cover, verify_cover, VerificationReport, Violation, ViolationKind};

//! Cover validation against the two cover conditions: every label-0 vertex
//! lies on some path, and every other vertex ends at least as many paths as
//! its label, a trivial path counting twice.

use std::collections::HashMap;
use std::fmt;

use crate::cover::Cover;
use crate::decomposition::BlockCutStructure;
use crate::graph::{distance, walk_is_simple_path, Graph, IsometricPath};
use crate::labeling::VertexLabeling;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    NotIsometric,
    C1Uncovered,
    C2Deficit,
    ForeignVertex,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::NotIsometric => "not-isometric",
            ViolationKind::C1Uncovered => "C1-uncovered",
            ViolationKind::C2Deficit => "C2-deficit",
            ViolationKind::ForeignVertex => "foreign-vertex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Vertex(usize),
    /// Entry index in the cover, with the offending path.
    Path(usize, IsometricPath),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: Subject,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Subject::Vertex(v) => write!(f, "{} {v}: {}", self.kind.as_str(), self.detail),
            Subject::Path(i, p) => {
                write!(
                    f,
                    "{} [{p}] (path {i}): {}",
                    self.kind.as_str(),
                    self.detail
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Checks a cover using BFS distances only; no structure of `g` is assumed.
pub fn verify_cover(g: &Graph, f: &VertexLabeling, cover: &Cover) -> VerificationReport {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    let mut foreign = Vec::new();
    let mut pair_distance: HashMap<(usize, usize), usize> = HashMap::new();

    for (i, entry) in cover.entries().iter().enumerate() {
        let p = &entry.path;
        if p.vertices().iter().any(|&v| v >= n) {
            foreign.push(Violation {
                kind: ViolationKind::ForeignVertex,
                subject: Subject::Path(i, p.clone()),
                detail: format!("visits a vertex outside 0..{n}"),
            });
            continue;
        }
        if let Some(detail) = isometry_defect(g, p, &mut pair_distance) {
            violations.push(Violation {
                kind: ViolationKind::NotIsometric,
                subject: Subject::Path(i, p.clone()),
                detail,
            });
        }
    }

    check_demands(n, f, cover, &mut violations);
    violations.extend(foreign);
    VerificationReport { violations }
}

fn isometry_defect(
    g: &Graph,
    p: &IsometricPath,
    cache: &mut HashMap<(usize, usize), usize>,
) -> Option<String> {
    if !walk_is_simple_path(g, p.vertices()) {
        return Some("not a simple path along edges".into());
    }
    let (a, b) = (p.first().unwrap(), p.last().unwrap());
    let key = (a.min(b), a.max(b));
    let d = *cache.entry(key).or_insert_with(|| distance(g, a, b));
    (d != p.len() - 1).then(|| format!("length {} but distance {d}", p.len() - 1))
}

fn check_demands(n: usize, f: &VertexLabeling, cover: &Cover, violations: &mut Vec<Violation>) {
    let mut ends = vec![0u64; n];
    let mut on_path = vec![false; n];
    for entry in cover.entries() {
        let vs = entry.path.vertices();
        if vs.is_empty() || vs.iter().any(|&v| v >= n) {
            continue;
        }
        for &v in vs {
            on_path[v] = true;
        }
        ends[vs[0]] += entry.copies;
        ends[vs[vs.len() - 1]] += entry.copies;
    }

    for (v, &seen) in on_path.iter().enumerate() {
        if f.get(v) == 0 && !seen {
            violations.push(Violation {
                kind: ViolationKind::C1Uncovered,
                subject: Subject::Vertex(v),
                detail: "lies on no path".into(),
            });
        }
    }
    for (v, &got) in ends.iter().enumerate() {
        let need = u64::from(f.get(v));
        if need > 0 && got < need {
            violations.push(Violation {
                kind: ViolationKind::C2Deficit,
                subject: Subject::Vertex(v),
                detail: format!("ends {got} paths but needs {need}"),
            });
        }
    }
}

/// Checks a cover of a block graph through its block structure, in time
/// linear in the total path length (up to adjacency lookups).
///
/// In a block graph a simple path is a shortest path exactly when no two
/// consecutive edges lie in the same block, which also makes every internal
/// vertex a cut vertex. `bc` must describe `g`, and `g` must be a block graph.
pub fn certify_cover(
    g: &Graph,
    bc: &BlockCutStructure,
    f: &VertexLabeling,
    cover: &Cover,
) -> VerificationReport {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    let mut foreign = Vec::new();

    for (i, entry) in cover.entries().iter().enumerate() {
        let p = &entry.path;
        let (kind, detail) = match path_defect(g, bc, p.vertices()) {
            None => continue,
            Some(Defect::Foreign) => (
                ViolationKind::ForeignVertex,
                format!("visits a vertex outside 0..{n}"),
            ),
            Some(Defect::Shape(detail)) => (ViolationKind::NotIsometric, detail),
        };
        let violation = Violation {
            kind,
            subject: Subject::Path(i, p.clone()),
            detail,
        };
        match kind {
            ViolationKind::ForeignVertex => foreign.push(violation),
            _ => violations.push(violation),
        }
    }

    check_demands(n, f, cover, &mut violations);
    violations.extend(foreign);
    VerificationReport { violations }
}

enum Defect {
    Foreign,
    Shape(String),
}

/// One pass over the path. A walk whose consecutive edges always change
/// block moves through the block-cut tree without turning back, so it
/// cannot revisit a vertex and only passes through cut vertices.
fn path_defect(g: &Graph, bc: &BlockCutStructure, vs: &[usize]) -> Option<Defect> {
    let n = g.vertex_count();
    let Some((&first, rest)) = vs.split_first() else {
        return Some(Defect::Shape("empty path".into()));
    };
    if first >= n {
        return Some(Defect::Foreign);
    }
    let mut previous = usize::MAX;
    let mut u = first;
    for &v in rest {
        if v >= n {
            return Some(Defect::Foreign);
        }
        let Some(b) = bc.common_block(u, v) else {
            return Some(Defect::Shape(format!("{u} and {v} are not adjacent")));
        };
        if b == previous {
            return Some(Defect::Shape(format!("shortcut across block {b} at {u}")));
        }
        previous = b;
        u = v;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::blocks_and_cut_vertices;
    use crate::graph::parse_edge_list;

    fn triangle_pendant() -> Graph {
        parse_edge_list("4 4\n0 1\n1 2\n0 2\n1 3").unwrap()
    }

    fn regular() -> VertexLabeling {
        VertexLabeling::from(vec![1, 0, 1, 1])
    }

    fn cover(paths: &[&[usize]]) -> Cover {
        Cover::from_paths(paths.iter().map(|p| IsometricPath::new(p.to_vec())))
    }

    #[test]
    fn accepts_valid_cover() {
        let g = triangle_pendant();
        let c = cover(&[&[0, 1, 3], &[2]]);
        assert!(verify_cover(&g, &regular(), &c).is_valid());
        let bc = blocks_and_cut_vertices(&g);
        assert!(certify_cover(&g, &bc, &regular(), &c).is_valid());
    }

    #[test]
    fn reports_uncovered_vertex() {
        let g = triangle_pendant();
        let c = cover(&[&[0, 2], &[3]]);
        let report = verify_cover(&g, &regular(), &c);
        assert!(!report.is_valid());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::C1Uncovered);
        assert_eq!(report.violations[0].subject, Subject::Vertex(1));
        assert!(report.violations[0]
            .to_string()
            .starts_with("C1-uncovered 1"));
    }

    #[test]
    fn reports_deficit_on_empty_cover() {
        let g = Graph::empty(1);
        let report = verify_cover(&g, &VertexLabeling::constant(1, 1), &Cover::new());
        assert_eq!(report.count(ViolationKind::C2Deficit), 1);
    }

    #[test]
    fn trivial_path_counts_twice() {
        let g = Graph::empty(1);
        let c = cover(&[&[0]]);
        assert!(verify_cover(&g, &VertexLabeling::constant(1, 2), &c).is_valid());
        let report = verify_cover(&g, &VertexLabeling::constant(1, 3), &c);
        assert_eq!(report.count(ViolationKind::C2Deficit), 1);
    }

    #[test]
    fn reports_non_isometric_and_foreign() {
        let g = triangle_pendant();
        let c = cover(&[&[0, 1, 2], &[3, 7], &[2, 1, 3]]);
        let f = VertexLabeling::from(vec![1, 0, 1, 2]);
        let report = verify_cover(&g, &f, &c);
        assert_eq!(report.count(ViolationKind::NotIsometric), 1);
        assert_eq!(report.count(ViolationKind::ForeignVertex), 1);
        assert_eq!(report.count(ViolationKind::C2Deficit), 1);
        // Foreign vertices are reported last.
        assert_eq!(
            report.violations.last().unwrap().kind,
            ViolationKind::ForeignVertex
        );

        let bc = blocks_and_cut_vertices(&g);
        let cert = certify_cover(&g, &bc, &f, &c);
        let shape = |r: &VerificationReport| -> Vec<_> {
            r.violations
                .iter()
                .map(|v| (v.kind, v.subject.clone()))
                .collect()
        };
        assert_eq!(shape(&cert), shape(&report));
    }

    #[test]
    fn certificate_rejects_repeats_and_gaps() {
        let g = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        let bc = blocks_and_cut_vertices(&g);
        let f = VertexLabeling::zeros(3);
        let report = certify_cover(&g, &bc, &f, &cover(&[&[0, 1, 0], &[0, 2]]));
        assert_eq!(report.count(ViolationKind::NotIsometric), 2);
    }
}

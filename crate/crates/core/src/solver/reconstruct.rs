//! Rebuilds a cover by popping peel frames and rewriting paths that end at
//! each frame's anchor.
//!
//! For a frame `(x, y, i)` in block `B`, `i` endpoint slots at `y` are
//! rewritten, each by the first rule that applies to its path:
//!
//! * `y` followed by a vertex outside `B`, or the trivial path `y`: prepend `x`;
//! * `y z` with `z` in `B`: becomes `x z`;
//! * `y x`, made earlier in the same frame: becomes the trivial path `x`.
//!
//! Slots are taken in that preference order, with one exception: when the
//! last frame at `y` will need a slot off the trivial paths, earlier frames
//! at `y` leave one behind (see `reserve_flags`). After each frame the
//! anchor must still meet its own demand, or be covered when the demand is
//! zero. [`search`] explores all slot choices exhaustively under a node
//! budget and serves as a fallback should the greedy pass ever get stuck.

use std::collections::HashSet;

use crate::cover::Cover;
use crate::decomposition::BlockCutStructure;
use crate::graph::{Graph, IsometricPath};

use super::peel::{PeelOutcome, StackFrame};

const NO_BLOCK: usize = usize::MAX;

/// Why the greedy pass gave up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stuck {
    /// Index of the frame in push order.
    pub frame_index: usize,
    pub frame: StackFrame,
    pub message: String,
}

/// Number of paths each root starts with.
pub fn initial_copies(label: u32) -> u64 {
    u64::from(label).div_ceil(2)
}

const NIL: usize = usize::MAX;

/// Cell of a persistent vertex list; lists share tails, so copying a path
/// is constant time.
#[derive(Clone, Copy, Debug)]
struct Node {
    vertex: usize,
    next: usize,
}

/// A path stored as two lists read inward from each end: the vertices of
/// `front`, then those of `back` in reverse.
#[derive(Clone, Copy, Debug)]
struct Entry {
    front: usize,
    back: usize,
    ends: [usize; 2],
    len: usize,
    copies: u64,
    /// Block of the edge at the front / back end; `NO_BLOCK` for trivial paths.
    end_block: [usize; 2],
}

impl Entry {
    fn side_of(&self, y: usize) -> Option<usize> {
        if self.copies == 0 || self.len < 2 {
            None
        } else if self.ends[0] == y {
            Some(0)
        } else if self.ends[1] == y {
            Some(1)
        } else {
            None
        }
    }

    fn is_trivial_at(&self, y: usize) -> bool {
        self.copies > 0 && self.len == 1 && self.ends[0] == y
    }
}

/// Cell of a per-vertex list of entries. Cells of consumed or stale entries
/// are unlinked lazily while a list is scanned.
#[derive(Clone, Copy, Debug)]
struct Link {
    entry: usize,
    next: usize,
}

/// Per-vertex lists: nontrivial paths ending at the vertex, and trivial
/// paths at it.
#[derive(Clone, Copy)]
enum List {
    End = 0,
    Trivial = 1,
}

struct Greedy {
    nodes: Vec<Node>,
    entries: Vec<Entry>,
    links: Vec<Link>,
    /// First and last cell of each vertex's lists, indexed by [`List`].
    heads: [Vec<usize>; 2],
    tails: [Vec<usize>; 2],
    /// Endpoint multiplicity per vertex, a trivial path counting twice.
    slots: Vec<u64>,
    internal: Vec<bool>,
    label: Vec<u64>,
    trivial_copies: Vec<u64>,
    /// Per frame: hold back a slot for the last frame at the same anchor.
    reserve: Vec<bool>,
}

impl Greedy {
    fn new(n: usize, peel: &PeelOutcome) -> Self {
        let mut this = Self {
            nodes: Vec::with_capacity(2 * n),
            entries: Vec::with_capacity(n),
            links: Vec::with_capacity(2 * n),
            heads: [vec![NIL; n], vec![NIL; n]],
            tails: [vec![NIL; n], vec![NIL; n]],
            slots: vec![0; n],
            internal: vec![false; n],
            label: vec![0; n],
            trivial_copies: vec![0; n],
            reserve: reserve_flags(n, &peel.frames),
        };
        for root in &peel.roots {
            let copies = initial_copies(root.label);
            let r = root.vertex;
            this.label[r] = u64::from(root.label);
            this.slots[r] = 2 * copies;
            this.trivial_copies[r] = copies;
            this.push_trivial(r, this.entries.len());
            let entry = this.path_of(&[r], copies);
            this.entries.push(entry);
        }
        this
    }

    fn push_end(&mut self, v: usize, entry: usize) {
        self.push(List::End, v, entry);
    }

    fn push_trivial(&mut self, v: usize, entry: usize) {
        self.push(List::Trivial, v, entry);
    }

    /// Appends, so each list keeps creation order.
    fn push(&mut self, list: List, v: usize, entry: usize) {
        self.links.push(Link { entry, next: NIL });
        let cell = self.links.len() - 1;
        let tail = self.tails[list as usize][v];
        if tail == NIL {
            self.heads[list as usize][v] = cell;
        } else {
            self.links[tail].next = cell;
        }
        self.tails[list as usize][v] = cell;
    }

    /// Removes cell `cur` from a list of `v`, given its predecessor.
    fn unlink(&mut self, list: List, v: usize, prev: usize, cur: usize) {
        let next = self.links[cur].next;
        if prev == NIL {
            self.heads[list as usize][v] = next;
        } else {
            self.links[prev].next = next;
        }
        if next == NIL {
            self.tails[list as usize][v] = prev;
        }
    }

    fn cons(&mut self, vertex: usize, next: usize) -> usize {
        self.nodes.push(Node { vertex, next });
        self.nodes.len() - 1
    }

    /// A fresh entry for a path of one or two vertices.
    fn path_of(&mut self, vs: &[usize], copies: u64) -> Entry {
        let front = self.cons(vs[0], NIL);
        let back = if vs.len() == 2 {
            self.cons(vs[1], NIL)
        } else {
            NIL
        };
        Entry {
            front,
            back,
            ends: [vs[0], vs[vs.len() - 1]],
            len: vs.len(),
            copies,
            end_block: [NO_BLOCK; 2],
        }
    }

    fn extend(&mut self, e: usize, side: usize, x: usize, block: usize) {
        let head = if side == 0 {
            self.entries[e].front
        } else {
            self.entries[e].back
        };
        let cell = self.cons(x, head);
        let entry = &mut self.entries[e];
        if side == 0 {
            entry.front = cell;
        } else {
            entry.back = cell;
        }
        entry.ends[side] = x;
        entry.end_block[side] = block;
        entry.len += 1;
    }

    /// Reads the lists of several entries in lockstep so their cache
    /// misses overlap. Paths come out with the smaller endpoint first.
    fn write_paths(&self, batch: &[Entry], cover: &mut Cover) {
        let mut out: Vec<Vec<usize>> = batch.iter().map(|e| Vec::with_capacity(e.len)).collect();
        let mut front_len = Vec::new();
        for side in [0, 1] {
            let mut cursors: Vec<usize> = batch
                .iter()
                .map(|e| if side == 0 { e.front } else { e.back })
                .collect();
            let mut active = true;
            while active {
                active = false;
                for (cur, path) in cursors.iter_mut().zip(&mut out) {
                    if *cur != NIL {
                        let node = self.nodes[*cur];
                        path.push(node.vertex);
                        *cur = node.next;
                        active = true;
                    }
                }
            }
            if side == 0 {
                front_len = out.iter().map(Vec::len).collect();
            }
        }
        for ((e, mut path), split) in batch.iter().zip(out).zip(front_len) {
            path[split..].reverse();
            cover.push(IsometricPath::new(path).normalized(), e.copies);
        }
    }

    /// Splits `m` copies off entry `e`, returning the entry that holds them.
    /// A fresh entry is not registered at any endpoint.
    fn take(&mut self, e: usize, m: u64) -> usize {
        if self.entries[e].copies == m {
            return e;
        }
        self.entries[e].copies -= m;
        let mut clone = self.entries[e];
        clone.copies = m;
        self.entries.push(clone);
        self.entries.len() - 1
    }

    fn run(mut self, frames: &[StackFrame]) -> Result<Cover, Stuck> {
        for (frame_index, frame) in frames.iter().enumerate().rev() {
            self.pop(frame_index, frame).map_err(|message| Stuck {
                frame_index,
                frame: *frame,
                message,
            })?;
        }
        let live: Vec<Entry> = self
            .entries
            .iter()
            .filter(|e| e.copies > 0)
            .copied()
            .collect();
        let mut cover = Cover::new();
        for batch in live.chunks(16) {
            self.write_paths(batch, &mut cover);
        }
        Ok(cover)
    }

    /// Rewrites up to `limit` slots on paths that leave `y` through a block
    /// other than `block`, making `y` internal. Returns the number rewritten.
    fn cross(&mut self, x: usize, y: usize, block: usize, limit: u64) -> u64 {
        let mut need = limit;
        let (mut prev, mut cur) = (NIL, self.heads[List::End as usize][y]);
        while need > 0 && cur != NIL {
            let Link { entry: e, next } = self.links[cur];
            let Some(side) = self.entries[e].side_of(y) else {
                self.unlink(List::End, y, prev, cur);
                cur = next;
                continue;
            };
            if self.entries[e].end_block[side] == block {
                prev = cur;
                cur = next;
                continue;
            }
            let m = need.min(self.entries[e].copies);
            let t = self.take(e, m);
            if t == e {
                self.unlink(List::End, y, prev, cur);
            } else {
                prev = cur;
                self.push_end(self.entries[t].ends[1 - side], t);
            }
            cur = next;
            self.extend(t, side, x, block);
            self.push_end(x, t);
            self.internal[y] = true;
            self.slots[y] -= m;
            self.slots[x] += m;
            need -= m;
        }
        limit - need
    }

    fn pop(&mut self, index: usize, frame: &StackFrame) -> Result<(), String> {
        let StackFrame { x, y, block, .. } = *frame;
        let mut need = u64::from(frame.demand);
        let mut fresh = Vec::new();

        // Keep one slot of y off the trivial paths for a later frame at y
        // that would otherwise have to collapse every slot into trivial x.
        let nontrivial = self.slots[y] - 2 * self.trivial_copies[y];
        let cap = if self.reserve[index] && self.trivial_copies[y] > 0 && nontrivial <= need {
            need - 1
        } else {
            need
        };
        need -= self.cross(x, y, block, cap);

        // Trivial paths at y: become y x.
        let (mut prev, mut cur) = (NIL, self.heads[List::Trivial as usize][y]);
        while need > 0 && cur != NIL {
            let Link { entry: e, next } = self.links[cur];
            if !self.entries[e].is_trivial_at(y) {
                self.unlink(List::Trivial, y, prev, cur);
                cur = next;
                continue;
            }
            let m = need.min(self.entries[e].copies);
            let t = self.take(e, m);
            if t == e {
                self.unlink(List::Trivial, y, prev, cur);
            } else {
                prev = cur;
            }
            cur = next;
            self.extend(t, 1, x, block);
            self.entries[t].end_block = [block, block];
            self.push_end(y, t);
            self.push_end(x, t);
            fresh.push(t);
            self.trivial_copies[y] -= m;
            self.slots[y] -= m;
            self.slots[x] += m;
            need -= m;
        }

        // y z inside the block: becomes x z.
        let (mut prev, mut cur) = (NIL, self.heads[List::End as usize][y]);
        while need > 0 && cur != NIL {
            let Link { entry: e, next } = self.links[cur];
            let Some(side) = self.entries[e].side_of(y) else {
                self.unlink(List::End, y, prev, cur);
                cur = next;
                continue;
            };
            let entry = &self.entries[e];
            let z = entry.ends[1 - side];
            if entry.end_block[side] != block || entry.len != 2 || z == x {
                prev = cur;
                cur = next;
                continue;
            }
            let m = need.min(entry.copies);
            let t = self.take(e, m);
            if t == e {
                self.unlink(List::End, y, prev, cur);
            } else {
                prev = cur;
                self.push_end(z, t);
            }
            cur = next;
            let mut pair = [z, z];
            pair[side] = x;
            let mut rewritten = self.path_of(&pair, m);
            rewritten.end_block = [block, block];
            self.entries[t] = rewritten;
            self.push_end(x, t);
            self.slots[y] -= m;
            self.slots[x] += m;
            need -= m;
        }

        if need > 0 {
            need -= self.cross(x, y, block, need);
        }

        // y x from this frame: becomes the trivial path x.
        for e in fresh {
            if need == 0 {
                break;
            }
            let entry = &self.entries[e];
            if entry.copies == 0 || entry.len != 2 || !entry.ends.contains(&x) {
                continue;
            }
            let m = need.min(entry.copies);
            let t = self.take(e, m);
            self.entries[t] = self.path_of(&[x], m);
            self.push_trivial(x, t);
            self.trivial_copies[x] += m;
            self.slots[y] -= m;
            self.slots[x] += m;
            need -= m;
        }

        if need > 0 {
            return Err(format!(
                "only {} of {} endpoint slots at {y} could be rewritten",
                u64::from(frame.demand) - need,
                frame.demand
            ));
        }

        self.label[y] -= u64::from(frame.demand);
        self.label[x] = u64::from(frame.demand);
        let covered = self.internal[y] || self.slots[y] > 0;
        if self.label[y] == 0 && !covered {
            return Err(format!("anchor {y} left uncovered"));
        }
        if self.slots[y] < self.label[y] {
            return Err(format!(
                "anchor {y} keeps {} endpoints but needs {}",
                self.slots[y], self.label[y]
            ));
        }
        Ok(())
    }
}

/// Marks the frames that must leave a nontrivial slot at their anchor.
///
/// The last frame popped at an anchor `y` takes all of `y`'s remaining slots
/// when `y` has no demand of its own. If its vertex `x` has demand zero,
/// an even label, and exactly one block peeled into it, then taking only
/// trivial copies of `y` would leave `x` holding trivial paths alone, and
/// `x` could never become internal. Earlier frames at `y` avoid that.
fn reserve_flags(n: usize, frames: &[StackFrame]) -> Vec<bool> {
    let mut transferred = vec![0u64; n];
    let mut anchored_blocks = vec![0u32; n];
    let mut last_block = vec![usize::MAX; n];
    let mut last_at = vec![usize::MAX; n];
    for (i, fr) in frames.iter().enumerate() {
        transferred[fr.y] += u64::from(fr.demand);
        if last_block[fr.y] != fr.block {
            last_block[fr.y] = fr.block;
            anchored_blocks[fr.y] += 1;
        }
        if last_at[fr.y] == usize::MAX {
            last_at[fr.y] = i;
        }
    }
    let risky = |fr: &StackFrame| {
        u64::from(fr.demand) == transferred[fr.x]
            && anchored_blocks[fr.x] == 1
            && fr.demand.is_multiple_of(2)
    };
    frames
        .iter()
        .enumerate()
        .map(|(i, fr)| {
            let last = last_at[fr.y];
            i != last && risky(&frames[last])
        })
        .collect()
}

/// The greedy reconstruction: linear in the number of frames plus the
/// length of the emitted paths, apart from slots skipped inside large blocks.
pub fn reconstruct(g: &Graph, peel: &PeelOutcome) -> Result<Cover, Stuck> {
    Greedy::new(g.vertex_count(), peel).run(&peel.frames)
}

/// Exhaustive reconstruction over every sequence of slot choices, visiting at
/// most `budget` search nodes. Intended for small instances only.
pub fn search(g: &Graph, bc: &BlockCutStructure, peel: &PeelOutcome, budget: u64) -> Option<Cover> {
    let n = g.vertex_count();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![0u64; n];
    for root in &peel.roots {
        label[root.vertex] = u64::from(root.label);
        for _ in 0..initial_copies(root.label) {
            paths.push(vec![root.vertex]);
        }
    }
    let mut state = Search {
        bc,
        g,
        frames: &peel.frames,
        paths,
        label,
        nodes: 0,
        budget,
    };
    let top = peel.frames.len();
    if state.frame(top) {
        Some(Cover::from_paths(
            state
                .paths
                .into_iter()
                .map(|p| IsometricPath::new(p).normalized()),
        ))
    } else {
        None
    }
}

struct Search<'a> {
    g: &'a Graph,
    bc: &'a BlockCutStructure,
    frames: &'a [StackFrame],
    paths: Vec<Vec<usize>>,
    label: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Processes frames `remaining - 1` down to 0.
    fn frame(&mut self, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        let f = self.frames[remaining - 1];
        self.label[f.y] -= u64::from(f.demand);
        self.label[f.x] = u64::from(f.demand);
        let ok = self.slot(remaining, u64::from(f.demand));
        if !ok {
            self.label[f.y] += u64::from(f.demand);
            self.label[f.x] = 0;
        }
        ok
    }

    fn slot(&mut self, remaining: usize, need: u64) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let f = self.frames[remaining - 1];
        if need == 0 {
            return self.anchor_satisfied(f.y) && self.frame(remaining - 1);
        }
        let mut tried = HashSet::new();
        for idx in 0..self.paths.len() {
            let Some(rewritten) = self.rewrite(idx, &f) else {
                continue;
            };
            if !tried.insert(self.paths[idx].clone()) {
                continue;
            }
            let saved = std::mem::replace(&mut self.paths[idx], rewritten);
            if self.slot(remaining, need - 1) {
                return true;
            }
            self.paths[idx] = saved;
            if self.nodes > self.budget {
                return false;
            }
        }
        false
    }

    fn rewrite(&self, idx: usize, f: &StackFrame) -> Option<Vec<usize>> {
        let p = &self.paths[idx];
        let (x, y) = (f.x, f.y);
        if p.len() == 1 {
            return (p[0] == y).then(|| vec![x, y]);
        }
        let oriented: Vec<usize> = if p[0] == y {
            p.clone()
        } else if p[p.len() - 1] == y {
            p.iter().rev().copied().collect()
        } else {
            return None;
        };
        let next = oriented[1];
        if next == x {
            return (oriented.len() == 2).then(|| vec![x]);
        }
        if self.bc.edge_block(self.g, y, next) == Some(f.block) {
            return (oriented.len() == 2).then(|| vec![x, next]);
        }
        let mut extended = Vec::with_capacity(oriented.len() + 1);
        extended.push(x);
        extended.extend(oriented);
        Some(extended)
    }

    fn anchor_satisfied(&self, y: usize) -> bool {
        let mut ends = 0u64;
        let mut on_path = false;
        for p in &self.paths {
            if p.len() == 1 && p[0] == y {
                ends += 2;
            } else if p[0] == y || p[p.len() - 1] == y {
                ends += 1;
            } else if p.contains(&y) {
                on_path = true;
            }
        }
        let need = self.label[y];
        if need == 0 {
            ends > 0 || on_path
        } else {
            ends >= need
        }
    }
}

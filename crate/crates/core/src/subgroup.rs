//! Finitely generated subgroups of a free group: Stallings foldings and
//! Nielsen reduction.
//!
//! Folding is the membership/index/rank oracle; Nielsen reduction is the
//! independence oracle. The two are implemented without sharing code so each
//! can check the other.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// An ordered generating tuple with no trivial entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenTuple {
    elements: Vec<Word>,
}

impl GenTuple {
    /// Rejects identity entries.
    pub fn new(elements: Vec<Word>) -> Result<GenTuple> {
        if let Some(i) = elements.iter().position(Word::is_identity) {
            return Err(Error::Invalid(format!(
                "generator #{} is the identity",
                i + 1
            )));
        }
        Ok(GenTuple { elements })
    }

    /// Drops identity entries, returning how many were dropped.
    pub fn new_lenient(elements: Vec<Word>) -> (GenTuple, usize) {
        let before = elements.len();
        let elements: Vec<Word> = elements.into_iter().filter(|w| !w.is_identity()).collect();
        let dropped = before - elements.len();
        (GenTuple { elements }, dropped)
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn into_inner(self) -> Vec<Word> {
        self.elements
    }
}

/// Folded, core graph of a subgroup with base vertex `0`.
///
/// `adj[v]` maps a letter `l` to the endpoint of the edge leaving `v` with
/// label `l`; inverse letters record edges traversed backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedGraph {
    ambient_rank: usize,
    adj: Vec<BTreeMap<Letter, usize>>,
}

struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<Letter, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            parent: vec![0],
            adj: vec![BTreeMap::new()],
            pending: Vec::new(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn link(&mut self, u: usize, l: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.adj[u].get(&l).copied() {
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    self.pending.push((w, v));
                }
            }
            None => {
                self.adj[u].insert(l, v);
            }
        }
    }

    fn edge(&mut self, u: usize, l: Letter, v: usize) {
        self.link(u, l, v);
        self.link(v, l.inverse(), u);
        self.settle();
    }

    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = if self.adj[a].len() >= self.adj[b].len() {
                (a, b)
            } else {
                (b, a)
            };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.adj[gone]);
            for (l, t) in moved {
                self.link(keep, l, t);
            }
        }
    }

    fn add_loop(&mut self, w: &Word) {
        let ls = w.letters();
        let mut cur = self.find(0);
        for (i, &l) in ls.iter().enumerate() {
            let last = i + 1 == ls.len();
            let c = self.find(cur);
            let existing = self.adj[c].get(&l).copied();
            let next = match (existing, last) {
                (_, true) => 0,
                (Some(t), false) => t,
                (None, false) => self.vertex(),
            };
            self.edge(c, l, next);
            cur = next;
        }
    }
}

/// Fold the bouquet of the tuple's words into a Stallings graph for the
/// subgroup they generate inside the free group of rank `ambient_rank`.
pub fn fold(t: &GenTuple, ambient_rank: usize) -> FoldedGraph {
    fold_words(t.elements(), ambient_rank)
}

pub fn fold_words(words: &[Word], ambient_rank: usize) -> FoldedGraph {
    let mut f = Folder::new();
    for w in words {
        if !w.is_identity() {
            f.add_loop(w);
        }
    }
    // resolve representatives
    let n = f.parent.len();
    let mut edges: Vec<BTreeMap<Letter, usize>> = vec![BTreeMap::new(); n];
    #[allow(clippy::needless_range_loop)]
    for v in 0..n {
        if f.find(v) != v {
            continue;
        }
        let entries: Vec<(Letter, usize)> = f.adj[v].iter().map(|(&l, &t)| (l, t)).collect();
        for (l, t) in entries {
            let t = f.find(t);
            edges[v].insert(l, t);
        }
    }
    let base = f.find(0);
    // trim hairs away from the base
    let mut degree: Vec<usize> = edges.iter().map(BTreeMap::len).collect();
    let mut alive: Vec<bool> = (0..n).map(|v| f.parent[v] == v).collect();
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&v| alive[v] && v != base && degree[v] <= 1)
        .collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] || v == base || degree[v] > 1 {
            continue;
        }
        alive[v] = false;
        let nbrs: Vec<(Letter, usize)> = edges[v].iter().map(|(&l, &t)| (l, t)).collect();
        for (l, t) in nbrs {
            if edges[t].remove(&l.inverse()).is_some() {
                degree[t] -= 1;
                if degree[t] <= 1 && t != base {
                    queue.push_back(t);
                }
            }
        }
        edges[v].clear();
    }
    // BFS renumbering from the base, labels in order
    let mut id = vec![usize::MAX; n];
    let mut order = vec![base];
    id[base] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &t in edges[v].values() {
            if id[t] == usize::MAX {
                id[t] = order.len();
                order.push(t);
            }
        }
    }
    let adj = order
        .iter()
        .map(|&v| edges[v].iter().map(|(&l, &t)| (l, id[t])).collect())
        .collect();
    FoldedGraph { ambient_rank, adj }
}

impl FoldedGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Outgoing edges of `v` keyed by label.
    pub fn edges(&self, v: usize) -> &BTreeMap<Letter, usize> {
        &self.adj[v]
    }

    /// Follow `w` from the base; `None` when the path leaves the graph.
    pub fn trace(&self, w: &Word) -> Option<usize> {
        let mut v = 0;
        for l in w.letters() {
            v = *self.adj[v].get(l)?;
        }
        Some(v)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(w) == Some(0)
    }

    /// Index in the ambient free group, `None` when infinite.
    pub fn index(&self) -> Option<usize> {
        let full = 2 * self.ambient_rank;
        if self.adj.iter().all(|m| m.len() == full) {
            Some(self.adj.len())
        } else {
            None
        }
    }

    /// Rank of the subgroup: `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }
}

/// Membership oracle on a folded graph.
pub fn contains(g: &FoldedGraph, w: &Word) -> bool {
    g.contains(w)
}

/// An elementary Nielsen transformation applied to the working tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NielsenMove {
    /// `u[target] <- u[target] · u[by]^sign`
    MulRight { target: usize, by: usize, sign: i32 },
    /// `u[target] <- u[by]^sign · u[target]`
    MulLeft { target: usize, by: usize, sign: i32 },
    /// Drop the identity at `index` (later indices shift down).
    Remove { index: usize },
}

#[derive(Clone, Debug)]
pub struct NielsenReport {
    pub output: GenTuple,
    pub moves: Vec<NielsenMove>,
    pub eliminated: usize,
}

impl NielsenReport {
    pub fn is_independent(&self) -> bool {
        self.eliminated == 0
    }
}

/// Order key for Nielsen reduction: length, then the smaller and larger of
/// the two half-words `L(u)`, `L(u^-1)` (initial segments of length
/// `⌈|u|/2⌉`). Symmetric under inversion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct NielsenKey {
    len: usize,
    lo: Vec<Letter>,
    hi: Vec<Letter>,
}

fn nielsen_key(u: &Word) -> NielsenKey {
    let ls = u.letters();
    let half = ls.len().div_ceil(2);
    let left: Vec<Letter> = ls[..half].to_vec();
    let right: Vec<Letter> = ls.iter().rev().take(half).map(|l| l.inverse()).collect();
    let (lo, hi) = if left <= right {
        (left, right)
    } else {
        (right, left)
    };
    NielsenKey {
        len: ls.len(),
        lo,
        hi,
    }
}

/// Nielsen-reduce a tuple.
///
/// Each step replaces one element by its product with another (on either
/// side, with either sign) whenever that strictly lowers its order key,
/// choosing the smallest resulting key. Elements that become trivial are
/// removed and counted.
pub fn nielsen_reduce(t: &GenTuple) -> NielsenReport {
    let mut us: Vec<Word> = t.elements().to_vec();
    let mut keys: Vec<NielsenKey> = us.iter().map(nielsen_key).collect();
    let mut moves = Vec::new();
    let mut eliminated = 0;
    loop {
        let mut i = 0;
        while i < us.len() {
            if us[i].is_identity() {
                us.remove(i);
                keys.remove(i);
                moves.push(NielsenMove::Remove { index: i });
                eliminated += 1;
            } else {
                i += 1;
            }
        }
        let mut changed = false;
        for i in 0..us.len() {
            let mut best: Option<(NielsenKey, Word, NielsenMove)> = None;
            for j in 0..us.len() {
                if i == j {
                    continue;
                }
                let uj = &us[j];
                let uj_inv = uj.inverse();
                let cands = [
                    (
                        us[i].multiply(uj),
                        NielsenMove::MulRight {
                            target: i,
                            by: j,
                            sign: 1,
                        },
                    ),
                    (
                        us[i].multiply(&uj_inv),
                        NielsenMove::MulRight {
                            target: i,
                            by: j,
                            sign: -1,
                        },
                    ),
                    (
                        uj.multiply(&us[i]),
                        NielsenMove::MulLeft {
                            target: i,
                            by: j,
                            sign: 1,
                        },
                    ),
                    (
                        uj_inv.multiply(&us[i]),
                        NielsenMove::MulLeft {
                            target: i,
                            by: j,
                            sign: -1,
                        },
                    ),
                ];
                for (w, mv) in cands {
                    if w.len() > keys[i].len {
                        continue;
                    }
                    let k = nielsen_key(&w);
                    let better = match &best {
                        Some((bk, _, _)) => k < *bk,
                        None => k < keys[i],
                    };
                    if better {
                        best = Some((k, w, mv));
                    }
                }
            }
            if let Some((k, w, mv)) = best {
                us[i] = w;
                keys[i] = k;
                moves.push(mv);
                changed = true;
            }
        }
        if !changed && us.iter().all(|u| !u.is_identity()) {
            break;
        }
    }
    NielsenReport {
        output: GenTuple { elements: us },
        moves,
        eliminated,
    }
}

/// Replay a move log on a tuple.
pub fn replay_moves(start: &[Word], moves: &[NielsenMove]) -> Vec<Word> {
    let mut us = start.to_vec();
    for mv in moves {
        match *mv {
            NielsenMove::MulRight { target, by, sign } => {
                let f = if sign > 0 {
                    us[by].clone()
                } else {
                    us[by].inverse()
                };
                us[target] = us[target].multiply(&f);
            }
            NielsenMove::MulLeft { target, by, sign } => {
                let f = if sign > 0 {
                    us[by].clone()
                } else {
                    us[by].inverse()
                };
                us[target] = f.multiply(&us[target]);
            }
            NielsenMove::Remove { index } => {
                us.remove(index);
            }
        }
    }
    us
}

/// Whether a tuple is Nielsen reduced (conditions N0–N2), checked directly.
/// Cubic in the tuple size; meant for tests and small inputs.
pub fn is_nielsen_reduced(us: &[Word]) -> bool {
    if us.iter().any(Word::is_identity) {
        return false;
    }
    let mut all: Vec<(usize, Word)> = Vec::new();
    for (i, u) in us.iter().enumerate() {
        all.push((i, u.clone()));
        all.push((i, u.inverse()));
    }
    for (i, u) in &all {
        for (j, v) in &all {
            if i == j {
                continue;
            }
            if u.multiply(v).len() < u.len().max(v.len()) {
                return false;
            }
        }
    }
    for (i, u) in &all {
        for (j, v) in &all {
            if i == j {
                continue;
            }
            for (k, w) in &all {
                if j == k {
                    continue;
                }
                let uvw = u.multiply(v).multiply(w);
                if uvw.len() + v.len() <= u.len() + w.len() {
                    return false;
                }
            }
        }
    }
    true
}

/// `⟨t1⟩ = ⟨t2⟩`, by mutual containment through folding.
pub fn same_subgroup(t1: &GenTuple, t2: &GenTuple, ambient_rank: usize) -> bool {
    let g1 = fold(t1, ambient_rank);
    let g2 = fold(t2, ambient_rank);
    t2.elements().iter().all(|w| g1.contains(w)) && t1.elements().iter().all(|w| g2.contains(w))
}

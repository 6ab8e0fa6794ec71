//! The Chase decoding tree and its depth-first traversal.
//!
//! A node at depth r is a test pattern of r modified coordinates taken from
//! the unreliable set I, each with a value from its hypothesis set. The
//! children of a node add one coordinate whose slot in I comes after every
//! slot already on the path, so a node's parent is obtained by dropping its
//! largest slot. Each node's kernel state is computed once, from its
//! parent's, and only the states on the current path are kept.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::gf::{Gf, OpCounter};
use crate::groebner::{compare_w, GroebnerPairBasis, PolyPair, UpdateRule};
use crate::grs::{erasure_error_from_evals, ErrorEstimate, GrsCode, Syndrome};
use crate::kernel::{AnyKernel, EdgeInfo, EdgeMod, Kernel, KernelKind};
use crate::poly::{Degree, Poly};

/// When to run the root search at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StopMode {
    /// At every node whose locator has degree t + depth.
    #[default]
    Exhaustive,
    /// Only when Δ_1 vanished in both iterations of the incoming edge and
    /// the locator and its derivative share no root on the parent's
    /// modified locations. The locator then belongs to the parent, whose
    /// expected degree is t + depth − 1.
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChaseConfig {
    /// Number of unreliable coordinates.
    pub eta: usize,
    /// Most probable symbols considered per unreliable coordinate,
    /// including the hard decision.
    pub mu: usize,
    pub r_max: usize,
    pub kernel: KernelKind,
    pub rule: UpdateRule,
    pub stop: StopMode,
    /// Erasure-only search: each edge runs the root iteration only.
    pub gmd: bool,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        ChaseConfig {
            eta: 4,
            mu: 2,
            r_max: 2,
            kernel: KernelKind::B,
            rule: UpdateRule::Inversion,
            stop: StopMode::Exhaustive,
            gmd: false,
        }
    }
}

impl ChaseConfig {
    pub fn new(eta: usize, mu: usize, r_max: usize, kernel: KernelKind) -> Result<Self> {
        let c = ChaseConfig {
            eta,
            mu,
            r_max,
            kernel,
            ..Default::default()
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu == 0 {
            return Err(Error::InvalidConfig("mu must be at least 1".into()));
        }
        if self.r_max == 0 || self.r_max > self.eta {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= r_max <= eta, got r_max = {}, eta = {}",
                self.r_max, self.eta
            )));
        }
        Ok(())
    }
}

/// One (position, value) modification of a test pattern.
pub type Modification = (usize, Gf);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestTree {
    coords: Vec<usize>,
    sets: Vec<Vec<Gf>>,
    r_max: usize,
}

/// An edge produced by the depth-first walk: it enters a node at `depth`
/// by modifying `pos` (slot `slot` of I) to `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub depth: usize,
    pub slot: usize,
    pub value_index: usize,
    pub pos: usize,
    pub beta: Gf,
}

impl TestTree {
    pub fn new(coords: Vec<usize>, sets: Vec<Vec<Gf>>, r_max: usize) -> Result<Self> {
        if coords.len() != sets.len() {
            return Err(Error::LengthMismatch {
                expected: coords.len(),
                got: sets.len(),
            });
        }
        let distinct: HashSet<_> = coords.iter().collect();
        if distinct.len() != coords.len() {
            return Err(Error::InvalidConfig("unreliable coordinates must be distinct".into()));
        }
        for s in &sets {
            if s.iter().any(|b| b.is_zero()) {
                return Err(Error::InvalidConfig("hypothesis sets must not contain zero".into()));
            }
            if s.iter().collect::<HashSet<_>>().len() != s.len() {
                return Err(Error::InvalidConfig("hypothesis sets must not repeat values".into()));
            }
        }
        Ok(TestTree { coords, sets, r_max })
    }

    /// Tree with a single alternative, an erasure, per coordinate.
    pub fn erasures(coords: Vec<usize>, r_max: usize) -> Result<Self> {
        let sets = vec![vec![Gf::ONE]; coords.len()];
        Self::new(coords, sets, r_max)
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn sets(&self) -> &[Vec<Gf>] {
        &self.sets
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// Number of nodes, root included.
    pub fn node_count(&self) -> u128 {
        let mut c = vec![0u128; self.r_max + 1];
        c[0] = 1;
        for s in &self.sets {
            for r in (1..=self.r_max).rev() {
                c[r] += c[r - 1] * s.len() as u128;
            }
        }
        c.iter().sum()
    }

    pub fn dfs(&self) -> Dfs<'_> {
        Dfs {
            tree: self,
            path: Vec::with_capacity(self.r_max),
            skip: false,
            done: false,
        }
    }

    /// Parent of a pattern given by slots: drop the largest slot.
    pub fn parent(path: &[(usize, usize)]) -> Vec<(usize, usize)> {
        let mut p = path.to_vec();
        if let Some((i, _)) = p.iter().enumerate().max_by_key(|(_, s)| s.0) {
            p.remove(i);
        }
        p
    }
}

/// Lazy depth-first walk over the edges of a [`TestTree`].
pub struct Dfs<'a> {
    tree: &'a TestTree,
    path: Vec<(usize, usize)>,
    skip: bool,
    done: bool,
}

impl Dfs<'_> {
    /// Do not descend below the node returned last.
    pub fn skip_subtree(&mut self) {
        self.skip = true;
    }

    /// (slot, value index) pairs of the node returned last.
    pub fn path(&self) -> &[(usize, usize)] {
        &self.path
    }

    fn next_slot(&self, from: usize) -> Option<usize> {
        (from..self.tree.sets.len()).find(|&k| !self.tree.sets[k].is_empty())
    }

    fn edge(&self) -> TreeEdge {
        let (slot, vi) = *self.path.last().expect("non-empty path");
        TreeEdge {
            depth: self.path.len(),
            slot,
            value_index: vi,
            pos: self.tree.coords[slot],
            beta: self.tree.sets[slot][vi],
        }
    }
}

impl Iterator for Dfs<'_> {
    type Item = TreeEdge;

    fn next(&mut self) -> Option<TreeEdge> {
        if self.done {
            return None;
        }
        let skip = std::mem::take(&mut self.skip);
        if !skip && self.path.len() < self.tree.r_max {
            let from = self.path.last().map_or(0, |&(k, _)| k + 1);
            if let Some(k) = self.next_slot(from) {
                self.path.push((k, 0));
                return Some(self.edge());
            }
        }
        while let Some((k, vi)) = self.path.pop() {
            if vi + 1 < self.tree.sets[k].len() {
                self.path.push((k, vi + 1));
                return Some(self.edge());
            }
            if let Some(k2) = self.next_slot(k + 1) {
                self.path.push((k2, 0));
                return Some(self.edge());
            }
        }
        self.done = true;
        None
    }
}

/// An error estimate together with the test pattern that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub error: ErrorEstimate,
    pub pattern: Vec<Modification>,
}

/// Candidates in discovery order, without repeated error vectors.
#[derive(Clone, Debug, Default)]
pub struct CandidateList {
    items: Vec<Candidate>,
    seen: HashSet<ErrorEstimate>,
}

impl CandidateList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if the error was already present.
    pub fn push(&mut self, c: Candidate) -> bool {
        if !self.seen.insert(c.error.clone()) {
            return false;
        }
        self.items.push(c);
        true
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Candidate> {
        self.items.iter()
    }

    pub fn contains(&self, e: &ErrorEstimate) -> bool {
        self.seen.contains(e)
    }

    pub fn errors(&self) -> BTreeSet<ErrorEstimate> {
        self.items.iter().map(|c| c.error.clone()).collect()
    }
}

impl<'a> IntoIterator for &'a CandidateList {
    type Item = &'a Candidate;
    type IntoIter = std::slice::Iter<'a, Candidate>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraversalStats {
    /// Nodes whose state was computed, root included.
    pub nodes: u64,
    pub edges: u64,
    pub ops: OpCounter,
    /// Largest number of kernel states held at once.
    pub peak_states: usize,
    /// Nodes at which a root search was run.
    pub root_searches: u64,
    /// Locator candidates whose error failed the syndrome check.
    pub syndrome_rejections: u64,
    pub heuristic_triggers: u64,
    /// Subtrees cut because the kernel could not process an edge.
    pub pruned: u64,
}

pub struct EdgeEvent<'a> {
    pub depth: usize,
    pub pattern: &'a [Modification],
    pub info: &'a EdgeInfo,
    pub state: &'a AnyKernel,
    /// Operations spent in the kernel on this edge.
    pub ops: OpCounter,
}

/// Hooks for tests and benches.
pub trait TraversalObserver {
    fn on_edge(&mut self, _e: &EdgeEvent<'_>) {}
    fn on_candidate(&mut self, _c: &Candidate, _consistent: bool) {}
}

impl TraversalObserver for () {}

#[derive(Clone, Debug, Default)]
pub struct ChaseOutput {
    pub candidates: CandidateList,
    pub stats: TraversalStats,
}

/// Walk `tree` from the basis `h` of the key-equation module, collecting
/// syndrome-consistent error estimates.
pub fn traverse(
    code: &GrsCode,
    s: &Syndrome,
    h: &GroebnerPairBasis,
    tree: &TestTree,
    cfg: &ChaseConfig,
    obs: &mut dyn TraversalObserver,
) -> Result<ChaseOutput> {
    let start = OpCounter::now();
    let f = code.field();
    let t = code.t();
    let mods: Vec<Vec<EdgeMod>> = tree
        .coords
        .iter()
        .zip(&tree.sets)
        .map(|(&pos, set)| {
            set.iter()
                .map(|&b| if cfg.gmd { EdgeMod::erasure(code, pos) } else { EdgeMod::new(code, pos, b) })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut out = ChaseOutput::default();
    let root = AnyKernel::init(cfg.kernel, code, s, h)?;
    out.stats.nodes = 1;
    if let Degree::Finite(d) = root.elp_degree() {
        if d <= t {
            out.stats.root_searches += 1;
            let e = root.candidate(code, d);
            offer(code, s, e, &[], &mut out, obs);
        }
    }

    let mut states = vec![root];
    out.stats.peak_states = 1;
    let mut pattern: Vec<Modification> = Vec::with_capacity(tree.r_max);
    let mut dfs = tree.dfs();
    while let Some(edge) = dfs.next() {
        states.truncate(edge.depth);
        pattern.truncate(edge.depth - 1);
        pattern.push((edge.pos, edge.beta));
        let mut st = states[edge.depth - 1].clone();
        let em = &mods[edge.slot][edge.value_index];
        let t0 = OpCounter::now();
        let info = if cfg.gmd {
            Ok(st.gmd_edge(f, em, cfg.rule))
        } else {
            st.edge(f, em, cfg.rule)
        };
        let ops = OpCounter::since(t0);
        out.stats.edges += 1;
        let info = match info {
            Ok(i) => i,
            Err(Error::DegreeBound(_)) => {
                out.stats.pruned += 1;
                dfs.skip_subtree();
                continue;
            }
            Err(e) => return Err(e),
        };
        out.stats.nodes += 1;
        obs.on_edge(&EdgeEvent {
            depth: edge.depth,
            pattern: &pattern,
            info: &info,
            state: &st,
            ops,
        });

        let e = if cfg.gmd {
            match st.elp_degree() {
                Degree::Finite(d) => {
                    out.stats.root_searches += 1;
                    let (sg, w, ds) = st.candidate_evals(code);
                    erasure_error_from_evals(code, &sg, &w, &ds, d)
                }
                Degree::MinusInfinity => None,
            }
        } else {
            let expected = match cfg.stop {
                StopMode::Exhaustive => Some(t + edge.depth),
                StopMode::Heuristic => heuristic_trigger(f, &st, &info, &pattern[..edge.depth - 1]).then(|| {
                    out.stats.heuristic_triggers += 1;
                    t + edge.depth - 1
                }),
            };
            match expected {
                Some(x) if st.elp_degree() == Degree::Finite(x) => {
                    out.stats.root_searches += 1;
                    st.candidate(code, x)
                }
                _ => None,
            }
        };
        offer(code, s, e, &pattern, &mut out, obs);

        states.push(st);
        out.stats.peak_states = out.stats.peak_states.max(states.len());
    }
    out.stats.ops = OpCounter::since(start);
    Ok(out)
}

fn heuristic_trigger(
    f: &crate::gf::FieldCtx,
    st: &AnyKernel,
    info: &EdgeInfo,
    parent: &[Modification],
) -> bool {
    info.delta1_zero_twice()
        && parent.iter().all(|&(pos, _)| {
            let (v, dv) = st.elp_at(f, pos);
            !(v.is_zero() && dv.is_zero())
        })
}

fn offer(
    code: &GrsCode,
    s: &Syndrome,
    e: Option<ErrorEstimate>,
    pattern: &[Modification],
    out: &mut ChaseOutput,
    obs: &mut dyn TraversalObserver,
) {
    let Some(error) = e else { return };
    let ok = code.syndrome_consistent(s, &error);
    let c = Candidate {
        error,
        pattern: pattern.to_vec(),
    };
    obs.on_candidate(&c, ok);
    if ok {
        out.candidates.push(c);
    } else {
        out.stats.syndrome_rejections += 1;
    }
}

/// Apply the edges of one test pattern in order, starting from `h`.
pub fn run_path(
    code: &GrsCode,
    s: &Syndrome,
    h: &GroebnerPairBasis,
    kind: KernelKind,
    rule: UpdateRule,
    pattern: &[Modification],
) -> Result<(AnyKernel, Vec<EdgeInfo>)> {
    let f = code.field();
    let mut st = AnyKernel::init(kind, code, s, h)?;
    let mut infos = Vec::with_capacity(pattern.len());
    for &(pos, beta) in pattern {
        infos.push(st.edge(f, &EdgeMod::new(code, pos, beta)?, rule)?);
    }
    Ok((st, infos))
}

/// Checks that `g` (a basis reached at the node `pattern`) has the form
/// c·(ω, σ)·Π_{S2}(X − α^{-1})·Π_{S1}(X − α^{-1})², where S1 are the
/// modified coordinates that carry no error and S2 those whose hypothesised
/// value is wrong, and that lm(g1) < lm(g0).
pub fn verify_indirect_hit(
    code: &GrsCode,
    g: &[PolyPair; 2],
    pattern: &[Modification],
    true_error: &ErrorEstimate,
) -> bool {
    let f = code.field();
    let (sigma, omega) = code.elp_eep_of(true_error);
    let mut factor = Poly::one();
    for &(pos, beta) in pattern {
        let x = f.lambda_pow(-(pos as i64));
        match true_error.value_at(pos) {
            None => factor = factor.mul_linear(x, f).mul_linear(x, f),
            Some(v) if v != beta => factor = factor.mul_linear(x, f),
            Some(_) => {}
        }
    }
    let want = PolyPair::new(omega, sigma).mul_poly(&factor, f);
    let (Ok(l0), Ok(l1)) = (crate::groebner::lm_w(&g[0], -1), crate::groebner::lm_w(&g[1], -1)) else {
        return false;
    };
    compare_w(l1, l0, -1) == std::cmp::Ordering::Less && g[1].proportional(&want, f)
}

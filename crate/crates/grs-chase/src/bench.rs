//! Per-edge multiplication counts of the kernels against their closed-form
//! bounds. Only edges on which all four discrepancies are nonzero are
//! measured; the bounds are stated for that case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::groebner::{solve_key_equation, UpdateRule};
use crate::grs::GrsCode;
use crate::kernel::KernelKind;
use crate::tree::{traverse, ChaseConfig, EdgeEvent, StopMode, TestTree, TraversalObserver};

/// Multiplications allowed on an edge into depth `r`.
pub fn mult_bound(kind: KernelKind, code: &GrsCode, r: usize) -> Option<u64> {
    let (t, r, n) = (code.t() as u64, r as u64, code.n() as u64);
    match kind {
        KernelKind::A => None,
        KernelKind::A2 => Some(12 * t + 12 * r + 3),
        KernelKind::B => Some(12 * n),
        KernelKind::C => Some(20 * r + 3),
    }
}

/// Update rule used for counting. The coefficient kernel scales the
/// non-pivot element instead of dividing by the pivot discrepancy.
pub fn bench_rule(kind: KernelKind) -> UpdateRule {
    match kind {
        KernelKind::C => UpdateRule::CrossScaled,
        KernelKind::A | KernelKind::A2 | KernelKind::B => UpdateRule::Inversion,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub kernel: KernelKind,
    pub depth: usize,
    /// Edges with all discrepancies nonzero.
    pub edges: u64,
    pub max_mults: u64,
    pub bound: Option<u64>,
}

impl BenchRow {
    pub fn ok(&self) -> bool {
        self.bound.is_none_or(|b| self.max_mults <= b)
    }
}

/// Collects per-depth maxima from a traversal.
#[derive(Default)]
pub struct EdgeCost {
    /// (edges, max mults) per depth, index 0 unused.
    pub by_depth: Vec<(u64, u64)>,
}

impl TraversalObserver for EdgeCost {
    fn on_edge(&mut self, e: &EdgeEvent<'_>) {
        if !e.info.all_nonzero() {
            return;
        }
        if self.by_depth.len() <= e.depth {
            self.by_depth.resize(e.depth + 1, (0, 0));
        }
        let slot = &mut self.by_depth[e.depth];
        slot.0 += 1;
        slot.1 = slot.1.max(e.ops.mults);
    }
}

/// Run `trials` traversals of random received words over a tree with
/// `eta` unreliable coordinates and two hypotheses each, and report the
/// largest per-edge multiplication count at every depth up to `r_max`.
pub fn bench_kernel(
    code: &GrsCode,
    kind: KernelKind,
    r_max: usize,
    eta: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if r_max == 0 || r_max > eta || eta > code.n() {
        return Err(Error::InvalidConfig(format!(
            "need 1 <= r_max <= eta <= n, got r_max = {r_max}, eta = {eta}"
        )));
    }
    let q = code.field().q() as u16;
    let cfg = ChaseConfig {
        eta,
        mu: 3,
        r_max,
        kernel: kind,
        rule: bench_rule(kind),
        stop: StopMode::Exhaustive,
        gmd: false,
    };
    let mut cost = EdgeCost::default();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let y: Vec<Gf> = (0..code.n()).map(|_| Gf(rng.random_range(0..q))).collect();
        let s = code.syndrome(&y)?;
        let h = solve_key_equation(code, &s);
        let mut coords: Vec<usize> = (0..code.n()).collect();
        for i in 0..eta {
            let j = rng.random_range(i..code.n());
            coords.swap(i, j);
        }
        coords.truncate(eta);
        let sets = coords
            .iter()
            .map(|_| {
                let a = rng.random_range(1..q);
                let mut b = rng.random_range(1..q);
                while b == a && q > 2 {
                    b = rng.random_range(1..q);
                }
                if a == b {
                    vec![Gf(a)]
                } else {
                    vec![Gf(a), Gf(b)]
                }
            })
            .collect();
        let tree = TestTree::new(coords, sets, r_max)?;
        traverse(code, &s, &h, &tree, &cfg, &mut cost)?;
    }
    Ok((1..=r_max)
        .map(|r| {
            let (edges, max_mults) = cost.by_depth.get(r).copied().unwrap_or((0, 0));
            BenchRow {
                kernel: kind,
                depth: r,
                edges,
                max_mults,
                bound: mult_bound(kind, code, r),
            }
        })
        .collect())
}

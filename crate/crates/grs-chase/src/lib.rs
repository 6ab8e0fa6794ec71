//! Generalized Reed–Solomon codes over GF(2^m) with syndrome-based fast
//! Chase decoding.
//!
//! The decoder finds a Gröbner basis of the key-equation module once, then
//! walks a tree of test error patterns. Each edge adds one hypothesised
//! (location, value) pair through two Kötter steps, so every test pattern
//! costs O(n) field operations instead of a full hard-decision decode.

pub mod bench;
pub mod channel;
pub mod decode;
pub mod error;
pub mod gf;
pub mod groebner;
pub mod grs;
pub mod kernel;
pub mod oracle;
pub mod poly;
pub mod tree;

pub use bench::{bench_kernel, mult_bound, BenchRow};
pub use channel::{
    log_likelihood, pick_unreliable, select_best, transmit, ChannelModel, CoordPosterior,
    ReliabilityInfo,
};
pub use decode::{DecodeResult, Decoder};
pub use error::{Error, Result};
pub use gf::{measure, FieldCtx, Gf, OpCounter};
pub use groebner::{
    compare_w, koetter_step, lm_w, solve_key_equation, GroebnerPairBasis, Monomial2, PolyPair,
    Side, UpdateRule,
};
pub use grs::{ErrorEstimate, GrsCode, Syndrome};
pub use kernel::{
    AnyKernel, Anchor, CoeffState, EdgeInfo, EdgeMod, EvalState, Kernel, KernelKind, PairState,
    RightState,
};
pub use poly::{Degree, Poly};
pub use tree::{
    run_path, traverse, verify_indirect_hit, Candidate, CandidateList, ChaseConfig, ChaseOutput,
    EdgeEvent, Modification, StopMode, TestTree, TraversalObserver, TraversalStats, TreeEdge,
};

//! The complete decoder: hard-decision decoding first, then the Chase tree
//! over the least reliable coordinates when that fails.

use crate::channel::{pick_unreliable, select_best, ReliabilityInfo};
use crate::error::{Error, Result};
use crate::gf::{Gf, OpCounter};
use crate::groebner::solve_key_equation;
use crate::grs::{extract_error, ErrorEstimate, GrsCode};
use crate::poly::Degree;
use crate::tree::{traverse, CandidateList, ChaseConfig, TestTree, TraversalObserver, TraversalStats};

#[derive(Clone, Debug)]
pub struct DecodeResult {
    /// Hard-decision error estimate, if bounded-distance decoding succeeded.
    pub hd: Option<ErrorEstimate>,
    pub candidates: CandidateList,
    /// Position of the chosen candidate in `candidates`.
    pub selected_index: Option<usize>,
    pub codeword: Option<Vec<Gf>>,
    pub unreliable: Vec<usize>,
    pub sets: Vec<Vec<Gf>>,
    pub stats: TraversalStats,
}

impl DecodeResult {
    pub fn success(&self) -> bool {
        self.codeword.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct Decoder {
    code: GrsCode,
    cfg: ChaseConfig,
}

impl Decoder {
    pub fn new(code: GrsCode, cfg: ChaseConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.eta > code.n() {
            return Err(Error::InvalidConfig(format!("eta = {} exceeds n = {}", cfg.eta, code.n())));
        }
        Ok(Decoder { code, cfg })
    }

    pub fn code(&self) -> &GrsCode {
        &self.code
    }

    pub fn config(&self) -> &ChaseConfig {
        &self.cfg
    }

    /// Decode the hard decisions of `info`.
    pub fn decode(&self, info: &ReliabilityInfo) -> Result<DecodeResult> {
        self.decode_observed(info, &mut ())
    }

    pub fn decode_observed(&self, info: &ReliabilityInfo, obs: &mut dyn TraversalObserver) -> Result<DecodeResult> {
        let start = OpCounter::now();
        let code = &self.code;
        let y = info.hard();
        if y.len() != code.n() {
            return Err(Error::LengthMismatch {
                expected: code.n(),
                got: y.len(),
            });
        }
        let s = code.syndrome(&y)?;
        let h = solve_key_equation(code, &s);

        let g1 = h.g1();
        let hd = match g1.v.deg() {
            Degree::Finite(d) if d <= code.t() => extract_error(code, &g1.u, &g1.v, d, &s),
            _ => None,
        };
        if let Some(e) = hd {
            let x = subtract(&y, &e);
            let mut candidates = CandidateList::new();
            candidates.push(crate::tree::Candidate {
                error: e.clone(),
                pattern: Vec::new(),
            });
            return Ok(DecodeResult {
                hd: Some(e),
                candidates,
                selected_index: Some(0),
                codeword: Some(x),
                unreliable: Vec::new(),
                sets: Vec::new(),
                stats: TraversalStats {
                    nodes: 1,
                    peak_states: 1,
                    root_searches: 1,
                    ops: OpCounter::since(start),
                    ..Default::default()
                },
            });
        }

        let (unreliable, sets) = pick_unreliable(info, self.cfg.eta, self.cfg.mu)?;
        let tree = if self.cfg.gmd {
            TestTree::erasures(unreliable.clone(), self.cfg.r_max)?
        } else {
            TestTree::new(unreliable.clone(), sets.clone(), self.cfg.r_max)?
        };
        let out = traverse(code, &s, &h, &tree, &self.cfg, obs)?;
        let best = select_best(&out.candidates, &y, info);
        let mut stats = out.stats;
        stats.ops = OpCounter::since(start);
        Ok(DecodeResult {
            hd: None,
            selected_index: best.as_ref().map(|b| b.0),
            codeword: best.map(|b| b.1),
            candidates: out.candidates,
            unreliable,
            sets,
            stats,
        })
    }
}

fn subtract(y: &[Gf], e: &ErrorEstimate) -> Vec<Gf> {
    let ev = e.as_vector(y.len());
    y.iter().zip(&ev).map(|(&a, &b)| a - b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transmit, ChannelModel, CoordPosterior};
    use crate::gf::FieldCtx;
    use crate::kernel::KernelKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn code(m: u32, d: usize) -> GrsCode {
        GrsCode::reed_solomon(Arc::new(FieldCtx::with_default_poly(m).unwrap()), d).unwrap()
    }

    fn random_codeword(c: &GrsCode, rng: &mut ChaCha8Rng) -> Vec<Gf> {
        let m: Vec<Gf> = (0..c.k()).map(|_| Gf(rng.random_range(0..c.field().q() as u16))).collect();
        c.encode(&m).unwrap()
    }

    #[test]
    fn codeword_takes_hd_path() {
        let c = code(4, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_codeword(&c, &mut rng);
        let info = transmit(&x, 16, ChannelModel::Symmetric { p: 0.0 }, &mut rng);
        let dec = Decoder::new(c, ChaseConfig::new(4, 2, 2, KernelKind::B).unwrap()).unwrap();
        let r = dec.decode(&info).unwrap();
        assert_eq!(r.hd, Some(ErrorEstimate::empty()));
        assert_eq!(r.codeword, Some(x));
        assert_eq!(r.stats.edges, 0);
    }

    #[test]
    fn t_plus_one_with_one_unreliable_hit() {
        let c = code(4, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in KernelKind::ALL {
            let x = random_codeword(&c, &mut rng);
            let err = ErrorEstimate::from_pairs(vec![(0, Gf(3)), (5, Gf(7)), (9, Gf(1)), (12, Gf(14))]).unwrap();
            let y: Vec<Gf> = x.iter().zip(err.as_vector(15)).map(|(&a, b)| a + b).collect();
            let mut post: Vec<CoordPosterior> = y.iter().map(|&a| CoordPosterior::new(vec![(a, 0.95)], 0.05 / 15.0)).collect();
            post[9] = CoordPosterior::new(vec![(y[9], 0.5), (x[9], 0.45)], 0.05 / 14.0);
            let info = ReliabilityInfo { q: 16, post };
            let dec = Decoder::new(c.clone(), ChaseConfig::new(3, 2, 2, kind).unwrap()).unwrap();
            let r = dec.decode(&info).unwrap();
            assert!(r.hd.is_none());
            assert_eq!(r.unreliable[0], 9);
            assert!(r.candidates.contains(&err), "{kind}");
            assert_eq!(r.codeword, Some(x));
        }
    }

    #[test]
    fn gmd_mode_recovers_erased_errors() {
        let c = code(4, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_codeword(&c, &mut rng);
        // Four errors, two of them erased: 2·2 + 2 = 6 = d − 1.
        let err = ErrorEstimate::from_pairs(vec![(1, Gf(3)), (4, Gf(7)), (8, Gf(1)), (13, Gf(9))]).unwrap();
        let y: Vec<Gf> = x.iter().zip(err.as_vector(15)).map(|(&a, b)| a + b).collect();
        let mut post: Vec<CoordPosterior> = y.iter().map(|&a| CoordPosterior::new(vec![(a, 0.9)], 0.1 / 15.0)).collect();
        for i in [4, 13] {
            post[i] = CoordPosterior::new(vec![(y[i], 1.0 / 16.0)], 1.0 / 16.0);
        }
        let info = ReliabilityInfo { q: 16, post };
        let cfg = ChaseConfig {
            gmd: true,
            ..ChaseConfig::new(2, 1, 2, KernelKind::B).unwrap()
        };
        let r = Decoder::new(c, cfg).unwrap().decode(&info).unwrap();
        assert!(r.candidates.contains(&err));
        assert_eq!(r.codeword, Some(x));
    }

    #[test]
    fn rejects_oversized_eta() {
        let c = code(3, 5);
        let cfg = ChaseConfig::new(8, 2, 2, KernelKind::A).unwrap();
        assert!(Decoder::new(c, cfg).is_err());
    }
}

//! Memoryless channels, symbol reliabilities and maximum-likelihood
//! selection from a candidate list.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::tree::CandidateList;

/// Logit given to symbols that are neither the transmitted one nor the
/// competitor in the soft model.
const SOFT_FLOOR_LOGIT: f64 = -6.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    /// q-ary symmetric: each symbol is replaced, with probability `p`, by a
    /// uniformly chosen different symbol.
    Symmetric { p: f64 },
    /// Each coordinate scores the sent symbol 1 + σ·N, one random competitor
    /// σ·N', and every other symbol a fixed low logit; the posterior is the
    /// softmax of these scores and the hard decision its maximum.
    Soft { sigma: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Symmetric { p } if !(0.0..=1.0).contains(&p) => {
                Err(Error::InvalidConfig(format!("symmetric channel needs 0 <= p <= 1, got {p}")))
            }
            ChannelModel::Soft { sigma } if !(sigma >= 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidConfig(format!("soft channel needs sigma >= 0, got {sigma}")))
            }
            _ => Ok(()),
        }
    }
}

/// Posterior of one coordinate: explicit probabilities for a few symbols,
/// sorted by decreasing probability, and a common value for the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordPosterior {
    pub top: Vec<(Gf, f64)>,
    pub floor: f64,
}

impl CoordPosterior {
    pub fn new(mut top: Vec<(Gf, f64)>, floor: f64) -> Self {
        top.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        CoordPosterior { top, floor }
    }

    pub fn prob(&self, a: Gf) -> f64 {
        self.top
            .iter()
            .find(|(s, _)| *s == a)
            .map_or(self.floor, |&(_, p)| p)
    }

    pub fn hard(&self) -> Gf {
        self.top[0].0
    }

    /// Best minus second-best posterior.
    pub fn gap(&self) -> f64 {
        let second = self.top.get(1).map_or(self.floor, |x| x.1.max(self.floor));
        self.top[0].1 - second
    }

    /// The `mu` most probable symbols, ties among floor symbols broken by
    /// symbol value.
    pub fn most_probable(&self, mu: usize, q: usize) -> Vec<Gf> {
        let mut out: Vec<Gf> = self.top.iter().take(mu).map(|x| x.0).collect();
        let mut a = 0u16;
        while out.len() < mu && (a as usize) < q {
            let g = Gf(a);
            if !self.top.iter().any(|x| x.0 == g) {
                out.push(g);
            }
            a += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityInfo {
    pub q: usize,
    pub post: Vec<CoordPosterior>,
}

impl ReliabilityInfo {
    pub fn hard(&self) -> Vec<Gf> {
        self.post.iter().map(|p| p.hard()).collect()
    }

    /// Builds posteriors from a hard-decision word, the probability of each
    /// hard symbol and optional ranked alternatives per coordinate. The
    /// remaining mass is split evenly over the alternatives.
    pub fn from_scores(q: usize, hard: &[Gf], probs: &[f64], alternatives: &[Vec<Gf>]) -> Result<Self> {
        if probs.len() != hard.len() {
            return Err(Error::LengthMismatch {
                expected: hard.len(),
                got: probs.len(),
            });
        }
        if !alternatives.is_empty() && alternatives.len() != hard.len() {
            return Err(Error::LengthMismatch {
                expected: hard.len(),
                got: alternatives.len(),
            });
        }
        let mut post = Vec::with_capacity(hard.len());
        for (i, (&h, &p)) in hard.iter().zip(probs).enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("reliability {p} at {i} not in [0, 1]")));
            }
            let alts: &[Gf] = alternatives.get(i).map_or(&[], |v| v.as_slice());
            let rest = 1.0 - p;
            let mut top = vec![(h, p)];
            let floor = if alts.is_empty() {
                rest / (q - 1) as f64
            } else {
                let share = rest / alts.len() as f64;
                for &a in alts {
                    if a == h || (a.0 as usize) >= q {
                        return Err(Error::InvalidSymbol(format!("alternative {a} at {i}")));
                    }
                    top.push((a, share));
                }
                0.0
            };
            post.push(CoordPosterior::new(top, floor));
        }
        Ok(ReliabilityInfo { q, post })
    }
}

/// Send `codeword` through the channel.
pub fn transmit<R: Rng>(codeword: &[Gf], q: usize, model: ChannelModel, rng: &mut R) -> ReliabilityInfo {
    let post = codeword
        .iter()
        .map(|&x| match model {
            ChannelModel::Symmetric { p } => {
                let y = if p > 0.0 && rng.random_bool(p) {
                    let k = rng.random_range(1..q as u16);
                    Gf(x.0 ^ k)
                } else {
                    x
                };
                CoordPosterior::new(vec![(y, 1.0 - p)], p / (q - 1) as f64)
            }
            ChannelModel::Soft { sigma } => {
                let n1: f64 = StandardNormal.sample(rng);
                let n2: f64 = StandardNormal.sample(rng);
                let comp = Gf(x.0 ^ rng.random_range(1..q as u16));
                let l_true = 1.0 + sigma * n1;
                let l_comp = sigma * n2;
                let m = l_true.max(l_comp).max(SOFT_FLOOR_LOGIT);
                let (e1, e2, ef) = ((l_true - m).exp(), (l_comp - m).exp(), (SOFT_FLOOR_LOGIT - m).exp());
                let z = e1 + e2 + ef * (q - 2) as f64;
                CoordPosterior::new(vec![(x, e1 / z), (comp, e2 / z)], ef / z)
            }
        })
        .collect();
    ReliabilityInfo { q, post }
}

/// The `eta` least reliable coordinates, by increasing gap with ties broken
/// by index, and for each the nonzero differences a − a* over its `mu` most
/// probable symbols a.
pub fn pick_unreliable(info: &ReliabilityInfo, eta: usize, mu: usize) -> Result<(Vec<usize>, Vec<Vec<Gf>>)> {
    let n = info.post.len();
    if eta > n {
        return Err(Error::InvalidConfig(format!("eta = {eta} exceeds n = {n}")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        info.post[a]
            .gap()
            .total_cmp(&info.post[b].gap())
            .then(a.cmp(&b))
    });
    idx.truncate(eta);
    let sets = idx
        .iter()
        .map(|&i| {
            let p = &info.post[i];
            let h = p.hard();
            p.most_probable(mu, info.q)
                .into_iter()
                .map(|a| a - h)
                .filter(|d| !d.is_zero())
                .collect()
        })
        .collect();
    Ok((idx, sets))
}

/// Log-likelihood of a word.
pub fn log_likelihood(word: &[Gf], info: &ReliabilityInfo) -> f64 {
    word.iter().zip(&info.post).map(|(&x, p)| p.prob(x).ln()).sum()
}

/// Index and codeword of the most likely candidate y − e, ties going to
/// the earliest candidate.
pub fn select_best(candidates: &CandidateList, y: &[Gf], info: &ReliabilityInfo) -> Option<(usize, Vec<Gf>)> {
    let mut best: Option<(usize, Vec<Gf>, f64)> = None;
    for (k, c) in candidates.iter().enumerate() {
        let e = c.error.as_vector(y.len());
        let x: Vec<Gf> = y.iter().zip(&e).map(|(&a, &b)| a - b).collect();
        let ll = log_likelihood(&x, info);
        let better = match &best {
            None => true,
            Some((_, _, b)) => ll.total_cmp(b) == Ordering::Greater,
        };
        if better {
            best = Some((k, x, ll));
        }
    }
    best.map(|(k, x, _)| (k, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grs::ErrorEstimate;
    use crate::tree::Candidate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(v: &[u16]) -> Vec<Gf> {
        v.iter().map(|&x| Gf(x)).collect()
    }

    #[test]
    fn noiseless_symmetric_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = word(&[1, 2, 3, 4, 5, 6, 7]);
        let info = transmit(&x, 8, ChannelModel::Symmetric { p: 0.0 }, &mut rng);
        assert_eq!(info.hard(), x);
        assert!(info.post.iter().all(|p| p.gap() == 1.0));
    }

    #[test]
    fn same_seed_same_output() {
        let x = word(&[0; 15]);
        for model in [ChannelModel::Symmetric { p: 0.3 }, ChannelModel::Soft { sigma: 0.8 }] {
            let a = transmit(&x, 16, model, &mut ChaCha8Rng::seed_from_u64(7));
            let b = transmit(&x, 16, model, &mut ChaCha8Rng::seed_from_u64(7));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn soft_posteriors_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = word(&[5; 15]);
        let info = transmit(&x, 16, ChannelModel::Soft { sigma: 1.0 }, &mut rng);
        for p in &info.post {
            let total: f64 = p.top.iter().map(|x| x.1).sum::<f64>() + p.floor * (16 - p.top.len()) as f64;
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn double_peak_is_less_reliable() {
        let flat = CoordPosterior::new(vec![(Gf(1), 0.45), (Gf(2), 0.43)], 0.02);
        let sharp = CoordPosterior::new(vec![(Gf(3), 0.9), (Gf(4), 0.05)], 0.01);
        let info = ReliabilityInfo { q: 8, post: vec![sharp, flat] };
        let (i, sets) = pick_unreliable(&info, 1, 2).unwrap();
        assert_eq!(i, vec![1]);
        assert_eq!(sets, vec![vec![Gf(3)]]);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let info = ReliabilityInfo::from_scores(8, &word(&[1, 2, 3, 4]), &[0.9; 4], &[]).unwrap();
        let (i, sets) = pick_unreliable(&info, 2, 2).unwrap();
        assert_eq!(i, vec![0, 1]);
        // Floor symbols are ranked by value: 0 is the first one not equal to the hard symbol.
        assert_eq!(sets, vec![vec![Gf(1)], vec![Gf(2)]]);
        assert!(pick_unreliable(&info, 5, 2).is_err());
    }

    #[test]
    fn hypothesis_sets_by_hand() {
        let p = CoordPosterior::new(vec![(Gf(6), 0.5), (Gf(3), 0.3), (Gf(1), 0.15)], 0.01);
        let info = ReliabilityInfo { q: 8, post: vec![p] };
        let (_, sets) = pick_unreliable(&info, 1, 3).unwrap();
        assert_eq!(sets, vec![vec![Gf(6 ^ 3), Gf(6 ^ 1)]]);
        let (_, sets) = pick_unreliable(&info, 1, 1).unwrap();
        assert!(sets[0].is_empty());
    }

    #[test]
    fn selection_prefers_closer_word() {
        let y = word(&[0; 7]);
        let info = transmit(&y, 8, ChannelModel::Symmetric { p: 0.1 }, &mut ChaCha8Rng::seed_from_u64(0));
        let mut list = CandidateList::new();
        let far = ErrorEstimate::from_pairs((0..5).map(|i| (i, Gf(1))).collect()).unwrap();
        let near = ErrorEstimate::from_pairs((0..3).map(|i| (i, Gf(2))).collect()).unwrap();
        list.push(Candidate { error: far, pattern: vec![] });
        list.push(Candidate { error: near.clone(), pattern: vec![] });
        let (k, x) = select_best(&list, &y, &info).unwrap();
        assert_eq!(k, 1);
        assert_eq!(x, near.as_vector(7));
        assert!(select_best(&CandidateList::new(), &y, &info).is_none());
    }

    #[test]
    fn selection_tie_goes_first() {
        let y = word(&[0; 7]);
        let info = ReliabilityInfo::from_scores(8, &y, &[0.6; 7], &[]).unwrap();
        let mut list = CandidateList::new();
        list.push(Candidate { error: ErrorEstimate::from_pairs(vec![(2, Gf(1))]).unwrap(), pattern: vec![] });
        list.push(Candidate { error: ErrorEstimate::from_pairs(vec![(4, Gf(1))]).unwrap(), pattern: vec![] });
        assert_eq!(select_best(&list, &y, &info).unwrap().0, 0);
    }

    #[test]
    fn invalid_models() {
        assert!(ChannelModel::Symmetric { p: 1.5 }.validate().is_err());
        assert!(ChannelModel::Soft { sigma: -1.0 }.validate().is_err());
        assert!(ChannelModel::Soft { sigma: 0.5 }.validate().is_ok());
    }
}

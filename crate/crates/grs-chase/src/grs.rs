//! Primitive GRS codes: encoding, syndromes, locator/evaluator polynomials
//! and Forney's formula.
//!
//! Index conventions, used everywhere in the crate:
//! - coordinate `i` of a word has error locator `λ^i`;
//! - entry `i` of a domain evaluation vector is the value at `λ^{-i}`.
//!
//! So a root of a locator polynomial at entry `i` of its evaluation vector
//! marks an error at coordinate `i`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Gf};
use crate::groebner::solve_key_equation;
use crate::poly::{Degree, Poly};

#[derive(Clone, Debug)]
pub struct GrsCode {
    field: Arc<FieldCtx>,
    n: usize,
    d: usize,
    t: usize,
    a_tilde: Vec<Gf>,
}

/// Coefficients S_0..S_{d-2} of the syndrome polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    s: Vec<Gf>,
}

impl Syndrome {
    pub fn coeffs(&self) -> &[Gf] {
        &self.s
    }

    pub fn poly(&self) -> Poly {
        Poly::from_coeffs(self.s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.s.iter().all(|c| c.is_zero())
    }
}

/// An error pattern given by its positions and nonzero values, kept sorted
/// by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorEstimate {
    positions: Vec<usize>,
    values: Vec<Gf>,
}

impl ErrorEstimate {
    pub fn empty() -> Self {
        ErrorEstimate {
            positions: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Build from (position, value) pairs; zero values are dropped.
    pub fn from_pairs(mut pairs: Vec<(usize, Gf)>) -> Result<Self> {
        pairs.retain(|(_, v)| !v.is_zero());
        pairs.sort();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidSymbol(format!("position {} repeated", w[0].0)));
            }
        }
        Ok(ErrorEstimate {
            positions: pairs.iter().map(|p| p.0).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn from_vector(e: &[Gf]) -> Self {
        let pairs = e.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, &v)| (i, v));
        ErrorEstimate {
            positions: pairs.clone().map(|p| p.0).collect(),
            values: pairs.map(|p| p.1).collect(),
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn values(&self) -> &[Gf] {
        &self.values
    }

    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    pub fn locators(&self, f: &FieldCtx) -> Vec<Gf> {
        self.positions.iter().map(|&i| f.lambda_pow(i as i64)).collect()
    }

    pub fn as_vector(&self, n: usize) -> Vec<Gf> {
        let mut v = vec![Gf::ZERO; n];
        for (&i, &b) in self.positions.iter().zip(&self.values) {
            v[i] = b;
        }
        v
    }

    pub fn value_at(&self, pos: usize) -> Option<Gf> {
        self.positions
            .binary_search(&pos)
            .ok()
            .map(|k| self.values[k])
    }
}

impl GrsCode {
    pub fn new(field: Arc<FieldCtx>, d: usize, a_tilde: Vec<Gf>) -> Result<Self> {
        let n = field.n();
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidCode(format!("d = {d} must be odd and at least 3")));
        }
        if d > n {
            return Err(Error::InvalidCode(format!("d = {d} exceeds n = {n}")));
        }
        if a_tilde.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: a_tilde.len(),
            });
        }
        if a_tilde.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidCode("multipliers must be nonzero".into()));
        }
        Ok(GrsCode {
            field,
            n,
            d,
            t: (d - 1) / 2,
            a_tilde,
        })
    }

    /// Reed–Solomon code: all multipliers equal to one.
    pub fn reed_solomon(field: Arc<FieldCtx>, d: usize) -> Result<Self> {
        let n = field.n();
        Self::new(field, d, vec![Gf::ONE; n])
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Message length n − d + 1.
    pub fn k(&self) -> usize {
        self.n - self.d + 1
    }

    pub fn a_tilde(&self) -> &[Gf] {
        &self.a_tilde
    }

    pub fn multiplier(&self, pos: usize) -> Gf {
        self.a_tilde[pos]
    }

    /// Locator λ^pos of a coordinate.
    pub fn locator(&self, pos: usize) -> Gf {
        self.field.lambda_pow(pos as i64)
    }

    /// Coordinate of a locator.
    pub fn position(&self, locator: Gf) -> Result<usize> {
        self.field.log(locator)
    }

    /// Evaluation-style encoder: with m(X) the message polynomial,
    /// c_i = ã_i^{-1} · λ^{-i(d-1)} · m(λ^{-i}). The sum defining S_j then
    /// collapses to geometric sums over λ^e with e ≢ 0 mod n, which vanish.
    pub fn encode(&self, message: &[Gf]) -> Result<Vec<Gf>> {
        if message.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: message.len(),
            });
        }
        let f = &*self.field;
        let m = Poly::from_coeffs(message.to_vec());
        Ok((0..self.n)
            .map(|i| {
                let x = f.lambda_pow(-(i as i64));
                let tw = f.lambda_pow(-((i * (self.d - 1)) as i64));
                let ai = f.inv(self.a_tilde[i]).expect("nonzero multiplier");
                f.mul(f.mul(ai, tw), m.eval(x, f))
            })
            .collect())
    }

    /// S_j = Σ_i ã_i y_i λ^{ij}, j = 0..d−2.
    pub fn syndrome(&self, y: &[Gf]) -> Result<Syndrome> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let f = &*self.field;
        let mut s = vec![Gf::ZERO; self.d - 1];
        for (i, &yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let c = f.mul(self.a_tilde[i], yi);
            let step = f.lambda_pow(i as i64);
            let mut p = c;
            for sj in s.iter_mut() {
                *sj += p;
                p = f.mul(p, step);
            }
        }
        Ok(Syndrome { s })
    }

    pub fn syndrome_from_poly(&self, s: Poly) -> Result<Syndrome> {
        if s.deg().le(self.d as i64 - 2) {
            let mut v = s.coeffs().to_vec();
            v.resize(self.d - 1, Gf::ZERO);
            Ok(Syndrome { s: v })
        } else {
            Err(Error::LengthMismatch {
                expected: self.d - 1,
                got: s.coeffs().len(),
            })
        }
    }

    /// Error locator σ = Π(1 − α_i X) and evaluator
    /// ω = Σ β_i a_i Π_{j≠i}(1 − α_j X).
    pub fn elp_eep_of(&self, e: &ErrorEstimate) -> (Poly, Poly) {
        let f = &*self.field;
        let locs = e.locators(f);
        let lin = |a: Gf| Poly::from_coeffs(vec![Gf::ONE, a]);
        let mut sigma = Poly::one();
        for &a in &locs {
            sigma = sigma.mul(&lin(a), f);
        }
        let mut omega = Poly::zero();
        for (k, (&pos, &b)) in e.positions.iter().zip(&e.values).enumerate() {
            let mut term = Poly::constant(f.mul(b, self.a_tilde[pos]));
            for (j, &a) in locs.iter().enumerate() {
                if j != k {
                    term = term.mul(&lin(a), f);
                }
            }
            omega = omega.add(&term);
        }
        (sigma, omega)
    }

    /// Forney: β = −α ω(α^{-1}) / (a σ'(α^{-1})) at each given position.
    pub fn forney_values(&self, sigma: &Poly, omega: &Poly, positions: &[usize]) -> Result<Vec<Gf>> {
        let f = &*self.field;
        let ds = sigma.deriv();
        positions
            .iter()
            .map(|&pos| {
                let alpha = self.locator(pos);
                let x = f.inv(alpha)?;
                if !sigma.eval(x, f).is_zero() {
                    return Err(Error::NotARoot(pos));
                }
                let den = f.mul(self.a_tilde[pos], ds.eval(x, f));
                if den.is_zero() {
                    return Err(Error::RepeatedRoot(pos));
                }
                f.div(f.mul(alpha, omega.eval(x, f)), den)
            })
            .collect()
    }

    pub fn syndrome_consistent(&self, s: &Syndrome, e: &ErrorEstimate) -> bool {
        self.syndrome(&e.as_vector(self.n)).is_ok_and(|se| se == *s)
    }

    /// Bounded-distance decoding: the error of weight ≤ t explaining `s`,
    /// if there is one.
    pub fn decode_hd(&self, s: &Syndrome) -> Option<ErrorEstimate> {
        if s.is_zero() {
            return Some(ErrorEstimate::empty());
        }
        let g = solve_key_equation(self, s);
        let [_, g1] = g.pairs();
        let deg = g1.v.deg().finite()?;
        if deg > self.t {
            return None;
        }
        extract_error(self, &g1.u, &g1.v, deg, s)
    }
}

/// Read an error off a (ω, σ) candidate: σ must have exactly `expected_deg`
/// distinct roots on the domain, all Forney values nonzero and the result
/// must reproduce the syndrome.
pub fn extract_error(
    code: &GrsCode,
    omega: &Poly,
    sigma: &Poly,
    expected_deg: usize,
    s: &Syndrome,
) -> Option<ErrorEstimate> {
    if sigma.deg() != Degree::Finite(expected_deg) {
        return None;
    }
    let f = code.field();
    let e = error_from_evals(
        code,
        &sigma.eval_domain(f),
        &omega.eval_domain(f),
        &sigma.deriv().eval_domain(f),
        expected_deg,
    )?;
    code.syndrome_consistent(s, &e).then_some(e)
}

/// Forney on domain evaluation vectors of σ, ω and σ'. Returns the error
/// when σ has exactly `expected_deg` roots on the domain, each simple, and
/// every value is nonzero. The syndrome is not checked here.
pub fn error_from_evals(
    code: &GrsCode,
    sigma: &[Gf],
    omega: &[Gf],
    dsigma: &[Gf],
    expected_deg: usize,
) -> Option<ErrorEstimate> {
    forney_on_roots(code, sigma, omega, dsigma, expected_deg, false)
}

/// As [`error_from_evals`], but roots whose Forney value is zero are
/// dropped instead of rejecting the estimate. Used for erasure decoding,
/// where an erased coordinate may turn out to be correct.
pub fn erasure_error_from_evals(
    code: &GrsCode,
    sigma: &[Gf],
    omega: &[Gf],
    dsigma: &[Gf],
    expected_deg: usize,
) -> Option<ErrorEstimate> {
    forney_on_roots(code, sigma, omega, dsigma, expected_deg, true)
}

fn forney_on_roots(
    code: &GrsCode,
    sigma: &[Gf],
    omega: &[Gf],
    dsigma: &[Gf],
    expected_deg: usize,
    drop_zero: bool,
) -> Option<ErrorEstimate> {
    let f = code.field();
    let roots: Vec<usize> = (0..code.n()).filter(|&i| sigma[i].is_zero()).collect();
    if roots.len() != expected_deg {
        return None;
    }
    let mut positions = Vec::with_capacity(roots.len());
    let mut values = Vec::with_capacity(roots.len());
    for &i in &roots {
        let den = f.mul(code.multiplier(i), dsigma[i]);
        let num = f.mul(code.locator(i), omega[i]);
        let b = f.div(num, den).ok()?;
        if b.is_zero() {
            if drop_zero {
                continue;
            }
            return None;
        }
        positions.push(i);
        values.push(b);
    }
    Some(ErrorEstimate { positions, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code(m: u32, d: usize) -> GrsCode {
        GrsCode::reed_solomon(Arc::new(FieldCtx::with_default_poly(m).unwrap()), d).unwrap()
    }

    fn random_error(c: &GrsCode, w: usize, rng: &mut ChaCha8Rng) -> ErrorEstimate {
        let mut pos: Vec<usize> = (0..c.n()).collect();
        for i in 0..w {
            let j = rng.random_range(i..c.n());
            pos.swap(i, j);
        }
        let pairs = pos[..w]
            .iter()
            .map(|&p| (p, Gf(rng.random_range(1..c.field().q() as u16))))
            .collect();
        ErrorEstimate::from_pairs(pairs).unwrap()
    }

    fn naive_syndrome(c: &GrsCode, y: &[Gf]) -> Vec<Gf> {
        let f = c.field();
        (0..c.d() - 1)
            .map(|j| {
                let mut s = Gf::ZERO;
                for (i, &yi) in y.iter().enumerate() {
                    let p = f.lambda_pow((i * j) as i64);
                    s += f.mul(f.mul(c.multiplier(i), yi), p);
                }
                s
            })
            .collect()
    }

    #[test]
    fn rejects_even_d() {
        let f = Arc::new(FieldCtx::with_default_poly(3).unwrap());
        assert!(GrsCode::reed_solomon(f.clone(), 4).is_err());
        assert!(GrsCode::new(f, 5, vec![Gf::ONE; 6]).is_err());
    }

    #[test]
    fn encode_gives_zero_syndrome_and_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = Arc::new(FieldCtx::with_default_poly(3).unwrap());
        let a: Vec<Gf> = (0..7).map(|_| Gf(rng.random_range(1..8))).collect();
        let c = GrsCode::new(f, 5, a).unwrap();
        let zero = c.encode(&vec![Gf::ZERO; c.k()]).unwrap();
        assert!(zero.iter().all(|x| x.is_zero()));
        let words: Vec<Vec<Gf>> = (0..30)
            .map(|_| {
                let m: Vec<Gf> = (0..c.k()).map(|_| Gf(rng.random_range(0..8))).collect();
                c.encode(&m).unwrap()
            })
            .collect();
        for w in &words {
            assert!(c.syndrome(w).unwrap().is_zero());
        }
        for i in 0..words.len() {
            for j in 0..i {
                let dist = (0..7).filter(|&k| words[i][k] != words[j][k]).count();
                assert!(dist == 0 || dist >= 5);
            }
        }
        assert!(c.encode(&[Gf::ONE]).is_err());
    }

    #[test]
    fn syndrome_of_unit_vector() {
        let c = code(4, 7);
        let f = c.field();
        for i in 0..c.n() {
            let mut y = vec![Gf::ZERO; c.n()];
            y[i] = Gf::ONE;
            let s = c.syndrome(&y).unwrap();
            for j in 0..6 {
                assert_eq!(s.coeffs()[j], f.lambda_pow((i * j) as i64));
            }
        }
    }

    #[test]
    fn syndrome_matches_naive_and_is_linear() {
        let c = code(4, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let e = random_error(&c, 3, &mut rng);
            let ev = e.as_vector(c.n());
            assert_eq!(c.syndrome(&ev).unwrap().coeffs(), &naive_syndrome(&c, &ev)[..]);
            let m: Vec<Gf> = (0..c.k()).map(|_| Gf(rng.random_range(0..16))).collect();
            let x = c.encode(&m).unwrap();
            let y: Vec<Gf> = x.iter().zip(&ev).map(|(&a, &b)| a + b).collect();
            assert_eq!(c.syndrome(&y).unwrap(), c.syndrome(&ev).unwrap());
        }
    }

    #[test]
    fn elp_eep_small_cases() {
        let c = code(3, 5);
        let (s, w) = c.elp_eep_of(&ErrorEstimate::empty());
        assert_eq!((s, w), (Poly::one(), Poly::zero()));
        let e = ErrorEstimate::from_pairs(vec![(3, Gf(5))]).unwrap();
        let (s, w) = c.elp_eep_of(&e);
        assert_eq!(s, Poly::from_coeffs(vec![Gf::ONE, c.locator(3)]));
        assert_eq!(w, Poly::constant(Gf(5)));
    }

    #[test]
    fn key_equation_and_forney_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, d) in [(3, 5), (4, 7)] {
            let c = code(m, d);
            let f = c.field();
            for w in 1..=3 {
                let e = random_error(&c, w, &mut rng);
                let (sigma, omega) = c.elp_eep_of(&e);
                let s = c.syndrome(&e.as_vector(c.n())).unwrap();
                let lhs = s.poly().mul(&sigma, f).truncate(d - 1);
                assert_eq!(lhs, omega.truncate(d - 1));
                assert!(omega.deg() < sigma.deg());
                let vals = c.forney_values(&sigma, &omega, e.positions()).unwrap();
                assert_eq!(vals, e.values());
                let mut bad = e.as_vector(c.n());
                bad[e.positions()[0]] += Gf::ONE;
                assert!(!c.syndrome_consistent(&s, &ErrorEstimate::from_vector(&bad)));
                assert!(c.syndrome_consistent(&s, &e));
                assert!(!c.syndrome_consistent(&s, &ErrorEstimate::empty()));
            }
        }
    }

    #[test]
    fn hd_decodes_up_to_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = code(4, 7);
        for w in 0..=3 {
            for _ in 0..20 {
                let e = random_error(&c, w, &mut rng);
                let s = c.syndrome(&e.as_vector(c.n())).unwrap();
                assert_eq!(c.decode_hd(&s), Some(e));
            }
        }
    }
}

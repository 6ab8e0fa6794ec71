//! Monomial orderings on F_q[X]², Kötter's iteration for rank-2 modules,
//! and the Gröbner basis of the key-equation module.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Gf};
use crate::grs::{GrsCode, Syndrome};
use crate::poly::{Degree, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The monomial X^deg times the unit vector on `side`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial2 {
    pub side: Side,
    pub deg: usize,
}

impl Monomial2 {
    pub fn left(deg: usize) -> Self {
        Monomial2 { side: Side::Left, deg }
    }

    pub fn right(deg: usize) -> Self {
        Monomial2 { side: Side::Right, deg }
    }

    pub fn times_x(self) -> Self {
        Monomial2 {
            side: self.side,
            deg: self.deg + 1,
        }
    }
}

/// The ordering <_w: same side by degree; (X^a,0) < (0,X^b) iff a ≤ b + w.
pub fn compare_w(m1: Monomial2, m2: Monomial2, w: i64) -> Ordering {
    match (m1.side, m2.side) {
        (Side::Left, Side::Left) | (Side::Right, Side::Right) => m1.deg.cmp(&m2.deg),
        (Side::Left, Side::Right) => {
            if (m1.deg as i64) <= m2.deg as i64 + w {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (Side::Right, Side::Left) => compare_w(m2, m1, w).reverse(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyPair {
    pub u: Poly,
    pub v: Poly,
}

impl PolyPair {
    pub fn new(u: Poly, v: Poly) -> Self {
        PolyPair { u, v }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn scale(&self, c: Gf, f: &FieldCtx) -> PolyPair {
        PolyPair::new(self.u.scale(c, f), self.v.scale(c, f))
    }

    pub fn sub(&self, o: &PolyPair) -> PolyPair {
        PolyPair::new(self.u.sub(&o.u), self.v.sub(&o.v))
    }

    pub fn mul_linear(&self, rho: Gf, f: &FieldCtx) -> PolyPair {
        PolyPair::new(self.u.mul_linear(rho, f), self.v.mul_linear(rho, f))
    }

    pub fn mul_poly(&self, p: &Poly, f: &FieldCtx) -> PolyPair {
        PolyPair::new(self.u.mul(p, f), self.v.mul(p, f))
    }

    /// Coefficient of the leading monomial under <_w.
    pub fn leading_coeff(&self, w: i64) -> Result<Gf> {
        let m = lm_w(self, w)?;
        Ok(match m.side {
            Side::Left => self.u.lc(),
            Side::Right => self.v.lc(),
        })
    }

    /// Scale so the leading coefficient under <_w is 1.
    pub fn normalized(&self, w: i64, f: &FieldCtx) -> Result<PolyPair> {
        let c = self.leading_coeff(w)?;
        Ok(self.scale(f.inv(c)?, f))
    }

    /// True when one pair is a nonzero scalar multiple of the other.
    pub fn proportional(&self, o: &PolyPair, f: &FieldCtx) -> bool {
        match (self.normalized(-1, f), o.normalized(-1, f)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

pub fn lm_w(p: &PolyPair, w: i64) -> Result<Monomial2> {
    match (p.u.deg(), p.v.deg()) {
        (Degree::MinusInfinity, Degree::MinusInfinity) => Err(Error::ZeroPair),
        (Degree::Finite(a), Degree::MinusInfinity) => Ok(Monomial2::left(a)),
        (Degree::MinusInfinity, Degree::Finite(b)) => Ok(Monomial2::right(b)),
        (Degree::Finite(a), Degree::Finite(b)) => {
            let (l, r) = (Monomial2::left(a), Monomial2::right(b));
            Ok(if compare_w(l, r, w) == Ordering::Greater { l } else { r })
        }
    }
}

/// How the element that is not j* gets updated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum UpdateRule {
    /// g_j − (Δ_j/Δ_{j*}) g_{j*}
    #[default]
    Inversion,
    /// (Δ_{j*}/Δ_j) g_j − g_{j*}: same module, scales g_j instead of g_{j*}.
    CrossScaled,
}

/// Discrepancies and pivot of one Kötter step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepInfo {
    pub deltas: [Gf; 2],
    pub jstar: Option<usize>,
}

/// Storage that a Kötter step can update: polynomials, coefficient
/// polynomials or evaluation vectors.
pub trait KoetterTarget {
    /// g_j ← g_j − c·g_{j*}
    fn eliminate(&mut self, f: &FieldCtx, j: usize, jstar: usize, c: Gf);
    /// g_j ← c·g_j − g_{j*}
    fn eliminate_scaled(&mut self, f: &FieldCtx, j: usize, jstar: usize, c: Gf);
    /// g_{j*} ← (X − ρ)·g_{j*}
    fn shift(&mut self, f: &FieldCtx, jstar: usize, rho: Gf);
}

/// One Kötter step given the discrepancies. `lms` is updated by the
/// leading-monomial law: only j* moves, by a factor X. `rho` maps
/// (j*, Δ_{j*}) to D(X·g_{j*})/Δ_{j*}.
pub fn koetter_core<T: KoetterTarget + ?Sized>(
    f: &FieldCtx,
    target: &mut T,
    deltas: [Gf; 2],
    lms: &mut [Monomial2; 2],
    w: i64,
    rule: UpdateRule,
    rho: impl FnOnce(usize, Gf) -> Gf,
) -> StepInfo {
    let nz = [!deltas[0].is_zero(), !deltas[1].is_zero()];
    let jstar = match nz {
        [false, false] => {
            return StepInfo {
                deltas,
                jstar: None,
            }
        }
        [true, false] => 0,
        [false, true] => 1,
        [true, true] => {
            let ord = compare_w(lms[0], lms[1], w);
            assert_ne!(ord, Ordering::Equal, "leading monomials must be distinct");
            if ord == Ordering::Less {
                0
            } else {
                1
            }
        }
    };
    let r = rho(jstar, deltas[jstar]);
    if nz == [true, true] {
        let j = 1 - jstar;
        match rule {
            UpdateRule::Inversion => {
                let c = f.mul(deltas[j], f.inv(deltas[jstar]).expect("nonzero"));
                target.eliminate(f, j, jstar, c);
            }
            UpdateRule::CrossScaled => {
                let c = f.mul(deltas[jstar], f.inv(deltas[j]).expect("nonzero"));
                target.eliminate_scaled(f, j, jstar, c);
            }
        }
    }
    target.shift(f, jstar, r);
    lms[jstar] = lms[jstar].times_x();
    StepInfo {
        deltas,
        jstar: Some(jstar),
    }
}

/// Two-element Gröbner basis with lm(g0) on the left and lm(g1) on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerPairBasis {
    g: [PolyPair; 2],
    w: i64,
}

impl GroebnerPairBasis {
    pub fn new(g0: PolyPair, g1: PolyPair, w: i64) -> Result<Self> {
        let b = GroebnerPairBasis { g: [g0, g1], w };
        let [m0, m1] = b.lms()?;
        if m0.side != Side::Left || m1.side != Side::Right {
            return Err(Error::InvalidConfig(
                "basis elements must lead on the left and right respectively".into(),
            ));
        }
        Ok(b)
    }

    /// {(1,0), (0,1)}, a basis of all of F_q[X]².
    pub fn unit(w: i64) -> Self {
        GroebnerPairBasis {
            g: [
                PolyPair::new(Poly::one(), Poly::zero()),
                PolyPair::new(Poly::zero(), Poly::one()),
            ],
            w,
        }
    }

    pub fn pairs(&self) -> &[PolyPair; 2] {
        &self.g
    }

    pub fn g0(&self) -> &PolyPair {
        &self.g[0]
    }

    pub fn g1(&self) -> &PolyPair {
        &self.g[1]
    }

    pub fn w(&self) -> i64 {
        self.w
    }

    pub fn lms(&self) -> Result<[Monomial2; 2]> {
        Ok([lm_w(&self.g[0], self.w)?, lm_w(&self.g[1], self.w)?])
    }
}

impl KoetterTarget for [PolyPair; 2] {
    fn eliminate(&mut self, f: &FieldCtx, j: usize, jstar: usize, c: Gf) {
        let s = self[jstar].scale(c, f);
        self[j] = self[j].sub(&s);
    }

    fn eliminate_scaled(&mut self, f: &FieldCtx, j: usize, jstar: usize, c: Gf) {
        self[j] = self[j].scale(c, f).sub(&self[jstar]);
    }

    fn shift(&mut self, f: &FieldCtx, jstar: usize, rho: Gf) {
        self[jstar] = self[jstar].mul_linear(rho, f);
    }
}

/// One Kötter step on a polynomial-pair basis for a functional D given as a
/// black box: the caller supplies Δ_j = D(g_j) and, once j* is known,
/// D(X·g_{j*}).
pub fn koetter_step(
    f: &FieldCtx,
    g: &GroebnerPairBasis,
    deltas: [Gf; 2],
    dx: impl FnOnce(usize) -> Gf,
    rule: UpdateRule,
) -> Result<(GroebnerPairBasis, StepInfo)> {
    let mut lms = g.lms()?;
    let mut out = g.clone();
    let info = koetter_core(f, &mut out.g, deltas, &mut lms, g.w, rule, |j, dj| {
        f.mul(dx(j), f.inv(dj).expect("nonzero"))
    });
    Ok((out, info))
}

/// Gröbner basis of M_0 = {(u,v) : u ≡ S·v mod X^{d−1}} under <_{−1}.
///
/// Starts from {(1,0),(0,1)} and imposes the functionals
/// D_k(u,v) = coeff_k(u − S·v) for k = 0..d−2. On the intersection of the
/// earlier kernels D_k(X·g) = D_{k−1}(g) = 0, so every pivot update is a
/// plain multiplication by X.
pub fn solve_key_equation(code: &GrsCode, s: &Syndrome) -> GroebnerPairBasis {
    let f = code.field();
    let sc = s.coeffs();
    let mut b = GroebnerPairBasis::unit(-1);
    let mut lms = [Monomial2::left(0), Monomial2::right(0)];
    for k in 0..sc.len() {
        let mut deltas = [Gf::ZERO; 2];
        for (j, d) in deltas.iter_mut().enumerate() {
            let g = &b.g[j];
            let mut acc = g.u.coeff(k);
            for (i, &si) in sc.iter().enumerate().take(k + 1) {
                acc -= f.mul(si, g.v.coeff(k - i));
            }
            *d = acc;
        }
        koetter_core(f, &mut b.g, deltas, &mut lms, -1, UpdateRule::Inversion, |_, _| Gf::ZERO);
    }
    debug_assert_eq!(b.lms().ok(), Some(lms));
    b
}

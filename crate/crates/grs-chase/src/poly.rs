//! Dense univariate polynomials over GF(2^m).

use std::fmt;

use crate::gf::{FieldCtx, Gf};

/// Degree of a polynomial; the zero polynomial has degree `MinusInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }

    /// max(deg, 0), the convention used when summing degrees of possibly
    /// zero polynomials.
    pub fn clamp0(self) -> usize {
        self.finite().unwrap_or(0)
    }

    pub fn le(self, bound: i64) -> bool {
        match self {
            Degree::MinusInfinity => true,
            Degree::Finite(d) => (d as i64) <= bound,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Coefficient `i` of `coeffs` is the coefficient of X^i; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Gf>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}X")?,
                _ => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Gf::ONE] }
    }

    pub fn constant(c: Gf) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// c·X^k
    pub fn monomial(c: Gf, k: usize) -> Self {
        let mut v = vec![Gf::ZERO; k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_u16(v: &[u16]) -> Self {
        Self::from_coeffs(v.iter().map(|&x| Gf(x)).collect())
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            l => Degree::Finite(l - 1),
        }
    }

    /// Coefficient of X^k (zero past the end).
    pub fn coeff(&self, k: usize) -> Gf {
        self.coeffs.get(k).copied().unwrap_or(Gf::ZERO)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let len = self.coeffs.len().max(o.coeffs.len());
        let v = (0..len).map(|k| self.coeff(k) + o.coeff(k)).collect();
        Poly::from_coeffs(v)
    }

    /// Same as `add` in characteristic 2.
    pub fn sub(&self, o: &Poly) -> Poly {
        let len = self.coeffs.len().max(o.coeffs.len());
        let v = (0..len).map(|k| self.coeff(k) - o.coeff(k)).collect();
        Poly::from_coeffs(v)
    }

    pub fn mul(&self, o: &Poly, f: &FieldCtx) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gf::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += f.mul(a, b);
            }
        }
        Poly::from_coeffs(v)
    }

    /// c·p, one multiplication per stored coefficient.
    pub fn scale(&self, c: Gf, f: &FieldCtx) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// (X − ρ)·p with deg(p)+1 multiplications.
    pub fn mul_linear(&self, rho: Gf, f: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let len = self.coeffs.len();
        let mut v = vec![Gf::ZERO; len + 1];
        for k in 0..len {
            v[k + 1] += self.coeffs[k];
            v[k] -= f.mul(rho, self.coeffs[k]);
        }
        Poly::from_coeffs(v)
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gf::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Poly { coeffs: v }
    }

    /// p mod X^k.
    pub fn truncate(&self, k: usize) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().take(k).copied().collect())
    }

    /// Formal derivative. The integer multiple i·p_i needs no field
    /// multiplication: in characteristic 2 it is p_i for odd i and 0 for even i.
    pub fn deriv(&self) -> Poly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { Gf::ZERO })
            .collect();
        Poly::from_coeffs(v)
    }

    /// Horner evaluation, exactly deg(p) multiplications.
    pub fn eval(&self, x: Gf, f: &FieldCtx) -> Gf {
        let mut it = self.coeffs.iter().rev();
        let Some(&top) = it.next() else {
            return Gf::ZERO;
        };
        it.fold(top, |acc, &c| f.mul(acc, x) + c)
    }

    /// Values at λ^{-i} for i = 0..n, in that order.
    pub fn eval_domain(&self, f: &FieldCtx) -> Vec<Gf> {
        (0..f.n())
            .map(|i| self.eval(f.lambda_pow(-(i as i64)), f))
            .collect()
    }

    /// Evaluate the derivative at x without building it.
    pub fn eval_deriv(&self, x: Gf, f: &FieldCtx) -> Gf {
        self.deriv().eval(x, f)
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self, f: &FieldCtx) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(&lc) => self.scale(f.inv(lc).expect("nonzero leading coefficient"), f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::measure;
    use proptest::prelude::*;

    fn gf8() -> FieldCtx {
        FieldCtx::new(3, 0xB).unwrap()
    }

    fn naive_eval(p: &Poly, x: Gf, f: &FieldCtx) -> Gf {
        let mut s = Gf::ZERO;
        for (i, &c) in p.coeffs().iter().enumerate() {
            s += f.mul(c, f.pow(x, i as u64));
        }
        s
    }

    #[test]
    fn basics() {
        let f = gf8();
        assert_eq!(Poly::one().mul_linear(Gf(3), &f), Poly::from_u16(&[3, 1]));
        assert!(Poly::from_u16(&[1, 2, 3]).scale(Gf::ZERO, &f).is_zero());
        assert_eq!(Poly::zero().deg(), Degree::MinusInfinity);
        assert_eq!(Poly::from_u16(&[1, 0, 0]).deg(), Degree::Finite(0));
        assert_eq!(Poly::from_u16(&[1, 1, 1]).deriv(), Poly::one());
        assert!(Poly::constant(Gf(5)).deriv().is_zero());
        assert_eq!(Poly::zero().eval(Gf(3), &f), Gf::ZERO);
        assert_eq!(Poly::from_u16(&[1, 0, 0, 1]).eval(Gf::ONE, &f), Gf::ZERO);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn deriv_of_product_of_linears() {
        let f = gf8();
        for a in f.elements() {
            for b in f.elements() {
                let p = Poly::one().mul_linear(a, &f).mul_linear(b, &f);
                assert_eq!(p.deriv().eval(a, &f), a + b);
            }
        }
    }

    #[test]
    fn mul_matches_schoolbook() {
        let f = gf8();
        let p = Poly::from_u16(&[3, 5, 7]);
        let q = Poly::from_u16(&[1, 0, 6, 2]);
        let r = p.mul(&q, &f);
        assert_eq!(r.deg(), Degree::Finite(5));
        for k in 0..=5 {
            let mut s = Gf::ZERO;
            for i in 0..=k {
                s += f.mul(p.coeff(i), q.coeff(k - i));
            }
            assert_eq!(r.coeff(k), s);
        }
    }

    #[test]
    fn eval_domain_of_x_is_lambda_vector() {
        let f = FieldCtx::new(4, 0x13).unwrap();
        assert!(Poly::one().eval_domain(&f).iter().all(|&v| v == Gf::ONE));
        let x = Poly::monomial(Gf::ONE, 1).eval_domain(&f);
        for (i, &v) in x.iter().enumerate() {
            assert_eq!(f.mul(v, f.lambda_pow(i as i64)), Gf::ONE);
        }
    }

    fn arb_poly(q: u16, max_len: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0..q, 0..max_len).prop_map(|v| Poly::from_u16(&v))
    }

    proptest! {
        #[test]
        fn horner_matches_power_sum(p in arb_poly(16, 9), x in 0u16..16) {
            let f = FieldCtx::new(4, 0x13).unwrap();
            prop_assert_eq!(p.eval(Gf(x), &f), naive_eval(&p, Gf(x), &f));
            let (_, c) = measure(|| p.eval(Gf(x), &f));
            prop_assert_eq!(c.mults as usize, p.deg().clamp0());
        }

        #[test]
        fn leibniz(p in arb_poly(16, 7), q in arb_poly(16, 7)) {
            let f = FieldCtx::new(4, 0x13).unwrap();
            let lhs = p.mul(&q, &f).deriv();
            let rhs = p.deriv().mul(&q, &f).add(&p.mul(&q.deriv(), &f));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_of_product(p in arb_poly(8, 6), q in arb_poly(8, 6)) {
            let f = gf8();
            let r = p.mul(&q, &f);
            match (p.deg(), q.deg()) {
                (Degree::Finite(a), Degree::Finite(b)) => prop_assert_eq!(r.deg(), Degree::Finite(a + b)),
                _ => prop_assert!(r.is_zero()),
            }
        }

        #[test]
        fn eval_domain_pointwise(p in arb_poly(16, 8)) {
            let f = FieldCtx::new(4, 0x13).unwrap();
            let ev = p.eval_domain(&f);
            prop_assert_eq!(ev.len(), 15);
            for (i, &v) in ev.iter().enumerate() {
                prop_assert_eq!(v, p.eval(f.lambda_pow(-(i as i64)), &f));
            }
        }

        #[test]
        fn mul_linear_counts(p in arb_poly(16, 8), rho in 0u16..16) {
            let f = FieldCtx::new(4, 0x13).unwrap();
            let (r, c) = measure(|| p.mul_linear(Gf(rho), &f));
            prop_assert_eq!(c.mults as usize, p.coeffs().len());
            let lin = Poly::from_coeffs(vec![Gf(rho), Gf::ONE]);
            prop_assert_eq!(r, p.mul(&lin, &f));
        }
    }
}

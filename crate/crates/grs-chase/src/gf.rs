//! Arithmetic in GF(2^m) with log/antilog tables.
//!
//! Every multiplication and division goes through a thread-local operation
//! counter so kernels can be benchmarked by exact multiplication counts.
//! Inversion is a table lookup and is not counted.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use crate::error::{Error, Result};

/// Default primitive polynomials for m = 3..=16, as bit masks.
pub const DEFAULT_PRIM_POLYS: [(u32, u32); 14] = [
    (3, 0xB),
    (4, 0x13),
    (5, 0x25),
    (6, 0x43),
    (7, 0x89),
    (8, 0x11D),
    (9, 0x211),
    (10, 0x409),
    (11, 0x805),
    (12, 0x1053),
    (13, 0x201B),
    (14, 0x4443),
    (15, 0x8003),
    (16, 0x1100B),
];

pub fn default_prim_poly(m: u32) -> Option<u32> {
    DEFAULT_PRIM_POLYS
        .iter()
        .find(|(mm, _)| *mm == m)
        .map(|(_, p)| *p)
}

thread_local! {
    static MULTS: Cell<u64> = const { Cell::new(0) };
    static ADDS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
fn bump_mults(k: u64) {
    MULTS.with(|c| c.set(c.get() + k));
}

#[inline]
fn bump_adds() {
    ADDS.with(|c| c.set(c.get() + 1));
}

/// Snapshot (or difference) of the per-thread operation counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub mults: u64,
    pub adds: u64,
}

impl OpCounter {
    pub fn now() -> Self {
        OpCounter {
            mults: MULTS.with(|c| c.get()),
            adds: ADDS.with(|c| c.get()),
        }
    }

    pub fn since(start: OpCounter) -> Self {
        let now = Self::now();
        OpCounter {
            mults: now.mults - start.mults,
            adds: now.adds - start.adds,
        }
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, o: OpCounter) {
        self.mults += o.mults;
        self.adds += o.adds;
    }
}

/// Run `f` and report the operations it performed on this thread.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, OpCounter) {
    let start = OpCounter::now();
    let r = f();
    (r, OpCounter::since(start))
}

/// An element of GF(2^m) in polynomial-basis representation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Characteristic 2: addition and subtraction are both XOR.
impl Add for Gf {
    type Output = Gf;
    #[inline]
    fn add(self, o: Gf) -> Gf {
        bump_adds();
        Gf(self.0 ^ o.0)
    }
}

impl Sub for Gf {
    type Output = Gf;
    #[inline]
    fn sub(self, o: Gf) -> Gf {
        bump_adds();
        Gf(self.0 ^ o.0)
    }
}

impl AddAssign for Gf {
    #[inline]
    fn add_assign(&mut self, o: Gf) {
        *self = *self + o;
    }
}

impl SubAssign for Gf {
    #[inline]
    fn sub_assign(&mut self, o: Gf) {
        *self = *self - o;
    }
}

/// Field context: tables for GF(2^m) and the chosen primitive element.
#[derive(Clone)]
pub struct FieldCtx {
    m: u32,
    q: usize,
    prim_poly: u32,
    lambda: Gf,
    // exp has length 2(q-1) so log sums need no reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
    inv: Vec<u16>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("prim_poly", &format_args!("{:#x}", self.prim_poly))
            .field("lambda", &self.lambda)
            .finish()
    }
}

/// Carry-less product of a and b reduced modulo `poly` (degree m).
fn mulmod(mut a: u32, mut b: u32, poly: u32, m: u32) -> u32 {
    let mut r = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << m) != 0 {
            a ^= poly;
        }
    }
    r
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree 1..=m/2. A root check alone misses products of quadratics.
pub fn is_irreducible(poly: u32, m: u32) -> bool {
    if poly_degree(poly) != m as i32 || poly & 1 == 0 {
        return false;
    }
    for deg in 1..=m / 2 {
        for low in 0..(1u32 << deg) {
            let div = (1 << deg) | low;
            if poly_rem(poly, div) == 0 {
                return false;
            }
        }
    }
    true
}

fn multiplicative_order(g: u32, poly: u32, m: u32) -> usize {
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = mulmod(x, g, poly, m);
        k += 1;
        if k > (1usize << m) {
            return 0;
        }
    }
    k
}

impl FieldCtx {
    /// Build GF(2^m) from an irreducible polynomial. The primitive element
    /// is the class of X when it has full order, else the smallest element
    /// that does.
    pub fn new(m: u32, prim_poly: u32) -> Result<Self> {
        if !(3..=16).contains(&m) {
            return Err(Error::InvalidField(format!("m = {m} outside 3..=16")));
        }
        if !is_irreducible(prim_poly, m) {
            return Err(Error::InvalidField(format!(
                "polynomial {prim_poly:#x} is not irreducible of degree {m}"
            )));
        }
        let q = 1usize << m;
        let n = q - 1;
        let lambda = (2..q as u32)
            .find(|&g| multiplicative_order(g, prim_poly, m) == n)
            .expect("a finite field has a primitive element");
        let mut exp = vec![0u16; 2 * n];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x as u16;
            exp[i + n] = x as u16;
            log[x as usize] = i as u32;
            x = mulmod(x, lambda, prim_poly, m);
        }
        let mut inv = vec![0u16; q];
        for a in 1..q {
            let l = log[a] as usize;
            inv[a] = exp[(n - l) % n];
        }
        Ok(FieldCtx {
            m,
            q,
            prim_poly,
            lambda: Gf(lambda as u16),
            exp,
            log,
            inv,
        })
    }

    /// GF(2^m) from the built-in polynomial table.
    pub fn with_default_poly(m: u32) -> Result<Self> {
        let p = default_prim_poly(m)
            .ok_or_else(|| Error::InvalidField(format!("no default polynomial for m = {m}")))?;
        Self::new(m, p)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Order of the multiplicative group, which is also the code length.
    pub fn n(&self) -> usize {
        self.q - 1
    }

    pub fn prim_poly(&self) -> u32 {
        self.prim_poly
    }

    pub fn characteristic(&self) -> u32 {
        2
    }

    pub fn lambda(&self) -> Gf {
        self.lambda
    }

    pub fn elem(&self, v: u32) -> Result<Gf> {
        if (v as usize) < self.q {
            Ok(Gf(v as u16))
        } else {
            Err(Error::InvalidSymbol(format!("{v} is not an element of GF({})", self.q)))
        }
    }

    /// λ^k for any integer k.
    #[inline]
    pub fn lambda_pow(&self, k: i64) -> Gf {
        let n = self.n() as i64;
        Gf(self.exp[k.rem_euclid(n) as usize])
    }

    /// Discrete log base λ of a nonzero element.
    #[inline]
    pub fn log(&self, a: Gf) -> Result<usize> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.log[a.0 as usize] as usize)
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        bump_mults(1);
        self.mul_uncounted(a, b)
    }

    #[inline]
    pub(crate) fn mul_uncounted(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf::ZERO;
        }
        Gf(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Table lookup; not counted as a multiplication.
    #[inline]
    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Gf(self.inv[a.0 as usize]))
    }

    #[inline]
    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        let bi = self.inv(b)?;
        Ok(self.mul(a, bi))
    }

    /// Square-and-multiply; every squaring and multiplication is counted.
    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        let top = 63 - e.leading_zeros();
        let mut acc = a;
        for bit in (0..top).rev() {
            acc = self.mul(acc, acc);
            if e >> bit & 1 == 1 {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.q as u32).map(|v| Gf(v as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Gf> {
        (1..self.q as u32).map(|v| Gf(v as u16))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Shift-and-add product with reduction, independent of the tables.
    fn slow_mul(a: u32, b: u32, poly: u32, m: u32) -> u32 {
        let mut prod = 0u32;
        for i in 0..m {
            if b >> i & 1 == 1 {
                prod ^= a << i;
            }
        }
        poly_rem(prod, poly)
    }

    #[test]
    fn gf8_lambda_is_primitive() {
        let f = FieldCtx::new(3, 0b1011).unwrap();
        assert_eq!(f.lambda(), Gf(2));
        let mut x = 1;
        for k in 1..=7 {
            x = slow_mul(x, 2, 0b1011, 3);
            assert_eq!(x == 1, k == 7, "λ^{k}");
        }
        assert_eq!(f.exp.len(), 14);
    }

    #[test]
    fn gf16_tables() {
        let f = FieldCtx::new(4, 0b10011).unwrap();
        assert_eq!(f.q(), 16);
        assert_eq!(f.log.len(), 16);
        assert_eq!(f.inv.len(), 16);
        for a in 1..16u32 {
            for b in 0..16u32 {
                assert_eq!(f.mul(Gf(a as u16), Gf(b as u16)).0 as u32, slow_mul(a, b, 0b10011, 4));
            }
        }
    }

    #[test]
    fn reducible_rejected() {
        assert!(FieldCtx::new(3, 0b1111).is_err());
        // x^4 + x^2 + 1 = (x^2+x+1)^2 has no roots in GF(2).
        assert!(FieldCtx::new(4, 0b10101).is_err());
    }

    #[test]
    fn non_primitive_x_falls_back() {
        // x^4+x^3+x^2+x+1 is irreducible but X has order 5.
        let f = FieldCtx::new(4, 0b11111).unwrap();
        assert_ne!(f.lambda(), Gf(2));
        let l = f.lambda();
        let mut x = Gf::ONE;
        for k in 1..=15 {
            x = f.mul(x, l);
            assert_eq!(x == Gf::ONE, k == 15);
        }
    }

    #[test]
    fn default_table_is_primitive() {
        for (m, p) in DEFAULT_PRIM_POLYS {
            let f = FieldCtx::new(m, p).unwrap();
            assert_eq!(f.lambda(), Gf(2), "m = {m}");
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (m, p) in [(3, 0xB), (4, 0x13)] {
            let f = FieldCtx::new(m, p).unwrap();
            let el: Vec<Gf> = f.elements().collect();
            for &a in &el {
                assert_eq!(a + a, Gf::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
                }
                for &b in &el {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    let s = a + b;
                    assert_eq!(f.mul(s, s), f.mul(a, a) + f.mul(b, b));
                    for &c in &el {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                        assert_eq!((a + b) + c, a + (b + c));
                    }
                }
            }
        }
    }

    #[test]
    fn pow_and_div() {
        let f = FieldCtx::new(4, 0x13).unwrap();
        assert_eq!(f.pow(f.lambda(), 15), Gf::ONE);
        assert!(f.div(Gf(3), Gf::ZERO).is_err());
        assert!(f.inv(Gf::ZERO).is_err());
        for a in f.nonzero_elements() {
            let mut naive = Gf::ONE;
            for e in 0..20u64 {
                assert_eq!(f.pow(a, e), naive);
                naive = f.mul(naive, a);
            }
        }
    }

    #[test]
    fn counting_policy() {
        let f = FieldCtx::new(4, 0x13).unwrap();
        let (_, c) = measure(|| {
            for _ in 0..7 {
                f.mul(Gf(3), Gf(0));
            }
            f.div(Gf(5), Gf(6)).unwrap();
            f.inv(Gf(9)).unwrap();
        });
        assert_eq!(c.mults, 8);
        // e = 13 = 0b1101: three squarings and two multiplications.
        let (_, c) = measure(|| f.pow(Gf(7), 13));
        assert_eq!(c.mults, 5);
        let (_, c) = measure(|| Gf(3) + Gf(4) - Gf(1));
        assert_eq!((c.mults, c.adds), (0, 2));
    }
}

//! Exact arithmetic in prime fields, their extensions `k = F_q = F_p[X]/(m)` and
//! relative extensions `k_r = k[Y]/(m_r)`.
//!
//! Every element is stored as a flat vector of residues mod `p`. For `k` the
//! vector holds the `s` coefficients over `F_p`; for `k_r` it holds `r`
//! consecutive blocks of `s` residues, block `j` being the coefficient of `Y^j`.
//! The flat vector read as base-`p` digits is the element's enumeration index.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::{smallvec, SmallVec};

use crate::arith::{self, add_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest base field for which a discrete-log table is built.
pub const DLOG_TABLE_MAX: u64 = 1 << 22;

const MAX_ORDER: u128 = 1 << 63;

static NEXT_TAG: AtomicU32 = AtomicU32::new(1);

fn fresh_tag() -> u32 {
    NEXT_TAG.fetch_add(1, Ordering::Relaxed)
}

pub(crate) type Digits = SmallVec<[u64; 8]>;

/// An element of some field context, tagged with that context's identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    tag: u32,
    coeffs: Digits,
}

impl FqElem {
    /// Residues mod `p`, lowest power first (flattened across tower levels).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    pub(crate) fn raw(tag: u32, coeffs: Digits) -> Self {
        FqElem { tag, coeffs }
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs.as_slice())
        }
    }
}

/// Operations shared by the base field `k` and its extensions `k_r`.
pub trait Field: Clone + Send + Sync + fmt::Debug {
    fn tag(&self) -> u32;
    fn characteristic(&self) -> u64;
    /// Cardinality of the field.
    fn order(&self) -> u64;
    /// Number of `F_p` residues per element.
    fn width(&self) -> usize;
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem;
    /// A fixed generator of the multiplicative group.
    fn generator(&self) -> &FqElem;

    fn contains(&self, a: &FqElem) -> bool {
        a.tag == self.tag()
    }

    fn zero(&self) -> FqElem {
        FqElem::raw(self.tag(), smallvec![0; self.width()])
    }

    fn one(&self) -> FqElem {
        let mut c: Digits = smallvec![0; self.width()];
        c[0] = 1 % self.characteristic();
        FqElem::raw(self.tag(), c)
    }

    /// Image of an integer under `Z -> F_p -> field`.
    fn scalar(&self, n: i64) -> FqElem {
        let p = self.characteristic() as i128;
        let mut c: Digits = smallvec![0; self.width()];
        c[0] = (n as i128).rem_euclid(p) as u64;
        FqElem::raw(self.tag(), c)
    }

    /// Builds an element from residues, reducing each one mod `p`.
    fn from_digits(&self, digits: &[u64]) -> Result<FqElem> {
        if digits.len() != self.width() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.width(),
                digits.len()
            )));
        }
        let p = self.characteristic();
        Ok(FqElem::raw(self.tag(), digits.iter().map(|d| d % p).collect()))
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    fn is_one(&self, a: &FqElem) -> bool {
        a.coeffs[0] == 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.characteristic();
        let c = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| add_mod(x, y, p))
            .collect();
        FqElem::raw(self.tag(), c)
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.characteristic();
        let c = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| sub_mod(x, y, p))
            .collect();
        FqElem::raw(self.tag(), c)
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.characteristic();
        let c = a.coeffs.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect();
        FqElem::raw(self.tag(), c)
    }

    fn pow(&self, a: &FqElem, mut exp: u128) -> FqElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() as u128 - 2))
        }
    }

    /// `a / b`; panics on division by zero, which is a logic error at every call site.
    fn div(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let bi = self.inv(b).expect("division by zero field element");
        self.mul(a, &bi)
    }

    /// The element whose residues are the base-`p` digits of `index`.
    fn element(&self, mut index: u64) -> FqElem {
        let p = self.characteristic();
        let mut c: Digits = smallvec![0; self.width()];
        for d in c.iter_mut() {
            *d = index % p;
            index /= p;
        }
        FqElem::raw(self.tag(), c)
    }

    fn index_of(&self, a: &FqElem) -> u64 {
        let p = self.characteristic();
        a.coeffs.iter().rev().fold(0u64, |acc, &d| acc * p + d)
    }

    /// Enumerates the field; partition `index` of `total` covers a contiguous
    /// block of enumeration indices, so concatenating the partitions in order
    /// reproduces the full enumeration.
    fn enumerate(&self, part: (u64, u64)) -> ElemRange<'_, Self>
    where
        Self: Sized,
    {
        let (lo, hi) = partition_bounds(self.order(), part);
        self.elements(lo, hi)
    }

    /// Elements with enumeration index in `[lo, hi)`.
    fn elements(&self, lo: u64, hi: u64) -> ElemRange<'_, Self>
    where
        Self: Sized,
    {
        ElemRange {
            field: self,
            next: lo,
            end: hi.min(self.order()),
            cur: None,
        }
    }
}

/// Index range `[lo, hi)` of partition `part.0` out of `part.1` over `n` items.
pub fn partition_bounds(n: u64, part: (u64, u64)) -> (u64, u64) {
    let (index, total) = part;
    assert!(total > 0 && index < total, "partition index out of range");
    let lo = (n as u128 * index as u128 / total as u128) as u64;
    let hi = (n as u128 * (index as u128 + 1) / total as u128) as u64;
    (lo, hi)
}

/// Iterator over a contiguous range of field elements in enumeration order.
pub struct ElemRange<'a, F: Field> {
    field: &'a F,
    next: u64,
    end: u64,
    cur: Option<FqElem>,
}

impl<F: Field> Iterator for ElemRange<'_, F> {
    type Item = FqElem;

    fn next(&mut self) -> Option<FqElem> {
        if self.next >= self.end {
            return None;
        }
        let p = self.field.characteristic();
        let e = match self.cur.take() {
            None => self.field.element(self.next),
            Some(mut prev) => {
                for d in prev.coeffs.iter_mut() {
                    *d += 1;
                    if *d == p {
                        *d = 0;
                    } else {
                        break;
                    }
                }
                prev
            }
        };
        self.next += 1;
        self.cur = Some(e.clone());
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// `k = F_q` with `q = p^s`.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    tag: u32,
    p: u64,
    s: usize,
    q: u64,
    /// Monic modulus over `F_p`, lowest coefficient first; `None` for prime fields.
    modulus: Option<Vec<u64>>,
    generator: FqElem,
    dlog: OnceLock<Vec<u32>>,
}

/// Contexts compare by identity: two separately built fields are distinct.
impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.inner.tag == other.inner.tag
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)?;
        if let Some(m) = &self.inner.modulus {
            write!(f, " mod {:?}", m)?;
        }
        Ok(())
    }
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn s(&self) -> usize {
        self.inner.s
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.inner.modulus.as_deref()
    }

    fn prime(p: u64) -> Result<FieldCtx> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let tag = fresh_tag();
        let mut ctx = FieldCtx {
            inner: Arc::new(FieldInner {
                tag,
                p,
                s: 1,
                q: p,
                modulus: None,
                generator: FqElem::raw(tag, smallvec![1 % p]),
                dlog: OnceLock::new(),
            }),
        };
        let g = find_generator(&ctx, p as u128, &mut ChaCha8Rng::seed_from_u64(p));
        Arc::get_mut(&mut ctx.inner).unwrap().generator = g;
        Ok(ctx)
    }

    /// Embeds an `F_p` residue.
    pub fn from_u64(&self, n: u64) -> FqElem {
        let mut c: Digits = smallvec![0; self.inner.s];
        c[0] = n % self.inner.p;
        FqElem::raw(self.inner.tag, c)
    }

    /// `x^p`.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.inner.p as u128)
    }

    /// Absolute trace `Tr_{k/F_p}` as a residue mod `p`.
    pub fn absolute_trace(&self, a: &FqElem) -> u64 {
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..self.inner.s {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Unique `p`-th root (inverse Frobenius).
    pub fn pth_root(&self, a: &FqElem) -> FqElem {
        let mut cur = a.clone();
        for _ in 1..self.inner.s {
            cur = self.frobenius(&cur);
        }
        cur
    }

    /// Discrete logarithm to the context's generator, via a table built on first use.
    pub fn dlog(&self, x: &FqElem) -> Result<u64> {
        if !self.contains(x) {
            return Err(Error::CtxMismatch);
        }
        if self.inner.q > DLOG_TABLE_MAX {
            return Err(Error::FieldTooLarge {
                size: self.inner.q as u128,
                cap: DLOG_TABLE_MAX as u128,
            });
        }
        if self.is_zero(x) {
            return Err(Error::ZeroElement);
        }
        Ok(self.dlog_table()[self.index_of(x) as usize] as u64)
    }

    pub(crate) fn dlog_table(&self) -> &[u32] {
        self.inner.dlog.get_or_init(|| {
            let q = self.inner.q as usize;
            let mut table = vec![u32::MAX; q];
            let g = self.generator();
            let mut cur = self.one();
            for i in 0..q - 1 {
                table[self.index_of(&cur) as usize] = i as u32;
                cur = self.mul(&cur, g);
            }
            table
        })
    }

    fn mul_digits(&self, a: &[u64], b: &[u64]) -> Digits {
        let p = self.inner.p;
        let s = self.inner.s;
        if s == 1 {
            return smallvec![mul_mod(a[0], b[0], p)];
        }
        let mut prod: SmallVec<[u64; 16]> = smallvec![0; 2 * s - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
            }
        }
        let m = self.inner.modulus.as_ref().unwrap();
        for top in (s..2 * s - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..s {
                let k = top - s + j;
                prod[k] = sub_mod(prod[k], mul_mod(c, m[j], p), p);
            }
        }
        prod[..s].iter().copied().collect()
    }
}

impl Field for FieldCtx {
    fn tag(&self) -> u32 {
        self.inner.tag
    }

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn order(&self) -> u64 {
        self.inner.q
    }

    fn width(&self) -> usize {
        self.inner.s
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert!(self.contains(a) && self.contains(b));
        FqElem::raw(self.inner.tag, self.mul_digits(&a.coeffs, &b.coeffs))
    }

    fn generator(&self) -> &FqElem {
        &self.inner.generator
    }
}

/// Builds `F_{p^s}` with a seeded-random irreducible modulus and a verified generator.
pub fn make_field(p: u64, s: u32, seed: u64) -> Result<FieldCtx> {
    if s == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = (p as u128)
        .checked_pow(s)
        .filter(|&q| q < MAX_ORDER)
        .ok_or(Error::Overflow { p, s })?;
    let prime = FieldCtx::prime(p)?;
    if s == 1 {
        return Ok(prime);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = random_irreducible(&prime, s as usize, &mut rng);
    let m: Vec<u64> = modulus.coeffs().iter().map(|c| c.coeffs[0]).collect();
    let tag = fresh_tag();
    let mut ctx = FieldCtx {
        inner: Arc::new(FieldInner {
            tag,
            p,
            s: s as usize,
            q: q as u64,
            modulus: Some(m),
            generator: FqElem::raw(tag, smallvec![0; s as usize]),
            dlog: OnceLock::new(),
        }),
    };
    let g = find_generator(&ctx, q, &mut rng);
    Arc::get_mut(&mut ctx.inner).unwrap().generator = g;
    Ok(ctx)
}

fn random_irreducible<F: Field>(base: &F, degree: usize, rng: &mut ChaCha8Rng) -> Poly<F> {
    if degree == 1 {
        return Poly::x(base);
    }
    loop {
        let mut coeffs: Vec<FqElem> = (0..degree)
            .map(|_| base.element(rng.gen_range(0..base.order())))
            .collect();
        coeffs.push(base.one());
        let f = Poly::new(base, coeffs);
        if f.is_irreducible() {
            return f;
        }
    }
}

/// Searches seeded-random elements until one has order exactly `order - 1`.
fn find_generator<F: Field>(field: &F, order: u128, rng: &mut ChaCha8Rng) -> FqElem {
    let n = order - 1;
    if n == 1 {
        return field.one();
    }
    let factors = arith::prime_factors(n);
    loop {
        let idx = rng.gen_range(1..order as u64);
        let cand = field.element(idx);
        if factors.iter().all(|&l| !field.is_one(&field.pow(&cand, n / l))) {
            return cand;
        }
    }
}

/// `k_r = k[Y]/(m_r)`, an extension of degree `r` of the base field `k`.
#[derive(Clone)]
pub struct ExtCtx {
    inner: Arc<ExtInner>,
}

struct ExtInner {
    tag: u32,
    base: FieldCtx,
    r: usize,
    order: u64,
    /// Monic modulus over `k`, lowest coefficient first.
    modulus: Vec<FqElem>,
    generator: FqElem,
    /// `(Y^j)^q` for `j < r`: the columns of the `q`-Frobenius as a `k`-linear map.
    frob_cols: Vec<FqElem>,
    /// `Tr_{k_r/k}(Y^j)` for `j < r`.
    trace_weights: Vec<FqElem>,
}

impl PartialEq for ExtCtx {
    fn eq(&self, other: &Self) -> bool {
        self.inner.tag == other.inner.tag
    }
}

impl Eq for ExtCtx {}

impl fmt::Debug for ExtCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?})_{} mod {:?}",
            self.inner.base, self.inner.r, self.inner.modulus
        )
    }
}

/// Builds the degree-`r` extension of `base` with a seeded-random irreducible modulus.
pub fn make_ext(base: &FieldCtx, r: u32, seed: u64) -> Result<ExtCtx> {
    if r == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let order = (base.q() as u128)
        .checked_pow(r)
        .filter(|&n| n < MAX_ORDER)
        .ok_or(Error::Overflow {
            p: base.p(),
            s: base.s() as u32 * r,
        })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let modulus = random_irreducible(base, r as usize, &mut rng);
    let tag = fresh_tag();
    let width = base.s() * r as usize;
    let mut ctx = ExtCtx {
        inner: Arc::new(ExtInner {
            tag,
            base: base.clone(),
            r: r as usize,
            order: order as u64,
            modulus: modulus.coeffs().to_vec(),
            generator: FqElem::raw(tag, smallvec![0; width]),
            frob_cols: Vec::new(),
            trace_weights: Vec::new(),
        }),
    };
    let q = base.q() as u128;
    let frob_cols: Vec<FqElem> = (0..r as usize).map(|j| ctx.pow(&ctx.y_pow(j), q)).collect();
    Arc::get_mut(&mut ctx.inner).unwrap().frob_cols = frob_cols;
    let trace_weights: Vec<FqElem> = (0..r as usize)
        .map(|j| {
            let t = ctx.trace_by_conjugates(&ctx.y_pow(j));
            ctx.restrict(&t).expect("trace lies in the base field")
        })
        .collect();
    let generator = find_generator(&ctx, order, &mut rng);
    let inner = Arc::get_mut(&mut ctx.inner).unwrap();
    inner.trace_weights = trace_weights;
    inner.generator = generator;
    Ok(ctx)
}

impl ExtInner {
    fn base_restrict(&self, x: &FqElem) -> Option<FqElem> {
        let s = self.base.s();
        if x.coeffs[s..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(FqElem::raw(self.base.tag(), x.coeffs[..s].iter().copied().collect()))
    }
}

impl ExtCtx {
    pub fn base(&self) -> &FieldCtx {
        &self.inner.base
    }

    pub fn r(&self) -> usize {
        self.inner.r
    }

    pub fn q(&self) -> u64 {
        self.inner.base.q()
    }

    pub fn modulus(&self) -> &[FqElem] {
        &self.inner.modulus
    }

    fn y_pow(&self, j: usize) -> FqElem {
        let x = if self.inner.r == 1 {
            self.zero()
        } else {
            let mut c: Digits = smallvec![0; self.width()];
            c[self.inner.base.s()] = 1;
            FqElem::raw(self.inner.tag, c)
        };
        if j == 0 {
            return self.one();
        }
        self.pow(&x, j as u128)
    }

    /// Canonical injection `k -> k_r`.
    pub fn embed(&self, a: &FqElem) -> FqElem {
        debug_assert!(self.inner.base.contains(a));
        let mut c: Digits = smallvec![0; self.width()];
        c[..a.coeffs.len()].copy_from_slice(&a.coeffs);
        FqElem::raw(self.inner.tag, c)
    }

    /// The base-field element `x` represents, if it lies in `k`.
    pub fn restrict(&self, x: &FqElem) -> Option<FqElem> {
        self.inner.base_restrict(x)
    }

    /// Coefficient of `Y^j` as an element of `k`.
    pub fn component(&self, x: &FqElem, j: usize) -> FqElem {
        let s = self.inner.base.s();
        FqElem::raw(
            self.inner.base.tag(),
            x.coeffs[j * s..(j + 1) * s].iter().copied().collect(),
        )
    }

    /// Assembles `sum_j comps[j] Y^j`.
    pub fn from_components(&self, comps: &[FqElem]) -> FqElem {
        assert_eq!(comps.len(), self.inner.r);
        let c = comps.iter().flat_map(|e| e.coeffs.iter().copied()).collect();
        FqElem::raw(self.inner.tag, c)
    }

    /// `x^q`, applied as the precomputed `k`-linear map.
    pub fn frobenius(&self, x: &FqElem) -> FqElem {
        let base = &self.inner.base;
        let s = base.s();
        let p = base.p();
        let mut out: Digits = smallvec![0; self.width()];
        for (j, col) in self.inner.frob_cols.iter().enumerate() {
            let xj = &x.coeffs[j * s..(j + 1) * s];
            if xj.iter().all(|&c| c == 0) {
                continue;
            }
            for i in 0..self.inner.r {
                let prod = base.mul_digits(xj, &col.coeffs[i * s..(i + 1) * s]);
                for (o, v) in out[i * s..(i + 1) * s].iter_mut().zip(prod) {
                    *o = add_mod(*o, v, p);
                }
            }
        }
        FqElem::raw(self.inner.tag, out)
    }

    /// `sigma^i(x) = x^{q^i}`.
    pub fn frobenius_pow(&self, x: &FqElem, i: usize) -> FqElem {
        (0..i % self.inner.r).fold(x.clone(), |acc, _| self.frobenius(&acc))
    }

    fn trace_by_conjugates(&self, x: &FqElem) -> FqElem {
        let mut acc = self.zero();
        let mut cur = x.clone();
        for _ in 0..self.inner.r {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        acc
    }

    /// `Tr_{k_r/k}(x) = sum_{i<r} x^{q^i}`.
    pub fn trace(&self, x: &FqElem) -> Result<FqElem> {
        if !self.contains(x) {
            return Err(Error::CtxMismatch);
        }
        Ok(self
            .restrict(&self.trace_by_conjugates(x))
            .expect("trace is Frobenius-fixed"))
    }

    /// Same value as [`ExtCtx::trace`], via the precomputed `k`-linear form.
    pub fn trace_linear(&self, x: &FqElem) -> FqElem {
        let base = &self.inner.base;
        let s = base.s();
        let p = base.p();
        let mut acc: Digits = smallvec![0; s];
        for (j, w) in self.inner.trace_weights.iter().enumerate() {
            let prod = base.mul_digits(&x.coeffs[j * s..(j + 1) * s], &w.coeffs);
            for (a, v) in acc.iter_mut().zip(prod) {
                *a = add_mod(*a, v, p);
            }
        }
        FqElem::raw(base.tag(), acc)
    }

    /// `N_{k_r/k}(x) = x^{(q^r-1)/(q-1)}`, and `0` at `0`.
    pub fn norm(&self, x: &FqElem) -> Result<FqElem> {
        if !self.contains(x) {
            return Err(Error::CtxMismatch);
        }
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &FqElem) -> FqElem {
        let q = self.q() as u128;
        let e = (self.inner.order as u128 - 1) / (q - 1);
        let n = self.pow(x, e);
        self.restrict(&n).expect("norm lies in the base field")
    }
}

impl Field for ExtCtx {
    fn tag(&self) -> u32 {
        self.inner.tag
    }

    fn characteristic(&self) -> u64 {
        self.inner.base.p()
    }

    fn order(&self) -> u64 {
        self.inner.order
    }

    fn width(&self) -> usize {
        self.inner.base.s() * self.inner.r
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let base = &self.inner.base;
        let s = base.s();
        let r = self.inner.r;
        let p = base.p();
        let mut prod: SmallVec<[u64; 32]> = smallvec![0; (2 * r - 1) * s];
        for i in 0..r {
            let ai = &a.coeffs[i * s..(i + 1) * s];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..r {
                let bj = &b.coeffs[j * s..(j + 1) * s];
                let t = base.mul_digits(ai, bj);
                for (o, v) in prod[(i + j) * s..(i + j + 1) * s].iter_mut().zip(t) {
                    *o = add_mod(*o, v, p);
                }
            }
        }
        for top in (r..2 * r - 1).rev() {
            let c: Digits = prod[top * s..(top + 1) * s].iter().copied().collect();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..r {
                let t = base.mul_digits(&c, &self.inner.modulus[j].coeffs);
                let k = top - r + j;
                for (o, v) in prod[k * s..(k + 1) * s].iter_mut().zip(t) {
                    *o = sub_mod(*o, v, p);
                }
            }
        }
        FqElem::raw(self.inner.tag, prod[..r * s].iter().copied().collect())
    }

    fn generator(&self) -> &FqElem {
        &self.inner.generator
    }
}

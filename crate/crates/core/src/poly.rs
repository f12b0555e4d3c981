//! Dense univariate polynomials over a field context.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith;
use crate::error::{Error, Result};
use crate::ffield::{ExtCtx, Field, FieldCtx, FqElem};

/// Default cap on the field size searched by [`Poly::roots`].
pub const ROOT_SEARCH_CAP: u64 = 1_000_000;

/// `a_0 + a_1 x + ... + a_d x^d`, trailing zeros trimmed.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<FqElem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
    Neither,
}

/// Roots found by exhaustive search, each listed once with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roots {
    pub roots: Vec<FqElem>,
    pub multiplicities: Vec<usize>,
    /// The multiplicities add up to the degree.
    pub splits_completely: bool,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<FqElem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| field.contains(c)));
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &F, c: FqElem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: &F) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &F, c: FqElem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.scalar(c)).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FqElem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.field.inv(&self.leading()).unwrap())
    }

    /// Horner evaluation; the point must belong to the polynomial's field.
    pub fn eval(&self, x: &FqElem) -> Result<FqElem> {
        if !self.field.contains(x) {
            return Err(Error::CtxMismatch);
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.scalar(i as i64)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(&self.field, self.field.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(h(x))`.
    pub fn compose(&self, h: &Self) -> Self {
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * h) + &Self::constant(&self.field, c.clone());
        }
        acc
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &FqElem) -> Self {
        let lin = Self::new(&self.field, vec![c.clone(), self.field.one()]);
        self.compose(&lin)
    }

    pub fn divrem(&self, g: &Self) -> Result<(Self, Self)> {
        if g.is_zero() {
            return Err(Error::DivByZeroPoly);
        }
        let f = &self.field;
        let dg = g.deg();
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(f), self.clone()));
        }
        let lc_inv = f.inv(&g.leading()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dg];
        for top in (dg..rem.len()).rev() {
            if f.is_zero(&rem[top]) {
                continue;
            }
            let c = f.mul(&rem[top], &lc_inv);
            for (j, gj) in g.coeffs.iter().enumerate() {
                let k = top - dg + j;
                rem[k] = f.sub(&rem[k], &f.mul(&c, gj));
            }
            quot[top - dg] = c;
        }
        rem.truncate(dg);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, g: &Self) -> Result<Self> {
        Ok(self.divrem(g)?.1)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Result<Self> {
        let mut acc = Self::constant(&self.field, self.field.one()).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Rabin's test: `x^{Q^n} = x mod f` and `gcd(x^{Q^{n/l}} - x, f) = 1` for primes `l | n`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let q = self.field.order() as u128;
        let x = Self::x(&self.field);
        // frob[i] = x^{Q^i} mod f
        let mut frob = vec![x.clone()];
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, &f).unwrap();
            frob.push(next);
        }
        if frob[n] != x.rem(&f).unwrap() {
            return false;
        }
        arith::prime_factors(n as u128).into_iter().all(|l| {
            let h = &frob[n / l as usize] - &x;
            h.gcd(&f).is_constant()
        })
    }

    /// `Res(f, g) = lc(f)^{deg g} prod_{f(a)=0} g(a)`, by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> Result<FqElem> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPoly);
        }
        let f = &self.field;
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = f.one();
        loop {
            let (m, n) = (a.deg(), b.deg());
            if n == 0 {
                return Ok(f.mul(&acc, &f.pow(&b.leading(), m as u128)));
            }
            if m == 0 {
                return Ok(f.mul(&acc, &f.pow(&a.leading(), n as u128)));
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(f.zero());
            }
            // Res(a,b) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r)
            let mut factor = f.pow(&b.leading(), (m - r.deg()) as u128);
            if (m * n) % 2 == 1 {
                factor = f.neg(&factor);
            }
            acc = f.mul(&acc, &factor);
            a = b;
            b = r;
        }
    }

    /// `(-1)^{d(d-1)/2} Res(g, g') / a_d`; requires `p` not dividing `d`.
    pub fn discriminant(&self) -> Result<FqElem> {
        let d = match self.degree() {
            None | Some(0) => return Err(Error::InvalidArgument("discriminant needs degree >= 1".into())),
            Some(d) => d,
        };
        if (d as u64).is_multiple_of(self.field.characteristic()) {
            return Err(Error::DegenerateDerivative);
        }
        let f = &self.field;
        let res = self.resultant(&self.derivative())?;
        let mut disc = f.div(&res, &self.leading());
        if (d * (d - 1) / 2) % 2 == 1 {
            disc = f.neg(&disc);
        }
        Ok(disc)
    }

    /// No repeated roots over the algebraic closure; `p`-th powers (zero derivative) are not square-free.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.derivative();
        if d.is_zero() {
            return self.is_constant();
        }
        self.gcd(&d).is_constant()
    }

    /// Every root in the polynomial's own field, found by exhaustive search.
    pub fn roots(&self) -> Result<Roots> {
        self.roots_capped(ROOT_SEARCH_CAP)
    }

    pub fn roots_capped(&self, cap: u64) -> Result<Roots> {
        if self.is_zero() {
            return Err(Error::ZeroPoly);
        }
        let f = &self.field;
        if f.order() > cap {
            return Err(Error::FieldTooLarge {
                size: f.order() as u128,
                cap: cap as u128,
            });
        }
        let mut roots = Vec::new();
        let mut multiplicities = Vec::new();
        for a in f.enumerate((0, 1)) {
            if !f.is_zero(&self.eval_unchecked(&a)) {
                continue;
            }
            let lin = Self::new(f, vec![f.neg(&a), f.one()]);
            let mut rest = self.clone();
            let mut mult = 0;
            loop {
                let (q, r) = rest.divrem(&lin)?;
                if !r.is_zero() {
                    break;
                }
                mult += 1;
                rest = q;
            }
            roots.push(a);
            multiplicities.push(mult);
        }
        let total: usize = multiplicities.iter().sum();
        Ok(Roots {
            splits_completely: total == self.deg(),
            roots,
            multiplicities,
        })
    }

    pub fn parity(&self) -> Parity {
        let f = &self.field;
        let nonzero = |start: usize| self.coeffs.iter().skip(start).step_by(2).any(|c| !f.is_zero(c));
        if !nonzero(0) {
            Parity::Odd
        } else if !nonzero(1) {
            Parity::Even
        } else {
            Parity::Neither
        }
    }

    /// The polynomial of degree `< n` through `n` points with distinct abscissae.
    pub fn interpolate(field: &F, xs: &[FqElem], ys: &[FqElem]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut master = Self::constant(field, field.one());
        for x in xs {
            master = &master * &Self::new(field, vec![field.neg(x), field.one()]);
        }
        let dmaster = master.derivative();
        let mut acc = vec![field.zero(); xs.len()];
        for (x, y) in xs.iter().zip(ys) {
            if field.is_zero(y) {
                continue;
            }
            let w = field.div(y, &dmaster.eval_unchecked(x));
            let lin = Self::new(field, vec![field.neg(x), field.one()]);
            let (basis, _) = master.divrem(&lin).unwrap();
            for (a, b) in acc.iter_mut().zip(basis.coeffs.iter()) {
                *a = field.add(a, &field.mul(b, &w));
            }
        }
        Self::new(field, acc)
    }

    /// Comma-separated coefficients `a_0,...,a_d`; bracketed residue vectors when
    /// the field is not prime.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.coeffs().len() == 1 {
                    c.coeffs()[0].to_string()
                } else {
                    let inner: Vec<String> = c.coeffs().iter().map(|d| d.to_string()).collect();
                    format!("[{}]", inner.join(" "))
                }
            })
            .collect();
        parts.join(",")
    }

    /// Inverse of [`Poly::to_text`]; integers may be negative and are reduced mod `p`.
    /// Inside brackets, residues may be separated by spaces, commas or semicolons.
    pub fn parse(field: &F, text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidArgument(format!("bad polynomial text {text:?}: {msg}"));
        let mut items = Vec::new();
        let mut depth = 0;
        let mut cur = String::new();
        for ch in text.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    if depth == 0 {
                        return Err(bad("unbalanced ]"));
                    }
                    depth -= 1;
                    cur.push(ch);
                }
                ',' if depth == 0 => items.push(std::mem::take(&mut cur)),
                _ => cur.push(ch),
            }
        }
        if depth != 0 {
            return Err(bad("unbalanced ["));
        }
        items.push(cur);
        let p = field.characteristic() as i128;
        let parse_int = |s: &str| -> Result<u64> {
            let v: i128 = s.trim().parse().map_err(|_| bad(&format!("not an integer: {s:?}")))?;
            Ok(v.rem_euclid(p) as u64)
        };
        let mut coeffs = Vec::new();
        for item in items {
            let item = item.trim();
            if item.is_empty() {
                return Err(bad("empty coefficient"));
            }
            let c = if let Some(inner) = item.strip_prefix('[') {
                let inner = inner.strip_suffix(']').ok_or_else(|| bad("missing ]"))?;
                let digits = inner
                    .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(parse_int)
                    .collect::<Result<Vec<u64>>>()?;
                field.from_digits(&digits)?
            } else {
                let mut digits = vec![0; field.width()];
                digits[0] = parse_int(item)?;
                field.from_digits(&digits)?
            };
            coeffs.push(c);
        }
        Ok(Self::new(field, coeffs))
    }

    /// Applies `x -> x^{|k|^i}`-type maps (or any field map) to every coefficient.
    pub fn map_coeffs(&self, map: impl Fn(&FqElem) -> FqElem) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(map).collect())
    }
}

impl Poly<FieldCtx> {
    /// The same polynomial with coefficients embedded in `k_r`.
    pub fn lift(&self, ext: &ExtCtx) -> Poly<ExtCtx> {
        Poly::new(ext, self.coeffs.iter().map(|c| ext.embed(c)).collect())
    }

    /// Evaluation at a point of `k_r`, coefficients embedded on the fly.
    pub fn eval_ext(&self, ext: &ExtCtx, x: &FqElem) -> Result<FqElem> {
        if !ext.contains(x) || !self.coeffs.iter().all(|c| ext.base().contains(c)) {
            return Err(Error::CtxMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(ext.zero(), |acc, c| ext.add(&ext.mul(&acc, x), &ext.embed(c))))
    }
}

impl Poly<ExtCtx> {
    /// `g^sigma` for `sigma = Frob_q^i`, acting on the coefficients.
    pub fn conjugate(&self, i: usize) -> Self {
        let ext = self.field.clone();
        self.map_coeffs(|c| ext.frobenius_pow(c, i))
    }

    /// Coefficients restricted to `k`, if they all lie there.
    pub fn restrict(&self) -> Option<Poly<FieldCtx>> {
        let base = self.field.base().clone();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| self.field.restrict(c))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::new(&base, coeffs))
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.tag() == other.field.tag() && self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(&self.coeff(i), &rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

/// Determinant of a square matrix over a field, by Gaussian elimination.
pub fn determinant<F: Field>(field: &F, mut rows: Vec<Vec<FqElem>>) -> FqElem {
    let n = rows.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !field.is_zero(&rows[r][col])) else {
            return field.zero();
        };
        if piv != col {
            rows.swap(piv, col);
            det = field.neg(&det);
        }
        let pv = rows[col][col].clone();
        det = field.mul(&det, &pv);
        let inv = field.inv(&pv).unwrap();
        for r in col + 1..n {
            if field.is_zero(&rows[r][col]) {
                continue;
            }
            let factor = field.mul(&rows[r][col], &inv);
            for c in col..n {
                let t = field.mul(&factor, &rows[col][c]);
                rows[r][c] = field.sub(&rows[r][c], &t);
            }
        }
    }
    det
}

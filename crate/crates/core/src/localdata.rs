//! Truncated Laurent series in descending powers of `t` and the local data of a
//! polynomial at infinity.
//!
//! For `g` of degree `d` over `k` with `p > d`, `u(t) = r_0 t + r_1 + ...` solves
//! `u^{d-1} = -g'(t)`, `v` is its compositional inverse (`v(u(t)) = t`), and
//! `h = sum b_i t^i` is the polynomial part of `g(v(t)) + v(t) t^{d-1}`.

use crate::error::{Error, Result};
use crate::ffield::{Field, FieldCtx, FqElem};
use crate::poly::Poly;

/// Default truncation length is `d + LOCAL_MARGIN`.
pub const LOCAL_MARGIN: usize = 6;

/// `sum_{i < N} c_i t^{top - i} + O(t^{top - N})`.
///
/// An empty coefficient list is a series known to vanish down to `t^{top}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentTail {
    field: FieldCtx,
    top: i64,
    coeffs: Vec<FqElem>,
}

impl LaurentTail {
    /// Drops leading zeros; each dropped term costs one term of precision.
    pub fn new(field: &FieldCtx, top: i64, coeffs: Vec<FqElem>) -> Self {
        let lead = coeffs.iter().take_while(|c| field.is_zero(c)).count();
        LaurentTail {
            field: field.clone(),
            top: top - lead as i64,
            coeffs: coeffs[lead..].to_vec(),
        }
    }

    /// The polynomial `f` with `n` terms of relative precision (zeros padded below the constant).
    pub fn from_poly(f: &Poly<FieldCtx>, n: usize) -> Result<Self> {
        let d = f.degree().ok_or(Error::ZeroPoly)?;
        let coeffs = (0..n)
            .map(|i| if i <= d { f.coeff(d - i) } else { f.field().zero() })
            .collect();
        Ok(Self::new(f.field(), d as i64, coeffs))
    }

    /// `c t^e` with `n` terms of relative precision.
    pub fn monomial(field: &FieldCtx, c: FqElem, e: i64, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n];
        coeffs[0] = c;
        Self::new(field, e, coeffs)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// Exponent of the leading term.
    pub fn top_exp(&self) -> i64 {
        self.top
    }

    /// Relative precision `N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the first unknown term.
    pub fn floor(&self) -> i64 {
        self.top - self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.first()
    }

    /// Coefficient of `t^e`, or `None` if it lies below the precision floor.
    pub fn coeff_at(&self, e: i64) -> Option<FqElem> {
        if e <= self.floor() {
            return None;
        }
        if e > self.top {
            return Some(self.field.zero());
        }
        Some(self.coeffs[(self.top - e) as usize].clone())
    }

    /// Multiplication by `t^e` (exact).
    pub fn shift(&self, e: i64) -> Self {
        LaurentTail {
            field: self.field.clone(),
            top: self.top + e,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        let k = &self.field;
        Self::new(k, self.top, self.coeffs.iter().map(|x| k.mul(x, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = &self.field;
        let floor = self.floor().max(other.floor());
        let top = self.top.max(other.top);
        if top <= floor {
            return LaurentTail {
                field: k.clone(),
                top: floor,
                coeffs: Vec::new(),
            };
        }
        let coeffs = (floor + 1..=top)
            .rev()
            .map(|e| k.add(&self.coeff_at(e).unwrap(), &other.coeff_at(e).unwrap()))
            .collect();
        Self::new(k, top, coeffs)
    }

    pub fn neg(&self) -> Self {
        let k = &self.field;
        Self::new(k, self.top, self.coeffs.iter().map(|x| k.neg(x)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; relative precision is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let k = &self.field;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            // an empty series has top == floor, so this is the product's floor
            return LaurentTail {
                field: k.clone(),
                top: self.top + other.top,
                coeffs: Vec::new(),
            };
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|j| {
                (0..=j).fold(k.zero(), |acc, i| {
                    k.add(&acc, &k.mul(&self.coeffs[i], &other.coeffs[j - i]))
                })
            })
            .collect();
        Self::new(k, self.top + other.top, coeffs)
    }

    pub fn inverse(&self) -> Result<Self> {
        let k = &self.field;
        let c0 = self
            .leading()
            .ok_or_else(|| Error::PrecisionExhausted("inverse of a series known to be 0".into()))?;
        let c0_inv = k.inv(c0).unwrap();
        let n = self.coeffs.len();
        let mut out: Vec<FqElem> = Vec::with_capacity(n);
        out.push(c0_inv.clone());
        for j in 1..n {
            let s = (1..=j).fold(k.zero(), |acc, i| k.add(&acc, &k.mul(&self.coeffs[i], &out[j - i])));
            out.push(k.neg(&k.mul(&c0_inv, &s)));
        }
        Ok(Self::new(k, -self.top, out))
    }

    /// `self^e` for any integer `e`.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::monomial(&self.field, self.field.one(), 0, self.coeffs.len().max(1));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The `n`-th root whose leading coefficient is `root0`.
    pub fn nth_root(&self, n: u32, root0: &FqElem) -> Result<Self> {
        let k = &self.field;
        if n == 0 || (n as u64).is_multiple_of(k.p()) {
            return Err(Error::BadCharacteristic(n as u64));
        }
        let c0 = self
            .leading()
            .ok_or_else(|| Error::PrecisionExhausted("root of a series known to be 0".into()))?;
        if k.pow(root0, n as u128) != *c0 {
            return Err(Error::NoRootInField);
        }
        if self.top % n as i64 != 0 {
            return Err(Error::InvalidArgument(format!(
                "top exponent {} not divisible by {n}",
                self.top
            )));
        }
        let len = self.coeffs.len();
        let top = self.top / n as i64;
        // y_j = (c_j - [t^{top*n - j}] (y with y_j = 0)^n) / (n y_0^{n-1})
        let denom_inv = k
            .inv(&k.mul(&k.scalar(n as i64), &k.pow(root0, n as u128 - 1)))
            .unwrap();
        let mut y = vec![k.zero(); len];
        y[0] = root0.clone();
        for j in 1..len {
            let partial = LaurentTail {
                field: k.clone(),
                top,
                coeffs: y[..=j].to_vec(),
            };
            let mut pw = partial.clone();
            for _ in 1..n {
                pw = pw.mul(&partial);
            }
            y[j] = k.mul(&k.sub(&self.coeffs[j], &pw.coeffs[j]), &denom_inv);
        }
        Ok(Self::new(k, top, y))
    }

    /// `self(b(t))`; `b` must have positive top exponent.
    pub fn compose(&self, b: &Self) -> Result<Self> {
        let k = &self.field;
        if b.leading().is_none() || b.top < 1 {
            return Err(Error::InvalidArgument(
                "inner series must have a positive top exponent".into(),
            ));
        }
        let mut acc: Option<Self> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = b.powi(self.top - i as i64)?.scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        // the unknown tail O(t^floor) becomes O(b^floor)
        let tail_floor = self.floor() * b.top;
        let mut out = acc.unwrap_or_else(|| LaurentTail {
            field: k.clone(),
            top: tail_floor,
            coeffs: Vec::new(),
        });
        if out.floor() < tail_floor {
            let keep = (out.top - tail_floor).max(0) as usize;
            out.coeffs.truncate(keep);
            if out.coeffs.is_empty() {
                out.top = tail_floor;
            }
        }
        Ok(out)
    }

    /// `v` with `v(self(t)) = t`; requires top exponent 1.
    pub fn reversion(&self) -> Result<Self> {
        let k = &self.field;
        if self.top != 1 || self.leading().is_none() {
            return Err(Error::InvalidArgument(
                "reversion needs a series c t + ... with c != 0".into(),
            ));
        }
        let n = self.coeffs.len();
        let r0 = self.coeffs[0].clone();
        let r0_inv = k.inv(&r0).unwrap();
        // powers[i] = self^{1-i}
        let inv = self.inverse()?;
        let mut powers = vec![self.clone(), Self::monomial(k, k.one(), 0, n)];
        for i in 2..n {
            let next = powers[i - 1].mul(&inv);
            powers.push(next);
        }
        let mut s = vec![r0_inv];
        for j in 1..n {
            let e = 1 - j as i64;
            let sum = (0..j).fold(k.zero(), |acc, i| {
                let c = powers[i].coeff_at(e).expect("within precision");
                k.add(&acc, &k.mul(&s[i], &c))
            });
            s.push(k.neg(&k.mul(&k.pow(&r0, j as u128 - 1), &sum)));
        }
        Ok(Self::new(k, 1, s))
    }

    /// `f(self)` for a polynomial `f`.
    pub fn apply_poly(&self, f: &Poly<FieldCtx>) -> Result<Self> {
        let k = &self.field;
        let n = self.coeffs.len();
        let mut acc: Option<Self> = None;
        let mut pw = Self::monomial(k, k.one(), 0, n);
        for c in f.coeffs() {
            if !k.is_zero(c) {
                let term = pw.scale(c);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            pw = pw.mul(self);
        }
        acc.ok_or(Error::ZeroPoly)
    }
}

/// The data `s_0`, `b_0..b_d` and the branch `r_0` used to produce them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalData {
    pub s0: FqElem,
    /// `b_0, ..., b_d`.
    pub h_coeffs: Vec<FqElem>,
    /// `r_0` with `r_0^{d-1} = -d a_d`.
    pub chosen_root: FqElem,
    pub u: LaurentTail,
    pub v: LaurentTail,
}

impl LocalData {
    pub fn h(&self) -> Poly<FieldCtx> {
        Poly::new(self.u.field(), self.h_coeffs.clone())
    }
}

/// All `r_0` in `k` with `r_0^{d-1} = -d a_d`, in ascending coefficient order.
pub fn root_branches(g: &Poly<FieldCtx>) -> Result<Vec<FqElem>> {
    let k = g.field();
    let d = g.degree().ok_or(Error::ZeroPoly)?;
    if d < 2 {
        return Err(Error::InvalidArgument("local data needs degree >= 2".into()));
    }
    let target = k.neg(&k.mul(&k.scalar(d as i64), &g.leading()));
    let mut roots: Vec<FqElem> = k
        .enumerate((0, 1))
        .filter(|z| k.pow(z, d as u128 - 1) == target)
        .collect();
    roots.sort();
    Ok(roots)
}

/// Local data with the lexicographically smallest branch and `n` terms of precision.
pub fn compute_local_data(g: &Poly<FieldCtx>, n: usize) -> Result<LocalData> {
    let branch = root_branches(g)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::HypothesisFailed("-d a_d has no (d-1)-th root in k".into()))?;
    compute_local_data_with_branch(g, n, &branch)
}

/// Default precision `d + 6`.
pub fn compute_local_data_default(g: &Poly<FieldCtx>) -> Result<LocalData> {
    compute_local_data(g, g.deg() + LOCAL_MARGIN)
}

pub fn compute_local_data_with_branch(g: &Poly<FieldCtx>, n: usize, r0: &FqElem) -> Result<LocalData> {
    let k = g.field();
    let d = g.degree().ok_or(Error::ZeroPoly)?;
    if d < 2 {
        return Err(Error::InvalidArgument("local data needs degree >= 2".into()));
    }
    if k.p() <= d as u64 {
        return Err(Error::HypothesisFailed(format!(
            "p = {} does not exceed d = {d}",
            k.p()
        )));
    }
    if n < d + 1 {
        return Err(Error::PrecisionExhausted(format!(
            "{n} terms cannot reach t^0 from t^{d}"
        )));
    }
    let minus_dg = LaurentTail::from_poly(&g.derivative(), n)?.neg();
    let u = minus_dg.nth_root(d as u32 - 1, r0).map_err(|e| match e {
        Error::NoRootInField => Error::HypothesisFailed("chosen branch is not a (d-1)-th root of -d a_d".into()),
        other => other,
    })?;
    let v = u.reversion()?;
    let series = v.apply_poly(g)?.add(&v.shift(d as i64 - 1));
    let h_coeffs = (0..=d as i64)
        .map(|e| {
            series
                .coeff_at(e)
                .ok_or_else(|| Error::PrecisionExhausted(format!("coefficient of t^{e} is below the precision floor")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalData {
        s0: v.coeffs[0].clone(),
        h_coeffs,
        chosen_root: r0.clone(),
        u,
        v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    #[test]
    fn square_over_f7_by_hand() {
        let k = make_field(7, 1, 0).unwrap();
        let g = Poly::from_ints(&k, &[0, 0, 1]);
        let ld = compute_local_data(&g, 8).unwrap();
        assert_eq!(ld.chosen_root, k.from_u64(5));
        assert_eq!(ld.u.coeff_at(1).unwrap(), k.from_u64(5));
        assert_eq!(ld.u.coeff_at(0).unwrap(), k.zero());
        assert_eq!(ld.v.coeff_at(1).unwrap(), k.from_u64(3));
        assert_eq!(ld.s0, k.from_u64(3));
        assert_eq!(ld.h_coeffs, vec![k.zero(), k.zero(), k.from_u64(5)]);
    }

    #[test]
    fn reversion_of_linear_series() {
        let k = make_field(11, 1, 0).unwrap();
        let c = k.from_u64(4);
        let u = LaurentTail::monomial(&k, c.clone(), 1, 6);
        let v = u.reversion().unwrap();
        assert_eq!(v.leading().unwrap(), &k.inv(&c).unwrap());
        assert!(v.coeffs()[1..].iter().all(|x| k.is_zero(x)));
    }

    #[test]
    fn nth_root_of_power() {
        let k = make_field(13, 1, 0).unwrap();
        let t3 = LaurentTail::monomial(&k, k.one(), 3, 5);
        let y = t3.nth_root(3, &k.one()).unwrap();
        assert_eq!(y, LaurentTail::monomial(&k, k.one(), 1, 5));

        let k5 = make_field(5, 1, 0).unwrap();
        let s = LaurentTail::monomial(&k5, k5.one(), 5, 3);
        assert_eq!(s.nth_root(5, &k5.one()), Err(Error::BadCharacteristic(5)));
        let two = LaurentTail::monomial(&k5, k5.from_u64(2), 0, 3);
        assert_eq!(two.nth_root(2, &k5.one()), Err(Error::NoRootInField));
    }

    #[test]
    fn series_identities_hold() {
        let k = make_field(13, 1, 0).unwrap();
        let g = Poly::from_ints(&k, &[5, 2, 7, 0, 3]);
        let ld = compute_local_data(&g, 12).unwrap();
        // u^{d-1} = -g'
        let lhs = ld.u.powi(3).unwrap();
        let rhs = LaurentTail::from_poly(&g.derivative(), 12).unwrap().neg();
        for e in lhs.floor() + 1..=3 {
            assert_eq!(lhs.coeff_at(e), rhs.coeff_at(e), "t^{e}");
        }
        // v(u(t)) = t and u(v(t)) = t to precision
        for comp in [ld.v.compose(&ld.u).unwrap(), ld.u.compose(&ld.v).unwrap()] {
            assert_eq!(comp.coeff_at(1).unwrap(), k.one());
            for e in comp.floor() + 1..1 {
                assert!(k.is_zero(&comp.coeff_at(e).unwrap()), "t^{e}");
            }
        }
    }

    #[test]
    fn leading_identities_on_a_cubic() {
        let k = make_field(11, 1, 0).unwrap();
        // -3 is not a square mod 11, so a monic cubic never meets the root hypothesis
        assert!(compute_local_data_default(&Poly::from_ints(&k, &[4, 9, 0, 1])).is_err());
        let g = Poly::from_ints(&k, &[4, 9, 0, 2]);
        let ld = compute_local_data_default(&g).unwrap();
        let d = k.scalar(3);
        let ad = g.leading();
        assert_eq!(k.mul(&k.mul(&k.pow(&ld.s0, 2), &d), &ad), k.scalar(-1));
        assert!(k.is_zero(&ld.h_coeffs[2]));
    }

    #[test]
    fn precision_is_checked() {
        let k = make_field(7, 1, 0).unwrap();
        let g = Poly::from_ints(&k, &[1, 2, 0, 1]);
        assert!(matches!(compute_local_data(&g, 3), Err(Error::PrecisionExhausted(_))));
        let k3 = make_field(3, 1, 0).unwrap();
        let g3 = Poly::from_ints(&k3, &[1, 0, 0, 1]);
        assert!(matches!(compute_local_data(&g3, 9), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn b0_is_independent_of_branch() {
        let k = make_field(13, 1, 0).unwrap();
        let g = Poly::from_ints(&k, &[5, 1, 0, 0, 3]);
        let branches = root_branches(&g).unwrap();
        assert_eq!(branches.len(), 3);
        let b0: Vec<FqElem> = branches
            .iter()
            .map(|r0| compute_local_data_with_branch(&g, 12, r0).unwrap().h_coeffs[0].clone())
            .collect();
        assert!(b0.iter().all(|b| *b == b0[0]));
    }
}

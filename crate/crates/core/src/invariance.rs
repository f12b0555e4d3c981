//! Translation and homothety invariance, Artin-Schreier degree reduction and the
//! m-th power test.

use num_traits::{Float, FloatConst};

use crate::charsum::AdditiveChar;
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldCtx, FqElem};
use crate::poly::Poly;

/// One rewriting step `c x^removed -> coeff x^added`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsStep {
    pub removed: usize,
    pub added: usize,
    pub coeff: FqElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsReduction {
    pub reduced: Poly<FieldCtx>,
    /// Degree of `reduced`; `0` when it is constant.
    pub d_prime: usize,
    pub steps: Vec<AsStep>,
}

/// `g` with `f(x) = g(x^q - x)`, built from the remainders of repeated division by `x^q - x`.
pub fn decompose_translation(f: &Poly<FieldCtx>) -> Result<Poly<FieldCtx>> {
    let k = f.field();
    let xq = &Poly::monomial(k, k.one(), k.q() as usize) - &Poly::x(k);
    let mut coeffs = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (quot, rem) = cur.divrem(&xq)?;
        if !rem.is_constant() {
            return Err(Error::NotInvariant(format!(
                "remainder of degree {} modulo x^q - x",
                rem.deg()
            )));
        }
        coeffs.push(rem.coeff(0));
        cur = quot;
    }
    Ok(Poly::new(k, coeffs))
}

/// `g` with `f(x) = g(x^{(q-1)/e})`, for `e | q - 1`.
pub fn decompose_homothety<F: Field>(f: &Poly<F>, q: u64, e: u64) -> Result<Poly<F>> {
    if e == 0 || !(q - 1).is_multiple_of(e) {
        return Err(Error::InvalidArgument(format!("{e} does not divide q-1 = {}", q - 1)));
    }
    let n = ((q - 1) / e) as usize;
    let field = f.field();
    if let Some((i, _)) = f
        .coeffs()
        .iter()
        .enumerate()
        .find(|(i, c)| i % n != 0 && !field.is_zero(c))
    {
        return Err(Error::NotInvariant(format!(
            "monomial x^{i} with exponent not divisible by {n}"
        )));
    }
    Ok(Poly::new(field, f.coeffs().iter().step_by(n).cloned().collect()))
}

/// The `a` in `k` with `psi(t^p) = psi(a t)` for all `t`, found by search.
///
/// Both sides are additive in `t`, so agreement on an `F_p`-basis of `k` suffices.
pub fn frobenius_twist<T: Float + FloatConst>(psi: &AdditiveChar<T>) -> FqElem {
    let k = psi.field();
    let basis: Vec<FqElem> = (0..k.s())
        .map(|i| {
            let mut d = vec![0; k.s()];
            d[i] = 1;
            k.from_digits(&d).unwrap()
        })
        .collect();
    let targets: Vec<u64> = basis.iter().map(|t| psi.phase(&k.frobenius(t))).collect();
    k.enumerate((0, 1))
        .find(|a| {
            basis
                .iter()
                .zip(&targets)
                .all(|(t, &want)| psi.phase(&k.mul(a, t)) == want)
        })
        .expect("an additive character of k is a twist of every other")
}

/// Rewrites `a_d x^d` with `d = e p` as `a b x^e`, `b^p = a_d`, until the degree is prime to `p`.
pub fn as_reduce<T: Float + FloatConst>(f: &Poly<FieldCtx>, psi: &AdditiveChar<T>) -> Result<AsReduction> {
    let k = f.field();
    if k.tag() != psi.field().tag() {
        return Err(Error::CtxMismatch);
    }
    let p = k.p() as usize;
    let a = frobenius_twist(psi);
    let mut cur = f.clone();
    let mut steps = Vec::new();
    while let Some(d) = cur.degree().filter(|&d| d > 0 && d % p == 0) {
        let e = d / p;
        let b = k.pth_root(&cur.leading());
        let coeff = k.mul(&a, &b);
        let mut c = cur.into_coeffs();
        c[d] = k.zero();
        c[e] = k.add(&c[e], &coeff);
        cur = Poly::new(k, c);
        steps.push(AsStep {
            removed: d,
            added: e,
            coeff,
        });
    }
    Ok(AsReduction {
        d_prime: cur.deg(),
        reduced: cur,
        steps,
    })
}

/// Multiplicities of the distinct roots of `f` over the closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootProfile {
    /// Multiplicities of the nonzero roots.
    pub nonzero: Vec<usize>,
    /// Multiplicity of `0` as a root (`0` if it is not one).
    pub at_zero: usize,
}

impl RootProfile {
    pub fn distinct(&self) -> usize {
        self.nonzero.len() + usize::from(self.at_zero > 0)
    }

    pub fn is_mth_power(&self, m: u64) -> bool {
        self.nonzero
            .iter()
            .chain(std::iter::once(&self.at_zero))
            .all(|&mu| (mu as u64).is_multiple_of(m))
    }
}

/// Root multiplicities over the closure, read off a square-free factorization.
pub fn root_profile(f: &Poly<FieldCtx>) -> Result<RootProfile> {
    if f.is_zero() {
        return Err(Error::ZeroPoly);
    }
    let k = f.field();
    let at_zero = f.coeffs().iter().take_while(|c| k.is_zero(c)).count();
    let rest = Poly::new(k, f.coeffs()[at_zero..].to_vec());
    let mut nonzero = Vec::new();
    for (part, mu) in squarefree_parts(&rest)? {
        nonzero.extend(std::iter::repeat_n(mu, part.deg()));
    }
    nonzero.sort_unstable();
    Ok(RootProfile { nonzero, at_zero })
}

/// `f = c prod P_i^{m_i}` with the `P_i` square-free, pairwise coprime and nonconstant.
pub fn squarefree_parts(f: &Poly<FieldCtx>) -> Result<Vec<(Poly<FieldCtx>, usize)>> {
    let k = f.field();
    let p = k.p() as usize;
    let mut out = Vec::new();
    let mut f = f.monic();
    let mut scale = 1;
    while !f.is_constant() {
        let df = f.derivative();
        let mut c = if df.is_zero() { f.clone() } else { f.gcd(&df).monic() };
        let mut w = f.divrem(&c)?.0;
        let mut i = 1;
        while !w.is_constant() {
            let y = w.gcd(&c).monic();
            let z = w.divrem(&y)?.0;
            if !z.is_constant() {
                out.push((z.monic(), i * scale));
            }
            i += 1;
            c = c.divrem(&y)?.0;
            w = y;
        }
        // what is left is a p-th power
        let coeffs = c.coeffs().iter().step_by(p).map(|a| k.pth_root(a)).collect();
        f = Poly::new(k, coeffs);
        scale *= p;
    }
    Ok(out)
}

/// Whether `f = c h^m`, and the number of distinct roots of `f` over the closure.
pub fn mth_power_test(f: &Poly<FieldCtx>, m: u64) -> Result<(bool, usize)> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let profile = root_profile(f)?;
    Ok((profile.is_mth_power(m), profile.distinct()))
}

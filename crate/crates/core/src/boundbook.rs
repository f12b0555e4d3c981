//! Bound constants, main terms, the resultant sequence `g_n` and hypothesis gates.

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::binomial;
use crate::charsum::{gauss_sum, AdditiveChar, MultChar};
use crate::error::{Error, Result};
use crate::ffield::{make_ext, Field, FieldCtx, FqElem};
use crate::invariance::{as_reduce, root_profile};
use crate::localdata::{compute_local_data_default, LocalData};
use crate::poly::{Parity, Poly};
use crate::CharValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    WeilAdd,
    WeilMult,
    TransAdd,
    TransAddExc,
    TransAddSp,
    TransAddSpExc,
    TransMult,
    TransMultExc,
    HomAdd,
    HomMult,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::WeilAdd => "WeilAdd",
            BoundKind::WeilMult => "WeilMult",
            BoundKind::TransAdd => "TransAdd",
            BoundKind::TransAddExc => "TransAddExc",
            BoundKind::TransAddSp => "TransAddSp",
            BoundKind::TransAddSpExc => "TransAddSpExc",
            BoundKind::TransMult => "TransMult",
            BoundKind::TransMultExc => "TransMultExc",
            BoundKind::HomAdd => "HomAdd",
            BoundKind::HomMult => "HomMult",
        }
    }

    pub fn is_exceptional(self) -> bool {
        matches!(
            self,
            BoundKind::TransAddExc | BoundKind::TransAddSpExc | BoundKind::TransMultExc
        )
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Hypothesis {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Hypothesis {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub bound: f64,
    /// Present only for exceptional kinds.
    pub main_term: Option<CharValue>,
    /// The main term with the opposite leading sign; set for `TransAddExc` only.
    pub alt_main_term: Option<CharValue>,
    /// Whether the inequality is strict.
    pub strict: bool,
    pub hypotheses: Vec<Hypothesis>,
    pub applicable: bool,
}

impl BoundReport {
    fn new(kind: BoundKind, bound: f64, hypotheses: Vec<Hypothesis>) -> Self {
        let applicable = hypotheses.iter().all(|h| h.pass);
        BoundReport {
            kind,
            bound,
            main_term: None,
            alt_main_term: None,
            strict: false,
            hypotheses,
            applicable,
        }
    }

    /// Whether `value` meets the bound, with `tol` slack.
    pub fn holds(&self, value: CharValue, tol: f64) -> bool {
        let centered = |m: Option<CharValue>| (value - m.unwrap_or_default()).norm();
        let ok = |lhs: f64| {
            if self.strict {
                lhs < self.bound + tol
            } else {
                lhs <= self.bound + tol
            }
        };
        ok(centered(self.main_term)) || (self.alt_main_term.is_some() && ok(centered(self.alt_main_term)))
    }
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("BoundReport", 7)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("bound", &self.bound)?;
        st.serialize_field("main_term_re", &self.main_term.map(|z| z.re))?;
        st.serialize_field("main_term_im", &self.main_term.map(|z| z.im))?;
        st.serialize_field("strict", &self.strict)?;
        st.serialize_field("hypotheses", &self.hypotheses)?;
        st.serialize_field("applicable", &self.applicable)?;
        st.end()
    }
}

/// `(d' - 1) q^{r/2}`.
pub fn weil_additive(d_prime: usize, q: u64, r: u32) -> Result<f64> {
    if d_prime == 0 {
        return Err(Error::DegenerateReduction);
    }
    Ok((d_prime as f64 - 1.0) * (q as f64).powf(r as f64 / 2.0))
}

/// `(e - 1) q^{r/2}`; `is_mth_power` comes from [`crate::invariance::mth_power_test`].
pub fn weil_multiplicative(e_roots: usize, is_mth_power: bool, q: u64, r: u32) -> Result<f64> {
    if is_mth_power {
        return Err(Error::MthPower);
    }
    Ok((e_roots as f64 - 1.0).max(0.0) * (q as f64).powf(r as f64 / 2.0))
}

fn binom(n: i64, k: i64) -> u128 {
    binomial(n, k)
}

/// The additive constant `C_{d,r}`.
pub fn c_add(d: u32, r: u32) -> Ratio<u128> {
    assert!(d >= 2, "c_add needs d >= 2");
    let (d, r) = (d as i64, r as i64);
    let num: u128 = (0..d)
        .map(|i| (i - 1).unsigned_abs() as u128 * binom(d - 2 + r - i, r - i) * binom(d - 1, i))
        .sum();
    Ratio::new(num, (d - 1) as u128)
}

/// The multiplicative constant.
pub fn c_mult(d: u32, r: u32) -> u128 {
    let (d, r) = (d as i64, r as i64);
    (0..=r)
        .map(|i| {
            let big = binom(d - 1 + r - i, r - i) * binom(d, i);
            let small = binom(d - 2 + r - i, r - i) * binom(d - 1, i);
            (i - 1).unsigned_abs() as u128 * (big - small)
        })
        .sum()
}

fn ratio_f64(x: Ratio<u128>) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `g_n`, with `g_1 = g` and `g_{n+1}(x) = Res_t(g_n(t), g(x - t))`.
///
/// Each step evaluates at `deg g_{n+1} + 1` points of an extension large enough to hold
/// them and interpolates.
pub fn g_sequence(g: &Poly<FieldCtx>, n: u32) -> Result<Poly<FieldCtx>> {
    if n == 0 {
        return Err(Error::InvalidArgument("g_n is defined for n >= 1".into()));
    }
    if g.is_constant() {
        return Err(Error::InvalidArgument("g_n needs deg g >= 1".into()));
    }
    let k = g.field();
    let mut cur = g.clone();
    for _ in 1..n {
        let npts = (cur.deg() * g.deg() + 1) as u64;
        cur = if npts <= k.q() {
            resultant_step(k, &cur, g, npts)?
        } else {
            let mut r = 2;
            while (k.q() as u128).pow(r) < npts as u128 {
                r += 1;
            }
            let ext = make_ext(k, r, 0)?;
            resultant_step(&ext, &cur.lift(&ext), &g.lift(&ext), npts)?
                .restrict()
                .expect("coefficients of g_n lie in k")
        };
    }
    Ok(cur)
}

fn resultant_step<F: Field>(field: &F, gn: &Poly<F>, g: &Poly<F>, npts: u64) -> Result<Poly<F>> {
    let xs: Vec<FqElem> = (0..npts).map(|i| field.element(i)).collect();
    let ys = xs
        .iter()
        .map(|x0| gn.resultant(&g.compose(&Poly::new(field, vec![x0.clone(), field.scalar(-1)]))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::interpolate(field, &xs, &ys))
}

/// Which leading sign to use in the special linear main term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlSign {
    /// `(-1)^{d-1}`.
    DMinusOne,
    /// `(-1)^d`.
    D,
}

fn check_sl_cell(g: &Poly<FieldCtx>, r: u32) -> Result<usize> {
    let d = g.deg();
    if d < 3 || !g.field().is_zero(&g.coeff(d - 1)) || r as usize != d - 1 {
        return Err(Error::NotExceptionalCell(format!(
            "need a_(d-1) = 0 and r = d-1, got d = {d}, r = {r}"
        )));
    }
    Ok(d)
}

/// `(+-1) q rho^d(-1) (psi(b_0) rho(d(d-1)a_d/2) g(rho, psi))^{d-1}`.
pub fn main_term_add_sl(
    g: &Poly<FieldCtx>,
    local: &LocalData,
    psi: &AdditiveChar,
    rho: &MultChar,
    r: u32,
    sign: SlSign,
) -> Result<CharValue> {
    let d = check_sl_cell(g, r)?;
    let k = g.field();
    let q = k.q() as f64;
    let half = k.div(&k.scalar((d * (d - 1)) as i64), &k.scalar(2));
    let inner = psi.eval(&local.h_coeffs[0]) * rho.eval(&k.mul(&half, &g.leading())) * gauss_sum(rho, psi);
    let lead = match sign {
        SlSign::DMinusOne => d - 1,
        SlSign::D => d,
    };
    let sgn = if lead % 2 == 0 { 1.0 } else { -1.0 };
    let rho_minus_one = (rho.at_minus_one() as f64).powi(d as i32);
    Ok(inner.powi(d as i32 - 1) * (sgn * q * rho_minus_one))
}

/// `beta` with `g(x) + beta` odd, if one exists.
pub fn odd_constant_shift(g: &Poly<FieldCtx>) -> Option<FqElem> {
    let k = g.field();
    let beta = k.neg(&g.coeff(0));
    let odd = (2..=g.deg()).step_by(2).all(|i| k.is_zero(&g.coeff(i)));
    odd.then_some(beta)
}

/// `(-1)^r psi(-beta)^r q^{r/2+1}` for `r` even.
pub fn main_term_add_sp(beta: &FqElem, psi: &AdditiveChar, r: u32) -> Result<CharValue> {
    if !r.is_multiple_of(2) {
        return Err(Error::NotExceptionalCell(format!("r = {r} is odd")));
    }
    let k = psi.field();
    let q = k.q() as f64;
    Ok(psi.eval(&k.neg(beta)).powi(r as i32) * q.powf(r as f64 / 2.0 + 1.0))
}

/// Checks the exceptional multiplicative cell `r = d`, `chi^d` trivial, `a_{d-1} = 0`.
fn check_mult_cell(g: &Poly<FieldCtx>, chi: &MultChar, r: u32) -> Result<usize> {
    let d = g.deg();
    let k = g.field();
    if d < 2 || r as usize != d || !chi.pow(d as u64).is_trivial() || !k.is_zero(&g.coeff(d - 1)) {
        return Err(Error::NotExceptionalCell(format!(
            "need r = d, chi^d trivial, a_(d-1) = 0; d = {d}, r = {r}"
        )));
    }
    Ok(d)
}

/// `(-1)^d q chi((-1)^{d(d-1)/2} a_d^{-(d-2)} disc g) g(chi, psi)^d`, when every root of `g` is in `k`.
pub fn main_term_mult(g: &Poly<FieldCtx>, chi: &MultChar, psi: &AdditiveChar, r: u32) -> Result<CharValue> {
    let d = check_mult_cell(g, chi, r)?;
    let k = g.field();
    if !g.roots()?.splits_completely {
        return Err(Error::RootsNotInBaseField);
    }
    let sign = if (d * (d - 1) / 2) % 2 == 0 {
        k.one()
    } else {
        k.scalar(-1)
    };
    let ad_inv = k.inv(&g.leading()).ok_or(Error::ZeroElement)?;
    let arg = k.mul(&k.mul(&sign, &k.pow(&ad_inv, d as u128 - 2)), &g.discriminant()?);
    let beta = chi.eval(&arg) * gauss_sum(chi, psi).powi(d as i32);
    let sgn = if d % 2 == 0 { 1.0 } else { -1.0 };
    Ok(beta * (sgn * k.q() as f64))
}

/// Full-sum and per-fiber homothety bounds `(r d^{r-1} (q-1) q^{(r-1)/2}, r d^{r-1} q^{(r-1)/2})`.
pub fn homothety_bound(d: usize, q: u64, r: u32) -> (f64, f64) {
    let fiber = r as f64 * (d as f64).powi(r as i32 - 1) * (q as f64).powf((r as f64 - 1.0) / 2.0);
    (fiber * (q as f64 - 1.0), fiber)
}

/// Everything a gate might need; unused fields are ignored.
#[derive(Debug, Clone, Copy)]
pub struct GateInput<'a> {
    pub g: &'a Poly<FieldCtx>,
    pub psi: Option<&'a AdditiveChar>,
    pub chi: Option<&'a MultChar>,
    pub r: u32,
    /// Index of the homothety subgroup.
    pub e: Option<u64>,
}

fn psi_gate(input: &GateInput) -> Hypothesis {
    let pass = input.psi.is_some_and(|psi| !psi.is_trivial());
    Hypothesis::new(
        "psi nontrivial",
        pass,
        if input.psi.is_none() {
            "no additive character"
        } else {
            ""
        },
    )
}

fn chi_gate(input: &GateInput) -> Hypothesis {
    let pass = input.chi.is_some_and(|chi| !chi.is_trivial());
    let detail = input.chi.map_or("no multiplicative character".to_string(), |c| {
        format!("order {}", c.order())
    });
    Hypothesis::new("chi nontrivial", pass, detail)
}

fn a_prev_zero(g: &Poly<FieldCtx>) -> bool {
    let d = g.deg();
    d >= 1 && g.field().is_zero(&g.coeff(d - 1))
}

/// `g(x + c)` with `c = -a_{d-1} / (d a_d)`, the translate killing `x^{d-1}`.
pub fn depressed(g: &Poly<FieldCtx>) -> Option<Poly<FieldCtx>> {
    let k = g.field();
    let d = g.deg();
    let da = k.mul(&k.scalar(d as i64), &g.leading());
    let c = k.neg(&k.mul(&g.coeff(d.checked_sub(1)?), &k.inv(&da)?));
    Some(g.shift(&c))
}

/// Whether some `g(x + c) + delta` is odd.
pub fn has_odd_translate(g: &Poly<FieldCtx>) -> bool {
    let d = g.deg();
    if d.is_multiple_of(2) {
        return false;
    }
    depressed(g).is_some_and(|h| odd_constant_shift(&h).is_some())
}

fn trans_add_common(input: &GateInput) -> Vec<Hypothesis> {
    let g = input.g;
    let p = g.field().p();
    let d = g.deg() as u64;
    vec![
        psi_gate(input),
        Hypothesis::new("d >= 3", d >= 3, format!("d = {d}")),
        Hypothesis::new("p > d", p > d, format!("p = {p}, d = {d}")),
        Hypothesis::new(
            "p > 2d-1",
            p + 1 > 2 * d,
            format!("non-finite monodromy gated on p = {p} > {}", (2 * d).saturating_sub(1)),
        ),
    ]
}

/// Whether `z^{2(d-1)} = -d a_d` has `2(d-1)` distinct solutions in `k`.
pub fn has_all_sl_roots(g: &Poly<FieldCtx>) -> bool {
    let k = g.field();
    let d = g.deg();
    if d < 2 {
        return false;
    }
    let n = 2 * (d - 1);
    let target = k.neg(&k.mul(&k.scalar(d as i64), &g.leading()));
    k.enumerate((0, 1)).filter(|z| k.pow(z, n as u128) == target).count() == n
}

fn sl_cell(g: &Poly<FieldCtx>, r: u32) -> bool {
    a_prev_zero(g) && r as usize + 1 == g.deg()
}

fn sp_cell(g: &Poly<FieldCtx>, r: u32) -> bool {
    a_prev_zero(g) && (r as usize) < g.deg() && r.is_multiple_of(2)
}

fn mult_cell(g: &Poly<FieldCtx>, chi: Option<&MultChar>, r: u32) -> bool {
    let d = g.deg();
    a_prev_zero(g) && r as usize == d && chi.is_some_and(|c| c.pow(d as u64).is_trivial())
}

/// `p > 2d+1` and the depressed translate `h` is not odd (`d` odd) or even (`d` even).
fn final_gate(g: &Poly<FieldCtx>) -> (bool, bool, String) {
    let p = g.field().p();
    let d = g.deg();
    let big_p = p > 2 * d as u64 + 1;
    let parity = depressed(g).map(|h| h.parity());
    let bad = if d % 2 == 1 { Parity::Odd } else { Parity::Even };
    let shape = parity.is_some_and(|par| par != bad);
    (
        big_p,
        shape,
        format!("p = {p}, d = {d}, depressed translate {parity:?}"),
    )
}

fn trans_mult_common(input: &GateInput) -> Vec<Hypothesis> {
    let g = input.g;
    let p = g.field().p();
    let d = g.deg() as u64;
    vec![
        chi_gate(input),
        Hypothesis::new("d >= 1", d >= 1, format!("d = {d}")),
        Hypothesis::new("g square-free", g.is_squarefree(), ""),
        Hypothesis::new("p does not divide d", !d.is_multiple_of(p), format!("p = {p}, d = {d}")),
    ]
}

/// `m ∤ r` or `g_r(0) != 0`, computing `g_r(0) = Res_t(g_{r-1}(t), g(-t))` only when needed.
fn estimate_gate(g: &Poly<FieldCtx>, m: u64, r: u32) -> (bool, String) {
    if !(r as u64).is_multiple_of(m) {
        return (true, format!("m = {m} does not divide r = {r}"));
    }
    let k = g.field();
    let value = if r == 1 {
        Ok(g.coeff(0))
    } else {
        g_sequence(g, r - 1).and_then(|prev| prev.resultant(&g.compose(&Poly::new(k, vec![k.zero(), k.scalar(-1)]))))
    };
    match value {
        Ok(v) => (
            !k.is_zero(&v),
            format!("m = {m} divides r = {r}; g_r(0) = {:?}", v.coeffs()),
        ),
        Err(e) => (false, format!("g_r(0) unavailable: {e}")),
    }
}

/// Splits `g = x^a g0` with `g0(0) != 0`.
pub fn split_zero_root(g: &Poly<FieldCtx>) -> (usize, Poly<FieldCtx>) {
    let k = g.field();
    let a = g.coeffs().iter().take_while(|c| k.is_zero(c)).count();
    (a, Poly::new(k, g.coeffs()[a..].to_vec()))
}

/// Evaluates every hypothesis of `kind`; never fails.
pub fn hypothesis_gate(kind: BoundKind, input: &GateInput) -> Vec<Hypothesis> {
    let g = input.g;
    let k = g.field();
    let p = k.p();
    let r = input.r;
    match kind {
        BoundKind::WeilAdd => {
            let mut hs = vec![psi_gate(input)];
            let red = input.psi.map(|psi| as_reduce(g, psi));
            let (pass, detail) = match red {
                Some(Ok(red)) => (red.d_prime >= 1, format!("d' = {}", red.d_prime)),
                Some(Err(e)) => (false, e.to_string()),
                None => (false, "no additive character".into()),
            };
            hs.push(Hypothesis::new("d' >= 1", pass, detail));
            hs
        }
        BoundKind::WeilMult => {
            let mut hs = vec![chi_gate(input)];
            let (pass, detail) = match (input.chi, root_profile(g)) {
                (Some(chi), Ok(prof)) => (
                    !prof.is_mth_power(chi.order()),
                    format!("{} distinct roots", prof.distinct()),
                ),
                (None, _) => (false, "no multiplicative character".into()),
                (_, Err(e)) => (false, e.to_string()),
            };
            hs.push(Hypothesis::new("f not an m-th power", pass, detail));
            hs
        }
        BoundKind::TransAdd | BoundKind::TransAddExc => {
            let mut hs = trans_add_common(input);
            hs.push(Hypothesis::new("no odd translate", !has_odd_translate(g), ""));
            let cell = sl_cell(g, r);
            if kind == BoundKind::TransAdd {
                hs.push(Hypothesis::new("outside exceptional cell", !cell, format!("r = {r}")));
            } else {
                hs.push(Hypothesis::new(
                    "exceptional cell a_(d-1) = 0, r = d-1",
                    cell,
                    format!("r = {r}"),
                ));
                hs.push(Hypothesis::new(
                    "k contains all 2(d-1)-th roots of -d a_d",
                    has_all_sl_roots(g),
                    "",
                ));
            }
            hs
        }
        BoundKind::TransAddSp | BoundKind::TransAddSpExc => {
            let mut hs = trans_add_common(input);
            hs.push(Hypothesis::new("odd translate exists", has_odd_translate(g), ""));
            let cell = sp_cell(g, r);
            if kind == BoundKind::TransAddSp {
                hs.push(Hypothesis::new("outside exceptional cell", !cell, format!("r = {r}")));
            } else {
                hs.push(Hypothesis::new(
                    "exceptional cell a_(d-1) = 0, r <= d-1 even",
                    cell,
                    format!("r = {r}"),
                ));
            }
            hs
        }
        BoundKind::TransMult => {
            let mut hs = trans_mult_common(input);
            let m = input.chi.map_or(1, |c| c.order());
            let (est, est_detail) = estimate_gate(g, m, r);
            let (big_p, shape, fin_detail) = final_gate(g);
            hs.push(Hypothesis::new(
                "m does not divide r or g_r(0) != 0, else p > 2d+1 with h not odd/even",
                est || (big_p && shape),
                format!("{est_detail}; {fin_detail}"),
            ));
            hs.push(Hypothesis::new(
                "outside exceptional cell",
                !mult_cell(g, input.chi, r),
                format!("r = {r}"),
            ));
            hs
        }
        BoundKind::TransMultExc => {
            let mut hs = trans_mult_common(input);
            let (big_p, shape, detail) = final_gate(g);
            hs.push(Hypothesis::new("p > 2d+1", big_p, detail.clone()));
            hs.push(Hypothesis::new("h not odd (d odd) or even (d even)", shape, detail));
            hs.push(Hypothesis::new(
                "exceptional cell r = d, chi^d trivial, a_(d-1) = 0",
                mult_cell(g, input.chi, r),
                format!("r = {r}"),
            ));
            hs
        }
        BoundKind::HomAdd | BoundKind::HomMult => {
            let mut hs = vec![if kind == BoundKind::HomAdd {
                psi_gate(input)
            } else {
                chi_gate(input)
            }];
            let q = k.q();
            let e_ok = input.e.is_some_and(|e| e > 0 && (q - 1).is_multiple_of(e));
            hs.push(Hypothesis::new(
                "e divides q-1",
                e_ok,
                format!("e = {:?}, q = {q}", input.e),
            ));
            let core = if kind == BoundKind::HomAdd {
                g.clone()
            } else {
                split_zero_root(g).1
            };
            let d = core.deg() as u64;
            hs.push(Hypothesis::new("d >= 1", d >= 1, format!("d = {d}")));
            hs.push(Hypothesis::new(
                "p does not divide d",
                !d.is_multiple_of(p),
                format!("p = {p}, d = {d}"),
            ));
            if kind == BoundKind::HomMult {
                hs.push(Hypothesis::new("g square-free", core.is_squarefree(), ""));
                let nontriv = input.chi.is_some_and(|c| !c.pow(d).is_trivial());
                hs.push(Hypothesis::new("chi^d nontrivial", nontriv, format!("d = {d}")));
            }
            hs
        }
    }
}

/// The translation-invariant additive kind for `g` at `r`.
pub fn trans_add_kind(g: &Poly<FieldCtx>, r: u32) -> BoundKind {
    match (has_odd_translate(g), sl_cell(g, r), sp_cell(g, r)) {
        (false, true, _) => BoundKind::TransAddExc,
        (false, false, _) => BoundKind::TransAdd,
        (true, _, true) => BoundKind::TransAddSpExc,
        (true, _, false) => BoundKind::TransAddSp,
    }
}

/// The translation-invariant multiplicative kind for `g` at `r`.
pub fn trans_mult_kind(g: &Poly<FieldCtx>, chi: &MultChar, r: u32) -> BoundKind {
    if mult_cell(g, Some(chi), r) {
        BoundKind::TransMultExc
    } else {
        BoundKind::TransMult
    }
}

/// The report for `kind`: gates, bound and, in exceptional cells, the main term.
///
/// Bounds for the composed kinds refer to `f = g(x^q - x)` or `f = g(x^{(q-1)/e})`;
/// the homothety bound is for the sum over `k_r^*`.
pub fn report(kind: BoundKind, input: &GateInput) -> Result<BoundReport> {
    let g = input.g;
    let k = g.field();
    let q = k.q();
    let r = input.r;
    let hyps = hypothesis_gate(kind, input);
    let mut rep = BoundReport::new(kind, 0.0, hyps);
    let top = (q as f64).powf((r as f64 + 1.0) / 2.0);
    match kind {
        BoundKind::WeilAdd => {
            if let Some(psi) = input.psi {
                let d_prime = as_reduce(g, psi)?.d_prime;
                rep.bound = weil_additive(d_prime.max(1), q, r)?;
            }
        }
        BoundKind::WeilMult => {
            let prof = root_profile(g)?;
            rep.bound = (prof.distinct() as f64 - 1.0).max(0.0) * (q as f64).powf(r as f64 / 2.0);
        }
        BoundKind::TransAdd | BoundKind::TransAddSp => {
            if g.deg() >= 2 {
                rep.bound = ratio_f64(c_add(g.deg() as u32, r)) * top;
            }
        }
        BoundKind::TransAddExc => {
            rep.strict = true;
            if g.deg() >= 2 {
                rep.bound = ratio_f64(c_add(g.deg() as u32, r)) * top;
            }
            if rep.applicable {
                let psi = input.psi.expect("gate checked psi");
                let rho = MultChar::quadratic(k)?;
                let local = compute_local_data_default(g)?;
                rep.main_term = Some(main_term_add_sl(g, &local, psi, &rho, r, SlSign::DMinusOne)?);
                rep.alt_main_term = Some(main_term_add_sl(g, &local, psi, &rho, r, SlSign::D)?);
            }
        }
        BoundKind::TransAddSpExc => {
            rep.strict = true;
            if g.deg() >= 2 {
                rep.bound = ratio_f64(c_add(g.deg() as u32, r)) * top;
            }
            if rep.applicable {
                let psi = input.psi.expect("gate checked psi");
                let beta =
                    odd_constant_shift(g).ok_or_else(|| Error::NotExceptionalCell("g + beta is never odd".into()))?;
                rep.main_term = Some(main_term_add_sp(&beta, psi, r)?);
            }
        }
        BoundKind::TransMult => {
            rep.bound = c_mult(g.deg() as u32, r) as f64 * top;
        }
        BoundKind::TransMultExc => {
            rep.bound = c_mult(g.deg() as u32, r) as f64 * top;
            if rep.applicable {
                let chi = input.chi.expect("gate checked chi");
                let psi = match input.psi {
                    Some(psi) => psi.clone(),
                    None => AdditiveChar::canonical(k),
                };
                match main_term_mult(g, chi, &psi, r) {
                    Ok(main) => rep.main_term = Some(main),
                    Err(Error::RootsNotInBaseField) => {
                        rep.bound += (q as f64).powf(g.deg() as f64 / 2.0 + 1.0);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        BoundKind::HomAdd => {
            rep.bound = homothety_bound(g.deg(), q, r).0;
        }
        BoundKind::HomMult => {
            rep.bound = homothety_bound(split_zero_root(g).1.deg(), q, r).0;
        }
    }
    Ok(rep)
}

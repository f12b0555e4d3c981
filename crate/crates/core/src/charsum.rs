//! Additive and multiplicative characters, Gauss sums and brute-force sum oracles.
//!
//! All sums over `k_r` share one reduction: the enumeration index range is cut
//! into a binary tree that depends only on its length, leaves are summed in
//! order, and inner nodes add their two children. Any worker count therefore
//! produces bit-identical results.

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, add_mod, mul_mod};
use crate::error::{Error, Result};
use crate::ffield::{ExtCtx, Field, FieldCtx, FqElem};
use crate::poly::{determinant, Poly};
use crate::powbasis::{FastPoly, Scratch};

/// Characteristic above which root-of-unity tables are replaced by direct evaluation.
const ROOT_TABLE_MAX: u64 = 1 << 20;
/// Leaf length of the reduction tree.
const LEAF: u64 = 1024;
/// Default enumeration cap for the sum oracles.
pub const DEFAULT_CAP: u64 = 1 << 24;
/// Hard cap for the double-sum identity.
pub const DOUBLE_SUM_CAP: u64 = 1 << 26;

/// `n`-th roots of unity `exp(2 pi i j / n)`, tabulated when `n` is small.
#[derive(Debug, Clone)]
struct RootsOfUnity<T> {
    n: u64,
    table: Vec<Complex<T>>,
}

impl<T: Float + FloatConst> RootsOfUnity<T> {
    fn new(n: u64) -> Self {
        let table = if n <= ROOT_TABLE_MAX {
            (0..n).map(|j| Self::direct(n, j)).collect()
        } else {
            Vec::new()
        };
        RootsOfUnity { n, table }
    }

    fn direct(n: u64, j: u64) -> Complex<T> {
        let turn = T::from(j).unwrap() / T::from(n).unwrap();
        Complex::from_polar(T::one(), turn * T::TAU())
    }

    #[inline]
    fn get(&self, j: u64) -> Complex<T> {
        if self.table.is_empty() {
            Self::direct(self.n, j % self.n)
        } else {
            self.table[(j % self.n) as usize]
        }
    }
}

/// `psi_b(t) = exp(2 pi i Tr_{k/F_p}(b t) / p)`.
#[derive(Debug, Clone)]
pub struct AdditiveChar<T = f64> {
    field: FieldCtx,
    b: FqElem,
    /// `Tr_{k/F_p}(b X^i)`, so the phase of `t` is `sum_i t_i w_i`.
    weights: Vec<u64>,
    roots: RootsOfUnity<T>,
}

impl<T: Float + FloatConst> AdditiveChar<T> {
    pub fn new(field: &FieldCtx, b: FqElem) -> Result<Self> {
        if !field.contains(&b) {
            return Err(Error::CtxMismatch);
        }
        let weights = (0..field.s())
            .map(|i| {
                let mut d = vec![0; field.s()];
                d[i] = 1;
                let xi = field.from_digits(&d).unwrap();
                field.absolute_trace(&field.mul(&b, &xi))
            })
            .collect();
        Ok(AdditiveChar {
            field: field.clone(),
            b,
            weights,
            roots: RootsOfUnity::new(field.p()),
        })
    }

    /// `b = 1`.
    pub fn canonical(field: &FieldCtx) -> Self {
        Self::new(field, field.one()).unwrap()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn b(&self) -> &FqElem {
        &self.b
    }

    pub fn is_trivial(&self) -> bool {
        self.field.is_zero(&self.b)
    }

    /// `Tr_{k/F_p}(b t)` as a residue.
    pub fn phase(&self, t: &FqElem) -> u64 {
        let p = self.field.p();
        t.coeffs()
            .iter()
            .zip(&self.weights)
            .fold(0, |acc, (&c, &w)| add_mod(acc, mul_mod(c, w, p), p))
    }

    pub fn eval(&self, t: &FqElem) -> Complex<T> {
        debug_assert!(self.field.contains(t));
        self.roots.get(self.phase(t))
    }

    /// `psi(Tr_{k_r/k}(y))` for `y` in `k_r`.
    pub fn eval_trace(&self, ext: &ExtCtx, y: &FqElem) -> Complex<T> {
        self.eval(&ext.trace_linear(y))
    }

    /// Per-residue weights of `y -> Tr_{k/F_p}(b Tr_{k_r/k}(y))` on the flat digits of `k_r`.
    fn ext_weights(&self, ext: &ExtCtx) -> Vec<u64> {
        let width = ext.width();
        (0..width)
            .map(|i| {
                let mut d = vec![0; width];
                d[i] = 1;
                self.phase(&ext.trace_linear(&ext.from_digits(&d).unwrap()))
            })
            .collect()
    }
}

/// `chi_j(g^i) = exp(2 pi i i j / (q - 1))` with `chi(0) = 0`.
#[derive(Debug, Clone)]
pub struct MultChar<T = f64> {
    field: FieldCtx,
    j: u64,
    order: u64,
    /// `j / gcd(j, q-1)`, the exponent on the `m`-th roots.
    step: u64,
    roots: RootsOfUnity<T>,
}

impl<T: Float + FloatConst> MultChar<T> {
    pub fn new(field: &FieldCtx, j: u64) -> Result<Self> {
        let n = field.q() - 1;
        if field.q() > crate::ffield::DLOG_TABLE_MAX {
            return Err(Error::FieldTooLarge {
                size: field.q() as u128,
                cap: crate::ffield::DLOG_TABLE_MAX as u128,
            });
        }
        let j = j % n;
        let g = arith::gcd(j, n);
        let order = n / g;
        Ok(MultChar {
            field: field.clone(),
            j,
            order,
            step: j / g,
            roots: RootsOfUnity::new(order),
        })
    }

    /// The character `chi_{(q-1)/m}`, of order exactly `m`.
    pub fn with_order(field: &FieldCtx, m: u64) -> Result<Self> {
        let n = field.q() - 1;
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!("order {m} does not divide q-1 = {n}")));
        }
        Self::new(field, n / m)
    }

    /// The quadratic character; requires odd `q`.
    pub fn quadratic(field: &FieldCtx) -> Result<Self> {
        Self::with_order(field, 2)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `chi^n`.
    pub fn pow(&self, n: u64) -> Self {
        let q1 = self.field.q() - 1;
        Self::new(&self.field, mul_mod(self.j, n % q1, q1)).unwrap()
    }

    pub fn eval(&self, t: &FqElem) -> Complex<T> {
        if self.field.is_zero(t) {
            return Complex::new(T::zero(), T::zero());
        }
        let i = self.field.dlog(t).expect("character argument in its field");
        self.roots.get(mul_mod(i % self.order, self.step, self.order))
    }

    /// `chi(-1)` as an exact sign.
    pub fn at_minus_one(&self) -> i32 {
        let q1 = self.field.q() - 1;
        if q1 % 2 == 1 {
            return 1;
        }
        // -1 = g^{(q-1)/2}
        if mul_mod(q1 / 2, self.j, q1) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Enumeration cap and worker count for the sum oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumOptions {
    pub cap: u64,
    /// `0` uses the global rayon pool.
    pub workers: usize,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            cap: DEFAULT_CAP,
            workers: 0,
        }
    }
}

/// Sums `leaf(lo, hi)` over a fixed binary tree covering `[0, n)`.
pub fn tree_sum<T, L>(n: u64, workers: usize, leaf: L) -> Complex<T>
where
    T: Float + Send,
    L: Fn(u64, u64) -> Complex<T> + Sync,
{
    fn go<T: Float + Send, L: Fn(u64, u64) -> Complex<T> + Sync>(lo: u64, hi: u64, leaf: &L) -> Complex<T> {
        if hi - lo <= LEAF {
            return leaf(lo, hi);
        }
        let mid = lo + (hi - lo) / 2;
        let (a, b) = rayon::join(|| go(lo, mid, leaf), || go(mid, hi, leaf));
        a + b
    }
    if n == 0 {
        return Complex::new(T::zero(), T::zero());
    }
    if workers == 0 {
        return go(0, n, &leaf);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| go(0, n, &leaf))
}

/// A polynomial that can be read with coefficients in `k_r`.
pub trait OverExt {
    fn over(&self, ext: &ExtCtx) -> Result<Poly<ExtCtx>>;
}

impl OverExt for Poly<FieldCtx> {
    fn over(&self, ext: &ExtCtx) -> Result<Poly<ExtCtx>> {
        if self.field().tag() != ext.base().tag() {
            return Err(Error::CtxMismatch);
        }
        Ok(self.lift(ext))
    }
}

impl OverExt for Poly<ExtCtx> {
    fn over(&self, ext: &ExtCtx) -> Result<Poly<ExtCtx>> {
        if self.field().tag() != ext.tag() {
            return Err(Error::CtxMismatch);
        }
        Ok(self.clone())
    }
}

fn check_cap(size: u64, cap: u64) -> Result<()> {
    if size > cap {
        return Err(Error::FieldTooLarge {
            size: size as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

fn check_base(ext: &ExtCtx, field: &FieldCtx) -> Result<()> {
    if ext.base().tag() != field.tag() {
        return Err(Error::CtxMismatch);
    }
    Ok(())
}

/// `g(chi, psi) = -sum_{t in k} chi(t) psi(t)`.
pub fn gauss_sum<T: Float + FloatConst>(chi: &MultChar<T>, psi: &AdditiveChar<T>) -> Complex<T> {
    let k = &chi.field;
    let s = k.enumerate((0, 1)).fold(Complex::new(T::zero(), T::zero()), |acc, t| {
        acc + chi.eval(&t) * psi.eval(&t)
    });
    -s
}

/// `S_r = sum_{x in k_r} psi(Tr_{k_r/k}(f(x)))` by enumeration.
pub fn sum_additive<T, P>(f: &P, psi: &AdditiveChar<T>, ext: &ExtCtx, opts: SumOptions) -> Result<Complex<T>>
where
    T: Float + FloatConst + Send + Sync,
    P: OverExt,
{
    check_base(ext, &psi.field)?;
    check_cap(ext.order(), opts.cap)?;
    let f = f.over(ext)?;
    let w = psi.ext_weights(ext);
    if let Some(fp) = FastPoly::new(&f) {
        let wp = fp.pb.form(&w);
        return Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
            fp.fold(lo, hi, |_, _| true, |_, y, _| psi.roots.get(fp.pb.dot(&wp, y)))
        }));
    }
    let p = ext.characteristic();
    Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
        ext.elements(lo, hi).fold(Complex::new(T::zero(), T::zero()), |acc, x| {
            let y = f.eval_unchecked(&x);
            acc + psi.roots.get(flat_phase(&y, &w, p))
        })
    }))
}

#[inline]
fn flat_phase(y: &FqElem, w: &[u64], p: u64) -> u64 {
    y.coeffs()
        .iter()
        .zip(w)
        .fold(0, |acc, (&c, &wi)| add_mod(acc, mul_mod(c, wi, p), p))
}

/// `U_r = sum_{x in k_r} chi(N_{k_r/k}(f(x)))` by enumeration.
pub fn sum_multiplicative<T, P>(f: &P, chi: &MultChar<T>, ext: &ExtCtx, opts: SumOptions) -> Result<Complex<T>>
where
    T: Float + FloatConst + Send + Sync,
    P: OverExt,
{
    check_base(ext, &chi.field)?;
    check_cap(ext.order(), opts.cap)?;
    let f = f.over(ext)?;
    if let Some(fp) = FastPoly::new(&f) {
        let k = ext.base();
        return Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
            let mut nm = vec![0; ext.width()];
            fp.fold(
                lo,
                hi,
                |_, _| true,
                |_, y, sc| {
                    fp.pb.norm(y, &mut nm, sc);
                    chi.eval(&k.from_digits(&nm[..k.s()]).expect("norm digits"))
                },
            )
        }));
    }
    Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
        ext.elements(lo, hi).fold(Complex::new(T::zero(), T::zero()), |acc, x| {
            acc + chi.eval(&ext.norm_unchecked(&f.eval_unchecked(&x)))
        })
    }))
}

fn check_mu(ext: &ExtCtx, mu: &FqElem) -> Result<()> {
    if !ext.base().contains(mu) {
        return Err(Error::CtxMismatch);
    }
    if ext.base().is_zero(mu) {
        return Err(Error::ZeroMu);
    }
    Ok(())
}

/// `N(x) = mu`, tested in power coordinates.
fn fiber_filter<'a>(fp: &'a FastPoly, ext: &ExtCtx, mu: &'a FqElem) -> impl FnMut(&[u64], &mut Scratch) -> bool + 'a {
    let mut nm = vec![0; ext.width()];
    move |x, sc| {
        fp.pb.norm(x, &mut nm, sc);
        nm[..mu.coeffs().len()] == *mu.coeffs()
    }
}

/// `sum_{N(x) = mu} psi(Tr_{k_r/k}(g(x)))`, scanning `k_r` with a norm filter.
pub fn fiber_sum_additive<T, P>(
    g: &P,
    psi: &AdditiveChar<T>,
    ext: &ExtCtx,
    mu: &FqElem,
    opts: SumOptions,
) -> Result<Complex<T>>
where
    T: Float + FloatConst + Send + Sync,
    P: OverExt,
{
    check_base(ext, &psi.field)?;
    check_mu(ext, mu)?;
    check_cap(ext.order(), opts.cap)?;
    let g = g.over(ext)?;
    let w = psi.ext_weights(ext);
    if let Some(fp) = FastPoly::new(&g) {
        let wp = fp.pb.form(&w);
        return Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
            fp.fold(lo, hi, fiber_filter(&fp, ext, mu), |_, y, _| {
                psi.roots.get(fp.pb.dot(&wp, y))
            })
        }));
    }
    let p = ext.characteristic();
    Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
        ext.elements(lo, hi).fold(Complex::new(T::zero(), T::zero()), |acc, x| {
            if ext.norm_unchecked(&x) != *mu {
                return acc;
            }
            acc + psi.roots.get(flat_phase(&g.eval_unchecked(&x), &w, p))
        })
    }))
}

/// `sum_{N(x) = mu} chi(N_{k_r/k}(g(x)))`, scanning `k_r` with a norm filter.
pub fn fiber_sum_multiplicative<T, P>(
    g: &P,
    chi: &MultChar<T>,
    ext: &ExtCtx,
    mu: &FqElem,
    opts: SumOptions,
) -> Result<Complex<T>>
where
    T: Float + FloatConst + Send + Sync,
    P: OverExt,
{
    check_base(ext, &chi.field)?;
    check_mu(ext, mu)?;
    check_cap(ext.order(), opts.cap)?;
    let g = g.over(ext)?;
    if let Some(fp) = FastPoly::new(&g) {
        let k = ext.base();
        return Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
            let mut nm = vec![0; ext.width()];
            fp.fold(lo, hi, fiber_filter(&fp, ext, mu), |_, y, sc| {
                fp.pb.norm(y, &mut nm, sc);
                chi.eval(&k.from_digits(&nm[..k.s()]).expect("norm digits"))
            })
        }));
    }
    Ok(tree_sum(ext.order(), opts.workers, |lo, hi| {
        ext.elements(lo, hi).fold(Complex::new(T::zero(), T::zero()), |acc, x| {
            if ext.norm_unchecked(&x) != *mu {
                return acc;
            }
            acc + chi.eval(&ext.norm_unchecked(&g.eval_unchecked(&x)))
        })
    }))
}

/// `sum_{u in k} sum_{t in k_r} psi(Tr_{k_r/k}(g(t) + u t))`, literally.
pub fn double_sum_check<T, P>(g: &P, psi: &AdditiveChar<T>, ext: &ExtCtx, opts: SumOptions) -> Result<Complex<T>>
where
    T: Float + FloatConst + Send + Sync,
    P: OverExt,
{
    check_base(ext, &psi.field)?;
    let n = ext.order().saturating_mul(ext.q());
    check_cap(n, opts.cap.min(DOUBLE_SUM_CAP))?;
    let g = g.over(ext)?;
    let k = ext.base();
    let w = psi.ext_weights(ext);
    let p = ext.characteristic();
    let qr = ext.order();
    Ok(tree_sum(n, opts.workers, |lo, hi| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for idx in lo..hi {
            let u = ext.embed(&k.element(idx / qr));
            let t = ext.element(idx % qr);
            let y = ext.add(&g.eval_unchecked(&t), &ext.mul(&u, &t));
            acc = acc + psi.roots.get(flat_phase(&y, &w, p));
        }
        acc
    }))
}

/// Checks the norm-form and trace descent identities for `x = sum alpha_i x_i` on
/// `trials` seeded-random tuples in `k^r`:
/// `prod_sigma sum_i sigma(alpha_i) x_i = N(x)` and `sum_sigma g^sigma(sum_i sigma(alpha_i) x_i) = Tr(g(x))`.
pub fn weil_descent_check<P: OverExt>(g: &P, ext: &ExtCtx, basis: &[FqElem], trials: usize, seed: u64) -> Result<bool> {
    let r = ext.r();
    let k = ext.base();
    if basis.len() != r || !basis.iter().all(|a| ext.contains(a)) {
        return Err(Error::NotABasis);
    }
    let rows: Vec<Vec<FqElem>> = basis
        .iter()
        .map(|a| (0..r).map(|j| ext.component(a, j)).collect())
        .collect();
    if k.is_zero(&determinant(k, rows)) {
        return Err(Error::NotABasis);
    }
    let g = g.over(ext)?;
    let conj_basis: Vec<Vec<FqElem>> = (0..r)
        .map(|i| basis.iter().map(|a| ext.frobenius_pow(a, i)).collect())
        .collect();
    let conj_g: Vec<Poly<ExtCtx>> = (0..r).map(|i| g.conjugate(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let xs: Vec<FqElem> = (0..r).map(|_| ext.embed(&k.element(rng.gen_range(0..k.q())))).collect();
        let combo = |alphas: &[FqElem]| {
            alphas
                .iter()
                .zip(&xs)
                .fold(ext.zero(), |acc, (a, x)| ext.add(&acc, &ext.mul(a, x)))
        };
        let z = combo(basis);
        let mut prod = ext.one();
        let mut tr = ext.zero();
        for (alphas, gs) in conj_basis.iter().zip(&conj_g) {
            let y = combo(alphas);
            prod = ext.mul(&prod, &y);
            tr = ext.add(&tr, &gs.eval_unchecked(&y));
        }
        if prod != ext.embed(&ext.norm_unchecked(&z)) {
            return Ok(false);
        }
        if tr != ext.embed(&ext.trace(&g.eval_unchecked(&z))?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{make_ext, make_field};

    type C = Complex<f64>;

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn additive_character_is_a_homomorphism() {
        let k = make_field(3, 3, 2).unwrap();
        let b = k.generator().clone();
        let psi = AdditiveChar::<f64>::new(&k, b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = k.element(rng.gen_range(0..k.q()));
            let y = k.element(rng.gen_range(0..k.q()));
            assert!(close(psi.eval(&k.add(&x, &y)), psi.eval(&x) * psi.eval(&y), 1e-12));
        }
        assert!(!psi.is_trivial());
        let triv = AdditiveChar::<f64>::new(&k, k.zero()).unwrap();
        assert!(k
            .enumerate((0, 1))
            .all(|t| close(triv.eval(&t), C::new(1.0, 0.0), 1e-15)));
    }

    #[test]
    fn multiplicative_character_is_a_homomorphism() {
        let k = make_field(5, 2, 3).unwrap();
        let chi = MultChar::<f64>::new(&k, 5).unwrap();
        assert_eq!(chi.order(), 24 / arith::gcd(5, 24));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let x = k.element(rng.gen_range(1..k.q()));
            let y = k.element(rng.gen_range(1..k.q()));
            assert!(close(chi.eval(&k.mul(&x, &y)), chi.eval(&x) * chi.eval(&y), 1e-12));
        }
        let chi_m = chi.pow(chi.order());
        assert!(chi_m.is_trivial());
        assert_eq!(chi.eval(&k.zero()), C::new(0.0, 0.0));
    }

    #[test]
    fn gauss_sum_examples() {
        let k = make_field(11, 1, 0).unwrap();
        let psi = AdditiveChar::<f64>::canonical(&k);
        let triv = MultChar::<f64>::new(&k, 0).unwrap();
        assert!(close(gauss_sum(&triv, &psi), C::new(1.0, 0.0), 1e-12));

        let k3 = make_field(3, 1, 0).unwrap();
        let psi3 = AdditiveChar::<f64>::canonical(&k3);
        let rho = MultChar::<f64>::quadratic(&k3).unwrap();
        let g = gauss_sum(&rho, &psi3);
        // rho(1) = 1, rho(2) = -1: -(zeta_3 - zeta_3^2) = -i sqrt 3
        assert!(close(g, C::new(0.0, -(3f64).sqrt()), 1e-12));
    }

    #[test]
    fn quadratic_gauss_sum_squares_to_rho_minus_one_q() {
        for p in [
            3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
        ] {
            let k = make_field(p, 1, 0).unwrap();
            let psi = AdditiveChar::<f64>::canonical(&k);
            let rho = MultChar::<f64>::quadratic(&k).unwrap();
            let g = gauss_sum(&rho, &psi);
            let expect = rho.at_minus_one() as f64 * p as f64;
            assert!(close(g * g, C::new(expect, 0.0), 1e-9 * p as f64), "p = {p}");
        }
    }

    #[test]
    fn additive_sum_examples() {
        let k = make_field(5, 1, 0).unwrap();
        let ext = make_ext(&k, 2, 0).unwrap();
        let psi = AdditiveChar::<f64>::canonical(&k);
        let opts = SumOptions::default();
        let c = Poly::from_ints(&k, &[3]);
        // Tr(3) = 6 = 1
        let expect = psi.eval(&k.from_u64(1)) * 25.0;
        assert!(close(sum_additive(&c, &psi, &ext, opts).unwrap(), expect, 1e-9));

        let e1 = make_ext(&k, 1, 0).unwrap();
        let x = Poly::x(&k);
        assert!(close(
            sum_additive(&x, &psi, &e1, opts).unwrap(),
            C::new(0.0, 0.0),
            1e-9
        ));

        let small = SumOptions { cap: 10, workers: 0 };
        assert!(matches!(
            sum_additive(&x, &psi, &ext, small),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn multiplicative_sum_examples() {
        let k = make_field(7, 1, 0).unwrap();
        let e1 = make_ext(&k, 1, 0).unwrap();
        let rho = MultChar::<f64>::quadratic(&k).unwrap();
        let opts = SumOptions::default();
        let one = Poly::from_ints(&k, &[1]);
        assert!(close(
            sum_multiplicative(&one, &rho, &e1, opts).unwrap(),
            C::new(7.0, 0.0),
            1e-12
        ));
        let x = Poly::x(&k);
        assert!(close(
            sum_multiplicative(&x, &rho, &e1, opts).unwrap(),
            C::new(0.0, 0.0),
            1e-12
        ));
        // x^2 + 1 over F_7 takes values 1,2,5,3,3,5,2; squares mod 7 are {1,2,4}
        let f = Poly::from_ints(&k, &[1, 0, 1]);
        let legendre = |v: i64| if [1, 2, 4].contains(&v) { 1.0 } else { -1.0 };
        let expect: f64 = (0..7).map(|x| legendre((x * x + 1) % 7)).sum();
        assert!(close(
            sum_multiplicative(&f, &rho, &e1, opts).unwrap(),
            C::new(expect, 0.0),
            1e-12
        ));
    }

    #[test]
    fn sums_match_a_literal_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, s, r) in [(3, 1, 3), (2, 3, 2), (5, 2, 2), (7, 1, 2)] {
            let k = make_field(p, s, 0).unwrap();
            let ext = make_ext(&k, r, 0).unwrap();
            let psi = AdditiveChar::<f64>::new(&k, k.element(rng.gen_range(1..k.order()))).unwrap();
            let chi = MultChar::<f64>::new(&k, rng.gen_range(1..k.q() - 1)).unwrap();
            let g = Poly::new(&k, (0..4).map(|_| k.element(rng.gen_range(0..k.order()))).collect());
            let mu = k.element(rng.gen_range(1..k.order()));
            let opts = SumOptions::default();
            let (mut add, mut mult, mut fa, mut fm) = (C::default(), C::default(), C::default(), C::default());
            for x in ext.enumerate((0, 1)) {
                let y = g.eval_ext(&ext, &x).unwrap();
                let a = psi.eval(&ext.trace(&y).unwrap());
                let m = chi.eval(&ext.norm(&y).unwrap());
                add += a;
                mult += m;
                if ext.norm(&x).unwrap() == mu {
                    fa += a;
                    fm += m;
                }
            }
            assert!(close(sum_additive(&g, &psi, &ext, opts).unwrap(), add, 1e-9));
            assert!(close(sum_multiplicative(&g, &chi, &ext, opts).unwrap(), mult, 1e-9));
            assert!(close(fiber_sum_additive(&g, &psi, &ext, &mu, opts).unwrap(), fa, 1e-9));
            assert!(close(
                fiber_sum_multiplicative(&g, &chi, &ext, &mu, opts).unwrap(),
                fm,
                1e-9
            ));
        }
    }

    #[test]
    fn fiber_sums_reassemble_full_sum() {
        let k = make_field(7, 1, 0).unwrap();
        let ext = make_ext(&k, 2, 4).unwrap();
        let psi = AdditiveChar::<f64>::canonical(&k);
        let opts = SumOptions::default();
        let g = Poly::from_ints(&k, &[2, 1, 3]);
        let e = 3u64;
        let f = g.compose(&Poly::monomial(&k, k.one(), ((k.q() - 1) / e) as usize));
        let full = sum_additive(&f, &psi, &ext, opts).unwrap();
        let mut fibers = C::new(0.0, 0.0);
        for mu in k.enumerate((0, 1)).filter(|m| k.is_one(&k.pow(m, e as u128))) {
            fibers += fiber_sum_additive(&g, &psi, &ext, &mu, opts).unwrap();
        }
        let f0 = psi.eval(&ext.trace(&ext.embed(&f.coeff(0))).unwrap());
        let reassembled = f0 + fibers * ((k.q() - 1) / e) as f64;
        assert!(close(full, reassembled, 1e-9));

        let c = Poly::from_ints(&k, &[4]);
        let fib = fiber_sum_additive(&c, &psi, &ext, &k.one(), opts).unwrap();
        let expect = psi.eval(&k.from_u64(8 % 7)) * 8.0;
        assert!(close(fib, expect, 1e-9));
        assert_eq!(fiber_sum_additive(&c, &psi, &ext, &k.zero(), opts), Err(Error::ZeroMu));
    }

    #[test]
    fn degree_one_fiber_is_a_point() {
        let k = make_field(11, 1, 0).unwrap();
        let e1 = make_ext(&k, 1, 0).unwrap();
        let psi = AdditiveChar::<f64>::canonical(&k);
        let g = Poly::from_ints(&k, &[1, 5, 0, 2]);
        for mu in k.enumerate((0, 1)).skip(1) {
            let s = fiber_sum_additive(&g, &psi, &e1, &mu, SumOptions::default()).unwrap();
            assert!(close(s, psi.eval(&g.eval(&mu).unwrap()), 1e-12));
        }
    }

    #[test]
    fn double_sum_examples() {
        let k = make_field(5, 1, 0).unwrap();
        let e1 = make_ext(&k, 1, 0).unwrap();
        let psi = AdditiveChar::<f64>::canonical(&k);
        let opts = SumOptions::default();
        let x = Poly::x(&k);
        assert!(close(
            double_sum_check(&x, &psi, &e1, opts).unwrap(),
            C::new(5.0, 0.0),
            1e-9
        ));

        let ext = make_ext(&k, 2, 1).unwrap();
        let g = Poly::from_ints(&k, &[1, 3, 0, 2]);
        let xq = &Poly::monomial(&k, k.one(), 5) - &x;
        let lhs = sum_additive(&g.compose(&xq), &psi, &ext, opts).unwrap();
        let rhs = double_sum_check(&g, &psi, &ext, opts).unwrap();
        assert!(close(lhs, rhs, 1e-6 * 5.0));
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let k = make_field(3, 2, 0).unwrap();
        let ext = make_ext(&k, 3, 0).unwrap();
        let psi = AdditiveChar::<f64>::canonical(&k);
        let g = Poly::from_ints(&k, &[1, 2, 0, 1, 2]);
        let a = sum_additive(
            &g,
            &psi,
            &ext,
            SumOptions {
                cap: DEFAULT_CAP,
                workers: 1,
            },
        )
        .unwrap();
        let b = sum_additive(
            &g,
            &psi,
            &ext,
            SumOptions {
                cap: DEFAULT_CAP,
                workers: 4,
            },
        )
        .unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn weil_descent_examples() {
        let k = make_field(5, 1, 0).unwrap();
        let e1 = make_ext(&k, 1, 0).unwrap();
        let g = Poly::from_ints(&k, &[1, 2, 3]);
        assert!(weil_descent_check(&g, &e1, &[e1.one()], 20, 0).unwrap());

        let ext = make_ext(&k, 2, 3).unwrap();
        let basis = [ext.one(), ext.generator().clone()];
        assert!(weil_descent_check(&g, &ext, &basis, 200, 1).unwrap());
        let gext = Poly::new(
            &ext,
            vec![ext.generator().clone(), ext.one(), ext.pow(ext.generator(), 7)],
        );
        assert!(weil_descent_check(&gext, &ext, &basis, 200, 2).unwrap());

        assert_eq!(
            weil_descent_check(&g, &ext, &[ext.one(), ext.one()], 5, 0),
            Err(Error::NotABasis)
        );
    }
}

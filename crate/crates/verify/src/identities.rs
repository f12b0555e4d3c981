//! Exhaustive checks of the identities the bounds rest on.

use charsums::arith::is_prime;
use charsums::charsum::{double_sum_check, gauss_sum, sum_additive, weil_descent_check};
use charsums::{make_ext, make_field, AdditiveChar, Field, MultChar, PolyK, SumOptions};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::run::tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    /// Largest deviation seen, in the identity's own units.
    pub max_error: f64,
}

impl IdentityReport {
    fn new(name: &'static str) -> Self {
        IdentityReport {
            name,
            checked: 0,
            failures: Vec::new(),
            max_error: 0.0,
        }
    }

    fn record(&mut self, err: f64, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        self.max_error = self.max_error.max(err);
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// `|g(chi, psi)|^2 = p` for every nontrivial `chi` mod every prime `p <= max_p`,
/// and `g(rho, psi)^2 = rho(-1) p` for the quadratic `rho`.
pub fn gauss(max_p: u64) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("gauss");
    for p in (3..=max_p).filter(|&p| is_prime(p)) {
        let k = make_field(p, 1, 0)?;
        let psi = AdditiveChar::<f64>::canonical(&k);
        let q = p as f64;
        for j in 1..p - 1 {
            let chi = MultChar::<f64>::new(&k, j)?;
            let g = gauss_sum(&chi, &psi);
            let err = (g.norm_sqr() - q).abs() / q;
            rep.record(err, err <= 1e-9, || {
                format!("p = {p}, j = {j}: |g|^2 = {}", g.norm_sqr())
            });
        }
        let rho = MultChar::<f64>::quadratic(&k)?;
        let g2 = gauss_sum(&rho, &psi).powi(2);
        let want = rho.at_minus_one() as f64 * q;
        let err = (g2 - want).norm() / q;
        rep.record(err, err <= 1e-9, || format!("p = {p}: g(rho)^2 = {g2}, want {want}"));
    }
    Ok(rep)
}

/// `#{x in k_r : x^q - x = t} = q [Tr t = 0]` for every `t`, over all `(p, s, r)` with `q^r <= max_qr`.
pub fn counting(max_qr: u64) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("counting");
    for p in (2..=max_qr).filter(|&p| is_prime(p)) {
        for s in 1.. {
            let q = p.pow(s);
            if q > max_qr {
                break;
            }
            let k = make_field(p, s, 0)?;
            for r in 1.. {
                let qr = q.pow(r);
                if qr > max_qr {
                    break;
                }
                let ext = make_ext(&k, r, 0)?;
                let mut counts = vec![0u64; qr as usize];
                for x in ext.enumerate((0, 1)) {
                    let t = ext.sub(&ext.frobenius(&x), &x);
                    counts[ext.index_of(&t) as usize] += 1;
                }
                let mut bad = 0;
                for (i, &c) in counts.iter().enumerate() {
                    let t = ext.element(i as u64);
                    let want = if k.is_zero(&ext.trace(&t)?) { q } else { 0 };
                    bad += usize::from(c != want);
                }
                rep.record(bad as f64, bad == 0, || {
                    format!("p = {p}, s = {s}, r = {r}: {bad} fibers off")
                });
            }
        }
    }
    Ok(rep)
}

/// `S_r(g(x^q - x)) = sum_u sum_t psi(Tr(g(t) + u t))` on `count` random `g` for each `p` and `r`.
pub fn double_sum(seed: u64, count: usize, primes: &[u64], rs: &[u32]) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("double-sum");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in primes {
        let k = make_field(p, 1, 0)?;
        let psi = AdditiveChar::<f64>::canonical(&k);
        let xq = &PolyK::monomial(&k, k.one(), p as usize) - &PolyK::x(&k);
        for &r in rs {
            let ext = make_ext(&k, r, 0)?;
            let tol = tolerance(p, r);
            for _ in 0..count {
                let d = rng.gen_range(1..=6);
                let coeffs: Vec<u64> = (0..=d).map(|i| rng.gen_range(u64::from(i == d)..p)).collect();
                let g = PolyK::new(&k, coeffs.iter().map(|&c| k.from_u64(c)).collect());
                let lhs = sum_additive(&g.compose(&xq), &psi, &ext, SumOptions::default())?;
                let rhs = double_sum_check(&g, &psi, &ext, SumOptions::default())?;
                let err = (lhs - rhs).norm();
                rep.record(err, err <= tol, || {
                    format!("p = {p}, r = {r}, g = {}: {lhs} vs {rhs}", g.to_text())
                });
            }
        }
    }
    Ok(rep)
}

/// Norm-form and trace descent on random bases and polynomials.
pub fn descent(seed: u64, count: usize) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("descent");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (p, s, r) in [(3, 1, 3), (5, 1, 2), (7, 1, 3), (3, 2, 2), (2, 3, 2)] {
        let k = make_field(p, s, 0)?;
        let ext = make_ext(&k, r, 0)?;
        for _ in 0..count {
            let basis: Vec<_> = (0..r).map(|_| ext.element(rng.gen_range(1..ext.order()))).collect();
            let d = rng.gen_range(1..=5);
            let g = PolyK::new(&k, (0..=d).map(|_| k.element(rng.gen_range(1..k.order()))).collect());
            match weil_descent_check(&g, &ext, &basis, 20, rng.gen()) {
                Ok(ok) => rep.record(f64::from(u8::from(!ok)), ok, || {
                    format!("q = {}, r = {r}: mismatch", k.q())
                }),
                Err(charsums::Error::NotABasis) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(rep)
}

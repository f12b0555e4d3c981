//! Seeded random polynomials under hypothesis-shaped constraints.

use charsums::boundbook::has_all_sl_roots;
use charsums::{Field, FieldCtx, FqElem, PolyK};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Constraints;
use crate::error::{Error, Result};

pub const MAX_RETRIES: usize = 10_000;

/// The generator used for trial `trial` of degree `d` under `seed`.
pub fn trial_rng(seed: u64, d: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((d as u64) << 32) | trial as u64);
    rng
}

fn random_elem(k: &FieldCtx, rng: &mut impl Rng) -> FqElem {
    k.element(rng.gen_range(0..k.order()))
}

fn random_nonzero(k: &FieldCtx, rng: &mut impl Rng) -> FqElem {
    k.element(rng.gen_range(1..k.order()))
}

fn candidate(k: &FieldCtx, d: usize, c: &Constraints, rng: &mut impl Rng) -> PolyK {
    let lead = if c.monic { k.one() } else { random_nonzero(k, rng) };
    if c.splits {
        let mut roots: Vec<FqElem> = (0..d).map(|_| random_elem(k, rng)).collect();
        if c.roots_sum_zero || c.a_prev_zero {
            let rest = roots[..d - 1].iter().fold(k.zero(), |acc, a| k.add(&acc, a));
            roots[d - 1] = k.neg(&rest);
        }
        let start = PolyK::constant(k, lead);
        return roots
            .iter()
            .fold(start, |acc, a| &acc * &PolyK::new(k, vec![k.neg(a), k.one()]));
    }
    let mut coeffs: Vec<FqElem> = (0..d).map(|_| random_elem(k, rng)).collect();
    coeffs.push(lead);
    if c.a_prev_zero || c.roots_sum_zero {
        coeffs[d - 1] = k.zero();
    }
    if c.odd {
        for a in coeffs.iter_mut().step_by(2) {
            *a = k.zero();
        }
    }
    PolyK::new(k, coeffs)
}

/// Whether `g` has degree `d` and meets every constraint.
pub fn satisfies(g: &PolyK, d: usize, c: &Constraints) -> bool {
    let k = g.field();
    if g.degree() != Some(d) {
        return false;
    }
    let checks = [
        !(c.a_prev_zero || c.roots_sum_zero) || k.is_zero(&g.coeff(d - 1)),
        !c.monic || k.is_one(&g.leading()),
        !c.nonzero_constant || !k.is_zero(&g.coeff(0)),
        !c.odd || (0..=d).step_by(2).all(|i| k.is_zero(&g.coeff(i))),
        !c.squarefree || g.is_squarefree(),
        !c.splits || g.roots().is_ok_and(|r| r.splits_completely),
        !c.sl_roots || has_all_sl_roots(g),
    ];
    checks.iter().all(|&ok| ok)
}

/// A degree-`d` polynomial meeting `c`, retrying up to [`MAX_RETRIES`] times.
pub fn gen_poly(k: &FieldCtx, d: usize, c: &Constraints, rng: &mut impl Rng) -> Result<PolyK> {
    if d == 0 {
        return Err(Error::Unsatisfiable(0));
    }
    for _ in 0..MAX_RETRIES {
        let g = candidate(k, d, c, rng);
        if satisfies(&g, d, c) {
            return Ok(g);
        }
    }
    Err(Error::Unsatisfiable(MAX_RETRIES))
}

/// Parses `p=13,s=1,d=3,splits,roots_sum_zero` into field parameters, degree and constraints.
pub fn parse_constraint_spec(text: &str) -> Result<(u64, u32, usize, Constraints)> {
    let (mut p, mut s, mut d) = (None, 1, None);
    let mut c = Constraints::default();
    let mut errs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once('=') {
            Some((key, val)) => {
                let Ok(n) = val.trim().parse::<u64>() else {
                    errs.push(format!("{key}: not an integer: {val}"));
                    continue;
                };
                match key.trim() {
                    "p" => p = Some(n),
                    "s" => s = n as u32,
                    "d" => d = Some(n as usize),
                    other => errs.push(format!("{other}: unknown key")),
                }
            }
            None => {
                let flag = match item {
                    "a_prev_zero" => &mut c.a_prev_zero,
                    "squarefree" => &mut c.squarefree,
                    "splits" => &mut c.splits,
                    "odd" => &mut c.odd,
                    "nonzero_constant" => &mut c.nonzero_constant,
                    "monic" => &mut c.monic,
                    "roots_sum_zero" => &mut c.roots_sum_zero,
                    "sl_roots" => &mut c.sl_roots,
                    other => {
                        errs.push(format!("{other}: unknown constraint"));
                        continue;
                    }
                };
                *flag = true;
            }
        }
    }
    if p.is_none() {
        errs.push("p: required".into());
    }
    if d.is_none() {
        errs.push("d: required".into());
    }
    if !errs.is_empty() {
        return Err(Error::ConfigInvalid(errs));
    }
    Ok((p.unwrap(), s, d.unwrap(), c))
}

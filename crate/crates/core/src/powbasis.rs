//! `k_r` rewritten as `F_p[Z]/(M)` with `Z` the context generator, for the
//! enumeration loops. Products accumulate unreduced in `u64` and are reduced
//! mod `p` once per output digit, so this form only exists when `2n (p-1)^2`
//! fits.

use crate::arith::{add_mod, mul_mod, pow_mod};
use num_complex::Complex;
use num_traits::Float;

use crate::ffield::{ExtCtx, Field, FqElem};
use crate::poly::Poly;

pub(crate) struct PowerBasis {
    p: u64,
    n: usize,
    s: usize,
    r: usize,
    /// `Z^n = sum_j red[j] Z^j`.
    red: Vec<u64>,
    /// Row-major `n x n`: tower digits to power coordinates.
    to_power: Vec<u64>,
    /// Row-major `n x n`: power coordinates to tower digits.
    from_power: Vec<u64>,
    /// Row-major `n x n`: the `q`-Frobenius on power coordinates.
    frob: Vec<u64>,
}

/// Reusable buffers for one worker.
pub(crate) struct Scratch {
    wide: Vec<u64>,
    a: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    acc: Vec<u64>,
}

fn invert(mut m: Vec<u64>, n: usize, p: u64) -> Option<Vec<u64>> {
    let mut inv = vec![0u64; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r * n + col] != 0)?;
        for j in 0..n {
            m.swap(col * n + j, piv * n + j);
            inv.swap(col * n + j, piv * n + j);
        }
        let c = pow_mod(m[col * n + col], p - 2, p);
        for j in 0..n {
            m[col * n + j] = mul_mod(m[col * n + j], c, p);
            inv[col * n + j] = mul_mod(inv[col * n + j], c, p);
        }
        for r in (0..n).filter(|&r| r != col) {
            let f = m[r * n + col];
            if f == 0 {
                continue;
            }
            let f = p - f;
            for j in 0..n {
                m[r * n + j] = add_mod(m[r * n + j], mul_mod(f, m[col * n + j], p), p);
                inv[r * n + j] = add_mod(inv[r * n + j], mul_mod(f, inv[col * n + j], p), p);
            }
        }
    }
    Some(inv)
}

impl PowerBasis {
    pub(crate) fn new(ext: &ExtCtx) -> Option<Self> {
        let p = ext.characteristic();
        let n = ext.width();
        let bound = (2 * n as u128 + 2) * ((p - 1) as u128).pow(2) + p as u128;
        if bound >= 1u128 << 64 {
            return None;
        }
        let z = ext.generator();
        // columns of `from_power` are the tower digits of Z^0, ..., Z^n
        let mut cols: Vec<FqElem> = Vec::with_capacity(n + 1);
        cols.push(ext.one());
        for j in 0..n {
            cols.push(ext.mul(&cols[j], z));
        }
        let mut from_power = vec![0u64; n * n];
        for (j, c) in cols[..n].iter().enumerate() {
            for (i, &d) in c.coeffs().iter().enumerate() {
                from_power[i * n + j] = d;
            }
        }
        let to_power = invert(from_power.clone(), n, p)?;
        let s = ext.base().s();
        let mut pb = PowerBasis {
            p,
            n,
            s,
            r: ext.r(),
            red: Vec::new(),
            to_power,
            from_power,
            frob: vec![0; n * n],
        };
        pb.red = pb.power_coords(cols[n].coeffs());
        for (j, c) in cols[..n].iter().enumerate() {
            let col = pb.power_coords(ext.frobenius(c).coeffs());
            for (i, v) in col.into_iter().enumerate() {
                pb.frob[i * n + j] = v;
            }
        }
        Some(pb)
    }

    pub(crate) fn scratch(&self) -> Scratch {
        let n = self.n;
        Scratch {
            wide: vec![0; 2 * n],
            a: vec![0; n],
            b: vec![0; n],
            c: vec![0; n],
            acc: vec![0; n],
        }
    }

    fn matvec(&self, m: &[u64], rows: usize, v: &[u64], out: &mut [u64]) {
        let n = self.n;
        for (i, o) in out[..rows].iter_mut().enumerate() {
            let acc: u64 = m[i * n..(i + 1) * n].iter().zip(v).map(|(&a, &b)| a * b).sum();
            *o = acc % self.p;
        }
    }

    pub(crate) fn power_coords(&self, digits: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.n];
        self.matvec(&self.to_power, self.n, digits, &mut out);
        out
    }

    /// `out = a * b + add`, all in power coordinates.
    fn mul_add(&self, a: &[u64], b: &[u64], add: Option<&[u64]>, wide: &mut [u64], out: &mut [u64]) {
        let (n, p) = (self.n, self.p);
        wide[..2 * n - 1].fill(0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (w, &y) in wide[i..i + n].iter_mut().zip(b) {
                *w += x * y;
            }
        }
        for top in (n..2 * n - 1).rev() {
            let c = wide[top] % p;
            if c == 0 {
                continue;
            }
            for (w, &m) in wide[top - n..top].iter_mut().zip(&self.red) {
                *w += c * m;
            }
        }
        match add {
            Some(c) => {
                for ((o, &w), &c) in out.iter_mut().zip(&wide[..n]).zip(c) {
                    *o = (w + c) % p;
                }
            }
            None => {
                for (o, &w) in out.iter_mut().zip(&wide[..n]) {
                    *o = w % p;
                }
            }
        }
    }

    /// Horner evaluation; `coeffs` holds `c_0, ..., c_d` back to back, `n` digits each.
    pub(crate) fn eval(&self, coeffs: &[u64], x: &[u64], out: &mut [u64], sc: &mut Scratch) {
        let n = self.n;
        let d = coeffs.len() / n;
        if d == 0 {
            out.fill(0);
            return;
        }
        out.copy_from_slice(&coeffs[(d - 1) * n..]);
        for i in (0..d - 1).rev() {
            sc.a.copy_from_slice(out);
            self.mul_add(&sc.a, x, Some(&coeffs[i * n..(i + 1) * n]), &mut sc.wide, out);
        }
    }

    /// Tower digits of `N_{k_r/k}(y)`, an element of `k`, written to `out[..s]`.
    pub(crate) fn norm(&self, y: &[u64], out: &mut [u64], sc: &mut Scratch) {
        sc.acc.copy_from_slice(y);
        sc.a.copy_from_slice(y);
        for _ in 1..self.r {
            self.matvec(&self.frob, self.n, &sc.a, &mut sc.b);
            std::mem::swap(&mut sc.a, &mut sc.b);
            sc.c.copy_from_slice(&sc.acc);
            self.mul_add(&sc.c, &sc.a, None, &mut sc.wide, &mut sc.acc);
        }
        self.matvec(&self.from_power, self.s, &sc.acc, out);
    }

    /// The `F_p`-linear form `t -> sum_i w_i t_i` on tower digits, rewritten for power coordinates.
    pub(crate) fn form(&self, w: &[u64]) -> Vec<u64> {
        let (n, p) = (self.n, self.p);
        (0..n)
            .map(|j| {
                (0..n).fold(0, |acc, i| {
                    add_mod(acc, mul_mod(w[i], self.from_power[i * n + j], p), p)
                })
            })
            .collect()
    }
}

impl PowerBasis {
    /// `sum_j w_j y_j mod p` for a form produced by [`PowerBasis::form`].
    pub(crate) fn dot(&self, w: &[u64], y: &[u64]) -> u64 {
        w.iter().zip(y).map(|(&a, &b)| a * b).sum::<u64>() % self.p
    }
}

/// A polynomial over `k_r` ready for enumeration in power coordinates.
pub(crate) struct FastPoly {
    pub(crate) pb: PowerBasis,
    coeffs: Vec<u64>,
}

impl FastPoly {
    pub(crate) fn new(f: &Poly<ExtCtx>) -> Option<Self> {
        let pb = PowerBasis::new(f.field())?;
        let coeffs = f.coeffs().iter().flat_map(|c| pb.power_coords(c.coeffs())).collect();
        Some(FastPoly { pb, coeffs })
    }

    /// Sums `term(x, f(x))` over the elements with index in `[lo, hi)` that pass `keep`;
    /// the index of `x` is its power coordinates read as base-`p` digits.
    pub(crate) fn fold<T: Float>(
        &self,
        lo: u64,
        hi: u64,
        mut keep: impl FnMut(&[u64], &mut Scratch) -> bool,
        mut term: impl FnMut(&[u64], &[u64], &mut Scratch) -> Complex<T>,
    ) -> Complex<T> {
        let (n, p) = (self.pb.n, self.pb.p);
        let mut x = vec![0u64; n];
        let mut i = lo;
        for d in x.iter_mut() {
            *d = i % p;
            i /= p;
        }
        let mut y = vec![0u64; n];
        let mut sc = self.pb.scratch();
        let mut acc = Complex::new(T::zero(), T::zero());
        for _ in lo..hi {
            if keep(&x, &mut sc) {
                self.pb.eval(&self.coeffs, &x, &mut y, &mut sc);
                acc = acc + term(&x, &y, &mut sc);
            }
            for d in x.iter_mut() {
                *d += 1;
                if *d == p {
                    *d = 0;
                } else {
                    break;
                }
            }
        }
        acc
    }
}

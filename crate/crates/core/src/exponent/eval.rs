//! Flat-array evaluation of `(I(U;X), I(U;Y))` for the search loops.
//!
//! A channel is stored row-major as `w[x * nu + u] = P(u | x)`.

use super::model::SourceModel;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Point {
    pub i_ux: f64,
    pub i_uy: f64,
}

pub(crate) struct Evaluator {
    pub nx: usize,
    pub ny: usize,
    pub nu: usize,
    px: Vec<f64>,
    py: Vec<f64>,
    pxy: Vec<f64>,
}

impl Evaluator {
    pub fn new(model: &SourceModel, nu: usize) -> Self {
        Evaluator {
            nx: model.x_alphabet(),
            ny: model.y_alphabet(),
            nu,
            px: model.px().probs().to_vec(),
            py: model.py().probs().to_vec(),
            pxy: model.pxy().probs().to_vec(),
        }
    }

    pub fn eval(&self, w: &[f64], scratch: &mut Vec<f64>) -> Point {
        let (nx, ny, nu) = (self.nx, self.ny, self.nu);
        scratch.clear();
        scratch.resize(nu + nu * ny, 0.0);
        let (pu, puy) = scratch.split_at_mut(nu);
        for x in 0..nx {
            let px = self.px[x];
            let row = &w[x * nu..(x + 1) * nu];
            let pxy = &self.pxy[x * ny..(x + 1) * ny];
            for (u, &wu) in row.iter().enumerate() {
                if wu == 0.0 {
                    continue;
                }
                pu[u] += px * wu;
                let dst = &mut puy[u * ny..(u + 1) * ny];
                for (d, &p) in dst.iter_mut().zip(pxy) {
                    *d += wu * p;
                }
            }
        }
        let mut i_ux = 0.0;
        for x in 0..nx {
            let px = self.px[x];
            if px == 0.0 {
                continue;
            }
            for (u, &wu) in w[x * nu..(x + 1) * nu].iter().enumerate() {
                if wu > 0.0 {
                    i_ux += px * wu * (wu / pu[u]).log2();
                }
            }
        }
        let mut i_uy = 0.0;
        for u in 0..nu {
            if pu[u] == 0.0 {
                continue;
            }
            for (y, &p) in puy[u * ny..(u + 1) * ny].iter().enumerate() {
                if p > 0.0 {
                    i_uy += p * (p / (pu[u] * self.py[y])).log2();
                }
            }
        }
        Point {
            i_ux: i_ux.max(0.0),
            i_uy: i_uy.max(0.0),
        }
    }

    pub fn u_marginal(&self, w: &[f64]) -> Vec<f64> {
        let mut pu = vec![0.0; self.nu];
        for x in 0..self.nx {
            for u in 0..self.nu {
                pu[u] += self.px[x] * w[x * self.nu + u];
            }
        }
        pu
    }

    /// Pulls an over-budget channel back onto `I(U;X) = budget` by mixing
    /// every row toward the U-marginal, which leaves that marginal fixed and
    /// sends `I(U;X)` to zero. Writes the result into `w`.
    pub fn project(&self, w: &mut [f64], budget: f64, scratch: &mut Vec<f64>) -> Point {
        let start = self.eval(w, scratch);
        if start.i_ux <= budget {
            return start;
        }
        let pu = self.u_marginal(w);
        let base = w.to_vec();
        let mut mixed = vec![0.0; w.len()];
        let at = |t: f64, out: &mut [f64], scratch: &mut Vec<f64>| {
            for x in 0..self.nx {
                for u in 0..self.nu {
                    let i = x * self.nu + u;
                    out[i] = (1.0 - t) * base[i] + t * pu[u];
                }
            }
            self.eval(out, scratch)
        };

        // Illinois false position on f(t) = I(U;X)(t) - budget, f(0) > 0 >= f(1).
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut f_lo = start.i_ux - budget;
        let mut f_hi = -budget;
        let mut best_hi = Point { i_ux: 0.0, i_uy: 0.0 };
        let mut side = 0i8;
        for _ in 0..200 {
            if hi - lo < 1e-15 || f_hi > -1e-14 {
                break;
            }
            let mut t = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if !(t > lo && t < hi) {
                t = 0.5 * (lo + hi);
            }
            let p = at(t, &mut mixed, scratch);
            let f = p.i_ux - budget;
            if f > 0.0 {
                lo = t;
                f_lo = f;
                if side == -1 {
                    f_hi *= 0.5;
                }
                side = -1;
            } else {
                hi = t;
                f_hi = f;
                best_hi = p;
                if side == 1 {
                    f_lo *= 0.5;
                }
                side = 1;
            }
        }
        if hi == 1.0 {
            best_hi = at(1.0, &mut mixed, scratch);
        } else {
            at(hi, &mut mixed, scratch);
        }
        w.copy_from_slice(&mixed);
        best_hi
    }
}

/// Clamps round-off and renormalizes each row.
pub(crate) fn clean_rows(w: &mut [f64], nu: usize) {
    for row in w.chunks_mut(nu) {
        for v in row.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let s: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= s;
        }
    }
}

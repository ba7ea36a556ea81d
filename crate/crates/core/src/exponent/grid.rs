//! Exhaustive scan over channels whose rows sit on a regular simplex grid.

use rayon::prelude::*;

use super::eval::{Evaluator, Point};
use super::model::{ExponentQuery, SourceModel};
use super::{finish, ExponentResult, FEASIBILITY_SLACK};
use crate::error::{Error, Result};

/// Refuse scans larger than this many channels.
pub const GRID_GUARD: f64 = 1e8;

/// All points of `{k/steps : k ∈ ℕ^nu, Σk = steps}` in lexicographic order
/// of the integer compositions.
pub(crate) fn simplex_grid(nu: usize, steps: u32) -> Vec<Vec<f64>> {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(steps, nu, &mut Vec::with_capacity(nu), &mut out);
    out.into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / steps as f64).collect())
        .collect()
}

/// Number of grid points on one row: `C(steps + nu - 1, nu - 1)`.
pub(crate) fn simplex_grid_size(nu: usize, steps: u32) -> f64 {
    let mut c = 1.0f64;
    for i in 1..nu {
        c = c * (steps as f64 + i as f64) / i as f64;
    }
    c.round()
}

pub(crate) fn steps_for(resolution: f64) -> Result<u32> {
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::Domain(format!("grid resolution {resolution} outside (0, 1]")));
    }
    let steps = (1.0 / resolution).round();
    if (steps * resolution - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "grid resolution {resolution} does not divide 1"
        )));
    }
    Ok(steps as u32)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Scored {
    pub point: Point,
    pub index: u64,
}

/// Strict total order: larger `I(U;Y)`, then smaller `I(U;X)`, then earlier
/// index. Being total, the parallel reduction below is schedule-independent.
pub(crate) fn better(a: &Scored, b: &Scored) -> bool {
    if a.point.i_uy != b.point.i_uy {
        return a.point.i_uy > b.point.i_uy;
    }
    if a.point.i_ux != b.point.i_ux {
        return a.point.i_ux < b.point.i_ux;
    }
    a.index < b.index
}

pub(crate) fn decode_channel(rows: &[Vec<f64>], nx: usize, mut index: u64, w: &mut [f64]) {
    let nu = rows[0].len();
    let r = rows.len() as u64;
    for x in (0..nx).rev() {
        let row = &rows[(index % r) as usize];
        w[x * nu..(x + 1) * nu].copy_from_slice(row);
        index /= r;
    }
}

#[derive(Clone, Debug)]
pub struct GridOptions {
    pub resolution: f64,
    /// Defaults to `|X| + 1`.
    pub u_alphabet: Option<usize>,
    pub guard: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            resolution: 0.05,
            u_alphabet: None,
            guard: GRID_GUARD,
        }
    }
}

impl GridOptions {
    pub fn with_resolution(resolution: f64) -> Self {
        GridOptions {
            resolution,
            ..Default::default()
        }
    }
}

/// Brute-force maximizer over every grid channel satisfying
/// `(1-ε) I(U;X) <= R`. Independent of the local search in the solver.
pub fn grid_oracle(
    model: &SourceModel,
    query: &ExponentQuery,
    opts: &GridOptions,
) -> Result<ExponentResult> {
    query.validate()?;
    let nx = model.x_alphabet();
    let nu = opts.u_alphabet.unwrap_or(nx + 1);
    if nu == 0 {
        return Err(Error::Domain("auxiliary alphabet must be non-empty".into()));
    }
    let steps = steps_for(opts.resolution)?;
    let per_row = simplex_grid_size(nu, steps);
    let total = per_row.powi(nx as i32);
    if total > opts.guard {
        return Err(Error::GuardExceeded {
            what: "grid oracle",
            estimate: total,
            limit: opts.guard,
        });
    }
    let rows = simplex_grid(nu, steps);
    let ev = Evaluator::new(model, nu);
    let budget = query.mutual_information_budget() + FEASIBILITY_SLACK;

    let best = (0..total as u64)
        .into_par_iter()
        .fold(
            || (None::<Scored>, vec![0.0; nx * nu], Vec::new()),
            |(best, mut w, mut scratch), index| {
                decode_channel(&rows, nx, index, &mut w);
                let point = ev.eval(&w, &mut scratch);
                let cand = Scored { point, index };
                let best = if point.i_ux > budget {
                    best
                } else {
                    match best {
                        Some(b) if !better(&cand, &b) => Some(b),
                        _ => Some(cand),
                    }
                };
                (best, w, scratch)
            },
        )
        .map(|(b, _, _)| b)
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(a), Some(b)) => Some(if better(&a, &b) { a } else { b }),
                (a, None) => a,
                (None, b) => b,
            },
        )
        .ok_or_else(|| Error::Domain("no feasible grid channel".into()))?;

    let mut w = vec![0.0; nx * nu];
    decode_channel(&rows, nx, best.index, &mut w);
    finish(model, query, w, nu, true, None)
}

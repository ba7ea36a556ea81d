use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::eval::{clean_rows, Evaluator, Point};
use super::grid::{better, decode_channel, simplex_grid, simplex_grid_size, Scored};
use super::model::{objective, ExponentQuery, SourceModel};
use super::{finish, ExponentResult, FEASIBILITY_SLACK};
use crate::error::{Error, Result};
use crate::prob::Channel;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Auxiliary alphabet size; `None` means `|X| + 1`.
    pub u_alphabet: Option<usize>,
    /// Simplex step of the seeding grid.
    pub coarse_step: f64,
    /// The seeding grid is coarsened until it has at most this many channels.
    pub coarse_budget: f64,
    /// Seeds kept from the grid, separately for feasible and projected points.
    pub top_k: usize,
    /// Extra Dirichlet-distributed seeds.
    pub random_starts: usize,
    pub seed: u64,
    /// Target accuracy on theta; the search stops once its step falls below it.
    pub tolerance: f64,
    /// Maximizers within this much of the best theta count as tied.
    pub tie_window: f64,
    pub max_sweeps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            u_alphabet: None,
            coarse_step: 0.05,
            coarse_budget: 2e5,
            top_k: 6,
            random_starts: 4,
            seed: 0x5eed,
            tolerance: 1e-6,
            tie_window: 1e-12,
            max_sweeps: 20_000,
        }
    }
}

/// Maximizes `I(U;Y)` over `P_{U|X}` subject to `(1-ε) I(U;X) <= R`.
///
/// Seeds come from a coarse simplex grid (best feasible points, plus the best
/// infeasible points pulled back onto the constraint), then each seed is
/// refined by coordinate moves that shift mass between two entries of one row,
/// re-projecting onto the constraint whenever a move leaves it.
pub fn solve_exponent(
    model: &SourceModel,
    query: &ExponentQuery,
    opts: &SolverOptions,
) -> Result<ExponentResult> {
    query.validate()?;
    let nx = model.x_alphabet();
    let nu = opts.u_alphabet.unwrap_or(nx + 1);
    if nu == 0 {
        return Err(Error::Domain("auxiliary alphabet must be non-empty".into()));
    }

    if model.is_degenerate() || query.rate == 0.0 {
        let mut w = vec![0.0; nx * nu];
        for x in 0..nx {
            w[x * nu] = 1.0;
        }
        return finish(model, query, w, nu, true, None);
    }

    let budget = query.mutual_information_budget();
    if nu >= nx {
        // U = X is optimal by data processing whenever it is affordable.
        let id = Channel::identity_padded(nx, nu)?;
        let (i_ux, _) = objective(model, &id)?;
        if i_ux <= budget + FEASIBILITY_SLACK {
            let w = id.rows().iter().flat_map(|r| r.probs().to_vec()).collect();
            return finish(model, query, w, nu, true, None);
        }
    }

    let ev = Evaluator::new(model, nu);
    let seeds = seeds(&ev, budget, opts);

    let outcomes: Vec<(Vec<f64>, Point, bool)> = seeds
        .into_par_iter()
        .map(|w| refine(&ev, w, budget, opts))
        .collect();

    let top = outcomes
        .iter()
        .map(|(_, p, _)| p.i_uy)
        .fold(f64::NEG_INFINITY, f64::max);
    let (w, _, converged) = outcomes
        .into_iter()
        .enumerate()
        .filter(|(_, (_, p, _))| p.i_uy >= top - opts.tie_window)
        .min_by(|(ia, (_, a, _)), (ib, (_, b, _))| {
            a.i_ux.total_cmp(&b.i_ux).then(ia.cmp(ib))
        })
        .map(|(_, o)| o)
        .expect("at least one seed");
    let warning = (!converged).then(|| {
        format!(
            "local search hit the sweep limit ({}); returning best-so-far",
            opts.max_sweeps
        )
    });
    finish(model, query, w, nu, converged, warning)
}

fn seeds(ev: &Evaluator, budget: f64, opts: &SolverOptions) -> Vec<Vec<f64>> {
    let (nx, nu) = (ev.nx, ev.nu);
    let mut steps = (1.0 / opts.coarse_step).round().max(1.0) as u32;
    while steps > 1 && simplex_grid_size(nu, steps).powi(nx as i32) > opts.coarse_budget {
        steps -= 1;
    }
    let rows = simplex_grid(nu, steps);
    let total = (rows.len() as f64).powi(nx as i32) as u64;

    let scored: Vec<(Scored, bool)> = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0.0; nx * nu], Vec::new()),
            |(w, scratch), index| {
                decode_channel(&rows, nx, index, w);
                let point = ev.eval(w, scratch);
                (Scored { point, index }, point.i_ux <= budget)
            },
        )
        .collect();

    let mut feasible: Vec<Scored> = scored.iter().filter(|s| s.1).map(|s| s.0).collect();
    sort_best_first(&mut feasible);

    // Infeasible points ranked by I(U;Y)/I(U;X), then pulled onto the constraint.
    let mut infeasible: Vec<Scored> = scored.iter().filter(|s| !s.1).map(|s| s.0).collect();
    infeasible.sort_by(|a, b| {
        let ra = a.point.i_uy / a.point.i_ux;
        let rb = b.point.i_uy / b.point.i_ux;
        rb.total_cmp(&ra).then(a.index.cmp(&b.index))
    });
    infeasible.truncate(4 * opts.top_k);
    let mut projected: Vec<(Scored, Vec<f64>)> = infeasible
        .par_iter()
        .map(|s| {
            let mut w = vec![0.0; nx * nu];
            decode_channel(&rows, nx, s.index, &mut w);
            let point = ev.project(&mut w, budget, &mut Vec::new());
            (Scored { point, index: s.index }, w)
        })
        .collect();
    projected.sort_by(|a, b| order(&a.0, &b.0));

    let mut out: Vec<Vec<f64>> = feasible
        .iter()
        .take(opts.top_k)
        .map(|s| {
            let mut w = vec![0.0; nx * nu];
            decode_channel(&rows, nx, s.index, &mut w);
            w
        })
        .collect();
    out.extend(projected.into_iter().take(opts.top_k).map(|(_, w)| w));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let mut w: Vec<f64> = (0..nx * nu)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        clean_rows(&mut w, nu);
        ev.project(&mut w, budget, &mut Vec::new());
        out.push(w);
    }
    out
}

fn order(a: &Scored, b: &Scored) -> std::cmp::Ordering {
    if a == b {
        std::cmp::Ordering::Equal
    } else if better(a, b) {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

fn sort_best_first(v: &mut [Scored]) {
    v.sort_by(order);
}

fn refine(ev: &Evaluator, mut w: Vec<f64>, budget: f64, opts: &SolverOptions) -> (Vec<f64>, Point, bool) {
    let (nx, nu) = (ev.nx, ev.nu);
    let mut scratch = Vec::new();
    let mut cur = ev.project(&mut w, budget, &mut scratch);
    let mut cand = w.clone();
    let mut step = opts.coarse_step.max(opts.tolerance);
    let min_step = opts.tolerance * 1e-3;
    let mut sweeps = 0;
    while step >= min_step {
        sweeps += 1;
        if sweeps > opts.max_sweeps {
            clean_rows(&mut w, nu);
            let p = ev.eval(&w, &mut scratch);
            return (w, p, false);
        }
        let mut improved = false;
        for x in 0..nx {
            for from in 0..nu {
                for to in 0..nu {
                    if from == to {
                        continue;
                    }
                    let d = step.min(w[x * nu + from]);
                    if d <= 0.0 {
                        continue;
                    }
                    cand.copy_from_slice(&w);
                    cand[x * nu + from] -= d;
                    cand[x * nu + to] += d;
                    let mut p = ev.eval(&cand, &mut scratch);
                    if p.i_ux > budget {
                        p = ev.project(&mut cand, budget, &mut scratch);
                    }
                    let gain = p.i_uy - cur.i_uy;
                    if gain > 1e-15 || (gain >= -1e-15 && p.i_ux < cur.i_ux - 1e-15) {
                        std::mem::swap(&mut w, &mut cand);
                        cur = p;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    clean_rows(&mut w, nu);
    let p = ev.project(&mut w, budget, &mut scratch);
    (w, p, true)
}

/// `θ*_ε(R)` at each rate in `rates` (ascending). Points are solved
/// independently and then carried forward: a channel feasible at one rate is
/// feasible at every larger one, so each theta is at least its predecessor.
pub fn sweep_curve(
    model: &SourceModel,
    epsilon: f64,
    rates: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<ExponentResult>> {
    if rates.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("sweep rates must be sorted ascending".into()));
    }
    let solved: Vec<ExponentResult> = rates
        .par_iter()
        .map(|&rate| solve_exponent(model, &ExponentQuery::new(epsilon, rate)?, opts))
        .collect::<Result<_>>()?;

    let mut out: Vec<ExponentResult> = Vec::with_capacity(solved.len());
    for r in solved {
        let next = match out.last() {
            Some(prev) if prev.theta > r.theta => ExponentResult {
                rate: r.rate,
                ..prev.clone()
            },
            _ => r,
        };
        out.push(next);
    }
    debug_assert!(out.windows(2).all(|w| w[1].theta >= w[0].theta));
    Ok(out)
}

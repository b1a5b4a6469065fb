//! Search for `g` with `pr(Ad(g)X) ≈ target`.
//!
//! Each restart runs coordinate descent along the one-parameter subgroups
//! `exp(s B_k)` with a halving step, then a damped Gauss–Newton polish whose
//! Jacobian column `k` is `[B_k, Y] x₀` for the current `Y = Ad(g)X`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{adjoint, ExpFactor, GroupElement, SphereModel, ORBIT_FACTORS};
use crate::error::{Error, Result};
use crate::numkit::{lstsq, mat_exp, norm, sub, RngStream};
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub tol: f64,
    /// Maximum objective evaluations over all restarts.
    pub budget: usize,
    pub restarts: usize,
    pub initial_step: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            budget: 100_000,
            restarts: 32,
            initial_step: std::f64::consts::FRAC_PI_4,
            iterations: 200,
            seed: 0,
        }
    }
}

/// Restarts evaluated together; fixed so results never depend on the pool size.
const BATCH: usize = 4;
const POLISH_ITERATIONS: usize = 60;
/// Descent hands over to the polish once the residual is this small
/// relative to the problem scale.
const HANDOVER: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugationResult {
    pub g: GroupElement,
    pub distance: f64,
    pub success: bool,
    pub evaluations: usize,
    /// Index of the restart that produced `g`.
    pub restart: usize,
}

struct Problem<'a> {
    model: &'a SphereModel,
    target: &'a [f64],
}

impl Problem<'_> {
    fn distance(&self, y: &Matrix) -> f64 {
        norm(&sub(&self.model.pr(y), self.target))
    }
}

struct Walker<'a> {
    problem: &'a Problem<'a>,
    g: GroupElement,
    y: Matrix,
    f: f64,
    evals: usize,
    cap: usize,
}

impl Walker<'_> {
    fn try_move(&mut self, factor: ExpFactor, e: &Matrix) -> bool {
        let y = adjoint(e, &self.y);
        let f = self.problem.distance(&y);
        self.evals += 1;
        if f < self.f {
            self.g.push_left(factor, e);
            self.y = y;
            self.f = f;
            true
        } else {
            false
        }
    }

    fn descend(&mut self, cfg: &SearchConfig, stop: f64) {
        let basis = &self.problem.model.lie_basis;
        let mut step = cfg.initial_step;
        let mut exps = step_exps(basis, step);
        for _ in 0..cfg.iterations {
            if self.f <= stop || self.evals >= self.cap {
                return;
            }
            let mut moved = false;
            for (k, (plus, minus)) in exps.iter().enumerate() {
                if self.evals >= self.cap {
                    return;
                }
                if self.try_move(ExpFactor::Generator { index: k, t: step }, plus)
                    || self.try_move(ExpFactor::Generator { index: k, t: -step }, minus)
                {
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
                exps = step_exps(basis, step);
            }
        }
    }

    fn polish(&mut self, tol: f64) {
        let model = self.problem.model;
        let d = model.dim();
        let mut damping: f64 = 1e-6;
        for _ in 0..POLISH_ITERATIONS {
            if self.f <= tol * 1e-3 || self.evals + d + 1 > self.cap {
                return;
            }
            let r = sub(&model.pr(&self.y), self.problem.target);
            let n = r.len();
            let mut aug = Matrix::zeros(n + d, d);
            for (k, b) in model.lie_basis.iter().enumerate() {
                let col = model.pr(&b.commutator(&self.y));
                for (i, v) in col.iter().enumerate() {
                    aug[(i, k)] = *v;
                }
            }
            self.evals += d;
            let mut improved = false;
            for _ in 0..8 {
                let s = damping.sqrt();
                for k in 0..d {
                    aug[(n + k, k)] = s;
                }
                let mut rhs: Vec<f64> = r.iter().map(|v| -v).collect();
                rhs.resize(n + d, 0.0);
                let Ok((delta, _)) = lstsq(&aug, &rhs) else {
                    return;
                };
                let Ok(e) = model.element(&delta).and_then(|m| mat_exp(&m)) else {
                    return;
                };
                if self.try_move(ExpFactor::Element { coeffs: delta }, &e) {
                    damping = (damping / 4.0).max(1e-15);
                    improved = true;
                    break;
                }
                damping *= 8.0;
            }
            if !improved {
                return;
            }
        }
    }
}

fn step_exps(basis: &[Matrix], step: f64) -> Vec<(Matrix, Matrix)> {
    basis
        .iter()
        .map(|b| {
            let plus = mat_exp(&b.scale(step)).expect("square generator");
            let minus = plus.transpose();
            (plus, minus)
        })
        .collect()
}

/// Minimizes `‖pr(Ad(g)X) − target‖` over products of exponentials.
///
/// Restart 0 starts at the identity, the others at random products of
/// exponentials drawn from per-restart streams. Restarts run in fixed-size
/// parallel batches and the first successful index wins, so the outcome is
/// reproducible for a given seed. An exhausted budget is reported through
/// `success = false` rather than an error.
pub fn find_conjugation(
    model: &SphereModel,
    x: &Matrix,
    target: &[f64],
    cfg: &SearchConfig,
) -> Result<ConjugationResult> {
    if target.len() != model.ambient_dim {
        return Err(Error::Dimension(format!(
            "target of length {} in R^{}",
            target.len(),
            model.ambient_dim
        )));
    }
    if !(cfg.tol > 0.0) || cfg.restarts == 0 {
        return Err(Error::Precondition("search needs tol > 0 and at least one restart".into()));
    }
    let problem = Problem { model, target };
    let scale = 1.0 + norm(&model.pr(x)) + norm(target);
    let cap = (cfg.budget / cfg.restarts).max(1);
    let mut rng = RngStream::new(cfg.seed);
    let streams: Vec<RngStream> = (0..cfg.restarts).map(|_| rng.fork()).collect();

    let run = |r: usize, mut stream: RngStream| {
        let g = if r == 0 {
            GroupElement::identity(model.ambient_dim)
        } else {
            model.random_group_element(&mut stream, ORBIT_FACTORS)
        };
        let y = adjoint(&g.matrix, x);
        let f = problem.distance(&y);
        let mut w = Walker {
            problem: &problem,
            g,
            y,
            f,
            evals: 1,
            cap,
        };
        if w.f > cfg.tol * 1e-3 {
            // Leave room for the polish: near extremal targets the descent
            // alone stalls well above tolerance.
            let reserve = (POLISH_ITERATIONS * (model.dim() + 2)).min(cap / 2);
            w.cap = cap - reserve;
            w.descend(cfg, HANDOVER * scale);
            w.cap = cap;
            w.polish(cfg.tol);
        }
        (r, w)
    };

    let mut evaluations = 0;
    let mut best: Option<(usize, Walker)> = None;
    let indexed: Vec<(usize, RngStream)> = streams.into_iter().enumerate().collect();
    for batch in indexed.chunks(BATCH) {
        let done: Vec<(usize, Walker)> = batch
            .par_iter()
            .map(|(r, s)| run(*r, s.clone()))
            .collect();
        for (r, w) in done {
            evaluations += w.evals;
            let better = best.as_ref().map_or(true, |(_, b)| {
                let (ws, bs) = (w.f <= cfg.tol, b.f <= cfg.tol);
                (ws && !bs) || (ws == bs && !bs && w.f < b.f)
            });
            if better {
                best = Some((r, w));
            }
        }
        if best.as_ref().is_some_and(|(_, b)| b.f <= cfg.tol) {
            break;
        }
    }
    let (restart, w) = best.expect("at least one restart");
    Ok(ConjugationResult {
        success: w.f <= cfg.tol,
        distance: w.f,
        g: w.g,
        evaluations,
        restart,
    })
}

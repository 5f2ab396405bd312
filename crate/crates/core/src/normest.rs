//! Lower-bound operator-norm estimation by power iteration.
//!
//! Linear operators are handled through `A A*`. Maximal operators alternate
//! between linearizing at the current function and power-iterating the
//! resulting `T T*`; since every linearization is dominated by the maximal
//! operator on nonnegative inputs, each value reported is a certified lower
//! bound realized by the returned witness.

use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::operators::{AveragingOperator, RectFamily, Selector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once the relative Rayleigh increment falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Run the self-adjointness precheck before iterating.
    pub precheck: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 500, precheck: true }
    }
}

/// Top eigenpair estimate of a symmetric positive semidefinite operator.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Rayleigh quotient after each application.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub value: f64,
    pub witness: GridField,
    /// Rayleigh quotients of the `T T*` iterations that produced `value`.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Verifies `⟨Au, v⟩ = ⟨u, Av⟩` on three pseudo-random pairs to `1e-6` relative.
pub fn check_self_adjoint(apply: &impl Fn(&[f64]) -> Vec<f64>, dim: usize) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_ad ^ dim as u64);
    for _ in 0..3 {
        let u: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let au = apply(&u);
        let av = apply(&v);
        let scale = (norm(&au) * norm(&v)).max(norm(&av) * norm(&u));
        if scale == 0.0 {
            continue;
        }
        let gap = (dot(&au, &v) - dot(&u, &av)).abs() / scale;
        if gap > 1e-6 {
            return Err(Error::NotSelfAdjoint(gap));
        }
    }
    Ok(())
}

/// Power iteration from `start`; the Rayleigh quotients are nondecreasing for PSD input.
pub fn power_iteration(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    start: &[f64],
    opts: &PowerOptions,
) -> Result<Eigen> {
    if opts.precheck {
        check_self_adjoint(&apply, start.len())?;
    }
    let mut v = start.to_vec();
    let s = norm(&v);
    if s == 0.0 || !s.is_finite() {
        v = vec![1.0; start.len()];
    }
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let w = apply(&v);
        let lambda = dot(&w, &v);
        let prev = trace.last().copied();
        trace.push(lambda);
        let wn = norm(&w);
        if wn == 0.0 {
            converged = true;
            break;
        }
        if let Some(prev) = prev {
            if (lambda - prev).abs() <= opts.tol * lambda.abs() {
                converged = true;
                break;
            }
        }
        v = w.into_iter().map(|x| x / wn).collect();
    }
    let value = trace.last().copied().unwrap_or(0.0);
    Ok(Eigen { value, vector: v, trace, converged, iterations })
}

/// `‖A‖` from power iteration on `A A*`, started at `start`.
pub fn estimate_linear_norm(
    op: &AveragingOperator,
    start: &GridField,
    opts: &PowerOptions,
) -> Result<NormEstimate> {
    let n = op.n();
    let eig = power_iteration(
        |g| op.apply(&op.adjoint(&GridField::from_values(n, g.to_vec()))).into_values(),
        start.values(),
        opts,
    )?;
    Ok(finish(op, eig))
}

/// Same as [`estimate_linear_norm`] for an operator given by closures.
pub fn estimate_linear_norm_with(
    apply: impl Fn(&GridField) -> GridField,
    adjoint: impl Fn(&GridField) -> GridField,
    start: &GridField,
    opts: &PowerOptions,
) -> Result<NormEstimate> {
    let n = start.n();
    let eig = power_iteration(
        |g| apply(&adjoint(&GridField::from_values(n, g.to_vec()))).into_values(),
        start.values(),
        opts,
    )?;
    let g = GridField::from_values(n, eig.vector.clone());
    let witness = adjoint(&g).normalized().unwrap_or_else(|| GridField::zeros(n));
    Ok(NormEstimate {
        value: eig.value.max(0.0).sqrt(),
        witness,
        trace: eig.trace,
        converged: eig.converged,
        iterations: eig.iterations,
    })
}

fn finish(op: &AveragingOperator, eig: Eigen) -> NormEstimate {
    let n = op.n();
    let g = GridField::from_values(n, eig.vector.clone());
    let witness = op.adjoint(&g).normalized().unwrap_or_else(|| GridField::zeros(n));
    NormEstimate {
        value: eig.value.max(0.0).sqrt(),
        witness,
        trace: eig.trace,
        converged: eig.converged,
        iterations: eig.iterations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalNormOptions {
    pub rounds: usize,
    pub power: PowerOptions,
    pub seed: u64,
}

impl Default for MaximalNormOptions {
    fn default() -> Self {
        Self { rounds: 4, power: PowerOptions::default(), seed: 0 }
    }
}

/// Positive pseudo-random start field in `[0.5, 1.5)`.
pub fn seeded_start(n: usize, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridField::from_fn(n, |_, _| 0.5 + rng.gen::<f64>())
}

/// Lower bound for the norm of the maximal operator of `family`.
///
/// Starts from the seeded positive field and then from each of `extra_starts`
/// (absolute values are taken). Each chain alternates linearization and power
/// iteration for at most `rounds` rounds, stopping early once a round does not
/// improve. The best value over all chains is returned with its witness.
pub fn estimate_maximal_norm(
    family: &RectFamily,
    opts: &MaximalNormOptions,
    extra_starts: &[GridField],
) -> Result<NormEstimate> {
    let n = family.n();
    let mut starts = vec![seeded_start(n, opts.seed)];
    starts.extend(extra_starts.iter().map(|f| f.abs()));
    let mut best: Option<NormEstimate> = None;
    for start in starts {
        let Some(chain) = run_chain(family, opts, start)? else {
            continue;
        };
        if best.as_ref().map_or(true, |b| chain.value > b.value) {
            best = Some(chain);
        }
    }
    Ok(best.unwrap_or_else(|| NormEstimate {
        value: 0.0,
        witness: GridField::zeros(n),
        trace: Vec::new(),
        converged: true,
        iterations: 0,
    }))
}

fn run_chain(
    family: &RectFamily,
    opts: &MaximalNormOptions,
    start: GridField,
) -> Result<Option<NormEstimate>> {
    let Some(mut f) = start.normalized() else {
        return Ok(None);
    };
    let mut best: Option<NormEstimate> = None;
    let mut trace = Vec::new();
    let mut iterations = 0;
    for round in 0..opts.rounds.max(1) {
        let sel = Selector::from_sup(family, &family.sup(&f));
        let op = sel.operator();
        let Some(g0) = op.apply(&f).normalized() else {
            break;
        };
        let power = PowerOptions { precheck: opts.power.precheck && round == 0, ..opts.power };
        let eig = power_iteration(
            |g| op.apply(&op.adjoint(&GridField::from_values(family.n(), g.to_vec()))).into_values(),
            g0.values(),
            &power,
        )?;
        iterations += eig.iterations;
        trace.extend_from_slice(&eig.trace);
        let est = finish(&op, eig);
        let improved = best.as_ref().map_or(true, |b| est.value > b.value * (1.0 + 1e-9));
        f = est.witness.clone();
        if improved {
            best = Some(NormEstimate { trace: trace.clone(), iterations, ..est });
        } else {
            break;
        }
    }
    Ok(best)
}

//! Random-restart search for symmetric seven-qubit tensors whose marginal on
//! `(0, 1, 2)` is maximally mixed.
//!
//! The unknowns are the 13 orbit values of the full hexagonal symmetry
//! group (rotation, spin flip, reflection). Each restart draws a point from
//! ChaCha8 stream `restart` of `seed`, minimizes the purity excess
//! `Tr rho^2 - 1/8` of the normalized marginal with BFGS, and optionally
//! polishes the result with Gauss-Newton on the distinct isometry residuals.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{hex_component_orbits, hexagon_table, Family, SolutionRecord};
use crate::entanglement::entropy_profile;
use crate::error::Result;
use crate::format::num;
use crate::symmetry::{constraint_equations, ConstraintEquations, SymmetrySpec};

pub const N_VARS: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostKind {
    /// Purity excess of the trace-normalized `(0,1,2)` marginal.
    Purity,
    /// Sum of squared distinct isometry residuals at `Tr rho = 8`.
    Residual,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Acceptance threshold on the purity excess.
    pub cost_threshold: f64,
    pub polish: bool,
    pub class_tol: f64,
    pub cost: CostKind,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            restarts: 200,
            max_iterations: 3000,
            cost_threshold: 1e-18,
            polish: true,
            class_tol: 1e-6,
            cost: CostKind::Purity,
        }
    }
}

/// Cost functions over the 13 orbit values (orbit-id order).
pub struct HexObjective {
    membership: Vec<usize>,
    sizes: Vec<f64>,
    equations: ConstraintEquations,
}

impl Default for HexObjective {
    fn default() -> Self {
        Self::new()
    }
}

impl HexObjective {
    pub fn new() -> Self {
        let table = hexagon_table();
        let equations =
            constraint_equations(&SymmetrySpec::hexagon_full(), &[0, 1, 2]).expect("hexagon equations");
        Self {
            membership: table.membership().to_vec(),
            sizes: table.sizes().iter().map(|&s| s as f64).collect(),
            equations,
        }
    }

    pub fn equations(&self) -> &ConstraintEquations {
        &self.equations
    }

    /// `(V, rho = V V^T)` with `V` the 8x16 operator from legs (3..6) to (0,1,2).
    fn marginal(&self, x: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
        let v = DMatrix::from_fn(8, 16, |r, c| x[self.membership[r * 16 + c]]);
        let rho = &v * v.transpose();
        (v, rho)
    }

    /// Squared tensor norm, `sum_o |orbit o| x_o^2`.
    pub fn norm_sqr(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.sizes).map(|(v, s)| s * v * v).sum()
    }

    pub fn purity_cost(&self, x: &[f64]) -> f64 {
        let (_, rho) = self.marginal(x);
        let tr = rho.trace();
        let mut c = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                let target = if i == j { 0.125 } else { 0.0 };
                let d = rho[(i, j)] / tr - target;
                c += d * d;
            }
        }
        c
    }

    pub fn purity_cost_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let (v, rho) = self.marginal(x);
        let tr = rho.trace();
        let sq: f64 = rho.iter().map(|r| r * r).sum();
        let cost = self.purity_cost(x);
        let gv = (&rho * &v) * (4.0 / (tr * tr)) - &v * (4.0 * sq / (tr * tr * tr));
        let mut g = vec![0.0; N_VARS];
        for r in 0..8 {
            for c in 0..16 {
                g[self.membership[r * 16 + c]] += gv[(r, c)];
            }
        }
        (cost, g)
    }

    /// Rescales `x` so the tensor has squared norm 8, i.e. `rho = I` at a solution.
    pub fn to_residual_scale(&self, x: &[f64]) -> Vec<f64> {
        let s = (8.0 / self.norm_sqr(x)).sqrt();
        x.iter().map(|v| v * s).collect()
    }

    pub fn residual_cost_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let tr = self.norm_sqr(x);
        let s = (8.0 / tr).sqrt();
        let y: Vec<f64> = x.iter().map(|v| v * s).collect();
        let r = DVector::from_vec(self.equations.evaluate(&y));
        let j = self.equations.jacobian(&y);
        let gy = j.transpose() * &r * 2.0;
        // y = s(x) x with grad s = -s W x / tr
        let xg: f64 = x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum();
        let g = (0..N_VARS)
            .map(|k| s * gy[k] - s * self.sizes[k] * x[k] / tr * xg)
            .collect();
        (r.norm_squared(), g)
    }

    pub fn cost_grad(&self, kind: CostKind, x: &[f64]) -> (f64, Vec<f64>) {
        match kind {
            CostKind::Purity => self.purity_cost_grad(x),
            CostKind::Residual => self.residual_cost_grad(x),
        }
    }

    /// Gauss-Newton on the residual system with SVD pseudo-inverse steps.
    pub fn polish(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.to_residual_scale(x);
        let mut best = self.residual_norm(&y);
        for _ in 0..30 {
            let r = DVector::from_vec(self.equations.evaluate(&y));
            let j = self.equations.jacobian(&y);
            let step = match j.svd(true, true).solve(&r, 1e-12) {
                Ok(s) => s,
                Err(_) => break,
            };
            let cand: Vec<f64> = y.iter().zip(step.iter()).map(|(a, b)| a - b).collect();
            let norm = self.residual_norm(&cand);
            if norm.is_nan() || norm >= best {
                break;
            }
            y = cand;
            best = norm;
            if best < 1e-15 {
                break;
            }
        }
        y
    }

    pub fn residual_norm(&self, y: &[f64]) -> f64 {
        self.equations.evaluate(y).iter().map(|r| r * r).sum::<f64>().sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let n = dot(x, x).sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

/// BFGS on the unit sphere with a backtracking Armijo line search. The cost
/// is scale invariant, so its gradient is tangent to the sphere and each
/// accepted point is simply renormalized.
pub fn bfgs(obj: &HexObjective, kind: CostKind, x0: &[f64], max_iter: usize, target: f64) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut x = x0.to_vec();
    normalize(&mut x);
    let (mut f, mut g) = obj.cost_grad(kind, &x);
    let mut h = DMatrix::<f64>::identity(n, n);
    for _ in 0..max_iter {
        if f < target || dot(&g, &g).sqrt() < 1e-16 {
            break;
        }
        let gv = DVector::from_column_slice(&g);
        let mut p: Vec<f64> = (-(&h * &gv)).iter().copied().collect();
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            h = DMatrix::identity(n, n);
            p = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            normalize(&mut xn);
            let (fnew, gnew) = obj.cost_grad(kind, &xn);
            if fnew <= f + 1e-4 * t * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else { break };
        let s = DVector::from_iterator(n, xn.iter().zip(&x).map(|(a, b)| a - b));
        let y = DVector::from_iterator(n, gnew.iter().zip(&g).map(|(a, b)| a - b));
        let sy = s.dot(&y);
        if sy > 1e-300 {
            let rho = 1.0 / sy;
            let i = DMatrix::<f64>::identity(n, n);
            let left = &i - &s * y.transpose() * rho;
            let right = &i - &y * s.transpose() * rho;
            h = &left * &h * &right + &s * s.transpose() * rho;
        }
        x = xn;
        f = fnew;
        g = gnew;
    }
    (x, f)
}

/// One accepted solution and the restart that produced it.
#[derive(Clone, Debug)]
pub struct FoundSolution {
    pub restart: usize,
    pub cost: f64,
    pub record: SolutionRecord,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solutions: Vec<FoundSolution>,
    pub restarts: usize,
    pub failed: usize,
    pub duplicates: usize,
}

/// Start point of a restart: 13 uniform draws in `[-1, 1]`, unit norm.
pub fn restart_point(seed: u64, restart: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let mut x: Vec<f64> = (0..N_VARS).map(|_| rng.random_range(-1.0..=1.0)).collect();
    normalize(&mut x);
    x
}

/// Components `a_1..a_13` of a unit-norm tensor built from orbit values `x`.
pub fn components_from_orbits(obj: &HexObjective, x: &[f64]) -> [f64; 13] {
    let s = obj.norm_sqr(x).sqrt();
    let ids = hex_component_orbits();
    let mut a = [0.0; 13];
    for k in 0..13 {
        a[k] = x[ids[k]] / s;
    }
    a
}

fn run_restart(obj: &HexObjective, opts: &SolveOptions, restart: usize) -> Option<(f64, [f64; 13])> {
    let x0 = restart_point(opts.seed, restart);
    let (mut x, _) = bfgs(obj, opts.cost, &x0, opts.max_iterations, opts.cost_threshold * 1e-3);
    if opts.polish {
        let y = obj.polish(&x);
        if obj.purity_cost(&y) < obj.purity_cost(&x) {
            x = y;
        }
    }
    let cost = obj.purity_cost(&x);
    if cost.is_nan() || cost >= opts.cost_threshold {
        return None;
    }
    Some((cost, components_from_orbits(obj, &x)))
}

fn same_up_to_sign(a: &[f64; 13], b: &[f64; 13], tol: f64) -> bool {
    let plus = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let minus = a.iter().zip(b).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
    plus.min(minus) <= tol
}

/// Runs all restarts (in parallel), keeps converged ones, removes duplicates
/// up to a global sign, classifies, and sorts by (cost, components).
pub fn solve_hexagonal(opts: &SolveOptions) -> Result<SolveReport> {
    let obj = HexObjective::new();
    let raw: Vec<Option<(f64, [f64; 13])>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| run_restart(&obj, opts, r))
        .collect();
    let failed = raw.iter().filter(|r| r.is_none()).count();
    let mut kept: Vec<(usize, f64, [f64; 13])> = Vec::new();
    let mut duplicates = 0;
    for (restart, r) in raw.into_iter().enumerate() {
        let Some((cost, a)) = r else { continue };
        if kept.iter().any(|k| same_up_to_sign(&k.2, &a, 1e-6)) {
            duplicates += 1;
            continue;
        }
        kept.push((restart, cost, a));
    }
    let mut solutions = kept
        .into_iter()
        .map(|(restart, cost, a)| {
            let tensor = crate::catalog::hexagon_from_components(&a)?;
            let profile = entropy_profile(&tensor)?;
            let mut record = SolutionRecord {
                family: Family::Custom,
                params: vec![],
                components: a.to_vec(),
                tensor,
                entropy_profile: Some(profile),
            };
            record.family = classify(&record, opts.class_tol);
            Ok(FoundSolution { restart, cost, record })
        })
        .collect::<Result<Vec<_>>>()?;
    solutions.sort_by(|a, b| {
        a.cost.total_cmp(&b.cost).then_with(|| {
            a.record
                .components
                .iter()
                .zip(&b.record.components)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(SolveReport {
        solutions,
        restarts: opts.restarts,
        failed,
        duplicates,
    })
}

/// Family of a hexagonal solution, judged on its unit-norm components.
///
/// Type I needs the four difference relations and the constant
/// `delta_014 = 3/32` of that family; Type III the modulus equalities;
/// Type II the quadratic relation. Checked in the order I, III, II.
pub fn classify(rec: &SolutionRecord, tol: f64) -> Family {
    if rec.components.len() != 13 {
        return Family::Custom;
    }
    let norm = rec.tensor.norm_sqr().sqrt();
    let a: Vec<f64> = rec.components.iter().map(|v| v / norm).collect();
    let close = |x: f64, y: f64| (x - y).abs() <= tol;

    let d1 = a[1] - a[0];
    let d2 = a[4] - a[5];
    let d3 = a[6] - a[7];
    let d4 = a[3] - a[2];
    let relations = close(d1, d2)
        && close(d1, d3)
        && close(d1.abs(), 1.0 / (8.0 * SQRT_2))
        && close(d4.abs(), 1.0 / (4.0 * SQRT_2));
    if relations {
        let on_curve = rec
            .entropy_profile
            .map(|p| close(p.s014, 3.0 / 32.0))
            .unwrap_or(false);
        if on_curve {
            return Family::HexTypeI;
        }
    }
    let type3 = close(a[0].abs(), a[9].abs())
        && close(a[1].abs(), a[8].abs())
        && close(a[2].abs(), a[3].abs())
        && close(a[2].abs(), a[11].abs());
    if type3 {
        return Family::HexTypeIII;
    }
    let q = (a[0] - a[1]).powi(2) + 3.0 * (a[2] - a[3]).powi(2);
    if close(q, 0.125) {
        return Family::HexTypeII;
    }
    Family::Isolated
}

pub const FIG3_HEADER: &str =
    "seed,restart,cost,ds013,ds014,ds123,ds124,ds135,type,a1,a2,a3,a4,a5,a6,a7,a8,a9,a10,a11,a12,a13";

/// CSV text (header plus one row per solution).
pub fn fig3_csv(seed: u64, report: &SolveReport) -> String {
    let mut out = String::from(FIG3_HEADER);
    out.push('\n');
    for s in &report.solutions {
        let p = s.record.entropy_profile.expect("solver records carry a profile");
        let _ = write!(out, "{seed},{},{}", s.restart, num(s.cost));
        for v in p.values() {
            let _ = write!(out, ",{}", num(v));
        }
        let _ = write!(out, ",{}", s.record.family.label());
        for v in &s.record.components {
            let _ = write!(out, ",{}", num(*v));
        }
        out.push('\n');
    }
    out
}

/// Runs the solver and returns the CSV rows.
pub fn scan_fig3(opts: &SolveOptions) -> Result<(SolveReport, String)> {
    let report = solve_hexagonal(opts)?;
    let csv = fig3_csv(opts.seed, &report);
    Ok((report, csv))
}

// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex numerics: matrix exponential and logarithm, operator norm,
//! and Gauss-Legendre quadrature over an interval and over the time-ordered
//! triangle `0 <= t2 <= t1 <= tau`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_EVALUATIONS: usize = 1 << 20;
pub const DEFAULT_GAUSS_NODES: usize = 4;

/// Distance from the closed negative real axis below which `logm_principal`
/// refuses to pick a branch.
pub const BRANCH_CUT_TOL: f64 = 1e-8;

const SINGULAR_TOL: f64 = 1e-14;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |m - m^dagger|`, relative to `max |m|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let scale = max_abs(m);
    if scale == 0.0 {
        return 0.0;
    }
    max_abs(&(m - m.adjoint())) / scale
}

/// `max |u^dagger u - I|`.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

pub fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Sum in a fixed balanced-tree order so results do not depend on how the
/// terms were produced.
pub fn pairwise_sum(terms: &[CMatrix]) -> Option<CMatrix> {
    match terms.len() {
        0 => None,
        1 => Some(terms[0].clone()),
        len => {
            let (left, right) = terms.split_at(len / 2);
            Some(pairwise_sum(left)? + pairwise_sum(right)?)
        }
    }
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant of degree at most 13.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    let n = check_square(m)?;
    check_finite(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    let ident = CMatrix::identity(n, n);
    let norm = one_norm(m);

    for &(degree, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            return pade_low(m, coeffs, &ident);
        }
    }

    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m * c(0.5f64.powi(squarings), 0.0);
    let mut r = pade13(&a, &ident)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    check_finite(&r)?;
    Ok(r)
}

fn pade_low(a: &CMatrix, b: &[f64], ident: &CMatrix) -> Result<CMatrix> {
    let a2 = a * a;
    let mut power = ident.clone();
    let mut u_acc = ident * c(b[1], 0.0);
    let mut v = ident * c(b[0], 0.0);
    for k in 1..b.len() / 2 {
        power = &power * &a2;
        u_acc += &power * c(b[2 * k + 1], 0.0);
        v += &power * c(b[2 * k], 0.0);
    }
    let u = a * u_acc;
    solve_pade(&u, &v)
}

fn pade13(a: &CMatrix, ident: &CMatrix) -> Result<CMatrix> {
    let b = |k: usize| c(PADE13[k], 0.0);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + ident * b(1);
    let u = a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + ident * b(0);
    solve_pade(&u, &v)
}

fn solve_pade(u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    (v - u).lu().solve(&(v + u)).ok_or(Error::Singular)
}

fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    check_square(m)?;
    check_finite(m)?;
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NoConvergence("Schur decomposition".into()))?;
    let (q, mut t) = schur.unpack();
    t.fill_lower_triangle(c(0.0, 0.0), 1);
    Ok((q, t))
}

/// Eigenvalues, read off the diagonal of the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let (_, t) = schur(m)?;
    Ok(t.diagonal().iter().copied().collect())
}

/// Principal matrix logarithm.
///
/// Eigenvalues are screened for singularity and for proximity to the branch
/// cut. The logarithm is evaluated by inverse scaling and squaring on the
/// Schur factor: repeated triangular square roots until the factor is close
/// to the identity, then a Gauss-Legendre form of the `[8/8]` Padé
/// approximant of `log(I + X)`.
pub fn logm_principal(m: &CMatrix) -> Result<CMatrix> {
    let n = check_square(m)?;
    let (q, mut t) = schur(m)?;
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    for &lambda in t.diagonal().iter() {
        if lambda.norm() <= SINGULAR_TOL * scale {
            return Err(Error::Singular);
        }
        let distance = if lambda.re <= 0.0 {
            lambda.im.abs()
        } else {
            lambda.norm()
        };
        if distance < BRANCH_CUT_TOL {
            return Err(Error::BranchCut {
                re: lambda.re,
                im: lambda.im,
                distance,
            });
        }
    }

    let ident = CMatrix::identity(n, n);
    let mut roots = 0;
    while one_norm(&(&t - &ident)) > 0.25 {
        if roots >= 64 {
            return Err(Error::NoConvergence("logarithm square-root ladder".into()));
        }
        t = sqrtm_upper_triangular(&t)?;
        roots += 1;
    }

    let x = &t - &ident;
    let (nodes, weights) = gauss_legendre(8);
    let mut log = CMatrix::zeros(n, n);
    for (&node, &weight) in nodes.iter().zip(&weights) {
        let s = 0.5 * (node + 1.0);
        let shifted = &ident + &x * c(s, 0.0);
        let term = shifted.solve_upper_triangular(&x).ok_or(Error::Singular)?;
        log += term * c(0.5 * weight, 0.0);
    }
    let log = &q * log * q.adjoint() * c(2f64.powi(roots), 0.0);
    check_finite(&log)?;
    Ok(log)
}

/// Principal square root of an upper-triangular matrix by the column
/// recurrence `r_ij = (t_ij − Σ r_ik r_kj) / (r_ii + r_jj)`.
pub fn sqrtm_upper_triangular(t: &CMatrix) -> Result<CMatrix> {
    let n = check_square(t)?;
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            let denom = r[(i, i)] + r[(j, j)];
            if denom.norm() == 0.0 {
                return Err(Error::Singular);
            }
            r[(i, j)] = s / denom;
        }
    }
    check_finite(&r)?;
    Ok(r)
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> Result<f64> {
    check_finite(m)?;
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(m.singular_values().max())
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * x * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            derivative = m as f64 * (x * p1 - p2) / (x * x - 1.0);
            let dx = p1 / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: CMatrix,
    pub estimated_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub max_evaluations: usize,
    /// Gauss-Legendre points per cell and axis; the composite rule has order
    /// `2 * nodes` in the cell width.
    pub nodes: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_QUADRATURE_TOL,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            nodes: DEFAULT_GAUSS_NODES,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn order(&self) -> i32 {
        2 * self.nodes as i32
    }
}

/// Composite Gauss-Legendre rule on `[0, 1]` with `cells` equal cells.
fn composite_rule(cells: usize, nodes: &[f64], weights: &[f64]) -> Vec<(f64, f64)> {
    let h = 1.0 / cells as f64;
    (0..cells)
        .flat_map(|cell| {
            let a = cell as f64 * h;
            nodes
                .iter()
                .zip(weights)
                .map(move |(&x, &w)| (a + 0.5 * h * (x + 1.0), 0.5 * h * w))
        })
        .collect()
}

fn validate_interval(tau: f64, opts: &QuadratureOptions) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "integration length must be finite and non-negative, got {tau}"
        )));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.nodes == 0 {
        return Err(Error::InvalidSpec(
            "quadrature needs a positive tolerance and at least one node".into(),
        ));
    }
    Ok(())
}

/// Successive halving of the cell width, starting from one cell, until the
/// Richardson estimate `|I_h - I_2h| / (2^order - 1)` drops below `tol`.
/// `dim` is the dimension of the integration domain; a level with `cells`
/// cells per axis costs `(nodes * cells)^dim` evaluations.
fn refine<R>(opts: &QuadratureOptions, dim: u32, mut rule: R) -> Result<QuadratureResult>
where
    R: FnMut(usize) -> Result<CMatrix>,
{
    let richardson = 2f64.powi(opts.order()) - 1.0;
    let cost_of = |cells: usize| (opts.nodes * cells).pow(dim);
    let mut cells = 1;
    let mut evaluations = cost_of(cells);
    let mut previous = rule(cells)?;
    let mut best_error = f64::INFINITY;
    loop {
        let next_cells = cells * 2;
        let cost = cost_of(next_cells);
        if evaluations + cost > opts.max_evaluations {
            return Err(Error::QuadratureConvergence {
                tol: opts.tol,
                estimated_error: best_error,
                evaluations,
                best: Box::new(previous),
            });
        }
        let current = rule(next_cells)?;
        evaluations += cost;
        best_error = (&current - &previous).norm() / richardson;
        cells = next_cells;
        previous = current;
        if best_error <= opts.tol {
            return Ok(QuadratureResult {
                value: previous,
                estimated_error: best_error,
                evaluations,
            });
        }
    }
}

/// `∫_0^τ f(t) dt`.
pub fn interval_quadrature_with<F>(
    mut f: F,
    tau: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<CMatrix>,
{
    validate_interval(tau, opts)?;
    let (nodes, weights) = gauss_legendre(opts.nodes);
    refine(opts, 1, |cells| {
        let mut acc: Option<CMatrix> = None;
        for (u, w) in composite_rule(cells, &nodes, &weights) {
            let term = f(tau * u)? * c(tau * w, 0.0);
            acc = Some(match acc {
                Some(sum) => sum + term,
                None => term,
            });
        }
        Ok(acc.expect("rule has nodes"))
    })
}

pub fn interval_quadrature<F>(mut f: F, tau: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> CMatrix,
{
    interval_quadrature_with(|t| Ok(f(t)), tau, &QuadratureOptions::with_tol(tol))
}

/// `∫_0^τ dt1 ∫_0^{t1} dt2 f(t1, t2)`, evaluated on the unit square through
/// `t1 = τu`, `t2 = τuv` (Jacobian `τ² u`).
pub fn triangle_quadrature_with<F>(
    mut f: F,
    tau: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> Result<CMatrix>,
{
    validate_interval(tau, opts)?;
    let (nodes, weights) = gauss_legendre(opts.nodes);
    refine(opts, 2, |cells| {
        let rule = composite_rule(cells, &nodes, &weights);
        let mut acc: Option<CMatrix> = None;
        for &(u, wu) in &rule {
            for &(v, wv) in &rule {
                let weight = tau * tau * u * wu * wv;
                let term = f(tau * u, tau * u * v)? * c(weight, 0.0);
                acc = Some(match acc {
                    Some(sum) => sum + term,
                    None => term,
                });
            }
        }
        Ok(acc.expect("rule has nodes"))
    })
}

pub fn triangle_quadrature<F>(mut f: F, tau: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> CMatrix,
{
    triangle_quadrature_with(
        |t1, t2| Ok(f(t1, t2)),
        tau,
        &QuadratureOptions::with_tol(tol),
    )
}

/// Nested rows of `[re, im]` pairs.
pub fn matrix_to_json(m: &CMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|z| serde_json::json!([z.re, z.im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

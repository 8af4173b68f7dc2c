//! Floating-point experiments on the torus `[0,1)^N` and the cube `[0,1]^N`:
//! midpoint quadrature, closed-form plane waves, the `p = 2` Korn constant
//! on the torus, counterexample blow-up, duality ratios for fields with
//! vanishing higher divergence, and Sobolev-type ratio sampling.
//!
//! Exactness claims never come from here: symbolic zeros are decided
//! upstream in exact arithmetic and only short-circuited in this module.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    is_zero_vec, rational_to_f64, reduce_basis, Field, GaussianRational, MultiIndex, MultiPoly,
    Rational,
};
use crate::analysis::{construct_factorization, quotient_spec, AnalysisError, Witness, DEFAULT_S_MAX};
use crate::operators::{grad_power, DiffOp};

pub type C64 = Complex<f64>;

/// Running sup beyond which a Korn estimate is reported as unbounded.
pub const UNBOUNDED_THRESHOLD: f64 = 1e6;
/// Condition limit for the Jacobi-scaled Gram matrix of the quotient image.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;
/// Grid points per wavelength required of the highest plane-wave mode.
pub const NYQUIST_FACTOR: usize = 8;
/// Highest mode allowed for complex witnesses (exponential growth).
pub const COMPLEX_MODE_CAP: u32 = 8;

#[derive(Debug, Error, Clone)]
pub enum NumericsError {
    #[error("grid of {n_grid} points per axis is too coarse for mode {max_mode} (need at least {NYQUIST_FACTOR} points per wavelength)")]
    NyquistViolation { n_grid: usize, max_mode: u32 },
    #[error("mode {mode} exceeds the cap {COMPLEX_MODE_CAP} for complex witnesses")]
    ComplexModeCap { mode: u32 },
    #[error("quotient Gram matrix condition estimate {condition:e} exceeds {GRAM_CONDITION_LIMIT:e}; raise the grid resolution")]
    IllConditionedQuotient { condition: f64 },
    #[error("witness is not in the kernel of 𝒜[ξ]")]
    InvalidWitness,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Torus,
    Cube,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExperimentStatus {
    Ok,
    Bounded,
    Unstable,
    InfiniteRatio,
    UnboundedSuspected,
}

/// Midpoint `x_j = (j + ½)/res` of grid cell `idx` (row-major, last axis fastest).
pub fn grid_point(dim: usize, res: usize, idx: usize, out: &mut [f64]) {
    let mut t = idx;
    for slot in out[..dim].iter_mut().rev() {
        *slot = ((t % res) as f64 + 0.5) / res as f64;
        t /= res;
    }
}

/// Samples on the midpoint grid, `values[point * components + c]`. The true
/// field is `exp(log_scale) · values`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub domain: Domain,
    pub dim: usize,
    pub res: usize,
    pub components: usize,
    pub values: Vec<f64>,
    pub log_scale: f64,
}

impl GridField {
    pub fn num_points(&self) -> usize {
        self.res.pow(self.dim as u32)
    }

    pub fn from_fn(
        domain: Domain,
        dim: usize,
        res: usize,
        components: usize,
        f: impl Fn(&[f64], &mut [f64]),
    ) -> Self {
        let points = res.pow(dim as u32);
        let mut values = vec![0.0; points * components];
        let mut x = vec![0.0; dim];
        for (i, chunk) in values.chunks_mut(components.max(1)).enumerate().take(points) {
            grid_point(dim, res, i, &mut x);
            f(&x, chunk);
        }
        Self {
            domain,
            dim,
            res,
            components,
            values,
            log_scale: 0.0,
        }
    }

    pub fn zeros(domain: Domain, dim: usize, res: usize, components: usize) -> Self {
        Self::from_fn(domain, dim, res, components, |_, _| {})
    }

    pub fn value(&self, point: usize) -> &[f64] {
        &self.values[point * self.components..(point + 1) * self.components]
    }

    /// Discrete `L²` inner product of the stored values.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        s / self.num_points() as f64
    }
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Midpoint-rule `L^p` norm of the pointwise Euclidean norm (stored values;
/// `log_scale` ignored).
pub fn lp_norm(f: &GridField, p: f64) -> f64 {
    assert!(p >= 1.0, "p must be at least 1");
    let points = f.num_points();
    let sum: f64 = (0..points).map(|i| euclid(f.value(i)).powf(p)).sum();
    (sum / points as f64).powf(1.0 / p)
}

/// `ln ‖f‖_{L^p}` including the scale; `−∞` for the zero field.
pub fn log_lp_norm(f: &GridField, p: f64) -> f64 {
    f.log_scale + lp_norm(f, p).ln()
}

/// One Fourier mode `Re[c e^{2πi ξ·x}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigMode {
    pub freq: Vec<f64>,
    pub coeff: Vec<C64>,
}

/// Finite sum of Fourier modes.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigField {
    pub dim: usize,
    pub components: usize,
    pub modes: Vec<TrigMode>,
}

impl TrigField {
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for m in &self.modes {
            let phase = TAU * m.freq.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            let (s, c) = phase.sin_cos();
            for (o, z) in out.iter_mut().zip(&m.coeff) {
                *o += z.re * c - z.im * s;
            }
        }
    }

    pub fn sample(&self, domain: Domain, res: usize) -> GridField {
        GridField::from_fn(domain, self.dim, res, self.components, |x, out| self.eval_into(x, out))
    }

    /// `L²` norm on the torus from the coefficients, assuming integer
    /// frequencies that are pairwise distinct up to sign.
    pub fn parseval_l2(&self) -> f64 {
        let sq: f64 = self
            .modes
            .iter()
            .map(|m| {
                let e: f64 = m.coeff.iter().map(|z| z.norm_sqr()).sum();
                if m.freq.iter().all(|f| *f == 0.0) {
                    m.coeff.iter().map(|z| z.re * z.re).sum()
                } else {
                    e / 2.0
                }
            })
            .sum();
        sq.sqrt()
    }

    /// The field `op u` in closed form: mode `c` becomes `(2πi)^k op[ξ] c`.
    pub fn apply(&self, op: &DiffOp) -> TrigField {
        assert_eq!(op.d(), self.components);
        let factor = Complex::new(0.0, TAU).powu(op.k());
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let s = symbol_f64(op, &m.freq);
                let coeff = (0..op.l())
                    .map(|i| {
                        let z: C64 = (0..op.d()).map(|j| m.coeff[j] * s[(i, j)]).sum();
                        z * factor
                    })
                    .collect();
                TrigMode {
                    freq: m.freq.clone(),
                    coeff,
                }
            })
            .collect();
        TrigField {
            dim: self.dim,
            components: op.l(),
            modes,
        }
    }
}

/// The symbol at a real point in double precision.
pub fn symbol_f64(op: &DiffOp, xi: &[f64]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(op.l(), op.d());
    for (alpha, m) in op.terms() {
        let mono: f64 = xi
            .iter()
            .zip(alpha.exps())
            .map(|(x, &e)| x.powi(e as i32))
            .product();
        for i in 0..op.l() {
            for j in 0..op.d() {
                out[(i, j)] += rational_to_f64(m.get(i, j)) * mono;
            }
        }
    }
    out
}

/// `√w_i` for the target inner product of `op`.
pub fn target_scale(op: &DiffOp) -> Vec<f64> {
    (0..op.l())
        .map(|i| rational_to_f64(&op.target_weight(i)).sqrt())
        .collect()
}

/// Rescales point-major samples of `op`'s target so that Euclidean norms
/// become norms for the target inner product.
fn to_isometric(op: &DiffOp, values: &mut [f64]) {
    if op.target_weights().is_none() {
        return;
    }
    let scale = target_scale(op);
    for chunk in values.chunks_mut(op.l()) {
        for (v, s) in chunk.iter_mut().zip(&scale) {
            *v *= s;
        }
    }
}

fn to_c64(z: &GaussianRational) -> C64 {
    let (re, im) = z.to_c64();
    Complex::new(re, im)
}

/// `u_n(x) = Re[v e^{2πi n ξ·x}]` for the modes listed, built from an exact
/// witness. Real integer frequencies live on the torus, anything else on
/// the cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneWaveFamily {
    xi: Vec<GaussianRational>,
    v: Vec<GaussianRational>,
    pub modes: Vec<u32>,
}

impl PlaneWaveFamily {
    pub fn from_witness(w: &Witness, cal_a: &DiffOp, modes: Vec<u32>) -> Result<Self, NumericsError> {
        if is_zero_vec(&w.v) || !is_zero_vec(&cal_a.symbol_at(&w.xi).mul_vec(&w.v)) {
            return Err(NumericsError::InvalidWitness);
        }
        Ok(Self {
            xi: w.xi.clone(),
            v: w.v.clone(),
            modes,
        })
    }

    pub fn is_real(&self) -> bool {
        self.xi.iter().all(GaussianRational::is_real)
    }

    pub fn domain(&self) -> Domain {
        let integral = self
            .xi
            .iter()
            .all(|z| z.is_real() && z.re.is_integer());
        if integral {
            Domain::Torus
        } else {
            Domain::Cube
        }
    }
}

/// `op u_n = Re[(2πin)^k op[ξ]v e^{2πin ξ·x}]` on the grid. A symbolically
/// zero coefficient yields the zero field; complex frequencies are
/// sup-normalised through `log_scale`.
pub fn apply_op_planewave(op: &DiffOp, fam: &PlaneWaveFamily, mode: u32, res: usize) -> GridField {
    let domain = fam.domain();
    let dim = fam.xi.len();
    let coeff = op.symbol_at(&fam.xi).mul_vec(&fam.v);
    if is_zero_vec(&coeff) {
        return GridField::zeros(domain, dim, res, op.l());
    }
    let n = f64::from(mode);
    let factor = Complex::new(0.0, TAU * n).powu(op.k());
    let c: Vec<C64> = coeff.iter().map(|z| to_c64(z) * factor).collect();
    let xi: Vec<C64> = fam.xi.iter().map(to_c64).collect();
    // growth exponent −2πn b·x, maximal at a grid point
    let growth = |x: &[f64]| -TAU * n * xi.iter().zip(x).map(|(z, t)| z.im * t).sum::<f64>();
    let points = res.pow(dim as u32);
    let mut x = vec![0.0; dim];
    let mut log_max = f64::NEG_INFINITY;
    for i in 0..points {
        grid_point(dim, res, i, &mut x);
        log_max = log_max.max(growth(&x));
    }
    let mut field = GridField::from_fn(domain, dim, res, op.l(), |x, out| {
        let phase = TAU * n * xi.iter().zip(x).map(|(z, t)| z.re * t).sum::<f64>();
        let w = Complex::from_polar((growth(x) - log_max).exp(), phase);
        for (o, z) in out.iter_mut().zip(&c) {
            *o = (z * w).re;
        }
    });
    field.log_scale = log_max;
    field
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Numerical rank of a symmetric positive semidefinite matrix.
fn psd_rank(g: DMatrix<f64>, rel_tol: f64) -> usize {
    let eig = SymmetricEigen::new(g).eigenvalues;
    let top = eig.iter().cloned().fold(0.0, f64::max);
    eig.iter().filter(|&&e| e > rel_tol * top).count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupReport {
    pub domain: Domain,
    pub real_witness: bool,
    pub modes: Vec<u32>,
    pub n_grid: usize,
    /// `𝒜 u_n` is the zero field by exact symbolic computation.
    pub denominator_symbolic_zero: bool,
    /// `ln ‖A u_n‖_{L²}` per mode.
    pub log_numerators: Vec<f64>,
    /// `‖A u_n‖_{L²}`, `None` where it overflows.
    pub numerators: Vec<Option<f64>>,
    /// Least-squares slope of `ln ‖A u_n‖` against `ln n` (real witnesses).
    pub slope: Option<f64>,
    pub expected_slope: u32,
    pub gram_rank: usize,
    pub status: ExperimentStatus,
}

/// Evaluates the plane-wave counterexample family of a witness.
pub fn counterexample_blowup(
    cal_a: &DiffOp,
    a: &DiffOp,
    witness: &Witness,
    modes: &[u32],
    n_grid: usize,
) -> Result<BlowupReport, NumericsError> {
    let max_mode = *modes
        .iter()
        .max()
        .ok_or_else(|| NumericsError::InvalidParameter("no modes".into()))?;
    if modes.contains(&0) {
        return Err(NumericsError::InvalidParameter("modes must be positive".into()));
    }
    if n_grid < NYQUIST_FACTOR * max_mode as usize {
        return Err(NumericsError::NyquistViolation { n_grid, max_mode });
    }
    let fam = PlaneWaveFamily::from_witness(witness, cal_a, modes.to_vec())?;
    if !fam.is_real() && max_mode > COMPLEX_MODE_CAP {
        return Err(NumericsError::ComplexModeCap { mode: max_mode });
    }
    let denominator_symbolic_zero = is_zero_vec(&cal_a.symbol_at(&witness.xi).mul_vec(&witness.v));
    let identity = grad_power(0, cal_a.d(), cal_a.n());
    let mut log_numerators = Vec::with_capacity(modes.len());
    let mut waves = Vec::with_capacity(modes.len());
    for &m in modes {
        let mut au = apply_op_planewave(a, &fam, m, n_grid);
        to_isometric(a, &mut au.values);
        log_numerators.push(log_lp_norm(&au, 2.0));
        let mut u = apply_op_planewave(&identity, &fam, m, n_grid);
        let norm = lp_norm(&u, 2.0);
        if norm > 0.0 {
            u.values.iter_mut().for_each(|v| *v /= norm);
        }
        waves.push(u);
    }
    let gram = DMatrix::from_fn(waves.len(), waves.len(), |i, j| waves[i].inner(&waves[j]));
    let gram_rank = psd_rank(gram, 1e-10);
    let slope = fam.is_real().then(|| {
        let xs: Vec<f64> = modes.iter().map(|&m| f64::from(m).ln()).collect();
        least_squares_slope(&xs, &log_numerators)
    });
    let numerators = log_numerators
        .iter()
        .map(|l| Some(l.exp()).filter(|v| v.is_finite()))
        .collect();
    let numerators_positive = log_numerators.iter().all(|l| l.is_finite());
    let status = if denominator_symbolic_zero && numerators_positive {
        ExperimentStatus::InfiniteRatio
    } else {
        ExperimentStatus::Unstable
    };
    Ok(BlowupReport {
        domain: fam.domain(),
        real_witness: fam.is_real(),
        modes: modes.to_vec(),
        n_grid,
        denominator_symbolic_zero,
        log_numerators,
        numerators,
        slope,
        expected_slope: a.k(),
        gram_rank,
        status,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KornEstimate {
    /// `None` when the supremum is infinite or beyond the threshold.
    pub estimate: Option<f64>,
    pub best_direction: Vec<f64>,
    pub evaluations: usize,
    /// Running supremum after each random direction.
    pub trace: Vec<f64>,
    pub status: ExperimentStatus,
}

/// `sup_v |A[ξ]v| / |𝒜[ξ]v|` at a real `ξ`; infinite when `A[ξ]` does not
/// vanish on `ker 𝒜[ξ]`.
pub fn symbol_quotient_norm(cal_a: &DiffOp, a: &DiffOp, xi: &[f64]) -> f64 {
    let scaled = |op: &DiffOp| {
        let mut m = symbol_f64(op, xi);
        for (i, w) in target_scale(op).into_iter().enumerate() {
            m.row_mut(i).scale_mut(w);
        }
        m
    };
    let s = scaled(cal_a);
    let t = scaled(a);
    let g = s.transpose() * &s;
    let h = t.transpose() * &t;
    let eig = SymmetricEigen::new(g);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let h_scale = h.norm().max(1e-300);
    let tol = 1e-12 * top.max(1e-300);
    let d = cal_a.d();
    let (mut range, mut kernel) = (Vec::new(), Vec::new());
    for i in 0..d {
        let q = eig.eigenvectors.column(i).into_owned();
        if eig.eigenvalues[i] > tol {
            range.push((eig.eigenvalues[i], q));
        } else {
            kernel.push(q);
        }
    }
    if kernel.iter().any(|q| (q.transpose() * &h * q)[(0, 0)] > 1e-12 * h_scale) {
        return f64::INFINITY;
    }
    if range.is_empty() {
        return 0.0;
    }
    let r = range.len();
    let scaled = DMatrix::from_fn(r, r, |i, j| {
        let (li, qi) = &range[i];
        let (lj, qj) = &range[j];
        (qi.transpose() * &h * qj)[(0, 0)] / (li * lj).sqrt()
    });
    let top = SymmetricEigen::new(scaled)
        .eigenvalues
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    top.max(0.0).sqrt()
}

fn sphere_point(angles: &[f64], dim: usize) -> Vec<f64> {
    if dim == 1 {
        return vec![if angles.first().copied().unwrap_or(0.0) < PI { 1.0 } else { -1.0 }];
    }
    let mut out = vec![0.0; dim];
    let mut sin_prod = 1.0;
    for i in 0..dim - 1 {
        out[i] = sin_prod * angles[i].cos();
        sin_prod *= angles[i].sin();
    }
    out[dim - 1] = sin_prod;
    out
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Best constant of `‖A u‖_{L²} ≤ C ‖𝒜 u‖_{L²}` for zero-mean fields on the
/// torus, which by Parseval is the supremum of [`symbol_quotient_norm`]
/// over unit real frequencies. Random directions, then coordinate-wise
/// golden-section refinement of the best one.
pub fn korn_constant_p2(
    cal_a: &DiffOp,
    a: &DiffOp,
    samples: usize,
    refine_iters: usize,
    seed: u64,
) -> Result<KornEstimate, NumericsError> {
    if cal_a.n() != a.n() || cal_a.d() != a.d() || cal_a.k() != a.k() {
        return Err(NumericsError::InvalidParameter(
            "the p = 2 torus constant needs a pair of equal order on the same fields".into(),
        ));
    }
    let dim = cal_a.n();
    let n_angles = dim.max(2) - 1;
    let objective = |angles: &[f64]| symbol_quotient_norm(cal_a, a, &sphere_point(angles, dim));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_angles = vec![0.0; n_angles];
    let mut best = f64::NEG_INFINITY;
    let mut trace = Vec::with_capacity(samples);
    let mut evaluations = 0;
    for _ in 0..samples.max(1) {
        let angles: Vec<f64> = (0..n_angles)
            .map(|i| {
                let top = if i + 1 == n_angles { TAU } else { PI };
                rng.gen_range(0.0..top)
            })
            .collect();
        let v = objective(&angles);
        evaluations += 1;
        if v > best {
            best = v;
            best_angles = angles;
        }
        trace.push(best);
        if !(best <= UNBOUNDED_THRESHOLD) {
            break;
        }
    }
    let mut step = PI / 4.0;
    if best <= UNBOUNDED_THRESHOLD {
        for _ in 0..refine_iters {
            for i in 0..n_angles {
                let base = best_angles.clone();
                let f = |t: f64| {
                    let mut a = base.clone();
                    a[i] = t;
                    objective(&a)
                };
                let (t, v) = golden_max(&f, base[i] - step, base[i] + step, 40);
                evaluations += 42;
                if v > best {
                    best = v;
                    best_angles[i] = t;
                }
            }
            step /= 2.0;
        }
    }
    let bounded = best <= UNBOUNDED_THRESHOLD;
    Ok(KornEstimate {
        estimate: bounded.then_some(best),
        best_direction: sphere_point(&best_angles, dim),
        evaluations,
        trace,
        status: if bounded {
            ExperimentStatus::Ok
        } else {
            ExperimentStatus::UnboundedSuspected
        },
    })
}

fn random_frequency(rng: &mut ChaCha8Rng, dim: usize, band: i64) -> Vec<i64> {
    loop {
        let mut f: Vec<i64> = (0..dim).map(|_| rng.gen_range(-band..=band)).collect();
        if let Some(first) = f.iter().position(|&c| c != 0) {
            if f[first] < 0 {
                f.iter_mut().for_each(|c| *c = -*c);
            }
            return f;
        }
    }
}

/// `1 ≤ count` distinct frequencies from the half-space `{first nonzero > 0}`.
fn distinct_frequencies(rng: &mut ChaCha8Rng, dim: usize, band: i64, count: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(count);
    let available = ((2 * band + 1).pow(dim as u32) - 1) / 2;
    while out.len() < count.min(available as usize) {
        let f = random_frequency(rng, dim, band);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.into_iter()
        .map(|f| f.into_iter().map(|c| c as f64).collect())
        .collect()
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Configuration of the duality-ratio experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BbConfig {
    pub k: u32,
    pub dim: usize,
    pub trials: usize,
    pub n_grid: usize,
    pub seed: u64,
    pub modes_per_trial: usize,
}

impl Default for BbConfig {
    fn default() -> Self {
        Self {
            k: 1,
            dim: 2,
            trials: 1000,
            n_grid: 64,
            seed: 0,
            modes_per_trial: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BbReport {
    pub components: usize,
    pub band_limit: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub median_ratio: f64,
    pub all_finite: bool,
    /// Largest relative per-frequency residual of the constraint.
    pub max_constraint_residual: f64,
    pub status: ExperimentStatus,
}

/// Test function `φ = a · b(x) · cos(2π m·x + θ)` with `b` a product of
/// smooth bumps supported in `(c_i − r, c_i + r) ⊂ (0,1)`. The experiment
/// draws `m` from the frequencies of `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpTrig {
    pub center: Vec<f64>,
    pub radius: f64,
    pub freq: Vec<f64>,
    pub phase: f64,
    pub amplitude: Vec<f64>,
}

impl BumpTrig {
    /// `φ(x)` into `val`, `Dφ(x)` (component-major) into `grad`.
    pub fn eval(&self, x: &[f64], val: &mut [f64], grad: &mut [f64]) {
        let dim = x.len();
        let mut bump = 1.0;
        let mut dlog = vec![0.0; dim];
        for i in 0..dim {
            let s = (x[i] - self.center[i]) / self.radius;
            if s.abs() >= 1.0 {
                val.iter_mut().for_each(|v| *v = 0.0);
                grad.iter_mut().for_each(|v| *v = 0.0);
                return;
            }
            let q = 1.0 - s * s;
            bump *= (-1.0 / q).exp();
            // d/dx_i of ln bump
            dlog[i] = -2.0 * s / (q * q) / self.radius;
        }
        let arg = TAU * self.freq.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.phase;
        let (sn, cs) = arg.sin_cos();
        let scalar = bump * cs;
        for (c, a) in self.amplitude.iter().enumerate() {
            val[c] = a * scalar;
            for j in 0..dim {
                grad[c * dim + j] = a * bump * (dlog[j] * cs - TAU * self.freq[j] * sn);
            }
        }
    }
}

struct BbTrial {
    ratio: f64,
    residual: f64,
}

fn bb_trial(cfg: &BbConfig, betas: &[MultiIndex], trial: usize) -> BbTrial {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64 + 1);
    let dim = cfg.dim;
    let comps = betas.len();
    let band = (cfg.n_grid / NYQUIST_FACTOR).max(1) as i64;
    let freqs = distinct_frequencies(&mut rng, dim, band, cfg.modes_per_trial);
    let factor = Complex::new(0.0, TAU).powu(cfg.k);
    let mut residual: f64 = 0.0;
    let modes: Vec<TrigMode> = freqs
        .into_iter()
        .map(|freq| {
            let w: Vec<f64> = betas
                .iter()
                .map(|b| freq.iter().zip(b.exps()).map(|(x, &e)| x.powi(e as i32)).product())
                .collect();
            let mut c: Vec<C64> = (0..comps).map(|_| random_c64(&mut rng)).collect();
            let ww: f64 = w.iter().map(|x| x * x).sum();
            let wc: C64 = w.iter().zip(&c).map(|(a, z)| z * a).sum();
            for (z, a) in c.iter_mut().zip(&w) {
                *z -= wc * (a / ww);
            }
            let constraint: C64 = w.iter().zip(&c).map(|(a, z)| z * a * factor).sum();
            // Cauchy–Schwarz bound on the size of the terms
            let c_norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let scale = ww.sqrt() * c_norm * factor.norm();
            if scale > 0.0 {
                residual = residual.max(constraint.norm() / scale);
            }
            TrigMode { freq, coeff: c }
        })
        .collect();
    let v = TrigField {
        dim,
        components: comps,
        modes,
    };
    let radius = rng.gen_range(0.1..0.3);
    let phi = BumpTrig {
        center: (0..dim).map(|_| rng.gen_range(0.35..0.65)).collect(),
        radius,
        // oscillate with one of v's modes, where the pairing is largest
        freq: v.modes[rng.gen_range(0..v.modes.len())].freq.clone(),
        phase: rng.gen_range(0.0..TAU),
        amplitude: (0..comps).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    };
    let points = cfg.n_grid.pow(dim as u32);
    let (mut pairing, mut l1, mut grad_n) = (0.0, 0.0, 0.0);
    let mut x = vec![0.0; dim];
    let mut vv = vec![0.0; comps];
    let mut pv = vec![0.0; comps];
    let mut pg = vec![0.0; comps * dim];
    for i in 0..points {
        grid_point(dim, cfg.n_grid, i, &mut x);
        v.eval_into(&x, &mut vv);
        phi.eval(&x, &mut pv, &mut pg);
        pairing += vv.iter().zip(&pv).map(|(a, b)| a * b).sum::<f64>();
        l1 += euclid(&vv);
        grad_n += euclid(&pg).powi(dim as i32);
    }
    let vol = points as f64;
    let (pairing, l1, grad_n) = (pairing / vol, l1 / vol, (grad_n / vol).powf(1.0 / dim as f64));
    let denom = l1 * grad_n;
    let ratio = if denom > 0.0 { pairing.abs() / denom } else { 0.0 };
    BbTrial { ratio, residual }
}

/// `|∫ v·φ| / (‖v‖_{L¹} ‖Dφ‖_{L^N})` over random trigonometric `v` with
/// `Σ_{|β|=k} ∂^β v_β = 0`, enforced by projecting each Fourier coefficient
/// onto the kernel of the constraint symbol.
pub fn bb_ratio_experiment(cfg: &BbConfig) -> Result<BbReport, NumericsError> {
    if cfg.dim < 2 {
        return Err(NumericsError::InvalidParameter("the duality experiment needs N >= 2".into()));
    }
    if cfg.k == 0 || cfg.trials == 0 || cfg.modes_per_trial == 0 {
        return Err(NumericsError::InvalidParameter("k, trials and modes must be positive".into()));
    }
    let betas = MultiIndex::all_of_degree(cfg.dim, cfg.k);
    let results: Vec<BbTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| bb_trial(cfg, &betas, t))
        .collect();
    let ratios: Vec<f64> = results.iter().map(|r| r.ratio).collect();
    let all_finite = ratios.iter().all(|r| r.is_finite());
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median_ratio = sorted[sorted.len() / 2];
    let max_constraint_residual = results.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(BbReport {
        components: betas.len(),
        band_limit: (cfg.n_grid / NYQUIST_FACTOR).max(1),
        ratios,
        max_ratio,
        mean_ratio,
        median_ratio,
        all_finite,
        max_constraint_residual,
        status: if all_finite {
            ExperimentStatus::Ok
        } else {
            ExperimentStatus::Unstable
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SobolevConfig {
    pub p: f64,
    pub trials: usize,
    pub grid: usize,
    pub seed: u64,
    pub modes_per_trial: usize,
}

impl Default for SobolevConfig {
    fn default() -> Self {
        Self {
            p: 1.0,
            trials: 200,
            grid: 32,
            seed: 0,
            modes_per_trial: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevReport {
    pub p: f64,
    pub p_star: f64,
    pub s: u32,
    pub degree_bound: u32,
    pub quotient_dim: usize,
    pub quotient_image_dim: usize,
    pub condition_estimate: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub max_ratio_refined: f64,
    pub relative_change: f64,
    pub status: ExperimentStatus,
}

fn eval_poly_f64(p: &MultiPoly, x: &[f64]) -> f64 {
    p.terms()
        .map(|(m, c)| {
            rational_to_f64(c)
                * x.iter()
                    .zip(m.exps())
                    .map(|(t, &e)| t.powi(e as i32))
                    .product::<f64>()
        })
        .sum()
}

/// Exact basis of `A(𝒬)` as polynomial vectors.
fn quotient_image(a: &DiffOp, quotient: &[(MultiIndex, usize)]) -> Vec<Vec<MultiPoly>> {
    let n = a.n();
    let images: Vec<Vec<MultiPoly>> = quotient
        .iter()
        .map(|(gamma, c)| {
            let mut u = vec![MultiPoly::zero(n); a.d()];
            u[*c] = MultiPoly::monomial(gamma.clone(), Rational::from_integer(1.into()));
            a.apply_to_polys(&u)
        })
        .collect();
    let mut monos: Vec<(usize, MultiIndex)> = images
        .iter()
        .flat_map(|img| {
            img.iter()
                .enumerate()
                .flat_map(|(i, p)| p.terms().map(move |(m, _)| (i, m.clone())))
        })
        .collect();
    monos.sort();
    monos.dedup();
    let vectors: Vec<Vec<Rational>> = images
        .iter()
        .map(|img| monos.iter().map(|(i, m)| img[*i].coeff(m)).collect())
        .collect();
    reduce_basis(monos.len(), &vectors)
        .into_iter()
        .map(|row| {
            let mut out = vec![MultiPoly::zero(n); a.l()];
            for ((i, m), c) in monos.iter().zip(row) {
                if !c.is_zero() {
                    out[*i] = &out[*i] + &MultiPoly::monomial(m.clone(), c);
                }
            }
            out
        })
        .collect()
}

struct QuotientProjector {
    /// `basis[j][point * l + i]`
    basis: Vec<Vec<f64>>,
    scale: Vec<f64>,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    condition: f64,
}

impl QuotientProjector {
    fn new(image: &[Vec<MultiPoly>], weights: &[f64], dim: usize, res: usize) -> Result<Self, NumericsError> {
        let points = res.pow(dim as u32);
        let l = image.first().map_or(0, Vec::len);
        let mut x = vec![0.0; dim];
        let basis: Vec<Vec<f64>> = image
            .iter()
            .map(|b| {
                let mut out = vec![0.0; points * l];
                for pt in 0..points {
                    grid_point(dim, res, pt, &mut x);
                    for (i, p) in b.iter().enumerate() {
                        out[pt * l + i] = eval_poly_f64(p, &x) * weights[i];
                    }
                }
                out
            })
            .collect();
        let m = basis.len();
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / points as f64;
        let gram = DMatrix::from_fn(m, m, |i, j| dot(&basis[i], &basis[j]));
        let scale: Vec<f64> = (0..m).map(|i| 1.0 / gram[(i, i)].sqrt()).collect();
        let scaled = DMatrix::from_fn(m, m, |i, j| gram[(i, j)] * scale[i] * scale[j]);
        let eig = SymmetricEigen::new(scaled.clone()).eigenvalues;
        let (lo, hi) = eig
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        let condition = if m == 0 { 1.0 } else { hi / lo.max(0.0) };
        if !(condition <= GRAM_CONDITION_LIMIT) {
            return Err(NumericsError::IllConditionedQuotient { condition });
        }
        let chol = scaled
            .cholesky()
            .ok_or(NumericsError::IllConditionedQuotient { condition })?;
        Ok(Self {
            basis,
            scale,
            chol,
            condition,
        })
    }

    /// Subtracts the `L²` best approximation from `A(𝒬)`.
    fn residual(&self, f: &mut [f64], points: usize) {
        let m = self.basis.len();
        if m == 0 {
            return;
        }
        let rhs = DVector::from_fn(m, |i, _| {
            self.basis[i].iter().zip(f.iter()).map(|(a, b)| a * b).sum::<f64>() / points as f64 * self.scale[i]
        });
        let y = self.chol.solve(&rhs);
        for (j, b) in self.basis.iter().enumerate() {
            let c = y[j] * self.scale[j];
            for (fv, bv) in f.iter_mut().zip(b) {
                *fv -= c * bv;
            }
        }
    }
}

fn random_field(rng: &mut ChaCha8Rng, dim: usize, comps: usize, band: i64, count: usize) -> TrigField {
    let modes = distinct_frequencies(rng, dim, band, count)
        .into_iter()
        .map(|freq| TrigMode {
            freq,
            coeff: (0..comps).map(|_| random_c64(rng)).collect(),
        })
        .collect();
    TrigField {
        dim,
        components: comps,
        modes,
    }
}

fn lp_of_samples(values: &[f64], comps: usize, p: f64) -> f64 {
    let points = values.len() / comps.max(1);
    let s: f64 = values.chunks(comps).map(|v| euclid(v).powf(p)).sum();
    (s / points as f64).powf(1.0 / p)
}

/// `inf_{q ∈ 𝒬} ‖A(u − q)‖_{L^{p*}} / ‖𝒜u‖_{L^p}` on the cube for random
/// band-limited `u`, the infimum replaced by the `L²` projection onto
/// `A(𝒬)`. Ratios at `grid` and `2·grid` must agree within 10%.
pub fn sobolev_ratio_experiment(
    cal_a: &DiffOp,
    a: &DiffOp,
    cfg: &SobolevConfig,
    analysis_seed: u64,
) -> Result<SobolevReport, NumericsError> {
    let dim = cal_a.n();
    if a.k() + 1 != cal_a.k() {
        return Err(NumericsError::InvalidParameter(
            "Sobolev ratios need ord A = ord 𝒜 − 1".into(),
        ));
    }
    if !(cfg.p >= 1.0 && cfg.p < dim as f64) {
        return Err(NumericsError::InvalidParameter(format!(
            "need 1 <= p < N = {dim}, got {}",
            cfg.p
        )));
    }
    let p_star = dim as f64 * cfg.p / (dim as f64 - cfg.p);
    let cert = construct_factorization(cal_a, a, DEFAULT_S_MAX, analysis_seed)?;
    let quotient = quotient_spec(dim, cal_a.d(), cal_a.k(), cert.s);
    let image = quotient_image(a, &quotient.basis);
    let weights = target_scale(a);
    let band = (cfg.grid / NYQUIST_FACTOR).max(1) as i64;
    let fields: Vec<TrigField> = (0..cfg.trials)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64 + 1);
            random_field(&mut rng, dim, cal_a.d(), band, cfg.modes_per_trial)
        })
        .collect();
    let run = |res: usize| -> Result<(Vec<f64>, f64), NumericsError> {
        let proj = QuotientProjector::new(&image, &weights, dim, res)?;
        let points = res.pow(dim as u32);
        let ratios = fields
            .par_iter()
            .map(|u| {
                let mut num_field = u.apply(a).sample(Domain::Cube, res);
                let mut den_field = u.apply(cal_a).sample(Domain::Cube, res);
                to_isometric(a, &mut num_field.values);
                to_isometric(cal_a, &mut den_field.values);
                let mut r = num_field.values;
                proj.residual(&mut r, points);
                let num = lp_of_samples(&r, a.l(), p_star);
                let den = lp_norm(&den_field, cfg.p);
                if den > 0.0 {
                    num / den
                } else if num > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .collect();
        Ok((ratios, proj.condition))
    };
    let (ratios, condition_estimate) = run(cfg.grid)?;
    let (refined, _) = run(2 * cfg.grid)?;
    let max_of = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let max_ratio = max_of(&ratios);
    let max_ratio_refined = max_of(&refined);
    let relative_change = (max_ratio_refined - max_ratio).abs() / max_ratio.max(f64::MIN_POSITIVE);
    let status = if max_ratio.is_finite() && relative_change <= 0.1 {
        ExperimentStatus::Bounded
    } else {
        ExperimentStatus::Unstable
    };
    Ok(SobolevReport {
        p: cfg.p,
        p_star,
        s: cert.s,
        degree_bound: quotient.degree_bound,
        quotient_dim: quotient.dimension(),
        quotient_image_dim: image.len(),
        condition_estimate,
        ratios,
        max_ratio,
        max_ratio_refined,
        relative_change,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::analysis::{find_witness, kernel_inclusion, InclusionCertificate, DEFAULT_SEED};
    use crate::operators::{catalog, catalog_with, CatalogParams};

    fn grad_fields(n: usize, d: usize) -> DiffOp {
        catalog_with("gradient", n, CatalogParams { components: Some(d), order: None }).unwrap()
    }

    fn witness(cal_a: &DiffOp, a: &DiffOp) -> Witness {
        let v = kernel_inclusion(cal_a, a, DEFAULT_SEED).unwrap();
        let InclusionCertificate::NonzeroMinor { minor, .. } = v.certificate else {
            panic!("inclusion holds")
        };
        find_witness(cal_a, a, &minor, DEFAULT_SEED).unwrap()
    }

    #[test]
    fn norms_of_simple_fields() {
        let two = GridField::from_fn(Domain::Cube, 2, 8, 1, |_, o| o[0] = 2.0);
        for p in [1.0, 2.0, 3.5] {
            assert!((lp_norm(&two, p) - 2.0).abs() < 1e-14);
        }
        let sine = GridField::from_fn(Domain::Torus, 1, 256, 1, |x, o| o[0] = (TAU * x[0]).sin());
        assert!((lp_norm(&sine, 2.0) - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(lp_norm(&GridField::zeros(Domain::Torus, 2, 4, 3), 2.0), 0.0);
    }

    #[test]
    fn midpoint_rule_is_second_order() {
        let exact = 1f64.exp() - 1.0;
        let err = |n| (lp_norm(&GridField::from_fn(Domain::Cube, 1, n, 1, |x, o| o[0] = x[0].exp()), 1.0) - exact).abs();
        let (e64, e128, e256) = (err(64), err(128), err(256));
        assert!(e64 / e128 >= 3.5 && e128 / e256 >= 3.5, "{e64} {e128} {e256}");
    }

    #[test]
    fn parseval_agrees_with_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_field(&mut rng, 2, 3, 4, 5);
        let q = lp_norm(&f.sample(Domain::Torus, 32), 2.0);
        assert!((q - f.parseval_l2()).abs() < 1e-10);
    }

    #[test]
    fn plane_wave_amplitudes() {
        let div = catalog("divergence", 2).unwrap();
        let grad = grad_fields(2, 2);
        let w = witness(&div, &grad);
        let fam = PlaneWaveFamily::from_witness(&w, &div, vec![1, 2]).unwrap();
        assert_eq!(fam.domain(), Domain::Torus);
        let zero = apply_op_planewave(&div, &fam, 1, 32);
        assert!(zero.values.iter().all(|v| *v == 0.0));
        let f1 = apply_op_planewave(&grad, &fam, 1, 64);
        let sup = f1.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((sup - TAU).abs() < 1e-2, "{sup}");
        let f2 = apply_op_planewave(&grad, &fam, 2, 64);
        assert!((lp_norm(&f2, 2.0) / lp_norm(&f1, 2.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn blowup_for_divergence_and_gradient() {
        let div = catalog("divergence", 2).unwrap();
        let grad = grad_fields(2, 2);
        let w = witness(&div, &grad);
        let r = counterexample_blowup(&div, &grad, &w, &[1, 2, 4, 8], 256).unwrap();
        assert!(r.denominator_symbolic_zero);
        assert!((r.slope.unwrap() - 1.0).abs() < 0.05);
        assert_eq!(r.gram_rank, 4);
        assert_eq!(r.status, ExperimentStatus::InfiniteRatio);
        let single = counterexample_blowup(&div, &grad, &w, &[1], 64).unwrap();
        assert_eq!(single.gram_rank, 1);
        assert!(matches!(
            counterexample_blowup(&div, &grad, &w, &[1, 16], 64),
            Err(NumericsError::NyquistViolation { .. })
        ));
    }

    #[test]
    fn complex_witness_blowup() {
        // ker of the Cauchy–Riemann symbol is nontrivial only at complex ξ
        let cr = catalog("cauchy_riemann", 2).unwrap();
        let id = grad_power(0, 2, 2);
        let w = Witness {
            xi: vec![GaussianRational::one(), GaussianRational::i()],
            v: vec![GaussianRational::one(), -GaussianRational::i()],
            residual: vec![],
        };
        assert!(is_zero_vec(&cr.symbol_at(&w.xi).mul_vec(&w.v)));
        let r = counterexample_blowup(&cr, &id, &w, &[1, 2], 32).unwrap();
        assert_eq!(r.domain, Domain::Cube);
        assert!(r.denominator_symbolic_zero);
        assert!(r.log_numerators.iter().all(|l| l.is_finite()));
        assert_eq!(r.status, ExperimentStatus::InfiniteRatio);
    }

    #[test]
    fn korn_constants() {
        let eps = catalog("sym_gradient", 2).unwrap();
        let k = korn_constant_p2(&eps, &grad_fields(2, 2), 64, 4, 1).unwrap();
        assert!((k.estimate.unwrap() - 2f64.sqrt()).abs() < 1e-6);
        assert!(k.trace.windows(2).all(|w| w[0] <= w[1]));
        let grad = catalog("gradient", 2).unwrap();
        let k = korn_constant_p2(&grad, &grad, 16, 2, 1).unwrap();
        assert!((k.estimate.unwrap() - 1.0).abs() < 1e-12);
        let k = korn_constant_p2(&catalog("divergence", 2).unwrap(), &grad_fields(2, 2), 16, 2, 1).unwrap();
        assert_eq!(k.status, ExperimentStatus::UnboundedSuspected);
        assert_eq!(k.estimate, None);
    }

    #[test]
    fn bump_gradient_matches_finite_differences() {
        let phi = BumpTrig {
            center: vec![0.5, 0.45],
            radius: 0.3,
            freq: vec![1.0, -2.0],
            phase: 0.3,
            amplitude: vec![0.7, -0.2],
        };
        let x = [0.55, 0.4];
        let (mut v, mut g) = ([0.0; 2], [0.0; 4]);
        phi.eval(&x, &mut v, &mut g);
        let h = 1e-6;
        for j in 0..2 {
            let (mut xp, mut xm) = (x, x);
            xp[j] += h;
            xm[j] -= h;
            let (mut vp, mut vm, mut scratch) = ([0.0; 2], [0.0; 2], [0.0; 4]);
            phi.eval(&xp, &mut vp, &mut scratch);
            phi.eval(&xm, &mut vm, &mut scratch);
            for c in 0..2 {
                let fd = (vp[c] - vm[c]) / (2.0 * h);
                assert!((fd - g[c * 2 + j]).abs() < 1e-6, "{fd} vs {}", g[c * 2 + j]);
            }
        }
    }

    #[test]
    fn duality_ratios_are_finite_and_constrained() {
        let cfg = BbConfig {
            trials: 50,
            n_grid: 32,
            seed: 3,
            ..BbConfig::default()
        };
        let r = bb_ratio_experiment(&cfg).unwrap();
        assert!(r.all_finite);
        assert!(r.max_constraint_residual <= 1e-12);
        assert_eq!(r.status, ExperimentStatus::Ok);
        assert_eq!(bb_ratio_experiment(&cfg).unwrap(), r);
        let k2 = bb_ratio_experiment(&BbConfig { k: 2, ..cfg }).unwrap();
        assert_eq!(k2.components, 3);
        assert!(k2.max_constraint_residual <= 1e-12);
    }

    #[test]
    fn sobolev_ratios_bounded() {
        let grad = catalog("gradient", 2).unwrap();
        let id = grad_power(0, 1, 2);
        let cfg = SobolevConfig {
            trials: 30,
            grid: 16,
            ..SobolevConfig::default()
        };
        let r = sobolev_ratio_experiment(&grad, &id, &cfg, DEFAULT_SEED).unwrap();
        assert_eq!(r.p_star, 2.0);
        assert_eq!(r.status, ExperimentStatus::Bounded, "{r:?}");
        let div = catalog("divergence", 2).unwrap();
        let id2 = grad_power(0, 2, 2);
        assert!(matches!(
            sobolev_ratio_experiment(&div, &id2, &cfg, DEFAULT_SEED),
            Err(NumericsError::Analysis(AnalysisError::InclusionFails))
        ));
    }
}

//! Model-based clustering of fine-grained LMS activity: Gaussian mixtures
//! fit by EM over six covariance families, with the (cluster count, family)
//! combination chosen by maximizing BIC.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::linalg::{cholesky, solve_lower_into, sym_eigen, SymMatrix};
use crate::record::{DayClass, StudentRecord};
use crate::rng::{self, rng_from, SimRng};
use crate::schedule::CourseSchedule;
use crate::staging::{ClusterAssignment, Stage};

/// Eigenvalue floor keeping covariances positive definite on sparse counts.
pub const VAR_FLOOR: f64 = 1e-6;
/// EM stops when the relative log-likelihood change drops below this.
pub const EM_REL_TOL: f64 = 1e-8;
/// EM iteration cap.
pub const EM_MAX_ITER: usize = 500;
/// Restarts per (K, family) fit.
pub const EM_RESTARTS: usize = 10;
/// Largest cluster count tried by default.
pub const DEFAULT_K_MAX: usize = 9;

/// Covariance families: shape (spherical / diagonal / full) crossed with
/// whether components share the parameterization (equal) or not (varying).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CovarianceFamily {
    SphericalEqual,
    SphericalVarying,
    DiagonalEqual,
    DiagonalVarying,
    FullEqual,
    FullVarying,
}

impl CovarianceFamily {
    pub const ALL: [CovarianceFamily; 6] = [
        CovarianceFamily::SphericalEqual,
        CovarianceFamily::SphericalVarying,
        CovarianceFamily::DiagonalEqual,
        CovarianceFamily::DiagonalVarying,
        CovarianceFamily::FullEqual,
        CovarianceFamily::FullVarying,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CovarianceFamily::SphericalEqual => "spherical-equal",
            CovarianceFamily::SphericalVarying => "spherical-varying",
            CovarianceFamily::DiagonalEqual => "diagonal-equal",
            CovarianceFamily::DiagonalVarying => "diagonal-varying",
            CovarianceFamily::FullEqual => "full-equal",
            CovarianceFamily::FullVarying => "full-varying",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.label() == s)
    }

    /// Free parameters of a (K, family) mixture on d dimensions:
    /// K*d means + (K-1) weights + the family's covariance parameters.
    pub fn free_parameters(&self, k: usize, d: usize) -> usize {
        let cov = match self {
            CovarianceFamily::SphericalEqual => 1,
            CovarianceFamily::SphericalVarying => k,
            CovarianceFamily::DiagonalEqual => d,
            CovarianceFamily::DiagonalVarying => k * d,
            CovarianceFamily::FullEqual => d * (d + 1) / 2,
            CovarianceFamily::FullVarying => k * d * (d + 1) / 2,
        };
        k * d + (k - 1) + cov
    }

    fn is_full(&self) -> bool {
        matches!(self, CovarianceFamily::FullEqual | CovarianceFamily::FullVarying)
    }

    fn is_equal(&self) -> bool {
        matches!(
            self,
            CovarianceFamily::SphericalEqual
                | CovarianceFamily::DiagonalEqual
                | CovarianceFamily::FullEqual
        )
    }
}

impl fmt::Display for CovarianceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Per-family covariance storage (one entry per component; equal families
/// keep identical entries).
#[derive(Clone, Debug)]
pub enum Covariances {
    Spherical(Vec<f64>),
    Diagonal(Vec<Vec<f64>>),
    Full(Vec<SymMatrix>),
}

/// Standardized fine-grained activity ready for clustering.
#[derive(Clone, Debug)]
pub struct ClusterInput {
    /// Row-major n x d standardized data.
    data: Vec<f64>,
    n: usize,
    d: usize,
    pub column_names: Vec<String>,
    /// Per retained column: (mean, sd) used for standardization.
    pub standardization: Vec<(f64, f64)>,
    /// Constant columns dropped before standardization.
    pub dropped_constant: Vec<String>,
}

impl ClusterInput {
    /// Standardize columns to mean 0 / sd 1, dropping constant columns.
    pub fn from_columns(
        names: Vec<String>,
        columns: Vec<Vec<f64>>,
    ) -> Result<Self, MixtureError> {
        let n = columns.first().map(|c| c.len()).unwrap_or(0);
        if n == 0 {
            return Err(MixtureError::EmptyInput);
        }
        let mut kept_names = Vec::new();
        let mut dropped = Vec::new();
        let mut standardization = Vec::new();
        let mut kept: Vec<Vec<f64>> = Vec::new();
        for (name, col) in names.into_iter().zip(columns) {
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
            if var <= 1e-24 {
                dropped.push(name);
                continue;
            }
            let sd = var.sqrt();
            kept.push(col.iter().map(|x| (x - mean) / sd).collect());
            kept_names.push(name);
            standardization.push((mean, sd));
        }
        if kept.is_empty() {
            return Err(MixtureError::EmptyInput);
        }
        let d = kept.len();
        let mut data = vec![0.0; n * d];
        for (j, col) in kept.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                data[i * d + j] = x;
            }
        }
        Ok(Self { data, n, d, column_names: kept_names, standardization, dropped_constant: dropped })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }
}

/// A fitted Gaussian mixture.
#[derive(Clone, Debug)]
pub struct MixtureModel {
    pub k: usize,
    pub family: CovarianceFamily,
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub covariances: Covariances,
    pub loglik: f64,
    /// Log-likelihood after every EM iteration (non-decreasing).
    pub loglik_trace: Vec<f64>,
    pub bic: f64,
    /// Row-stochastic n x K soft memberships on the training data.
    pub memberships: Vec<Vec<f64>>,
}

impl MixtureModel {
    pub fn hard_labels(&self) -> Vec<usize> {
        self.memberships
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, _)| i)
                    .unwrap_or(0)
            })
            .collect()
    }

    pub fn assignment(&self) -> ClusterAssignment {
        ClusterAssignment { hard: self.hard_labels(), soft: self.memberships.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MixtureError {
    ComponentCollapse { k: usize, family: CovarianceFamily },
    AllFitsCollapsed,
    TooFewRows { n: usize, k: usize },
    EmptyInput,
    NoActivityAtStage(Stage),
}

impl fmt::Display for MixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixtureError::ComponentCollapse { k, family } => {
                write!(f, "component collapse fitting K={k}, family={family}")
            }
            MixtureError::AllFitsCollapsed => write!(f, "every (K, family) fit collapsed"),
            MixtureError::TooFewRows { n, k } => write!(f, "need more rows than components: n={n}, K={k}"),
            MixtureError::EmptyInput => {
                write!(f, "no usable columns (all constant) or no rows")
            }
            MixtureError::NoActivityAtStage(s) => {
                write!(f, "stage {s} has no activity data to cluster")
            }
        }
    }
}

impl core::error::Error for MixtureError {}

struct EmState {
    k: usize,
    weights: Vec<f64>,
    means: Vec<Vec<f64>>,
    cov: Covariances,
    /// Cholesky factors and log-determinants for full families.
    chol: Vec<SymMatrix>,
    logdet: Vec<f64>,
}

fn kmeanspp_centers(input: &ClusterInput, k: usize, rng: &mut SimRng) -> Vec<usize> {
    let n = input.n();
    let mut centers = Vec::with_capacity(k);
    centers.push(rng.gen_range(0..n));
    let mut dist2 = vec![0.0f64; n];
    for i in 0..n {
        dist2[i] = sq_dist(input.row(i), input.row(centers[0]));
    }
    while centers.len() < k {
        let total: f64 = dist2.iter().sum();
        let next = if total <= 0.0 {
            rng.gen_range(0..n)
        } else {
            let mut draw = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d2) in dist2.iter().enumerate() {
                draw -= d2;
                if draw < 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        };
        centers.push(next);
        for i in 0..n {
            let d2 = sq_dist(input.row(i), input.row(next));
            if d2 < dist2[i] {
                dist2[i] = d2;
            }
        }
    }
    centers
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dd = x - y;
        s += dd * dd;
    }
    s
}

fn init_responsibilities(input: &ClusterInput, k: usize, rng: &mut SimRng) -> Vec<f64> {
    let n = input.n();
    let centers = kmeanspp_centers(input, k, rng);
    let mut resp = vec![0.0; n * k];
    for i in 0..n {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (c, &center) in centers.iter().enumerate() {
            let d2 = sq_dist(input.row(i), input.row(center));
            if d2 < best_d {
                best_d = d2;
                best = c;
            }
        }
        resp[i * k + best] = 1.0;
    }
    resp
}

/// M-step. Fills `floored` with the fraction of each component's covariance
/// parameters that had to be clamped at the floor.
fn m_step(
    input: &ClusterInput,
    resp: &[f64],
    family: CovarianceFamily,
    state: &mut EmState,
    floored: &mut Vec<f64>,
) -> Result<(), MixtureError> {
    let (n, d, k) = (input.n(), input.d(), state.k);
    let mut nk = vec![0.0f64; k];
    for i in 0..n {
        for c in 0..k {
            nk[c] += resp[i * k + c];
        }
    }
    for c in 0..k {
        if nk[c] < 0.1 {
            // component weight below 1/(10n)
            return Err(MixtureError::ComponentCollapse { k, family });
        }
        state.weights[c] = nk[c] / n as f64;
    }
    for c in 0..k {
        let mean = &mut state.means[c];
        mean.iter_mut().for_each(|m| *m = 0.0);
        for i in 0..n {
            let r = resp[i * k + c];
            if r == 0.0 {
                continue;
            }
            for (m, x) in mean.iter_mut().zip(input.row(i)) {
                *m += r * x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= nk[c]);
    }

    floored.clear();
    floored.resize(k, 0.0);
    match family {
        CovarianceFamily::SphericalEqual | CovarianceFamily::SphericalVarying => {
            let mut sums = vec![0.0f64; k];
            for i in 0..n {
                for c in 0..k {
                    let r = resp[i * k + c];
                    if r > 0.0 {
                        sums[c] += r * sq_dist(input.row(i), &state.means[c]);
                    }
                }
            }
            let mut vars: Vec<f64> = if family.is_equal() {
                let pooled = sums.iter().sum::<f64>() / (n as f64 * d as f64);
                vec![pooled; k]
            } else {
                (0..k).map(|c| sums[c] / (nk[c] * d as f64)).collect()
            };
            for (c, v) in vars.iter_mut().enumerate() {
                if *v < VAR_FLOOR {
                    *v = VAR_FLOOR;
                    floored[c] = 1.0;
                }
            }
            state.cov = Covariances::Spherical(vars);
        }
        CovarianceFamily::DiagonalEqual | CovarianceFamily::DiagonalVarying => {
            let mut sums = vec![vec![0.0f64; d]; k];
            for i in 0..n {
                let row = input.row(i);
                for c in 0..k {
                    let r = resp[i * k + c];
                    if r == 0.0 {
                        continue;
                    }
                    let mean = &state.means[c];
                    let acc = &mut sums[c];
                    for j in 0..d {
                        let dd = row[j] - mean[j];
                        acc[j] += r * dd * dd;
                    }
                }
            }
            let mut vars: Vec<Vec<f64>> = if family.is_equal() {
                let mut pooled = vec![0.0f64; d];
                for acc in &sums {
                    for (p, a) in pooled.iter_mut().zip(acc) {
                        *p += a;
                    }
                }
                pooled.iter_mut().for_each(|p| *p /= n as f64);
                vec![pooled; k]
            } else {
                (0..k).map(|c| sums[c].iter().map(|s| s / nk[c]).collect()).collect()
            };
            for (c, vrow) in vars.iter_mut().enumerate() {
                let mut clamped = 0usize;
                for v in vrow.iter_mut() {
                    if *v < VAR_FLOOR {
                        *v = VAR_FLOOR;
                        clamped += 1;
                    }
                }
                floored[c] = clamped as f64 / d as f64;
            }
            state.cov = Covariances::Diagonal(vars);
        }
        CovarianceFamily::FullEqual | CovarianceFamily::FullVarying => {
            // effective sample size must support a d x d estimate
            if family == CovarianceFamily::FullVarying {
                if nk.iter().any(|&c| c < d as f64) {
                    return Err(MixtureError::ComponentCollapse { k, family });
                }
            } else if (n as f64) - (k as f64) < d as f64 {
                return Err(MixtureError::ComponentCollapse { k, family });
            }
            let mut mats: Vec<SymMatrix> = Vec::with_capacity(k);
            if family.is_equal() {
                let mut pooled = SymMatrix::zeros(d);
                let mut diff = vec![0.0f64; d];
                for i in 0..n {
                    let row = input.row(i);
                    for c in 0..k {
                        let r = resp[i * k + c];
                        if r <= 1e-12 {
                            continue;
                        }
                        for j in 0..d {
                            diff[j] = row[j] - state.means[c][j];
                        }
                        accumulate_outer(&mut pooled, &diff, r);
                    }
                }
                for v in pooled.data.iter_mut() {
                    *v /= n as f64;
                }
                mirror_lower(&mut pooled);
                mats = vec![pooled; k];
            } else {
                for c in 0..k {
                    let mut m = SymMatrix::zeros(d);
                    let mut diff = vec![0.0f64; d];
                    for i in 0..n {
                        let r = resp[i * k + c];
                        if r <= 1e-12 {
                            continue;
                        }
                        let row = input.row(i);
                        for j in 0..d {
                            diff[j] = row[j] - state.means[c][j];
                        }
                        accumulate_outer(&mut m, &diff, r);
                    }
                    for v in m.data.iter_mut() {
                        *v /= nk[c];
                    }
                    mirror_lower(&mut m);
                    mats.push(m);
                }
            }
            for (c, m) in mats.iter_mut().enumerate() {
                floored[c] = floor_eigenvalues(m) as f64 / d as f64;
            }
            state.cov = Covariances::Full(mats);
        }
    }
    refresh_factorizations(state, family)?;
    Ok(())
}

/// Accumulate r * diff diff^T into the lower triangle.
fn accumulate_outer(m: &mut SymMatrix, diff: &[f64], r: f64) {
    let d = m.n;
    for a in 0..d {
        let ra = r * diff[a];
        if ra == 0.0 {
            continue;
        }
        let row = &mut m.data[a * d..a * d + a + 1];
        for (b, slot) in row.iter_mut().enumerate() {
            *slot += ra * diff[b];
        }
    }
}

fn mirror_lower(m: &mut SymMatrix) {
    let d = m.n;
    for a in 0..d {
        for b in (a + 1)..d {
            m.data[a * d + b] = m.data[b * d + a];
        }
    }
}

/// Clamp eigenvalues at the floor. Fast path: if the matrix minus the floor
/// is positive definite there is nothing to clamp.
fn floor_eigenvalues(m: &mut SymMatrix) -> usize {
    let d = m.n;
    let mut shifted = m.clone();
    for i in 0..d {
        shifted.data[i * d + i] -= VAR_FLOOR;
    }
    if cholesky(&shifted).is_some() {
        return 0;
    }
    let (vals, vecs) = sym_eigen(m);
    let mut clamped = 0;
    let mut fixed = vals.clone();
    for v in fixed.iter_mut() {
        if *v < VAR_FLOOR {
            *v = VAR_FLOOR;
            clamped += 1;
        }
    }
    let mut rebuilt = SymMatrix::zeros(d);
    for (lambda, vec) in fixed.iter().zip(&vecs) {
        for a in 0..d {
            for b in 0..d {
                rebuilt.data[a * d + b] += lambda * vec[a] * vec[b];
            }
        }
    }
    *m = rebuilt;
    clamped.max(1)
}

/// A component whose covariance parameters are almost entirely at the floor
/// is a point mass, not a cluster; two such M-steps in a row abort the fit.
/// Partial flooring is expected on sparse count columns and tolerated.
fn track_degeneracy(
    floored: &[f64],
    streak: &mut [usize],
    k: usize,
    family: CovarianceFamily,
) -> Result<(), MixtureError> {
    for (c, &fraction) in floored.iter().enumerate() {
        if fraction >= 0.9 {
            streak[c] += 1;
            if streak[c] >= 2 {
                return Err(MixtureError::ComponentCollapse { k, family });
            }
        } else {
            streak[c] = 0;
        }
    }
    Ok(())
}

fn refresh_factorizations(
    state: &mut EmState,
    family: CovarianceFamily,
) -> Result<(), MixtureError> {
    if !family.is_full() {
        return Ok(());
    }
    let Covariances::Full(mats) = &state.cov else { return Ok(()) };
    state.chol.clear();
    state.logdet.clear();
    for m in mats {
        let l = cholesky(m).ok_or(MixtureError::ComponentCollapse { k: state.k, family })?;
        let logdet: f64 = (0..m.n).map(|i| 2.0 * l.at(i, i).ln()).sum();
        state.chol.push(l);
        state.logdet.push(logdet);
    }
    Ok(())
}

/// E-step: fills `resp` with responsibilities, returns the log-likelihood.
fn e_step(input: &ClusterInput, state: &EmState, resp: &mut [f64]) -> f64 {
    let (n, d, k) = (input.n(), input.d(), state.k);
    let half_d_ln2pi = 0.5 * d as f64 * (2.0 * core::f64::consts::PI).ln();
    let log_w: Vec<f64> = state.weights.iter().map(|w| w.max(1e-300).ln()).collect();
    let mut scratch = vec![0.0f64; d];
    let mut solved = vec![0.0f64; d];
    let mut loglik = 0.0;
    for i in 0..n {
        let row = input.row(i);
        let dst = &mut resp[i * k..(i + 1) * k];
        for c in 0..k {
            let mean = &state.means[c];
            let quad_plus_logdet = match &state.cov {
                Covariances::Spherical(vars) => {
                    let v = vars[c];
                    sq_dist(row, mean) / v + d as f64 * v.ln()
                }
                Covariances::Diagonal(vars) => {
                    let vrow = &vars[c];
                    let mut q = 0.0;
                    let mut logdet = 0.0;
                    for j in 0..d {
                        let dd = row[j] - mean[j];
                        q += dd * dd / vrow[j];
                        logdet += vrow[j].ln();
                    }
                    q + logdet
                }
                Covariances::Full(_) => {
                    for j in 0..d {
                        scratch[j] = row[j] - mean[j];
                    }
                    solve_lower_into(&state.chol[c], &scratch, &mut solved);
                    let q: f64 = solved.iter().map(|z| z * z).sum();
                    q + state.logdet[c]
                }
            };
            dst[c] = log_w[c] - half_d_ln2pi - 0.5 * quad_plus_logdet;
        }
        // log-sum-exp normalization
        let max = dst.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in dst.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        for v in dst.iter_mut() {
            *v /= sum;
        }
        loglik += max + sum.ln();
    }
    loglik
}

fn em_single(
    input: &ClusterInput,
    k: usize,
    family: CovarianceFamily,
    rng: &mut SimRng,
) -> Result<MixtureModel, MixtureError> {
    let (n, d) = (input.n(), input.d());
    let mut state = EmState {
        k,
        weights: vec![1.0 / k as f64; k],
        means: vec![vec![0.0; d]; k],
        cov: Covariances::Spherical(vec![1.0; k]),
        chol: Vec::new(),
        logdet: Vec::new(),
    };
    let mut resp = init_responsibilities(input, k, rng);
    // a component with no initial members gets a token share so EM can grow it
    for c in 0..k {
        let total: f64 = (0..n).map(|i| resp[i * k + c]).sum();
        if total < 0.5 {
            for i in 0..n {
                resp[i * k + c] = 1.0 / n as f64;
            }
        }
    }
    let mut floored = Vec::new();
    let mut degenerate_streak = vec![0usize; k];
    m_step(input, &resp, family, &mut state, &mut floored)?;
    track_degeneracy(&floored, &mut degenerate_streak, k, family)?;

    let mut trace = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..EM_MAX_ITER {
        let ll = e_step(input, &state, &mut resp);
        trace.push(ll);
        let converged = prev.is_finite() && (ll - prev).abs() <= EM_REL_TOL * ll.abs().max(1.0);
        prev = ll;
        if converged {
            break;
        }
        m_step(input, &resp, family, &mut state, &mut floored)?;
        track_degeneracy(&floored, &mut degenerate_streak, k, family)?;
    }
    let loglik = *trace.last().unwrap();
    let m = family.free_parameters(k, d) as f64;
    let bic = 2.0 * loglik - m * (n as f64).ln();
    let memberships: Vec<Vec<f64>> =
        (0..n).map(|i| resp[i * k..(i + 1) * k].to_vec()).collect();
    Ok(MixtureModel {
        k,
        family,
        weights: state.weights,
        means: state.means,
        covariances: state.cov,
        loglik,
        loglik_trace: trace,
        bic,
        memberships,
    })
}

/// Fit one (K, family) mixture: EM to convergence from the best of ten
/// k-means++ restarts, deterministic in the seed.
pub fn fit_em(
    input: &ClusterInput,
    k: usize,
    family: CovarianceFamily,
    seed: u64,
) -> Result<MixtureModel, MixtureError> {
    if k == 0 || input.n() <= k {
        return Err(MixtureError::TooFewRows { n: input.n(), k });
    }
    let family_idx = CovarianceFamily::ALL.iter().position(|f| *f == family).unwrap() as u64;
    let mut best: Option<MixtureModel> = None;
    let mut last_err = None;
    for restart in 0..EM_RESTARTS {
        let mut rng =
            rng_from(seed, &[rng::tag("em"), k as u64, family_idx, restart as u64]);
        match em_single(input, k, family, &mut rng) {
            Ok(model) => {
                if best.as_ref().map(|b| model.loglik > b.loglik).unwrap_or(true) {
                    best = Some(model);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(MixtureError::ComponentCollapse { k, family }))
}

/// Fit every (K, family) combination and return the BIC-maximal model;
/// ties break toward fewer free parameters, then smaller K.
pub fn select_model(
    input: &ClusterInput,
    k_range: impl IntoIterator<Item = usize>,
    families: &[CovarianceFamily],
    seed: u64,
) -> Result<MixtureModel, MixtureError> {
    let mut best: Option<MixtureModel> = None;
    for k in k_range {
        if input.n() <= k {
            continue;
        }
        for &family in families {
            let Ok(model) = fit_em(input, k, family, seed) else { continue };
            let better = match &best {
                None => true,
                Some(b) => {
                    let (mb, kb) = (b.family.free_parameters(b.k, input.d()), b.k);
                    let (mn, kn) = (family.free_parameters(k, input.d()), k);
                    model.bic > b.bic
                        || (model.bic == b.bic && (mn < mb || (mn == mb && kn < kb)))
                }
            };
            if better {
                best = Some(model);
            }
        }
    }
    best.ok_or(MixtureError::AllFitsCollapsed)
}

/// The fine-grained clustering variables at a stage: activity level per
/// folder, per week, per day class, for weeks visible at the stage.
pub fn fine_grained_columns(
    cohort: &[StudentRecord],
    schedule: &CourseSchedule,
    stage: Stage,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let cap = stage.activity_week_cap();
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for folder in 0..schedule.folders.len() {
        for week in 1..=cap {
            for day in DayClass::ALL {
                names.push(format!("F{}_W{}_{}", folder + 1, week, day.code()));
                columns.push(
                    cohort.iter().map(|r| r.activity.get(folder, week, day) as f64).collect(),
                );
            }
        }
    }
    (names, columns)
}

/// Cluster the cohort's activity up to `stage`: builds the standardized
/// fine-grained input, selects the BIC-best mixture over K in 1..=9 and all
/// six families, and returns hard labels plus soft memberships.
pub fn memberships_at_stage(
    cohort: &[StudentRecord],
    schedule: &CourseSchedule,
    stage: Stage,
    seed: u64,
) -> Result<(ClusterAssignment, MixtureModel), MixtureError> {
    let input = cluster_input_at_stage(cohort, schedule, stage)?;
    let stage_seed = rng::derive_seed(seed, &[rng::tag("cluster-stage"), stage.index() as u64]);
    let model = select_model(&input, 1..=DEFAULT_K_MAX, &CovarianceFamily::ALL, stage_seed)?;
    Ok((model.assignment(), model))
}

/// Build the standardized clustering input for a stage.
pub fn cluster_input_at_stage(
    cohort: &[StudentRecord],
    schedule: &CourseSchedule,
    stage: Stage,
) -> Result<ClusterInput, MixtureError> {
    if stage.activity_week_cap() == 0 {
        return Err(MixtureError::NoActivityAtStage(stage));
    }
    let (names, columns) = fine_grained_columns(cohort, schedule, stage);
    ClusterInput::from_columns(names, columns)
}

/// Adjusted Rand index between two hard partitions.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    let ka = a.iter().max().copied().unwrap_or(0) + 1;
    let kb = b.iter().max().copied().unwrap_or(0) + 1;
    let mut table = vec![0u64; ka * kb];
    let mut rows = vec![0u64; ka];
    let mut cols = vec![0u64; kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x * kb + y] += 1;
        rows[x] += 1;
        cols[y] += 1;
    }
    let c2 = |x: u64| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_ij: f64 = table.iter().map(|&x| c2(x)).sum();
    let sum_a: f64 = rows.iter().map(|&x| c2(x)).sum();
    let sum_b: f64 = cols.iter().map(|&x| c2(x)).sum();
    let total = c2(n as u64);
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom.abs() < 1e-12 {
        return if (sum_ij - expected).abs() < 1e-12 { 1.0 } else { 0.0 };
    }
    (sum_ij - expected) / denom
}

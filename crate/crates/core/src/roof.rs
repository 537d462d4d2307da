//! Numerical convex-roof estimation.
//!
//! Every size-`m` pure-state decomposition of `ρ = Σ_j λ_j |e_j⟩⟨e_j|`
//! (rank `r`) has the form `√p_l |ψ_l⟩ = Σ_j V_lj √λ_j |e_j⟩` for an `m x r`
//! isometry `V`. Minimizing the ensemble average of a pure-state functional
//! therefore becomes a smooth-ish problem on the complex Stiefel manifold,
//! which we attack with random restarts of Riemannian conjugate gradient.
//! Any ensemble found this way is a valid decomposition, so the result is
//! always an upper bound on the roof.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigh, ComplexHermitian, DensityMatrix, DENSITY_TOL};
use crate::measures::{norm, BlochVector, PureStateFunctional};
use crate::random::{random_isometry, rng_from_seed};

/// Eigenvalues at or below this are dropped when forming the range of `ρ`.
const RANK_TOL: f64 = 1e-13;
/// Ensemble members lighter than this are discarded from results.
const WEIGHT_CUTOFF: f64 = 1e-16;

/// One member of a pure-state ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePiece {
    pub weight: f64,
    pub amplitudes: Vec<Complex64>,
}

/// Weights `p_l` and normalized states `ψ_l` with `ρ = Σ p_l |ψ_l⟩⟨ψ_l|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PureEnsemble {
    pieces: Vec<EnsemblePiece>,
}

impl PureEnsemble {
    pub fn new(pieces: Vec<EnsemblePiece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidEnsemble("empty ensemble".into()));
        };
        let dim = first.amplitudes.len();
        let mut total = 0.0;
        for (l, p) in pieces.iter().enumerate() {
            if p.amplitudes.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.amplitudes.len(),
                });
            }
            if !(p.weight >= 0.0) {
                return Err(Error::InvalidEnsemble(format!(
                    "weight {l} is {}",
                    p.weight
                )));
            }
            let n = norm(&p.amplitudes);
            if (n - 1.0).abs() > DENSITY_TOL {
                return Err(Error::NotNormalized { norm: n });
            }
            total += p.weight;
        }
        if (total - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { pieces })
    }

    /// Builds an ensemble from unnormalized vectors `√p_l ψ_l`; zero vectors
    /// are skipped.
    pub fn from_unnormalized<I>(vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Complex64>>,
    {
        let pieces = vectors
            .into_iter()
            .filter_map(|w| {
                let n = norm(&w);
                (n * n > WEIGHT_CUTOFF).then(|| EnsemblePiece {
                    weight: n * n,
                    amplitudes: w.iter().map(|z| z / n).collect(),
                })
            })
            .collect();
        Self::new(pieces)
    }

    /// Singleton ensemble `{(1, ψ)}`.
    pub fn pure(psi: Vec<Complex64>) -> Result<Self> {
        Self::new(vec![EnsemblePiece {
            weight: 1.0,
            amplitudes: psi,
        }])
    }

    pub fn pieces(&self) -> &[EnsemblePiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].amplitudes.len()
    }

    /// `Σ p_l |ψ_l⟩⟨ψ_l|`.
    pub fn reconstruct(&self) -> ComplexHermitian {
        ComplexHermitian::from_weighted_states(
            self.dim(),
            self.pieces
                .iter()
                .map(|p| (p.weight, p.amplitudes.as_slice())),
        )
    }

    /// Largest entrywise deviation between the reconstruction and `rho`.
    pub fn reconstruction_error(&self, rho: &ComplexHermitian) -> f64 {
        self.reconstruct().max_abs_diff(rho)
    }

    /// Fails unless the ensemble rebuilds `rho` to `tol` entrywise.
    pub fn check_reconstructs(&self, rho: &ComplexHermitian, tol: f64) -> Result<()> {
        if self.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: self.dim(),
            });
        }
        let deviation = self.reconstruction_error(rho);
        if deviation > tol {
            return Err(Error::Reconstruction { deviation });
        }
        Ok(())
    }

    /// Applies `ψ_l -> diag(e^{iθ}) ψ_l` to every member.
    pub fn phase_rotated(&self, theta: &[f64]) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| EnsemblePiece {
                    weight: p.weight,
                    amplitudes: crate::matcore::phase_rotate_state(&p.amplitudes, theta),
                })
                .collect(),
        }
    }
}

/// `Σ_l p_l f(ψ_l)`.
pub fn ensemble_average(e: &PureEnsemble, f: &dyn PureStateFunctional) -> f64 {
    e.pieces()
        .iter()
        .map(|p| p.weight * f.value(&p.amplitudes))
        .sum()
}

/// Optimizer settings for [`roof_upper`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofOptions {
    /// Ensemble size `m`; `None` means `d²`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Stop once an iteration improves the value by less than `tol` relative.
    pub tol: f64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 8,
            seed: 0,
            max_iters: 3000,
            tol: 1e-10,
        }
    }
}

/// Best ensemble found by [`roof_upper`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoofResult {
    pub value: f64,
    pub ensemble: PureEnsemble,
    pub restarts_used: usize,
    /// Per restart: `false` when the restart stopped at `max_iters`.
    pub converged: Vec<bool>,
}

/// Upper bound on the convex roof of `f` at `rho`.
pub fn roof_upper(
    rho: &DensityMatrix,
    f: &dyn PureStateFunctional,
    opts: &RoofOptions,
) -> Result<RoofResult> {
    let problem = RoofProblem::new(rho, f, opts)?;
    if problem.rank() == 1 {
        let psi: Vec<Complex64> = problem.range_state(0);
        let ensemble = PureEnsemble::pure(psi)?;
        return Ok(RoofResult {
            value: ensemble_average(&ensemble, f),
            ensemble,
            restarts_used: 0,
            converged: vec![],
        });
    }
    let runs: Vec<LocalRun> = (0..opts.restarts as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_from_seed(opts.seed.wrapping_add(k));
            let v0 = random_isometry(problem.m, problem.rank(), &mut rng);
            problem.descend(v0, opts)
        })
        .collect();
    problem.finish(runs)
}

/// Continues the local search from an existing decomposition of `rho`.
///
/// The result is never worse than `init` beyond roundoff.
pub fn roof_refine(
    rho: &DensityMatrix,
    f: &dyn PureStateFunctional,
    init: &PureEnsemble,
    opts: &RoofOptions,
) -> Result<RoofResult> {
    init.check_reconstructs(rho, 1e-8)?;
    let size = opts.ensemble_size.unwrap_or(0).max(init.len());
    let opts = RoofOptions {
        ensemble_size: Some(size),
        ..opts.clone()
    };
    let problem = RoofProblem::new(rho, f, &opts)?;
    if problem.rank() == 1 {
        return roof_upper(rho, f, &opts);
    }
    let v0 = problem.isometry_for(init);
    let run = problem.descend(v0, &opts);
    problem.finish(vec![run])
}

struct LocalRun {
    value: f64,
    v: DMatrix<Complex64>,
    converged: bool,
}

struct RoofProblem<'a> {
    f: &'a dyn PureStateFunctional,
    /// `r x d`, row `j` is `√λ_j e_j^T`.
    basis: DMatrix<Complex64>,
    /// `r` eigenvectors of the range.
    eigvecs: Vec<Vec<Complex64>>,
    sqrt_eigs: Vec<f64>,
    m: usize,
    rho: &'a DensityMatrix,
}

impl<'a> RoofProblem<'a> {
    fn new(rho: &'a DensityMatrix, f: &'a dyn PureStateFunctional, opts: &RoofOptions) -> Result<Self> {
        if opts.restarts == 0 {
            return Err(Error::InvalidOption("restarts must be at least 1".into()));
        }
        if !(opts.tol > 0.0) {
            return Err(Error::InvalidOption("tol must be positive".into()));
        }
        let d = rho.dim();
        let spec = eigh(rho);
        let rank = spec.rank(RANK_TOL).max(1);
        let m = opts.ensemble_size.unwrap_or(d * d);
        if m < rank {
            return Err(Error::EnsembleTooSmall { size: m, rank });
        }
        let sqrt_eigs: Vec<f64> = spec.eigenvalues[..rank]
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .collect();
        let eigvecs: Vec<Vec<Complex64>> = spec.eigenvectors[..rank].to_vec();
        let basis = DMatrix::from_fn(rank, d, |j, i| eigvecs[j][i] * sqrt_eigs[j]);
        Ok(Self {
            f,
            basis,
            eigvecs,
            sqrt_eigs,
            m,
            rho,
        })
    }

    fn rank(&self) -> usize {
        self.basis.nrows()
    }

    fn range_state(&self, j: usize) -> Vec<Complex64> {
        self.eigvecs[j].clone()
    }

    fn isometry_for(&self, e: &PureEnsemble) -> DMatrix<Complex64> {
        let r = self.rank();
        let mut v = DMatrix::zeros(self.m, r);
        for (l, p) in e.pieces().iter().enumerate() {
            let s = p.weight.sqrt();
            for j in 0..r {
                let ip: Complex64 = self.eigvecs[j]
                    .iter()
                    .zip(&p.amplitudes)
                    .map(|(e, a)| e.conj() * a)
                    .sum();
                v[(l, j)] = ip * s / self.sqrt_eigs[j];
            }
        }
        polar(&v)
    }

    /// Objective and its gradient with respect to `conj(V)`.
    fn eval(&self, v: &DMatrix<Complex64>, want_grad: bool) -> (f64, DMatrix<Complex64>) {
        let w = v * &self.basis;
        let d = w.ncols();
        let mut value = 0.0;
        let mut gw = DMatrix::zeros(self.m, d);
        let mut row = vec![Complex64::default(); d];
        let mut grad = vec![Complex64::default(); d];
        for l in 0..self.m {
            for i in 0..d {
                row[i] = w[(l, i)];
            }
            if want_grad {
                value += self.f.weighted_value_grad(&row, &mut grad);
                for i in 0..d {
                    gw[(l, i)] = grad[i];
                }
            } else {
                value += self.f.weighted_value(&row);
            }
        }
        let gv = if want_grad {
            gw * self.basis.adjoint()
        } else {
            DMatrix::zeros(0, 0)
        };
        (value, gv)
    }

    /// Riemannian conjugate gradient (Polak-Ribière+) with Armijo
    /// backtracking and polar retraction.
    fn descend(&self, v0: DMatrix<Complex64>, opts: &RoofOptions) -> LocalRun {
        let mut v = v0;
        let (mut f, eg) = self.eval(&v, true);
        let mut xi = project(&v, &(eg * Complex64::new(2.0, 0.0)));
        let mut dir = -xi.clone();
        let mut step = 0.5;
        let mut small = 0;
        let mut converged = false;
        for _ in 0..opts.max_iters {
            let gnorm2 = inner(&xi, &xi);
            if gnorm2 < 1e-28 {
                converged = true;
                break;
            }
            let mut slope = inner(&xi, &dir);
            if slope >= 0.0 {
                dir = -xi.clone();
                slope = -gnorm2;
            }
            let mut t = step;
            let accepted = loop {
                let cand = polar(&(&v + &dir * Complex64::new(t, 0.0)));
                let (fc, _) = self.eval(&cand, false);
                if fc <= f + 1e-4 * t * slope {
                    break Some((cand, fc));
                }
                t *= 0.5;
                if t < 1e-18 {
                    break None;
                }
            };
            let Some((v_new, f_new)) = accepted else {
                if slope == -gnorm2 {
                    converged = true;
                    break;
                }
                dir = -xi.clone();
                continue;
            };
            let (_, eg) = self.eval(&v_new, true);
            let xi_new = project(&v_new, &(eg * Complex64::new(2.0, 0.0)));
            let xi_old = project(&v_new, &xi);
            let dir_old = project(&v_new, &dir);
            let beta = (inner(&xi_new, &(&xi_new - &xi_old)) / gnorm2).max(0.0);
            dir = -&xi_new + dir_old * Complex64::new(beta, 0.0);
            xi = xi_new;
            v = v_new;
            let improvement = f - f_new;
            f = f_new;
            step = (2.0 * t).min(4.0);
            if improvement <= opts.tol * f.abs() {
                small += 1;
                if small >= 3 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        let (value, _) = self.eval(&v, false);
        LocalRun {
            value,
            v,
            converged,
        }
    }

    fn finish(&self, runs: Vec<LocalRun>) -> Result<RoofResult> {
        let converged = runs.iter().map(|r| r.converged).collect();
        let restarts_used = runs.len();
        let best = runs
            .into_iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
            .map(|(_, r)| r)
            .expect("at least one restart");
        let w = &best.v * &self.basis;
        let ensemble = PureEnsemble::from_unnormalized(
            (0..w.nrows()).map(|l| w.row(l).iter().copied().collect::<Vec<_>>()),
        )?;
        ensemble.check_reconstructs(self.rho, 1e-8)?;
        Ok(RoofResult {
            value: ensemble_average(&ensemble, self.f),
            ensemble,
            restarts_used,
            converged,
        })
    }
}

/// `Re tr(A† B)`.
fn inner(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Tangent projection at `v`: `Z - V herm(V† Z)`.
fn project(v: &DMatrix<Complex64>, z: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let vz = v.adjoint() * z;
    let herm = (&vz + vz.adjoint()) * Complex64::new(0.5, 0.0);
    z - v * herm
}

/// Polar retraction `X (X† X)^{-1/2}`.
fn polar(x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let g = x.adjoint() * x;
    let eig = g.symmetric_eigen();
    let r = x.ncols();
    let mut inv_sqrt = DMatrix::<Complex64>::zeros(r, r);
    for k in 0..r {
        let l = eig.eigenvalues[k].max(1e-300);
        let s = 1.0 / l.sqrt();
        let u = eig.eigenvectors.column(k);
        inv_sqrt += u * u.adjoint() * Complex64::new(s, 0.0);
    }
    x * inv_sqrt
}

/// Two-element decomposition along the chord through `b` in direction `u`.
///
/// Returns the ensemble average of `f` over the chord's endpoints.
pub fn qubit_chord_value(b: &BlochVector, f: &dyn PureStateFunctional, u: [f64; 3]) -> f64 {
    let un = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let u = [u[0] / un, u[1] / un, u[2] / un];
    let bu = b.x * u[0] + b.y * u[1] + b.z * u[2];
    let r2 = b.x * b.x + b.y * b.y + b.z * b.z;
    let disc = (bu * bu + 1.0 - r2).max(0.0).sqrt();
    let (tp, tm) = (-bu + disc, -bu - disc);
    let span = tp - tm;
    if span <= 0.0 {
        return f.value(&b.to_pure_state());
    }
    let end = |t: f64| BlochVector {
        x: b.x + t * u[0],
        y: b.y + t * u[1],
        z: b.z + t * u[2],
    };
    let (wp, wm) = (-tm / span, tp / span);
    wp * f.value(&end(tp).to_pure_state()) + wm * f.value(&end(tm).to_pure_state())
}

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Minimum of [`qubit_chord_value`] over a `grid_n x grid_n` grid of chord
/// directions, without refinement.
pub fn qubit_chord_grid_min(b: &BlochVector, f: &dyn PureStateFunctional, grid_n: usize) -> (f64, f64, f64) {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid_n {
        let theta = std::f64::consts::PI * i as f64 / grid_n as f64;
        for j in 0..grid_n {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / grid_n as f64;
            let v = qubit_chord_value(b, f, direction(theta, phi));
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }
    best
}

/// Brute-force qubit roof: grid over chord directions through `b`, then a
/// compass search around the best grid point.
pub fn qubit_roof_oracle(b: &BlochVector, f: &dyn PureStateFunctional, grid_n: usize) -> Result<f64> {
    let b = BlochVector::new(b.x, b.y, b.z)?;
    if grid_n < 90 {
        return Err(Error::InvalidOption(format!("grid_n {grid_n} is below 90")));
    }
    if b.r() >= 1.0 - DENSITY_TOL {
        return Ok(f.value(&b.to_pure_state()));
    }
    let (mut best, mut theta, mut phi) = qubit_chord_grid_min(&b, f, grid_n);
    let mut h = std::f64::consts::PI / grid_n as f64;
    while h > 1e-12 {
        let mut moved = false;
        for (dt, dp) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let v = qubit_chord_value(&b, f, direction(theta + dt, phi + dp));
            if v < best {
                best = v;
                theta += dt;
                phi += dp;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    Ok(best)
}

//! The lifted measurement map on rank-<=2 Hermitian operators.
//!
//! `min_lifted_gain` approximates `min ||A2(X)||` over Hermitian X with
//! rank <= 2 and unit operator norm, parametrized as
//! `X = lam1 u u* + lam2 v v*` with (u, v) orthonormal and max |lam| = 1.
//! Multi-start projected gradient descent with a seed-deterministic restart
//! schedule; restart i starts from the same point no matter how many
//! restarts run in total, so more restarts can only improve the minimum.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::frames::FiniteFrame;
use crate::hilbert::{HVector, HermitianOperator, ScalarField};
use crate::linalg::realify;
use crate::util::split_seed;
use crate::{Error, Result};

/// Result of the gain minimization. `value` is an upper bound on the true
/// minimum; `grid_value` carries the dense-grid cross-check on the small
/// dimensions where a grid is affordable (real M <= 3, complex M <= 2).
#[derive(Debug, Clone)]
pub struct MinGain {
    pub value: f64,
    pub minimizer: HermitianOperator,
    pub grid_value: Option<f64>,
}

#[derive(Clone)]
struct GainState {
    u: HVector,
    v: Option<HVector>,
    lam: (f64, f64),
}

impl GainState {
    fn operator(&self, field: ScalarField, dim: usize) -> HermitianOperator {
        let u = self.u.coords();
        HermitianOperator::from_lower(field, dim, |i, j| {
            let mut e = u[i] * u[j].conj() * self.lam.0;
            if let Some(v) = &self.v {
                e += v.coords()[i] * v.coords()[j].conj() * self.lam.1;
            }
            e
        })
    }
}

fn quad_forms(frame: &FiniteFrame, w: &HVector) -> Vec<f64> {
    frame
        .vectors()
        .iter()
        .map(|phi| phi.inner(w).expect("dims agree").norm_sqr())
        .collect()
}

/// `||A2(X)||^2` for X given by the state.
fn objective_sq(frame: &FiniteFrame, state: &GainState) -> f64 {
    let qu = quad_forms(frame, &state.u);
    let qv = state.v.as_ref().map(|v| quad_forms(frame, v));
    (0..frame.len())
        .map(|n| {
            let c = state.lam.0 * qu[n] + state.lam.1 * qv.as_ref().map_or(0.0, |q| q[n]);
            c * c
        })
        .sum()
}

fn retract(mut state: GainState) -> GainState {
    state.u = state.u.normalized();
    if let Some(v) = state.v.take() {
        let ip = v.inner(&state.u).expect("dims agree");
        let v = v
            .sub(&state.u.scale(ip))
            .expect("dims agree")
            .normalized();
        state.v = Some(v);
    }
    let m = state.lam.0.abs().max(state.lam.1.abs());
    state.lam = if m < 1e-12 {
        (1.0, -1.0)
    } else {
        (state.lam.0 / m, state.lam.1 / m)
    };
    state
}

fn descend(frame: &FiniteFrame, mut state: GainState, iters: usize) -> (f64, GainState) {
    state = retract(state);
    let mut best = objective_sq(frame, &state);
    let mut step = 0.1;
    for _ in 0..iters {
        let qu = quad_forms(frame, &state.u);
        let qv = state.v.as_ref().map(|v| quad_forms(frame, v));
        let c: Vec<f64> = (0..frame.len())
            .map(|n| state.lam.0 * qu[n] + state.lam.1 * qv.as_ref().map_or(0.0, |q| q[n]))
            .collect();

        // Gradients of sum c_n^2 in the ambient parameters.
        let mut gu = HVector::zero(frame.field(), frame.dim());
        for (n, phi) in frame.vectors().iter().enumerate() {
            let w = phi.scale(state.u.inner(phi).expect("dims agree"));
            gu = gu
                .add(&w.scale(Complex64::new(4.0 * state.lam.0 * c[n], 0.0)))
                .expect("dims agree");
        }
        let gv = state.v.as_ref().map(|v| {
            let mut g = HVector::zero(frame.field(), frame.dim());
            for (n, phi) in frame.vectors().iter().enumerate() {
                let w = phi.scale(v.inner(phi).expect("dims agree"));
                g = g
                    .add(&w.scale(Complex64::new(4.0 * state.lam.1 * c[n], 0.0)))
                    .expect("dims agree");
            }
            g
        });
        let gl1: f64 = (0..frame.len()).map(|n| 2.0 * c[n] * qu[n]).sum();
        let gl2: f64 = qv
            .as_ref()
            .map(|q| (0..frame.len()).map(|n| 2.0 * c[n] * q[n]).sum())
            .unwrap_or(0.0);

        let gnorm_sq = gu.norm_sq()
            + gv.as_ref().map_or(0.0, HVector::norm_sq)
            + gl1 * gl1
            + gl2 * gl2;
        if gnorm_sq < 1e-30 {
            break;
        }
        let scale = step / gnorm_sq.sqrt();
        let trial = retract(GainState {
            u: state
                .u
                .sub(&gu.scale(Complex64::new(scale, 0.0)))
                .expect("dims agree"),
            v: state.v.as_ref().map(|v| {
                v.sub(&gv.as_ref().unwrap().scale(Complex64::new(scale, 0.0)))
                    .expect("dims agree")
            }),
            lam: (state.lam.0 - scale * gl1, state.lam.1 - scale * gl2),
        });
        let val = objective_sq(frame, &trial);
        if val < best {
            best = val;
            state = trial;
            step *= 1.25;
        } else {
            step *= 0.5;
            if step < 1e-15 {
                break;
            }
        }
    }
    (best, state)
}

fn random_state(rng: &mut ChaCha8Rng, field: ScalarField, dim: usize, kind: usize) -> GainState {
    let rand_vec = |rng: &mut ChaCha8Rng| {
        let coords: Vec<Complex64> = (0..dim)
            .map(|_| match field {
                ScalarField::Real => Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0),
                ScalarField::Complex => {
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
                }
            })
            .collect();
        HVector::new(field, coords)
    };
    let lam = match kind % 3 {
        0 => (1.0, -1.0),
        1 => (1.0, 0.0),
        _ => (rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0),
    };
    retract(GainState {
        u: rand_vec(rng),
        v: if dim >= 2 { Some(rand_vec(rng)) } else { None },
        lam,
    })
}

/// Minimize `||A2(X)||` over rank-<=2 Hermitian X with unit operator norm.
/// Returns the best value found (an upper bound on the true minimum), the
/// minimizer, and the dense-grid cross-check where available.
pub fn min_lifted_gain(frame: &FiniteFrame, restarts: usize, seed: u64) -> Result<MinGain> {
    let dim = frame.dim();
    let field = frame.field();
    if dim == 1 {
        // X = +-1; the measurement is (|phi_n|^2) either way.
        let value = frame
            .norms()
            .iter()
            .map(|n| n.powi(4))
            .sum::<f64>()
            .sqrt();
        let minimizer = HermitianOperator::identity(field, 1);
        return Ok(MinGain {
            value,
            minimizer,
            grid_value: Some(value),
        });
    }

    let restarts = restarts.max(1);
    let mut best: Option<(f64, GainState)> = None;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, r as u64));
        let start = random_state(&mut rng, field, dim, r);
        let (val, state) = descend(frame, start, 400);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, state));
        }
    }
    let (value_sq, state) = best.expect("at least one restart");
    let grid_value = dense_grid_min(frame).map(|(val_sq, grid_state)| {
        // Polish the grid optimum with the same local descent.
        let (polished, _) = descend(frame, grid_state, 300);
        polished.min(val_sq).sqrt()
    });
    Ok(MinGain {
        value: value_sq.sqrt(),
        minimizer: state.operator(field, dim),
        grid_value,
    })
}

/// Dense parameter grid over the rank-<=2 set for small dimensions.
fn dense_grid_min(frame: &FiniteFrame) -> Option<(f64, GainState)> {
    let dim = frame.dim();
    let field = frame.field();
    let lam_grid: Vec<f64> = (0..=40).map(|i| -1.0 + i as f64 / 20.0).collect();
    let mut best: Option<(f64, GainState)> = None;
    let mut consider = |u: HVector, v: HVector| {
        for &t in &lam_grid {
            let state = GainState {
                u: u.clone(),
                v: Some(v.clone()),
                lam: (1.0, t),
            };
            let val = objective_sq(frame, &state);
            if best.as_ref().is_none_or(|(b, _)| val < *b) {
                best = Some((val, state));
            }
        }
    };
    match (field, dim) {
        (ScalarField::Real, 2) => {
            for i in 0..360 {
                let th = i as f64 / 360.0 * std::f64::consts::PI;
                let u = HVector::real(&[th.cos(), th.sin()]);
                let v = HVector::real(&[-th.sin(), th.cos()]);
                consider(u, v);
            }
        }
        (ScalarField::Real, 3) => {
            for it in 0..=24 {
                let theta = it as f64 / 24.0 * std::f64::consts::PI;
                for ip in 0..48 {
                    let phi = ip as f64 / 48.0 * std::f64::consts::TAU;
                    let u = HVector::real(&[
                        theta.sin() * phi.cos(),
                        theta.sin() * phi.sin(),
                        theta.cos(),
                    ]);
                    // Orthonormal pair spanning the plane orthogonal to u.
                    let pick = if u.coords()[0].re.abs() < 0.9 {
                        HVector::real(&[1.0, 0.0, 0.0])
                    } else {
                        HVector::real(&[0.0, 1.0, 0.0])
                    };
                    let w1 = pick
                        .sub(&u.scale(pick.inner(&u).unwrap()))
                        .unwrap()
                        .normalized();
                    let w2 = cross3(&u, &w1);
                    for is in 0..24 {
                        let psi = is as f64 / 24.0 * std::f64::consts::PI;
                        let v = w1
                            .scale(Complex64::new(psi.cos(), 0.0))
                            .add(&w2.scale(Complex64::new(psi.sin(), 0.0)))
                            .unwrap();
                        consider(u.clone(), v);
                    }
                }
            }
        }
        (ScalarField::Complex, 2) => {
            for ia in 0..=30 {
                let a = ia as f64 / 30.0 * std::f64::consts::FRAC_PI_2;
                for ib in 0..60 {
                    let b = ib as f64 / 60.0 * std::f64::consts::TAU;
                    let phase = Complex64::from_polar(1.0, b);
                    let u = HVector::complex(vec![
                        Complex64::new(a.cos(), 0.0),
                        phase * a.sin(),
                    ]);
                    let v = HVector::complex(vec![
                        Complex64::new(-a.sin(), 0.0),
                        phase * a.cos(),
                    ]);
                    consider(u, v);
                }
            }
        }
        _ => return None,
    }
    best
}

fn cross3(a: &HVector, b: &HVector) -> HVector {
    let (a, b) = (a.coords(), b.coords());
    HVector::real(&[
        (a[1] * b[2] - a[2] * b[1]).re,
        (a[2] * b[0] - a[0] * b[2]).re,
        (a[0] * b[1] - a[1] * b[0]).re,
    ])
}

/// Greedy subset selection: keep an index exactly when its lifted vector
/// grows the span of the kept lifts, so the kept set reproduces the kernel
/// of the full lifted map. Output size never exceeds M^2 (complex) or
/// M(M+1)/2 (real).
pub fn select_pr_subset(vectors: &[HVector], dim: usize) -> Result<Vec<usize>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.len(),
            });
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut kept = Vec::new();
    for (n, v) in vectors.iter().enumerate() {
        let w = realify(&crate::hilbert::lift(v));
        let wnorm = norm(&w);
        if wnorm < 1e-14 {
            continue;
        }
        let mut r = w;
        // Modified Gram-Schmidt, twice for numerical insurance.
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let rnorm = norm(&r);
        if rnorm > 1e-8 * wnorm {
            for ri in r.iter_mut() {
                *ri /= rnorm;
            }
            basis.push(r);
            kept.push(n);
        }
    }
    Ok(kept)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

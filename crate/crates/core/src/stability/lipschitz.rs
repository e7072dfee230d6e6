//! Lipschitz bounds for the measurement map of a finite frame.
//!
//! The chain `d(f,g) <= 2 ||ff* - gg*|| <= (2/c) ||A2(ff* - gg*)||
//! <= (4 max ||phi_n|| / c) ||A(f) - A(g)||` for `||f|| = 1, ||g|| <= 1`
//! turns the rank-<=2 gain c into an explicit lower Lipschitz constant.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::frames::{measurement_gap, FiniteFrame};
use crate::hilbert::{quotient_distance, HVector, ScalarField};
use crate::util::split_seed;
use crate::{Error, Result};

/// `C = 4 max_n ||phi_n|| / c`: for all `||f|| = 1, ||g|| <= 1`,
/// `d(f, g) <= C ||measure(f) - measure(g)||`.
pub fn lipschitz_constant(frame: &FiniteFrame, c: f64) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::Precondition(format!(
            "lifted gain must be positive, got {c}"
        )));
    }
    Ok(4.0 * frame.max_norm() / c)
}

/// Both sides of the upper Lipschitz bound
/// `||measure(f) - measure(g)|| <= B^(1/2) d(f, g)`. Returns `(lhs, rhs)`.
pub fn upper_lipschitz_check(frame: &FiniteFrame, f: &HVector, g: &HVector) -> Result<(f64, f64)> {
    let lhs = measurement_gap(frame, f, g)?;
    let rhs = frame.frame_bounds().1.sqrt() * quotient_distance(f, g)?;
    Ok((lhs, rhs))
}

/// Smallest observed ratio `||measure(f) - measure(g)|| / d(f, g)` over
/// seeded random pairs, sharpened by local random descent around the best
/// candidates. An upper bound on the true lower Lipschitz constant;
/// deterministic given the seed.
pub fn empirical_lower_lipschitz(frame: &FiniteFrame, trials: usize, seed: u64) -> Result<f64> {
    empirical_lower_lipschitz_in(frame, frame.dim(), trials, seed)
}

/// Same search restricted to vectors supported on the first `sub_dim`
/// coordinates.
pub fn empirical_lower_lipschitz_in(
    frame: &FiniteFrame,
    sub_dim: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if sub_dim == 0 || sub_dim > frame.dim() {
        return Err(Error::Precondition(format!(
            "subspace dimension {sub_dim} out of range 1..={}",
            frame.dim()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 0));
    let mut candidates: Vec<(f64, HVector, HVector)> = Vec::new();
    for _ in 0..trials.max(1) {
        let f = random_in_subspace(&mut rng, frame, sub_dim);
        let g = random_in_subspace(&mut rng, frame, sub_dim);
        if let Some(r) = ratio(frame, &f, &g)? {
            candidates.push((r, f, g));
            candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            candidates.truncate(3);
        }
    }
    let mut best = f64::INFINITY;
    for (i, (r0, f0, g0)) in candidates.into_iter().enumerate() {
        let refined = refine(
            frame,
            sub_dim,
            r0,
            f0,
            g0,
            &mut ChaCha8Rng::seed_from_u64(split_seed(seed, 1 + i as u64)),
        )?;
        best = best.min(refined);
    }
    Ok(if best.is_finite() { best } else { 0.0 })
}

fn random_in_subspace(rng: &mut ChaCha8Rng, frame: &FiniteFrame, sub_dim: usize) -> HVector {
    let mut coords = vec![Complex64::new(0.0, 0.0); frame.dim()];
    for c in coords.iter_mut().take(sub_dim) {
        *c = match frame.field() {
            ScalarField::Real => Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0),
            ScalarField::Complex => {
                Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            }
        };
    }
    // Random length as well: on a one-dimensional subspace all unit vectors
    // coincide modulo phase, which would make every pair degenerate.
    let scale = 0.25 + 1.75 * rng.gen::<f64>();
    HVector::new(frame.field(), coords)
        .normalized()
        .scale(Complex64::new(scale, 0.0))
}

fn ratio(frame: &FiniteFrame, f: &HVector, g: &HVector) -> Result<Option<f64>> {
    let d = quotient_distance(f, g)?;
    let scale = f.norm().max(g.norm()).max(1e-300);
    if d < 1e-7 * scale {
        return Ok(None);
    }
    Ok(Some(measurement_gap(frame, f, g)? / d))
}

/// Local random search shrinking the ratio around a candidate pair.
fn refine(
    frame: &FiniteFrame,
    sub_dim: usize,
    mut best: f64,
    mut f: HVector,
    mut g: HVector,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut step = 0.3;
    for _ in 0..600 {
        let tf = perturb(rng, frame.field(), &f, sub_dim, step);
        let tg = perturb(rng, frame.field(), &g, sub_dim, step);
        match ratio(frame, &tf, &tg)? {
            Some(r) if r < best => {
                best = r;
                f = tf;
                g = tg;
                step *= 1.15;
            }
            _ => step *= 0.9,
        }
        if step < 1e-13 {
            break;
        }
    }
    Ok(best)
}

fn perturb(
    rng: &mut ChaCha8Rng,
    field: ScalarField,
    v: &HVector,
    sub_dim: usize,
    step: f64,
) -> HVector {
    let mut coords = v.coords().to_vec();
    for c in coords.iter_mut().take(sub_dim) {
        let dre = rng.gen::<f64>() * 2.0 - 1.0;
        let dim_ = match field {
            ScalarField::Real => 0.0,
            ScalarField::Complex => rng.gen::<f64>() * 2.0 - 1.0,
        };
        *c += Complex64::new(step * dre, step * dim_);
    }
    HVector::new(v.field(), coords)
}

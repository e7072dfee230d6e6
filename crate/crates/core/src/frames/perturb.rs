//! Arbitrarily small perturbations that destroy phase retrieval.
//!
//! Keeping the first k vectors and stripping the e_0 component from the rest
//! moves the family by less than eps in summed squared norm while leaving
//! the split {0..k-1} | {k..} without a spanning side, which kills the
//! complement property. In a finite truncation neither side's failure to
//! span is automatic, so both are certified here by explicit rank checks.

use num_complex::Complex64;

use crate::hilbert::HVector;
use crate::linalg::rank_and_null;
use crate::{Error, Result};

use super::FiniteFrame;

/// Outcome of [`perturb_destroy_pr`], with the rank certificates for the
/// complement-property failure of the split at k.
#[derive(Debug, Clone)]
pub struct PerturbOutcome {
    pub frame: FiniteFrame,
    /// Number of vectors left untouched; the split is {0..k-1} | {k..N-1}.
    pub k: usize,
    pub eps: f64,
    /// Exact sum of ||phi_n - psi_n||^2; always below eps.
    pub diff_sq: f64,
    pub rank_kept: usize,
    pub rank_perturbed: usize,
    /// True when neither side of the split spans, i.e. the complement
    /// property provably fails for the perturbed family.
    pub cp_violation_certified: bool,
    pub lower_bound_before: f64,
    pub lower_bound_after: f64,
    /// Set when the perturbed family's lower frame bound fell below 1e-12,
    /// the "eps sufficiently small" caveat of the construction.
    pub frame_degraded: bool,
}

/// Perturb a finite truncation of a countable frame so that it provably
/// stops doing phase retrieval, moving it by less than `eps`.
///
/// Picks the smallest k with `sum_{n >= k} |<e_0, phi_n>|^2 < eps`, keeps
/// the first k vectors and projects the remaining ones onto the complement
/// of e_0.
pub fn perturb_destroy_pr(frame: &FiniteFrame, eps: f64) -> Result<PerturbOutcome> {
    if eps <= 0.0 {
        return Err(Error::Precondition(format!("eps must be > 0, got {eps}")));
    }
    let n = frame.len();
    let masses: Vec<f64> = frame
        .vectors()
        .iter()
        .map(|v| v.coords()[0].norm_sqr())
        .collect();
    // tails[k] = sum_{n >= k} masses[n]
    let mut tails = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tails[i] = tails[i + 1] + masses[i];
    }
    let k = (0..=n).find(|&k| tails[k] < eps).expect("tails end at 0");

    let vectors: Vec<HVector> = frame
        .vectors()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i < k {
                v.clone()
            } else {
                let mut w = v.clone();
                w.coords_mut()[0] = Complex64::new(0.0, 0.0);
                w
            }
        })
        .collect();
    let diff_sq = tails[k];
    let perturbed = FiniteFrame::new(frame.field(), vectors)?;

    let dim = frame.dim();
    let (rank_kept, _) = rank_and_null(frame.field(), dim, perturbed.vectors()[..k].iter());
    let (rank_perturbed, _) = rank_and_null(frame.field(), dim, perturbed.vectors()[k..].iter());
    let cp_violation_certified = rank_kept < dim && rank_perturbed < dim;

    let lower_bound_before = frame.frame_bounds().0;
    let lower_bound_after = perturbed.frame_bounds().0;
    Ok(PerturbOutcome {
        frame: perturbed,
        k,
        eps,
        diff_sq,
        rank_kept,
        rank_perturbed,
        cp_violation_certified,
        lower_bound_before,
        lower_bound_after,
        frame_degraded: lower_bound_after <= 1e-12,
    })
}

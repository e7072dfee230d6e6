//! Restricted Hölder-type stability on a nested chain of subspaces.
//!
//! With per-level lower Lipschitz functions G(m) and the approximation ball
//! `B_gamma(R) = {f : ||f - P_m f|| <= G(m+1)^(-gamma) R ||f||}`, pairs in
//! the ball satisfy
//! `d(f,g) <= C (||f|| + ||g||)^(1/gamma) ||A(f) - A(g)||^((gamma-1)/gamma)`
//! with C assembled from B, R, gamma and G(1) alone.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::frames::{measurement_gap, FiniteFrame, Generator, RieszGenerator};
use crate::hilbert::{quotient_distance, HVector};
use crate::util::split_seed;
use crate::{Error, Result};

use super::empirical_lower_lipschitz_in;

/// Nested finite-dimensional subspaces with their local stability constants.
///
/// `bases[m]` is an orthonormal basis of V_{m+1}; each level extends the
/// previous one vector for vector, and G is non-decreasing (enforced by a
/// running maximum at construction).
#[derive(Debug, Clone)]
pub struct SubspaceChain {
    bases: Vec<Vec<HVector>>,
    g: Vec<f64>,
    gamma: f64,
    radius: f64,
}

impl SubspaceChain {
    pub fn new(bases: Vec<Vec<HVector>>, g: Vec<f64>, gamma: f64, radius: f64) -> Result<Self> {
        if gamma <= 1.0 {
            return Err(Error::GammaOutOfRange(gamma));
        }
        if radius <= 0.0 {
            return Err(Error::Precondition(format!("R must be > 0, got {radius}")));
        }
        if bases.is_empty() || bases.len() != g.len() {
            return Err(Error::Precondition(
                "need one G value per chain level".into(),
            ));
        }
        let mut prev_dim = 0;
        for (m, basis) in bases.iter().enumerate() {
            if basis.len() <= prev_dim {
                return Err(Error::Precondition(format!(
                    "chain dimensions must strictly increase at level {}",
                    m + 1
                )));
            }
            if m > 0 && bases[m][..bases[m - 1].len()] != bases[m - 1][..] {
                return Err(Error::Precondition(format!(
                    "level {} basis must extend the previous one",
                    m + 1
                )));
            }
            prev_dim = basis.len();
        }
        // Running maximum keeps G non-decreasing.
        let mut g = g;
        for m in 1..g.len() {
            g[m] = g[m].max(g[m - 1]);
        }
        Ok(SubspaceChain {
            bases,
            g,
            gamma,
            radius,
        })
    }

    /// Standard chain V_m = span{e_0..e_{m-1}} inside a fixed ambient space.
    pub fn standard(
        field: crate::hilbert::ScalarField,
        ambient: usize,
        g: Vec<f64>,
        gamma: f64,
        radius: f64,
    ) -> Result<Self> {
        let bases = (1..=g.len())
            .map(|m| (0..m).map(|i| HVector::basis(field, ambient, i)).collect())
            .collect();
        Self::new(bases, g, gamma, radius)
    }

    pub fn levels(&self) -> usize {
        self.bases.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g
    }

    /// G(m), 1-based level index.
    pub fn g_at(&self, m: usize) -> f64 {
        self.g[m - 1]
    }

    pub fn level_dim(&self, m: usize) -> usize {
        self.bases[m - 1].len()
    }

    /// Orthogonal projection of f onto V_m (1-based).
    pub fn project(&self, f: &HVector, m: usize) -> Result<HVector> {
        let mut out = HVector::zero(f.field(), f.len());
        for b in &self.bases[m - 1] {
            let c = f.inner(b)?;
            out = out.add(&b.scale(c))?;
        }
        Ok(out)
    }

    /// `||f - P_m f||` at level m (1-based).
    pub fn residual(&self, f: &HVector, m: usize) -> Result<f64> {
        Ok(f.sub(&self.project(f, m)?)?.norm())
    }
}

/// The constants of the restricted Hölder bound.
///
/// `C1 = (G(1)^gamma / (R B^(1/2)))^((gamma-1)/gamma)` covers measurement
/// gaps too large for the chain, `C2 = R^(1/gamma) B^(1/(2 gamma))
/// (B^(-1/2) G(1)^(-1) + 1)` the chain argument, and the final constant is
/// `C = C' gamma (gamma-1)^((1-gamma)/gamma)` with `C' = max(C1, C2)` after
/// the amplification step.
#[derive(Debug, Clone, Copy)]
pub struct HolderConstants {
    pub c1: f64,
    pub c2: f64,
    pub cprime: f64,
    pub c: f64,
}

pub fn holder_constants(b: f64, radius: f64, gamma: f64, g1: f64) -> Result<HolderConstants> {
    if gamma <= 1.0 {
        return Err(Error::GammaOutOfRange(gamma));
    }
    if b <= 0.0 || radius <= 0.0 || g1 <= 0.0 {
        return Err(Error::Precondition(
            "holder constants need B, R, G(1) > 0".into(),
        ));
    }
    let exponent = (gamma - 1.0) / gamma;
    let c1 = (g1.powf(gamma) / (radius * b.sqrt())).powf(exponent);
    let c2 = radius.powf(1.0 / gamma) * b.powf(0.5 / gamma) * (1.0 / (b.sqrt() * g1) + 1.0);
    let cprime = c1.max(c2);
    let c = cprime * gamma * (gamma - 1.0).powf((1.0 - gamma) / gamma);
    Ok(HolderConstants {
        c1,
        c2,
        cprime,
        c,
    })
}

/// Whether f lies in the approximation ball `B_gamma(R)`: the residual at
/// every level m < m_max is at most `G(m+1)^(-gamma) R ||f||`, and f must
/// lie in V_{m_max} itself so the unchecked deeper conditions hold exactly.
pub fn ball_membership(f: &HVector, chain: &SubspaceChain, m_max: usize) -> Result<bool> {
    if m_max == 0 || m_max > chain.levels() {
        return Err(Error::Precondition(format!(
            "m_max {m_max} out of range 1..={}",
            chain.levels()
        )));
    }
    let scale = f.norm().max(1.0);
    let top_residual = chain.residual(f, m_max)?;
    if top_residual > 1e-12 * scale {
        return Err(Error::NotInChain {
            residual: top_residual,
        });
    }
    let norm = f.norm();
    for m in 1..m_max {
        let allowed = chain.g_at(m + 1).powf(-chain.gamma) * chain.radius * norm;
        if chain.residual(f, m)? > allowed + 1e-12 * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One verified instance of the restricted Hölder inequality.
#[derive(Debug, Clone, Copy)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub violation: bool,
}

/// Evaluate both sides of the Hölder bound for a pair in the ball.
pub fn holder_check(
    f: &HVector,
    g: &HVector,
    frame: &FiniteFrame,
    chain: &SubspaceChain,
    constants: &HolderConstants,
) -> Result<HolderCheck> {
    let m_max = chain.levels();
    if !ball_membership(f, chain, m_max)? || !ball_membership(g, chain, m_max)? {
        return Err(Error::Precondition(
            "both vectors must lie in the approximation ball".into(),
        ));
    }
    let lhs = quotient_distance(f, g)?;
    let gap = measurement_gap(frame, f, g)?;
    let gamma = chain.gamma();
    let rhs = constants.c * (f.norm() + g.norm()).powf(1.0 / gamma)
        * gap.powf((gamma - 1.0) / gamma);
    Ok(HolderCheck {
        lhs,
        rhs,
        gap,
        violation: lhs > rhs * (1.0 + 1e-9),
    })
}

/// Draw a random element of `B_gamma(R)`: level increments sized by the
/// telescoping budget `a_m^2 <= q_{m-1}^2 - q_m^2` with
/// `q_m = R G(m+1)^(-gamma)`, which makes every residual constraint hold by
/// construction, then a random overall scale.
pub fn sample_ball(chain: &SubspaceChain, rng: &mut ChaCha8Rng) -> Result<HVector> {
    let levels = chain.levels();
    let field = chain.bases[0][0].field();
    let ambient = chain.bases[0][0].len();
    let gamma = chain.gamma();
    let q = |m: usize| -> f64 {
        if m >= levels {
            0.0
        } else {
            chain.radius * chain.g_at(m + 1).powf(-gamma)
        }
    };
    let mut f = HVector::zero(field, ambient);
    for m in 1..=levels {
        let amp = if m == 1 {
            1.0
        } else {
            let budget = (q(m - 1).powi(2) - q(m).powi(2)).max(0.0);
            rng.gen::<f64>() * budget.sqrt()
        };
        // Random unit direction among the basis vectors new at level m.
        let lo = if m == 1 { 0 } else { chain.level_dim(m - 1) };
        let hi = chain.level_dim(m);
        let mut w = HVector::zero(field, ambient);
        for i in lo..hi {
            let c = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0);
            w = w.add(&chain.bases[m - 1][i].scale(c))?;
        }
        let w = w.normalized();
        f = f.add(&w.scale(Complex64::new(amp, 0.0)))?;
    }
    let scale = 0.5 + 1.5 * rng.gen::<f64>();
    Ok(f.scale(Complex64::new(scale, 0.0)))
}

/// Build the chain for a Riesz generator: V_m = span{e_0..e_{m-1}} for
/// m = 1..=m_max, with G(m) estimated by inverting the empirical lower
/// Lipschitz bound of the truncated frame on each level (made non-decreasing
/// by the running maximum). Returns the chain and the finite frame carrying
/// the full measurement of every chain element.
pub fn riesz_chain(
    gen: &RieszGenerator,
    m_max: usize,
    gamma: f64,
    radius: f64,
    trials: usize,
    seed: u64,
) -> Result<(SubspaceChain, FiniteFrame)> {
    if m_max == 0 || m_max > gen.block_count() {
        return Err(Error::Precondition(format!(
            "m_max {m_max} must be in 1..={}",
            gen.block_count()
        )));
    }
    // Vectors past blocks_end are reference basis vectors orthogonal to
    // every V_m with m <= m_max, so the truncation at blocks_end measures
    // chain elements exactly.
    let ambient = gen.blocks_end();
    let frame = Generator::Riesz(gen.clone()).truncated(ambient, ambient)?;
    let mut g = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let lower = empirical_lower_lipschitz_in(&frame, m, trials, split_seed(seed, m as u64))?;
        if lower <= 0.0 {
            return Err(Error::Precondition(format!(
                "level {m} shows no positive lower bound"
            )));
        }
        g.push(1.0 / lower);
    }
    let chain = SubspaceChain::standard(frame.field(), ambient, g, gamma, radius)?;
    Ok((chain, frame))
}

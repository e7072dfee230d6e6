//! Finite frames, countable generated frames, and the measurement maps.
//!
//! A finite frame is a spanning family of N vectors in an M-dimensional
//! space; its frame bounds are the extreme eigenvalues of the frame operator
//! `sum_n phi_n phi_n*`. The measurement map sends `f` to the magnitudes
//! `(|<f, phi_n>|)_n`, which is what phase retrieval has to invert.

mod file;
mod generated;
mod perturb;

pub use file::{frame_from_json, frame_to_json, read_frame_file, write_frame_file};
pub use generated::{
    default_riesz_blocks, riesz_frame, sinc_frame, Generator, OnbGenerator, RieszGenerator,
    SincGenerator,
};
pub use perturb::{perturb_destroy_pr, PerturbOutcome};

use num_complex::Complex64;

use crate::hilbert::{HVector, HermitianOperator, ScalarField};
use crate::{Error, Result};

/// N measurement vectors in an M-dimensional space, with cached norms and
/// frame bounds.
#[derive(Debug, Clone)]
pub struct FiniteFrame {
    field: ScalarField,
    dim: usize,
    vectors: Vec<HVector>,
    norms: Vec<f64>,
    bounds: (f64, f64),
}

impl FiniteFrame {
    pub fn new(field: ScalarField, vectors: Vec<HVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptyFrame);
        }
        let dim = vectors[0].len();
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.len(),
                });
            }
        }
        let vectors: Vec<HVector> = vectors.iter().map(|v| v.with_field(field)).collect();
        let norms = vectors.iter().map(HVector::norm).collect();
        let op = frame_operator_of(field, dim, &vectors);
        let eigs = op.eigenvalues();
        let bounds = (eigs[0].max(0.0), eigs[eigs.len() - 1]);
        Ok(FiniteFrame {
            field,
            dim,
            vectors,
            norms,
            bounds,
        })
    }

    pub fn from_rows(field: ScalarField, rows: &[Vec<f64>]) -> Result<Self> {
        let vectors = rows.iter().map(|r| HVector::real(r).with_field(field));
        Self::new(field, vectors.collect())
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[HVector] {
        &self.vectors
    }

    pub fn vector(&self, n: usize) -> &HVector {
        &self.vectors[n]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn max_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }

    /// Extreme eigenvalues (A, B) of the frame operator. A is clamped at 0;
    /// the family is a frame for the whole space iff A > 0.
    pub fn frame_bounds(&self) -> (f64, f64) {
        self.bounds
    }

    /// Whether the vectors span, up to a relative spectral tolerance.
    pub fn spans(&self) -> bool {
        self.bounds.0 > self.span_tolerance()
    }

    fn span_tolerance(&self) -> f64 {
        self.dim.max(self.len()) as f64 * f64::EPSILON * self.bounds.1.max(f64::MIN_POSITIVE)
    }

    pub fn frame_operator(&self) -> HermitianOperator {
        frame_operator_of(self.field, self.dim, &self.vectors)
    }

    /// Analysis map: the inner products `(<f, phi_n>)_n`.
    pub fn analysis(&self, f: &HVector) -> Result<Vec<Complex64>> {
        self.check_dim(f)?;
        self.vectors.iter().map(|phi| f.inner(phi)).collect()
    }

    /// Measurement map: elementwise modulus of the analysis map.
    pub fn measure(&self, f: &HVector) -> Result<MeasurementSeq> {
        let values = self.analysis(f)?.into_iter().map(|c| c.norm()).collect();
        Ok(MeasurementSeq {
            values,
            tail_bound: 0.0,
        })
    }

    /// Squared-measurement map on Hermitian operators: `(<X phi_n, phi_n>)_n`.
    /// Applied to `lift(f)` this gives the elementwise square of `measure(f)`.
    pub fn lifted_analysis(&self, x: &HermitianOperator) -> Result<Vec<f64>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: x.dim(),
            });
        }
        self.vectors
            .iter()
            .map(|phi| Ok(x.apply(phi)?.inner(phi)?.re))
            .collect()
    }

    fn check_dim(&self, f: &HVector) -> Result<()> {
        if f.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: f.len(),
            });
        }
        Ok(())
    }
}

fn frame_operator_of(field: ScalarField, dim: usize, vectors: &[HVector]) -> HermitianOperator {
    HermitianOperator::from_lower(field, dim, |i, j| {
        vectors
            .iter()
            .map(|v| v.coords()[i] * v.coords()[j].conj())
            .sum()
    })
}

/// A finite stretch of a measurement sequence together with a certified
/// bound on the l2 mass of the omitted indices.
#[derive(Debug, Clone)]
pub struct MeasurementSeq {
    pub values: Vec<f64>,
    pub tail_bound: f64,
}

impl MeasurementSeq {
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// l2 distance between the stored values of two sequences of equal length.
    pub fn gap(&self, other: &MeasurementSeq) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                left: self.values.len(),
                right: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

/// `||measure(f) - measure(g)||` for a finite frame.
pub fn measurement_gap(frame: &FiniteFrame, f: &HVector, g: &HVector) -> Result<f64> {
    frame.measure(f)?.gap(&frame.measure(g)?)
}

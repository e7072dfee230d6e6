//! Scalar-field-aware vectors, the quotient metric on `H/~`, and the
//! rank-one lifting used by the squared measurement map.
//!
//! The quotient identifies `f` with `alpha f` for unimodular `alpha`; the
//! unimodular group is `{+1, -1}` over the reals and the unit circle over the
//! complex numbers. All distances here are computed in closed form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The scalar field of the ambient Hilbert space.
///
/// A `Real` tag means the space is treated as a Hilbert space over the real
/// numbers (inner products take their real part, the unimodular group is
/// `{+1, -1}`), regardless of how the coordinates are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    /// Real dimension of the space of Hermitian (symmetric) operators on an
    /// M-dimensional space over this field: M(M+1)/2 real, M^2 complex.
    pub fn lifted_dim(self, m: usize) -> usize {
        match self {
            ScalarField::Real => m * (m + 1) / 2,
            ScalarField::Complex => m * m,
        }
    }
}

/// A vector with finitely many coordinates against a fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HVector {
    field: ScalarField,
    coords: Vec<Complex64>,
}

impl HVector {
    pub fn new(field: ScalarField, coords: Vec<Complex64>) -> Self {
        HVector { field, coords }
    }

    pub fn real(coords: &[f64]) -> Self {
        HVector {
            field: ScalarField::Real,
            coords: coords.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn complex(coords: Vec<Complex64>) -> Self {
        HVector {
            field: ScalarField::Complex,
            coords,
        }
    }

    pub fn zero(field: ScalarField, dim: usize) -> Self {
        HVector {
            field,
            coords: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector e_i.
    pub fn basis(field: ScalarField, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(field, dim);
        v.coords[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// Reinterpret the same coordinates over a different scalar field.
    pub fn with_field(&self, field: ScalarField) -> Self {
        HVector {
            field,
            coords: self.coords.clone(),
        }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [Complex64] {
        &mut self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Sesquilinear inner product sum_i f_i conj(g_i) (linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dims(self, other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Modulus of the inner product as seen by the unimodular group:
    /// `|Re<f,g>|` over the reals, `|<f,g>|` over the complex numbers.
    pub fn unimodular_inner_mod(&self, other: &Self) -> Result<f64> {
        let ip = self.inner(other)?;
        Ok(match common_field(self, other)? {
            ScalarField::Real => ip.re.abs(),
            ScalarField::Complex => ip.norm(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        HVector {
            field: self.field,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(HVector {
            field: common_field(self, other)?,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(HVector {
            field: common_field(self, other)?,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Unit vector in the same direction; zero stays zero.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }
}

fn check_dims(a: &HVector, b: &HVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn common_field(a: &HVector, b: &HVector) -> Result<ScalarField> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok(a.field)
}

/// Distance between the unimodular orbits of `f` and `g`:
/// `inf over |alpha| = 1 of ||f - alpha g||`.
///
/// Equals `sqrt(||f||^2 + ||g||^2 - 2 X)` in closed form, with `X` from
/// [`HVector::unimodular_inner_mod`]; the infimum is attained at the phase
/// (or sign) of `<f, g>`, so the distance is evaluated as `||f - alpha* g||`
/// directly, which avoids the cancellation the radicand suffers near zero.
pub fn quotient_distance(f: &HVector, g: &HVector) -> Result<f64> {
    let ip = f.inner(g)?;
    let alpha = match common_field(f, g)? {
        ScalarField::Real => {
            if ip.re >= 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        }
        ScalarField::Complex => {
            if ip.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, ip.arg())
            }
        }
    };
    Ok(f.sub(&g.scale(alpha))?.norm())
}

/// An M x M Hermitian operator stored as a full matrix whose upper triangle
/// is mirrored from the lower one at construction, so hermiticity is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    field: ScalarField,
    mat: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Build from a callback giving the lower-triangle entries (i >= j).
    /// Diagonal entries have their imaginary part dropped.
    pub fn from_lower(
        field: ScalarField,
        dim: usize,
        mut entry: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut mat = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for i in 0..dim {
            for j in 0..=i {
                let mut v = entry(i, j);
                if field == ScalarField::Real {
                    v = Complex64::new(v.re, 0.0);
                }
                if i == j {
                    mat[(i, i)] = Complex64::new(v.re, 0.0);
                } else {
                    mat[(i, j)] = v;
                    mat[(j, i)] = v.conj();
                }
            }
        }
        HermitianOperator { field, mat }
    }

    pub fn zero(field: ScalarField, dim: usize) -> Self {
        Self::from_lower(field, dim, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(field: ScalarField, dim: usize) -> Self {
        Self::from_lower(field, dim, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(HermitianOperator {
            field: self.field,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(HermitianOperator {
            field: self.field,
            mat: &self.mat - &other.mat,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianOperator {
            field: self.field,
            mat: &self.mat * Complex64::new(c, 0.0),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Hilbert-Schmidt inner product Trace(XY); real for Hermitian X, Y.
    pub fn hs_inner(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.mat[(i, j)] * other.mat[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    pub fn hs_norm(&self) -> f64 {
        self.mat.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.mat.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Eigenpairs (value, vector) in descending order of eigenvalue.
    pub fn eigenpairs(&self) -> Vec<(f64, HVector)> {
        let eig = self.mat.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, HVector)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(idx, &val)| {
                let col = eig.eigenvectors.column(idx);
                (val, HVector::new(self.field, col.iter().copied().collect()))
            })
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        pairs
    }

    /// Operator norm (largest eigenvalue magnitude).
    pub fn op_norm(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &HVector) -> Result<HVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        let x = nalgebra::DVector::from_column_slice(v.coords());
        let y = &self.mat * x;
        Ok(HVector::new(self.field, y.iter().copied().collect()))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}

/// Rank-one lifting `f -> f f*`, the operator mapping `h` to `<h, f> f`.
/// Its trace equals `||f||^2`.
pub fn lift(f: &HVector) -> HermitianOperator {
    let c = f.coords();
    HermitianOperator::from_lower(f.field(), f.len(), |i, j| c[i] * c[j].conj())
}

/// Operator norm of `f f* - g g*` by the closed-form largest eigenvalue
/// `(||f||^2 - ||g||^2 + sqrt((||f||^2 + ||g||^2)^2 - 4 |<f,g>|^2)) / 2`
/// (after swapping so that `||f|| >= ||g||`).
pub fn lifted_pair_opnorm(f: &HVector, g: &HVector) -> Result<f64> {
    check_dims(f, g)?;
    let (a, b) = if f.norm_sq() >= g.norm_sq() {
        (f, g)
    } else {
        (g, f)
    };
    let na = a.norm_sq();
    let nb = b.norm_sq();
    let ip = a.inner(b)?.norm();
    let disc = ((na + nb) * (na + nb) - 4.0 * ip * ip).max(0.0);
    Ok(0.5 * (na - nb + disc.sqrt()))
}

/// Both sides of the inequality `d(f, g) <= 2 ||f f* - g g*||` under the
/// normalization `||f|| = 1`, `||g|| <= 1`. Returns `(lhs, rhs)`.
pub fn quotient_vs_lift_bound(f: &HVector, g: &HVector) -> Result<(f64, f64)> {
    if (f.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "||f|| must be 1, got {}",
            f.norm()
        )));
    }
    if g.norm() > 1.0 + 1e-9 {
        return Err(Error::Precondition(format!(
            "||g|| must be <= 1, got {}",
            g.norm()
        )));
    }
    let lhs = quotient_distance(f, g)?;
    let rhs = 2.0 * lifted_pair_opnorm(f, g)?;
    Ok((lhs, rhs))
}

//! Spectral helpers shared by the certification code: numerical rank and
//! null directions of vector families, realification of Hermitian operators,
//! and Gram-based projections.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hilbert::{HVector, HermitianOperator, ScalarField};

/// Build a Hermitian operator from an entry callback (only the lower triangle
/// is consulted).
pub fn hermitian_from(
    field: ScalarField,
    dim: usize,
    entry: impl Fn(usize, usize) -> Complex64,
) -> HermitianOperator {
    HermitianOperator::from_lower(field, dim, |i, j| entry(i, j))
}

/// Frame operator `sum_n v_n v_n*` of an arbitrary vector family.
pub fn family_frame_operator<'a>(
    field: ScalarField,
    dim: usize,
    vectors: impl Iterator<Item = &'a HVector> + Clone,
) -> HermitianOperator {
    HermitianOperator::from_lower(field, dim, |i, j| {
        vectors
            .clone()
            .map(|v| v.coords()[i] * v.coords()[j].conj())
            .sum()
    })
}

/// Relative singular-value threshold max(M, N) eps sigma_max; the standard
/// numerical-rank cutoff.
pub fn rank_threshold(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Numerical rank and, when the family does not span, a unit null direction
/// (eigenvector of the family frame operator at its smallest eigenvalue).
///
/// The rank comes from the singular values of the vector matrix itself, not
/// from the Gram spectrum, whose noise floor sits at eps lambda_max and
/// would inflate the rank of nearly exact families after the square root.
pub fn rank_and_null<'a>(
    field: ScalarField,
    dim: usize,
    vectors: impl Iterator<Item = &'a HVector> + Clone,
) -> (usize, Option<HVector>) {
    let count = vectors.clone().count();
    if count == 0 {
        let null = if dim > 0 {
            Some(HVector::basis(field, dim, 0))
        } else {
            None
        };
        return (0, null);
    }
    let mut mat = DMatrix::from_element(count, dim, Complex64::new(0.0, 0.0));
    for (n, v) in vectors.clone().enumerate() {
        for (l, c) in v.coords().iter().enumerate() {
            mat[(n, l)] = *c;
        }
    }
    let svd = mat.svd(false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tau = rank_threshold(count, dim, sigma_max);
    let rank = svd.singular_values.iter().filter(|s| **s > tau).count();
    let null = if rank < dim {
        let op = family_frame_operator(field, dim, vectors);
        let pairs = op.eigenpairs();
        Some(pairs[pairs.len() - 1].1.normalized())
    } else {
        None
    };
    (rank, null)
}

/// `||P_V w||^2` where V is spanned by vectors with Gram matrix `gram` and
/// `rhs[j] = <w, v_j>`, through the spectral pseudoinverse of the Gram.
pub fn projection_norm_sq(gram: &HermitianOperator, rhs: &[Complex64]) -> f64 {
    let pairs = gram.eigenpairs();
    let lambda_max = pairs[0].0.max(0.0);
    let tau = rank_threshold(gram.dim(), gram.dim(), lambda_max);
    let mut acc = 0.0;
    for (lambda, u) in &pairs {
        if *lambda > tau {
            // coefficient <rhs, u> in the eigenbasis of the Gram
            let c: Complex64 = rhs
                .iter()
                .zip(u.coords())
                .map(|(r, ui)| r * ui.conj())
                .sum();
            acc += c.norm_sqr() / lambda;
        }
    }
    acc
}

/// Real coordinates of a Hermitian operator in an orthonormal basis of the
/// real vector space of Hermitian matrices: diagonal entries, then sqrt(2)
/// times the real (and for the complex field imaginary) parts of the strict
/// lower triangle. Preserves the Hilbert-Schmidt inner product.
pub fn realify(x: &HermitianOperator) -> Vec<f64> {
    let m = x.dim();
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(x.field().lifted_dim(m));
    for i in 0..m {
        out.push(x.entry(i, i).re);
    }
    for i in 0..m {
        for j in 0..i {
            out.push(sqrt2 * x.entry(i, j).re);
        }
    }
    if x.field() == ScalarField::Complex {
        for i in 0..m {
            for j in 0..i {
                out.push(sqrt2 * x.entry(i, j).im);
            }
        }
    }
    out
}

/// Inverse of [`realify`].
pub fn unrealify(field: ScalarField, dim: usize, coords: &[f64]) -> HermitianOperator {
    let sqrt2 = std::f64::consts::SQRT_2;
    let strict = dim * (dim - 1) / 2;
    let lower_index = |i: usize, j: usize| -> usize {
        // position of (i, j), j < i, in row-major strict lower order
        i * (i - 1) / 2 + j
    };
    HermitianOperator::from_lower(field, dim, |i, j| {
        if i == j {
            Complex64::new(coords[i], 0.0)
        } else {
            let base = dim + lower_index(i, j);
            let re = coords[base] / sqrt2;
            let im = if field == ScalarField::Complex {
                coords[dim + strict + lower_index(i, j)] / sqrt2
            } else {
                0.0
            };
            Complex64::new(re, im)
        }
    })
}

/// Numerical rank of a family of real row vectors, via their singular
/// values against the standard threshold.
pub fn real_rank(rows: &[Vec<f64>], dim: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut mat = DMatrix::<f64>::zeros(rows.len(), dim);
    for (n, row) in rows.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            mat[(n, l)] = *x;
        }
    }
    let svd = mat.svd(false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tau = rank_threshold(rows.len(), dim, sigma_max);
    svd.singular_values.iter().filter(|s| **s > tau).count()
}

/// Orthonormal basis of the null space of a real matrix (rows are the
/// constraints), via the eigendecomposition of A^T A.
pub fn real_null_space(rows: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut ata = DMatrix::<f64>::zeros(dim, dim);
    for row in rows {
        for i in 0..dim {
            for j in 0..dim {
                ata[(i, j)] += row[i] * row[j];
            }
        }
    }
    let eig = ata.symmetric_eigen();
    // Threshold in the lambda domain: the noise floor of the Gram spectrum
    // sits at eps lambda_max.
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let tau = n.max(dim) as f64 * f64::EPSILON * lambda_max;
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap()
    });
    let mut basis = Vec::new();
    for &i in &idx {
        if eig.eigenvalues[i].max(0.0) <= tau {
            basis.push(eig.eigenvectors.column(i).iter().copied().collect());
        }
    }
    basis
}

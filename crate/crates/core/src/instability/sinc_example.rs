//! The quarter-shift sinc example, computed exactly.
//!
//! The building blocks s_k(x) = sum_l C(k,l) sinc(pi (x + l)) admit the
//! closed form k! sin(pi x) / (pi x (x+1) ... (x+k)) away from the poles
//! and take the binomial values C(k, n) at x = -n. The witness pair
//!
//!   f_m = s_m(. + m) + s_m(. - 2m),   g_m = s_m(. + m) - s_m(. - 2m)
//!
//! has exact squared quotient distance 4 C(2m, m) while its measurement gap
//! against the quarter-shift frame decays like C(2m, m)^{-1}, so the local
//! stability constant blows up like 2^{3m} up to polynomial factors.

use std::f64::consts::PI;

use crate::util::{binomial, sinc};
use crate::{Error, Result};

/// Evaluate s_k by the literal recursion s_k(x) = s_{k-1}(x+1) + s_{k-1}(x),
/// run as a difference table over sinc values at x, x+1, ..., x+k.
pub fn s_k_recursive(k: usize, x: f64) -> f64 {
    let mut values: Vec<f64> = (0..=k).map(|j| sinc(x + j as f64)).collect();
    for round in 0..k {
        for j in 0..(k - round) {
            values[j] += values[j + 1];
        }
    }
    values[0]
}

/// Evaluate s_k(x): binomial values at the poles x = -n for 0 <= n <= k,
/// the recursion within 1e-8 of a pole, and the closed form
/// `sinc(pi x) prod_{j=1..k} j / (x + j)` elsewhere.
pub fn s_k_eval(k: usize, x: f64) -> f64 {
    let rounded = x.round();
    if (-(k as f64)..=0.0).contains(&rounded) {
        let n = (-rounded) as u64;
        if x == rounded {
            return binomial(k as u64, n).expect("k <= 170 in f64 range") as f64;
        }
        if (x - rounded).abs() < 1e-8 {
            return s_k_recursive(k, x);
        }
    }
    let mut acc = sinc(x);
    for j in 1..=k {
        acc *= j as f64 / (x + j as f64);
    }
    acc
}

/// The pair f_m, g_m in exact Shannon coordinates: binomial weights on two
/// disjoint index blocks, and the squared quotient distance 4 C(2m, m).
#[derive(Debug, Clone)]
pub struct SincPairExact {
    pub m: usize,
    /// Shannon index and weight C(m, l) at index -2m + l, l = 0..=m.
    pub left_block: Vec<(i64, u128)>,
    /// Shannon index and weight C(m, l) at index 2m - l, l = 0..=m.
    pub right_block: Vec<(i64, u128)>,
    /// Exact integer 4 C(2m, m) = 4 sum_l C(m, l)^2.
    pub dist_sq: u128,
}

impl SincPairExact {
    /// Quotient distance 2 sqrt(C(2m, m)).
    pub fn dist(&self) -> f64 {
        (self.dist_sq as f64).sqrt()
    }
}

/// Build the exact pair; the squared distance is computed both as the sum of
/// squared binomials and as the central binomial coefficient, and the two
/// must agree.
pub fn sinc_pair(m: usize) -> Result<SincPairExact> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let m64 = m as u64;
    let mut left_block = Vec::with_capacity(m + 1);
    let mut right_block = Vec::with_capacity(m + 1);
    let mut square_sum: u128 = 0;
    for l in 0..=m64 {
        let w = binomial(m64, l)?;
        square_sum = square_sum
            .checked_add(
                w.checked_mul(w)
                    .ok_or_else(|| Error::Overflow(format!("C({m},{l})^2")))?,
            )
            .ok_or_else(|| Error::Overflow("sum of squared binomials".into()))?;
        left_block.push((-2 * m as i64 + l as i64, w));
        right_block.push((2 * m as i64 - l as i64, w));
    }
    let central = binomial(2 * m64, m64)?;
    assert_eq!(square_sum, central, "Vandermonde identity must hold exactly");
    let dist_sq = central
        .checked_mul(4)
        .ok_or_else(|| Error::Overflow("4 C(2m, m)".into()))?;
    Ok(SincPairExact {
        m,
        left_block,
        right_block,
        dist_sq,
    })
}

/// Direct evaluation of f_m (sign = +1) or g_m (sign = -1) from the binomial
/// definition.
pub fn pair_eval_direct(m: usize, sign: f64, x: f64) -> f64 {
    let m64 = m as u64;
    (0..=m64)
        .map(|l| {
            let w = binomial(m64, l).expect("small binomial") as f64;
            let lf = l as f64;
            let mf = m as f64;
            w * (sinc(x + 2.0 * mf - lf) + sign * sinc(x - 2.0 * mf + lf))
        })
        .sum()
}

/// Closed-form evaluation of (f_m(x), g_m(x)) through the two signed
/// products `A = (-1)^m m! sin(pi x) / (pi prod (x+s))` and
/// `B = m! sin(pi x) / (pi prod (x-s))`; f = A + B, g = A - B.
pub fn pair_eval_closed(m: usize, x: f64) -> Option<(f64, f64)> {
    let mf = m as f64;
    // Poles at the integers of the two shifted blocks; callers use the
    // direct form there.
    if x.fract() == 0.0 {
        return None;
    }
    let sin_over_pi = (PI * x).sin() / PI;
    let mut a = sin_over_pi * if m % 2 == 1 { -1.0 } else { 1.0 };
    let mut b = sin_over_pi;
    for j in 1..=m {
        let jf = j as f64;
        a *= jf / (x + mf + jf - 1.0);
        b *= jf / (x - mf - jf + 1.0);
    }
    a /= x + 2.0 * mf;
    b /= x - 2.0 * mf;
    Some((a + b, a - b))
}

/// One gap term of the example: the closed form
/// `(|f_m(x)| - |g_m(x)|)^2 = 4 (m!)^2 sin^2(pi x) / (pi^2 prod_{s=m}^{2m} (|x|+s)^2)`,
/// evaluated as a stable ratio product.
pub fn gap_term(m: usize, x: f64) -> f64 {
    let mf = m as f64;
    let ax = x.abs();
    let mut ratio = 1.0;
    for j in 1..=m {
        let jf = j as f64;
        ratio *= jf / (ax + mf + jf - 1.0);
    }
    ratio /= ax + 2.0 * mf;
    let s = (PI * x).sin();
    4.0 / (PI * PI) * s * s * ratio * ratio
}

/// Certified measurement gap of the pair against the quarter-shift frame.
#[derive(Debug, Clone, Copy)]
pub struct SincGap {
    /// Sum of the closed-form terms over the quarter points |x| <= window.
    pub gap_sq: f64,
    /// Certified bound on the omitted terms.
    pub tail_bound: f64,
    /// Worst relative deviation between the direct binomial evaluation of
    /// |f_m|, |g_m| and their closed forms across the window.
    pub cross_check_max_rel: f64,
}

impl SincGap {
    pub fn gap(&self) -> f64 {
        (self.gap_sq + self.tail_bound).sqrt()
    }
}

/// Sum the gap over the quarter sample points x = k + 1/4, k + 1/2, k + 3/4
/// with |x| <= window (integer points contribute exactly zero), certify the
/// tail by the integral comparison of the (|x| + m)^(-2(m+1)) envelope, and
/// cross-check the closed form against the binomial definition.
pub fn sinc_gap(m: usize, window: usize) -> Result<SincGap> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    if window < 4 * m {
        return Err(Error::Precondition(format!(
            "window must be at least 4m = {}, got {window}",
            4 * m
        )));
    }

    // Integer sample points: both terms share their support pattern, so the
    // moduli agree and the contribution vanishes. Checked directly.
    for k in -(4 * m as i64)..=(4 * m as i64) {
        let x = k as f64;
        let f = pair_eval_direct(m, 1.0, x);
        let g = pair_eval_direct(m, -1.0, x);
        debug_assert!(
            (f.abs() - g.abs()).abs() <= 1e-12,
            "integer point {k} contributes {:e}",
            (f.abs() - g.abs()).abs()
        );
    }

    let w = window as i64;
    let mut gap_sq = 0.0;
    let mut cross_check_max_rel: f64 = 0.0;
    for n in (-4 * w)..=(4 * w) {
        if n.rem_euclid(4) == 0 {
            continue;
        }
        let x = n as f64 / 4.0;
        gap_sq += gap_term(m, x);

        let fd = pair_eval_direct(m, 1.0, x);
        let gd = pair_eval_direct(m, -1.0, x);
        if let Some((fc, gc)) = pair_eval_closed(m, x) {
            for (direct, closed) in [(fd, fc), (gd, gc)] {
                let scale = direct.abs().max(closed.abs());
                if scale > 1e-300 {
                    let rel = (direct - closed).abs() / scale;
                    cross_check_max_rel = cross_check_max_rel.max(rel);
                }
            }
        }
    }

    // Each omitted term is at most (4/pi^2) (m!)^2 (|x| + m)^(-2(m+1));
    // three points per unit length on each side.
    let mf = m as f64;
    let fact_sq: f64 = (1..=m).map(|j| j as f64).product::<f64>().powi(2);
    let base = window as f64 + mf;
    let power = 2 * m as i32 + 2;
    let envelope = base.powi(-power) + base.powi(-(power - 1)) / (power as f64 - 1.0);
    let tail_bound = 2.0 * 3.0 * (4.0 / (PI * PI)) * fact_sq * envelope;

    if tail_bound > 1e-12 * gap_sq {
        return Err(Error::WindowTooSmall {
            window,
            target: 1e-12 * gap_sq,
        });
    }
    Ok(SincGap {
        gap_sq,
        tail_bound,
        cross_check_max_rel,
    })
}

/// One row of the growth table.
#[derive(Debug, Clone, Copy)]
pub struct GrowthRow {
    pub m: usize,
    /// Exact quotient distance 2 sqrt(C(2m, m)).
    pub dist: f64,
    /// Certified measurement gap sqrt(gap_sq + tail).
    pub gap: f64,
    pub gap_tail: f64,
    /// dist / gap, a certified lower bound on the local stability constant.
    pub ratio: f64,
    /// log2(ratio(m) / ratio(m-1)); absent on the first row.
    pub log2_incr: Option<f64>,
    /// The bound (32/pi^2) C(2m,m)^{-2} that gap_sq + tail must stay under.
    pub gap_bound: f64,
    /// The floor (pi/sqrt 8) C(2m,m)^{3/2} that the ratio must exceed.
    pub ratio_floor: f64,
    /// Both inequalities, checked.
    pub bounds_ok: bool,
}

/// The growth table for m = 1..=m_max: exact distances, certified gaps, and
/// the certified ratio together with its exact lower bound
/// `(pi / sqrt 8) C(2m, m)^(3/2)` and the per-step log2 increments.
pub fn growth_table(m_max: usize, window: usize) -> Result<Vec<GrowthRow>> {
    if m_max < 2 {
        return Err(Error::Precondition(format!(
            "m_max must be at least 2 for increments, got {m_max}"
        )));
    }
    let mut rows: Vec<GrowthRow> = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let pair = sinc_pair(m)?;
        let gap = sinc_gap(m, window)?;
        let central = binomial(2 * m as u64, m as u64)? as f64;
        let dist = pair.dist();
        let gap_value = gap.gap();
        let ratio = dist / gap_value;
        let gap_bound = 32.0 / (PI * PI) / (central * central);
        let ratio_floor = PI / 8.0f64.sqrt() * central.powf(1.5);
        let bounds_ok = gap.gap_sq + gap.tail_bound <= gap_bound && ratio >= ratio_floor;
        let log2_incr = rows
            .last()
            .map(|prev: &GrowthRow| (ratio / prev.ratio).log2());
        rows.push(GrowthRow {
            m,
            dist,
            gap: gap_value,
            gap_tail: gap.tail_bound.sqrt(),
            ratio,
            log2_incr,
            gap_bound,
            ratio_floor,
            bounds_ok,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s0_is_sinc() {
        assert_eq!(s_k_eval(0, 0.0), 1.0);
        for x in [0.25, -1.5, 3.75] {
            assert!((s_k_eval(0, x) - sinc(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn s_k_binomial_values_at_poles() {
        for k in 0..=10usize {
            for n in 0..=k {
                let expect = binomial(k as u64, n as u64).unwrap() as f64;
                assert_eq!(s_k_eval(k, -(n as f64)), expect, "k={k} n={n}");
            }
        }
        // e.g. s_2(-1) = 2
        assert_eq!(s_k_eval(2, -1.0), 2.0);
    }

    #[test]
    fn s1_at_one_half() {
        // s_1(1/2) = s_0(3/2) + s_0(1/2) = -2/(3 pi) + 2/pi = 4/(3 pi).
        let expect = 4.0 / (3.0 * PI);
        assert!((s_k_eval(1, 0.5) - expect).abs() < 1e-15);
    }

    #[test]
    fn recursion_matches_explicit_form() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let k = rng.gen_range(0..=12usize);
            // Near the support hump both evaluation routes keep full
            // relative precision; far outside, the recursion cancels.
            let x = rng.gen::<f64>() * (k as f64 + 6.0) - (k as f64 + 2.0);
            let explicit = s_k_eval(k, x);
            let recursive = s_k_recursive(k, x);
            let scale = explicit.abs().max(recursive.abs()).max(1e-12);
            assert!(
                (explicit - recursive).abs() / scale < 1e-10,
                "k={k} x={x}: {explicit} vs {recursive}"
            );
        }
    }

    #[test]
    fn near_pole_evaluation_is_finite_and_consistent() {
        for k in 1..=6usize {
            for n in 0..=k {
                let x = -(n as f64) + 3e-9;
                let v = s_k_eval(k, x);
                let expect = binomial(k as u64, n as u64).unwrap() as f64;
                assert!((v - expect).abs() < 1e-6, "k={k} n={n}: {v}");
            }
        }
    }

    #[test]
    fn pair_distance_examples() {
        assert_eq!(sinc_pair(1).unwrap().dist_sq, 8);
        assert_eq!(sinc_pair(2).unwrap().dist_sq, 24);
        assert_eq!(sinc_pair(3).unwrap().dist_sq, 80);
        assert!(sinc_pair(0).is_err());
    }

    #[test]
    fn pair_blocks_are_disjoint_with_binomial_weights() {
        for m in 1..=8usize {
            let pair = sinc_pair(m).unwrap();
            let left: Vec<i64> = pair.left_block.iter().map(|(i, _)| *i).collect();
            let right: Vec<i64> = pair.right_block.iter().map(|(i, _)| *i).collect();
            assert!(left.iter().all(|i| *i <= -(m as i64)));
            assert!(right.iter().all(|i| *i >= m as i64));
            for (l, (_, w)) in pair.left_block.iter().enumerate() {
                assert_eq!(*w, binomial(m as u64, l as u64).unwrap());
            }
        }
    }

    #[test]
    fn vandermonde_identity_up_to_thirty() {
        for m in 1..=30usize {
            // sinc_pair asserts the identity internally.
            let pair = sinc_pair(m).unwrap();
            assert_eq!(pair.dist_sq % 4, 0);
        }
    }

    #[test]
    fn central_binomial_beats_four_to_m_over_m_plus_one() {
        // 4 C(2m, m) >= 4 4^m / (m+1), exactly in integers: C(2m,m) (m+1) >= 4^m.
        for m in 1..=30u64 {
            let central = binomial(2 * m, m).unwrap();
            let pow = 1u128 << (2 * m);
            assert!(central * (m as u128 + 1) >= pow, "m={m}");
        }
    }

    #[test]
    fn gap_respects_paper_bound() {
        for m in 1..=8usize {
            let gap = sinc_gap(m, 60_000).unwrap();
            let central = binomial(2 * m as u64, m as u64).unwrap() as f64;
            let bound = 32.0 / (PI * PI) / (central * central);
            assert!(
                gap.gap_sq + gap.tail_bound <= bound,
                "m={m}: {:e} > {bound:e}",
                gap.gap_sq + gap.tail_bound
            );
        }
    }

    #[test]
    fn gap_at_m_one_below_instantiated_bound() {
        let gap = sinc_gap(1, 60_000).unwrap();
        assert!(gap.gap() <= (8.0 / (PI * PI)).sqrt());
    }

    #[test]
    fn closed_form_matches_binomial_evaluation() {
        for m in 1..=6usize {
            let gap = sinc_gap(m, if m == 1 { 60_000 } else { 4_096 }).unwrap();
            assert!(
                gap.cross_check_max_rel < 1e-10,
                "m={m}: rel {:e}",
                gap.cross_check_max_rel
            );
        }
    }

    #[test]
    fn gap_terms_match_squared_modulus_difference() {
        for m in 1..=5usize {
            for n in [-9i64, -3, 1, 2, 5, 13, 29] {
                let x = n as f64 / 4.0 + if n.rem_euclid(4) == 0 { 0.25 } else { 0.0 };
                let fd = pair_eval_direct(m, 1.0, x).abs();
                let gd = pair_eval_direct(m, -1.0, x).abs();
                let direct = (fd - gd) * (fd - gd);
                let closed = gap_term(m, x);
                let scale = direct.max(closed).max(1e-300);
                assert!(
                    (direct - closed).abs() / scale < 1e-8,
                    "m={m} x={x}: {direct:e} vs {closed:e}"
                );
            }
        }
    }

    #[test]
    fn window_growth_only_tightens_the_certificate() {
        for m in [3usize, 5] {
            let mut prev = f64::INFINITY;
            for window in [1_024, 2_048, 4_096, 8_192] {
                let gap = sinc_gap(m, window).unwrap();
                let total = gap.gap_sq + gap.tail_bound;
                assert!(total <= prev + 1e-12, "m={m} window={window}");
                prev = total;
            }
        }
    }

    #[test]
    fn rejects_tiny_windows() {
        assert!(matches!(
            sinc_gap(3, 4),
            Err(Error::Precondition(_)) | Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn growth_table_examples() {
        let rows = growth_table(4, 60_000).unwrap();
        assert_eq!(rows.len(), 4);
        let expect_dist = [8.0f64, 24.0, 80.0, 280.0];
        for (row, d2) in rows.iter().zip(expect_dist) {
            assert!((row.dist - d2.sqrt()).abs() < 1e-12);
            assert!(row.bounds_ok);
            assert!(row.ratio >= row.ratio_floor);
        }
        assert!(rows[0].log2_incr.is_none());
        assert!(rows[1].log2_incr.is_some());
        assert!(growth_table(1, 64).is_err());
    }

    #[test]
    fn growth_table_increments_near_three() {
        let rows = growth_table(8, 60_000).unwrap();
        for row in &rows[4..] {
            let incr = row.log2_incr.unwrap();
            assert!(
                (2.5..=3.5).contains(&incr),
                "m={}: increment {incr}",
                row.m
            );
        }
    }
}

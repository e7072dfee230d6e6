//! Small numeric helpers shared across modules.

/// Normalized cardinal sine: sin(pi x) / (pi x), equal to 1 at x = 0.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
    }
}

/// sin(pi t / 4) for integer t, exact at the lattice: the value cycles with
/// period 8 through {0, s, 1, s, 0, -s, -1, -s} where s = sqrt(2)/2.
pub fn sin_quarter_pi(t: i64) -> f64 {
    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const TABLE: [f64; 8] = [0.0, S, 1.0, S, 0.0, -S, -1.0, -S];
    TABLE[t.rem_euclid(8) as usize]
}

/// sinc(pi t / 4) for integer t: exactly 0 at nonzero multiples of 4 and
/// exactly 1 at t = 0.
pub fn sinc_quarter(t: i64) -> f64 {
    if t == 0 {
        1.0
    } else {
        sin_quarter_pi(t) / (std::f64::consts::FRAC_PI_4 * t as f64)
    }
}

/// Bijection N -> Z used to present integer-indexed families with a single
/// natural index: 0, 1, -1, 2, -2, ...
pub fn nat_to_int(n: usize) -> i64 {
    if n % 2 == 1 {
        ((n + 1) / 2) as i64
    } else {
        -((n / 2) as i64)
    }
}

/// Inverse of [`nat_to_int`].
pub fn int_to_nat(z: i64) -> usize {
    if z > 0 {
        (2 * z - 1) as usize
    } else {
        (-2 * z) as usize
    }
}

/// Upper bound for the one-sided series sum_{d >= d0} 1/d^2, valid for d0 >= 1:
/// the first term plus the integral comparison gives 1/d0^2 + 1/d0 <= 1/(d0-1)
/// for d0 >= 2.
pub fn inv_square_tail(d0: f64) -> f64 {
    assert!(d0 >= 1.0);
    1.0 / (d0 * d0) + 1.0 / d0
}

/// Upper bound for sum_{d >= d0} 1/d^4 by the same first-term-plus-integral
/// comparison.
pub fn inv_fourth_tail(d0: f64) -> f64 {
    assert!(d0 >= 1.0);
    1.0 / d0.powi(4) + 1.0 / (3.0 * d0.powi(3))
}

/// Exact binomial coefficient in 128-bit arithmetic. Errors on genuine
/// overflow rather than saturating.
pub fn binomial(n: u64, k: u64) -> crate::Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Multiply before dividing; the intermediate product of a binomial
        // prefix with (n - k + i) is always divisible by i.
        acc = acc
            .checked_mul((n - k + i) as u128)
            .ok_or_else(|| crate::Error::Overflow(format!("binomial({n},{k})")))?;
        acc /= i as u128;
    }
    Ok(acc)
}

/// Derive an independent 64-bit stream seed from a base seed and a task index.
/// SplitMix64 finalizer; used so that restart i sees the same start point no
/// matter how many restarts run in total.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

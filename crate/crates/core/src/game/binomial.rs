//! Binomial distribution helpers used by the influencer game.

use crate::scalar::Scalar;

fn ln_choose<T: Scalar>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    let mut acc = T::zero();
    for j in 0..k {
        acc = acc + (T::count(n - j) / T::count(j + 1)).ln();
    }
    acc
}

/// `P(Bin(n, p) = k)`.
pub fn binom_pmf<T: Scalar>(n: usize, k: usize, p: T) -> T {
    if k > n {
        return T::zero();
    }
    if p <= T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    if p >= T::one() {
        return if k == n { T::one() } else { T::zero() };
    }
    (ln_choose::<T>(n, k) + T::count(k) * p.ln() + T::count(n - k) * (-p).ln_1p()).exp()
}

/// `P(Bin(n, p) <= m)`; zero for negative `m`.
pub fn binom_cdf<T: Scalar>(n: usize, m: isize, p: T) -> T {
    if m < 0 {
        return T::zero();
    }
    let m = m as usize;
    if m >= n || p <= T::zero() {
        return T::one();
    }
    if p >= T::one() {
        return T::zero();
    }
    let q = T::one() - p;
    let first = q.powi(n as i32);
    if first > T::min_positive_value().sqrt() {
        let ratio = p / q;
        let mut term = first;
        let mut acc = first;
        for k in 0..m {
            term = term * ratio * T::count(n - k) / T::count(k + 1);
            acc = acc + term;
        }
        acc.min(T::one())
    } else {
        (0..=m).map(|k| binom_pmf(n, k, p)).sum::<T>().min(T::one())
    }
}

/// `P(Bin(n, p) <= m)` and its derivative in `p` from one pass over the terms, for
/// `0 <= m < n` and `0 < p < 1`.
pub(crate) fn binom_cdf_with_dp<T: Scalar>(n: usize, m: usize, p: T) -> (T, T) {
    let q = T::one() - p;
    let first = q.powi(n as i32);
    if first <= T::min_positive_value().sqrt() {
        return (binom_cdf(n, m as isize, p), binom_cdf_dp(n, m as isize, p));
    }
    let ratio = p / q;
    let mut term = first;
    let mut acc = first;
    for k in 0..m {
        term = term * ratio * T::count(n - k) / T::count(k + 1);
        acc = acc + term;
    }
    // P(Bin(n - 1, p) = m) = P(Bin(n, p) = m) (n - m) / (n q).
    (acc.min(T::one()), -term * T::count(n - m) / q)
}

/// `d/dp P(Bin(n, p) <= m) = -n P(Bin(n - 1, p) = m)` for `0 <= m < n`.
pub fn binom_cdf_dp<T: Scalar>(n: usize, m: isize, p: T) -> T {
    if m < 0 || m as usize >= n {
        return T::zero();
    }
    -T::count(n) * binom_pmf(n - 1, m as usize, p)
}

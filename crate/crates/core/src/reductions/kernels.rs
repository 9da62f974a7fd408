//! Integer kernels behind the reduction constructors.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::Symbol;
use crate::error::{Error, Result};

/// Base-`base` digits of `n`, least significant first; empty for zero.
pub fn expansion(n: &BigUint, base: usize) -> Vec<u32> {
    if n.is_zero() {
        return Vec::new();
    }
    n.to_radix_le(base as u32).into_iter().map(u32::from).collect()
}

/// Largest `m` with `base^m <= n`, for `n >= 1`.
pub fn floor_log(n: &BigUint, base: usize) -> usize {
    debug_assert!(!n.is_zero() && base >= 2);
    let b = BigUint::from(base);
    let mut m = 0;
    let mut p = b.clone();
    while p <= *n {
        m += 1;
        p *= &b;
    }
    m
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(Σσ)! / Π σ_i!`.
pub fn multinomial(counts: &[usize]) -> BigUint {
    let mut total = 0;
    let mut acc = BigUint::one();
    for &c in counts {
        total += c;
        acc *= binomial(total, c);
    }
    acc
}

/// Symbol counts of `word` over an alphabet of `size` symbols.
pub fn type_counts(word: &[Symbol], size: usize) -> Vec<usize> {
    let mut counts = vec![0; size];
    for &s in word {
        counts[s as usize] += 1;
    }
    counts
}

/// Symbol counts of `word` and its lexicographic position among all words
/// with the same counts.
pub fn multinomial_rank(word: &[Symbol], size: usize) -> (Vec<usize>, BigUint) {
    let sigma = type_counts(word, size);
    let mut remaining = sigma.clone();
    let mut left = word.len();
    // number of arrangements of `remaining`
    let mut arrangements = multinomial(&remaining);
    let mut rank = BigUint::zero();
    for &s in word {
        for &count in remaining.iter().take(s as usize) {
            if count > 0 {
                rank += &arrangements * BigUint::from(count) / BigUint::from(left);
            }
        }
        arrangements = arrangements * BigUint::from(remaining[s as usize]) / BigUint::from(left);
        remaining[s as usize] -= 1;
        left -= 1;
    }
    (sigma, rank)
}

fn binomialary_checks(r: u64, k: usize) -> Result<()> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!(
            "binomialary representation needs r >= 3, got {r}"
        )));
    }
    if (k as u64) < r - 2 {
        return Err(Error::Precondition(format!("need k >= r - 2, got k = {k}, r = {r}")));
    }
    Ok(())
}

/// Representation of `target` as `Σ_{i<k} a_i (r-1)^i` with
/// `0 <= a_i <= C(k, i+1)`, valid for `0 <= target <= (r^k - 1)/(r - 1)`.
///
/// Each digit from the top is the least value that lets the lower digits
/// cover the remainder. This is the representation the one-step carry rule
/// ([`binomialary_increment`]) reaches after `target` increments from zero.
pub fn binomialary_representation(r: u64, k: usize, target: &BigUint) -> Result<Vec<BigUint>> {
    binomialary_checks(r, k)?;
    let base = BigUint::from(r - 1);
    let bounds: Vec<BigUint> = (0..k).map(|i| binomial(k, i + 1)).collect();
    let weights: Vec<BigUint> = (0..k).map(|i| base.pow(i as u32)).collect();
    let capacity: Vec<BigUint> = std::iter::once(BigUint::zero())
        .chain(bounds.iter().zip(&weights).scan(BigUint::zero(), |acc, (b, w)| {
            *acc += b * w;
            Some(acc.clone())
        }))
        .collect();
    if *target > capacity[k] {
        return Err(Error::OutOfRange(format!(
            "{target} exceeds the largest representable value {}",
            capacity[k]
        )));
    }
    let mut rest = target.clone();
    let mut digits = vec![BigUint::zero(); k];
    for i in (0..k).rev() {
        if rest > capacity[i] {
            let need = (&rest - &capacity[i] + &weights[i] - 1u32) / &weights[i];
            rest -= &need * &weights[i];
            digits[i] = need;
        }
    }
    debug_assert!(rest.is_zero());
    Ok(digits)
}

/// Representation of a multiple of `r - 1` in `[0, r^k - 1]` as
/// `Σ_{i<=k} a_i (r-1)^i` with `0 <= a_i <= C(k, i)`.
pub fn binomialary_multiple(r: u64, k: usize, target: &BigUint) -> Result<Vec<BigUint>> {
    binomialary_checks(r, k)?;
    let base = BigUint::from(r - 1);
    if !(target % &base).is_zero() {
        return Err(Error::OutOfRange(format!("{target} is not a multiple of {base}")));
    }
    let inner = binomialary_representation(r, k, &(target / &base))?;
    Ok(std::iter::once(BigUint::zero()).chain(inner).collect())
}

/// One step of the carry rule on a base-form representation: the smallest
/// digit below its bound gains one and every lower digit drops from its
/// bound to `bound - (r - 2)`.
pub fn binomialary_increment(r: u64, k: usize, digits: &mut [BigUint]) -> Result<()> {
    binomialary_checks(r, k)?;
    let i = (0..k)
        .find(|&i| digits[i] < binomial(k, i + 1))
        .ok_or_else(|| Error::OutOfRange("representation is already maximal".into()))?;
    for (j, digit) in digits.iter_mut().enumerate().take(i) {
        *digit = binomial(k, j + 1) - BigUint::from(r - 2);
    }
    digits[i] += 1u32;
    Ok(())
}

/// `Σ_i a_i (r-1)^i`.
pub fn binomialary_value(r: u64, digits: &[BigUint]) -> BigUint {
    let base = BigUint::from(r - 1);
    digits.iter().enumerate().map(|(i, a)| a * base.pow(i as u32)).sum()
}

/// Whether `frac(k · log_{r-1} r) < 1/(k+1)`.
///
/// With `m = ⌊k log_{r-1} r⌋` the inequality is equivalent to
/// `r^(k(k+1)) < (r-1)^((k+1)m + 1)`, decided exactly in integers.
pub fn dirichlet_qualifies(r: u64, k: usize) -> bool {
    let rk = BigUint::from(r).pow(k as u32);
    let m = floor_log(&rk, (r - 1) as usize);
    let lhs = BigUint::from(r).pow((k * (k + 1)) as u32);
    let rhs = BigUint::from(r - 1).pow(((k + 1) * m + 1) as u32);
    lhs < rhs
}

/// Smallest `k` in `[k_min, k_max]` for which [`dirichlet_qualifies`] holds.
pub fn find_dirichlet_k(r: u64, k_min: usize, k_max: usize) -> Result<Option<usize>> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("need r >= 3, got {r}")));
    }
    let floor = 1.max(r as usize - 2);
    if k_min < floor {
        return Err(Error::Precondition(format!("k_min must be at least {floor}")));
    }
    Ok((k_min..=k_max).find(|&k| dirichlet_qualifies(r, k)))
}

/// `Σ_i i · a_i · d^i` for the base-`d` digits `a_i` of `a`.
pub fn weighted_digit_sum(a: u64, d: u64) -> u64 {
    let mut total = 0;
    let mut place = 1;
    let mut i = 0;
    let mut rest = a;
    while rest > 0 {
        total += i * (rest % d) * place;
        rest /= d;
        place *= d;
        i += 1;
    }
    total
}

/// Outcome of the three inequalities bounding the weighted digit sum
/// `S = Σ i a_i d^i` of `a`, with `m = ⌊log_d a⌋`:
/// `(log_d a − (2d−1)/(d−1)) a < (m − d/(d−1)) a < S <= m a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitSumBounds {
    pub log_below_floor: bool,
    pub floor_below_sum: bool,
    pub sum_at_most_top: bool,
}

impl DigitSumBounds {
    pub fn all(&self) -> bool {
        self.log_below_floor && self.floor_below_sum && self.sum_at_most_top
    }
}

pub fn rounding_digit_bounds(a: u64, d: u64) -> DigitSumBounds {
    assert!(a >= 1 && d >= 2);
    let m = floor_log(&BigUint::from(a), d as usize) as i128;
    let s = weighted_digit_sum(a, d) as i128;
    let (a_i, d_i) = (a as i128, d as i128);
    let df = d as f64;
    let log_side = ((a as f64).ln() / df.ln() - (2.0 * df - 1.0) / (df - 1.0)) * a as f64;
    let floor_side = (m as f64 - df / (df - 1.0)) * a as f64;
    DigitSumBounds {
        log_below_floor: log_side < floor_side,
        // multiply through by d - 1
        floor_below_sum: (m * (d_i - 1) - d_i) * a_i < (d_i - 1) * s,
        sum_at_most_top: s <= m * a_i,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn expansions() {
        assert_eq!(expansion(&big(10), 2), vec![0, 1, 0, 1]);
        assert!(expansion(&big(0), 3).is_empty());
        assert_eq!(floor_log(&big(10), 2), 3);
        assert_eq!(floor_log(&big(8), 2), 3);
        assert_eq!(floor_log(&big(1), 7), 0);
    }

    #[test]
    fn multinomial_ranks() {
        // a = 0, b = 1
        assert_eq!(multinomial_rank(&[0, 0, 1], 2), (vec![2, 1], big(0)));
        assert_eq!(multinomial_rank(&[0, 1, 0], 2), (vec![2, 1], big(1)));
        assert_eq!(multinomial_rank(&[1, 0, 0], 2), (vec![2, 1], big(2)));
        assert_eq!(multinomial_rank(&[2, 2, 2], 3).1, big(0));
        assert_eq!(multinomial(&[3, 0, 0]), big(1));
        assert_eq!(multinomial(&[2, 1]), big(3));
    }

    #[test]
    fn ranks_enumerate_type_classes() {
        use std::collections::HashMap;
        let mut seen: HashMap<Vec<usize>, Vec<BigUint>> = HashMap::new();
        for w in crate::alphabet::all_words(3, 4) {
            let (sigma, rank) = multinomial_rank(&w, 3);
            seen.entry(sigma).or_default().push(rank);
        }
        for (sigma, ranks) in seen {
            let t = multinomial(&sigma).to_usize().unwrap();
            let expect: Vec<BigUint> = (0..t as u64).map(big).collect();
            assert_eq!(ranks, expect, "type {sigma:?}");
        }
    }

    #[test]
    fn binomialary_examples() {
        assert_eq!(binomialary_representation(3, 2, &big(0)).unwrap(), vec![big(0), big(0)]);
        assert_eq!(
            binomialary_multiple(3, 2, &big(8)).unwrap(),
            vec![big(0), big(2), big(1)]
        );
        assert!(binomialary_representation(3, 2, &big(5)).is_err());
        assert!(binomialary_multiple(3, 2, &big(7)).is_err());
        assert!(binomialary_representation(5, 2, &big(1)).is_err());
    }

    #[test]
    fn carry_rule_agrees_with_direct_form() {
        for r in 3..7u64 {
            for k in (r as usize - 2).max(1)..7 {
                let max = (big(r).pow(k as u32) - 1u32) / big(r - 1);
                let mut digits = vec![BigUint::zero(); k];
                let mut t = BigUint::zero();
                loop {
                    assert_eq!(
                        binomialary_representation(r, k, &t).unwrap(),
                        digits,
                        "r={r} k={k} t={t}"
                    );
                    if t == max {
                        assert!(binomialary_increment(r, k, &mut digits).is_err());
                        break;
                    }
                    binomialary_increment(r, k, &mut digits).unwrap();
                    t += 1u32;
                    assert_eq!(binomialary_value(r, &digits), t);
                }
            }
        }
    }

    #[test]
    fn dirichlet_small_cases() {
        assert!(!dirichlet_qualifies(3, 1));
        assert!(dirichlet_qualifies(3, 2));
        assert_eq!(find_dirichlet_k(3, 1, 10).unwrap(), Some(2));
        assert_eq!(find_dirichlet_k(3, 3, 10).unwrap(), Some(7));
        assert_eq!(find_dirichlet_k(3, 3, 6).unwrap(), None);
        assert!(find_dirichlet_k(5, 1, 10).is_err());
    }

    #[test]
    fn digit_sums() {
        // 10 = 1010b: 1·2 + 3·8
        assert_eq!(weighted_digit_sum(10, 2), 26);
        assert_eq!(weighted_digit_sum(7, 10), 0);
        assert!(rounding_digit_bounds(1, 2).all());
        assert!(rounding_digit_bounds(99_999, 10).all());
    }
}

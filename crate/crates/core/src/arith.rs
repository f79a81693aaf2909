//! Divisor sums twisted by the character of Q(i).

/// The Kronecker symbol `(-4/n)`.
pub fn chi_m4(n: i64) -> i64 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sum_{d|m} chi(d)`.
pub fn sigma_chi(m: u64) -> i64 {
    divisors(m).into_iter().map(|d| chi_m4(d as i64)).sum()
}

pub fn sigma1(m: u64) -> i64 {
    divisors(m).into_iter().map(|d| d as i64).sum()
}

/// `sum_{d|m} (a chi(m/d) + b chi(d)) d^2`.
pub fn twisted_sum(m: u64, a: i64, b: i64) -> i64 {
    divisors(m)
        .into_iter()
        .map(|d| {
            let (d, md) = (d as i64, (m / d) as i64);
            (a * chi_m4(md) + b * chi_m4(d)) * d * d
        })
        .sum()
}

/// `sqrt(n)` when `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).find(|x| x * x == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character() {
        assert_eq!([1, 2, 3, 4, 5, -1].map(chi_m4), [1, 0, -1, 0, 1, -1]);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn sums() {
        assert_eq!(sigma_chi(1), 1);
        assert_eq!(sigma_chi(2), 1);
        assert_eq!(sigma_chi(5), 2);
        assert_eq!(sigma1(6), 12);
        assert_eq!(twisted_sum(1, 64, 4), 68);
        assert_eq!(twisted_sum(1, 16, 1), 17);
        assert_eq!(twisted_sum(2, 64, 4), 260);
        assert_eq!(twisted_sum(3, 64, 4), 480);
    }

    #[test]
    fn squares() {
        assert_eq!(exact_sqrt(0), Some(0));
        assert_eq!(exact_sqrt(49), Some(7));
        assert_eq!(exact_sqrt(50), None);
    }
}

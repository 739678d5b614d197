//! Prime sieves used by the Euler-product code.

/// All primes `p <= limit` in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(estimate_count(limit));
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn estimate_count(limit: u64) -> usize {
    let x = limit as f64;
    (1.3 * x / x.ln().max(1.0)) as usize + 8
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_n < n (ln n + ln ln n) for n >= 6.
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64 + 16;
    let mut primes = primes_up_to(bound);
    primes.truncate(count);
    primes
}

/// Number of primes `<= x`.
pub fn prime_count(x: u64) -> usize {
    primes_up_to(x).len()
}

/// Smallest-prime-factor table for `0..=limit` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieves() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
        assert_eq!(prime_count(1_000_000), 78_498);
        assert_eq!(first_primes(10_000).last(), Some(&104_729));
    }

    #[test]
    fn spf_table() {
        let spf = smallest_prime_factors(100);
        assert_eq!(spf[97], 97);
        assert_eq!(spf[91], 7);
        assert_eq!(spf[64], 2);
        for n in 2..=100u64 {
            assert_eq!(is_prime(n), spf[n as usize] as u64 == n);
        }
    }
}

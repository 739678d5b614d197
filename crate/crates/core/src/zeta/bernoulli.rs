//! Scaled Bernoulli numbers `B_{2k} / (2k)!`.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Highest Euler–Maclaurin order the tables support.
pub const MAX_ORDER: usize = 150;

/// `B_{2k} / (2k)!` for `k = 1..=MAX_ORDER`, index `k - 1`.
///
/// Uses `B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}`, which avoids the
/// cancellation of the usual recurrences.
pub fn scaled_even(k: usize) -> f64 {
    table()[k - 1]
}

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let two_pi = 2.0 * PI;
        (1..=MAX_ORDER)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                // Split the power to keep the intermediate in range.
                let scale = two_pi.powi(k as i32);
                sign * 2.0 * zeta_even(k) / scale / scale
            })
            .collect()
    })
}

fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        _ => {
            let e = 2 * k as i32;
            // Terms beyond n = 200 are below 1e-18 for e >= 8.
            (1..=200).rev().map(|n| (n as f64).powi(-e)).sum()
        }
    }
}

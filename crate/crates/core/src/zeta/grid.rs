//! Batched evaluation of a periodic Hurwitz series on a fixed point set
//! translated vertically by `τ`.
//!
//! For points `s_p` and shift `τ`, the directly summed part factors as
//! `b_j (j+α)^{-s_p} · (j+α)^{-iτ}`. The first factor is tabulated once, so
//! each `τ` costs one `sin_cos` per term plus one complex multiply per point
//! and term. Tails use the same Euler–Maclaurin routine as the scalar path.

use num_complex::Complex64;

use super::euler_maclaurin::regular_tail;
use super::{check_point, initial_terms, near_pole, EvalControls, PeriodicHurwitz, ZetaError};

/// Upper limit on tabulated `(term, point)` pairs.
const TABLE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone)]
pub struct ShiftedGrid {
    series: PeriodicHurwitz,
    points: Vec<Complex64>,
    ctl: EvalControls,
    /// Terms `j < table_len` are tabulated.
    table_len: usize,
    /// Indices `j < table_len` with `b_{j mod k} != 0`, increasing.
    active: Vec<usize>,
    logs: Vec<f64>,
    /// `base[i * P + p] = b_j (j+α)^{-s_p}` for `j = active[i]`.
    base: Vec<Complex64>,
}

impl ShiftedGrid {
    /// `tau_max` sizes the table; larger shifts still work but compute the
    /// extra terms on the fly.
    pub fn new(
        series: PeriodicHurwitz,
        points: Vec<Complex64>,
        ctl: EvalControls,
        tau_max: f64,
    ) -> Result<Self, ZetaError> {
        for &s in &points {
            check_point(s)?;
        }
        let k = series.sequence().period();
        let reach = points
            .iter()
            .map(|s| (s.im.abs() + tau_max.abs()).max((s.im + tau_max).abs()))
            .fold(0.0, f64::max);
        let per_point = TABLE_LIMIT / points.len().max(1);
        let len = (k * initial_terms(reach)).min(per_point);
        let alpha = series.alpha().value();
        let seq = series.sequence().clone();
        let active: Vec<usize> = (0..len)
            .filter(|&j| seq.at(j) != Complex64::new(0.0, 0.0))
            .collect();
        let logs: Vec<f64> = active.iter().map(|&j| (j as f64 + alpha).ln()).collect();
        let mut base = Vec::with_capacity(active.len() * points.len());
        for (&j, &l) in active.iter().zip(&logs) {
            let b = seq.at(j);
            base.extend(points.iter().map(|&s| b * (-s * l).exp()));
        }
        Ok(Self {
            series,
            points,
            ctl,
            table_len: len,
            active,
            logs,
            base,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn series(&self) -> &PeriodicHurwitz {
        &self.series
    }

    /// Values of the series at every `s_p + iτ`.
    pub fn eval_at(&self, tau: f64) -> Result<Vec<Complex64>, ZetaError> {
        let shifted: Vec<Complex64> = self
            .points
            .iter()
            .map(|s| s + Complex64::new(0.0, tau))
            .collect();
        let pole = self.series.has_pole();
        for &s in &shifted {
            check_point(s)?;
            if pole && near_pole(s) {
                return Err(ZetaError::PoleAtOne(s));
            }
        }
        let seq = self.series.sequence();
        let k = seq.period();
        let kf = k as f64;
        let alpha = self.series.alpha().value();
        let abs_sum = seq.abs_sum();
        if abs_sum == 0.0 {
            return Ok(vec![Complex64::new(0.0, 0.0); shifted.len()]);
        }

        let mut n = shifted.iter().map(|s| initial_terms(s.im)).max().unwrap_or(20);
        let tails = loop {
            if n > self.ctl.max_terms {
                let worst = shifted[0];
                return Err(ZetaError::AccuracyUnreachable {
                    s: worst,
                    abs_tol: self.ctl.abs_tol,
                    max_terms: self.ctl.max_terms,
                });
            }
            match self.tails(&shifted, n, alpha) {
                Some(t) => break t,
                None => n *= 2,
            }
        };

        let p_count = shifted.len();
        let mut acc = vec![Complex64::new(0.0, 0.0); p_count];
        let limit = k * n;
        let tabulated = self.active.partition_point(|&j| j < limit);
        for (i, &l) in self.logs[..tabulated].iter().enumerate() {
            let (sin, cos) = (tau * l).sin_cos();
            let phase = Complex64::new(cos, -sin);
            let row = &self.base[i * p_count..(i + 1) * p_count];
            for (a, &b) in acc.iter_mut().zip(row) {
                *a += b * phase;
            }
        }
        for j in self.table_len..limit {
            let b = seq.at(j);
            if b == Complex64::new(0.0, 0.0) {
                continue;
            }
            let l = (j as f64 + alpha).ln();
            for (a, &s) in acc.iter_mut().zip(&shifted) {
                *a += b * (-s * l).exp();
            }
        }

        let mean = seq.mean();
        let values = shifted
            .iter()
            .zip(acc)
            .zip(tails)
            .map(|((&s, direct), tail)| {
                let k_pow = (-s * kf.ln()).exp();
                let mut v = direct + k_pow * tail;
                if pole {
                    v += kf * k_pow * mean / (s - 1.0);
                }
                v
            })
            .collect::<Vec<_>>();
        if let Some((i, _)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(ZetaError::NonFinite(shifted[i]));
        }
        Ok(values)
    }

    /// `Σ_m b_m · tail_m(s)` per point, or `None` if `n` is too small.
    fn tails(&self, shifted: &[Complex64], n: usize, alpha: f64) -> Option<Vec<Complex64>> {
        let seq = self.series.sequence();
        let k = seq.period() as f64;
        let abs_sum = seq.abs_sum();
        shifted
            .iter()
            .map(|&s| {
                let tol = self.ctl.abs_tol / (k.powf(-s.re) * abs_sum);
                let mut sum = Complex64::new(0.0, 0.0);
                for (m, &bm) in seq.values().iter().enumerate() {
                    if bm == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let a = (m as f64 + alpha) / k;
                    sum += bm * regular_tail(s, a, n, tol)?;
                }
                Some(sum)
            })
            .collect()
    }
}

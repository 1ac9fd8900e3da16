//! Inversion counting, sampling records and steady-state summaries.

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::model::{TrueOrder, WorkingList};

/// Largest n accepted by the quadratic oracle.
pub const BRUTE_FORCE_LIMIT: usize = 10_000;

/// Default share of the run, counted from the end, that forms the steady window.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.25;

pub const MIN_SAMPLES: usize = 8;

/// Inversions of a sequence of distinct values, by merge sort.
pub fn merge_count_inversions(values: &[u32]) -> u64 {
    let mut buf = values.to_vec();
    let mut scratch = vec![0u32; buf.len()];
    sort_count(&mut buf, &mut scratch)
}

fn sort_count(a: &mut [u32], scratch: &mut [u32]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = a.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        sort_count(left, sl) + sort_count(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if a[i] <= a[j] {
            scratch[k] = a[i];
            i += 1;
        } else {
            scratch[k] = a[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&a[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&a[j..n]);
    a.copy_from_slice(&scratch[..n]);
    count
}

/// Pair-enumeration inversion count. Quadratic; test oracle only.
pub fn brute_force_inversions(values: &[u32]) -> u64 {
    let mut count = 0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                count += 1;
            }
        }
    }
    count
}

/// Kendall tau distance by pair enumeration, refusing lists above
/// [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_tau(list: &WorkingList, order: &TrueOrder) -> Result<u64, MetricsError> {
    let n = list.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(MetricsError::TooLargeForBruteForce {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let ranks: Vec<u32> = list.as_slice().iter().map(|&e| order.rank_of(e)).collect();
    Ok(brute_force_inversions(&ranks))
}

/// One observation of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub t: u64,
    pub tau: u64,
    pub good_cum: u64,
    pub bad_cum: u64,
    pub rounds: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadySummary {
    pub steady_mean_tau: f64,
    pub steady_sd_tau: f64,
    pub steady_window: (u64, u64),
    pub convergence_time: u64,
    /// `steady_mean_tau / n`.
    pub ratio: f64,
}

impl SteadySummary {
    /// Half-width of the band around the steady mean.
    pub fn band_half_width(&self) -> f64 {
        band_half_width(self.steady_mean_tau, self.steady_sd_tau)
    }
}

fn band_half_width(mean: f64, sd: f64) -> f64 {
    (2.0 * sd).max(0.05 * mean).max(1.0)
}

/// Steady mean over the final `window_fraction` of the samples, and the
/// first sampled time at which the series enters the steady band
/// `mean ± max(2 sd, 5% of mean, 1)`.
pub fn summarize_run(
    samples: &[Sample],
    n: usize,
    window_fraction: f64,
) -> Result<SteadySummary, MetricsError> {
    if samples.len() < MIN_SAMPLES {
        return Err(MetricsError::TooFewSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(MetricsError::BadWindowFraction(window_fraction.to_string()));
    }
    let window_len = ((samples.len() as f64 * window_fraction).ceil() as usize).max(1);
    let window = &samples[samples.len() - window_len..];
    let count = window.len() as f64;
    let mean = window.iter().map(|s| s.tau as f64).sum::<f64>() / count;
    let var = window
        .iter()
        .map(|s| (s.tau as f64 - mean).powi(2))
        .sum::<f64>()
        / count;
    let sd = var.sqrt();
    let half = band_half_width(mean, sd);
    let convergence_time = samples
        .iter()
        .find(|s| (s.tau as f64 - mean).abs() <= half)
        .map(|s| s.t)
        // the window's mean always lies inside its own range of values, so
        // some sample is within one band of it; kept total for safety
        .unwrap_or(window[0].t);
    Ok(SteadySummary {
        steady_mean_tau: mean,
        steady_sd_tau: sd,
        steady_window: (window[0].t, window[window.len() - 1].t),
        convergence_time,
        ratio: mean / n as f64,
    })
}

/// Good-to-bad adversary swap ratio at the final sample.
pub fn good_swap_fraction(samples: &[Sample]) -> Result<f64, MetricsError> {
    match samples.last() {
        Some(s) if s.bad_cum > 0 => Ok(s.good_cum as f64 / s.bad_cum as f64),
        _ => Err(MetricsError::NoBadSwaps),
    }
}

/// Good-to-bad ratio restricted to the swaps between two samples.
pub fn good_swap_fraction_between(from: &Sample, to: &Sample) -> Result<f64, MetricsError> {
    let bad = to.bad_cum - from.bad_cum;
    if bad == 0 {
        return Err(MetricsError::NoBadSwaps);
    }
    Ok((to.good_cum - from.good_cum) as f64 / bad as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn series(taus: &[u64]) -> Vec<Sample> {
        taus.iter()
            .enumerate()
            .map(|(i, &tau)| Sample {
                t: i as u64 * 10,
                tau,
                good_cum: 0,
                bad_cum: 0,
                rounds: 0,
            })
            .collect()
    }

    #[test]
    fn counts_small_sequences() {
        assert_eq!(merge_count_inversions(&[2, 0, 3, 1]), 3);
        assert_eq!(brute_force_inversions(&[2, 0, 3, 1]), 3);
        assert_eq!(brute_force_inversions(&[1, 0, 3, 2]), 2);
        assert_eq!(merge_count_inversions(&[]), 0);
        assert_eq!(merge_count_inversions(&[5]), 0);
    }

    #[test]
    fn merge_count_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in [2usize, 3, 7, 64, 65, 300] {
            let mut v: Vec<u32> = (0..n as u32).collect();
            for _ in 0..20 {
                v.shuffle(&mut rng);
                assert_eq!(merge_count_inversions(&v), brute_force_inversions(&v));
            }
        }
    }

    #[test]
    fn brute_force_tau_guard() {
        let n = BRUTE_FORCE_LIMIT + 1;
        let err = brute_force_tau(&WorkingList::identity(n), &TrueOrder::identity(n));
        assert!(matches!(
            err,
            Err(MetricsError::TooLargeForBruteForce { .. })
        ));
        assert_eq!(
            brute_force_tau(&WorkingList::identity(4), &TrueOrder::identity(4)),
            Ok(0)
        );
    }

    #[test]
    fn constant_series() {
        let s = summarize_run(&series(&[7; 20]), 10, 0.25).unwrap();
        assert_eq!(s.steady_mean_tau, 7.0);
        assert_eq!(s.convergence_time, 0);
        assert!((s.ratio - 0.7).abs() < 1e-12);
        assert_eq!(s.steady_window, (150, 190));
    }

    #[test]
    fn decreasing_to_plateau() {
        // 1000, 900, ..., 100, then 50 held; band = max(0, 2.5, 1) = 2.5
        let mut taus: Vec<u64> = (1..=10).rev().map(|k| k * 100).collect();
        taus.extend([50; 30]);
        let s = summarize_run(&series(&taus), 100, 0.25).unwrap();
        assert_eq!(s.steady_mean_tau, 50.0);
        assert_eq!(s.convergence_time, 100);
    }

    #[test]
    fn noisy_plateau_uses_sd_band() {
        // plateau alternating 90/110: mean 100, sd 10, band 20
        let mut taus = vec![500, 300, 125, 115];
        for i in 0..44 {
            taus.push(if i % 2 == 0 { 90 } else { 110 });
        }
        let s = summarize_run(&series(&taus), 10, 0.25).unwrap();
        assert_eq!(s.steady_mean_tau, 100.0);
        assert!((s.steady_sd_tau - 10.0).abs() < 1e-9);
        assert_eq!(s.convergence_time, 30);
    }

    #[test]
    fn summary_input_validation() {
        assert!(matches!(
            summarize_run(&series(&[1; 7]), 10, 0.25),
            Err(MetricsError::TooFewSamples { .. })
        ));
        assert!(summarize_run(&series(&[1; 8]), 10, 0.0).is_err());
        assert!(summarize_run(&series(&[1; 8]), 10, 1.0).is_err());
    }

    #[test]
    fn good_swap_fraction_signals_undefined() {
        assert_eq!(
            good_swap_fraction(&series(&[0; 8])),
            Err(MetricsError::NoBadSwaps)
        );
        let mut s = series(&[0; 8]);
        s[7].good_cum = 3;
        s[7].bad_cum = 4;
        assert_eq!(good_swap_fraction(&s), Ok(0.75));
        assert_eq!(good_swap_fraction_between(&s[0], &s[7]), Ok(0.75));
    }
}

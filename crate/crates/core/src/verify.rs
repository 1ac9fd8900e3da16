//! Independent cross-checks of the simulator: the incremental distance
//! against two recounts, and the stepwise sorters against straight-line
//! classical implementations.

use std::fmt;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::adversaries::Adversary;
use crate::algorithms::{AlgorithmKind, Sorter};
use crate::error::Result;
use crate::metrics::{brute_force_tau, merge_count_inversions};
use crate::model::{Model, StartConfig};
use crate::rng::{self, SimRng, Stream};

/// First operation at which the three distance computations disagreed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub n: usize,
    pub op: u64,
    pub tracked: u64,
    pub merge: u64,
    pub brute: u64,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "counterexample: seed={} n={} op={} tracked={} merge={} brute={}",
            self.seed, self.n, self.op, self.tracked, self.merge, self.brute
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub n: usize,
    pub ops: u64,
    /// Operations that were sorter steps rather than direct swaps.
    pub sorter_steps: u64,
    pub final_tau: u64,
    pub counterexample: Option<Counterexample>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "oracle ok: seed={} n={} ops={} sorter_steps={} final_tau={}",
                self.seed, self.n, self.ops, self.sorter_steps, self.final_tau
            ),
            Some(c) => write!(f, "oracle FAILED: {c}"),
        }
    }
}

/// Where to corrupt the tracker, to prove the check can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub at_op: u64,
    pub delta: i64,
}

/// Runs `ops` random operations on a shuffled list of `n` elements and
/// compares the tracked distance with a merge-sort recount and pair
/// enumeration after every one. Operations mix sorter steps, uniform and
/// hot-spot mutations, and direct adjacent and long swaps of the working
/// list. A sorter assumes it alone rearranges the list, so every direct
/// swap hands over to a fresh sorter of the next kind.
pub fn oracle_check(n: usize, ops: u64, seed: u64, fault: Option<Fault>) -> Result<OracleReport> {
    let mut model = Model::with_start(
        StartConfig::Shuffled,
        n,
        &mut rng::stream(seed, Stream::Shuffle),
    )?;
    let mut algo_rng = rng::stream(seed, Stream::Algorithm);
    let mut rng = rng::stream(seed, Stream::Adversary);
    let mut kinds = AlgorithmKind::ALL.into_iter().cycle();
    let mut fresh = |model: &mut Model, rng: &mut SimRng| {
        Sorter::new(
            kinds.next().expect("cycle"),
            model,
            SimRng::seed_from_u64(rng.gen()),
        )
    };
    let mut sorter = fresh(&mut model, &mut algo_rng)?;
    let mut sorter_steps = 0;
    for op in 1..=ops {
        match rng.gen_range(0..6) {
            0..=2 => {
                sorter.step(&mut model)?;
                sorter_steps += 1;
            }
            3 => {
                Adversary::Uniform {
                    r: rng.gen_range(1..4),
                }
                .mutate(&mut model, &mut rng);
            }
            4 => {
                Adversary::Hotspot.mutate(&mut model, &mut rng);
            }
            _ => {
                if rng.gen_bool(0.5) {
                    model.swap_adjacent_working(rng.gen_range(0..n - 1))?;
                } else {
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..n);
                    model.swap_working(i, j)?;
                }
                sorter = fresh(&mut model, &mut algo_rng)?;
            }
        }
        if let Some(f) = fault.filter(|f| f.at_op == op) {
            model.corrupt_tracker_for_testing(f.delta);
        }
        let tracked = model.tau();
        let merge = merge_count_inversions(&model.rank_sequence());
        let brute = brute_force_tau(model.working(), model.truth())?;
        if tracked != merge || merge != brute {
            return Ok(OracleReport {
                seed,
                n,
                ops: op,
                sorter_steps,
                final_tau: tracked,
                counterexample: Some(Counterexample {
                    seed,
                    n,
                    op,
                    tracked,
                    merge,
                    brute,
                }),
            });
        }
    }
    Ok(OracleReport {
        seed,
        n,
        ops,
        sorter_steps,
        final_tau: model.tau(),
        counterexample: None,
    })
}

/// Sorted copy and comparison count of one classical round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalRun {
    pub output: Vec<u32>,
    pub comparisons: u64,
}

/// Counts comparisons of distinct values.
struct Counter(u64);

impl Counter {
    fn less(&mut self, a: u32, b: u32) -> bool {
        self.0 += 1;
        a < b
    }
}

/// `n - 1` full left-to-right passes.
pub fn classical_bubble(values: &[u32]) -> ClassicalRun {
    let mut a = values.to_vec();
    let mut c = Counter(0);
    let n = a.len();
    for _ in 0..n - 1 {
        for i in 0..n - 1 {
            if !c.less(a[i], a[i + 1]) {
                a.swap(i, i + 1);
            }
        }
    }
    ClassicalRun {
        output: a,
        comparisons: c.0,
    }
}

/// `floor(n / 2)` forward and backward passes; each backward pass begins
/// on the pair the forward pass ended on.
pub fn classical_cocktail(values: &[u32]) -> ClassicalRun {
    let mut a = values.to_vec();
    let mut c = Counter(0);
    let n = a.len();
    for _ in 0..(n / 2).max(1) {
        for i in 0..n - 1 {
            if !c.less(a[i], a[i + 1]) {
                a.swap(i, i + 1);
            }
        }
        for i in (0..n - 1).rev() {
            if !c.less(a[i], a[i + 1]) {
                a.swap(i, i + 1);
            }
        }
    }
    ClassicalRun {
        output: a,
        comparisons: c.0,
    }
}

pub fn classical_insertion(values: &[u32]) -> ClassicalRun {
    let mut a = values.to_vec();
    let mut c = Counter(0);
    for i in 1..a.len() {
        let mut k = i;
        while k > 0 && c.less(a[k], a[k - 1]) {
            a.swap(k, k - 1);
            k -= 1;
        }
    }
    ClassicalRun {
        output: a,
        comparisons: c.0,
    }
}

/// Recursive randomized quicksort: uniform pivot swapped to the end,
/// Lomuto partition, smaller side first.
pub fn classical_quicksort(values: &[u32], rng: &mut SimRng) -> ClassicalRun {
    fn sort(a: &mut [u32], lo: usize, hi: usize, rng: &mut SimRng, c: &mut Counter) {
        let at = rng.gen_range(lo..=hi);
        a.swap(at, hi);
        let pivot = a[hi];
        let mut boundary = lo;
        for scan in lo..hi {
            if c.less(a[scan], pivot) {
                a.swap(boundary, scan);
                boundary += 1;
            }
        }
        a.swap(boundary, hi);
        let left = (lo, boundary.saturating_sub(1));
        let right = (boundary + 1, hi);
        let left_len = boundary - lo;
        let right_len = hi - boundary;
        let (first, second, first_len, second_len) = if left_len <= right_len {
            (left, right, left_len, right_len)
        } else {
            (right, left, right_len, left_len)
        };
        if first_len >= 2 {
            sort(a, first.0, first.1, rng, c);
        }
        if second_len >= 2 {
            sort(a, second.0, second.1, rng, c);
        }
    }
    let mut a = values.to_vec();
    let mut c = Counter(0);
    let n = a.len();
    sort(&mut a, 0, n - 1, rng, &mut c);
    ClassicalRun {
        output: a,
        comparisons: c.0,
    }
}

/// Outcome of one frozen-adversary comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrozenReport {
    pub algorithm: AlgorithmKind,
    pub n: usize,
    pub seed: u64,
    pub stepwise_comparisons: u64,
    pub classical_comparisons: u64,
    /// Distance when the stepwise sorter completed its first round.
    pub round_end_tau: u64,
    pub classical_sorted: bool,
}

impl FrozenReport {
    pub fn passed(&self) -> bool {
        self.round_end_tau == 0
            && self.classical_sorted
            && self.stepwise_comparisons == self.classical_comparisons
    }
}

impl fmt::Display for FrozenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "frozen {} n={} seed={}: stepwise={} classical={} round_end_tau={} {}",
            self.algorithm,
            self.n,
            self.seed,
            self.stepwise_comparisons,
            self.classical_comparisons,
            self.round_end_tau,
            if self.passed() { "ok" } else { "MISMATCH" }
        )
    }
}

/// Runs the first round of `kind` on a shuffled list with no adversary and
/// compares it with the classical implementation on the same seed.
///
/// Block sort's whole-list quicksort alternates with block steps and ends
/// its round on its own step, so `g` whole-list comparisons take `2g - 1`
/// steps; the hybrid's first round is a quicksort round.
pub fn frozen_equivalence(kind: AlgorithmKind, n: usize, seed: u64) -> Result<FrozenReport> {
    let mut model = Model::with_start(
        StartConfig::Shuffled,
        n,
        &mut rng::stream(seed, Stream::Shuffle),
    )?;
    let initial = model.rank_sequence();
    let mut sorter = Sorter::new(kind, &mut model, rng::stream(seed, Stream::Algorithm))?;
    while sorter.round_completed() == 0 {
        sorter.step(&mut model)?;
    }
    let mut pivots = rng::stream(seed, Stream::Algorithm);
    let (classical, stepwise) = match kind {
        AlgorithmKind::Bubble => (classical_bubble(&initial), sorter.comparisons()),
        AlgorithmKind::Cocktail => (classical_cocktail(&initial), sorter.comparisons()),
        AlgorithmKind::Insertion => (classical_insertion(&initial), sorter.comparisons()),
        AlgorithmKind::Quicksort | AlgorithmKind::Hybrid => (
            classical_quicksort(&initial, &mut pivots),
            sorter.comparisons(),
        ),
        AlgorithmKind::Blocksort => {
            // the block machines' generator is split off first
            let _: u64 = pivots.gen();
            (
                classical_quicksort(&initial, &mut pivots),
                sorter.comparisons().div_ceil(2),
            )
        }
    };
    let classical_sorted = classical.output.windows(2).all(|w| w[0] < w[1]);
    Ok(FrozenReport {
        algorithm: kind,
        n,
        seed,
        stepwise_comparisons: stepwise,
        classical_comparisons: classical.comparisons,
        round_end_tau: sorter.round_end_tau().unwrap_or(u64::MAX),
        classical_sorted,
    })
}

/// Oracle check followed by frozen-adversary checks of every algorithm,
/// one line per check.
pub fn transcript(n: usize, ops: u64, seed: u64) -> Result<(bool, Vec<String>)> {
    let mut lines = Vec::new();
    let oracle = oracle_check(n, ops, seed, None)?;
    let mut ok = oracle.passed();
    lines.push(oracle.to_string());
    for kind in AlgorithmKind::ALL {
        let report = frozen_equivalence(kind, n, seed)?;
        ok &= report.passed();
        lines.push(report.to_string());
    }
    let probe = oracle_check(
        n.min(16),
        50,
        seed,
        Some(Fault {
            at_op: 25,
            delta: 1,
        }),
    )?;
    match probe.counterexample {
        Some(c) if c.op == 25 => lines.push(format!("fault injection detected: {c}")),
        _ => {
            ok = false;
            lines.push("fault injection NOT detected".into());
        }
    }
    Ok((ok, lines))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_sorts_sort() {
        let mut rng = SimRng::seed_from_u64(1);
        let mut v: Vec<u32> = (0..37).collect();
        rand::seq::SliceRandom::shuffle(&mut v[..], &mut rng);
        let sorted: Vec<u32> = (0..37).collect();
        assert_eq!(classical_bubble(&v).output, sorted);
        assert_eq!(classical_cocktail(&v).output, sorted);
        assert_eq!(classical_insertion(&v).output, sorted);
        assert_eq!(classical_quicksort(&v, &mut rng).output, sorted);
        assert_eq!(classical_bubble(&v).comparisons, 36 * 36);
        assert_eq!(classical_cocktail(&v).comparisons, 18 * 2 * 36);
    }

    #[test]
    fn oracle_passes_and_catches_faults() {
        let report = oracle_check(12, 2000, 5, None).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.sorter_steps > 0);
        let report = oracle_check(
            12,
            2000,
            5,
            Some(Fault {
                at_op: 700,
                delta: -1,
            }),
        )
        .unwrap();
        let c = report.counterexample.unwrap();
        assert_eq!((c.seed, c.op), (5, 700));
        assert_ne!(c.tracked, c.merge);
    }

    #[test]
    fn frozen_small() {
        for kind in AlgorithmKind::ALL {
            for n in [2, 3, 10, 33] {
                let r = frozen_equivalence(kind, n, 9).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
    }
}

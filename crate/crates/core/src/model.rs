//! The two orders of the evolving data model and the incremental Kendall tau
//! distance between them.
//!
//! Element ids are `0..n`. The hidden true order starts as the identity and
//! only ever changes by adjacent-rank swaps; the working list is what the
//! sorting algorithm owns. Both carry inverse maps, so an adjacent swap in
//! either structure updates the distance in O(1).

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::metrics::merge_count_inversions;

/// The hidden evolving total order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrueOrder {
    by_rank: Vec<u32>,
    rank_of: Vec<u32>,
}

impl TrueOrder {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<u32> = (0..n as u32).collect();
        Self {
            by_rank: ids.clone(),
            rank_of: ids,
        }
    }

    /// Builds a true order from its rank → element table.
    pub fn from_ranking(by_rank: Vec<u32>) -> Result<Self, ModelError> {
        let rank_of = invert(&by_rank)?;
        Ok(Self { by_rank, rank_of })
    }

    pub fn len(&self) -> usize {
        self.by_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_rank.is_empty()
    }

    #[inline]
    pub fn rank_of(&self, element: u32) -> u32 {
        self.rank_of[element as usize]
    }

    #[inline]
    pub fn element_at(&self, rank: usize) -> u32 {
        self.by_rank[rank]
    }

    pub fn by_rank(&self) -> &[u32] {
        &self.by_rank
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank_of
    }

    /// `true` iff `a` precedes `b`.
    pub fn precedes(&self, a: u32, b: u32) -> Result<bool, ModelError> {
        let n = self.len();
        if a as usize >= n || b as usize >= n {
            return Err(ModelError::ElementOutOfRange {
                element: a.max(b),
                n,
            });
        }
        if a == b {
            return Err(ModelError::SelfComparison(a));
        }
        Ok(self.rank_of[a as usize] < self.rank_of[b as usize])
    }

    fn swap_ranks(&mut self, k: usize) -> (u32, u32) {
        let x = self.by_rank[k];
        let y = self.by_rank[k + 1];
        self.by_rank.swap(k, k + 1);
        self.rank_of[x as usize] = (k + 1) as u32;
        self.rank_of[y as usize] = k as u32;
        (x, y)
    }
}

/// The list maintained by the sorting algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingList {
    by_pos: Vec<u32>,
    pos_of: Vec<u32>,
}

impl WorkingList {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<u32> = (0..n as u32).collect();
        Self {
            by_pos: ids.clone(),
            pos_of: ids,
        }
    }

    pub fn from_sequence(by_pos: Vec<u32>) -> Result<Self, ModelError> {
        let pos_of = invert(&by_pos)?;
        Ok(Self { by_pos, pos_of })
    }

    pub fn len(&self) -> usize {
        self.by_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_pos.is_empty()
    }

    #[inline]
    pub fn element_at(&self, pos: usize) -> u32 {
        self.by_pos[pos]
    }

    #[inline]
    pub fn position_of(&self, element: u32) -> u32 {
        self.pos_of[element as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.by_pos
    }

    /// Swaps two positions. A bare list keeps no distance, so this is O(1).
    pub fn swap(&mut self, i: usize, j: usize) -> Result<(), ModelError> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(ModelError::PositionOutOfRange { pos: i.max(j), n });
        }
        self.swap_positions(i, j);
        Ok(())
    }

    fn swap_positions(&mut self, i: usize, j: usize) {
        let x = self.by_pos[i];
        let y = self.by_pos[j];
        self.by_pos.swap(i, j);
        self.pos_of[x as usize] = j as u32;
        self.pos_of[y as usize] = i as u32;
    }
}

fn invert(perm: &[u32]) -> Result<Vec<u32>, ModelError> {
    let n = perm.len();
    let mut inverse = vec![u32::MAX; n];
    for (idx, &v) in perm.iter().enumerate() {
        if v as usize >= n || inverse[v as usize] != u32::MAX {
            return Err(ModelError::NotAPermutation);
        }
        inverse[v as usize] = idx as u32;
    }
    Ok(inverse)
}

/// Number of pairs ordered differently by the working list and the truth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TauTracker {
    distance: u64,
}

impl TauTracker {
    pub fn new(distance: u64) -> Self {
        Self { distance }
    }

    #[inline]
    pub fn distance(&self) -> u64 {
        self.distance
    }

    #[inline]
    fn step(&mut self, created_inversion: bool) {
        if created_inversion {
            self.distance += 1;
        } else {
            self.distance -= 1;
        }
    }
}

/// Comparisons performed so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimClock {
    t: u64,
}

impl SimClock {
    #[inline]
    pub fn now(&self) -> u64 {
        self.t
    }

    #[inline]
    pub fn tick(&mut self) {
        self.t += 1;
    }
}

/// Outcome of one adjacent swap in the true order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwapEffect {
    /// The swap removed an inversion.
    Good,
    /// The swap created an inversion.
    Bad,
}

/// Initial layout of the working list relative to the (identity) truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartConfig {
    Sorted,
    Shuffled,
    HalfCyclicShift,
    Reversed,
}

impl StartConfig {
    pub const ALL: [StartConfig; 4] = [
        StartConfig::Sorted,
        StartConfig::Shuffled,
        StartConfig::HalfCyclicShift,
        StartConfig::Reversed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StartConfig::Sorted => "sorted",
            StartConfig::Shuffled => "shuffled",
            StartConfig::HalfCyclicShift => "half-cyclic-shift",
            StartConfig::Reversed => "reversed",
        }
    }
}

impl std::fmt::Display for StartConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for StartConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "sorted" => Ok(StartConfig::Sorted),
            "shuffled" | "shuffle" | "random" => Ok(StartConfig::Shuffled),
            "half-cyclic-shift" | "shift" | "half-shift" => Ok(StartConfig::HalfCyclicShift),
            "reversed" | "reverse" => Ok(StartConfig::Reversed),
            other => Err(format!(
                "unknown start config `{other}` (expected sorted | shuffled | half-cyclic-shift | reversed)"
            )),
        }
    }
}

/// Working list, true order and the distance between them, kept consistent
/// across every mutation.
#[derive(Debug, Clone)]
pub struct Model {
    working: WorkingList,
    truth: TrueOrder,
    tau: TauTracker,
}

impl Model {
    /// Pairs a working list with a true order and counts the distance once.
    pub fn new(working: WorkingList, truth: TrueOrder) -> Result<Self, ModelError> {
        if working.len() != truth.len() {
            return Err(ModelError::LengthMismatch {
                working: working.len(),
                truth: truth.len(),
            });
        }
        if working.len() < 2 {
            return Err(ModelError::TooSmall(working.len()));
        }
        let tau = TauTracker::new(recount_tau(&working, &truth));
        Ok(Self {
            working,
            truth,
            tau,
        })
    }

    /// Builds the start configuration `kind` against an identity truth.
    /// Only `Shuffled` draws from `rng`.
    pub fn with_start<R: Rng + ?Sized>(
        kind: StartConfig,
        n: usize,
        rng: &mut R,
    ) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::TooSmall(n));
        }
        let mut seq: Vec<u32> = (0..n as u32).collect();
        match kind {
            StartConfig::Sorted => {}
            StartConfig::Shuffled => seq.shuffle(rng),
            StartConfig::HalfCyclicShift => seq.rotate_left(n / 2),
            StartConfig::Reversed => seq.reverse(),
        }
        Self::new(WorkingList::from_sequence(seq)?, TrueOrder::identity(n))
    }

    pub fn len(&self) -> usize {
        self.working.len()
    }

    pub fn is_empty(&self) -> bool {
        self.working.is_empty()
    }

    pub fn working(&self) -> &WorkingList {
        &self.working
    }

    pub fn truth(&self) -> &TrueOrder {
        &self.truth
    }

    #[inline]
    pub fn tau(&self) -> u64 {
        self.tau.distance()
    }

    pub fn tracker(&self) -> TauTracker {
        self.tau
    }

    /// Truthful comparison of two elements: `true` iff `a` precedes `b`.
    pub fn compare_true(&self, a: u32, b: u32) -> Result<bool, ModelError> {
        self.truth.precedes(a, b)
    }

    /// Compares the elements currently at positions `i` and `j` of the
    /// working list: `true` iff the one at `i` precedes the one at `j`.
    #[inline]
    pub fn compare_positions(&self, i: usize, j: usize) -> Result<bool, ModelError> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(ModelError::PositionOutOfRange { pos: i.max(j), n });
        }
        self.truth
            .precedes(self.working.element_at(i), self.working.element_at(j))
    }

    /// Swaps positions `p` and `p + 1` of the working list.
    #[inline]
    pub fn swap_adjacent_working(&mut self, p: usize) -> Result<(), ModelError> {
        let n = self.len();
        if p + 1 >= n {
            return Err(ModelError::PositionOutOfRange { pos: p, n });
        }
        let x = self.working.element_at(p);
        let y = self.working.element_at(p + 1);
        // x before y is correct before the swap iff x precedes y in truth.
        let was_correct = self.truth.rank_of(x) < self.truth.rank_of(y);
        self.working.swap_positions(p, p + 1);
        self.tau.step(was_correct);
        Ok(())
    }

    /// Swaps two arbitrary positions of the working list. The distance
    /// update scans the elements strictly between `i` and `j`.
    pub fn swap_working(&mut self, i: usize, j: usize) -> Result<(), ModelError> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(ModelError::PositionOutOfRange { pos: i.max(j), n });
        }
        if i == j {
            return Ok(());
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        if hi == lo + 1 {
            return self.swap_adjacent_working(lo);
        }
        let a = self.truth.rank_of(self.working.element_at(lo));
        let b = self.truth.rank_of(self.working.element_at(hi));
        let (min, max) = if a < b { (a, b) } else { (b, a) };
        let between = self.working.by_pos[lo + 1..hi]
            .iter()
            .filter(|&&e| {
                let r = self.truth.rank_of(e);
                r > min && r < max
            })
            .count() as u64;
        let delta = 1 + 2 * between;
        if a < b {
            self.tau.distance += delta;
        } else {
            self.tau.distance -= delta;
        }
        self.working.swap_positions(lo, hi);
        Ok(())
    }

    /// Replaces the whole working list and recounts the distance.
    pub fn replace_working(&mut self, working: WorkingList) -> Result<(), ModelError> {
        if working.len() != self.len() {
            return Err(ModelError::LengthMismatch {
                working: working.len(),
                truth: self.len(),
            });
        }
        self.tau = TauTracker::new(recount_tau(&working, &self.truth));
        self.working = working;
        Ok(())
    }

    /// Swaps the elements of true ranks `k` and `k + 1`.
    #[inline]
    pub fn swap_adjacent_true(&mut self, k: usize) -> Result<SwapEffect, ModelError> {
        let n = self.len();
        if k + 1 >= n {
            return Err(ModelError::RankOutOfRange { rank: k, n });
        }
        let (x, y) = self.truth.swap_ranks(k);
        // x preceded y; the pair was agreeing iff x sits before y in the list.
        let was_correct = self.working.position_of(x) < self.working.position_of(y);
        self.tau.step(was_correct);
        Ok(if was_correct {
            SwapEffect::Bad
        } else {
            SwapEffect::Good
        })
    }

    /// Exact O(n log n) recount, independent of the tracker.
    pub fn recount_tau(&self) -> u64 {
        recount_tau(&self.working, &self.truth)
    }

    /// Sequence of true ranks read in working-list order.
    pub fn rank_sequence(&self) -> Vec<u32> {
        self.working
            .as_slice()
            .iter()
            .map(|&e| self.truth.rank_of(e))
            .collect()
    }

    /// Checks that both structures are permutations with matching inverses.
    pub fn check_consistency(&self) -> Result<(), ModelError> {
        let n = self.len();
        for pos in 0..n {
            let e = self.working.by_pos[pos];
            if e as usize >= n || self.working.pos_of[e as usize] as usize != pos {
                return Err(ModelError::NotAPermutation);
            }
            let e = self.truth.by_rank[pos];
            if e as usize >= n || self.truth.rank_of[e as usize] as usize != pos {
                return Err(ModelError::NotAPermutation);
            }
        }
        Ok(())
    }

    #[doc(hidden)]
    pub fn corrupt_tracker_for_testing(&mut self, delta: i64) {
        self.tau.distance = self.tau.distance.wrapping_add_signed(delta);
    }
}

/// Inversion count of `(rank_of[by_pos[0]], ..., rank_of[by_pos[n-1]])`.
pub fn recount_tau(list: &WorkingList, order: &TrueOrder) -> u64 {
    let ranks: Vec<u32> = list.as_slice().iter().map(|&e| order.rank_of(e)).collect();
    merge_count_inversions(&ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::brute_force_inversions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(list: Vec<u32>, truth: Vec<u32>) -> Model {
        Model::new(
            WorkingList::from_sequence(list).unwrap(),
            TrueOrder::from_ranking(truth).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn compare_true_examples() {
        let id = TrueOrder::identity(3);
        assert!(id.precedes(0, 1).unwrap());
        assert!(!id.precedes(1, 0).unwrap());
        let order = TrueOrder::from_ranking(vec![2, 0, 1]).unwrap();
        // element 0 has rank 1, element 2 has rank 0
        assert!(!order.precedes(0, 2).unwrap());
    }

    #[test]
    fn compare_true_rejects_bad_ids() {
        let id = TrueOrder::identity(3);
        assert_eq!(id.precedes(1, 1), Err(ModelError::SelfComparison(1)));
        assert!(matches!(
            id.precedes(0, 3),
            Err(ModelError::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn working_swap_on_agreeing_orders_creates_inversion() {
        let mut m = model((0..5).collect(), (0..5).collect());
        assert_eq!(m.tau(), 0);
        m.swap_adjacent_working(0).unwrap();
        assert_eq!(m.tau(), 1);
    }

    #[test]
    fn working_swap_fixes_only_inversion() {
        let mut m = model(vec![1, 0, 2, 3], (0..4).collect());
        assert_eq!(m.tau(), 1);
        m.swap_adjacent_working(0).unwrap();
        assert_eq!(m.tau(), 0);
    }

    #[test]
    fn swap_out_of_range_is_rejected() {
        let mut m = model((0..4).collect(), (0..4).collect());
        assert!(m.swap_adjacent_working(3).is_err());
        assert!(m.swap_adjacent_true(3).is_err());
        assert!(m.swap_working(0, 4).is_err());
    }

    #[test]
    fn true_swap_classification() {
        let mut m = model((0..6).collect(), (0..6).collect());
        assert_eq!(m.swap_adjacent_true(3).unwrap(), SwapEffect::Bad);
        assert_eq!(m.tau(), 1);

        let mut m = model((0..6).collect(), (0..6).rev().collect());
        for k in 0..5 {
            let before = m.tau();
            assert_eq!(m.swap_adjacent_true(k).unwrap(), SwapEffect::Good);
            assert_eq!(m.tau(), before - 1);
            m.swap_adjacent_true(k).unwrap();
        }
    }

    #[test]
    fn random_instances_match_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut list: Vec<u32> = (0..8).collect();
            let mut truth: Vec<u32> = (0..8).collect();
            list.shuffle(&mut rng);
            truth.shuffle(&mut rng);
            let mut m = model(list, truth);
            let p = rng.gen_range(0..7);
            let before = m.tau();
            m.swap_adjacent_working(p).unwrap();
            assert_eq!(m.tau(), brute_force_inversions(&m.rank_sequence()));
            assert_eq!(m.tau().abs_diff(before), 1);

            let k = rng.gen_range(0..7);
            let before = m.tau();
            let effect = m.swap_adjacent_true(k).unwrap();
            let after = brute_force_inversions(&m.rank_sequence());
            assert_eq!(m.tau(), after);
            assert_eq!(effect == SwapEffect::Good, after < before);
        }
    }

    #[test]
    fn long_swaps_match_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut m = Model::with_start(StartConfig::Shuffled, 40, &mut rng).unwrap();
        for _ in 0..2000 {
            let i = rng.gen_range(0..40);
            let j = rng.gen_range(0..40);
            m.swap_working(i, j).unwrap();
            assert_eq!(m.tau(), m.recount_tau());
        }
        m.check_consistency().unwrap();
    }

    #[test]
    fn start_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            Model::with_start(StartConfig::Sorted, 5, &mut rng)
                .unwrap()
                .tau(),
            0
        );
        assert_eq!(
            Model::with_start(StartConfig::Reversed, 5, &mut rng)
                .unwrap()
                .tau(),
            10
        );
        let shifted = Model::with_start(StartConfig::HalfCyclicShift, 6, &mut rng).unwrap();
        assert_eq!(shifted.working().as_slice(), &[3, 4, 5, 0, 1, 2]);
        assert_eq!(shifted.tau(), 9);
        assert!(matches!(
            Model::with_start(StartConfig::Sorted, 1, &mut rng),
            Err(ModelError::TooSmall(1))
        ));
    }

    #[test]
    fn reversed_thousand_has_max_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = Model::with_start(StartConfig::Reversed, 1000, &mut rng).unwrap();
        assert_eq!(m.recount_tau(), 499_500);
    }

    #[test]
    fn clock_ticks_by_one() {
        let mut c = SimClock::default();
        c.tick();
        c.tick();
        assert_eq!(c.now(), 2);
    }
}

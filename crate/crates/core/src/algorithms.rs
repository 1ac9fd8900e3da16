//! Classical sorting algorithms as resumable state machines.
//!
//! Each machine answers [`Sorter::next_query`] with the pair of positions the
//! classical algorithm would compare next, and [`Sorter::apply_result`]
//! consumes the truthful answer, updates the working list and advances to
//! the following comparison. Rounds repeat forever.
//!
//! A query `(i, j)` is answered with `true` iff the element at position `i`
//! precedes the element at position `j` in the true order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, WorkingList};
use crate::rng::SimRng;

/// Positions to compare: answered `true` iff `.0` precedes `.1`.
pub type Query = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Bubble,
    Cocktail,
    Insertion,
    Quicksort,
    Blocksort,
    Hybrid,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::Bubble,
        AlgorithmKind::Cocktail,
        AlgorithmKind::Insertion,
        AlgorithmKind::Quicksort,
        AlgorithmKind::Blocksort,
        AlgorithmKind::Hybrid,
    ];

    /// The five algorithms of the main comparison, in table order.
    pub const MAIN_SET: [AlgorithmKind; 5] = [
        AlgorithmKind::Insertion,
        AlgorithmKind::Cocktail,
        AlgorithmKind::Bubble,
        AlgorithmKind::Quicksort,
        AlgorithmKind::Blocksort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Bubble => "bubble",
            AlgorithmKind::Cocktail => "cocktail",
            AlgorithmKind::Insertion => "insertion",
            AlgorithmKind::Quicksort => "quicksort",
            AlgorithmKind::Blocksort => "blocksort",
            AlgorithmKind::Hybrid => "hybrid",
        }
    }

    /// Bubble, cocktail and insertion: adjacent compare-and-swap only.
    pub fn is_quadratic(self) -> bool {
        matches!(
            self,
            AlgorithmKind::Bubble | AlgorithmKind::Cocktail | AlgorithmKind::Insertion
        )
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| {
                format!(
                    "unknown algorithm `{s}` (expected bubble | cocktail | insertion | quicksort | blocksort | hybrid)"
                )
            })
    }
}

#[derive(Debug, Clone)]
struct BubbleMachine {
    n: usize,
    pass: usize,
    i: usize,
}

impl BubbleMachine {
    fn new(n: usize) -> Self {
        Self { n, pass: 0, i: 0 }
    }

    fn query(&self) -> Query {
        (self.i, self.i + 1)
    }

    fn apply(&mut self, in_order: bool, model: &mut Model) -> Result<bool> {
        if !in_order {
            model.swap_adjacent_working(self.i)?;
        }
        self.i += 1;
        if self.i + 1 < self.n {
            return Ok(false);
        }
        self.i = 0;
        self.pass += 1;
        if self.pass < self.n - 1 {
            return Ok(false);
        }
        self.pass = 0;
        Ok(true)
    }
}

/// Forward pass then backward pass, `floor(n / 2)` times per round.
#[derive(Debug, Clone)]
struct CocktailMachine {
    n: usize,
    rep: usize,
    forward: bool,
    i: usize,
}

impl CocktailMachine {
    fn new(n: usize) -> Self {
        Self {
            n,
            rep: 0,
            forward: true,
            i: 0,
        }
    }

    fn reps_per_round(&self) -> usize {
        (self.n / 2).max(1)
    }

    fn query(&self) -> Query {
        (self.i, self.i + 1)
    }

    fn apply(&mut self, in_order: bool, model: &mut Model) -> Result<bool> {
        if !in_order {
            model.swap_adjacent_working(self.i)?;
        }
        if self.forward {
            if self.i + 2 < self.n {
                self.i += 1;
            } else {
                // the backward pass starts at the same last pair
                self.forward = false;
            }
            return Ok(false);
        }
        if self.i > 0 {
            self.i -= 1;
            return Ok(false);
        }
        self.forward = true;
        self.rep += 1;
        if self.rep < self.reps_per_round() {
            return Ok(false);
        }
        self.rep = 0;
        Ok(true)
    }
}

#[derive(Debug, Clone)]
struct InsertionMachine {
    n: usize,
    /// Outer index: the element being inserted started here.
    outer: usize,
    /// Current position of the element being inserted.
    k: usize,
}

impl InsertionMachine {
    fn new(n: usize) -> Self {
        Self { n, outer: 1, k: 1 }
    }

    fn query(&self) -> Query {
        (self.k, self.k - 1)
    }

    fn apply(&mut self, x_precedes_pred: bool, model: &mut Model) -> Result<bool> {
        if x_precedes_pred {
            model.swap_adjacent_working(self.k - 1)?;
            self.k -= 1;
            if self.k > 0 {
                return Ok(false);
            }
        }
        self.outer += 1;
        let done = self.outer == self.n;
        if done {
            self.outer = 1;
        }
        self.k = self.outer;
        Ok(done)
    }
}

/// A list a quicksort machine can rearrange: the tracked model itself, or a
/// private copy of its working list.
trait Arrangement {
    fn element_at(&self, pos: usize) -> u32;
    fn position_of(&self, element: u32) -> usize;
    fn swap(&mut self, i: usize, j: usize) -> Result<()>;
}

impl Arrangement for Model {
    #[inline]
    fn element_at(&self, pos: usize) -> u32 {
        self.working().element_at(pos)
    }

    #[inline]
    fn position_of(&self, element: u32) -> usize {
        self.working().position_of(element) as usize
    }

    fn swap(&mut self, i: usize, j: usize) -> Result<()> {
        Ok(self.swap_working(i, j)?)
    }
}

impl Arrangement for WorkingList {
    #[inline]
    fn element_at(&self, pos: usize) -> u32 {
        WorkingList::element_at(self, pos)
    }

    #[inline]
    fn position_of(&self, element: u32) -> usize {
        WorkingList::position_of(self, element) as usize
    }

    fn swap(&mut self, i: usize, j: usize) -> Result<()> {
        Ok(WorkingList::swap(self, i, j)?)
    }
}

#[derive(Debug, Clone, Copy)]
struct Partition {
    lo: usize,
    hi: usize,
    /// Pivot element, tracked by identity: block sort runs several machines
    /// over the same list, and another machine may move it.
    pivot: u32,
    /// Positions `lo..boundary` hold elements that preceded the pivot.
    boundary: usize,
    scan: usize,
}

/// Randomized in-place quicksort over `lo..=hi` with an explicit stack.
///
/// Lomuto partition: the drawn pivot is parked at `hi`, the scan swaps every
/// element that precedes it down to the boundary, and the pivot is finally
/// swapped onto the boundary. The smaller side is processed first. When a
/// round completes the machine stops until its owner calls
/// [`QuickMachine::restart`].
#[derive(Debug, Clone)]
struct QuickMachine {
    lo: usize,
    hi: usize,
    stack: Vec<(usize, usize)>,
    current: Partition,
}

impl QuickMachine {
    fn new<A: Arrangement>(lo: usize, hi: usize, list: &mut A, rng: &mut SimRng) -> Result<Self> {
        debug_assert!(hi > lo);
        let current = Self::begin(lo, hi, list, rng)?;
        Ok(Self {
            lo,
            hi,
            stack: Vec::new(),
            current,
        })
    }

    fn begin<A: Arrangement>(
        lo: usize,
        hi: usize,
        list: &mut A,
        rng: &mut SimRng,
    ) -> Result<Partition> {
        let at = rng.gen_range(lo..=hi);
        let pivot = list.element_at(at);
        list.swap(at, hi)?;
        Ok(Partition {
            lo,
            hi,
            pivot,
            boundary: lo,
            scan: lo,
        })
    }

    /// Begins the next round over the full range.
    fn restart<A: Arrangement>(&mut self, list: &mut A, rng: &mut SimRng) -> Result<()> {
        self.current = Self::begin(self.lo, self.hi, list, rng)?;
        Ok(())
    }

    fn query<A: Arrangement>(&self, list: &A) -> Query {
        (self.current.scan, list.position_of(self.current.pivot))
    }

    fn apply<A: Arrangement>(
        &mut self,
        precedes_pivot: bool,
        list: &mut A,
        rng: &mut SimRng,
    ) -> Result<Settled> {
        let p = &mut self.current;
        if precedes_pivot {
            if p.boundary != p.scan {
                list.swap(p.boundary, p.scan)?;
            }
            p.boundary += 1;
        }
        p.scan += 1;
        self.settle(list, rng)
    }

    /// Moves the scan past the pivot's slot and closes finished partitions
    /// until a comparison is pending or the round is over.
    fn settle<A: Arrangement>(&mut self, list: &mut A, rng: &mut SimRng) -> Result<Settled> {
        let mut settled = Settled::default();
        loop {
            if self.current.scan == list.position_of(self.current.pivot) {
                self.current.scan += 1;
                continue;
            }
            if self.current.scan <= self.current.hi {
                return Ok(settled);
            }
            settled.closed = true;
            if self.close(list, rng)? {
                settled.round_done = true;
                return Ok(settled);
            }
        }
    }

    /// Places the pivot, schedules both sides and begins the next
    /// partition. Returns `true` when the round is over instead.
    fn close<A: Arrangement>(&mut self, list: &mut A, rng: &mut SimRng) -> Result<bool> {
        let Partition {
            lo, hi, boundary, ..
        } = self.current;
        let at = list.position_of(self.current.pivot);
        // another machine may have carried the pivot out of the open part
        if (boundary..=hi).contains(&at) {
            list.swap(boundary, at)?;
        }
        let left = (lo, boundary.wrapping_sub(1));
        let right = (boundary + 1, hi);
        let len = |(a, b): (usize, usize)| {
            if b != usize::MAX && b > a {
                b - a + 1
            } else {
                0
            }
        };
        let (first, second) = if len(left) <= len(right) {
            (left, right)
        } else {
            (right, left)
        };
        for range in [second, first] {
            if len(range) >= 2 {
                self.stack.push(range);
            }
        }
        match self.stack.pop() {
            Some((a, b)) => {
                self.current = Self::begin(a, b, list, rng)?;
                Ok(false)
            }
            None => Ok(true),
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Settled {
    round_done: bool,
    closed: bool,
}

/// Block size for block sort on `n` elements: the first even number above
/// `10 ln n` dividing `n`, searched up to `100 ln n`; otherwise the first
/// even number above `10 ln n`.
pub fn block_size(n: usize) -> usize {
    let ln = (n as f64).ln();
    let floor = 10.0 * ln;
    let mut first = floor.floor() as usize + 1;
    if first % 2 == 1 {
        first += 1;
    }
    let mut b = first;
    while (b as f64) <= 100.0 * ln {
        if n.is_multiple_of(b) {
            return b;
        }
        b += 2;
    }
    first
}

/// Overlapping block layout used by block sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSchedule {
    pub block_size: usize,
    /// Half-open position ranges, overlapping by half a block.
    pub blocks: Vec<(usize, usize)>,
}

impl BlockSchedule {
    pub fn new(n: usize) -> Self {
        let b = block_size(n);
        if b >= n {
            return Self {
                block_size: b,
                blocks: vec![(0, n)],
            };
        }
        let step = b / 2;
        let mut blocks = Vec::new();
        let mut start = 0;
        loop {
            let end = (start + b).min(n);
            blocks.push((start, end));
            if end == n {
                break;
            }
            start += step;
        }
        Self {
            block_size: b,
            blocks,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Global,
    Local,
}

/// Per-comparison alternation between a quicksort of the whole list and a
/// round-robin of quicksorts on the overlapping blocks.
///
/// The block quicksorts rearrange the list in place. The whole-list
/// quicksort partitions a private copy taken when its round begins and
/// writes the copy back when the round completes, so the block machines
/// cannot break its partition invariants mid-round.
#[derive(Debug, Clone)]
struct BlockMachine {
    global: QuickMachine,
    snapshot: WorkingList,
    locals: Vec<QuickMachine>,
    /// Pivot draws of the block machines, split off the sorter's generator
    /// so the whole-list quicksort draws exactly as a lone quicksort would.
    local_rng: SimRng,
    schedule: BlockSchedule,
    phase: Phase,
    cursor: usize,
}

impl BlockMachine {
    fn new(model: &mut Model, rng: &mut SimRng) -> Result<Self> {
        let n = model.len();
        let schedule = BlockSchedule::new(n);
        let mut local_rng = SimRng::seed_from_u64(rng.gen());
        let mut snapshot = model.working().clone();
        let global = QuickMachine::new(0, n - 1, &mut snapshot, rng)?;
        let mut locals = Vec::with_capacity(schedule.blocks.len());
        for &(a, b) in schedule.blocks.iter().filter(|(a, b)| b - a >= 2) {
            locals.push(QuickMachine::new(a, b - 1, model, &mut local_rng)?);
        }
        let mut machine = Self {
            global,
            snapshot,
            locals,
            local_rng,
            schedule,
            phase: Phase::Global,
            cursor: 0,
        };
        machine.settle_locals(model)?;
        Ok(machine)
    }

    fn query(&self, model: &Model) -> Query {
        match self.phase {
            Phase::Global => {
                let (i, j) = self.global.query(&self.snapshot);
                let at = |p| model.working().position_of(self.snapshot.element_at(p)) as usize;
                (at(i), at(j))
            }
            Phase::Local => self.locals[self.cursor].query(model),
        }
    }

    /// Returns `true` when a whole-list round completed; the list then
    /// equals the copy that round sorted.
    fn apply(&mut self, result: bool, model: &mut Model, rng: &mut SimRng) -> Result<bool> {
        let mut round_done = false;
        match self.phase {
            Phase::Global => {
                self.phase = Phase::Local;
                if self
                    .global
                    .apply(result, &mut self.snapshot, rng)?
                    .round_done
                {
                    model.replace_working(self.snapshot.clone())?;
                    round_done = true;
                }
            }
            Phase::Local => {
                self.locals[self.cursor].apply(result, model, &mut self.local_rng)?;
                self.cursor = (self.cursor + 1) % self.locals.len();
                self.phase = Phase::Global;
            }
        }
        self.settle_locals(model)?;
        if round_done {
            self.snapshot = model.working().clone();
            self.global.restart(&mut self.snapshot, rng)?;
            self.global.settle(&mut self.snapshot, rng)?;
        }
        Ok(round_done)
    }

    /// Re-settles every block machine after the list changed, until none
    /// closes a partition. Block rounds restart immediately.
    fn settle_locals(&mut self, model: &mut Model) -> Result<()> {
        loop {
            let mut closed = false;
            for local in &mut self.locals {
                let settled = local.settle(model, &mut self.local_rng)?;
                if settled.round_done {
                    local.restart(model, &mut self.local_rng)?;
                }
                closed |= settled.closed;
            }
            if !closed {
                return Ok(());
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Machine {
    Bubble(BubbleMachine),
    Cocktail(CocktailMachine),
    Insertion(InsertionMachine),
    Quick(QuickMachine),
    Block(Box<BlockMachine>),
}

/// One evolving sorting algorithm: endless rounds of a classical sort.
#[derive(Debug, Clone)]
pub struct Sorter {
    kind: AlgorithmKind,
    n: usize,
    machine: Machine,
    rng: SimRng,
    rounds: u64,
    comparisons: u64,
    outstanding: bool,
    round_end_tau: Option<u64>,
}

impl Sorter {
    /// Fresh machine over `model`. Quicksort kinds draw their first pivot
    /// and park it immediately. Pivot draws consume `rng` only.
    pub fn new(kind: AlgorithmKind, model: &mut Model, mut rng: SimRng) -> Result<Self> {
        let n = model.len();
        let machine = match kind {
            AlgorithmKind::Bubble => Machine::Bubble(BubbleMachine::new(n)),
            AlgorithmKind::Cocktail => Machine::Cocktail(CocktailMachine::new(n)),
            AlgorithmKind::Insertion => Machine::Insertion(InsertionMachine::new(n)),
            AlgorithmKind::Quicksort | AlgorithmKind::Hybrid => {
                Machine::Quick(QuickMachine::new(0, n - 1, model, &mut rng)?)
            }
            AlgorithmKind::Blocksort => {
                Machine::Block(Box::new(BlockMachine::new(model, &mut rng)?))
            }
        };
        Ok(Self {
            kind,
            n,
            machine,
            rng,
            rounds: 0,
            comparisons: 0,
            outstanding: false,
            round_end_tau: None,
        })
    }

    pub fn kind(&self) -> AlgorithmKind {
        self.kind
    }

    /// Positions the classical algorithm compares next. Reads the list but
    /// never changes it.
    pub fn next_query(&mut self, model: &Model) -> Query {
        self.outstanding = true;
        self.peek_query(model)
    }

    /// Same as [`Sorter::next_query`] without marking the query outstanding.
    pub fn peek_query(&self, model: &Model) -> Query {
        match &self.machine {
            Machine::Bubble(m) => m.query(),
            Machine::Cocktail(m) => m.query(),
            Machine::Insertion(m) => m.query(),
            Machine::Quick(m) => m.query(model),
            Machine::Block(m) => m.query(model),
        }
    }

    /// Consumes the answer to the outstanding query.
    pub fn apply_result(&mut self, result: bool, model: &mut Model) -> Result<()> {
        if !self.outstanding {
            return Err(Error::NoOutstandingQuery);
        }
        self.outstanding = false;
        self.comparisons += 1;
        let finished = match &mut self.machine {
            Machine::Bubble(m) => m.apply(result, model)?,
            Machine::Cocktail(m) => m.apply(result, model)?,
            Machine::Insertion(m) => m.apply(result, model)?,
            Machine::Quick(m) => m.apply(result, model, &mut self.rng)?.round_done,
            Machine::Block(m) => m.apply(result, model, &mut self.rng)?,
        };
        if !finished {
            return Ok(());
        }
        self.rounds += 1;
        self.round_end_tau = Some(model.tau());
        if let Machine::Quick(m) = &mut self.machine {
            if self.kind == AlgorithmKind::Hybrid {
                self.machine = Machine::Insertion(InsertionMachine::new(self.n));
            } else {
                m.restart(model, &mut self.rng)?;
            }
        }
        Ok(())
    }

    /// Query, truthful comparison and update in one call.
    pub fn step(&mut self, model: &mut Model) -> Result<()> {
        let (i, j) = self.next_query(model);
        let result = model.compare_positions(i, j)?;
        self.apply_result(result, model)
    }

    /// Completed rounds.
    pub fn round_completed(&self) -> u64 {
        self.rounds
    }

    /// Kendall tau distance at the instant the latest round completed, before
    /// a quicksort kind parked the next round's pivot.
    pub fn round_end_tau(&self) -> Option<u64> {
        self.round_end_tau
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    /// Block layout, for block sort only.
    pub fn block_schedule(&self) -> Option<&BlockSchedule> {
        match &self.machine {
            Machine::Block(m) => Some(&m.schedule),
            _ => None,
        }
    }

    /// `true` once a hybrid sorter has switched to insertion rounds.
    pub fn in_insertion_phase(&self) -> bool {
        matches!(self.machine, Machine::Insertion(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{StartConfig, TrueOrder, WorkingList};
    use rand::SeedableRng;

    fn rng(seed: u64) -> SimRng {
        SimRng::seed_from_u64(seed)
    }

    fn model_from(seq: Vec<u32>) -> Model {
        let n = seq.len();
        Model::new(
            WorkingList::from_sequence(seq).unwrap(),
            TrueOrder::identity(n),
        )
        .unwrap()
    }

    /// Sorted up to the single swap that parked the next round's pivot.
    fn sorted_but_parked(m: &Model) -> bool {
        let ranks = m.rank_sequence();
        let misplaced = ranks
            .iter()
            .enumerate()
            .filter(|&(i, &r)| r as usize != i)
            .count();
        misplaced == 0 || (misplaced == 2 && ranks[ranks.len() - 1] as usize != ranks.len() - 1)
    }

    #[test]
    fn fresh_queries() {
        let mut m = model_from((0..8).collect());
        let mut b = Sorter::new(AlgorithmKind::Bubble, &mut m, rng(0)).unwrap();
        assert_eq!(b.next_query(&m), (0, 1));
        let mut ins = Sorter::new(AlgorithmKind::Insertion, &mut m, rng(0)).unwrap();
        assert_eq!(ins.next_query(&m), (1, 0));
    }

    #[test]
    fn cocktail_turns_around_on_last_pair() {
        let mut m = model_from((0..4).collect());
        let mut s = Sorter::new(AlgorithmKind::Cocktail, &mut m, rng(0)).unwrap();
        let mut seen = Vec::new();
        for _ in 0..6 {
            seen.push(s.peek_query(&m));
            s.step(&mut m).unwrap();
        }
        assert_eq!(seen, vec![(0, 1), (1, 2), (2, 3), (2, 3), (1, 2), (0, 1)]);
    }

    #[test]
    fn result_without_query_is_rejected() {
        let mut m = model_from((0..4).collect());
        let mut s = Sorter::new(AlgorithmKind::Bubble, &mut m, rng(0)).unwrap();
        assert!(matches!(
            s.apply_result(true, &mut m),
            Err(Error::NoOutstandingQuery)
        ));
        s.next_query(&m);
        s.apply_result(true, &mut m).unwrap();
        assert!(s.apply_result(true, &mut m).is_err());
    }

    #[test]
    fn insertion_two_elements() {
        let mut m = model_from(vec![1, 0]);
        let mut s = Sorter::new(AlgorithmKind::Insertion, &mut m, rng(0)).unwrap();
        s.step(&mut m).unwrap();
        assert_eq!(m.tau(), 0);
        s.step(&mut m).unwrap();
        assert_eq!(m.tau(), 0);
        assert_eq!(s.comparisons(), 2);
        assert_eq!(s.round_completed(), 2);
    }

    #[test]
    fn too_small_is_rejected() {
        // a one-element model cannot even be built
        assert!(Model::with_start(StartConfig::Sorted, 1, &mut rng(0)).is_err());
    }

    #[test]
    fn quicksort_sorts_in_first_round_without_adversary() {
        for seed in 0..20 {
            let mut m = Model::with_start(StartConfig::Shuffled, 128, &mut rng(seed)).unwrap();
            let mut s = Sorter::new(AlgorithmKind::Quicksort, &mut m, rng(seed + 100)).unwrap();
            while s.round_completed() == 0 {
                s.step(&mut m).unwrap();
            }
            assert!(sorted_but_parked(&m), "seed {seed}");
        }
    }

    #[test]
    fn quicksort_rounds_end_sorted_without_adversary() {
        // the parked pivot disturbs a sorted list mid-round, never at a round end
        let mut m = model_from((0..50).collect());
        let mut s = Sorter::new(AlgorithmKind::Quicksort, &mut m, rng(3)).unwrap();
        let mut disturbed = false;
        while s.round_completed() < 5 {
            let before = s.round_completed();
            s.step(&mut m).unwrap();
            disturbed |= m.tau() > 0;
            if s.round_completed() > before {
                assert!(sorted_but_parked(&m));
            }
        }
        assert!(disturbed);
    }

    #[test]
    fn quicksort_pivot_follows_its_element() {
        let mut m = Model::with_start(StartConfig::Shuffled, 40, &mut rng(8)).unwrap();
        let mut s = Sorter::new(AlgorithmKind::Quicksort, &mut m, rng(9)).unwrap();
        for _ in 0..30 {
            let (i, j) = s.next_query(&m);
            assert_ne!(i, j);
            let result = m.compare_positions(i, j).unwrap();
            s.apply_result(result, &mut m).unwrap();
        }
    }

    #[test]
    fn bubble_reversed_within_classical_bound() {
        let n = 64;
        let mut m = Model::with_start(StartConfig::Reversed, n, &mut rng(0)).unwrap();
        let mut s = Sorter::new(AlgorithmKind::Bubble, &mut m, rng(0)).unwrap();
        while m.tau() > 0 {
            s.step(&mut m).unwrap();
        }
        assert!(s.comparisons() <= ((n - 1) * (n - 1)) as u64);
    }

    #[test]
    fn quadratic_kinds_sort_reversed_in_one_round() {
        for kind in [
            AlgorithmKind::Bubble,
            AlgorithmKind::Cocktail,
            AlgorithmKind::Insertion,
        ] {
            for n in [2, 3, 4, 5, 17, 64] {
                let mut m = Model::with_start(StartConfig::Reversed, n, &mut rng(0)).unwrap();
                let mut s = Sorter::new(kind, &mut m, rng(0)).unwrap();
                while s.round_completed() == 0 {
                    s.step(&mut m).unwrap();
                }
                assert_eq!(m.tau(), 0, "{kind} n={n}");
            }
        }
    }

    #[test]
    fn quicksort_round_count() {
        let mut m = Model::with_start(StartConfig::Shuffled, 16, &mut rng(1)).unwrap();
        let mut s = Sorter::new(AlgorithmKind::Quicksort, &mut m, rng(2)).unwrap();
        assert_eq!(s.round_completed(), 0);
        while s.round_completed() == 0 {
            s.step(&mut m).unwrap();
        }
        assert_eq!(s.round_completed(), 1);
        assert!(sorted_but_parked(&m));
    }

    #[test]
    fn hybrid_switches_after_one_round() {
        let n = 100;
        let mut m = Model::with_start(StartConfig::Shuffled, n, &mut rng(1)).unwrap();
        let mut s = Sorter::new(AlgorithmKind::Hybrid, &mut m, rng(2)).unwrap();
        assert!(!s.in_insertion_phase());
        while s.round_completed() == 0 {
            s.step(&mut m).unwrap();
        }
        assert!(s.in_insertion_phase());
        assert_eq!(m.tau(), 0);
        assert_eq!(s.next_query(&m), (1, 0));
    }

    #[test]
    fn block_size_rule() {
        // 10 ln 1000 = 69.08; even divisors of 1000 above it start at 100
        assert_eq!(block_size(1000), 100);
        // 10 ln 2000 = 76.0; 80 divides 2000
        assert_eq!(block_size(2000), 80);
        // no even divisor of a prime; fallback to the first even above 10 ln n
        assert_eq!(block_size(1009), 70);
    }

    #[test]
    fn block_schedule_covers_adjacent_pairs() {
        for n in [2, 10, 100, 1000, 1009, 2000, 4321] {
            let sched = BlockSchedule::new(n);
            assert_eq!(sched.block_size % 2, 0);
            for p in 0..n - 1 {
                assert!(
                    sched.blocks.iter().any(|&(a, b)| a <= p && p + 1 < b),
                    "n={n} pair {p}"
                );
            }
        }
        let s = BlockSchedule::new(1000);
        assert_eq!(s.blocks.len(), 19);
        assert_eq!(s.blocks[1], (50, 150));
        assert_eq!(*s.blocks.last().unwrap(), (900, 1000));
    }

    #[test]
    fn blocksort_alternates_global_and_local() {
        let n = 1000;
        let mut m = Model::with_start(StartConfig::Shuffled, n, &mut rng(1)).unwrap();
        let mut s = Sorter::new(AlgorithmKind::Blocksort, &mut m, rng(2)).unwrap();
        let sched = s.block_schedule().unwrap().clone();
        for step in 0..200 {
            let (i, j) = s.peek_query(&m);
            if step % 2 == 1 {
                let (a, b) = sched.blocks[(step / 2) % sched.blocks.len()];
                assert!(a <= i && i < b && a <= j && j < b, "step {step}");
            }
            s.step(&mut m).unwrap();
        }
    }

    #[test]
    fn blocksort_rounds_end_sorted_without_adversary() {
        let n = 128;
        for seed in 0..5 {
            let mut m = Model::with_start(StartConfig::Shuffled, n, &mut rng(seed)).unwrap();
            let mut s = Sorter::new(AlgorithmKind::Blocksort, &mut m, rng(seed + 50)).unwrap();
            while s.round_completed() < 3 {
                let before = s.round_completed();
                s.step(&mut m).unwrap();
                if s.round_completed() > before {
                    assert_eq!(s.round_end_tau(), Some(0), "seed {seed}");
                }
                assert_eq!(m.tau(), m.recount_tau());
            }
        }
    }

    #[test]
    fn round_end_tau_is_zero_for_every_kind_without_adversary() {
        for kind in AlgorithmKind::ALL {
            let mut m = Model::with_start(StartConfig::Shuffled, 100, &mut rng(4)).unwrap();
            let mut s = Sorter::new(kind, &mut m, rng(5)).unwrap();
            assert_eq!(s.round_end_tau(), None);
            while s.round_completed() == 0 {
                s.step(&mut m).unwrap();
            }
            assert_eq!(s.round_end_tau(), Some(0), "{kind}");
        }
    }
}

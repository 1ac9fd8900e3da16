//! Mutation processes applied to the true order after every comparison.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Model, SwapEffect};

/// Tally of the unit swaps performed by one or more mutations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationReport {
    pub swaps_applied: u64,
    pub good: u64,
    pub bad: u64,
}

impl MutationReport {
    #[inline]
    fn record(&mut self, effect: SwapEffect) {
        self.swaps_applied += 1;
        match effect {
            SwapEffect::Good => self.good += 1,
            SwapEffect::Bad => self.bad += 1,
        }
    }

    pub fn merge(&mut self, other: MutationReport) {
        self.swaps_applied += other.swaps_applied;
        self.good += other.good;
        self.bad += other.bad;
    }
}

/// `r` independent uniformly random adjacent-rank swaps per comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformAdversary {
    pub r: u32,
}

impl UniformAdversary {
    pub fn mutate<R: Rng + ?Sized>(&self, model: &mut Model, rng: &mut R) -> MutationReport {
        let mut report = MutationReport::default();
        let upper = model.len() - 1;
        for _ in 0..self.r {
            let k = rng.gen_range(0..upper);
            // k < n - 1 by construction
            let effect = model
                .swap_adjacent_true(k)
                .expect("uniform rank draw is in range");
            report.record(effect);
        }
        report
    }
}

/// What a hot-spot walk does when its element reaches the end of the order
/// and the chosen direction points outward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Keep flipping coins but suppress the swaps.
    Truncate,
}

/// Boundary handling used by every hot-spot adversary.
pub const HOTSPOT_BOUNDARY: BoundaryPolicy = BoundaryPolicy::Truncate;

/// Walks one uniformly chosen element a geometric(1/2) number of ranks in a
/// random direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HotSpotAdversary {
    pub boundary: BoundaryPolicy,
}

impl Default for HotSpotAdversary {
    fn default() -> Self {
        Self {
            boundary: HOTSPOT_BOUNDARY,
        }
    }
}

impl HotSpotAdversary {
    pub fn mutate<R: Rng + ?Sized>(&self, model: &mut Model, rng: &mut R) -> MutationReport {
        let n = model.len();
        let x = rng.gen_range(0..n) as u32;
        let upward = rng.gen_bool(0.5);
        self.walk(model, x, upward, || rng.gen_bool(0.5))
    }

    /// Moves `x` while `stop()` returns `false`. Split out so tests can drive
    /// the coin sequence directly.
    pub fn walk(
        &self,
        model: &mut Model,
        x: u32,
        upward: bool,
        mut stop: impl FnMut() -> bool,
    ) -> MutationReport {
        let n = model.len();
        let mut report = MutationReport::default();
        while !stop() {
            let rank = model.truth().rank_of(x) as usize;
            let k = if upward {
                if rank + 1 >= n {
                    continue;
                }
                rank
            } else {
                if rank == 0 {
                    continue;
                }
                rank - 1
            };
            let effect = model.swap_adjacent_true(k).expect("walk stays in range");
            report.record(effect);
        }
        report
    }
}

/// Adversary selected for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Adversary {
    Uniform { r: u32 },
    Hotspot,
}

impl Adversary {
    pub fn mutate<R: Rng + ?Sized>(&self, model: &mut Model, rng: &mut R) -> MutationReport {
        match *self {
            Adversary::Uniform { r } => UniformAdversary { r }.mutate(model, rng),
            Adversary::Hotspot => HotSpotAdversary::default().mutate(model, rng),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Adversary::Uniform { .. } => "uniform",
            Adversary::Hotspot => "hotspot",
        }
    }

    /// Swap rate column value; hot-spot mutations average one swap.
    pub fn rate(&self) -> u32 {
        match *self {
            Adversary::Uniform { r } => r,
            Adversary::Hotspot => 1,
        }
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adversary::Uniform { r } => write!(f, "uniform(r={r})"),
            Adversary::Hotspot => f.write_str("hotspot"),
        }
    }
}

/// Adversary kind without its rate, for CLI parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    Uniform,
    Hotspot,
}

impl AdversaryKind {
    pub fn with_rate(self, r: u32) -> Adversary {
        match self {
            AdversaryKind::Uniform => Adversary::Uniform { r },
            AdversaryKind::Hotspot => Adversary::Hotspot,
        }
    }
}

impl FromStr for AdversaryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "swap" => Ok(AdversaryKind::Uniform),
            "hotspot" | "hot-spot" | "hot_spot" => Ok(AdversaryKind::Hotspot),
            other => Err(format!(
                "unknown adversary `{other}` (expected uniform | hotspot)"
            )),
        }
    }
}

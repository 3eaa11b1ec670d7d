//! Monty Hall and the birthday problem, exactly and by simulation.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{shard_seed, SplitMix64};

pub const DAYS_IN_YEAR: u32 = 365;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbabilityError {
    #[error("group size must be at least 1, got {0}")]
    InvalidN(u32),
    #[error("{0}/{1} is not a probability")]
    OutOfRange(u64, u64),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("target must lie strictly between 0 and 1, got {0}")]
    InvalidTarget(f64),
}

/// An exact probability, always in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct RationalProbability(Ratio<u64>);

impl RationalProbability {
    pub const ZERO: RationalProbability = RationalProbability(Ratio::new_raw(0, 1));
    pub const ONE: RationalProbability = RationalProbability(Ratio::new_raw(1, 1));

    pub fn new(numerator: u64, denominator: u64) -> Result<Self, ProbabilityError> {
        if denominator == 0 || numerator > denominator {
            return Err(ProbabilityError::OutOfRange(numerator, denominator));
        }
        Ok(RationalProbability(Ratio::new(numerator, denominator)))
    }

    pub fn numerator(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(self) -> f64 {
        self.numerator() as f64 / self.denominator() as f64
    }

    /// Probability of both independent events, or of a branch followed by a sub-branch.
    pub fn times(self, other: Self) -> Self {
        RationalProbability(self.0 * other.0)
    }

    /// Sum of probabilities of disjoint events. Panics if the total exceeds one.
    pub fn plus(self, other: Self) -> Self {
        let sum = self.0 + other.0;
        assert!(sum <= Ratio::from_integer(1), "probabilities of disjoint events exceed 1");
        RationalProbability(sum)
    }

    pub fn complement(self) -> Self {
        RationalProbability(Ratio::from_integer(1) - self.0)
    }
}

impl TryFrom<(u64, u64)> for RationalProbability {
    type Error = ProbabilityError;

    fn try_from((n, d): (u64, u64)) -> Result<Self, Self::Error> {
        let g = n.gcd(&d);
        if g > 1 {
            return Err(ProbabilityError::OutOfRange(n, d));
        }
        RationalProbability::new(n, d)
    }
}

impl From<RationalProbability> for (u64, u64) {
    fn from(p: RationalProbability) -> Self {
        (p.numerator(), p.denominator())
    }
}

impl fmt::Display for RationalProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    Switch,
    Stay,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "switch" => Ok(Strategy::Switch),
            "stay" => Ok(Strategy::Stay),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Switch => "SWITCH",
            Strategy::Stay => "STAY",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Prize {
    Car,
    Goat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontyLeaf {
    /// Door hiding the car, with the contestant holding door 1.
    pub car_door: u8,
    /// Door the host opens.
    pub opened_door: u8,
    pub probability: RationalProbability,
    pub if_stay: Prize,
    pub if_switch: Prize,
}

impl MontyLeaf {
    pub fn describe(&self) -> String {
        format!("car behind {}, host opens {}", self.car_door, self.opened_door)
    }

    pub fn outcome(&self, strategy: Strategy) -> Prize {
        match strategy {
            Strategy::Stay => self.if_stay,
            Strategy::Switch => self.if_switch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontyTree {
    pub leaves: Vec<MontyLeaf>,
}

impl MontyTree {
    pub fn total(&self) -> RationalProbability {
        self.leaves.iter().fold(RationalProbability::ZERO, |acc, l| acc.plus(l.probability))
    }
}

/// The decision tree with the contestant on door 1: the car is placed uniformly, then the
/// host opens a goat door, choosing uniformly when two are available.
pub fn monty_tree() -> MontyTree {
    const PICKED: u8 = 1;
    let third = RationalProbability::new(1, 3).expect("1/3");
    let mut leaves = Vec::new();
    for car_door in 1..=3u8 {
        let openable: Vec<u8> = (1..=3).filter(|&d| d != PICKED && d != car_door).collect();
        let branch = RationalProbability::new(1, openable.len() as u64).expect("1/k");
        for &opened_door in &openable {
            let remaining = (1..=3).find(|&d| d != PICKED && d != opened_door).expect("one door left");
            let prize = |door: u8| if door == car_door { Prize::Car } else { Prize::Goat };
            leaves.push(MontyLeaf {
                car_door,
                opened_door,
                probability: third.times(branch),
                if_stay: prize(PICKED),
                if_switch: prize(remaining),
            });
        }
    }
    MontyTree { leaves }
}

/// Winning probability of `strategy`, summed over the tree's leaves.
pub fn monty_exact(strategy: Strategy) -> RationalProbability {
    monty_tree()
        .leaves
        .iter()
        .filter(|l| l.outcome(strategy) == Prize::Car)
        .fold(RationalProbability::ZERO, |acc, l| acc.plus(l.probability))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self, ProbabilityError> {
        if trials == 0 {
            return Err(ProbabilityError::NoTrials);
        }
        Ok(TrialConfig { trials, seed })
    }
}

/// One Monty Hall game with doors `0..3`. Returns true on a win.
///
/// Draw order is fixed: car door, contestant pick, then the host's choice among goat doors.
pub fn monty_play(rng: &mut SplitMix64, strategy: Strategy) -> bool {
    let car = rng.below(3) as u8;
    let pick = rng.below(3) as u8;
    let goats: Vec<u8> = (0..3).filter(|&d| d != car && d != pick).collect();
    let opened = goats[rng.below(goats.len() as u64) as usize];
    let final_pick = match strategy {
        Strategy::Stay => pick,
        Strategy::Switch => (0..3).find(|&d| d != pick && d != opened).expect("one door left"),
    };
    final_pick == car
}

fn monty_wins(strategy: Strategy, trials: u64, seed: u64) -> u64 {
    let mut rng = SplitMix64::new(seed);
    (0..trials).filter(|_| monty_play(&mut rng, strategy)).count() as u64
}

/// Fraction of simulated games won by `strategy`.
pub fn monty_simulate(strategy: Strategy, cfg: TrialConfig) -> f64 {
    monty_wins(strategy, cfg.trials, cfg.seed) as f64 / cfg.trials as f64
}

/// Like [`monty_simulate`] but spread over `shards` independently seeded streams.
pub fn monty_simulate_sharded(strategy: Strategy, cfg: TrialConfig, shards: u64) -> f64 {
    let wins: u64 = shard_plan(cfg, shards)
        .into_par_iter()
        .map(|(trials, seed)| monty_wins(strategy, trials, seed))
        .sum();
    wins as f64 / cfg.trials as f64
}

/// Trial counts and seeds per shard; counts sum to `cfg.trials`.
fn shard_plan(cfg: TrialConfig, shards: u64) -> Vec<(u64, u64)> {
    let shards = shards.clamp(1, cfg.trials);
    (0..shards)
        .map(|i| {
            let trials = cfg.trials / shards + u64::from(i < cfg.trials % shards);
            (trials, shard_seed(cfg.seed, i))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BirthdayFormula {
    Exact,
    Approx,
}

impl FromStr for BirthdayFormula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(BirthdayFormula::Exact),
            "approx" | "approximate" => Ok(BirthdayFormula::Approx),
            _ => Err(format!("unknown formula {s:?}")),
        }
    }
}

/// Probability that at least two of `n` people share a birthday:
/// `1 - prod_{i=1}^{n-1} (1 - i/365)`.
pub fn birthday_exact(n: u32) -> Result<f64, ProbabilityError> {
    if n == 0 {
        return Err(ProbabilityError::InvalidN(n));
    }
    if n > DAYS_IN_YEAR {
        return Ok(1.0);
    }
    let days = f64::from(DAYS_IN_YEAR);
    let none_shared: f64 = (1..n).map(|i| 1.0 - f64::from(i) / days).product();
    Ok(1.0 - none_shared)
}

/// The pairwise approximation `1 - (364/365)^C(n, 2)`.
pub fn birthday_approx(n: u32) -> Result<f64, ProbabilityError> {
    if n == 0 {
        return Err(ProbabilityError::InvalidN(n));
    }
    let pairs = f64::from(n) * f64::from(n - 1) / 2.0;
    let days = f64::from(DAYS_IN_YEAR);
    Ok(1.0 - ((days - 1.0) / days).powf(pairs))
}

pub fn birthday(n: u32, formula: BirthdayFormula) -> Result<f64, ProbabilityError> {
    match formula {
        BirthdayFormula::Exact => birthday_exact(n),
        BirthdayFormula::Approx => birthday_approx(n),
    }
}

/// Smallest group size whose collision probability reaches `target`.
pub fn birthday_threshold(target: f64, formula: BirthdayFormula) -> Result<u32, ProbabilityError> {
    if !(target > 0.0 && target < 1.0) {
        return Err(ProbabilityError::InvalidTarget(target));
    }
    // Both formulas are non-decreasing in n. The exact one reaches 1 at 366; the
    // approximation stays below 1 but crosses any double below 1 long before u32::MAX.
    let mut n = 1;
    while birthday(n, formula)? < target {
        n += 1;
    }
    Ok(n)
}

fn birthday_collisions(n: u32, trials: u64, seed: u64) -> u64 {
    let mut rng = SplitMix64::new(seed);
    let mut hits = 0;
    for _ in 0..trials {
        let mut seen = [0u64; 6];
        for _ in 0..n {
            let day = rng.below(u64::from(DAYS_IN_YEAR)) as usize;
            let (word, bit) = (day / 64, 1u64 << (day % 64));
            if seen[word] & bit != 0 {
                hits += 1;
                break;
            }
            seen[word] |= bit;
        }
    }
    hits
}

/// Fraction of simulated groups of `n` with a shared birthday.
pub fn birthday_simulate(n: u32, cfg: TrialConfig) -> Result<f64, ProbabilityError> {
    if n == 0 {
        return Err(ProbabilityError::InvalidN(n));
    }
    Ok(birthday_collisions(n, cfg.trials, cfg.seed) as f64 / cfg.trials as f64)
}

pub fn birthday_simulate_sharded(n: u32, cfg: TrialConfig, shards: u64) -> Result<f64, ProbabilityError> {
    if n == 0 {
        return Err(ProbabilityError::InvalidN(n));
    }
    let hits: u64 = shard_plan(cfg, shards)
        .into_par_iter()
        .map(|(trials, seed)| birthday_collisions(n, trials, seed))
        .sum();
    Ok(hits as f64 / cfg.trials as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthdayPoint {
    pub n: u32,
    pub exact: f64,
    pub approx: f64,
    pub simulated: Option<f64>,
}

/// Rows `n = 1..=n_max` of the exact, approximate and (optionally) simulated curves.
pub fn birthday_curve(n_max: u32, simulate: Option<TrialConfig>) -> Result<Vec<BirthdayPoint>, ProbabilityError> {
    (1..=n_max)
        .map(|n| {
            Ok(BirthdayPoint {
                n,
                exact: birthday_exact(n)?,
                approx: birthday_approx(n)?,
                simulated: simulate.map(|cfg| birthday_simulate(n, cfg)).transpose()?,
            })
        })
        .collect()
}

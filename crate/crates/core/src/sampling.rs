//! Stochastic single-trial and repeated-trial simulation of the measurement
//! game under each outcome semantics, with the exact distribution as oracle.
//!
//! RNG contract: ChaCha8, keyed by the run seed, one stream per trial index.
//! Streams are independent by construction, so results do not depend on any
//! execution schedule and a run is reproducible from `(inputs, seed)` alone.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::RewardSchedule;
use crate::quantum::{branch_count_weights, AncillaSpec, MeasurementSetup, OutcomeLabel};
use crate::weights::{Scalar, WeightVector};

/// How a single observed outcome is selected from the post-measurement state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// Collapse to one channel with Born probabilities, before any
    /// refinement stage; the refinement then only relabels the outcome.
    CopenhagenBorn,
    /// A uniform draw over occupied branches at observation time; the
    /// refinement multiplicities decide everything, the amplitudes only
    /// decide which channels are occupied.
    EverettBranchCount,
    /// A draw over branches weighted by squared amplitude (the caring
    /// measure); coarse statistics coincide with Copenhagen exactly.
    BornWeightedBranch,
}

/// Seed for a reproducible run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Seed(u64);

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed(value)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

/// Aggregate results of a repeated-trial run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunStats {
    pub n_trials: u64,
    pub count_plus: u64,
    pub count_minus: u64,
    pub mean_reward: f64,
    pub empirical_fraction_plus: f64,
}

/// The RNG stream for one trial: ChaCha8 keyed by `seed`, stream = trial
/// index.
pub fn trial_rng(seed: Seed, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.value());
    rng.set_stream(trial_index);
    rng
}

/// The exact coarse `(+, -)` distribution under the given semantics.
pub fn outcome_distribution(setup: &MeasurementSetup, semantics: Semantics) -> WeightVector {
    match semantics {
        // Collapse happens before the refinement, so the coarse distribution
        // is the Born weights whether or not an ancilla is attached.  A
        // Born-weighted branch draw coarse-grains to the same thing exactly.
        Semantics::CopenhagenBorn | Semantics::BornWeightedBranch => setup.state().born_weights(),
        Semantics::EverettBranchCount => {
            branch_count_weights(&setup.state(), setup.ancilla.as_ref())
        }
    }
}

/// Draws one outcome, advancing `rng` by a single variate.
pub fn sample_trial(
    setup: &MeasurementSetup,
    semantics: Semantics,
    rng: &mut ChaCha8Rng,
) -> OutcomeLabel {
    let p_plus = outcome_distribution(setup, semantics).get_f64(0);
    draw_outcome(p_plus, rng)
}

fn draw_outcome(p_plus: f64, rng: &mut ChaCha8Rng) -> OutcomeLabel {
    if rng.random::<f64>() < p_plus {
        OutcomeLabel::Plus
    } else {
        OutcomeLabel::Minus
    }
}

/// Runs `n_trials` independent trials and aggregates counts and rewards.
pub fn run_experiment(
    setup: &MeasurementSetup,
    semantics: Semantics,
    n_trials: u64,
    rewards: &RewardSchedule,
    seed: Seed,
) -> Result<RunStats> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("nTrials must be at least 1".into()));
    }
    if rewards.len() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, got: rewards.len() });
    }
    let p_plus = outcome_distribution(setup, semantics).get_f64(0);
    let mut count_plus = 0_u64;
    for trial in 0..n_trials {
        let mut rng = trial_rng(seed, trial);
        if draw_outcome(p_plus, &mut rng) == OutcomeLabel::Plus {
            count_plus += 1;
        }
    }
    let count_minus = n_trials - count_plus;
    let x = rewards.as_slice();
    let mean_reward = (count_plus as f64 * x[0] + count_minus as f64 * x[1]) / n_trials as f64;
    Ok(RunStats {
        n_trials,
        count_plus,
        count_minus,
        mean_reward,
        empirical_fraction_plus: count_plus as f64 / n_trials as f64,
    })
}

/// Total-variation distance between the coarse distributions with and
/// without the given refinement, exact when both sides are exact.
///
/// `setup` must be a bare setup; the refined side attaches `ancilla` to it.
pub fn neutrality_gap(
    setup: &MeasurementSetup,
    ancilla: &AncillaSpec,
    semantics: Semantics,
) -> Result<Scalar> {
    if setup.ancilla.is_some() {
        return Err(Error::InvalidConfig(
            "neutrality gap expects a setup without an ancilla; pass the refinement separately"
                .into(),
        ));
    }
    let refined = MeasurementSetup::with_ancilla(setup.angle, *ancilla);
    let with = outcome_distribution(&refined, semantics);
    let without = outcome_distribution(setup, semantics);
    with.total_variation(&without)
}

/// Branch-count distribution when a randomizer attaches `multiplier`
/// sub-branches to the plus channel and one to the minus channel.
pub fn randomizer_scenario(multiplier: u64) -> Result<WeightVector> {
    if multiplier == 0 {
        return Err(Error::InvalidConfig("randomizer multiplier must be at least 1".into()));
    }
    let total = BigRational::from_integer((multiplier + 1).into());
    WeightVector::exact(vec![
        BigRational::from_integer(multiplier.into()) / &total,
        BigRational::from_integer(1.into()) / total,
    ])
}

//! Measurement games: reward schedules, game values, and the weight
//! derivations a given axiom set supports.
//!
//! The derivation engine is constructive: at a rational point `p/q` it builds
//! the refinement `(p, q-p)`, verifies the refined components really carry
//! equal weight, applies permutation symmetry, and coarse-grains back.  Every
//! step is recorded so callers can show their work.  Replacing measurement
//! neutrality with branch counting yields the multiplicity-ratio weights
//! instead, and the two rules agree only on symmetric setups.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{
    branch_count_weights, check_unit_interval, AncillaSpec, Angle, MeasurementSetup, OutcomeLabel,
    SpinAmplitudes,
};
use crate::weights::{format_ratio, WeightVector};

/// Per-outcome payoffs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RewardSchedule {
    rewards: Vec<f64>,
}

impl RewardSchedule {
    pub fn new(rewards: Vec<f64>) -> Result<Self> {
        if rewards.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        for &x in &rewards {
            if !x.is_finite() {
                return Err(Error::NotFinite { what: "reward", value: x });
            }
        }
        Ok(RewardSchedule { rewards })
    }

    pub fn pair(x_plus: f64, x_minus: f64) -> Result<Self> {
        RewardSchedule::new(vec![x_plus, x_minus])
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rewards
    }
}

/// The minimum certain payment a rational player would accept in place of
/// playing the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameValue(f64);

impl GameValue {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The assumptions a derivation may use.  `measurement_neutrality` and
/// `branch_counting` are rival rules for carrying weights across a
/// refinement stage; exactly one must be in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomSet {
    pub phase_invariance: bool,
    pub permutation_symmetry: bool,
    pub ancilla_composition: bool,
    pub measurement_neutrality: bool,
    pub continuity: bool,
    pub branch_counting: bool,
}

/// Which refinement rule an axiom set commits to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRule {
    MeasurementNeutrality,
    BranchCounting,
}

impl AxiomSet {
    /// The full set used by the constructive weight derivation.
    pub fn neutrality() -> Self {
        AxiomSet {
            phase_invariance: true,
            permutation_symmetry: true,
            ancilla_composition: true,
            measurement_neutrality: true,
            continuity: true,
            branch_counting: false,
        }
    }

    /// Same base axioms with branch counting in place of neutrality.
    pub fn branch_counting() -> Self {
        AxiomSet {
            phase_invariance: true,
            permutation_symmetry: true,
            ancilla_composition: true,
            measurement_neutrality: false,
            continuity: true,
            branch_counting: true,
        }
    }

    /// Checks the base axioms and resolves the refinement rule.  Setting both
    /// or neither of the rival rules is a conflict: the choice is
    /// substantive, so there is no default.
    pub fn weight_rule(&self) -> Result<WeightRule> {
        if !(self.phase_invariance && self.permutation_symmetry && self.ancilla_composition) {
            return Err(Error::AxiomConflict(
                "derivation requires phase invariance, permutation symmetry, and ancilla composition"
                    .into(),
            ));
        }
        match (self.measurement_neutrality, self.branch_counting) {
            (true, false) => Ok(WeightRule::MeasurementNeutrality),
            (false, true) => Ok(WeightRule::BranchCounting),
            (true, true) => Err(Error::AxiomConflict(
                "measurement neutrality and branch counting are mutually exclusive".into(),
            )),
            (false, false) => Err(Error::AxiomConflict(
                "exactly one of measurement neutrality or branch counting must be set".into(),
            )),
        }
    }
}

/// Expected payoff `sum_i w_i x_i`.
pub fn game_value(weights: &WeightVector, rewards: &RewardSchedule) -> Result<GameValue> {
    if weights.len() != rewards.len() {
        return Err(Error::ArityMismatch { weights: weights.len(), rewards: rewards.len() });
    }
    let value = rewards
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &x)| weights.get_f64(i) * x)
        .sum();
    Ok(GameValue(value))
}

/// Value of the half-turn-rotated game: the channels swap roles, so the
/// weights apply to the opposite rewards.
pub fn rotated_value(weights: &WeightVector, rewards: &RewardSchedule) -> Result<GameValue> {
    let swapped = weights.swapped_pair()?;
    game_value(&swapped, rewards)
}

/// Uniform weights `(1/m, ..., 1/m)`: with equal coefficients, exchanging
/// any two channels must leave the value unchanged, which forces all the
/// weights equal.
pub fn derive_symmetric_weights(m: usize) -> Result<WeightVector> {
    WeightVector::uniform(m)
}

/// One recorded step of a weight derivation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "step", rename_all = "camelCase")]
pub enum DerivationStep {
    /// One channel carries zero amplitude; the other takes all the weight.
    #[serde(rename_all = "camelCase")]
    DegenerateChannel { occupied: OutcomeLabel },
    /// The refinement constructed (or supplied) for this derivation.
    #[serde(rename_all = "camelCase")]
    AncillaRefinement { k_plus: u32, k_minus: u32 },
    /// Verified that every refined component carries the same weight.
    #[serde(rename_all = "camelCase")]
    EqualAmplitudesVerified { component_weight: String },
    /// Permutation symmetry applied over this many equal components.
    #[serde(rename_all = "camelCase")]
    SymmetricWeights { arity: u32 },
    /// Component weights summed back per channel.
    #[serde(rename_all = "camelCase")]
    CoarseGraining { plus_components: u32, minus_components: u32 },
    /// Neutrality carried the refined-setup weights over to the bare setup.
    NeutralityTransfer,
    /// Occupied branches counted per channel.
    #[serde(rename_all = "camelCase")]
    OccupiedBranchCount { plus: u32, minus: u32 },
}

/// A derived weight vector together with the trace that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightDerivation {
    pub weights: WeightVector,
    pub ancilla: Option<AncillaSpec>,
    pub steps: Vec<DerivationStep>,
}

fn multiplicity_from_bigint(value: &BigInt, what: &str) -> Result<u32> {
    value.to_u32().ok_or_else(|| {
        Error::SizeLimit(format!("{what} {value} does not fit a u32 refinement multiplicity"))
    })
}

/// Derives the two-outcome weights at an exact rational point `c^2 = p/q`.
///
/// Under measurement neutrality the derivation builds the `(p, q-p)`
/// refinement, checks that it flattens the state into `q` equal components,
/// assigns them `1/q` each by symmetry, and coarse-grains: the plus channel
/// collects `p/q` exactly.  Under branch counting the result is the occupied
/// multiplicity ratio, `(1/2, 1/2)` bare or the ratio of `ancilla` when one
/// is supplied, independent of `c^2` except through which channels are
/// occupied.
pub fn derive_weights_rational(
    c_squared: &BigRational,
    axioms: &AxiomSet,
    ancilla: Option<&AncillaSpec>,
) -> Result<WeightDerivation> {
    let rule = axioms.weight_rule()?;
    check_unit_interval(c_squared)?;

    let plus_occupied = !c_squared.is_zero();
    let minus_occupied = !c_squared.is_one();

    match rule {
        WeightRule::MeasurementNeutrality => {
            if !plus_occupied || !minus_occupied {
                let occupied = if plus_occupied { OutcomeLabel::Plus } else { OutcomeLabel::Minus };
                return Ok(WeightDerivation {
                    weights: WeightVector::exact_pair(c_squared.clone())?,
                    ancilla: None,
                    steps: vec![DerivationStep::DegenerateChannel { occupied }],
                });
            }
            let p = multiplicity_from_bigint(c_squared.numer(), "numerator")?;
            let q = multiplicity_from_bigint(c_squared.denom(), "denominator")?;
            let spec = AncillaSpec::new(p, q - p)?;
            let mut steps = vec![DerivationStep::AncillaRefinement {
                k_plus: spec.k_plus(),
                k_minus: spec.k_minus(),
            }];
            let (plus_w, minus_w) = spec.refined_squared_amplitudes(c_squared)?;
            if plus_w != minus_w {
                // Cannot fail for the (p, q-p) refinement.
                return Err(Error::InvalidConfig(format!(
                    "refinement failed to equalize: {} vs {}",
                    format_ratio(&plus_w),
                    format_ratio(&minus_w)
                )));
            }
            steps.push(DerivationStep::EqualAmplitudesVerified {
                component_weight: format_ratio(&plus_w),
            });
            let uniform = derive_symmetric_weights(spec.total() as usize)?;
            steps.push(DerivationStep::SymmetricWeights { arity: spec.total() });
            let per_component = &uniform.as_exact().expect("uniform weights are exact")[0];
            let plus_total = per_component * BigRational::from_integer(spec.k_plus().into());
            steps.push(DerivationStep::CoarseGraining {
                plus_components: spec.k_plus(),
                minus_components: spec.k_minus(),
            });
            steps.push(DerivationStep::NeutralityTransfer);
            Ok(WeightDerivation {
                weights: WeightVector::exact_pair(plus_total)?,
                ancilla: Some(spec),
                steps,
            })
        }
        WeightRule::BranchCounting => {
            let spec = ancilla.copied().unwrap_or_else(AncillaSpec::identity);
            let plus = if plus_occupied { spec.k_plus() } else { 0 };
            let minus = if minus_occupied { spec.k_minus() } else { 0 };
            let total = BigRational::from_integer((plus + minus).into());
            let weights = WeightVector::exact(vec![
                BigRational::from_integer(plus.into()) / &total,
                BigRational::from_integer(minus.into()) / total,
            ])?;
            Ok(WeightDerivation {
                weights,
                ancilla: ancilla.copied(),
                steps: vec![DerivationStep::OccupiedBranchCount { plus, minus }],
            })
        }
    }
}

/// Weights as a function of the angle, for either rule.
///
/// This is the continuity limit of the rational derivation: under neutrality
/// it is `(cos^2(theta/2), sin^2(theta/2))`; under branch counting it is the
/// occupied-multiplicity ratio, independent of the angle wherever both
/// amplitudes are nonzero.
pub fn derive_weight_function(
    angle: Angle,
    axioms: &AxiomSet,
    ancilla: Option<&AncillaSpec>,
) -> Result<WeightVector> {
    let rule = axioms.weight_rule()?;
    if !axioms.continuity {
        return Err(Error::AxiomConflict(
            "extending the derivation to arbitrary angles requires the continuity axiom".into(),
        ));
    }
    let state = SpinAmplitudes::from_angle(angle);
    Ok(match rule {
        WeightRule::MeasurementNeutrality => state.born_weights(),
        WeightRule::BranchCounting => branch_count_weights(&state, ancilla),
    })
}

/// Value of the measurement game for a full setup: derived coarse weights
/// dotted with the channel rewards.  Under branch counting each refined
/// component contributes its branch share to its parent channel's reward.
pub fn value_of_setup(
    setup: &MeasurementSetup,
    rewards: &RewardSchedule,
    axioms: &AxiomSet,
) -> Result<GameValue> {
    let weights = derive_weight_function(setup.angle, axioms, setup.ancilla.as_ref())?;
    game_value(&weights, rewards)
}

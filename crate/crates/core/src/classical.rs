//! Classical analogs of the measurement games: ball-box processes, breeding
//! games, and a generic neutrality checker over two-stage processes.
//!
//! A two-stage process has a coarse-label first stage, an integer refinement
//! per label, and a selection rule.  Following one ball through its
//! refinement leaves the coarse statistics alone; tipping every emitted ball
//! into a receptacle and drawing uniformly makes the refinement multiplicities
//! take over.  The neutrality checker compares a process against itself with
//! the refinement flattened to all-ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{game_value, GameValue, RewardSchedule};
use crate::weights::{format_ratio, WeightVector};

/// How the observed label is selected after the refinement stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionRule {
    /// One ball is emitted per round; the refinement merely relabels its
    /// path, so the coarse statistics are the first-stage statistics.
    FollowOneBall,
    /// Every supported label emits its full refinement of balls each round;
    /// the observer draws uniformly from the receptacle.
    DrawFromReceptacle,
}

/// A coarse outcome distribution, a per-label refinement, and a selection
/// rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageProcess {
    stage1: Vec<BigRational>,
    refinement: Vec<u32>,
    selection_rule: SelectionRule,
}

impl TwoStageProcess {
    pub fn new(
        stage1: Vec<BigRational>,
        refinement: Vec<u32>,
        selection_rule: SelectionRule,
    ) -> Result<Self> {
        if stage1.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        if stage1.len() != refinement.len() {
            return Err(Error::ArityMismatch { weights: stage1.len(), rewards: refinement.len() });
        }
        if stage1.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidWeights("stage-1 probabilities must be non-negative".into()));
        }
        let total: BigRational = stage1.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeights(format!(
                "stage-1 probabilities sum to {}, expected 1",
                format_ratio(&total)
            )));
        }
        if refinement.contains(&0) {
            return Err(Error::InvalidMultiplicity { k_plus: refinement[0], k_minus: 0 });
        }
        Ok(TwoStageProcess { stage1, refinement, selection_rule })
    }

    pub fn stage1(&self) -> &[BigRational] {
        &self.stage1
    }

    pub fn refinement(&self) -> &[u32] {
        &self.refinement
    }

    pub fn selection_rule(&self) -> SelectionRule {
        self.selection_rule
    }

    /// Exact coarse-label distribution under the selection rule.
    pub fn coarse_distribution(&self) -> WeightVector {
        match self.selection_rule {
            SelectionRule::FollowOneBall => WeightVector::Exact(self.stage1.clone()),
            SelectionRule::DrawFromReceptacle => {
                // Labels outside the stage-1 support emit nothing; the rest
                // contribute their multiplicities, regardless of their mass.
                let contributions: Vec<u64> = self
                    .stage1
                    .iter()
                    .zip(&self.refinement)
                    .map(|(p, &k)| if p.is_zero() { 0 } else { u64::from(k) })
                    .collect();
                let total: u64 = contributions.iter().sum();
                let total = BigRational::from_integer(total.into());
                WeightVector::Exact(
                    contributions
                        .into_iter()
                        .map(|k| BigRational::from_integer(k.into()) / &total)
                        .collect(),
                )
            }
        }
    }

    /// Simulates one round mechanically (emission, then selection) and
    /// returns the observed coarse label.  Kept independent of
    /// [`coarse_distribution`] so sampled frequencies can check the formula.
    pub fn sample_round(&self, rng: &mut ChaCha8Rng) -> usize {
        match self.selection_rule {
            SelectionRule::FollowOneBall => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (label, p) in self.stage1.iter().enumerate() {
                    acc += p.to_f64().unwrap_or(0.0);
                    if u < acc {
                        return label;
                    }
                }
                self.stage1.len() - 1
            }
            SelectionRule::DrawFromReceptacle => {
                let balls: Vec<u64> = self
                    .stage1
                    .iter()
                    .zip(&self.refinement)
                    .map(|(p, &k)| if p.is_zero() { 0 } else { u64::from(k) })
                    .collect();
                let total: u64 = balls.iter().sum();
                let mut pick = rng.random_range(0..total);
                for (label, &k) in balls.iter().enumerate() {
                    if pick < k {
                        return label;
                    }
                    pick -= k;
                }
                balls.len() - 1
            }
        }
    }
}

/// Result of a neutrality check: the total-variation gap between the coarse
/// distribution with the given refinement and with no refinement at all.
#[derive(Debug, Clone, PartialEq)]
pub struct NeutralityReport {
    pub holds: bool,
    pub gap: BigRational,
}

/// Checks whether inserting the refinement stage changes the coarse
/// statistics under the process's own selection rule.
pub fn neutrality_check(process: &TwoStageProcess) -> NeutralityReport {
    let flattened = TwoStageProcess {
        stage1: process.stage1.clone(),
        refinement: vec![1; process.refinement.len()],
        selection_rule: process.selection_rule,
    };
    let with = process.coarse_distribution();
    let without = flattened.coarse_distribution();
    let gap = match with.total_variation(&without).expect("same arity") {
        crate::weights::Scalar::Exact(r) => r,
        crate::weights::Scalar::Approx(_) => unreachable!("both sides are exact"),
    };
    NeutralityReport { holds: gap.is_zero(), gap }
}

/// The two operating modes of the ball-box game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallGameMode {
    /// One ball per round, upper port three times as often as lower;
    /// the observer follows it.
    Copenhagen,
    /// One ball per port per round; the observer draws from the receptacle.
    Everett,
}

/// The ball-box game as a two-stage process.  The optional second box splits
/// the upper channel into three.
pub fn ball_game_process(mode: BallGameMode, with_ancilla_box: bool) -> TwoStageProcess {
    let refinement = if with_ancilla_box { vec![3, 1] } else { vec![1, 1] };
    let (stage1, rule) = match mode {
        BallGameMode::Copenhagen => (
            vec![BigRational::new(3.into(), 4.into()), BigRational::new(1.into(), 4.into())],
            SelectionRule::FollowOneBall,
        ),
        BallGameMode::Everett => (
            vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())],
            SelectionRule::DrawFromReceptacle,
        ),
    };
    TwoStageProcess::new(stage1, refinement, rule).expect("fixed parameters are valid")
}

/// Exact distribution over (upper/black, lower/white) for the ball game.
pub fn ball_game_distribution(mode: BallGameMode, with_ancilla_box: bool) -> WeightVector {
    ball_game_process(mode, with_ancilla_box).coarse_distribution()
}

/// When the draw happens in the breeding games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrawTime {
    BeforeBirth,
    AfterBirth,
}

/// Which breed of rabbit is in the hat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RabbitMode {
    /// Single-offspring mothers; the litter counts give the population mix.
    Copenhagen,
    /// One mother per color, carrying the whole litter.
    Everett,
}

/// A breeding-game scenario over black and white rabbits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RabbitScenario {
    pub black: u32,
    pub white: u32,
    pub draw_time: DrawTime,
    pub mode: RabbitMode,
}

impl RabbitScenario {
    pub fn new(black: u32, white: u32, draw_time: DrawTime, mode: RabbitMode) -> Result<Self> {
        if black == 0 || white == 0 {
            return Err(Error::InvalidMultiplicity { k_plus: black, k_minus: white });
        }
        Ok(RabbitScenario { black, white, draw_time, mode })
    }
}

/// The scenario expressed as a two-stage process: pregnancy is stage 1,
/// litters are the refinement, and the draw is the selection rule.
pub fn rabbit_process(scenario: &RabbitScenario) -> TwoStageProcess {
    match scenario.mode {
        RabbitMode::Copenhagen => {
            // (black + white) single-offspring mothers, one of them pregnant
            // uniformly at random; drawing mother or baby is the same draw.
            let total = BigRational::from_integer(BigInt::from(scenario.black + scenario.white));
            let stage1 = vec![
                BigRational::from_integer(scenario.black.into()) / &total,
                BigRational::from_integer(scenario.white.into()) / total,
            ];
            TwoStageProcess::new(stage1, vec![1, 1], SelectionRule::FollowOneBall)
        }
        RabbitMode::Everett => {
            let stage1 = vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 2.into()),
            ];
            let refinement = match scenario.draw_time {
                DrawTime::BeforeBirth => vec![1, 1],
                DrawTime::AfterBirth => vec![scenario.black, scenario.white],
            };
            TwoStageProcess::new(stage1, refinement, SelectionRule::DrawFromReceptacle)
        }
    }
    .expect("validated scenario parameters")
}

/// Expected reward of the breeding game for rewards `(x_black, x_white)`.
pub fn rabbit_game_value(scenario: &RabbitScenario, rewards: &RewardSchedule) -> Result<GameValue> {
    let distribution = rabbit_process(scenario).coarse_distribution();
    game_value(&distribution, rewards)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{trial_rng, Seed};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn ball_game_all_four_configurations() {
        let expect = |mode, with_box, w: [(i64, i64); 2]| {
            let dist = ball_game_distribution(mode, with_box);
            assert_eq!(dist.as_exact().unwrap(), &[r(w[0].0, w[0].1), r(w[1].0, w[1].1)]);
        };
        expect(BallGameMode::Copenhagen, false, [(3, 4), (1, 4)]);
        expect(BallGameMode::Copenhagen, true, [(3, 4), (1, 4)]);
        expect(BallGameMode::Everett, false, [(1, 2), (1, 2)]);
        expect(BallGameMode::Everett, true, [(3, 4), (1, 4)]);
    }

    #[test]
    fn follow_one_ball_is_always_neutral() {
        for refinement in [vec![1, 1], vec![3, 1], vec![10, 7]] {
            let process = TwoStageProcess::new(
                vec![r(2, 5), r(3, 5)],
                refinement,
                SelectionRule::FollowOneBall,
            )
            .unwrap();
            let report = neutrality_check(&process);
            assert!(report.holds);
            assert!(report.gap.is_zero());
        }
    }

    #[test]
    fn receptacle_draw_breaks_neutrality() {
        let process = TwoStageProcess::new(
            vec![r(1, 2), r(1, 2)],
            vec![3, 1],
            SelectionRule::DrawFromReceptacle,
        )
        .unwrap();
        let report = neutrality_check(&process);
        assert!(!report.holds);
        assert_eq!(report.gap, r(1, 4));

        let identity = TwoStageProcess::new(
            vec![r(1, 2), r(1, 2)],
            vec![1, 1],
            SelectionRule::DrawFromReceptacle,
        )
        .unwrap();
        assert!(neutrality_check(&identity).holds);
    }

    #[test]
    fn unsupported_labels_emit_nothing() {
        let process = TwoStageProcess::new(
            vec![r(1, 1), r(0, 1)],
            vec![3, 5],
            SelectionRule::DrawFromReceptacle,
        )
        .unwrap();
        assert_eq!(process.coarse_distribution().as_exact().unwrap(), &[r(1, 1), r(0, 1)]);
    }

    #[test]
    fn rabbit_values_match_closed_forms() {
        let x = RewardSchedule::pair(1.0, 0.0).unwrap();

        for draw in [DrawTime::BeforeBirth, DrawTime::AfterBirth] {
            let s = RabbitScenario::new(3, 1, draw, RabbitMode::Copenhagen).unwrap();
            assert_eq!(rabbit_game_value(&s, &x).unwrap().value(), 0.75);
        }

        let before = RabbitScenario::new(3, 1, DrawTime::BeforeBirth, RabbitMode::Everett).unwrap();
        assert_eq!(rabbit_game_value(&before, &x).unwrap().value(), 0.5);

        let after = RabbitScenario::new(3, 1, DrawTime::AfterBirth, RabbitMode::Everett).unwrap();
        assert_eq!(rabbit_game_value(&after, &x).unwrap().value(), 0.75);

        let symmetric =
            RabbitScenario::new(1, 1, DrawTime::AfterBirth, RabbitMode::Everett).unwrap();
        assert_eq!(rabbit_game_value(&symmetric, &x).unwrap().value(), 0.5);
    }

    #[test]
    fn rabbit_general_rewards() {
        let x = RewardSchedule::pair(2.0, -4.0).unwrap();
        let after = RabbitScenario::new(3, 1, DrawTime::AfterBirth, RabbitMode::Everett).unwrap();
        assert_eq!(rabbit_game_value(&after, &x).unwrap().value(), (3.0 * 2.0 + -4.0) / 4.0);
    }

    #[test]
    fn process_validation() {
        assert!(TwoStageProcess::new(vec![], vec![], SelectionRule::FollowOneBall).is_err());
        assert!(
            TwoStageProcess::new(vec![r(1, 2)], vec![1, 2], SelectionRule::FollowOneBall).is_err()
        );
        assert!(TwoStageProcess::new(
            vec![r(1, 2), r(1, 3)],
            vec![1, 1],
            SelectionRule::FollowOneBall
        )
        .is_err());
        assert!(TwoStageProcess::new(
            vec![r(1, 2), r(1, 2)],
            vec![1, 0],
            SelectionRule::DrawFromReceptacle
        )
        .is_err());
        assert!(RabbitScenario::new(0, 1, DrawTime::BeforeBirth, RabbitMode::Everett).is_err());
    }

    #[test]
    fn sampled_rounds_follow_the_formula() {
        let process = ball_game_process(BallGameMode::Everett, true);
        let mut rng = trial_rng(Seed::new(5), 0);
        let n = 40_000;
        let mut counts = [0_u64; 2];
        for _ in 0..n {
            counts[process.sample_round(&mut rng)] += 1;
        }
        let frac = counts[0] as f64 / n as f64;
        // 5 sigma around 3/4 at n = 40_000
        assert!((frac - 0.75).abs() < 5.0 * (0.75 * 0.25 / n as f64).sqrt());
    }
}

//! Apparatus-setting inference: estimating the magnet angle from counts,
//! and a discrete signaling channel built on that estimator.
//!
//! The sender transmits one symbol as `N` particles prepared at the symbol's
//! angle; the receiver sees only the counts `(M, N)`, inverts the squared
//! cosine law to an angle estimate, and decodes to the nearest alphabet
//! angle.  Whether the channel works depends entirely on the semantics in
//! force: Born statistics make the estimate track the setting, branch
//! counting pins it to a half turn regardless of the setting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{Angle, MeasurementSetup, OutcomeLabel};
use crate::sampling::{outcome_distribution, Seed, Semantics};
use crate::weights::WeightVector;

/// Angle estimates this close (radians) count as equidistant when decoding,
/// and ties resolve to the smaller alphabet index.
const DECODE_TIE_TOLERANCE: f64 = 1e-12;

/// An angle estimate obtained from `m` plus results in `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaEstimate {
    pub theta_hat: f64,
    pub m: u64,
    pub n: u64,
}

/// Inverts the squared-cosine law: `theta_hat = 2 acos(sqrt(m/n))`.
pub fn estimate_theta(m: u64, n: u64) -> Result<ThetaEstimate> {
    if n == 0 {
        return Err(Error::InvalidConfig("cannot estimate from zero trials".into()));
    }
    if m > n {
        return Err(Error::InvalidConfig(format!("count {m} exceeds trial count {n}")));
    }
    let theta_hat = 2.0 * (m as f64 / n as f64).sqrt().acos();
    Ok(ThetaEstimate { theta_hat, m, n })
}

/// Index of the alphabet angle nearest to the estimate; near-ties go to the
/// smaller index.
pub fn decode_symbol(estimate: &ThetaEstimate, alphabet: &[Angle]) -> Result<usize> {
    if alphabet.is_empty() {
        return Err(Error::EmptyOutcomes);
    }
    let mut best = 0;
    let mut best_dist = (estimate.theta_hat - alphabet[0].radians()).abs();
    for (k, angle) in alphabet.iter().enumerate().skip(1) {
        let dist = (estimate.theta_hat - angle.radians()).abs();
        if dist < best_dist - DECODE_TIE_TOLERANCE {
            best = k;
            best_dist = dist;
        }
    }
    Ok(best)
}

/// Channel parameters: the angle alphabet, particles per symbol, message
/// length, outcome semantics, and the run seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub alphabet: Vec<Angle>,
    pub particles_per_symbol: u64,
    pub message_length: usize,
    pub semantics: Semantics,
    pub seed: Seed,
}

impl ChannelConfig {
    pub fn new(
        alphabet: Vec<Angle>,
        particles_per_symbol: u64,
        message_length: usize,
        semantics: Semantics,
        seed: Seed,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidConfig("alphabet must not be empty".into()));
        }
        for angle in &alphabet {
            let theta = angle.radians();
            if !(theta > 0.0 && theta < std::f64::consts::PI) {
                return Err(Error::InvalidConfig(format!(
                    "alphabet angle {theta} outside the open interval (0, pi)"
                )));
            }
        }
        for (i, a) in alphabet.iter().enumerate() {
            for b in &alphabet[i + 1..] {
                if a.radians() == b.radians() {
                    return Err(Error::InvalidConfig(format!(
                        "alphabet angles must be pairwise distinct, {} repeats",
                        a.radians()
                    )));
                }
            }
        }
        if particles_per_symbol == 0 {
            return Err(Error::InvalidConfig("particlesPerSymbol must be at least 1".into()));
        }
        if message_length == 0 {
            return Err(Error::InvalidConfig("messageLength must be at least 1".into()));
        }
        Ok(ChannelConfig { alphabet, particles_per_symbol, message_length, semantics, seed })
    }

    /// The default message cycles through the alphabet.
    pub fn default_message(&self) -> Vec<usize> {
        (0..self.message_length).map(|i| i % self.alphabet.len()).collect()
    }
}

/// Decoding results over one message.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecodeReport {
    pub symbol_error_rate: f64,
    pub per_symbol_estimates: Vec<ThetaEstimate>,
    /// `confusion_counts[sent][decoded]`.
    pub confusion_counts: Vec<Vec<u64>>,
}

/// Transmits `message` through the channel and decodes each symbol.
///
/// Trial RNG streams are indexed by the global trial number
/// `symbol_index * particles_per_symbol + trial`, so the run is
/// reproducible under any execution order.
pub fn run_channel(config: &ChannelConfig, message: &[usize]) -> Result<DecodeReport> {
    if message.len() != config.message_length {
        return Err(Error::InvalidConfig(format!(
            "message length {} does not match configured length {}",
            message.len(),
            config.message_length
        )));
    }
    for &sym in message {
        if sym >= config.alphabet.len() {
            return Err(Error::InvalidConfig(format!(
                "message symbol {sym} outside alphabet of size {}",
                config.alphabet.len()
            )));
        }
    }

    let arity = config.alphabet.len();
    let n = config.particles_per_symbol;
    let mut confusion = vec![vec![0_u64; arity]; arity];
    let mut estimates = Vec::with_capacity(message.len());
    let mut errors = 0_u64;

    for (symbol_index, &sent) in message.iter().enumerate() {
        let setup = MeasurementSetup::new(config.alphabet[sent]);
        let p_plus = outcome_distribution(&setup, config.semantics).get_f64(0);
        let mut m = 0_u64;
        for trial in 0..n {
            let stream = symbol_index as u64 * n + trial;
            let mut rng = crate::sampling::trial_rng(config.seed, stream);
            if sample_with(p_plus, &mut rng) == OutcomeLabel::Plus {
                m += 1;
            }
        }
        let estimate = estimate_theta(m, n)?;
        let decoded = decode_symbol(&estimate, &config.alphabet)?;
        confusion[sent][decoded] += 1;
        if decoded != sent {
            errors += 1;
        }
        estimates.push(estimate);
    }

    Ok(DecodeReport {
        symbol_error_rate: errors as f64 / message.len() as f64,
        per_symbol_estimates: estimates,
        confusion_counts: confusion,
    })
}

fn sample_with(p_plus: f64, rng: &mut rand_chacha::ChaCha8Rng) -> OutcomeLabel {
    use rand::Rng;
    if rng.random::<f64>() < p_plus {
        OutcomeLabel::Plus
    } else {
        OutcomeLabel::Minus
    }
}

/// Exact plus probability seen by the receiver for a given sent angle; the
/// oracle used to pin error-rate thresholds.
pub fn symbol_plus_probability(theta: Angle, semantics: Semantics) -> WeightVector {
    outcome_distribution(&MeasurementSetup::new(theta), semantics)
}

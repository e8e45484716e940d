//! Spin states, rotations, and ancilla refinement for a two-channel
//! measurement.
//!
//! Amplitudes are real and signed: the only phase the derivations ever touch
//! is a sign flip, and weights depend on squared moduli alone.  Detector and
//! ancilla states are opaque labels, never vectors; all the bookkeeping that
//! matters is which channel a component belongs to and what its amplitude is.

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::{format_ratio, WeightVector, FLOAT_TOLERANCE};

/// Amplitudes closer to an eigenstate than this snap to it exactly, so that
/// angles like `pi` (whose half-angle cosine evaluates to ~6e-17) behave as
/// true eigenstates: deterministic outcomes, no spurious occupied branch.
const EIGENSTATE_SNAP: f64 = 1e-15;

/// An orientation of the measurement axis, normalized into `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    radians: f64,
}

impl Angle {
    pub fn from_radians(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NotFinite { what: "angle", value: theta });
        }
        let radians = theta.rem_euclid(std::f64::consts::TAU);
        Ok(Angle { radians })
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }
}

impl std::fmt::Display for Angle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.radians)
    }
}

/// The two measurement outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OutcomeLabel {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl OutcomeLabel {
    pub fn index(self) -> usize {
        match self {
            OutcomeLabel::Plus => 0,
            OutcomeLabel::Minus => 1,
        }
    }
}

impl std::fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OutcomeLabel::Plus => write!(f, "+"),
            OutcomeLabel::Minus => write!(f, "-"),
        }
    }
}

/// Signed real amplitudes over the two channels, normalized to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinAmplitudes {
    a_plus: f64,
    a_minus: f64,
}

impl SpinAmplitudes {
    pub fn new(a_plus: f64, a_minus: f64) -> Result<Self> {
        for (what, v) in [("a_plus", a_plus), ("a_minus", a_minus)] {
            if !v.is_finite() {
                return Err(Error::NotFinite { what, value: v });
            }
        }
        let norm = a_plus * a_plus + a_minus * a_minus;
        if (norm - 1.0).abs() > FLOAT_TOLERANCE {
            return Err(Error::NotNormalized { norm, tolerance: FLOAT_TOLERANCE });
        }
        Ok(SpinAmplitudes { a_plus, a_minus })
    }

    /// The state `(cos(theta/2), sin(theta/2))` prepared at `theta`.
    pub fn from_angle(angle: Angle) -> Self {
        let half = angle.radians() / 2.0;
        let mut c = half.cos();
        let mut s = half.sin();
        // half lies in [0, pi): s is non-negative, c spans (-1, 1].
        if c.abs() < EIGENSTATE_SNAP {
            c = 0.0;
            s = 1.0;
        } else if s.abs() < EIGENSTATE_SNAP {
            s = 0.0;
            c = c.signum();
        }
        SpinAmplitudes { a_plus: c, a_minus: s }
    }

    pub fn a_plus(&self) -> f64 {
        self.a_plus
    }

    pub fn a_minus(&self) -> f64 {
        self.a_minus
    }

    /// The state after rotating the magnet half a turn: `(c, s) -> (-s, c)`.
    ///
    /// The opposite sign convention would change nothing at the weight
    /// level, since weights square the amplitudes.
    pub fn rotate_pi(&self) -> Self {
        SpinAmplitudes { a_plus: -self.a_minus, a_minus: self.a_plus }
    }

    /// Squared-modulus weights `(c^2, s^2)` for the two outcomes.
    pub fn born_weights(&self) -> WeightVector {
        WeightVector::Approx(vec![self.a_plus * self.a_plus, self.a_minus * self.a_minus])
    }
}

/// Refinement multiplicities: how many equally weighted sub-channels each
/// outcome channel splits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AncillaSpec {
    k_plus: u32,
    k_minus: u32,
}

impl AncillaSpec {
    pub fn new(k_plus: u32, k_minus: u32) -> Result<Self> {
        if k_plus == 0 || k_minus == 0 {
            return Err(Error::InvalidMultiplicity { k_plus, k_minus });
        }
        Ok(AncillaSpec { k_plus, k_minus })
    }

    /// The `(1, 1)` refinement, which changes nothing.
    pub fn identity() -> Self {
        AncillaSpec { k_plus: 1, k_minus: 1 }
    }

    pub fn k_plus(&self) -> u32 {
        self.k_plus
    }

    pub fn k_minus(&self) -> u32 {
        self.k_minus
    }

    pub fn total(&self) -> u32 {
        self.k_plus + self.k_minus
    }

    /// Per-component squared amplitudes `(c^2/k+, s^2/k-)` for exact `c^2`.
    pub fn refined_squared_amplitudes(
        &self,
        c_squared: &BigRational,
    ) -> Result<(BigRational, BigRational)> {
        check_unit_interval(c_squared)?;
        let s_squared = BigRational::one() - c_squared;
        let plus = c_squared / BigRational::from_integer(self.k_plus.into());
        let minus = s_squared / BigRational::from_integer(self.k_minus.into());
        Ok((plus, minus))
    }

    /// Whether this refinement makes every component weight equal, i.e.
    /// `c^2/k+ = s^2/k-`, which holds exactly when `c^2 = k+/(k+ + k-)`.
    pub fn equalizes(&self, c_squared: &BigRational) -> Result<bool> {
        let (plus, minus) = self.refined_squared_amplitudes(c_squared)?;
        Ok(plus == minus)
    }
}

pub(crate) fn check_unit_interval(r: &BigRational) -> Result<()> {
    if r.is_negative() || r > &BigRational::one() {
        return Err(Error::RatioOutOfRange { ratio: format_ratio(r) });
    }
    Ok(())
}

/// One labeled component of a refined state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateComponent {
    pub label: OutcomeLabel,
    pub index: u32,
    pub amplitude: f64,
}

/// The spin-plus-ancilla state: an ordered list of labeled components.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedState {
    components: Vec<StateComponent>,
}

impl ExpandedState {
    pub fn components(&self) -> &[StateComponent] {
        &self.components
    }

    /// Squared amplitudes summed back per outcome channel.
    pub fn coarse_weights(&self) -> WeightVector {
        let mut sums = [0.0_f64; 2];
        for comp in &self.components {
            sums[comp.label.index()] += comp.amplitude * comp.amplitude;
        }
        WeightVector::Approx(sums.to_vec())
    }

    /// Number of components with nonzero amplitude per channel.
    pub fn occupied_counts(&self) -> (u32, u32) {
        let mut counts = [0_u32; 2];
        for comp in &self.components {
            if comp.amplitude != 0.0 {
                counts[comp.label.index()] += 1;
            }
        }
        (counts[0], counts[1])
    }
}

/// Splits each channel into its refinement components, spreading the channel
/// amplitude as `a/sqrt(k)` over `k` components.
pub fn apply_ancilla(state: &SpinAmplitudes, spec: &AncillaSpec) -> ExpandedState {
    let mut components = Vec::with_capacity(spec.total() as usize);
    let plus_amp = state.a_plus() / f64::from(spec.k_plus()).sqrt();
    for i in 0..spec.k_plus() {
        components.push(StateComponent { label: OutcomeLabel::Plus, index: i, amplitude: plus_amp });
    }
    let minus_amp = state.a_minus() / f64::from(spec.k_minus()).sqrt();
    for i in 0..spec.k_minus() {
        components.push(StateComponent { label: OutcomeLabel::Minus, index: i, amplitude: minus_amp });
    }
    ExpandedState { components }
}

/// Occupied-branch counting distribution: each component with nonzero
/// amplitude counts once, zero-amplitude channels spawn no branch.
pub fn branch_count_weights(state: &SpinAmplitudes, ancilla: Option<&AncillaSpec>) -> WeightVector {
    let spec = ancilla.copied().unwrap_or_else(AncillaSpec::identity);
    let occupied_plus = if state.a_plus() != 0.0 { spec.k_plus() } else { 0 };
    let occupied_minus = if state.a_minus() != 0.0 { spec.k_minus() } else { 0 };
    let total = occupied_plus + occupied_minus;
    debug_assert!(total > 0, "a normalized state occupies at least one branch");
    let total = BigRational::from_integer(total.into());
    WeightVector::Exact(vec![
        BigRational::from_integer(occupied_plus.into()) / &total,
        BigRational::from_integer(occupied_minus.into()) / total,
    ])
}

/// Experimental configuration: magnet angle plus optional refinement stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetup {
    pub angle: Angle,
    pub ancilla: Option<AncillaSpec>,
}

impl MeasurementSetup {
    pub fn new(angle: Angle) -> Self {
        MeasurementSetup { angle, ancilla: None }
    }

    pub fn with_ancilla(angle: Angle, ancilla: AncillaSpec) -> Self {
        MeasurementSetup { angle, ancilla: Some(ancilla) }
    }

    pub fn state(&self) -> SpinAmplitudes {
        SpinAmplitudes::from_angle(self.angle)
    }
}

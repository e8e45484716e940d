//! Exact bookkeeping over the branch expansion of `N` repeated measurements.
//!
//! After `N` two-outcome trials the state holds `2^N` branches; everything
//! of interest is a function of `m`, the number of plus results, so the
//! ledger stores one class per `m`: its branch count `C(N, m)`, the weight
//! `c^{2m} s^{2(N-m)}` each branch carries, and their product.  With a
//! rational `c^2` every entry is exact.  A compensated float path serves
//! window masses when `c^2` only exists as a float; its summation error is
//! bounded by 1e-10 (tested against the exact path).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quantum::check_unit_interval;
use crate::weights::format_ratio;

/// Largest supported number of trials.
pub const MAX_LEDGER_TRIALS: u32 = 10_000;

/// Rough memory cap for the exact table; class numerators grow with both
/// `N` and the bit size of the ratio, so huge denominators are refused
/// early instead of thrashing.
const MAX_TABLE_BYTES: u64 = 512 << 20;

/// One class of branches: all `C(N, m)` branches recording `m` plus results.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchClass {
    pub m: u32,
    pub count: BigUint,
    pub per_branch_weight: BigRational,
    pub class_weight: BigRational,
}

/// Mode and spread of the two measures over `m`, plus an optional
/// typicality window comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerSummary {
    pub n_trials: u32,
    pub c_squared: BigRational,
    /// argmax of the class weight; ties resolve to the smaller `m`.
    pub born_mode: u32,
    pub born_mode_tied: bool,
    /// `|c s| sqrt(N)`, cross-checked against `N c^2 s^2`.
    pub born_std: f64,
    /// argmax of the branch count; ties resolve to the smaller `m`.
    pub count_mode: u32,
    pub count_mode_tied: bool,
    pub typicality: Option<TypicalityWindow>,
}

/// How much of each measure falls in `[N c^2 - k std, N c^2 + k std]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityWindow {
    pub k: f64,
    /// Inclusive integer range of `m` inside the window; `None` when the
    /// window contains no integer.
    pub window: Option<(u32, u32)>,
    pub born_mass_in_window: BigRational,
    pub count_fraction_in_window: BigRational,
}

fn validate_ledger_inputs(n_trials: u32, c_squared: &BigRational) -> Result<()> {
    if n_trials == 0 || n_trials > MAX_LEDGER_TRIALS {
        return Err(Error::SizeLimit(format!(
            "trial count {n_trials} outside supported range 1..={MAX_LEDGER_TRIALS}"
        )));
    }
    check_unit_interval(c_squared)?;
    let ratio_bits = c_squared.numer().bits().max(c_squared.denom().bits()).max(1);
    let estimated = (n_trials as u64).pow(2).saturating_mul(ratio_bits) / 4;
    if estimated > MAX_TABLE_BYTES {
        return Err(Error::SizeLimit(format!(
            "exact table for N={n_trials} with a {ratio_bits}-bit ratio would exceed the memory budget; \
             use a smaller N or a simpler rational"
        )));
    }
    Ok(())
}

/// Builds all `N + 1` branch classes with exact counts and weights.
pub fn enumerate_branch_classes(n_trials: u32, c_squared: &BigRational) -> Result<Vec<BranchClass>> {
    validate_ledger_inputs(n_trials, c_squared)?;
    let n = n_trials as usize;
    let s_squared = BigRational::one() - c_squared;

    // Power tables avoid dividing by zero weights at the degenerate ratios.
    let mut c_pow = Vec::with_capacity(n + 1);
    let mut s_pow = Vec::with_capacity(n + 1);
    c_pow.push(BigRational::one());
    s_pow.push(BigRational::one());
    for i in 1..=n {
        c_pow.push(&c_pow[i - 1] * c_squared);
        s_pow.push(&s_pow[i - 1] * &s_squared);
    }

    let mut classes = Vec::with_capacity(n + 1);
    let mut count = BigUint::one();
    for m in 0..=n {
        let per_branch_weight = &c_pow[m] * &s_pow[n - m];
        let class_weight =
            &per_branch_weight * BigRational::from_integer(BigInt::from(count.clone()));
        classes.push(BranchClass {
            m: m as u32,
            count: count.clone(),
            per_branch_weight,
            class_weight,
        });
        if m < n {
            // C(N, m+1) = C(N, m) * (N - m) / (m + 1), exactly divisible.
            count = count * (n_trials - m as u32) / (m as u32 + 1);
        }
    }
    Ok(classes)
}

fn argmax_with_tie<T: Ord>(values: impl Iterator<Item = T>) -> (u32, bool) {
    let mut best_index = 0_u32;
    let mut best: Option<T> = None;
    let mut tied = false;
    for (i, v) in values.enumerate() {
        match &best {
            None => best = Some(v),
            Some(b) => {
                if v > *b {
                    best = Some(v);
                    best_index = i as u32;
                    tied = false;
                } else if v == *b {
                    tied = true;
                }
            }
        }
    }
    (best_index, tied)
}

fn summary_from_classes(
    n_trials: u32,
    c_squared: &BigRational,
    classes: &[BranchClass],
) -> Result<LedgerSummary> {
    let (born_mode, born_mode_tied) = argmax_with_tie(classes.iter().map(|c| &c.class_weight));
    let (count_mode, count_mode_tied) = argmax_with_tie(classes.iter().map(|c| &c.count));

    let c2 = c_squared.to_f64().unwrap_or(f64::NAN);
    let s2 = 1.0 - c2;
    let born_std = c2.sqrt() * s2.sqrt() * (n_trials as f64).sqrt();
    let variance = n_trials as f64 * c2 * s2;
    if (born_std * born_std - variance).abs() > 1e-12 * variance.max(1.0) {
        return Err(Error::InvalidConfig(format!(
            "standard deviation check failed: {} vs {}",
            born_std * born_std,
            variance
        )));
    }

    Ok(LedgerSummary {
        n_trials,
        c_squared: c_squared.clone(),
        born_mode,
        born_mode_tied,
        born_std,
        count_mode,
        count_mode_tied,
        typicality: None,
    })
}

/// Mode and spread of the Born measure over `m`.
pub fn born_summary(n_trials: u32, c_squared: &BigRational) -> Result<LedgerSummary> {
    let classes = enumerate_branch_classes(n_trials, c_squared)?;
    summary_from_classes(n_trials, c_squared, &classes)
}

fn integer_window(n_trials: u32, center: f64, half_width: f64) -> Option<(u32, u32)> {
    let lo = (center - half_width).ceil().max(0.0);
    let hi = (center + half_width).floor().min(n_trials as f64);
    if lo > hi {
        None
    } else {
        Some((lo as u32, hi as u32))
    }
}

/// Summary plus the mass each measure places within `k` Born standard
/// deviations of the Born mean.
pub fn typicality_report(n_trials: u32, c_squared: &BigRational, k: f64) -> Result<LedgerSummary> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidConfig(format!("window width k must be positive, got {k}")));
    }
    let classes = enumerate_branch_classes(n_trials, c_squared)?;
    let mut summary = summary_from_classes(n_trials, c_squared, &classes)?;

    let center = n_trials as f64 * c_squared.to_f64().unwrap_or(f64::NAN);
    let window = integer_window(n_trials, center, k * summary.born_std);

    let (born_mass, count_in_window) = match window {
        None => (BigRational::zero(), BigUint::zero()),
        Some((lo, hi)) => {
            let mut mass = BigRational::zero();
            let mut count = BigUint::zero();
            for class in &classes[lo as usize..=hi as usize] {
                mass += &class.class_weight;
                count += &class.count;
            }
            (mass, count)
        }
    };
    let total_count = BigUint::one() << n_trials as usize;
    let count_fraction =
        BigRational::new(BigInt::from(count_in_window), BigInt::from(total_count));

    summary.typicality = Some(TypicalityWindow {
        k,
        window,
        born_mass_in_window: born_mass,
        count_fraction_in_window: count_fraction,
    });
    Ok(summary)
}

/// Float path for the window masses when `c^2` is only known as a float.
///
/// Sums run outward from the distribution mode using the pmf ratio
/// recurrence, with Neumaier compensation; the result error stays below
/// 1e-10 of the true mass.  Returns `(born mass, count fraction)`.
pub fn typicality_masses_approx(n_trials: u32, c_squared: f64, k: f64) -> Result<(f64, f64)> {
    if n_trials == 0 || n_trials > MAX_LEDGER_TRIALS {
        return Err(Error::SizeLimit(format!(
            "trial count {n_trials} outside supported range 1..={MAX_LEDGER_TRIALS}"
        )));
    }
    if !(0.0..=1.0).contains(&c_squared) {
        return Err(Error::RatioOutOfRange { ratio: c_squared.to_string() });
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidConfig(format!("window width k must be positive, got {k}")));
    }
    let std = (n_trials as f64 * c_squared * (1.0 - c_squared)).sqrt();
    let center = n_trials as f64 * c_squared;
    let window = integer_window(n_trials, center, k * std);
    let born = binomial_window_mass(n_trials, c_squared, window);
    let count = binomial_window_mass(n_trials, 0.5, window);
    Ok((born, count))
}

/// Window mass of Binomial(n, p) via the mode-relative ratio recurrence.
fn binomial_window_mass(n: u32, p: f64, window: Option<(u32, u32)>) -> f64 {
    let Some((lo, hi)) = window else { return 0.0 };
    let in_window = |m: u32| m >= lo && m <= hi;

    if p == 0.0 {
        return if in_window(0) { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if in_window(n) { 1.0 } else { 0.0 };
    }

    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as u32;
    let odds = p / (1.0 - p);

    let mut total = NeumaierSum::default();
    let mut mass = NeumaierSum::default();
    let mut add = |m: u32, rel: f64| {
        total.add(rel);
        if in_window(m) {
            mass.add(rel);
        }
    };

    // Relative pmf values: 1 at the mode, decaying outward in both
    // directions, so nothing overflows regardless of n.
    add(mode, 1.0);
    let mut rel = 1.0;
    for m in (0..mode).rev() {
        // pmf(m) = pmf(m+1) * (m+1) / ((n-m) * odds)
        rel *= (m + 1) as f64 / ((n - m) as f64 * odds);
        if rel == 0.0 {
            break;
        }
        add(m, rel);
    }
    rel = 1.0;
    for m in (mode + 1)..=n {
        // pmf(m) = pmf(m-1) * (n-m+1) * odds / m
        rel *= (n - m + 1) as f64 * odds / m as f64;
        if rel == 0.0 {
            break;
        }
        add(m, rel);
    }
    mass.value() / total.value()
}

/// Compensated accumulator (Neumaier variant of Kahan summation).
#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Serializable view of one ledger row.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LedgerRow {
    pub m: u32,
    pub count: String,
    pub per_branch_weight: String,
    pub class_weight: String,
}

impl From<&BranchClass> for LedgerRow {
    fn from(class: &BranchClass) -> Self {
        LedgerRow {
            m: class.m,
            count: class.count.to_string(),
            per_branch_weight: format_ratio(&class.per_branch_weight),
            class_weight: format_ratio(&class.class_weight),
        }
    }
}

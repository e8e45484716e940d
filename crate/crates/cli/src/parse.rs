//! Flag-value parsers: angles with symbolic pi, exact rationals, pairs.

use borngames::quantum::Angle;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

/// Parses an angle given as decimal radians or a multiple of pi:
/// `1.0472`, `pi`, `pi/3`, `2pi/3`, `0.5pi`, `-pi/2`.
pub fn parse_angle(input: &str) -> Result<Angle, String> {
    let s = input.trim();
    let radians = if let Some(pos) = s.find("pi") {
        let (coef_str, rest) = (&s[..pos], &s[pos + 2..]);
        let coef = match coef_str {
            "" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient {other:?} in angle {input:?}"))?,
        };
        let denom = match rest {
            "" => 1.0,
            slash => {
                let d = slash
                    .strip_prefix('/')
                    .and_then(|d| d.parse::<f64>().ok())
                    .ok_or_else(|| format!("bad denominator {slash:?} in angle {input:?}"))?;
                if d == 0.0 {
                    return Err(format!("zero denominator in angle {input:?}"));
                }
                d
            }
        };
        coef * std::f64::consts::PI / denom
    } else {
        s.parse::<f64>().map_err(|_| format!("cannot parse angle {input:?}"))?
    };
    Angle::from_radians(radians).map_err(|e| e.to_string())
}

/// Parses an exact rational: `p/q` with arbitrary-precision integers, or a
/// decimal which converts exactly (every finite float is a rational).
pub fn parse_ratio(input: &str) -> Result<BigRational, String> {
    let s = input.trim();
    if let Some((p, q)) = s.split_once('/') {
        let numer = BigInt::from_str(p.trim())
            .map_err(|_| format!("cannot parse numerator in {input:?}"))?;
        let denom = BigInt::from_str(q.trim())
            .map_err(|_| format!("cannot parse denominator in {input:?}"))?;
        if denom.is_zero() {
            return Err(format!("zero denominator in {input:?}"));
        }
        Ok(BigRational::new(numer, denom))
    } else {
        let x = s.parse::<f64>().map_err(|_| format!("cannot parse ratio {input:?}"))?;
        BigRational::from_float(x).ok_or_else(|| format!("ratio {input:?} is not finite"))
    }
}

/// Parses `a,b` into two integers, e.g. ancilla multiplicities or litters.
pub fn parse_u32_pair(input: &str) -> Result<(u32, u32), String> {
    let (a, b) = input
        .split_once(',')
        .ok_or_else(|| format!("expected \"a,b\", got {input:?}"))?;
    let left = a.trim().parse::<u32>().map_err(|_| format!("bad integer {a:?}"))?;
    let right = b.trim().parse::<u32>().map_err(|_| format!("bad integer {b:?}"))?;
    Ok((left, right))
}

/// Parses `x,y` into two floats, e.g. a reward pair.
pub fn parse_f64_pair(input: &str) -> Result<(f64, f64), String> {
    let (a, b) = input
        .split_once(',')
        .ok_or_else(|| format!("expected \"x,y\", got {input:?}"))?;
    let left = a.trim().parse::<f64>().map_err(|_| format!("bad number {a:?}"))?;
    let right = b.trim().parse::<f64>().map_err(|_| format!("bad number {b:?}"))?;
    Ok((left, right))
}

/// Parses a comma-separated list of rationals, e.g. a stage-1 distribution.
pub fn parse_ratio_list(input: &str) -> Result<Vec<BigRational>, String> {
    input.split(',').map(parse_ratio).collect()
}

/// Parses a comma-separated list of positive integers.
pub fn parse_u32_list(input: &str) -> Result<Vec<u32>, String> {
    input
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad integer {s:?}")))
        .collect()
}

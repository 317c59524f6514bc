pub mod fft;
pub mod poly;
pub mod quad;

use std::f64::consts::{PI, TAU};

/// Reduce an angle to `[-pi, pi)`.
pub fn wrap_angle(t: f64) -> f64 {
    if (-PI..PI).contains(&t) {
        return t;
    }
    let r = (t + PI).rem_euclid(TAU) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return f64::NAN;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Outcome of a refinement sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Convergent,
    Divergent,
    Undetermined,
}

/// Growth factor that counts as one divergent doubling.
pub const GROWTH_FACTOR: f64 = 1.25;

/// Classify values obtained on successively doubled grids.
///
/// Divergent when the magnitude grows by at least [`GROWTH_FACTOR`] three
/// times in a row (or a value is infinite); convergent when the last increment
/// shrank to at most 0.9 of the previous one or the last relative change is
/// below `1e-3`.
pub fn classify_growth(values: &[f64]) -> Trend {
    if values.iter().any(|v| v.is_infinite()) {
        return Trend::Divergent;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Trend::Undetermined;
    }
    let mut run = 0;
    for w in values.windows(2) {
        let (a, b) = (w[0].abs(), w[1].abs());
        if a > 0.0 && b >= GROWTH_FACTOR * a {
            run += 1;
            if run >= 3 {
                return Trend::Divergent;
            }
        } else {
            run = 0;
        }
    }
    let n = values.len();
    if n < 2 {
        return Trend::Undetermined;
    }
    let last = values[n - 1];
    let prev = values[n - 2];
    let rel = (last - prev).abs() / last.abs().max(1e-300);
    if rel < 1e-3 {
        return Trend::Convergent;
    }
    if n >= 3 {
        let inc_last = (last - prev).abs();
        let inc_prev = (prev - values[n - 3]).abs();
        if inc_last <= 0.9 * inc_prev {
            return Trend::Convergent;
        }
    }
    Trend::Undetermined
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), -PI);
        assert!((wrap_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn growth_classification() {
        assert_eq!(classify_growth(&[1.0, 2.0, 4.0, 8.0]), Trend::Divergent);
        assert_eq!(classify_growth(&[1.0, 1.5, 1.75, 1.875]), Trend::Convergent);
        assert_eq!(classify_growth(&[1.0, 1.0 + 1e-5]), Trend::Convergent);
        assert_eq!(classify_growth(&[1.0, 2.0, 2.4, 2.8, 3.2]), Trend::Undetermined);
        assert_eq!(classify_growth(&[1.0, f64::NEG_INFINITY]), Trend::Divergent);
    }

    #[test]
    fn slope_of_line() {
        assert!((ls_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-15);
    }
}

//! Error metrics shared by the harness and the reports.

use alloc::string::String;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// Metric argument errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricError {
    LengthMismatch { left: usize, right: usize },
    ZeroVarianceActual,
    Empty,
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            MetricError::ZeroVarianceActual => write!(f, "actual values have zero variance"),
            MetricError::Empty => write!(f, "empty input"),
        }
    }
}

impl core::error::Error for MetricError {}

/// Mean absolute error in grade points.
pub fn mae(pred: &[f64], actual: &[f64]) -> Result<f64, MetricError> {
    if pred.len() != actual.len() {
        return Err(MetricError::LengthMismatch { left: pred.len(), right: actual.len() });
    }
    if pred.is_empty() {
        return Err(MetricError::Empty);
    }
    let sum: f64 = pred.iter().zip(actual).map(|(p, a)| (p - a).abs()).sum();
    Ok(sum / pred.len() as f64)
}

/// Squared sample correlation between predictions and actual values.
pub fn r_squared(pred: &[f64], actual: &[f64]) -> Result<f64, MetricError> {
    if pred.len() != actual.len() {
        return Err(MetricError::LengthMismatch { left: pred.len(), right: actual.len() });
    }
    let n = pred.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    let mp = pred.iter().sum::<f64>() / n as f64;
    let ma = actual.iter().sum::<f64>() / n as f64;
    let mut spa = 0.0;
    let mut spp = 0.0;
    let mut saa = 0.0;
    for i in 0..n {
        let dp = pred[i] - mp;
        let da = actual[i] - ma;
        spa += dp * da;
        spp += dp * dp;
        saa += da * da;
    }
    if saa <= 0.0 {
        return Err(MetricError::ZeroVarianceActual);
    }
    if spp <= 0.0 {
        // constant predictions carry no correlation; callers record this as
        // an absent R^2 rather than a number
        return Ok(f64::NAN);
    }
    Ok((spa * spa) / (spp * saa))
}

/// Final grades live on a 0..100 percentage scale.
pub fn clamp_grade(x: f64) -> f64 {
    x.clamp(0.0, 100.0)
}

/// Sample mean helper.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (denominator n).
pub fn variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Render a float the way the report files expect (shortest round-trip form).
pub fn fmt_f64(x: f64) -> String {
    use alloc::format;
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{:.1}", x)
    } else {
        format!("{}", x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mae_identity_and_shift() {
        let a = [70.0, 80.0, 55.0];
        assert_abs_diff_eq!(mae(&a, &a).unwrap(), 0.0);
        let shifted: alloc::vec::Vec<f64> = a.iter().map(|x| x + 5.0).collect();
        assert_abs_diff_eq!(mae(&shifted, &a).unwrap(), 5.0);
    }

    #[test]
    fn mae_hand_example() {
        assert_abs_diff_eq!(mae(&[75.0, 70.0], &[70.0, 80.0]).unwrap(), 7.5);
    }

    #[test]
    fn r_squared_identity_and_shift() {
        let a = [70.0, 80.0, 55.0, 62.0];
        assert_abs_diff_eq!(r_squared(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
        let shifted: alloc::vec::Vec<f64> = a.iter().map(|x| x + 5.0).collect();
        assert_abs_diff_eq!(r_squared(&shifted, &a).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn r_squared_errors() {
        assert_eq!(
            r_squared(&[1.0, 2.0], &[3.0]),
            Err(MetricError::LengthMismatch { left: 2, right: 1 })
        );
        assert_eq!(r_squared(&[1.0, 2.0], &[3.0, 3.0]), Err(MetricError::ZeroVarianceActual));
        assert!(r_squared(&[1.0, 1.0], &[3.0, 4.0]).unwrap().is_nan());
    }

    #[test]
    fn clamping() {
        assert_eq!(clamp_grade(-3.0), 0.0);
        assert_eq!(clamp_grade(104.2), 100.0);
        assert_eq!(clamp_grade(55.5), 55.5);
    }
}

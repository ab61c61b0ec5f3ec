use crate::{Error, Result};

fn check(y_true: &[f64], y_pred: &[f64]) -> Result<()> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch { expected: y_true.len(), actual: y_pred.len() });
    }
    if y_true.is_empty() {
        return Err(Error::Empty("no predictions to score".into()));
    }
    Ok(())
}

/// Maximum absolute error.
pub fn maxae(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check(y_true, y_pred)?;
    Ok(y_true.iter().zip(y_pred).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Mean absolute error.
pub fn mae(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check(y_true, y_pred)?;
    Ok(y_true.iter().zip(y_pred).map(|(a, b)| (a - b).abs()).sum::<f64>() / y_true.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(maxae(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(maxae(&[1.0, 2.0, 3.0], &[1.0, 2.0, 5.0]).unwrap(), 2.0);
        assert_eq!(maxae(&[-1.5], &[2.0]).unwrap(), 3.5);
        assert_eq!(mae(&[4.0, 4.0], &[4.0, 4.0]).unwrap(), 0.0);
        assert_eq!(mae(&[0.0, 0.0], &[1.0, 3.0]).unwrap(), 2.0);
        assert!(mae(&[], &[]).is_err());
        assert!(maxae(&[1.0], &[1.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn mean_never_exceeds_max(pairs in proptest::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..50)) {
            let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let (m, x) = (mae(&a, &b).unwrap(), maxae(&a, &b).unwrap());
            prop_assert!(m >= 0.0);
            prop_assert!(m <= x * (1.0 + 1e-12));
        }
    }
}

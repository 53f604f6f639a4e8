use crate::error::{Error, Result};

/// Thomas elimination for `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored.
pub(crate) fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if !pivot.is_normal() {
        return Err(Error::SingularSystem { row: 0 });
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if !pivot.is_normal() {
            return Err(Error::SingularSystem { row: i });
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 1 0; 1 2 1; 0 1 2] x = [3 4 3] has x = [1 1 1]
        let x = solve(&[0.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &[1.0, 1.0, 0.0], &[3.0, 4.0, 3.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let err = solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::SingularSystem { row: 0 });
    }
}

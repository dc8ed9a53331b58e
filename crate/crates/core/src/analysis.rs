//! Curve analysis: power-law slopes and crossings.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

/// Least-squares slope of log y against log x.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "a slope fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "log-log fit needs positive data, got ({x}, {y})"
        )));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all x values coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        slope,
        stderr,
        intercept,
    })
}

/// First sweep value where `a - b` changes sign, by linear interpolation
/// on the common grid. Both curves are (x, y) lists on the same x values.
pub fn find_crossing(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    if a.iter().zip(b).any(|(p, q)| p.0 != q.0) {
        return Err(Error::InvalidInput("curves are sampled on different grids".into()));
    }
    let d: Vec<(f64, f64)> = a.iter().zip(b).map(|(p, q)| (p.0, p.1 - q.1)).collect();
    for w in d.windows(2) {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        if d0 == 0.0 {
            return Ok(Some(x0));
        }
        if d0 * d1 < 0.0 {
            return Ok(Some(x0 + (x1 - x0) * d0 / (d0 - d1)));
        }
    }
    Ok(d.last().filter(|p| p.1 == 0.0).map(|p| p.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 / (x * x))).collect();
        let f = fit_slope(&pts).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-9);
        assert!(f.stderr < 1e-9);
        assert!(fit_slope(&pts[..2]).is_err());
    }

    #[test]
    fn crossings() {
        let a = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)];
        let b = [(0.0, 1.0), (1.0, 1.5), (2.0, 1.0)];
        assert!((find_crossing(&a, &b).unwrap().unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let c = [(0.0, 5.0), (1.0, 6.0), (2.0, 7.0)];
        assert_eq!(find_crossing(&a, &c).unwrap(), None);
    }
}

use crate::error::{Error, Result};
use alloc::format;

/// Ordinary least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Fits a line through `(x, y)` pairs. Needs two distinct abscissae.
pub fn ols(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::Degenerate(format!("{} points, need at least 2", points.len())));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) || !sxy.is_finite() {
        return Err(Error::Degenerate("abscissae have zero spread".into()));
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}

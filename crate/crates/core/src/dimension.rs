//! Box-counting dimension estimation.
//!
//! The box dimension is the computable proxy used wherever a Hausdorff
//! dimension bound is wanted; box dimension dominates Hausdorff dimension,
//! so "box dimension < 2" is the conservative check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::BitGrid;
use crate::scalar::Scalar;

/// Least-squares fit of `log N(s)` against `log(1/s)` over the box sizes.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionEstimate {
    pub dimension: f64,
    /// Standard error of the fitted slope.
    pub std_error: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual_rms: f64,
    pub counts: Vec<ScaleCount>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScaleCount {
    pub scale_px: usize,
    pub boxes: usize,
}

/// Count the boxes of side `scale` pixels meeting the occupied set.
fn box_count<T: Scalar>(g: &BitGrid<T>, scale: usize) -> usize {
    let bw = g.width() / scale;
    let mut hit = vec![false; bw * (g.height() / scale)];
    for (ix, iy) in g.iter_occupied() {
        hit[(iy / scale) * bw + ix / scale] = true;
    }
    hit.iter().filter(|&&h| h).count()
}

/// Box-counting dimension of the occupied set over the given box sizes
/// (in pixels). Every scale must divide both pixel dimensions of the grid
/// so each box is complete; at least three scales are required for a
/// meaningful fit.
pub fn box_counting_dimension<T: Scalar>(
    g: &BitGrid<T>,
    scales_px: &[usize],
) -> Result<DimensionEstimate> {
    if g.is_empty() {
        return Err(Error::EmptySet("box-counting dimension"));
    }
    if scales_px.len() < 3 {
        return Err(Error::InvalidScales(format!(
            "need at least 3 scales, got {}",
            scales_px.len()
        )));
    }
    let mut scales = scales_px.to_vec();
    scales.sort_unstable();
    scales.dedup();
    if scales.len() < scales_px.len() {
        return Err(Error::InvalidScales("duplicate scales".into()));
    }
    for &s in &scales {
        if s == 0 || g.width() % s != 0 || g.height() % s != 0 {
            return Err(Error::InvalidScales(format!(
                "scale {s} does not divide the {}x{} grid",
                g.width(),
                g.height()
            )));
        }
    }

    let counts: Vec<ScaleCount> = scales
        .iter()
        .map(|&s| ScaleCount {
            scale_px: s,
            boxes: box_count(g, s),
        })
        .collect();
    if counts.windows(2).all(|w| w[0].boxes == w[1].boxes) {
        return Err(Error::DegenerateFit);
    }

    // Least squares of y = ln N against x = ln(1/s).
    let n = counts.len() as f64;
    let xs: Vec<f64> = counts.iter().map(|c| -(c.scale_px as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (c.boxes as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let dof = (n - 2.0).max(1.0);
    Ok(DimensionEstimate {
        dimension: slope,
        std_error: (ss_res / dof / sxx).sqrt(),
        residual_rms: (ss_res / n).sqrt(),
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Rect, SeedRegion};

    #[test]
    fn full_square_has_dimension_two() {
        let g = BitGrid::with_seed(Rect::unit(), 512.0, Some(SeedRegion::Rect(Rect::unit())))
            .unwrap();
        let est = box_counting_dimension(&g, &[2, 4, 8, 16, 32, 64, 128]).unwrap();
        assert!((est.dimension - 2.0).abs() < 0.05, "dim = {}", est.dimension);
        assert!(est.residual_rms < 1e-9);
    }

    #[test]
    fn horizontal_segment_has_dimension_one() {
        let mut g = BitGrid::new(Rect::unit(), 512.0).unwrap();
        for ix in 0..512 {
            g.set(ix, 256, true);
        }
        let est = box_counting_dimension(&g, &[4, 8, 16, 32, 64]).unwrap();
        assert!((est.dimension - 1.0).abs() < 0.05, "dim = {}", est.dimension);
    }

    #[test]
    fn preconditions_are_enforced() {
        let g = BitGrid::with_seed(Rect::unit(), 100.0, Some(SeedRegion::Rect(Rect::unit())))
            .unwrap();
        assert!(matches!(
            box_counting_dimension(&g, &[2, 4]),
            Err(Error::InvalidScales(_))
        ));
        // 3 does not divide 100.
        assert!(matches!(
            box_counting_dimension(&g, &[2, 3, 4]),
            Err(Error::InvalidScales(_))
        ));
        let empty = BitGrid::new(Rect::unit(), 100.0).unwrap();
        assert!(matches!(
            box_counting_dimension(&empty, &[2, 4, 5]),
            Err(Error::EmptySet(_))
        ));
        // A single occupied pixel hits one box at every scale.
        let mut point = BitGrid::new(Rect::unit(), 100.0).unwrap();
        point.set(50, 50, true);
        assert!(matches!(
            box_counting_dimension(&point, &[2, 4, 5]),
            Err(Error::DegenerateFit)
        ));
    }
}

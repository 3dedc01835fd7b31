//! The Hausdorff metric on grids, driving every convergence criterion.
//!
//! Distances are computed through the exact Euclidean distance transform,
//! so for the represented center point-sets the returned values are exact
//! (they differ from the continuum Hausdorff distance of the underlying
//! sets by at most half a pixel diagonal per side).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::BitGrid;
use crate::scalar::{num, Scalar};

/// One directed Hausdorff term: `sup_{x in a} dist(x, b)`.
///
/// Errors on empty inputs; the Hausdorff distance is undefined on the empty
/// set and an empty iterate always signals a collapsed computation upstream.
pub fn directed_distance<T: Scalar>(a: &BitGrid<T>, b: &BitGrid<T>) -> Result<T> {
    check_pair(a, b)?;
    let dist_to_b = b.distance_sq_to_occupied();
    Ok(directed_from_field(a, &dist_to_b))
}

/// Hausdorff distance: the max of the two directed distances.
pub fn hausdorff_distance<T: Scalar>(a: &BitGrid<T>, b: &BitGrid<T>) -> Result<T> {
    check_pair(a, b)?;
    let dist_to_b = b.distance_sq_to_occupied();
    let dist_to_a = a.distance_sq_to_occupied();
    Ok(directed_from_field(a, &dist_to_b).max(directed_from_field(b, &dist_to_a)))
}

fn check_pair<T: Scalar>(a: &BitGrid<T>, b: &BitGrid<T>) -> Result<()> {
    if !a.same_geometry(b) {
        return Err(Error::GeometryMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet("Hausdorff distance"));
    }
    Ok(())
}

fn directed_from_field<T: Scalar>(a: &BitGrid<T>, dist_sq: &[u64]) -> T {
    let mut worst: u64 = 0;
    let w = a.width();
    for (ix, iy) in a.iter_occupied() {
        worst = worst.max(dist_sq[iy * w + ix]);
    }
    num::<T>((worst as f64).sqrt()) * a.pixel_width()
}

/// Squared pixel distance from cell `(cx, cy)` to the nearest occupied cell
/// of `g`, by expanding ring search. Exact; intended for small distances
/// where a full transform would be wasteful. `None` when `g` is empty.
pub(crate) fn nearest_occupied_sq<T: Scalar>(g: &BitGrid<T>, cx: usize, cy: usize) -> Option<u64> {
    let (w, h) = (g.width() as i64, g.height() as i64);
    let (cx, cy) = (cx as i64, cy as i64);
    let max_ring = w.max(h);
    let mut best: Option<u64> = None;
    for r in 0..=max_ring {
        if let Some(b) = best {
            // Cells at Chebyshev distance r are at Euclidean distance >= r.
            if (r * r) as u64 > b {
                break;
            }
        }
        let mut visit = |x: i64, y: i64| {
            if x >= 0 && y >= 0 && x < w && y < h && g.get(x as usize, y as usize) {
                let d = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) as u64;
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        };
        if r == 0 {
            visit(cx, cy);
            continue;
        }
        for x in cx - r..=cx + r {
            visit(x, cy - r);
            visit(x, cy + r);
        }
        for y in cy - r + 1..cy + r {
            visit(cx - r, y);
            visit(cx + r, y);
        }
    }
    best
}

/// Hausdorff step between two nested grids, measured only over `changed`
/// cells (those in one grid and not the other), in physical units.
pub(crate) fn step_over_cells<T: Scalar>(
    changed: &BitGrid<T>,
    against: &BitGrid<T>,
) -> Result<T> {
    let mut worst: u64 = 0;
    for (ix, iy) in changed.iter_occupied() {
        match nearest_occupied_sq(against, ix, iy) {
            Some(d) => worst = worst.max(d),
            None => return Err(Error::EmptySet("Hausdorff step")),
        }
    }
    Ok(num::<T>((worst as f64).sqrt()) * changed.pixel_width())
}

/// Distance trace of a set iteration, one entry per step, in physical units.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ConvergenceTrace {
    pub entries: Vec<TraceEntry>,
    pub converged: bool,
    pub final_distance: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub distance: f64,
}

impl ConvergenceTrace {
    pub fn push(&mut self, iteration: usize, distance: f64) {
        self.entries.push(TraceEntry {
            iteration,
            distance,
        });
        self.final_distance = distance;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point2, Rect, SeedRegion};
    use crate::grid::BoundaryMode;

    fn disk(r: f64) -> BitGrid {
        BitGrid::with_seed(
            Rect::unit(),
            100.0,
            Some(SeedRegion::Disk {
                center: Point2::new(0.5, 0.5),
                radius: r,
            }),
        )
        .unwrap()
    }

    #[test]
    fn identical_sets_have_zero_distance() {
        let g = disk(0.3);
        assert_eq!(hausdorff_distance(&g, &g).unwrap(), 0.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        let g = disk(0.3);
        let empty = BitGrid::new(Rect::unit(), 100.0).unwrap();
        assert!(matches!(
            hausdorff_distance(&g, &empty),
            Err(Error::EmptySet(_))
        ));
    }

    #[test]
    fn singleton_distance_is_point_distance() {
        // Cell centers 0.3 apart in x and 0.4 in y: a 3-4-5 triangle.
        let mut a: BitGrid = BitGrid::new(Rect::unit(), 100.0).unwrap();
        let mut b: BitGrid = BitGrid::new(Rect::unit(), 100.0).unwrap();
        a.set(10, 10, true);
        b.set(40, 50, true);
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - 0.5).abs() < 0.01, "d = {d}");
    }

    #[test]
    fn dilation_shifts_distance_by_eps() {
        let g = disk(0.3);
        let d = g.dilate(0.1, BoundaryMode::Strict).unwrap();
        let dist = hausdorff_distance(&g, &d).unwrap();
        assert!((dist - 0.1).abs() <= 1.5 * g.pixel_width(), "dist = {dist}");
    }

    #[test]
    fn matches_brute_force_exactly() {
        let a = disk(0.22);
        let b = disk(0.3)
            .difference(&disk(0.1))
            .unwrap();
        let brute = |from: &BitGrid, to: &BitGrid| -> f64 {
            let mut worst: f64 = 0.0;
            for (ax, ay) in from.iter_occupied() {
                let pa = from.cell_center(ax, ay);
                let mut best = f64::INFINITY;
                for (bx, by) in to.iter_occupied() {
                    best = best.min(pa.distance(to.cell_center(bx, by)));
                }
                worst = worst.max(best);
            }
            worst
        };
        let expected = brute(&a, &b).max(brute(&b, &a));
        let got = hausdorff_distance(&a, &b).unwrap();
        assert!((got - expected).abs() < 1e-9, "got {got}, brute {expected}");
    }

    #[test]
    fn containment_kills_one_direction() {
        let small = disk(0.2);
        let big = disk(0.4);
        assert_eq!(directed_distance(&small, &big).unwrap(), 0.0);
        let back = directed_distance(&big, &small).unwrap();
        assert!((back - 0.2).abs() < 0.02, "back = {back}");
    }

    #[test]
    fn segment_to_midpoint() {
        let mut seg: BitGrid = BitGrid::new(Rect::unit(), 100.0).unwrap();
        for i in 0..100 {
            seg.set(i, 50, true);
        }
        let mut mid: BitGrid = BitGrid::new(Rect::unit(), 100.0).unwrap();
        mid.set(50, 50, true);
        let d = directed_distance(&seg, &mid).unwrap();
        assert!((d - 0.5).abs() < 0.02, "d = {d}");
    }

    #[test]
    fn trace_tracks_final_distance() {
        let mut t = ConvergenceTrace::default();
        t.push(0, 0.5);
        t.push(1, 0.25);
        assert_eq!(t.final_distance, 0.25);
        assert_eq!(t.entries.len(), 2);
    }

    fn blob(seed: u64) -> BitGrid {
        let mut state = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(17);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut g = BitGrid::new(Rect::unit(), 48.0).unwrap();
        for _ in 0..3 {
            let c = Point2::new(0.2 + 0.6 * next(), 0.2 + 0.6 * next());
            let r = 0.05 + 0.1 * next();
            let d = BitGrid::with_seed(
                Rect::unit(),
                48.0,
                Some(SeedRegion::Disk { center: c, radius: r }),
            )
            .unwrap();
            g = g.union(&d).unwrap();
        }
        g
    }

    #[test]
    fn local_search_matches_transform() {
        let g = blob(9);
        let field = g.distance_sq_to_occupied();
        for iy in (0..48).step_by(5) {
            for ix in (0..48).step_by(3) {
                assert_eq!(
                    nearest_occupied_sq(&g, ix, iy),
                    Some(field[iy * 48 + ix]),
                    "cell ({ix},{iy})"
                );
            }
        }
    }

    #[test]
    fn metric_axioms_on_random_triples() {
        let diag = 2f64.sqrt() / 48.0;
        for seed in 0..30u64 {
            let a = blob(3 * seed);
            let b = blob(3 * seed + 1);
            let c = blob(3 * seed + 2);
            let dab = hausdorff_distance(&a, &b).unwrap();
            let dba = hausdorff_distance(&b, &a).unwrap();
            assert_eq!(dab, dba);
            let dac = hausdorff_distance(&a, &c).unwrap();
            let dcb = hausdorff_distance(&c, &b).unwrap();
            assert!(dab <= dac + dcb + diag, "triangle failed at seed {seed}");
            assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        }
    }
}

//! Discretized compact plane sets: occupancy bitmaps with physical bounds.
//!
//! A [`BitGrid`] represents a compact subset of an axis-aligned rectangle by
//! one bit per cell; a cell is occupied iff it meets the represented set,
//! sampled at the cell center. Grids are immutable after construction and
//! all operations are pure functions returning new grids, so values can be
//! shared freely across threads.
//!
//! Distances in the public API are physical; pixel conversions happen
//! internally through the resolution (pixels per unit length).

use crate::edt;
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect, SeedRegion};
use crate::scalar::{num, Scalar};

/// Out-of-bounds policy for morphological operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Escaping the bounds is a reported error.
    Strict,
    /// The result is clipped to the bounds.
    Clamped,
}

/// Pixel connectivity. The occupied set and its complement always use dual
/// connectivities (8/4 or 4/8) so the discrete Jordan property holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn dual(self) -> Connectivity {
        match self {
            Connectivity::Four => Connectivity::Eight,
            Connectivity::Eight => Connectivity::Four,
        }
    }

    fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Connectivity::Eight => &[
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (1, -1),
                (-1, 1),
                (-1, -1),
            ],
        }
    }
}

/// Occupancy bitmap over a physical rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct BitGrid<T: Scalar = f64> {
    bounds: Rect<T>,
    resolution: T,
    width: usize,
    height: usize,
    words: Vec<u64>,
}

/// Number of pixels covering `extent` at `resolution`, with a snap window so
/// that extents which are integer multiples of the pixel width up to f64
/// noise do not gain a spurious extra pixel.
fn pixel_count(extent: f64, resolution: f64) -> usize {
    let raw = extent * resolution;
    let snapped = raw.round();
    let px = if (raw - snapped).abs() < 1e-6 * snapped.max(1.0) {
        snapped
    } else {
        raw.ceil()
    };
    px as usize
}

impl<T: Scalar> BitGrid<T> {
    /// Empty grid over `bounds` at `resolution` pixels per unit length.
    pub fn new(bounds: Rect<T>, resolution: T) -> Result<Self> {
        if !(resolution > T::zero()) || !resolution.is_finite() {
            return Err(Error::param("resolution", "must be finite and positive"));
        }
        Rect::new(bounds.x0, bounds.y0, bounds.x1, bounds.y1)?;
        let width = pixel_count(bounds.width().as_f64(), resolution.as_f64());
        let height = pixel_count(bounds.height().as_f64(), resolution.as_f64());
        if width == 0 || height == 0 {
            return Err(Error::DegenerateBounds(
                "bounds smaller than one pixel".into(),
            ));
        }
        let nwords = (width * height + 63) / 64;
        Ok(BitGrid {
            bounds,
            resolution,
            width,
            height,
            words: vec![0; nwords],
        })
    }

    /// Grid with an optional seed region rasterized (cell occupied iff the
    /// cell center lies inside the region).
    pub fn with_seed(
        bounds: Rect<T>,
        resolution: T,
        seed: Option<SeedRegion<T>>,
    ) -> Result<Self> {
        let mut g = BitGrid::new(bounds, resolution)?;
        if let Some(region) = seed {
            if !bounds.contains_rect(&region.bounding_rect()) {
                return Err(Error::SeedOutsideBounds);
            }
            for iy in 0..g.height {
                for ix in 0..g.width {
                    if region.contains(g.cell_center(ix, iy)) {
                        g.set(ix, iy, true);
                    }
                }
            }
        }
        Ok(g)
    }

    /// Grid whose occupancy is `pred` sampled at cell centers.
    pub fn from_fn(
        bounds: Rect<T>,
        resolution: T,
        mut pred: impl FnMut(Point2<T>) -> bool,
    ) -> Result<Self> {
        let mut g = BitGrid::new(bounds, resolution)?;
        for iy in 0..g.height {
            for ix in 0..g.width {
                if pred(g.cell_center(ix, iy)) {
                    g.set(ix, iy, true);
                }
            }
        }
        Ok(g)
    }

    /// Empty grid sharing this grid's geometry.
    pub fn like(&self) -> Self {
        BitGrid {
            bounds: self.bounds,
            resolution: self.resolution,
            width: self.width,
            height: self.height,
            words: vec![0; self.words.len()],
        }
    }

    pub fn bounds(&self) -> Rect<T> {
        self.bounds
    }

    pub fn resolution(&self) -> T {
        self.resolution
    }

    /// Physical width of one pixel.
    pub fn pixel_width(&self) -> T {
        T::one() / self.resolution
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn same_geometry(&self, other: &Self) -> bool {
        self.bounds == other.bounds
            && self.resolution == other.resolution
            && self.width == other.width
            && self.height == other.height
    }

    #[inline]
    fn idx(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.width && iy < self.height);
        iy * self.width + ix
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> bool {
        let i = self.idx(ix, iy);
        self.words[i >> 6] >> (i & 63) & 1 != 0
    }

    #[inline]
    pub(crate) fn set(&mut self, ix: usize, iy: usize, value: bool) {
        let i = self.idx(ix, iy);
        if value {
            self.words[i >> 6] |= 1 << (i & 63);
        } else {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    /// Center of cell `(ix, iy)` in physical units.
    #[inline]
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2<T> {
        let half = num::<T>(0.5);
        let pw = self.pixel_width();
        Point2::new(
            self.bounds.x0 + (T::from_usize(ix).unwrap() + half) * pw,
            self.bounds.y0 + (T::from_usize(iy).unwrap() + half) * pw,
        )
    }

    /// Cell containing `p`, or `None` if `p` lies outside the grid.
    #[inline]
    pub fn cell_of(&self, p: Point2<T>) -> Option<(usize, usize)> {
        let fx = ((p.x - self.bounds.x0) * self.resolution).floor();
        let fy = ((p.y - self.bounds.y0) * self.resolution).floor();
        if fx < T::zero() || fy < T::zero() {
            return None;
        }
        let ix = fx.to_usize()?;
        let iy = fy.to_usize()?;
        if ix < self.width && iy < self.height {
            Some((ix, iy))
        } else {
            None
        }
    }

    /// True if `p` falls in an occupied cell.
    #[inline]
    pub fn contains_point(&self, p: Point2<T>) -> bool {
        self.cell_of(p).is_some_and(|(ix, iy)| self.get(ix, iy))
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn occupied_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterator over occupied cell indices.
    pub fn iter_occupied(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        (0..self.width * self.height).filter_map(move |i| {
            if self.words[i >> 6] >> (i & 63) & 1 != 0 {
                Some((i % w, i / w))
            } else {
                None
            }
        })
    }

    /// Pixel bounding box of the occupied set as `(ix0, iy0, ix1, iy1)`
    /// inclusive, or `None` when empty.
    pub fn occupied_bbox(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bbox: Option<(usize, usize, usize, usize)> = None;
        for (ix, iy) in self.iter_occupied() {
            bbox = Some(match bbox {
                None => (ix, iy, ix, iy),
                Some((x0, y0, x1, y1)) => (x0.min(ix), y0.min(iy), x1.max(ix), y1.max(iy)),
            });
        }
        bbox
    }

    fn check_geometry(&self, other: &Self) -> Result<()> {
        if self.same_geometry(other) {
            Ok(())
        } else {
            Err(Error::GeometryMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_geometry(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_geometry(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        Ok(out)
    }

    /// Cells occupied in `self` but not in `other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_geometry(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        Ok(out)
    }

    /// Complement within the bounds rectangle.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_tail();
        out
    }

    // Bits past width*height must stay zero for popcounts and equality.
    fn clear_tail(&mut self) {
        let n = self.width * self.height;
        if n & 63 != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << (n & 63)) - 1;
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check_geometry(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// Squared pixel distance from every cell to the nearest occupied cell
    /// ([`edt::UNREACHED`] when the grid is empty).
    pub fn distance_sq_to_occupied(&self) -> Vec<u64> {
        edt::squared_distances(self.width, self.height, |x, y| self.get(x, y))
    }

    /// Squared pixel distance from every cell to the nearest unoccupied cell
    /// center, counting the virtual unoccupied cells beyond the grid frame.
    /// The nearest out-of-frame center lies straight across the closest
    /// edge, so the frame term is exact.
    pub fn distance_sq_to_unoccupied(&self) -> Vec<u64> {
        let mut d = edt::squared_distances(self.width, self.height, |x, y| !self.get(x, y));
        for iy in 0..self.height {
            for ix in 0..self.width {
                let frame = (ix + 1)
                    .min(self.width - ix)
                    .min(iy + 1)
                    .min(self.height - iy) as u64;
                let cell = &mut d[iy * self.width + ix];
                *cell = (*cell).min(frame * frame);
            }
        }
        d
    }

    /// Epsilon-neighborhood: cell occupied iff its center lies within `eps`
    /// (physical units, Euclidean) of some occupied cell center.
    pub fn dilate(&self, eps: T, mode: BoundaryMode) -> Result<Self> {
        if eps < T::zero() || !eps.is_finite() {
            return Err(Error::param("eps", "must be finite and non-negative"));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if mode == BoundaryMode::Strict {
            // The true eps-neighborhood escapes iff some occupied center is
            // closer than eps to the bounds boundary.
            let (x0, y0, x1, y1) = self.occupied_bbox().expect("nonempty");
            let pw = self.pixel_width();
            let half = num::<T>(0.5);
            let min_edge = (T::from_usize(x0).unwrap() + half)
                .min(T::from_usize(self.width - 1 - x1).unwrap() + half)
                .min(T::from_usize(y0).unwrap() + half)
                .min(T::from_usize(self.height - 1 - y1).unwrap() + half)
                * pw;
            if min_edge < eps {
                return Err(Error::DilationEscapes { eps: eps.as_f64() });
            }
        }
        let thr = sq_threshold((eps * self.resolution).as_f64());
        let dist = self.distance_sq_to_occupied();
        let mut out = self.like();
        for iy in 0..self.height {
            for ix in 0..self.width {
                if (dist[iy * self.width + ix] as f64) <= thr {
                    out.set(ix, iy, true);
                }
            }
        }
        Ok(out)
    }

    /// Erosion: cell occupied iff the closed `eps`-ball around its center is
    /// entirely covered by occupied cells. Cells beyond the grid frame count
    /// as unoccupied, so eroding always clears a margin along the frame.
    pub fn erode(&self, eps: T) -> Result<Self> {
        if eps < T::zero() || !eps.is_finite() {
            return Err(Error::param("eps", "must be finite and non-negative"));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        let thr = sq_threshold((eps * self.resolution).as_f64());
        let dist = self.distance_sq_to_unoccupied();
        let mut out = self.like();
        for iy in 0..self.height {
            for ix in 0..self.width {
                if self.get(ix, iy) && (dist[iy * self.width + ix] as f64) > thr {
                    out.set(ix, iy, true);
                }
            }
        }
        Ok(out)
    }

    /// Morphological closing (dilate then erode) by `eps`, clamped at the
    /// bounds. Seals complement gaps narrower than about `2 * eps`.
    pub fn close(&self, eps: T) -> Result<Self> {
        self.dilate(eps, BoundaryMode::Clamped)?.erode(eps)
    }

    /// True iff every occupied cell of `self` survives eroding `other` by
    /// `margin_px` pixels: the trapping-region inclusion `A` inside the
    /// interior of `B`. A margin of at least one pixel guards against
    /// rasterization contact.
    pub fn subset_of_interior(&self, other: &Self, margin_px: f64) -> Result<bool> {
        self.check_geometry(other)?;
        if margin_px < 0.0 || !margin_px.is_finite() {
            return Err(Error::param("margin_px", "must be finite and non-negative"));
        }
        let thr = sq_threshold(margin_px);
        let dist = other.distance_sq_to_unoccupied();
        for (ix, iy) in self.iter_occupied() {
            if (dist[iy * self.width + ix] as f64) <= thr {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Finite-scale interior test: true iff eroding by `eps` leaves
    /// something. `eps` must be at least two pixel widths so the verdict is
    /// about the set, not about rasterization noise.
    pub fn interior_nonempty(&self, eps: T) -> Result<bool> {
        if eps < num::<T>(2.0) * self.pixel_width() {
            return Err(Error::param("eps", "must be at least two pixel widths"));
        }
        Ok(!self.erode(eps)?.is_empty())
    }

    /// Connected components of the occupied set (with `connectivity`) and of
    /// the complement (with the dual connectivity). All complement cells
    /// reachable from the frame belong to the single unbounded component,
    /// which also accounts for the plane outside the bounds.
    pub fn components(&self, connectivity: Connectivity) -> ComponentReport {
        let w = self.width;
        let h = self.height;
        const UNSET: u32 = u32::MAX;
        let mut labels = vec![UNSET; w * h];
        let mut stack: Vec<(usize, usize)> = Vec::new();

        let flood = |labels: &mut Vec<u32>,
                         stack: &mut Vec<(usize, usize)>,
                         seed: (usize, usize),
                         id: u32,
                         conn: Connectivity,
                         value: bool| {
            stack.push(seed);
            labels[seed.1 * w + seed.0] = id;
            while let Some((cx, cy)) = stack.pop() {
                for &(dx, dy) in conn.offsets() {
                    let nx = cx as i64 + dx;
                    let ny = cy as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let (nx, ny) = (nx as usize, ny as usize);
                    if labels[ny * w + nx] == UNSET && self.get(nx, ny) == value {
                        labels[ny * w + nx] = id;
                        stack.push((nx, ny));
                    }
                }
            }
        };

        // Occupied components: ids 1..=n.
        let mut set_components = 0u32;
        for iy in 0..h {
            for ix in 0..w {
                if self.get(ix, iy) && labels[iy * w + ix] == UNSET {
                    set_components += 1;
                    flood(
                        &mut labels,
                        &mut stack,
                        (ix, iy),
                        set_components,
                        connectivity,
                        true,
                    );
                }
            }
        }

        // Unbounded complement: everything reachable from the frame, id 0.
        let dual = connectivity.dual();
        for iy in 0..h {
            for ix in 0..w {
                let on_frame = ix == 0 || iy == 0 || ix == w - 1 || iy == h - 1;
                if on_frame && !self.get(ix, iy) && labels[iy * w + ix] == UNSET {
                    flood(&mut labels, &mut stack, (ix, iy), 0, dual, false);
                }
            }
        }

        // Remaining complement cells form the bounded components.
        let mut bounded = 0u32;
        for iy in 0..h {
            for ix in 0..w {
                if !self.get(ix, iy) && labels[iy * w + ix] == UNSET {
                    bounded += 1;
                    flood(
                        &mut labels,
                        &mut stack,
                        (ix, iy),
                        set_components + bounded,
                        dual,
                        false,
                    );
                }
            }
        }

        ComponentReport {
            set_components: set_components as usize,
            bounded_complement_components: bounded as usize,
            unbounded_complement_components: 1,
            width: w,
            height: h,
            set_component_count: set_components,
            labels,
        }
    }

    /// OR-pooling downsample by an integer factor: a coarse cell is occupied
    /// iff any fine cell under it is. This is the natural "render the same
    /// set at lower resolution" for occupancy grids.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::param("factor", "must be positive"));
        }
        if factor == 1 {
            return Ok(self.clone());
        }
        let res = self.resolution / T::from_usize(factor).unwrap();
        let mut out = BitGrid::new(self.bounds, res)?;
        for (ix, iy) in self.iter_occupied() {
            let cx = (ix / factor).min(out.width - 1);
            let cy = (iy / factor).min(out.height - 1);
            out.set(cx, cy, true);
        }
        Ok(out)
    }
}

/// Squared-pixel-distance comparison threshold for a radius in pixels, with
/// a relative slack so exact integer radii keep their boundary ring.
fn sq_threshold(radius_px: f64) -> f64 {
    let r2 = radius_px * radius_px;
    r2 + 1e-9 * r2.max(1.0)
}

/// Component counts plus the per-pixel label map.
///
/// Label encoding: `0` is the single unbounded complement component (which
/// includes the plane beyond the grid frame), `1..=set_components` are the
/// occupied components, and higher ids are the bounded complement
/// components.
#[derive(Debug, Clone)]
pub struct ComponentReport {
    pub set_components: usize,
    pub bounded_complement_components: usize,
    /// Always 1: the frame identifies every escape route with the one
    /// unbounded component of the plane complement.
    pub unbounded_complement_components: usize,
    width: usize,
    height: usize,
    set_component_count: u32,
    labels: Vec<u32>,
}

impl ComponentReport {
    pub fn label(&self, ix: usize, iy: usize) -> u32 {
        assert!(ix < self.width && iy < self.height);
        self.labels[iy * self.width + ix]
    }

    /// True iff the cell lies in a bounded complement component.
    pub fn is_in_bounded_complement(&self, ix: usize, iy: usize) -> bool {
        let l = self.label(ix, iy);
        l > self.set_component_count
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_bounds() -> Rect {
        Rect::unit()
    }

    fn disk(center: (f64, f64), radius: f64) -> SeedRegion {
        SeedRegion::Disk {
            center: Point2::new(center.0, center.1),
            radius,
        }
    }

    #[test]
    fn full_rectangle_seed_occupies_everything() {
        let g = BitGrid::with_seed(unit_bounds(), 100.0, Some(SeedRegion::Rect(unit_bounds())))
            .unwrap();
        assert_eq!((g.width(), g.height()), (100, 100));
        assert_eq!(g.occupied_count(), 100 * 100);
    }

    #[test]
    fn disk_seed_count_matches_area() {
        let bounds = Rect::new(-1.0, -1.0, 1.0, 1.0).unwrap();
        let g = BitGrid::with_seed(bounds, 200.0, Some(disk((0.0, 0.0), 0.5))).unwrap();
        let expected = std::f64::consts::PI * (0.5 * 200.0) * (0.5 * 200.0);
        let got = g.occupied_count() as f64;
        assert!(
            (got - expected).abs() < 0.02 * expected,
            "got {got}, expected about {expected}"
        );
    }

    #[test]
    fn no_seed_is_empty() {
        let g = BitGrid::with_seed(unit_bounds(), 100.0, None).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.occupied_count(), 0);
    }

    #[test]
    fn seed_outside_bounds_is_rejected() {
        let err = BitGrid::with_seed(unit_bounds(), 50.0, Some(disk((0.9, 0.5), 0.3)));
        assert!(matches!(err, Err(Error::SeedOutsideBounds)));
    }

    #[test]
    fn degenerate_bounds_are_rejected() {
        assert!(Rect::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(matches!(
            BitGrid::<f64>::new(
                Rect {
                    x0: 1.0,
                    y0: 0.0,
                    x1: 0.0,
                    y1: 1.0
                },
                10.0
            ),
            Err(Error::DegenerateBounds(_))
        ));
    }

    #[test]
    fn dilate_zero_is_identity() {
        let g = BitGrid::with_seed(unit_bounds(), 64.0, Some(disk((0.5, 0.5), 0.2))).unwrap();
        assert_eq!(g.dilate(0.0, BoundaryMode::Strict).unwrap(), g);
    }

    #[test]
    fn dilate_single_pixel_gives_discrete_disk() {
        // One occupied pixel dilated by 10 pixel widths: the discrete disk
        // of lattice points with i^2 + j^2 <= 100 has 317 members.
        let mut g = BitGrid::new(unit_bounds(), 100.0).unwrap();
        g.set(50, 50, true);
        let d = g.dilate(0.1, BoundaryMode::Strict).unwrap();
        assert_eq!(d.occupied_count(), 317);
    }

    #[test]
    fn clamped_dilation_of_full_grid_is_idempotent() {
        let full = BitGrid::with_seed(unit_bounds(), 32.0, Some(SeedRegion::Rect(unit_bounds())))
            .unwrap();
        assert!(matches!(
            full.dilate(0.1, BoundaryMode::Strict),
            Err(Error::DilationEscapes { .. })
        ));
        assert_eq!(full.dilate(0.1, BoundaryMode::Clamped).unwrap(), full);
    }

    #[test]
    fn erode_zero_is_identity() {
        let g = BitGrid::with_seed(unit_bounds(), 64.0, Some(disk((0.5, 0.5), 0.2))).unwrap();
        assert_eq!(g.erode(0.0).unwrap(), g);
    }

    #[test]
    fn erode_disk_shrinks_radius() {
        let bounds = Rect::new(-1.0, -1.0, 1.0, 1.0).unwrap();
        let g = BitGrid::with_seed(bounds, 200.0, Some(disk((0.0, 0.0), 0.5))).unwrap();
        let e = g.erode(0.2).unwrap();
        let expected = std::f64::consts::PI * (0.3 * 200.0) * (0.3 * 200.0);
        let got = e.occupied_count() as f64;
        assert!(
            (got - expected).abs() < 0.03 * expected,
            "got {got}, expected about {expected}"
        );
    }

    #[test]
    fn erode_thin_curve_to_nothing() {
        let mut g = BitGrid::new(unit_bounds(), 100.0).unwrap();
        for i in 10..90 {
            g.set(i, 40 + i / 9, true);
        }
        assert!(!g.is_empty());
        assert!(g.erode(0.02).unwrap().is_empty());
    }

    #[test]
    fn components_of_solid_disk() {
        let g = BitGrid::with_seed(unit_bounds(), 128.0, Some(disk((0.5, 0.5), 0.3))).unwrap();
        let report = g.components(Connectivity::Eight);
        assert_eq!(report.set_components, 1);
        assert_eq!(report.bounded_complement_components, 0);
        assert_eq!(report.unbounded_complement_components, 1);
    }

    #[test]
    fn components_of_annulus() {
        let outer = BitGrid::with_seed(unit_bounds(), 128.0, Some(disk((0.5, 0.5), 0.4))).unwrap();
        let inner = BitGrid::with_seed(unit_bounds(), 128.0, Some(disk((0.5, 0.5), 0.2))).unwrap();
        let annulus = outer.difference(&inner).unwrap();
        let report = annulus.components(Connectivity::Eight);
        assert_eq!(report.set_components, 1);
        assert_eq!(report.bounded_complement_components, 1);
        // The hole contains the grid center.
        assert!(report.is_in_bounded_complement(64, 64));
    }

    #[test]
    fn components_of_two_disks_add_up() {
        let a = BitGrid::with_seed(unit_bounds(), 128.0, Some(disk((0.25, 0.5), 0.15))).unwrap();
        let b = BitGrid::with_seed(unit_bounds(), 128.0, Some(disk((0.75, 0.5), 0.15))).unwrap();
        let both = a.union(&b).unwrap();
        let report = both.components(Connectivity::Eight);
        assert_eq!(report.set_components, 2);
        assert_eq!(report.bounded_complement_components, 0);
    }

    #[test]
    fn subset_of_interior_basic_cases() {
        let small = BitGrid::with_seed(unit_bounds(), 100.0, Some(disk((0.5, 0.5), 0.3))).unwrap();
        let big = BitGrid::with_seed(unit_bounds(), 100.0, Some(disk((0.5, 0.5), 0.5))).unwrap();
        assert!(small.subset_of_interior(&big, 2.0).unwrap());
        // A nonempty set is never inside its own interior minus a margin.
        assert!(!big.subset_of_interior(&big, 1.0).unwrap());
    }

    #[test]
    fn subset_of_interior_annuli() {
        let ring = |r0: f64, r1: f64| {
            let outer =
                BitGrid::with_seed(unit_bounds(), 100.0, Some(disk((0.5, 0.5), r1))).unwrap();
            let inner =
                BitGrid::with_seed(unit_bounds(), 100.0, Some(disk((0.5, 0.5), r0))).unwrap();
            outer.difference(&inner).unwrap()
        };
        // Radial containment oracle: 0.15 + 2/100 < 0.2 and 0.4 < 0.45 - 2/100.
        let a = ring(0.2, 0.4);
        let b = ring(0.15, 0.45);
        assert!(a.subset_of_interior(&b, 2.0).unwrap());
        assert!(!b.subset_of_interior(&a, 2.0).unwrap());
    }

    #[test]
    fn subset_of_interior_rejects_mismatched_geometry() {
        let a = BitGrid::new(unit_bounds(), 10.0).unwrap();
        let b = BitGrid::new(unit_bounds(), 20.0).unwrap();
        assert!(matches!(
            a.subset_of_interior(&b, 1.0),
            Err(Error::GeometryMismatch)
        ));
    }

    #[test]
    fn interior_tests() {
        let solid = BitGrid::with_seed(unit_bounds(), 100.0, Some(disk((0.5, 0.5), 0.4))).unwrap();
        assert!(solid.interior_nonempty(0.05).unwrap());
        let empty = BitGrid::new(unit_bounds(), 100.0).unwrap();
        assert!(!empty.interior_nonempty(0.05).unwrap());
        // eps below two pixel widths is a parameter error.
        assert!(solid.interior_nonempty(0.01).is_ok());
        assert!(solid.interior_nonempty(0.005).is_err());
    }

    fn random_blob(seed: u64, res: f64) -> BitGrid {
        // A union of a few random disks, kept away from the frame.
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut g = BitGrid::new(unit_bounds(), res).unwrap();
        for _ in 0..4 {
            let cx = 0.3 + 0.4 * next();
            let cy = 0.3 + 0.4 * next();
            let r = 0.03 + 0.12 * next();
            let d = BitGrid::with_seed(unit_bounds(), res, Some(disk((cx, cy), r))).unwrap();
            g = g.union(&d).unwrap();
        }
        g
    }

    #[test]
    fn dilation_and_erosion_are_monotone_in_eps() {
        for seed in 0..6u64 {
            let g = random_blob(seed, 64.0);
            let d1 = g.dilate(0.03, BoundaryMode::Clamped).unwrap();
            let d2 = g.dilate(0.07, BoundaryMode::Clamped).unwrap();
            assert!(d1.is_subset_of(&d2).unwrap());
            let e1 = g.erode(0.03).unwrap();
            let e2 = g.erode(0.07).unwrap();
            assert!(e2.is_subset_of(&e1).unwrap());
            // erode(dilate(g, eps), eps) contains g when the dilation stayed
            // inside the bounds.
            if let Ok(d) = g.dilate(0.05, BoundaryMode::Strict) {
                assert!(g.is_subset_of(&d.erode(0.05).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn dilation_erosion_duality() {
        // complement(dilate(g, eps)) == erode(complement(g), eps) away from
        // the frame; with the virtual-outside erosion rule the identity is
        // exact wherever the frame term does not bind, and the frame term
        // only removes cells, so subset holds globally.
        for seed in 0..6u64 {
            let g = random_blob(seed, 64.0);
            let eps = 0.04;
            let lhs = g.dilate(eps, BoundaryMode::Clamped).unwrap().complement();
            let rhs = g.complement().erode(eps).unwrap();
            assert!(rhs.is_subset_of(&lhs).unwrap());
            // Interior agreement: cells further than eps from the frame.
            let margin = (eps * 64.0).ceil() as usize + 1;
            for iy in margin..64 - margin {
                for ix in margin..64 - margin {
                    assert_eq!(lhs.get(ix, iy), rhs.get(ix, iy), "cell ({ix},{iy})");
                }
            }
        }
    }

    #[test]
    fn hole_count_nonincreasing_under_dilation() {
        for seed in 0..4u64 {
            let g = random_blob(seed, 96.0);
            let pw = g.pixel_width();
            let mut prev = g
                .dilate(pw, BoundaryMode::Clamped)
                .unwrap()
                .components(Connectivity::Eight)
                .bounded_complement_components;
            for k in [2.0, 4.0, 8.0, 16.0] {
                let holes = g
                    .dilate(pw * k, BoundaryMode::Clamped)
                    .unwrap()
                    .components(Connectivity::Eight)
                    .bounded_complement_components;
                assert!(holes <= prev, "holes grew under dilation (seed {seed})");
                prev = holes;
            }
        }
    }

    #[test]
    fn component_count_adds_for_frame_separated_grids() {
        let a = random_blob(1, 64.0);
        let b = random_blob(2, 64.0);
        // Place b's pattern shifted into a disjoint frame region by
        // constructing a doubled-width grid.
        let wide = Rect::new(0.0, 0.0, 2.0, 1.0).unwrap();
        let mut combined = BitGrid::new(wide, 64.0).unwrap();
        for (ix, iy) in a.iter_occupied() {
            combined.set(ix, iy, true);
        }
        for (ix, iy) in b.iter_occupied() {
            combined.set(ix + 64, iy, true);
        }
        let ca = a.components(Connectivity::Eight).set_components;
        let cb = b.components(Connectivity::Eight).set_components;
        let cc = combined.components(Connectivity::Eight).set_components;
        assert_eq!(cc, ca + cb);
    }

    #[test]
    fn coarsen_preserves_occupancy_cover() {
        let g = random_blob(3, 128.0);
        let c = g.coarsen(2).unwrap();
        assert_eq!(c.width(), 64);
        for (ix, iy) in g.iter_occupied() {
            assert!(c.get(ix / 2, iy / 2));
        }
    }
}

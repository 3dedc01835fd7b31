//! Iterated function systems: Hutchinson operator, attractor computation by
//! deterministic set iteration and by random iteration, contraction
//! analysis, and the built-in reference systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dimension::DimensionEstimate;
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::grid::{BitGrid, Connectivity};
use crate::hyperspace::{hausdorff_distance, ConvergenceTrace};
use crate::scalar::{num, Scalar};
use crate::shape::{H1Rank, ShapeClass};

/// Affine plane map `(x, y) -> (a x + b y + e, c x + d y + f)`.
///
/// The linear part is dimensionless; the translation is in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap2<T: Scalar = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
}

impl<T: Scalar> AffineMap2<T> {
    pub fn new(a: T, b: T, c: T, d: T, e: T, f: T) -> Self {
        AffineMap2 { a, b, c, d, e, f }
    }

    pub fn identity() -> Self {
        Self::similarity(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// Uniform scaling about the origin composed with a translation.
    pub fn scaling(scale: T, tx: T, ty: T) -> Self {
        Self::similarity(scale, T::zero(), tx, ty)
    }

    /// Orientation-preserving similarity: rotation by `angle`, scaling by
    /// `scale`, then translation.
    pub fn similarity(scale: T, angle: T, tx: T, ty: T) -> Self {
        let (s, c) = angle.sin_cos();
        AffineMap2 {
            a: scale * c,
            b: -scale * s,
            c: scale * s,
            d: scale * c,
            e: tx,
            f: ty,
        }
    }

    /// Rigid rotation about an arbitrary center.
    pub fn rotation_about(center: Point2<T>, angle: T) -> Self {
        let rot = Self::similarity(T::one(), angle, T::zero(), T::zero());
        let rc = rot.apply(center);
        AffineMap2 {
            e: center.x - rc.x,
            f: center.y - rc.y,
            ..rot
        }
    }

    #[inline]
    pub fn apply(&self, p: Point2<T>) -> Point2<T> {
        Point2::new(
            self.a * p.x + self.b * p.y + self.e,
            self.c * p.x + self.d * p.y + self.f,
        )
    }

    pub fn determinant(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if det.abs() < num::<T>(1e-14) {
            return Err(Error::NonInvertible {
                det: det.as_f64(),
            });
        }
        let inv = T::one() / det;
        let (a, b, c, d) = (self.d * inv, -self.b * inv, -self.c * inv, self.a * inv);
        Ok(AffineMap2 {
            a,
            b,
            c,
            d,
            e: -(a * self.e + b * self.f),
            f: -(c * self.e + d * self.f),
        })
    }

    /// `self` after `inner`: `(self ∘ inner)(x) = self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        AffineMap2 {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
            e: self.a * inner.e + self.b * inner.f + self.e,
            f: self.c * inner.e + self.d * inner.f + self.f,
        }
    }

    /// Lipschitz constant of the map: the largest singular value of the
    /// linear part. Exact for similarities, where it equals the scale.
    pub fn contraction_factor(&self) -> T {
        let s = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.determinant();
        let four = num::<T>(4.0);
        let half = num::<T>(0.5);
        let disc = (s * s - four * det * det).max(T::zero());
        (half * (s + disc.sqrt())).sqrt()
    }

    /// Fixed point of the map, when the linear part has no eigenvalue 1.
    pub fn fixed_point(&self) -> Option<Point2<T>> {
        // Solve (I - L) p = t.
        let (a, b, c, d) = (T::one() - self.a, -self.b, -self.c, T::one() - self.d);
        let det = a * d - b * c;
        if det.abs() < num::<T>(1e-14) {
            return None;
        }
        Some(Point2::new(
            (d * self.e - b * self.f) / det,
            (a * self.f - c * self.e) / det,
        ))
    }
}

/// A finite family of affine plane maps with the induced Hutchinson
/// operator `S -> f_1(S) ∪ ... ∪ f_k(S)`.
#[derive(Debug, Clone)]
pub struct IFSystem<T: Scalar = f64> {
    maps: Vec<AffineMap2<T>>,
    probabilities: Option<Vec<T>>,
}

impl<T: Scalar> IFSystem<T> {
    pub fn new(maps: Vec<AffineMap2<T>>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::param("maps", "an IFS needs at least one map"));
        }
        Ok(IFSystem {
            maps,
            probabilities: None,
        })
    }

    pub fn with_probabilities(maps: Vec<AffineMap2<T>>, probabilities: Vec<T>) -> Result<Self> {
        if probabilities.len() != maps.len() {
            return Err(Error::param(
                "probabilities",
                "must match the number of maps",
            ));
        }
        if probabilities.iter().any(|&p| !(p > T::zero())) {
            return Err(Error::param("probabilities", "must all be positive"));
        }
        let mut system = IFSystem::new(maps)?;
        system.probabilities = Some(probabilities);
        Ok(system)
    }

    pub fn maps(&self) -> &[AffineMap2<T>] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn contraction_factors(&self) -> Vec<T> {
        self.maps.iter().map(|m| m.contraction_factor()).collect()
    }

    /// System contraction factor `max_i lambda_i`.
    pub fn system_factor(&self) -> T {
        self.contraction_factors()
            .into_iter()
            .fold(T::zero(), T::max)
    }

    fn require_contractive(&self) -> Result<T> {
        let factor = self.system_factor();
        if factor < T::one() {
            Ok(factor)
        } else {
            Err(Error::NonContractive {
                factor: factor.as_f64(),
            })
        }
    }

    /// Conjugate system `phi ∘ f_i ∘ phi^{-1}` (used to check that shape
    /// verdicts are invariant under similarities).
    pub fn conjugate(&self, phi: &AffineMap2<T>) -> Result<Self> {
        let inv = phi.inverse()?;
        IFSystem::new(
            self.maps
                .iter()
                .map(|m| phi.compose(m).compose(&inv))
                .collect(),
        )
    }

    /// Per-map chaos-game probabilities: proportional to |det| with a floor
    /// of `1/(10k)` so measure-zero maps keep getting visited.
    fn chaos_probabilities(&self) -> Vec<f64> {
        if let Some(p) = &self.probabilities {
            let total: f64 = p.iter().map(|v| v.as_f64()).sum();
            return p.iter().map(|v| v.as_f64() / total).collect();
        }
        let k = self.maps.len();
        let dets: Vec<f64> = self
            .maps
            .iter()
            .map(|m| m.determinant().as_f64().abs())
            .collect();
        let total: f64 = dets.iter().sum();
        let floor = 1.0 / (10.0 * k as f64);
        let clamped: Vec<f64> = if total > 0.0 {
            dets.iter().map(|d| (d / total).max(floor)).collect()
        } else {
            vec![1.0 / k as f64; k]
        };
        let renorm: f64 = clamped.iter().sum();
        clamped.into_iter().map(|p| p / renorm).collect()
    }
}

/// Image of `g` under one affine map, rasterized backward: a target cell is
/// occupied iff the preimage of its center lands in an occupied cell. This
/// avoids the holes that forward point-scatter leaves wherever a map is
/// locally expansive relative to the pixel lattice.
pub(crate) fn map_image<T: Scalar>(
    map: &AffineMap2<T>,
    g: &BitGrid<T>,
    map_index: usize,
) -> Result<BitGrid<T>> {
    let mut out = g.like();
    let Some((bx0, by0, bx1, by1)) = g.occupied_bbox() else {
        return Ok(out);
    };
    let bounds = g.bounds();
    let pw = g.pixel_width();

    // Physical rectangle of the occupied cells (whole cells, not centers).
    let rect = Rect {
        x0: bounds.x0 + T::from_usize(bx0).unwrap() * pw,
        y0: bounds.y0 + T::from_usize(by0).unwrap() * pw,
        x1: bounds.x0 + T::from_usize(bx1 + 1).unwrap() * pw,
        y1: bounds.y0 + T::from_usize(by1 + 1).unwrap() * pw,
    };
    let corners = [
        map.apply(Point2::new(rect.x0, rect.y0)),
        map.apply(Point2::new(rect.x1, rect.y0)),
        map.apply(Point2::new(rect.x0, rect.y1)),
        map.apply(Point2::new(rect.x1, rect.y1)),
    ];
    let mut ix0 = T::infinity();
    let mut iy0 = T::infinity();
    let mut ix1 = T::neg_infinity();
    let mut iy1 = T::neg_infinity();
    for p in corners {
        ix0 = ix0.min(p.x);
        iy0 = iy0.min(p.y);
        ix1 = ix1.max(p.x);
        iy1 = iy1.max(p.y);
    }
    let slack = num::<T>(1e-9) * (bounds.width() + bounds.height());
    if ix0 < bounds.x0 - slack
        || iy0 < bounds.y0 - slack
        || ix1 > bounds.x1 + slack
        || iy1 > bounds.y1 + slack
    {
        return Err(Error::ImageEscapesBounds { map_index });
    }

    let inv = map.inverse()?;
    let res = g.resolution();
    let to_px = |v: T, origin: T| ((v - origin) * res).floor().to_i64().unwrap_or(0);
    let px0 = to_px(ix0, bounds.x0).max(0) as usize;
    let py0 = to_px(iy0, bounds.y0).max(0) as usize;
    let px1 = (to_px(ix1, bounds.x0) + 1).clamp(0, g.width() as i64) as usize;
    let py1 = (to_px(iy1, bounds.y0) + 1).clamp(0, g.height() as i64) as usize;

    for iy in py0..py1 {
        for ix in px0..px1 {
            let q = inv.apply(out.cell_center(ix, iy));
            if g.contains_point(q) {
                out.set(ix, iy, true);
            }
        }
    }
    Ok(out)
}

/// One application of the Hutchinson operator: the union of the forward
/// images of `g` under every map of the system. Errors if any image leaves
/// the grid bounds.
pub fn hutchinson<T: Scalar>(system: &IFSystem<T>, g: &BitGrid<T>) -> Result<BitGrid<T>> {
    if g.is_empty() {
        return Err(Error::EmptySet("Hutchinson operator"));
    }
    let mut out = g.like();
    for (i, map) in system.maps().iter().enumerate() {
        out = out.union(&map_image(map, g, i)?)?;
    }
    Ok(out)
}

/// Flags attached to a computed attractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttractorFlags {
    pub connected: bool,
    /// Interior emptiness at the conventional scale of four pixel widths.
    pub empty_interior: bool,
}

/// Result of an attractor computation: the invariant grid plus everything
/// measured on the way.
#[derive(Debug, Clone)]
pub struct AttractorReport<T: Scalar = f64> {
    pub attractor: BitGrid<T>,
    pub trace: ConvergenceTrace,
    pub iterations: usize,
    pub shape: Option<ShapeClass>,
    pub h1_rank: Option<H1Rank>,
    pub dimension: Option<DimensionEstimate>,
    pub flags: AttractorFlags,
    /// A-priori Banach estimate of the iterations needed, from the first
    /// step and the contraction factor. Reported, not enforced.
    pub banach_iteration_bound: Option<f64>,
    /// Worst distance (pixels) by which a raw image poked outside the
    /// previous iterate in nested trapping iterations. `None` for plain
    /// Hutchinson iteration; values beyond one pixel signal rasterization
    /// trouble or a non-trapping region.
    pub clip_deviation_px: Option<f64>,
}

pub(crate) fn attractor_flags<T: Scalar>(g: &BitGrid<T>) -> Result<AttractorFlags> {
    let connected = g.components(Connectivity::Eight).set_components == 1;
    let empty_interior = !g.interior_nonempty(num::<T>(4.0) * g.pixel_width())?;
    Ok(AttractorFlags {
        connected,
        empty_interior,
    })
}

/// Deterministic attractor computation: iterate the Hutchinson operator
/// from `seed` until the Hausdorff step drops to `tol` (physical units).
///
/// For a contractive system the iterates converge geometrically at the
/// system factor, so the step criterion bounds the remaining distance to
/// the fixed point by `tol * lambda / (1 - lambda)`.
pub fn attractor_deterministic<T: Scalar>(
    system: &IFSystem<T>,
    seed: &BitGrid<T>,
    tol: T,
    max_iter: usize,
) -> Result<AttractorReport<T>> {
    let factor = system.require_contractive()?;
    if seed.is_empty() {
        return Err(Error::EmptySet("attractor iteration seed"));
    }
    if !(tol > T::zero()) {
        return Err(Error::param("tol", "must be positive"));
    }
    let mut trace = ConvergenceTrace::default();
    let mut current = seed.clone();
    let mut banach = None;
    for k in 0..max_iter {
        let next = hutchinson(system, &current)?;
        if next.is_empty() {
            return Err(Error::EmptyIterate);
        }
        let step = hausdorff_distance(&next, &current)?;
        trace.push(k, step.as_f64());
        if k == 0 {
            let d0 = step.as_f64();
            let lam = factor.as_f64();
            if d0 > 0.0 && lam > 0.0 {
                let bound = (tol.as_f64() * (1.0 - lam) / d0).ln() / lam.ln();
                banach = Some(bound.max(0.0).ceil());
            }
        }
        current = next;
        if step <= tol {
            trace.converged = true;
            let flags = attractor_flags(&current)?;
            return Ok(AttractorReport {
                attractor: current,
                iterations: k + 1,
                trace,
                shape: None,
                h1_rank: None,
                dimension: None,
                flags,
                banach_iteration_bound: banach,
                clip_deviation_px: None,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        last_step: trace.final_distance,
    })
}

/// Random-iteration ("chaos game") rendering of the attractor. Pixels
/// visited after `burn_in` points are marked occupied on a grid with the
/// geometry of `template`. Deterministic for a fixed `rng_seed`.
pub fn attractor_chaos_game<T: Scalar>(
    system: &IFSystem<T>,
    n_points: usize,
    burn_in: usize,
    rng_seed: u64,
    template: &BitGrid<T>,
) -> Result<BitGrid<T>> {
    system.require_contractive()?;
    if n_points <= burn_in {
        return Err(Error::param("n_points", "must exceed burn_in"));
    }
    let probs = system.chaos_probabilities();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = template.like();
    let mut point = system.maps()[0]
        .fixed_point()
        .unwrap_or_else(|| template.bounds().center());
    for step in 0..n_points {
        let u: f64 = rng.random();
        let pick = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(probs.len() - 1);
        point = system.maps()[pick].apply(point);
        if step < burn_in {
            continue;
        }
        match out.cell_of(point) {
            Some((ix, iy)) => out.set(ix, iy, true),
            None => return Err(Error::OrbitEscapesBounds { step }),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Built-in reference systems.

/// The six plane similarities of the circle-shaped fractal: `h1..h3` scale
/// by 19/30, `h4..h6` by 1/2, all sharing the equilateral triangle with
/// vertices (0,0), (1,0), (1/2, sqrt(3)/2).
pub fn example_41_ifs<T: Scalar>() -> IFSystem<T> {
    let big = num::<T>(19.0) / num::<T>(30.0);
    let small = num::<T>(0.5);
    let sqrt3 = num::<T>(3.0).sqrt();
    let t = num::<T>(11.0) / num::<T>(30.0);
    let half = num::<T>(0.5);
    let quarter = num::<T>(0.25);
    IFSystem::new(vec![
        AffineMap2::scaling(big, T::zero(), T::zero()),
        AffineMap2::scaling(big, half * t, sqrt3 * half * t),
        AffineMap2::scaling(big, t, T::zero()),
        AffineMap2::scaling(small, T::zero(), T::zero()),
        AffineMap2::scaling(small, quarter, sqrt3 * quarter),
        AffineMap2::scaling(small, half, T::zero()),
    ])
    .expect("nonempty")
}

/// First three maps only (scale 19/30).
pub fn example_41_first3<T: Scalar>() -> IFSystem<T> {
    IFSystem::new(example_41_ifs().maps()[..3].to_vec()).expect("nonempty")
}

/// Last three maps only: the classical Sierpinski gasket system.
pub fn example_41_last3<T: Scalar>() -> IFSystem<T> {
    IFSystem::new(example_41_ifs().maps()[3..].to_vec()).expect("nonempty")
}

/// Forward-invariant frame for the six-map system and its subfamilies.
pub fn example_41_bounds<T: Scalar>() -> Rect<T> {
    Rect {
        x0: num(-0.05),
        y0: num(-0.05),
        x1: num(1.05),
        y1: num(0.95),
    }
}

/// Von Koch curve: four similarities of ratio 1/3 joining (0,0) to (1,0)
/// with the peak at (1/2, sqrt(3)/6).
pub fn koch_ifs<T: Scalar>() -> IFSystem<T> {
    let third = T::one() / num::<T>(3.0);
    let sixth = T::one() / num::<T>(6.0);
    let sqrt3 = num::<T>(3.0).sqrt();
    let rot60 = num::<T>(std::f64::consts::FRAC_PI_3);
    IFSystem::new(vec![
        AffineMap2::scaling(third, T::zero(), T::zero()),
        AffineMap2::similarity(third, rot60, third, T::zero()),
        AffineMap2::similarity(third, -rot60, num::<T>(0.5), sqrt3 * sixth),
        AffineMap2::scaling(third, num::<T>(2.0) * third, T::zero()),
    ])
    .expect("nonempty")
}

/// Forward-invariant frame for the Koch system.
pub fn koch_bounds<T: Scalar>() -> Rect<T> {
    Rect {
        x0: num(-0.05),
        y0: num(-0.1),
        x1: num(1.05),
        y1: num(0.4),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::SeedRegion;

    #[test]
    fn contraction_factor_of_reference_maps() {
        assert_eq!(AffineMap2::<f64>::identity().contraction_factor(), 1.0);
        let maps = example_41_ifs::<f64>();
        let factors = maps.contraction_factors();
        assert!((factors[0] - 19.0 / 30.0).abs() < 1e-12);
        assert!((factors[3] - 0.5).abs() < 1e-12);
        // A rotation composed into a similarity does not change the factor.
        let m: AffineMap2 = AffineMap2::similarity(0.7, 1.234, 0.1, -0.3);
        assert!((m.contraction_factor() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn example_41_coefficients() {
        let system = example_41_ifs::<f64>();
        assert_eq!(system.len(), 6);
        let p = system.maps()[1].apply(Point2::origin());
        assert!((p.x - 11.0 / 60.0).abs() < 1e-12);
        assert!((p.y - 3f64.sqrt() / 2.0 * 11.0 / 30.0).abs() < 1e-12);
        let fp = system.maps()[5].fixed_point().unwrap();
        assert!((fp.x - 1.0).abs() < 1e-12 && fp.y.abs() < 1e-12);
    }

    #[test]
    fn inverse_round_trips() {
        let m: AffineMap2 = AffineMap2::new(0.3, -0.8, 0.5, 0.4, 1.0, -2.0);
        let inv = m.inverse().unwrap();
        let p = Point2::new(0.37, -1.2);
        let q = inv.apply(m.apply(p));
        assert!((q.x - p.x).abs() < 1e-12 && (q.y - p.y).abs() < 1e-12);
        let singular: AffineMap2 = AffineMap2::new(1.0, 2.0, 0.5, 1.0, 0.0, 0.0);
        assert!(matches!(singular.inverse(), Err(Error::NonInvertible { .. })));
    }

    fn full_seed(bounds: Rect, res: f64) -> BitGrid {
        BitGrid::with_seed(bounds, res, Some(SeedRegion::Rect(bounds))).unwrap()
    }

    #[test]
    fn hutchinson_of_identity_is_identity() {
        let system = IFSystem::new(vec![AffineMap2::identity()]).unwrap();
        let g = BitGrid::with_seed(
            Rect::unit(),
            64.0,
            Some(SeedRegion::Disk {
                center: Point2::new(0.5, 0.5),
                radius: 0.3,
            }),
        )
        .unwrap();
        assert_eq!(hutchinson(&system, &g).unwrap(), g);
    }

    #[test]
    fn sierpinski_step_keeps_three_quarters_of_the_area() {
        let bounds = Rect::unit();
        let seed = full_seed(bounds, 256.0);
        let next = hutchinson(&example_41_last3(), &seed).unwrap();
        let ratio = next.occupied_count() as f64 / seed.occupied_count() as f64;
        assert!((ratio - 0.75).abs() < 0.02, "ratio = {ratio}");
    }

    #[test]
    fn single_map_image_scales_a_disk() {
        let bounds = Rect::new(-1.0, -1.0, 1.0, 1.0).unwrap();
        let g = BitGrid::with_seed(
            bounds,
            200.0,
            Some(SeedRegion::Disk {
                center: Point2::origin(),
                radius: 0.6,
            }),
        )
        .unwrap();
        let system = IFSystem::new(vec![example_41_ifs::<f64>().maps()[0]]).unwrap();
        let image = hutchinson(&system, &g).unwrap();
        let max_radius = image
            .iter_occupied()
            .map(|(ix, iy)| image.cell_center(ix, iy).norm())
            .fold(0.0f64, f64::max);
        let expected = 0.6 * 19.0 / 30.0;
        assert!(
            (max_radius - expected).abs() <= 1.5 / 200.0,
            "max radius {max_radius}, expected {expected}"
        );
    }

    #[test]
    fn hutchinson_is_monotone() {
        let bounds = Rect::unit();
        let small = BitGrid::with_seed(
            bounds,
            128.0,
            Some(SeedRegion::Disk {
                center: Point2::new(0.4, 0.3),
                radius: 0.15,
            }),
        )
        .unwrap();
        let big = small
            .union(
                &BitGrid::with_seed(
                    bounds,
                    128.0,
                    Some(SeedRegion::Rect(Rect::new(0.2, 0.1, 0.9, 0.8).unwrap())),
                )
                .unwrap(),
            )
            .unwrap();
        let system = example_41_last3::<f64>();
        let fs = hutchinson(&system, &small).unwrap();
        let fb = hutchinson(&system, &big).unwrap();
        assert!(fs.is_subset_of(&fb).unwrap());
    }

    #[test]
    fn escaping_image_is_an_error() {
        let system = IFSystem::new(vec![AffineMap2::scaling(1.0, 0.5, 0.0)]).unwrap();
        let g = full_seed(Rect::unit(), 32.0);
        assert!(matches!(
            hutchinson(&system, &g),
            Err(Error::ImageEscapesBounds { map_index: 0 })
        ));
    }

    #[test]
    fn contraction_to_a_point() {
        let bounds = Rect::new(-0.5, -0.5, 0.5, 0.5).unwrap();
        let system = IFSystem::new(vec![AffineMap2::scaling(0.5, 0.0, 0.0)]).unwrap();
        let seed = full_seed(bounds, 100.0);
        let report = attractor_deterministic(&system, &seed, 0.01, 100).unwrap();
        assert!(report.trace.converged);
        // Everything within a couple of pixels of the unique fixed point 0.
        for (ix, iy) in report.attractor.iter_occupied() {
            assert!(report.attractor.cell_center(ix, iy).norm() <= 0.03);
        }
        assert!(report.flags.connected);
    }

    #[test]
    fn non_contractive_system_is_rejected() {
        let system = IFSystem::new(vec![AffineMap2::identity()]).unwrap();
        let seed = full_seed(Rect::unit(), 16.0);
        assert!(matches!(
            attractor_deterministic(&system, &seed, 0.01, 10),
            Err(Error::NonContractive { .. })
        ));
    }

    #[test]
    fn seed_independence_of_the_attractor() {
        let bounds = example_41_bounds();
        let system = example_41_last3::<f64>();
        let res = 256.0;
        let tol = 2.0 / res;
        let a = attractor_deterministic(&system, &full_seed(bounds, res), tol, 100).unwrap();
        let small_seed = BitGrid::with_seed(
            bounds,
            res,
            Some(SeedRegion::Disk {
                center: Point2::new(0.3, 0.2),
                radius: 0.05,
            }),
        )
        .unwrap();
        let b = attractor_deterministic(&system, &small_seed, tol, 100).unwrap();
        let d = hausdorff_distance(&a.attractor, &b.attractor).unwrap();
        assert!(d <= 2.0 * tol, "seeds disagree by {d}");
    }

    #[test]
    fn chaos_game_collapses_to_fixed_point() {
        let bounds = Rect::new(-0.5, -0.5, 0.5, 0.5).unwrap();
        let system = IFSystem::new(vec![AffineMap2::scaling(0.5, 0.0, 0.0)]).unwrap();
        let template = BitGrid::new(bounds, 100.0).unwrap();
        let g = attractor_chaos_game(&system, 10_000, 100, 7, &template).unwrap();
        assert!(!g.is_empty());
        for (ix, iy) in g.iter_occupied() {
            assert!(g.cell_center(ix, iy).norm() <= 0.02);
        }
    }

    #[test]
    fn chaos_game_is_deterministic_per_seed() {
        let bounds = example_41_bounds();
        let template = BitGrid::new(bounds, 128.0).unwrap();
        let system = example_41_last3::<f64>();
        let a = attractor_chaos_game(&system, 50_000, 100, 42, &template).unwrap();
        let b = attractor_chaos_game(&system, 50_000, 100, 42, &template).unwrap();
        assert_eq!(a, b);
        let c = attractor_chaos_game(&system, 50_000, 100, 43, &template).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn koch_endpoints_chain_correctly() {
        let maps = koch_ifs::<f64>();
        let ends = [
            (Point2::origin(), Point2::new(1.0, 0.0)),
        ];
        let (p0, p1) = ends[0];
        let m = maps.maps();
        let mid = m[1].apply(p1);
        assert!((mid.x - 0.5).abs() < 1e-12 && (mid.y - 3f64.sqrt() / 6.0).abs() < 1e-12);
        assert!(m[0].apply(p0).distance(p0) < 1e-12);
        assert!(m[3].apply(p1).distance(p1) < 1e-12);
        // Each map ends where the next begins.
        for i in 0..3 {
            let end = m[i].apply(p1);
            let start = m[i + 1].apply(p0);
            assert!(end.distance(start) < 1e-12, "joint {i}");
        }
    }
}

//! Attractors of parametrized plane homeomorphisms via trapping regions.
//!
//! The central objects are a lambda-parametrized [`MapFamily`] and a grid
//! region `N` with `f(N)` inside the interior of `N`. The attractor is the
//! nested intersection of forward images; the discrete Andronov-Hopf
//! scenario then splits it into the cellular attractor `A`, the repulsion
//! basin `R` of the origin, and the annular attractor `K = A \ R`, whose
//! shape is the circle for every post-bifurcation parameter.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::grid::{BitGrid, Connectivity};
use crate::hyperspace::{hausdorff_distance, step_over_cells, ConvergenceTrace};
use crate::ifs::{attractor_flags, AffineMap2, AttractorReport};
use crate::scalar::{num, Scalar};
use crate::shape::{classify_renders, ShapeClass};

type ForwardFn<T> = dyn Fn(T, Point2<T>) -> Point2<T> + Send + Sync;
type InverseFn<T> = dyn Fn(T, Point2<T>) -> Option<Point2<T>> + Send + Sync;
type RadiusFn<T> = dyn Fn(T) -> T + Send + Sync;

/// A lambda-parametrized family of plane homeomorphisms.
///
/// The inverse is optional: with it, set images are rasterized backward
/// (exact up to cell sampling); without it, images fall back to forward
/// scatter plus a one-pixel closing. `backward_radius` restricts the region
/// about the origin on which the inverse is trusted; sets reaching beyond
/// it also fall back to scatter.
#[derive(Clone)]
pub struct MapFamily<T: Scalar = f64> {
    forward: Arc<ForwardFn<T>>,
    inverse: Option<Arc<InverseFn<T>>>,
    backward_radius: Option<Arc<RadiusFn<T>>>,
    param_range: (T, T),
}

impl<T: Scalar> std::fmt::Debug for MapFamily<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MapFamily")
            .field("has_inverse", &self.inverse.is_some())
            .field("param_range", &self.param_range)
            .finish()
    }
}

impl<T: Scalar> MapFamily<T> {
    pub fn new(
        forward: impl Fn(T, Point2<T>) -> Point2<T> + Send + Sync + 'static,
        param_range: (T, T),
    ) -> Self {
        MapFamily {
            forward: Arc::new(forward),
            inverse: None,
            backward_radius: None,
            param_range,
        }
    }

    pub fn with_inverse(
        mut self,
        inverse: impl Fn(T, Point2<T>) -> Option<Point2<T>> + Send + Sync + 'static,
    ) -> Self {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    /// Restrict backward rasterization to sets within this radius of the
    /// origin (per lambda).
    pub fn with_backward_radius(
        mut self,
        radius: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        self.backward_radius = Some(Arc::new(radius));
        self
    }

    /// Lambda-independent family wrapping a single affine map.
    pub fn affine(map: AffineMap2<T>) -> Self {
        let fam = MapFamily::new(move |_, p| map.apply(p), (T::zero(), T::zero()));
        match map.inverse() {
            Ok(inv) => fam.with_inverse(move |_, p| Some(inv.apply(p))),
            Err(_) => fam,
        }
    }

    pub fn forward(&self, lambda: T, p: Point2<T>) -> Point2<T> {
        (self.forward)(lambda, p)
    }

    /// Preimage of `p`, if the family has an inverse and `p` has one within
    /// the inverse's domain.
    pub fn inverse(&self, lambda: T, p: Point2<T>) -> Option<Point2<T>> {
        self.inverse.as_ref().and_then(|inv| inv(lambda, p))
    }

    pub fn param_range(&self) -> (T, T) {
        self.param_range
    }

    fn check_lambda(&self, lambda: T) -> Result<()> {
        let (lo, hi) = self.param_range;
        if lo == hi || (lambda >= lo && lambda <= hi) {
            Ok(())
        } else {
            Err(Error::param(
                "lambda",
                format!("{lambda} outside family range [{lo}, {hi}]"),
            ))
        }
    }

    /// Spot-check injectivity of `forward(lambda, .)` on random point pairs
    /// within `bounds`: no two points further apart than `sep` may map
    /// within `tol` of each other.
    pub fn spot_check_injective(&self, lambda: T, bounds: Rect<T>, pairs: usize, tol: T) -> bool {
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let sample = |u: f64, v: f64| {
            Point2::new(
                bounds.x0 + num::<T>(u) * bounds.width(),
                bounds.y0 + num::<T>(v) * bounds.height(),
            )
        };
        for _ in 0..pairs {
            let p = sample(next(), next());
            let q = sample(next(), next());
            if p.distance(q) > tol * num(4.0)
                && self.forward(lambda, p).distance(self.forward(lambda, q)) < tol
            {
                return false;
            }
        }
        true
    }
}

/// Boundary cells of the occupied set: occupied cells with an unoccupied
/// 4-neighbor or lying on the grid frame.
fn boundary_cells<T: Scalar>(g: &BitGrid<T>) -> Vec<(usize, usize)> {
    let (w, h) = (g.width(), g.height());
    let mut out = Vec::new();
    for (ix, iy) in g.iter_occupied() {
        let edge = ix == 0 || iy == 0 || ix == w - 1 || iy == h - 1;
        if edge
            || !g.get(ix - 1, iy)
            || !g.get(ix + 1, iy)
            || !g.get(ix, iy - 1)
            || !g.get(ix, iy + 1)
        {
            out.push((ix, iy));
        }
    }
    out
}

/// Image of the occupied set under `forward(lambda, .)`, restricted to the
/// cells of `within` when given.
///
/// Backward rasterization is used when an inverse is available and the set
/// stays inside the declared backward radius; the scan window and the
/// bounds-escape check come from forward-mapping the set boundary, which
/// bounds the image of a homeomorphism. Otherwise every occupied center is
/// scattered forward and the result closed by one pixel.
fn family_image<T: Scalar>(
    family: &MapFamily<T>,
    lambda: T,
    g: &BitGrid<T>,
    within: Option<&BitGrid<T>>,
) -> Result<BitGrid<T>> {
    let mut out = g.like();
    if g.is_empty() {
        return Ok(out);
    }
    let bounds = g.bounds();
    let pw = g.pixel_width();

    let border = boundary_cells(g);
    let mut max_norm = T::zero();
    let mut fx0 = T::infinity();
    let mut fy0 = T::infinity();
    let mut fx1 = T::neg_infinity();
    let mut fy1 = T::neg_infinity();
    let mut escaped = false;
    for &(ix, iy) in &border {
        let c = g.cell_center(ix, iy);
        max_norm = max_norm.max(c.norm());
        let q = family.forward(lambda, c);
        if !bounds.contains(q) {
            escaped = true;
        }
        fx0 = fx0.min(q.x);
        fy0 = fy0.min(q.y);
        fx1 = fx1.max(q.x);
        fy1 = fy1.max(q.y);
    }
    if escaped && within.is_none() {
        return Err(Error::ImageEscapesBounds { map_index: 0 });
    }

    let backward_ok = family.inverse.is_some()
        && match &family.backward_radius {
            Some(r) => max_norm + pw <= r(lambda),
            None => true,
        };

    if backward_ok {
        let pad = num::<T>(2.0) * pw;
        let res = g.resolution();
        let to_px = |v: T, origin: T| ((v - origin) * res).floor().to_i64().unwrap_or(0);
        let px0 = to_px(fx0 - pad, bounds.x0).max(0) as usize;
        let py0 = to_px(fy0 - pad, bounds.y0).max(0) as usize;
        let px1 = (to_px(fx1 + pad, bounds.x0) + 1).clamp(0, g.width() as i64) as usize;
        let py1 = (to_px(fy1 + pad, bounds.y0) + 1).clamp(0, g.height() as i64) as usize;
        for iy in py0..py1 {
            for ix in px0..px1 {
                if let Some(w) = within {
                    if !w.get(ix, iy) {
                        continue;
                    }
                }
                if let Some(q) = family.inverse(lambda, out.cell_center(ix, iy)) {
                    if g.contains_point(q) {
                        out.set(ix, iy, true);
                    }
                }
            }
        }
    } else {
        for (ix, iy) in g.iter_occupied() {
            let q = family.forward(lambda, g.cell_center(ix, iy));
            if let Some((qx, qy)) = out.cell_of(q) {
                out.set(qx, qy, true);
            }
        }
        out = out.close(pw)?;
        if let Some(w) = within {
            out = out.intersection(w)?;
        }
    }
    Ok(out)
}

/// Trapping-region check: is the image of `n` contained in the interior of
/// `n` with the given pixel margin? An image that escapes the grid bounds
/// certainly escapes the interior of `n`, so that case reports `false`.
pub fn verify_trapping_region<T: Scalar>(
    family: &MapFamily<T>,
    lambda: T,
    n: &BitGrid<T>,
    margin_px: f64,
) -> Result<bool> {
    family.check_lambda(lambda)?;
    if n.is_empty() {
        return Err(Error::EmptySet("trapping region"));
    }
    match family_image(family, lambda, n, None) {
        Ok(image) => image.subset_of_interior(n, margin_px),
        Err(Error::ImageEscapesBounds { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Attractor of `forward(lambda, .)` from a trapping region: iterate
/// `N_{k+1} = f(N_k) ∩ N_k` until the grid reaches its discrete fixed
/// point. The intersection enforces nestedness against pixel jitter; the
/// distance by which the raw image deviates past the previous iterate is
/// tracked and reported (beyond one pixel it indicates trouble).
///
/// Since each step is a deterministic function of the current grid and the
/// sequence is strictly decreasing until it stabilizes, the fixed point is
/// reached exactly, after finitely many steps; `tol` bounds the accepted
/// final step and `k_max` the iteration count.
pub fn attractor_from_trapping<T: Scalar>(
    family: &MapFamily<T>,
    lambda: T,
    n: &BitGrid<T>,
    tol: T,
    k_max: usize,
) -> Result<AttractorReport<T>> {
    if !verify_trapping_region(family, lambda, n, 1.0)? {
        return Err(Error::NotTrapping(
            "image of N is not inside the interior of N".into(),
        ));
    }
    let mut current = n.clone();
    let mut trace = ConvergenceTrace::default();
    let mut clip_dev = T::zero();
    for k in 0..k_max {
        let raw = family_image(family, lambda, &current, None)?;
        let next = raw.intersection(&current)?;
        if next.is_empty() {
            return Err(Error::EmptyIterate);
        }
        let clipped = raw.difference(&current)?;
        if !clipped.is_empty() {
            clip_dev = clip_dev.max(step_over_cells(&clipped, &current)?);
        }
        let removed = current.difference(&next)?;
        if removed.is_empty() {
            trace.push(k, 0.0);
            trace.converged = true;
            let flags = attractor_flags(&next)?;
            return Ok(AttractorReport {
                attractor: next,
                iterations: k + 1,
                trace,
                shape: None,
                h1_rank: None,
                dimension: None,
                flags,
                banach_iteration_bound: None,
                clip_deviation_px: Some((clip_dev / n.pixel_width()).as_f64()),
            });
        }
        let step = step_over_cells(&removed, &next)?;
        trace.push(k, step.as_f64());
        if trace.len() == k_max && step > tol {
            break;
        }
        current = next;
    }
    Err(Error::NonConvergence {
        iterations: k_max,
        last_step: trace.final_distance,
    })
}

/// Basin of repulsion of the origin: the stabilized union of forward images
/// of a small disk, clipped to `within`. Errors unless the origin is
/// strictly repelling at this lambda (the image of the seed disk must
/// strictly contain it).
pub fn repulsion_basin<T: Scalar>(
    family: &MapFamily<T>,
    lambda: T,
    seed_radius: T,
    k_max: usize,
    within: &BitGrid<T>,
) -> Result<BitGrid<T>> {
    family.check_lambda(lambda)?;
    if !(seed_radius > T::zero()) {
        return Err(Error::param("seed_radius", "must be positive"));
    }
    let seed = BitGrid::from_fn(within.bounds(), within.resolution(), |p| {
        p.norm() <= seed_radius
    })?
    .intersection(within)?;
    if seed.is_empty() {
        return Err(Error::EmptySet("repulsion seed disk"));
    }
    let seed_image = family_image(family, lambda, &seed, Some(within))?;
    if !seed.subset_of_interior(&seed_image, 1.0)? {
        return Err(Error::OriginNotRepelling {
            lambda: lambda.as_f64(),
        });
    }
    let mut current = seed;
    for _ in 0..k_max {
        let image = family_image(family, lambda, &current, Some(within))?;
        let grown = current.union(&image)?;
        if grown == current {
            return Ok(current);
        }
        current = grown;
    }
    Err(Error::NoStabilization(k_max))
}

/// Geometry and tolerances shared by the Hopf and robustness pipelines.
#[derive(Debug, Clone)]
pub struct HopfScanConfig<T: Scalar = f64> {
    pub bounds: Rect<T>,
    /// Top resolution; classification renders use `res/4, res/2, res`.
    pub resolution: T,
    /// Radius of the trapping disk `D` centered at the origin.
    pub disk_radius: T,
    /// Trapping margin and convergence tolerance, in pixels.
    pub margin_px: f64,
    pub tol_px: f64,
    pub k_max: usize,
    /// Repulsion seed radius in pixels at each resolution.
    pub seed_px: f64,
}

impl<T: Scalar> HopfScanConfig<T> {
    pub fn new(bounds: Rect<T>, resolution: T, disk_radius: T) -> Self {
        HopfScanConfig {
            bounds,
            resolution,
            disk_radius,
            margin_px: 2.0,
            tol_px: 2.0,
            k_max: 5000,
            seed_px: 4.0,
        }
    }

    fn resolutions(&self) -> [T; 3] {
        let four = num::<T>(4.0);
        let two = num::<T>(2.0);
        [self.resolution / four, self.resolution / two, self.resolution]
    }
}

/// Everything computed for one post-bifurcation lambda.
#[derive(Debug, Clone)]
pub struct HopfLambdaData<T: Scalar = f64> {
    pub lambda: f64,
    /// The cellular attractor `A` (a topological disk), top resolution.
    pub cellular_attractor: BitGrid<T>,
    /// The repulsion basin `R` of the origin inside `A`.
    pub repulsion_basin: BitGrid<T>,
    /// The annular attractor `K = closure(A \ R)`.
    pub annular_attractor: BitGrid<T>,
    pub shape: ShapeClass,
    /// True iff the origin lies in a bounded complement component of `K`.
    pub surrounds_origin: bool,
    /// Max distance of `K` from the origin, physical units.
    pub outer_radius: f64,
}

#[derive(Debug, Clone)]
pub enum HopfEntry<T: Scalar = f64> {
    Computed(HopfLambdaData<T>),
    /// The origin is not repelling at this lambda: the attractor has
    /// collapsed onto the fixed point.
    PreBifurcation {
        lambda: f64,
        attractor: BitGrid<T>,
    },
    Failed {
        lambda: f64,
        message: String,
    },
}

impl<T: Scalar> HopfEntry<T> {
    pub fn lambda(&self) -> f64 {
        match self {
            HopfEntry::Computed(d) => d.lambda,
            HopfEntry::PreBifurcation { lambda, .. } => *lambda,
            HopfEntry::Failed { lambda, .. } => *lambda,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HopfReport<T: Scalar = f64> {
    pub entries: Vec<HopfEntry<T>>,
    /// Outer radius is nondecreasing along ascending lambda over the
    /// computed entries (the attractors shrink to the origin as the
    /// parameter decreases).
    pub outer_radius_monotone: bool,
}

/// Compute `A`, `R`, `K` and the shape verdict for one lambda at one
/// resolution ladder.
fn hopf_single_lambda<T: Scalar>(
    family: &MapFamily<T>,
    lambda: T,
    cfg: &HopfScanConfig<T>,
) -> Result<HopfEntry<T>> {
    let origin_image = family.forward(lambda, Point2::origin());
    let top_pw = T::one() / cfg.resolution;
    if origin_image.norm() > top_pw {
        return Ok(HopfEntry::Failed {
            lambda: lambda.as_f64(),
            message: "origin is not fixed at this lambda".into(),
        });
    }

    let mut annuli = Vec::new();
    let mut top: Option<(BitGrid<T>, BitGrid<T>, BitGrid<T>)> = None;
    for res in cfg.resolutions() {
        let pw = T::one() / res;
        let disk = BitGrid::from_fn(cfg.bounds, res, |p| p.norm() <= cfg.disk_radius)?;
        if !verify_trapping_region(family, lambda, &disk, cfg.margin_px)? {
            return Ok(HopfEntry::Failed {
                lambda: lambda.as_f64(),
                message: format!("D is not a trapping region at resolution {res}"),
            });
        }
        let a = attractor_from_trapping(family, lambda, &disk, num::<T>(cfg.tol_px) * pw, cfg.k_max)?
            .attractor;
        let r = match repulsion_basin(family, lambda, num::<T>(cfg.seed_px) * pw, cfg.k_max, &a) {
            Ok(r) => r,
            Err(Error::OriginNotRepelling { .. }) => {
                return Ok(HopfEntry::PreBifurcation {
                    lambda: lambda.as_f64(),
                    attractor: a,
                });
            }
            Err(e) => return Err(e),
        };
        let k = a.difference(&r)?.close(pw)?;
        if k.is_empty() {
            return Ok(HopfEntry::Failed {
                lambda: lambda.as_f64(),
                message: "annular attractor is empty".into(),
            });
        }
        annuli.push(k.clone());
        top = Some((a, r, k));
    }

    let shape = classify_renders(&annuli)?;
    let (a, r, k) = top.expect("three resolutions");
    let report = k.components(Connectivity::Eight);
    let surrounds = k
        .cell_of(Point2::origin())
        .is_some_and(|(ix, iy)| report.is_in_bounded_complement(ix, iy));
    let outer_radius = k
        .iter_occupied()
        .map(|(ix, iy)| k.cell_center(ix, iy).norm().as_f64())
        .fold(0.0, f64::max);
    Ok(HopfEntry::Computed(HopfLambdaData {
        lambda: lambda.as_f64(),
        cellular_attractor: a,
        repulsion_basin: r,
        annular_attractor: k,
        shape,
        surrounds_origin: surrounds,
        outer_radius,
    }))
}

/// The executable Hopf scenario: per lambda, compute the trapping attractor
/// `A`, the repulsion basin `R`, and the annular attractor `K = A \ R`;
/// classify `K` across three resolutions; check that it surrounds the
/// origin; and report whether outer radii shrink monotonically as lambda
/// decreases. Per-lambda failures are recorded without aborting the scan.
pub fn hopf_scan<T: Scalar>(
    family: &MapFamily<T>,
    lambdas: &[T],
    cfg: &HopfScanConfig<T>,
) -> Result<HopfReport<T>> {
    if lambdas.is_empty() {
        return Err(Error::param("lambdas", "must not be empty"));
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("lambdas", "must be strictly ascending"));
    }
    if lambdas.iter().any(|&l| l < T::zero()) {
        return Err(Error::param("lambdas", "must be non-negative"));
    }
    let mut entries = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let entry = match hopf_single_lambda(family, lambda, cfg) {
            Ok(e) => e,
            Err(e) => HopfEntry::Failed {
                lambda: lambda.as_f64(),
                message: e.to_string(),
            },
        };
        entries.push(entry);
    }
    let radii: Vec<f64> = entries
        .iter()
        .filter_map(|e| match e {
            HopfEntry::Computed(d) => Some(d.outer_radius),
            _ => None,
        })
        .collect();
    let outer_radius_monotone = radii.windows(2).all(|w| w[0] <= w[1]);
    Ok(HopfReport {
        entries,
        outer_radius_monotone,
    })
}

#[derive(Debug, Clone)]
pub struct RobustnessEntry<T: Scalar = f64> {
    pub amplitude: f64,
    /// False when the shared region no longer traps: out of the theorem's
    /// perturbation range, reported rather than failed.
    pub trapping_ok: bool,
    pub shape: Option<ShapeClass>,
    pub verdict_matches_base: Option<bool>,
    pub hausdorff_to_base: Option<f64>,
    pub annular_attractor: Option<BitGrid<T>>,
}

#[derive(Debug, Clone)]
pub struct RobustnessReport<T: Scalar = f64> {
    pub base_shape: ShapeClass,
    pub entries: Vec<RobustnessEntry<T>>,
    /// Distances to the base attractor, ordered by decreasing amplitude,
    /// are nonincreasing within one pixel.
    pub distances_monotone_within_px: bool,
}

/// Robustness of the attractor under bounded perturbations of the map: for
/// each perturbed family, re-verify the shared trapping disk, recompute the
/// annular attractor, compare shape verdicts, and measure the Hausdorff
/// distance to the base attractor. Smaller perturbations must come
/// (weakly) closer to the base.
pub fn robustness_check<T: Scalar>(
    base: &MapFamily<T>,
    lambda0: T,
    perturbed: &[(f64, MapFamily<T>)],
    cfg: &HopfScanConfig<T>,
) -> Result<RobustnessReport<T>> {
    let base_entry = hopf_single_lambda(base, lambda0, cfg)?;
    let HopfEntry::Computed(base_data) = base_entry else {
        return Err(Error::NotTrapping(
            "base family did not produce an annular attractor".into(),
        ));
    };
    let mut entries = Vec::with_capacity(perturbed.len());
    for (amplitude, family) in perturbed {
        let pw = T::one() / cfg.resolution;
        let disk = BitGrid::from_fn(cfg.bounds, cfg.resolution, |p| p.norm() <= cfg.disk_radius)?;
        if !verify_trapping_region(family, lambda0, &disk, cfg.margin_px)? {
            entries.push(RobustnessEntry {
                amplitude: *amplitude,
                trapping_ok: false,
                shape: None,
                verdict_matches_base: None,
                hausdorff_to_base: None,
                annular_attractor: None,
            });
            continue;
        }
        let _ = pw;
        match hopf_single_lambda(family, lambda0, cfg)? {
            HopfEntry::Computed(data) => {
                let d = hausdorff_distance(&data.annular_attractor, &base_data.annular_attractor)?
                    .as_f64();
                entries.push(RobustnessEntry {
                    amplitude: *amplitude,
                    trapping_ok: true,
                    verdict_matches_base: Some(data.shape.verdict == base_data.shape.verdict),
                    shape: Some(data.shape),
                    hausdorff_to_base: Some(d),
                    annular_attractor: Some(data.annular_attractor),
                });
            }
            HopfEntry::PreBifurcation { .. } | HopfEntry::Failed { .. } => {
                entries.push(RobustnessEntry {
                    amplitude: *amplitude,
                    trapping_ok: true,
                    shape: None,
                    verdict_matches_base: None,
                    hausdorff_to_base: None,
                    annular_attractor: None,
                });
            }
        }
    }

    let mut measured: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.hausdorff_to_base.map(|d| (e.amplitude, d)))
        .collect();
    measured.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let px = 1.0 / cfg.resolution.as_f64();
    let distances_monotone_within_px = measured.windows(2).all(|w| w[1].1 <= w[0].1 + px);
    Ok(RobustnessReport {
        base_shape: base_data.shape,
        entries,
        distances_monotone_within_px,
    })
}

// ---------------------------------------------------------------------------
// The built-in test family.

/// Truncated Neimark-Sacker normal form in polar coordinates:
///
/// `r -> r + lambda r - r^3` (clamped at 0), `theta -> theta + omega + b r^2`,
///
/// optionally perturbed by a bounded radial bump and phase twist of size
/// `amplitude`. The origin is a fixed point for every lambda, attracting
/// for `lambda <= 0` and repelling for `lambda > 0`, with the invariant
/// circle at radius `sqrt(lambda)`: the minimal family realizing the
/// topological Hopf hypotheses with an analytic oracle.
///
/// The radial map is strictly monotone for
/// `r^2 < (1 + lambda - 4.5 amplitude) / 3`; the family's exact inverse is
/// computed by safeguarded Newton root-finding there, and image
/// computations automatically avoid the inverse beyond that radius.
pub fn neimark_sacker_perturbed<T: Scalar>(omega: T, b: T, amplitude: T) -> MapFamily<T> {
    let radial = move |lambda: T, r: T| -> T {
        let bump = amplitude * (T::PI() * r / num::<T>(0.7)).sin();
        ((T::one() + lambda) * r - r * r * r + bump).max(T::zero())
    };
    let twist = move |r: T, theta: T| -> T {
        theta + omega + b * r * r + amplitude * (num::<T>(2.0) * theta + num::<T>(3.0) * r).sin()
    };
    let mono_radius = move |lambda: T| -> T {
        let v = (T::one() + lambda - num::<T>(4.5) * amplitude) / num::<T>(3.0);
        v.max(T::zero()).sqrt()
    };

    let forward = move |lambda: T, p: Point2<T>| -> Point2<T> {
        let r = p.norm();
        if r == T::zero() {
            return p;
        }
        let rn = radial(lambda, r);
        let tn = twist(r, p.y.atan2(p.x));
        Point2::new(rn * tn.cos(), rn * tn.sin())
    };

    let inverse = move |lambda: T, q: Point2<T>| -> Option<Point2<T>> {
        let rho = q.norm();
        if rho == T::zero() {
            return Some(Point2::origin());
        }
        let rmax = mono_radius(lambda);
        let top = radial(lambda, rmax);
        if rho > top {
            return None;
        }
        // Safeguarded Newton on the monotone radial branch.
        let tol = T::epsilon() * num::<T>(16.0);
        let mut lo = T::zero();
        let mut hi = rmax;
        let mut r = rho.min(rmax);
        for _ in 0..128 {
            let f = radial(lambda, r) - rho;
            if f.abs() <= tol {
                break;
            }
            if f > T::zero() {
                hi = r;
            } else {
                lo = r;
            }
            let h = num::<T>(1e-7).max(T::epsilon().sqrt());
            let df = (radial(lambda, r + h) - radial(lambda, r - h)) / (h + h);
            let mut rn = r - f / df;
            if !(rn > lo && rn < hi) || !rn.is_finite() {
                rn = (lo + hi) * num::<T>(0.5);
            }
            r = rn;
        }
        // Invert the twist: theta + amp sin(2 theta + 3 r) is a contraction
        // fixed-point problem for amplitudes below 1/2.
        let target = q.y.atan2(q.x) - omega - b * r * r;
        let mut theta = target;
        for _ in 0..64 {
            let next =
                target - amplitude * (num::<T>(2.0) * theta + num::<T>(3.0) * r).sin();
            if (next - theta).abs() <= tol {
                theta = next;
                break;
            }
            theta = next;
        }
        Some(Point2::new(r * theta.cos(), r * theta.sin()))
    };

    MapFamily::new(forward, (num(-0.5), num(0.5)))
        .with_inverse(inverse)
        .with_backward_radius(move |lambda| mono_radius(lambda) * num::<T>(0.999999))
}

/// Unperturbed Neimark-Sacker family.
pub fn neimark_sacker_family<T: Scalar>(omega: T, b: T) -> MapFamily<T> {
    neimark_sacker_perturbed(omega, b, T::zero())
}

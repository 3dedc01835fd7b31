//! Conley attractors of invertible IFS on a compact working region.
//!
//! No contraction is required of the maps: an attractor is certified by an
//! attractor block, a region `Q` whose system image lands strictly inside
//! its own interior. Iterating the system image from a verified block
//! produces a nested sequence whose limit is the attractor, and a
//! parametrized family can be continued along the shared block: for each
//! lambda the block either re-verifies (identifying the continued
//! attractor) or the continuation range ends.

use crate::error::{Error, Result};
use crate::grid::{BitGrid, BoundaryMode};
use crate::hyperspace::{hausdorff_distance, step_over_cells, ConvergenceTrace};
use crate::ifs::{attractor_flags, map_image, AffineMap2, AttractorReport};
use crate::scalar::{num, Scalar};

/// A finite family of invertible affine maps restricted to a compact
/// working region `X`, with no contractivity requirement.
#[derive(Debug, Clone)]
pub struct InvertibleIFS<T: Scalar = f64> {
    maps: Vec<AffineMap2<T>>,
    domain: BitGrid<T>,
}

impl<T: Scalar> InvertibleIFS<T> {
    pub fn new(maps: Vec<AffineMap2<T>>, domain: BitGrid<T>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::param("maps", "need at least one map"));
        }
        if domain.is_empty() {
            return Err(Error::EmptySet("working region X"));
        }
        for m in &maps {
            m.inverse()?;
        }
        Ok(InvertibleIFS { maps, domain })
    }

    pub fn maps(&self) -> &[AffineMap2<T>] {
        &self.maps
    }

    /// The compact working region X.
    pub fn domain(&self) -> &BitGrid<T> {
        &self.domain
    }
}

/// One application of the system set-map `S -> f_1(S) ∪ ... ∪ f_k(S)`,
/// backward-rasterized. `S` must lie in `X` and so must its image; escapes
/// of `X` model a misconfigured system, not a numeric artifact.
pub fn system_image<T: Scalar>(system: &InvertibleIFS<T>, s: &BitGrid<T>) -> Result<BitGrid<T>> {
    if !s.is_subset_of(system.domain())? {
        return Err(Error::param("s", "must be contained in the working region X"));
    }
    let mut out = s.like();
    for (i, map) in system.maps().iter().enumerate() {
        out = out.union(&map_image(map, s, i)?)?;
    }
    if !out.is_subset_of(system.domain())? {
        return Err(Error::ImageEscapesDomain);
    }
    Ok(out)
}

/// An attractor block with its verification state.
#[derive(Debug, Clone)]
pub struct AttractorBlock<T: Scalar = f64> {
    pub block: BitGrid<T>,
    pub margin_px: f64,
    pub verified: bool,
}

/// Block check: the system image of `Q` must survive eroding `Q` by the
/// margin.
pub fn verify_attractor_block<T: Scalar>(
    system: &InvertibleIFS<T>,
    q: &BitGrid<T>,
    margin_px: f64,
) -> Result<bool> {
    if q.is_empty() {
        return Err(Error::EmptySet("attractor block"));
    }
    let image = match system_image(system, q) {
        Ok(img) => img,
        // An image leaving X or the grid certainly left the interior of Q.
        Err(Error::ImageEscapesDomain) | Err(Error::ImageEscapesBounds { .. }) => {
            return Ok(false)
        }
        Err(e) => return Err(e),
    };
    image.subset_of_interior(q, margin_px)
}

/// Conley attractor from a verified block: iterate the system image from
/// `Q`. Blockness makes the sequence nested after the first step, so the
/// per-step Hausdorff distance is measured over the removed cells; the
/// iteration converges when it drops to `tol`.
pub fn conley_attractor<T: Scalar>(
    system: &InvertibleIFS<T>,
    q: &BitGrid<T>,
    margin_px: f64,
    tol: T,
    k_max: usize,
) -> Result<AttractorReport<T>> {
    if !verify_attractor_block(system, q, margin_px)? {
        return Err(Error::BlockNotVerified(format!(
            "system image is not {margin_px} px inside the block"
        )));
    }
    let mut current = q.clone();
    let mut trace = ConvergenceTrace::default();
    for k in 0..k_max {
        let next = system_image(system, &current)?;
        if next.is_empty() {
            return Err(Error::EmptyIterate);
        }
        if k > 0 && !next.is_subset_of(&current)? {
            return Err(Error::NestednessViolated { step: k });
        }
        let step = if k == 0 {
            hausdorff_distance(&next, &current)?
        } else {
            let removed = current.difference(&next)?;
            if removed.is_empty() {
                T::zero()
            } else {
                step_over_cells(&removed, &next)?
            }
        };
        trace.push(k, step.as_f64());
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
                banach_iteration_bound: None,
                clip_deviation_px: None,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: k_max,
        last_step: trace.final_distance,
    })
}

/// Options of a continuation run.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationConfig {
    /// Convergence tolerance of each attractor computation, in pixels.
    pub tol_px: f64,
    /// Block verification margin, in pixels.
    pub margin_px: f64,
    /// Neighborhood radius for the containment assertion
    /// `K_lambda ⊆ dilate(K_0, eps)`, in pixels.
    pub containment_eps_px: f64,
    pub k_max: usize,
    /// When the caller declares the family contractive on the basin, the
    /// report additionally checks that the Hausdorff distance to the base
    /// attractor decreases as lambda decreases.
    pub declared_contractive: bool,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            tol_px: 2.0,
            margin_px: 2.0,
            containment_eps_px: 3.0,
            k_max: 2000,
            declared_contractive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuationStatus {
    Verified,
    BlockLost,
}

#[derive(Debug, Clone)]
pub struct ContinuationEntry<T: Scalar = f64> {
    pub lambda: f64,
    pub status: ContinuationStatus,
    pub attractor: Option<BitGrid<T>>,
    /// Informational: the convergence in the theorem is weaker than
    /// Hausdorff, so the asserted statement is the containment below.
    pub hausdorff_to_base: Option<f64>,
    pub contained_in_dilated_base: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ContinuationReport<T: Scalar = f64> {
    pub base_attractor: BitGrid<T>,
    pub entries: Vec<ContinuationEntry<T>>,
    /// Largest lambda before the block first failed to verify, if it ever
    /// did: a lower estimate of the continuation range.
    pub first_block_loss: Option<f64>,
    pub containment_eps_px: f64,
    /// Only present when the family was declared contractive: Hausdorff
    /// distances to the base shrink (within a pixel) as lambda decreases.
    pub hausdorff_convergent: Option<bool>,
}

/// Continuation of a Conley attractor along a parametrized family. The
/// continued attractor at each lambda is identified by the shared block
/// `Q`: where `Q` re-verifies, `K_lambda` is computed and compared against
/// the base attractor `K_0`; where it does not, the continuation range has
/// ended.
pub fn continuation<T: Scalar>(
    family: impl Fn(T) -> Result<InvertibleIFS<T>>,
    q: &BitGrid<T>,
    lambdas: &[T],
    cfg: &ContinuationConfig,
) -> Result<ContinuationReport<T>> {
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("lambdas", "must be strictly ascending"));
    }
    let tol = num::<T>(cfg.tol_px) * q.pixel_width();
    let base_system = family(T::zero())?;
    if !verify_attractor_block(&base_system, q, cfg.margin_px)? {
        return Err(Error::BlockNotVerified("block-lost at lambda = 0".into()));
    }
    let base = conley_attractor(&base_system, q, cfg.margin_px, tol, cfg.k_max)?.attractor;
    let eps = num::<T>(cfg.containment_eps_px) * q.pixel_width();
    let dilated_base = base.dilate(eps, BoundaryMode::Clamped)?;

    let mut entries = Vec::with_capacity(lambdas.len());
    let mut first_block_loss = None;
    for &lambda in lambdas {
        let system = family(lambda)?;
        if !verify_attractor_block(&system, q, cfg.margin_px)? {
            if first_block_loss.is_none() {
                first_block_loss = Some(lambda.as_f64());
            }
            entries.push(ContinuationEntry {
                lambda: lambda.as_f64(),
                status: ContinuationStatus::BlockLost,
                attractor: None,
                hausdorff_to_base: None,
                contained_in_dilated_base: None,
            });
            continue;
        }
        let k = conley_attractor(&system, q, cfg.margin_px, tol, cfg.k_max)?.attractor;
        entries.push(ContinuationEntry {
            lambda: lambda.as_f64(),
            status: ContinuationStatus::Verified,
            hausdorff_to_base: Some(hausdorff_distance(&k, &base)?.as_f64()),
            contained_in_dilated_base: Some(k.is_subset_of(&dilated_base)?),
            attractor: Some(k),
        });
    }

    let hausdorff_convergent = cfg.declared_contractive.then(|| {
        let px = q.pixel_width().as_f64();
        let ds: Vec<f64> = entries
            .iter()
            .filter_map(|e| e.hausdorff_to_base)
            .collect();
        // Along ascending lambda the distance may only grow (so that it
        // shrinks to 0 as lambda descends to 0), up to pixel jitter.
        ds.windows(2).all(|w| w[1] >= w[0] - px)
    });

    Ok(ContinuationReport {
        base_attractor: base,
        entries,
        first_block_loss,
        containment_eps_px: cfg.containment_eps_px,
        hausdorff_convergent,
    })
}

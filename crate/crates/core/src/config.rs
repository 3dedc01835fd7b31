//! JSON configuration documents and built-in scenario definitions.
//!
//! The IFS definition file is a JSON object:
//!
//! ```json
//! {
//!   "maps": [{"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0, "f": 0}],
//!   "probabilities": [1.0],
//!   "bounds": [-0.05, -0.05, 1.05, 0.95],
//!   "resolution": 512,
//!   "seed_region": {"rect": {"x0": 0, "y0": 0, "x1": 1, "y1": 1}}
//! }
//! ```
//!
//! `maps` is required and nonempty; each map acts as
//! `(x, y) -> (a x + b y + e, c x + d y + f)`. Everything else is optional.
//! Parse errors carry line and column; semantic errors name the offending
//! key.

use serde::Deserialize;

use crate::conley::InvertibleIFS;
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect, SeedRegion};
use crate::grid::BitGrid;
use crate::ifs::{
    example_41_bounds, example_41_first3, example_41_ifs, example_41_last3, koch_bounds,
    koch_ifs, AffineMap2, IFSystem,
};
use crate::pgm;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsConfig {
    pub maps: Vec<MapCoeffs>,
    #[serde(default)]
    pub probabilities: Option<Vec<f64>>,
    /// `[x0, y0, x1, y1]`.
    #[serde(default)]
    pub bounds: Option<[f64; 4]>,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub seed_region: Option<SeedConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl From<MapCoeffs> for AffineMap2<f64> {
    fn from(m: MapCoeffs) -> Self {
        AffineMap2::new(m.a, m.b, m.c, m.d, m.e, m.f)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedConfig {
    Rect {
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
    },
    Disk {
        cx: f64,
        cy: f64,
        radius: f64,
    },
}

impl SeedConfig {
    pub fn to_region(self) -> Result<SeedRegion<f64>> {
        match self {
            SeedConfig::Rect { x0, y0, x1, y1 } => Ok(SeedRegion::Rect(Rect::new(x0, y0, x1, y1)?)),
            SeedConfig::Disk { cx, cy, radius } => {
                if !(radius > 0.0) {
                    return Err(Error::param("seed_region.radius", "must be positive"));
                }
                Ok(SeedRegion::Disk {
                    center: Point2::new(cx, cy),
                    radius,
                })
            }
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Config {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_ifs_config(text: &str) -> Result<IfsConfig> {
    let cfg: IfsConfig = serde_json::from_str(text).map_err(json_error)?;
    cfg.validate()?;
    Ok(cfg)
}

impl IfsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.maps.is_empty() {
            return Err(Error::param("maps", "must contain at least one map"));
        }
        if let Some(p) = &self.probabilities {
            if p.len() != self.maps.len() {
                return Err(Error::param(
                    "probabilities",
                    "length must equal the number of maps",
                ));
            }
            if p.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::param("probabilities", "must be positive and finite"));
            }
        }
        if let Some(r) = self.resolution {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::param("resolution", "must be positive and finite"));
            }
        }
        if let Some(b) = self.bounds {
            Rect::new(b[0], b[1], b[2], b[3])?;
        }
        if let (Some(b), Some(seed)) = (self.bounds, self.seed_region) {
            let bounds = Rect::new(b[0], b[1], b[2], b[3])?;
            if !bounds.contains_rect(&seed.to_region()?.bounding_rect()) {
                return Err(Error::param("seed_region", "must lie inside bounds"));
            }
        }
        Ok(())
    }

    pub fn system(&self) -> Result<IFSystem<f64>> {
        let maps: Vec<AffineMap2<f64>> = self.maps.iter().map(|&m| m.into()).collect();
        match &self.probabilities {
            Some(p) => IFSystem::with_probabilities(maps, p.clone()),
            None => IFSystem::new(maps),
        }
    }

    pub fn bounds_rect(&self) -> Result<Option<Rect<f64>>> {
        self.bounds
            .map(|b| Rect::new(b[0], b[1], b[2], b[3]))
            .transpose()
    }

    pub fn seed(&self) -> Result<Option<SeedRegion<f64>>> {
        self.seed_region.map(|s| s.to_region()).transpose()
    }
}

/// A named scenario: system, frame, seed and a sensible top resolution.
#[derive(Debug, Clone)]
pub struct BuiltinIfs {
    pub name: &'static str,
    pub system: IFSystem<f64>,
    pub bounds: Rect<f64>,
    pub seed: Option<SeedRegion<f64>>,
    pub default_resolution: f64,
}

/// Look up one of the built-in systems: `example41`, `example41-first3`,
/// `example41-last3`, `koch`.
pub fn builtin_ifs(name: &str) -> Result<BuiltinIfs> {
    match name {
        "example41" => Ok(BuiltinIfs {
            name: "example41",
            system: example_41_ifs(),
            bounds: example_41_bounds(),
            seed: None,
            default_resolution: 1024.0,
        }),
        "example41-first3" => Ok(BuiltinIfs {
            name: "example41-first3",
            system: example_41_first3(),
            bounds: example_41_bounds(),
            seed: None,
            default_resolution: 1024.0,
        }),
        "example41-last3" => Ok(BuiltinIfs {
            name: "example41-last3",
            system: example_41_last3(),
            bounds: example_41_bounds(),
            seed: None,
            default_resolution: 1024.0,
        }),
        // The Koch curve is one-dimensional: seeding with a thin strip
        // along the baseline keeps every iterate a thin curve instead of a
        // slowly thinning blob of seed images.
        "koch" => Ok(BuiltinIfs {
            name: "koch",
            system: koch_ifs(),
            bounds: koch_bounds(),
            seed: Some(SeedRegion::Rect(Rect::new(0.0, -0.02, 1.0, 0.02).unwrap())),
            default_resolution: 729.0,
        }),
        other => Err(Error::param(
            "builtin",
            format!("unknown builtin `{other}` (expected example41, example41-first3, example41-last3, koch)"),
        )),
    }
}

/// Continuation run configuration: a parametrized family plus the shared
/// attractor block.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConleyConfig {
    pub family: FamilyConfig,
    pub block: BlockConfig,
    pub lambdas: Vec<f64>,
    pub bounds: [f64; 4],
    pub resolution: f64,
    #[serde(default)]
    pub tol_px: Option<f64>,
    #[serde(default)]
    pub containment_eps_px: Option<f64>,
    #[serde(default)]
    pub declared_contractive: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyConfig {
    /// The same maps at every lambda.
    Constant { maps: Vec<MapCoeffs> },
    /// Every translation drifts linearly: `e -> e + lambda vx`,
    /// `f -> f + lambda vy`.
    TranslationDrift {
        maps: Vec<MapCoeffs>,
        velocity: [f64; 2],
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockConfig {
    Disk { cx: f64, cy: f64, radius: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    /// Load the block from a PGM whose geometry must match the run's
    /// bounds and resolution.
    Pgm { path: String },
}

pub fn parse_conley_config(text: &str) -> Result<ConleyConfig> {
    let cfg: ConleyConfig = serde_json::from_str(text).map_err(json_error)?;
    cfg.validate()?;
    Ok(cfg)
}

impl ConleyConfig {
    pub fn validate(&self) -> Result<()> {
        let maps = match &self.family {
            FamilyConfig::Constant { maps } => maps,
            FamilyConfig::TranslationDrift { maps, .. } => maps,
        };
        if maps.is_empty() {
            return Err(Error::param("family.maps", "must contain at least one map"));
        }
        if self.lambdas.is_empty() {
            return Err(Error::param("lambdas", "must not be empty"));
        }
        if self.lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("lambdas", "must be strictly ascending"));
        }
        if !(self.resolution > 0.0) || !self.resolution.is_finite() {
            return Err(Error::param("resolution", "must be positive and finite"));
        }
        Rect::new(self.bounds[0], self.bounds[1], self.bounds[2], self.bounds[3])?;
        if let Some(t) = self.tol_px {
            if !(t > 0.0) {
                return Err(Error::param("tol_px", "must be positive"));
            }
        }
        if let Some(e) = self.containment_eps_px {
            if !(e > 0.0) {
                return Err(Error::param("containment_eps_px", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn bounds_rect(&self) -> Result<Rect<f64>> {
        Rect::new(self.bounds[0], self.bounds[1], self.bounds[2], self.bounds[3])
    }

    /// The working region X: the full bounds rectangle at the configured
    /// resolution.
    pub fn domain(&self) -> Result<BitGrid<f64>> {
        let bounds = self.bounds_rect()?;
        BitGrid::with_seed(bounds, self.resolution, Some(SeedRegion::Rect(bounds)))
    }

    pub fn block_grid(&self) -> Result<BitGrid<f64>> {
        let bounds = self.bounds_rect()?;
        match &self.block {
            BlockConfig::Disk { cx, cy, radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::param("block.radius", "must be positive"));
                }
                let c = Point2::new(*cx, *cy);
                BitGrid::from_fn(bounds, self.resolution, |p| p.distance(c) <= *radius)
            }
            BlockConfig::Rect { x0, y0, x1, y1 } => {
                let r = Rect::new(*x0, *y0, *x1, *y1)?;
                BitGrid::with_seed(bounds, self.resolution, Some(SeedRegion::Rect(r)))
            }
            BlockConfig::Pgm { path } => {
                let g: BitGrid<f64> = pgm::read(path)?;
                let domain = self.domain()?;
                if !g.same_geometry(&domain) {
                    return Err(Error::param(
                        "block.pgm",
                        "PGM geometry does not match the run's bounds/resolution",
                    ));
                }
                Ok(g)
            }
        }
    }

    /// The family as a closure over lambda.
    pub fn family_fn(&self) -> Result<impl Fn(f64) -> Result<InvertibleIFS<f64>> + '_> {
        let domain = self.domain()?;
        let family = self.family.clone();
        Ok(move |lambda: f64| {
            let maps: Vec<AffineMap2<f64>> = match &family {
                FamilyConfig::Constant { maps } => maps.iter().map(|&m| m.into()).collect(),
                FamilyConfig::TranslationDrift { maps, velocity } => maps
                    .iter()
                    .map(|&m| {
                        let mut map: AffineMap2<f64> = m.into();
                        map.e += lambda * velocity[0];
                        map.f += lambda * velocity[1];
                        map
                    })
                    .collect(),
            };
            InvertibleIFS::new(maps, domain.clone())
        })
    }
}

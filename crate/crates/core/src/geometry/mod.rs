//! Zero sets as differential spaces, with a finite-cover sheaf layer.
//!
//! Set-level questions such as inclusion of opens are
//! answered on seeded samples of the carrier, with the seed and tolerance
//! recorded in the results.

mod bump;
mod ringed;
mod sheaf;

pub use bump::{bump, bump_on_space, smooth_step_cutoff, ClosedSet};
pub use ringed::RingedSpaceMap;
pub use sheaf::{germ_invert, glue, presheaf_restrict, GlueCertificate};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cring::{sample_zero_set, Ring, RingError, RingFile, RingPresentation};
use crate::expr::{ExprError, SmoothExpr};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("the carrier has no sampled points")]
    EmptyCarrier,
    #[error("radii must satisfy 0 <= r_in < r_out (got {r_in}, {r_out})")]
    BadRadii { r_in: f64, r_out: f64 },
    #[error("point is too close to the closed set: distance {distance} < {r_out} at {witness:?}")]
    PointTooClose { witness: Vec<f64>, distance: f64, r_out: f64 },
    #[error("open set is not contained in the section's domain: {witness:?}")]
    NotIncluded { witness: Vec<f64> },
    #[error("sections {pair:?} disagree by {difference:e} at {witness:?}")]
    IncompatibleFamily { pair: (usize, usize), witness: Vec<f64>, difference: f64 },
    #[error("cover and section lists differ in length or are empty")]
    EmptyCover,
    #[error("germ value vanishes at {point:?}")]
    ZeroValue { point: Vec<f64> },
    #[error("base point is not in the section's domain")]
    PointOutsideDomain,
    #[error("image leaves the target zero set: residual {value:e} at {witness:?}")]
    OffTarget { witness: Vec<f64>, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("objects live on different spaces")]
    SpaceMismatch,
}

/// The zero set of a presented ring inside a box, with cached samples.
pub struct DiffSpace {
    ring: Ring,
    region: Vec<[f64; 2]>,
    seed: u64,
    samples: Vec<Vec<f64>>,
}

pub type Space = Arc<DiffSpace>;

impl fmt::Debug for DiffSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffSpace")
            .field("ring", &self.ring)
            .field("region", &self.region)
            .field("samples", &self.samples.len())
            .finish()
    }
}

impl DiffSpace {
    pub const DEFAULT_SAMPLES: usize = 256;

    pub fn new(ring: &Ring, region: Vec<[f64; 2]>, count: usize, seed: u64) -> Result<Space, GeometryError> {
        if region.len() != ring.n() {
            return Err(GeometryError::DimensionMismatch { expected: ring.n(), got: region.len() });
        }
        let samples = match sample_zero_set(ring, count, &region, seed) {
            Ok(s) => s,
            Err(RingError::SamplingFailed { found: 0, .. }) => return Err(GeometryError::EmptyCarrier),
            Err(e) => return Err(e.into()),
        };
        if samples.is_empty() {
            return Err(GeometryError::EmptyCarrier);
        }
        Ok(Arc::new(DiffSpace { ring: ring.clone(), region, seed, samples }))
    }

    /// Space for a ring with its oracle box and seed.
    pub fn of_ring(ring: &Ring) -> Result<Space, GeometryError> {
        let o = ring.oracle();
        Self::new(ring, o.region_for(ring.n()), Self::DEFAULT_SAMPLES, o.seed)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn region(&self) -> &[[f64; 2]] {
        &self.region
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn whole(self: &Arc<Self>) -> BasicOpen {
        BasicOpen { space: self.clone(), clauses: vec![Vec::new()] }
    }

    /// `{h > 0}` for a single defining function.
    pub fn positivity(self: &Arc<Self>, h: SmoothExpr) -> BasicOpen {
        BasicOpen { space: self.clone(), clauses: vec![vec![h.normalize()]] }
    }

    pub fn parse_open(self: &Arc<Self>, positivity: &[&str]) -> Result<BasicOpen, GeometryError> {
        let hs = positivity.iter().map(|s| crate::parse(s, self.n())).collect::<Result<Vec<_>, _>>()?;
        Ok(BasicOpen { space: self.clone(), clauses: vec![hs] })
    }
}

/// A finite union of finite intersections of positivity sets `{h > 0}`,
/// intersected with the carrier.
#[derive(Clone)]
pub struct BasicOpen {
    space: Space,
    clauses: Vec<Vec<SmoothExpr>>,
}

impl BasicOpen {
    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Union of intersections; an empty inner list is the whole carrier.
    pub fn clauses(&self) -> &[Vec<SmoothExpr>] {
        &self.clauses
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.clauses
            .iter()
            .any(|c| c.iter().all(|h| h.evaluate(p).is_ok_and(|v| v > 0.0)))
    }

    pub fn samples(&self) -> Vec<Vec<f64>> {
        self.space.samples().iter().filter(|p| self.contains(p)).cloned().collect()
    }

    pub fn intersect(&self, other: &BasicOpen) -> BasicOpen {
        let mut clauses = Vec::new();
        for a in &self.clauses {
            for b in &other.clauses {
                clauses.push(a.iter().chain(b).cloned().collect());
            }
        }
        BasicOpen { space: self.space.clone(), clauses }
    }

    pub fn union(&self, other: &BasicOpen) -> BasicOpen {
        let clauses = self.clauses.iter().chain(&other.clauses).cloned().collect();
        BasicOpen { space: self.space.clone(), clauses }
    }

    /// Sample-based inclusion; returns a witness of non-inclusion.
    pub fn included_in(&self, other: &BasicOpen) -> Result<(), Vec<f64>> {
        match self.samples().into_iter().find(|p| !other.contains(p)) {
            Some(p) => Err(p),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "M".to_string()
                } else {
                    c.iter().map(|h| format!("{{{h} > 0}}")).collect::<Vec<_>>().join(" ∩ ")
                }
            })
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// A section over an open set, represented by an ambient smooth function.
#[derive(Clone, Debug)]
pub struct Section {
    pub open: BasicOpen,
    pub rep: SmoothExpr,
    /// Set when the open set has no sampled points.
    pub degenerate: bool,
}

impl Section {
    pub fn new(open: BasicOpen, rep: SmoothExpr) -> Self {
        let degenerate = open.samples().is_empty();
        Section { open, rep: rep.normalize(), degenerate }
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64, ExprError> {
        self.rep.evaluate(p)
    }

    /// Largest sampled difference on the common domain.
    pub fn max_difference(&self, other: &Section) -> Result<f64, ExprError> {
        let common = self.open.intersect(&other.open);
        let mut m: f64 = 0.0;
        for p in common.samples() {
            m = m.max((self.eval(&p)? - other.eval(&p)?).abs());
        }
        Ok(m)
    }
}

/// A germ at a point, represented by a section around it.
#[derive(Clone, Debug)]
pub struct GermRep {
    pub point: Vec<f64>,
    pub section: Section,
}

impl GermRep {
    pub fn new(point: Vec<f64>, section: Section) -> Result<Self, GeometryError> {
        if !section.open.contains(&point) {
            return Err(GeometryError::PointOutsideDomain);
        }
        Ok(GermRep { point, section })
    }

    pub fn value(&self) -> Result<f64, ExprError> {
        self.section.eval(&self.point)
    }

    /// Agreement on samples within `radius` of the base point, in both domains.
    pub fn agrees_near(&self, other: &GermRep, radius: f64, tol: f64) -> Result<bool, ExprError> {
        let common = self.section.open.intersect(&other.section.open);
        for p in common.samples() {
            let dist = p.iter().zip(&self.point).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if dist < radius && (self.section.eval(&p)? - other.section.eval(&p)?).abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// JSON description of a space and a finite family of opens.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub ring: RingFile,
    #[serde(rename = "box", default)]
    pub region: Vec<[f64; 2]>,
    #[serde(default)]
    pub opens: Vec<OpenSpec>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpenSpec {
    pub positivity: Vec<String>,
}

impl SpaceFile {
    /// Build the space and its opens.
    pub fn load(&self) -> Result<(Space, Vec<BasicOpen>), GeometryError> {
        let ring = RingPresentation::from_file(&self.ring)?;
        let region = if self.region.is_empty() { ring.oracle().region_for(ring.n()) } else { self.region.clone() };
        let space = DiffSpace::new(&ring, region, DiffSpace::DEFAULT_SAMPLES, self.seed)?;
        let mut opens = Vec::new();
        for o in &self.opens {
            let hs: Vec<&str> = o.positivity.iter().map(String::as_str).collect();
            opens.push(space.parse_open(&hs)?);
        }
        Ok((space, opens))
    }
}

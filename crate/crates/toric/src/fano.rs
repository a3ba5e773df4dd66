//! Classification predicates for lattice polytopes with respect to the
//! toric Fano hierarchy: canonical Fano, reflexive, (almost) pseudoreflexive,
//! almost reflexive, and the LDP-polygon test in dimension 2.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::IntVec;
use crate::polytope::LatticePolytope;

/// Flags and lattice point counts describing where a polytope sits in the
/// Fano hierarchy. When the origin is not interior every flag is false but
/// the counts are still reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_canonical_fano: bool,
    pub is_reflexive: bool,
    pub is_almost_pseudoreflexive: bool,
    pub is_pseudoreflexive: bool,
    pub is_almost_reflexive: bool,
    /// Only meaningful in dimension 2.
    pub is_ldp_polygon: bool,
    pub interior_point_count: usize,
    pub boundary_point_count: usize,
}

/// Convex hull `[P*] = conv(P* ∩ M)` of the lattice points of the dual
/// polytope; `None` when those points do not span the ambient space.
pub fn lattice_hull_of_dual(p: &LatticePolytope) -> Result<Option<LatticePolytope>> {
    let dual = p.dual()?;
    let pts = dual.lattice_points();
    let all: Vec<IntVec> = pts.boundary.iter().chain(&pts.interior).cloned().collect();
    match LatticePolytope::convex_hull(&all, p.dim()) {
        Ok(hull) => Ok(Some(hull)),
        Err(Error::NotFullDimensional { .. }) | Err(Error::EmptyInput) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Classify a polytope by direct evaluation of the definitions.
pub fn classify(p: &LatticePolytope) -> Result<ClassificationReport> {
    let points = p.lattice_points();
    let mut report = ClassificationReport {
        is_canonical_fano: false,
        is_reflexive: false,
        is_almost_pseudoreflexive: false,
        is_pseudoreflexive: false,
        is_almost_reflexive: false,
        is_ldp_polygon: false,
        interior_point_count: points.interior.len(),
        boundary_point_count: points.boundary.len(),
    };
    if !p.contains_origin_interior() {
        return Ok(report);
    }

    report.is_canonical_fano =
        points.interior.len() == 1 && points.interior[0].iter().all(Zero::is_zero);

    let dual = p.dual()?;
    report.is_reflexive = dual.denominator_l().is_one();

    if p.dim() == 2 {
        report.is_ldp_polygon = p.vertices().iter().all(|v| is_primitive(v));
    }

    if let Some(hull) = lattice_hull_of_dual(p)? {
        if hull.contains_origin_interior() {
            report.is_almost_pseudoreflexive = true;
            let hull_dual = hull.dual()?;
            report.is_almost_reflexive = hull_dual.denominator_l().is_one();
            if let Some(round_trip) = lattice_hull_of_dual(&hull)? {
                report.is_pseudoreflexive = round_trip.vertices() == p.vertices();
            }
        }
    }
    Ok(report)
}

/// Lightweight canonical-Fano test: the origin is the unique interior
/// lattice point.
pub fn is_canonical_fano(p: &LatticePolytope) -> bool {
    if !p.contains_origin_interior() {
        return false;
    }
    let interior = p.lattice_points().interior;
    interior.len() == 1 && interior[0].iter().all(Zero::is_zero)
}

fn is_primitive(v: &[BigInt]) -> bool {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    g.is_one()
}

/// Check the implication chain the flags must satisfy.
pub fn flags_consistent(r: &ClassificationReport) -> bool {
    (!r.is_reflexive || r.is_almost_reflexive)
        && (!r.is_almost_reflexive || r.is_almost_pseudoreflexive)
        && (!r.is_pseudoreflexive || r.is_almost_pseudoreflexive)
        && (!r.is_reflexive || r.is_canonical_fano)
}

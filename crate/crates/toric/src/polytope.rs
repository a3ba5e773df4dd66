//! Lattice and rational polytopes in dimension 2 to 4: convex hulls, face
//! lattices, polar duals, normalized volumes, lattice distances and lattice
//! point enumeration. All predicates are exact.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    self, affine_rank, coords_in_basis, dot, integer_det, lcm, sub, sublattice_basis, IntVec,
    RatVec,
};

/// Maximum number of vertices per polytope (vertex sets are stored as `u64`
/// bitmasks).
const MAX_VERTICES: usize = 64;

/// A facet-defining inequality `<normal, x> >= offset`, tight on the facet.
///
/// The normal is primitive and points into the polytope, so for a polytope
/// with the origin in its interior the lattice distance of the facet is
/// `-offset > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub vertex_ids: Vec<usize>,
    pub normal: IntVec,
    pub offset: BigInt,
}

/// Full-dimensional polytope with integer vertices in canonical
/// (lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<IntVec>,
    facets: Vec<Facet>,
}

/// Lattice points of a polytope, split along the boundary.
#[derive(Debug, Clone)]
pub struct LatticePointSet {
    pub boundary: Vec<IntVec>,
    pub interior: Vec<IntVec>,
}

impl LatticePointSet {
    pub fn total(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }
}

impl LatticePolytope {
    /// Convex hull of a point set: redundant points are discarded and the
    /// vertex order is canonicalized.
    pub fn convex_hull(points: &[IntVec], dim: usize) -> Result<Self> {
        if !(2..=4).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "point of length {} in dimension {dim}",
                    p.len()
                )));
            }
        }
        let mut points: Vec<IntVec> = points.to_vec();
        points.sort();
        points.dedup();
        let rank = affine_rank(&points);
        if rank < dim {
            return Err(Error::NotFullDimensional {
                expected: dim,
                got: rank,
            });
        }
        let points = extreme_points(points, dim);
        let raw_facets = enumerate_facets(&points, dim);
        let vertices = hull_vertices(&points, &raw_facets, dim);
        let facets = raw_facets
            .into_iter()
            .map(|(normal, offset)| {
                let vertex_ids = vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| dot(&normal, v) == offset)
                    .map(|(i, _)| i)
                    .collect();
                Facet {
                    vertex_ids,
                    normal,
                    offset,
                }
            })
            .collect();
        Ok(Self {
            dim,
            vertices,
            facets,
        })
    }

    /// Strict constructor: the given points must be exactly the vertices.
    ///
    /// Duplicate or redundant (non-vertex) points are rejected, never
    /// silently dropped.
    pub fn from_vertices(vertices: &[IntVec], dim: usize) -> Result<Self> {
        let mut sorted = vertices.to_vec();
        sorted.sort();
        let n = sorted.len();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidPolytope("duplicate vertex".into()));
        }
        let hull = Self::convex_hull(&sorted, dim)?;
        if hull.vertices.len() != sorted.len() {
            return Err(Error::InvalidPolytope(
                "input contains non-vertex points".into(),
            ));
        }
        Ok(hull)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// True if the origin lies strictly inside the polytope.
    pub fn contains_origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_negative())
    }

    /// Exact membership test for an integer point.
    pub fn contains(&self, point: &[BigInt]) -> bool {
        self.facets
            .iter()
            .all(|f| dot(&f.normal, point) >= f.offset)
    }

    /// Normalized volume `d! * vol(P)` of the whole polytope.
    pub fn normalized_volume(&self) -> BigInt {
        let v = normalized_volume_of_points(&self.vertices)
            .expect("volume of a valid polytope");
        debug_assert!(v.is_integer());
        v.to_integer()
    }

    /// All lattice points, partitioned into boundary and interior.
    pub fn lattice_points(&self) -> LatticePointSet {
        let constraints: Vec<(IntVec, BigInt)> = self
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        let (lo, hi) = integer_bounding_box(&self.vertices);
        scan_lattice_points(&constraints, &lo, &hi, self.dim)
    }

    /// Polar dual `{y : <y, x> >= -1 for all x in P}`; rational in general.
    pub fn dual(&self) -> Result<RationalPolytope> {
        if !self.contains_origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        let mut dual_vertices: Vec<RatVec> = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            let n = -&f.offset;
            dual_vertices.push(
                f.normal
                    .iter()
                    .map(|c| BigRational::new(c.clone(), n.clone()))
                    .collect(),
            );
        }
        RationalPolytope::new(&dual_vertices, self.dim)
    }

    /// Face lattice with volumes, facet normals and lattice distances.
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        FaceLattice::build(self, &BigInt::one())
    }
}

/// Polytope with rational vertices, stored as the minimal integer dilation
/// `l * P` together with the denominator `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<RatVec>,
    denominator: BigInt,
    scaled: LatticePolytope,
}

impl RationalPolytope {
    /// Build from an exact vertex list; `l` is the minimal positive integer
    /// making `l * P` a lattice polytope.
    pub fn new(vertices: &[RatVec], dim: usize) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut denominator = BigInt::one();
        for v in vertices {
            for c in v {
                denominator = lcm(&denominator, c.denom());
            }
        }
        let scaled_pts: Vec<IntVec> = vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| (c * BigRational::from(denominator.clone())).to_integer())
                    .collect()
            })
            .collect();
        let scaled = LatticePolytope::from_vertices(&scaled_pts, dim)?;
        let mut vertices = vertices.to_vec();
        vertices.sort();
        Ok(Self {
            dim,
            vertices,
            denominator,
            scaled,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    /// Minimal `l` such that `l * P` is a lattice polytope.
    pub fn denominator_l(&self) -> &BigInt {
        &self.denominator
    }

    /// The dilation `l * P` as a lattice polytope.
    pub fn scaled(&self) -> &LatticePolytope {
        &self.scaled
    }

    /// Reinterpret as a lattice polytope if `l = 1`.
    pub fn as_lattice(&self) -> Option<&LatticePolytope> {
        self.denominator.is_one().then_some(&self.scaled)
    }

    pub fn contains_origin_interior(&self) -> bool {
        self.scaled.contains_origin_interior()
    }

    /// Normalized volume with the `1/l^d` rational-polytope convention.
    pub fn normalized_volume(&self) -> BigRational {
        let scaled = self.scaled.normalized_volume();
        BigRational::new(scaled, pow(&self.denominator, self.dim))
    }

    /// Lattice points of the rational polytope itself.
    pub fn lattice_points(&self) -> LatticePointSet {
        // x is in P iff l*x is in the scaled polytope.
        let constraints: Vec<(IntVec, BigInt)> = self
            .scaled
            .facets()
            .iter()
            .map(|f| {
                (
                    f.normal.iter().map(|c| c * &self.denominator).collect(),
                    f.offset.clone(),
                )
            })
            .collect();
        let (lo, hi) = rational_bounding_box(&self.vertices);
        scan_lattice_points(&constraints, &lo, &hi, self.dim)
    }

    /// Face lattice with volumes and distances rescaled by powers of `1/l`.
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        FaceLattice::build(&self.scaled, &self.denominator)
    }
}

fn pow(base: &BigInt, exp: usize) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// A face of a polytope.
///
/// Volumes are normalized (`k!` times the `k`-dimensional volume in the
/// saturated sublattice of the affine span); for faces of a rational polytope
/// they carry the `1/l^k` scaling. `normal` and `distance` are present on
/// facets only.
#[derive(Debug, Clone)]
pub struct Face {
    pub id: usize,
    pub dim: usize,
    pub vertex_ids: Vec<usize>,
    pub volume: BigRational,
    pub normal: Option<IntVec>,
    pub distance: Option<BigRational>,
    pub children: Vec<usize>,
}

/// All faces of a polytope ordered by `(dim, vertex_ids)`, including the
/// polytope itself as the unique top face.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
    by_dim: Vec<Vec<usize>>,
}

impl FaceLattice {
    fn build(p: &LatticePolytope, denominator: &BigInt) -> Result<Self> {
        let dim = p.dim();
        if p.vertices.len() > MAX_VERTICES {
            return Err(Error::InvalidPolytope(format!(
                "more than {MAX_VERTICES} vertices"
            )));
        }
        let full_mask = mask_of(&(0..p.vertices.len()).collect::<Vec<_>>());
        let mut masks: HashSet<u64> = HashSet::new();
        masks.insert(full_mask);
        let facet_masks: Vec<u64> = p.facets.iter().map(|f| mask_of(&f.vertex_ids)).collect();
        for &m in &facet_masks {
            masks.insert(m);
        }
        // Faces are exactly the intersections of facet vertex sets.
        let mut frontier: Vec<u64> = facet_masks.clone();
        while let Some(m) = frontier.pop() {
            for &f in &facet_masks {
                let i = m & f;
                if i != 0 && masks.insert(i) {
                    frontier.push(i);
                }
            }
        }

        let facet_lookup: HashMap<u64, usize> = facet_masks
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();

        let mut keyed: Vec<(usize, Vec<usize>, u64)> = Vec::with_capacity(masks.len());
        for m in masks {
            let ids = ids_of(m);
            let pts: Vec<IntVec> = ids.iter().map(|&i| p.vertices[i].clone()).collect();
            keyed.push((affine_rank(&pts), ids, m));
        }
        keyed.sort();

        let scale = BigRational::from(denominator.clone());
        let mut faces = Vec::with_capacity(keyed.len());
        let mut by_dim = vec![Vec::new(); dim + 1];
        for (id, (fdim, vertex_ids, m)) in keyed.iter().enumerate() {
            let pts: Vec<IntVec> = vertex_ids.iter().map(|&i| p.vertices[i].clone()).collect();
            let mut volume = normalized_volume_of_points(&pts)?;
            volume /= pow_rat(&scale, *fdim);
            let (normal, distance) = match facet_lookup.get(m) {
                Some(&fi) if *fdim == dim - 1 => {
                    let f = &p.facets[fi];
                    let n = BigRational::from(-&f.offset) / &scale;
                    (Some(f.normal.clone()), Some(n))
                }
                _ => (None, None),
            };
            by_dim[*fdim].push(id);
            faces.push(Face {
                id,
                dim: *fdim,
                vertex_ids: vertex_ids.clone(),
                volume,
                normal,
                distance,
                children: Vec::new(),
            });
        }
        // Incidence between consecutive dimensions.
        let masks: Vec<u64> = faces.iter().map(|f| mask_of(&f.vertex_ids)).collect();
        for id in 0..faces.len() {
            if faces[id].dim == 0 {
                continue;
            }
            let children: Vec<usize> = by_dim[faces[id].dim - 1]
                .iter()
                .copied()
                .filter(|&c| masks[c] & masks[id] == masks[c])
                .collect();
            faces[id].children = children;
        }
        Ok(Self { dim, faces, by_dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.by_dim
            .get(k)
            .into_iter()
            .flatten()
            .map(move |&id| &self.faces[id])
    }

    /// The polytope itself as the top face.
    pub fn top(&self) -> &Face {
        let id = self.by_dim[self.dim][0];
        &self.faces[id]
    }

    /// Lattice distance from the origin to a facet.
    pub fn lattice_distance(&self, face_id: usize) -> Result<BigRational> {
        self.faces
            .get(face_id)
            .and_then(|f| f.distance.clone())
            .ok_or(Error::NotAFacet)
    }

    /// Counts of faces per dimension `0..=d`.
    pub fn face_counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }
}

fn pow_rat(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn mask_of(ids: &[usize]) -> u64 {
    ids.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

fn ids_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Links between a polytope with the origin in its interior and its polar
/// dual: for every proper face the dual face, its vertex set and volume.
#[derive(Debug, Clone)]
pub struct DualLink {
    dual: RationalPolytope,
    dual_faces: FaceLattice,
    dual_face_of: Vec<Option<usize>>,
    dual_volume_of: Vec<Option<BigRational>>,
}

impl DualLink {
    pub fn new(p: &LatticePolytope, faces: &FaceLattice) -> Result<Self> {
        let dual = p.dual()?;
        let dual_faces = dual.face_lattice()?;
        // Facet of P -> index of its dual vertex in the canonical order.
        let mut dual_vertex_of_facet: HashMap<u64, usize> = HashMap::new();
        for f in &p.facets {
            let w: RatVec = f
                .normal
                .iter()
                .map(|c| BigRational::new(c.clone(), -&f.offset))
                .collect();
            let idx = dual
                .vertices
                .iter()
                .position(|v| *v == w)
                .ok_or_else(|| {
                    Error::InternalInconsistency("dual vertex not found".into())
                })?;
            dual_vertex_of_facet.insert(mask_of(&f.vertex_ids), idx);
        }
        let mut by_vertex_set: HashMap<Vec<usize>, usize> = HashMap::new();
        for face in dual_faces.faces() {
            by_vertex_set.insert(face.vertex_ids.clone(), face.id);
        }
        let mut dual_face_of = vec![None; faces.faces().len()];
        let mut dual_volume_of = vec![None; faces.faces().len()];
        for face in faces.faces() {
            if face.dim == faces.dim() {
                continue; // the whole polytope has an empty dual face
            }
            let m = mask_of(&face.vertex_ids);
            let mut ids: Vec<usize> = p
                .facets
                .iter()
                .map(|f| mask_of(&f.vertex_ids))
                .filter(|fm| fm & m == m)
                .map(|fm| dual_vertex_of_facet[&fm])
                .collect();
            ids.sort_unstable();
            ids.dedup();
            let dual_id = *by_vertex_set.get(&ids).ok_or_else(|| {
                Error::InternalInconsistency("dual face not found in dual lattice".into())
            })?;
            let expected = faces.dim() - 1 - face.dim;
            if dual_faces.face(dual_id).dim != expected {
                return Err(Error::InternalInconsistency(
                    "dual face has unexpected dimension".into(),
                ));
            }
            dual_face_of[face.id] = Some(dual_id);
            dual_volume_of[face.id] = Some(dual_faces.face(dual_id).volume.clone());
        }
        Ok(Self {
            dual,
            dual_faces,
            dual_face_of,
            dual_volume_of,
        })
    }

    pub fn dual_polytope(&self) -> &RationalPolytope {
        &self.dual
    }

    pub fn dual_face_lattice(&self) -> &FaceLattice {
        &self.dual_faces
    }

    /// Id of the dual face of a proper face (None for the top face).
    pub fn dual_face(&self, face_id: usize) -> Option<usize> {
        self.dual_face_of[face_id]
    }

    /// `v(dual face)` of a proper face, with the rational-face scaling.
    pub fn dual_volume(&self, face_id: usize) -> Option<&BigRational> {
        self.dual_volume_of[face_id].as_ref()
    }

    /// Rational vertex coordinates of the dual face of a proper face.
    pub fn dual_face_vertices(&self, face_id: usize) -> Option<Vec<RatVec>> {
        let dual_id = self.dual_face_of[face_id]?;
        Some(
            self.dual_faces
                .face(dual_id)
                .vertex_ids
                .iter()
                .map(|&i| self.dual.vertices[i].clone())
                .collect(),
        )
    }
}

/// Reduce a deduplicated, sorted point set to the vertices of its convex
/// hull. Large sets are split in half: a point extreme in the union is
/// extreme in its own part, so merging the recursive vertex sets is sound.
fn extreme_points(points: Vec<IntVec>, dim: usize) -> Vec<IntVec> {
    const DIRECT_LIMIT: usize = 44;
    if points.len() <= DIRECT_LIMIT {
        let facets = enumerate_facets(&points, dim);
        return hull_vertices(&points, &facets, dim);
    }
    let mid = points.len() / 2;
    let right = extreme_points(points[mid..].to_vec(), dim);
    let mut merged = extreme_points(points[..mid].to_vec(), dim);
    merged.extend(right);
    merged.sort();
    merged.dedup();
    if merged.len() == points.len() {
        let facets = enumerate_facets(&merged, dim);
        return hull_vertices(&merged, &facets, dim);
    }
    extreme_points(merged, dim)
}

/// Normal of the hyperplane spanned by `dim - 1` difference vectors
/// (generalized cross product via signed maximal minors); zero when the
/// differences do not span a hyperplane.
fn hyperplane_normal(diffs: &[IntVec], dim: usize) -> IntVec {
    (0..dim)
        .map(|j| {
            let minor: Vec<IntVec> = diffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let det = integer_det(&minor).expect("square minor");
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Supporting hyperplanes of all facets as `(primitive inner normal, offset)`.
fn enumerate_facets(points: &[IntVec], dim: usize) -> Vec<(IntVec, BigInt)> {
    let n = points.len();
    let mut seen: HashSet<(IntVec, BigInt)> = HashSet::new();
    let mut facets = Vec::new();
    let mut combo: Vec<usize> = (0..dim).collect();
    loop {
        let diffs: Vec<IntVec> = combo[1..]
            .iter()
            .map(|&i| sub(&points[i], &points[combo[0]]))
            .collect();
        let normal = hyperplane_normal(&diffs, dim);
        if !linalg::is_zero_vec(&normal) {
            let mut normal = linalg::make_primitive(&normal).expect("nonzero normal");
            let mut offset = dot(&normal, &points[combo[0]]);
            if seen.insert((normal.clone(), offset.clone()))
                && seen.insert((linalg::neg(&normal), -&offset))
            {
                let values: Vec<BigInt> = points.iter().map(|p| dot(&normal, p)).collect();
                let min = values.iter().min().unwrap().clone();
                let max = values.iter().max().unwrap().clone();
                let keep = if min == offset && max > offset {
                    true
                } else if max == offset && min < offset {
                    normal = linalg::neg(&normal);
                    offset = -offset;
                    true
                } else {
                    false
                };
                if keep {
                    facets.push((normal, offset));
                }
            }
        }
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    facets.sort();
    facets.dedup();
    facets
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Points whose active facet normals span the ambient space are vertices.
fn hull_vertices(points: &[IntVec], facets: &[(IntVec, BigInt)], dim: usize) -> Vec<IntVec> {
    let mut vertices: Vec<IntVec> = points
        .iter()
        .filter(|p| {
            let active: Vec<IntVec> = facets
                .iter()
                .filter(|(a, b)| dot(a, p) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            linalg::rank(&active) == dim
        })
        .cloned()
        .collect();
    vertices.sort();
    vertices
}

fn integer_bounding_box(points: &[IntVec]) -> (IntVec, IntVec) {
    let dim = points[0].len();
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in points {
        for j in 0..dim {
            if p[j] < lo[j] {
                lo[j] = p[j].clone();
            }
            if p[j] > hi[j] {
                hi[j] = p[j].clone();
            }
        }
    }
    (lo, hi)
}

fn rational_bounding_box(points: &[RatVec]) -> (IntVec, IntVec) {
    let dim = points[0].len();
    let mut lo = vec![BigInt::zero(); dim];
    let mut hi = vec![BigInt::zero(); dim];
    for j in 0..dim {
        let min = points.iter().map(|p| &p[j]).min().unwrap();
        let max = points.iter().map(|p| &p[j]).max().unwrap();
        lo[j] = min.ceil().to_integer();
        hi[j] = max.floor().to_integer();
    }
    (lo, hi)
}

/// Integer points satisfying all constraints `<a, x> >= b` inside the box,
/// split by whether some constraint is tight.
///
/// The scan walks the box axis by axis keeping partial products and solves
/// the last axis as an exact interval, so infeasible stretches are skipped.
fn scan_lattice_points(
    constraints: &[(IntVec, BigInt)],
    lo: &IntVec,
    hi: &IntVec,
    dim: usize,
) -> LatticePointSet {
    let mut out = LatticePointSet {
        boundary: Vec::new(),
        interior: Vec::new(),
    };
    if (0..dim).any(|j| lo[j] > hi[j]) {
        return out;
    }
    let partials = vec![BigInt::zero(); constraints.len()];
    let mut prefix: IntVec = Vec::with_capacity(dim);
    scan_rec(constraints, lo, hi, dim, &mut prefix, &partials, &mut out);
    out
}

fn scan_rec(
    constraints: &[(IntVec, BigInt)],
    lo: &IntVec,
    hi: &IntVec,
    dim: usize,
    prefix: &mut IntVec,
    partials: &[BigInt],
    out: &mut LatticePointSet,
) {
    let axis = prefix.len();
    if axis == dim - 1 {
        // Solve the final axis as an interval.
        let mut from = lo[axis].clone();
        let mut to = hi[axis].clone();
        for ((a, b), partial) in constraints.iter().zip(partials) {
            let coeff = &a[dim - 1];
            let rhs = b - partial;
            if coeff.is_zero() {
                if rhs.is_positive() {
                    return;
                }
            } else if coeff.is_positive() {
                let bound = rhs.div_ceil(coeff);
                if bound > from {
                    from = bound;
                }
            } else {
                let bound = rhs.div_floor(coeff);
                if bound < to {
                    to = bound;
                }
            }
        }
        let mut x = from;
        while x <= to {
            let tight = constraints.iter().zip(partials).any(|((a, b), partial)| {
                partial + &a[dim - 1] * &x == *b
            });
            let mut point = prefix.clone();
            point.push(x.clone());
            if tight {
                out.boundary.push(point);
            } else {
                out.interior.push(point);
            }
            x += 1;
        }
        return;
    }
    let mut x = lo[axis].clone();
    while x <= hi[axis] {
        let updated: Vec<BigInt> = constraints
            .iter()
            .zip(partials)
            .map(|((a, _), partial)| partial + &a[axis] * &x)
            .collect();
        prefix.push(x.clone());
        scan_rec(constraints, lo, hi, dim, prefix, &updated, out);
        prefix.pop();
        x += 1;
    }
}

/// Normalized volume of the convex hull of lattice points, measured inside
/// the saturated sublattice of their affine span (always a nonnegative
/// integer, returned as a rational for composability).
pub fn normalized_volume_of_points(points: &[IntVec]) -> Result<BigRational> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut points = points.to_vec();
    points.sort();
    points.dedup();
    let basis = sublattice_basis(&points)?;
    let k = basis.len();
    if k == 0 {
        return Ok(BigRational::one());
    }
    let coords: Vec<IntVec> = points
        .iter()
        .map(|p| {
            coords_in_basis(&basis, &sub(p, &points[0])).ok_or_else(|| {
                Error::InternalInconsistency(
                    "lattice point has non-integer coordinates in saturated basis".into(),
                )
            })
        })
        .collect::<Result<_>>()?;
    if k == 1 {
        let min = coords.iter().map(|c| &c[0]).min().unwrap();
        let max = coords.iter().map(|c| &c[0]).max().unwrap();
        return Ok(BigRational::from(max - min));
    }
    let mut total = BigInt::zero();
    for simplex in triangulate_hull(&coords, k)? {
        let edges: Vec<IntVec> = simplex[1..]
            .iter()
            .map(|&i| sub(&coords[i], &coords[simplex[0]]))
            .collect();
        total += integer_det(&edges)?.abs();
    }
    Ok(BigRational::from(total))
}

/// Triangulation of the convex hull of full-dimensional points in dimension
/// `k >= 2`: pulls every facet to the lexicographically smallest vertex.
/// Returns simplices as index tuples into `points`.
fn triangulate_hull(points: &[IntVec], k: usize) -> Result<Vec<Vec<usize>>> {
    let facets = enumerate_facets(points, k);
    let vertex_ids: Vec<usize> = (0..points.len())
        .filter(|&i| {
            let active: Vec<IntVec> = facets
                .iter()
                .filter(|(a, b)| dot(a, &points[i]) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            linalg::rank(&active) == k
        })
        .collect();
    if vertex_ids.is_empty() {
        return Err(Error::InternalInconsistency("hull has no vertices".into()));
    }
    let apex = *vertex_ids
        .iter()
        .min_by(|&&a, &&b| points[a].cmp(&points[b]))
        .unwrap();
    if vertex_ids.len() == k + 1 {
        return Ok(vec![vertex_ids]);
    }
    let mut simplices = Vec::new();
    for (normal, offset) in &facets {
        if dot(normal, &points[apex]) == *offset {
            continue;
        }
        let facet_ids: Vec<usize> = vertex_ids
            .iter()
            .copied()
            .filter(|&i| dot(normal, &points[i]) == *offset)
            .collect();
        for simplex in triangulate_facet(points, &facet_ids, normal, k)? {
            let mut s = simplex;
            s.push(apex);
            simplices.push(s);
        }
    }
    Ok(simplices)
}

/// Triangulate a facet (vertex ids known) living in the hyperplane with the
/// given normal by projecting out one coordinate.
fn triangulate_facet(
    points: &[IntVec],
    facet_ids: &[usize],
    normal: &[BigInt],
    k: usize,
) -> Result<Vec<Vec<usize>>> {
    if facet_ids.len() == k {
        return Ok(vec![facet_ids.to_vec()]);
    }
    let drop = normal
        .iter()
        .position(|c| !c.is_zero())
        .expect("facet normal is nonzero");
    let projected: Vec<IntVec> = facet_ids
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, c)| c.clone())
                .collect()
        })
        .collect();
    if k - 1 == 1 {
        // A segment: the two extreme points are its vertices.
        let mut order: Vec<usize> = (0..facet_ids.len()).collect();
        order.sort_by(|&a, &b| projected[a].cmp(&projected[b]));
        return Ok(vec![vec![
            facet_ids[order[0]],
            facet_ids[*order.last().unwrap()],
        ]]);
    }
    let local = triangulate_hull(&projected, k - 1)?;
    Ok(local
        .into_iter()
        .map(|s| s.into_iter().map(|i| facet_ids[i]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ivec;

    pub(crate) fn simplex(apex: [i64; 3]) -> LatticePolytope {
        LatticePolytope::convex_hull(
            &[
                ivec(&[1, 0, 0]),
                ivec(&[0, 1, 0]),
                ivec(&[0, 0, 1]),
                ivec(&apex),
            ],
            3,
        )
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hull_of_simplex_keeps_all_vertices() {
        let p = simplex([-1, -1, -1]);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert!(p.contains_origin_interior());
    }

    #[test]
    fn hull_discards_interior_points() {
        let p = LatticePolytope::convex_hull(
            &[
                ivec(&[1, 0, 0]),
                ivec(&[0, 1, 0]),
                ivec(&[0, 0, 1]),
                ivec(&[-1, -1, -1]),
                ivec(&[0, 0, 0]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(p, simplex([-1, -1, -1]));
    }

    #[test]
    fn hull_rejects_flat_input() {
        let err = LatticePolytope::convex_hull(
            &[ivec(&[0, 0, 0]), ivec(&[1, 0, 0]), ivec(&[0, 1, 0])],
            3,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotFullDimensional { .. }));
    }

    #[test]
    fn strict_constructor_rejects_redundant_points() {
        let err = LatticePolytope::from_vertices(
            &[
                ivec(&[1, 0, 0]),
                ivec(&[0, 1, 0]),
                ivec(&[0, 0, 1]),
                ivec(&[-1, -1, -1]),
                ivec(&[0, 0, 0]),
            ],
            3,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidPolytope(_)));
    }

    #[test]
    fn simplex_face_counts() {
        let p = simplex([-1, -1, -1]);
        let fl = p.face_lattice().unwrap();
        assert_eq!(fl.face_counts(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn volume_of_known_simplices() {
        assert_eq!(simplex([-1, -1, -1]).normalized_volume(), BigInt::from(4));
        assert_eq!(simplex([-1, -1, -2]).normalized_volume(), BigInt::from(5));
        assert_eq!(simplex([-5, -6, -8]).normalized_volume(), BigInt::from(20));
    }

    #[test]
    fn facet_distances() {
        let fl = simplex([-1, -1, -2]).face_lattice().unwrap();
        let mut distances: Vec<BigRational> = fl
            .faces_of_dim(2)
            .map(|f| f.distance.clone().unwrap())
            .collect();
        distances.sort();
        assert_eq!(
            distances,
            vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(2, 1)]
        );

        let fl = simplex([-5, -6, -8]).face_lattice().unwrap();
        let mut pairs: Vec<(BigRational, BigRational)> = fl
            .faces_of_dim(2)
            .map(|f| (f.distance.clone().unwrap(), f.volume.clone()))
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![
                (rat(1, 1), rat(1, 1)),
                (rat(1, 1), rat(5, 1)),
                (rat(2, 1), rat(4, 1)),
                (rat(3, 1), rat(2, 1)),
            ]
        );
    }

    #[test]
    fn dual_of_reflexive_simplex() {
        let p = simplex([-1, -1, -1]);
        let d = p.dual().unwrap();
        assert_eq!(d.denominator_l(), &BigInt::one());
        let mut vs: Vec<IntVec> = d.scaled().vertices().to_vec();
        vs.sort();
        assert_eq!(
            vs,
            vec![
                ivec(&[-1, -1, -1]),
                ivec(&[-1, -1, 3]),
                ivec(&[-1, 3, -1]),
                ivec(&[3, -1, -1]),
            ]
        );
    }

    #[test]
    fn dual_denominators() {
        assert_eq!(
            simplex([-1, -1, -2]).dual().unwrap().denominator_l(),
            &BigInt::from(2)
        );
        assert_eq!(
            simplex([-5, -6, -8]).dual().unwrap().denominator_l(),
            &BigInt::from(6)
        );
    }

    #[test]
    fn dual_vertices_of_non_reflexive_simplices() {
        let d = simplex([-1, -1, -2]).dual().unwrap();
        let mut vs = d.vertices().to_vec();
        vs.sort();
        let expect: Vec<RatVec> = vec![
            vec![rat(-1, 1), rat(-1, 1), rat(-1, 1)],
            vec![rat(-1, 1), rat(-1, 1), rat(3, 2)],
            vec![rat(-1, 1), rat(4, 1), rat(-1, 1)],
            vec![rat(4, 1), rat(-1, 1), rat(-1, 1)],
        ];
        assert_eq!(vs, expect);

        let d = simplex([-5, -6, -8]).dual().unwrap();
        let mut vs = d.vertices().to_vec();
        vs.sort();
        let expect: Vec<RatVec> = vec![
            vec![rat(-1, 1), rat(-1, 1), rat(-1, 1)],
            vec![rat(-1, 1), rat(-1, 1), rat(3, 2)],
            vec![rat(-1, 1), rat(7, 3), rat(-1, 1)],
            vec![rat(3, 1), rat(-1, 1), rat(-1, 1)],
        ];
        assert_eq!(vs, expect);
    }

    #[test]
    fn dual_fails_without_interior_origin() {
        let shifted = LatticePolytope::convex_hull(
            &[
                ivec(&[1, 0, 0]),
                ivec(&[3, 0, 0]),
                ivec(&[1, 2, 0]),
                ivec(&[1, 0, 2]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(shifted.dual().unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn lattice_points_of_simplices() {
        let pts = simplex([-1, -1, -1]).lattice_points();
        assert_eq!(pts.boundary.len(), 4);
        assert_eq!(pts.interior, vec![ivec(&[0, 0, 0])]);

        let pts = simplex([-5, -6, -8]).lattice_points();
        assert_eq!(pts.interior, vec![ivec(&[0, 0, 0])]);
    }

    #[test]
    fn dual_lattice_points_membership() {
        let d = simplex([-1, -1, -2]).dual().unwrap();
        let pts = d.lattice_points();
        let all: Vec<IntVec> = pts
            .boundary
            .iter()
            .chain(&pts.interior)
            .cloned()
            .collect();
        assert!(all.contains(&ivec(&[-1, -1, 1])));
        // The rational vertex (-1,-1,3/2) is not a lattice point.
        assert!(all.iter().all(|p| p != &ivec(&[-1, -1, 2])));
        assert!(all.contains(&ivec(&[4, -1, -1])));
    }

    #[test]
    fn dual_edge_volumes_of_reflexive_simplex() {
        let p = simplex([-1, -1, -1]);
        let fl = p.face_lattice().unwrap();
        let link = DualLink::new(&p, &fl).unwrap();
        for edge in fl.faces_of_dim(1) {
            assert_eq!(link.dual_volume(edge.id).unwrap(), &rat(4, 1));
            let dual_id = link.dual_face(edge.id).unwrap();
            assert_eq!(link.dual_face_lattice().face(dual_id).dim, 1);
        }
    }

    #[test]
    fn dual_edge_volumes_of_p1568_simplex() {
        let p = simplex([-5, -6, -8]);
        let fl = p.face_lattice().unwrap();
        let link = DualLink::new(&p, &fl).unwrap();
        let mut pairs: Vec<(BigRational, BigRational)> = fl
            .faces_of_dim(1)
            .map(|e| (e.volume.clone(), link.dual_volume(e.id).unwrap().clone()))
            .collect();
        pairs.sort();
        let mut expect = vec![
            (rat(1, 1), rat(4, 1)),
            (rat(1, 1), rat(10, 3)),
            (rat(1, 1), rat(5, 2)),
            (rat(1, 1), rat(1, 2)),
            (rat(1, 1), rat(2, 3)),
            (rat(2, 1), rat(5, 6)),
        ];
        expect.sort();
        assert_eq!(pairs, expect);
    }

    #[test]
    fn duality_is_an_involution_on_reflexive_polytopes() {
        let cube = LatticePolytope::convex_hull(
            &[
                ivec(&[1, 1, 1]),
                ivec(&[1, 1, -1]),
                ivec(&[1, -1, 1]),
                ivec(&[1, -1, -1]),
                ivec(&[-1, 1, 1]),
                ivec(&[-1, 1, -1]),
                ivec(&[-1, -1, 1]),
                ivec(&[-1, -1, -1]),
            ],
            3,
        )
        .unwrap();
        let dual = cube.dual().unwrap();
        assert_eq!(dual.denominator_l(), &BigInt::one());
        let octahedron = dual.as_lattice().unwrap();
        assert_eq!(octahedron.vertices().len(), 6);
        let back = octahedron.dual().unwrap();
        assert_eq!(back.as_lattice().unwrap(), &cube);
    }

    #[test]
    fn dimension_pairing_on_faces() {
        let p = simplex([-1, -1, -2]);
        let fl = p.face_lattice().unwrap();
        let link = DualLink::new(&p, &fl).unwrap();
        for face in fl.faces() {
            if face.dim == 3 {
                assert!(link.dual_face(face.id).is_none());
                continue;
            }
            let dual_id = link.dual_face(face.id).unwrap();
            assert_eq!(
                face.dim + link.dual_face_lattice().face(dual_id).dim,
                2
            );
        }
    }

    #[test]
    fn facet_volume_decomposition() {
        // v(P) = sum over facets of v(facet) * distance(facet).
        for apex in [[-1, -1, -1], [-1, -1, -2], [-5, -6, -8], [-3, -5, -7]] {
            let p = simplex(apex);
            let fl = p.face_lattice().unwrap();
            let total: BigRational = fl
                .faces_of_dim(2)
                .map(|f| &f.volume * f.distance.as_ref().unwrap())
                .sum();
            assert_eq!(total, BigRational::from(p.normalized_volume()));
        }
    }

    #[test]
    fn euler_relation_for_3_polytopes() {
        let p = simplex([-2, -3, -5]);
        let counts = p.face_lattice().unwrap().face_counts();
        assert_eq!(counts[0] as i64 - counts[1] as i64 + counts[2] as i64, 2);
    }

    #[test]
    fn dual_faces_have_distance_one() {
        let p = simplex([-5, -6, -8]);
        let dual = p.dual().unwrap();
        let fl = dual.face_lattice().unwrap();
        for f in fl.faces_of_dim(2) {
            assert_eq!(f.distance.clone().unwrap(), BigRational::one());
        }
    }

    #[test]
    fn volume_of_segment_points() {
        let v = normalized_volume_of_points(&[ivec(&[0, 0, 0]), ivec(&[2, 0, 0])]).unwrap();
        assert_eq!(v, BigRational::from(BigInt::from(2)));
        let v = normalized_volume_of_points(&[ivec(&[1, 0, 0])]).unwrap();
        assert_eq!(v, BigRational::one());
    }
}

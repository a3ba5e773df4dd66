//! Fans of rational polyhedral cones: the spanning fan of a polytope,
//! simplicial subdivisions with rays through boundary lattice points, the
//! piecewise-linear anticanonical function, and lattice points of half-open
//! parallelepipeds of simplicial cones.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fano::is_canonical_fano;
use crate::linalg::{
    add, coords_in_basis, dot, integer_det, is_zero_vec, make_primitive, solve_linear, sub,
    sublattice_basis, IntVec,
};
use crate::polytope::{normalized_volume_of_points, LatticePolytope};

/// Rational polyhedral cone given by its minimal ray generators (primitive,
/// stored in sorted order).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cone {
    ambient_dim: usize,
    dim: usize,
    generators: Vec<IntVec>,
}

impl Cone {
    pub fn new(ambient_dim: usize, mut generators: Vec<IntVec>) -> Result<Self> {
        for g in &mut generators {
            *g = make_primitive(g)?;
        }
        generators.sort();
        generators.dedup();
        let dim = crate::linalg::rank(&generators);
        Ok(Self {
            ambient_dim,
            dim,
            generators,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    pub fn is_simplicial(&self) -> bool {
        self.generators.len() == self.dim
    }

    /// Normalized volume of the convex hull of the origin and the primitive
    /// ray generators.
    pub fn normalized_volume(&self) -> Result<BigRational> {
        let mut pts = self.generators.clone();
        pts.push(vec![BigInt::zero(); self.ambient_dim]);
        normalized_volume_of_points(&pts)
    }
}

/// A lattice point of the half-open parallelepiped of a simplicial cone:
/// `point = sum lambda_i * u_i` with every `lambda_i` in `(0, 1]`, together
/// with `kappa = -sum lambda_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxPoint {
    pub point: IntVec,
    pub lambda: Vec<BigRational>,
    pub kappa: BigRational,
}

/// How facet cones are triangulated when subdividing a spanning fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdivisionStrategy {
    /// Triangulate each facet using only its vertices as rays.
    VerticesOnly,
    /// Triangulate each facet into unimodular triangles through all of its
    /// lattice points, so every boundary lattice point becomes a ray.
    AllBoundaryPoints,
}

/// A fan, stored as the full set of its cones (closed under taking faces,
/// including the zero cone) in a canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    ambient_dim: usize,
    cones: Vec<Cone>,
}

impl Fan {
    fn from_cones(ambient_dim: usize, cones: BTreeSet<Cone>) -> Self {
        let mut cones: Vec<Cone> = cones.into_iter().collect();
        cones.sort_by(|a, b| (a.dim, &a.generators).cmp(&(b.dim, &b.generators)));
        Self { ambient_dim, cones }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim == k)
    }

    pub fn max_cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones_of_dim(self.ambient_dim)
    }

    /// Primitive generators of the rays.
    pub fn rays(&self) -> Vec<IntVec> {
        self.cones_of_dim(1)
            .map(|c| c.generators[0].clone())
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    /// Sum of the normalized volumes of the maximal cones.
    pub fn normalized_volume(&self) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for c in self.max_cones() {
            total += c.normalized_volume()?;
        }
        Ok(total)
    }
}

/// The spanning fan: one cone over every proper face, plus the zero cone.
pub fn spanning_fan(p: &LatticePolytope) -> Result<Fan> {
    if !p.contains_origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let faces = p.face_lattice()?;
    let mut cones = BTreeSet::new();
    cones.insert(Cone::new(p.dim(), Vec::new())?);
    for face in faces.faces() {
        if face.dim == p.dim() {
            continue;
        }
        let gens: Vec<IntVec> = face
            .vertex_ids
            .iter()
            .map(|&i| p.vertices()[i].clone())
            .collect();
        cones.insert(Cone::new(p.dim(), gens)?);
    }
    Ok(Fan::from_cones(p.dim(), cones))
}

/// Simplicial subdivision of the spanning fan of a canonical Fano polytope
/// in dimension 2 or 3. All rays pass through boundary lattice points, so
/// the anticanonical function takes the value -1 on every ray generator.
pub fn simplicial_subdivision(
    fan: &Fan,
    p: &LatticePolytope,
    strategy: SubdivisionStrategy,
) -> Result<Fan> {
    if !(2..=3).contains(&p.dim()) {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if fan.ambient_dim() != p.dim() {
        return Err(Error::ShapeMismatch(
            "fan and polytope dimensions differ".into(),
        ));
    }
    if !is_canonical_fano(p) {
        return Err(Error::NotCanonicalFano);
    }
    let boundary = p.lattice_points().boundary;
    let max_cones = if p.dim() == 2 {
        subdivide_polygon_fan(p, &boundary, strategy)
    } else {
        subdivide_3d_fan(p, &boundary, strategy)?
    };
    let mut cones = BTreeSet::new();
    let d = p.dim();
    for gens in max_cones {
        // A simplicial cone's faces are generated by the generator subsets.
        for mask in 0..(1u32 << gens.len()) {
            let subset: Vec<IntVec> = (0..gens.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| gens[i].clone())
                .collect();
            cones.insert(Cone::new(d, subset)?);
        }
    }
    Ok(Fan::from_cones(d, cones))
}

fn subdivide_polygon_fan(
    p: &LatticePolytope,
    boundary: &[IntVec],
    strategy: SubdivisionStrategy,
) -> Vec<Vec<IntVec>> {
    let mut max_cones = Vec::new();
    for facet in p.facets() {
        let ends: Vec<IntVec> = facet
            .vertex_ids
            .iter()
            .map(|&i| p.vertices()[i].clone())
            .collect();
        match strategy {
            SubdivisionStrategy::VerticesOnly => max_cones.push(ends),
            SubdivisionStrategy::AllBoundaryPoints => {
                let mut on_edge: Vec<IntVec> = boundary
                    .iter()
                    .filter(|q| dot(&facet.normal, q) == facet.offset)
                    .cloned()
                    .collect();
                on_edge.sort();
                for pair in on_edge.windows(2) {
                    max_cones.push(vec![pair[0].clone(), pair[1].clone()]);
                }
            }
        }
    }
    max_cones
}

fn subdivide_3d_fan(
    p: &LatticePolytope,
    boundary: &[IntVec],
    strategy: SubdivisionStrategy,
) -> Result<Vec<Vec<IntVec>>> {
    let mut max_cones = Vec::new();
    for facet in p.facets() {
        let verts: Vec<IntVec> = facet
            .vertex_ids
            .iter()
            .map(|&i| p.vertices()[i].clone())
            .collect();
        let basis = sublattice_basis(&verts)?;
        let to_plane = |q: &IntVec| -> Result<IntVec> {
            coords_in_basis(&basis, &sub(q, &verts[0])).ok_or_else(|| {
                Error::InternalInconsistency("facet point outside facet plane".into())
            })
        };
        let mut points2d: Vec<IntVec> = Vec::new();
        for v in &verts {
            points2d.push(to_plane(v)?);
        }
        let cycle = convex_cycle(&points2d);
        let mut tris: Vec<[usize; 3]> = Vec::new();
        for i in 1..cycle.len() - 1 {
            tris.push([cycle[0], cycle[i], cycle[i + 1]]);
        }
        let mut points3d = verts.clone();
        if strategy == SubdivisionStrategy::AllBoundaryPoints {
            let mut extra: Vec<IntVec> = boundary
                .iter()
                .filter(|q| dot(&facet.normal, q) == facet.offset && !verts.contains(q))
                .cloned()
                .collect();
            extra.sort();
            for q in extra {
                let q2 = to_plane(&q)?;
                insert_point(&mut points2d, &mut tris, q2)?;
                points3d.push(q);
            }
        }
        for t in tris {
            max_cones.push(vec![
                points3d[t[0]].clone(),
                points3d[t[1]].clone(),
                points3d[t[2]].clone(),
            ]);
        }
    }
    Ok(max_cones)
}

fn orient2d(a: &IntVec, b: &IntVec, c: &IntVec) -> BigInt {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

/// Cyclic vertex order of a convex polygon (monotone chain).
fn convex_cycle(points: &[IntVec]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && orient2d(
                &points[lower[lower.len() - 2]],
                &points[lower[lower.len() - 1]],
                &points[i],
            ) <= BigInt::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && orient2d(
                &points[upper[upper.len() - 2]],
                &points[upper[upper.len() - 1]],
                &points[i],
            ) <= BigInt::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Insert a point into a conforming triangulation, splitting the containing
/// triangle (or the two triangles sharing the containing edge).
fn insert_point(points: &mut Vec<IntVec>, tris: &mut Vec<[usize; 3]>, q: IntVec) -> Result<()> {
    if points.contains(&q) {
        return Ok(());
    }
    let qi = points.len();
    points.push(q);
    for ti in 0..tris.len() {
        let [a, b, c] = tris[ti];
        let sabc = orient2d(&points[a], &points[b], &points[c]).signum();
        let s1 = orient2d(&points[a], &points[b], &points[qi]).signum();
        let s2 = orient2d(&points[b], &points[c], &points[qi]).signum();
        let s3 = orient2d(&points[c], &points[a], &points[qi]).signum();
        let ok = |s: &BigInt| s.is_zero() || *s == sabc;
        if !(ok(&s1) && ok(&s2) && ok(&s3)) {
            continue;
        }
        let zeros = [s1.is_zero(), s2.is_zero(), s3.is_zero()];
        match zeros.iter().filter(|z| **z).count() {
            0 => {
                tris.swap_remove(ti);
                tris.push([a, b, qi]);
                tris.push([b, c, qi]);
                tris.push([c, a, qi]);
                return Ok(());
            }
            1 => {
                let (u, v, w) = if zeros[0] {
                    (a, b, c)
                } else if zeros[1] {
                    (b, c, a)
                } else {
                    (c, a, b)
                };
                tris.swap_remove(ti);
                tris.push([u, qi, w]);
                tris.push([qi, v, w]);
                // Split the neighbor sharing the edge (u, v), if any.
                if let Some(tj) = tris
                    .iter()
                    .position(|t| t.contains(&u) && t.contains(&v) && !t.contains(&qi))
                {
                    let other = *tris[tj]
                        .iter()
                        .find(|&&x| x != u && x != v)
                        .expect("triangle has a third vertex");
                    tris.swap_remove(tj);
                    tris.push([u, qi, other]);
                    tris.push([qi, v, other]);
                }
                return Ok(());
            }
            _ => {
                return Err(Error::InternalInconsistency(
                    "inserted point coincides with a triangulation vertex".into(),
                ))
            }
        }
    }
    Err(Error::InternalInconsistency(
        "point not contained in any triangle of the facet".into(),
    ))
}

/// Value of the piecewise-linear anticanonical function of a complete
/// simplicial fan at a lattice point (-1 on every primitive ray generator).
pub fn kappa(fan: &Fan, n: &[BigInt]) -> Result<BigRational> {
    if is_zero_vec(n) {
        return Ok(BigRational::zero());
    }
    let d = fan.ambient_dim();
    for cone in fan.max_cones() {
        if !cone.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let columns: Vec<IntVec> = (0..d)
            .map(|i| cone.generators().iter().map(|g| g[i].clone()).collect())
            .collect();
        let lambda = solve_linear(&columns, n)?;
        if lambda.iter().all(|l| !l.is_negative()) {
            return Ok(-lambda.iter().sum::<BigRational>());
        }
    }
    Err(Error::InternalInconsistency(
        "complete fan does not contain the point".into(),
    ))
}

/// Lattice points of the half-open parallelepiped of a simplicial cone,
/// i.e. all `n = sum lambda_i * u_i` with every `lambda_i` in `(0, 1]`.
///
/// Points are found by walking the residue classes of the generator
/// sublattice; each class contains exactly one such point, so the cost is
/// proportional to the index (the normalized cone volume) rather than to a
/// bounding box.
pub fn box_points(cone: &Cone) -> Result<Vec<BoxPoint>> {
    if !cone.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let k = cone.dim();
    if k == 0 {
        return Ok(vec![BoxPoint {
            point: vec![BigInt::zero(); cone.ambient_dim()],
            lambda: Vec::new(),
            kappa: BigRational::zero(),
        }]);
    }
    // Work in coordinates of the saturated sublattice spanned by the cone.
    let mut span_points = vec![vec![BigInt::zero(); cone.ambient_dim()]];
    span_points.extend(cone.generators().iter().cloned());
    let basis = sublattice_basis(&span_points)?;
    let gens_local: Vec<IntVec> = cone
        .generators()
        .iter()
        .map(|g| {
            coords_in_basis(&basis, g).ok_or_else(|| {
                Error::InternalInconsistency("generator outside saturated span".into())
            })
        })
        .collect::<Result<_>>()?;
    // Columns of this matrix are the generators in local coordinates.
    let columns: Vec<IntVec> = (0..k)
        .map(|i| gens_local.iter().map(|g| g[i].clone()).collect())
        .collect();
    if integer_det(&columns)?.is_zero() {
        return Err(Error::InternalInconsistency(
            "simplicial cone with dependent generators".into(),
        ));
    }
    // Residue class representatives from the Hermite form of the generator
    // lattice: the box spanned by the pivots.
    let hnf = crate::linalg::hnf_basis(&gens_local);
    let pivots: Vec<BigInt> = (0..k).map(|i| hnf[i][i].clone()).collect();
    let mut reps: Vec<IntVec> = vec![Vec::new()];
    for p in &pivots {
        let mut next = Vec::new();
        for rep in &reps {
            let mut x = BigInt::zero();
            while &x < p {
                let mut r = rep.clone();
                r.push(x.clone());
                next.push(r);
                x += 1;
            }
        }
        reps = next;
    }
    let one = BigRational::one();
    let mut out = Vec::with_capacity(reps.len());
    for rep in reps {
        let lambda = solve_linear(&columns, &rep)?;
        // Shift each coordinate into (0, 1] by an integer.
        let shifts: Vec<BigInt> = lambda
            .iter()
            .map(|l| l.ceil().to_integer() - BigInt::one())
            .collect();
        let lambda: Vec<BigRational> = lambda
            .iter()
            .zip(&shifts)
            .map(|(l, s)| l - BigRational::from(s.clone()))
            .collect();
        debug_assert!(lambda.iter().all(|l| l.is_positive() && *l <= one));
        let mut local = rep;
        for (j, s) in shifts.iter().enumerate() {
            for (coord, g) in local.iter_mut().zip(&gens_local[j] as &IntVec) {
                *coord -= s * g;
            }
        }
        let mut point = vec![BigInt::zero(); cone.ambient_dim()];
        for (c, b) in local.iter().zip(&basis) {
            point = add(&point, &b.iter().map(|x| x * c).collect::<IntVec>());
        }
        let kappa = -lambda.iter().sum::<BigRational>();
        out.push(BoxPoint {
            point,
            lambda,
            kappa,
        });
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(out)
}

//! Verifiers for the combinatorial identities satisfied by canonical Fano
//! polytopes: the 24 identity for threefolds, the Calabi-Yau stringy Euler
//! formulas (computed along two independent routes), the stringy
//! Libgober-Wood identity, and the elementary Gauss-type sum that links them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fano::{classify, is_canonical_fano};
use crate::linalg::IntVec;
use crate::polytope::{normalized_volume_of_points, DualLink, LatticePolytope};
use crate::stringy::{stringy_e_canonical3d, stringy_e_ldp, StringyEFunction};

/// The three exact terms of the 24 identity for a canonical Fano threefold:
/// `v(P) - sum_facets v/n + sum_edges v(edge) v(dual edge) = 24`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity24Report {
    pub volume_term: BigRational,
    pub facet_term: BigRational,
    pub edge_term: BigRational,
    pub total: BigRational,
    pub holds: bool,
}

/// Both sides of the combinatorial Libgober-Wood identity
/// `sum psi_alpha (alpha - d/2)^2 = d/12 v(Sigma) + 1/6 sum v(sigma) v(dual)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibgoberWoodReport {
    pub lhs: BigRational,
    pub rhs_volume: BigRational,
    pub rhs_mixed: BigRational,
    pub holds: bool,
}

fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Evaluate the 24 identity on a canonical Fano threefold.
pub fn identity24(p: &LatticePolytope) -> Result<Identity24Report> {
    if p.dim() != 3 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if !is_canonical_fano(p) {
        return Err(Error::NotCanonicalFano);
    }
    let faces = p.face_lattice()?;
    let link = DualLink::new(p, &faces)?;
    let volume_term = BigRational::from(p.normalized_volume());
    let mut facet_term = BigRational::zero();
    for facet in faces.faces_of_dim(2) {
        let n = facet.distance.clone().expect("facet distance");
        facet_term += &facet.volume / n;
    }
    let mut edge_term = BigRational::zero();
    for edge in faces.faces_of_dim(1) {
        edge_term += &edge.volume * link.dual_volume(edge.id).expect("dual of an edge");
    }
    let total = &volume_term - &facet_term + &edge_term;
    let holds = total == int(24);
    Ok(Identity24Report {
        volume_term,
        facet_term,
        edge_term,
        total,
        holds,
    })
}

fn require_almost_pseudoreflexive(p: &LatticePolytope) -> Result<()> {
    if !(3..=4).contains(&p.dim()) {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if !classify(p)?.is_almost_pseudoreflexive {
        return Err(Error::NotAlmostPseudoreflexive);
    }
    Ok(())
}

/// Stringy Euler number of the Calabi-Yau model of a nondegenerate
/// hypersurface with Newton polytope `p`, via the alternating face sum
/// `v(P) - sum_facets v/n + sum_{1 <= dim <= d-2} (-1)^(dim-1) v(face) v(dual)`.
pub fn cy_stringy_euler(p: &LatticePolytope) -> Result<BigRational> {
    require_almost_pseudoreflexive(p)?;
    let d = p.dim();
    let faces = p.face_lattice()?;
    let link = DualLink::new(p, &faces)?;
    let mut acc = BigRational::from(p.normalized_volume());
    for facet in faces.faces_of_dim(d - 1) {
        let n = facet.distance.clone().expect("facet distance");
        acc -= &facet.volume / n;
    }
    for k in 1..=d - 2 {
        for face in faces.faces_of_dim(k) {
            let term = &face.volume * link.dual_volume(face.id).expect("dual volume");
            if (k - 1) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    Ok(acc)
}

/// The same stringy Euler number computed along the normal fan:
/// `sum_{dim >= 1} (-1)^(dim-1) v(face) * v(cone(dual face) cap P*)`, where
/// the cone intersection is evaluated literally as the normalized volume of
/// the pyramid over the dual face.
pub fn cy_stringy_euler_normalfan(p: &LatticePolytope) -> Result<BigRational> {
    require_almost_pseudoreflexive(p)?;
    let d = p.dim();
    let faces = p.face_lattice()?;
    let link = DualLink::new(p, &faces)?;
    let l = link.dual_polytope().denominator_l().clone();
    let mut acc = BigRational::zero();
    for face in faces.faces() {
        if face.dim == 0 {
            continue;
        }
        let pyramid_volume = if face.dim == d {
            // The dual face is empty; the cone meets the dual polytope in
            // the origin alone.
            BigRational::one()
        } else {
            let mut pts: Vec<IntVec> = vec![vec![BigInt::zero(); d]];
            for w in link.dual_face_vertices(face.id).expect("dual face") {
                pts.push(
                    w.iter()
                        .map(|c| (c * BigRational::from(l.clone())).to_integer())
                        .collect(),
                );
            }
            let k = d - face.dim;
            let mut scale = BigRational::one();
            for _ in 0..k {
                scale *= BigRational::from(l.clone());
            }
            normalized_volume_of_points(&pts)? / scale
        };
        let term = &face.volume * pyramid_volume;
        if (face.dim - 1) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Evaluate the combinatorial Libgober-Wood identity on a canonical Fano
/// polytope of dimension 2 or 3, with the left side taken from the stringy
/// E-function and the right side from spanning-fan cone volumes.
pub fn libgober_wood(p: &LatticePolytope) -> Result<LibgoberWoodReport> {
    let d = p.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if !is_canonical_fano(p) {
        return Err(Error::NotCanonicalFano);
    }
    // In dimension 2 a canonical Fano polygon is reflexive, hence LDP.
    let e: StringyEFunction = if d == 3 {
        stringy_e_canonical3d(p)?
    } else {
        stringy_e_ldp(p)?
    };
    let half_d = BigRational::new(BigInt::from(d as i64), BigInt::from(2));
    let mut lhs = BigRational::zero();
    for (alpha, psi) in e.terms() {
        let centered = alpha - &half_d;
        lhs += BigRational::from(psi.clone()) * (&centered * &centered);
    }

    let faces = p.face_lattice()?;
    let link = DualLink::new(p, &faces)?;
    let origin = vec![BigInt::zero(); d];
    let cone_volume = |vertex_ids: &[usize]| -> Result<BigRational> {
        let mut pts: Vec<IntVec> = vec![origin.clone()];
        pts.extend(vertex_ids.iter().map(|&i| p.vertices()[i].clone()));
        normalized_volume_of_points(&pts)
    };
    let mut fan_volume = BigRational::zero();
    for facet in faces.faces_of_dim(d - 1) {
        fan_volume += cone_volume(&facet.vertex_ids)?;
    }
    let rhs_volume = BigRational::new(BigInt::from(d as i64), BigInt::from(12)) * fan_volume;
    let mut mixed = BigRational::zero();
    for face in faces.faces_of_dim(d - 2) {
        mixed += cone_volume(&face.vertex_ids)?
            * link.dual_volume(face.id).expect("dual volume");
    }
    let rhs_mixed = BigRational::new(BigInt::one(), BigInt::from(6)) * mixed;
    let holds = lhs == &rhs_volume + &rhs_mixed;
    Ok(LibgoberWoodReport {
        lhs,
        rhs_volume,
        rhs_mixed,
        holds,
    })
}

/// Direct summation of `6 sum_{k=1}^{n-1} (1/4 - (k/n - 1/2)^2)`; equals
/// `n - 1/n` by the classical power-sum formulas.
pub fn gauss_sum(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("gauss_sum requires n >= 1".into()));
    }
    let n = i128::from(n);
    // Each summand is (n^2 - (2k - n)^2) / (4 n^2); accumulate numerators.
    let mut sum: i128 = 0;
    for k in 1..n {
        let twist = 2 * k - n;
        sum += n * n - twist * twist;
    }
    Ok(BigRational::new(
        BigInt::from(6 * sum),
        BigInt::from(4 * n * n),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ivec;

    fn simplex3(apex: [i64; 3]) -> LatticePolytope {
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
    fn identity24_on_reflexive_simplex() {
        let r = identity24(&simplex3([-1, -1, -1])).unwrap();
        assert_eq!(r.volume_term, rat(4, 1));
        assert_eq!(r.facet_term, rat(4, 1));
        assert_eq!(r.edge_term, rat(24, 1));
        assert_eq!(r.total, rat(24, 1));
        assert!(r.holds);
    }

    #[test]
    fn identity24_on_p1112() {
        let r = identity24(&simplex3([-1, -1, -2])).unwrap();
        assert_eq!(r.volume_term, rat(5, 1));
        assert_eq!(r.facet_term, rat(7, 2));
        assert_eq!(r.edge_term, rat(45, 2));
        assert_eq!(r.total, rat(24, 1));
        assert!(r.holds);
    }

    #[test]
    fn identity24_on_p1568() {
        let r = identity24(&simplex3([-5, -6, -8])).unwrap();
        assert_eq!(r.volume_term, rat(20, 1));
        assert_eq!(r.facet_term, rat(26, 3));
        assert_eq!(r.edge_term, rat(38, 3));
        assert_eq!(r.total, rat(24, 1));
        assert!(r.holds);
    }

    #[test]
    fn cy_euler_on_almost_reflexive_threefolds() {
        for apex in [[-1, -1, -1], [-1, -1, -2]] {
            let p = simplex3(apex);
            let a = cy_stringy_euler(&p).unwrap();
            let b = cy_stringy_euler_normalfan(&p).unwrap();
            assert_eq!(a, rat(24, 1), "apex {apex:?}");
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cy_euler_rejects_non_almost_pseudoreflexive() {
        let err = cy_stringy_euler(&simplex3([-5, -6, -8])).unwrap_err();
        assert_eq!(err, Error::NotAlmostPseudoreflexive);
    }

    #[test]
    fn cy_euler_agrees_across_routes_in_dimension_4() {
        // The reflexive 4-simplex: both routes must agree, and the value
        // matches the by-hand face sum 5 - 5 + 10*25 - 10*5 = 200.
        let p = LatticePolytope::convex_hull(
            &[
                ivec(&[1, 0, 0, 0]),
                ivec(&[0, 1, 0, 0]),
                ivec(&[0, 0, 1, 0]),
                ivec(&[0, 0, 0, 1]),
                ivec(&[-1, -1, -1, -1]),
            ],
            4,
        )
        .unwrap();
        let a = cy_stringy_euler(&p).unwrap();
        let b = cy_stringy_euler_normalfan(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, rat(200, 1));
    }

    #[test]
    fn libgober_wood_hand_checked_case() {
        let r = libgober_wood(&simplex3([-1, -1, -1])).unwrap();
        // lhs = (3/2)^2 + (1/2)^2 + (1/2)^2 + (3/2)^2 = 5,
        // rhs = 3/12 * 4 + 1/6 * 24 = 5.
        assert_eq!(r.lhs, rat(5, 1));
        assert_eq!(&r.rhs_volume + &r.rhs_mixed, rat(5, 1));
        assert_eq!(r.rhs_volume, rat(1, 1));
        assert_eq!(r.rhs_mixed, rat(4, 1));
        assert!(r.holds);
    }

    #[test]
    fn libgober_wood_on_p2_polygon() {
        let p = LatticePolytope::convex_hull(
            &[ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1])],
            2,
        )
        .unwrap();
        let r = libgober_wood(&p).unwrap();
        assert_eq!(r.lhs, rat(2, 1));
        assert_eq!(r.rhs_volume, rat(1, 2));
        assert_eq!(r.rhs_mixed, rat(3, 2));
        assert!(r.holds);
    }

    #[test]
    fn libgober_wood_on_p1568() {
        let r = libgober_wood(&simplex3([-5, -6, -8])).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, &r.rhs_volume + &r.rhs_mixed);
    }

    #[test]
    fn gauss_sum_small_values() {
        assert_eq!(gauss_sum(1).unwrap(), rat(0, 1));
        assert_eq!(gauss_sum(2).unwrap(), rat(3, 2));
        assert_eq!(gauss_sum(3).unwrap(), rat(8, 3));
        assert!(gauss_sum(0).is_err());
    }

    #[test]
    fn gauss_sum_closed_form() {
        for n in 1..200u32 {
            let expect = rat(i64::from(n), 1) - rat(1, i64::from(n));
            assert_eq!(gauss_sum(n).unwrap(), expect, "n = {n}");
        }
    }

    #[test]
    fn fan_volume_facts_used_by_the_identities() {
        // v(spanning fan) = v(P) and v(cone over edge) = v(edge) in d = 3.
        for apex in [[-1, -1, -2], [-5, -6, -8]] {
            let p = simplex3(apex);
            let faces = p.face_lattice().unwrap();
            let origin = vec![BigInt::zero(); 3];
            let mut fan_volume = BigRational::zero();
            for facet in faces.faces_of_dim(2) {
                let mut pts = vec![origin.clone()];
                pts.extend(facet.vertex_ids.iter().map(|&i| p.vertices()[i].clone()));
                fan_volume += normalized_volume_of_points(&pts).unwrap();
            }
            assert_eq!(fan_volume, BigRational::from(p.normalized_volume()));
            for edge in faces.faces_of_dim(1) {
                let mut pts = vec![origin.clone()];
                pts.extend(edge.vertex_ids.iter().map(|&i| p.vertices()[i].clone()));
                assert_eq!(normalized_volume_of_points(&pts).unwrap(), edge.volume);
            }
        }
    }
}

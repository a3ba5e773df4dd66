//! Exact integer and rational linear algebra over arbitrary-precision numbers.
//!
//! Everything here is a pure function on small (dimension at most 4) vectors
//! and matrices; the geometry modules lean on these kernels for volumes,
//! normals and barycentric coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Lattice vector with arbitrary-precision integer coordinates.
pub type IntVec = Vec<BigInt>;
/// Rational vector, e.g. a vertex of a dual polytope.
pub type RatVec = Vec<BigRational>;

/// Shorthand for building a `BigInt` vector from machine integers.
pub fn ivec(coords: &[i64]) -> IntVec {
    coords.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IntVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg(a: &[BigInt]) -> IntVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn rat_vec(a: &[BigInt]) -> RatVec {
    a.iter().map(|x| BigRational::from(x.clone())).collect()
}

/// Divide a nonzero vector by the gcd of its coordinates, keeping direction.
pub fn make_primitive(v: &[BigInt]) -> Result<IntVec> {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|c| c / &g).collect())
}

/// Exact determinant of a small square matrix (rows) by cofactor expansion.
pub fn integer_det(m: &[IntVec]) -> Result<BigInt> {
    let n = m.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    for row in m {
        if row.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n} matrix, found row of length {}",
                row.len()
            )));
        }
    }
    Ok(det_rec(m, &(0..n).collect::<Vec<_>>()))
}

fn det_rec(m: &[IntVec], cols: &[usize]) -> BigInt {
    let row = m.len() - cols.len();
    match cols.len() {
        1 => m[row][cols[0]].clone(),
        2 => &m[row][cols[0]] * &m[row + 1][cols[1]] - &m[row][cols[1]] * &m[row + 1][cols[0]],
        _ => {
            let mut acc = BigInt::zero();
            for (i, &c) in cols.iter().enumerate() {
                if m[row][c].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = det_rec(m, &rest);
                let term = &m[row][c] * minor;
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Solve `A x = b` exactly over the rationals (Cramer's rule; `A` given as rows).
pub fn solve_linear(a: &[IntVec], b: &[BigInt]) -> Result<RatVec> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {n}x{n} but right-hand side has length {}",
            b.len()
        )));
    }
    let det = integer_det(a)?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut x = Vec::with_capacity(n);
    let mut col = a.to_vec();
    for j in 0..n {
        for i in 0..n {
            col[i][j] = b[i].clone();
        }
        let dj = integer_det(&col)?;
        for i in 0..n {
            col[i][j] = a[i][j].clone();
        }
        x.push(BigRational::new(dj, det.clone()));
    }
    Ok(x)
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u * rows = h`, `u` unimodular, `h` in row echelon
/// form with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows of `h` are collected at the bottom.
pub fn hermite_normal_form(rows: &[IntVec]) -> (Vec<IntVec>, Vec<IntVec>) {
    let m = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    let mut h: Vec<IntVec> = rows.to_vec();
    let mut u: Vec<IntVec> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..d {
        if pivot_row == m {
            break;
        }
        // Euclidean elimination below the pivot.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if !h[r][col].is_zero()
                    && best.is_none_or(|b| h[r][col].abs() < h[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(best) = best else { break };
            h.swap(pivot_row, best);
            u.swap(pivot_row, best);
            if h[pivot_row][col].is_negative() {
                h[pivot_row] = neg(&h[pivot_row]);
                u[pivot_row] = neg(&u[pivot_row]);
            }
            let mut done = true;
            for r in pivot_row + 1..m {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                row_sub_mul(&mut h, &mut u, r, pivot_row, &q);
                if !h[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        // Reduce entries above the pivot into [0, pivot).
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&h[pivot_row][col]);
            if !q.is_zero() {
                row_sub_mul(&mut h, &mut u, r, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn row_sub_mul(h: &mut [IntVec], u: &mut [IntVec], r: usize, p: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..h[r].len() {
        let t = &h[p][j] * q;
        h[r][j] -= t;
    }
    for j in 0..u[r].len() {
        let t = &u[p][j] * q;
        u[r][j] -= t;
    }
}

/// Nonzero rows of the Hermite normal form of the given generators.
pub fn hnf_basis(rows: &[IntVec]) -> Vec<IntVec> {
    let (h, _) = hermite_normal_form(rows);
    h.into_iter().filter(|r| !is_zero_vec(r)).collect()
}

/// Basis of the integer kernel `{x : A x = 0}` of a matrix given by rows.
///
/// The kernel of an integer matrix is a saturated sublattice, so the result
/// is a lattice basis of the full rational kernel intersected with `Z^d`.
pub fn integer_kernel(rows: &[IntVec], dim: usize) -> Vec<IntVec> {
    if rows.is_empty() {
        return (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    // Rows of U mapping the transpose to zero rows of its HNF span the kernel.
    let transpose: Vec<IntVec> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let (h, u) = hermite_normal_form(&transpose);
    let mut kernel: Vec<IntVec> = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| is_zero_vec(hr))
        .map(|(_, ur)| ur)
        .collect();
    kernel = hnf_basis(&kernel);
    kernel
}

/// Lattice basis of the saturated sublattice spanned by differences of the
/// given points: `span(points - points[0])` intersected with `Z^d`.
///
/// Every lattice point of the affine span of the input has integer
/// coordinates in the returned basis.
pub fn sublattice_basis(points: &[IntVec]) -> Result<Vec<IntVec>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = points[0].len();
    let diffs: Vec<IntVec> = points[1..]
        .iter()
        .map(|p| sub(p, &points[0]))
        .filter(|d| !is_zero_vec(d))
        .collect();
    if diffs.is_empty() {
        return Ok(Vec::new());
    }
    let complement = integer_kernel(&diffs, dim);
    Ok(integer_kernel(&complement, dim))
}

/// Rank of the lattice spanned by the given rows.
pub fn rank(rows: &[IntVec]) -> usize {
    hnf_basis(rows).len()
}

/// Affine rank of a point set (dimension of its affine span).
pub fn affine_rank(points: &[IntVec]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<IntVec> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    rank(&diffs)
}

/// Coordinates of `w` in the given lattice basis, if they are integral.
///
/// Returns `None` when `w` is not in the span or the coordinates are not
/// integers. The basis rows must be linearly independent.
pub fn coords_in_basis(basis: &[IntVec], w: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = basis.len();
    if k == 0 {
        return is_zero_vec(w).then(Vec::new);
    }
    let dim = basis[0].len();
    // Pick k columns on which the basis has full rank.
    let mut cols = Vec::with_capacity(k);
    let mut chosen: Vec<IntVec> = Vec::with_capacity(k);
    for j in 0..dim {
        if cols.len() == k {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(basis.iter().map(|r| r[j].clone()).collect());
        if rank(&trial) == trial.len() {
            chosen = trial;
            cols.push(j);
        }
    }
    if cols.len() < k {
        return None;
    }
    // Solve the square subsystem, then verify on the remaining columns.
    let square: Vec<IntVec> = cols
        .iter()
        .map(|&j| basis.iter().map(|r| r[j].clone()).collect())
        .collect();
    let rhs: Vec<BigInt> = cols.iter().map(|&j| w[j].clone()).collect();
    let x = solve_linear(&square, &rhs).ok()?;
    let mut coords = Vec::with_capacity(k);
    for xi in &x {
        if !xi.is_integer() {
            return None;
        }
        coords.push(xi.to_integer());
    }
    for j in 0..dim {
        let mut acc = BigInt::zero();
        for (c, b) in coords.iter().zip(basis) {
            acc += c * &b[j];
        }
        if acc != w[j] {
            return None;
        }
    }
    Some(coords)
}

/// Least common multiple of two positive integers.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn imat(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| ivec(r)).collect()
    }

    #[test]
    fn make_primitive_divides_by_gcd() {
        assert_eq!(make_primitive(&ivec(&[2, 4, 6])).unwrap(), ivec(&[1, 2, 3]));
        assert_eq!(make_primitive(&ivec(&[1, 0, 0])).unwrap(), ivec(&[1, 0, 0]));
        // gcd(5, 6, 8) = 1, so the vector is already primitive.
        assert_eq!(
            make_primitive(&ivec(&[-5, -6, -8])).unwrap(),
            ivec(&[-5, -6, -8])
        );
        assert_eq!(make_primitive(&ivec(&[0, 0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn det_small_cases() {
        let id3 = imat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(integer_det(&id3).unwrap(), BigInt::from(1));
        // Edge matrix of the simplex conv(e1,e2,e3,-e1-e2-e3); |det| is its volume.
        let edges = imat(&[&[-1, 1, 0], &[-1, 0, 1], &[-2, -1, -1]]);
        assert_eq!(integer_det(&edges).unwrap(), BigInt::from(-4));
        let diag = imat(&[&[1, 0], &[0, 3]]);
        assert_eq!(integer_det(&diag).unwrap(), BigInt::from(3));
        let bad = imat(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(integer_det(&bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn solve_square_systems() {
        // Columns e1, e2, (-1,-1,-2) as a row matrix.
        let a = imat(&[&[1, 0, -1], &[0, 1, -1], &[0, 0, -2]]);
        let x = solve_linear(&a, &ivec(&[0, 0, -1])).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(x, vec![half.clone(), half.clone(), half]);

        let id = imat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            solve_linear(&id, &ivec(&[7, -2, 5])).unwrap(),
            rat_vec(&ivec(&[7, -2, 5]))
        );
        assert_eq!(
            solve_linear(&id, &ivec(&[1, 1, 1])).unwrap(),
            rat_vec(&ivec(&[1, 1, 1]))
        );

        let sing = imat(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve_linear(&sing, &ivec(&[1, 1])), Err(Error::SingularMatrix));
    }

    #[test]
    fn sublattice_basis_saturates() {
        // Facet conv(e1,e2,e3): the sublattice {x : x1+x2+x3 = 0} has rank 2
        // and every difference vector must have integer coordinates in it.
        let pts = imat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let basis = sublattice_basis(&pts).unwrap();
        assert_eq!(basis.len(), 2);
        for p in &pts[1..] {
            let d = sub(p, &pts[0]);
            assert!(coords_in_basis(&basis, &d).is_some());
        }
        // v(facet) = 1: the two difference vectors themselves form a basis.
        let diffs = imat(&[&[-1, 1, 0], &[-1, 0, 1]]);
        assert_eq!(hnf_basis(&basis), hnf_basis(&diffs));

        // A non-primitive segment saturates to its primitive direction.
        let seg = imat(&[&[0, 0, 0], &[2, 0, 0]]);
        assert_eq!(sublattice_basis(&seg).unwrap(), imat(&[&[1, 0, 0]]));

        // Edge of the simplex: primitive difference, length 1.
        let edge = imat(&[&[1, 0, 0], &[0, 1, 0]]);
        let basis = sublattice_basis(&edge).unwrap();
        assert_eq!(basis.len(), 1);
        let c = coords_in_basis(&basis, &ivec(&[-1, 1, 0])).unwrap();
        assert_eq!(c[0].abs(), BigInt::one());

        assert_eq!(sublattice_basis(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn kernel_of_empty_matrix_is_identity() {
        let k = integer_kernel(&[], 3);
        assert_eq!(k, imat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn det_sign_flips_under_row_swap() {
        let m = imat(&[&[3, 1, 2], &[0, 5, -1], &[7, 2, 2]]);
        let mut swapped = m.clone();
        swapped.swap(0, 2);
        assert_eq!(
            integer_det(&m).unwrap(),
            -integer_det(&swapped).unwrap()
        );
    }

    proptest! {
        #[test]
        fn make_primitive_idempotent_and_scale_invariant(
            v in proptest::collection::vec(-50i64..=50, 2..=4),
            k in 1i64..=9,
        ) {
            prop_assume!(v.iter().any(|&c| c != 0));
            let v = ivec(&v);
            let p = make_primitive(&v).unwrap();
            prop_assert_eq!(make_primitive(&p).unwrap(), p.clone());
            let scaled: IntVec = v.iter().map(|c| c * BigInt::from(k)).collect();
            prop_assert_eq!(make_primitive(&scaled).unwrap(), p);
        }

        #[test]
        fn solve_roundtrips_integer_solutions(
            a in proptest::collection::vec(proptest::collection::vec(-9i64..=9, 3), 3),
            x in proptest::collection::vec(-1000i64..=1000, 3),
        ) {
            let a: Vec<IntVec> = a.iter().map(|r| ivec(r)).collect();
            prop_assume!(!integer_det(&a).unwrap().is_zero());
            let x = ivec(&x);
            let b: Vec<BigInt> = (0..3).map(|i| dot(&a[i], &x)).collect();
            let solved = solve_linear(&a, &b).unwrap();
            prop_assert_eq!(solved, rat_vec(&x));
        }

        #[test]
        fn sublattice_basis_contains_differences(
            pts in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 2..=5),
        ) {
            let pts: Vec<IntVec> = pts.iter().map(|p| ivec(p)).collect();
            let basis = sublattice_basis(&pts).unwrap();
            for p in &pts[1..] {
                let d = sub(p, &pts[0]);
                prop_assert!(coords_in_basis(&basis, &d).is_some());
            }
            // The basis is already in HNF form.
            prop_assert_eq!(hnf_basis(&basis), basis);
        }
    }
}

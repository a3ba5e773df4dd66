//! Stringy E-functions of toric Fano varieties attached to lattice
//! polytopes, computed three ways: the general subdivision formula, the
//! closed form for canonical Fano threefolds, and the closed form for toric
//! log del Pezzo surfaces. All three agree where their domains overlap.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{box_points, kappa, simplicial_subdivision, spanning_fan, SubdivisionStrategy};
use crate::fano::is_canonical_fano;
use crate::linalg::lcm;
use crate::polytope::LatticePolytope;

/// A stringy E-function as a finite sparse sum `sum psi_alpha (uv)^alpha`.
///
/// Every formula implemented here depends on the product `uv` only, so a
/// single-variable sparse map keyed by the exact rational exponent is a
/// complete representation. Construction validates the structural
/// constraints: positive integer coefficients, `psi_0 = psi_d = 1` and the
/// Poincare-duality symmetry `psi_alpha = psi_{d - alpha}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringyEFunction {
    dim_d: usize,
    terms: BTreeMap<BigRational, BigInt>,
    gorenstein_q: BigInt,
}

impl StringyEFunction {
    pub fn from_terms(dim_d: usize, terms: BTreeMap<BigRational, BigInt>) -> Result<Self> {
        let d = BigRational::from(BigInt::from(dim_d as i64));
        let mut gorenstein_q = BigInt::one();
        for (alpha, psi) in &terms {
            if !psi.is_positive() {
                return Err(Error::InternalInconsistency(format!(
                    "nonpositive coefficient {psi} at exponent {alpha}"
                )));
            }
            if alpha.is_negative() || *alpha > d {
                return Err(Error::InternalInconsistency(format!(
                    "exponent {alpha} outside [0, {dim_d}]"
                )));
            }
            gorenstein_q = lcm(&gorenstein_q, alpha.denom());
        }
        let one = BigInt::one();
        if terms.get(&BigRational::zero()) != Some(&one) || terms.get(&d) != Some(&one) {
            return Err(Error::InternalInconsistency(
                "psi_0 and psi_d must both equal 1".into(),
            ));
        }
        for (alpha, psi) in &terms {
            let mirror = &d - alpha;
            if terms.get(&mirror) != Some(psi) {
                return Err(Error::InternalInconsistency(format!(
                    "coefficients at {alpha} and {mirror} differ"
                )));
            }
        }
        Ok(Self {
            dim_d,
            terms,
            gorenstein_q,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim_d
    }

    /// Terms as `(alpha, psi_alpha)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigInt)> {
        self.terms.iter()
    }

    pub fn psi(&self, alpha: &BigRational) -> BigInt {
        self.terms.get(alpha).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Smallest positive integer `q` with all exponents in `(1/q) Z`.
    pub fn gorenstein_q(&self) -> &BigInt {
        &self.gorenstein_q
    }
}

impl fmt::Display for StringyEFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (alpha, psi) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{psi}*(uv)^({}/{})", alpha.numer(), alpha.denom())?;
        }
        Ok(())
    }
}

/// Evaluation at `uv = 1`, i.e. the sum of all coefficients.
pub fn stringy_euler(e: &StringyEFunction) -> BigRational {
    BigRational::from(e.terms.values().sum::<BigInt>())
}

fn add_term(terms: &mut BTreeMap<BigRational, BigInt>, alpha: BigRational, coeff: BigInt) {
    let entry = terms.entry(alpha).or_insert_with(BigInt::zero);
    *entry += coeff;
}

fn finish(dim: usize, mut terms: BTreeMap<BigRational, BigInt>) -> Result<StringyEFunction> {
    for (alpha, psi) in &terms {
        if psi.is_negative() {
            return Err(Error::InternalInconsistency(format!(
                "negative coefficient {psi} at exponent {alpha} after collection"
            )));
        }
    }
    terms.retain(|_, psi| !psi.is_zero());
    StringyEFunction::from_terms(dim, terms)
}

/// General formula over a simplicial subdivision of the spanning fan:
/// every cone contributes `(uv - 1)^(d - dim)` times the monomials of its
/// half-open parallelepiped points.
pub fn stringy_e_general(
    p: &LatticePolytope,
    strategy: SubdivisionStrategy,
) -> Result<StringyEFunction> {
    let d = p.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if !is_canonical_fano(p) {
        return Err(Error::NotCanonicalFano);
    }
    let fan = spanning_fan(p)?;
    let sub = simplicial_subdivision(&fan, p, strategy)?;
    let mut terms = BTreeMap::new();
    for cone in sub.cones() {
        let k = cone.dim();
        // (t - 1)^(d - k) as integer coefficients, index = power of t.
        let expansion = binomial_expansion(d - k);
        for bp in box_points(cone)? {
            let base = BigRational::from(BigInt::from(k as i64)) + &bp.kappa;
            for (j, c) in expansion.iter().enumerate() {
                add_term(
                    &mut terms,
                    &base + BigRational::from(BigInt::from(j as i64)),
                    c.clone(),
                );
            }
        }
    }
    finish(d, terms)
}

/// Coefficients of `(t - 1)^n`, lowest power first.
fn binomial_expansion(n: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] -= c;
            next[i + 1] += c;
        }
        coeffs = next;
    }
    coeffs
}

/// Closed form for canonical Fano threefolds, evaluated directly from the
/// face lattice:
/// `((uv)^3 + 1) + r ((uv)^2 + uv) + sum_{facets, n > 1} v(facet) *
/// sum_{k=1}^{n-1} (uv)^(k/n + 1)` with `r = |P cap N| - 4`.
pub fn stringy_e_canonical3d(p: &LatticePolytope) -> Result<StringyEFunction> {
    if p.dim() != 3 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if !is_canonical_fano(p) {
        return Err(Error::NotCanonicalFano);
    }
    let points = p.lattice_points();
    let r = BigInt::from(points.total() as i64) - BigInt::from(4);
    let mut terms = BTreeMap::new();
    let int = |n: i64| BigRational::from(BigInt::from(n));
    add_term(&mut terms, int(0), BigInt::one());
    add_term(&mut terms, int(3), BigInt::one());
    if r.is_positive() {
        add_term(&mut terms, int(1), r.clone());
        add_term(&mut terms, int(2), r);
    }
    let faces = p.face_lattice()?;
    for facet in faces.faces_of_dim(2) {
        let n = facet
            .distance
            .clone()
            .expect("facets carry a lattice distance");
        debug_assert!(n.is_integer());
        let n = n.to_integer();
        if n <= BigInt::one() {
            continue;
        }
        debug_assert!(facet.volume.is_integer());
        let v = facet.volume.to_integer();
        let mut k = BigInt::one();
        while k < n {
            add_term(
                &mut terms,
                BigRational::new(k.clone(), n.clone()) + BigRational::one(),
                v.clone(),
            );
            k += 1;
        }
    }
    finish(3, terms)
}

/// Closed form for toric log del Pezzo surfaces:
/// `((uv)^2 + 1) + r (uv) + sum_{n interior, n != 0} ((uv)^(2 + kappa(n)) +
/// (uv)^(-kappa(n)))` with `r = |boundary points| - 2`.
pub fn stringy_e_ldp(p: &LatticePolytope) -> Result<StringyEFunction> {
    if p.dim() != 2 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if !p.contains_origin_interior()
        || !p
            .vertices()
            .iter()
            .all(|v| v.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).is_one())
    {
        return Err(Error::NotLdpPolygon);
    }
    let fan = spanning_fan(p)?;
    let points = p.lattice_points();
    let r = BigInt::from(points.boundary.len() as i64) - BigInt::from(2);
    let mut terms = BTreeMap::new();
    let int = |n: i64| BigRational::from(BigInt::from(n));
    add_term(&mut terms, int(0), BigInt::one());
    add_term(&mut terms, int(2), BigInt::one());
    if r.is_positive() {
        add_term(&mut terms, int(1), r);
    }
    for n in &points.interior {
        if n.iter().all(Zero::is_zero) {
            continue;
        }
        let k = kappa(&fan, n)?;
        add_term(&mut terms, int(2) + &k, BigInt::one());
        add_term(&mut terms, -k, BigInt::one());
    }
    finish(2, terms)
}

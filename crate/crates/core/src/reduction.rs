//! Reduction of a moment polytope by a subtorus.
//!
//! The subtorus is given by integer weight rows `M` and a level `c`. The level
//! set is the affine slice `{x : M x = c}`; the reduced polytope is its image
//! under an integral complement `P` with `[M; P]` unimodular.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Halfspace, ImageLattice, ZMatrix};
use crate::polytope::{
    blowup_face, double_blowup, interval, product, shifted_x0_blowup_unchecked, simplex_cpn,
    DelzantPolytope, Face, Facet, PolytopeJson,
};
use crate::potential::{
    critical_valuations_interval, critical_valuations_simplex, critical_valuations_xk,
    product_valuations, ValuationVector,
};
use crate::rational::{Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtorusSlice {
    pub m: ZMatrix,
    pub c: Vec<Rational>,
    pub p: ZMatrix,
}

impl SubtorusSlice {
    /// Validates the data; a missing complement is chosen by unimodular completion.
    pub fn new(m: ZMatrix, c: Vec<Rational>, p: Option<ZMatrix>) -> Result<Self> {
        let k = m.len();
        if k == 0 {
            return Err(Error::InvalidSlice("no weight rows".into()));
        }
        let n = m[0].len();
        if m.iter().any(|r| r.len() != n) || c.len() != k {
            return Err(Error::InvalidSlice("inconsistent dimensions".into()));
        }
        if linalg::rank_int(&m, n) != k {
            return Err(Error::InvalidSlice(
                "weight rows are linearly dependent".into(),
            ));
        }
        let p = match p {
            Some(p) => {
                if p.len() + k != n || p.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidSlice("complement has the wrong shape".into()));
                }
                let mut full = m.clone();
                full.extend(p.iter().cloned());
                if linalg::determinant_int(&full).magnitude() != &num_bigint::BigUint::from(1u32) {
                    return Err(Error::InvalidSlice("[M; P] is not unimodular".into()));
                }
                p
            }
            None => linalg::unimodular_completion(&m, n).ok_or_else(|| {
                Error::InvalidSlice("weight rows do not extend to a lattice basis".into())
            })?,
        };
        Ok(SubtorusSlice { m, c, p })
    }

    pub fn ambient_dim(&self) -> usize {
        self.m[0].len()
    }

    pub fn codim(&self) -> usize {
        self.m.len()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        linalg::mat_vec_int(&self.m, x) == self.c
    }

    /// `P x`.
    pub fn fiber_map(&self, x: &[Rational]) -> Point {
        linalg::mat_vec_int(&self.p, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityFailure {
    /// `M` does not have full rank on the face directions.
    RankDeficient,
    /// `M` maps the face lattice onto a proper sublattice of `Z^k`.
    NonUnimodular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffendingFace {
    pub face: Face,
    pub failure: RegularityFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub offending_faces: Vec<OffendingFace>,
}

/// Whether the slice meets the relative interior of `face`.
fn slice_meets_relint(poly: &DelzantPolytope, face: &Face, m: &[Vec<i64>], c: &[Rational]) -> bool {
    let n = poly.dim();
    let facets = poly.facets();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for &j in &face.tight_facets {
        rows.push(linalg::to_q(&facets[j].normal));
        rhs.push(-facets[j].offset.clone());
    }
    for (row, ci) in m.iter().zip(c) {
        rows.push(linalg::to_q(row));
        rhs.push(ci.clone());
    }
    let Some((x0, basis)) = linalg::affine_solve(&rows, &rhs, n) else {
        return false;
    };
    let others: Vec<&Facet> = facets
        .iter()
        .enumerate()
        .filter(|(j, _)| !face.tight_facets.contains(j))
        .map(|(_, f)| f)
        .collect();
    // x = x0 + B u; strict feasibility of the remaining facets in u
    let d = basis.len();
    let hs: Vec<Halfspace> = others
        .iter()
        .map(|f| Halfspace {
            normal: basis
                .iter()
                .map(|b| linalg::dot_int(b, &f.normal))
                .collect(),
            offset: f.slack(&x0),
        })
        .collect();
    let verts = linalg::enumerate_vertices(&hs, d);
    if verts.is_empty() {
        return false;
    }
    let centre = crate::polytope::centroid(&verts);
    hs.iter().all(|h| h.slack(&centre).is_positive())
}

/// Checks every face whose relative interior meets `{M x = c}`: `M` must map the
/// face's direction lattice onto `Z^k`.
pub fn check_regular(
    poly: &DelzantPolytope,
    m: &[Vec<i64>],
    c: &[Rational],
) -> Result<RegularityReport> {
    let n = poly.dim();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.first().map_or(0, Vec::len),
        });
    }
    if c.len() != m.len() {
        return Err(Error::InvalidSlice("level has the wrong length".into()));
    }
    if linalg::rank_int(m, n) != m.len() {
        return Err(Error::InvalidSlice(
            "weight rows are linearly dependent".into(),
        ));
    }
    let met: Vec<Face> = poly
        .faces()
        .into_par_iter()
        .filter(|f| slice_meets_relint(poly, f, m, c))
        .collect();
    if met.is_empty() {
        return Err(Error::EmptySlice);
    }
    let offending_faces: Vec<OffendingFace> = met
        .into_iter()
        .filter_map(|face| {
            let failure = match linalg::image_lattice(m, &face.direction_lattice) {
                ImageLattice::Full => return None,
                ImageLattice::RankDeficient => RegularityFailure::RankDeficient,
                ImageLattice::FiniteIndex => RegularityFailure::NonUnimodular,
            };
            Some(OffendingFace { face, failure })
        })
        .collect();
    Ok(RegularityReport {
        regular: offending_faces.is_empty(),
        offending_faces,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    pub reduced: DelzantPolytope,
    pub slice: SubtorusSlice,
    pub regularity: RegularityReport,
}

impl ReductionResult {
    pub fn fiber_map(&self, x: &[Rational]) -> Point {
        self.slice.fiber_map(x)
    }
}

/// Substitutes `x = [M; P]^{-1} (c, w)` into every facet and keeps the genuine facets.
pub fn reduce(poly: &DelzantPolytope, slice: &SubtorusSlice) -> Result<ReductionResult> {
    let n = poly.dim();
    if slice.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: slice.ambient_dim(),
        });
    }
    let regularity = check_regular(poly, &slice.m, &slice.c)?;
    if !regularity.regular {
        return Err(Error::IrregularLevel(Box::new(regularity)));
    }
    let k = slice.codim();
    let mut full = slice.m.clone();
    full.extend(slice.p.iter().cloned());
    let q = linalg::inverse_unimodular(&full)
        .ok_or_else(|| Error::InvalidSlice("[M; P] is not unimodular".into()))?;
    let qt = linalg::transpose(&q);
    let mut level = slice.c.clone();
    level.extend(std::iter::repeat_n(Rational::zero(), n - k));
    let x_at_level = linalg::mat_vec_int(&q, &level);
    let ineqs: Vec<Facet> = poly
        .facets()
        .iter()
        .map(|f| {
            // <xi, Q_c c + Q_w w> = <Q_w^T xi, w> + <xi, Q_c c>
            let normal: Vec<i64> = qt[k..]
                .iter()
                .map(|col| col.iter().zip(&f.normal).map(|(a, b)| a * b).sum())
                .collect();
            Facet::new(normal, &f.offset + linalg::dot_int(&x_at_level, &f.normal))
        })
        .collect();
    let reduced =
        DelzantPolytope::from_inequalities(n - k, ineqs, format!("{} // T^{k}", poly.label()))?;
    Ok(ReductionResult {
        reduced,
        slice: slice.clone(),
        regularity,
    })
}

/// Equality of canonical facet lists.
pub fn polytope_equal(a: &DelzantPolytope, b: &DelzantPolytope) -> bool {
    a.dim() == b.dim() && a.facets() == b.facets()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AglEquivalence {
    Equivalent { a: ZMatrix, t: Point },
    NotEquivalent,
    Unknown { reason: String },
}

pub const AGL_SEARCH_LIMIT: usize = 1_000_000;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Searches `A in GL(n, Z)`, `t` with `A a + t = b` by sending the vertex cone
/// at one vertex of `a` to each vertex cone of `b`; deterministic order.
pub fn agl_equivalent(a: &DelzantPolytope, b: &DelzantPolytope) -> AglEquivalence {
    let n = a.dim();
    if n != b.dim()
        || a.facets().len() != b.facets().len()
        || a.vertices().len() != b.vertices().len()
    {
        return AglEquivalence::NotEquivalent;
    }
    let cone = |p: &DelzantPolytope, v: &Point| -> ZMatrix {
        p.facets()
            .iter()
            .filter(|f| f.slack(v).is_zero())
            .map(|f| f.normal.clone())
            .collect()
    };
    let v0 = a.vertices()[0].clone();
    let n1 = cone(a, &v0);
    if n1.len() != n || linalg::determinant_int(&n1).magnitude() != &num_bigint::BigUint::from(1u32)
    {
        return AglEquivalence::Unknown {
            reason: "vertex cone is not unimodular".into(),
        };
    }
    let candidates = b.vertices().len().saturating_mul(factorial(n));
    if candidates > AGL_SEARCH_LIMIT {
        return AglEquivalence::Unknown {
            reason: format!("{candidates} candidate maps exceed the search limit"),
        };
    }
    let perms = permutations(n);
    for w in b.vertices() {
        let n2 = cone(b, w);
        if n2.len() != n {
            return AglEquivalence::Unknown {
                reason: "target vertex is not simple".into(),
            };
        }
        for perm in &perms {
            let n2p: ZMatrix = perm.iter().map(|&i| n2[i].clone()).collect();
            // normals map by A^{-T}: N1 A^{-1} = N2p, so A = N2p^{-1} N1
            let Some(n2p_inv) = linalg::inverse_unimodular(&n2p) else {
                return AglEquivalence::Unknown {
                    reason: "target vertex cone is not unimodular".into(),
                };
            };
            let map = linalg::mat_mul_int(&n2p_inv, &n1);
            let av0 = linalg::mat_vec_int(&map, &v0);
            let t: Point = w.iter().zip(&av0).map(|(x, y)| x - y).collect();
            if let Ok(img) = a.transform(&map, &t) {
                if polytope_equal(&img, b) {
                    return AglEquivalence::Equivalent { a: map, t };
                }
            }
        }
    }
    AglEquivalence::NotEquivalent
}

/// Constant `C` of the first pipeline factor. Any `C >= 1` works, since
/// `(n+1) alpha + 2 lambda <= 1` keeps the blowup ratio below the merge threshold.
pub fn pipeline_constant(_n: usize) -> Rational {
    Rational::from_integer(2)
}

/// Largest admissible `lambda` for the pipeline: `(1 - (n+1) alpha) / 2`.
pub fn lambda_max(n: usize, alpha: &Rational) -> Rational {
    (Rational::one() - Rational::from_integer(n as i64 + 1) * alpha) / Rational::from_integer(2)
}

/// The three factors of the pipeline and their product, in coordinates
/// `(x_1..x_n, y_2..y_n, z_1)`.
pub struct PipelineFactors {
    pub first: DelzantPolytope,
    pub second: DelzantPolytope,
    pub third: DelzantPolytope,
    pub product: DelzantPolytope,
}

pub fn pipeline_factors(n: usize, alpha: &Rational, lambda: &Rational) -> Result<PipelineFactors> {
    let nn = Rational::from_integer(n as i64);
    let first =
        shifted_x0_blowup_unchecked(n, alpha.clone(), lambda.clone(), pipeline_constant(n))?;
    let second = simplex_cpn(n - 1, &nn * alpha)?;
    let lo = Rational::from_integer(-1)
        + Rational::from_integer(2) * &nn * alpha
        + Rational::from_integer(2) * lambda;
    let third = interval(lo, Rational::one())?;
    let product = product(&product(&first, &second), &third);
    Ok(PipelineFactors {
        first,
        second,
        third,
        product,
    })
}

/// `x_j = y_j (j = 2..n)`, `x_1 + ... + x_n = z_1` at level 0, projected to `x`.
pub fn pipeline_slice(n: usize) -> Result<SubtorusSlice> {
    let dim = 2 * n;
    let mut m: ZMatrix = Vec::new();
    for j in 1..n {
        let mut row = vec![0; dim];
        row[j] = 1;
        row[n + j - 1] = -1;
        m.push(row);
    }
    let mut last = vec![0; dim];
    for v in last.iter_mut().take(n) {
        *v = 1;
    }
    last[dim - 1] = -1;
    m.push(last);
    let p: ZMatrix = (0..n)
        .map(|i| {
            let mut row = vec![0; dim];
            row[i] = 1;
            row
        })
        .collect();
    SubtorusSlice::new(m, vec![Rational::zero(); n], Some(p))
}

/// The distinguished critical class of each factor, concatenated:
/// `(alpha + lambda, alpha, ..., alpha | alpha, ..., alpha | n alpha + lambda)`.
pub fn pipeline_product_class(
    n: usize,
    alpha: &Rational,
    lambda: &Rational,
) -> Result<ValuationVector> {
    let nn = Rational::from_integer(n as i64);
    let n1 = Rational::from_integer(n as i64 - 1);
    // first factor = C' * X^n_0(eta) shifted by (0, -lambda, ..., -lambda)
    let c_prime = pipeline_constant(n) + &n1 * lambda;
    let eta = &n1 * (alpha + lambda) / &c_prime;
    let clifford = vec![Rational::one() / (&nn + Rational::one()); n];
    let mut shift = vec![-lambda.clone(); n];
    shift[0] = Rational::zero();
    let first = critical_valuations_xk(n, 0, &eta)?
        .into_iter()
        .find(|c| c.values != clifford)
        .ok_or_else(|| {
            Error::Unsupported("first factor has no class off the Clifford point".into())
        })?
        .placed(&c_prime, &shift);
    let second = critical_valuations_simplex(n - 1, &(&nn * alpha))?;
    let lo = Rational::from_integer(-1)
        + Rational::from_integer(2) * &nn * alpha
        + Rational::from_integer(2) * lambda;
    let third = critical_valuations_interval(&lo, &Rational::one())?;
    let classes = product_valuations(
        &product_valuations(std::slice::from_ref(&first), &second),
        &third,
    );
    classes
        .into_iter()
        .next()
        .ok_or_else(|| Error::Unsupported("empty product class".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub alpha: Rational,
    pub lambda: Rational,
    pub constant: Rational,
    pub first_factor_identified: bool,
    pub regularity: RegularityReport,
    pub reduced: PolytopeJson,
    pub expected: PolytopeJson,
    pub equal: bool,
    pub product_point: Point,
    pub product_point_on_slice: bool,
    pub fiber_point: Point,
    pub expected_fiber: Point,
    pub fiber_matches: bool,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.first_factor_identified
            && self.regularity.regular
            && self.equal
            && self.product_point_on_slice
            && self.fiber_matches
    }
}

/// Builds the three-factor product, reduces it by the pipeline slice and checks
/// the reduced polytope and the transported fiber.
pub fn theorem2_pipeline(n: usize, alpha: &Rational, lambda: &Rational) -> Result<PipelineReport> {
    if n < 2 {
        return Err(Error::out_of_range("n", "n >= 2"));
    }
    let amax = Rational::new(1, n as i64 + 1);
    if !alpha.is_positive() || *alpha >= amax {
        return Err(Error::out_of_range("alpha", format!("0 < alpha < {amax}")));
    }
    let lmax = lambda_max(n, alpha);
    if lambda.is_negative() || *lambda > lmax {
        return Err(Error::out_of_range(
            "lambda",
            format!("0 <= lambda <= {lmax}"),
        ));
    }
    let factors = pipeline_factors(n, alpha, lambda)?;
    let slice = pipeline_slice(n)?;
    let result = reduce(&factors.product, &slice)?;

    let n1 = Rational::from_integer(n as i64 - 1);
    let c_prime = pipeline_constant(n) + &n1 * lambda;
    let eta = &n1 * (alpha + lambda) / &c_prime;
    let mut shift = vec![-lambda.clone(); n];
    shift[0] = Rational::zero();
    let model = blowup_face(n, 0, eta)?
        .dilate(&c_prime)?
        .transform(&linalg::identity_int(n), &shift)?;
    let first_factor_identified = polytope_equal(&model, &factors.first);

    let expected = double_blowup(n, alpha.clone())?;
    let equal = polytope_equal(&result.reduced, &expected);
    if !equal {
        return Err(Error::MismatchedReduction);
    }
    let class = pipeline_product_class(n, alpha, lambda)?;
    let product_point = class.point();
    let product_point_on_slice =
        slice.contains(&product_point) && factors.product.is_interior(&product_point);
    let fiber_point = result.fiber_map(&product_point);
    let mut expected_fiber = vec![alpha.clone(); n];
    expected_fiber[0] = alpha + lambda;
    let fiber_matches = fiber_point == expected_fiber && result.reduced.is_interior(&fiber_point);
    Ok(PipelineReport {
        n,
        alpha: alpha.clone(),
        lambda: lambda.clone(),
        constant: pipeline_constant(n),
        first_factor_identified,
        regularity: result.regularity,
        reduced: result.reduced.to_json(),
        expected: expected.to_json(),
        equal,
        product_point,
        product_point_on_slice,
        fiber_point,
        expected_fiber,
        fiber_matches,
    })
}

/// `count` evenly spaced values strictly inside `(0, lambda_max)`.
pub fn sample_lambdas(n: usize, alpha: &Rational, count: usize) -> Vec<Rational> {
    let lmax = lambda_max(n, alpha);
    let step = lmax / Rational::from_integer(count as i64 + 1);
    (1..=count)
        .map(|i| &step * Rational::from_integer(i as i64))
        .collect()
}

/// The pipeline over several `lambda`, evaluated concurrently, in input order.
pub fn pipeline_sweep(
    n: usize,
    alpha: &Rational,
    lambdas: &[Rational],
) -> Vec<Result<PipelineReport>> {
    lambdas
        .par_iter()
        .map(|l| theorem2_pipeline(n, alpha, l))
        .collect()
}

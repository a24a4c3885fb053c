//! Quasi-states in their pushforward form: Dirac measures at interior points of
//! a moment polytope, evaluated on piecewise-affine test functions.
//!
//! Only the combinatorial shadow is modeled. Vanishing, Hamiltonian invariance
//! and the Poisson-bracket inequality carry no content for Dirac points and are
//! not represented.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{product, DelzantPolytope, Face};
use crate::potential::ValuationVector;
use crate::probes::{find_displacing_probe, DisplacementCertificate, SurvivorReport};
use crate::rational::{Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    FromCriticalClass(usize),
    FromStem,
    Manual,
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracQuasiState {
    polytope: DelzantPolytope,
    point: Point,
    provenance: Provenance,
}

impl DiracQuasiState {
    pub fn new(polytope: DelzantPolytope, point: Point, provenance: Provenance) -> Result<Self> {
        if point.len() != polytope.dim() {
            return Err(Error::DimensionMismatch {
                expected: polytope.dim(),
                got: point.len(),
            });
        }
        if !polytope.is_interior(&point) {
            return Err(Error::PointNotInterior);
        }
        Ok(DiracQuasiState {
            polytope,
            point,
            provenance,
        })
    }

    pub fn polytope(&self) -> &DelzantPolytope {
        &self.polytope
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Piecewise-affine function on `R^n`, exactly evaluable at rational points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PolytopeFunction {
    Affine {
        coeffs: Vec<Rational>,
        constant: Rational,
    },
    Max(Vec<PolytopeFunction>),
    Min(Vec<PolytopeFunction>),
    Add(Box<PolytopeFunction>, Box<PolytopeFunction>),
    Scale(Rational, Box<PolytopeFunction>),
}

impl PolytopeFunction {
    pub fn affine(coeffs: Vec<Rational>, constant: Rational) -> Self {
        PolytopeFunction::Affine { coeffs, constant }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        PolytopeFunction::affine(vec![Rational::zero(); dim], c)
    }

    /// `x_i` (0-based).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[i] = Rational::one();
        PolytopeFunction::affine(coeffs, Rational::zero())
    }

    pub fn max(fs: Vec<PolytopeFunction>) -> Self {
        PolytopeFunction::Max(fs)
    }

    pub fn min(fs: Vec<PolytopeFunction>) -> Self {
        PolytopeFunction::Min(fs)
    }

    pub fn plus(self, other: PolytopeFunction) -> Self {
        PolytopeFunction::Add(Box::new(self), Box::new(other))
    }

    pub fn scaled(self, a: Rational) -> Self {
        PolytopeFunction::Scale(a, Box::new(self))
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        match self {
            PolytopeFunction::Affine { coeffs, constant } => linalg::dot(coeffs, x) + constant,
            PolytopeFunction::Max(fs) => fs.iter().map(|f| f.eval(x)).max().expect("nonempty max"),
            PolytopeFunction::Min(fs) => fs.iter().map(|f| f.eval(x)).min().expect("nonempty min"),
            PolytopeFunction::Add(a, b) => a.eval(x) + b.eval(x),
            PolytopeFunction::Scale(a, f) => a * f.eval(x),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, PolytopeFunction::Affine { .. })
    }

    /// The same function of the coordinates `offset..offset + dim` inside `R^total`.
    pub fn embed(&self, offset: usize, total: usize) -> PolytopeFunction {
        match self {
            PolytopeFunction::Affine { coeffs, constant } => {
                let mut c = vec![Rational::zero(); total];
                c[offset..offset + coeffs.len()].clone_from_slice(coeffs);
                PolytopeFunction::affine(c, constant.clone())
            }
            PolytopeFunction::Max(fs) => {
                PolytopeFunction::Max(fs.iter().map(|f| f.embed(offset, total)).collect())
            }
            PolytopeFunction::Min(fs) => {
                PolytopeFunction::Min(fs.iter().map(|f| f.embed(offset, total)).collect())
            }
            PolytopeFunction::Add(a, b) => a.embed(offset, total).plus(b.embed(offset, total)),
            PolytopeFunction::Scale(a, f) => f.embed(offset, total).scaled(a.clone()),
        }
    }

    /// An enclosure `[lo, hi]` of the values on the convex hull of `vertices`.
    /// Exact for affine functions.
    pub fn range_bound(&self, vertices: &[Point]) -> (Rational, Rational) {
        match self {
            PolytopeFunction::Affine { .. } => {
                let vals: Vec<Rational> = vertices.iter().map(|v| self.eval(v)).collect();
                (
                    vals.iter().min().expect("vertices").clone(),
                    vals.iter().max().expect("vertices").clone(),
                )
            }
            PolytopeFunction::Max(fs) => {
                let b: Vec<_> = fs.iter().map(|f| f.range_bound(vertices)).collect();
                (
                    b.iter().map(|x| x.0.clone()).max().unwrap(),
                    b.iter().map(|x| x.1.clone()).max().unwrap(),
                )
            }
            PolytopeFunction::Min(fs) => {
                let b: Vec<_> = fs.iter().map(|f| f.range_bound(vertices)).collect();
                (
                    b.iter().map(|x| x.0.clone()).min().unwrap(),
                    b.iter().map(|x| x.1.clone()).min().unwrap(),
                )
            }
            PolytopeFunction::Add(a, b) => {
                let (x, y) = (a.range_bound(vertices), b.range_bound(vertices));
                (x.0 + y.0, x.1 + y.1)
            }
            PolytopeFunction::Scale(a, f) => {
                let (lo, hi) = f.range_bound(vertices);
                if a.is_negative() {
                    (a * hi, a * lo)
                } else {
                    (a * lo, a * hi)
                }
            }
        }
    }
}

/// `ζ(f) = f(point)`.
pub fn evaluate(zeta: &DiracQuasiState, f: &PolytopeFunction) -> Rational {
    f.eval(&zeta.point)
}

pub enum TestSet<'a> {
    Points(&'a [Point]),
    Face(&'a Face),
}

/// `min_X f <= ζ(f) <= max_X f`. For a face not containing the point, f is
/// tested on the face's vertices, which is exact for affine f and otherwise
/// only sufficient for `true`.
pub fn check_superheavy_inequality(
    zeta: &DiracQuasiState,
    x: TestSet<'_>,
    f: &PolytopeFunction,
) -> bool {
    let value = evaluate(zeta, f);
    let points: Vec<Point> = match x {
        TestSet::Points(ps) => ps.to_vec(),
        TestSet::Face(face) => {
            let facets = zeta.polytope.facets();
            if face
                .tight_facets
                .iter()
                .all(|&j| facets[j].slack(&zeta.point).is_zero())
            {
                return true;
            }
            zeta.polytope
                .vertices()
                .iter()
                .filter(|v| {
                    face.tight_facets
                        .iter()
                        .all(|&j| facets[j].slack(v).is_zero())
                })
                .cloned()
                .collect()
        }
    };
    let vals: Vec<Rational> = points.iter().map(|p| f.eval(p)).collect();
    match (vals.iter().min(), vals.iter().max()) {
        (Some(lo), Some(hi)) => lo <= &value && &value <= hi,
        _ => false,
    }
}

/// Dirac state at the concatenated point of the product polytope.
pub fn product_quasistate(a: &DiracQuasiState, b: &DiracQuasiState) -> DiracQuasiState {
    DiracQuasiState {
        polytope: product(&a.polytope, &b.polytope),
        point: [a.point.clone(), b.point.clone()].concat(),
        provenance: Provenance::Product,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassStatus {
    /// No bounded probe displaces the class point.
    SuperheavyCandidate,
    /// A probe displaces the class point, contradicting the algebra.
    Inconsistent,
    /// The class point is not an interior point.
    NotInterior,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub point: Point,
    pub status: ClassStatus,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DisplacementCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub polytope: String,
    pub classes: Vec<ClassVerdict>,
    pub stem: bool,
    pub survivors: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClassificationReport {
    pub fn inconsistent(&self) -> bool {
        self.classes
            .iter()
            .any(|c| c.status == ClassStatus::Inconsistent)
    }
}

/// Cross-checks critical classes against a survivor scan of the same polytope.
pub fn classify_fibers(
    poly: &DelzantPolytope,
    classes: &[ValuationVector],
    scan: &SurvivorReport,
) -> ClassificationReport {
    let verdicts: Vec<ClassVerdict> = classes
        .iter()
        .map(|c| {
            let (status, certificate) = match find_displacing_probe(poly, &c.values, scan.dir_bound)
            {
                Err(_) => (ClassStatus::NotInterior, None),
                Ok(None) => (ClassStatus::SuperheavyCandidate, None),
                Ok(Some(cert)) => (ClassStatus::Inconsistent, Some(cert)),
            };
            ClassVerdict {
                point: c.values.clone(),
                status,
                multiplicity: c.multiplicity,
                certificate,
            }
        })
        .collect();
    let stem = scan.survivors.len() == 1
        && verdicts
            .iter()
            .any(|v| v.status == ClassStatus::SuperheavyCandidate && v.point == scan.survivors[0]);
    let note = stem.then(|| {
        "unique probe survivor on the grid: a stem candidate, superheavy for every quasi-state if it is a stem".to_string()
    });
    ClassificationReport {
        polytope: poly.label().to_string(),
        classes: verdicts,
        stem,
        survivors: scan.survivors.clone(),
        note,
    }
}

fn random_rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Random function tree of the given depth with small rational coefficients.
pub fn random_function(rng: &mut impl Rng, dim: usize, depth: usize) -> PolytopeFunction {
    if depth == 0 || rng.gen_bool(0.3) {
        let coeffs = (0..dim).map(|_| random_rational(rng, 5, 4)).collect();
        return PolytopeFunction::affine(coeffs, random_rational(rng, 5, 4));
    }
    match rng.gen_range(0..4) {
        0 => PolytopeFunction::max(
            (0..rng.gen_range(2..4))
                .map(|_| random_function(rng, dim, depth - 1))
                .collect(),
        ),
        1 => PolytopeFunction::min(
            (0..rng.gen_range(2..4))
                .map(|_| random_function(rng, dim, depth - 1))
                .collect(),
        ),
        2 => random_function(rng, dim, depth - 1).plus(random_function(rng, dim, depth - 1)),
        _ => random_function(rng, dim, depth - 1).scaled(random_rational(rng, 3, 2)),
    }
}

/// Which quasi-state axioms fail for `zeta` on the sample `fs`; empty when all hold.
pub fn axiom_violations(
    zeta: &DiracQuasiState,
    fs: &[PolytopeFunction],
    rng: &mut impl Rng,
) -> Vec<String> {
    let dim = zeta.polytope.dim();
    let verts = zeta.polytope.vertices();
    let mut out = Vec::new();
    if evaluate(zeta, &PolytopeFunction::constant(dim, Rational::one())) != Rational::one() {
        out.push("normalization".to_string());
    }
    for (i, f) in fs.iter().enumerate() {
        let g = &fs[(i + 1) % fs.len()];
        let a = random_rational(rng, 7, 5);
        let (zf, zg) = (evaluate(zeta, f), evaluate(zeta, g));
        // f <= max(f, g) everywhere
        if zf > evaluate(zeta, &PolytopeFunction::max(vec![f.clone(), g.clone()])) {
            out.push(format!("monotonicity on sample {i}"));
        }
        if evaluate(zeta, &f.clone().plus(g.clone().scaled(a.clone()))) != &zf + &a * &zg {
            out.push(format!("linearity on sample {i}"));
        }
        let (lo, hi) = f
            .clone()
            .plus(g.clone().scaled(-Rational::one()))
            .range_bound(verts);
        let sup = lo.abs().max(hi.abs());
        if (&zf - &zg).abs() > sup {
            out.push(format!("lipschitz on sample {i}"));
        }
    }
    out
}

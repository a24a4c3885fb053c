//! Rational polytopes in H-representation.
//!
//! A [`DelzantPolytope`] is stored as its list of facet inequalities
//! `<x, normal> + offset >= 0` with primitive integer inward conormals. The list
//! is kept in canonical order (lexicographic by `(normal, offset)`), so two
//! polytopes are equal exactly when their facet lists are. Vertices are derived
//! once at construction by exhaustive subset solving and cached.

mod families;

pub use families::{
    blowup_face, double_blowup, hirzebruch, hirzebruch_standard, interval, product,
    shifted_x0_blowup, shifted_x0_blowup_unchecked, simplex_cpn,
};

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Halfspace, ZMatrix};
use crate::rational::{Point, Rational};

/// One facet inequality `<x, normal> + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Self {
        Facet { normal, offset }
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        linalg::dot_int(x, &self.normal) + &self.offset
    }

    fn halfspace(&self) -> Halfspace {
        Halfspace {
            normal: linalg::to_q(&self.normal),
            offset: self.offset.clone(),
        }
    }
}

/// A face, described by the facets tight on its relative interior.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub tight_facets: Vec<usize>,
    pub dim: usize,
    /// Integer basis of the lattice `span(F - F) ∩ Z^n`.
    pub direction_lattice: ZMatrix,
}

/// Outcome of the Delzant test; `offending_vertex` is set when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantCheck {
    pub delzant: bool,
    pub offending_vertex: Option<Point>,
}

#[derive(Clone, Debug)]
pub struct DelzantPolytope {
    dim: usize,
    facets: Vec<Facet>,
    label: String,
    vertices: Vec<Point>,
}

impl PartialEq for DelzantPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.facets == other.facets
    }
}

impl Eq for DelzantPolytope {}

impl DelzantPolytope {
    /// Validates and canonicalises a facet list. Every inequality must be a
    /// genuine facet: no duplicates and no redundant constraints.
    pub fn new(dim: usize, facets: Vec<Facet>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for f in &facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.normal.len(),
                });
            }
            if linalg::primitive_part(&f.normal).1 != 1 {
                return Err(Error::NonPrimitiveConormal(f.normal.clone()));
            }
        }
        let mut facets = facets;
        facets.sort();
        for (i, w) in facets.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::RedundantFacet(i + 1));
            }
        }
        check_bounded(dim, &facets)?;
        let hs: Vec<Halfspace> = facets.iter().map(Facet::halfspace).collect();
        let vertices = linalg::enumerate_vertices(&hs, dim);
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let centroid = centroid(&vertices);
        if facets.iter().any(|f| !f.slack(&centroid).is_positive()) {
            return Err(Error::NotFullDimensional);
        }
        for (j, f) in facets.iter().enumerate() {
            let tight: Vec<&Point> = vertices.iter().filter(|v| f.slack(v).is_zero()).collect();
            if tight.is_empty() || affine_rank(&tight, dim) + 1 != dim {
                return Err(Error::RedundantFacet(j));
            }
        }
        Ok(DelzantPolytope {
            dim,
            facets,
            label: label.into(),
            vertices,
        })
    }

    /// Builds a polytope from arbitrary inequalities: conormals are made
    /// primitive (scaling the offset), vacuous and duplicate constraints are
    /// dropped, and redundant inequalities are eliminated.
    pub fn from_inequalities(
        dim: usize,
        ineqs: Vec<Facet>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut cleaned: BTreeSet<Facet> = BTreeSet::new();
        for f in ineqs {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.normal.len(),
                });
            }
            let (normal, g) = linalg::primitive_part(&f.normal);
            if g == 0 {
                if f.offset.is_negative() {
                    return Err(Error::EmptyPolytope);
                }
                continue;
            }
            let offset = &f.offset / Rational::from_integer(g);
            cleaned.insert(Facet { normal, offset });
        }
        let facets: Vec<Facet> = cleaned.into_iter().collect();
        check_bounded(dim, &facets)?;
        let hs: Vec<Halfspace> = facets.iter().map(Facet::halfspace).collect();
        let vertices = linalg::enumerate_vertices(&hs, dim);
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let kept: Vec<Facet> = facets
            .into_iter()
            .filter(|f| {
                let tight: Vec<&Point> = vertices.iter().filter(|v| f.slack(v).is_zero()).collect();
                !tight.is_empty() && affine_rank(&tight, dim) + 1 == dim
            })
            .collect();
        DelzantPolytope::new(dim, kept, label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Index of the facet with exactly this conormal and offset.
    pub fn facet_index(&self, normal: &[i64], offset: &Rational) -> Option<usize> {
        self.facets
            .iter()
            .position(|f| f.normal == normal && &f.offset == offset)
    }

    pub fn slacks(&self, x: &[Rational]) -> Vec<Rational> {
        self.facets.iter().map(|f| f.slack(x)).collect()
    }

    fn check_point_dim(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn is_interior(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// At every vertex exactly `dim` facets are tight and their conormals form
    /// a unimodular matrix.
    pub fn is_delzant(&self) -> DelzantCheck {
        for v in &self.vertices {
            let tight: ZMatrix = self
                .facets
                .iter()
                .filter(|f| f.slack(v).is_zero())
                .map(|f| f.normal.clone())
                .collect();
            let ok = tight.len() == self.dim
                && linalg::determinant_int(&tight).magnitude().to_u64() == Some(1);
            if !ok {
                return DelzantCheck {
                    delzant: false,
                    offending_vertex: Some(v.clone()),
                };
            }
        }
        DelzantCheck {
            delzant: true,
            offending_vertex: None,
        }
    }

    /// The face whose relative interior contains `x`.
    pub fn face_of(&self, x: &[Rational]) -> Result<Face> {
        self.check_point_dim(x)?;
        let mut tight = Vec::new();
        for (j, f) in self.facets.iter().enumerate() {
            let s = f.slack(x);
            if s.is_negative() {
                return Err(Error::PointOutside { facet: j });
            }
            if s.is_zero() {
                tight.push(j);
            }
        }
        Ok(self.face_from_tight(tight))
    }

    fn face_from_tight(&self, tight: Vec<usize>) -> Face {
        let normals: ZMatrix = tight
            .iter()
            .map(|&j| self.facets[j].normal.clone())
            .collect();
        let rank = linalg::rank_int(&normals, self.dim);
        let direction_lattice = if normals.is_empty() {
            linalg::identity_int(self.dim)
        } else {
            linalg::integer_kernel(&normals, self.dim)
        };
        Face {
            tight_facets: tight,
            dim: self.dim - rank,
            direction_lattice,
        }
    }

    /// All nonempty faces (including the polytope itself), each identified by
    /// the full set of facets tight on it. Sorted by tight set.
    pub fn faces(&self) -> Vec<Face> {
        let tight_at: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| {
                (0..self.facets.len())
                    .filter(|&j| self.facets[j].slack(v).is_zero())
                    .collect()
            })
            .collect();
        let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in &tight_at {
            let m = t.len();
            for mask in 0u64..(1u64 << m) {
                let subset: Vec<usize> = (0..m)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| t[b])
                    .collect();
                // closure: facets tight on every vertex tight on `subset`
                let verts: Vec<usize> = (0..self.vertices.len())
                    .filter(|&i| subset.iter().all(|j| tight_at[i].contains(j)))
                    .collect();
                let closure: Vec<usize> = (0..self.facets.len())
                    .filter(|j| verts.iter().all(|&i| tight_at[i].contains(j)))
                    .collect();
                closed.insert(closure);
            }
        }
        closed
            .into_iter()
            .map(|t| self.face_from_tight(t))
            .collect()
    }

    /// Image under `x -> a x + t` for `a` in `GL(n, Z)`.
    pub fn transform(&self, a: &[Vec<i64>], t: &[Rational]) -> Result<DelzantPolytope> {
        let ainv = linalg::inverse_unimodular(a)
            .ok_or_else(|| Error::Unsupported("transform matrix is not unimodular".into()))?;
        // <a^{-1}(x' - t), xi> = <x', a^{-T} xi> - <t, a^{-T} xi>
        let ainv_t = linalg::transpose(&ainv);
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let normal: Vec<i64> = ainv_t
                    .iter()
                    .map(|row| row.iter().zip(&f.normal).map(|(x, y)| x * y).sum())
                    .collect();
                let offset = &f.offset - linalg::dot_int(t, &normal);
                Facet { normal, offset }
            })
            .collect();
        DelzantPolytope::new(self.dim, facets, self.label.clone())
    }

    /// Image under `x -> c x` for `c > 0`.
    pub fn dilate(&self, c: &Rational) -> Result<DelzantPolytope> {
        if !c.is_positive() {
            return Err(Error::out_of_range("scale", "scale > 0"));
        }
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: &f.offset * c,
            })
            .collect();
        DelzantPolytope::new(self.dim, facets, self.label.clone())
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            facets: self.facets.clone(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: PolytopeJson) -> Result<Self> {
        DelzantPolytope::new(json.dim, json.facets, json.label)
    }

    /// Lattice points `m / denominator` strictly inside the polytope, sorted.
    pub fn interior_grid_points(&self, denominator: u64) -> Vec<Point> {
        let q = Rational::from_integer(denominator as i64);
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let min = self.vertices.iter().map(|v| &v[i]).min().expect("nonempty");
            let max = self.vertices.iter().map(|v| &v[i]).max().expect("nonempty");
            lo.push((min * &q).floor().to_i64().expect("grid bound"));
            hi.push((max * &q).ceil().to_i64().expect("grid bound"));
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p: Point = cur
                .iter()
                .map(|&m| Rational::new(m, denominator as i64))
                .collect();
            if self.is_interior(&p) {
                out.push(p);
            }
            let mut i = 0;
            loop {
                if i == self.dim {
                    return out;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }
}

/// The polytope interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub label: String,
}

impl Serialize for DelzantPolytope {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DelzantPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let json = PolytopeJson::deserialize(deserializer)?;
        DelzantPolytope::from_json(json).map_err(serde::de::Error::custom)
    }
}

pub fn centroid(points: &[Point]) -> Point {
    let n = points[0].len();
    let k = Rational::from_integer(points.len() as i64);
    (0..n)
        .map(|i| points.iter().map(|p| &p[i]).sum::<Rational>() / &k)
        .collect()
}

fn affine_rank(points: &[&Point], dim: usize) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs, dim)
}

/// The inequality system is bounded iff the recession cone `{d : <xi_j, d> >= 0}`
/// is trivial. With full-rank conormals that cone is pointed, so it is
/// nontrivial exactly when some extreme ray exists; extreme rays are cut out by
/// `dim - 1` independent tight conormals.
fn check_bounded(dim: usize, facets: &[Facet]) -> Result<()> {
    let normals: Vec<Vec<Rational>> = facets.iter().map(|f| linalg::to_q(&f.normal)).collect();
    let fmt = |d: &[Rational]| d.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    if linalg::rank(&normals, dim) < dim {
        let (_, basis) =
            linalg::affine_solve(&normals, &vec![Rational::zero(); normals.len()], dim)
                .expect("homogeneous system is consistent");
        return Err(Error::UnboundedPolytope(fmt(&basis[0])));
    }
    let mut ray: Option<Vec<Rational>> = None;
    linalg::for_each_combination(facets.len(), dim - 1, |idx| {
        if ray.is_some() {
            return;
        }
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| normals[i].clone()).collect();
        let (_, basis) = linalg::affine_solve(&sub, &vec![Rational::zero(); sub.len()], dim)
            .expect("homogeneous system is consistent");
        if basis.len() != 1 {
            return;
        }
        for sign in [1i64, -1] {
            let d: Vec<Rational> = basis[0]
                .iter()
                .map(|c| c * Rational::from_integer(sign))
                .collect();
            if normals
                .iter()
                .all(|nrm| !linalg::dot(nrm, &d).is_negative())
            {
                ray = Some(d);
                return;
            }
        }
    });
    match ray {
        Some(d) => Err(Error::UnboundedPolytope(fmt(&d))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(v: &[(i64, i64)]) -> Point {
        v.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn square() -> DelzantPolytope {
        product(
            &interval(rat(0, 1), rat(1, 1)).unwrap(),
            &interval(rat(0, 1), rat(1, 1)).unwrap(),
        )
    }

    #[test]
    fn simplex_vertices() {
        let d = simplex_cpn(2, rat(1, 1)).unwrap();
        assert_eq!(
            d.vertices(),
            &[
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(1, 1), (0, 1)])
            ]
        );
    }

    #[test]
    fn small_blowup_vertices() {
        let d = blowup_face(2, 0, rat(1, 8)).unwrap();
        assert_eq!(
            d.vertices(),
            &[
                pt(&[(0, 1), (1, 8)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(1, 8), (0, 1)]),
                pt(&[(1, 1), (0, 1)])
            ]
        );
    }

    #[test]
    fn double_blowup_vertices() {
        let d = double_blowup(2, rat(1, 6)).unwrap();
        let v = d.vertices();
        for p in [
            pt(&[(1, 6), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 3)]),
            pt(&[(2, 3), (1, 3)]),
            pt(&[(0, 1), (1, 6)]),
        ] {
            assert!(v.contains(&p), "missing {p:?}");
        }
        assert_eq!(v.len(), 5);
    }

    #[test]
    fn rejects_bad_polytopes() {
        let f = |n: Vec<i64>, a: i64| Facet::new(n, Rational::from_integer(a));
        // half-plane strip: unbounded
        let e = DelzantPolytope::new(
            2,
            vec![f(vec![1, 0], 0), f(vec![-1, 0], 1), f(vec![0, 1], 0)],
            "strip",
        );
        assert!(matches!(e, Err(Error::UnboundedPolytope(_))));
        // x >= 1 and x <= 0
        let e = DelzantPolytope::new(1, vec![f(vec![1], -1), f(vec![-1], 0)], "empty");
        assert!(matches!(e, Err(Error::EmptyPolytope)));
        // x >= 0, x <= 0
        let e = DelzantPolytope::new(1, vec![f(vec![1], 0), f(vec![-1], 0)], "flat");
        assert!(matches!(e, Err(Error::NotFullDimensional)));
        // redundant x <= 2 on [0,1]
        let e = DelzantPolytope::new(
            1,
            vec![f(vec![1], 0), f(vec![-1], 1), f(vec![-1], 2)],
            "redundant",
        );
        assert!(matches!(e, Err(Error::RedundantFacet(_))));
        // non-primitive conormal (0,2)
        let e = DelzantPolytope::new(
            2,
            vec![
                f(vec![1, 0], 0),
                f(vec![0, 2], 0),
                f(vec![-1, 0], 1),
                f(vec![0, -1], 1),
            ],
            "doubled",
        );
        assert!(matches!(e, Err(Error::NonPrimitiveConormal(_))));
        // unbounded along the diagonal despite full-rank normals
        let e = DelzantPolytope::new(
            2,
            vec![f(vec![1, 0], 0), f(vec![0, 1], 0), f(vec![1, -1], 1)],
            "wedge",
        );
        assert!(matches!(e, Err(Error::UnboundedPolytope(_))));
    }

    #[test]
    fn from_inequalities_drops_redundancy() {
        let f = |n: Vec<i64>, a: i64| Facet::new(n, Rational::from_integer(a));
        let d = DelzantPolytope::from_inequalities(
            1,
            vec![
                f(vec![2], 0),
                f(vec![-1], 1),
                f(vec![-1], 2),
                f(vec![0], 3),
                f(vec![1], 0),
            ],
            "unit",
        )
        .unwrap();
        assert_eq!(d, interval(rat(0, 1), rat(1, 1)).unwrap());
    }

    #[test]
    fn delzant_checks() {
        assert!(simplex_cpn(3, rat(1, 1)).unwrap().is_delzant().delzant);
        assert!(blowup_face(3, 1, rat(1, 5)).unwrap().is_delzant().delzant);
        // weighted projective plane P(1,1,2): not smooth at (0,1)
        let f = |n: Vec<i64>, a: i64| Facet::new(n, Rational::from_integer(a));
        let w = DelzantPolytope::new(
            2,
            vec![f(vec![1, 0], 0), f(vec![0, 1], 0), f(vec![-1, -2], 2)],
            "P112",
        )
        .unwrap();
        let c = w.is_delzant();
        assert!(!c.delzant);
        assert_eq!(c.offending_vertex, Some(pt(&[(0, 1), (1, 1)])));
        // square pyramid apex has four tight facets
        let pyr = DelzantPolytope::new(
            3,
            vec![
                f(vec![0, 0, 1], 0),
                f(vec![1, 0, -1], 1),
                f(vec![-1, 0, -1], 1),
                f(vec![0, 1, -1], 1),
                f(vec![0, -1, -1], 1),
            ],
            "pyramid",
        )
        .unwrap();
        assert!(!pyr.is_delzant().delzant);
    }

    #[test]
    fn faces_of_points() {
        let d = simplex_cpn(2, rat(1, 1)).unwrap();
        let face = d.face_of(&pt(&[(1, 3), (1, 3)])).unwrap();
        assert!(face.tight_facets.is_empty());
        assert_eq!(face.dim, 2);
        let face = d.face_of(&pt(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!(face.dim, 1);
        assert_eq!(face.tight_facets.len(), 1);
        assert_eq!(d.facets()[face.tight_facets[0]].normal, vec![1, 0]);
        assert_eq!(face.direction_lattice, vec![vec![0, 1]]);
        assert!(matches!(
            d.face_of(&pt(&[(-1, 3), (1, 3)])),
            Err(Error::PointOutside { .. })
        ));

        let b = blowup_face(2, 0, rat(1, 8)).unwrap();
        let face = b.face_of(&pt(&[(1, 8), (0, 1)])).unwrap();
        assert_eq!(face.dim, 0);
        assert_eq!(face.tight_facets.len(), 2);
    }

    #[test]
    fn face_enumeration_counts() {
        // square: 4 vertices, 4 edges, 1 body
        assert_eq!(square().faces().len(), 9);
        let s3 = simplex_cpn(3, rat(1, 1)).unwrap();
        assert_eq!(s3.faces().len(), 15);
        for f in s3.faces() {
            assert_eq!(f.dim + f.tight_facets.len(), 3);
        }
    }

    #[test]
    fn transform_moves_vertices() {
        let d = simplex_cpn(2, rat(1, 1)).unwrap();
        let a = vec![vec![1, 1], vec![0, 1]];
        let t = vec![rat(1, 2), rat(0, 1)];
        let img = d.transform(&a, &t).unwrap();
        let mut expect: Vec<Point> = d
            .vertices()
            .iter()
            .map(|v| vec![&v[0] + &v[1] + rat(1, 2), v[1].clone()])
            .collect();
        expect.sort();
        assert_eq!(img.vertices(), expect.as_slice());
        assert!(d.transform(&[vec![2, 0], vec![0, 1]], &t).is_err());
    }

    #[test]
    fn grid_points_are_interior() {
        let d = simplex_cpn(2, rat(1, 1)).unwrap();
        let g = d.interior_grid_points(6);
        // m1, m2 >= 1 with m1 + m2 <= 5
        assert_eq!(g.len(), 10);
        assert!(g.iter().all(|p| d.is_interior(p)));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let d = double_blowup(2, rat(1, 6)).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: DelzantPolytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(s.contains(r#""offset":"-1/6""#));
    }
}

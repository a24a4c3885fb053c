//! Displacement of toric fibers by probes.
//!
//! A probe enters the polytope from the relative interior of a facet `F` along
//! an integer direction `v` with `<xi_F, v> = 1`. Every fiber strictly less than
//! halfway along the probe is displaceable. Scans over rational grids report the
//! points no bounded probe displaces; survival is evidence, never a proof.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::DelzantPolytope;
use crate::rational::{cmp_points, Point, Rational};

pub const DEFAULT_DIR_BOUND: u32 = 3;
pub const MAX_DIR_BOUND: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub facet: usize,
    pub base: Point,
    pub dir: Vec<i64>,
}

impl Probe {
    pub fn point_at(&self, t: &Rational) -> Point {
        self.base
            .iter()
            .zip(&self.dir)
            .map(|(w, &v)| w + t * Rational::from_integer(v))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementCertificate {
    pub probe: Probe,
    pub t_point: Rational,
    pub t_exit: Rational,
}

impl DisplacementCertificate {
    /// The displaced fiber.
    pub fn point(&self) -> Point {
        self.probe.point_at(&self.t_point)
    }

    /// Rechecks every condition from the facet data alone.
    pub fn validate(&self, poly: &DelzantPolytope) -> std::result::Result<(), String> {
        let p = &self.probe;
        let facets = poly.facets();
        let f = facets.get(p.facet).ok_or("facet index out of range")?;
        if p.base.len() != poly.dim() || p.dir.len() != poly.dim() {
            return Err("dimension mismatch".into());
        }
        let pairing: i64 = f.normal.iter().zip(&p.dir).map(|(a, b)| a * b).sum();
        if pairing != 1 {
            return Err(format!("<xi_F, v> = {pairing}"));
        }
        if !f.slack(&p.base).is_zero() {
            return Err("base is off the facet hyperplane".into());
        }
        for (j, g) in facets.iter().enumerate() {
            if j != p.facet && !g.slack(&p.base).is_positive() {
                return Err(format!("base is not strictly inside facet {j}"));
            }
        }
        if !self.t_point.is_positive()
            || self.t_point.clone() * Rational::from_integer(2) >= self.t_exit
        {
            return Err("t_point is not in (0, t_exit/2)".into());
        }
        let exit = p.point_at(&self.t_exit);
        let slacks = poly.slacks(&exit);
        if slacks.iter().any(Rational::is_negative) || !slacks.iter().any(Rational::is_zero) {
            return Err("exit point is not on the boundary".into());
        }
        if !poly.contains(&self.point()) {
            return Err("displaced point is outside".into());
        }
        Ok(())
    }
}

fn pairing(normal: &[i64], dir: &[i64]) -> i64 {
    normal.iter().zip(dir).map(|(a, b)| a * b).sum()
}

fn check_probe(poly: &DelzantPolytope, p: &Probe) -> Result<()> {
    let facets = poly.facets();
    let f = facets
        .get(p.facet)
        .ok_or_else(|| Error::InvalidProbe(format!("no facet {}", p.facet)))?;
    if p.base.len() != poly.dim() || p.dir.len() != poly.dim() {
        return Err(Error::InvalidProbe("dimension mismatch".into()));
    }
    if pairing(&f.normal, &p.dir) != 1 {
        return Err(Error::InvalidProbe(
            "direction is not integrally transverse to the facet".into(),
        ));
    }
    let face = poly
        .face_of(&p.base)
        .map_err(|_| Error::InvalidProbe("base is outside the polytope".into()))?;
    if face.tight_facets != [p.facet] {
        return Err(Error::InvalidProbe(
            "base is not in the relative interior of the facet".into(),
        ));
    }
    Ok(())
}

/// Exit parameter for a base already known to lie in relint F.
fn exit_parameter(poly: &DelzantPolytope, base: &[Rational], dir: &[i64]) -> Rational {
    poly.facets()
        .iter()
        .filter_map(|g| {
            let rate = pairing(&g.normal, dir);
            (rate < 0).then(|| g.slack(base) / Rational::from_integer(-rate))
        })
        .min()
        .expect("bounded polytope")
}

/// `t* = max { t >= 0 : base + t dir in the polytope }`.
pub fn probe_length(poly: &DelzantPolytope, p: &Probe) -> Result<Rational> {
    check_probe(poly, p)?;
    Ok(exit_parameter(poly, &p.base, &p.dir))
}

/// A certificate iff `u = base + t dir` with `0 < t < t*/2`.
pub fn probe_displaces(
    poly: &DelzantPolytope,
    p: &Probe,
    u: &[Rational],
) -> Result<Option<DisplacementCertificate>> {
    poly.face_of(u)?;
    check_probe(poly, p)?;
    // <xi_F, base> + a_F = 0 and <xi_F, v> = 1, so the only candidate is t = slack_F(u)
    let t = poly.facets()[p.facet].slack(u);
    if p.point_at(&t).as_slice() != u {
        return Ok(None);
    }
    let t_exit = exit_parameter(poly, &p.base, &p.dir);
    if t.is_positive() && t.clone() * Rational::from_integer(2) < t_exit {
        Ok(Some(DisplacementCertificate {
            probe: p.clone(),
            t_point: t,
            t_exit,
        }))
    } else {
        Ok(None)
    }
}

/// Directions `v` with `|v|_inf <= bound` and `<normal, v> = 1`, lexicographic.
pub fn transverse_directions(normal: &[i64], bound: u32) -> Vec<Vec<i64>> {
    let n = normal.len();
    let b = bound as i64;
    let mut out = Vec::new();
    let mut cur = vec![-b; n];
    loop {
        if pairing(normal, &cur) == 1 {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
}

/// Precomputed search table for repeated queries on one polytope.
pub struct ProbeSearch<'a> {
    poly: &'a DelzantPolytope,
    dirs: Vec<Vec<Vec<i64>>>,
}

impl<'a> ProbeSearch<'a> {
    pub fn new(poly: &'a DelzantPolytope, dir_bound: u32) -> Self {
        let dirs = poly
            .facets()
            .iter()
            .map(|f| transverse_directions(&f.normal, dir_bound))
            .collect();
        ProbeSearch { poly, dirs }
    }

    /// First displacing probe in `(facet index, v)` order, for an interior `u`.
    pub fn find(&self, u: &[Rational]) -> Option<DisplacementCertificate> {
        let facets = self.poly.facets();
        let two = Rational::from_integer(2);
        for (fi, f) in facets.iter().enumerate() {
            let t = f.slack(u);
            for v in &self.dirs[fi] {
                let base: Point = u
                    .iter()
                    .zip(v)
                    .map(|(x, &vi)| x - &t * Rational::from_integer(vi))
                    .collect();
                let in_relint = facets
                    .iter()
                    .enumerate()
                    .all(|(j, g)| j == fi || g.slack(&base).is_positive());
                if !in_relint {
                    continue;
                }
                let t_exit = exit_parameter(self.poly, &base, v);
                if t.clone() * &two < t_exit {
                    let probe = Probe {
                        facet: fi,
                        base,
                        dir: v.clone(),
                    };
                    return Some(DisplacementCertificate {
                        probe,
                        t_point: t,
                        t_exit,
                    });
                }
            }
        }
        None
    }
}

/// Bounded search for a probe displacing the interior point `u`.
pub fn find_displacing_probe(
    poly: &DelzantPolytope,
    u: &[Rational],
    dir_bound: u32,
) -> Result<Option<DisplacementCertificate>> {
    if u.len() != poly.dim() {
        return Err(Error::DimensionMismatch {
            expected: poly.dim(),
            got: u.len(),
        });
    }
    if !poly.is_interior(u) {
        return Err(Error::PointNotInterior);
    }
    Ok(ProbeSearch::new(poly, dir_bound).find(u))
}

/// Interior grid points with the search outcome for each one, in grid order.
pub fn scan(
    poly: &DelzantPolytope,
    grid: u64,
    dir_bound: u32,
) -> Vec<(Point, Option<DisplacementCertificate>)> {
    let search = ProbeSearch::new(poly, dir_bound);
    let points = poly.interior_grid_points(grid);
    points
        .into_par_iter()
        .map(|u| {
            let cert = search.find(&u);
            (u, cert)
        })
        .collect()
}

/// Interior points of the `1/grid` lattice that no probe with `|v|_inf <= dir_bound` displaces.
pub fn survivor_scan(poly: &DelzantPolytope, grid: u64, dir_bound: u32) -> Vec<Point> {
    let mut out: Vec<Point> = scan(poly, grid, dir_bound)
        .into_iter()
        .filter(|(_, c)| c.is_none())
        .map(|(u, _)| u)
        .collect();
    out.sort_by(|a, b| cmp_points(a, b));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorReport {
    pub polytope: String,
    pub grid: u64,
    pub dir_bound: u32,
    pub survivors: Vec<Point>,
    pub certificates_sampled: Vec<DisplacementCertificate>,
}

/// Full scan plus up to `samples` certificates, spread evenly over the grid.
pub fn survivor_report(
    poly: &DelzantPolytope,
    grid: u64,
    dir_bound: u32,
    samples: usize,
) -> SurvivorReport {
    let results = scan(poly, grid, dir_bound);
    let mut survivors = Vec::new();
    let mut certs = Vec::new();
    for (u, c) in results {
        match c {
            None => survivors.push(u),
            Some(c) => certs.push(c),
        }
    }
    survivors.sort_by(|a, b| cmp_points(a, b));
    let certificates_sampled = if certs.len() <= samples {
        certs
    } else {
        let stride = certs.len() / samples.max(1);
        certs
            .into_iter()
            .step_by(stride.max(1))
            .take(samples)
            .collect()
    };
    SurvivorReport {
        polytope: poly.label().to_string(),
        grid,
        dir_bound,
        survivors,
        certificates_sampled,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StemReport {
    pub candidate: Point,
    pub candidate_survives: bool,
    pub other_survivors: Vec<Point>,
    pub stem_evidence: bool,
}

/// Grid evidence that `candidate` is the only fiber probes cannot displace.
/// A candidate off the grid is searched directly as well.
pub fn certify_stem(
    poly: &DelzantPolytope,
    candidate: &[Rational],
    grid: u64,
    dir_bound: u32,
) -> Result<StemReport> {
    let survives = find_displacing_probe(poly, candidate, dir_bound)?.is_none();
    let other_survivors: Vec<Point> = survivor_scan(poly, grid, dir_bound)
        .into_iter()
        .filter(|p| p.as_slice() != candidate)
        .collect();
    Ok(StemReport {
        candidate: candidate.to_vec(),
        candidate_survives: survives,
        stem_evidence: survives && other_survivors.is_empty(),
        other_survivors,
    })
}

/// Image of a probe under `x -> a x + t`, with the facet index looked up in `target`.
pub fn transform_probe(
    p: &Probe,
    source: &DelzantPolytope,
    a: &[Vec<i64>],
    t: &[Rational],
    target: &DelzantPolytope,
) -> Option<Probe> {
    let ainv = linalg::inverse_unimodular(a)?;
    let f = &source.facets()[p.facet];
    let normal: Vec<i64> = (0..f.normal.len())
        .map(|i| (0..f.normal.len()).map(|j| ainv[j][i] * f.normal[j]).sum())
        .collect();
    let offset = &f.offset - linalg::dot_int(t, &normal);
    let facet = target.facet_index(&normal, &offset)?;
    let base: Point = linalg::mat_vec_int(a, &p.base)
        .into_iter()
        .zip(t)
        .map(|(x, s)| x + s)
        .collect();
    let dir: Vec<i64> = a
        .iter()
        .map(|row| row.iter().zip(&p.dir).map(|(x, y)| x * y).sum())
        .collect();
    Some(Probe { facet, base, dir })
}

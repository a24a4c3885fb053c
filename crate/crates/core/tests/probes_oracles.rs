use std::collections::BTreeSet;

use proptest::prelude::*;
use toric::polytope::{blowup_face, double_blowup, hirzebruch_standard, simplex_cpn, DelzantPolytope};
use toric::probes::{
    find_displacing_probe, probe_displaces, probe_length, scan, survivor_scan, transverse_directions,
    Probe, ProbeSearch,
};
use toric::{rat, Error, Point, Rational};

/// A polygon given only by its vertex cycle (counter-clockwise).
struct Polygon {
    verts: Vec<Point>,
}

impl Polygon {
    fn of(p: &DelzantPolytope) -> Self {
        let mut verts = p.vertices().to_vec();
        let n = verts.len() as f64;
        let cx = verts.iter().map(|v| v[0].to_f64()).sum::<f64>() / n;
        let cy = verts.iter().map(|v| v[1].to_f64()).sum::<f64>() / n;
        verts.sort_by(|a, b| {
            let ta = (a[1].to_f64() - cy).atan2(a[0].to_f64() - cx);
            let tb = (b[1].to_f64() - cy).atan2(b[0].to_f64() - cx);
            ta.partial_cmp(&tb).unwrap()
        });
        Polygon { verts }
    }

    fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.verts.len();
        (0..n).map(move |i| (&self.verts[i], &self.verts[(i + 1) % n]))
    }

    fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
        (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
    }

    fn strictly_inside(&self, x: &Point) -> bool {
        self.edges().all(|(a, b)| Self::cross(a, b, x).is_positive())
    }

    /// Parameter `s` with `x = a + s (b - a)` if `x` lies on the line through `a`, `b`.
    fn on_segment(a: &Point, b: &Point, x: &Point) -> Option<Rational> {
        if !Self::cross(a, b, x).is_zero() {
            return None;
        }
        let (dx, dy) = (&b[0] - &a[0], &b[1] - &a[1]);
        Some(if !dx.is_zero() { (&x[0] - &a[0]) / dx } else { (&x[1] - &a[1]) / dy })
    }

    /// The edge containing `x` in its relative interior.
    fn open_edge_of(&self, x: &Point) -> Option<(Point, Point)> {
        self.edges().find_map(|(a, b)| {
            let s = Self::on_segment(a, b, x)?;
            (s.is_positive() && s < rat(1, 1)).then(|| (a.clone(), b.clone()))
        })
    }

    /// Largest `t` with `base + t dir` on the boundary.
    fn exit(&self, base: &Point, dir: &[i64]) -> Rational {
        let (vx, vy) = (Rational::from(dir[0]), Rational::from(dir[1]));
        let mut best = Rational::zero();
        for (a, b) in self.edges() {
            // base + t v = a + s (b - a), solved by Cramer's rule
            let (ex, ey) = (&b[0] - &a[0], &b[1] - &a[1]);
            let det = &ex * &vy - &ey * &vx;
            if det.is_zero() {
                continue;
            }
            let (rx, ry) = (&a[0] - &base[0], &a[1] - &base[1]);
            let t = (&ex * &ry - &ey * &rx) / &det;
            let s = (&vx * &ry - &vy * &rx) / &det;
            if !s.is_negative() && s <= rat(1, 1) && t > best {
                best = t;
            }
        }
        best
    }
}

fn polygons() -> Vec<DelzantPolytope> {
    vec![
        simplex_cpn(2, rat(1, 1)).unwrap(),
        blowup_face(2, 0, rat(1, 8)).unwrap(),
        blowup_face(2, 0, rat(1, 2)).unwrap(),
        double_blowup(2, rat(1, 6)).unwrap(),
        hirzebruch_standard(1).unwrap(),
        hirzebruch_standard(2).unwrap(),
    ]
}

/// Independent survivor test: every facet edge, every transverse direction.
fn oracle_displaced(g: &Polygon, u: &Point, bound: u32) -> bool {
    let b = bound as i64;
    for (a, c) in g.edges() {
        let (ex, ey) = (&c[0] - &a[0], &c[1] - &a[1]);
        for v0 in -b..=b {
            for v1 in -b..=b {
                // integral transversality: the lattice area spanned by (edge, v) equals its lattice length
                let area = &ex * Rational::from(v1) - &ey * Rational::from(v0);
                if !area.is_positive() {
                    continue;
                }
                let len = lattice_length(&ex, &ey);
                if area != len {
                    continue;
                }
                // base = u - t v on the edge's line
                let dist = Polygon::cross(a, c, u) / &len;
                let base: Point = vec![&u[0] - &dist * Rational::from(v0), &u[1] - &dist * Rational::from(v1)];
                let Some(s) = Polygon::on_segment(a, c, &base) else { continue };
                if !(s.is_positive() && s < rat(1, 1)) {
                    continue;
                }
                let t_exit = g.exit(&base, &[v0, v1]);
                if dist.is_positive() && &dist * rat(2, 1) < t_exit {
                    return true;
                }
            }
        }
    }
    false
}

fn lattice_length(ex: &Rational, ey: &Rational) -> Rational {
    // the edge vector is a rational multiple of a primitive integer vector
    let l = num_integer::lcm(ex.denom().clone(), ey.denom().clone());
    let (a, b) = (
        (ex * Rational::from_bigint(l.clone())).to_i64().unwrap(),
        (ey * Rational::from_bigint(l.clone())).to_i64().unwrap(),
    );
    let g = num_integer::gcd(a, b);
    Rational::from(g) / Rational::from_bigint(l)
}

#[test]
fn scan_matches_vertex_oracle() {
    for poly in polygons() {
        let g = Polygon::of(&poly);
        for bound in [1, 2, 3] {
            for (u, cert) in scan(&poly, 12, bound) {
                assert!(g.strictly_inside(&u));
                let want = oracle_displaced(&g, &u, bound);
                assert_eq!(cert.is_some(), want, "{} at {u:?}, bound {bound}", poly.label());
            }
        }
    }
}

#[test]
fn certificates_check_against_vertex_geometry() {
    for poly in polygons() {
        let g = Polygon::of(&poly);
        for (u, cert) in scan(&poly, 16, 3) {
            let Some(c) = cert else { continue };
            assert_eq!(c.point(), u);
            assert!(g.open_edge_of(&c.probe.base).is_some(), "base not in an open edge");
            assert_eq!(g.exit(&c.probe.base, &c.probe.dir), c.t_exit);
            assert_eq!(probe_length(&poly, &c.probe).unwrap(), c.t_exit);
            assert!(c.t_point.is_positive() && &c.t_point * rat(2, 1) < c.t_exit);
            assert!(c.validate(&poly).is_ok());
        }
    }
}

#[test]
fn simplex_probe_lengths() {
    let d = simplex_cpn(2, rat(1, 1)).unwrap();
    let g = Polygon::of(&d);
    let f = d.facet_index(&[0, 1], &Rational::zero()).unwrap();
    for (bx, dir) in [((1, 2), [0, 1]), ((1, 4), [1, 1]), ((3, 4), [-1, 1]), ((1, 3), [-2, 1])] {
        let p = Probe { facet: f, base: vec![rat(bx.0, bx.1), rat(0, 1)], dir: dir.to_vec() };
        assert_eq!(probe_length(&d, &p).unwrap(), g.exit(&p.base, &p.dir));
    }
}

#[test]
fn probe_validation_errors() {
    let d = simplex_cpn(2, rat(1, 1)).unwrap();
    let f = d.facet_index(&[0, 1], &Rational::zero()).unwrap();
    // base at a vertex
    let p = Probe { facet: f, base: vec![rat(0, 1), rat(0, 1)], dir: vec![0, 1] };
    assert!(matches!(probe_length(&d, &p), Err(Error::InvalidProbe(_))));
    // not integrally transverse
    let p = Probe { facet: f, base: vec![rat(1, 2), rat(0, 1)], dir: vec![0, 2] };
    assert!(matches!(probe_length(&d, &p), Err(Error::InvalidProbe(_))));
    // boundary query
    assert!(matches!(
        find_displacing_probe(&d, &[rat(0, 1), rat(1, 2)], 2),
        Err(Error::PointNotInterior)
    ));
}

#[test]
fn displacement_is_strict_at_half_length() {
    let d = simplex_cpn(2, rat(1, 1)).unwrap();
    let f = d.facet_index(&[0, 1], &Rational::zero()).unwrap();
    let p = Probe { facet: f, base: vec![rat(1, 2), rat(0, 1)], dir: vec![0, 1] };
    // length 1/2: the midpoint (1/2, 1/4) is not displaced, anything lower is
    assert!(probe_displaces(&d, &p, &[rat(1, 2), rat(1, 4)]).unwrap().is_none());
    assert!(probe_displaces(&d, &p, &[rat(1, 2), rat(1, 5)]).unwrap().is_some());
    assert!(probe_displaces(&d, &p, &[rat(1, 3), rat(1, 5)]).unwrap().is_none());
}

#[test]
fn transverse_directions_pair_to_one() {
    for normal in [vec![1, 0], vec![-1, -1], vec![1, 1, 0], vec![-1, -2]] {
        let dirs = transverse_directions(&normal, 2);
        let mut seen = BTreeSet::new();
        for v in &dirs {
            assert_eq!(v.iter().zip(&normal).map(|(a, b)| a * b).sum::<i64>(), 1);
            assert!(v.iter().all(|c| c.abs() <= 2));
            assert!(seen.insert(v.clone()));
        }
        let brute = (0..5i64.pow(normal.len() as u32))
            .filter(|&code| {
                let mut c = code;
                let mut s = 0;
                for &x in &normal {
                    s += x * (c % 5 - 2);
                    c /= 5;
                }
                s == 1
            })
            .count();
        assert_eq!(dirs.len(), brute);
    }
}

#[test]
fn simplex_survivor_is_the_clifford_point() {
    let d = simplex_cpn(2, rat(1, 1)).unwrap();
    for grid in [6, 9, 15, 30] {
        assert_eq!(survivor_scan(&d, grid, 3), vec![vec![rat(1, 3), rat(1, 3)]]);
    }
    // off the 1/3 lattice nothing survives
    assert!(survivor_scan(&d, 10, 3).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn larger_bounds_displace_more(lam in 1i64..8, grid in 6u64..14) {
        let poly = blowup_face(2, 0, rat(lam, 8)).unwrap();
        let mut prev: Option<BTreeSet<Point>> = None;
        for b in 1..=3 {
            let cur: BTreeSet<Point> = survivor_scan(&poly, grid, b).into_iter().collect();
            if let Some(p) = &prev {
                prop_assert!(cur.is_subset(p));
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn find_agrees_with_probe_displaces(lam in 1i64..6, i in 1i64..20, j in 1i64..20) {
        let poly = blowup_face(2, 0, rat(lam, 6)).unwrap();
        let u = vec![rat(i, 20), rat(j, 20)];
        prop_assume!(poly.is_interior(&u));
        let found = ProbeSearch::new(&poly, 2).find(&u);
        if let Some(c) = found {
            let again = probe_displaces(&poly, &c.probe, &u).unwrap();
            prop_assert_eq!(again, Some(c));
        }
    }
}

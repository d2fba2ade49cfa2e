//! Cross-checks of the library against independent computations: brute-force
//! minimization, linear solves, sine-weighted incenters and synthetic data.

use std::f64::consts::{FRAC_PI_2, PI};

use noneuclid::identities::{
    chapple_euclidean, predict_d_hyperbolic, predict_d_spherical, residual_alabdullatif,
    residual_cn_spherical, residual_eq1, residual_eq2,
};
use noneuclid::report::evaluate;
use noneuclid::sampler::{sample, Family, SampleConfig};
use noneuclid::{
    analyze, point_to_geodesic, side_pole, AnyTriangle, EuclideanPoint, Geometry, HyperbolicPoint,
    ModelPoint, SphericalPoint, Triangle, Vec3,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn uniform(geometry: Geometry, count: usize, seed: u64) -> Vec<AnyTriangle<f64>> {
    sample::<f64>(&SampleConfig::new(geometry, Family::Uniform, count, seed)).unwrap()
}

fn spherical(ts: &[AnyTriangle<f64>]) -> Vec<Triangle<SphericalPoint<f64>>> {
    ts.iter()
        .map(|t| match t {
            AnyTriangle::Spherical(t) => *t,
            _ => unreachable!(),
        })
        .collect()
}

fn hyperbolic(ts: &[AnyTriangle<f64>]) -> Vec<Triangle<HyperbolicPoint<f64>>> {
    ts.iter()
        .map(|t| match t {
            AnyTriangle::Hyperbolic(t) => *t,
            _ => unreachable!(),
        })
        .collect()
}

/// Minimum of `f` on `[lo, hi]`: coarse grid, then golden-section refinement.
fn minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = 2000;
    let h = (hi - lo) / n as f64;
    let best = (0..=n)
        .map(|i| lo + i as f64 * h)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let (mut a, mut b) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f((a + b) / 2.0)
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = rhs[i];
        }
        *xk = det(mk) / d;
    }
    x
}

#[test]
fn spherical_point_to_geodesic_matches_brute_force() {
    for t in spherical(&uniform(Geometry::Spherical, 50, 11)) {
        let [a, b, c] = t.vertices();
        let side = side_pole(&a, &b, &c).unwrap();
        let (va, vb) = (a.vector(), b.vector());
        let w = vb - va * va.dot(&vb);
        let w = w * (1.0 / w.norm());
        let on_circle = |s: f64| SphericalPoint::normalize(va * s.cos() + w * s.sin()).unwrap();
        let brute = minimize(|s| c.distance(&on_circle(s)), 0.0, 2.0 * PI);
        let signed = point_to_geodesic(&c, &side);
        assert!(signed > 0.0);
        assert!((signed - brute).abs() < 1e-9, "{signed} vs {brute}");
    }
}

#[test]
fn hyperbolic_point_to_geodesic_matches_brute_force() {
    let n = noneuclid::GeodesicPole {
        n: Vec3::new(0.0, 0.0, 1.0),
        geometry: Geometry::Hyperbolic,
    };
    for &t in &[0.3, -1.2, 2.5] {
        let p = HyperbolicPoint::new(Vec3::new(f64::cosh(t), 0.0, f64::sinh(t))).unwrap();
        let brute = minimize(
            |s| {
                p.distance(&HyperbolicPoint::from_polar(
                    s.abs(),
                    if s < 0.0 { PI } else { 0.0 },
                ))
            },
            -10.0,
            10.0,
        );
        assert!((point_to_geodesic(&p, &n) - t).abs() < 1e-9);
        assert!((brute - t.abs()).abs() < 1e-9, "{brute} vs {t}");
    }
    for t in hyperbolic(&uniform(Geometry::Hyperbolic, 50, 12)) {
        let [a, b, c] = t.vertices();
        let side = side_pole(&a, &b, &c).unwrap();
        let (va, vb) = (a.vector(), b.vector());
        let u = vb + va * va.minkowski(&vb);
        let u = u * (1.0 / u.minkowski(&u).sqrt());
        let on_line =
            |s: f64| HyperbolicPoint::from_timelike(va * s.cosh() + u * s.sinh()).unwrap();
        let brute = minimize(|s| c.distance(&on_line(s)), -12.0, 12.0);
        let signed = point_to_geodesic(&c, &side);
        assert!(signed > 0.0);
        assert!((signed - brute).abs() < 1e-9, "{signed} vs {brute}");
    }
}

#[test]
fn euclidean_point_to_line_matches_brute_force() {
    for t in uniform(Geometry::Euclidean, 50, 13) {
        let AnyTriangle::Euclidean(t) = t else {
            unreachable!()
        };
        let [a, b, c] = t.vertices();
        let side = side_pole(&a, &b, &c).unwrap();
        let on_line =
            |s: f64| EuclideanPoint::new(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)).unwrap();
        let brute = minimize(|s| c.distance(&on_line(s)), -50.0, 50.0);
        assert!((point_to_geodesic(&c, &side) - brute).abs() < 1e-9);
    }
}

#[test]
fn circumcenters_agree_with_linear_solves() {
    for t in spherical(&uniform(Geometry::Spherical, 200, 21)) {
        let [a, b, c] = t.vertices().map(|p| p.vector().0);
        // The circumcenter is normal to the plane {x : x·v = 1} through the vertices.
        let x = solve3([a, b, c], [1.0; 3]);
        let o = SphericalPoint::normalize(Vec3(x)).unwrap();
        let rep = analyze(&t).unwrap();
        assert!(rep.circumcenter.distance(&o) < 1e-9);
        assert!((rep.circumradius - o.distance(&t.vertices()[0])).abs() < 1e-10);
    }
    for t in hyperbolic(&uniform(Geometry::Hyperbolic, 200, 22)) {
        let [a, b, c] = t.vertices().map(|p| p.vector().0);
        let j = |v: [f64; 3]| [-v[0], v[1], v[2]];
        // Equal Minkowski products with every vertex.
        let x = solve3([j(a), j(b), j(c)], [-1.0; 3]);
        let o = HyperbolicPoint::from_timelike(Vec3(x)).unwrap();
        let rep = analyze(&t).unwrap();
        assert!(rep.circumcenter.distance(&o) < 1e-8);
        assert!((rep.circumradius - o.distance(&t.vertices()[0])).abs() < 1e-10);
    }
    for t in uniform(Geometry::Euclidean, 200, 23) {
        let AnyTriangle::Euclidean(t) = t else {
            unreachable!()
        };
        let [a, b, c] = t.vertices();
        // |o|² − 2o·v = −|v|², differenced against a.
        let row = |p: &EuclideanPoint<f64>| {
            [
                2.0 * (p.x - a.x),
                2.0 * (p.y - a.y),
                (p.x * p.x + p.y * p.y) - (a.x * a.x + a.y * a.y),
            ]
        };
        let (r1, r2) = (row(&b), row(&c));
        let det = r1[0] * r2[1] - r1[1] * r2[0];
        let ox = (r1[2] * r2[1] - r1[1] * r2[2]) / det;
        let oy = (r1[0] * r2[2] - r1[2] * r2[0]) / det;
        let rep = analyze(&t).unwrap();
        let scale = rep.circumradius.max(1.0);
        assert!(
            (rep.circumcenter.x - ox).abs() < 1e-9 * scale
                && (rep.circumcenter.y - oy).abs() < 1e-9 * scale
        );
    }
}

#[test]
fn incenters_agree_with_sine_weighted_vertex_sums() {
    for t in spherical(&uniform(Geometry::Spherical, 200, 31)) {
        let [a, b, c] = t.vertices();
        let w = a.vector() * b.distance(&c).sin()
            + b.vector() * c.distance(&a).sin()
            + c.vector() * a.distance(&b).sin();
        let i = SphericalPoint::normalize(w).unwrap();
        assert!(analyze(&t).unwrap().incenter.distance(&i) < 1e-10);
    }
    for t in hyperbolic(&uniform(Geometry::Hyperbolic, 200, 32)) {
        let [a, b, c] = t.vertices();
        let w = a.vector() * b.distance(&c).sinh()
            + b.vector() * c.distance(&a).sinh()
            + c.vector() * a.distance(&b).sinh();
        let i = HyperbolicPoint::from_timelike(w).unwrap();
        assert!(analyze(&t).unwrap().incenter.distance(&i) < 1e-9);
    }
}

/// Golden-section minimum of a convex function on `[lo, hi]`, as `(argmin, min)`.
fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..120 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

/// Point of the hyperboloid with Klein-disk coordinates `k`.
fn klein(k: [f64; 2]) -> HyperbolicPoint<f64> {
    HyperbolicPoint::from_timelike(Vec3::new(1.0, k[0], k[1])).unwrap()
}

/// Minimizes the largest vertex distance by nested golden-section search in
/// Klein coordinates, where geodesics are chords and the objective is convex.
fn minimax_center(t: &Triangle<HyperbolicPoint<f64>>) -> (HyperbolicPoint<f64>, f64) {
    let f = |k: [f64; 2]| {
        let p = klein(k);
        t.vertices()
            .iter()
            .map(|v| p.distance(v))
            .fold(0.0, f64::max)
    };
    let lim = 1.0 - 1e-9;
    let inner = |k1: f64| {
        let w = (lim * lim - k1 * k1).max(0.0).sqrt();
        golden(|k2| f([k1, k2]), -w, w)
    };
    let (k1, radius) = golden(|k1| inner(k1).1, -lim, lim);
    (klein([k1, inner(k1).0]), radius)
}

#[test]
fn hyperbolic_circumcenter_minimizes_the_largest_vertex_distance() {
    let mut checked = 0;
    for t in hyperbolic(&uniform(Geometry::Hyperbolic, 100, 42)) {
        let rep = analyze(&t).unwrap();
        for v in t.vertices() {
            assert!((rep.circumcenter.distance(&v) - rep.circumradius).abs() < 1e-10);
        }
        // For an acute triangle the circumcenter is interior and is the minimax point.
        let [a, b, c] = t.vertices();
        let sides = [
            side_pole(&b, &c, &a),
            side_pole(&c, &a, &b),
            side_pole(&a, &b, &c),
        ];
        let interior = sides
            .iter()
            .all(|s| point_to_geodesic(&rep.circumcenter, s.as_ref().unwrap()) > 1e-3);
        if !interior {
            continue;
        }
        let (o, radius) = minimax_center(&t);
        assert!(
            (radius - rep.circumradius).abs() < 1e-9,
            "{radius} vs {}",
            rep.circumradius
        );
        assert!(o.distance(&rep.circumcenter) < 1e-6);
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} acute triangles");
}

#[test]
fn sampled_triangles_satisfy_every_identity() {
    for g in [Geometry::Spherical, Geometry::Hyperbolic] {
        for t in uniform(g, 2000, 55) {
            let ev = evaluate(&t).unwrap();
            let id = &ev.identities;
            assert!(id.thm2_residual.unwrap().raw.abs() < 1e-9);
            assert!(id.thm4_residual.unwrap().abs() < 1e-9);
            assert!(id.bridge_residual.unwrap().normalized().abs() < 1e-9);
            if g == Geometry::Hyperbolic {
                assert!(id.thm3_residual.unwrap().normalized().abs() < 1e-8);
                assert!(id.discriminant.unwrap() > 0.0);
            }
        }
    }
}

#[test]
fn equilateral_triangles_are_equality_cases() {
    for g in Geometry::ALL {
        let cfg = SampleConfig::new(g, Family::Equilateral, 20, 1);
        for t in sample::<f64>(&cfg).unwrap() {
            let ev = evaluate(&t).unwrap();
            let id = &ev.identities;
            assert!(ev.center_distance < 1e-10);
            assert!(id.inequality_slack.value.abs() < 1e-10);
            if let Some(r) = id.thm2_residual {
                assert!(r.raw.abs() < 1e-12);
            }
            if let Some(r) = id.thm3_residual {
                assert!(r.raw.abs() < 1e-10);
            }
            if g == Geometry::Hyperbolic {
                assert!((ev.circumradius.tanh() - 2.0 * ev.inradius.tanh()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn great_circle_triangles_satisfy_cho_naranjo() {
    let cfg = SampleConfig::new(Geometry::Spherical, Family::GreatCircle, 200, 4);
    for t in sample::<f64>(&cfg).unwrap() {
        let ev = evaluate(&t).unwrap();
        assert!(ev.right_angle_branch());
        let r = residual_cn_spherical(ev.circumradius, ev.inradius, ev.center_distance);
        assert!(r.raw.abs() < 1e-10);
        assert!(ev.center_distance.tan().abs() < 1e-6);
    }
}

#[test]
fn closed_forms_match_cho_naranjo_solutions() {
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    for _ in 0..10_000 {
        let (u, v): (f64, f64) = (rng.random(), rng.random());
        let big_r = 1e-3 + u * (FRAC_PI_2 - 2e-3);
        let r = v * (big_r.tan() / 2.0).atan();
        let d = ((big_r - r).sin().powi(2) - r.sin().powi(2) * big_r.cos().powi(2))
            .max(0.0)
            .sqrt()
            .asin();
        assert!((predict_d_spherical(big_r, r).unwrap() - d.tan()).abs() < 1e-8 * (1.0 + d.tan()));
        assert!(residual_eq1(big_r, r, d).normalized().abs() < 1e-9);

        let big_r = 1e-3 + u * 3.0;
        let r = v * (big_r.tanh() / 2.0).atanh();
        let d = ((big_r - r).sinh().powi(2) - r.sinh().powi(2) * big_r.cosh().powi(2))
            .max(0.0)
            .sqrt()
            .asinh();
        assert!((predict_d_hyperbolic(big_r, r).unwrap() - d.tanh()).abs() < 1e-8);
        assert!(residual_eq2(big_r, r, d).normalized().abs() < 1e-9);
    }
}

#[test]
fn small_triangles_approach_chapple_euler() {
    let tan_d = predict_d_spherical(0.02f64, 0.005).unwrap();
    let tanh_d = predict_d_hyperbolic(0.02f64, 0.005).unwrap();
    let flat = chapple_euclidean(0.02, 0.005).unwrap();
    assert!((tan_d.atan() - flat).abs() < 1e-5);
    assert!((tanh_d.atanh() - flat).abs() < 1e-5);

    assert!(
        residual_alabdullatif(0.02f64, 0.01, 0.0)
            .unwrap()
            .normalized()
            .abs()
            < 1e-6
    );
    // Euclidean data fed to the hyperbolic identity: the mismatch vanishes as s → 0.
    let res: Vec<f64> = [1e-1f64, 1e-2, 1e-3]
        .iter()
        .map(|&s| {
            let d = chapple_euclidean(2.5 * s, s).unwrap();
            residual_alabdullatif(2.5 * s, s, d)
                .unwrap()
                .normalized()
                .abs()
        })
        .collect();
    assert!(
        res[1] < 1e-6 && res[2] < res[1] / 50.0 && res[1] < res[0] / 50.0,
        "{res:?}"
    );
    for s in [1e-1f64, 1e-2, 1e-3] {
        let cfg =
            SampleConfig::new(Geometry::Hyperbolic, Family::FlatScaled, 5, 8).with_parameter(s);
        for t in sample::<f64>(&cfg).unwrap() {
            let id = evaluate(&t).unwrap().identities;
            assert!(id.thm3_residual.unwrap().normalized().abs() < 1e-6);
        }
    }
}

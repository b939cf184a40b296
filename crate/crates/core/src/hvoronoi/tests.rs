use super::*;
use crate::hquery::circumcenter3;
use crate::hypgeom::{klein_distance, klein_to_poincare};
use crate::klein_bisector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kp(x: f64, y: f64) -> KleinPoint {
    KleinPoint::new(x, y).unwrap()
}

/// Klein distance straight from its arccosh definition.
fn dist(p: Vec2, q: Vec2) -> f64 {
    let arg = (1.0 - p.dot(q)) / ((1.0 - p.norm_sq()) * (1.0 - q.norm_sq())).sqrt();
    arg.max(1.0).acosh()
}

fn random_disk_point(rng: &mut ChaCha8Rng, max_norm: f64) -> Vec2 {
    let r = max_norm * rng.gen_range(0.0f64..1.0).sqrt();
    Vec2::from_angle(rng.gen_range(0.0..TAU)) * r
}

fn random_sites(rng: &mut ChaCha8Rng, n: usize) -> Vec<KleinPoint> {
    (0..n)
        .map(|_| {
            let v = random_disk_point(rng, 0.95);
            kp(v.x, v.y)
        })
        .collect()
}

/// Sites whose distance to `x` is within `tol` of the minimum.
fn nearest_set(sites: &[KleinPoint], x: Vec2, tol: f64) -> Vec<usize> {
    let d: Vec<f64> = sites.iter().map(|s| dist(s.to_vec2(), x)).collect();
    let best = d.iter().copied().fold(f64::INFINITY, f64::min);
    (0..sites.len()).filter(|&i| d[i] <= best + tol).collect()
}

fn check_assignment(d: &HyperbolicVoronoiDiagram, rng: &mut ChaCha8Rng, samples: usize) {
    for _ in 0..samples {
        let x = random_disk_point(rng, 1.0 - 1e-9);
        let got = d.locate(x);
        let ok = nearest_set(d.sites(), x, 1e-9);
        assert!(
            ok.contains(&got),
            "{x:?}: got {got}, expected one of {ok:?}"
        );
    }
}

fn check_closure(d: &HyperbolicVoronoiDiagram) {
    for (site, cell) in d.cells().iter().enumerate() {
        assert!(!cell.is_empty(), "cell {site} is empty");
        for k in 0..cell.len() {
            let end = d.oriented_endpoints(cell[k]).1;
            let next = d.oriented_endpoints(cell[(k + 1) % cell.len()]).0;
            assert!(end.distance(next) < 1e-9, "cell {site} breaks at {k}");
        }
    }
}

#[test]
fn single_site_owns_the_disk() {
    let d = build_hyperbolic_voronoi(&[kp(0.2, -0.7)]).unwrap();
    assert_eq!(d.edges().len(), 1);
    assert_eq!(
        d.edges()[0],
        VoronoiEdge::BoundaryArc {
            site: 0,
            start_angle: 0.0,
            sweep: TAU
        }
    );
    check_closure(&d);
    assert_eq!(d.locate(Vec2::new(0.9, 0.0)), 0);
}

#[test]
fn two_sites_split_at_hyperbolic_midpoint() {
    let sites = [kp(0.5, 0.0), kp(0.0, 0.0)];
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    let chords: Vec<_> = d
        .edges()
        .iter()
        .filter(|e| matches!(e, VoronoiEdge::Chord { .. }))
        .collect();
    let arcs = d.edges().len() - chords.len();
    assert_eq!(chords.len(), 1);
    assert_eq!(arcs, 2);
    let x0 = (0.5f64.atanh() / 2.0).tanh();
    let (s, e) = chords[0].endpoints();
    assert!((s.x - x0).abs() < 1e-12 && (e.x - x0).abs() < 1e-12);
    assert!((s.norm() - 1.0).abs() < 1e-12 && (e.norm() - 1.0).abs() < 1e-12);
    check_closure(&d);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    check_assignment(&d, &mut rng, 10_000);
}

#[test]
fn three_symmetric_sites_meet_at_origin() {
    let sites: Vec<KleinPoint> = [90.0f64, 210.0, 330.0]
        .iter()
        .map(|deg| {
            let v = Vec2::from_angle(deg.to_radians()) * 0.3;
            kp(v.x, v.y)
        })
        .collect();
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    assert_eq!(d.vertices().len(), 1);
    assert!(d.vertices()[0].norm() < 1e-12);
    assert_eq!(d.adjacent_pairs().len(), 3);
    check_closure(&d);
}

#[test]
fn random_diagrams_match_distance_argmin() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [2, 3, 5, 12, 30, 50] {
        let sites = random_sites(&mut rng, n);
        let d = build_hyperbolic_voronoi(&sites).unwrap();
        check_closure(&d);
        check_assignment(&d, &mut rng, 2_000);
        for (i, s) in sites.iter().enumerate() {
            assert!(
                d.cell_contains(i, s.to_vec2(), 0.0),
                "site {i} outside its cell"
            );
        }
    }
}

#[test]
fn lattice_sites_with_vertices_on_the_rim_close_up() {
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..200);
        let mut cells = BTreeSet::new();
        for _ in 0..n {
            cells.insert((rng.gen_range(-7i32..=7), rng.gen_range(-7i32..=7)));
        }
        let sites: Vec<KleinPoint> = cells
            .into_iter()
            .map(|(x, y)| kp(f64::from(x) / 10.0, f64::from(y) / 10.0))
            .collect();
        let d = build_hyperbolic_voronoi(&sites).unwrap();
        check_closure(&d);
        check_assignment(&d, &mut rng, 200);
    }
}

#[test]
fn chords_lie_on_klein_bisectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sites = random_sites(&mut rng, 25);
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    for e in d.edges() {
        if let VoronoiEdge::Chord {
            sites: (i, j),
            start,
            end,
        } = *e
        {
            let line = klein_bisector(sites[i], sites[j]).unwrap();
            for k in 0..=10 {
                let x = start + (end - start) * (k as f64 / 10.0);
                assert!(line.eval(x).abs() < 1e-9);
            }
        }
    }
    for &v in d.vertices() {
        let near = nearest_set(&sites, v, 1e-8);
        assert!(near.len() >= 3, "vertex {v:?} touches {near:?}");
    }
}

#[test]
fn chords_are_perpendicular_to_site_geodesics() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sites = random_sites(&mut rng, 15);
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    for (i, j) in d.adjacent_pairs() {
        let (p, q) = (sites[i], sites[j]);
        let line = klein_bisector(p, q).unwrap();
        // where the bisector crosses the Klein segment p q
        let (a, b) = (p.to_vec2(), q.to_vec2());
        let t = line.eval(a) / (line.eval(a) - line.eval(b));
        let m = a + (b - a) * t;
        // full bisector chord, endpoints on the rim
        let h = (1.0 - line.foot().norm_sq()).sqrt();
        let (c0, c1) = (
            line.foot() - line.direction() * h,
            line.foot() + line.direction() * h,
        );
        let to_p = |v: Vec2| klein_to_poincare_raw(v);
        let bis = poincare_geodesic_raw(to_p(c0), to_p(c1)).unwrap();
        let link = poincare_geodesic(klein_to_poincare(p), klein_to_poincare(q)).unwrap();
        let mp = to_p(m);
        let dot = bis.tangent_at(mp).dot(link.tangent_at(mp));
        assert!(dot.abs() < 1e-6, "pair ({i}, {j}): {dot}");
    }
}

#[test]
fn weighted_with_zero_weights_matches_unweighted() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sites = random_sites(&mut rng, 20);
    let a = build_hyperbolic_voronoi(&sites).unwrap();
    let b = build_weighted_voronoi(&sites, &[0.0; 20]).unwrap();
    assert_eq!(a.edges(), b.edges());
    assert_eq!(a.cells(), b.cells());
    assert_eq!(
        build_weighted_voronoi(&sites, &[0.0; 3]).unwrap_err(),
        Error::LengthMismatch {
            expected: 20,
            actual: 3
        }
    );
}

#[test]
fn added_weight_shifts_the_chord() {
    let sites = [kp(0.5, 0.0), kp(0.0, 0.0)];
    let d = build_weighted_voronoi(&sites, &[0.0, 0.2]).unwrap();
    // equal power: |x - c0|^2 - w0 = |x|^2 - w1 with c1 = 0
    let s = (0.75f64).sqrt();
    let (c0, w0, w1) = (0.5 / (2.0 * s), 0.25 / 3.0 - 1.0 / s, -1.0 + 0.2);
    let expected = (c0 * c0 - w0 + w1) / (2.0 * c0);
    assert!((expected - 0.614359).abs() < 1e-6);
    let chord = d
        .edges()
        .iter()
        .find_map(|e| match *e {
            VoronoiEdge::Chord { start, end, .. } => Some((start, end)),
            _ => None,
        })
        .unwrap();
    assert!((chord.0.x - expected).abs() < 1e-12 && (chord.1.x - expected).abs() < 1e-12);
    check_closure(&d);
}

#[test]
fn weighted_locate_matches_power_argmin() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sites = random_sites(&mut rng, 15);
    let added: Vec<f64> = (0..15).map(|_| rng.gen_range(-0.3..0.3)).collect();
    let d = build_weighted_voronoi(&sites, &added).unwrap();
    for _ in 0..1000 {
        let x = random_disk_point(&mut rng, 1.0 - 1e-9);
        let power: Vec<f64> = sites
            .iter()
            .zip(&added)
            .enumerate()
            .map(|(i, (&p, &w))| {
                let s = site_to_power(p, i);
                (x - s.center).norm_sq() - s.weight - w
            })
            .collect();
        let best = power.iter().copied().fold(f64::INFINITY, f64::min);
        let got = d.locate(x);
        assert!(power[got] <= best + 1e-9);
    }
}

#[test]
fn heavily_weighted_site_can_miss_the_disk() {
    let sites = [kp(0.0, 0.0), kp(0.9, 0.0)];
    let d = build_weighted_voronoi(&sites, &[50.0, 0.0]).unwrap();
    assert!(d.cells()[1].is_empty());
    assert_eq!(d.cells()[0].len(), 1);
    check_assignment_weighted_full(&d);
}

fn check_assignment_weighted_full(d: &HyperbolicVoronoiDiagram) {
    for k in 0..100 {
        let x = Vec2::from_angle(k as f64) * 0.99;
        assert_eq!(d.locate(x), 0);
    }
}

#[test]
fn duplicate_sites_share_a_cell() {
    let sites = [kp(0.1, 0.2), kp(-0.4, 0.3), kp(0.1, 0.2), kp(0.0, -0.5)];
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    assert!(d.cells()[2].is_empty());
    assert_eq!(d.locate(Vec2::new(0.1, 0.2)), 0);
}

#[test]
fn delaunay_triangles_have_empty_circumballs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let sites = random_sites(&mut rng, 10);
        let tri = hyperbolic_delaunay(&sites).unwrap();
        let d = build_hyperbolic_voronoi(&sites).unwrap();
        for t in &tri.triangles {
            let [a, b, c] = t.map(|i| sites[i]);
            let Some(center) = circumcenter3(a, b, c).unwrap() else {
                continue;
            };
            let r = klein_distance(center, a);
            for (k, s) in sites.iter().enumerate() {
                if !t.contains(&k) {
                    assert!(klein_distance(center, *s) - r > -1e-9);
                }
            }
        }
        assert_eq!(&d.adjacent_pairs(), tri.edges());
        let all = tri.regular.triangles.len();
        assert!(tri.triangles.len() <= all);
        for t in &tri.regular.triangles {
            let [a, b, c] = t.map(|i| sites[i]);
            let inside = circumcenter3(a, b, c).unwrap().is_some();
            assert_eq!(tri.triangles.contains(t), inside);
        }
    }
    let tri = hyperbolic_delaunay(&[kp(0.1, 0.0), kp(0.0, 0.3), kp(-0.2, -0.2)]).unwrap();
    assert_eq!(tri.triangles.len(), 1);
    assert!(hyperbolic_delaunay(&[kp(0.1, 0.0), kp(0.2, 0.0)]).is_err());
    assert!(hyperbolic_delaunay(&[kp(0.1, 0.1), kp(0.2, 0.2), kp(-0.3, -0.3)]).is_err());
}

#[test]
fn geodesic_examples() {
    let g = poincare_geodesic(
        PoincarePoint::new(0.5, 0.0).unwrap(),
        PoincarePoint::new(0.0, 0.5).unwrap(),
    )
    .unwrap();
    match g {
        GeodesicArc::Arc { center, radius, .. } => {
            assert!(center.distance(Vec2::new(1.25, 1.25)) < 1e-12);
            assert!((radius - 2.125f64.sqrt()).abs() < 1e-12);
        }
        other => panic!("expected an arc, got {other:?}"),
    }
    assert!((g.point_at(1.0) - Vec2::new(0.0, 0.5)).norm() < 1e-12);
    let g = poincare_geodesic(
        PoincarePoint::new(0.5, 0.0).unwrap(),
        PoincarePoint::new(-0.5, 0.0).unwrap(),
    )
    .unwrap();
    assert!(matches!(g, GeodesicArc::Diameter { direction, .. } if direction.y == 0.0));
    let p = PoincarePoint::new(0.3, 0.3).unwrap();
    assert_eq!(
        poincare_geodesic(p, p).unwrap_err(),
        Error::CoincidentPoints
    );
}

#[test]
fn geodesic_circles_are_orthogonal_to_the_rim() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let (a, b) = (
            random_disk_point(&mut rng, 0.99),
            random_disk_point(&mut rng, 0.99),
        );
        let g = poincare_geodesic_raw(a, b).unwrap();
        if let GeodesicArc::Arc {
            center,
            radius,
            sweep,
            ..
        } = g
        {
            assert!((center.norm_sq() - 1.0 - radius * radius).abs() < 1e-9 * center.norm_sq());
            assert!(sweep.abs() < PI);
            assert!(g.point_at(1.0).distance(b) < 1e-9 * (1.0 + radius));
            // the arc stays inside the disk
            assert!(g.point_at(0.5).norm() < 1.0);
        }
    }
}

#[test]
fn klein_scene_is_straight() {
    let d = build_hyperbolic_voronoi(&[kp(0.5, 0.0), kp(0.0, 0.0)]).unwrap();
    let scene = render_scene(&d, Model::Klein);
    assert_eq!(scene.edges.len(), d.edges().len());
    let x0 = (0.5f64.atanh() / 2.0).tanh();
    let segments: Vec<_> = scene
        .edges
        .iter()
        .flat_map(|e| &e.pieces)
        .filter_map(|p| match *p {
            Primitive::Segment { start, end } => Some((start, end)),
            _ => None,
        })
        .collect();
    assert_eq!(segments.len(), 1);
    assert!((segments[0].0.x - x0).abs() < 1e-12);
}

#[test]
fn poincare_scene_keeps_ideal_endpoints() {
    let d = build_hyperbolic_voronoi(&[kp(0.5, 0.0), kp(0.0, 0.0)]).unwrap();
    let scene = render_scene(&d, Model::Poincare);
    for (edge, drawn) in d.edges().iter().zip(&scene.edges) {
        if let VoronoiEdge::Chord { start, end, .. } = *edge {
            let Primitive::Arc { center, radius, .. } = drawn.pieces[0] else {
                panic!("chord should render as an arc");
            };
            assert!((center.norm_sq() - 1.0 - radius * radius).abs() < 1e-9);
            assert!(drawn.pieces[0].point_at(0.0).distance(start) < 1e-9);
            assert!(drawn.pieces[0].point_at(1.0).distance(end) < 1e-9);
        }
    }
}

#[test]
fn halfplane_scene_stays_in_upper_half() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sites = random_sites(&mut rng, 12);
    // a site whose cell reaches the pole of the half-plane map
    sites.push(kp(0.9, 0.0));
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    let scene = render_scene(&d, Model::HalfPlane);
    for (edge, drawn) in d.edges().iter().zip(&scene.edges) {
        for piece in &drawn.pieces {
            for k in 0..=20 {
                let w = piece.point_at(k as f64 / 20.0);
                assert!(w.y > -1e-9, "{piece:?}");
                if matches!(edge, VoronoiEdge::BoundaryArc { .. }) {
                    assert!(w.y.abs() < 1e-9);
                }
            }
        }
    }
    for s in &scene.sites {
        assert!(s.y > 0.0);
    }
}

#[test]
fn halfplane_chord_images_are_geodesics() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sites = random_sites(&mut rng, 10);
    let d = build_hyperbolic_voronoi(&sites).unwrap();
    let scene = render_scene(&d, Model::HalfPlane);
    for drawn in &scene.edges {
        if drawn.sites.len() != 2 {
            continue;
        }
        match drawn.pieces[0] {
            // semicircles centered on the real axis
            Primitive::Arc { center, .. } => {
                assert!(center.y.abs() < 1e-9 * (1.0 + center.x.abs()))
            }
            // or vertical lines
            Primitive::Segment { start, end } => assert!((start.x - end.x).abs() < 1e-9),
            Primitive::Line { direction, .. } => assert!(direction.x.abs() < 1e-9),
        }
    }
}

#[test]
fn rim_arcs_split_at_the_pole() {
    let pieces = rim_image(1.5 * PI, PI);
    assert_eq!(pieces.len(), 2);
    assert!(matches!(
        pieces[0],
        Primitive::Line {
            t_start: Some(_),
            t_end: None,
            ..
        }
    ));
    assert!(matches!(
        pieces[1],
        Primitive::Line {
            t_start: None,
            t_end: Some(_),
            ..
        }
    ));
    assert_eq!(rim_image(0.0, TAU).len(), 1);
    // the lower half of the rim is the segment [-1, 1]
    let Primitive::Segment { start, end } = rim_image(PI, 0.5 * PI)[0] else {
        panic!()
    };
    assert!((start.x).abs() < 1e-12 && (end.x - 1.0).abs() < 1e-12);
}

#[test]
fn model_names_round_trip() {
    for m in [Model::Klein, Model::Poincare, Model::HalfPlane] {
        assert_eq!(m.as_str().parse::<Model>().unwrap(), m);
        assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
    }
    assert!("hyperboloid".parse::<Model>().is_err());
}

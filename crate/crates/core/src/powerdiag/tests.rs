use super::*;
use crate::bisector::{power_bisector, site_to_power};
use crate::KleinPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn site(x: f64, y: f64, w: f64, i: usize) -> PowerSite {
    PowerSite::new(Vec2::new(x, y), w, i).unwrap()
}

fn brute_argmin(sites: &[PowerSite], x: Vec2) -> usize {
    let mut best = 0;
    for i in 1..sites.len() {
        if sites[i].power(x) < sites[best].power(x) {
            best = i;
        }
    }
    best
}

fn random_sites(rng: &mut ChaCha8Rng, n: usize) -> Vec<PowerSite> {
    (0..n)
        .map(|i| {
            site(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.3..0.3),
                i,
            )
        })
        .collect()
}

fn klein_sites(rng: &mut ChaCha8Rng, n: usize) -> Vec<PowerSite> {
    (0..n)
        .map(|i| {
            let r = rng.gen_range(0.0f64..0.95).sqrt();
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            site_to_power(KleinPoint::new(r * t.cos(), r * t.sin()).unwrap(), i)
        })
        .collect()
}

/// Pairs of cells sharing an edge of positive length, found independently:
/// along the radical line of `i` and `j`, each constraint `power_i <= power_m`
/// is linear in the line parameter, so the shared stretch is an interval.
fn brute_adjacency(sites: &[PowerSite]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            let Ok(line) = power_bisector(&sites[i], &sites[j]) else {
                continue;
            };
            let (foot, dir) = (line.foot(), line.direction());
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for m in (0..sites.len()).filter(|&m| m != i && m != j) {
                // g(t) = power_i - power_m at foot + t * dir
                let g0 = sites[i].power(foot) - sites[m].power(foot);
                let slope = sites[i].power(foot + dir) - sites[m].power(foot + dir) - g0;
                if slope.abs() < 1e-14 {
                    if g0 > 0.0 {
                        lo = f64::INFINITY;
                    }
                } else if slope > 0.0 {
                    hi = hi.min(-g0 / slope);
                } else {
                    lo = lo.max(-g0 / slope);
                }
            }
            if hi - lo > 1e-9 {
                out.insert((i, j));
            }
        }
    }
    out
}

#[test]
fn single_site_covers_plane() {
    let d = build_power_diagram(&[site(0.3, 0.1, 0.2, 0)]).unwrap();
    assert!(d.edges().is_empty());
    assert!(d.vertices().is_empty());
    assert!(d.cell_contains(0, Vec2::new(100.0, -40.0), 0.0));
    assert_eq!(d.locate_cell(Vec2::new(5.0, 5.0)), 0);
}

#[test]
fn empty_input_rejected() {
    assert_eq!(build_power_diagram(&[]).unwrap_err(), Error::EmptyInput);
}

#[test]
fn two_sites_split_by_perpendicular_bisector() {
    let sites = [site(0.5, 0.0, 0.1, 0), site(-0.5, 0.0, 0.1, 1)];
    let d = build_power_diagram(&sites).unwrap();
    assert_eq!(d.edges().len(), 1);
    let e = &d.edges()[0];
    assert_eq!(e.kind, EdgeKind::Line);
    assert!(e.origin.x.abs() < 1e-15);
    assert!(e.direction.x.abs() < 1e-15);
    assert!(d.cell_contains(0, Vec2::new(0.1, 3.0), 0.0));
    assert!(!d.cell_contains(0, Vec2::new(-0.1, 3.0), 0.0));
    assert!(d.triangulation().is_none());
    assert!(regular_triangulation(&sites).is_err());

    assert_eq!(d.locate_cell(Vec2::new(0.1, 0.0)), 0);
    assert_eq!(d.locate_cell(Vec2::new(-0.1, 0.0)), 1);
    // exact tie goes to the lower index
    assert_eq!(d.locate_cell(Vec2::ZERO), 0);
    let swapped = build_power_diagram(&[sites[1], sites[0]]).unwrap();
    assert_eq!(swapped.locate_cell(Vec2::ZERO), 0);
}

#[test]
fn three_symmetric_klein_sites_meet_at_origin() {
    let sites: Vec<PowerSite> = [90.0f64, 210.0, 330.0]
        .iter()
        .enumerate()
        .map(|(i, deg)| {
            let t = deg.to_radians();
            site_to_power(KleinPoint::new(0.3 * t.cos(), 0.3 * t.sin()).unwrap(), i)
        })
        .collect();
    let d = build_power_diagram(&sites).unwrap();
    assert_eq!(d.vertices().len(), 1);
    assert!(d.vertices()[0].norm() < 1e-12);
    assert_eq!(d.edges().len(), 3);
    assert!(d.edges().iter().all(|e| e.kind == EdgeKind::Ray));
    let tri = d.triangulation().unwrap();
    assert_eq!(tri.triangles.len(), 1);

    // brute-force agreement on a 100 x 100 grid
    for gx in 0..100 {
        for gy in 0..100 {
            let x = Vec2::new(
                -1.0 + 0.02 * gx as f64 + 0.01,
                -1.0 + 0.02 * gy as f64 + 0.01,
            );
            let owner = brute_argmin(&sites, x);
            assert_eq!(d.locate_cell(x), owner);
            assert!(d.cell_contains(owner, x, 1e-9));
        }
    }
}

#[test]
fn cocircular_square_uses_documented_diagonal() {
    let sites = [
        site(0.4, 0.0, 0.0, 0),
        site(-0.4, 0.0, 0.0, 1),
        site(0.0, 0.4, 0.0, 2),
        site(0.0, -0.4, 0.0, 3),
    ];
    let tri = regular_triangulation(&sites).unwrap();
    assert_eq!(tri.triangles.len(), 2);
    // The highest index is treated as carrying the largest weight, so the
    // diagonal runs from site 3 to the site opposite it.
    assert!(tri.edges().contains(&(2, 3)));
    assert!(!tri.edges().contains(&(0, 1)));

    // The diagram itself has a single vertex and no zero-length edge.
    let d = build_power_diagram(&sites).unwrap();
    assert_eq!(d.vertices().len(), 1);
    assert!(d.vertices()[0].norm() < 1e-12);
    assert_eq!(d.edges().len(), 4);
}

#[test]
fn three_sites_give_one_triangle() {
    let sites = [
        site(0.0, 0.0, 0.0, 0),
        site(1.0, 0.0, 0.0, 1),
        site(0.0, 1.0, 0.1, 2),
    ];
    let tri = regular_triangulation(&sites).unwrap();
    assert_eq!(tri.triangles.len(), 1);
    assert_eq!(tri.vertices, vec![0, 1, 2]);
}

#[test]
fn collinear_sites_form_strips() {
    let sites: Vec<PowerSite> = (0..5).map(|i| site(i as f64 * 0.2, 0.4, 0.0, i)).collect();
    let d = build_power_diagram(&sites).unwrap();
    assert_eq!(d.edges().len(), 4);
    assert!(d.edges().iter().all(|e| e.kind == EdgeKind::Line));
    assert!(matches!(
        regular_triangulation(&sites),
        Err(Error::Degenerate(_))
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let x = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let owner = brute_argmin(&sites, x);
        assert!(d.cell_contains(owner, x, 1e-9));
    }
}

#[test]
fn collinear_site_with_small_weight_is_empty() {
    let sites = [
        site(0.0, 0.0, 0.0, 0),
        site(0.5, 0.0, -1.0, 1),
        site(1.0, 0.0, 0.0, 2),
    ];
    let d = build_power_diagram(&sites).unwrap();
    assert!(d.is_empty_cell(1));
    assert_eq!(d.edges().len(), 1);
    assert_eq!(d.edges()[0].sites, (0, 2));
}

#[test]
fn buried_site_gets_empty_cell() {
    let sites = [
        site(0.0, 0.0, 1.0, 0),
        site(1.0, 0.0, 1.0, 1),
        site(0.0, 1.0, 1.0, 2),
        site(0.3, 0.3, -0.5, 3),
        site(1.0, 1.0, 1.0, 4),
    ];
    let d = build_power_diagram(&sites).unwrap();
    assert!(d.is_empty_cell(3));
    assert!(d.cells()[3].is_empty());
    assert!(!d.triangulation().unwrap().vertices.contains(&3));
    for k in 0..400 {
        let x = Vec2::new((k % 20) as f64 * 0.1 - 0.5, (k / 20) as f64 * 0.1 - 0.5);
        assert_ne!(d.locate_cell(x), 3);
    }
}

#[test]
fn duplicate_centers_collapse() {
    let sites = [
        site(0.1, 0.1, 0.0, 0),
        site(0.5, 0.1, 0.0, 1),
        site(0.1, 0.1, 0.2, 2),
        site(0.3, 0.6, 0.0, 3),
        site(0.5, 0.1, 0.0, 4),
    ];
    let d = build_power_diagram(&sites).unwrap();
    assert!(d.is_empty_cell(0));
    assert!(!d.is_empty_cell(2));
    assert_eq!(d.representative(0), 2);
    assert!(d.is_empty_cell(4));
    assert_eq!(d.representative(4), 1);
    assert_eq!(d.locate_cell(Vec2::new(0.1, 0.1)), 2);
    assert_eq!(d.locate_cell(Vec2::new(0.6, 0.0)), 1);
}

#[test]
fn locate_matches_naive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let sites = random_sites(&mut rng, 50);
    let d = build_power_diagram(&sites).unwrap();
    for _ in 0..1000 {
        let x = Vec2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        assert_eq!(d.locate_cell(x), brute_argmin(&sites, x));
    }
}

fn check_structure(sites: &[PowerSite], d: &PowerDiagram, rng: &mut ChaCha8Rng) {
    // locate / structure consistency
    for _ in 0..1000 {
        let x = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let owner = d.locate_cell(x);
        assert!(d.cell_contains(owner, x, 1e-9), "{x:?} not in cell {owner}");
        for other in 0..sites.len() {
            if other != owner && d.cell_contains(other, x, -1e-9) {
                panic!("{x:?} strictly inside {other} but owned by {owner}");
            }
        }
    }
    // edges lie on radical lines
    for e in d.edges() {
        let line = power_bisector(&sites[e.sites.0], &sites[e.sites.1]).unwrap();
        let (lo, hi) = match (e.t_start.is_finite(), e.t_end.is_finite()) {
            (true, true) => (e.t_start, e.t_end),
            (true, false) => (e.t_start, e.t_start + 10.0),
            (false, true) => (e.t_end - 10.0, e.t_end),
            (false, false) => (-10.0, 10.0),
        };
        for k in 1..10 {
            let x = e.point_at(lo + (hi - lo) * k as f64 / 10.0);
            assert!(line.eval(x).abs() < 1e-9);
        }
        // cell of sites.0 is to the left
        let probe = e.point_at(if e.t_end.is_finite() && e.t_start.is_finite() {
            0.5 * (e.t_start + e.t_end)
        } else if e.t_start.is_finite() {
            e.t_start + 1.0
        } else {
            e.t_end - 1.0
        }) + e.direction.perp() * 1e-7;
        assert!(
            sites[e.sites.0].power(probe) <= sites[e.sites.1].power(probe),
            "orientation of edge {:?}",
            e.sites
        );
    }
    // vertices are equi-power
    if let Some(tri) = d.triangulation() {
        for t in &tri.triangles {
            let v = power_center(sites, *t);
            let p: Vec<f64> = t.iter().map(|&i| sites[i].power(v)).collect();
            assert!((p[0] - p[1]).abs() < 1e-8 && (p[0] - p[2]).abs() < 1e-8);
            let best = (0..sites.len())
                .map(|i| sites[i].power(v))
                .fold(f64::INFINITY, f64::min);
            assert!(p[0] <= best + 1e-8);
        }
        // duality with cell adjacency
        assert_eq!(tri.edges(), d.adjacent_pairs());
        assert_eq!(tri.edges(), brute_adjacency(sites));
        // Euler on the compactified subdivision
        let rays = d.edges().iter().any(|e| e.kind == EdgeKind::Ray);
        let v = d.vertices().len() as i64 + rays as i64;
        let e = d.edges().len() as i64;
        let f = d.empty_cell_flags().iter().filter(|&&x| !x).count() as i64;
        assert_eq!(v - e + f, 2);
        assert!(tri.edges().len() <= 3 * tri.vertices.len() - 3);
    }
}

#[test]
fn structure_invariants_on_random_weighted_sites() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [4, 5, 8, 13, 20, 35] {
        let sites = random_sites(&mut rng, n);
        let d = build_power_diagram(&sites).unwrap();
        check_structure(&sites, &d, &mut rng);
    }
}

#[test]
fn structure_invariants_on_klein_sites() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [4, 6, 20, 40] {
        let sites = klein_sites(&mut rng, n);
        let d = build_power_diagram(&sites).unwrap();
        assert!(d.empty_cell_flags().iter().all(|&e| !e));
        check_structure(&sites, &d, &mut rng);
    }
}

#[test]
fn triangulation_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let sites = random_sites(&mut rng, 20);
    let tri = regular_triangulation(&sites).unwrap();
    for (t, tr) in tri.triangles.iter().enumerate() {
        let [a, b, c] = tr.map(|i| sites[i].center);
        assert!((b - a).cross(c - a) > 0.0);
        for k in 0..3 {
            if let Some(u) = tri.adjacency[t][k] {
                let (p, q) = (tr[k], tr[(k + 1) % 3]);
                let other = &tri.triangles[u];
                let back = (0..3).find(|&m| other[m] == q && other[(m + 1) % 3] == p);
                assert!(back.is_some());
                assert_eq!(tri.adjacency[u][back.unwrap()], Some(t));
            }
        }
    }
}

#[test]
fn dense_grid_with_equal_weights() {
    // Many cocircular quadruples: every tie goes through the perturbation.
    let mut sites = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            sites.push(site(i as f64 * 0.1, j as f64 * 0.1, 0.0, sites.len()));
        }
    }
    let d = build_power_diagram(&sites).unwrap();
    let tri = d.triangulation().unwrap();
    assert_eq!(tri.triangles.len(), 2 * 7 * 7);
    assert!(d.empty_cell_flags().iter().all(|&e| !e));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..2000 {
        let x = Vec2::new(rng.gen_range(-0.5..1.2), rng.gen_range(-0.5..1.2));
        let owner = d.locate_cell(x);
        assert!(d.cell_contains(owner, x, 1e-9));
    }
    let rays = d.edges().iter().any(|e| e.kind == EdgeKind::Ray) as i64;
    let f = sites.len() as i64;
    assert_eq!(
        d.vertices().len() as i64 + rays - d.edges().len() as i64 + f,
        2
    );
}

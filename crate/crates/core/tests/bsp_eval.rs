mod common;

use boxpp::ratlinalg::to_f64;
use boxpp::{build_bsp, build_ppform, catalog, enumerate_regions, BspTree, Rational};
use common::{box_points, off_mesh_points, rational_points, rng};
use num_traits::Zero;

#[test]
fn leaf_counts_match_regions() {
    for (name, xi, centered) in catalog::examples() {
        let tree = build_bsp(&xi, centered).unwrap();
        let regions = enumerate_regions(&xi, centered).unwrap();
        assert_eq!(tree.leaf_count(), regions.len(), "{name}");
        let planes = boxpp::knot_planes(&xi).len();
        assert!(tree.depth() <= planes, "{name}: depth {} > {planes}", tree.depth());
    }
}

#[test]
fn zp_depth_bound() {
    let tree = build_bsp(&catalog::zwart_powell(), true).unwrap();
    assert_eq!(tree.leaf_count(), 28);
    assert!(tree.depth() <= 9);
}

/// Exact traversal equals the containing region's polynomial at random
/// rational points, and vanishes outside the support.
#[test]
fn exact_agreement_with_regions() {
    let mut r = rng(21);
    for (name, xi, centered) in catalog::examples().into_iter().filter(|e| e.1.rows() == 2) {
        let pp = build_ppform(&xi, centered).unwrap();
        let tree = build_bsp(&xi, centered).unwrap();
        for x in rational_points(&pp.support, 1000, 64, &mut r) {
            let value = tree.eval_exact(&x);
            match pp.locate(&x) {
                Some(i) => assert_eq!(value, pp.regions[i].poly.eval(&x), "{name} at {x:?}"),
                None if !pp.support.contains(&x) => assert!(value.is_zero(), "{name} at {x:?}"),
                None => {}
            }
        }
    }
}

#[test]
fn zp_matches_distributional_form() {
    let mut r = rng(22);
    let pp = build_ppform(&catalog::zwart_powell(), true).unwrap();
    let tree = build_bsp(&catalog::zwart_powell(), true).unwrap();
    for x in rational_points(&pp.support, 50, 16, &mut r) {
        if let Ok(v) = pp.eval_distributional(&x) {
            assert_eq!(tree.eval_exact(&x), v, "{x:?}");
        }
    }
}

#[test]
fn float_paths_agree() {
    let mut r = rng(23);
    for (name, xi, centered) in catalog::examples() {
        let tree = build_bsp(&xi, centered).unwrap();
        let compiled = tree.compile();
        for x in box_points(&tree.support, 300, 0.5, &mut r) {
            let a = tree.eval(&x);
            let b = compiled.eval(&x);
            assert!(a.is_finite() && (a - b).abs() < 1e-13, "{name} at {x:?}: {a} vs {b}");
        }
    }
}

#[test]
fn total_and_zero_outside() {
    let tree = build_bsp(&catalog::skewed(), true).unwrap();
    for x in [[100.0, 100.0], [-1e300, 3.0], [0.0, 0.0], [f64::MAX, f64::MIN]] {
        assert!(tree.eval(&x).is_finite());
    }
    assert_eq!(tree.eval(&[100.0, 100.0]), 0.0);
}

#[test]
fn on_plane_points_use_a_neighbour() {
    let tree = build_bsp(&catalog::courant(), false).unwrap();
    assert_eq!(tree.eval_exact(&[Rational::from_integer(1.into()), Rational::from_integer(1.into())]), Rational::from_integer(1.into()));
    assert_eq!(tree.eval(&[1.0, 1.0]), 1.0);
}

#[test]
fn json_is_stable() {
    let a = build_bsp(&catalog::zwart_powell(), true).unwrap().to_json();
    let b = build_bsp(&catalog::zwart_powell(), true).unwrap().to_json();
    assert_eq!(a, b);
    assert_eq!(BspTree::from_json(&a).unwrap().to_json(), a);
}

#[test]
fn interior_values_are_positive() {
    let mut r = rng(24);
    let pp = build_ppform(&catalog::fcc(), false).unwrap();
    let tree = build_bsp(&catalog::fcc(), false).unwrap();
    for x in off_mesh_points(&pp, 100, 1e-6, &mut r) {
        assert!(tree.eval(&x) > 0.0, "{x:?}");
    }
    let c: Vec<f64> = pp.regions[0].region.center.iter().map(to_f64).collect();
    assert!(tree.eval(&c) > 0.0);
}

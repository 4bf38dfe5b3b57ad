//! Tests for the planar zero finder: winding numbers, the multi-start Newton
//! search with argument-principle completeness, degenerate-point handling, and
//! the full cross-validation against the ray decomposition.

mod common;

use hv_core::{
    build_standard, cross_validate, find_zeros, winding_number, winding_on_circle, Complex64,
    ComplexPoly, DegenerateAnnotation, Error, HarmonicMap, SearchRegion,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity_map() -> HarmonicMap {
    HarmonicMap::new(ComplexPoly::monomial(c(1.0, 0.0), 1), ComplexPoly::zero()).unwrap()
}

// ---------------------------------------------------------------------------
// Winding numbers
// ---------------------------------------------------------------------------

#[test]
fn winding_of_identity_on_unit_square() {
    let f = identity_map();
    let region = SearchRegion::new(c(0.0, 0.0), 1.0, 8.0).unwrap();
    assert_eq!(winding_number(&f, &region).unwrap(), 1);
    // The Jacobian of z ↦ z is the identity everywhere.
    let jac = f.jacobian(c(0.3, -0.7));
    assert_eq!(
        (jac.du_dx, jac.du_dy, jac.dv_dx, jac.dv_dy, jac.det),
        (1.0, 0.0, 0.0, 1.0, 1.0)
    );
}

#[test]
fn winding_of_cube_counts_multiplicity() {
    let f = HarmonicMap::new(ComplexPoly::monomial(c(1.0, 0.0), 3), ComplexPoly::zero()).unwrap();
    let region = SearchRegion::new(c(0.0, 0.0), 1.0, 8.0).unwrap();
    assert_eq!(winding_number(&f, &region).unwrap(), 3);
}

#[test]
fn winding_of_standard_family_equals_analytic_degree() {
    let map = build_standard(12).unwrap();
    let region = SearchRegion::standard(12);
    assert_eq!(winding_number(&map, &region).unwrap(), 12);
}

#[test]
fn winding_is_stable_under_region_enlargement() {
    let map = build_standard(8).unwrap();
    let w1 = winding_number(&map, &SearchRegion::standard(8)).unwrap();
    let w2 = winding_number(
        &map,
        &SearchRegion::new(c(0.0, 0.0), 2.2 * 7.0, 8.0).unwrap(),
    )
    .unwrap();
    assert_eq!(w1, 8);
    assert_eq!(w2, 8);
}

#[test]
fn winding_on_circle_isolates_the_degenerate_point() {
    // Around z = -1 the local contribution is +1 for even order, 0 for odd.
    let even = build_standard(4).unwrap();
    assert_eq!(winding_on_circle(&even, c(-1.0, 0.0), 0.3).unwrap(), 1);
    let odd = build_standard(5).unwrap();
    assert_eq!(winding_on_circle(&odd, c(-1.0, 0.0), 0.3).unwrap(), 0);
}

// ---------------------------------------------------------------------------
// find_zeros on simple maps
// ---------------------------------------------------------------------------

#[test]
fn identity_map_has_one_zero_at_origin() {
    let f = identity_map();
    let region = SearchRegion::new(c(0.0, 0.0), 1.0, 8.0).unwrap();
    let zeros = find_zeros(&f, &region, &[]).unwrap();
    assert_eq!(zeros.len(), 1);
    assert!(zeros[0].location.norm() < 1e-12);
    assert_eq!(zeros[0].index, 1);
    assert_eq!(zeros[0].multiplicity, 1);
    assert!(zeros[0].residual < 1e-14);
}

#[test]
fn find_zeros_is_deterministic() {
    let map = build_standard(4).unwrap();
    let region = SearchRegion::standard(4);
    let ann = [DegenerateAnnotation::standard_center(4)];
    let first = find_zeros(&map, &region, &ann).unwrap();
    let second = find_zeros(&map, &region, &ann).unwrap();
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.location.re.to_bits(), b.location.re.to_bits());
        assert_eq!(a.location.im.to_bits(), b.location.im.to_bits());
        assert_eq!(a.index, b.index);
        assert_eq!(a.multiplicity, b.multiplicity);
    }
}

// ---------------------------------------------------------------------------
// Degenerate-point handling
// ---------------------------------------------------------------------------

#[test]
fn unannotated_degenerate_point_is_reported() {
    let map = build_standard(4).unwrap();
    let region = SearchRegion::standard(4);
    match find_zeros(&map, &region, &[]) {
        Err(Error::DegenerateUnexplained { location, .. }) => {
            assert!((location - c(-1.0, 0.0)).norm() < 1e-6);
        }
        other => panic!("expected an unexplained degenerate point, got {other:?}"),
    }
}

#[test]
fn annotated_location_must_actually_vanish() {
    let map = build_standard(4).unwrap();
    let region = SearchRegion::standard(4);
    let anns = [
        DegenerateAnnotation::standard_center(4),
        DegenerateAnnotation {
            location: c(0.5, 0.0),
            multiplicity: 1,
            index_contribution: 0,
        },
    ];
    match find_zeros(&map, &region, &anns) {
        Err(Error::Mismatch { detail }) => {
            assert!(detail.contains("not a zero"), "unexpected detail: {detail}");
        }
        other => panic!("expected the fake annotation to be rejected, got {other:?}"),
    }
}

#[test]
fn annotation_metadata_follows_parity() {
    let even = DegenerateAnnotation::standard_center(12);
    assert_eq!(even.location, c(-1.0, 0.0));
    assert_eq!(even.multiplicity, 11);
    assert_eq!(even.index_contribution, 1);
    let odd = DegenerateAnnotation::standard_center(9);
    assert_eq!(odd.multiplicity, 8);
    assert_eq!(odd.index_contribution, 0);
}

// ---------------------------------------------------------------------------
// Error surfaces
// ---------------------------------------------------------------------------

#[test]
fn boundary_zero_is_detected() {
    // The order-4 map vanishes at z = 3 = n-1; a square of half-width 3 puts
    // that zero exactly on a boundary sample.
    let map = build_standard(4).unwrap();
    let region = SearchRegion::new(c(0.0, 0.0), 3.0, 8.0).unwrap();
    match winding_number(&map, &region) {
        Err(Error::BoundaryZero { location, .. }) => {
            assert!((location - c(3.0, 0.0)).norm() < 1e-9);
        }
        other => panic!("expected a boundary-zero report, got {other:?}"),
    }
}

#[test]
fn winding_mismatch_when_region_misses_zeros() {
    // Half-width 2 leaves the outer zero at z = 3 (and one mirrored ray pair)
    // outside: the signed count inside is 3, not 4.
    let map = build_standard(4).unwrap();
    let region = SearchRegion::new(c(0.0, 0.0), 2.0, 8.0).unwrap();
    match find_zeros(&map, &region, &[DegenerateAnnotation::standard_center(4)]) {
        Err(Error::WindingMismatch { expected, got }) => {
            assert_eq!(expected, 4);
            assert_eq!(got, 3);
        }
        other => panic!("expected a winding mismatch, got {other:?}"),
    }
}

#[test]
fn search_region_rejects_bad_geometry() {
    assert!(SearchRegion::new(c(0.0, 0.0), 0.0, 8.0).is_err());
    assert!(SearchRegion::new(c(0.0, 0.0), -1.0, 8.0).is_err());
    assert!(SearchRegion::new(c(0.0, 0.0), 1.0, 0.0).is_err());
    assert!(SearchRegion::new(c(f64::NAN, 0.0), 1.0, 8.0).is_err());
    assert!(SearchRegion::new(c(0.0, 0.0), f64::INFINITY, 8.0).is_err());
    let region = SearchRegion::new(c(1.0, 1.0), 2.0, 8.0).unwrap();
    assert!(region.contains(c(2.9, 2.9)));
    assert!(!region.contains(c(3.1, 1.0)));
}

// ---------------------------------------------------------------------------
// Cross-validation of the two counting routes
// ---------------------------------------------------------------------------

#[test]
fn cross_validation_at_order_four() {
    let report = cross_validate(4).unwrap();
    assert_eq!(report.predicted, 10);
    assert_eq!(report.verified, Some(10));
    assert!(report.agree);
    assert_eq!(report.k_max, 0);
}

#[test]
fn cross_validation_at_order_six() {
    let report = cross_validate(6).unwrap();
    assert_eq!(report.predicted, 26);
    assert_eq!(report.verified, Some(26));
    assert!(report.agree);
}

#[test]
fn planar_zeros_respect_conjugation_symmetry() {
    let map = build_standard(8).unwrap();
    let region = SearchRegion::standard(8);
    let zeros = find_zeros(&map, &region, &[DegenerateAnnotation::standard_center(8)]).unwrap();
    // Weighted total is the full count for n = 8.
    let weighted: u64 = zeros.iter().map(|z| u64::from(z.multiplicity)).sum();
    assert_eq!(weighted, 54);
    for z in &zeros {
        if z.location.im.abs() > 1e-9 {
            let mate = zeros
                .iter()
                .find(|m| (m.location - z.location.conj()).norm() < 1e-6)
                .expect("conjugate mate missing");
            assert_eq!(mate.index, z.index);
            assert_eq!(mate.multiplicity, z.multiplicity);
        }
    }
    // Sorted by (Re, Im).
    for w in zeros.windows(2) {
        let a = (w[0].location.re, w[0].location.im);
        let b = (w[1].location.re, w[1].location.im);
        assert!(a <= b);
    }
}

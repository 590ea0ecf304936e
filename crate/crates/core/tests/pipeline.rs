use kahler_lab::convex_core::{ConvexityKind, SGrid};
use kahler_lab::einstein::{bando_mabuchi_verify, ke_family, solve_ke, KESolution};
use kahler_lab::functionals::f_trace;
use kahler_lab::geodesic::{solve_geodesic_hull, GeodesicSheet};
use kahler_lab::models::random_convex;

#[test]
fn solved_family_is_recognised_as_a_flow() {
    let g = SGrid::new(-14.0, 14.0, 1025).unwrap();
    let base = solve_ke(None, g, 0.0, 2.0, None).unwrap();
    let moved = ke_family(&base, &[0.75]).unwrap().remove(0);
    let text = moved.to_text();
    let back = KESolution::from_text(&text, None).unwrap();
    let est = bando_mabuchi_verify(&base, &back).unwrap();
    assert!((est.h - 0.75).abs() < 1e-3, "{}", est.h);
    assert!(est.conjugation_residual < 1e-2);
}

#[test]
fn sheet_text_round_trip_keeps_the_f_trace() {
    let g = SGrid::new(-14.0, 14.0, 257).unwrap();
    let u0 = random_convex(g, 0.0, 2.0, 1).unwrap();
    let u1 = random_convex(g, 0.0, 2.0, 2).unwrap();
    let sheet = solve_geodesic_hull(&u0, &u1, 17).unwrap();
    let back = GeodesicSheet::from_text(&format!("# header\n{}", sheet.to_text())).unwrap();
    assert_eq!(back.values(), sheet.values());
    let v = f_trace(&sheet, None).unwrap().verdict(1e-6).unwrap();
    assert_ne!(v.kind, ConvexityKind::NonConvex);
}

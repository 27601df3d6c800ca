//! Property tests of the geometric identities on random polynomial profiles.

use std::f64::consts::TAU;

use bour_core::bour::{bour_image, gauss_aligned_image, same_gauss_profile};
use bour_core::calculus::central_derivative;
use bour_core::forms::{
    gauss_map, gaussian_curvature_closed, helicoidal_det_first, mean_curvature_rotational, phi_functional, FormSet,
};
use bour_core::surfaces::{expr_map, Surface};
use bour_core::verify::{brioschi_curvature, shape_operator_eigen};
use bour_core::{Domain, HelicoidalSurface, ProfileCurve};
use proptest::prelude::*;

fn poly_text(c: &[f64]) -> String {
    c.iter()
        .enumerate()
        .map(|(k, ck)| format!("({ck})*u^{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Random helicoidal surface with polynomial profile on a window where
/// ζ stays away from zero and the immersion and its Bour image are regular.
fn arb_surface() -> impl Strategy<Value = HelicoidalSurface> {
    (
        prop::collection::vec(-2.0f64..2.0, 1..=5),
        prop::collection::vec(-2.0f64..2.0, 1..=5),
        0.3f64..2.0,
        any::<bool>(),
        0usize..13,
    )
        .prop_filter_map("no regular window", |(zc, pc, a, neg, start)| {
            let a = if neg { -a } else { a };
            let lo = -2.0 + 0.25 * start as f64;
            let domain = Domain::new(lo, lo + 0.75).ok()?;
            let profile = ProfileCurve::from_exprs(&poly_text(&zc), &poly_text(&pc), domain).ok()?;
            for u in domain.samples(65) {
                let (z, p) = profile.jets(u).ok()?;
                let w = (a * z.d1).powi(2) + (z.value * p.d1).powi(2);
                if z.value.abs() < 0.2 || w < 1e-2 {
                    return None;
                }
            }
            HelicoidalSurface::new(profile, a).ok()
        })
}

fn point(h: &HelicoidalSurface, s: f64) -> f64 {
    let d = h.profile.domain;
    d.lo + s * (d.hi - d.lo)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_is_orthogonal_unit(h in arb_surface(), s in 0.0f64..1.0, v in 0.0f64..TAU) {
        let u = point(&h, s);
        let j = h.jet(u, v).unwrap();
        let n = gauss_map(&j).unwrap();
        prop_assert!((n.norm() - 1.0).abs() < 1e-14);
        prop_assert!(n.dot(j.x_u).abs() <= 1e-12 * (1.0 + j.x_u.norm()));
        prop_assert!(n.dot(j.x_v).abs() <= 1e-12 * (1.0 + j.x_v.norm()));
        let c = j.x_u.cross(j.x_v);
        let det = helicoidal_det_first(&h.profile, h.pitch(), u).unwrap();
        prop_assert!((c.dot(c) - det).abs() <= 1e-9 * (1.0 + det));
    }

    #[test]
    fn third_form_is_gram_of_normal_differential(h in arb_surface(), s in 0.05f64..0.95, v in 0.0f64..TAU) {
        let u = point(&h, s);
        let f = FormSet::of(&h.jet(u, v).unwrap()).unwrap();
        let normal = |uu: f64, vv: f64| gauss_map(&h.jet(uu, vv).unwrap()).unwrap();
        let step = 1e-3;
        let mut n_u = [0.0; 3];
        let mut n_v = [0.0; 3];
        for c in 0..3 {
            n_u[c] = central_derivative(|t| normal(t, v)[c], u, step).unwrap();
            n_v[c] = central_derivative(|t| normal(u, t)[c], v, step).unwrap();
        }
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let gram = f.third.gram(&f.first);
        let scale = 1.0 + gram.x.abs() + gram.z.abs();
        prop_assert!((dot(n_u, n_u) - gram.x).abs() <= 1e-6 * scale);
        prop_assert!((dot(n_u, n_v) - gram.y).abs() <= 1e-6 * scale);
        prop_assert!((dot(n_v, n_v) - gram.z).abs() <= 1e-6 * scale);
        prop_assert!(f.third.x >= -1e-12 * scale && f.third.z >= -1e-12 * scale);
        prop_assert!(f.third.det() >= -1e-9 * scale * scale);
    }

    #[test]
    fn closed_form_curvature_agrees(h in arb_surface(), s in 0.0f64..1.0, v in 0.0f64..TAU) {
        let u = point(&h, s);
        let k = FormSet::of(&h.jet(u, v).unwrap()).unwrap().gaussian;
        let closed = gaussian_curvature_closed(&h.profile, h.pitch(), u).unwrap();
        prop_assert!((k - closed).abs() <= 1e-9 * (1.0 + k.abs()));
    }

    #[test]
    fn mean_curvature_is_phi_over_det(h in arb_surface(), s in 0.0f64..1.0, v in 0.0f64..TAU) {
        let u = point(&h, s);
        let mean = FormSet::of(&h.jet(u, v).unwrap()).unwrap().mean;
        let det = helicoidal_det_first(&h.profile, h.pitch(), u).unwrap();
        let phi = phi_functional(&h.profile, h.pitch(), u).unwrap();
        let lhs = 2.0 * mean * det.powf(1.5);
        prop_assert!((lhs - phi).abs() <= 1e-9 * (1.0 + phi.abs()));
    }

    #[test]
    fn bour_image_preserves_metric_and_curvature(h in arb_surface(), s in 0.0f64..1.0, v in 0.0f64..TAU) {
        let u = point(&h, s);
        let img = bour_image(&h, h.profile.domain.midpoint(), 1e-10).unwrap();
        let fh = FormSet::of(&h.jet(u, v).unwrap()).unwrap();
        let fr = FormSet::of(&img.surface.jet(u, v).unwrap()).unwrap();
        prop_assert!(fh.first.max_abs_diff(&fr.first) <= 1e-7);
        prop_assert!((fh.gaussian - fr.gaussian).abs() <= 1e-6);
        let hr = mean_curvature_rotational(&h.profile, h.pitch(), u).unwrap();
        prop_assert!((fr.mean - hr).abs() <= 1e-7 * (1.0 + hr.abs()));
    }

    #[test]
    fn intrinsic_and_principal_oracles(h in arb_surface(), s in 0.05f64..0.95, v in 0.0f64..TAU) {
        let u = point(&h, s);
        let j = h.jet(u, v).unwrap();
        let f = FormSet::of(&j).unwrap();
        let metric = |uu: f64, vv: f64| Ok(bour_core::forms::first_form(&h.jet(uu, vv)?));
        let k = brioschi_curvature(&metric, u, v, 1e-3).unwrap();
        prop_assert!((k - f.gaussian).abs() <= 1e-4 * (1.0 + f.gaussian.abs()));
        let (k1, k2) = shape_operator_eigen(&j).unwrap();
        prop_assert!(k1 >= k2);
        prop_assert!((k1 * k2 - f.gaussian).abs() <= 1e-9 * (1.0 + f.gaussian.abs()));
        prop_assert!((0.5 * (k1 + k2) - f.mean).abs() <= 1e-9 * (1.0 + f.mean.abs()));
    }
}

#[test]
fn same_gauss_pair_is_minimal_with_coincident_normals() {
    for b in [2f64.sqrt(), 1.5] {
        let domain = Domain::new(1.2, 3.0).unwrap();
        let p = same_gauss_profile(expr_map("u").unwrap(), 1.0, b, domain, 2.0, 1e-10).unwrap();
        let h = HelicoidalSurface::new(p, 1.0).unwrap();
        let img = gauss_aligned_image(&h, 2.0, 1e-10).unwrap();
        for u in domain.samples(12) {
            assert!(phi_functional(&h.profile, 1.0, u).unwrap().abs() < 1e-9);
            for v in [0.0, 2.0, 4.0] {
                let nh = gauss_map(&h.jet(u, v).unwrap()).unwrap();
                let nr = gauss_map(&img.surface.jet(u, v).unwrap()).unwrap();
                assert!(nh.max_abs_diff(nr) < 1e-8, "b={b} u={u}: {nh:?} vs {nr:?}");
            }
        }
    }
}

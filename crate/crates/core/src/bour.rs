//! Bour's isometry from helicoidal to rotational surfaces, natural
//! parameters, the catenoid profile, and the helicoidal profile whose Bour
//! image shares its Gauss map.
//!
//! Every indefinite integral is anchored at `u0` and realized as an
//! [`IntegralMap`]: quadrature for the value, the integrand's own jet for the
//! first and second derivatives, so the surfaces built from them carry exact
//! second-order jets.

use std::sync::Arc;

use crate::calculus::Cumulative;
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::surfaces::{
    constant_map, Domain, HelicoidalSurface, JetFn, ProfileCurve, RotationalSurface, ScalarMap, SharedMap,
};

/// Number of interior points sampled when validating a domain before quadrature.
pub const DOMAIN_CHECK_SAMPLES: usize = 64;

/// `|b - a|` below which the same-Gauss-map construction returns the right helicoid.
pub const EQUAL_NECK_TOL: f64 = 1e-12;

type JetIntegrand = Arc<dyn Fn(f64) -> Result<Jet2> + Send + Sync>;
type ValueIntegrand = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// `u ↦ offset + ∫_{u0}^{u} g`, where `g` is given as a jet whose value and
/// first derivative are exact.
pub struct IntegralMap {
    integrand: JetIntegrand,
    cumulative: Cumulative<ValueIntegrand>,
    offset: f64,
    label: &'static str,
}

impl IntegralMap {
    pub fn new(integrand: JetIntegrand, u0: f64, tol: f64, offset: f64, label: &'static str) -> Self {
        let values = Arc::clone(&integrand);
        let value_fn: ValueIntegrand = Box::new(move |u| values(u).map(|j| j.value));
        Self {
            integrand,
            cumulative: Cumulative::new(value_fn, u0, tol),
            offset,
            label,
        }
    }

    pub fn anchor(&self) -> f64 {
        self.cumulative.anchor()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

impl ScalarMap for IntegralMap {
    fn jet(&self, u: f64) -> Result<Jet2> {
        let g = (self.integrand)(u)?;
        let value = self.offset + self.cumulative.eval(u)?;
        Ok(Jet2::new(value, g.value, g.d1))
    }

    fn describe(&self) -> String {
        format!("{} (anchored at u0 = {})", self.label, self.anchor())
    }
}

fn profile_jets(p: &ProfileCurve) -> impl Fn(f64) -> Result<(Jet2, Jet2)> + Send + Sync + 'static {
    let (zeta, phi) = (Arc::clone(&p.zeta), Arc::clone(&p.phi));
    move |u| Ok((zeta.jet(u)?, phi.jet(u)?))
}

/// `aφ′ / (ζ² + a²)`, the rate of the twist angle.
pub fn twist_integrand(p: &ProfileCurve, a: f64) -> JetIntegrand {
    let jets = profile_jets(p);
    Arc::new(move |u| {
        let (z, ph) = jets(u)?;
        Ok(ph.derivative().scale(a) / (z.sqr() + a * a))
    })
}

/// `√(((aζ′)² + (ζφ′)²) / (ζ² + a²))`, the rate of the image's height.
pub fn height_integrand(p: &ProfileCurve, a: f64) -> JetIntegrand {
    let jets = profile_jets(p);
    Arc::new(move |u| {
        let (z, ph) = jets(u)?;
        let (zd, pd) = (z.derivative(), ph.derivative());
        Ok(((zd.sqr() * (a * a) + z.sqr() * pd.sqr()) / (z.sqr() + a * a)).sqrt())
    })
}

/// `√(ζ′² + ζ²φ′² / (ζ² + a²))`, the rate of the natural parameter ū.
pub fn arc_integrand(p: &ProfileCurve, a: f64) -> JetIntegrand {
    let jets = profile_jets(p);
    Arc::new(move |u| {
        let (z, ph) = jets(u)?;
        let (zd, pd) = (z.derivative(), ph.derivative());
        Ok((zd.sqr() + z.sqr() * pd.sqr() / (z.sqr() + a * a)).sqrt())
    })
}

fn check_integrands(domain: Domain, integrands: &[&JetIntegrand]) -> Result<()> {
    for u in domain.samples(DOMAIN_CHECK_SAMPLES + 2) {
        for g in integrands {
            let j = g(u)?;
            if !(j.value.is_finite() && j.d1.is_finite()) {
                return Err(Error::domain("integrand is not finite", u));
            }
        }
    }
    Ok(())
}

/// Rotational surface isometric to a helicoidal one, together with its source.
///
/// At equal parameters `(u, v)` both surfaces have the same first fundamental
/// form `(ζ′² + φ′², aφ′, ζ² + a²)`.
pub struct BourImage {
    pub source: HelicoidalSurface,
    pub surface: RotationalSurface,
    u0: f64,
    twist_offset: f64,
}

impl BourImage {
    pub fn radius(&self) -> &SharedMap {
        &self.surface.radius
    }

    pub fn height(&self) -> &SharedMap {
        &self.surface.height
    }

    pub fn twist(&self) -> &SharedMap {
        self.surface.twist.as_ref().expect("Bour image always carries a twist")
    }

    pub fn anchor(&self) -> f64 {
        self.u0
    }

    /// Value of the twist at the anchor.
    pub fn twist_offset(&self) -> f64 {
        self.twist_offset
    }
}

/// Builds the Bour image with the twist and height both vanishing at `u0`.
pub fn bour_image(h: &HelicoidalSurface, u0: f64, tol: f64) -> Result<BourImage> {
    bour_image_with_offset(h, u0, tol, 0.0)
}

/// Builds the Bour image with twist `Θ(u0) = twist_offset`.
///
/// Changing the offset rotates the image about the z-axis.
pub fn bour_image_with_offset(h: &HelicoidalSurface, u0: f64, tol: f64, twist_offset: f64) -> Result<BourImage> {
    let p = &h.profile;
    let a = h.pitch();
    if !p.domain.contains(u0) {
        return Err(Error::invalid(format!(
            "anchor u0 = {u0} outside domain [{}, {}]",
            p.domain.lo, p.domain.hi
        )));
    }
    let twist = twist_integrand(p, a);
    let height = height_integrand(p, a);
    check_integrands(p.domain, &[&twist, &height])?;

    let zeta = Arc::clone(&p.zeta);
    let radius: SharedMap = Arc::new(JetFn(move |u: f64| Ok((zeta.jet(u)?.sqr() + a * a).sqrt())));
    let twist: SharedMap = Arc::new(IntegralMap::new(twist, u0, tol, twist_offset, "twist"));
    let height: SharedMap = Arc::new(IntegralMap::new(height, u0, tol, 0.0, "height"));
    let surface = RotationalSurface::new(radius, height, Some(twist), p.domain)?;
    Ok(BourImage {
        source: h.clone(),
        surface,
        u0,
        twist_offset,
    })
}

/// Angle between the radial direction and the horizontal part of the
/// helicoidal normal, `atan2(aζ′, ζφ′)`.
pub fn normal_angle(h: &HelicoidalSurface, u: f64) -> Result<f64> {
    let (z, ph) = h.profile.jets(u)?;
    Ok((h.pitch() * z.d1).atan2(z.value * ph.d1))
}

/// Bour image rotated so that its Gauss map agrees with the source's at the anchor.
///
/// Where the source is minimal the twist keeps tracking [`normal_angle`], so
/// the two Gauss maps coincide along the whole domain.
pub fn gauss_aligned_image(h: &HelicoidalSurface, u0: f64, tol: f64) -> Result<BourImage> {
    bour_image_with_offset(h, u0, tol, normal_angle(h, u0)?)
}

/// Coordinates `(ū, v̄)` in which the helicoidal metric reads `dū² + k²(ū) dv̄²`.
pub struct NaturalChart {
    arc: IntegralMap,
    twist: IntegralMap,
}

impl NaturalChart {
    pub fn new(h: &HelicoidalSurface, u0: f64, tol: f64) -> Result<Self> {
        let a = h.pitch();
        let arc = arc_integrand(&h.profile, a);
        let twist = twist_integrand(&h.profile, a);
        check_integrands(h.profile.domain, &[&arc, &twist])?;
        Ok(Self {
            arc: IntegralMap::new(arc, u0, tol, 0.0, "arc"),
            twist: IntegralMap::new(twist, u0, tol, 0.0, "twist"),
        })
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        Ok((self.arc.jet(u)?.value, v + self.twist.jet(u)?.value))
    }
}

pub fn natural_parameters(h: &HelicoidalSurface, u: f64, v: f64, u0: f64, tol: f64) -> Result<(f64, f64)> {
    NaturalChart::new(h, u0, tol)?.eval(u, v)
}

/// `b · arcosh(uR / b)`, the height of a catenoid with neck radius `b`.
pub fn catenoid_profile(b: f64, u_r: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::invalid(format!(
            "catenoid neck radius must be positive, got {b}"
        )));
    }
    if u_r < b {
        return Err(Error::domain("radius inside the catenoid neck", u_r));
    }
    Ok(b * (u_r / b).acosh())
}

/// Helicoidal profile `(ζ, φ)` whose Bour image is the catenoid with neck `b`
/// and shares the helicoid's Gauss map.
///
/// `φ′ = √(b² − a²) √(ζ² + a²) ζ′ / (ζ √(ζ² + a² − b²))`, integrated from `u0`.
pub fn same_gauss_profile(zeta: SharedMap, a: f64, b: f64, domain: Domain, u0: f64, tol: f64) -> Result<ProfileCurve> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!("pitch a must be positive, got {a}")));
    }
    if b < a - EQUAL_NECK_TOL {
        return Err(Error::invalid(format!("neck radius b = {b} must be at least a = {a}")));
    }
    if !domain.contains(u0) {
        return Err(Error::invalid(format!("anchor u0 = {u0} outside domain")));
    }
    if (b - a).abs() < EQUAL_NECK_TOL {
        return ProfileCurve::new(zeta, constant_map(0.0), domain);
    }
    for u in domain.samples(DOMAIN_CHECK_SAMPLES + 2) {
        let z = zeta.jet(u)?.value;
        if z == 0.0 {
            return Err(Error::domain("profile radius ζ vanishes", u));
        }
        if !(z * z + a * a - b * b > 0.0) {
            return Err(Error::domain(
                format!("ζ² + a² ≤ b² (inside the catenoid neck b = {b})"),
                u,
            ));
        }
    }
    let r = (b * b - a * a).sqrt();
    let z_map = Arc::clone(&zeta);
    let slope: JetIntegrand = Arc::new(move |u| {
        let z = z_map.jet(u)?;
        let q = z.sqr() + a * a;
        Ok((q.sqrt() * z.derivative()).scale(r) / (z * (q - b * b).sqrt()))
    });
    let phi: SharedMap = Arc::new(IntegralMap::new(slope, u0, tol, 0.0, "same-Gauss-map height"));
    ProfileCurve::new(zeta, phi, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::central_derivative;
    use crate::forms::{first_form, FirstForm};
    use crate::surfaces::{eval_helicoidal, eval_rotational, expr_map, Surface};

    fn dom(lo: f64, hi: f64) -> Domain {
        Domain::new(lo, hi).unwrap()
    }

    #[test]
    fn right_helicoid_image_is_catenoid() {
        let a = 1.5;
        let u0 = 1.0;
        let h = HelicoidalSurface::right_helicoid(a, dom(0.5, 2.0)).unwrap();
        let img = bour_image(&h, u0, 1e-10).unwrap();
        let cat = |u: f64| a * (u + (u * u + a * a).sqrt()).ln();
        for u in [0.5, 0.9, 1.0, 1.6, 2.0] {
            assert_eq!(img.twist().jet(u).unwrap().value, 0.0);
            assert!((img.radius().jet(u).unwrap().value - (u * u + a * a).sqrt()).abs() < 1e-14);
            let z = img.height().jet(u).unwrap().value;
            assert!((z - (cat(u) - cat(u0))).abs() < 1e-10);
        }
    }

    #[test]
    fn example_height_integrand() {
        let a = 1.0;
        let h = HelicoidalSurface::new(ProfileCurve::from_exprs("u^2", "u^3", dom(0.5, 1.5)).unwrap(), a).unwrap();
        let g = height_integrand(&h.profile, a);
        for u in [0.5, 1.0, 1.5f64] {
            let expected = ((4.0 * a * a * u * u + 9.0 * u.powi(8)) / (u.powi(4) + a * a)).sqrt();
            assert!((g(u).unwrap().value - expected).abs() < 1e-13);
        }
        let t = twist_integrand(&h.profile, a);
        assert!((t(1.0).unwrap().value - 1.5).abs() < 1e-15);
    }

    #[test]
    fn image_is_isometric_on_example() {
        let h = HelicoidalSurface::new(ProfileCurve::from_exprs("u^2", "u^3", dom(0.5, 1.5)).unwrap(), 0.8).unwrap();
        let img = bour_image(&h, 1.0, 1e-10).unwrap();
        for u in [0.5, 0.8, 1.2, 1.5] {
            for v in [0.0, 1.0, 4.0] {
                let fh = first_form(&eval_helicoidal(&h, u, v).unwrap());
                let fr = first_form(&eval_rotational(&img.surface, u, v).unwrap());
                assert!(fh.max_abs_diff(&fr) < 1e-12, "{fh:?} vs {fr:?}");
            }
        }
    }

    #[test]
    fn anchor_and_pitch_validation() {
        let h = HelicoidalSurface::right_helicoid(1.0, dom(0.5, 2.0)).unwrap();
        assert!(bour_image(&h, 3.0, 1e-10).is_err());
        let p = ProfileCurve::from_exprs("u", "0", dom(0.5, 2.0)).unwrap();
        assert!(HelicoidalSurface::new(p, 0.0).is_err());
    }

    #[test]
    fn natural_parameters_of_right_helicoid() {
        let h = HelicoidalSurface::right_helicoid(1.0, dom(0.5, 2.0)).unwrap();
        let (ub, vb) = natural_parameters(&h, 1.7, 0.3, 1.0, 1e-10).unwrap();
        assert!((ub - 0.7).abs() < 1e-13);
        assert_eq!(vb, 0.3);
    }

    #[test]
    fn natural_metric_pullback() {
        // ds² = dū² + k² dv̄² pulled back through (u, v) ↦ (ū, v̄) gives (E, F, G).
        let a = 0.9;
        let h = HelicoidalSurface::new(ProfileCurve::from_exprs("u^2", "u^3", dom(0.5, 1.5)).unwrap(), a).unwrap();
        let chart = &NaturalChart::new(&h, 1.0, 1e-12).unwrap();
        for (u, v) in [(0.7, 0.2), (1.1, 2.0), (1.4, 5.0)] {
            let du = |i: usize| {
                move |t: f64| {
                    let p = chart.eval(t, v).unwrap();
                    if i == 0 {
                        p.0
                    } else {
                        p.1
                    }
                }
            };
            let dv = |i: usize| {
                move |t: f64| {
                    let p = chart.eval(u, t).unwrap();
                    if i == 0 {
                        p.0
                    } else {
                        p.1
                    }
                }
            };
            let ub_u = central_derivative(du(0), u, 1e-3).unwrap();
            let vb_u = central_derivative(du(1), u, 1e-3).unwrap();
            let ub_v = central_derivative(dv(0), v, 1e-3).unwrap();
            let vb_v = central_derivative(dv(1), v, 1e-3).unwrap();
            let k2 = u.powi(4) + a * a;
            let pulled = FirstForm {
                e: ub_u * ub_u + k2 * vb_u * vb_u,
                f: ub_u * ub_v + k2 * vb_u * vb_v,
                g: ub_v * ub_v + k2 * vb_v * vb_v,
            };
            let direct = first_form(&h.jet(u, v).unwrap());
            assert!(pulled.max_abs_diff(&direct) < 1e-7, "{pulled:?} vs {direct:?}");
        }
    }

    #[test]
    fn twist_monotone_for_positive_rate() {
        let h = HelicoidalSurface::new(ProfileCurve::from_exprs("u^2", "u^3", dom(0.5, 1.5)).unwrap(), 1.0).unwrap();
        let img = bour_image(&h, 0.5, 1e-10).unwrap();
        let values: Vec<f64> = dom(0.5, 1.5)
            .samples(21)
            .map(|u| img.twist().jet(u).unwrap().value)
            .collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        let heights: Vec<f64> = dom(0.5, 1.5)
            .samples(21)
            .map(|u| img.height().jet(u).unwrap().value)
            .collect();
        assert!(heights.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn catenoid_profile_values() {
        assert_eq!(catenoid_profile(2.0, 2.0).unwrap(), 0.0);
        assert!((catenoid_profile(1.0, 2f64.sqrt()).unwrap() - 0.881_373_587_019_543).abs() < 1e-14);
        assert!((catenoid_profile(1.0, 1f64.cosh()).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(catenoid_profile(1.0, 0.5), Err(Error::Domain { .. })));
        assert!(catenoid_profile(0.0, 1.0).is_err());
    }

    #[test]
    fn same_gauss_slope() {
        let b = 2f64.sqrt();
        let p = same_gauss_profile(expr_map("u").unwrap(), 1.0, b, dom(1.2, 3.0), 1.5, 1e-10).unwrap();
        let d1 = p.phi.jet(b).unwrap().d1;
        assert!((d1 - 1.5f64.sqrt()).abs() < 1e-14);
        // d2 from the jet matches a difference quotient of d1
        let fd = central_derivative(|u| p.phi.jet(u).unwrap().d1, 2.0, 1e-3).unwrap();
        assert!((fd - p.phi.jet(2.0).unwrap().d2).abs() < 1e-9);
    }

    #[test]
    fn same_gauss_equal_neck_is_right_helicoid() {
        let p = same_gauss_profile(expr_map("u").unwrap(), 1.0, 1.0, dom(0.5, 2.0), 1.0, 1e-10).unwrap();
        for u in [0.5, 1.3, 2.0] {
            assert_eq!(p.phi.jet(u).unwrap(), Jet2::constant(0.0));
        }
    }

    #[test]
    fn same_gauss_rejects_neck_violations() {
        let z = expr_map("u").unwrap();
        assert!(matches!(
            same_gauss_profile(z.clone(), 1.0, 2f64.sqrt(), dom(0.5, 2.0), 1.0, 1e-10),
            Err(Error::Domain { .. })
        ));
        assert!(same_gauss_profile(z.clone(), 1.0, 0.5, dom(1.2, 2.0), 1.5, 1e-10).is_err());
        assert!(same_gauss_profile(z, -1.0, 2.0, dom(1.2, 2.0), 1.5, 1e-10).is_err());
    }
}

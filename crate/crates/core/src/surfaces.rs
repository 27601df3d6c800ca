//! Profile curves and the helicoidal / rotational immersions about the z-axis.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::jet::Jet2;
use crate::vector::Vec3;

/// A twice-differentiable real function of `u`, evaluated as a jet.
pub trait ScalarMap: Send + Sync {
    fn jet(&self, u: f64) -> Result<Jet2>;

    /// Human-readable description for reports.
    fn describe(&self) -> String {
        "<function>".to_string()
    }
}

pub type SharedMap = Arc<dyn ScalarMap>;

impl ScalarMap for Expression {
    fn jet(&self, u: f64) -> Result<Jet2> {
        self.eval_jet(u)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Adapts a closure `u -> Jet2` into a [`ScalarMap`].
pub struct JetFn<F>(pub F);

impl<F> ScalarMap for JetFn<F>
where
    F: Fn(f64) -> Result<Jet2> + Send + Sync,
{
    fn jet(&self, u: f64) -> Result<Jet2> {
        (self.0)(u)
    }
}

pub fn constant_map(c: f64) -> SharedMap {
    Arc::new(Expression::Num(c))
}

pub fn expr_map(text: &str) -> Result<SharedMap> {
    Ok(Arc::new(crate::expr::parse(text)?))
}

/// Parameter interval `[lo, hi]` of the profile variable `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("domain [{lo}, {hi}] must satisfy lo < hi")));
        }
        Ok(Self { lo, hi })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, u: f64) -> bool {
        self.lo <= u && u <= self.hi
    }

    /// `n` evenly spaced points including both endpoints.
    pub fn samples(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        (0..n).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
    }
}

/// Validation sample count used when constructing surfaces.
pub const VALIDATION_SAMPLES: usize = 65;

/// Generating curve `(ζ(u), 0, φ(u))` in the xz-plane.
#[derive(Clone)]
pub struct ProfileCurve {
    pub zeta: SharedMap,
    pub phi: SharedMap,
    pub domain: Domain,
}

impl fmt::Debug for ProfileCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfileCurve")
            .field("zeta", &self.zeta.describe())
            .field("phi", &self.phi.describe())
            .field("domain", &self.domain)
            .finish()
    }
}

impl ProfileCurve {
    /// Checks that ζ is defined and nonzero on a sample of the domain.
    pub fn new(zeta: SharedMap, phi: SharedMap, domain: Domain) -> Result<Self> {
        for u in domain.samples(VALIDATION_SAMPLES) {
            let z = zeta.jet(u)?;
            phi.jet(u)?;
            if z.value == 0.0 {
                return Err(Error::domain("profile radius ζ vanishes", u));
            }
        }
        Ok(Self { zeta, phi, domain })
    }

    pub fn from_exprs(zeta: &str, phi: &str, domain: Domain) -> Result<Self> {
        Self::new(expr_map(zeta)?, expr_map(phi)?, domain)
    }

    pub fn jets(&self, u: f64) -> Result<(Jet2, Jet2)> {
        Ok((self.zeta.jet(u)?, self.phi.jet(u)?))
    }
}

/// Position and partial derivatives through order two at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub x: Vec3,
    pub x_u: Vec3,
    pub x_v: Vec3,
    pub x_uu: Vec3,
    pub x_uv: Vec3,
    pub x_vv: Vec3,
}

impl SurfaceJet {
    pub fn is_finite(&self) -> bool {
        [self.x, self.x_u, self.x_v, self.x_uu, self.x_uv, self.x_vv]
            .iter()
            .all(|v| v.is_finite())
    }

    /// Applies a rotation about the z-axis to every channel.
    pub fn rotate_z(&self, angle: f64) -> Self {
        Self {
            x: self.x.rotate_z(angle),
            x_u: self.x_u.rotate_z(angle),
            x_v: self.x_v.rotate_z(angle),
            x_uu: self.x_uu.rotate_z(angle),
            x_uv: self.x_uv.rotate_z(angle),
            x_vv: self.x_vv.rotate_z(angle),
        }
    }

    fn checked(self, u: f64, v: f64) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Degenerate(format!("non-finite jet at (u, v) = ({u}, {v})")))
        }
    }
}

/// Anything that can be evaluated as an immersion with second-order jets.
pub trait Surface: Send + Sync {
    fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet>;
    fn domain(&self) -> Domain;
}

/// `H(u, v) = (ζ cos v, ζ sin v, φ + a v)`.
#[derive(Debug, Clone)]
pub struct HelicoidalSurface {
    pub profile: ProfileCurve,
    pitch: f64,
}

impl HelicoidalSurface {
    pub fn new(profile: ProfileCurve, pitch: f64) -> Result<Self> {
        if pitch == 0.0 || !pitch.is_finite() {
            return Err(Error::invalid(
                "helicoidal pitch must be finite and nonzero; use a rotational surface for pitch 0",
            ));
        }
        Ok(Self { profile, pitch })
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Right helicoid `(u cos v, u sin v, a v)`.
    pub fn right_helicoid(pitch: f64, domain: Domain) -> Result<Self> {
        Self::new(ProfileCurve::from_exprs("u", "0", domain)?, pitch)
    }
}

pub fn eval_helicoidal(h: &HelicoidalSurface, u: f64, v: f64) -> Result<SurfaceJet> {
    let (z, p) = h.profile.jets(u)?;
    let a = h.pitch;
    let (s, c) = v.sin_cos();
    SurfaceJet {
        x: Vec3::new(z.value * c, z.value * s, p.value + a * v),
        x_u: Vec3::new(z.d1 * c, z.d1 * s, p.d1),
        x_v: Vec3::new(-z.value * s, z.value * c, a),
        x_uu: Vec3::new(z.d2 * c, z.d2 * s, p.d2),
        x_uv: Vec3::new(-z.d1 * s, z.d1 * c, 0.0),
        x_vv: Vec3::new(-z.value * c, -z.value * s, 0.0),
    }
    .checked(u, v)
}

impl Surface for HelicoidalSurface {
    fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        eval_helicoidal(self, u, v)
    }

    fn domain(&self) -> Domain {
        self.profile.domain
    }
}

/// `R(u, v) = (k cos(v + Θ), k sin(v + Θ), h)` with radius `k`, height `h`
/// and twist `Θ`, all functions of `u`.
#[derive(Clone)]
pub struct RotationalSurface {
    pub radius: SharedMap,
    pub height: SharedMap,
    pub twist: Option<SharedMap>,
    pub domain: Domain,
}

impl fmt::Debug for RotationalSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RotationalSurface")
            .field("radius", &self.radius.describe())
            .field("height", &self.height.describe())
            .field("twist", &self.twist.as_ref().map(|t| t.describe()))
            .field("domain", &self.domain)
            .finish()
    }
}

impl RotationalSurface {
    pub fn new(radius: SharedMap, height: SharedMap, twist: Option<SharedMap>, domain: Domain) -> Result<Self> {
        for u in domain.samples(VALIDATION_SAMPLES) {
            let r = radius.jet(u)?;
            if !(r.value > 0.0) {
                return Err(Error::domain("rotational radius must be positive", u));
            }
        }
        Ok(Self {
            radius,
            height,
            twist,
            domain,
        })
    }

    pub fn from_exprs(radius: &str, height: &str, twist: Option<&str>, domain: Domain) -> Result<Self> {
        let twist = twist.map(expr_map).transpose()?;
        Self::new(expr_map(radius)?, expr_map(height)?, twist, domain)
    }

    /// Catenoid `(√(u²+a²) cos v, √(u²+a²) sin v, a log(u + √(u²+a²)))`.
    pub fn catenoid(a: f64, domain: Domain) -> Result<Self> {
        let a2 = a * a;
        let radius: SharedMap = Arc::new(JetFn(move |u: f64| {
            let w = Jet2::variable(u);
            Ok((w.sqr() + a2).sqrt())
        }));
        let height: SharedMap = Arc::new(JetFn(move |u: f64| {
            let w = Jet2::variable(u);
            Ok((w + (w.sqr() + a2).sqrt()).ln().scale(a))
        }));
        Self::new(radius, height, None, domain)
    }

    pub fn twist_jet(&self, u: f64) -> Result<Jet2> {
        match &self.twist {
            Some(t) => t.jet(u),
            None => Ok(Jet2::constant(0.0)),
        }
    }
}

pub fn eval_rotational(r: &RotationalSurface, u: f64, v: f64) -> Result<SurfaceJet> {
    let k = r.radius.jet(u)?;
    let h = r.height.jet(u)?;
    let t = r.twist_jet(u)?;
    let (s, c) = (v + t.value).sin_cos();
    let radial = k.d2 - k.value * t.d1 * t.d1;
    let swirl = 2.0 * k.d1 * t.d1 + k.value * t.d2;
    SurfaceJet {
        x: Vec3::new(k.value * c, k.value * s, h.value),
        x_u: Vec3::new(k.d1 * c - k.value * t.d1 * s, k.d1 * s + k.value * t.d1 * c, h.d1),
        x_v: Vec3::new(-k.value * s, k.value * c, 0.0),
        x_uu: Vec3::new(radial * c - swirl * s, radial * s + swirl * c, h.d2),
        x_uv: Vec3::new(-k.d1 * s - k.value * t.d1 * c, k.d1 * c - k.value * t.d1 * s, 0.0),
        x_vv: Vec3::new(-k.value * c, -k.value * s, 0.0),
    }
    .checked(u, v)
}

impl Surface for RotationalSurface {
    fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        eval_rotational(self, u, v)
    }

    fn domain(&self) -> Domain {
        self.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::central_derivative;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn dom(lo: f64, hi: f64) -> Domain {
        Domain::new(lo, hi).unwrap()
    }

    fn example31(a: f64) -> HelicoidalSurface {
        HelicoidalSurface::new(ProfileCurve::from_exprs("u^2", "u^3", dom(0.5, 2.0)).unwrap(), a).unwrap()
    }

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn right_helicoid_jet() {
        let h = HelicoidalSurface::right_helicoid(1.0, dom(0.5, 2.0)).unwrap();
        let j = eval_helicoidal(&h, 1.0, 0.0).unwrap();
        assert_eq!(j.x, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(j.x_u, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(j.x_v, Vec3::new(0.0, 1.0, 1.0));
    }

    #[test]
    fn example_surface_position() {
        let j = eval_helicoidal(&example31(1.0), 1.0, 0.0).unwrap();
        assert_eq!(j.x, Vec3::new(1.0, 0.0, 1.0));
    }

    #[test]
    fn periodic_in_v() {
        let h = example31(0.7);
        let a = eval_helicoidal(&h, 1.3, 0.4).unwrap();
        let b = eval_helicoidal(&h, 1.3, 0.4 + 2.0 * PI).unwrap();
        // x, y repeat exactly; z advances by one pitch turn
        assert!((a.x.x - b.x.x).abs() < 1e-12 && (a.x.y - b.x.y).abs() < 1e-12);
        assert!((b.x.z - a.x.z - 0.7 * 2.0 * PI).abs() < 1e-12);
        let r = RotationalSurface::catenoid(1.0, dom(-1.0, 1.0)).unwrap();
        let a = eval_rotational(&r, 0.3, 0.4).unwrap();
        let b = eval_rotational(&r, 0.3, 0.4 + 2.0 * PI).unwrap();
        assert!(close(a.x, b.x, 1e-12));
    }

    #[test]
    fn catenoid_positions() {
        let r = RotationalSurface::catenoid(1.0, dom(-1.0, 1.0)).unwrap();
        assert!(close(
            eval_rotational(&r, 0.0, 0.0).unwrap().x,
            Vec3::new(1.0, 0.0, 0.0),
            1e-15
        ));
        assert!(close(
            eval_rotational(&r, 0.0, FRAC_PI_2).unwrap().x,
            Vec3::new(0.0, 1.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn zero_twist_is_plain_surface_of_revolution() {
        let plain = RotationalSurface::from_exprs("u^2+1", "u^3", None, dom(0.5, 2.0)).unwrap();
        let zero = RotationalSurface::from_exprs("u^2+1", "u^3", Some("0"), dom(0.5, 2.0)).unwrap();
        let (u, v) = (1.1, 2.3);
        let j = eval_rotational(&plain, u, v).unwrap();
        assert_eq!(j, eval_rotational(&zero, u, v).unwrap());
        let k = u * u + 1.0;
        assert!(close(j.x, Vec3::new(k * v.cos(), k * v.sin(), u * u * u), 1e-14));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ProfileCurve::from_exprs("u", "0", dom(0.5, 2.0)).unwrap();
        assert!(HelicoidalSurface::new(p, 0.0).is_err());
        assert!(ProfileCurve::from_exprs("u", "0", dom(-1.0, 1.0)).is_err());
        assert!(Domain::new(1.0, 1.0).is_err());
        assert!(RotationalSurface::from_exprs("u", "0", None, dom(-1.0, 1.0)).is_err());
        assert!(ProfileCurve::from_exprs("log(u)", "0", dom(-1.0, 1.0)).is_err());
    }

    #[test]
    fn negative_radius_profiles_are_immersions() {
        let h = HelicoidalSurface::new(ProfileCurve::from_exprs("-u", "u", dom(0.5, 2.0)).unwrap(), 1.0).unwrap();
        assert!(eval_helicoidal(&h, 1.0, 0.3).is_ok());
    }

    fn fd_check(s: &dyn Surface, u: f64, v: f64) -> std::result::Result<(), TestCaseError> {
        let j = s.jet(u, v).unwrap();
        let h = 1e-3;
        for c in 0..3 {
            let pu = |t: f64| s.jet(t, v).unwrap().x[c];
            let pv = |t: f64| s.jet(u, t).unwrap().x[c];
            let xu_c = |t: f64| s.jet(t, v).unwrap().x_u[c];
            let xv_c = |t: f64| s.jet(u, t).unwrap().x_v[c];
            let xu_v = |t: f64| s.jet(u, t).unwrap().x_u[c];
            let checks = [
                (central_derivative(pu, u, h).unwrap(), j.x_u[c]),
                (central_derivative(pv, v, h).unwrap(), j.x_v[c]),
                (central_derivative(xu_c, u, h).unwrap(), j.x_uu[c]),
                (central_derivative(xv_c, v, h).unwrap(), j.x_vv[c]),
                (central_derivative(xu_v, v, h).unwrap(), j.x_uv[c]),
            ];
            for (fd, exact) in checks {
                prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "fd {fd} vs {exact}");
            }
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn helicoidal_partials_match_differences(
            c in prop::collection::vec(-2.0f64..2.0, 3), a in 0.3f64..2.0, u in 0.6f64..1.8, v in 0.0f64..6.3,
        ) {
            let zeta = format!("2 + {}*u + {}*u^2", c[0] * 0.2, c[1] * 0.2);
            let phi = format!("{}*u^3 + sin(u)", c[2]);
            let h = HelicoidalSurface::new(ProfileCurve::from_exprs(&zeta, &phi, dom(0.5, 2.0)).unwrap(), a).unwrap();
            fd_check(&h, u, v)?;
        }

        #[test]
        fn rotational_partials_match_differences(
            c in prop::collection::vec(-1.0f64..1.0, 3), u in 0.6f64..1.8, v in 0.0f64..6.3,
        ) {
            let radius = format!("2 + {}*u^2", c[0] * 0.3);
            let height = format!("{}*u^3 + u", c[1]);
            let twist = format!("{}*u^2 + cos(u)", c[2]);
            let r = RotationalSurface::from_exprs(&radius, &height, Some(&twist), dom(0.5, 2.0)).unwrap();
            fd_check(&r, u, v)?;
        }

        #[test]
        fn screw_motion_invariance(a in -2.0f64..2.0, u in 0.6f64..1.8, v in 0.0f64..6.3, delta in -3.0f64..3.0) {
            prop_assume!(a.abs() > 1e-3);
            let h = example31(a);
            let moved = eval_helicoidal(&h, u, v + delta).unwrap().x;
            let base = eval_helicoidal(&h, u, v).unwrap().x.rotate_z(delta) + Vec3::new(0.0, 0.0, a * delta);
            prop_assert!(close(moved, base, 1e-12 * (1.0 + base.norm())));
        }
    }
}

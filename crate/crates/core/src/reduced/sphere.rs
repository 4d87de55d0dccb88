//! `T*S^3_rho` with `rho = sqrt(-2 nu)`, in two charts.
//!
//! Embedded chart: `(q, pi)` in R^8 with `|q| = rho`, `q.pi = 0`; this is the
//! level set `Gamma0 = nu` intersected with the slice `q.pi = 0`.
//! Moser chart: stereographic `y` from the north pole `(rho, 0)` and the
//! cotangent lift `p`. The canonical form pulls back to `dy ^ dp`, so
//! `{y_k, p_l} = delta_kl` and the Hamilton equations read
//! `dy = -dH/dp`, `dp = dH/dy`.
//!
//! Every point operation goes through the embedded chart, which also covers
//! the pole.

use super::rho_of_nu;
use crate::algebra::{CanonicalPoint8, Vec3};
use crate::e3::{
    integral_clebsch, integral_kovalevskaya, integral_zhukovskii, E3Function, E3State,
    GyrostatParams, Gyrostat,
};
use crate::error::{Error, Result};
use crate::twistor::{
    lifted_gradient_real, momentum_a2_gradient_real, momentum_a2_real, momentum_e3_real,
    twistor_real_vector_field, IntegralKind,
};

/// Relative tolerance of the embedded constraints.
pub const CONSTRAINT_TOL: f64 = 1e-9;
/// Beyond this `|y|` Moser-chart flows stop and the embedded chart is used.
pub const MOSER_POLE_RADIUS: f64 = 1e6;

/// `(q0, q) = rho/(1 + y^2) (y^2 - 1, 2y)`.
pub fn stereo_to_sphere(y: &Vec3, rho: f64) -> [f64; 4] {
    let s = y.norm_squared();
    let k = rho / (1.0 + s);
    [k * (s - 1.0), 2.0 * k * y.x, 2.0 * k * y.y, 2.0 * k * y.z]
}

/// `y = q/(rho - q0)`; the north pole `(rho, 0)` is rejected.
pub fn sphere_to_stereo(q: &[f64; 4], rho: f64) -> Result<Vec3> {
    let d = rho - q[0];
    if !(d > 1e-14 * rho) {
        return Err(Error::Domain(format!(
            "q0 = {} is at the north pole of the radius-{rho} sphere",
            q[0]
        )));
    }
    Ok(Vec3::new(q[1], q[2], q[3]) / d)
}

/// `pi0 = y.p/rho`, `pi = ((y^2 + 1)/2 p - (y.p) y)/rho`.
pub fn moser_momenta(y: &Vec3, p: &Vec3, rho: f64) -> [f64; 4] {
    let s = y.norm_squared();
    let yp = y.dot(p);
    let v = (p * (0.5 * (s + 1.0)) - y * yp) / rho;
    [yp / rho, v.x, v.y, v.z]
}

/// Inverse of the Moser chart on the constraint set: returns `(y, p)`.
pub fn moser_momenta_inverse(q: &[f64; 4], pi: &[f64; 4], rho: f64) -> Result<(Vec3, Vec3)> {
    check_constraints(q, pi, rho)?;
    let y = sphere_to_stereo(q, rho)?;
    let s = y.norm_squared();
    let pv = Vec3::new(pi[1], pi[2], pi[3]);
    let c = pi[0] - pv.dot(&y);
    let p = (y * (4.0 * c / ((1.0 + s) * (1.0 + s))) + pv * (2.0 / (1.0 + s))) * rho;
    Ok((y, p))
}

fn constraint_residuals(q: &[f64; 4], pi: &[f64; 4], rho: f64) -> (f64, f64) {
    let qq: f64 = q.iter().map(|v| v * v).sum();
    let qp: f64 = (0..4).map(|m| q[m] * pi[m]).sum();
    let pp: f64 = pi.iter().map(|v| v * v).sum();
    (
        (qq - rho * rho).abs() / (rho * rho),
        qp.abs() / (qq.sqrt() * pp.sqrt()).max(f64::MIN_POSITIVE),
    )
}

/// Constraint drift `(| |q|^2 - rho^2 | / rho^2, |q.pi| / (|q| |pi|))`.
pub fn constraint_drift(x: &[f64; 8], rho: f64) -> (f64, f64) {
    let q = [x[0], x[1], x[2], x[3]];
    let pi = [x[4], x[5], x[6], x[7]];
    let (a, b) = constraint_residuals(&q, &pi, rho);
    let qp: f64 = (0..4).map(|m| q[m] * pi[m]).sum();
    // the relative form is undefined at pi = 0, where q.pi vanishes anyway
    (a, if qp == 0.0 { 0.0 } else { b })
}

fn check_constraints(q: &[f64; 4], pi: &[f64; 4], rho: f64) -> Result<()> {
    let qp: f64 = (0..4).map(|m| q[m] * pi[m]).sum();
    let (a, b) = constraint_residuals(q, pi, rho);
    if a > CONSTRAINT_TOL || (qp != 0.0 && b > CONSTRAINT_TOL) {
        return Err(Error::Validation(format!(
            "point violates T*S^3 constraints: | |q|^2 - rho^2 |/rho^2 = {a:.3e}, |q.pi|/(|q||pi|) = {b:.3e}"
        )));
    }
    Ok(())
}

/// Moser chart point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereStateMoser {
    pub y: Vec3,
    pub p: Vec3,
}

impl SphereStateMoser {
    pub fn new(y: Vec3, p: Vec3) -> Result<Self> {
        if !(y.iter().chain(p.iter()).all(|v| v.is_finite())) {
            return Err(Error::Validation("Moser state must be finite".into()));
        }
        Ok(SphereStateMoser { y, p })
    }

    /// Packed as `(y1, y2, y3, p1, p2, p3)`.
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        Self::new(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.y.x, self.y.y, self.y.z, self.p.x, self.p.y, self.p.z]
    }

    pub fn to_embedded(&self, nu: f64) -> SphereStateEmbedded {
        let rho = rho_of_nu(nu);
        SphereStateEmbedded {
            q: stereo_to_sphere(&self.y, rho),
            pi: moser_momenta(&self.y, &self.p, rho),
        }
    }
}

/// Embedded chart point with `|q| = rho`, `q.pi = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereStateEmbedded {
    pub q: [f64; 4],
    pub pi: [f64; 4],
}

impl SphereStateEmbedded {
    pub fn new(q: [f64; 4], pi: [f64; 4], nu: f64) -> Result<Self> {
        if !(nu < 0.0) {
            return Err(Error::Validation(format!("nu must be negative, got {nu}")));
        }
        check_constraints(&q, &pi, rho_of_nu(nu))?;
        Ok(SphereStateEmbedded { q, pi })
    }

    pub fn from_slice(x: &[f64], nu: f64) -> Result<Self> {
        Self::new([x[0], x[1], x[2], x[3]], [x[4], x[5], x[6], x[7]], nu)
    }

    pub fn to_array(&self) -> [f64; 8] {
        self.point().to_array()
    }

    pub fn point(&self) -> CanonicalPoint8 {
        CanonicalPoint8 {
            q: self.q,
            pi: self.pi,
        }
    }

    pub fn to_moser(&self, nu: f64) -> Result<SphereStateMoser> {
        let (y, p) = moser_momenta_inverse(&self.q, &self.pi, rho_of_nu(nu))?;
        SphereStateMoser::new(y, p)
    }
}

/// A point of `T*S^3_rho` in either chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphereState {
    Moser(SphereStateMoser),
    Embedded(SphereStateEmbedded),
}

impl SphereState {
    /// The embedded-chart point, validating embedded input against `nu`.
    pub fn embedded(&self, nu: f64) -> Result<SphereStateEmbedded> {
        match self {
            SphereState::Moser(m) => Ok(m.to_embedded(nu)),
            SphereState::Embedded(e) => SphereStateEmbedded::new(e.q, e.pi, nu),
        }
    }
}

/// `J_{e,nu}`: `momentum_e3_real` on the embedded chart.
pub fn momentum_e3_nu(s: &SphereState, nu: f64) -> Result<E3State> {
    Ok(momentum_e3_real(&s.embedded(nu)?.point()))
}

/// `J0~`: `J0` on the embedded chart.
pub fn j0_tilde(s: &SphereState, nu: f64) -> Result<f64> {
    Ok(momentum_a2_real(&s.embedded(nu)?.point()).j0)
}

pub fn sphere_hamiltonian(p: &GyrostatParams, nu: f64, s: &SphereState) -> Result<f64> {
    Ok(Gyrostat(p.clone()).value(&momentum_e3_nu(s, nu)?))
}

/// Case integrals composed with `J_{e,nu}`; `J0` gives `J0~`, `Gamma0` the level `nu`.
pub fn sphere_integral(kind: &IntegralKind, nu: f64, s: &SphereState) -> Result<f64> {
    let e = momentum_e3_nu(s, nu)?;
    Ok(match *kind {
        IntegralKind::Kovalevskaya { i, chi1, chi2 } => integral_kovalevskaya(&e, i, chi1, chi2),
        IntegralKind::Zhukovskii => integral_zhukovskii(&e),
        IntegralKind::Clebsch { inertia, eps } => integral_clebsch(&e, inertia, eps),
        IntegralKind::J0 => j0_tilde(s, nu)?,
        IntegralKind::Gamma0 => nu,
    })
}

/// Jacobian of the Moser chart `(y, p) -> (q, pi)`: rows `q0..q3, pi0..pi3`,
/// columns `y1..y3, p1..p3`.
pub fn moser_jacobian(y: &Vec3, p: &Vec3, rho: f64) -> [[f64; 6]; 8] {
    let s = y.norm_squared();
    let d = 1.0 + s;
    let yp = y.dot(p);
    let mut m = [[0.0; 6]; 8];
    for j in 0..3 {
        m[0][j] = 4.0 * rho * y[j] / (d * d);
        m[4][j] = p[j] / rho;
        m[4][3 + j] = y[j] / rho;
    }
    for i in 0..3 {
        for j in 0..3 {
            let dij = if i == j { 1.0 } else { 0.0 };
            m[1 + i][j] = 2.0 * rho * (dij / d - 2.0 * y[i] * y[j] / (d * d));
            m[5 + i][j] = (y[j] * p[i] - p[j] * y[i] - yp * dij) / rho;
            m[5 + i][3 + j] = (0.5 * d * dij - y[i] * y[j]) / rho;
        }
    }
    m
}

/// Pulls a real gradient on R^8 back to the Moser chart: `(d/dy, d/dp)`.
pub fn moser_pullback(s: &SphereStateMoser, nu: f64, g8: &[f64; 8]) -> [f64; 6] {
    let m = moser_jacobian(&s.y, &s.p, rho_of_nu(nu));
    std::array::from_fn(|c| (0..8).map(|r| m[r][c] * g8[r]).sum())
}

/// Moser-chart gradient of `F o J_{e,nu}`.
pub fn moser_lifted_gradient(h: &dyn E3Function, s: &SphereStateMoser, nu: f64) -> [f64; 6] {
    let x = s.to_embedded(nu).to_array();
    moser_pullback(s, nu, &lifted_gradient_real(h, &x))
}

/// Moser-chart gradient of `J0~`.
pub fn moser_j0_gradient(s: &SphereStateMoser, nu: f64) -> [f64; 6] {
    let x = s.to_embedded(nu).to_array();
    moser_pullback(s, nu, &momentum_a2_gradient_real(&x)[0])
}

/// Canonical bracket of the Moser chart, `{y_k, p_l} = delta_kl`.
pub fn moser_bracket(f: &[f64; 6], g: &[f64; 6]) -> f64 {
    (0..3).map(|k| f[k] * g[3 + k] - f[3 + k] * g[k]).sum()
}

/// Hamilton equations in the Moser chart for a gradient `(H_y, H_p)`: `(dy, dp) = (-H_p, H_y)`.
pub fn moser_vector_field_generic(g: &[f64; 6]) -> [f64; 6] {
    [-g[3], -g[4], -g[5], g[0], g[1], g[2]]
}

/// Moser-chart field of `F o J_{e,nu}`.
pub fn sphere_flow_moser(h: &dyn E3Function, s: &SphereStateMoser, nu: f64) -> [f64; 6] {
    moser_vector_field_generic(&moser_lifted_gradient(h, s, nu))
}

/// Embedded-chart field: the R^8 field of `h o J_e` plus the multiple of the
/// `Gamma0` field `(dq, dpi) = (0, -q)` that keeps `q.pi = 0`. The first term
/// already preserves `|q|` since `{Gamma0, h o J_e} = 0`.
pub fn sphere_flow_embedded(h: &dyn E3Function, x: &[f64; 8]) -> [f64; 8] {
    let mut v = twistor_real_vector_field(h, x);
    let qq: f64 = (0..4).map(|m| x[m] * x[m]).sum();
    let c: f64 = (0..4).map(|m| v[m] * x[4 + m] + x[m] * v[4 + m]).sum::<f64>() / qq;
    for m in 0..4 {
        v[4 + m] -= c * x[m];
    }
    v
}

pub fn sphere_vector_field_moser(p: &GyrostatParams, nu: f64, s: &SphereStateMoser) -> [f64; 6] {
    sphere_flow_moser(&Gyrostat(p.clone()), s, nu)
}

pub fn sphere_vector_field_embedded(p: &GyrostatParams, x: &[f64; 8]) -> [f64; 8] {
    sphere_flow_embedded(&Gyrostat(p.clone()), x)
}

/// Orthogonal projection onto `|q| = rho`, `q.pi = 0`.
pub fn project_embedded(x: &[f64; 8], rho: f64) -> [f64; 8] {
    let mut out = *x;
    let n: f64 = (0..4).map(|m| x[m] * x[m]).sum::<f64>().sqrt();
    for m in 0..4 {
        out[m] = x[m] * rho / n;
    }
    let qp: f64 = (0..4).map(|m| out[m] * out[4 + m]).sum();
    for m in 0..4 {
        out[4 + m] -= qp / (rho * rho) * out[m];
    }
    out
}

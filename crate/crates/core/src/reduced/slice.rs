//! The slice `M_{mu,nu} = {p.y = 0, y^2 = nu^2}` of the monopole space, the
//! embedding `Phi(P, zeta) = ((P - i mu/|zeta|^2) zeta, zeta)` of the
//! `(P, zeta)` chart into the twistor level `J0 = mu`, and sections over
//! e(3)* used to build initial states.
//!
//! Through the quotient chart `p = -Tr(sigma P)/2`, `y = zeta+ sigma zeta`
//! the twistor level `mu` corresponds to monopole strength `-mu`:
//! `J_e(Phi(P, zeta)) = J_{e,-mu}(p, y)`.
//!
//! The reduced form on the slice is `dgamma_nu - (mu/nu^2) sigma`, with
//! `sigma` the area form of the sphere `y^2 = nu^2`; it is not constructed.

use super::monopole::{momentum_e3_mu, monopole_from_e3, MonopoleState};
use super::sphere::SphereStateEmbedded;
use super::ReducedParams;
use crate::algebra::{c, pauli, Herm2, Mat2, SpinorC2, Vec3};
use crate::e3::{E3State, OrbitParams};
use crate::error::{Error, Result};
use crate::twistor::{hopf_section, TwistorState};

/// Membership in `M_{mu,nu}` within 1e-9 relative.
pub fn m_slice_contains(s: &MonopoleState, o: &ReducedParams) -> bool {
    let py = s.p.dot(&s.y);
    let y2 = s.y.norm_squared();
    py.abs() <= 1e-9 * s.p.norm() * s.y.norm() && (y2 - o.nu * o.nu).abs() <= 1e-9 * o.nu * o.nu
}

/// The coadjoint orbit hit by the slice: `(mu', nu)` with `mu' = -mu`.
pub fn slice_orbit(o: &ReducedParams) -> Result<OrbitParams> {
    OrbitParams::new(-o.mu, o.nu)
}

/// `J_{e,mu}` restricted to `M_{mu,nu}`; rejects non-members.
pub fn momentum_e3_mu_nu(s: &MonopoleState, o: &ReducedParams) -> Result<E3State> {
    if !m_slice_contains(s, o) {
        return Err(Error::Validation(format!(
            "state is not in M(mu={}, nu={}): p.y = {}, y^2 = {}",
            o.mu,
            o.nu,
            s.p.dot(&s.y),
            s.y.norm_squared()
        )));
    }
    momentum_e3_mu(s, o.mu)
}

/// Moves a point along the `Gamma0~` flow into the slice: `t* = -p.yh`.
pub fn slice_representative(s: &MonopoleState) -> Result<MonopoleState> {
    let yh = s.y / s.y.norm();
    super::monopole::r_flow(s, -s.p.dot(&yh))
}

/// `Phi(P, zeta) = ((P - i mu/|zeta|^2) zeta, zeta)` for traceless Hermitian `P`.
pub fn phi_embedding(p: &Herm2, zeta: &SpinorC2, mu: f64) -> Result<TwistorState> {
    let n2 = zeta.norm_squared();
    if !(n2.sqrt() >= crate::twistor::ZETA_GUARD) {
        return Err(Error::Domain("Phi requires zeta != 0".into()));
    }
    let tr = p.trace();
    if tr.abs() > 1e-12 * p.matrix().norm().max(1.0) {
        return Err(Error::Validation(format!("P must be traceless, Tr P = {tr}")));
    }
    let m: Mat2 = p.matrix() - pauli(0) * c(0.0, mu / n2);
    Ok(TwistorState::new(m * zeta, *zeta))
}

/// Quotient chart `(P, zeta) -> (p, y) = (-Tr(sigma P)/2, zeta+ sigma zeta)`.
pub fn quotient_chart(p: &Herm2, zeta: &SpinorC2) -> Result<MonopoleState> {
    let x = p.to_four_vector();
    let mut y = Vec3::zeros();
    for k in 0..3 {
        y[k] = (zeta.adjoint() * pauli(k + 1) * zeta)[(0, 0)].re;
    }
    MonopoleState::new(-x.spatial(), y)
}

/// Traceless `P = -p.sigma`, inverse of the first quotient-chart component.
pub fn herm_from_momentum(p: &Vec3) -> Herm2 {
    Herm2::from_vec3(&(-p))
}

/// A twistor point over `(J, Gamma)`: the Hopf section for `zeta`, the
/// monopole section for `P` and `Phi` at the level `J0 = -J.Gamma/|Gamma|`.
pub fn twistor_from_e3(e: &E3State) -> Result<TwistorState> {
    let r = e.gamma.norm();
    if !(r > 0.0) {
        return Err(Error::Domain("Gamma = 0 has no punctured twistor preimage".into()));
    }
    let mu = -e.j.dot(&e.gamma) / r;
    let zeta = hopf_section(&e.gamma)?;
    let m = monopole_from_e3(e, -mu)?;
    phi_embedding(&herm_from_momentum(&m.p), &zeta, mu)
}

/// An embedded `T*S^3_rho` point over `(J, Gamma)` with `|Gamma| = -nu`; the
/// twistor section is moved along the `Gamma0` flow to `q.pi = 0`.
pub fn sphere_from_e3(e: &E3State, nu: f64) -> Result<SphereStateEmbedded> {
    let r = e.gamma.norm();
    if (r + nu).abs() > 1e-9 * nu.abs() {
        return Err(Error::Validation(format!(
            "|Gamma| = {r} must equal -nu = {} on T*S^3",
            -nu
        )));
    }
    let t = twistor_from_e3(e)?;
    let z2 = t.zeta.norm_squared();
    let shift = (t.zeta.adjoint() * t.theta)[(0, 0)].re / z2;
    let theta = t.theta - t.zeta * c(shift, 0.0);
    let x = TwistorState::new(theta, t.zeta).to_real();
    SphereStateEmbedded::from_slice(&x, nu)
}

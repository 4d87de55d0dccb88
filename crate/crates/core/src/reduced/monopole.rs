//! Phase space `T*R^3_0` with the magnetic-monopole symplectic form.
//!
//! Bracket: `{f, g} = f_p.g_y - f_y.g_p - (mu/|y|^3) y.(f_p x g_p)`, so
//! `{p_k, y_l} = delta_kl` and `{p_k, p_l} = -(mu/|y|^3) eps_klm y_m`.
//!
//! Realization: `J_{e,mu}(p, y) = (p x y + mu y/|y|, y)`. This is the Poisson
//! variant for the bracket above; its image satisfies `J.Gamma = mu |Gamma|`.
//! Dynamics: `dF/dt = {H, F}`.

use crate::algebra::Vec3;
use crate::e3::{
    integral_clebsch, integral_kovalevskaya, integral_zhukovskii, E3Function, E3Grad, E3State,
    GyrostatParams, Gyrostat,
};
use crate::error::{Error, Result};
use crate::twistor::IntegralKind;

/// Guard on `|y|`.
pub const Y_GUARD: f64 = 1e-12;

/// Point `(p, y)` with `y != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonopoleState {
    pub p: Vec3,
    pub y: Vec3,
}

impl MonopoleState {
    pub fn new(p: Vec3, y: Vec3) -> Result<Self> {
        let s = MonopoleState { p, y };
        s.check()?;
        Ok(s)
    }

    /// Packed as `(p1, p2, p3, y1, y2, y3)`.
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        Self::new(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.p.x, self.p.y, self.p.z, self.y.x, self.y.y, self.y.z]
    }

    pub fn check(&self) -> Result<()> {
        let r = self.y.norm();
        if !(r > Y_GUARD) || !self.p.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain(format!(
                "|y| = {r:.3e} is below the monopole guard"
            )));
        }
        Ok(())
    }
}

/// Covector `(df/dp, df/dy)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct MonopoleGrad {
    pub dp: Vec3,
    pub dy: Vec3,
}

impl MonopoleGrad {
    pub fn new(dp: Vec3, dy: Vec3) -> Self {
        MonopoleGrad { dp, dy }
    }

    /// Gradient of the `i`-th packed coordinate `(p1, p2, p3, y1, y2, y3)`.
    pub fn unit(i: usize) -> Self {
        let mut g = MonopoleGrad::default();
        if i < 3 {
            g.dp[i] = 1.0;
        } else {
            g.dy[i - 3] = 1.0;
        }
        g
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.dp.x, self.dp.y, self.dp.z, self.dy.x, self.dy.y, self.dy.z]
    }

    pub fn from_slice(x: &[f64]) -> Self {
        MonopoleGrad::new(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
    }

    pub fn norm(&self) -> f64 {
        (self.dp.norm_squared() + self.dy.norm_squared()).sqrt()
    }
}

/// Bracket of the monopole symplectic form.
pub fn monopole_bracket(f: &MonopoleGrad, g: &MonopoleGrad, s: &MonopoleState, mu: f64) -> Result<f64> {
    s.check()?;
    let r = s.y.norm();
    Ok(f.dp.dot(&g.dy) - f.dy.dot(&g.dp) - mu / (r * r * r) * s.y.dot(&f.dp.cross(&g.dp)))
}

/// `J_{e,mu}(p, y) = (p x y + mu y/|y|, y)`.
pub fn momentum_e3_mu(s: &MonopoleState, mu: f64) -> Result<E3State> {
    s.check()?;
    let yh = s.y / s.y.norm();
    Ok(E3State::new(s.p.cross(&s.y) + yh * mu, s.y))
}

/// Pulls an e(3)* covector `(a, b)` back through `J_{e,mu}`:
/// `d/dp = y x a`, `d/dy = -p x a + (mu/|y|)(a - yh (yh.a)) + b`.
pub fn pullback_monopole(s: &MonopoleState, mu: f64, g: &E3Grad) -> MonopoleGrad {
    let r = s.y.norm();
    let yh = s.y / r;
    let a = g.dj;
    MonopoleGrad::new(
        s.y.cross(&a),
        -s.p.cross(&a) + (a - yh * yh.dot(&a)) * (mu / r) + g.dgamma,
    )
}

/// Jacobian rows of `J_{e,mu}` (gradients of `J_1..J_3, Gamma_1..Gamma_3`).
pub fn momentum_e3_mu_jacobian(s: &MonopoleState, mu: f64) -> [MonopoleGrad; 6] {
    std::array::from_fn(|i| pullback_monopole(s, mu, &E3Grad::unit(i)))
}

/// `Gamma0~ = -|y|`.
pub fn gamma0_tilde(s: &MonopoleState) -> Result<f64> {
    s.check()?;
    Ok(-s.y.norm())
}

/// Gradient of `Gamma0~`.
pub fn gamma0_tilde_gradient(s: &MonopoleState) -> MonopoleGrad {
    MonopoleGrad::new(Vec3::zeros(), -s.y / s.y.norm())
}

/// Flow of `Gamma0~`: `(p + t y/|y|, y)`.
pub fn r_flow(s: &MonopoleState, t: f64) -> Result<MonopoleState> {
    s.check()?;
    let yh = s.y / s.y.norm();
    Ok(MonopoleState {
        p: s.p + yh * t,
        y: s.y,
    })
}

/// Gradient of `F o J_{e,mu}`.
pub fn monopole_lifted_gradient(h: &dyn E3Function, s: &MonopoleState, mu: f64) -> Result<MonopoleGrad> {
    let e = momentum_e3_mu(s, mu)?;
    Ok(pullback_monopole(s, mu, &h.gradient(&e)))
}

/// `H_lambda o J_{e,mu}`.
pub fn monopole_hamiltonian(p: &GyrostatParams, mu: f64, s: &MonopoleState) -> Result<f64> {
    Ok(Gyrostat(p.clone()).value(&momentum_e3_mu(s, mu)?))
}

/// Hamilton equations for a given gradient `(H_p, H_y)`:
/// `dy = H_p`, `dp_k = -H_y,k - (mu/|y|^3) y.(H_p x e_k)`.
pub fn monopole_vector_field_generic(g: &MonopoleGrad, s: &MonopoleState, mu: f64) -> (Vec3, Vec3) {
    let r = s.y.norm();
    let k = mu / (r * r * r);
    // y.(H_p x e_k) = (y x H_p)_k
    let dp = -g.dy - s.y.cross(&g.dp) * k;
    (dp, g.dp)
}

/// Field of `F o J_{e,mu}` for any `E3Function`.
pub fn monopole_flow(h: &dyn E3Function, s: &MonopoleState, mu: f64) -> Result<(Vec3, Vec3)> {
    let g = monopole_lifted_gradient(h, s, mu)?;
    Ok(monopole_vector_field_generic(&g, s, mu))
}

/// Field of the lifted gyrostat Hamiltonian, as `(dp, dy)`.
pub fn monopole_vector_field(p: &GyrostatParams, mu: f64, s: &MonopoleState) -> Result<(Vec3, Vec3)> {
    monopole_flow(&Gyrostat(p.clone()), s, mu)
}

/// Case integrals composed with `J_{e,mu}`; `Gamma0` gives `Gamma0~ = -|y|`.
pub fn monopole_integral(kind: &IntegralKind, mu: f64, s: &MonopoleState) -> Result<f64> {
    let e = momentum_e3_mu(s, mu)?;
    match *kind {
        IntegralKind::Kovalevskaya { i, chi1, chi2 } => Ok(integral_kovalevskaya(&e, i, chi1, chi2)),
        IntegralKind::Zhukovskii => Ok(integral_zhukovskii(&e)),
        IntegralKind::Clebsch { inertia, eps } => Ok(integral_clebsch(&e, inertia, eps)),
        IntegralKind::Gamma0 => gamma0_tilde(s),
        IntegralKind::J0 => Err(Error::Usage(
            "J0 is the fixed level mu on the monopole space, not a function".into(),
        )),
    }
}

/// Section of `J_{e,mu}` over `(J, Gamma)` with fiber coordinate `p.yh = 0`:
/// `y = Gamma`, `p = y x (J - mu yh)/|y|^2`. Requires `J.Gamma = mu |Gamma|`.
pub fn monopole_from_e3(e: &E3State, mu: f64) -> Result<MonopoleState> {
    let r = e.gamma.norm();
    if !(r > Y_GUARD) {
        return Err(Error::Domain("Gamma = 0 has no monopole preimage".into()));
    }
    let lhs = e.j.dot(&e.gamma);
    let scale = r * (e.j.norm() + mu.abs());
    if (lhs - mu * r).abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Validation(format!(
            "J.Gamma = {lhs} must equal mu |Gamma| = {} for monopole strength mu = {mu}",
            mu * r
        )));
    }
    let yh = e.gamma / r;
    let p = e.gamma.cross(&(e.j - yh * mu)) / (r * r);
    MonopoleState::new(p, e.gamma)
}

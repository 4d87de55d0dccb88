//! The Lie-Poisson space e(3)* = R^3 x R^3: bracket, Casimirs, gyrostat
//! Hamiltonians, the extra integrals of the Kovalevskaya, Zhukovskii and
//! Clebsch cases, the LMG Hamiltonian and coadjoint-orbit labels.
//!
//! Dynamics follow `dF/dt = {H, F}`, which gives
//! `dJ = J x dH/dJ + Gamma x dH/dGamma`, `dGamma = Gamma x dH/dJ`.

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

/// Point `(J, Gamma)` of e(3)*.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct E3State {
    pub j: Vec3,
    pub gamma: Vec3,
}

impl E3State {
    pub fn new(j: Vec3, gamma: Vec3) -> Self {
        E3State { j, gamma }
    }

    pub fn from_slice(x: &[f64]) -> Self {
        E3State {
            j: Vec3::new(x[0], x[1], x[2]),
            gamma: Vec3::new(x[3], x[4], x[5]),
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.j.x,
            self.j.y,
            self.j.z,
            self.gamma.x,
            self.gamma.y,
            self.gamma.z,
        ]
    }

    pub fn max_abs_diff(&self, other: &E3State) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        (0..6).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Covector `(dF/dJ, dF/dGamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct E3Grad {
    pub dj: Vec3,
    pub dgamma: Vec3,
}

impl E3Grad {
    pub fn new(dj: Vec3, dgamma: Vec3) -> Self {
        E3Grad { dj, dgamma }
    }

    pub fn unit(i: usize) -> Self {
        let mut g = E3Grad::default();
        if i < 3 {
            g.dj[i] = 1.0;
        } else {
            g.dgamma[i - 3] = 1.0;
        }
        g
    }

    pub fn to_array(&self) -> [f64; 6] {
        E3State::new(self.dj, self.dgamma).to_array()
    }

    pub fn from_slice(x: &[f64]) -> Self {
        let s = E3State::from_slice(x);
        E3Grad::new(s.j, s.gamma)
    }

    pub fn norm(&self) -> f64 {
        (self.dj.norm_squared() + self.dgamma.norm_squared()).sqrt()
    }
}

/// `{F, G} = J.(a_F x a_G) + Gamma.(a_F x b_G + b_F x a_G)`, where `a = dF/dJ`, `b = dF/dGamma`.
pub fn lp_bracket_e3(f: &E3Grad, g: &E3Grad, s: &E3State) -> f64 {
    s.j.dot(&f.dj.cross(&g.dj)) + s.gamma.dot(&(f.dj.cross(&g.dgamma) + f.dgamma.cross(&g.dj)))
}

/// Casimirs `(K1, K2) = (Gamma.J, Gamma^2)`.
pub fn casimirs(s: &E3State) -> (f64, f64) {
    (s.gamma.dot(&s.j), s.gamma.norm_squared())
}

/// Smooth function on e(3)* with an analytic gradient.
pub trait E3Function: Send + Sync {
    fn name(&self) -> String;
    fn value(&self, s: &E3State) -> f64;
    fn gradient(&self, s: &E3State) -> E3Grad;
}

/// Generic Hamilton equations for an arbitrary gradient.
pub fn e3_vector_field_generic(g: &E3Grad, s: &E3State) -> E3State {
    E3State {
        j: s.j.cross(&g.dj) + s.gamma.cross(&g.dgamma),
        gamma: s.gamma.cross(&g.dj),
    }
}

/// Hamilton equations of any `E3Function`.
pub fn e3_flow(h: &dyn E3Function, s: &E3State) -> E3State {
    e3_vector_field_generic(&h.gradient(s), s)
}

pub type PotentialFn = Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>;
pub type PotentialGradFn = Arc<dyn Fn(&Vec3) -> Vec3 + Send + Sync>;

/// User-supplied potential with its gradient.
#[derive(Clone)]
pub struct CustomPotential {
    pub name: String,
    pub u: PotentialFn,
    pub grad: PotentialGradFn,
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomPotential({})", self.name)
    }
}

/// Potential `U(Gamma)`.
#[derive(Clone, Debug)]
pub enum PotentialSpec {
    Zero,
    /// `chi . Gamma`.
    Linear(Vec3),
    /// `(eps/2)(I1 G1^2 + I2 G2^2 + I3 G3^2)`, using the body's inertia.
    ClebschQuadratic(f64),
    Custom(CustomPotential),
}

/// Central-difference audit of a custom gradient: step `1e-6 max(1, |Gamma|)`,
/// relative tolerance `1e-5`, at 20 seeded points with `|Gamma|` in [0.1, 5].
pub fn audit_custom_potential(p: &CustomPotential) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let dir = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let g0 = dir.normalize() * rng.gen_range(0.1..5.0);
        let h = 1e-6 * g0.norm().max(1.0);
        let analytic = (p.grad)(&g0);
        let mut fd = Vec3::zeros();
        for k in 0..3 {
            let mut e = Vec3::zeros();
            e[k] = h;
            fd[k] = ((p.u)(&(g0 + e)) - (p.u)(&(g0 - e))) / (2.0 * h);
        }
        let err = (analytic - fd).norm() / analytic.norm().max(fd.norm()).max(1.0);
        worst = worst.max(err);
        if !(err <= 1e-5) {
            return Err(Error::Validation(format!(
                "custom potential '{}' gradient fails finite-difference audit (rel err {err:.3e})",
                p.name
            )));
        }
    }
    Ok(worst)
}

/// Principal moments, gyrostatic vector and potential.
#[derive(Clone, Debug)]
pub struct GyrostatParams {
    pub inertia: [f64; 3],
    pub lambda: Vec3,
    pub potential: PotentialSpec,
}

impl GyrostatParams {
    pub fn new(inertia: [f64; 3], lambda: Vec3, potential: PotentialSpec) -> Result<Self> {
        for (k, i) in inertia.iter().enumerate() {
            if !(*i > 0.0) || !i.is_finite() {
                return Err(Error::Validation(format!(
                    "inertia I{} must be positive, got {i}",
                    k + 1
                )));
            }
        }
        if let PotentialSpec::Custom(c) = &potential {
            audit_custom_potential(c)?;
        }
        Ok(GyrostatParams {
            inertia,
            lambda,
            potential,
        })
    }

    pub fn euler(inertia: [f64; 3]) -> Result<Self> {
        Self::new(inertia, Vec3::zeros(), PotentialSpec::Zero)
    }

    /// `I1 = I2 = I`, `I3 = I/2`, `lambda = 0`, `U = chi1 G1 + chi2 G2`.
    pub fn kovalevskaya(i: f64, chi1: f64, chi2: f64) -> Result<Self> {
        Self::new(
            [i, i, 0.5 * i],
            Vec3::zeros(),
            PotentialSpec::Linear(Vec3::new(chi1, chi2, 0.0)),
        )
    }

    pub fn zhukovskii(inertia: [f64; 3], lambda: Vec3) -> Result<Self> {
        Self::new(inertia, lambda, PotentialSpec::Zero)
    }

    pub fn clebsch(inertia: [f64; 3], eps: f64) -> Result<Self> {
        Self::new(inertia, Vec3::zeros(), PotentialSpec::ClebschQuadratic(eps))
    }

    pub fn inverse_inertia(&self) -> Vec3 {
        Vec3::new(
            1.0 / self.inertia[0],
            1.0 / self.inertia[1],
            1.0 / self.inertia[2],
        )
    }

    pub fn potential(&self, g: &Vec3) -> f64 {
        match &self.potential {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Linear(chi) => chi.dot(g),
            PotentialSpec::ClebschQuadratic(eps) => {
                let i = &self.inertia;
                0.5 * eps * (i[0] * g.x * g.x + i[1] * g.y * g.y + i[2] * g.z * g.z)
            }
            PotentialSpec::Custom(c) => (c.u)(g),
        }
    }

    pub fn potential_gradient(&self, g: &Vec3) -> Vec3 {
        match &self.potential {
            PotentialSpec::Zero => Vec3::zeros(),
            PotentialSpec::Linear(chi) => *chi,
            PotentialSpec::ClebschQuadratic(eps) => {
                let i = &self.inertia;
                Vec3::new(eps * i[0] * g.x, eps * i[1] * g.y, eps * i[2] * g.z)
            }
            PotentialSpec::Custom(c) => (c.grad)(g),
        }
    }
}

/// `H = (J + lambda)^T I^-1 (J + lambda) / 2 + U(Gamma)`.
pub fn hamiltonian_gyrostat(p: &GyrostatParams, s: &E3State) -> f64 {
    let m = s.j + p.lambda;
    0.5 * m.dot(&m.component_mul(&p.inverse_inertia())) + p.potential(&s.gamma)
}

/// `(I^-1 (J + lambda), grad U(Gamma))`.
pub fn hamiltonian_gyrostat_gradient(p: &GyrostatParams, s: &E3State) -> E3Grad {
    E3Grad::new(
        (s.j + p.lambda).component_mul(&p.inverse_inertia()),
        p.potential_gradient(&s.gamma),
    )
}

/// Gyrostat Hamilton equations.
pub fn e3_vector_field(p: &GyrostatParams, s: &E3State) -> E3State {
    let w = (s.j + p.lambda).component_mul(&p.inverse_inertia());
    E3State {
        j: s.j.cross(&w) + s.gamma.cross(&p.potential_gradient(&s.gamma)),
        gamma: s.gamma.cross(&w),
    }
}

/// Gyrostat Hamiltonian as an `E3Function`.
#[derive(Clone, Debug)]
pub struct Gyrostat(pub GyrostatParams);

impl E3Function for Gyrostat {
    fn name(&self) -> String {
        "H".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        hamiltonian_gyrostat(&self.0, s)
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        hamiltonian_gyrostat_gradient(&self.0, s)
    }
}

/// `H = eps J3 + V (J1^2 - J2^2) + W (J1^2 + J2^2)`.
pub fn hamiltonian_lmg(eps: f64, v: f64, w: f64, s: &E3State) -> f64 {
    let j = &s.j;
    eps * j.z + v * (j.x * j.x - j.y * j.y) + w * (j.x * j.x + j.y * j.y)
}

#[derive(Clone, Copy, Debug)]
pub struct Lmg {
    pub eps: f64,
    pub v: f64,
    pub w: f64,
}

impl E3Function for Lmg {
    fn name(&self) -> String {
        "H".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        hamiltonian_lmg(self.eps, self.v, self.w, s)
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        let j = &s.j;
        E3Grad::new(
            Vec3::new(
                2.0 * (self.v + self.w) * j.x,
                2.0 * (self.w - self.v) * j.y,
                self.eps,
            ),
            Vec3::zeros(),
        )
    }
}

fn kov_parts(s: &E3State, i: f64, chi1: f64, chi2: f64) -> (f64, f64) {
    let (j, g) = (&s.j, &s.gamma);
    let a = (j.x * j.x - j.y * j.y) / (2.0 * i) + chi2 * g.y - chi1 * g.x;
    let b = j.x * j.y / i - chi1 * g.y - chi2 * g.x;
    (a, b)
}

/// Kovalevskaya integral.
pub fn integral_kovalevskaya(s: &E3State, i: f64, chi1: f64, chi2: f64) -> f64 {
    let (a, b) = kov_parts(s, i, chi1, chi2);
    a * a + b * b
}

/// `J^2`.
pub fn integral_zhukovskii(s: &E3State) -> f64 {
    s.j.norm_squared()
}

/// `J^2 / 2 - (eps/2)(I2 I3 G1^2 + I3 I1 G2^2 + I1 I2 G3^2)`.
pub fn integral_clebsch(s: &E3State, inertia: [f64; 3], eps: f64) -> f64 {
    let (i, g) = (&inertia, &s.gamma);
    0.5 * s.j.norm_squared()
        - 0.5 * eps * (i[1] * i[2] * g.x * g.x + i[2] * i[0] * g.y * g.y + i[0] * i[1] * g.z * g.z)
}

#[derive(Clone, Copy, Debug)]
pub struct Kovalevskaya {
    pub i: f64,
    pub chi1: f64,
    pub chi2: f64,
}

impl E3Function for Kovalevskaya {
    fn name(&self) -> String {
        "K_extra".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        integral_kovalevskaya(s, self.i, self.chi1, self.chi2)
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        let (a, b) = kov_parts(s, self.i, self.chi1, self.chi2);
        let (j, i) = (&s.j, self.i);
        let da_j = Vec3::new(j.x / i, -j.y / i, 0.0);
        let da_g = Vec3::new(-self.chi1, self.chi2, 0.0);
        let db_j = Vec3::new(j.y / i, j.x / i, 0.0);
        let db_g = Vec3::new(-self.chi2, -self.chi1, 0.0);
        E3Grad::new(
            (da_j * a + db_j * b) * 2.0,
            (da_g * a + db_g * b) * 2.0,
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Zhukovskii;

impl E3Function for Zhukovskii {
    fn name(&self) -> String {
        "K_extra".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        integral_zhukovskii(s)
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        E3Grad::new(s.j * 2.0, Vec3::zeros())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Clebsch {
    pub inertia: [f64; 3],
    pub eps: f64,
}

impl E3Function for Clebsch {
    fn name(&self) -> String {
        "K_extra".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        integral_clebsch(s, self.inertia, self.eps)
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        let (i, g) = (&self.inertia, &s.gamma);
        E3Grad::new(
            s.j,
            -Vec3::new(
                i[1] * i[2] * g.x,
                i[2] * i[0] * g.y,
                i[0] * i[1] * g.z,
            ) * self.eps,
        )
    }
}

/// `K1 = Gamma . J`.
#[derive(Clone, Copy, Debug)]
pub struct CasimirK1;

impl E3Function for CasimirK1 {
    fn name(&self) -> String {
        "K1".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        casimirs(s).0
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        E3Grad::new(s.gamma, s.j)
    }
}

/// `K2 = Gamma^2`.
#[derive(Clone, Copy, Debug)]
pub struct CasimirK2;

impl E3Function for CasimirK2 {
    fn name(&self) -> String {
        "K2".into()
    }
    fn value(&self, s: &E3State) -> f64 {
        casimirs(s).1
    }
    fn gradient(&self, s: &E3State) -> E3Grad {
        E3Grad::new(Vec3::zeros(), s.gamma * 2.0)
    }
}

/// Coordinate function: index 0..2 is `J_k`, 3..5 is `Gamma_k`.
#[derive(Clone, Copy, Debug)]
pub struct Coordinate(pub usize);

impl E3Function for Coordinate {
    fn name(&self) -> String {
        let names = ["J1", "J2", "J3", "Gamma1", "Gamma2", "Gamma3"];
        names[self.0].into()
    }
    fn value(&self, s: &E3State) -> f64 {
        s.to_array()[self.0]
    }
    fn gradient(&self, _s: &E3State) -> E3Grad {
        E3Grad::unit(self.0)
    }
}

/// Constant function.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl E3Function for Constant {
    fn name(&self) -> String {
        "const".into()
    }
    fn value(&self, _s: &E3State) -> f64 {
        self.0
    }
    fn gradient(&self, _s: &E3State) -> E3Grad {
        E3Grad::default()
    }
}

/// Orbit labels `(mu, nu)`, `nu < 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitParams {
    pub mu: f64,
    pub nu: f64,
}

impl OrbitParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(nu < 0.0) {
            return Err(Error::Validation(format!("nu must be negative, got {nu}")));
        }
        Ok(OrbitParams { mu, nu })
    }
}

/// `(mu, nu) = (-Gamma.J / |Gamma|, -|Gamma|)`.
pub fn j_ae(s: &E3State) -> Result<(f64, f64)> {
    let n = s.gamma.norm();
    if n == 0.0 {
        return Err(Error::Domain("j_ae requires Gamma != 0".into()));
    }
    Ok((-s.gamma.dot(&s.j) / n, -n))
}

/// `Delta(mu, nu) = (mu nu, nu^2)`.
pub fn delta_map(mu: f64, nu: f64) -> (f64, f64) {
    (mu * nu, nu * nu)
}

/// `J.Gamma = mu nu` and `Gamma^2 = nu^2`, each within 1e-9 relative to the
/// scales `|nu| (|mu| + |nu|)` and `nu^2`.
pub fn orbit_contains(o: &OrbitParams, s: &E3State) -> bool {
    let (k1, k2) = casimirs(s);
    let t1 = o.mu * o.nu;
    let t2 = o.nu * o.nu;
    let s1 = o.nu.abs() * (o.mu.abs() + o.nu.abs());
    (k1 - t1).abs() <= 1e-9 * s1 && (k2 - t2).abs() <= 1e-9 * t2
}

//! Twistor space as an 8-dimensional symplectic realization of e(3)*.
//!
//! Bracket (Wirtinger form, `d/dw` and `d/dw*` independent):
//! `{f, g} = f_zb g_t - g_zb f_t - (f_tb g_z - g_tb f_z)`, where `t = theta`,
//! `z = zeta` and `b` marks the conjugate variable. In the real chart this is
//! the canonical bracket `{q_mu, pi_nu} = delta`.
//!
//! `momentum_e3` returns covariant components `J_k = -J^k`, `Gamma_k = -Gamma^k`
//! of the spinor displays `J^k = (i/2)(zeta+ s_k theta - theta+ s_k zeta)`,
//! `Gamma^k = -zeta+ s_k zeta`. With `dF/dt = {H, F}` on both levels this is
//! the Poisson map; the contravariant display is anti-Poisson. The
//! contravariant form is kept as `momentum_e3_contravariant`.
//!
//! Hamilton equations: `d theta/dt = dh/d zeta*`, `d zeta/dt = -dh/d theta*`;
//! in the real chart `dq/dt = -dh/dpi`, `dpi/dt = dh/dq`.

use crate::algebra::{
    block_matrix, c, pauli, real_to_spinor, spinor_to_real, CanonicalPoint8, FourVector, Mat2,
    SpinorC2, U22Element, Vec3, C64,
};
use crate::e3::{
    casimirs, integral_clebsch, integral_kovalevskaya, integral_zhukovskii, E3Function, E3Grad,
    E3State,
};
use crate::error::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;
/// Punctured-domain guard on `|zeta|`.
pub const ZETA_GUARD: f64 = 1e-12;

/// Spinor pair `(theta, zeta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistorState {
    pub theta: SpinorC2,
    pub zeta: SpinorC2,
}

impl TwistorState {
    pub fn new(theta: SpinorC2, zeta: SpinorC2) -> Self {
        TwistorState { theta, zeta }
    }

    pub fn from_components(t1: C64, t2: C64, z1: C64, z2: C64) -> Self {
        TwistorState::new(SpinorC2::new(t1, t2), SpinorC2::new(z1, z2))
    }

    pub fn from_real(x: &[f64]) -> Self {
        let (theta, zeta) = real_to_spinor(&CanonicalPoint8::from_array(x));
        TwistorState { theta, zeta }
    }

    pub fn to_real(&self) -> [f64; 8] {
        spinor_to_real(&self.theta, &self.zeta).to_array()
    }

    /// Membership in the punctured space (`zeta != 0`).
    pub fn is_punctured(&self) -> bool {
        self.zeta.norm() >= ZETA_GUARD
    }

    pub fn require_punctured(&self) -> Result<()> {
        if self.is_punctured() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "|zeta| = {:.3e} is below the punctured-domain guard",
                self.zeta.norm()
            )))
        }
    }
}

/// `(J0, Gamma0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumA2 {
    pub j0: f64,
    pub gamma0: f64,
}

/// Wave amplitudes `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveAmplitudes {
    pub a: SpinorC2,
    pub b: SpinorC2,
}

/// Wirtinger derivatives of a function on twistor space.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct WirtingerGrad {
    pub d_theta: [C64; 2],
    pub d_zeta: [C64; 2],
    pub d_theta_bar: [C64; 2],
    pub d_zeta_bar: [C64; 2],
}

impl WirtingerGrad {
    /// From the real gradient `(d/dq, d/dpi)`.
    pub fn from_real(g: &[f64; 8]) -> Self {
        let mut w = WirtingerGrad::default();
        for j in 0..2 {
            let (zx, zy) = (g[j], g[j + 2]);
            let (tx, ty) = (g[4 + j], g[6 + j]);
            w.d_zeta[j] = c(zx, -zy) / SQRT2;
            w.d_zeta_bar[j] = c(zx, zy) / SQRT2;
            w.d_theta[j] = c(tx, -ty) / SQRT2;
            w.d_theta_bar[j] = c(tx, ty) / SQRT2;
        }
        w
    }

    /// Real gradient; exact for real-valued functions.
    pub fn to_real(&self) -> [f64; 8] {
        let mut g = [0.0; 8];
        let i = c(0.0, 1.0);
        for j in 0..2 {
            g[j] = ((self.d_zeta[j] + self.d_zeta_bar[j]) / SQRT2).re;
            g[j + 2] = ((i * (self.d_zeta[j] - self.d_zeta_bar[j])) / SQRT2).re;
            g[4 + j] = ((self.d_theta[j] + self.d_theta_bar[j]) / SQRT2).re;
            g[6 + j] = ((i * (self.d_theta[j] - self.d_theta_bar[j])) / SQRT2).re;
        }
        g
    }

    pub fn scaled_add(&mut self, s: f64, other: &WirtingerGrad) {
        let k = c(s, 0.0);
        for j in 0..2 {
            self.d_theta[j] += k * other.d_theta[j];
            self.d_zeta[j] += k * other.d_zeta[j];
            self.d_theta_bar[j] += k * other.d_theta_bar[j];
            self.d_zeta_bar[j] += k * other.d_zeta_bar[j];
        }
    }
}

/// Complex twistor bracket; the imaginary part vanishes for real functions.
pub fn twistor_bracket_complex(f: &WirtingerGrad, g: &WirtingerGrad) -> C64 {
    let mut s = c(0.0, 0.0);
    for j in 0..2 {
        s += f.d_zeta_bar[j] * g.d_theta[j] - g.d_zeta_bar[j] * f.d_theta[j];
        s -= f.d_theta_bar[j] * g.d_zeta[j] - g.d_theta_bar[j] * f.d_zeta[j];
    }
    s
}

/// Twistor bracket of real functions. The bracket has constant coefficients,
/// so the state enters only through the gradients.
pub fn twistor_bracket(f: &WirtingerGrad, g: &WirtingerGrad, _s: &TwistorState) -> f64 {
    let z = twistor_bracket_complex(f, g);
    let scale = wnorm(f) * wnorm(g);
    assert!(
        z.im.abs() <= 1e-10 * scale.max(1.0),
        "twistor bracket of real functions has imaginary part {}",
        z.im
    );
    z.re
}

fn wnorm(w: &WirtingerGrad) -> f64 {
    let mut s = 0.0;
    for j in 0..2 {
        s += w.d_theta[j].norm_sqr()
            + w.d_zeta[j].norm_sqr()
            + w.d_theta_bar[j].norm_sqr()
            + w.d_zeta_bar[j].norm_sqr();
    }
    s.sqrt()
}

/// Canonical real-chart bracket `sum dF/dq dG/dpi - dF/dpi dG/dq`.
pub fn canonical_bracket8(f: &[f64; 8], g: &[f64; 8]) -> f64 {
    (0..4).map(|m| f[m] * g[4 + m] - f[4 + m] * g[m]).sum()
}

fn herm_form(a: &SpinorC2, m: &Mat2, b: &SpinorC2) -> C64 {
    (a.adjoint() * m * b)[(0, 0)]
}

/// Covariant `e(3)*` components: `J_k = Im(zeta+ s_k theta)`, `Gamma_k = zeta+ s_k zeta`.
pub fn momentum_e3(s: &TwistorState) -> E3State {
    let mut j = Vec3::zeros();
    let mut g = Vec3::zeros();
    for k in 0..3 {
        let sk = pauli(k + 1);
        j[k] = herm_form(&s.zeta, &sk, &s.theta).im;
        g[k] = herm_form(&s.zeta, &sk, &s.zeta).re;
    }
    E3State::new(j, g)
}

/// The printed contravariant display `(J^k, Gamma^k)`.
pub fn momentum_e3_contravariant(s: &TwistorState) -> E3State {
    let e = momentum_e3(s);
    E3State::new(-e.j, -e.gamma)
}

/// `J0 = (i/2)(zeta+ theta - theta+ zeta) = -Im(zeta+ theta)`, `Gamma0 = -zeta+ zeta`.
pub fn momentum_a2(s: &TwistorState) -> MomentumA2 {
    let id = pauli(0);
    MomentumA2 {
        j0: -herm_form(&s.zeta, &id, &s.theta).im,
        gamma0: -s.zeta.norm_squared(),
    }
}

/// `J_u = [[-theta zeta+, theta theta+], [-zeta zeta+, zeta theta+]]`.
pub fn momentum_u22(s: &TwistorState) -> U22Element {
    let (t, z) = (&s.theta, &s.zeta);
    let m = block_matrix(
        &(-(t * z.adjoint())),
        &(t * t.adjoint()),
        &(-(z * z.adjoint())),
        &(z * t.adjoint()),
    );
    U22Element::repaired(m)
}

/// `(J4, Gamma4)` contravariant four-vectors read off `momentum_u22`.
pub fn momentum_four_vectors(s: &TwistorState) -> (FourVector, FourVector) {
    let e = momentum_e3_contravariant(s);
    let a = momentum_a2(s);
    (
        FourVector::from_parts(a.j0, &e.j),
        FourVector::from_parts(a.gamma0, &e.gamma),
    )
}

/// `(Gamma0)^2 - Gamma^2 = 0`, `Gamma0 <= 0`, `Gamma0 J0 - Gamma.J = 0`, within 1e-9 relative.
pub fn image_conditions(j4: &FourVector, g4: &FourVector) -> bool {
    let (g0, gv) = (g4.x0(), g4.spatial());
    let (j0, jv) = (j4.x0(), j4.spatial());
    let s1 = g0 * g0 + gv.norm_squared();
    let s2 = (g0 * j0).abs() + gv.norm() * jv.norm();
    let c1 = (g0 * g0 - gv.norm_squared()).abs() <= 1e-9 * s1;
    let c2 = g0 <= 1e-9 * (g0.abs() + gv.norm());
    let c3 = (g0 * j0 - gv.dot(&jv)).abs() <= 1e-9 * s2;
    c1 && c2 && c3
}

fn im_form_grad(s: &TwistorState, m: &Mat2) -> WirtingerGrad {
    // f = (zeta+ M theta - theta+ M zeta) / (2i)
    let k = c(0.0, -0.5);
    let zm = s.zeta.adjoint() * m;
    let tm = s.theta.adjoint() * m;
    let mt = m * s.theta;
    let mz = m * s.zeta;
    let mut w = WirtingerGrad::default();
    for j in 0..2 {
        w.d_theta[j] = k * zm[(0, j)];
        w.d_theta_bar[j] = -k * mz[j];
        w.d_zeta_bar[j] = k * mt[j];
        w.d_zeta[j] = -k * tm[(0, j)];
    }
    w
}

fn quad_form_grad(s: &TwistorState, m: &Mat2) -> WirtingerGrad {
    // g = zeta+ M zeta
    let zm = s.zeta.adjoint() * m;
    let mz = m * s.zeta;
    let mut w = WirtingerGrad::default();
    for j in 0..2 {
        w.d_zeta[j] = zm[(0, j)];
        w.d_zeta_bar[j] = mz[j];
    }
    w
}

/// Wirtinger gradients of `(J_1, J_2, J_3, Gamma_1, Gamma_2, Gamma_3)`.
pub fn momentum_e3_wirtinger(s: &TwistorState) -> [WirtingerGrad; 6] {
    let mut out = [WirtingerGrad::default(); 6];
    for k in 0..3 {
        out[k] = im_form_grad(s, &pauli(k + 1));
        out[3 + k] = quad_form_grad(s, &pauli(k + 1));
    }
    out
}

/// Wirtinger gradients of `(J0, Gamma0)`.
pub fn momentum_a2_wirtinger(s: &TwistorState) -> [WirtingerGrad; 2] {
    let mut j0 = im_form_grad(s, &pauli(0));
    let mut neg = WirtingerGrad::default();
    neg.scaled_add(-1.0, &j0);
    j0 = neg;
    let mut g0 = WirtingerGrad::default();
    g0.scaled_add(-1.0, &quad_form_grad(s, &pauli(0)));
    [j0, g0]
}

/// Real Jacobian rows of the six covariant components with respect to `(q, pi)`.
pub fn momentum_e3_jacobian_real(x: &[f64; 8]) -> [[f64; 8]; 6] {
    let s = TwistorState::from_real(x);
    momentum_e3_wirtinger(&s).map(|w| w.to_real())
}

/// Pull back an e(3)* covector through the Jacobian of `momentum_e3`.
pub fn pullback_wirtinger(s: &TwistorState, g: &E3Grad) -> WirtingerGrad {
    let rows = momentum_e3_wirtinger(s);
    let a = g.to_array();
    let mut w = WirtingerGrad::default();
    for (i, r) in rows.iter().enumerate() {
        w.scaled_add(a[i], r);
    }
    w
}

/// `H o momentum_e3`.
pub fn lifted_hamiltonian(h: &dyn E3Function, s: &TwistorState) -> f64 {
    h.value(&momentum_e3(s))
}

/// Wirtinger gradient of `H o momentum_e3` by the chain rule.
pub fn lifted_gradient(h: &dyn E3Function, s: &TwistorState) -> WirtingerGrad {
    pullback_wirtinger(s, &h.gradient(&momentum_e3(s)))
}

/// Real gradient of `H o momentum_e3` at `x = (q, pi)`.
pub fn lifted_gradient_real(h: &dyn E3Function, x: &[f64; 8]) -> [f64; 8] {
    lifted_gradient(h, &TwistorState::from_real(x)).to_real()
}

/// Complex velocities `(d theta, d zeta) = (dh/d zeta*, -dh/d theta*)`.
pub fn twistor_vector_field(h: &dyn E3Function, s: &TwistorState) -> (SpinorC2, SpinorC2) {
    let w = lifted_gradient(h, s);
    (
        SpinorC2::new(w.d_zeta_bar[0], w.d_zeta_bar[1]),
        SpinorC2::new(-w.d_theta_bar[0], -w.d_theta_bar[1]),
    )
}

/// Real-chart field `(dq, dpi) = (-dh/dpi, dh/dq)`.
pub fn twistor_real_vector_field(h: &dyn E3Function, x: &[f64; 8]) -> [f64; 8] {
    let g = lifted_gradient_real(h, x);
    let mut v = [0.0; 8];
    for m in 0..4 {
        v[m] = -g[4 + m];
        v[4 + m] = g[m];
    }
    v
}

/// `(theta, zeta) = ((a + i b*)/sqrt2, (b* + i a)/sqrt2)`.
pub fn ab_to_spinor(w: &WaveAmplitudes) -> TwistorState {
    let i = c(0.0, 1.0);
    let bc = w.b.conjugate();
    TwistorState::new((w.a + bc * i) / c(SQRT2, 0.0), (bc + w.a * i) / c(SQRT2, 0.0))
}

/// Inverse: `a = (theta - i zeta)/sqrt2`, `b = conj(zeta - i theta)/sqrt2`.
pub fn spinor_to_ab(s: &TwistorState) -> WaveAmplitudes {
    let i = c(0.0, 1.0);
    WaveAmplitudes {
        a: (s.theta - s.zeta * i) / c(SQRT2, 0.0),
        b: ((s.zeta - s.theta * i) / c(SQRT2, 0.0)).conjugate(),
    }
}

/// Integrals available on twistor space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegralKind {
    J0,
    Gamma0,
    Kovalevskaya { i: f64, chi1: f64, chi2: f64 },
    Zhukovskii,
    Clebsch { inertia: [f64; 3], eps: f64 },
}

impl IntegralKind {
    /// Parses a kind name; case parameters are supplied separately.
    pub fn from_name(name: &str, inertia: [f64; 3], chi: (f64, f64), eps: f64) -> Result<Self> {
        match name {
            "J0" => Ok(IntegralKind::J0),
            "Gamma0" => Ok(IntegralKind::Gamma0),
            "kovalevskaya" => Ok(IntegralKind::Kovalevskaya {
                i: inertia[0],
                chi1: chi.0,
                chi2: chi.1,
            }),
            "zhukovskii" => Ok(IntegralKind::Zhukovskii),
            "clebsch" => Ok(IntegralKind::Clebsch { inertia, eps }),
            other => Err(Error::Usage(format!("unknown integral kind '{other}'"))),
        }
    }
}

/// Integrals evaluated by composition with the momentum maps.
pub fn lifted_integral(kind: &IntegralKind, s: &TwistorState) -> f64 {
    match *kind {
        IntegralKind::J0 => momentum_a2(s).j0,
        IntegralKind::Gamma0 => momentum_a2(s).gamma0,
        IntegralKind::Kovalevskaya { i, chi1, chi2 } => {
            integral_kovalevskaya(&momentum_e3(s), i, chi1, chi2)
        }
        IntegralKind::Zhukovskii => integral_zhukovskii(&momentum_e3(s)),
        IntegralKind::Clebsch { inertia, eps } => integral_clebsch(&momentum_e3(s), inertia, eps),
    }
}

/// `(K1, K2) o J_e` next to `(J0 Gamma0, Gamma0^2)`.
pub fn casimir_lift_pair(s: &TwistorState) -> ((f64, f64), (f64, f64)) {
    let a = momentum_a2(s);
    (
        casimirs(&momentum_e3(s)),
        (a.j0 * a.gamma0, a.gamma0 * a.gamma0),
    )
}

pub fn momentum_e3_real(p: &CanonicalPoint8) -> E3State {
    let (theta, zeta) = real_to_spinor(p);
    momentum_e3(&TwistorState::new(theta, zeta))
}

pub fn momentum_a2_real(p: &CanonicalPoint8) -> MomentumA2 {
    let (theta, zeta) = real_to_spinor(p);
    momentum_a2(&TwistorState::new(theta, zeta))
}

/// Real gradients of `(J0, Gamma0)` at `x = (q, pi)`.
pub fn momentum_a2_gradient_real(x: &[f64; 8]) -> [[f64; 8]; 2] {
    momentum_a2_wirtinger(&TwistorState::from_real(x)).map(|w| w.to_real())
}

/// A spinor `zeta` with `zeta+ s_k zeta = gamma_k` (so `|zeta|^2 = |gamma|`).
/// Gauge: the larger of the two components is real and positive.
pub fn hopf_section(gamma: &Vec3) -> Result<SpinorC2> {
    let r = gamma.norm();
    if r == 0.0 {
        return Err(Error::Domain("Gamma = 0 has no punctured preimage".into()));
    }
    // zeta1* zeta2 = (G1 - i G2)/2 with the printed sigma_2.
    let w = c(gamma.x, -gamma.y) * 0.5;
    if r + gamma.z >= r - gamma.z {
        let z1 = ((r + gamma.z) * 0.5).sqrt();
        Ok(SpinorC2::new(c(z1, 0.0), w / z1))
    } else {
        let z2 = ((r - gamma.z) * 0.5).sqrt();
        Ok(SpinorC2::new((w / z2).conj(), c(z2, 0.0)))
    }
}

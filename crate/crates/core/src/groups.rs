//! Symmetry groups: `U(2) x| H(2)` acting on twistor space by
//! `Sigma_g(theta, zeta) = (A(theta + T zeta), A zeta)`, its coadjoint action
//! on `H(2) x H(2)`, the induced `E(3)` action on e(3)*, the `Lambda` action on
//! the `(P, zeta)` chart, and the covering `SU(2) -> SO(3)`.
//!
//! `su2_to_so3` returns `R_kl = Tr(s_k A s_l A+)/2`, the matrix of
//! `X -> A X A+`, which is a homomorphism. With the printed sigma_2,
//! `A = diag(e^{ia}, e^{-ia})` is the rotation by `+2a` about the 3-axis.
//! The printed form `Tr(s_k A+ s_l A)/2` is its transpose and reverses
//! products; it is kept as `su2_to_so3_printed`.
//!
//! On covariant e(3)* components the translation enters as
//! `T_k = -Tr(s_k T)/2`.

use crate::algebra::{c, pauli, twistor_metric, Herm2, Mat2, Mat4, SpinorC2, U22Element, Vec3};
use crate::e3::E3State;
use crate::error::{Error, Result};
use crate::twistor::{momentum_a2, momentum_e3, momentum_u22, TwistorState};
use nalgebra::Matrix3;

/// Tolerance on unitarity, determinants and traces of group elements.
pub const GROUP_TOL: f64 = 1e-10;

fn unitarity_defect(a: &Mat2) -> f64 {
    (a * a.adjoint() - pauli(0)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `g = (A, T)` with `A` unitary and `T` Hermitian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElementU2H2 {
    a: Mat2,
    t: Herm2,
}

impl GroupElementU2H2 {
    pub fn new(a: Mat2, t: Herm2) -> Result<Self> {
        let d = unitarity_defect(&a);
        if d > GROUP_TOL || a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation(format!(
                "A is not unitary (|AA+ - 1| = {d:.3e})"
            )));
        }
        Ok(GroupElementU2H2 { a, t })
    }

    pub fn identity() -> Self {
        GroupElementU2H2 {
            a: pauli(0),
            t: Herm2::zero(),
        }
    }

    pub fn a(&self) -> &Mat2 {
        &self.a
    }

    pub fn t(&self) -> &Herm2 {
        &self.t
    }

    /// Membership in `SU(2) x| H_0(2)`: `det A = 1`, `Tr T = 0`.
    pub fn is_special(&self) -> bool {
        (self.a.determinant() - c(1.0, 0.0)).norm() <= GROUP_TOL && self.t.trace().abs() <= GROUP_TOL
    }

    /// `(A1, T1)(A2, T2) = (A1 A2, T2 + A2^-1 T1 (A2+)^-1)`.
    pub fn compose(&self, other: &Self) -> Self {
        let a2i = other.a.adjoint();
        let t = other.t.matrix() + a2i * self.t.matrix() * other.a;
        GroupElementU2H2 {
            a: self.a * other.a,
            t: Herm2::symmetrized(t),
        }
    }

    /// `(A, T)^-1 = (A+, -A T A+)`.
    pub fn inverse(&self) -> Self {
        GroupElementU2H2 {
            a: self.a.adjoint(),
            t: Herm2::symmetrized(-(self.a * self.t.matrix() * self.a.adjoint())),
        }
    }

    /// The 4x4 matrix `[[A, A T], [0, A]]` of `Sigma_g` on `w = (theta, zeta)`.
    pub fn twistor_matrix(&self) -> Mat4 {
        crate::algebra::block_matrix(&self.a, &(self.a * self.t.matrix()), &Mat2::zeros(), &self.a)
    }
}

/// `Sigma_g(theta, zeta) = (A(theta + T zeta), A zeta)`.
pub fn sigma_action(g: &GroupElementU2H2, s: &TwistorState) -> TwistorState {
    TwistorState::new(g.a * (s.theta + g.t.matrix() * s.zeta), g.a * s.zeta)
}

/// The `H(2) x H(2)` momentum `(J, Gamma) = (i(theta zeta+ - zeta theta+), -2 zeta zeta+)`,
/// whose Pauli components are the contravariant `(J^k, Gamma^k)` (plus `J^0`, `Gamma^0`).
pub fn momentum_h2(s: &TwistorState) -> (Herm2, Herm2) {
    let i = c(0.0, 1.0);
    let j = (s.theta * s.zeta.adjoint() - s.zeta * s.theta.adjoint()) * i;
    let g = s.zeta * s.zeta.adjoint() * c(-2.0, 0.0);
    (Herm2::symmetrized(j), Herm2::symmetrized(g))
}

/// `(J, Gamma) -> (A(J + (i/2)[Gamma, T])A+, A Gamma A+)`.
pub fn coadjoint_u2h2(g: &GroupElementU2H2, j: &Herm2, gamma: &Herm2) -> (Herm2, Herm2) {
    let (a, t) = (&g.a, g.t.matrix());
    let gm = gamma.matrix();
    let shift = (gm * t - t * gm) * c(0.0, 0.5);
    let jn = a * (j.matrix() + shift) * a.adjoint();
    let gn = a * gm * a.adjoint();
    (Herm2::symmetrized(jn), Herm2::symmetrized(gn))
}

/// `(O, T)` in `E(3)` with `O` a rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E3GroupElement {
    pub o: Matrix3<f64>,
    pub t: Vec3,
}

impl E3GroupElement {
    pub fn new(o: Matrix3<f64>, t: Vec3) -> Result<Self> {
        let d = (o.transpose() * o - Matrix3::identity()).abs().max();
        let det = o.determinant();
        if d > GROUP_TOL || (det - 1.0).abs() > GROUP_TOL {
            return Err(Error::Validation(format!(
                "O is not a rotation (|O^T O - 1| = {d:.3e}, det = {det})"
            )));
        }
        Ok(E3GroupElement { o, t })
    }

    pub fn identity() -> Self {
        E3GroupElement {
            o: Matrix3::identity(),
            t: Vec3::zeros(),
        }
    }

    /// Image of `(A, T)`: `O = R(A)`, `T_k = -Tr(s_k T)/2`. A phase of `A` drops out.
    pub fn from_u2h2(g: &GroupElementU2H2) -> Self {
        E3GroupElement {
            o: rotation_of(&g.a),
            t: -g.t.to_four_vector().spatial(),
        }
    }
}

/// `(J, Gamma) -> (O(J + T x Gamma), O Gamma)`.
pub fn coadjoint_e3(g: &E3GroupElement, s: &E3State) -> E3State {
    E3State::new(g.o * (s.j + g.t.cross(&s.gamma)), g.o * s.gamma)
}

fn rotation_of(a: &Mat2) -> Matrix3<f64> {
    let ad = a.adjoint();
    Matrix3::from_fn(|k, l| (pauli(k + 1) * a * pauli(l + 1) * ad).trace().re * 0.5)
}

fn check_su2(a: &Mat2) -> Result<()> {
    let d = unitarity_defect(a);
    let det = a.determinant();
    if d > GROUP_TOL || (det - c(1.0, 0.0)).norm() > GROUP_TOL {
        return Err(Error::Validation(format!(
            "A is not in SU(2) (|AA+ - 1| = {d:.3e}, det = {det})"
        )));
    }
    Ok(())
}

/// `R_kl = Tr(s_k A s_l A+)/2`; a homomorphism with kernel `{1, -1}`.
pub fn su2_to_so3(a: &Mat2) -> Result<Matrix3<f64>> {
    check_su2(a)?;
    Ok(rotation_of(a))
}

/// The printed `O_kl = Tr(s_k A+ s_l A)/2`, equal to `R^T`.
pub fn su2_to_so3_printed(a: &Mat2) -> Result<Matrix3<f64>> {
    check_su2(a)?;
    let ad = a.adjoint();
    Ok(Matrix3::from_fn(|k, l| {
        (pauli(k + 1) * ad * pauli(l + 1) * a).trace().re * 0.5
    }))
}

/// `Lambda_g(P, zeta) = (A(P + T)A+, A zeta)` for traceless `P`, `T`.
pub fn lambda_action(g: &GroupElementU2H2, p: &Herm2, zeta: &SpinorC2) -> Result<(Herm2, SpinorC2)> {
    if g.t.trace().abs() > GROUP_TOL {
        return Err(Error::Validation(format!(
            "Lambda requires Tr T = 0, got {}",
            g.t.trace()
        )));
    }
    if p.trace().abs() > GROUP_TOL * p.matrix().norm().max(1.0) {
        return Err(Error::Validation(format!(
            "Lambda requires Tr P = 0, got {}",
            p.trace()
        )));
    }
    let m = g.a * (p.matrix() + g.t.matrix()) * g.a.adjoint();
    Ok((Herm2::symmetrized(m), g.a * zeta))
}

/// Momentum maps with an equivariance statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentumMapKind {
    /// `J_e` into e(3)* with the E(3) coadjoint action.
    E3,
    /// `J_a` into a(2)*, invariant.
    A2,
    /// `J_u` into u(2,2) with `rho -> G rho G*`.
    U22,
    /// `(J, Gamma)` into `H(2) x H(2)` with the printed coadjoint action.
    H2,
}

impl MomentumMapKind {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "J_e" | "e3" => Ok(MomentumMapKind::E3),
            "J_a" | "a2" => Ok(MomentumMapKind::A2),
            "J_u" | "u22" => Ok(MomentumMapKind::U22),
            "h2" => Ok(MomentumMapKind::H2),
            other => Err(Error::Usage(format!("unknown momentum map '{other}'"))),
        }
    }
}

/// Max-norm of `J(Sigma_g w) - Ad*_g J(w)`.
pub fn equivariance_check(kind: MomentumMapKind, g: &GroupElementU2H2, w: &TwistorState) -> f64 {
    let gw = sigma_action(g, w);
    match kind {
        MomentumMapKind::E3 => {
            let lhs = momentum_e3(&gw);
            let rhs = coadjoint_e3(&E3GroupElement::from_u2h2(g), &momentum_e3(w));
            lhs.max_abs_diff(&rhs)
        }
        MomentumMapKind::A2 => {
            let (a, b) = (momentum_a2(&gw), momentum_a2(w));
            (a.j0 - b.j0).abs().max((a.gamma0 - b.gamma0).abs())
        }
        MomentumMapKind::U22 => {
            let gm = g.twistor_matrix();
            let phi = twistor_metric();
            let gstar = phi * gm.adjoint() * phi;
            let rhs = gm * momentum_u22(w).matrix() * gstar;
            let lhs = *momentum_u22(&gw).matrix();
            max_abs(&(lhs - rhs))
        }
        MomentumMapKind::H2 => {
            let (jl, gl) = momentum_h2(&gw);
            let (j, gm) = momentum_h2(w);
            let (jr, gr) = coadjoint_u2h2(g, &j, &gm);
            max_abs2(&(jl.matrix() - jr.matrix())).max(max_abs2(&(gl.matrix() - gr.matrix())))
        }
    }
}

/// Whether `G` preserves the twistor metric, `G+ phi G = phi` (max-norm defect).
pub fn metric_defect(g: &GroupElementU2H2) -> f64 {
    let gm = g.twistor_matrix();
    let phi = twistor_metric();
    max_abs(&(gm.adjoint() * phi * gm - phi))
}

/// `rho -> G rho G*` on u(2,2).
pub fn adjoint_u22(g: &GroupElementU2H2, rho: &U22Element) -> U22Element {
    let gm = g.twistor_matrix();
    let phi = twistor_metric();
    U22Element::repaired(gm * rho.matrix() * phi * gm.adjoint() * phi)
}

fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

//! Pauli matrices, Hermitian 2x2 matrices, the u(2,2) Lie-Poisson space and
//! the real canonical chart of twistor space.
//!
//! sigma_2 is used as printed, `[[0, i], [-i, 0]]`, the opposite sign of the
//! common convention. Brute-force multiplication of these matrices gives
//! `s_k s_l = delta_kl s_0 - i eps_klm s_m`, hence `[s_1, s_2] = -2i s_3`.
//! The u(2,2) basis assembled from them nevertheless satisfies
//! `[J_k, J_l] = eps_klm J_m` and `[J_k, T_l] = eps_klm T_m`: the extra sign
//! from sigma_2 cancels against the factor `i/2` in `J_k`. Both tables are
//! regenerated from the matrices at run time and pinned by tests.
//!
//! Since sigma_2 is Hermitian with square one, `Tr(s_mu s_nu) = 2 delta`
//! still holds, so `x^mu = Tr(s_mu X) / 2` needs no adjustment.

use crate::error::{Error, Result};
use nalgebra::{Complex, Matrix2, Matrix4, Vector2, Vector3};

pub type C64 = Complex<f64>;
pub type Vec3 = Vector3<f64>;
pub type SpinorC2 = Vector2<C64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

/// Absolute tolerance for Hermiticity and anti-self-adjointness on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for Hermiticity of the blocks read off by `u22_decompose`.
pub const BLOCK_TOL: f64 = 1e-10;

const I: C64 = Complex { re: 0.0, im: 1.0 };
const ONE: C64 = Complex { re: 1.0, im: 0.0 };
const ZERO: C64 = Complex { re: 0.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Raw Pauli matrix `sigma_k`, k = 0..3, with the printed sigma_2.
pub fn pauli(k: usize) -> Mat2 {
    match k {
        0 => Mat2::new(ONE, ZERO, ZERO, ONE),
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, I, -I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn pauli_basis() -> [Herm2; 4] {
    [0, 1, 2, 3].map(|k| Herm2(pauli(k)))
}

/// Complex coefficients `c_mu = Tr(s_mu M) / 2` of `M = c_mu s_mu`.
pub fn pauli_expand(m: &Mat2) -> [C64; 4] {
    [0, 1, 2, 3].map(|mu| (pauli(mu) * m).trace() * 0.5)
}

/// Brute-force table of `s_k s_l` expanded in the Pauli basis, k, l = 0..3.
pub fn pauli_product_table() -> [[[C64; 4]; 4]; 4] {
    let mut t = [[[ZERO; 4]; 4]; 4];
    for (k, row) in t.iter_mut().enumerate() {
        for (l, cell) in row.iter_mut().enumerate() {
            *cell = pauli_expand(&(pauli(k) * pauli(l)));
        }
    }
    t
}

pub fn commutator2(a: &Mat2, b: &Mat2) -> Mat2 {
    a * b - b * a
}

pub fn commutator4(a: &Mat4, b: &Mat4) -> Mat4 {
    a * b - b * a
}

fn max_abs2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs4(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Minkowski four-vector `(x^0, x^1, x^2, x^3)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    pub fn from_parts(x0: f64, v: &Vec3) -> Self {
        FourVector([x0, v.x, v.y, v.z])
    }

    pub fn x0(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> Vec3 {
        Vec3::new(self.0[1], self.0[2], self.0[3])
    }

    /// `eta_{mu nu} x^mu x^nu` with signature (+,-,-,-).
    pub fn minkowski_square(&self) -> f64 {
        let x = &self.0;
        x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3]
    }

    /// Lowered components `x_mu = eta_{mu nu} x^nu`.
    pub fn lowered(&self) -> FourVector {
        let x = &self.0;
        FourVector([x[0], -x[1], -x[2], -x[3]])
    }

    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        (0..4).map(|i| (self.0[i] - other.0[i]).abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, k: f64) -> FourVector {
        FourVector(self.0.map(|v| v * k))
    }
}

/// Hermitian 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Herm2(Mat2);

impl Herm2 {
    /// Validating constructor (absolute tolerance `HERMITIAN_TOL`).
    pub fn new(m: Mat2) -> Result<Self> {
        let dev = max_abs2(&(m - m.adjoint()));
        if dev > HERMITIAN_TOL || m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian (deviation {dev:.3e})"
            )));
        }
        Ok(Herm2(Self::symmetrize(&m)))
    }

    /// Repair constructor: projects onto the Hermitian part.
    pub fn symmetrized(m: Mat2) -> Self {
        Herm2(Self::symmetrize(&m))
    }

    fn symmetrize(m: &Mat2) -> Mat2 {
        (m + m.adjoint()) * c(0.5, 0.0)
    }

    pub fn zero() -> Self {
        Herm2(Mat2::zeros())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn from_four_vector(x: &FourVector) -> Self {
        let mut m = Mat2::zeros();
        for mu in 0..4 {
            m += pauli(mu) * c(x.0[mu], 0.0);
        }
        Herm2(m)
    }

    /// Spatial part `v_k s_k`.
    pub fn from_vec3(v: &Vec3) -> Self {
        Self::from_four_vector(&FourVector::from_parts(0.0, v))
    }

    pub fn to_four_vector(&self) -> FourVector {
        let e = pauli_expand(&self.0);
        FourVector(e.map(|z| z.re))
    }

    pub fn det(&self) -> f64 {
        self.0.determinant().re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

pub fn herm2_from_four_vector(x: &FourVector) -> Herm2 {
    Herm2::from_four_vector(x)
}

/// Inverse of `herm2_from_four_vector`; rejects non-Hermitian input.
pub fn four_vector_from_herm2(m: &Mat2) -> Result<FourVector> {
    Ok(Herm2::new(*m)?.to_four_vector())
}

/// The fixed twistor metric `phi = i [[0, -s0], [s0, 0]]`, with `phi^2 = 1`.
pub fn twistor_metric() -> Mat4 {
    let mut phi = Mat4::zeros();
    phi[(0, 2)] = -I;
    phi[(1, 3)] = -I;
    phi[(2, 0)] = I;
    phi[(3, 1)] = I;
    phi
}

/// `rho* = phi rho^+ phi`.
pub fn twistor_adjoint(m: &Mat4) -> Mat4 {
    let phi = twistor_metric();
    phi * m.adjoint() * phi
}

pub fn block_matrix(a: &Mat2, b: &Mat2, cc: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(cc);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

pub fn blocks(m: &Mat4) -> (Mat2, Mat2, Mat2, Mat2) {
    (
        m.fixed_view::<2, 2>(0, 0).into_owned(),
        m.fixed_view::<2, 2>(0, 2).into_owned(),
        m.fixed_view::<2, 2>(2, 0).into_owned(),
        m.fixed_view::<2, 2>(2, 2).into_owned(),
    )
}

/// Element of u(2,2): `rho + phi rho^+ phi = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U22Element(Mat4);

/// Sector of the u(2,2) basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    J,
    Gamma,
    L,
    K,
}

impl U22Element {
    /// Validating constructor. The tolerance `HERMITIAN_TOL` is scaled by
    /// `max(1, max |rho_ij|)` so large elements are not rejected for rounding.
    pub fn new(m: Mat4) -> Result<Self> {
        let dev = max_abs4(&(m + twistor_adjoint(&m)));
        let scale = max_abs4(&m).max(1.0);
        if dev > HERMITIAN_TOL * scale || m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation(format!(
                "matrix is not in u(2,2) (deviation {dev:.3e})"
            )));
        }
        Ok(U22Element(m))
    }

    /// Repair constructor: `(rho - rho*) / 2`.
    pub fn repaired(m: Mat4) -> Self {
        U22Element((m - twistor_adjoint(&m)) * c(0.5, 0.0))
    }

    pub fn zero() -> Self {
        U22Element(Mat4::zeros())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// `rho = (1/2) [[L + iJ, K], [Gamma, -L + iJ]]`.
    pub fn from_parts(j: &FourVector, gamma: &FourVector, l: &FourVector, k: &FourVector) -> Self {
        let jm = *Herm2::from_four_vector(j).matrix();
        let gm = *Herm2::from_four_vector(gamma).matrix();
        let lm = *Herm2::from_four_vector(l).matrix();
        let km = *Herm2::from_four_vector(k).matrix();
        let h = c(0.5, 0.0);
        U22Element(block_matrix(
            &((lm + jm * I) * h),
            &(km * h),
            &(gm * h),
            &((-lm + jm * I) * h),
        ))
    }

    /// Reads `(J, Gamma, L, K)` off the block form.
    pub fn decompose(&self) -> Result<(FourVector, FourVector, FourVector, FourVector)> {
        let (a, b, cc, d) = blocks(&self.0);
        let j = (a + d) * (-I);
        let l = a - d;
        let k = b * c(2.0, 0.0);
        let g = cc * c(2.0, 0.0);
        let mut out = [FourVector::default(); 4];
        for (slot, (name, m)) in out
            .iter_mut()
            .zip([("J", j), ("Gamma", g), ("L", l), ("K", k)])
        {
            let dev = max_abs2(&(m - m.adjoint()));
            if dev > BLOCK_TOL * max_abs2(&m).max(1.0) {
                return Err(Error::Validation(format!(
                    "block {name} is not Hermitian (deviation {dev:.3e})"
                )));
            }
            *slot = Herm2::symmetrized(m).to_four_vector();
        }
        Ok((out[0], out[1], out[2], out[3]))
    }

    /// Basis element: `J_mu = diag(i s_mu, i s_mu)/2`, `L_mu = diag(s_mu, -s_mu)/2`,
    /// `T_mu` with `s_mu` in the upper right block, `A_mu` in the lower left.
    pub fn basis(sector: Sector, mu: usize) -> Self {
        let s = pauli(mu);
        let z = Mat2::zeros();
        let h = c(0.5, 0.0);
        let m = match sector {
            Sector::J => block_matrix(&(s * I * h), &z, &z, &(s * I * h)),
            Sector::L => block_matrix(&(s * h), &z, &z, &(-s * h)),
            Sector::Gamma => block_matrix(&z, &s, &z, &z),
            Sector::K => block_matrix(&z, &z, &s, &z),
        };
        U22Element(m)
    }

    /// `X` with `Tr(rho X)` equal to the contravariant coordinate of `rho`:
    /// `J^mu = -Tr(rho J_mu)`, `Gamma^mu = Tr(rho T_mu)`, `L^mu = Tr(rho L_mu)`,
    /// `K^mu = Tr(rho A_mu)`.
    pub fn contravariant_coordinate(sector: Sector, mu: usize) -> Self {
        let b = Self::basis(sector, mu);
        match sector {
            Sector::J => b.scale(-1.0),
            _ => b,
        }
    }

    /// `X` with `Tr(rho X)` equal to the lowered coordinate `eta_{mu mu} x^mu`.
    pub fn lowered_coordinate(sector: Sector, mu: usize) -> Self {
        let x = Self::contravariant_coordinate(sector, mu);
        if mu == 0 {
            x
        } else {
            x.scale(-1.0)
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        U22Element(self.0 * c(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        U22Element(self.0 + other.0)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        U22Element(commutator4(&self.0, &other.0))
    }

    /// Linear function `rho -> Tr(rho X)`.
    pub fn linear(&self, x: &Self) -> f64 {
        u22_pairing(self, x)
    }
}

/// Ad-invariant pairing `Tr(XY)`; real on u(2,2).
pub fn u22_pairing(x: &U22Element, y: &U22Element) -> f64 {
    let t = (x.0 * y.0).trace();
    let scale = (max_abs4(&x.0) * max_abs4(&y.0)).max(1.0);
    assert!(
        t.im.abs() < 1e-10 * scale,
        "pairing of u(2,2) elements has imaginary part {}",
        t.im
    );
    t.re
}

/// Lie-Poisson bracket `Tr(rho [dF, dG])`.
pub fn u22_lp_bracket<F, G>(df: F, dg: G, rho: &U22Element) -> f64
where
    F: Fn(&U22Element) -> U22Element,
    G: Fn(&U22Element) -> U22Element,
{
    let a = df(rho);
    let b = dg(rho);
    u22_pairing(rho, &a.commutator(&b))
}

/// Hamiltonian vector field `d rho / dt = [rho, dH]`.
pub fn u22_vector_field<H>(dh: H, rho: &U22Element) -> U22Element
where
    H: Fn(&U22Element) -> U22Element,
{
    rho.commutator(&dh(rho))
}

/// Real canonical coordinates `(q, pi)` of twistor space.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CanonicalPoint8 {
    pub q: [f64; 4],
    pub pi: [f64; 4],
}

impl CanonicalPoint8 {
    pub fn from_array(x: &[f64]) -> Self {
        CanonicalPoint8 {
            q: [x[0], x[1], x[2], x[3]],
            pi: [x[4], x[5], x[6], x[7]],
        }
    }

    pub fn to_array(&self) -> [f64; 8] {
        let (q, p) = (&self.q, &self.pi);
        [q[0], q[1], q[2], q[3], p[0], p[1], p[2], p[3]]
    }
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// `(q0, q1) = sqrt2 Re zeta`, `(q2, q3) = sqrt2 Im zeta`, same for `pi` and `theta`.
pub fn spinor_to_real(theta: &SpinorC2, zeta: &SpinorC2) -> CanonicalPoint8 {
    CanonicalPoint8 {
        q: [
            SQRT2 * zeta[0].re,
            SQRT2 * zeta[1].re,
            SQRT2 * zeta[0].im,
            SQRT2 * zeta[1].im,
        ],
        pi: [
            SQRT2 * theta[0].re,
            SQRT2 * theta[1].re,
            SQRT2 * theta[0].im,
            SQRT2 * theta[1].im,
        ],
    }
}

/// Inverse of `spinor_to_real`, returning `(theta, zeta)`.
pub fn real_to_spinor(p: &CanonicalPoint8) -> (SpinorC2, SpinorC2) {
    let (q, pi) = (&p.q, &p.pi);
    let zeta = SpinorC2::new(c(q[0], q[2]) / SQRT2, c(q[1], q[3]) / SQRT2);
    let theta = SpinorC2::new(c(pi[0], pi[2]) / SQRT2, c(pi[1], pi[3]) / SQRT2);
    (theta, zeta)
}

pub fn levi_civita(k: usize, l: usize, m: usize) -> f64 {
    match (k, l, m) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Index completing `(k, l)` to a permutation of `(0, 1, 2)`; `k != l`.
pub fn third_index(k: usize, l: usize) -> usize {
    3 - k - l
}

/// Skew matrix `[v]_x` with `[v]_x w = v x w`.
pub fn cross_matrix(v: &Vec3) -> nalgebra::Matrix3<f64> {
    nalgebra::Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

//! Seeded samplers for states, group elements and algebra elements.
//! Everything draws from `ChaCha8Rng`, so results are reproducible per seed.

use crate::algebra::{c, pauli, FourVector, Herm2, Mat2, SpinorC2, U22Element, Vec3, C64};
use crate::e3::E3State;
use crate::groups::GroupElementU2H2;
use crate::reduced::{MonopoleState, SphereStateMoser};
use crate::twistor::TwistorState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sampling domains; each excludes the guard region of its space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingBounds {
    pub zeta: (f64, f64),
    pub y: (f64, f64),
    pub gamma: (f64, f64),
    /// Scale of unconstrained Gaussian components.
    pub scale: f64,
}

impl Default for SamplingBounds {
    fn default() -> Self {
        SamplingBounds {
            zeta: (0.1, 3.0),
            y: (0.1, 5.0),
            gamma: (0.1, 3.0),
            scale: 1.0,
        }
    }
}

pub fn normal(rng: &mut SampleRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_vec3(rng: &mut SampleRng, scale: f64) -> Vec3 {
    Vec3::new(normal(rng), normal(rng), normal(rng)) * scale
}

/// Uniform direction with norm uniform in `[lo, hi]`.
pub fn random_vec3_norm_in(rng: &mut SampleRng, lo: f64, hi: f64) -> Vec3 {
    let v = random_vec3(rng, 1.0);
    v / v.norm() * rng.gen_range(lo..=hi)
}

pub fn random_complex(rng: &mut SampleRng) -> C64 {
    c(normal(rng), normal(rng))
}

pub fn random_spinor(rng: &mut SampleRng, scale: f64) -> SpinorC2 {
    SpinorC2::new(random_complex(rng), random_complex(rng)) * c(scale, 0.0)
}

pub fn random_spinor_norm_in(rng: &mut SampleRng, lo: f64, hi: f64) -> SpinorC2 {
    let v = random_spinor(rng, 1.0);
    v * c(rng.gen_range(lo..=hi) / v.norm(), 0.0)
}

/// `theta` Gaussian, `|zeta|` in the configured band.
pub fn random_twistor(rng: &mut SampleRng, b: &SamplingBounds) -> TwistorState {
    let theta = random_spinor(rng, b.scale);
    let zeta = random_spinor_norm_in(rng, b.zeta.0, b.zeta.1);
    TwistorState::new(theta, zeta)
}

pub fn random_e3(rng: &mut SampleRng, b: &SamplingBounds) -> E3State {
    let j = random_vec3(rng, b.scale);
    let g = random_vec3_norm_in(rng, b.gamma.0, b.gamma.1);
    E3State::new(j, g)
}

pub fn random_monopole(rng: &mut SampleRng, b: &SamplingBounds) -> MonopoleState {
    let p = random_vec3(rng, b.scale);
    let y = random_vec3_norm_in(rng, b.y.0, b.y.1);
    MonopoleState::new(p, y).expect("sampling band excludes y = 0")
}

/// Moser point with `|y|` in `[0, 3]` and Gaussian `p`.
pub fn random_moser(rng: &mut SampleRng, b: &SamplingBounds) -> SphereStateMoser {
    let y = random_vec3_norm_in(rng, 0.0, 3.0);
    let p = random_vec3(rng, b.scale);
    SphereStateMoser::new(y, p).expect("finite sample")
}

/// `[[a, -b*], [b, a*]]` from a normalized random `(a, b)`.
pub fn random_su2(rng: &mut SampleRng) -> Mat2 {
    let v = random_spinor(rng, 1.0);
    let v = v / c(v.norm(), 0.0);
    Mat2::new(v[0], -v[1].conj(), v[1], v[0].conj())
}

pub fn random_u2(rng: &mut SampleRng) -> Mat2 {
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    random_su2(rng) * C64::from_polar(1.0, phase)
}

pub fn random_herm(rng: &mut SampleRng, scale: f64) -> Herm2 {
    let x = FourVector::new(normal(rng), normal(rng), normal(rng), normal(rng));
    Herm2::symmetrized(*Herm2::from_four_vector(&x).matrix() * c(scale, 0.0))
}

pub fn random_traceless_herm(rng: &mut SampleRng, scale: f64) -> Herm2 {
    Herm2::from_vec3(&random_vec3(rng, scale))
}

/// Random element of `SU(2) x| H_0(2)`.
pub fn random_group_special(rng: &mut SampleRng) -> GroupElementU2H2 {
    let a = random_su2(rng);
    let t = random_traceless_herm(rng, 1.0);
    GroupElementU2H2::new(a, t).expect("sampled unitary")
}

/// Random element of `U(2) x| H(2)`.
pub fn random_group(rng: &mut SampleRng) -> GroupElementU2H2 {
    let a = random_u2(rng);
    let t = random_herm(rng, 1.0);
    GroupElementU2H2::new(a, t).expect("sampled unitary")
}

/// Random phase element `(e^{it} 1, 0)` of the circle subgroup.
pub fn random_phase(rng: &mut SampleRng) -> GroupElementU2H2 {
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    GroupElementU2H2::new(pauli(0) * C64::from_polar(1.0, t), Herm2::zero()).expect("unitary")
}

pub fn random_four_vector(rng: &mut SampleRng, scale: f64) -> FourVector {
    FourVector::new(normal(rng), normal(rng), normal(rng), normal(rng)) * scale
}

pub fn random_u22(rng: &mut SampleRng, scale: f64) -> U22Element {
    U22Element::from_parts(
        &random_four_vector(rng, scale),
        &random_four_vector(rng, scale),
        &random_four_vector(rng, scale),
        &random_four_vector(rng, scale),
    )
}

//! Structural checks. Each function returns one or more `CheckResult`s whose
//! residual is the worst normalized defect over the sampled points.

use super::{rel_residual, CheckResult, SuiteConfig};
use crate::algebra::{c, levi_civita, third_index, CanonicalPoint8, Sector, U22Element, Vec3, C64};
use crate::dynamics::{integrate, FlowSpec, IntegratorConfig, Realization};
use crate::e3::{
    lp_bracket_e3, CasimirK1, CasimirK2, Coordinate, E3Function, E3Grad, E3State, Gyrostat, GyrostatParams,
    PotentialSpec,
};
use crate::error::Result;
use crate::groups::{
    equivariance_check, lambda_action, sigma_action, su2_to_so3, coadjoint_e3, E3GroupElement, MomentumMapKind,
};
use crate::reduced::monopole::{
    gamma0_tilde, gamma0_tilde_gradient, momentum_e3_mu, momentum_e3_mu_jacobian, monopole_bracket, MonopoleGrad,
    MonopoleState,
};
use crate::reduced::slice::phi_embedding;
use crate::reduced::sphere::{
    momentum_e3_nu, moser_bracket, moser_j0_gradient, moser_jacobian, moser_lifted_gradient, moser_momenta,
    stereo_to_sphere, SphereState, SphereStateMoser,
};
use crate::sampling::{
    normal, random_e3, random_group, random_group_special, random_monopole, random_moser, random_phase,
    random_spinor_norm_in, random_su2, random_traceless_herm, random_twistor, random_u22,
    SampleRng, SamplingBounds,
};
use crate::scenario::Scenario;
use crate::twistor::{
    canonical_bracket8, lifted_gradient_real, momentum_a2, momentum_a2_gradient_real, momentum_a2_real,
    momentum_a2_wirtinger, momentum_e3, momentum_e3_jacobian_real, momentum_e3_real, momentum_e3_wirtinger,
    momentum_u22, twistor_bracket, TwistorState, WirtingerGrad,
};
use rayon::prelude::*;
use std::sync::Arc;

pub const BRACKET_TOL: f64 = 1e-10;
pub const JACOBI_TOL: f64 = 1e-9;
pub const POISSON_MAP_TOL: f64 = 1e-9;
pub const DUAL_PAIR_TOL: f64 = 1e-10;
pub const EQUIVARIANCE_TOL: f64 = 1e-10;
pub const SU2_TOL: f64 = 1e-12;
pub const RELATEDNESS_TOL: f64 = 1e-5;
pub const INVOLUTION_TOL: f64 = 1e-8;
pub const GRADIENT_TOL: f64 = 1e-5;

/// Monopole strengths exercised by the bracket, Jacobi and Poisson-map checks.
pub const MONOPOLE_MUS: [f64; 3] = [0.0, 0.7, 2.0];
/// Gamma0 levels exercised on `T*S^3`.
pub const SPHERE_NUS: [f64; 2] = [-1.0, -2.5];

fn result(cfg: &SuiteConfig, name: &str, residual: f64, default_tol: f64) -> CheckResult {
    CheckResult::new(name, residual, cfg.threshold(default_tol), cfg.samples, cfg.seed)
}

fn unit8(i: usize) -> [f64; 8] {
    let mut e = [0.0; 8];
    e[i] = 1.0;
    e
}

/// Canonical real-chart structure: `{q_m, pi_n} = delta_mn`.
fn omega8(a: usize, b: usize) -> f64 {
    if a < 4 && b == a + 4 {
        1.0
    } else if b < 4 && a == b + 4 {
        -1.0
    } else {
        0.0
    }
}

// Independent bracket tables

/// e(3)* table: `{J_k, J_l} = eps J_m`, `{J_k, G_l} = {G_k, J_l} = eps G_m`, `{G, G} = 0`.
pub fn e3_table(i: usize, j: usize, e: &E3State) -> f64 {
    let (k, l) = (i % 3, j % 3);
    if k == l {
        return 0.0;
    }
    let m = third_index(k, l);
    let eps = levi_civita(k, l, m);
    match (i < 3, j < 3) {
        (true, true) => eps * e.j[m],
        (true, false) | (false, true) => eps * e.gamma[m],
        (false, false) => 0.0,
    }
}

/// Monopole table on `(p, y)`: `{p_k, y_l} = delta`, `{p_k, p_l} = -mu eps y_m / |y|^3`.
pub fn monopole_table(i: usize, j: usize, s: &MonopoleState, mu: f64) -> f64 {
    let r3 = s.y.norm().powi(3);
    match (i < 3, j < 3) {
        (true, true) => {
            let (k, l) = (i, j);
            if k == l {
                0.0
            } else {
                let m = third_index(k, l);
                -mu * levi_civita(k, l, m) * s.y[m] / r3
            }
        }
        (true, false) => (i == j - 3) as u8 as f64,
        (false, true) => -((i - 3 == j) as u8 as f64),
        (false, false) => 0.0,
    }
}

/// `d/dx_n` of the monopole Poisson tensor entry `P_ij`, coordinates `(p, y)`.
fn monopole_tensor_derivative(i: usize, j: usize, n: usize, s: &MonopoleState, mu: f64) -> f64 {
    if !(i < 3 && j < 3 && n >= 3) || i == j {
        return 0.0;
    }
    let y = &s.y;
    let r = y.norm();
    let yn = n - 3;
    let m = third_index(i, j);
    let e = levi_civita(i, j, m);
    // P = -mu eps_ijm y_m / r^3
    let dm = if m == yn { 1.0 } else { 0.0 };
    -mu * e * (dm / r.powi(3) - 3.0 * y[m] * y[yn] / r.powi(5))
}

// Brackets

/// Printed coordinate bracket relations on every space, plus the u(2,2) sector tables.
pub fn bracket_table_check(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = cfg.bounds;

    // e(3)*
    let mut rng = cfg.rng_for("brackets/e3");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let e = random_e3(&mut rng, &b);
        for i in 0..6 {
            for j in 0..6 {
                let lhs = lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(j), &e);
                worst = worst.max(rel_residual(lhs, e3_table(i, j, &e)));
            }
        }
    }
    out.push(result(cfg, "brackets/e3", worst, BRACKET_TOL));

    // (e(3) + a(2))* through the twistor lifts
    let mut rng = cfg.rng_for("brackets/e3-a2-twistor");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_twistor(&mut rng, &b);
        let e = momentum_e3(&s);
        let we = momentum_e3_wirtinger(&s);
        let wa = momentum_a2_wirtinger(&s);
        let w: Vec<WirtingerGrad> = we.iter().chain(wa.iter()).copied().collect();
        for i in 0..8 {
            for j in 0..8 {
                let lhs = twistor_bracket(&w[i], &w[j], &s);
                let rhs = if i < 6 && j < 6 { e3_table(i, j, &e) } else { 0.0 };
                worst = worst.max(rel_residual(lhs, rhs));
            }
        }
    }
    out.push(result(cfg, "brackets/e3-a2-twistor", worst, BRACKET_TOL));

    // canonical twistor chart through the Wirtinger calculus
    let mut worst: f64 = 0.0;
    for a in 0..8 {
        for bb in 0..8 {
            let fa = WirtingerGrad::from_real(&unit8(a));
            let fb = WirtingerGrad::from_real(&unit8(bb));
            let s = TwistorState::from_real(&[0.0; 8]);
            let lhs = twistor_bracket(&fa, &fb, &s);
            worst = worst.max(rel_residual(lhs, omega8(a, bb)));
        }
    }
    out.push(result(cfg, "brackets/twistor-canonical", worst, BRACKET_TOL));

    // monopole space
    for mu in MONOPOLE_MUS {
        let name = format!("brackets/monopole-mu{mu}");
        let mut rng = cfg.rng_for(&name);
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let s = random_monopole(&mut rng, &b);
            for i in 0..6 {
                for j in 0..6 {
                    let lhs = monopole_bracket(&MonopoleGrad::unit(i), &MonopoleGrad::unit(j), &s, mu)
                        .expect("sampled away from y = 0");
                    worst = worst.max(rel_residual(lhs, monopole_table(i, j, &s, mu)));
                }
            }
        }
        out.push(result(cfg, &name, worst, BRACKET_TOL));
    }

    out.extend(u22_sector_checks(cfg));
    out
}

/// Right-hand side of one printed sector relation: `sum coeff * x_(sector, mu)`.
type Rhs = Vec<(C64, Sector, usize)>;

struct SectorRow {
    family: &'static str,
    sector: &'static str,
    a: (Sector, usize),
    b: (Sector, usize),
    rhs: Rhs,
}

fn eps_rows(
    out: &mut Vec<SectorRow>,
    family: &'static str,
    sector: &'static str,
    sa: Sector,
    sb: Sector,
    coeff: C64,
    target: Option<Sector>,
) {
    for k in 1..=3 {
        for l in 1..=3 {
            let rhs = match target {
                Some(t) if k != l => {
                    let m = third_index(k - 1, l - 1);
                    vec![(coeff * levi_civita(k - 1, l - 1, m), t, m + 1)]
                }
                _ => Vec::new(),
            };
            out.push(SectorRow {
                family,
                sector,
                a: (sa, k),
                b: (sb, l),
                rhs,
            });
        }
    }
}

fn zero_rows(
    out: &mut Vec<SectorRow>,
    family: &'static str,
    sector: &'static str,
    a: &[(Sector, usize)],
    b: &[(Sector, usize)],
) {
    for &x in a {
        for &y in b {
            out.push(SectorRow {
                family,
                sector,
                a: x,
                b: y,
                rhs: Vec::new(),
            });
        }
    }
}

/// The printed u(2,2) sector tables in lowered coordinates.
fn sector_rows() -> Vec<SectorRow> {
    use Sector::*;
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let sp = |s: Sector| -> Vec<(Sector, usize)> { (1..=3).map(|k| (s, k)).collect() };
    let all = |s: Sector| -> Vec<(Sector, usize)> { (0..=3).map(|k| (s, k)).collect() };
    let mut r = Vec::new();
    // (i) e(3)
    eps_rows(&mut r, "{J_k,J_l}", "i", J, J, one, Some(J));
    eps_rows(&mut r, "{J_k,Gamma_l}", "i", J, Gamma, one, Some(Gamma));
    eps_rows(&mut r, "{Gamma_k,Gamma_l}", "i", Gamma, Gamma, one, None);
    // (ii) a(2) commutes with everything in (i) and with itself
    zero_rows(&mut r, "{J_0,J_l}", "ii", &[(J, 0)], &sp(J));
    zero_rows(&mut r, "{J_0,Gamma_l}", "ii", &[(J, 0)], &sp(Gamma));
    zero_rows(&mut r, "{J_0,Gamma_0}", "ii", &[(J, 0)], &[(Gamma, 0)]);
    zero_rows(&mut r, "{Gamma_0,J_l}", "ii", &[(Gamma, 0)], &sp(J));
    zero_rows(&mut r, "{Gamma_0,Gamma_l}", "ii", &[(Gamma, 0)], &sp(Gamma));
    // (iii) L sector
    eps_rows(&mut r, "{J_k,L_l}", "iii", J, L, one, Some(L));
    eps_rows(&mut r, "{Gamma_k,L_l}", "iii", Gamma, L, i, Some(Gamma));
    eps_rows(&mut r, "{L_k,L_l}", "iii", L, L, one, Some(J));
    for mu in 0..=3 {
        r.push(SectorRow {
            family: "{Gamma_0,L_mu}",
            sector: "iii",
            a: (Gamma, 0),
            b: (L, mu),
            rhs: vec![(one, Gamma, mu)],
        });
    }
    zero_rows(&mut r, "{J_0,L_mu}", "iii", &[(J, 0)], &all(L));
    zero_rows(&mut r, "{L_0,L_k}", "iii", &[(L, 0)], &sp(L));
    zero_rows(&mut r, "{L_0,J_k}", "iii", &[(L, 0)], &sp(J));
    // (iv) K sector
    zero_rows(&mut r, "{K_mu,K_nu}", "iv", &all(K), &all(K));
    eps_rows(&mut r, "{L_k,K_l}", "iv", L, K, -i, Some(K));
    eps_rows(&mut r, "{Gamma_k,K_l}", "iv", Gamma, K, c(0.5, 0.0), Some(J));
    eps_rows(&mut r, "{J_k,K_l}", "iv", J, K, one, Some(K));
    zero_rows(&mut r, "{J_0,K_l}", "iv", &[(J, 0)], &sp(K));
    zero_rows(&mut r, "{Gamma_0,K_l}", "iv", &[(Gamma, 0)], &sp(K));
    zero_rows(&mut r, "{L_0,K_l}", "iv", &[(L, 0)], &sp(K));
    r
}

/// Sectors (i)-(ii) gate; sectors (iii)-(iv) are reported per family without gating.
fn u22_sector_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let rows = sector_rows();
    let mut rng = cfg.rng_for("brackets/u22");
    let rhos: Vec<U22Element> = (0..cfg.samples).map(|_| random_u22(&mut rng, 1.0)).collect();
    let mut by_family: Vec<(&str, &str, f64)> = Vec::new();
    for row in &rows {
        let xa = U22Element::lowered_coordinate(row.a.0, row.a.1);
        let xb = U22Element::lowered_coordinate(row.b.0, row.b.1);
        let br = xa.commutator(&xb);
        let mut worst: f64 = 0.0;
        for rho in &rhos {
            let lhs = rho.linear(&br);
            let rhs: C64 = row
                .rhs
                .iter()
                .map(|(k, s, mu)| *k * rho.linear(&U22Element::lowered_coordinate(*s, *mu)))
                .sum();
            worst = worst.max((c(lhs, 0.0) - rhs).norm() / (1.0 + rhs.norm()));
        }
        match by_family.iter_mut().find(|(f, _, _)| *f == row.family) {
            Some(e) => e.2 = e.2.max(worst),
            None => by_family.push((row.family, row.sector, worst)),
        }
    }
    let mut out = Vec::new();
    for sector in ["i", "ii"] {
        let w = by_family
            .iter()
            .filter(|(_, s, _)| *s == sector)
            .map(|e| e.2)
            .fold(0.0, f64::max);
        out.push(result(cfg, &format!("brackets/u22-sector-{sector}"), w, BRACKET_TOL));
    }
    for (family, sector, w) in by_family {
        if sector == "iii" || sector == "iv" {
            out.push(
                result(cfg, &format!("brackets/u22-sector-{sector}/{family}"), w, BRACKET_TOL).informational(),
            );
        }
    }
    out
}

// Jacobi

/// Cyclic residual of a tensor `P(x)` with derivative `dP`, over all coordinate triples.
fn jacobi_residual(n: usize, p: &dyn Fn(usize, usize) -> f64, dp: &dyn Fn(usize, usize, usize) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut terms = [0.0; 3];
                for (slot, (a, b, cc)) in [(i, j, k), (j, k, i), (k, i, j)].into_iter().enumerate() {
                    terms[slot] = (0..n).map(|l| p(a, l) * dp(b, cc, l)).sum();
                }
                let sum: f64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
                worst = worst.max(sum.abs() / scale);
            }
        }
    }
    worst
}

/// Jacobi identities on e(3)*, the twistor chart, the monopole spaces and u(2,2)*.
pub fn jacobi_check(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = cfg.bounds;

    // e(3)*: the tensor is linear, dP_ij/dx_l = P_ij(e_l)
    let mut rng = cfg.rng_for("jacobi/e3");
    let mut worst: f64 = 0.0;
    let basis: Vec<E3State> = (0..6)
        .map(|l| E3State::from_slice(&E3Grad::unit(l).to_array()))
        .collect();
    for _ in 0..cfg.samples {
        let e = random_e3(&mut rng, &b);
        let p = |i: usize, j: usize| lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(j), &e);
        let dp = |i: usize, j: usize, l: usize| lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(j), &basis[l]);
        worst = worst.max(jacobi_residual(6, &p, &dp));
    }
    out.push(result(cfg, "jacobi/e3", worst, JACOBI_TOL));

    // twistor: the constant canonical tensor, and the lifted momentum coordinates
    out.push(result(
        cfg,
        "jacobi/twistor-canonical",
        jacobi_residual(8, &|i, j| canonical_bracket8(&unit8(i), &unit8(j)), &|_, _, _| 0.0),
        JACOBI_TOL,
    ));
    let mut rng = cfg.rng_for("jacobi/twistor-lifted");
    let mut worst: f64 = 0.0;
    // gradients of the quadratic momentum coordinates are linear: grad f(x) = M_f x
    let lifted_grads = |x: &[f64; 8]| -> Vec<[f64; 8]> {
        let mut g: Vec<[f64; 8]> = momentum_e3_jacobian_real(x).to_vec();
        g.extend(momentum_a2_gradient_real(x));
        g
    };
    let cols: Vec<Vec<[f64; 8]>> = (0..8).map(|a| lifted_grads(&unit8(a))).collect();
    for _ in 0..cfg.samples {
        let x = random_twistor(&mut rng, &b).to_real();
        let g = lifted_grads(&x);
        // grad {f_a, f_b}(x) = (M_a^T O M_b - M_b^T O M_a) x, with O the canonical tensor
        let grad_bracket = |a: usize, bb: usize| -> [f64; 8] {
            std::array::from_fn(|n| {
                // d/dx_n of g_a(x)^T O g_b(x) = (M_a e_n)^T O g_b + g_a^T O (M_b e_n)
                canonical_bracket8(&cols[n][a], &g[bb]) + canonical_bracket8(&g[a], &cols[n][bb])
            })
        };
        for i in 0..8 {
            for j in (i + 1)..8 {
                for k in (j + 1)..8 {
                    let terms = [
                        canonical_bracket8(&g[i], &grad_bracket(j, k)),
                        canonical_bracket8(&g[j], &grad_bracket(k, i)),
                        canonical_bracket8(&g[k], &grad_bracket(i, j)),
                    ];
                    let sum: f64 = terms.iter().sum();
                    let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
                    worst = worst.max(sum.abs() / scale);
                }
            }
        }
    }
    out.push(result(cfg, "jacobi/twistor-lifted", worst, JACOBI_TOL));

    // monopole spaces with analytic derivatives of the monopole term
    for mu in MONOPOLE_MUS {
        let name = format!("jacobi/monopole-mu{mu}");
        let mut rng = cfg.rng_for(&name);
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let s = random_monopole(&mut rng, &b);
            let p = |i: usize, j: usize| {
                monopole_bracket(&MonopoleGrad::unit(i), &MonopoleGrad::unit(j), &s, mu).expect("y != 0")
            };
            let dp = |i: usize, j: usize, l: usize| monopole_tensor_derivative(i, j, l, &s, mu);
            worst = worst.max(jacobi_residual(6, &p, &dp));
        }
        out.push(result(cfg, &name, worst, JACOBI_TOL));
    }

    // u(2,2)*: linear functions, {x_X, {x_Y, x_Z}} = Tr(rho [X, [Y, Z]])
    let mut rng = cfg.rng_for("jacobi/u22");
    let basis: Vec<U22Element> = [Sector::J, Sector::Gamma, Sector::L, Sector::K]
        .iter()
        .flat_map(|s| (0..4).map(move |mu| U22Element::lowered_coordinate(*s, mu)))
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples.min(20) {
        let rho = random_u22(&mut rng, 1.0);
        for i in 0..16 {
            for j in (i + 1)..16 {
                for k in (j + 1)..16 {
                    let t = |a: usize, bb: usize, cc: usize| {
                        rho.linear(&basis[a].commutator(&basis[bb].commutator(&basis[cc])))
                    };
                    let terms = [t(i, j, k), t(j, k, i), t(k, i, j)];
                    let sum: f64 = terms.iter().sum();
                    let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
                    worst = worst.max(sum.abs() / scale);
                }
            }
        }
    }
    out.push(result(cfg, "jacobi/u22", worst, JACOBI_TOL));
    out
}

// Poisson maps

/// Wirtinger gradient of `w -> Tr(J_u(w) X)`, a Hermitian form `w+ M w`.
fn u22_lift_gradient(x: &U22Element, s: &TwistorState) -> WirtingerGrad {
    // J_u = w w+ E with E = [[0, 1], [-1, 0]] blockwise, so Tr(J_u X) = w+ (E X) w
    let mut e = crate::algebra::Mat4::zeros();
    for k in 0..2 {
        e[(k, 2 + k)] = c(1.0, 0.0);
        e[(2 + k, k)] = c(-1.0, 0.0);
    }
    let m = e * x.matrix();
    let mh = (m + m.adjoint()) * c(0.5, 0.0);
    let w = nalgebra::Vector4::new(s.theta[0], s.theta[1], s.zeta[0], s.zeta[1]);
    let v = mh * w;
    let mut g = WirtingerGrad::default();
    for k in 0..2 {
        g.d_theta_bar[k] = v[k];
        g.d_zeta_bar[k] = v[2 + k];
        g.d_theta[k] = v[k].conj();
        g.d_zeta[k] = v[2 + k].conj();
    }
    g
}

/// Upstairs brackets of lifted coordinates against the downstairs bracket at the image.
pub fn poisson_map_check(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = cfg.bounds;

    let mut rng = cfg.rng_for("poisson-maps/J_e");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_twistor(&mut rng, &b);
        let e = momentum_e3(&s);
        let w = momentum_e3_wirtinger(&s);
        for i in 0..6 {
            for j in (i + 1)..6 {
                let lhs = twistor_bracket(&w[i], &w[j], &s);
                let rhs = lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(j), &e);
                worst = worst.max(rel_residual(lhs, rhs));
            }
        }
    }
    out.push(result(cfg, "poisson-maps/J_e", worst, POISSON_MAP_TOL));

    for mu in MONOPOLE_MUS {
        let name = format!("poisson-maps/J_e_mu{mu}");
        let mut rng = cfg.rng_for(&name);
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let s = random_monopole(&mut rng, &b);
            let e = momentum_e3_mu(&s, mu).expect("y != 0");
            let jac = momentum_e3_mu_jacobian(&s, mu);
            for i in 0..6 {
                for j in (i + 1)..6 {
                    let lhs = monopole_bracket(&jac[i], &jac[j], &s, mu).expect("y != 0");
                    let rhs = lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(j), &e);
                    worst = worst.max(rel_residual(lhs, rhs));
                }
            }
        }
        out.push(result(cfg, &name, worst, POISSON_MAP_TOL));
    }

    for nu in SPHERE_NUS {
        let name = format!("poisson-maps/J_e_nu{nu}");
        let mut rng = cfg.rng_for(&name);
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let s = random_moser(&mut rng, &b);
            let e = momentum_e3_nu(&SphereState::Moser(s), nu).expect("valid Moser point");
            let g: Vec<[f64; 6]> = (0..6).map(|i| moser_lifted_gradient(&Coordinate(i), &s, nu)).collect();
            for i in 0..6 {
                for j in (i + 1)..6 {
                    let lhs = moser_bracket(&g[i], &g[j]);
                    let rhs = lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(j), &e);
                    worst = worst.max(rel_residual(lhs, rhs));
                }
            }
        }
        out.push(result(cfg, &name, worst, POISSON_MAP_TOL));
    }

    // J_u against the Lie-Poisson bracket Tr(rho [X, Y]) of u(2,2)*
    let mut rng = cfg.rng_for("poisson-maps/J_u");
    let basis: Vec<U22Element> = [Sector::J, Sector::Gamma, Sector::L, Sector::K]
        .iter()
        .flat_map(|s| (0..4).map(move |mu| U22Element::lowered_coordinate(*s, mu)))
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_twistor(&mut rng, &b);
        let rho = momentum_u22(&s);
        let g: Vec<WirtingerGrad> = basis.iter().map(|x| u22_lift_gradient(x, &s)).collect();
        for i in 0..16 {
            for j in (i + 1)..16 {
                let lhs = twistor_bracket(&g[i], &g[j], &s);
                let rhs = rho.linear(&basis[i].commutator(&basis[j]));
                worst = worst.max(rel_residual(lhs, rhs));
            }
        }
    }
    out.push(result(cfg, "poisson-maps/J_u", worst, POISSON_MAP_TOL));
    out
}

// Dual pair

/// `{F o J_a, G o J_e} = 0` upstairs, and the reduced counterparts.
pub fn dual_pair_check(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = cfg.bounds;

    let mut rng = cfg.rng_for("dual-pair/twistor");
    let (mut worst, mut worst_self): (f64, f64) = (0.0, 0.0);
    for _ in 0..cfg.samples {
        let s = random_twistor(&mut rng, &b);
        let we = momentum_e3_wirtinger(&s);
        let wa = momentum_a2_wirtinger(&s);
        for f in &wa {
            for g in &we {
                worst = worst.max(twistor_bracket(f, g, &s).abs());
            }
        }
        worst_self = worst_self.max(twistor_bracket(&wa[0], &wa[1], &s).abs());
    }
    out.push(result(cfg, "dual-pair/twistor", worst, DUAL_PAIR_TOL));
    out.push(result(cfg, "dual-pair/twistor-a2-self", worst_self, DUAL_PAIR_TOL));

    // Gamma0~ = -|y| against J_{e,mu} on the monopole space
    let mut rng = cfg.rng_for("dual-pair/monopole");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_monopole(&mut rng, &b);
        let mu = 0.7;
        let g0 = gamma0_tilde_gradient(&s);
        for g in momentum_e3_mu_jacobian(&s, mu) {
            worst = worst.max(monopole_bracket(&g0, &g, &s, mu).expect("y != 0").abs());
        }
    }
    out.push(result(cfg, "dual-pair/monopole", worst, DUAL_PAIR_TOL));

    // J0~ against J_{e,nu} in the Moser chart
    let mut rng = cfg.rng_for("dual-pair/sphere");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let s = random_moser(&mut rng, &b);
        let nu = -1.0;
        let j0 = moser_j0_gradient(&s, nu);
        for i in 0..6 {
            let g = moser_lifted_gradient(&Coordinate(i), &s, nu);
            worst = worst.max(moser_bracket(&j0, &g).abs());
        }
    }
    out.push(result(cfg, "dual-pair/sphere", worst, DUAL_PAIR_TOL));
    out
}

// Equivariance

fn max_abs_m3(m: &nalgebra::Matrix3<f64>) -> f64 {
    m.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Equivariance of the momentum maps, the SU(2) covering, and the actions themselves.
pub fn equivariance_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = cfg.bounds;

    let kinds = [
        ("equivariance/J_e", MomentumMapKind::E3, true),
        ("equivariance/J_u", MomentumMapKind::U22, false),
        ("equivariance/J_h2", MomentumMapKind::H2, false),
        ("equivariance/J_a-invariance", MomentumMapKind::A2, false),
    ];
    for (name, kind, special) in kinds {
        let mut rng = cfg.rng_for(name);
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let g = if special { random_group_special(&mut rng) } else { random_group(&mut rng) };
            let s = random_twistor(&mut rng, &b);
            let scale = 1.0 + momentum_u22(&s).matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(equivariance_check(kind, &g, &s) / scale);
        }
        out.push(result(cfg, name, worst, EQUIVARIANCE_TOL));
    }

    let mut rng = cfg.rng_for("equivariance/J_a-phase");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let g = random_phase(&mut rng);
        let s = random_twistor(&mut rng, &b);
        let scale = 1.0 + momentum_a2(&s).j0.abs().max(momentum_a2(&s).gamma0.abs());
        worst = worst.max(equivariance_check(MomentumMapKind::A2, &g, &s) / scale);
    }
    out.push(result(cfg, "equivariance/J_a-phase", worst, EQUIVARIANCE_TOL));

    // SU(2) -> SO(3): homomorphism, values in SO(3), kernel {1, -1}
    let mut rng = cfg.rng_for("equivariance/su2-homomorphism");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let a1 = random_su2(&mut rng);
        let a2 = random_su2(&mut rng);
        let r1 = su2_to_so3(&a1).expect("SU(2)");
        let r2 = su2_to_so3(&a2).expect("SU(2)");
        let r12 = su2_to_so3(&(a1 * a2)).expect("SU(2)");
        let rm = su2_to_so3(&(-a1)).expect("SU(2)");
        worst = worst
            .max(max_abs_m3(&(r12 - r1 * r2)))
            .max(max_abs_m3(&(r1.transpose() * r1 - nalgebra::Matrix3::identity())))
            .max((r1.determinant() - 1.0).abs())
            .max(max_abs_m3(&(rm - r1)));
    }
    out.push(result(cfg, "equivariance/su2-homomorphism", worst, SU2_TOL));

    // Sigma is a left action by linear symplectomorphisms
    let mut rng = cfg.rng_for("equivariance/sigma-action");
    let (mut worst_law, mut worst_symp): (f64, f64) = (0.0, 0.0);
    for _ in 0..cfg.samples {
        let g1 = random_group(&mut rng);
        let g2 = random_group(&mut rng);
        let s = random_twistor(&mut rng, &b);
        let lhs = sigma_action(&g1.compose(&g2), &s).to_real();
        let rhs = sigma_action(&g1, &sigma_action(&g2, &s)).to_real();
        let sc = 1.0 + rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        worst_law = worst_law.max(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / sc);
        let cols: Vec<[f64; 8]> = (0..8)
            .map(|a| sigma_action(&g1, &TwistorState::from_real(&unit8(a))).to_real())
            .collect();
        for a in 0..8 {
            for bb in 0..8 {
                let v = canonical_bracket8(&cols[a], &cols[bb]);
                worst_symp = worst_symp.max((v - omega8(a, bb)).abs());
            }
        }
    }
    out.push(result(cfg, "equivariance/sigma-group-law", worst_law, EQUIVARIANCE_TOL));
    out.push(result(cfg, "equivariance/sigma-symplectic", worst_symp, EQUIVARIANCE_TOL));

    // Phi o Lambda_g = Sigma_g o Phi
    let mut rng = cfg.rng_for("equivariance/phi-lambda");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let g = random_group_special(&mut rng);
        let p = random_traceless_herm(&mut rng, 1.0);
        let zeta = random_spinor_norm_in(&mut rng, b.zeta.0, b.zeta.1);
        let mu = normal(&mut rng);
        let (p2, z2) = lambda_action(&g, &p, &zeta).expect("special element");
        let lhs = phi_embedding(&p2, &z2, mu).expect("zeta != 0").to_real();
        let rhs = sigma_action(&g, &phi_embedding(&p, &zeta, mu).expect("zeta != 0")).to_real();
        let sc = 1.0 + rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        worst = worst.max(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / sc);
    }
    out.push(result(cfg, "equivariance/phi-lambda", worst, EQUIVARIANCE_TOL));

    // coadjoint E(3) action preserves the Casimirs
    let mut rng = cfg.rng_for("equivariance/coadjoint-casimirs");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let g = E3GroupElement::from_u2h2(&random_group_special(&mut rng));
        let e = random_e3(&mut rng, &b);
        let e2 = coadjoint_e3(&g, &e);
        let (k1, k2) = crate::e3::casimirs(&e);
        let (l1, l2) = crate::e3::casimirs(&e2);
        worst = worst.max(rel_residual(l1, k1)).max(rel_residual(l2, k2));
    }
    out.push(result(cfg, "equivariance/coadjoint-casimirs", worst, EQUIVARIANCE_TOL));
    out
}

// Relatedness

/// The scenarios with their parameters as used by the harness.
pub fn harness_scenarios() -> Vec<Scenario> {
    vec![
        Scenario::euler([1.0, 2.0, 3.0]).expect("valid"),
        Scenario::kovalevskaya(1.0, 1.0, 0.5).expect("valid"),
        Scenario::zhukovskii([1.0, 2.0, 3.0], Vec3::new(0.3, -0.2, 0.5)).expect("valid"),
        Scenario::clebsch([1.0, 2.0, 3.0], 0.1).expect("valid"),
        Scenario::lmg(1.0, 0.3, 0.2).expect("valid"),
    ]
}

fn scenario_named(name: &str) -> Scenario {
    harness_scenarios()
        .into_iter()
        .find(|s| s.kind.name() == name)
        .expect("known scenario")
}

/// Bounds that keep lifted trajectories in a moderate energy range.
fn dynamics_bounds() -> SamplingBounds {
    SamplingBounds {
        zeta: (0.5, 1.2),
        y: (0.5, 2.0),
        gamma: (0.5, 2.0),
        scale: 0.7,
    }
}

/// Initial point for a flow on `realization`.
fn initial_state(flow: &FlowSpec, rng: &mut SampleRng) -> Vec<f64> {
    let b = dynamics_bounds();
    match flow.realization {
        Realization::E3 => random_e3(rng, &b).to_array().to_vec(),
        Realization::Twistor => random_twistor(rng, &b).to_real().to_vec(),
        Realization::Monopole => random_monopole(rng, &b).to_array().to_vec(),
        Realization::SphereMoser => random_moser(rng, &b).to_array().to_vec(),
        Realization::SphereEmbedded => random_moser(rng, &b).to_embedded(flow.nu).to_array().to_vec(),
    }
}

/// Sup-norm of `J(x(t)) - e(t)` relative to `1 + sup |e(t)|` over `[0, t_max]`.
pub fn j_relatedness_check(
    scenario: &Scenario,
    flow: &FlowSpec,
    cfg: &SuiteConfig,
    dt: f64,
    t_max: f64,
) -> Result<CheckResult> {
    let name = format!(
        "relatedness/{}-{}",
        scenario.kind.name(),
        flow.realization.name()
    );
    let mut rng = cfg.rng_for(&name);
    let x0 = initial_state(flow, &mut rng);
    let down = FlowSpec::e3(flow.hamiltonian.clone());
    let e0 = flow.to_e3(&x0).to_array().to_vec();
    let mut icfg = IntegratorConfig::rk4(dt, t_max);
    icfg.record_stride = 10;
    let (up, dn) = rayon::join(
        || integrate(flow, &x0, &icfg, &[]),
        || integrate(&down, &e0, &icfg, &[]),
    );
    let (up, dn) = (up?.0, dn?.0);
    let mut dev: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let n = up.states.len().min(dn.states.len());
    for k in 0..n {
        let a = flow.to_e3(&up.states[k]).to_array();
        let e = &dn.states[k];
        for i in 0..6 {
            dev = dev.max((a[i] - e[i]).abs());
            scale = scale.max(e[i].abs());
        }
    }
    let mut r = CheckResult::new(name, dev / (1.0 + scale), cfg.threshold(RELATEDNESS_TOL), 1, cfg.seed);
    if up.terminated_early || dn.terminated_early || up.states.len() != dn.states.len() {
        r.pass = false;
    }
    Ok(r)
}

/// Zhukovskii via twistor, Kovalevskaya via the monopole space (mu = 0.7),
/// Clebsch via `T*S^3` (nu = -1) in the Moser chart, Euler via the embedded
/// sphere chart and LMG via twistor space; `t` in `[0, 5]`, `dt = 1e-4`.
pub fn j_relatedness_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let cases: Vec<(Scenario, FlowSpec)> = {
        let z = scenario_named("zhukovskii");
        let k = scenario_named("kovalevskaya");
        let cl = scenario_named("clebsch");
        let eu = scenario_named("euler");
        let l = scenario_named("lmg");
        vec![
            (z.clone(), FlowSpec::twistor(z.hamiltonian.clone())),
            (k.clone(), FlowSpec::monopole(k.hamiltonian.clone(), 0.7)),
            (cl.clone(), FlowSpec::sphere_moser(cl.hamiltonian.clone(), -1.0)?),
            (eu.clone(), FlowSpec::sphere_embedded(eu.hamiltonian.clone(), -1.0)?),
            (l.clone(), FlowSpec::twistor(l.hamiltonian.clone())),
        ]
    };
    cases
        .par_iter()
        .map(|(s, f)| j_relatedness_check(s, f, cfg, 1e-4, 5.0))
        .collect()
}

// Involution

/// Five-point central differences with step `h`.
pub fn fd5_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            let mut ev = |d: f64| {
                y[i] = x[i] + d;
                let v = f(&y);
                y[i] = x[i];
                v
            };
            (ev(-2.0 * h) - 8.0 * ev(-h) + 8.0 * ev(h) - ev(2.0 * h)) / (12.0 * h)
        })
        .collect()
}

/// Central differences with step `1e-6 max(1, |x|)`.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let h = 1e-6 * n.max(1.0);
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let a = f(&y);
            y[i] = x[i] - h;
            let b = f(&y);
            y[i] = x[i];
            (a - b) / (2.0 * h)
        })
        .collect()
}

type ChartFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Declared integral set of `scenario` as functions on the chart of `realization`.
fn integral_set(scenario: &Scenario, realization: Realization, mu: f64, nu: f64) -> Vec<(String, ChartFn)> {
    let h = scenario.hamiltonian.clone();
    let k = scenario.extra.clone().expect("integrable scenario");
    let mut fns: Vec<(String, Arc<dyn E3Function>)> = vec![("H".into(), h), ("K".into(), k)];
    if realization == Realization::E3 {
        fns.push(("K1".into(), Arc::new(CasimirK1)));
        fns.push(("K2".into(), Arc::new(CasimirK2)));
    }
    let flow = FlowSpec {
        realization,
        hamiltonian: scenario.hamiltonian.clone(),
        mu,
        nu,
        y_guard: crate::reduced::monopole::Y_GUARD,
    };
    let mut out: Vec<(String, ChartFn)> = fns
        .into_iter()
        .map(|(n, f)| {
            let fl = flow.clone();
            let g: ChartFn = Box::new(move |x: &[f64]| f.value(&fl.to_e3(x)));
            (n, g)
        })
        .collect();
    match realization {
        Realization::Twistor => {
            out.push(("J0".into(), Box::new(|x: &[f64]| momentum_a2_real(&CanonicalPoint8::from_array(x)).j0)));
            out.push((
                "Gamma0".into(),
                Box::new(|x: &[f64]| momentum_a2_real(&CanonicalPoint8::from_array(x)).gamma0),
            ));
        }
        Realization::Monopole => {
            out.push(("y^2".into(), Box::new(|x: &[f64]| x[3] * x[3] + x[4] * x[4] + x[5] * x[5])));
        }
        Realization::SphereMoser => {
            let fl = flow.clone();
            out.push(("J0~".into(), Box::new(move |x: &[f64]| fl.to_a2(x).0)));
        }
        _ => {}
    }
    out
}

fn chart_bracket(realization: Realization, x: &[f64], f: &[f64], g: &[f64], mu: f64) -> f64 {
    match realization {
        Realization::E3 => lp_bracket_e3(&E3Grad::from_slice(f), &E3Grad::from_slice(g), &E3State::from_slice(x)),
        Realization::Twistor => canonical_bracket8(f.try_into().expect("8"), g.try_into().expect("8")),
        Realization::Monopole => monopole_bracket(
            &MonopoleGrad::from_slice(f),
            &MonopoleGrad::from_slice(g),
            &MonopoleState::from_slice(x).expect("y != 0"),
            mu,
        )
        .expect("y != 0"),
        Realization::SphereMoser => moser_bracket(f.try_into().expect("6"), g.try_into().expect("6")),
        Realization::SphereEmbedded => unreachable!("involution runs in the Moser chart"),
    }
}

/// Pairwise brackets of a declared integral set through five-point gradients.
pub fn involution_check(
    scenario: &Scenario,
    realization: Realization,
    cfg: &SuiteConfig,
) -> CheckResult {
    let (mu, nu) = (0.7, -1.0);
    let name = format!("involution/{}-{}", scenario.kind.name(), realization.name());
    let mut rng = cfg.rng_for(&name);
    let set = integral_set(scenario, realization, mu, nu);
    let flow = FlowSpec {
        realization,
        hamiltonian: scenario.hamiltonian.clone(),
        mu,
        nu,
        y_guard: crate::reduced::monopole::Y_GUARD,
    };
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let x = initial_state(&flow, &mut rng);
        let grads: Vec<Vec<f64>> = set.iter().map(|(_, f)| fd5_gradient(f.as_ref(), &x, 1e-3)).collect();
        for i in 0..grads.len() {
            for j in (i + 1)..grads.len() {
                let v = chart_bracket(realization, &x, &grads[i], &grads[j], mu);
                worst = worst.max(v.abs() / (norm(&grads[i]) * norm(&grads[j])).max(1.0));
            }
        }
    }
    result(cfg, &name, worst, INVOLUTION_TOL)
}

/// Every integrable scenario on e(3)*, twistor space, the monopole space and `T*S^3`.
pub fn involution_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let realizations = [
        Realization::E3,
        Realization::Twistor,
        Realization::Monopole,
        Realization::SphereMoser,
    ];
    let jobs: Vec<(Scenario, Realization)> = harness_scenarios()
        .into_iter()
        .flat_map(|s| realizations.iter().map(move |r| (s.clone(), *r)))
        .collect();
    jobs.par_iter().map(|(s, r)| involution_check(s, *r, cfg)).collect()
}

// Gradient audits

/// Worst `|fd - analytic| / max(1, |analytic|)` of a function with an analytic gradient.
pub fn gradient_audit(
    f: &dyn Fn(&[f64]) -> f64,
    grad: &dyn Fn(&[f64]) -> Vec<f64>,
    points: &[Vec<f64>],
) -> f64 {
    let mut worst: f64 = 0.0;
    for x in points {
        let an = grad(x);
        let fd = fd_gradient(f, x);
        let d = an.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(d / an.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0));
    }
    worst
}

/// Analytic gradients against central differences.
pub fn gradient_audit_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = cfg.bounds;
    let n = cfg.samples;

    let mut rng = cfg.rng_for("gradients/e3");
    let e3_points: Vec<Vec<f64>> = (0..n).map(|_| random_e3(&mut rng, &b).to_array().to_vec()).collect();
    let mut funcs: Vec<(String, Arc<dyn E3Function>)> = Vec::new();
    for s in harness_scenarios() {
        funcs.push((format!("{}-H", s.kind.name()), s.hamiltonian.clone()));
        funcs.push((format!("{}-K", s.kind.name()), s.extra.clone().expect("integrable")));
    }
    let lam = Vec3::new(0.4, -0.3, 0.2);
    let chi = Vec3::new(0.5, 0.1, -0.7);
    funcs.push((
        "gyrostat-linear".into(),
        Arc::new(Gyrostat(
            GyrostatParams::new([1.0, 1.5, 2.5], lam, PotentialSpec::Linear(chi)).expect("valid"),
        )),
    ));
    funcs.push((
        "gyrostat-clebsch-potential".into(),
        Arc::new(Gyrostat(
            GyrostatParams::new([1.0, 1.5, 2.5], lam, PotentialSpec::ClebschQuadratic(0.3)).expect("valid"),
        )),
    ));
    funcs.push(("K1".into(), Arc::new(CasimirK1)));
    funcs.push(("K2".into(), Arc::new(CasimirK2)));
    for (name, f) in &funcs {
        let v = |x: &[f64]| f.value(&E3State::from_slice(x));
        let g = |x: &[f64]| f.gradient(&E3State::from_slice(x)).to_array().to_vec();
        out.push(result(cfg, &format!("gradients/e3/{name}"), gradient_audit(&v, &g, &e3_points), GRADIENT_TOL));
    }

    // twistor momentum maps and lifts
    let mut rng = cfg.rng_for("gradients/twistor");
    let tw: Vec<Vec<f64>> = (0..n).map(|_| random_twistor(&mut rng, &b).to_real().to_vec()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        let v = move |x: &[f64]| momentum_e3_real(&CanonicalPoint8::from_array(x)).to_array()[i];
        let g = move |x: &[f64]| momentum_e3_jacobian_real(x.try_into().expect("8"))[i].to_vec();
        worst = worst.max(gradient_audit(&v, &g, &tw));
    }
    out.push(result(cfg, "gradients/twistor/momentum-e3-jacobian", worst, GRADIENT_TOL));
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        let v = move |x: &[f64]| {
            let a = momentum_a2_real(&CanonicalPoint8::from_array(x));
            [a.j0, a.gamma0][i]
        };
        let g = move |x: &[f64]| momentum_a2_gradient_real(x.try_into().expect("8"))[i].to_vec();
        worst = worst.max(gradient_audit(&v, &g, &tw));
    }
    out.push(result(cfg, "gradients/twistor/momentum-a2", worst, GRADIENT_TOL));
    let kov = scenario_named("kovalevskaya");
    let k = kov.extra.clone().expect("integrable");
    let v = |x: &[f64]| k.value(&momentum_e3_real(&CanonicalPoint8::from_array(x)));
    let g = |x: &[f64]| lifted_gradient_real(k.as_ref(), x.try_into().expect("8")).to_vec();
    out.push(result(cfg, "gradients/twistor/lifted-kovalevskaya", gradient_audit(&v, &g, &tw), GRADIENT_TOL));

    // monopole space
    let mu = 0.7;
    let mut rng = cfg.rng_for("gradients/monopole");
    let mp: Vec<Vec<f64>> = (0..n).map(|_| random_monopole(&mut rng, &b).to_array().to_vec()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        let v = move |x: &[f64]| {
            momentum_e3_mu(&MonopoleState::from_slice(x).expect("y != 0"), mu).expect("y != 0").to_array()[i]
        };
        let g = move |x: &[f64]| {
            momentum_e3_mu_jacobian(&MonopoleState::from_slice(x).expect("y != 0"), mu)[i].to_array().to_vec()
        };
        worst = worst.max(gradient_audit(&v, &g, &mp));
    }
    out.push(result(cfg, "gradients/monopole/momentum-jacobian", worst, GRADIENT_TOL));
    let v = |x: &[f64]| gamma0_tilde(&MonopoleState::from_slice(x).expect("y != 0")).expect("y != 0");
    let g = |x: &[f64]| gamma0_tilde_gradient(&MonopoleState::from_slice(x).expect("y != 0")).to_array().to_vec();
    out.push(result(cfg, "gradients/monopole/gamma0-tilde", gradient_audit(&v, &g, &mp), GRADIENT_TOL));

    // Moser chart
    let rho = 1.3;
    let mut rng = cfg.rng_for("gradients/moser");
    let ms: Vec<Vec<f64>> = (0..n).map(|_| random_moser(&mut rng, &b).to_array().to_vec()).collect();
    let mut worst: f64 = 0.0;
    for r in 0..8 {
        let v = move |x: &[f64]| {
            let y = Vec3::new(x[0], x[1], x[2]);
            let p = Vec3::new(x[3], x[4], x[5]);
            if r < 4 {
                stereo_to_sphere(&y, rho)[r]
            } else {
                moser_momenta(&y, &p, rho)[r - 4]
            }
        };
        let g = move |x: &[f64]| {
            let y = Vec3::new(x[0], x[1], x[2]);
            let p = Vec3::new(x[3], x[4], x[5]);
            moser_jacobian(&y, &p, rho)[r].to_vec()
        };
        worst = worst.max(gradient_audit(&v, &g, &ms));
    }
    out.push(result(cfg, "gradients/moser/jacobian", worst, GRADIENT_TOL));
    let nu = -1.0;
    let cl = scenario_named("clebsch");
    let k = cl.extra.clone().expect("integrable");
    let v = |x: &[f64]| {
        let s = SphereStateMoser::from_slice(x).expect("finite");
        k.value(&momentum_e3_nu(&SphereState::Moser(s), nu).expect("valid"))
    };
    let g = |x: &[f64]| moser_lifted_gradient(k.as_ref(), &SphereStateMoser::from_slice(x).expect("finite"), nu).to_vec();
    out.push(result(cfg, "gradients/moser/lifted-clebsch", gradient_audit(&v, &g, &ms), GRADIENT_TOL));
    out
}

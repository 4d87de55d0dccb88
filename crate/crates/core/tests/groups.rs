use approx::assert_abs_diff_eq;
use e3real::algebra::*;
use e3real::e3::{casimirs, E3State};
use e3real::groups::*;
use e3real::reduced::phi_embedding;
use e3real::sampling::*;
use e3real::twistor::*;
use nalgebra::Matrix3;

fn worked_state() -> TwistorState {
    TwistorState::new(
        SpinorC2::new(c(1.0, 0.0), c(0.0, 0.0)),
        SpinorC2::new(c(0.0, 0.0), c(1.0, 0.0)),
    )
}

fn same(a: &TwistorState, b: &TwistorState, tol: f64) -> bool {
    (a.theta - b.theta).norm() < tol && (a.zeta - b.zeta).norm() < tol
}

#[test]
fn sigma_action_examples() {
    let mut rng = rng_from_seed(41);
    let s = random_twistor(&mut rng, &SamplingBounds::default());
    assert_eq!(sigma_action(&GroupElementU2H2::identity(), &s), s);

    let t = random_herm(&mut rng, 1.0);
    let g = GroupElementU2H2::new(pauli(0), t).unwrap();
    let gs = sigma_action(&g, &s);
    assert_eq!(gs.zeta, s.zeta);
    assert!((gs.theta - (s.theta + t.matrix() * s.zeta)).norm() < 1e-14);

    let ph = c(0.0, 1.0); // e^{i pi/2}
    let g = GroupElementU2H2::new(pauli(0) * ph, Herm2::zero()).unwrap();
    let w = worked_state();
    let gw = sigma_action(&g, &w);
    assert!((gw.theta - SpinorC2::new(c(0.0, 1.0), c(0.0, 0.0))).norm() < 1e-15);
    assert!((gw.zeta - SpinorC2::new(c(0.0, 0.0), c(0.0, 1.0))).norm() < 1e-15);
    let (a, b) = (momentum_a2(&w), momentum_a2(&gw));
    assert_abs_diff_eq!(a.j0, b.j0, epsilon = 1e-15);
    assert_abs_diff_eq!(a.gamma0, b.gamma0, epsilon = 1e-15);
}

#[test]
fn sigma_is_a_left_action() {
    let mut rng = rng_from_seed(42);
    for _ in 0..50 {
        let g1 = random_group(&mut rng);
        let g2 = random_group(&mut rng);
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let lhs = sigma_action(&g1.compose(&g2), &s);
        let rhs = sigma_action(&g1, &sigma_action(&g2, &s));
        assert!(same(&lhs, &rhs, 1e-12));
        let back = sigma_action(&g1.inverse(), &sigma_action(&g1, &s));
        assert!(same(&back, &s, 1e-12));
        // matrix form agrees with the action
        let m = g1.twistor_matrix();
        let w = nalgebra::Vector4::new(s.theta[0], s.theta[1], s.zeta[0], s.zeta[1]);
        let mw = m * w;
        let gs = sigma_action(&g1, &s);
        let direct = nalgebra::Vector4::new(gs.theta[0], gs.theta[1], gs.zeta[0], gs.zeta[1]);
        assert!((mw - direct).norm() < 1e-12);
        assert!(metric_defect(&g1) < 1e-12);
    }
}

#[test]
fn group_element_validation() {
    let bad = pauli(0) * c(2.0, 0.0);
    assert!(GroupElementU2H2::new(bad, Herm2::zero()).is_err());
    assert!(GroupElementU2H2::identity().is_special());
    let ph = GroupElementU2H2::new(pauli(0) * c(0.0, 1.0), Herm2::zero()).unwrap();
    assert!(!ph.is_special());
    let shear = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    assert!(E3GroupElement::new(shear, Vec3::zeros()).is_err());
    let flip = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
    assert!(E3GroupElement::new(flip, Vec3::zeros()).is_err());
}

#[test]
fn coadjoint_u2h2_examples() {
    let mut rng = rng_from_seed(43);
    let j = random_herm(&mut rng, 1.0);
    let gm = random_herm(&mut rng, 1.0);
    let (j2, g2) = coadjoint_u2h2(&GroupElementU2H2::identity(), &j, &gm);
    assert!((j2.matrix() - j.matrix()).norm() < 1e-15 && (g2.matrix() - gm.matrix()).norm() < 1e-15);

    let a = random_u2(&mut rng);
    let g = GroupElementU2H2::new(a, Herm2::zero()).unwrap();
    let (j2, g2) = coadjoint_u2h2(&g, &j, &gm);
    assert!((j2.matrix() - a * j.matrix() * a.adjoint()).norm() < 1e-14);
    assert!((g2.matrix() - a * gm.matrix() * a.adjoint()).norm() < 1e-14);

    // A = 1, T = s1, Gamma = s3, J = 0: shift (i/2)[s3, s1]; by hand [s3, s1] = [[0, 2], [-2, 0]]
    let g = GroupElementU2H2::new(pauli(0), Herm2::new(pauli(1)).unwrap()).unwrap();
    let (j2, _) = coadjoint_u2h2(&g, &Herm2::zero(), &Herm2::new(pauli(3)).unwrap());
    let o = c(0.0, 0.0);
    let hand = Mat2::new(o, c(2.0, 0.0), c(-2.0, 0.0), o) * c(0.0, 0.5);
    assert!((j2.matrix() - hand).norm() < 1e-15);
    // which is the printed sigma_2
    assert!((j2.matrix() - pauli(2)).norm() < 1e-15);
}

#[test]
fn coadjoint_e3_examples() {
    let mut rng = rng_from_seed(44);
    let s = random_e3(&mut rng, &SamplingBounds::default());
    assert!(coadjoint_e3(&E3GroupElement::identity(), &s).max_abs_diff(&s) < 1e-15);

    let t = Vec3::new(0.4, -1.0, 2.0);
    let g = E3GroupElement::new(Matrix3::identity(), t).unwrap();
    let s2 = coadjoint_e3(&g, &s);
    assert_eq!(s2.gamma, s.gamma);
    assert!((s2.j - (s.j + t.cross(&s.gamma))).norm() < 1e-14);
    assert_abs_diff_eq!(casimirs(&s2).0, casimirs(&s).0, epsilon = 1e-12);

    let rz = Matrix3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0));
    let g = E3GroupElement::new(rz, Vec3::zeros()).unwrap();
    let s = E3State::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
    let s2 = coadjoint_e3(&g, &s);
    assert!((s2.j - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
    assert!((s2.gamma - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn su2_cover_examples() {
    let id = su2_to_so3(&pauli(0)).unwrap();
    assert!((id - Matrix3::identity()).abs().max() < 1e-15);
    let minus = su2_to_so3(&(pauli(0) * c(-1.0, 0.0))).unwrap();
    assert!((minus - Matrix3::identity()).abs().max() < 1e-15);

    let alpha: f64 = 0.37;
    let a = Mat2::new(c(alpha.cos(), alpha.sin()), c(0.0, 0.0), c(0.0, 0.0), c(alpha.cos(), -alpha.sin()));
    let r = su2_to_so3(&a).unwrap();
    let (co, si) = ((2.0 * alpha).cos(), (2.0 * alpha).sin());
    let expected = Matrix3::new(co, -si, 0.0, si, co, 0.0, 0.0, 0.0, 1.0);
    assert!((r - expected).abs().max() < 1e-15);
    assert!((su2_to_so3_printed(&a).unwrap() - expected.transpose()).abs().max() < 1e-15);

    let ph = pauli(0) * c(0.0, 1.0);
    assert!(su2_to_so3(&ph).is_err());
}

#[test]
fn su2_cover_is_a_homomorphism() {
    let mut rng = rng_from_seed(45);
    for _ in 0..100 {
        let a = random_su2(&mut rng);
        let b = random_su2(&mut rng);
        let ra = su2_to_so3(&a).unwrap();
        let rb = su2_to_so3(&b).unwrap();
        let rab = su2_to_so3(&(a * b)).unwrap();
        assert!((rab - ra * rb).abs().max() < 1e-12);
        assert!((ra.transpose() * ra - Matrix3::identity()).abs().max() < 1e-12);
        assert_abs_diff_eq!(ra.determinant(), 1.0, epsilon = 1e-12);
        // the printed form reverses products
        let pa = su2_to_so3_printed(&a).unwrap();
        let pb = su2_to_so3_printed(&b).unwrap();
        let pab = su2_to_so3_printed(&(a * b)).unwrap();
        assert!((pab - pb * pa).abs().max() < 1e-12);
        // R(A) is the matrix of X -> A X A+ on the Pauli components
        let x = random_vec3(&mut rng, 1.0);
        let xm = Herm2::from_vec3(&x);
        let y = Herm2::symmetrized(a * xm.matrix() * a.adjoint()).to_four_vector().spatial();
        assert!((ra * x - y).norm() < 1e-12);
    }
}

#[test]
fn lambda_action_examples() {
    let mut rng = rng_from_seed(46);
    let p = random_traceless_herm(&mut rng, 1.0);
    let z = random_spinor(&mut rng, 1.0);
    let (p2, z2) = lambda_action(&GroupElementU2H2::identity(), &p, &z).unwrap();
    assert!((p2.matrix() - p.matrix()).norm() < 1e-15 && (z2 - z).norm() < 1e-15);
    let t = random_traceless_herm(&mut rng, 1.0);
    let g = GroupElementU2H2::new(pauli(0), t).unwrap();
    let (p2, z2) = lambda_action(&g, &p, &z).unwrap();
    assert!((p2.matrix() - (p.matrix() + t.matrix())).norm() < 1e-15);
    assert_eq!(z2, z);
    let g = GroupElementU2H2::new(pauli(0), Herm2::new(pauli(0)).unwrap()).unwrap();
    assert!(lambda_action(&g, &p, &z).is_err());
}

#[test]
fn phi_is_equivariant() {
    let mut rng = rng_from_seed(47);
    for _ in 0..50 {
        let g = random_group_special(&mut rng);
        let p = random_traceless_herm(&mut rng, 1.0);
        let z = random_spinor_norm_in(&mut rng, 0.3, 2.0);
        let mu = normal(&mut rng);
        let (p2, z2) = lambda_action(&g, &p, &z).unwrap();
        let lhs = phi_embedding(&p2, &z2, mu).unwrap();
        let rhs = sigma_action(&g, &phi_embedding(&p, &z, mu).unwrap());
        assert!(same(&lhs, &rhs, 1e-10));
    }
}

#[test]
fn momentum_maps_are_equivariant() {
    let mut rng = rng_from_seed(48);
    let w = random_twistor(&mut rng, &SamplingBounds::default());
    for kind in [MomentumMapKind::E3, MomentumMapKind::A2, MomentumMapKind::U22, MomentumMapKind::H2] {
        assert!(equivariance_check(kind, &GroupElementU2H2::identity(), &w) < 1e-15);
    }
    for _ in 0..100 {
        let w = random_twistor(&mut rng, &SamplingBounds::default());
        let g = random_group_special(&mut rng);
        let scale = 1.0 + momentum_e3(&w).max_abs();
        assert!(equivariance_check(MomentumMapKind::E3, &g, &w) < 1e-10 * scale);
        let g = random_group(&mut rng);
        assert!(equivariance_check(MomentumMapKind::U22, &g, &w) < 1e-10 * scale);
        assert!(equivariance_check(MomentumMapKind::H2, &g, &w) < 1e-10 * scale);
        let g = random_phase(&mut rng);
        assert!(equivariance_check(MomentumMapKind::A2, &g, &w) < 1e-12 * scale);
    }
    assert!(MomentumMapKind::from_name("nope").is_err());
    assert_eq!(MomentumMapKind::from_name("J_e").unwrap(), MomentumMapKind::E3);
}

#[test]
fn h2_momentum_components_are_contravariant() {
    let mut rng = rng_from_seed(49);
    for _ in 0..20 {
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let (j, g) = momentum_h2(&s);
        let (j4, g4) = momentum_four_vectors(&s);
        assert!(j.to_four_vector().max_abs_diff(&j4) < 1e-12 * (1.0 + j4.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))));
        assert!(g.to_four_vector().max_abs_diff(&g4) < 1e-12 * (1.0 + g4.0[0].abs()));
    }
}

#[test]
fn u22_adjoint_action_is_a_lie_homomorphism() {
    let mut rng = rng_from_seed(50);
    for _ in 0..20 {
        let g = random_group(&mut rng);
        let x = random_u22(&mut rng, 1.0);
        let y = random_u22(&mut rng, 1.0);
        let lhs = adjoint_u22(&g, &x.commutator(&y));
        let rhs = adjoint_u22(&g, &x).commutator(&adjoint_u22(&g, &y));
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-10 * (1.0 + lhs.matrix().norm()));
        // the pairing is invariant
        assert!((u22_pairing(&adjoint_u22(&g, &x), &adjoint_u22(&g, &y)) - u22_pairing(&x, &y)).abs() < 1e-10);
    }
}

use approx::assert_abs_diff_eq;
use e3real::algebra::*;
use e3real::e3::*;
use e3real::sampling::*;
use e3real::twistor::*;

fn spin(a: C64, b: C64) -> SpinorC2 {
    SpinorC2::new(a, b)
}

fn worked_state() -> TwistorState {
    // theta = (1, 0), zeta = (0, 1)
    TwistorState::new(spin(c(1.0, 0.0), c(0.0, 0.0)), spin(c(0.0, 0.0), c(1.0, 0.0)))
}

fn fd_real(f: &dyn Fn(&[f64; 8]) -> f64, x: &[f64; 8]) -> [f64; 8] {
    let mut g = [0.0; 8];
    let h = 1e-5;
    for i in 0..8 {
        let mut a = *x;
        let mut b = *x;
        a[i] += h;
        b[i] -= h;
        g[i] = (f(&a) - f(&b)) / (2.0 * h);
    }
    g
}

#[test]
fn bracket_is_canonical_in_the_real_chart() {
    // q0 = sqrt2 Re zeta1 and pi0 = sqrt2 Re theta1 are conjugate
    let s = worked_state();
    let mut fq = [0.0; 8];
    fq[0] = 1.0;
    let mut fp = [0.0; 8];
    fp[4] = 1.0;
    let b = twistor_bracket(&WirtingerGrad::from_real(&fq), &WirtingerGrad::from_real(&fp), &s);
    assert_abs_diff_eq!(b, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(canonical_bracket8(&fq, &fp), 1.0, epsilon = 1e-15);
    let w = WirtingerGrad::from_real(&fq);
    assert_abs_diff_eq!(twistor_bracket(&w, &w, &s), 0.0, epsilon = 1e-15);

    let mut rng = rng_from_seed(21);
    for _ in 0..50 {
        let f: [f64; 8] = std::array::from_fn(|_| normal(&mut rng));
        let g: [f64; 8] = std::array::from_fn(|_| normal(&mut rng));
        let b = twistor_bracket(&WirtingerGrad::from_real(&f), &WirtingerGrad::from_real(&g), &s);
        assert!((b - canonical_bracket8(&f, &g)).abs() < 1e-13);
        let back = WirtingerGrad::from_real(&f).to_real();
        assert!(back.iter().zip(&f).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}

#[test]
fn momentum_coordinates_bracket_at_worked_state() {
    let s = worked_state();
    let w = momentum_e3_wirtinger(&s);
    let b12 = twistor_bracket(&w[0], &w[1], &s);
    assert_abs_diff_eq!(b12, momentum_e3(&s).j.z, epsilon = 1e-15);
    assert_abs_diff_eq!(b12, 0.0, epsilon = 1e-15);
}

#[test]
fn momentum_e3_is_poisson_at_random_states() {
    let mut rng = rng_from_seed(22);
    let bounds = SamplingBounds::default();
    for _ in 0..50 {
        let s = random_twistor(&mut rng, &bounds);
        let e = momentum_e3(&s);
        let w = momentum_e3_wirtinger(&s);
        for i in 0..6 {
            for k in 0..6 {
                let lhs = twistor_bracket(&w[i], &w[k], &s);
                let rhs = lp_bracket_e3(&E3Grad::unit(i), &E3Grad::unit(k), &e);
                assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
            }
        }
    }
}

#[test]
fn momentum_e3_worked_examples() {
    // covariant components; the printed display is the contravariant one
    let e = momentum_e3(&worked_state());
    assert!((e.j - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
    assert!((e.gamma - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-15);
    let e = momentum_e3_contravariant(&worked_state());
    assert!((e.j - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
    assert!((e.gamma - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);

    let s = TwistorState::new(SpinorC2::zeros(), spin(c(1.0, 0.0), c(0.0, 0.0)));
    let e = momentum_e3_contravariant(&s);
    assert!(e.j.norm() < 1e-15);
    assert!((e.gamma - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-15);
    assert!((momentum_e3(&s).gamma - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);

    let s = TwistorState::new(spin(c(0.3, 1.0), c(-2.0, 0.5)), SpinorC2::zeros());
    assert_eq!(momentum_e3(&s).max_abs(), 0.0);
}

#[test]
fn momentum_a2_examples() {
    let a = momentum_a2(&worked_state());
    assert_eq!((a.j0, a.gamma0), (0.0, -1.0));
    let s = TwistorState::new(spin(c(1.0, 0.0), c(0.0, 0.0)), spin(c(0.0, 1.0), c(0.0, 0.0)));
    assert_abs_diff_eq!(momentum_a2(&s).j0, 1.0, epsilon = 1e-15);
    let s = TwistorState::new(spin(c(1.0, 2.0), c(0.0, 0.0)), SpinorC2::zeros());
    let a = momentum_a2(&s);
    assert_eq!((a.j0, a.gamma0), (0.0, 0.0));
}

#[test]
fn momentum_u22_block_form() {
    let m = *momentum_u22(&worked_state()).matrix();
    let (a, _, cc, d) = blocks(&m);
    let o = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    assert!((a - Mat2::new(z, -o, z, z)).norm() < 1e-15);
    assert!((d - Mat2::new(z, z, o, z)).norm() < 1e-15);
    assert!((cc - Mat2::new(z, z, z, -o)).norm() < 1e-15);

    let s = TwistorState::new(spin(c(0.3, 1.0), c(-2.0, 0.5)), SpinorC2::zeros());
    let (a, b, cc, d) = blocks(momentum_u22(&s).matrix());
    assert!(a.norm() < 1e-15 && cc.norm() < 1e-15 && d.norm() < 1e-15);
    assert!(b.norm() > 0.1);
}

#[test]
fn momentum_u22_square_identity() {
    let mut rng = rng_from_seed(23);
    let phi = twistor_metric();
    for _ in 0..100 {
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let j = *momentum_u22(&s).matrix();
        let mut w = nalgebra::Vector4::<C64>::zeros();
        w[0] = s.theta[0];
        w[1] = s.theta[1];
        w[2] = s.zeta[0];
        w[3] = s.zeta[1];
        // w* = w+ phi
        let wsw = (w.adjoint() * phi * w)[(0, 0)];
        let resid = j * j - j * (c(0.0, 1.0) * wsw);
        assert!(resid.iter().all(|z| z.norm() < 1e-12 * (1.0 + j.norm().powi(2))));
        // and J = i w w*
        let direct = (w * w.adjoint() * phi) * c(0.0, 1.0);
        assert!((direct - j).iter().all(|z| z.norm() < 1e-12 * (1.0 + j.norm())));
    }
}

#[test]
fn image_conditions_hold_on_the_image() {
    let mut rng = rng_from_seed(24);
    for _ in 0..1000 {
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let (j4, g4) = momentum_four_vectors(&s);
        assert!(image_conditions(&j4, &g4));
        let rho = momentum_u22(&s);
        let (j, g, _, _) = rho.decompose().unwrap();
        assert!(j.max_abs_diff(&j4) < 1e-12 * (1.0 + j4.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))));
        assert!(g.max_abs_diff(&g4) < 1e-12 * (1.0 + g4.0[0].abs()));
    }
    let g = FourVector::new(1.0, 0.0, 0.0, 1.0);
    assert!(!image_conditions(&FourVector::default(), &g));
    let j = FourVector::new(0.0, 0.0, 1.0, 0.0);
    let g = FourVector::new(-1.0, 0.0, 0.0, 1.0);
    assert!(image_conditions(&j, &g));
    let j = FourVector::new(0.0, 0.0, 0.0, 1.0);
    assert!(!image_conditions(&j, &g));
}

#[test]
fn lifted_hamiltonian_examples() {
    let euler = Gyrostat(GyrostatParams::euler([1.0, 1.0, 1.0]).unwrap());
    assert_abs_diff_eq!(lifted_hamiltonian(&euler, &worked_state()), 0.5, epsilon = 1e-15);

    let lambda = Vec3::new(0.3, -0.2, 0.5);
    let p = GyrostatParams::new([1.0, 2.0, 3.0], lambda, e3real::e3::PotentialSpec::Linear(Vec3::new(1.0, 1.0, 1.0))).unwrap();
    let s = TwistorState::new(spin(c(0.3, 1.0), c(-2.0, 0.5)), SpinorC2::zeros());
    let expected = 0.5 * (lambda.x * lambda.x + lambda.y * lambda.y / 2.0 + lambda.z * lambda.z / 3.0);
    assert_abs_diff_eq!(lifted_hamiltonian(&Gyrostat(p), &s), expected, epsilon = 1e-15);
}

#[test]
fn lifted_gradient_matches_finite_differences() {
    let h = Kovalevskaya { i: 1.0, chi1: 1.0, chi2: 0.5 };
    let mut rng = rng_from_seed(25);
    for _ in 0..20 {
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let x = s.to_real();
        let an = lifted_gradient_real(&h, &x);
        let fd = fd_real(&|y| lifted_hamiltonian(&h, &TwistorState::from_real(y)), &x);
        let scale = an.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, f) in an.iter().zip(&fd) {
            assert!((a - f).abs() < 1e-6 * scale);
        }
    }
}

#[test]
fn vector_field_projects_to_the_e3_field() {
    let p = GyrostatParams::new([1.0, 2.0, 3.0], Vec3::new(0.3, -0.2, 0.5), e3real::e3::PotentialSpec::Linear(Vec3::new(0.1, 0.4, -1.0))).unwrap();
    let h = Gyrostat(p.clone());
    let mut rng = rng_from_seed(26);
    for _ in 0..20 {
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let x = s.to_real();
        let v = twistor_real_vector_field(&h, &x);
        let g = lifted_gradient_real(&h, &x);
        for m in 0..4 {
            assert_abs_diff_eq!(v[m], -g[4 + m], epsilon = 1e-14);
            assert_abs_diff_eq!(v[4 + m], g[m], epsilon = 1e-14);
        }
        // directional derivative of J_e along the field
        let eps = 1e-6;
        let xp: [f64; 8] = std::array::from_fn(|i| x[i] + eps * v[i]);
        let xm: [f64; 8] = std::array::from_fn(|i| x[i] - eps * v[i]);
        let ep = momentum_e3(&TwistorState::from_real(&xp)).to_array();
        let em = momentum_e3(&TwistorState::from_real(&xm)).to_array();
        let down = e3_vector_field(&p, &momentum_e3(&s)).to_array();
        for i in 0..6 {
            let d = (ep[i] - em[i]) / (2.0 * eps);
            assert!((d - down[i]).abs() < 1e-6 * (1.0 + down[i].abs()));
        }
    }
    let (dt, dz) = twistor_vector_field(&Constant(3.0), &worked_state());
    assert!(dt.norm() == 0.0 && dz.norm() == 0.0);
}

#[test]
fn wave_amplitude_examples() {
    let s2 = 2f64.sqrt();
    let w = WaveAmplitudes { a: spin(c(s2, 0.0), c(0.0, 0.0)), b: SpinorC2::zeros() };
    let s = ab_to_spinor(&w);
    assert!((s.theta - spin(c(1.0, 0.0), c(0.0, 0.0))).norm() < 1e-15);
    assert!((s.zeta - spin(c(0.0, 1.0), c(0.0, 0.0))).norm() < 1e-15);
    let s = ab_to_spinor(&WaveAmplitudes { a: SpinorC2::zeros(), b: SpinorC2::zeros() });
    assert_eq!(s.theta.norm() + s.zeta.norm(), 0.0);

    let mut rng = rng_from_seed(27);
    for _ in 0..100 {
        let w = WaveAmplitudes { a: random_spinor(&mut rng, 1.0), b: random_spinor(&mut rng, 1.0) };
        let back = spinor_to_ab(&ab_to_spinor(&w));
        // componentwise, relative to the amplitude scale
        let scale = 1.0 + w.a.norm() + w.b.norm();
        let err = (back.a - w.a).iter().chain((back.b - w.b).iter()).fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(err < 1e-15 * scale, "{err}");
    }
}

#[test]
fn lifted_integrals() {
    assert_abs_diff_eq!(lifted_integral(&IntegralKind::Zhukovskii, &worked_state()), 1.0, epsilon = 1e-15);
    let mut rng = rng_from_seed(28);
    for _ in 0..100 {
        let s = random_twistor(&mut rng, &SamplingBounds::default());
        let ((k1, k2), (a, b)) = casimir_lift_pair(&s);
        assert!((k1 - a).abs() < 1e-12 * (1.0 + a.abs()));
        assert!((k2 - b).abs() < 1e-12 * (1.0 + b.abs()));
    }
    let s = TwistorState::new(spin(c(0.3, 1.0), c(-2.0, 0.5)), SpinorC2::zeros());
    assert_eq!(lifted_integral(&IntegralKind::Gamma0, &s), 0.0);
    let k = lifted_integral(&IntegralKind::Clebsch { inertia: [1.0, 2.0, 3.0], eps: 0.1 }, &s);
    assert_eq!(k, 0.0);
    assert!(IntegralKind::from_name("bogus", [1.0; 3], (0.0, 0.0), 0.0).is_err());
    assert_eq!(IntegralKind::from_name("J0", [1.0; 3], (0.0, 0.0), 0.0).unwrap(), IntegralKind::J0);
}

#[test]
fn real_chart_examples() {
    let p = CanonicalPoint8::default();
    assert_eq!(momentum_e3_real(&p).max_abs(), 0.0);
    let p = CanonicalPoint8 { q: [1.0; 4], pi: [0.0; 4] };
    assert_abs_diff_eq!(momentum_a2_real(&p).gamma0, -2.0, epsilon = 1e-15);

    let mut rng = rng_from_seed(29);
    for _ in 0..50 {
        let x: [f64; 8] = std::array::from_fn(|_| normal(&mut rng));
        let p = CanonicalPoint8::from_array(&x);
        let e = momentum_e3_real(&p);
        let a = momentum_a2_real(&p);
        let j4 = FourVector::from_parts(a.j0, &(-e.j));
        let g4 = FourVector::from_parts(a.gamma0, &(-e.gamma));
        assert!(image_conditions(&j4, &g4));
        // Gamma0 = -|q|^2 / 2
        let q2: f64 = x[..4].iter().map(|v| v * v).sum();
        assert!((a.gamma0 + 0.5 * q2).abs() < 1e-13 * (1.0 + q2));
        // Jacobian rows against finite differences
        let jac = momentum_e3_jacobian_real(&x);
        for (r, row) in jac.iter().enumerate() {
            let fd = fd_real(&|y| momentum_e3_real(&CanonicalPoint8::from_array(y)).to_array()[r], &x);
            assert!(row.iter().zip(&fd).all(|(a, b)| (a - b).abs() < 1e-8));
        }
    }
}

#[test]
fn hopf_section_reconstructs_gamma() {
    let mut rng = rng_from_seed(30);
    for _ in 0..100 {
        let g = random_vec3(&mut rng, 2.0);
        let z = hopf_section(&g).unwrap();
        let s = TwistorState::new(SpinorC2::zeros(), z);
        assert!((momentum_e3(&s).gamma - g).norm() < 1e-12 * (1.0 + g.norm()));
    }
    assert!(hopf_section(&Vec3::zeros()).is_err());
}

#[test]
fn puncture_guard() {
    assert!(worked_state().is_punctured());
    let s = TwistorState::new(spin(c(1.0, 0.0), c(0.0, 0.0)), SpinorC2::zeros());
    assert!(!s.is_punctured());
    assert!(s.require_punctured().is_err());
}

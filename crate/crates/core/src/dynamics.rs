//! ODE engine: classical RK4, Dormand-Prince 5(4) with step control, and the
//! implicit midpoint rule, over flattened real states. Chart adapters pack
//! each phase space into a real vector; `integrate` records trajectories and
//! drift of named invariants and stops early, with a flag, when a state
//! leaves its domain.
//!
//! The implicit midpoint rule is symplectic on the canonical charts (twistor
//! real chart, Moser chart, monopole chart with `mu = 0`). With `mu != 0` the
//! monopole bracket is not constant and the method is only second order.

use crate::algebra::Vec3;
use crate::e3::{e3_flow, E3Function, E3State};
use crate::error::{Error, Result};
use crate::reduced::{
    monopole_vector_field_generic, project_embedded, rho_of_nu, sphere_flow_embedded,
    sphere_flow_moser, MonopoleGrad, MonopoleState, SphereStateMoser, MOSER_POLE_RADIUS, Y_GUARD,
};
use crate::twistor::{twistor_real_vector_field, ZETA_GUARD};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

/// Smallest step the adaptive controller may take.
pub const STEP_UNDERFLOW: f64 = 1e-14;
/// Fixed-point tolerance of the implicit midpoint iteration.
pub const MIDPOINT_TOL: f64 = 1e-13;
pub const MIDPOINT_MAX_ITER: usize = 50;

/// Autonomous or time-dependent system `dx/dt = f(t, x)` on R^n.
pub trait OdeSystem: Sync {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]);
    /// Domain guard; states outside end a run early.
    fn in_domain(&self, _x: &[f64]) -> bool {
        true
    }
    /// Optional projection back onto a constraint set.
    fn project(&self, _x: &mut [f64]) {}
}

/// Adapter for closures.
pub struct FnSystem<F: Fn(f64, &[f64], &mut [f64]) + Sync> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64]) + Sync> OdeSystem for FnSystem<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        (self.f)(t, x, dx)
    }
}

fn eval(f: &dyn OdeSystem, t: f64, x: &[f64]) -> Vec<f64> {
    let mut dx = vec![0.0; x.len()];
    f.rhs(t, x, &mut dx);
    dx
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Usage(format!("step size must be positive, got {dt}")));
    }
    Ok(())
}

fn check_finite(x: &[f64], t: f64) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Integration(format!("non-finite state at t = {t}")))
    }
}

/// One classical Runge-Kutta step.
pub fn rk4_step(f: &dyn OdeSystem, t: f64, x: &[f64], dt: f64) -> Result<Vec<f64>> {
    check_dt(dt)?;
    let k1 = eval(f, t, x);
    let k2 = eval(f, t + 0.5 * dt, &axpy(x, 0.5 * dt, &k1));
    let k3 = eval(f, t + 0.5 * dt, &axpy(x, 0.5 * dt, &k2));
    let k4 = eval(f, t + dt, &axpy(x, dt, &k3));
    let out: Vec<f64> = (0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    check_finite(&out, t + dt)?;
    Ok(out)
}

/// One implicit midpoint step `x1 = x + dt f(t + dt/2, (x + x1)/2)` solved by
/// fixed-point iteration.
pub fn implicit_midpoint_step(f: &dyn OdeSystem, t: f64, x: &[f64], dt: f64) -> Result<Vec<f64>> {
    check_dt(dt)?;
    let n = x.len();
    let mut x1 = axpy(x, dt, &eval(f, t, x));
    for _ in 0..MIDPOINT_MAX_ITER {
        let mid: Vec<f64> = (0..n).map(|i| 0.5 * (x[i] + x1[i])).collect();
        let next = axpy(x, dt, &eval(f, t + 0.5 * dt, &mid));
        check_finite(&next, t + dt)?;
        let scale = next.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let res = (0..n).map(|i| (next[i] - x1[i]).abs()).fold(0.0, f64::max);
        x1 = next;
        if res <= MIDPOINT_TOL * scale {
            return Ok(x1);
        }
    }
    Err(Error::Iteration(format!(
        "implicit midpoint did not converge in {MIDPOINT_MAX_ITER} iterations at t = {t}"
    )))
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step: fifth-order solution and error norm scaled by
/// `atol + rtol max(|x|, |x1|)` (RMS).
pub fn dopri_step(f: &dyn OdeSystem, t: f64, x: &[f64], dt: f64, rtol: f64, atol: f64) -> (Vec<f64>, f64) {
    let n = x.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut xs = x.to_vec();
        for (j, kj) in k.iter().enumerate() {
            let a = DP_A[s][j];
            if a != 0.0 {
                for i in 0..n {
                    xs[i] += dt * a * kj[i];
                }
            }
        }
        k.push(eval(f, t + DP_C[s] * dt, &xs));
    }
    let mut x5 = x.to_vec();
    let mut err = 0.0;
    for i in 0..n {
        let mut s5 = 0.0;
        let mut s4 = 0.0;
        for s in 0..7 {
            s5 += DP_B5[s] * k[s][i];
            s4 += DP_B4[s] * k[s][i];
        }
        x5[i] += dt * s5;
        let sc = atol + rtol * x[i].abs().max(x5[i].abs());
        let e = dt * (s5 - s4) / sc;
        err += e * e;
    }
    (x5, (err / n.max(1) as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4,
    Rk45,
    ImplicitMidpoint,
}

impl Method {
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "rk45" => Ok(Method::Rk45),
            "implicit-midpoint" | "midpoint" => Ok(Method::ImplicitMidpoint),
            other => Err(Error::Usage(format!("unknown integrator method '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Rk45 => "rk45",
            Method::ImplicitMidpoint => "implicit-midpoint",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step, or the initial step for rk45.
    pub dt: f64,
    pub t_max: f64,
    pub rtol: f64,
    pub atol: f64,
    pub projection: bool,
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            dt: 1e-3,
            t_max: 10.0,
            rtol: 1e-10,
            atol: 1e-12,
            projection: false,
            record_stride: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_max: f64) -> Self {
        IntegratorConfig {
            dt,
            t_max,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Validation(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::Validation(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.dt > self.t_max {
            return Err(Error::Validation(format!(
                "dt = {} exceeds t_max = {}",
                self.dt, self.t_max
            )));
        }
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(Error::Validation("rk45 tolerances rtol and atol must be positive".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::Validation("record_stride must be at least 1".into()));
        }
        Ok(())
    }
}

pub type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A named scalar function of the packed state.
pub struct NamedInvariant {
    pub name: String,
    pub f: ScalarFn,
}

impl NamedInvariant {
    pub fn new(name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        NamedInvariant {
            name: name.into(),
            f: Box::new(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub invariant_names: Vec<String>,
    /// One row per sample, in the order of `invariant_names`.
    pub invariants: Vec<Vec<f64>>,
    pub terminated_early: bool,
    pub termination_reason: Option<String>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Linear interpolation between recorded samples.
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        let n = self.times.len();
        if t <= self.times[0] || n == 1 {
            return self.states[0].clone();
        }
        if t >= self.times[n - 1] {
            return self.states[n - 1].clone();
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let w = (t - t0) / (t1 - t0);
        self.states[k]
            .iter()
            .zip(&self.states[k + 1])
            .map(|(a, b)| a + w * (b - a))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantDrift {
    pub name: String,
    pub initial: f64,
    pub max_abs: f64,
    /// `max_abs / |initial|`, or `max_abs` when `|initial| < 1e-8`.
    pub max_rel: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub invariants: Vec<InvariantDrift>,
    pub wall_time_s: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub terminated_early: bool,
    pub termination_reason: Option<String>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&InvariantDrift> {
        self.invariants.iter().find(|d| d.name == name)
    }

    pub fn max_rel(&self) -> f64 {
        self.invariants.iter().map(|d| d.max_rel).fold(0.0, f64::max)
    }
}

struct Recorder<'a> {
    invs: &'a [NamedInvariant],
    initial: Vec<f64>,
    max_abs: Vec<f64>,
    traj: Trajectory,
}

impl<'a> Recorder<'a> {
    fn new(invs: &'a [NamedInvariant], x0: &[f64]) -> Self {
        let initial: Vec<f64> = invs.iter().map(|i| (i.f)(x0)).collect();
        Recorder {
            invs,
            max_abs: vec![0.0; invs.len()],
            traj: Trajectory {
                times: vec![0.0],
                states: vec![x0.to_vec()],
                invariant_names: invs.iter().map(|i| i.name.clone()).collect(),
                invariants: vec![initial.clone()],
                terminated_early: false,
                termination_reason: None,
            },
            initial,
        }
    }

    fn observe(&mut self, t: f64, x: &[f64], record: bool) {
        let vals: Vec<f64> = self.invs.iter().map(|i| (i.f)(x)).collect();
        for (k, v) in vals.iter().enumerate() {
            let d = (v - self.initial[k]).abs();
            if d > self.max_abs[k] || d.is_nan() {
                self.max_abs[k] = d;
            }
        }
        if record {
            self.traj.times.push(t);
            self.traj.states.push(x.to_vec());
            self.traj.invariants.push(vals);
        }
    }

    fn stop(&mut self, reason: String) {
        self.traj.terminated_early = true;
        self.traj.termination_reason = Some(reason);
    }

    fn finish(self, started: Instant, steps: usize, rejected: usize) -> (Trajectory, DriftReport) {
        let invariants = self
            .invs
            .iter()
            .enumerate()
            .map(|(k, inv)| {
                let i0 = self.initial[k];
                let a = self.max_abs[k];
                InvariantDrift {
                    name: inv.name.clone(),
                    initial: i0,
                    max_abs: a,
                    max_rel: if i0.abs() < 1e-8 { a } else { a / i0.abs() },
                }
            })
            .collect();
        let report = DriftReport {
            invariants,
            wall_time_s: started.elapsed().as_secs_f64(),
            steps,
            rejected_steps: rejected,
            terminated_early: self.traj.terminated_early,
            termination_reason: self.traj.termination_reason.clone(),
        };
        (self.traj, report)
    }
}

/// Integrates `sys` from `x0` over `[0, t_max]`. Domain exits, non-finite
/// states and solver failures end the run early with a flag and reason; the
/// partial trajectory is returned.
pub fn integrate(
    sys: &dyn OdeSystem,
    x0: &[f64],
    cfg: &IntegratorConfig,
    invariants: &[NamedInvariant],
) -> Result<(Trajectory, DriftReport)> {
    cfg.validate()?;
    if x0.len() != sys.dim() {
        return Err(Error::Usage(format!(
            "initial state has {} components, the system expects {}",
            x0.len(),
            sys.dim()
        )));
    }
    if !sys.in_domain(x0) || x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("initial state is outside the phase-space domain".into()));
    }
    let started = Instant::now();
    let mut rec = Recorder::new(invariants, x0);
    match cfg.method {
        Method::Rk4 | Method::ImplicitMidpoint => {
            let n = (cfg.t_max / cfg.dt - 1e-9).ceil().max(1.0) as usize;
            let mut x = x0.to_vec();
            let mut t = 0.0;
            let mut steps = 0;
            for k in 1..=n {
                let t_next = if k == n { cfg.t_max } else { k as f64 * cfg.dt };
                let h = t_next - t;
                let step = match cfg.method {
                    Method::Rk4 => rk4_step(sys, t, &x, h),
                    _ => implicit_midpoint_step(sys, t, &x, h),
                };
                match step {
                    Ok(mut xn) => {
                        if cfg.projection {
                            sys.project(&mut xn);
                        }
                        steps += 1;
                        t = t_next;
                        if !sys.in_domain(&xn) {
                            rec.observe(t, &xn, true);
                            rec.stop(format!("state left the domain at t = {t}"));
                            return Ok(rec.finish(started, steps, 0));
                        }
                        x = xn;
                        rec.observe(t, &x, k % cfg.record_stride == 0 || k == n);
                    }
                    Err(e) => {
                        rec.stop(e.to_string());
                        return Ok(rec.finish(started, steps, 0));
                    }
                }
            }
            Ok(rec.finish(started, steps, 0))
        }
        Method::Rk45 => {
            let mut x = x0.to_vec();
            let mut t = 0.0;
            let mut h = cfg.dt;
            let (mut steps, mut rejected) = (0usize, 0usize);
            while t < cfg.t_max {
                let last = t + h >= cfg.t_max;
                let hh = if last { cfg.t_max - t } else { h };
                let (xn, err) = dopri_step(sys, t, &x, hh, cfg.rtol, cfg.atol);
                if !err.is_finite() || xn.iter().any(|v| !v.is_finite()) {
                    rejected += 1;
                    h = hh * 0.2;
                } else if err <= 1.0 {
                    let mut xn = xn;
                    if cfg.projection {
                        sys.project(&mut xn);
                    }
                    t = if last { cfg.t_max } else { t + hh };
                    steps += 1;
                    if !sys.in_domain(&xn) {
                        rec.observe(t, &xn, true);
                        rec.stop(format!("state left the domain at t = {t}"));
                        return Ok(rec.finish(started, steps, rejected));
                    }
                    x = xn;
                    rec.observe(t, &x, steps % cfg.record_stride == 0 || t >= cfg.t_max);
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    h = hh * fac;
                    if last {
                        break;
                    }
                } else {
                    rejected += 1;
                    h = hh * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                }
                if h < STEP_UNDERFLOW {
                    rec.stop(
                        Error::Stiffness(format!("step size {h:.3e} underflowed at t = {t}")).to_string(),
                    );
                    return Ok(rec.finish(started, steps, rejected));
                }
            }
            Ok(rec.finish(started, steps, rejected))
        }
    }
}

/// Adaptive Dormand-Prince integration over `[0, t_max]` recording every
/// accepted step; step underflow is a stiffness error.
pub fn rk45_adaptive(f: &dyn OdeSystem, x0: &[f64], t_max: f64, rtol: f64, atol: f64) -> Result<Trajectory> {
    let cfg = IntegratorConfig {
        method: Method::Rk45,
        dt: (t_max * 1e-3).min(1e-2),
        t_max,
        rtol,
        atol,
        projection: false,
        record_stride: 1,
    };
    let (traj, rep) = integrate(f, x0, &cfg, &[])?;
    if let Some(reason) = rep.termination_reason {
        if reason.contains("stiffness") {
            return Err(Error::Stiffness(reason));
        }
        return Err(Error::Integration(reason));
    }
    Ok(traj)
}

/// Runs independent trajectories in parallel; results keep the input order.
pub fn integrate_ensemble(
    sys: &dyn OdeSystem,
    x0s: &[Vec<f64>],
    cfg: &IntegratorConfig,
    invariants: &[NamedInvariant],
) -> Vec<Result<(Trajectory, DriftReport)>> {
    x0s.par_iter().map(|x0| integrate(sys, x0, cfg, invariants)).collect()
}

/// Least-squares slope of `log err` against `log dt`.
pub fn convergence_exponent(dts: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Phase space of a flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    E3,
    Twistor,
    Monopole,
    SphereMoser,
    SphereEmbedded,
}

impl Realization {
    pub fn name(&self) -> &'static str {
        match self {
            Realization::E3 => "e3",
            Realization::Twistor => "twistor",
            Realization::Monopole => "monopole",
            Realization::SphereMoser => "sphere-moser",
            Realization::SphereEmbedded => "sphere-embedded",
        }
    }

    /// Packed state component names.
    pub fn component_names(&self) -> Vec<&'static str> {
        match self {
            Realization::E3 => vec!["J1", "J2", "J3", "Gamma1", "Gamma2", "Gamma3"],
            Realization::Twistor | Realization::SphereEmbedded => {
                vec!["q0", "q1", "q2", "q3", "pi0", "pi1", "pi2", "pi3"]
            }
            Realization::Monopole => vec!["p1", "p2", "p3", "y1", "y2", "y3"],
            Realization::SphereMoser => vec!["y1", "y2", "y3", "p1", "p2", "p3"],
        }
    }

    pub fn dim(&self) -> usize {
        self.component_names().len()
    }
}

/// Hamiltonian flow of `H o (momentum map)` on one realization.
#[derive(Clone)]
pub struct FlowSpec {
    pub realization: Realization,
    pub hamiltonian: Arc<dyn E3Function>,
    /// Monopole strength (monopole space only).
    pub mu: f64,
    /// Gamma0 level (sphere charts only).
    pub nu: f64,
    /// `|y|` guard of the monopole space.
    pub y_guard: f64,
}

impl FlowSpec {
    pub fn new(realization: Realization, hamiltonian: Arc<dyn E3Function>) -> Self {
        FlowSpec {
            realization,
            hamiltonian,
            mu: 0.0,
            nu: -1.0,
            y_guard: Y_GUARD,
        }
    }

    pub fn e3(h: Arc<dyn E3Function>) -> Self {
        Self::new(Realization::E3, h)
    }

    pub fn twistor(h: Arc<dyn E3Function>) -> Self {
        Self::new(Realization::Twistor, h)
    }

    pub fn monopole(h: Arc<dyn E3Function>, mu: f64) -> Self {
        FlowSpec {
            mu,
            ..Self::new(Realization::Monopole, h)
        }
    }

    pub fn sphere_moser(h: Arc<dyn E3Function>, nu: f64) -> Result<Self> {
        Self::check_nu(nu)?;
        Ok(FlowSpec {
            nu,
            ..Self::new(Realization::SphereMoser, h)
        })
    }

    pub fn sphere_embedded(h: Arc<dyn E3Function>, nu: f64) -> Result<Self> {
        Self::check_nu(nu)?;
        Ok(FlowSpec {
            nu,
            ..Self::new(Realization::SphereEmbedded, h)
        })
    }

    fn check_nu(nu: f64) -> Result<()> {
        if !(nu < 0.0) {
            return Err(Error::Validation(format!("nu must be negative, got {nu}")));
        }
        Ok(())
    }

    pub fn rho(&self) -> f64 {
        rho_of_nu(self.nu)
    }
}

impl OdeSystem for FlowSpec {
    fn dim(&self) -> usize {
        self.realization.dim()
    }

    fn rhs(&self, _t: f64, x: &[f64], dx: &mut [f64]) {
        let h = self.hamiltonian.as_ref();
        match self.realization {
            Realization::E3 => {
                let v = e3_flow(h, &E3State::from_slice(x)).to_array();
                dx.copy_from_slice(&v);
            }
            Realization::Twistor => {
                let xa: [f64; 8] = x.try_into().expect("8 components");
                dx.copy_from_slice(&twistor_real_vector_field(h, &xa));
            }
            Realization::Monopole => {
                let s = MonopoleState {
                    p: Vec3::new(x[0], x[1], x[2]),
                    y: Vec3::new(x[3], x[4], x[5]),
                };
                let r = s.y.norm();
                let yh = s.y / r;
                let e = E3State::new(s.p.cross(&s.y) + yh * self.mu, s.y);
                let g = crate::reduced::pullback_monopole(&s, self.mu, &h.gradient(&e));
                let (dp, dy) = monopole_vector_field_generic(&g, &s, self.mu);
                dx[..3].copy_from_slice(dp.as_slice());
                dx[3..].copy_from_slice(dy.as_slice());
            }
            Realization::SphereMoser => {
                let s = SphereStateMoser {
                    y: Vec3::new(x[0], x[1], x[2]),
                    p: Vec3::new(x[3], x[4], x[5]),
                };
                dx.copy_from_slice(&sphere_flow_moser(h, &s, self.nu));
            }
            Realization::SphereEmbedded => {
                let xa: [f64; 8] = x.try_into().expect("8 components");
                dx.copy_from_slice(&sphere_flow_embedded(h, &xa));
            }
        }
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        match self.realization {
            Realization::E3 => true,
            Realization::Twistor => {
                let q2: f64 = x[..4].iter().map(|v| v * v).sum();
                (q2 * 0.5).sqrt() >= ZETA_GUARD
            }
            Realization::Monopole => Vec3::new(x[3], x[4], x[5]).norm() > self.y_guard,
            Realization::SphereMoser => Vec3::new(x[0], x[1], x[2]).norm() <= MOSER_POLE_RADIUS,
            Realization::SphereEmbedded => true,
        }
    }

    fn project(&self, x: &mut [f64]) {
        if self.realization == Realization::SphereEmbedded {
            let xa: [f64; 8] = (&*x).try_into().expect("8 components");
            x.copy_from_slice(&project_embedded(&xa, self.rho()));
        }
    }
}

/// Hamiltonian flow of a function given directly on the monopole space, for
/// dynamics that are not lifted from e(3)*.
pub struct MonopoleCustomFlow<F: Fn(&MonopoleState) -> MonopoleGrad + Sync> {
    pub mu: f64,
    pub gradient: F,
    pub y_guard: f64,
}

impl<F: Fn(&MonopoleState) -> MonopoleGrad + Sync> OdeSystem for MonopoleCustomFlow<F> {
    fn dim(&self) -> usize {
        6
    }
    fn rhs(&self, _t: f64, x: &[f64], dx: &mut [f64]) {
        let s = MonopoleState {
            p: Vec3::new(x[0], x[1], x[2]),
            y: Vec3::new(x[3], x[4], x[5]),
        };
        let g = (self.gradient)(&s);
        let (dp, dy) = monopole_vector_field_generic(&g, &s, self.mu);
        dx[..3].copy_from_slice(dp.as_slice());
        dx[3..].copy_from_slice(dy.as_slice());
    }
    fn in_domain(&self, x: &[f64]) -> bool {
        Vec3::new(x[3], x[4], x[5]).norm() > self.y_guard
    }
}

impl FlowSpec {
    /// Image of a packed state in e(3)* under the realization's momentum map.
    pub fn to_e3(&self, x: &[f64]) -> E3State {
        match self.realization {
            Realization::E3 => E3State::from_slice(x),
            Realization::Twistor | Realization::SphereEmbedded => {
                crate::twistor::momentum_e3_real(&crate::algebra::CanonicalPoint8::from_array(x))
            }
            Realization::Monopole => {
                let p = Vec3::new(x[0], x[1], x[2]);
                let y = Vec3::new(x[3], x[4], x[5]);
                E3State::new(p.cross(&y) + y * (self.mu / y.norm()), y)
            }
            Realization::SphereMoser => {
                let s = SphereStateMoser {
                    y: Vec3::new(x[0], x[1], x[2]),
                    p: Vec3::new(x[3], x[4], x[5]),
                };
                let e = s.to_embedded(self.nu);
                crate::twistor::momentum_e3_real(&e.point())
            }
        }
    }

    /// `(J0, Gamma0)` of the realization: the twistor functions, the levels
    /// on the reduced spaces (`J0~` and `nu` on `T*S^3`, `mu` and `-|y|` on
    /// the monopole space).
    pub fn to_a2(&self, x: &[f64]) -> (f64, f64) {
        match self.realization {
            Realization::E3 => (f64::NAN, f64::NAN),
            Realization::Twistor | Realization::SphereEmbedded => {
                let a = crate::twistor::momentum_a2_real(&crate::algebra::CanonicalPoint8::from_array(x));
                (a.j0, a.gamma0)
            }
            Realization::Monopole => (self.mu, -Vec3::new(x[3], x[4], x[5]).norm()),
            Realization::SphereMoser => {
                let s = SphereStateMoser {
                    y: Vec3::new(x[0], x[1], x[2]),
                    p: Vec3::new(x[3], x[4], x[5]),
                };
                let a = crate::twistor::momentum_a2_real(&s.to_embedded(self.nu).point());
                (a.j0, a.gamma0)
            }
        }
    }
}

//! Configuration, simulation runs and report writing behind the `e3real`
//! command-line tool.
//!
//! Exit codes: 0 success, 1 failed verification checks, 2 usage or
//! configuration errors, 3 runtime failures (integration errors, early
//! termination, I/O).

use e3real::algebra::{c, Vec3};
use e3real::dynamics::{integrate, DriftReport, FlowSpec, IntegratorConfig, Method, Realization, Trajectory};
use e3real::e3::{E3State, GyrostatParams, PotentialSpec};
use e3real::reduced::{monopole_from_e3, sphere_from_e3, twistor_from_e3, MonopoleState, SphereStateEmbedded, SphereStateMoser};
use e3real::sampling::{random_e3, random_monopole, random_moser, random_twistor, rng_from_seed, SamplingBounds};
use e3real::scenario::{Scenario, ScenarioKind};
use e3real::twistor::TwistorState;
use e3real::verify::{run_suite, Suite, SuiteConfig};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

pub const SEED_ENV: &str = "E3REAL_SEED";

/// A configuration problem, tied to the field that caused it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertiaSection {
    /// `[I1, I2, I3]`; Kovalevskaya also accepts `[I]`.
    pub values: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSection {
    pub values: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    /// Custom scenario only: `zero`, `linear` or `clebsch`.
    pub kind: Option<String>,
    /// Linear potential vector; Kovalevskaya takes `[chi1, chi2]`.
    pub chi: Option<Vec<f64>>,
    /// Clebsch quadratic coefficient, or the LMG `eps`.
    pub eps: Option<f64>,
    /// LMG `V`.
    pub v: Option<f64>,
    /// LMG `W`.
    pub w: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(rename = "J")]
    pub j: Option<Vec<f64>>,
    #[serde(rename = "Gamma")]
    pub gamma: Option<Vec<f64>>,
    /// Spinor as `[Re t1, Im t1, Re t2, Im t2]`.
    pub theta: Option<Vec<f64>>,
    pub zeta: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub pi: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub method: Option<String>,
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub projection: Option<bool>,
    pub record_stride: Option<usize>,
}

/// Scenario, realization, parameters, initial state and integrator
/// settings as read from a TOML file and command-line flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<String>,
    /// `e3`, `twistor`, `monopole` or `sphere`.
    pub realization: Option<String>,
    /// Sphere only: `moser` (default) or `embedded`.
    pub chart: Option<String>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub seed: Option<u64>,
    /// Start at the section point over `initial.J`, `initial.Gamma`.
    pub from_e3: Option<bool>,
    /// Sample the initial state from the seed.
    pub random_initial: Option<bool>,
    #[serde(default)]
    pub inertia: InertiaSection,
    #[serde(default)]
    pub lambda: LambdaSection,
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),+) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )+
    };
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        toml::from_str(s).map_err(|e| ConfigError::new("config", e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &ScenarioConfig) -> Self {
        overlay!(self, top, scenario, realization, chart, mu, nu, seed, from_e3, random_initial);
        overlay!(self.inertia, top.inertia, values);
        overlay!(self.lambda, top.lambda, values);
        overlay!(self.potential, top.potential, kind, chi, eps, v, w);
        overlay!(self.initial, top.initial, j, gamma, theta, zeta, p, y, q, pi);
        overlay!(self.integrator, top.integrator, method, dt, t_max, rtol, atol, projection, record_stride);
        self
    }
}

/// Seed from `E3REAL_SEED`, or 0 when unset.
pub fn default_seed() -> Result<u64, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| ConfigError::new(SEED_ENV, format!("'{s}' is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn vec3(v: &[f64], field: &str) -> Result<Vec3, ConfigError> {
    match v {
        [a, b, cc] if v.iter().all(|x| x.is_finite()) => Ok(Vec3::new(*a, *b, *cc)),
        _ => Err(ConfigError::new(field, format!("expected 3 finite values, got {v:?}"))),
    }
}

fn vec4(v: &[f64], field: &str) -> Result<[f64; 4], ConfigError> {
    match v {
        [a, b, cc, d] if v.iter().all(|x| x.is_finite()) => Ok([*a, *b, *cc, *d]),
        _ => Err(ConfigError::new(field, format!("expected 4 finite values, got {v:?}"))),
    }
}

fn need<'a, T>(v: &'a Option<T>, field: &str, why: &str) -> Result<&'a T, ConfigError> {
    v.as_ref().ok_or_else(|| ConfigError::new(field, format!("missing; required {why}")))
}

fn forbid<T>(v: &Option<T>, field: &str, why: &str) -> Result<(), ConfigError> {
    match v {
        Some(_) => Err(ConfigError::new(field, format!("not applicable {why}"))),
        None => Ok(()),
    }
}

fn core_err(field: &str) -> impl Fn(e3real::Error) -> ConfigError + '_ {
    move |e| ConfigError::new(field, e.to_string())
}

fn inertia3(cfg: &ScenarioConfig, why: &str) -> Result<[f64; 3], ConfigError> {
    let v = vec3(need(&cfg.inertia.values, "inertia", why)?, "inertia")?;
    Ok([v.x, v.y, v.z])
}

/// Builds the scenario and checks that only applicable parameters are set.
pub fn build_scenario(cfg: &ScenarioConfig) -> Result<Scenario, ConfigError> {
    let name = need(&cfg.scenario, "scenario", "to pick a Hamiltonian")?;
    let kind = ScenarioKind::from_name(name).map_err(core_err("scenario"))?;
    let pot = &cfg.potential;
    let why = format!("for scenario {name}");
    let why = why.as_str();
    if kind != ScenarioKind::Custom {
        forbid(&pot.kind, "potential.kind", why)?;
    }
    match kind {
        ScenarioKind::Euler => {
            forbid(&cfg.lambda.values, "lambda", why)?;
            forbid(&pot.chi, "potential.chi", why)?;
            forbid(&pot.eps, "potential.eps", why)?;
            forbid(&pot.v, "potential.v", why)?;
            forbid(&pot.w, "potential.w", why)?;
            Scenario::euler(inertia3(cfg, why)?).map_err(core_err("inertia"))
        }
        ScenarioKind::Kovalevskaya => {
            forbid(&cfg.lambda.values, "lambda", why)?;
            forbid(&pot.eps, "potential.eps", why)?;
            forbid(&pot.v, "potential.v", why)?;
            forbid(&pot.w, "potential.w", why)?;
            let i = match need(&cfg.inertia.values, "inertia", why)?.as_slice() {
                [i] => *i,
                [a, b, cc] if a == b && (cc * 2.0 - a).abs() <= 1e-12 * a.abs() => *a,
                other => {
                    return Err(ConfigError::new(
                        "inertia",
                        format!("Kovalevskaya needs [I] or [I, I, I/2], got {other:?}"),
                    ))
                }
            };
            let (chi1, chi2) = match need(&pot.chi, "potential.chi", why)?.as_slice() {
                [a, b] | [a, b, 0.0] => (*a, *b),
                other => {
                    return Err(ConfigError::new(
                        "potential.chi",
                        format!("Kovalevskaya needs [chi1, chi2] (chi3 = 0), got {other:?}"),
                    ))
                }
            };
            Scenario::kovalevskaya(i, chi1, chi2).map_err(core_err("inertia"))
        }
        ScenarioKind::Zhukovskii => {
            forbid(&pot.chi, "potential.chi", why)?;
            forbid(&pot.eps, "potential.eps", why)?;
            forbid(&pot.v, "potential.v", why)?;
            forbid(&pot.w, "potential.w", why)?;
            let lambda = vec3(need(&cfg.lambda.values, "lambda", why)?, "lambda")?;
            Scenario::zhukovskii(inertia3(cfg, why)?, lambda).map_err(core_err("inertia"))
        }
        ScenarioKind::Clebsch => {
            forbid(&cfg.lambda.values, "lambda", why)?;
            forbid(&pot.chi, "potential.chi", why)?;
            forbid(&pot.v, "potential.v", why)?;
            forbid(&pot.w, "potential.w", why)?;
            let eps = *need(&pot.eps, "potential.eps", why)?;
            Scenario::clebsch(inertia3(cfg, why)?, eps).map_err(core_err("potential.eps"))
        }
        ScenarioKind::Lmg => {
            forbid(&cfg.inertia.values, "inertia", why)?;
            forbid(&cfg.lambda.values, "lambda", why)?;
            forbid(&pot.chi, "potential.chi", "for scenario lmg, which takes no potential")?;
            let eps = *need(&pot.eps, "potential.eps", why)?;
            let v = *need(&pot.v, "potential.v", why)?;
            let w = *need(&pot.w, "potential.w", why)?;
            Scenario::lmg(eps, v, w).map_err(core_err("potential"))
        }
        ScenarioKind::Custom => {
            forbid(&pot.v, "potential.v", why)?;
            forbid(&pot.w, "potential.w", why)?;
            let lambda = match &cfg.lambda.values {
                Some(l) => vec3(l, "lambda")?,
                None => Vec3::zeros(),
            };
            let default_kind = if pot.chi.is_some() {
                "linear"
            } else if pot.eps.is_some() {
                "clebsch"
            } else {
                "zero"
            };
            let potential = match pot.kind.as_deref().unwrap_or(default_kind) {
                "zero" => {
                    forbid(&pot.chi, "potential.chi", "for a zero potential")?;
                    forbid(&pot.eps, "potential.eps", "for a zero potential")?;
                    PotentialSpec::Zero
                }
                "linear" => {
                    forbid(&pot.eps, "potential.eps", "for a linear potential")?;
                    PotentialSpec::Linear(vec3(need(&pot.chi, "potential.chi", "for a linear potential")?, "potential.chi")?)
                }
                "clebsch" => {
                    forbid(&pot.chi, "potential.chi", "for a Clebsch potential")?;
                    PotentialSpec::ClebschQuadratic(*need(&pot.eps, "potential.eps", "for a Clebsch potential")?)
                }
                other => {
                    return Err(ConfigError::new(
                        "potential.kind",
                        format!("unknown potential '{other}' (zero, linear, clebsch)"),
                    ))
                }
            };
            let params = GyrostatParams::new(inertia3(cfg, why)?, lambda, potential).map_err(core_err("inertia"))?;
            Ok(Scenario::custom(params))
        }
    }
}

fn realization(cfg: &ScenarioConfig) -> Result<Realization, ConfigError> {
    let r = cfg.realization.as_deref().unwrap_or("e3");
    let chart = cfg.chart.as_deref();
    if r != "sphere" && chart.is_some() {
        return Err(ConfigError::new("chart", "only the sphere realization has a chart choice"));
    }
    Ok(match r {
        "e3" => Realization::E3,
        "twistor" => Realization::Twistor,
        "monopole" => Realization::Monopole,
        "sphere" => match chart.unwrap_or("moser") {
            "moser" => Realization::SphereMoser,
            "embedded" => Realization::SphereEmbedded,
            other => return Err(ConfigError::new("chart", format!("unknown chart '{other}' (moser, embedded)"))),
        },
        other => {
            return Err(ConfigError::new(
                "realization",
                format!("unknown realization '{other}' (e3, twistor, monopole, sphere)"),
            ))
        }
    })
}

fn integrator(cfg: &ScenarioConfig) -> Result<IntegratorConfig, ConfigError> {
    let s = &cfg.integrator;
    let mut ic = IntegratorConfig::default();
    if let Some(m) = &s.method {
        ic.method = Method::from_name(m).map_err(core_err("integrator.method"))?;
    }
    ic.dt = s.dt.unwrap_or(ic.dt);
    ic.t_max = s.t_max.unwrap_or(ic.t_max);
    ic.rtol = s.rtol.unwrap_or(ic.rtol);
    ic.atol = s.atol.unwrap_or(ic.atol);
    ic.projection = s.projection.unwrap_or(ic.projection);
    ic.record_stride = s.record_stride.unwrap_or(ic.record_stride);
    ic.validate().map_err(core_err("integrator"))?;
    Ok(ic)
}

/// Bounds for sampled initial states, away from guards and high energies.
fn initial_bounds() -> SamplingBounds {
    SamplingBounds { zeta: (0.5, 1.2), y: (0.5, 2.0), gamma: (0.5, 2.0), scale: 0.7 }
}

/// Names of the initial-state fields read by each chart.
fn chart_fields(r: Realization) -> &'static [&'static str] {
    match r {
        Realization::E3 => &["J", "Gamma"],
        Realization::Twistor => &["theta", "zeta"],
        Realization::Monopole | Realization::SphereMoser => &["p", "y"],
        Realization::SphereEmbedded => &["q", "pi"],
    }
}

fn initial_fields(init: &InitialSection) -> [(&'static str, &Option<Vec<f64>>); 8] {
    [
        ("J", &init.j),
        ("Gamma", &init.gamma),
        ("theta", &init.theta),
        ("zeta", &init.zeta),
        ("p", &init.p),
        ("y", &init.y),
        ("q", &init.q),
        ("pi", &init.pi),
    ]
}

/// A fully resolved simulation.
pub struct Run {
    pub scenario: Scenario,
    pub flow: FlowSpec,
    pub x0: Vec<f64>,
    pub integrator: IntegratorConfig,
    pub seed: u64,
}

/// Resolves a configuration into a run; every error names its field.
pub fn resolve(cfg: &ScenarioConfig) -> Result<Run, ConfigError> {
    let scenario = build_scenario(cfg)?;
    let r = realization(cfg)?;
    let integrator = integrator(cfg)?;
    let seed = match cfg.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let from_e3 = cfg.from_e3.unwrap_or(false);
    let random = cfg.random_initial.unwrap_or(false);
    if from_e3 && random {
        return Err(ConfigError::new("from_e3", "cannot be combined with random_initial"));
    }
    let allowed: &[&str] = if random {
        &[]
    } else if from_e3 {
        &["J", "Gamma"]
    } else {
        chart_fields(r)
    };
    for (name, v) in initial_fields(&cfg.initial) {
        if v.is_some() && !allowed.contains(&name) {
            let why = if random {
                "with a sampled initial state".to_string()
            } else if from_e3 {
                "with from_e3, which reads J and Gamma".to_string()
            } else {
                format!("for the {} chart, which reads {}", r.name(), chart_fields(r).join(", "))
            };
            return Err(ConfigError::new(format!("initial.{name}"), why));
        }
    }
    let base = if from_e3 || r == Realization::E3 {
        if random {
            None
        } else {
            let why = "for the initial state";
            let j = vec3(need(&cfg.initial.j, "initial.J", why)?, "initial.J")?;
            let g = vec3(need(&cfg.initial.gamma, "initial.Gamma", why)?, "initial.Gamma")?;
            Some(E3State::new(j, g))
        }
    } else {
        None
    };

    let h = scenario.hamiltonian.clone();
    if r != Realization::Monopole {
        forbid(&cfg.mu, "mu", "outside the monopole realization")?;
    }
    if !matches!(r, Realization::SphereMoser | Realization::SphereEmbedded) {
        forbid(&cfg.nu, "nu", "outside the sphere realization")?;
    }
    let mut rng = rng_from_seed(seed);
    let b = initial_bounds();
    let init = &cfg.initial;
    let (flow, x0) = match r {
        Realization::E3 => {
            let x0 = match base {
                Some(e) => e.to_array().to_vec(),
                None => random_e3(&mut rng, &b).to_array().to_vec(),
            };
            (FlowSpec::e3(h), x0)
        }
        Realization::Twistor => {
            let s = if random {
                random_twistor(&mut rng, &b)
            } else if let Some(e) = base {
                twistor_from_e3(&e).map_err(core_err("initial.Gamma"))?
            } else {
                let why = "for the twistor chart";
                let t = vec4(need(&init.theta, "initial.theta", why)?, "initial.theta")?;
                let z = vec4(need(&init.zeta, "initial.zeta", why)?, "initial.zeta")?;
                let s = TwistorState::from_components(c(t[0], t[1]), c(t[2], t[3]), c(z[0], z[1]), c(z[2], z[3]));
                s.require_punctured().map_err(core_err("initial.zeta"))?;
                s
            };
            (FlowSpec::twistor(h), s.to_real().to_vec())
        }
        Realization::Monopole => {
            let (mu, s) = if let Some(e) = base {
                let level = e.j.dot(&e.gamma) / e.gamma.norm().max(f64::MIN_POSITIVE);
                let mu = cfg.mu.unwrap_or(level);
                (mu, monopole_from_e3(&e, mu).map_err(core_err("initial"))?)
            } else {
                let mu = *need(&cfg.mu, "mu", "for the monopole realization")?;
                let s = if random {
                    random_monopole(&mut rng, &b)
                } else {
                    let why = "for the monopole chart";
                    let p = vec3(need(&init.p, "initial.p", why)?, "initial.p")?;
                    let y = vec3(need(&init.y, "initial.y", why)?, "initial.y")?;
                    MonopoleState::new(p, y).map_err(core_err("initial.y"))?
                };
                (mu, s)
            };
            if !mu.is_finite() {
                return Err(ConfigError::new("mu", "must be finite"));
            }
            (FlowSpec::monopole(h, mu), s.to_array().to_vec())
        }
        Realization::SphereMoser | Realization::SphereEmbedded => {
            let embedded = r == Realization::SphereEmbedded;
            let nu = match (cfg.nu, &base) {
                (Some(nu), _) => nu,
                (None, Some(e)) => -e.gamma.norm(),
                (None, None) => *need(&cfg.nu, "nu", "for the sphere realization")?,
            };
            let flow = if embedded {
                FlowSpec::sphere_embedded(h, nu)
            } else {
                FlowSpec::sphere_moser(h, nu)
            }
            .map_err(core_err("nu"))?;
            let point: SphereStateEmbedded = if let Some(e) = base {
                sphere_from_e3(&e, nu).map_err(core_err("initial.Gamma"))?
            } else if random {
                random_moser(&mut rng, &b).to_embedded(nu)
            } else if embedded {
                let why = "for the embedded sphere chart";
                let q = vec4(need(&init.q, "initial.q", why)?, "initial.q")?;
                let pi = vec4(need(&init.pi, "initial.pi", why)?, "initial.pi")?;
                SphereStateEmbedded::new(q, pi, nu).map_err(core_err("initial.q"))?
            } else {
                let why = "for the Moser chart";
                let y = vec3(need(&init.y, "initial.y", why)?, "initial.y")?;
                let p = vec3(need(&init.p, "initial.p", why)?, "initial.p")?;
                SphereStateMoser::new(y, p).map_err(core_err("initial.y"))?.to_embedded(nu)
            };
            let x0 = if embedded {
                point.to_array().to_vec()
            } else {
                point.to_moser(nu).map_err(core_err("initial"))?.to_array().to_vec()
            };
            (flow, x0)
        }
    };
    Ok(Run { scenario, flow, x0, integrator, seed })
}

/// CSV with header `t`, chart components, then invariant columns; values
/// in `{:.16e}` (17 significant digits), `\n` line endings.
pub fn trajectory_csv(traj: &Trajectory, components: &[&str]) -> String {
    let mut out = String::new();
    let header: Vec<&str> = std::iter::once("t")
        .chain(components.iter().copied())
        .chain(traj.invariant_names.iter().map(String::as_str))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (k, t) in traj.times.iter().enumerate() {
        let row: Vec<String> = std::iter::once(t)
            .chain(traj.states[k].iter())
            .chain(traj.invariants.get(k).into_iter().flatten())
            .map(|v| format!("{v:.16e}"))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

/// Run metadata echoed into the drift report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub seed: u64,
    pub config: ScenarioConfig,
}

/// Drift report file. Wall-clock time is left out so that identical runs
/// give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub metadata: Metadata,
    pub trajectory: String,
    pub scenario: String,
    pub realization: String,
    pub rows: usize,
    pub steps: usize,
    pub rejected_steps: usize,
    pub terminated_early: bool,
    pub termination_reason: Option<String>,
    pub invariants: Vec<e3real::dynamics::InvariantDrift>,
}

impl RunReport {
    fn new(meta: Metadata, out: &Path, run: &Run, traj: &Trajectory, drift: DriftReport) -> Self {
        RunReport {
            metadata: meta,
            trajectory: out.display().to_string(),
            scenario: run.scenario.kind.name().into(),
            realization: run.flow.realization.name().into(),
            rows: traj.times.len(),
            steps: drift.steps,
            rejected_steps: drift.rejected_steps,
            terminated_early: drift.terminated_early,
            termination_reason: drift.termination_reason,
            invariants: drift.invariants,
        }
    }
}

/// Default drift-report path next to the trajectory: `traj.csv` gives
/// `traj.report.json`.
pub fn default_report_path(out: &Path) -> PathBuf {
    out.with_extension("report.json")
}

/// Runs `simulate`; diagnostics go to `err`. Returns the exit code.
pub fn simulate(cfg: &ScenarioConfig, out: &Path, report: Option<&Path>, err: &mut dyn Write) -> i32 {
    let run = match resolve(cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let invariants = run.scenario.invariants(&run.flow);
    let (traj, drift) = match integrate(&run.flow, &run.x0, &run.integrator, &invariants) {
        Ok(x) => x,
        Err(e @ (e3real::Error::Domain(_) | e3real::Error::Validation(_) | e3real::Error::Usage(_))) => {
            let _ = writeln!(err, "error: initial: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: integration failed: {e}");
            return EXIT_RUNTIME;
        }
    };
    let mut echo = cfg.clone();
    echo.seed = Some(run.seed);
    let meta = Metadata { version: env!("CARGO_PKG_VERSION").into(), seed: run.seed, config: echo };
    let csv = trajectory_csv(&traj, &run.flow.realization.component_names());
    let early = traj.terminated_early;
    let reason = traj.termination_reason.clone();
    let rep = RunReport::new(meta, out, &run, &traj, drift);
    let report_path = report.map(Path::to_path_buf).unwrap_or_else(|| default_report_path(out));
    let json = serde_json::to_string_pretty(&rep).expect("report serializes") + "\n";
    for (path, body) in [(out, &csv), (report_path.as_path(), &json)] {
        if let Err(e) = write_atomic(path, body) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_RUNTIME;
        }
    }
    if early {
        let _ = writeln!(
            err,
            "error: run stopped early at t = {}: {}",
            traj.times.last().copied().unwrap_or(0.0),
            reason.unwrap_or_default()
        );
        return EXIT_RUNTIME;
    }
    EXIT_OK
}

/// Runs `verify`; the JSON report goes to `out` or to `stdout`.
pub fn verify(
    suite: &str,
    samples: usize,
    seed: Option<u64>,
    tol: Option<f64>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let suite = match Suite::from_name(suite) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: suite: {e}");
            return EXIT_USAGE;
        }
    };
    let seed = match seed.map(Ok).unwrap_or_else(default_seed) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut cfg = SuiteConfig::new(suite, samples, seed);
    cfg.tol = tol;
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e @ (e3real::Error::Usage(_) | e3real::Error::Validation(_))) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_RUNTIME;
        }
    };
    let json = report.to_json() + "\n";
    let written = match out {
        Some(p) => write_atomic(p, &json),
        None => stdout.write_all(json.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_RUNTIME;
    }
    for f in report.failures() {
        let _ = writeln!(err, "FAIL {} residual {:.3e} threshold {:.3e}", f.check, f.residual, f.threshold);
    }
    for r in report.regression.iter().filter(|r| !r.matches_allowlist) {
        let _ = writeln!(err, "FAIL regression row {} is {:?}, allowlisted as {:?}", r.formula, r.status, r.expected);
    }
    let _ = writeln!(
        err,
        "{}: {} checks, {} failing, {} regression rows",
        report.suite,
        report.checks.len(),
        report.failures().len(),
        report.regression.len()
    );
    if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILURE
    }
}

/// One line per scenario: name, required parameters, description.
pub fn list_scenarios() -> String {
    ScenarioKind::ALL
        .iter()
        .map(|k| format!("{:<13} {}; {}\n", k.name(), k.parameters(), k.description()))
        .collect()
}

use clap::{Args, Parser, Subcommand};
use e3real_cli::*;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "e3real", version, about = "Heavy top and gyrostat dynamics on e(3)* and its symplectic realizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write a trajectory CSV plus a JSON drift report.
    Simulate(Box<SimulateArgs>),
    /// Run a verification suite and print its JSON report.
    Verify(VerifyArgs),
    /// List the available scenarios and their parameters.
    ListScenarios,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trajectory CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Drift report path [default: the CSV path with extension report.json].
    #[arg(long)]
    report: Option<PathBuf>,
    /// euler, kovalevskaya, zhukovskii, clebsch, lmg or custom.
    #[arg(long)]
    scenario: Option<String>,
    /// e3, twistor, monopole or sphere.
    #[arg(long)]
    realization: Option<String>,
    /// Sphere chart: moser or embedded.
    #[arg(long)]
    chart: Option<String>,
    /// Principal moments I1,I2,I3 (Kovalevskaya: I).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    inertia: Option<Vec<f64>>,
    /// Rotor momentum lambda1,lambda2,lambda3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<f64>>,
    /// Custom potential: zero, linear or clebsch.
    #[arg(long)]
    potential: Option<String>,
    /// Linear potential vector (Kovalevskaya: chi1,chi2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    chi: Option<Vec<f64>>,
    /// Clebsch coefficient, or the LMG eps.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<f64>,
    /// LMG V.
    #[arg(long = "lmg-v", allow_hyphen_values = true)]
    v: Option<f64>,
    /// LMG W.
    #[arg(long = "lmg-w", allow_hyphen_values = true)]
    w: Option<f64>,
    /// Monopole strength level.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Sphere level (negative).
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long = "initial-J", value_delimiter = ',', allow_hyphen_values = true)]
    initial_j: Option<Vec<f64>>,
    #[arg(long = "initial-Gamma", value_delimiter = ',', allow_hyphen_values = true)]
    initial_gamma: Option<Vec<f64>>,
    /// Twistor spinor as Re t1,Im t1,Re t2,Im t2.
    #[arg(long = "initial-theta", value_delimiter = ',', allow_hyphen_values = true)]
    initial_theta: Option<Vec<f64>>,
    #[arg(long = "initial-zeta", value_delimiter = ',', allow_hyphen_values = true)]
    initial_zeta: Option<Vec<f64>>,
    #[arg(long = "initial-p", value_delimiter = ',', allow_hyphen_values = true)]
    initial_p: Option<Vec<f64>>,
    #[arg(long = "initial-y", value_delimiter = ',', allow_hyphen_values = true)]
    initial_y: Option<Vec<f64>>,
    #[arg(long = "initial-q", value_delimiter = ',', allow_hyphen_values = true)]
    initial_q: Option<Vec<f64>>,
    #[arg(long = "initial-pi", value_delimiter = ',', allow_hyphen_values = true)]
    initial_pi: Option<Vec<f64>>,
    /// Start at the section point over --initial-J, --initial-Gamma (fiber coordinate zero).
    #[arg(long = "from-e3")]
    from_e3: bool,
    /// Sample the initial state from the seed.
    #[arg(long = "random-initial")]
    random_initial: bool,
    /// rk4, rk45 or implicit-midpoint.
    #[arg(long)]
    method: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long = "t-max", allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rtol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    atol: Option<f64>,
    /// Project back onto the constraint set after each step (embedded sphere chart).
    #[arg(long)]
    projection: bool,
    #[arg(long = "record-stride")]
    record_stride: Option<usize>,
    /// Seed [default: $E3REAL_SEED, else 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// brackets, jacobi, poisson-maps, dual-pair, equivariance, relatedness, involution, gradients, regression or all.
    suite: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Seed [default: $E3REAL_SEED, else 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces every threshold of the suite.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn flag_config(a: &SimulateArgs) -> ScenarioConfig {
    let on = |b: bool| if b { Some(true) } else { None };
    ScenarioConfig {
        scenario: a.scenario.clone(),
        realization: a.realization.clone(),
        chart: a.chart.clone(),
        mu: a.mu,
        nu: a.nu,
        seed: a.seed,
        from_e3: on(a.from_e3),
        random_initial: on(a.random_initial),
        inertia: InertiaSection { values: a.inertia.clone() },
        lambda: LambdaSection { values: a.lambda.clone() },
        potential: PotentialSection { kind: a.potential.clone(), chi: a.chi.clone(), eps: a.eps, v: a.v, w: a.w },
        initial: InitialSection {
            j: a.initial_j.clone(),
            gamma: a.initial_gamma.clone(),
            theta: a.initial_theta.clone(),
            zeta: a.initial_zeta.clone(),
            p: a.initial_p.clone(),
            y: a.initial_y.clone(),
            q: a.initial_q.clone(),
            pi: a.initial_pi.clone(),
        },
        integrator: IntegratorSection {
            method: a.method.clone(),
            dt: a.dt,
            t_max: a.t_max,
            rtol: a.rtol,
            atol: a.atol,
            projection: on(a.projection),
            record_stride: a.record_stride,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate(a) => {
            let base = match &a.config {
                Some(p) => match ScenarioConfig::from_file(p) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_USAGE as u8);
                    }
                },
                None => ScenarioConfig::default(),
            };
            let cfg = base.overlay(&flag_config(&a));
            simulate(&cfg, &a.out, a.report.as_deref(), &mut std::io::stderr())
        }
        Command::Verify(a) => verify(
            &a.suite,
            a.samples,
            a.seed,
            a.tol,
            a.out.as_deref(),
            &mut std::io::stdout(),
            &mut std::io::stderr(),
        ),
        Command::ListScenarios => {
            print!("{}", list_scenarios());
            EXIT_OK
        }
    };
    ExitCode::from(code as u8)
}

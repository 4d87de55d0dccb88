//! Catalog of integrable cases: Hamiltonian, extra integral and the
//! invariant set monitored along each realization's flow.

use crate::dynamics::{FlowSpec, NamedInvariant, Realization};
use crate::e3::{
    casimirs, Clebsch, E3Function, GyrostatParams, Gyrostat, Kovalevskaya, Lmg, PotentialSpec,
    Zhukovskii,
};
use crate::error::{Error, Result};
use crate::algebra::Vec3;
use crate::twistor::IntegralKind;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Euler,
    Kovalevskaya,
    Zhukovskii,
    Clebsch,
    Lmg,
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Euler,
        ScenarioKind::Kovalevskaya,
        ScenarioKind::Zhukovskii,
        ScenarioKind::Clebsch,
        ScenarioKind::Lmg,
        ScenarioKind::Custom,
    ];

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown scenario '{s}'")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Euler => "euler",
            ScenarioKind::Kovalevskaya => "kovalevskaya",
            ScenarioKind::Zhukovskii => "zhukovskii",
            ScenarioKind::Clebsch => "clebsch",
            ScenarioKind::Lmg => "lmg",
            ScenarioKind::Custom => "custom",
        }
    }

    /// Required parameters, for listings.
    pub fn parameters(&self) -> &'static str {
        match self {
            ScenarioKind::Euler => "I1, I2, I3",
            ScenarioKind::Kovalevskaya => "I, chi1, chi2 (I1 = I2 = I, I3 = I/2)",
            ScenarioKind::Zhukovskii => "I1, I2, I3, lambda1, lambda2, lambda3",
            ScenarioKind::Clebsch => "I1, I2, I3, eps",
            ScenarioKind::Lmg => "eps, V, W",
            ScenarioKind::Custom => "I1, I2, I3, lambda, potential (zero | linear chi | clebsch eps)",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ScenarioKind::Euler => "free rigid body; extra integral J^2",
            ScenarioKind::Kovalevskaya => "heavy top, Kovalevskaya case; extra integral K_Kovalevskaya",
            ScenarioKind::Zhukovskii => "free gyrostat, Zhukovskii case; extra integral J^2",
            ScenarioKind::Clebsch => "rigid body in an ideal fluid, Clebsch case; extra integral K_Clebsch",
            ScenarioKind::Lmg => "Lipkin-Meshkov-Glick classical limit eps J3 + V(J1^2 - J2^2) + W(J1^2 + J2^2); extra integral J^2",
            ScenarioKind::Custom => "gyrostat with user parameters; no extra integral",
        }
    }
}

/// A configured integrable case.
#[derive(Clone)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub hamiltonian: Arc<dyn E3Function>,
    pub extra: Option<Arc<dyn E3Function>>,
    pub integral: Option<IntegralKind>,
}

impl Scenario {
    pub fn euler(inertia: [f64; 3]) -> Result<Self> {
        Ok(Scenario {
            kind: ScenarioKind::Euler,
            hamiltonian: Arc::new(Gyrostat(GyrostatParams::euler(inertia)?)),
            extra: Some(Arc::new(Zhukovskii)),
            integral: Some(IntegralKind::Zhukovskii),
        })
    }

    pub fn kovalevskaya(i: f64, chi1: f64, chi2: f64) -> Result<Self> {
        Ok(Scenario {
            kind: ScenarioKind::Kovalevskaya,
            hamiltonian: Arc::new(Gyrostat(GyrostatParams::kovalevskaya(i, chi1, chi2)?)),
            extra: Some(Arc::new(Kovalevskaya { i, chi1, chi2 })),
            integral: Some(IntegralKind::Kovalevskaya { i, chi1, chi2 }),
        })
    }

    pub fn zhukovskii(inertia: [f64; 3], lambda: Vec3) -> Result<Self> {
        Ok(Scenario {
            kind: ScenarioKind::Zhukovskii,
            hamiltonian: Arc::new(Gyrostat(GyrostatParams::zhukovskii(inertia, lambda)?)),
            extra: Some(Arc::new(Zhukovskii)),
            integral: Some(IntegralKind::Zhukovskii),
        })
    }

    pub fn clebsch(inertia: [f64; 3], eps: f64) -> Result<Self> {
        Ok(Scenario {
            kind: ScenarioKind::Clebsch,
            hamiltonian: Arc::new(Gyrostat(GyrostatParams::clebsch(inertia, eps)?)),
            extra: Some(Arc::new(Clebsch { inertia, eps })),
            integral: Some(IntegralKind::Clebsch { inertia, eps }),
        })
    }

    pub fn lmg(eps: f64, v: f64, w: f64) -> Result<Self> {
        for (n, x) in [("eps", eps), ("V", v), ("W", w)] {
            if !x.is_finite() {
                return Err(Error::Validation(format!("LMG parameter {n} must be finite")));
            }
        }
        Ok(Scenario {
            kind: ScenarioKind::Lmg,
            hamiltonian: Arc::new(Lmg { eps, v, w }),
            extra: Some(Arc::new(Zhukovskii)),
            integral: Some(IntegralKind::Zhukovskii),
        })
    }

    pub fn custom(params: GyrostatParams) -> Self {
        Scenario {
            kind: ScenarioKind::Custom,
            hamiltonian: Arc::new(Gyrostat(params)),
            extra: None,
            integral: None,
        }
    }

    /// Gyrostat parameters for custom setups without a potential.
    pub fn custom_free(inertia: [f64; 3], lambda: Vec3) -> Result<Self> {
        Ok(Self::custom(GyrostatParams::new(inertia, lambda, PotentialSpec::Zero)?))
    }

    /// Invariants monitored along `flow`: `K1, K2, H, K_extra` through the
    /// momentum map, plus `J0, Gamma0` where they are functions on the chart.
    pub fn invariants(&self, flow: &FlowSpec) -> Vec<NamedInvariant> {
        let mut out = Vec::new();
        let f1 = flow.clone();
        out.push(NamedInvariant::new("K1", move |x| casimirs(&f1.to_e3(x)).0));
        let f2 = flow.clone();
        out.push(NamedInvariant::new("K2", move |x| casimirs(&f2.to_e3(x)).1));
        let f3 = flow.clone();
        let h = self.hamiltonian.clone();
        out.push(NamedInvariant::new("H", move |x| h.value(&f3.to_e3(x))));
        if let Some(k) = &self.extra {
            let f4 = flow.clone();
            let k = k.clone();
            out.push(NamedInvariant::new("K_extra", move |x| k.value(&f4.to_e3(x))));
        }
        match flow.realization {
            Realization::Twistor | Realization::SphereEmbedded => {
                let f5 = flow.clone();
                out.push(NamedInvariant::new("J0", move |x| f5.to_a2(x).0));
                let f6 = flow.clone();
                out.push(NamedInvariant::new("Gamma0", move |x| f6.to_a2(x).1));
            }
            Realization::SphereMoser => {
                let f5 = flow.clone();
                out.push(NamedInvariant::new("J0", move |x| f5.to_a2(x).0));
            }
            Realization::Monopole => {
                let f6 = flow.clone();
                out.push(NamedInvariant::new("Gamma0", move |x| f6.to_a2(x).1));
            }
            Realization::E3 => {}
        }
        out
    }
}

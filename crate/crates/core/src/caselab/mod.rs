//! Scenario runner: each scenario recomputes one explicit step of the sphere
//! classification argument and reports named residuals, witnesses and a
//! pass flag.

mod scenarios;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numkit::RngStream;

pub use scenarios::run_lie_dims_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    OctonionIdentities,
    TrialityCore,
    LieDims,
    UEllipsoid,
    SpNoKfcl,
    Spsp1Round,
    G2Zero,
    Spin7Line,
    Spin7Symmetric,
    Spin9Contradiction,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 10] = [
        ScenarioId::OctonionIdentities,
        ScenarioId::TrialityCore,
        ScenarioId::LieDims,
        ScenarioId::UEllipsoid,
        ScenarioId::SpNoKfcl,
        ScenarioId::Spsp1Round,
        ScenarioId::G2Zero,
        ScenarioId::Spin7Line,
        ScenarioId::Spin7Symmetric,
        ScenarioId::Spin9Contradiction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::OctonionIdentities => "octonion_identities",
            ScenarioId::TrialityCore => "triality_core",
            ScenarioId::LieDims => "lie_dims",
            ScenarioId::UEllipsoid => "u_ellipsoid",
            ScenarioId::SpNoKfcl => "sp_no_kfcl",
            ScenarioId::Spsp1Round => "spsp1_round",
            ScenarioId::G2Zero => "g2_zero",
            ScenarioId::Spin7Line => "spin7_line",
            ScenarioId::Spin7Symmetric => "spin7_symmetric",
            ScenarioId::Spin9Contradiction => "spin9_contradiction",
        }
    }

    /// Number of `--params` values the scenario accepts, if any.
    pub fn param_arity(self) -> Option<usize> {
        match self {
            ScenarioId::UEllipsoid => Some(2),
            ScenarioId::Spin7Line => Some(3),
            _ => None,
        }
    }

    fn position(self) -> usize {
        Self::ALL.iter().position(|&s| s == self).expect("listed")
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario {s:?}")))
    }
}

/// What each scenario recomputes.
pub const MANIFEST: [(ScenarioId, &str); 10] = [
    (
        ScenarioId::OctonionIdentities,
        "composition, adjoint, division, Moufang and two-generator identities on random octonions; a non-associating triple",
    ),
    (
        ScenarioId::TrialityCore,
        "the conjugation and Moufang triality families; the companion pair over random SO(8) elements",
    ),
    (
        ScenarioId::LieDims,
        "ranks of the spin(7), spin(8), spin(9) generator sets, bracket closure, the 14-dimensional derivation algebra, curve derivatives",
    ),
    (
        ScenarioId::UEllipsoid,
        "U(m+1) orbit of i·diag(λ..λ, −μ..−μ) projects onto an ellipsoid; three distinct eigenvalue sizes give proportional projections",
    ),
    (
        ScenarioId::SpNoKfcl,
        "a nonzero sp(m+1) element has two positively proportional projections, so no norm is constant on its orbit",
    ),
    (
        ScenarioId::Spsp1Round,
        "an sp(1)-factor element of Sp(m+1)Sp(1) projects onto a round sphere centered at 0",
    ),
    (
        ScenarioId::G2Zero,
        "a G2 Killing field on S6 vanishes somewhere: a conjugate with zero projection and a kernel vector",
    ),
    (
        ScenarioId::Spin7Line,
        "X with b-entry a L1L2 + b L3L4 + c L5L6 projects to (a+b+c)e7; all sign combinations (±a±b±c)e7 lie on its orbit",
    ),
    (
        ScenarioId::Spin7Symmetric,
        "for (a,b,c) = (1,0,0) every unit imaginary z = z1z2 is a projection of the orbit",
    ),
    (
        ScenarioId::Spin9Contradiction,
        "the quarter rotation swaps diag(L1, L1+R1) into diag(L1+R1, L1), so projections e1 and 2e1 share one orbit",
    ),
];

/// Knobs shared by all scenarios; `None` selects the scenario default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub samples: Option<usize>,
    pub budget: Option<usize>,
    pub params: Option<Vec<f64>>,
    /// Record wall time; off by default so reports are byte-stable.
    pub timings: bool,
}

pub const DEFAULT_ORBIT_SAMPLES: usize = 500;
pub const DEFAULT_IDENTITY_SAMPLES: usize = 1000;
pub const DEFAULT_BUDGET: usize = 100_000;

impl RunConfig {
    fn budget(&self) -> usize {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario_id: ScenarioId,
    pub pass: bool,
    pub residuals: BTreeMap<String, f64>,
    pub witnesses: BTreeMap<String, Value>,
    pub seed: u64,
    pub duration_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub pass: bool,
    pub scenarios: Vec<ScenarioReport>,
}

impl Report {
    pub fn failed(&self) -> impl Iterator<Item = &ScenarioReport> {
        self.scenarios.iter().filter(|s| !s.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.scenarios {
            out.push_str(&s.to_text());
        }
        let passed = self.scenarios.iter().filter(|s| s.pass).count();
        out.push_str(&format!(
            "{} of {} scenarios passed (seed {})\n",
            passed,
            self.scenarios.len(),
            self.seed
        ));
        out
    }
}

impl ScenarioReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "[{}] {} (seed {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.scenario_id,
            self.seed
        );
        if let Some(ms) = self.duration_ms {
            out.push_str(&format!(" {ms:.1} ms"));
        }
        out.push('\n');
        for (k, v) in &self.residuals {
            out.push_str(&format!("    {k:<40} {v:.3e}\n"));
        }
        if let Some(Value::Array(d)) = self.witnesses.get("diagnostics") {
            for line in d {
                out.push_str(&format!("    ! {}\n", line.as_str().unwrap_or_default()));
            }
        }
        out
    }
}

/// Seed of one scenario under a master seed; `verify case` and `verify all`
/// agree on it.
pub fn scenario_seed(master: u64, id: ScenarioId) -> u64 {
    let mut rng = RngStream::new(master);
    let mut seed = rng.next_u64();
    for _ in 0..id.position() {
        seed = rng.next_u64();
    }
    seed
}

/// Runs one scenario under a master seed.
pub fn run(id: ScenarioId, cfg: &RunConfig, master_seed: u64) -> Result<ScenarioReport> {
    let seed = scenario_seed(master_seed, id);
    let start = Instant::now();
    let mut out = scenarios::Outcome::default();
    scenarios::dispatch(id, cfg, seed, &mut out)?;
    let duration_ms = cfg
        .timings
        .then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(out.finish(id, seed, duration_ms))
}

/// Runs every scenario in parallel; the report keeps the canonical order.
pub fn run_all(cfg: &RunConfig, master_seed: u64) -> Result<Report> {
    run_many(&ScenarioId::ALL, cfg, master_seed)
}

/// Like [`run`] for several scenarios. `params` go only to scenarios whose
/// arity matches their length.
pub fn run_many(ids: &[ScenarioId], cfg: &RunConfig, master_seed: u64) -> Result<Report> {
    let scenarios = ids
        .par_iter()
        .map(|&id| {
            let len = cfg.params.as_ref().map(Vec::len);
            if len.is_some() && id.param_arity() != len {
                let own = RunConfig { params: None, ..cfg.clone() };
                run(id, &own, master_seed)
            } else {
                run(id, cfg, master_seed)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        seed: master_seed,
        pass: scenarios.iter().all(|s| s.pass),
        scenarios,
    })
}

//! Report JSON. Field order follows declaration order and is stable.

use std::collections::BTreeMap;

use holonomy_core::measure::ConsistencyReport;
use holonomy_core::symmetry::InvarianceReport;
use holonomy_core::{GroupElement, IntegralEstimate, Method};
use num_complex::Complex64;
use serde::Serialize;

use crate::scenario::CommandSpec;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: CommandSpec,
    pub group: String,
    pub method: &'static str,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub pass: bool,
    pub results: Vec<Entry>,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateJson {
    pub mean: ComplexJson,
    pub stderr: f64,
    pub samples: u64,
    pub method: &'static str,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

pub fn method_name(m: &Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::MonteCarlo { .. } => "monte_carlo",
    }
}

impl From<&IntegralEstimate> for EstimateJson {
    fn from(e: &IntegralEstimate) -> Self {
        let (seed, workers) = match e.method {
            Method::Exact => (None, None),
            Method::MonteCarlo { seed, workers, .. } => (Some(seed), Some(workers)),
        };
        EstimateJson {
            mean: e.mean.into(),
            stderr: e.stderr,
            samples: e.samples,
            method: method_name(&e.method),
            seed,
            workers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ElementJson {
    Residue(u32),
    Angle(f64),
    Quaternion([f64; 4]),
}

impl From<&GroupElement> for ElementJson {
    fn from(g: &GroupElement) -> Self {
        match *g {
            GroupElement::Cyclic { residue, .. } => ElementJson::Residue(residue),
            GroupElement::U1 { angle } => ElementJson::Angle(angle),
            GroupElement::Su2(q) => ElementJson::Quaternion([q.w, q.x, q.y, q.z]),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub pulled_back: EstimateJson,
    pub direct: EstimateJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Integral {
        function: String,
        #[serde(flatten)]
        estimate: EstimateJson,
    },
    Consistency {
        coarse: String,
        fine: String,
        pass: bool,
        max_discrepancy: f64,
        tested: usize,
        method: &'static str,
        checks: Vec<CheckJson>,
    },
    Invariance {
        check: &'static str,
        function: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        other: Option<String>,
        transformation: String,
        lhs: EstimateJson,
        rhs: EstimateJson,
        discrepancy: f64,
        pass: bool,
    },
    Gram {
        functions: Vec<String>,
        matrix: Vec<Vec<EstimateJson>>,
        orthonormal: bool,
        pass: bool,
    },
    Reconstruct {
        consistent: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        connection: Option<BTreeMap<String, ElementJson>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        coarse: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        fine: Option<String>,
    },
}

impl Entry {
    pub fn consistency(coarse: &str, fine: &str, r: &ConsistencyReport) -> Entry {
        Entry::Consistency {
            coarse: coarse.to_string(),
            fine: fine.to_string(),
            pass: r.pass,
            max_discrepancy: r.max_discrepancy,
            tested: r.tested,
            method: method_name(&r.method),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    pulled_back: (&c.pulled_back).into(),
                    direct: (&c.direct).into(),
                })
                .collect(),
        }
    }

    pub fn invariance(
        check: &'static str,
        function: &str,
        other: Option<&str>,
        transformation: &str,
        r: &InvarianceReport,
    ) -> Entry {
        Entry::Invariance {
            check,
            function: function.to_string(),
            other: other.map(str::to_string),
            transformation: transformation.to_string(),
            lhs: (&r.lhs).into(),
            rhs: (&r.rhs).into(),
            discrepancy: r.discrepancy,
            pass: r.pass,
        }
    }

    pub fn pass(&self) -> bool {
        match self {
            Entry::Integral { .. } => true,
            Entry::Consistency { pass, .. } | Entry::Invariance { pass, .. } | Entry::Gram { pass, .. } => *pass,
            Entry::Reconstruct { consistent, .. } => *consistent,
        }
    }
}

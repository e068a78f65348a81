//! Scenario file schema.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub group: GroupSpec,
    pub alphabet: AlphabetSpec,
    /// Named tame subgroupoids, each an ordered list of edges.
    #[serde(default)]
    pub subgroupoids: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub measure: MeasureJson,
    #[serde(default)]
    pub transformations: BTreeMap<String, TransformationSpec>,
    pub command: CommandSpec,
    #[serde(default)]
    pub method: MethodSpec,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKindSpec {
    Zn,
    U1,
    Su2,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: GroupKindSpec,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    pub vertices: Vec<String>,
    pub atoms: Vec<AtomSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Residue (`zn`), angle (`u1`) or unit quaternion `[w, x, y, z]` (`su2`).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Number(f64),
    Quaternion([f64; 4]),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Parts {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

/// Exactly one of `on` + `expr`, `spin_network` or `wilson_loop`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub on: Option<String>,
    #[serde(default)]
    pub expr: Option<ExprSpec>,
    #[serde(default)]
    pub spin_network: Option<SpinNetworkSpec>,
    #[serde(default)]
    pub wilson_loop: Option<WilsonLoopSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinNetworkSpec {
    pub edges: Vec<Vec<String>>,
    /// Spins `j` for SU(2), integer charges otherwise.
    pub labels: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WilsonLoopSpec {
    pub path: Vec<String>,
    pub label: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExprSpec {
    Const {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Charprod {
        labels: Vec<f64>,
    },
    /// Values on `Z_N^n`, first slot most significant.
    Table {
        entries: Vec<ComplexSpec>,
    },
    Matpoly {
        terms: Vec<TermSpec>,
    },
    Mul {
        args: Vec<ExprSpec>,
    },
    Add {
        args: Vec<ExprSpec>,
    },
    Conj {
        args: Vec<ExprSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: ComplexSpec,
    #[serde(default)]
    pub factors: Vec<FactorSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartSpec {
    Re,
    Im,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub slot: usize,
    pub row: usize,
    pub col: usize,
    pub part: PartSpec,
    #[serde(default = "one")]
    pub power: u32,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureJson {
    #[default]
    Uniform,
    Family {
        levels: Vec<LevelSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub on: String,
    pub probs: Vec<f64>,
}

/// Exactly one of `gauge` or `automorphism`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationSpec {
    #[serde(default)]
    pub gauge: Option<BTreeMap<String, ElementSpec>>,
    #[serde(default)]
    pub automorphism: Option<AutomorphismSpec>,
}

/// Unlisted vertices and atoms are fixed.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismSpec {
    #[serde(default)]
    pub vertices: BTreeMap<String, String>,
    #[serde(default)]
    pub atoms: BTreeMap<String, AtomImageSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomImageSpec {
    pub to: String,
    pub sign: i64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum CommandSpec {
    Integrate {
        functions: Vec<String>,
    },
    /// Every listed `[coarse, fine]` pair; all comparable pairs of named
    /// subgroupoids when empty.
    Consistency {
        #[serde(default)]
        pairs: Vec<(String, String)>,
        /// Character labels tested on Lie groups.
        #[serde(default)]
        battery: Vec<f64>,
    },
    Invariance {
        functions: Vec<String>,
        transformations: Vec<String>,
        #[serde(default)]
        unitarity: bool,
    },
    Gram {
        functions: Vec<String>,
        #[serde(default)]
        expect_orthonormal: bool,
    },
    /// Charts per named subgroupoid.
    Reconstruct {
        charts: BTreeMap<String, Vec<ElementSpec>>,
    },
}

impl CommandSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CommandSpec::Integrate { .. } => "integrate",
            CommandSpec::Consistency { .. } => "consistency",
            CommandSpec::Invariance { .. } => "invariance",
            CommandSpec::Gram { .. } => "gram",
            CommandSpec::Reconstruct { .. } => "reconstruct",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    #[default]
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    #[serde(default)]
    pub kind: MethodKind,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
}

/// Parses scenario text, naming the offending field on failure.
pub fn parse(text: &str) -> Result<Scenario, crate::CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        crate::CliError::input(if path == "." || path == "?" { "scenario".into() } else { path }, e.into_inner().to_string())
    })
}

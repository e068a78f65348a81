//! Resolution of a parsed scenario into core objects.

use std::collections::BTreeMap;

use holonomy_core::cyl::{MatrixEntry, Monomial, Part};
use holonomy_core::measure::ProbTable;
use holonomy_core::{
    make_spin_network, Alphabet, AtomId, CharLabel, CylFunction, Edge, Expression, FiniteTable, GaugeTransformation,
    GroupDescriptor, GroupElement, GroupKind, GroupoidAutomorphism, MeasureSpec, Method, Sign, TameSubgroupoid,
    Transformation,
};
use num_complex::Complex64;

use crate::scenario::{
    AutomorphismSpec, ComplexSpec, ExprSpec, FunctionSpec, GroupKindSpec, GroupSpec, MeasureJson, MethodKind,
    MethodSpec, PartSpec, Scenario, TransformationSpec, SCHEMA_VERSION,
};
use crate::CliError;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Command-line values that take precedence over the scenario's `method`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodParams {
    pub kind: MethodKind,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl MethodParams {
    pub fn resolve(spec: &MethodSpec, o: Overrides) -> Result<MethodParams, CliError> {
        let p = MethodParams {
            kind: spec.kind,
            samples: o.samples.or(spec.samples).unwrap_or(DEFAULT_SAMPLES),
            seed: o.seed.or(spec.seed).unwrap_or(0),
            workers: o.workers.or(spec.workers).unwrap_or(1),
        };
        if p.workers == 0 {
            return Err(CliError::input("method.workers", "must be at least 1"));
        }
        if p.kind == MethodKind::MonteCarlo && p.samples < 2 {
            return Err(CliError::input("method.samples", "Monte Carlo needs at least 2 samples"));
        }
        Ok(p)
    }

    pub fn method(&self) -> Method {
        match self.kind {
            MethodKind::Exact => Method::Exact,
            MethodKind::MonteCarlo => {
                Method::MonteCarlo { samples: self.samples, seed: self.seed, workers: self.workers }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    pub group: GroupDescriptor,
    pub alphabet: Alphabet,
    pub subgroupoids: BTreeMap<String, TameSubgroupoid>,
    pub functions: BTreeMap<String, CylFunction>,
    pub measure: MeasureSpec,
    pub transformations: BTreeMap<String, Transformation>,
}

impl Model {
    pub fn build(s: &Scenario) -> Result<Model, CliError> {
        if s.schema != SCHEMA_VERSION {
            return Err(CliError::input(
                "schema",
                format!("unsupported schema version {}, expected {SCHEMA_VERSION}", s.schema),
            ));
        }
        let group = group(&s.group)?;
        let alphabet = Alphabet::new(
            s.alphabet.vertices.iter().cloned(),
            s.alphabet.atoms.iter().map(|a| (a.id.clone(), a.src.clone(), a.dst.clone())),
        )
        .map_err(|e| CliError::input("alphabet", e))?;

        let mut subgroupoids = BTreeMap::new();
        for (name, edges) in &s.subgroupoids {
            let path = format!("subgroupoids.{name}");
            subgroupoids.insert(name.clone(), tame(&alphabet, edges, &path)?);
        }

        let mut model = Model {
            group,
            alphabet,
            subgroupoids,
            functions: BTreeMap::new(),
            measure: MeasureSpec::Uniform,
            transformations: BTreeMap::new(),
        };
        for (name, spec) in &s.functions {
            let f = model.function(spec, &format!("functions.{name}"))?;
            model.functions.insert(name.clone(), f);
        }
        model.measure = model.measure_spec(&s.measure)?;
        for (name, spec) in &s.transformations {
            let t = model.transformation(spec, &format!("transformations.{name}"))?;
            model.transformations.insert(name.clone(), t);
        }
        Ok(model)
    }

    pub fn subgroupoid(&self, name: &str, path: &str) -> Result<&TameSubgroupoid, CliError> {
        self.subgroupoids
            .get(name)
            .ok_or_else(|| CliError::input(path, format!("unknown subgroupoid `{name}`")))
    }

    pub fn function_named(&self, name: &str, path: &str) -> Result<&CylFunction, CliError> {
        self.functions.get(name).ok_or_else(|| CliError::input(path, format!("unknown function `{name}`")))
    }

    pub fn transformation_named(&self, name: &str, path: &str) -> Result<&Transformation, CliError> {
        self.transformations
            .get(name)
            .ok_or_else(|| CliError::input(path, format!("unknown transformation `{name}`")))
    }

    pub fn element(&self, spec: &crate::scenario::ElementSpec, path: &str) -> Result<GroupElement, CliError> {
        element(&self.group, spec, path)
    }

    pub fn label(&self, x: f64, path: &str) -> Result<CharLabel, CliError> {
        label(&self.group, x, path)
    }

    fn function(&self, spec: &FunctionSpec, path: &str) -> Result<CylFunction, CliError> {
        let forms = [spec.expr.is_some(), spec.spin_network.is_some(), spec.wilson_loop.is_some()];
        if forms.iter().filter(|x| **x).count() != 1 {
            return Err(CliError::input(path, "give exactly one of `expr`, `spin_network` or `wilson_loop`"));
        }
        if let Some(expr) = &spec.expr {
            let on = spec.on.as_deref().ok_or_else(|| CliError::input(path, "`expr` needs `on`"))?;
            let label = self.subgroupoid(on, &format!("{path}.on"))?.clone();
            let expr = self.expr(expr, label.len(), &format!("{path}.expr"))?;
            return CylFunction::new(self.group, label, expr).map_err(|e| CliError::input(format!("{path}.expr"), e));
        }
        if spec.on.is_some() {
            return Err(CliError::input(format!("{path}.on"), "only used together with `expr`"));
        }
        if let Some(sn) = &spec.spin_network {
            let path = format!("{path}.spin_network");
            let label = tame(&self.alphabet, &sn.edges, &format!("{path}.edges"))?;
            let labels = sn
                .labels
                .iter()
                .enumerate()
                .map(|(i, x)| self.label(*x, &format!("{path}.labels[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            return make_spin_network(self.group, label, labels)
                .map(|s| s.function().clone())
                .map_err(|e| CliError::input(path, e));
        }
        let w = spec.wilson_loop.as_ref().expect("one form is present");
        let path = format!("{path}.wilson_loop");
        let p = self.alphabet.path(&w.path).map_err(|e| CliError::input(format!("{path}.path"), e))?;
        let label = self.label(w.label, &format!("{path}.label"))?;
        holonomy_core::wilson_loop(self.group, &self.alphabet, &p, label).map_err(|e| CliError::input(path, e))
    }

    fn expr(&self, spec: &ExprSpec, arity: usize, path: &str) -> Result<Expression, CliError> {
        let sub = |args: &[ExprSpec]| {
            args.iter()
                .enumerate()
                .map(|(i, a)| self.expr(a, arity, &format!("{path}.args[{i}]")))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(match spec {
            ExprSpec::Const { re, im } => Expression::Const(Complex64::new(*re, *im)),
            ExprSpec::Charprod { labels } => Expression::CharProd(
                labels
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.label(*x, &format!("{path}.labels[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
            ExprSpec::Table { entries } => {
                let GroupKind::Cyclic(n) = self.group.kind() else {
                    return Err(CliError::input(path, "tables need a finite group"));
                };
                let values = entries.iter().map(complex).collect();
                Expression::Table(FiniteTable::new(n, arity, values).map_err(|e| CliError::input(format!("{path}.entries"), e))?)
            }
            ExprSpec::Matpoly { terms } => Expression::MatPoly(
                terms
                    .iter()
                    .map(|t| Monomial {
                        coeff: complex(&t.coeff),
                        factors: t
                            .factors
                            .iter()
                            .map(|f| {
                                let part = match f.part {
                                    PartSpec::Re => Part::Re,
                                    PartSpec::Im => Part::Im,
                                };
                                (MatrixEntry { slot: f.slot, row: f.row, col: f.col, part }, f.power)
                            })
                            .collect(),
                    })
                    .collect(),
            ),
            ExprSpec::Mul { args } => Expression::Product(sub(args)?),
            ExprSpec::Add { args } => Expression::Sum(sub(args)?),
            ExprSpec::Conj { args } => {
                let [x] = args.as_slice() else {
                    return Err(CliError::input(format!("{path}.args"), "`conj` takes exactly one argument"));
                };
                Expression::Conj(Box::new(self.expr(x, arity, &format!("{path}.args[0]"))?))
            }
        })
    }

    fn measure_spec(&self, spec: &MeasureJson) -> Result<MeasureSpec, CliError> {
        match spec {
            MeasureJson::Uniform => Ok(MeasureSpec::Uniform),
            MeasureJson::Family { levels } => {
                let GroupKind::Cyclic(n) = self.group.kind() else {
                    return Err(CliError::input("measure", "explicit families need a finite group"));
                };
                let mut out = Vec::with_capacity(levels.len());
                for (i, level) in levels.iter().enumerate() {
                    let path = format!("measure.levels[{i}]");
                    let l = self.subgroupoid(&level.on, &format!("{path}.on"))?.clone();
                    let table = ProbTable::new(n, l.len(), level.probs.clone())
                        .map_err(|e| CliError::input(format!("{path}.probs"), e))?;
                    out.push((l, table));
                }
                Ok(MeasureSpec::FiniteFamily(out))
            }
        }
    }

    fn transformation(&self, spec: &TransformationSpec, path: &str) -> Result<Transformation, CliError> {
        match (&spec.gauge, &spec.automorphism) {
            (Some(values), None) => {
                let mut out = Vec::with_capacity(values.len());
                for (v, g) in values {
                    let p = format!("{path}.gauge.{v}");
                    let id = self.alphabet.vertex_id(v).map_err(|e| CliError::input(&p, e))?;
                    out.push((id, self.element(g, &p)?));
                }
                GaugeTransformation::new(self.group, out)
                    .map(Transformation::Gauge)
                    .map_err(|e| CliError::input(format!("{path}.gauge"), e))
            }
            (None, Some(a)) => self.automorphism(a, &format!("{path}.automorphism")).map(Transformation::Automorphism),
            _ => Err(CliError::input(path, "give exactly one of `gauge` or `automorphism`")),
        }
    }

    fn automorphism(&self, spec: &AutomorphismSpec, path: &str) -> Result<GroupoidAutomorphism, CliError> {
        let al = &self.alphabet;
        let mut vertices: Vec<_> = al.vertex_ids().collect();
        for (from, to) in &spec.vertices {
            let p = format!("{path}.vertices.{from}");
            let from = al.vertex_id(from).map_err(|e| CliError::input(&p, e))?;
            vertices[from.0] = al.vertex_id(to).map_err(|e| CliError::input(&p, e))?;
        }
        let mut atoms: Vec<(AtomId, Sign)> = al.atoms().map(|(a, _)| (a, Sign::Plus)).collect();
        for (from, image) in &spec.atoms {
            let p = format!("{path}.atoms.{from}");
            let from = al.atom_id(from).map_err(|e| CliError::input(&p, e))?;
            let to = al.atom_id(&image.to).map_err(|e| CliError::input(format!("{p}.to"), e))?;
            let sign = Sign::from_i64(image.sign).ok_or_else(|| CliError::input(format!("{p}.sign"), "must be 1 or -1"))?;
            atoms[from.0] = (to, sign);
        }
        GroupoidAutomorphism::new(al, vertices, atoms).map_err(|e| CliError::input(path, e))
    }
}

fn group(spec: &GroupSpec) -> Result<GroupDescriptor, CliError> {
    let g = match spec.kind {
        GroupKindSpec::Zn => {
            let n = spec.n.ok_or_else(|| CliError::input("group.n", "required for `zn`"))?;
            GroupDescriptor::cyclic(n).map_err(|e| CliError::input("group.n", e))?
        }
        GroupKindSpec::U1 | GroupKindSpec::Su2 => {
            if spec.n.is_some() {
                return Err(CliError::input("group.n", "only used with `zn`"));
            }
            if spec.kind == GroupKindSpec::U1 {
                GroupDescriptor::u1()
            } else {
                GroupDescriptor::su2()
            }
        }
    };
    match spec.tolerance {
        Some(t) => g.with_tolerance(t).map_err(|e| CliError::input("group.tolerance", e)),
        None => Ok(g),
    }
}

fn tame(alphabet: &Alphabet, edges: &[Vec<String>], path: &str) -> Result<TameSubgroupoid, CliError> {
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, e)| alphabet.edge(e).map_err(|err| CliError::input(format!("{path}[{i}]"), err)))
        .collect::<Result<Vec<Edge>, _>>()?;
    TameSubgroupoid::new(edges).map_err(|e| CliError::input(path, e))
}

fn complex(c: &ComplexSpec) -> Complex64 {
    match *c {
        ComplexSpec::Real(re) => Complex64::new(re, 0.0),
        ComplexSpec::Parts { re, im } => Complex64::new(re, im),
    }
}

pub fn element(group: &GroupDescriptor, spec: &crate::scenario::ElementSpec, path: &str) -> Result<GroupElement, CliError> {
    use crate::scenario::ElementSpec;
    let r = match (group.kind(), spec) {
        (GroupKind::Cyclic(_), ElementSpec::Number(x)) => {
            if x.fract() != 0.0 || *x < 0.0 || *x > f64::from(u32::MAX) {
                return Err(CliError::input(path, format!("expected a residue, got {x}")));
            }
            group.residue(*x as u32)
        }
        (GroupKind::U1, ElementSpec::Number(x)) => group.angle(*x),
        (GroupKind::Su2, ElementSpec::Quaternion([w, x, y, z])) => group.quaternion(*w, *x, *y, *z),
        (kind, _) => {
            return Err(CliError::input(path, format!("wrong element shape for {kind}")));
        }
    };
    r.map_err(|e| CliError::input(path, e))
}

/// `j` for SU(2), an integer charge otherwise.
pub fn label(group: &GroupDescriptor, x: f64, path: &str) -> Result<CharLabel, CliError> {
    let l = match group.kind() {
        GroupKind::Su2 => CharLabel::spin(x).ok_or_else(|| CliError::input(path, format!("invalid spin {x}")))?,
        _ if x.fract() == 0.0 && x.abs() < 1e15 => CharLabel(x as i64),
        _ => return Err(CliError::input(path, format!("expected an integer label, got {x}"))),
    };
    group.check_label(l).map_err(|e| CliError::input(path, e))?;
    Ok(l)
}

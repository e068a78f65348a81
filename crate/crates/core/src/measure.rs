//! Integration of cylindrical functions against the uniform (Haar-product)
//! measure and against explicit consistent families on finite groups.
//!
//! Exact integrals over finite groups sum the multiset of integrand values
//! in a canonical (sorted) order, so two integrands that are permutations
//! of each other integrate to bit-identical results. Monte Carlo estimates
//! split the samples over `workers` independent ChaCha streams derived from
//! `(seed, worker)` and merge the partial moments in worker order, which
//! makes them reproducible for a fixed worker count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cyl::{decode_index, encode_index, table_size, CylFunction, Expression, EXACT_LIMIT};
use crate::error::{Error, Result};
use crate::family::{for_each_tuple, project_with, Chart};
use crate::group::{CharLabel, GroupDescriptor, GroupElement, GroupKind};
use crate::groupoid::{subgroupoid_leq, TameSubgroupoid};

/// Tolerance on the total mass of probability tables.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Acceptance threshold, in combined standard errors, for Monte Carlo comparisons.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo { samples: u64, seed: u64, workers: usize },
}

impl Method {
    pub fn mc(samples: u64, seed: u64) -> Method {
        Method::MonteCarlo { samples, seed, workers: 1 }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Method::Exact)
    }

    /// Same method on a different random stream family.
    pub fn reseeded(&self, offset: u64) -> Method {
        match *self {
            Method::MonteCarlo { samples, seed, workers } => {
                Method::MonteCarlo { samples, seed: seed.wrapping_add(offset), workers }
            }
            Method::Exact => Method::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub mean: Complex64,
    /// Standard error of the mean (Bessel-corrected); zero for exact results.
    pub stderr: f64,
    pub samples: u64,
    pub method: Method,
}

impl IntegralEstimate {
    pub fn exact(mean: Complex64, samples: u64) -> IntegralEstimate {
        IntegralEstimate { mean, stderr: 0.0, samples, method: Method::Exact }
    }

    /// `|self − other| ≤ SIGMAS·σ` with `σ` the combined standard error;
    /// two exact values must agree exactly.
    pub fn compatible_with(&self, other: &IntegralEstimate) -> bool {
        (self.mean - other.mean).norm() <= SIGMAS * self.combined_stderr(other)
    }

    /// Compatible with a known value.
    pub fn compatible_with_value(&self, value: Complex64) -> bool {
        (self.mean - value).norm() <= SIGMAS * self.stderr
    }

    pub fn combined_stderr(&self, other: &IntegralEstimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

/// Probability distribution on `Z_N^n`, first slot most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    modulus: u32,
    arity: usize,
    probs: Vec<f64>,
}

impl ProbTable {
    pub fn new(modulus: u32, arity: usize, probs: Vec<f64>) -> Result<ProbTable> {
        let size = table_size(modulus, arity)?;
        if probs.len() as u128 != size {
            return Err(Error::InvalidTable(format!(
                "expected {size} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidTable(format!("negative or non-finite probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidTable(format!("probabilities sum to {total}")));
        }
        Ok(ProbTable { modulus, arity, probs })
    }

    pub fn uniform(modulus: u32, arity: usize) -> Result<ProbTable> {
        let size = table_size(modulus, arity)? as usize;
        Ok(ProbTable { modulus, arity, probs: vec![1.0 / size as f64; size] })
    }

    pub fn point_mass(modulus: u32, residues: &[u32]) -> Result<ProbTable> {
        let size = table_size(modulus, residues.len())? as usize;
        if residues.iter().any(|&r| r >= modulus) {
            return Err(Error::InvalidTable("residue out of range".into()));
        }
        let mut probs = vec![0.0; size];
        probs[encode_index(residues, modulus)] = 1.0;
        Ok(ProbTable { modulus, arity: residues.len(), probs })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, residues: &[u32]) -> Option<f64> {
        if residues.len() != self.arity || residues.iter().any(|&r| r >= self.modulus) {
            return None;
        }
        Some(self.probs[encode_index(residues, self.modulus)])
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    fn check_for(&self, group: &GroupDescriptor, level: &TameSubgroupoid) -> Result<()> {
        if group.kind() != GroupKind::Cyclic(self.modulus) {
            return Err(Error::KindMismatch(group.kind().to_string(), format!("Z_{}", self.modulus)));
        }
        if self.arity != level.len() {
            return Err(Error::InvalidTable(format!(
                "table arity {} for a subgroupoid with {} generators",
                self.arity,
                level.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Push-forward of the Haar product measure through every chart.
    Uniform,
    /// Explicit measures on finitely many levels (finite groups only).
    FiniteFamily(Vec<(TameSubgroupoid, ProbTable)>),
}

impl MeasureSpec {
    fn table_for(&self, level: &TameSubgroupoid) -> Option<&ProbTable> {
        match self {
            MeasureSpec::Uniform => None,
            MeasureSpec::FiniteFamily(levels) => {
                levels.iter().find(|(l, _)| l == level).map(|(_, t)| t)
            }
        }
    }
}

fn residues_of(values: &[GroupElement], out: &mut Vec<u32>) {
    out.clear();
    out.extend(values.iter().map(|g| g.residue_index().expect("finite tables only index cyclic elements")));
}

fn canonical_sum(mut terms: Vec<Complex64>) -> Complex64 {
    terms.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    terms.into_iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
}

/// `∫ f dμ`.
pub fn integrate(f: &CylFunction, m: &MeasureSpec, method: Method) -> Result<IntegralEstimate> {
    match m {
        MeasureSpec::Uniform => integrate_uniform(f, method),
        MeasureSpec::FiniteFamily(levels) => {
            let group = *f.group();
            if let Some(t) = m.table_for(f.label()) {
                t.check_for(&group, f.label())?;
                return integrate_table(f, t, method);
            }
            for (level, t) in levels {
                if subgroupoid_leq(f.label(), level).is_some() {
                    t.check_for(&group, level)?;
                    return integrate_table(&f.pullback(level)?, t, method);
                }
            }
            Err(Error::MissingMeasureLevel)
        }
    }
}

fn integrate_uniform(f: &CylFunction, method: Method) -> Result<IntegralEstimate> {
    let group = *f.group();
    let n = f.arity();
    match method {
        Method::Exact => {
            if let Some(order) = group.order() {
                match table_size(order as u32, n) {
                    Ok(size) => {
                        let mut terms = Vec::with_capacity(size as usize);
                        for_each_tuple(&group.enumerate()?, n, |t| {
                            terms.push(f.eval_chart(t)?);
                            Ok(())
                        })?;
                        let mean = canonical_sum(terms) / size as f64;
                        return Ok(IntegralEstimate::exact(mean, size as u64));
                    }
                    Err(e) => {
                        return character_integral(f.expr(), &group, n)
                            .map(|mean| IntegralEstimate::exact(mean, 0))
                            .ok_or(e);
                    }
                }
            }
            character_integral(f.expr(), &group, n)
                .map(|mean| IntegralEstimate::exact(mean, 0))
                .ok_or_else(|| Error::NotFinite(group.kind().to_string()))
        }
        Method::MonteCarlo { samples, seed, workers } => monte_carlo(
            samples,
            seed,
            workers,
            n,
            &group,
            &|rng: &mut ChaCha8Rng, point: &mut [GroupElement]| {
                for g in point.iter_mut() {
                    *g = group.haar_sample(rng);
                }
            },
            &|point: &[GroupElement]| f.eval_chart(point),
        ),
    }
}

fn integrate_table(f: &CylFunction, table: &ProbTable, method: Method) -> Result<IntegralEstimate> {
    let group = *f.group();
    let elems = group.enumerate()?;
    let n = f.arity();
    match method {
        Method::Exact => {
            let mut terms = Vec::with_capacity(table.probs.len());
            let mut residues = Vec::with_capacity(n);
            for_each_tuple(&elems, n, |t| {
                residues_of(t, &mut residues);
                let p = table.probs[encode_index(&residues, table.modulus)];
                if p > 0.0 {
                    terms.push(f.eval_chart(t)? * p);
                }
                Ok(())
            })?;
            Ok(IntegralEstimate::exact(canonical_sum(terms), table.probs.len() as u64))
        }
        Method::MonteCarlo { samples, seed, workers } => {
            let dist = WeightedIndex::new(&table.probs)
                .map_err(|e| Error::InvalidTable(e.to_string()))?;
            let modulus = table.modulus;
            monte_carlo(
                samples,
                seed,
                workers,
                n,
                &group,
                &|rng: &mut ChaCha8Rng, point: &mut [GroupElement]| {
                    let mut residues = vec![0u32; point.len()];
                    decode_index(dist.sample(rng), modulus, &mut residues);
                    for (g, r) in point.iter_mut().zip(residues) {
                        *g = GroupElement::Cyclic { modulus, residue: r };
                    }
                },
                &|point: &[GroupElement]| f.eval_chart(point),
            )
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: u64,
    mean: Complex64,
    /// `Σ |x − mean|²`
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments { count: 0, mean: Complex64 { re: 0.0, im: 0.0 }, m2: 0.0 };

    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        Moments {
            count,
            mean: self.mean + delta * (nb / count as f64),
            m2: self.m2 + other.m2 + delta.norm_sqr() * na * nb / count as f64,
        }
    }
}

type Sampler<'a> = dyn Fn(&mut ChaCha8Rng, &mut [GroupElement]) + Sync + 'a;
type Integrand<'a> = dyn Fn(&[GroupElement]) -> Result<Complex64> + Sync + 'a;

fn monte_carlo(
    samples: u64,
    seed: u64,
    workers: usize,
    arity: usize,
    group: &GroupDescriptor,
    sample: &Sampler<'_>,
    integrand: &Integrand<'_>,
) -> Result<IntegralEstimate> {
    if samples < 2 {
        return Err(Error::InvalidMethod(format!("need at least 2 samples, got {samples}")));
    }
    if workers == 0 {
        return Err(Error::InvalidMethod("worker count must be positive".into()));
    }
    let per = samples / workers as u64;
    let extra = samples % workers as u64;
    let partials: Vec<Result<Moments>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let count = per + u64::from((w as u64) < extra);
            let mut point = vec![group.identity(); arity];
            let mut m = Moments::EMPTY;
            for _ in 0..count {
                sample(&mut rng, &mut point);
                m.push(integrand(&point)?);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::EMPTY;
    for p in partials {
        total = total.merge(p?);
    }
    let n = total.count as f64;
    let variance = total.m2 / (n - 1.0);
    Ok(IntegralEstimate {
        mean: total.mean,
        stderr: (variance / n).sqrt(),
        samples,
        method: Method::MonteCarlo { samples, seed, workers },
    })
}

/// Expansion of an expression as a finite linear combination of character
/// products, keyed by per-slot labels. Available for constants, character
/// products and their sums, products and conjugates.
pub fn character_expansion(
    expr: &Expression,
    group: &GroupDescriptor,
    arity: usize,
) -> Option<BTreeMap<Vec<CharLabel>, Complex64>> {
    let norm = |l: CharLabel| match group.kind() {
        GroupKind::Cyclic(n) => CharLabel(l.0.rem_euclid(i64::from(n))),
        _ => l,
    };
    let mut out = BTreeMap::new();
    match expr {
        Expression::Const(c) => {
            out.insert(vec![CharLabel::TRIVIAL; arity], *c);
        }
        Expression::CharProd(labels) => {
            if labels.len() != arity {
                return None;
            }
            out.insert(labels.iter().map(|l| norm(*l)).collect(), Complex64::new(1.0, 0.0));
        }
        Expression::Sum(xs) => {
            for x in xs {
                for (k, v) in character_expansion(x, group, arity)? {
                    *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
                }
            }
        }
        Expression::Product(xs) => {
            out.insert(vec![CharLabel::TRIVIAL; arity], Complex64::new(1.0, 0.0));
            for x in xs {
                let rhs = character_expansion(x, group, arity)?;
                let mut next = BTreeMap::new();
                for (ka, va) in &out {
                    for (kb, vb) in &rhs {
                        for k in tensor_labels(group.kind(), ka, kb) {
                            *next.entry(k).or_insert(Complex64::new(0.0, 0.0)) += va * vb;
                        }
                    }
                }
                out = next;
            }
        }
        Expression::Conj(x) => {
            for (k, v) in character_expansion(x, group, arity)? {
                let k = match group.kind() {
                    GroupKind::Su2 => k,
                    _ => k.iter().map(|l| norm(CharLabel(-l.0))).collect(),
                };
                *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v.conj();
            }
        }
        _ => return None,
    }
    Some(out)
}

/// Label tuples in the decomposition of the product of two character
/// products (Clebsch–Gordan series per slot for SU(2)).
fn tensor_labels(kind: GroupKind, a: &[CharLabel], b: &[CharLabel]) -> Vec<Vec<CharLabel>> {
    let mut out: Vec<Vec<CharLabel>> = vec![Vec::with_capacity(a.len())];
    for (x, y) in a.iter().zip(b) {
        let options: Vec<CharLabel> = match kind {
            GroupKind::Cyclic(n) => vec![CharLabel((x.0 + y.0).rem_euclid(i64::from(n)))],
            GroupKind::U1 => vec![CharLabel(x.0 + y.0)],
            GroupKind::Su2 => ((x.0 - y.0).abs()..=(x.0 + y.0)).step_by(2).map(CharLabel).collect(),
        };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut t = prefix.clone();
                    t.push(*o);
                    t
                })
            })
            .collect();
    }
    out
}

/// Haar integral through orthogonality of characters: the coefficient of
/// the trivial character product.
fn character_integral(expr: &Expression, group: &GroupDescriptor, arity: usize) -> Option<Complex64> {
    let exp = character_expansion(expr, group, arity)?;
    Some(exp.get(&vec![CharLabel::TRIVIAL; arity]).copied().unwrap_or(Complex64::new(0.0, 0.0)))
}

/// Mass transported along `p_{L,L′}`.
pub fn pushforward(
    table: &ProbTable,
    coarse: &TameSubgroupoid,
    fine: &TameSubgroupoid,
) -> Result<ProbTable> {
    let group = GroupDescriptor::cyclic(table.modulus)?;
    table.check_for(&group, fine)?;
    let d = subgroupoid_leq(coarse, fine).ok_or(Error::NotComparable)?;
    let size = table_size(table.modulus, coarse.len())? as usize;
    let mut probs = vec![0.0; size];
    let mut residues = Vec::new();
    let elems = group.enumerate()?;
    let mut i = 0;
    for_each_tuple(&elems, fine.len(), |t| {
        let mass = table.probs[i];
        i += 1;
        if mass != 0.0 {
            let image = project_with(&d, &Chart::new(group, t.to_vec())?)?;
            residues_of(image.values(), &mut residues);
            probs[encode_index(&residues, table.modulus)] += mass;
        }
        Ok(())
    })?;
    Ok(ProbTable { modulus: table.modulus, arity: coarse.len(), probs })
}

/// Multiplicity of each coarse chart under `p_{L,L′}` applied to all of `G^m`.
fn preimage_counts(group: &GroupDescriptor, coarse: &TameSubgroupoid, fine: &TameSubgroupoid) -> Result<Vec<u64>> {
    let order = group.order().ok_or_else(|| Error::NotFinite(group.kind().to_string()))? as u32;
    table_size(order, fine.len())?;
    let d = subgroupoid_leq(coarse, fine).ok_or(Error::NotComparable)?;
    let mut counts = vec![0u64; table_size(order, coarse.len())? as usize];
    let mut residues = Vec::new();
    for_each_tuple(&group.enumerate()?, fine.len(), |t| {
        let image = project_with(&d, &Chart::new(*group, t.to_vec())?)?;
        residues_of(image.values(), &mut residues);
        counts[encode_index(&residues, order)] += 1;
        Ok(())
    })?;
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyOptions {
    /// Character labels applied slot by slot for Lie groups.
    pub battery: Vec<CharLabel>,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        ConsistencyOptions {
            battery: vec![CharLabel(1), CharLabel(2)],
            samples: 1_000_000,
            seed: 0,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyCheck {
    pub name: String,
    /// `∫ p*_{L,L′} f dμ_{L′}`
    pub pulled_back: IntegralEstimate,
    /// `∫ f dμ_L`
    pub direct: IntegralEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub pass: bool,
    pub max_discrepancy: f64,
    /// Number of test functions compared.
    pub tested: usize,
    pub method: Method,
    /// Per-function results for the Monte Carlo battery; empty for exact checks.
    pub checks: Vec<ConsistencyCheck>,
}

/// Compares `(p_{L,L′})_* μ_{L′}` with `μ_L`.
///
/// On finite groups every delta function on `A_L` is tested exactly. On Lie
/// groups under the uniform measure a battery of character test functions
/// (each label on each slot, and each label on all slots at once) is
/// integrated by Monte Carlo on both levels.
pub fn check_consistency(
    m: &MeasureSpec,
    coarse: &TameSubgroupoid,
    fine: &TameSubgroupoid,
    group: &GroupDescriptor,
    options: &ConsistencyOptions,
) -> Result<ConsistencyReport> {
    subgroupoid_leq(coarse, fine).ok_or(Error::NotComparable)?;
    if let Some(order) = group.order() {
        let order = order as u32;
        let n = coarse.len();
        let (pushed, direct): (Vec<f64>, Vec<f64>) = match m {
            MeasureSpec::Uniform => {
                let counts = preimage_counts(group, coarse, fine)?;
                let total_fine = table_size(order, fine.len())? as f64;
                let total_coarse = table_size(order, n)? as f64;
                (
                    counts.iter().map(|&c| c as f64 / total_fine).collect(),
                    vec![1.0 / total_coarse; counts.len()],
                )
            }
            MeasureSpec::FiniteFamily(_) => {
                let t_fine = m.table_for(fine).ok_or(Error::MissingMeasureLevel)?;
                let t_coarse = m.table_for(coarse).ok_or(Error::MissingMeasureLevel)?;
                t_fine.check_for(group, fine)?;
                t_coarse.check_for(group, coarse)?;
                (pushforward(t_fine, coarse, fine)?.probs, t_coarse.probs.clone())
            }
        };
        let max = pushed.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let pass = match m {
            MeasureSpec::Uniform => max == 0.0,
            MeasureSpec::FiniteFamily(_) => max <= MASS_TOLERANCE,
        };
        return Ok(ConsistencyReport {
            pass,
            max_discrepancy: max,
            tested: direct.len(),
            method: Method::Exact,
            checks: Vec::new(),
        });
    }

    if !matches!(m, MeasureSpec::Uniform) {
        return Err(Error::NotFinite(group.kind().to_string()));
    }
    let method = Method::MonteCarlo {
        samples: options.samples,
        seed: options.seed,
        workers: options.workers,
    };
    let n = coarse.len();
    let mut tests: Vec<(String, Vec<CharLabel>)> = Vec::new();
    for &label in &options.battery {
        group.check_label(label)?;
        for slot in 0..n {
            let mut labels = vec![CharLabel::TRIVIAL; n];
            labels[slot] = label;
            tests.push((format!("label {} on slot {slot}", label.0), labels));
        }
        if n > 1 {
            tests.push((format!("label {} on all slots", label.0), vec![label; n]));
        }
    }
    let mut checks = Vec::with_capacity(tests.len());
    let mut max = 0.0f64;
    let mut pass = true;
    for (i, (name, labels)) in tests.into_iter().enumerate() {
        let f = CylFunction::new(*group, coarse.clone(), Expression::CharProd(labels))?;
        let offset = 2 * i as u64;
        let pulled_back = integrate(&f.pullback(fine)?, m, method.reseeded(offset))?;
        let direct = integrate(&f, m, method.reseeded(offset + 1))?;
        max = max.max((pulled_back.mean - direct.mean).norm());
        pass &= pulled_back.compatible_with(&direct);
        checks.push(ConsistencyCheck { name, pulled_back, direct });
    }
    Ok(ConsistencyReport { pass, max_discrepancy: max, tested: checks.len(), method, checks })
}

/// `⟨f, h⟩ = ∫ conj(f)·h dμ` on a common refinement of the two labels.
pub fn inner_product(
    f: &CylFunction,
    h: &CylFunction,
    m: &MeasureSpec,
    method: Method,
) -> Result<IntegralEstimate> {
    if f.group() != h.group() {
        return Err(Error::KindMismatch(
            f.group().kind().to_string(),
            h.group().kind().to_string(),
        ));
    }
    let product = if f.label() == h.label() {
        f.conj().mul(h)?
    } else {
        let common = TameSubgroupoid::atomic_refinement(&[f.label(), h.label()]);
        f.pullback(&common)?.conj().mul(&h.pullback(&common)?)?
    };
    integrate(&product, m, method)
}

/// Largest `|G|^n` accepted by exact integration.
pub const fn exact_limit() -> u128 {
    EXACT_LIMIT
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyl::FiniteTable;
    use crate::groupoid::Alphabet;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_atoms() -> Alphabet {
        Alphabet::from_strs(&["p", "q", "r"], &[("a", "p", "q"), ("b", "q", "r")]).unwrap()
    }

    #[test]
    fn normalization() {
        let al = two_atoms();
        for group in [GroupDescriptor::cyclic(3).unwrap(), GroupDescriptor::u1(), GroupDescriptor::su2()] {
            let one = CylFunction::constant(group, al.top_subgroupoid(), c(1.0));
            let r = integrate(&one, &MeasureSpec::Uniform, Method::Exact).unwrap();
            assert_eq!(r.mean, c(1.0));
            let r = integrate(&one, &MeasureSpec::Uniform, Method::mc(100, 1)).unwrap();
            assert_eq!(r.mean, c(1.0));
            assert_eq!(r.stderr, 0.0);
        }
    }

    #[test]
    fn equal_edges_indicator() {
        let al = Alphabet::from_strs(&["p", "q", "r", "s"], &[("a", "p", "q"), ("b", "r", "s")]).unwrap();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let t = FiniteTable::new(2, 2, vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let f = CylFunction::new(z2, al.top_subgroupoid(), Expression::Table(t)).unwrap();
        let r = integrate(&f, &MeasureSpec::Uniform, Method::Exact).unwrap();
        assert_eq!(r.mean, c(0.5));
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn character_shortcut() {
        let al = two_atoms();
        let su2 = GroupDescriptor::su2();
        let top = al.top_subgroupoid();
        let chi = |a: i64, b: i64| {
            CylFunction::new(su2, top.clone(), Expression::CharProd(vec![CharLabel(a), CharLabel(b)]))
                .unwrap()
        };
        let r = integrate(&chi(1, 0), &MeasureSpec::Uniform, Method::Exact).unwrap();
        assert_eq!(r.mean, c(0.0));
        let r = inner_product(&chi(1, 2), &chi(1, 2), &MeasureSpec::Uniform, Method::Exact).unwrap();
        assert_eq!(r.mean, c(1.0));
        let r = inner_product(&chi(1, 2), &chi(1, 0), &MeasureSpec::Uniform, Method::Exact).unwrap();
        assert_eq!(r.mean, c(0.0));
        // χ_{1/2}² = χ_0 + χ_1 on each slot.
        let sq = chi(1, 0).mul(&chi(1, 0)).unwrap();
        let exp = character_expansion(sq.expr(), &su2, 2).unwrap();
        assert_eq!(exp.len(), 2);
        let mat = CylFunction::new(su2, top, Expression::Table(FiniteTable::new(2, 2, vec![c(0.0); 4]).unwrap()));
        assert!(mat.is_err());
    }

    #[test]
    fn shortcut_agrees_with_enumeration_on_cyclic() {
        let al = two_atoms();
        let z5 = GroupDescriptor::cyclic(5).unwrap();
        let top = al.top_subgroupoid();
        let f = CylFunction::new(z5, top.clone(), Expression::CharProd(vec![CharLabel(2), CharLabel(-1)])).unwrap();
        let h = CylFunction::new(z5, top, Expression::CharProd(vec![CharLabel(7), CharLabel(4)])).unwrap();
        let prod = f.conj().mul(&h).unwrap();
        let by_sum = integrate(&prod, &MeasureSpec::Uniform, Method::Exact).unwrap();
        let by_chars = character_integral(prod.expr(), &z5, 2).unwrap();
        assert!((by_sum.mean - by_chars).norm() < 1e-12);
        assert!((by_chars - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn mc_su2_character_square() {
        let al = two_atoms();
        let su2 = GroupDescriptor::su2();
        let a = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        let chi = CylFunction::new(su2, a, Expression::CharProd(vec![CharLabel(1)])).unwrap();
        let r = inner_product(&chi, &chi, &MeasureSpec::Uniform, Method::mc(200_000, 5)).unwrap();
        assert!(r.compatible_with_value(c(1.0)), "{r:?}");
        assert!(r.stderr > 0.0);
    }

    #[test]
    fn mc_is_reproducible_per_worker_count() {
        let al = two_atoms();
        let u1 = GroupDescriptor::u1();
        let f = CylFunction::new(u1, al.top_subgroupoid(), Expression::CharProd(vec![CharLabel(1), CharLabel(0)])).unwrap();
        let m = Method::MonteCarlo { samples: 10_001, seed: 9, workers: 4 };
        let a = integrate(&f, &MeasureSpec::Uniform, m).unwrap();
        let b = integrate(&f, &MeasureSpec::Uniform, m).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean.re.to_bits(), b.mean.re.to_bits());
        assert!(matches!(integrate(&f, &MeasureSpec::Uniform, Method::mc(1, 0)), Err(Error::InvalidMethod(_))));
    }

    #[test]
    fn pushforward_examples() {
        let al = two_atoms();
        let ab = TameSubgroupoid::new(vec![al.edge(&["a", "b"]).unwrap()]).unwrap();
        let top = al.top_subgroupoid();
        let uni = ProbTable::uniform(3, 2).unwrap();
        let pushed = pushforward(&uni, &ab, &top).unwrap();
        for p in pushed.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(pushforward(&uni, &top, &top).unwrap(), uni);
        let point = ProbTable::point_mass(3, &[2, 2]).unwrap();
        assert_eq!(pushforward(&point, &ab, &top).unwrap(), ProbTable::point_mass(3, &[1]).unwrap());
        assert!(matches!(pushforward(&ProbTable::uniform(3, 1).unwrap(), &top, &ab), Err(Error::NotComparable)));
    }

    #[test]
    fn biased_family_is_inconsistent() {
        let al = two_atoms();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let ab = TameSubgroupoid::new(vec![al.edge(&["a", "b"]).unwrap()]).unwrap();
        let top = al.top_subgroupoid();
        let biased = ProbTable::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let fam = MeasureSpec::FiniteFamily(vec![
            (ab.clone(), ProbTable::uniform(2, 1).unwrap()),
            (top.clone(), biased),
        ]);
        let r = check_consistency(&fam, &ab, &top, &z2, &ConsistencyOptions::default()).unwrap();
        assert!(!r.pass);
        assert!((r.max_discrepancy - 0.3).abs() < 1e-12);
        let r = check_consistency(&MeasureSpec::Uniform, &ab, &top, &z2, &ConsistencyOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_discrepancy, 0.0);
    }

    #[test]
    fn family_integration_uses_finer_level() {
        let al = two_atoms();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let ab = TameSubgroupoid::new(vec![al.edge(&["a", "b"]).unwrap()]).unwrap();
        let top = al.top_subgroupoid();
        let biased = ProbTable::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let fam = MeasureSpec::FiniteFamily(vec![(top, biased)]);
        let t = FiniteTable::new(2, 1, vec![c(1.0), c(0.0)]).unwrap();
        let f = CylFunction::new(z2, ab, Expression::Table(t)).unwrap();
        let r = integrate(&f, &fam, Method::Exact).unwrap();
        assert!((r.mean.re - 0.8).abs() < 1e-15);
        let r = integrate(&f, &fam, Method::mc(100_000, 3)).unwrap();
        assert!(r.compatible_with_value(c(0.8)), "{r:?}");
    }

    #[test]
    fn prob_table_validation() {
        assert!(ProbTable::new(2, 1, vec![0.5, 0.6]).is_err());
        assert!(ProbTable::new(2, 1, vec![-0.5, 1.5]).is_err());
        assert!(ProbTable::new(2, 2, vec![0.5, 0.5]).is_err());
        assert!(ProbTable::new(2, 1, vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<Complex64> = (0..37).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut whole = Moments::EMPTY;
        xs.iter().for_each(|x| whole.push(*x));
        let (mut a, mut b) = (Moments::EMPTY, Moments::EMPTY);
        xs[..20].iter().for_each(|x| a.push(*x));
        xs[20..].iter().for_each(|x| b.push(*x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).norm() < 1e-14);
        assert!((merged.m2 - whole.m2).abs() < 1e-12);
        let mean = xs.iter().sum::<Complex64>() / xs.len() as f64;
        let m2: f64 = xs.iter().map(|x| (x - mean).norm_sqr()).sum();
        assert!((whole.m2 - m2).abs() < 1e-12);
    }
}

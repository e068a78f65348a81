//! Cylindrical functions `f(A) = F(A(e₁), …, A(e_n))`.
//!
//! `F` is a closed expression grammar over `n` group-valued slots, so it can
//! be evaluated, pulled back along projections, tabulated and serialized
//! without arbitrary user code.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{for_each_tuple, AmbientConnection};
use crate::group::{CharLabel, GroupDescriptor, GroupElement, GroupKind};
use crate::groupoid::{subgroupoid_leq, Alphabet, Edge, PathWord, Sign, TameSubgroupoid};

/// Largest `|G|^n` enumerated by exact methods.
pub const EXACT_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

/// Real or imaginary part of a fundamental-representation matrix entry of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixEntry {
    pub slot: usize,
    pub row: usize,
    pub col: usize,
    pub part: Part,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub factors: Vec<(MatrixEntry, u32)>,
}

/// Complex values on `Z_N^n`, first slot most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTable {
    modulus: u32,
    arity: usize,
    values: Vec<Complex64>,
}

impl FiniteTable {
    pub fn new(modulus: u32, arity: usize, values: Vec<Complex64>) -> Result<FiniteTable> {
        let size = table_size(modulus, arity)?;
        if values.len() as u128 != size {
            return Err(Error::InvalidTable(format!(
                "expected {size} entries for Z_{modulus}^{arity}, got {}",
                values.len()
            )));
        }
        Ok(FiniteTable { modulus, arity, values })
    }

    pub fn from_fn<F>(modulus: u32, arity: usize, mut f: F) -> Result<FiniteTable>
    where
        F: FnMut(&[u32]) -> Complex64,
    {
        let size = table_size(modulus, arity)? as usize;
        let mut values = Vec::with_capacity(size);
        let mut residues = vec![0u32; arity];
        for i in 0..size {
            decode_index(i, modulus, &mut residues);
            values.push(f(&residues));
        }
        Ok(FiniteTable { modulus, arity, values })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, residues: &[u32]) -> Option<Complex64> {
        if residues.len() != self.arity || residues.iter().any(|&r| r >= self.modulus) {
            return None;
        }
        Some(self.values[encode_index(residues, self.modulus)])
    }

    fn lookup(&self, args: &[GroupElement]) -> Result<Complex64> {
        let mut idx = 0usize;
        for g in args {
            match *g {
                GroupElement::Cyclic { modulus, residue } if modulus == self.modulus => {
                    idx = idx * self.modulus as usize + residue as usize;
                }
                _ => {
                    return Err(Error::KindMismatch(
                        format!("Z_{}", self.modulus),
                        g.kind().to_string(),
                    ))
                }
            }
        }
        Ok(self.values[idx])
    }
}

pub(crate) fn table_size(modulus: u32, arity: usize) -> Result<u128> {
    let mut size: u128 = 1;
    for _ in 0..arity {
        size = size.saturating_mul(u128::from(modulus));
    }
    if size > EXACT_LIMIT {
        return Err(Error::TooLargeForExact { size, limit: EXACT_LIMIT });
    }
    Ok(size)
}

pub(crate) fn encode_index(residues: &[u32], modulus: u32) -> usize {
    residues.iter().fold(0usize, |acc, &r| acc * modulus as usize + r as usize)
}

pub(crate) fn decode_index(mut i: usize, modulus: u32, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (i % modulus as usize) as u32;
        i /= modulus as usize;
    }
}

/// One factor of a substituted slot: an outer slot raised to `±1`, or a fixed element.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotFactor {
    Slot(usize, Sign),
    Const(GroupElement),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Const(Complex64),
    /// `∏ᵢ χ_{labels[i]}(gᵢ)`; one label per slot.
    CharProd(Vec<CharLabel>),
    MatPoly(Vec<Monomial>),
    Table(FiniteTable),
    Sum(Vec<Expression>),
    Product(Vec<Expression>),
    Conj(Box<Expression>),
    /// Evaluates `inner` at slot values built as travel-ordered products of
    /// outer slots and constants; this is how pullbacks along `π_{n,m}` and
    /// the symmetry actions are represented.
    Subst { slots: Vec<Vec<SlotFactor>>, inner: Box<Expression> },
}

impl Expression {
    pub fn constant(re: f64, im: f64) -> Expression {
        Expression::Const(Complex64::new(re, im))
    }

    /// Checks the expression against a slot count and a group.
    pub fn validate(&self, group: &GroupDescriptor, arity: usize) -> Result<()> {
        match self {
            Expression::Const(_) => Ok(()),
            Expression::CharProd(labels) => {
                if labels.len() != arity {
                    return Err(Error::Arity(format!(
                        "character product has {} labels for {arity} slots",
                        labels.len()
                    )));
                }
                labels.iter().try_for_each(|l| group.check_label(*l))
            }
            Expression::MatPoly(terms) => {
                let dim = if group.kind() == GroupKind::Su2 { 2 } else { 1 };
                for t in terms {
                    for (e, _) in &t.factors {
                        if e.slot >= arity {
                            return Err(Error::Arity(format!("matrix entry uses slot {}", e.slot)));
                        }
                        if e.row >= dim || e.col >= dim {
                            return Err(Error::Arity(format!(
                                "matrix entry ({}, {}) outside {dim}x{dim}",
                                e.row, e.col
                            )));
                        }
                    }
                }
                Ok(())
            }
            Expression::Table(t) => {
                if group.kind() != GroupKind::Cyclic(t.modulus) {
                    return Err(Error::KindMismatch(
                        group.kind().to_string(),
                        format!("Z_{}", t.modulus),
                    ));
                }
                if t.arity != arity {
                    return Err(Error::Arity(format!(
                        "table has arity {} for {arity} slots",
                        t.arity
                    )));
                }
                Ok(())
            }
            Expression::Sum(xs) | Expression::Product(xs) => {
                xs.iter().try_for_each(|x| x.validate(group, arity))
            }
            Expression::Conj(x) => x.validate(group, arity),
            Expression::Subst { slots, inner } => {
                for word in slots {
                    for f in word {
                        match f {
                            SlotFactor::Slot(k, _) if *k >= arity => {
                                return Err(Error::Arity(format!("substitution uses slot {k}")))
                            }
                            SlotFactor::Const(g) => group.check_element(g)?,
                            _ => {}
                        }
                    }
                }
                inner.validate(group, slots.len())
            }
        }
    }

    pub fn eval(&self, group: &GroupDescriptor, args: &[GroupElement]) -> Result<Complex64> {
        Ok(match self {
            Expression::Const(c) => *c,
            Expression::CharProd(labels) => {
                if labels.len() != args.len() {
                    return Err(Error::Arity(format!(
                        "{} labels, {} arguments",
                        labels.len(),
                        args.len()
                    )));
                }
                let mut acc = Complex64::new(1.0, 0.0);
                for (l, g) in labels.iter().zip(args) {
                    acc *= group.character(*l, g)?;
                }
                acc
            }
            Expression::MatPoly(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    let mut m = t.coeff;
                    for (e, pow) in &t.factors {
                        let g = args.get(e.slot).ok_or_else(|| {
                            Error::Arity(format!("matrix entry uses slot {}", e.slot))
                        })?;
                        let z = g.fundamental_entry(e.row, e.col).ok_or_else(|| {
                            Error::Arity(format!("no entry ({}, {})", e.row, e.col))
                        })?;
                        let x = match e.part {
                            Part::Re => z.re,
                            Part::Im => z.im,
                        };
                        m *= x.powi(*pow as i32);
                    }
                    acc += m;
                }
                acc
            }
            Expression::Table(t) => {
                if t.arity != args.len() {
                    return Err(Error::Arity(format!(
                        "table arity {} for {} arguments",
                        t.arity,
                        args.len()
                    )));
                }
                t.lookup(args)?
            }
            Expression::Sum(xs) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in xs {
                    acc += x.eval(group, args)?;
                }
                acc
            }
            Expression::Product(xs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for x in xs {
                    acc *= x.eval(group, args)?;
                }
                acc
            }
            Expression::Conj(x) => x.eval(group, args)?.conj(),
            Expression::Subst { slots, inner } => {
                let mut inner_args = Vec::with_capacity(slots.len());
                for word in slots {
                    let mut acc = group.identity();
                    for f in word {
                        let g = match f {
                            SlotFactor::Slot(k, s) => args
                                .get(*k)
                                .ok_or_else(|| Error::Arity(format!("substitution uses slot {k}")))?
                                .signed(*s),
                            SlotFactor::Const(g) => *g,
                        };
                        acc = g.compose(&acc)?;
                    }
                    inner_args.push(acc);
                }
                inner.eval(group, &inner_args)?
            }
        })
    }
}

/// A cylindrical function: an expression in the holonomies of the ordered
/// generators of `label`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylFunction {
    group: GroupDescriptor,
    label: TameSubgroupoid,
    expr: Expression,
}

impl AsRef<CylFunction> for CylFunction {
    fn as_ref(&self) -> &CylFunction {
        self
    }
}

impl CylFunction {
    pub fn new(group: GroupDescriptor, label: TameSubgroupoid, expr: Expression) -> Result<Self> {
        expr.validate(&group, label.len())?;
        Ok(CylFunction { group, label, expr })
    }

    pub fn constant(group: GroupDescriptor, label: TameSubgroupoid, c: Complex64) -> Self {
        CylFunction { group, label, expr: Expression::Const(c) }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn label(&self) -> &TameSubgroupoid {
        &self.label
    }

    pub fn expr(&self) -> &Expression {
        &self.expr
    }

    pub fn arity(&self) -> usize {
        self.label.len()
    }

    /// `F` evaluated on a chart of the label.
    pub fn eval_chart(&self, values: &[GroupElement]) -> Result<Complex64> {
        if values.len() != self.label.len() {
            return Err(Error::ChartArity { expected: self.label.len(), found: values.len() });
        }
        self.expr.eval(&self.group, values)
    }

    pub fn eval(&self, conn: &AmbientConnection) -> Result<Complex64> {
        let chart = conn.coordinates(&self.label)?;
        self.eval_chart(chart.values())
    }

    fn same_label(&self, other: &CylFunction) -> Result<()> {
        if self.group != other.group {
            return Err(Error::KindMismatch(
                self.group.kind().to_string(),
                other.group.kind().to_string(),
            ));
        }
        if self.label != other.label {
            return Err(Error::Arity("operands live on different subgroupoids".into()));
        }
        Ok(())
    }

    /// Pointwise sum; both operands must share a label (pull back first).
    pub fn add(&self, other: &CylFunction) -> Result<CylFunction> {
        self.same_label(other)?;
        Ok(CylFunction {
            group: self.group,
            label: self.label.clone(),
            expr: Expression::Sum(vec![self.expr.clone(), other.expr.clone()]),
        })
    }

    pub fn mul(&self, other: &CylFunction) -> Result<CylFunction> {
        self.same_label(other)?;
        Ok(CylFunction {
            group: self.group,
            label: self.label.clone(),
            expr: Expression::Product(vec![self.expr.clone(), other.expr.clone()]),
        })
    }

    pub fn conj(&self) -> CylFunction {
        CylFunction {
            group: self.group,
            label: self.label.clone(),
            expr: Expression::Conj(Box::new(self.expr.clone())),
        }
    }

    /// The same function written over a finer subgroupoid `fine ≥ label`.
    pub fn pullback(&self, fine: &TameSubgroupoid) -> Result<CylFunction> {
        if *fine == self.label {
            return Ok(self.clone());
        }
        let d = subgroupoid_leq(&self.label, fine).ok_or(Error::NotComparable)?;
        let slots = d
            .parts
            .iter()
            .map(|part| part.iter().map(|&(k, s)| SlotFactor::Slot(k, s)).collect())
            .collect();
        Ok(CylFunction {
            group: self.group,
            label: fine.clone(),
            expr: Expression::Subst { slots, inner: Box::new(self.expr.clone()) },
        })
    }

    /// Values on `Z_N^n` as a table.
    pub fn tabulate(&self) -> Result<FiniteTable> {
        let GroupKind::Cyclic(n) = self.group.kind() else {
            return Err(Error::NotFinite(self.group.kind().to_string()));
        };
        let size = table_size(n, self.arity())? as usize;
        let mut values = Vec::with_capacity(size);
        for_each_tuple(&self.group.enumerate()?, self.arity(), |t| {
            values.push(self.expr.eval(&self.group, t)?);
            Ok(())
        })?;
        FiniteTable::new(n, self.arity(), values)
    }
}

/// Rewrites `F(A(p₁), …, A(p_k))` for arbitrary paths as a cylindrical
/// function over independent edges. Paths forming an independent edge set
/// are used directly; otherwise the atoms they traverse become the
/// generators.
pub fn rewrite_over_paths(
    group: GroupDescriptor,
    alphabet: &Alphabet,
    expr: Expression,
    paths: &[PathWord],
) -> Result<CylFunction> {
    expr.validate(&group, paths.len())?;
    for p in paths {
        if let Some(a) = p.atoms().find(|a| !alphabet.contains_atom(*a)) {
            return Err(Error::UnknownAtom(format!("#{}", a.0)));
        }
    }
    let as_edges: Option<Vec<Edge>> =
        paths.iter().map(|p| Edge::new(alphabet, p.clone()).ok()).collect();
    if let Some(edges) = as_edges {
        if let Ok(label) = TameSubgroupoid::new(edges) {
            return Ok(CylFunction { group, label, expr });
        }
    }

    let mut atoms: Vec<_> = paths.iter().flat_map(|p| p.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    let gens = atoms
        .iter()
        .map(|&a| alphabet.edge(&[alphabet.atom_name(a)]))
        .collect::<Result<Vec<_>>>()?;
    let label = TameSubgroupoid::new(gens)?;
    let slots = paths
        .iter()
        .map(|p| {
            p.letters()
                .iter()
                .map(|l| {
                    let k = atoms.binary_search(&l.atom).expect("atom collected above");
                    SlotFactor::Slot(k, l.sign)
                })
                .collect()
        })
        .collect();
    Ok(CylFunction { group, label, expr: Expression::Subst { slots, inner: Box::new(expr) } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupMethod {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    pub method: SupMethod,
    /// Exact maxima are attained; sampled maxima are lower bounds.
    pub is_lower_bound: bool,
}

pub fn sup_norm(f: &CylFunction, method: SupMethod) -> Result<SupNorm> {
    let mut best = 0.0f64;
    match method {
        SupMethod::Exact => {
            let order = f.group.order().ok_or_else(|| Error::NotFinite(f.group.kind().to_string()))?;
            table_size(order as u32, f.arity())?;
            for_each_tuple(&f.group.enumerate()?, f.arity(), |t| {
                best = best.max(f.expr.eval(&f.group, t)?.norm());
                Ok(())
            })?;
            Ok(SupNorm { value: best, method, is_lower_bound: false })
        }
        SupMethod::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut point = vec![f.group.identity(); f.arity()];
            for _ in 0..samples {
                for g in point.iter_mut() {
                    *g = f.group.haar_sample(&mut rng);
                }
                best = best.max(f.expr.eval(&f.group, &point)?.norm());
            }
            Ok(SupNorm { value: best, method, is_lower_bound: true })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::AmbientConnection;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn chain() -> Alphabet {
        Alphabet::from_strs(&["p", "q", "r"], &[("a", "p", "q"), ("b", "q", "r")]).unwrap()
    }

    #[test]
    fn constant_and_character() {
        let al = chain();
        let su2 = GroupDescriptor::su2();
        let l = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        let f = CylFunction::constant(su2, l.clone(), Complex64::new(2.0, -1.0));
        let conn = AmbientConnection::trivial(&al, su2);
        assert_eq!(f.eval(&conn).unwrap(), Complex64::new(2.0, -1.0));
        let chi = CylFunction::new(su2, l, Expression::CharProd(vec![CharLabel(1)])).unwrap();
        assert_eq!(chi.eval(&conn).unwrap(), c(2.0));
    }

    #[test]
    fn table_lookup() {
        let al = Alphabet::from_strs(&["p", "q", "r", "s"], &[("a", "p", "q"), ("b", "r", "s")]).unwrap();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let table = FiniteTable::new(2, 2, vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let f = CylFunction::new(z2, al.top_subgroupoid(), Expression::Table(table)).unwrap();
        for conn in AmbientConnection::enumerate(&al, z2).unwrap() {
            let equal = conn.values()[0] == conn.values()[1];
            assert_eq!(f.eval(&conn).unwrap(), c(if equal { 1.0 } else { 0.0 }));
        }
    }

    #[test]
    fn validation_errors() {
        let al = chain();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let top = al.top_subgroupoid();
        let bad = Expression::CharProd(vec![CharLabel(1)]);
        assert!(matches!(CylFunction::new(z2, top.clone(), bad), Err(Error::Arity(_))));
        let t3 = FiniteTable::new(3, 2, vec![c(0.0); 9]).unwrap();
        assert!(matches!(
            CylFunction::new(z2, top.clone(), Expression::Table(t3)),
            Err(Error::KindMismatch(..))
        ));
        assert!(FiniteTable::new(2, 2, vec![c(0.0); 3]).is_err());
        let su2 = GroupDescriptor::su2();
        let neg = Expression::CharProd(vec![CharLabel(-1), CharLabel(0)]);
        assert!(matches!(CylFunction::new(su2, top, neg), Err(Error::InvalidLabel { .. })));
    }

    #[test]
    fn pullback_identity_and_example() {
        let al = chain();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let ab = TameSubgroupoid::new(vec![al.edge(&["a", "b"]).unwrap()]).unwrap();
        let t = FiniteTable::new(2, 1, vec![c(5.0), c(7.0)]).unwrap();
        let f = CylFunction::new(z2, ab.clone(), Expression::Table(t)).unwrap();
        assert_eq!(f.pullback(&ab).unwrap(), f);
        let top = al.top_subgroupoid();
        let g = f.pullback(&top).unwrap();
        assert_eq!(g.label(), &top);
        // (g_a, g_b) ↦ F(g_b·g_a)
        let tab = g.tabulate().unwrap();
        assert_eq!(tab.values(), &[c(5.0), c(7.0), c(7.0), c(5.0)]);
        assert_eq!(top.len(), 2);
        assert!(matches!(g.pullback(&ab), Err(Error::NotComparable)));
    }

    #[test]
    fn sup_norms() {
        let al = chain();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let a = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        let f = CylFunction::constant(z2, a.clone(), Complex64::new(3.0, 4.0));
        assert_eq!(sup_norm(&f, SupMethod::Exact).unwrap().value, 5.0);
        let t = FiniteTable::new(2, 1, vec![c(1.0), c(3.0)]).unwrap();
        let f = CylFunction::new(z2, a.clone(), Expression::Table(t)).unwrap();
        assert_eq!(sup_norm(&f, SupMethod::Exact).unwrap().value, 3.0);
        let su2 = GroupDescriptor::su2();
        let chi = CylFunction::new(su2, a, Expression::CharProd(vec![CharLabel(1)])).unwrap();
        assert!(matches!(sup_norm(&chi, SupMethod::Exact), Err(Error::NotFinite(_))));
    }

    #[test]
    fn sup_norm_size_limit() {
        let names: Vec<String> = (0..8).map(|i| format!("v{i}")).collect();
        let atoms: Vec<(String, String, String)> =
            (0..7).map(|i| (format!("a{i}"), format!("v{i}"), format!("v{}", i + 1))).collect();
        let al = Alphabet::new(names, atoms).unwrap();
        let z10 = GroupDescriptor::cyclic(10).unwrap();
        let f = CylFunction::constant(z10, al.top_subgroupoid(), c(1.0));
        assert!(matches!(sup_norm(&f, SupMethod::Exact), Err(Error::TooLargeForExact { .. })));
    }

    #[test]
    fn matpoly_entries() {
        let al = chain();
        let su2 = GroupDescriptor::su2();
        let a = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        // Re U00 + Re U11 = tr U = χ_{1/2}
        let tr = Expression::MatPoly(vec![
            Monomial {
                coeff: c(1.0),
                factors: vec![(MatrixEntry { slot: 0, row: 0, col: 0, part: Part::Re }, 1)],
            },
            Monomial {
                coeff: c(1.0),
                factors: vec![(MatrixEntry { slot: 0, row: 1, col: 1, part: Part::Re }, 1)],
            },
        ]);
        let f = CylFunction::new(su2, a.clone(), tr).unwrap();
        let chi = CylFunction::new(su2, a.clone(), Expression::CharProd(vec![CharLabel(1)])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let conn = AmbientConnection::haar_random(&al, su2, &mut rng);
            assert!((f.eval(&conn).unwrap() - chi.eval(&conn).unwrap()).norm() < 1e-12);
        }
        let bad = Expression::MatPoly(vec![Monomial {
            coeff: c(1.0),
            factors: vec![(MatrixEntry { slot: 0, row: 2, col: 0, part: Part::Re }, 1)],
        }]);
        assert!(CylFunction::new(su2, a, bad).is_err());
    }

    #[test]
    fn rewrite_examples() {
        let al = chain();
        let z2 = GroupDescriptor::cyclic(2).unwrap();
        let edge = al.path(&["a", "b"]).unwrap();
        let t = FiniteTable::new(2, 1, vec![c(1.0), c(2.0)]).unwrap();
        let f = rewrite_over_paths(z2, &al, Expression::Table(t.clone()), std::slice::from_ref(&edge)).unwrap();
        assert_eq!(f.label().generators()[0].word(), &edge);
        assert_eq!(f.expr(), &Expression::Table(t));

        let retraced = al.path(&["a", "b", "~b"]).unwrap();
        assert_eq!(retraced, al.path(&["a"]).unwrap());

        // Overlapping paths [a, b] and [b] rewritten over the atoms.
        let t2 = FiniteTable::from_fn(2, 2, |r| c(f64::from(r[0] * 2 + r[1]))).unwrap();
        let paths = [edge, al.path(&["b"]).unwrap()];
        let f = rewrite_over_paths(z2, &al, Expression::Table(t2.clone()), &paths).unwrap();
        assert_eq!(f.label(), &al.top_subgroupoid());
        for conn in AmbientConnection::enumerate(&al, z2).unwrap() {
            let args: Vec<_> = paths.iter().map(|p| conn.evaluate(p).unwrap()).collect();
            let expect = Expression::Table(t2.clone()).eval(&z2, &args).unwrap();
            assert_eq!(f.eval(&conn).unwrap(), expect);
        }
    }

    #[test]
    fn index_codec() {
        let mut out = [0u32; 3];
        for i in 0..27 {
            decode_index(i, 3, &mut out);
            assert_eq!(encode_index(&out, 3), i);
        }
    }
}

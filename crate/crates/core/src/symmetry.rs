//! Gauge transformations and groupoid automorphisms acting on connections
//! and on cylindrical functions, with invariance audits of the uniform measure.

use std::collections::BTreeMap;

use rand::Rng;

use crate::cyl::{CylFunction, Expression, SlotFactor};
use crate::error::{Error, Result};
use crate::family::AmbientConnection;
use crate::group::{GroupDescriptor, GroupElement};
use crate::groupoid::{Alphabet, AtomId, Edge, Letter, PathWord, Sign, TameSubgroupoid, VertexId};
use crate::measure::{inner_product, integrate, IntegralEstimate, MeasureSpec, Method};

/// Vertex-wise group elements; identity off the stored support.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransformation {
    group: GroupDescriptor,
    values: BTreeMap<VertexId, GroupElement>,
}

impl GaugeTransformation {
    pub fn new<I>(group: GroupDescriptor, values: I) -> Result<GaugeTransformation>
    where
        I: IntoIterator<Item = (VertexId, GroupElement)>,
    {
        let values: BTreeMap<_, _> = values.into_iter().collect();
        for g in values.values() {
            group.check_element(g)?;
        }
        Ok(GaugeTransformation { group, values })
    }

    pub fn identity(group: GroupDescriptor) -> GaugeTransformation {
        GaugeTransformation { group, values: BTreeMap::new() }
    }

    pub fn haar_random<R: Rng + ?Sized>(
        alphabet: &Alphabet,
        group: GroupDescriptor,
        rng: &mut R,
    ) -> GaugeTransformation {
        let values = alphabet.vertex_ids().map(|v| (v, group.haar_sample(rng))).collect();
        GaugeTransformation { group, values }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn at(&self, v: VertexId) -> GroupElement {
        self.values.get(&v).copied().unwrap_or_else(|| self.group.identity())
    }

    pub fn support(&self) -> impl Iterator<Item = (VertexId, &GroupElement)> {
        self.values.iter().map(|(v, g)| (*v, g))
    }

    /// Pointwise product `self(x)·inner(x)`: acting with the result equals
    /// acting with `inner`, then with `self`.
    pub fn compose(&self, inner: &GaugeTransformation) -> Result<GaugeTransformation> {
        self.same_kind(&inner.group)?;
        let mut values = BTreeMap::new();
        for v in self.values.keys().chain(inner.values.keys()) {
            values.insert(*v, self.at(*v).compose(&inner.at(*v))?);
        }
        Ok(GaugeTransformation { group: self.group, values })
    }

    pub fn inverse(&self) -> GaugeTransformation {
        let values = self.values.iter().map(|(v, g)| (*v, g.inverse())).collect();
        GaugeTransformation { group: self.group, values }
    }

    fn same_kind(&self, group: &GroupDescriptor) -> Result<()> {
        if self.group.kind() != group.kind() {
            return Err(Error::KindMismatch(self.group.kind().to_string(), group.kind().to_string()));
        }
        Ok(())
    }
}

/// `Ā ↦ Ā_g` with `Ā_g(a) = g(r(a))·Ā(a)·g(s(a))⁻¹` on every atom.
pub fn gauge_act(
    alphabet: &Alphabet,
    g: &GaugeTransformation,
    conn: &AmbientConnection,
) -> Result<AmbientConnection> {
    g.same_kind(conn.group())?;
    let values = alphabet
        .atoms()
        .map(|(id, atom)| {
            let x = conn.atom_value(id)?;
            g.at(atom.target).compose(x)?.compose(&g.at(atom.source).inverse())
        })
        .collect::<Result<Vec<_>>>()?;
    AmbientConnection::new(alphabet, *conn.group(), values)
}

/// Incidence-preserving signed bijection of vertices and atoms.
///
/// `atoms[a] = (b, σ)` sends the atom `a` to `b^σ`; for `σ = −1` the
/// endpoints of `b` are the swapped images of the endpoints of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupoidAutomorphism {
    vertices: Vec<VertexId>,
    atoms: Vec<(AtomId, Sign)>,
}

impl GroupoidAutomorphism {
    pub fn new(
        alphabet: &Alphabet,
        vertices: Vec<VertexId>,
        atoms: Vec<(AtomId, Sign)>,
    ) -> Result<GroupoidAutomorphism> {
        if vertices.len() != alphabet.vertex_count() || atoms.len() != alphabet.atom_count() {
            return Err(Error::AlphabetMismatch(format!(
                "expected {} vertex and {} atom images, got {} and {}",
                alphabet.vertex_count(),
                alphabet.atom_count(),
                vertices.len(),
                atoms.len()
            )));
        }
        let mut seen = vec![false; vertices.len()];
        for v in &vertices {
            match seen.get_mut(v.0) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::AlphabetMismatch("vertex map is not a bijection".into())),
            }
        }
        let mut seen = vec![false; atoms.len()];
        for (b, _) in &atoms {
            match seen.get_mut(b.0) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::AlphabetMismatch("atom map is not a bijection".into())),
            }
        }
        for (a, atom) in alphabet.atoms() {
            let (b, sign) = atoms[a.0];
            let image = alphabet.atom(b);
            let (s, t) = match sign {
                Sign::Plus => (image.source, image.target),
                Sign::Minus => (image.target, image.source),
            };
            if s != vertices[atom.source.0] || t != vertices[atom.target.0] {
                return Err(Error::AlphabetMismatch(format!(
                    "atom `{}` is not mapped compatibly with its endpoints",
                    atom.name
                )));
            }
        }
        Ok(GroupoidAutomorphism { vertices, atoms })
    }

    pub fn identity(alphabet: &Alphabet) -> GroupoidAutomorphism {
        GroupoidAutomorphism {
            vertices: alphabet.vertex_ids().collect(),
            atoms: alphabet.atoms().map(|(a, _)| (a, Sign::Plus)).collect(),
        }
    }

    /// Every automorphism of the alphabet. The atom map determines the
    /// images of non-isolated vertices; isolated vertices are permuted freely.
    pub fn all(alphabet: &Alphabet) -> Vec<GroupoidAutomorphism> {
        let n = alphabet.atom_count();
        let mut incident = vec![false; alphabet.vertex_count()];
        for (_, atom) in alphabet.atoms() {
            incident[atom.source.0] = true;
            incident[atom.target.0] = true;
        }
        let isolated: Vec<usize> = (0..incident.len()).filter(|&v| !incident[v]).collect();
        let mut out = Vec::new();
        for perm in permutations(n) {
            for mask in 0..(1u64 << n) {
                let atoms: Vec<(AtomId, Sign)> = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        (AtomId(b), if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                    })
                    .collect();
                let Some(forced) = forced_vertex_map(alphabet, &atoms) else { continue };
                for iso in permutations(isolated.len()) {
                    let mut vertices = forced.clone();
                    for (k, &v) in isolated.iter().enumerate() {
                        vertices[v] = Some(VertexId(isolated[iso[k]]));
                    }
                    let vertices: Vec<VertexId> = vertices.into_iter().map(|v| v.expect("all vertices assigned")).collect();
                    if let Ok(f) = GroupoidAutomorphism::new(alphabet, vertices, atoms.clone()) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertices[v.0]
    }

    pub fn atom(&self, a: AtomId) -> (AtomId, Sign) {
        self.atoms[a.0]
    }

    pub fn apply_letter(&self, l: Letter) -> Letter {
        let (b, sign) = self.atoms[l.atom.0];
        Letter::new(b, sign * l.sign)
    }

    pub fn apply_path(&self, p: &PathWord) -> Result<PathWord> {
        self.check_path(p)?;
        let letters = p.letters().iter().map(|l| self.apply_letter(*l)).collect();
        Ok(PathWord::from_parts(self.vertex(p.source()), self.vertex(p.target()), letters))
    }

    pub fn apply_edge(&self, e: &Edge) -> Result<Edge> {
        let word = self.apply_path(e.word())?;
        let vertices = e.vertices().iter().map(|v| self.vertex(*v)).collect();
        Ok(Edge::from_parts(word, vertices))
    }

    /// Image subgroupoid, generated by the images of the generators in order.
    pub fn apply_subgroupoid(&self, l: &TameSubgroupoid) -> Result<TameSubgroupoid> {
        let gens = l.generators().iter().map(|e| self.apply_edge(e)).collect::<Result<Vec<_>>>()?;
        TameSubgroupoid::new(gens)
    }

    pub fn inverse(&self) -> GroupoidAutomorphism {
        let mut vertices = vec![VertexId(0); self.vertices.len()];
        for (v, w) in self.vertices.iter().enumerate() {
            vertices[w.0] = VertexId(v);
        }
        let mut atoms = vec![(AtomId(0), Sign::Plus); self.atoms.len()];
        for (a, (b, sign)) in self.atoms.iter().enumerate() {
            atoms[b.0] = (AtomId(a), *sign);
        }
        GroupoidAutomorphism { vertices, atoms }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupoidAutomorphism) -> Result<GroupoidAutomorphism> {
        if self.vertices.len() != inner.vertices.len() || self.atoms.len() != inner.atoms.len() {
            return Err(Error::AlphabetMismatch("automorphisms of different alphabets".into()));
        }
        let vertices = inner.vertices.iter().map(|v| self.vertex(*v)).collect();
        let atoms = inner
            .atoms
            .iter()
            .map(|(b, s)| {
                let (c, t) = self.atoms[b.0];
                (c, t * *s)
            })
            .collect();
        Ok(GroupoidAutomorphism { vertices, atoms })
    }

    fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        if self.vertices.len() != alphabet.vertex_count() || self.atoms.len() != alphabet.atom_count() {
            return Err(Error::AlphabetMismatch(format!(
                "automorphism has {} vertices and {} atoms, alphabet has {} and {}",
                self.vertices.len(),
                self.atoms.len(),
                alphabet.vertex_count(),
                alphabet.atom_count()
            )));
        }
        Ok(())
    }

    fn check_path(&self, p: &PathWord) -> Result<()> {
        let vertex_ok = |v: VertexId| v.0 < self.vertices.len();
        if !vertex_ok(p.source()) || !vertex_ok(p.target()) || p.atoms().any(|a| a.0 >= self.atoms.len()) {
            return Err(Error::AlphabetMismatch("path leaves the automorphism's alphabet".into()));
        }
        Ok(())
    }
}

fn forced_vertex_map(alphabet: &Alphabet, atoms: &[(AtomId, Sign)]) -> Option<Vec<Option<VertexId>>> {
    let mut map = vec![None; alphabet.vertex_count()];
    for (a, atom) in alphabet.atoms() {
        let (b, sign) = atoms[a.0];
        let image = alphabet.atom(b);
        let (s, t) = match sign {
            Sign::Plus => (image.source, image.target),
            Sign::Minus => (image.target, image.source),
        };
        for (v, w) in [(atom.source, s), (atom.target, t)] {
            match map[v.0] {
                None => map[v.0] = Some(w),
                Some(x) if x == w => {}
                Some(_) => return None,
            }
        }
    }
    Some(map)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// `(FĀ)(p) = Ā(F⁻¹p)`; on atoms, `F(a) = b^σ` gives `(FĀ)(b) = Ā(a)^σ`.
pub fn automorphism_act(
    alphabet: &Alphabet,
    f: &GroupoidAutomorphism,
    conn: &AmbientConnection,
) -> Result<AmbientConnection> {
    f.check_alphabet(alphabet)?;
    let mut values = vec![conn.group().identity(); alphabet.atom_count()];
    for (a, _) in alphabet.atoms() {
        let (b, sign) = f.atom(a);
        values[b.0] = conn.atom_value(a)?.signed(sign);
    }
    AmbientConnection::new(alphabet, *conn.group(), values)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Transformation {
    Gauge(GaugeTransformation),
    Automorphism(GroupoidAutomorphism),
}

impl Transformation {
    pub fn inverse(&self) -> Transformation {
        match self {
            Transformation::Gauge(g) => Transformation::Gauge(g.inverse()),
            Transformation::Automorphism(f) => Transformation::Automorphism(f.inverse()),
        }
    }
}

pub fn act_on_connection(
    alphabet: &Alphabet,
    t: &Transformation,
    conn: &AmbientConnection,
) -> Result<AmbientConnection> {
    match t {
        Transformation::Gauge(g) => gauge_act(alphabet, g, conn),
        Transformation::Automorphism(f) => automorphism_act(alphabet, f, conn),
    }
}

/// `(U f)(Ā) = f(T⁻¹Ā)`.
pub fn act_on_function(alphabet: &Alphabet, t: &Transformation, f: &CylFunction) -> Result<CylFunction> {
    match t {
        Transformation::Gauge(g) => {
            g.same_kind(f.group())?;
            if g.values.is_empty() {
                return Ok(f.clone());
            }
            // (g⁻¹Ā)(e) = g(r(e))⁻¹·Ā(e)·g(s(e)), written in travel order.
            let slots = f
                .label()
                .generators()
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    vec![
                        SlotFactor::Const(g.at(e.source())),
                        SlotFactor::Slot(i, Sign::Plus),
                        SlotFactor::Const(g.at(e.target()).inverse()),
                    ]
                })
                .collect();
            CylFunction::new(
                *f.group(),
                f.label().clone(),
                Expression::Subst { slots, inner: Box::new(f.expr().clone()) },
            )
        }
        Transformation::Automorphism(a) => {
            a.check_alphabet(alphabet)?;
            // (F⁻¹Ā)(e) = Ā(F e): same expression over the image generators.
            CylFunction::new(*f.group(), a.apply_subgroupoid(f.label())?, f.expr().clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub lhs: IntegralEstimate,
    pub rhs: IntegralEstimate,
    pub discrepancy: f64,
    pub pass: bool,
}

impl InvarianceReport {
    /// Exact estimates must agree bit for bit; Monte Carlo ones within
    /// three combined standard errors.
    fn compare(lhs: IntegralEstimate, rhs: IntegralEstimate) -> InvarianceReport {
        let pass = if lhs.method.is_exact() && rhs.method.is_exact() {
            lhs.mean == rhs.mean
        } else {
            lhs.compatible_with(&rhs)
        };
        InvarianceReport { discrepancy: (lhs.mean - rhs.mean).norm(), lhs, rhs, pass }
    }
}

/// Compares `∫ f dμ₀` with `∫ U f dμ₀`. Both sides share the seed.
pub fn invariance_report(
    alphabet: &Alphabet,
    f: &CylFunction,
    t: &Transformation,
    method: Method,
) -> Result<InvarianceReport> {
    let lhs = integrate(f, &MeasureSpec::Uniform, method)?;
    let rhs = integrate(&act_on_function(alphabet, t, f)?, &MeasureSpec::Uniform, method)?;
    Ok(InvarianceReport::compare(lhs, rhs))
}

/// Compares `⟨f, h⟩` with `⟨U f, U h⟩` in `L²(μ₀)`.
pub fn unitarity_report(
    alphabet: &Alphabet,
    f: &CylFunction,
    h: &CylFunction,
    t: &Transformation,
    method: Method,
) -> Result<InvarianceReport> {
    let lhs = inner_product(f, h, &MeasureSpec::Uniform, method)?;
    let uf = act_on_function(alphabet, t, f)?;
    let uh = act_on_function(alphabet, t, h)?;
    let rhs = inner_product(&uf, &uh, &MeasureSpec::Uniform, method)?;
    Ok(InvarianceReport::compare(lhs, rhs))
}

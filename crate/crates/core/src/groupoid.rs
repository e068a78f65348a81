//! Combinatorial path groupoid over a finite ambient alphabet.
//!
//! Curves are words over a declared set of atomic segments. Two words are
//! equivalent when they differ by retracings (`a a⁻¹` insertions), so every
//! path has a unique reduced representative. Words are read in travel
//! order: `[ℓ₁, …, ℓ_k]` traverses `ℓ₁` first, and the groupoid product
//! `p₂ p₁` (first `p₁`, then `p₂`) concatenates the letters of `p₁` before
//! those of `p₂`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::{Mul, Neg};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// Finite set of labelled points and oriented atomic segments between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    vertices: Vec<String>,
    atoms: Vec<Atom>,
    vertex_index: HashMap<String, VertexId>,
    atom_index: HashMap<String, AtomId>,
}

impl Alphabet {
    pub fn new<V, A>(vertices: V, atoms: A) -> Result<Alphabet>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate vertex `{v}`")));
            }
        }
        let mut atom_list = Vec::new();
        let mut atom_index = HashMap::new();
        for (name, src, dst) in atoms {
            if name.is_empty() || name.starts_with('~') {
                return Err(Error::InvalidAlphabet(format!("bad atom id `{name}`")));
            }
            let lookup = |v: &str| {
                vertex_index.get(v).copied().ok_or_else(|| {
                    Error::InvalidAlphabet(format!("atom `{name}` uses unknown vertex `{v}`"))
                })
            };
            let atom = Atom { source: lookup(&src)?, target: lookup(&dst)?, name: name.clone() };
            if atom_index.insert(name.clone(), AtomId(atom_list.len())).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate atom `{name}`")));
            }
            atom_list.push(atom);
        }
        Ok(Alphabet { vertices, atoms: atom_list, vertex_index, atom_index })
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(vertices: &[&str], atoms: &[(&str, &str, &str)]) -> Result<Alphabet> {
        Alphabet::new(
            vertices.iter().copied(),
            atoms.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (AtomId, &Atom)> {
        self.atoms.iter().enumerate().map(|(i, a)| (AtomId(i), a))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn atom_name(&self, a: AtomId) -> &str {
        &self.atoms[a.0].name
    }

    pub fn atom_id(&self, name: &str) -> Result<AtomId> {
        self.atom_index.get(name).copied().ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn contains_atom(&self, a: AtomId) -> bool {
        a.0 < self.atoms.len()
    }

    /// Start vertex of a signed letter.
    pub fn start(&self, l: Letter) -> VertexId {
        let a = &self.atoms[l.atom.0];
        match l.sign {
            Sign::Plus => a.source,
            Sign::Minus => a.target,
        }
    }

    /// End vertex of a signed letter.
    pub fn end(&self, l: Letter) -> VertexId {
        let a = &self.atoms[l.atom.0];
        match l.sign {
            Sign::Plus => a.target,
            Sign::Minus => a.source,
        }
    }

    /// Parses `"a"` as `a⁺` and `"~a"` as `a⁻`.
    pub fn parse_letter(&self, token: &str) -> Result<Letter> {
        match token.strip_prefix('~') {
            Some(name) => Ok(Letter::new(self.atom_id(name)?, Sign::Minus)),
            None => Ok(Letter::new(self.atom_id(token)?, Sign::Plus)),
        }
    }

    pub fn format_letter(&self, l: Letter) -> String {
        match l.sign {
            Sign::Plus => self.atom_name(l.atom).to_string(),
            Sign::Minus => format!("~{}", self.atom_name(l.atom)),
        }
    }

    /// Reduced path from signed tokens; the base is the start of the first letter.
    pub fn path<S: AsRef<str>>(&self, tokens: &[S]) -> Result<PathWord> {
        let letters =
            tokens.iter().map(|t| self.parse_letter(t.as_ref())).collect::<Result<Vec<_>>>()?;
        let Some(first) = letters.first() else {
            return Err(Error::NotAnEdge("empty token list has no base vertex".into()));
        };
        reduce(self, self.start(*first), &letters)
    }

    pub fn edge<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Edge> {
        Edge::new(self, self.path(tokens)?)
    }

    /// All simple edges of the alphabet, one orientation per edge.
    pub fn simple_edges(&self) -> Vec<Edge> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for start in self.vertex_ids() {
            let mut word = Vec::new();
            let mut visited = vec![start];
            self.extend_simple(start, &mut word, &mut visited, &mut |letters, verts| {
                let fwd: Vec<Letter> = letters.to_vec();
                let bwd: Vec<Letter> = invert_letters(letters);
                let key = fwd.clone().min(bwd);
                if seen.insert(key.clone()) {
                    let closed = verts.first() == verts.last();
                    let source = self.start(key[0]);
                    let target = self.end(*key.last().unwrap());
                    let mut vertices: Vec<VertexId> = Vec::with_capacity(key.len() + 1);
                    vertices.push(source);
                    vertices.extend(key.iter().map(|l| self.end(*l)));
                    debug_assert_eq!(closed, source == target);
                    out.push(Edge {
                        word: PathWord { source, target, letters: key },
                        vertices,
                    });
                }
            });
        }
        out.sort_by(|a, b| {
            a.word.letters.len().cmp(&b.word.letters.len()).then(a.word.letters.cmp(&b.word.letters))
        });
        out
    }

    fn extend_simple(
        &self,
        start: VertexId,
        word: &mut Vec<Letter>,
        visited: &mut Vec<VertexId>,
        emit: &mut dyn FnMut(&[Letter], &[VertexId]),
    ) {
        let here = *visited.last().unwrap();
        for (id, _) in self.atoms() {
            if word.iter().any(|l| l.atom == id) {
                continue;
            }
            for sign in [Sign::Plus, Sign::Minus] {
                let l = Letter::new(id, sign);
                if self.start(l) != here {
                    continue;
                }
                // A self-loop atom gives the same edge for both signs.
                if sign == Sign::Minus && self.atom(id).source == self.atom(id).target {
                    continue;
                }
                let next = self.end(l);
                word.push(l);
                visited.push(next);
                if next == start {
                    emit(word, visited);
                } else if !visited[..visited.len() - 1].contains(&next) {
                    emit(word, visited);
                    self.extend_simple(start, word, visited, emit);
                }
                visited.pop();
                word.pop();
            }
        }
    }

    /// Every tame subgroupoid (nonempty independent set of simple edges,
    /// generators in [`Alphabet::simple_edges`] order and orientation).
    pub fn tame_subgroupoids(&self) -> Vec<TameSubgroupoid> {
        let edges = self.simple_edges();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        fn walk(
            edges: &[Edge],
            from: usize,
            chosen: &mut Vec<usize>,
            out: &mut Vec<TameSubgroupoid>,
        ) {
            for i in from..edges.len() {
                if chosen.iter().all(|&c| pair_independent(&edges[c], &edges[i])) {
                    chosen.push(i);
                    let gens: Vec<Edge> = chosen.iter().map(|&c| edges[c].clone()).collect();
                    out.push(TameSubgroupoid::from_independent(gens));
                    walk(edges, i + 1, chosen, out);
                    chosen.pop();
                }
            }
        }
        walk(&edges, 0, &mut chosen, &mut out);
        out
    }

    /// The subgroupoid freely generated by the atoms themselves, in id order.
    pub fn top_subgroupoid(&self) -> TameSubgroupoid {
        let gens = self
            .atoms()
            .map(|(id, a)| Edge {
                word: PathWord {
                    source: a.source,
                    target: a.target,
                    letters: vec![Letter::new(id, Sign::Plus)],
                },
                vertices: vec![a.source, a.target],
            })
            .collect();
        TameSubgroupoid::from_independent(gens)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub atom: AtomId,
    pub sign: Sign,
}

impl Letter {
    pub fn new(atom: AtomId, sign: Sign) -> Letter {
        Letter { atom, sign }
    }

    pub fn inverse(self) -> Letter {
        Letter { atom: self.atom, sign: -self.sign }
    }
}

fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// Reduced composable word; the identity path at a vertex is the empty word
/// carrying that vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathWord {
    source: VertexId,
    target: VertexId,
    letters: Vec<Letter>,
}

impl PathWord {
    pub fn identity(v: VertexId) -> PathWord {
        PathWord { source: v, target: v, letters: Vec::new() }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.source == self.target
    }

    pub fn inverse(&self) -> PathWord {
        PathWord { source: self.target, target: self.source, letters: invert_letters(&self.letters) }
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.letters.iter().map(|l| l.atom)
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.letters.is_empty() {
            return format!("1_{}", alphabet.vertex_name(self.source));
        }
        let parts: Vec<String> = self.letters.iter().map(|l| alphabet.format_letter(*l)).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Unchecked constructor for words already known to be reduced and composable.
    pub(crate) fn from_parts(source: VertexId, target: VertexId, letters: Vec<Letter>) -> PathWord {
        PathWord { source, target, letters }
    }
}

/// Cancels retracings in a composable letter sequence starting at `base`.
pub fn reduce(alphabet: &Alphabet, base: VertexId, letters: &[Letter]) -> Result<PathWord> {
    if base.0 >= alphabet.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", base.0)));
    }
    let mut here = base;
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for (position, &l) in letters.iter().enumerate() {
        if !alphabet.contains_atom(l.atom) {
            return Err(Error::UnknownAtom(format!("#{}", l.atom.0)));
        }
        if alphabet.start(l) != here {
            return Err(Error::NotComposable { position });
        }
        here = alphabet.end(l);
        if stack.last().is_some_and(|&top| top == l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    Ok(PathWord { source: base, target: here, letters: stack })
}

/// Groupoid product `outer ∘ inner`: traverse `inner` first, then `outer`.
pub fn compose_paths(alphabet: &Alphabet, outer: &PathWord, inner: &PathWord) -> Result<PathWord> {
    if outer.source != inner.target {
        return Err(Error::EndpointMismatch);
    }
    let mut letters = inner.letters.clone();
    letters.extend_from_slice(&outer.letters);
    reduce(alphabet, inner.source, &letters)
}

/// Nonempty simple word: no atom repeated, interior vertices pairwise
/// distinct and different from the endpoints. Closed edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    word: PathWord,
    vertices: Vec<VertexId>,
}

impl Edge {
    pub fn new(alphabet: &Alphabet, word: PathWord) -> Result<Edge> {
        if word.letters.is_empty() {
            return Err(Error::NotAnEdge("identity path".into()));
        }
        let mut atoms = HashSet::new();
        for l in &word.letters {
            if !atoms.insert(l.atom) {
                return Err(Error::NotAnEdge(format!(
                    "atom `{}` appears twice",
                    alphabet.atom_name(l.atom)
                )));
            }
        }
        let mut vertices = Vec::with_capacity(word.letters.len() + 1);
        vertices.push(word.source);
        vertices.extend(word.letters.iter().map(|l| alphabet.end(*l)));
        let interior = &vertices[1..vertices.len() - 1];
        let mut seen = HashSet::new();
        for v in interior {
            if *v == word.source || *v == word.target || !seen.insert(*v) {
                return Err(Error::NotAnEdge(format!(
                    "vertex `{}` visited twice",
                    alphabet.vertex_name(*v)
                )));
            }
        }
        Ok(Edge { word, vertices })
    }

    pub fn word(&self) -> &PathWord {
        &self.word
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word.letters
    }

    pub fn source(&self) -> VertexId {
        self.word.source
    }

    pub fn target(&self) -> VertexId {
        self.word.target
    }

    pub fn interior_vertices(&self) -> &[VertexId] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// Visited vertex sequence, endpoints included.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn inverse(&self) -> Edge {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Edge { word: self.word.inverse(), vertices }
    }

    pub(crate) fn from_parts(word: PathWord, vertices: Vec<VertexId>) -> Edge {
        Edge { word, vertices }
    }
}

fn pair_independent(e: &Edge, f: &Edge) -> bool {
    if e.word.atoms().any(|a| f.word.atoms().any(|b| a == b)) {
        return false;
    }
    let touches = |inner: &Edge, other: &Edge| {
        inner.interior_vertices().iter().any(|v| other.vertices.contains(v))
    };
    !touches(e, f) && !touches(f, e)
}

/// Edges meet at most in endpoints and share no atom.
pub fn is_independent(edges: &[Edge]) -> bool {
    edges
        .iter()
        .enumerate()
        .all(|(i, e)| edges[i + 1..].iter().all(|f| pair_independent(e, f)))
}

/// Subgroupoid freely generated by an ordered, oriented independent edge set.
/// Generator order and orientation fix the chart coordinates.
#[derive(Debug, Clone)]
pub struct TameSubgroupoid {
    generators: Vec<Edge>,
    atom_slots: HashMap<AtomId, (usize, usize)>,
}

impl PartialEq for TameSubgroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for TameSubgroupoid {}

impl std::hash::Hash for TameSubgroupoid {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.generators.hash(state);
    }
}

impl TameSubgroupoid {
    pub fn new(generators: Vec<Edge>) -> Result<TameSubgroupoid> {
        for (i, e) in generators.iter().enumerate() {
            for (j, f) in generators.iter().enumerate().skip(i + 1) {
                if !pair_independent(e, f) {
                    return Err(Error::NotIndependent(format!("generators {i} and {j} intersect")));
                }
            }
        }
        Ok(TameSubgroupoid::from_independent(generators))
    }

    fn from_independent(generators: Vec<Edge>) -> TameSubgroupoid {
        let mut atom_slots = HashMap::new();
        for (k, e) in generators.iter().enumerate() {
            for (q, l) in e.letters().iter().enumerate() {
                atom_slots.insert(l.atom, (k, q));
            }
        }
        TameSubgroupoid { generators, atom_slots }
    }

    pub fn generators(&self) -> &[Edge] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Atoms used by the generators.
    pub fn support(&self) -> BTreeSet<AtomId> {
        self.atom_slots.keys().copied().collect()
    }

    /// Objects of the subgroupoid: the endpoints of its generators.
    pub fn objects(&self) -> BTreeSet<VertexId> {
        self.generators.iter().flat_map(|e| [e.source(), e.target()]).collect()
    }

    /// Same subgroupoid with generator `i` reversed.
    pub fn with_flipped(&self, i: usize) -> TameSubgroupoid {
        let mut gens = self.generators.clone();
        gens[i] = gens[i].inverse();
        TameSubgroupoid::from_independent(gens)
    }

    /// Same subgroupoid with generators reordered: new generator `k` is old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> TameSubgroupoid {
        TameSubgroupoid::from_independent(perm.iter().map(|&k| self.generators[k].clone()).collect())
    }

    /// Subgroupoid generated by the atoms (positively oriented, in id order)
    /// used by any of `levels`; every level is `≤` the result.
    pub fn atomic_refinement(levels: &[&TameSubgroupoid]) -> TameSubgroupoid {
        let mut atoms: Vec<(AtomId, VertexId, VertexId)> = Vec::new();
        for l in levels {
            for e in l.generators() {
                for (k, letter) in e.letters().iter().enumerate() {
                    let (from, to) = (e.vertices[k], e.vertices[k + 1]);
                    let (src, dst) = match letter.sign {
                        Sign::Plus => (from, to),
                        Sign::Minus => (to, from),
                    };
                    atoms.push((letter.atom, src, dst));
                }
            }
        }
        atoms.sort();
        atoms.dedup();
        let gens = atoms
            .into_iter()
            .map(|(a, src, dst)| Edge {
                word: PathWord { source: src, target: dst, letters: vec![Letter::new(a, Sign::Plus)] },
                vertices: vec![src, dst],
            })
            .collect();
        TameSubgroupoid::from_independent(gens)
    }

    /// Whether every generator is a single letter and every atom of the
    /// alphabet is covered.
    pub fn is_atomic_top(&self, alphabet: &Alphabet) -> bool {
        self.generators.iter().all(|e| e.letters().len() == 1)
            && self.atom_slots.len() == alphabet.atom_count()
    }

    /// Writes a reduced word as a travel-ordered product of signed generators.
    pub fn decompose_word(&self, letters: &[Letter]) -> Option<Vec<(usize, Sign)>> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < letters.len() {
            let l = letters[pos];
            let &(k, q) = self.atom_slots.get(&l.atom)?;
            let gen = self.generators[k].letters();
            let g = gen.len();
            if pos + g > letters.len() {
                return None;
            }
            let window = &letters[pos..pos + g];
            if l.sign == gen[q].sign {
                if q != 0 || window != gen {
                    return None;
                }
                out.push((k, Sign::Plus));
            } else {
                if q != g - 1 || window != invert_letters(gen).as_slice() {
                    return None;
                }
                out.push((k, Sign::Minus));
            }
            pos += g;
        }
        Some(out)
    }

    /// Decomposition of a path of the ambient groupoid, if it lies in `self`.
    pub fn decompose_path(&self, p: &PathWord) -> Option<Vec<(usize, Sign)>> {
        if p.is_identity() {
            return self.objects().contains(&p.source()).then(Vec::new);
        }
        self.decompose_word(p.letters())
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self.generators.iter().map(|e| e.word.display(alphabet)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Decomposition of the generators of a coarser subgroupoid `L` over the
/// generators of a finer `L′ ≥ L`: `parts[i]` lists `(r_ij, ε_ij)` in
/// travel order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<Vec<(usize, Sign)>>,
}

impl Decomposition {
    /// Decomposition of `L ≤ L″` obtained by substituting `L′ ≤ L″` into `L ≤ L′`.
    pub fn then(&self, finer: &Decomposition) -> Decomposition {
        let parts = self
            .parts
            .iter()
            .map(|part| {
                let mut word: Vec<(usize, Sign)> = Vec::new();
                for &(j, eps) in part {
                    let sub = &finer.parts[j];
                    let piece: Vec<(usize, Sign)> = match eps {
                        Sign::Plus => sub.clone(),
                        Sign::Minus => sub.iter().rev().map(|&(k, s)| (k, -s)).collect(),
                    };
                    for x in piece {
                        if word.last().is_some_and(|&(k, s)| k == x.0 && s == -x.1) {
                            word.pop();
                        } else {
                            word.push(x);
                        }
                    }
                }
                word
            })
            .collect();
        Decomposition { parts }
    }
}

/// Returns the decomposition when `coarse ≤ fine`, i.e. every generator of
/// `coarse` is a word in the generators of `fine`.
pub fn subgroupoid_leq(coarse: &TameSubgroupoid, fine: &TameSubgroupoid) -> Option<Decomposition> {
    let mut parts = Vec::with_capacity(coarse.len());
    for e in coarse.generators() {
        let part = fine.decompose_word(e.letters())?;
        let mut used = HashSet::new();
        if !part.iter().all(|(k, _)| used.insert(*k)) {
            return None;
        }
        parts.push(part);
    }
    Some(Decomposition { parts })
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Alphabet {
        Alphabet::from_strs(
            &["v0", "v1", "v2", "v3"],
            &[("a", "v0", "v1"), ("b", "v1", "v2"), ("c", "v2", "v3")],
        )
        .unwrap()
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::from_strs(&["x"], &[("a", "x", "y")]).is_err());
        assert!(Alphabet::from_strs(&["x", "x"], &[]).is_err());
        assert!(Alphabet::from_strs(&["x"], &[("a", "x", "x"), ("a", "x", "x")]).is_err());
    }

    #[test]
    fn retracing_cancels_to_identity_at_source() {
        let al = chain();
        let p = al.path(&["a", "~a"]).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.source(), al.vertex_id("v0").unwrap());
    }

    #[test]
    fn stack_cancellation() {
        let al = chain();
        let p = al.path(&["a", "b", "~b", "b", "c"]).unwrap();
        assert_eq!(p, al.path(&["a", "b", "c"]).unwrap());
        let q = al.path(&["a", "b", "~b", "~a", "a"]).unwrap();
        assert_eq!(q, al.path(&["a"]).unwrap());
    }

    #[test]
    fn not_composable() {
        let al = chain();
        assert_eq!(al.path(&["a", "c"]), Err(Error::NotComposable { position: 1 }));
        let v1 = al.vertex_id("v1").unwrap();
        let a = al.parse_letter("a").unwrap();
        assert_eq!(reduce(&al, v1, &[a]), Err(Error::NotComposable { position: 0 }));
    }

    #[test]
    fn composition_concatenates_in_travel_order() {
        let al = chain();
        let a = al.path(&["a"]).unwrap();
        let b = al.path(&["b"]).unwrap();
        assert_eq!(compose_paths(&al, &b, &a).unwrap(), al.path(&["a", "b"]).unwrap());
        assert_eq!(compose_paths(&al, &a, &b), Err(Error::EndpointMismatch));
        let id = PathWord::identity(a.target());
        assert_eq!(compose_paths(&al, &id, &a).unwrap(), a);
        let back = compose_paths(&al, &a.inverse(), &a).unwrap();
        assert_eq!(back, PathWord::identity(a.source()));
    }

    #[test]
    fn edge_simplicity() {
        let al = Alphabet::from_strs(
            &["x", "y", "z"],
            &[("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x"), ("d", "y", "x")],
        )
        .unwrap();
        assert!(al.edge(&["a", "b", "c"]).is_ok());
        assert!(al.edge(&["a", "d"]).is_ok());
        // x -a-> y -d-> x -a... can't repeat atoms; y revisited:
        let e = al.edge(&["a", "b", "c", "a"]);
        assert!(matches!(e, Err(Error::NotAnEdge(_))));
        let e = al.edge(&["a", "d", "a"]);
        assert!(matches!(e, Err(Error::NotAnEdge(_))));
    }

    #[test]
    fn independence_rules() {
        let al = Alphabet::from_strs(
            &["p", "q", "r", "s", "t"],
            &[("a", "p", "q"), ("b", "q", "r"), ("c", "q", "s"), ("d", "s", "t")],
        )
        .unwrap();
        let a = al.edge(&["a"]).unwrap();
        let d = al.edge(&["d"]).unwrap();
        assert!(is_independent(&[a.clone(), d.clone()]));
        assert!(!is_independent(&[a.clone(), a.clone()]));
        // c starts at the interior vertex q of [a, b].
        let ab = al.edge(&["a", "b"]).unwrap();
        let c = al.edge(&["c"]).unwrap();
        assert!(!is_independent(&[ab.clone(), c.clone()]));
        // a and c share only the endpoint q.
        assert!(is_independent(&[a, c]));
    }

    #[test]
    fn leq_examples() {
        let al = chain();
        let ab = TameSubgroupoid::new(vec![al.edge(&["a", "b"]).unwrap()]).unwrap();
        let fine = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap(), al.edge(&["b"]).unwrap()])
            .unwrap();
        let d = subgroupoid_leq(&ab, &fine).unwrap();
        assert_eq!(d.parts, vec![vec![(0, Sign::Plus), (1, Sign::Plus)]]);
        let same = subgroupoid_leq(&fine, &fine).unwrap();
        assert_eq!(same.parts, vec![vec![(0, Sign::Plus)], vec![(1, Sign::Plus)]]);
        let c = TameSubgroupoid::new(vec![al.edge(&["c"]).unwrap()]).unwrap();
        assert!(subgroupoid_leq(&c, &fine).is_none());
        assert!(subgroupoid_leq(&fine, &ab).is_none());

        // Reversed generators decompose with negative signs.
        let flipped = fine.with_flipped(1);
        let d = subgroupoid_leq(&ab, &flipped).unwrap();
        assert_eq!(d.parts, vec![vec![(0, Sign::Plus), (1, Sign::Minus)]]);
        let rev = ab.with_flipped(0);
        let d = subgroupoid_leq(&rev, &fine).unwrap();
        assert_eq!(d.parts, vec![vec![(1, Sign::Minus), (0, Sign::Minus)]]);
    }

    #[test]
    fn partial_word_is_not_decomposable() {
        let al = chain();
        let a = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        let abc = TameSubgroupoid::new(vec![al.edge(&["a", "b", "c"]).unwrap()]).unwrap();
        assert!(subgroupoid_leq(&a, &abc).is_none());
    }

    #[test]
    fn enumerates_chain_edges_and_subgroupoids() {
        let al = chain();
        // a, b, c, ab, bc, abc
        assert_eq!(al.simple_edges().len(), 6);
        let all = al.tame_subgroupoids();
        // independent sets of contiguous segments with disjoint supports
        // whose interiors avoid each other: partitions-of-subsets count.
        assert!(all.iter().all(|l| is_independent(l.generators())));
        assert!(all.contains(&al.top_subgroupoid()));
        let top = al.top_subgroupoid();
        for l in &all {
            assert!(subgroupoid_leq(l, &top).is_some());
        }
    }

    #[test]
    fn triangle_has_closed_edges() {
        let al = Alphabet::from_strs(
            &["x", "y", "z"],
            &[("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")],
        )
        .unwrap();
        let edges = al.simple_edges();
        // 3 atoms, 3 two-letter paths, 3 based loops.
        assert_eq!(edges.len(), 9);
        assert_eq!(edges.iter().filter(|e| e.source() == e.target()).count(), 3);
    }

    #[test]
    fn self_loop_atom_is_one_edge() {
        let al = Alphabet::from_strs(&["x"], &[("a", "x", "x")]).unwrap();
        assert_eq!(al.simple_edges().len(), 1);
        assert_eq!(al.tame_subgroupoids().len(), 1);
    }
}

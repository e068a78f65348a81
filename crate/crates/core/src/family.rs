//! The projective family `{A_L}`: charts, projections between nested
//! subgroupoids, and reconstruction of a connection from a consistent family.
//!
//! Holonomies fold in travel order with later letters multiplied on the
//! left, so that `A(p₂ p₁) = A(p₂) · A(p₁)`.

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::groupoid::{subgroupoid_leq, Alphabet, AtomId, Decomposition, PathWord, Sign, TameSubgroupoid};

/// One group element per generator of a tame subgroupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    group: GroupDescriptor,
    values: Vec<GroupElement>,
}

impl Chart {
    pub fn new(group: GroupDescriptor, values: Vec<GroupElement>) -> Result<Chart> {
        for v in &values {
            group.check_element(v)?;
        }
        Ok(Chart { group, values })
    }

    pub fn identity(group: GroupDescriptor, n: usize) -> Chart {
        Chart { group, values: vec![group.identity(); n] }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn approx_eq(&self, other: &Chart) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| self.group.approx_eq(a, b))
    }

    fn check_arity(&self, l: &TameSubgroupoid) -> Result<()> {
        if self.values.len() != l.len() {
            return Err(Error::ChartArity { expected: l.len(), found: self.values.len() });
        }
        Ok(())
    }

    /// Holonomy of a path of `l` in this chart.
    pub fn evaluate(&self, l: &TameSubgroupoid, p: &PathWord) -> Result<GroupElement> {
        self.check_arity(l)?;
        let word = l.decompose_path(p).ok_or(Error::PathOutsideSubgroupoid)?;
        fold_signed(&self.group, word.iter().map(|&(k, s)| (&self.values[k], s)))
    }

    /// Every chart of `G^n` for a finite group, first slot most significant.
    pub fn enumerate(group: GroupDescriptor, n: usize) -> Result<Vec<Chart>> {
        Ok(product_tuples(&group.enumerate()?, n)
            .into_iter()
            .map(|values| Chart { group, values })
            .collect())
    }
}

/// All `n`-tuples over `elems` in lexicographic order.
pub fn product_tuples(elems: &[GroupElement], n: usize) -> Vec<Vec<GroupElement>> {
    let mut out = Vec::new();
    for_each_tuple(elems, n, |t| {
        out.push(t.to_vec());
        Ok(())
    })
    .expect("infallible visitor");
    out
}

/// Visits every `n`-tuple over `elems` in lexicographic order (last slot
/// fastest) without materializing the product.
pub fn for_each_tuple<F>(elems: &[GroupElement], n: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[GroupElement]) -> Result<()>,
{
    if n == 0 {
        return visit(&[]);
    }
    if elems.is_empty() {
        return Ok(());
    }
    let mut idx = vec![0usize; n];
    let mut tuple = vec![elems[0]; n];
    loop {
        visit(&tuple)?;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elems.len() {
                tuple[k] = elems[idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = elems[0];
        }
    }
}

/// `∏ g_k^{ε_k}` folded in travel order, later factors on the left.
pub(crate) fn fold_signed<'a>(
    group: &GroupDescriptor,
    factors: impl IntoIterator<Item = (&'a GroupElement, Sign)>,
) -> Result<GroupElement> {
    let mut acc = group.identity();
    for (g, s) in factors {
        acc = g.signed(s).compose(&acc)?;
    }
    Ok(acc)
}

/// A morphism from the path groupoid of one alphabet to `G`, given by its
/// values on the atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientConnection {
    group: GroupDescriptor,
    values: Vec<GroupElement>,
}

impl AmbientConnection {
    pub fn new(alphabet: &Alphabet, group: GroupDescriptor, values: Vec<GroupElement>) -> Result<Self> {
        if values.len() != alphabet.atom_count() {
            return Err(Error::ChartArity { expected: alphabet.atom_count(), found: values.len() });
        }
        for v in &values {
            group.check_element(v)?;
        }
        Ok(AmbientConnection { group, values })
    }

    pub fn trivial(alphabet: &Alphabet, group: GroupDescriptor) -> Self {
        AmbientConnection { group, values: vec![group.identity(); alphabet.atom_count()] }
    }

    pub fn haar_random<R: rand::Rng + ?Sized>(
        alphabet: &Alphabet,
        group: GroupDescriptor,
        rng: &mut R,
    ) -> Self {
        let values = (0..alphabet.atom_count()).map(|_| group.haar_sample(rng)).collect();
        AmbientConnection { group, values }
    }

    /// Every connection on the alphabet for a finite group.
    pub fn enumerate(alphabet: &Alphabet, group: GroupDescriptor) -> Result<Vec<Self>> {
        Ok(product_tuples(&group.enumerate()?, alphabet.atom_count())
            .into_iter()
            .map(|values| AmbientConnection { group, values })
            .collect())
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn atom_value(&self, a: AtomId) -> Result<&GroupElement> {
        self.values.get(a.0).ok_or_else(|| Error::UnknownAtom(format!("#{}", a.0)))
    }

    pub fn approx_eq(&self, other: &AmbientConnection) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| self.group.approx_eq(a, b))
    }

    /// Holonomy `A(p)`.
    pub fn evaluate(&self, p: &PathWord) -> Result<GroupElement> {
        let mut acc = self.group.identity();
        for l in p.letters() {
            acc = self.atom_value(l.atom)?.signed(l.sign).compose(&acc)?;
        }
        Ok(acc)
    }

    /// Restriction to `l`, read in the coordinates of its ordered generators.
    pub fn coordinates(&self, l: &TameSubgroupoid) -> Result<Chart> {
        let values = l
            .generators()
            .iter()
            .map(|e| self.evaluate(e.word()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Chart { group: self.group, values })
    }
}

/// Applies the signed-product map `G^m → G^n` given by a decomposition.
pub fn project_with(decomposition: &Decomposition, fine: &Chart) -> Result<Chart> {
    let values = decomposition
        .parts
        .iter()
        .map(|part| fold_signed(&fine.group, part.iter().map(|&(k, s)| (&fine.values[k], s))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Chart { group: fine.group, values })
}

/// Projection `p_{L,L′}: A_{L′} → A_L`.
pub fn project(coarse: &TameSubgroupoid, fine: &TameSubgroupoid, chart: &Chart) -> Result<Chart> {
    chart.check_arity(fine)?;
    let d = subgroupoid_leq(coarse, fine).ok_or(Error::NotComparable)?;
    project_with(&d, chart)
}

/// A preimage of `target` under `p_{L,L′}`.
///
/// Each finer generator occurs at most once in the decomposition of a
/// coarser one and distinct coarse generators use disjoint finer ones, so
/// setting the leftmost factor of every product (the last generator
/// traversed) and leaving the rest at the identity solves all equations at
/// once.
pub fn surjectivity_witness(
    coarse: &TameSubgroupoid,
    fine: &TameSubgroupoid,
    target: &Chart,
) -> Result<Chart> {
    target.check_arity(coarse)?;
    let d = subgroupoid_leq(coarse, fine).ok_or(Error::NotComparable)?;
    let mut out = Chart::identity(target.group, fine.len());
    for (part, h) in d.parts.iter().zip(&target.values) {
        if let Some(&(k, s)) = part.last() {
            out.values[k] = h.signed(s);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction {
    Connection(AmbientConnection),
    /// Indices into the supplied family of a pair `L ≤ L′` whose charts
    /// violate `p_{L,L′}(A_{L′}) = A_L`.
    Inconsistent { coarse: usize, fine: usize },
}

/// Reads a connection off the atomic top level of a family of charts and
/// checks every comparable pair of supplied levels against it.
pub fn reconstruct_from_family(
    alphabet: &Alphabet,
    family: &[(TameSubgroupoid, Chart)],
) -> Result<Reconstruction> {
    let (top, top_chart) =
        family.iter().find(|(l, _)| l.is_atomic_top(alphabet)).ok_or(Error::MissingTop)?;
    top_chart.check_arity(top)?;
    let group = top_chart.group;
    let mut values = vec![group.identity(); alphabet.atom_count()];
    for (e, g) in top.generators().iter().zip(&top_chart.values) {
        let l = e.letters()[0];
        values[l.atom.0] = g.signed(l.sign);
    }
    let conn = AmbientConnection { group, values };

    for (i, (coarse, c_chart)) in family.iter().enumerate() {
        c_chart.check_arity(coarse)?;
        for (j, (fine, f_chart)) in family.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(d) = subgroupoid_leq(coarse, fine) {
                f_chart.check_arity(fine)?;
                if !project_with(&d, f_chart)?.approx_eq(c_chart) {
                    return Ok(Reconstruction::Inconsistent { coarse: i, fine: j });
                }
            }
        }
    }
    Ok(Reconstruction::Connection(conn))
}

//! Character products on independent edges, Wilson loops and Gram matrices.

use rayon::prelude::*;

use crate::cyl::{rewrite_over_paths, CylFunction, Expression};
use crate::error::{Error, Result};
use crate::group::{CharLabel, GroupDescriptor};
use crate::groupoid::{Alphabet, PathWord, TameSubgroupoid};
use crate::measure::{inner_product, IntegralEstimate, MeasureSpec, Method};

/// `Ā ↦ ∏ᵢ χ_{labels[i]}(Ā(eᵢ))` over the generators `eᵢ` of a tame subgroupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinNetworkFunction {
    function: CylFunction,
    labels: Vec<CharLabel>,
}

impl SpinNetworkFunction {
    pub fn function(&self) -> &CylFunction {
        &self.function
    }

    pub fn labels(&self) -> &[CharLabel] {
        &self.labels
    }

    /// Generators carrying a nontrivial label.
    pub fn nontrivial_edges(&self) -> Vec<usize> {
        let kind = self.function.group().kind();
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_trivial(kind))
            .map(|(i, _)| i)
            .collect()
    }
}

impl AsRef<CylFunction> for SpinNetworkFunction {
    fn as_ref(&self) -> &CylFunction {
        &self.function
    }
}

pub fn make_spin_network(
    group: GroupDescriptor,
    label: TameSubgroupoid,
    labels: Vec<CharLabel>,
) -> Result<SpinNetworkFunction> {
    if labels.len() != label.len() {
        return Err(Error::Arity(format!(
            "{} labels for {} generators",
            labels.len(),
            label.len()
        )));
    }
    for l in &labels {
        group.check_label(*l)?;
    }
    let function = CylFunction::new(group, label, Expression::CharProd(labels.clone()))?;
    Ok(SpinNetworkFunction { function, labels })
}

/// `Ā ↦ χ_label(Ā(p))` for a closed path `p`.
pub fn wilson_loop(
    group: GroupDescriptor,
    alphabet: &Alphabet,
    p: &PathWord,
    label: CharLabel,
) -> Result<CylFunction> {
    if !p.is_closed() {
        return Err(Error::NotClosed);
    }
    group.check_label(label)?;
    if p.is_identity() {
        let value = group.character(label, &group.identity())?;
        return Ok(CylFunction::constant(group, TameSubgroupoid::new(Vec::new())?, value));
    }
    rewrite_over_paths(group, alphabet, Expression::CharProd(vec![label]), std::slice::from_ref(p))
}

/// `G[i][j] = ⟨fᵢ, fⱼ⟩` in `L²(μ₀)`. Every entry uses the same method and seed.
pub fn gram_matrix<F>(funcs: &[F], method: Method) -> Result<Vec<Vec<IntegralEstimate>>>
where
    F: AsRef<CylFunction> + Sync,
{
    let n = funcs.len();
    let entries: Vec<Result<IntegralEstimate>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            inner_product(funcs[k / n].as_ref(), funcs[k % n].as_ref(), &MeasureSpec::Uniform, method)
        })
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut it = entries.into_iter();
    for _ in 0..n {
        rows.push(it.by_ref().take(n).collect::<Result<Vec<_>>>()?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::AmbientConnection;
    use crate::group::GroupElement;
    use crate::symmetry::{act_on_function, gauge_act, GaugeTransformation, Transformation};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn triangle() -> Alphabet {
        Alphabet::from_strs(&["x", "y", "z"], &[("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")]).unwrap()
    }

    #[test]
    fn spin_network_values() {
        let al = Alphabet::from_strs(&["p", "q", "r"], &[("a", "p", "q"), ("b", "q", "r")]).unwrap();
        let top = al.top_subgroupoid();
        let u1 = GroupDescriptor::u1();
        let f = make_spin_network(u1, top.clone(), vec![CharLabel(1), CharLabel(2)]).unwrap();
        assert_eq!(f.nontrivial_edges(), vec![0, 1]);
        let (t1, t2) = (0.3, 1.1);
        let conn = AmbientConnection::new(
            &al,
            u1,
            vec![GroupElement::U1 { angle: t1 }, GroupElement::U1 { angle: t2 }],
        )
        .unwrap();
        let v = f.function().eval(&conn).unwrap();
        assert!((v - Complex64::from_polar(1.0, t1 + 2.0 * t2)).norm() < 1e-14);

        let su2 = GroupDescriptor::su2();
        let a = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        let f = make_spin_network(su2, a.clone(), vec![CharLabel::spin(0.5).unwrap()]).unwrap();
        let id = AmbientConnection::trivial(&al, su2);
        assert_eq!(f.function().eval(&id).unwrap(), c(2.0, 0.0));
        let triv = make_spin_network(su2, a.clone(), vec![CharLabel::TRIVIAL]).unwrap();
        assert!(triv.nontrivial_edges().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let conn = AmbientConnection::haar_random(&al, su2, &mut rng);
        assert_eq!(triv.function().eval(&conn).unwrap(), c(1.0, 0.0));

        assert!(matches!(make_spin_network(su2, a.clone(), vec![CharLabel(-1)]), Err(Error::InvalidLabel { .. })));
        assert!(matches!(make_spin_network(su2, a, vec![]), Err(Error::Arity(_))));
    }

    #[test]
    fn wilson_loops() {
        let al = triangle();
        let z5 = GroupDescriptor::cyclic(5).unwrap();
        assert!(matches!(
            wilson_loop(z5, &al, &al.path(&["a", "b"]).unwrap(), CharLabel(1)),
            Err(Error::NotClosed)
        ));
        let loop_ = al.path(&["a", "b", "c"]).unwrap();
        let triv = wilson_loop(z5, &al, &loop_, CharLabel(0)).unwrap();
        let w = wilson_loop(z5, &al, &loop_, CharLabel(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let conn = AmbientConnection::haar_random(&al, z5, &mut rng);
            let g = GaugeTransformation::haar_random(&al, z5, &mut rng);
            assert_eq!(triv.eval(&conn).unwrap(), c(1.0, 0.0));
            let moved = gauge_act(&al, &g, &conn).unwrap();
            assert_eq!(w.eval(&moved).unwrap(), w.eval(&conn).unwrap());
        }

        let one = Alphabet::from_strs(&["o"], &[("l", "o", "o")]).unwrap();
        let l = one.path(&["l"]).unwrap();
        for r in 0..5u32 {
            let conn = AmbientConnection::new(&one, z5, vec![GroupElement::Cyclic { modulus: 5, residue: r }]).unwrap();
            let w = wilson_loop(z5, &one, &l, CharLabel(3)).unwrap();
            let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(3 * r) / 5.0);
            assert!((w.eval(&conn).unwrap() - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn wilson_loop_is_a_gauge_fixed_point_for_su2() {
        let al = triangle();
        let su2 = GroupDescriptor::su2();
        let p = al.path(&["a", "b", "c", "a", "~a"]).unwrap();
        let w = wilson_loop(su2, &al, &p, CharLabel(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = Transformation::Gauge(GaugeTransformation::haar_random(&al, su2, &mut rng));
        let uw = act_on_function(&al, &t, &w).unwrap();
        for _ in 0..20 {
            let conn = AmbientConnection::haar_random(&al, su2, &mut rng);
            assert!((uw.eval(&conn).unwrap() - w.eval(&conn).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn gram_matrices() {
        let al = triangle();
        let a = TameSubgroupoid::new(vec![al.edge(&["a"]).unwrap()]).unwrap();
        let u1 = GroupDescriptor::u1();
        let funcs: Vec<_> = (0..3)
            .map(|n| make_spin_network(u1, a.clone(), vec![CharLabel(n)]).unwrap())
            .collect();
        let g = gram_matrix(&funcs, Method::Exact).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(e.mean, c(if i == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let one = [CylFunction::constant(u1, a, c(1.0, 0.0))];
        assert_eq!(gram_matrix(&one, Method::Exact).unwrap()[0][0].mean, c(1.0, 0.0));
    }
}

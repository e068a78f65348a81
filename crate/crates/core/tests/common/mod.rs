#![allow(dead_code)]

use holonomy_core::{Alphabet, Letter, PathWord, Sign, VertexId};
use proptest::prelude::*;
use rand::Rng;

/// Vertex count and atom endpoints of a random alphabet.
pub fn alphabet_shape(max_atoms: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..=5).prop_flat_map(move |nv| (Just(nv), prop::collection::vec((0..nv, 0..nv), 1..=max_atoms)))
}

pub fn build_alphabet(nv: usize, atoms: &[(usize, usize)]) -> Alphabet {
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    Alphabet::new(
        vertices,
        atoms.iter().enumerate().map(|(i, (s, t))| (format!("a{i}"), format!("v{s}"), format!("v{t}"))),
    )
    .unwrap()
}

/// Random composable letter sequence (not reduced) starting at `start`.
pub fn random_walk<R: Rng>(alphabet: &Alphabet, start: VertexId, len: usize, rng: &mut R) -> Vec<Letter> {
    let mut here = start;
    let mut out = Vec::new();
    for _ in 0..len {
        let options: Vec<Letter> = alphabet
            .atoms()
            .flat_map(|(id, _)| [Letter::new(id, Sign::Plus), Letter::new(id, Sign::Minus)])
            .filter(|l| alphabet.start(*l) == here)
            .collect();
        if options.is_empty() {
            break;
        }
        let l = options[rng.random_range(0..options.len())];
        here = alphabet.end(l);
        out.push(l);
    }
    out
}

pub fn random_path<R: Rng>(alphabet: &Alphabet, start: VertexId, len: usize, rng: &mut R) -> PathWord {
    let letters = random_walk(alphabet, start, len, rng);
    holonomy_core::groupoid::reduce(alphabet, start, &letters).unwrap()
}

pub fn chain3() -> Alphabet {
    Alphabet::from_strs(&["v0", "v1", "v2", "v3"], &[("a", "v0", "v1"), ("b", "v1", "v2"), ("c", "v2", "v3")])
        .unwrap()
}

pub fn triangle() -> Alphabet {
    Alphabet::from_strs(&["x", "y", "z"], &[("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")]).unwrap()
}

pub fn star3() -> Alphabet {
    Alphabet::from_strs(&["o", "p", "q", "r"], &[("a", "o", "p"), ("b", "o", "q"), ("c", "r", "o")]).unwrap()
}

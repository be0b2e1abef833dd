//! 1-cells of the free category with formal adjoints on the 1-skeleton:
//! typed words of 1-generators, each letter carrying a winding number.
//!
//! A letter `(f, n)` with `f : A -> B` is traversed forwards when `n` is even
//! and backwards when `n` is odd, so consecutive letters must chain through
//! their (parity-adjusted) endpoints. Equality of paths is syntactic: a path
//! is its letter list together with its start object.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signature::{Gen0, Gen1, Polygraph};

/// A 1-generator with a winding number, the letters of compact paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen1,
    pub winding: i32,
}

impl Letter {
    pub fn new(gen: Gen1, winding: i32) -> Self {
        Letter { gen, winding }
    }

    /// Endpoints of the letter as an edge: reversed when the winding is odd.
    pub fn endpoints(&self, sig: &Polygraph) -> (Gen0, Gen0) {
        let (a, b) = sig.endpoints1(self.gen);
        if self.winding.rem_euclid(2) == 0 {
            (a, b)
        } else {
            (b, a)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("endpoint mismatch: path ending at {end} cannot continue with one starting at {start}")]
    EndpointMismatch { end: String, start: String },
    #[error("letter {0} does not chain with the previous endpoint")]
    BrokenChain(usize),
}

/// A path in the free category with formal adjoints: a start object and a
/// chained list of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub start: Gen0,
    pub letters: Vec<Letter>,
}

impl Path {
    /// The identity path on an object.
    pub fn id(start: Gen0) -> Self {
        Path { start, letters: Vec::new() }
    }

    /// Builds a path from letters, checking the chaining invariant.
    pub fn from_letters(sig: &Polygraph, start: Gen0, letters: Vec<Letter>) -> Result<Self, PathError> {
        let mut at = start;
        for (i, l) in letters.iter().enumerate() {
            let (a, b) = l.endpoints(sig);
            if a != at {
                return Err(PathError::BrokenChain(i));
            }
            at = b;
        }
        Ok(Path { start, letters })
    }

    /// A winding-free path from plain 1-generators.
    pub fn word(sig: &Polygraph, start: Gen0, gens: &[Gen1]) -> Result<Self, PathError> {
        Self::from_letters(sig, start, gens.iter().map(|&g| Letter::new(g, 0)).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when every winding is zero.
    pub fn is_winding_free(&self) -> bool {
        self.letters.iter().all(|l| l.winding == 0)
    }

    /// Start and end objects of the path.
    pub fn endpoints(&self, sig: &Polygraph) -> (Gen0, Gen0) {
        (self.start, self.end(sig))
    }

    pub fn end(&self, sig: &Polygraph) -> Gen0 {
        self.letters
            .last()
            .map(|_| {
                let mut at = self.start;
                for l in &self.letters {
                    at = l.endpoints(sig).1;
                }
                at
            })
            .unwrap_or(self.start)
    }

    /// Concatenation; the left operand is traversed first.
    pub fn compose(&self, sig: &Polygraph, other: &Path) -> Result<Path, PathError> {
        let end = self.end(sig);
        if end != other.start {
            return Err(PathError::EndpointMismatch {
                end: sig.name0(end).to_string(),
                start: sig.name0(other.start).to_string(),
            });
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(Path { start: self.start, letters })
    }

    /// Formal adjoint: letters reversed, each winding shifted by `shift`.
    ///
    /// `shift` is `+1` or `-1`; `(f (x) g)^±1 = g^±1 (x) f^±1` on letters.
    pub fn adjoint(&self, sig: &Polygraph, shift: i32) -> Path {
        let end = self.end(sig);
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter::new(l.gen, l.winding + shift))
            .collect();
        Path { start: end, letters }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Polygraph;
    use proptest::prelude::*;

    /// The two-object circle A -f-> B -g-> A of the running example.
    fn circle() -> (Polygraph, Gen0, Gen0, Gen1, Gen1) {
        let mut p = Polygraph::new();
        let a = p.add_gen0("A").unwrap();
        let b = p.add_gen0("B").unwrap();
        let f = p.add_gen1("f", a, b).unwrap();
        let g = p.add_gen1("g", b, a).unwrap();
        (p, a, b, f, g)
    }

    #[test]
    fn id_path_is_neutral() {
        let (p, a, _, f, g) = circle();
        let id = Path::id(a);
        let fg = Path::word(&p, a, &[f, g]).unwrap();
        assert_eq!(id.compose(&p, &fg).unwrap(), fg);
        assert_eq!(fg.compose(&p, &Path::id(a)).unwrap(), fg);
        assert_eq!(id.adjoint(&p, 1), id);
    }

    #[test]
    fn compose_requires_chaining() {
        let (p, a, _, f, _) = circle();
        let fp = Path::word(&p, a, &[f]).unwrap();
        // f (x) f does not make sense: f ends at B, starts at A
        assert!(fp.compose(&p, &fp).is_err());
    }

    #[test]
    fn adjoint_reverses_and_shifts() {
        let (p, a, b, f, g) = circle();
        let fg = Path::word(&p, a, &[f, g]).unwrap();
        let adj = fg.adjoint(&p, 1);
        assert_eq!(adj.start, a);
        assert_eq!(adj.letters, vec![Letter::new(g, 1), Letter::new(f, 1)]);
        assert_eq!(adj.endpoints(&p), (a, a));
        // odd winding reverses a single letter
        let f1 = Path::from_letters(&p, b, vec![Letter::new(f, 1)]).unwrap();
        assert_eq!(f1.endpoints(&p), (b, a));
    }

    #[test]
    fn broken_chain_is_rejected() {
        let (p, a, _, f, _) = circle();
        assert_eq!(
            Path::from_letters(&p, a, vec![Letter::new(f, 0), Letter::new(f, 0)]),
            Err(PathError::BrokenChain(1))
        );
    }

    /// Random chained letter lists over the circle signature.
    fn arb_path() -> impl Strategy<Value = (Polygraph, Path)> {
        (any::<u8>(), proptest::collection::vec(any::<i8>(), 0..6)).prop_map(|(startbit, winds)| {
            let (p, a, b, f, g) = circle();
            let mut at = if startbit % 2 == 0 { a } else { b };
            let start = at;
            let mut letters = Vec::new();
            for w in winds {
                let w = (w % 3) as i32;
                // pick whichever letter leaves `at` with this winding
                let cand = [Letter::new(f, w), Letter::new(g, w)];
                let l = cand
                    .iter()
                    .find(|l| l.endpoints(&p).0 == at)
                    .copied()
                    .unwrap();
                at = l.endpoints(&p).1;
                letters.push(l);
            }
            let path = Path::from_letters(&p, start, letters).unwrap();
            (p, path)
        })
    }

    proptest! {
        #[test]
        fn adjoint_is_involutive((p, path) in arb_path()) {
            let back = path.adjoint(&p, 1).adjoint(&p, -1);
            prop_assert_eq!(back, path.clone());
            let swapped = path.adjoint(&p, -1);
            let (s, e) = path.endpoints(&p);
            prop_assert_eq!(swapped.endpoints(&p), (e, s));
        }

        #[test]
        fn compose_is_associative((p, path) in arb_path()) {
            // split the path in three and re-associate
            let n = path.letters.len();
            let (i, j) = (n / 3, 2 * n / 3);
            let mk = |range: std::ops::Range<usize>, start: Gen0| {
                Path::from_letters(&p, start, path.letters[range].to_vec()).unwrap()
            };
            let p1 = mk(0..i, path.start);
            let p2 = mk(i..j, p1.end(&p));
            let p3 = mk(j..n, p2.end(&p));
            let left = p1.compose(&p, &p2).unwrap().compose(&p, &p3).unwrap();
            let right = p1.compose(&p, &p2.compose(&p, &p3).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}

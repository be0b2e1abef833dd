//! The 2-polygraph specialization: typed string rewriting. Words are
//! winding-free paths over the 1-skeleton and the 2-generators play the role
//! of rewriting rules.

use std::collections::BTreeMap;
use std::fmt::Debug;

use thiserror::Error;

use crate::diagram::Diagram;
use crate::path::{Letter, Path};
use crate::signature::{Gen0, Gen1, Gen2, Polygraph};

/// A word: a winding-free path.
pub type Word = Path;

/// One factorization `u = w1 . lhs . w2` rewriting to `w1 . rhs . w2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordStep {
    pub rule: Gen2,
    pub position: usize,
    pub result: Word,
}

fn segment(u: &Word, from: usize, len: usize) -> &[Letter] {
    &u.letters[from..from + len]
}

/// All one-step rewrites of a word under the 2-generators of `sig`.
pub fn word_one_step(sig: &Polygraph, u: &Word) -> Vec<WordStep> {
    let mut out = Vec::new();
    for rule in sig.gens2() {
        let lhs = sig.src2(rule);
        let rhs = sig.tgt2(rule);
        if lhs.len() > u.len() {
            continue;
        }
        for pos in 0..=u.len() - lhs.len() {
            if segment(u, pos, lhs.len()) != lhs.letters.as_slice() {
                continue;
            }
            // typing: the factor must sit at the right object
            let prefix = Path { start: u.start, letters: u.letters[..pos].to_vec() };
            if prefix.end(sig) != lhs.start {
                continue;
            }
            let mut letters = u.letters[..pos].to_vec();
            letters.extend(rhs.letters.iter().cloned());
            letters.extend(u.letters[pos + lhs.len()..].iter().cloned());
            out.push(WordStep {
                rule,
                position: pos,
                result: Word { start: u.start, letters },
            });
        }
    }
    out
}

/// Rewrites to a normal form, fuel-bounded; `None` position order is
/// leftmost-innermost.
pub fn word_normalize(sig: &Polygraph, u: &Word, fuel: u32) -> (Word, bool) {
    let mut w = u.clone();
    for _ in 0..fuel {
        match word_one_step(sig, &w).into_iter().next() {
            None => return (w, true),
            Some(step) => w = step.result,
        }
    }
    let done = word_one_step(sig, &w).is_empty();
    (w, done)
}

/// A critical pair of the string rewriting system: an overlap word with its
/// two one-step reducts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrsCriticalPair {
    pub rule1: Gen2,
    pub rule2: Gen2,
    pub overlap: Word,
    pub reduct1: Word,
    pub reduct2: Word,
}

/// Proper-overlap and containment superpositions of left-hand sides.
pub fn srs_critical_pairs(sig: &Polygraph) -> Vec<SrsCriticalPair> {
    let mut out = Vec::new();
    let rules: Vec<Gen2> = sig.gens2().collect();
    for &r1 in &rules {
        for &r2 in &rules {
            let l1 = sig.src2(r1).clone();
            let l2 = sig.src2(r2).clone();
            // suffix of l1 = prefix of l2, proper on both sides
            for k in 1..l1.len().min(l2.len()) {
                if l1.letters[l1.len() - k..] != l2.letters[..k] {
                    continue;
                }
                let mut letters = l1.letters.clone();
                letters.extend(l2.letters[k..].iter().cloned());
                let overlap = Word { start: l1.start, letters };
                if Path::from_letters(sig, overlap.start, overlap.letters.clone()).is_err() {
                    continue;
                }
                let steps = word_one_step(sig, &overlap);
                let s1 = steps.iter().find(|s| s.rule == r1 && s.position == 0);
                let s2 = steps.iter().find(|s| s.rule == r2 && s.position == l1.len() - k);
                if let (Some(s1), Some(s2)) = (s1, s2) {
                    out.push(SrsCriticalPair {
                        rule1: r1,
                        rule2: r2,
                        overlap,
                        reduct1: s1.result.clone(),
                        reduct2: s2.result.clone(),
                    });
                }
            }
            // containment: l2 strictly inside l1
            if l2.len() < l1.len() {
                for pos in 0..=l1.len() - l2.len() {
                    if l1.letters[pos..pos + l2.len()] != l2.letters[..] {
                        continue;
                    }
                    let overlap = l1.clone();
                    let steps = word_one_step(sig, &overlap);
                    let s1 = steps.iter().find(|s| s.rule == r1 && s.position == 0);
                    let s2 = steps.iter().find(|s| s.rule == r2 && s.position == pos);
                    if let (Some(s1), Some(s2)) = (s1, s2) {
                        out.push(SrsCriticalPair {
                            rule1: r1,
                            rule2: r2,
                            overlap,
                            reduct1: s1.result.clone(),
                            reduct2: s2.result.clone(),
                        });
                    }
                }
            }
        }
    }
    // identical superpositions of a rule with itself at position 0 are not
    // critical pairs; they never arise above because overlaps are proper.
    out
}

/// All words of length at most `max_len` without a redex, by typed
/// enumeration from every object.
pub fn enumerate_normal_forms(sig: &Polygraph, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier: Vec<Word> = sig.gens0().map(Path::id).collect();
    for w in &frontier {
        if word_one_step(sig, w).is_empty() {
            out.push(w.clone());
        }
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let at = w.end(sig);
            for g in sig.gens1() {
                let (a, _) = sig.endpoints1(g);
                if a != at {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(Letter::new(g, 0));
                let u = Word { start: w.start, letters };
                if word_one_step(sig, &u).is_empty() {
                    out.push(u.clone());
                }
                next.push(u);
            }
        }
        frontier = next;
    }
    out
}

/// A finite or user-evaluated target monoid for presentation checking.
pub trait TargetMonoid {
    type Elem: Eq + Ord + Clone + Debug;

    fn unit(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteMonoid {
    pub unit: usize,
    pub table: Vec<Vec<usize>>,
}

impl TargetMonoid for FiniteMonoid {
    type Elem = usize;

    fn unit(&self) -> usize {
        self.unit
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }
}

/// The additive monoid N x Z/2Z.
#[derive(Debug, Clone, Copy, Default)]
pub struct NTimesZ2;

impl TargetMonoid for NTimesZ2 {
    type Elem = (u64, u8);

    fn unit(&self) -> (u64, u8) {
        (0, 0)
    }

    fn mul(&self, a: &(u64, u8), b: &(u64, u8)) -> (u64, u8) {
        (a.0 + b.0, (a.1 + b.1) % 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("rule `{rule}` is not respected by the interpretation")]
    RuleNotRespected { rule: String },
    #[error("two normal forms collide at bound {bound}: {w1} and {w2}")]
    CollisionAtBound { bound: usize, w1: String, w2: String },
    #[error("letter `{0}` has no image")]
    MissingImage(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationReport {
    pub rules_checked: usize,
    pub normal_forms_checked: usize,
}

fn eval<M: TargetMonoid>(
    target: &M,
    images: &BTreeMap<Gen1, M::Elem>,
    w: &Word,
) -> Result<M::Elem, PresentationError> {
    let mut acc = target.unit();
    for l in &w.letters {
        let img = images
            .get(&l.gen)
            .ok_or_else(|| PresentationError::MissingImage(format!("{}", l.gen)))?;
        acc = target.mul(&acc, img);
    }
    Ok(acc)
}

/// Verifies that the interpretation respects every rule and that normal
/// forms up to `bound` map injectively into the target.
pub fn check_presentation<M: TargetMonoid>(
    sig: &Polygraph,
    target: &M,
    images: &BTreeMap<Gen1, M::Elem>,
    bound: usize,
) -> Result<PresentationReport, PresentationError> {
    for rule in sig.gens2() {
        let lv = eval(target, images, sig.src2(rule))?;
        let rv = eval(target, images, sig.tgt2(rule))?;
        if lv != rv {
            return Err(PresentationError::RuleNotRespected {
                rule: sig.name2(rule).to_string(),
            });
        }
    }
    let nfs = enumerate_normal_forms(sig, bound);
    let mut seen: BTreeMap<M::Elem, Word> = BTreeMap::new();
    for w in &nfs {
        let v = eval(target, images, w)?;
        if let Some(prev) = seen.get(&v) {
            return Err(PresentationError::CollisionAtBound {
                bound,
                w1: format!("{:?}", prev.letters),
                w2: format!("{:?}", w.letters),
            });
        }
        seen.insert(v, w.clone());
    }
    Ok(PresentationReport { rules_checked: sig.count(2), normal_forms_checked: nfs.len() })
}

/// Encodes a string rewriting system one dimension up: objects become
/// 1-generators, letters become 2-generators stacked vertically, and the
/// string rules become 3-generators. Word rewriting then agrees with
/// diagram rewriting.
pub fn shift_to_three_polygraph(sig: &Polygraph) -> (Polygraph, BTreeMap<Gen1, Gen2>) {
    let mut p = Polygraph::with_name(&format!("{}-shifted", sig.name()));
    let star = p.add_gen0("*").unwrap();
    let mut obj: BTreeMap<Gen0, Gen1> = BTreeMap::new();
    for o in sig.gens0() {
        obj.insert(o, p.add_gen1(&format!("o_{}", sig.name0(o)), star, star).unwrap());
    }
    let mut letter: BTreeMap<Gen1, Gen2> = BTreeMap::new();
    for g in sig.gens1() {
        let (a, b) = sig.endpoints1(g);
        let src = Path::word(&p, star, &[obj[&a]]).unwrap();
        let tgt = Path::word(&p, star, &[obj[&b]]).unwrap();
        letter.insert(g, p.add_gen2(&format!("l_{}", sig.name1(g)), src, tgt).unwrap());
    }
    let encode = |p: &Polygraph, w: &Word| -> Diagram {
        let mut d = Diagram::identity(&Path::word(p, star, &[obj[&w.start]]).unwrap());
        let mut at = w.start;
        for l in &w.letters {
            let (_, b) = sig.endpoints1(l.gen);
            let g2 = letter[&l.gen];
            let step = Diagram::of_generator(p, g2).unwrap();
            d = d.vcompose(p, &step).unwrap();
            at = b;
        }
        let _ = at;
        d
    };
    for rule in sig.gens2() {
        let lhs = encode(&p, sig.src2(rule));
        let rhs = encode(&p, sig.tgt2(rule));
        let name = format!("r_{}", sig.name2(rule));
        p.add_gen3(&name, lhs, rhs).unwrap();
    }
    (p, letter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rewrite;

    fn nz2() -> Polygraph {
        examples::builtin("srs-nz2").unwrap()
    }

    fn word(sig: &Polygraph, s: &str) -> Word {
        let star = sig.gens0().next().unwrap();
        let gens: Vec<Gen1> = s
            .chars()
            .map(|c| sig.find_gen1(&c.to_string()).unwrap())
            .collect();
        Path::word(sig, star, &gens).unwrap()
    }

    #[test]
    fn one_step_scans_factorizations() {
        let sig = nz2();
        let steps = word_one_step(&sig, &word(&sig, "bab"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].position, 0);
        assert_eq!(steps[0].result, word(&sig, "abb"));
        assert_eq!(word_one_step(&sig, &word(&sig, "bba")).len(), 2);
        let empty = Polygraph::new();
        let mut e = empty;
        let s = e.add_gen0("*").unwrap();
        assert!(word_one_step(&e, &Path::id(s)).is_empty());
    }

    #[test]
    fn nz2_critical_pairs() {
        let sig = nz2();
        let cps = srs_critical_pairs(&sig);
        let overlaps: Vec<String> = cps
            .iter()
            .map(|c| {
                c.overlap
                    .letters
                    .iter()
                    .map(|l| sig.name1(l.gen).to_string())
                    .collect::<String>()
            })
            .collect();
        assert_eq!(cps.len(), 2);
        assert!(overlaps.contains(&"bba".to_string()));
        assert!(overlaps.contains(&"bbb".to_string()));
        // both joinable
        for cp in &cps {
            let (n1, _) = word_normalize(&sig, &cp.reduct1, 50);
            let (n2, _) = word_normalize(&sig, &cp.reduct2, 50);
            assert_eq!(n1, n2);
        }
    }

    #[test]
    fn single_rule_self_overlap() {
        let mut sig = Polygraph::new();
        let star = sig.add_gen0("*").unwrap();
        let a = sig.add_gen1("a", star, star).unwrap();
        let aa = Path::word(&sig, star, &[a, a]).unwrap();
        let one = Path::word(&sig, star, &[a]).unwrap();
        sig.add_gen2("r", aa, one).unwrap();
        let cps = srs_critical_pairs(&sig);
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].overlap.len(), 3);
    }

    #[test]
    fn disjoint_alphabet_no_pairs() {
        let mut sig = Polygraph::new();
        let star = sig.add_gen0("*").unwrap();
        let a = sig.add_gen1("a", star, star).unwrap();
        let b = sig.add_gen1("b", star, star).unwrap();
        let c = sig.add_gen1("c", star, star).unwrap();
        let d = sig.add_gen1("d", star, star).unwrap();
        let wab = Path::word(&sig, star, &[a, b]).unwrap();
        let wcd = Path::word(&sig, star, &[c, d]).unwrap();
        let ea = Path::word(&sig, star, &[a]).unwrap();
        let ec = Path::word(&sig, star, &[c]).unwrap();
        sig.add_gen2("ra", wab, ea).unwrap();
        sig.add_gen2("rb", wcd, ec).unwrap();
        assert!(srs_critical_pairs(&sig).is_empty());
    }

    #[test]
    fn normal_forms_of_nz2() {
        let sig = nz2();
        let nfs = enumerate_normal_forms(&sig, 4);
        let spell = |w: &Word| -> String {
            w.letters.iter().map(|l| sig.name1(l.gen).to_string()).collect()
        };
        let got: Vec<String> = nfs.iter().map(spell).collect();
        let want = ["", "a", "b", "aa", "ab", "aaa", "aab", "aaaa", "aaab"];
        assert_eq!(got.len(), want.len());
        for w in want {
            assert!(got.contains(&w.to_string()), "missing {w:?}");
        }
        assert_eq!(enumerate_normal_forms(&sig, 0).len(), 1);
    }

    #[test]
    fn presentation_of_nz2() {
        let sig = nz2();
        let a = sig.find_gen1("a").unwrap();
        let b = sig.find_gen1("b").unwrap();
        let images: BTreeMap<Gen1, (u64, u8)> = [(a, (1, 0)), (b, (0, 1))].into();
        let report = check_presentation(&sig, &NTimesZ2, &images, 6).unwrap();
        assert_eq!(report.rules_checked, 2);
        // breaking the interpretation breaks a rule
        let bad: BTreeMap<Gen1, (u64, u8)> = [(a, (1, 0)), (b, (1, 1))].into();
        assert!(matches!(
            check_presentation(&sig, &NTimesZ2, &bad, 4),
            Err(PresentationError::RuleNotRespected { .. })
        ));
    }

    #[test]
    fn srs_joinability_agrees_with_polygraph_confluence() {
        let sig = nz2();
        let cps = srs_critical_pairs(&sig);
        assert!(cps.iter().all(|cp| {
            let (n1, _) = word_normalize(&sig, &cp.reduct1, 50);
            let (n2, _) = word_normalize(&sig, &cp.reduct2, 50);
            n1 == n2
        }));
        let (shifted, _) = shift_to_three_polygraph(&sig);
        match rewrite::local_confluence(&shifted, 50, true) {
            rewrite::ConfluenceVerdict::LocallyConfluent { pairs, .. } => assert_eq!(pairs, 2),
            v => panic!("expected local confluence on the shifted system, got {v:?}"),
        }
    }

    #[test]
    fn word_steps_agree_with_diagram_steps() {
        let sig = nz2();
        let (shifted, letter) = shift_to_three_polygraph(&sig);
        for s in ["bab", "bba", "abab", "bbbb", "ab"] {
            let w = word(&sig, s);
            let word_steps = word_one_step(&sig, &w);
            // encode the word and rewrite as a diagram
            let star = shifted.gens0().next().unwrap();
            let obj = shifted.gens1().next().unwrap();
            let mut d = Diagram::identity(&Path::word(&shifted, star, &[obj]).unwrap());
            for l in &w.letters {
                let step = Diagram::of_generator(&shifted, letter[&l.gen]).unwrap();
                d = d.vcompose(&shifted, &step).unwrap();
            }
            let diagram_steps = rewrite::one_step(&shifted, &d);
            assert_eq!(word_steps.len(), diagram_steps.len(), "word {s}");
        }
    }
}

//! The free compact 2-category over the 2-skeleton: units and counits with
//! winding numbers, zig-zag normalization, regularity, rotations and partial
//! composition.
//!
//! The zig-zag laws form a convergent rewriting system: both rules strictly
//! decrease the number of eta/eps nodes, and the two snake overlaps are
//! joinable, so [`zigzag_normalize`] computes a canonical representative.

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, NodeId, NodeLabel, Port};
use crate::path::{Letter, Path};
use crate::signature::{Gen1, Polygraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompactError {
    #[error("empty boundary: {0}")]
    EmptyBoundary(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A zig-zag rule for the 1-cell `f^n`. `L` contracts the left snake to
/// `id(f^{n-1})`, `R` contracts the right snake to `id(f^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZigzagRule {
    pub kind: ZigzagKind,
    pub f: Gen1,
    pub n: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZigzagKind {
    L,
    R,
}

/// Unit `eta_{f^n} : id_B => f^{n-1} (x) f^n` for `f^n : A -> B`.
pub fn eta(sig: &Polygraph, f: Gen1, n: i32) -> Result<Diagram, DiagramError> {
    if f.0 as usize >= sig.count(1) {
        return Err(DiagramError::UnknownGenerator(format!("1-generator {f}")));
    }
    let l_lo = Letter::new(f, n - 1);
    let l_hi = Letter::new(f, n);
    let b = l_hi.endpoints(sig).1;
    let mut d = Diagram::raw(b);
    let w1 = d.fresh_wire(l_lo);
    let w2 = d.fresh_wire(l_hi);
    d.push_node(NodeLabel::Eta(f, n), vec![], vec![w1, w2]);
    d.set_boundary(vec![], vec![w1, w2]);
    Ok(d)
}

/// Counit `eps_{f^n} : f^n (x) f^{n-1} => id_A` for `f^n : A -> B`.
pub fn eps(sig: &Polygraph, f: Gen1, n: i32) -> Result<Diagram, DiagramError> {
    if f.0 as usize >= sig.count(1) {
        return Err(DiagramError::UnknownGenerator(format!("1-generator {f}")));
    }
    let l_hi = Letter::new(f, n);
    let l_lo = Letter::new(f, n - 1);
    let a = l_hi.endpoints(sig).0;
    let mut d = Diagram::raw(a);
    let w1 = d.fresh_wire(l_hi);
    let w2 = d.fresh_wire(l_lo);
    d.push_node(NodeLabel::Eps(f, n), vec![w1, w2], vec![]);
    d.set_boundary(vec![w1, w2], vec![]);
    Ok(d)
}

/// Embedding of a plain 2-cell into the free compact 2-category. The
/// embedding is the identity on the representation; it only checks that the
/// cell really is plain.
pub fn embed(d: &Diagram) -> Result<Diagram, CompactError> {
    if !d.is_plain() || d.has_holes() {
        return Err(CompactError::LabelMismatch(
            "only winding-free, unit-free cells embed".to_string(),
        ));
    }
    Ok(d.clone())
}

/// Contracts zig-zag redexes until none remains. Terminating (each step
/// removes two nodes) and confluent, so the result is canonical up to iso.
pub fn zigzag_normalize(d: &Diagram) -> Diagram {
    let mut d = d.clone();
    loop {
        let wiring = match d.wiring() {
            Ok(w) => w,
            Err(_) => return d,
        };
        let mut redex: Option<(NodeId, NodeId, crate::diagram::WireId, crate::diagram::WireId)> =
            None;
        for w in d.wire_ids().collect::<Vec<_>>() {
            let (p, c) = (wiring.producer[&w], wiring.consumer[&w]);
            if let (Port::Node(e, oi), Port::Node(x, ii)) = (p, c) {
                let (el, xl) = (d.node(e).label, d.node(x).label);
                if let (NodeLabel::Eta(f1, n1), NodeLabel::Eps(f2, n2)) = (el, xl) {
                    if f1 == f2 && n1 == n2 && ((oi == 1 && ii == 0) || (oi == 0 && ii == 1)) {
                        // pass-through ends: the other eta output and eps input
                        let a = d.node(e).outputs[1 - oi];
                        let b = d.node(x).inputs[1 - ii];
                        redex = Some((e, x, w, a));
                        let _ = b;
                        break;
                    }
                }
            }
        }
        match redex {
            None => return d,
            Some((e, x, mid, a)) => {
                // splice: the consumer of `a` now takes the wire entering eps
                let ii = if d.node(x).inputs[0] == mid { 1 } else { 0 };
                let b = d.node(x).inputs[ii];
                d.remove_node(e);
                d.remove_node(x);
                d.replace_consumer(a, b);
                d.remove_wire(mid);
                d.remove_wire(a);
            }
        }
    }
}

/// A compact cell is regular when its boundary is winding-free and its
/// zig-zag normal form contains no unit or counit.
pub fn is_regular(sig: &Polygraph, d: &Diagram) -> bool {
    let boundary_free = d
        .source_wires()
        .iter()
        .chain(d.target_wires())
        .all(|w| d.wire_label(*w).winding == 0);
    let _ = sig;
    boundary_free && !zigzag_normalize(d).contains_units()
}

/// Moves the first source wire `f^n` to the front of the target as
/// `f^{n-1}`, via `(f^{n-1} (x) d) . (eta_{f^n} (x) id)`.
pub fn rotate_left(sig: &Polygraph, d: &Diagram) -> Result<Diagram, CompactError> {
    let &w = d
        .source_wires()
        .first()
        .ok_or_else(|| CompactError::EmptyBoundary("rotate_left needs a source wire".to_string()))?;
    let l = d.wire_label(w);
    let src = d.source_path(sig);
    let rest = Path::from_letters(sig, l.endpoints(sig).1, src.letters[1..].to_vec())
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let step1 = eta(sig, l.gen, l.winding)?.hcompose(sig, &Diagram::identity(&rest))?;
    let lower = Path::from_letters(sig, step1.target_path(sig).start, vec![Letter::new(l.gen, l.winding - 1)])
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let step2 = Diagram::identity(&lower).hcompose(sig, d)?;
    Ok(zigzag_normalize(&step1.vcompose(sig, &step2)?))
}

/// Moves the first target wire `g^n` to the front of the source as
/// `g^{n+1}`; mutually inverse to [`rotate_left`] up to zig-zag equality.
pub fn rotate_right(sig: &Polygraph, d: &Diagram) -> Result<Diagram, CompactError> {
    let &w = d
        .target_wires()
        .first()
        .ok_or_else(|| CompactError::EmptyBoundary("rotate_right needs a target wire".to_string()))?;
    let l = d.wire_label(w);
    let lifted = Letter::new(l.gen, l.winding + 1);
    let pre = Path::from_letters(sig, lifted.endpoints(sig).0, vec![lifted])
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let step1 = Diagram::identity(&pre).hcompose(sig, d)?;
    let tgt = d.target_path(sig);
    let rest = Path::from_letters(sig, l.endpoints(sig).1, tgt.letters[1..].to_vec())
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let step2 = eps(sig, l.gen, l.winding + 1)?.hcompose(sig, &Diagram::identity(&rest))?;
    Ok(zigzag_normalize(&step1.vcompose(sig, &step2)?))
}

/// Moves the last source wire `g^n` to the end of the target as `g^{n+1}`.
pub fn rotate_left_back(sig: &Polygraph, d: &Diagram) -> Result<Diagram, CompactError> {
    let &w = d
        .source_wires()
        .last()
        .ok_or_else(|| CompactError::EmptyBoundary("no source wire".to_string()))?;
    let l = d.wire_label(w);
    let src = d.source_path(sig);
    let rest = Path {
        start: src.start,
        letters: src.letters[..src.letters.len() - 1].to_vec(),
    };
    let step1 = Diagram::identity(&rest).hcompose(sig, &eta(sig, l.gen, l.winding + 1)?)?;
    let lifted = Letter::new(l.gen, l.winding + 1);
    let post = Path::from_letters(sig, lifted.endpoints(sig).0, vec![lifted])
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let step2 = d.hcompose(sig, &Diagram::identity(&post))?;
    Ok(zigzag_normalize(&step1.vcompose(sig, &step2)?))
}

/// Moves the last target wire `g^n` to the end of the source as `g^{n-1}`.
pub fn rotate_right_back(sig: &Polygraph, d: &Diagram) -> Result<Diagram, CompactError> {
    let &w = d
        .target_wires()
        .last()
        .ok_or_else(|| CompactError::EmptyBoundary("no target wire".to_string()))?;
    let l = d.wire_label(w);
    let lowered = Letter::new(l.gen, l.winding - 1);
    let post = Path::from_letters(sig, lowered.endpoints(sig).0, vec![lowered])
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let step1 = d.hcompose(sig, &Diagram::identity(&post))?;
    let tgt = d.target_path(sig);
    let rest = Path {
        start: tgt.start,
        letters: tgt.letters[..tgt.letters.len() - 1].to_vec(),
    };
    let step2 = Diagram::identity(&rest).hcompose(sig, &eps(sig, l.gen, l.winding)?)?;
    Ok(zigzag_normalize(&step1.vcompose(sig, &step2)?))
}

/// Glues `d1` and `d2` along a single wire: position `i` of `d1`'s target
/// against position `j` of `d2`'s source. The remaining boundary of `d2` is
/// bent around with windings -1 (left flank) and +1 (right flank).
pub fn partial_compose(
    sig: &Polygraph,
    d1: &Diagram,
    d2: &Diagram,
    i: usize,
    j: usize,
) -> Result<Diagram, CompactError> {
    let wt = *d1
        .target_wires()
        .get(i)
        .ok_or_else(|| CompactError::EmptyBoundary(format!("no target wire {i}")))?;
    let ws = *d2
        .source_wires()
        .get(j)
        .ok_or_else(|| CompactError::EmptyBoundary(format!("no source wire {j}")))?;
    if d1.wire_label(wt) != d2.wire_label(ws) {
        return Err(CompactError::LabelMismatch(format!(
            "target {i} and source {j} carry different labels"
        )));
    }
    let mut trimmed = d2.clone();
    for _ in 0..j {
        trimmed = rotate_left(sig, &trimmed)?;
    }
    while trimmed.source_wires().len() > 1 {
        trimmed = rotate_left_back(sig, &trimmed)?;
    }
    let tgt1 = d1.target_path(sig);
    let before = Path { start: tgt1.start, letters: tgt1.letters[..i].to_vec() };
    let after_start = trimmed.target_path(sig).end(sig);
    let after = Path::from_letters(sig, after_start, tgt1.letters[i + 1..].to_vec())
        .map_err(|e| CompactError::LabelMismatch(e.to_string()))?;
    let middle = Diagram::identity(&before)
        .hcompose(sig, &trimmed)?
        .hcompose(sig, &Diagram::identity(&after))?;
    Ok(zigzag_normalize(&d1.vcompose(sig, &middle)?))
}

/// Left snake `(f^{n-1} (x) eps) . (eta (x) f^{n-1})`, the lhs of `l_{f^n}`.
pub fn snake_l(sig: &Polygraph, f: Gen1, n: i32) -> Result<Diagram, DiagramError> {
    let lo = Letter::new(f, n - 1);
    let lo_path = Path::from_letters(sig, lo.endpoints(sig).0, vec![lo])
        .map_err(|e| DiagramError::IllFormed(e.to_string()))?;
    let step1 = eta(sig, f, n)?.hcompose(sig, &Diagram::identity(&lo_path))?;
    let step2 = Diagram::identity(&lo_path).hcompose(sig, &eps(sig, f, n)?)?;
    step1.vcompose(sig, &step2)
}

/// Right snake `(eps (x) f^n) . (f^n (x) eta)`, the lhs of `r_{f^n}`.
pub fn snake_r(sig: &Polygraph, f: Gen1, n: i32) -> Result<Diagram, DiagramError> {
    let hi = Letter::new(f, n);
    let hi_path = Path::from_letters(sig, hi.endpoints(sig).0, vec![hi])
        .map_err(|e| DiagramError::IllFormed(e.to_string()))?;
    let step1 = Diagram::identity(&hi_path).hcompose(sig, &eta(sig, f, n)?)?;
    let step2 = eps(sig, f, n)?.hcompose(sig, &Diagram::identity(&hi_path))?;
    step1.vcompose(sig, &step2)
}

impl ZigzagRule {
    pub fn lhs(&self, sig: &Polygraph) -> Result<Diagram, DiagramError> {
        match self.kind {
            ZigzagKind::L => snake_l(sig, self.f, self.n),
            ZigzagKind::R => snake_r(sig, self.f, self.n),
        }
    }

    pub fn rhs(&self, sig: &Polygraph) -> Result<Diagram, DiagramError> {
        let letter = match self.kind {
            ZigzagKind::L => Letter::new(self.f, self.n - 1),
            ZigzagKind::R => Letter::new(self.f, self.n),
        };
        let p = Path::from_letters(sig, letter.endpoints(sig).0, vec![letter])
            .map_err(|e| DiagramError::IllFormed(e.to_string()))?;
        Ok(Diagram::identity(&p))
    }
}

/// The 3-polygraph F of zig-zag rules over the 2-skeleton of `sig`, with
/// windings truncated to `|n| <= bound`. The full system is infinite; the
/// truncation contains every rule that can fire on diagrams whose windings
/// stay within the bound.
pub fn zigzag_polygraph(sig: &Polygraph, bound: i32) -> Polygraph {
    let mut f = sig.truncate(2);
    f.set_name(&format!("{}-zigzag", sig.name()));
    for g in sig.gens1().collect::<Vec<_>>() {
        for n in -bound..=bound {
            for kind in [ZigzagKind::L, ZigzagKind::R] {
                let rule = ZigzagRule { kind, f: g, n };
                let (lhs, rhs) = (rule.lhs(&f).unwrap(), rule.rhs(&f).unwrap());
                let tag = match kind {
                    ZigzagKind::L => "l",
                    ZigzagKind::R => "r",
                };
                f.add_gen3(&format!("{tag}_{}_{n}", sig.name1(g)), lhs, rhs).unwrap();
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn monoid() -> Polygraph {
        examples::builtin("monoid").unwrap()
    }

    #[test]
    fn eta_eps_typing() {
        let sig = monoid();
        let f = sig.gens1().next().unwrap();
        let e = eta(&sig, f, 0).unwrap();
        assert!(e.source_wires().is_empty());
        assert_eq!(
            e.target_path(&sig).letters,
            vec![Letter::new(f, -1), Letter::new(f, 0)]
        );
        let x = eps(&sig, f, 0).unwrap();
        assert_eq!(
            x.source_path(&sig).letters,
            vec![Letter::new(f, 0), Letter::new(f, -1)]
        );
        assert!(x.target_wires().is_empty());
        e.validate(&sig).unwrap();
        x.validate(&sig).unwrap();
    }

    #[test]
    fn snake_normalizes_to_identity() {
        let sig = monoid();
        let f = sig.gens1().next().unwrap();
        for n in [-1, 0, 1, 2] {
            let l = snake_l(&sig, f, n).unwrap();
            let nf = zigzag_normalize(&l);
            let rule = ZigzagRule { kind: ZigzagKind::L, f, n };
            assert!(nf.iso(&rule.rhs(&sig).unwrap()).is_some());
            let r = snake_r(&sig, f, n).unwrap();
            let nf = zigzag_normalize(&r);
            let rule = ZigzagRule { kind: ZigzagKind::R, f, n };
            assert!(nf.iso(&rule.rhs(&sig).unwrap()).is_some());
        }
    }

    #[test]
    fn triple_snake_normalizes() {
        let sig = monoid();
        let f = sig.gens1().next().unwrap();
        // three-fold zig-zag: rotate identity(f) left then right three times
        let one = Letter::new(f, 0);
        let p = Path::from_letters(&sig, one.endpoints(&sig).0, vec![one]).unwrap();
        let mut d = Diagram::identity(&p);
        for _ in 0..3 {
            d = rotate_left(&sig, &d).unwrap();
            d = rotate_right(&sig, &d).unwrap();
        }
        assert!(zigzag_normalize(&d).iso(&Diagram::identity(&p)).is_some());
    }

    #[test]
    fn rotations_are_mutually_inverse() {
        let sig = monoid();
        let mu = sig.find_gen2("mu").unwrap();
        let d = Diagram::of_generator(&sig, mu).unwrap();
        let l = rotate_left(&sig, &d).unwrap();
        assert_eq!(l.source_wires().len(), 1);
        assert_eq!(
            l.target_path(&sig).letters,
            vec![
                Letter::new(sig.gens1().next().unwrap(), -1),
                Letter::new(sig.gens1().next().unwrap(), 0)
            ]
        );
        let back = rotate_right(&sig, &l).unwrap();
        assert!(back.iso(&zigzag_normalize(&d)).is_some());
        let rb = rotate_left_back(&sig, &d).unwrap();
        let back2 = rotate_right_back(&sig, &rb).unwrap();
        assert!(back2.iso(&zigzag_normalize(&d)).is_some());
    }

    #[test]
    fn rotate_identity_gives_unit() {
        let sig = monoid();
        let f = sig.gens1().next().unwrap();
        let one = Letter::new(f, 0);
        let p = Path::from_letters(&sig, one.endpoints(&sig).0, vec![one]).unwrap();
        let d = rotate_left(&sig, &Diagram::identity(&p)).unwrap();
        assert!(d.iso(&eta(&sig, f, 0).unwrap()).is_some());
    }

    #[test]
    fn regularity() {
        let sig = monoid();
        let mu = sig.find_gen2("mu").unwrap();
        let f = sig.gens1().next().unwrap();
        let d = Diagram::of_generator(&sig, mu).unwrap();
        assert!(is_regular(&sig, &embed(&d).unwrap()));
        assert!(!is_regular(&sig, &eta(&sig, f, 0).unwrap()));
        assert!(is_regular(&sig, &zigzag_normalize(&snake_r(&sig, f, 0).unwrap())));
    }

    #[test]
    fn gluing_identity_is_neutral() {
        let sig = monoid();
        let mu = sig.find_gen2("mu").unwrap();
        let d = Diagram::of_generator(&sig, mu).unwrap();
        let f = sig.gens1().next().unwrap();
        let one = Letter::new(f, 0);
        let p = Path::from_letters(&sig, one.endpoints(&sig).0, vec![one]).unwrap();
        let glued = partial_compose(&sig, &d, &Diagram::identity(&p), 0, 0).unwrap();
        assert!(glued.iso(&zigzag_normalize(&d)).is_some());
    }

    #[test]
    fn partial_compose_boundary() {
        // alpha : f => f1 g f2 glued with beta : h1 g h2 => h on g
        let mut sig = Polygraph::new();
        let star = sig.add_gen0("*").unwrap();
        let names = ["f", "f1", "g", "f2", "h1", "h2", "h"];
        let gens: Vec<Gen1> = names.iter().map(|n| sig.add_gen1(n, star, star).unwrap()).collect();
        let [f, f1, g, f2, h1, h2, h] = gens[..] else { unreachable!() };
        let src_a = Path::word(&sig, star, &[f]).unwrap();
        let tgt_a = Path::word(&sig, star, &[f1, g, f2]).unwrap();
        let alpha = sig.add_gen2("alpha", src_a, tgt_a).unwrap();
        let src_b = Path::word(&sig, star, &[h1, g, h2]).unwrap();
        let tgt_b = Path::word(&sig, star, &[h]).unwrap();
        let beta = sig.add_gen2("beta", src_b, tgt_b).unwrap();
        let da = Diagram::of_generator(&sig, alpha).unwrap();
        let db = Diagram::of_generator(&sig, beta).unwrap();
        let glued = partial_compose(&sig, &da, &db, 1, 1).unwrap();
        assert_eq!(glued.source_path(&sig).letters, vec![Letter::new(f, 0)]);
        assert_eq!(
            glued.target_path(&sig).letters,
            vec![
                Letter::new(f1, 0),
                Letter::new(h1, -1),
                Letter::new(h, 0),
                Letter::new(h2, 1),
                Letter::new(f2, 0),
            ]
        );
        let mismatch = partial_compose(&sig, &da, &db, 0, 1);
        assert!(matches!(mismatch, Err(CompactError::LabelMismatch(_))));
    }

    #[test]
    fn zigzag_system_is_size_decreasing() {
        let sig = monoid();
        let f = zigzag_polygraph(&sig, 2);
        assert!(crate::rewrite::size_decreasing_terminating(&f, true));
        assert!(!crate::rewrite::size_decreasing_terminating(&monoid(), false));
    }
}

//! The multicategory of (compact) contexts: diagrams with typed holes, each
//! occurring exactly once, with substitution, pattern matching inside hosts,
//! and the merging operation that creates holes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, HoleId, NodeId, NodeLabel, Port, WireId};
use crate::path::Path;
use crate::signature::Polygraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("no such hole: {0}")]
    NoSuchHole(HoleId),
    #[error("hole type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid context: {0}")]
    Invalid(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The type of a hole: a pair of parallel paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleType {
    pub src: Path,
    pub tgt: Path,
}

impl HoleType {
    pub fn of(d: &Diagram, sig: &Polygraph) -> HoleType {
        HoleType { src: d.source_path(sig), tgt: d.target_path(sig) }
    }
}

/// A diagram with typed holes; the hole list is ordered by creation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub body: Diagram,
    pub holes: Vec<(HoleId, HoleType)>,
}

impl Context {
    /// A hole-free (nullary) context.
    pub fn promote(d: &Diagram) -> Result<Context, ContextError> {
        if d.has_holes() {
            return Err(ContextError::Invalid("diagram contains holes".to_string()));
        }
        Ok(Context { body: d.clone(), holes: Vec::new() })
    }

    /// The identity context on a hole type: a single hole node.
    pub fn identity(t: &HoleType) -> Context {
        let h = HoleId(0);
        let mut d = Diagram::raw(t.src.start);
        let ins: Vec<WireId> = t.src.letters.iter().map(|&l| d.fresh_wire(l)).collect();
        let outs: Vec<WireId> = t.tgt.letters.iter().map(|&l| d.fresh_wire(l)).collect();
        d.push_node(NodeLabel::Hole(h), ins.clone(), outs.clone());
        d.set_boundary(ins, outs);
        Context { body: d, holes: vec![(h, t.clone())] }
    }

    pub fn arity(&self) -> usize {
        self.holes.len()
    }

    pub fn hole_type(&self, h: HoleId) -> Option<&HoleType> {
        self.holes.iter().find(|(id, _)| *id == h).map(|(_, t)| t)
    }

    /// Checks that declared holes occur exactly once with matching wires.
    pub fn validate(&self, sig: &Polygraph) -> Result<(), ContextError> {
        self.body.validate(sig)?;
        let mut seen = BTreeMap::new();
        for n in self.body.node_ids() {
            if let NodeLabel::Hole(h) = self.body.node(n).label {
                if seen.insert(h, n).is_some() {
                    return Err(ContextError::Invalid(format!("hole {h} occurs twice")));
                }
            }
        }
        if seen.len() != self.holes.len() {
            return Err(ContextError::Invalid("hole list does not match body".to_string()));
        }
        for (h, t) in &self.holes {
            let n = *seen.get(h).ok_or(ContextError::NoSuchHole(*h))?;
            let node = self.body.node(n);
            let ins: Vec<_> = node.inputs.iter().map(|w| self.body.wire_label(*w)).collect();
            let outs: Vec<_> = node.outputs.iter().map(|w| self.body.wire_label(*w)).collect();
            if ins != t.src.letters || outs != t.tgt.letters {
                return Err(ContextError::TypeMismatch(format!("hole {h} wires do not match its type")));
            }
        }
        Ok(())
    }

    fn next_free_hole(&self) -> u32 {
        self.holes.iter().map(|(h, _)| h.0 + 1).max().unwrap_or(0)
    }

    /// Renames this context's holes by adding `offset` to every id.
    fn shift_holes(&self, offset: u32) -> Context {
        let mut body = self.body.clone();
        for n in body.node_ids().collect::<Vec<_>>() {
            if let NodeLabel::Hole(h) = body.node(n).label {
                body.node_mut(n).label = NodeLabel::Hole(HoleId(h.0 + offset));
            }
        }
        let holes = self.holes.iter().map(|(h, t)| (HoleId(h.0 + offset), t.clone())).collect();
        Context { body, holes }
    }

    /// Multicategory composition: splices `inner`'s body into the hole `h`.
    pub fn substitute(&self, sig: &Polygraph, h: HoleId, inner: &Context) -> Result<Context, ContextError> {
        let t = self.hole_type(h).ok_or(ContextError::NoSuchHole(h))?.clone();
        let inner = inner.shift_holes(self.next_free_hole());
        if t.src != inner.body.source_path(sig) || t.tgt != inner.body.target_path(sig) {
            return Err(ContextError::TypeMismatch(format!(
                "hole {h} expects {:?} => {:?}",
                t.src.letters, t.tgt.letters
            )));
        }
        let hn = self
            .body
            .hole_node(h)
            .ok_or(ContextError::NoSuchHole(h))?;
        let mut body = self.body.clone();
        let hole = body.remove_node(hn).expect("hole node");
        let mut wire_map: BTreeMap<WireId, WireId> = BTreeMap::new();
        for (i, &w) in inner.body.source_wires().iter().enumerate() {
            wire_map.insert(w, hole.inputs[i]);
        }
        for (j, &w) in inner.body.target_wires().iter().enumerate() {
            match wire_map.get(&w) {
                Some(&a) => {
                    // identity wire of the inner body: fuse the two hole ports
                    let b = hole.outputs[j];
                    body.replace_consumer(b, a);
                    body.remove_wire(b);
                }
                None => {
                    wire_map.insert(w, hole.outputs[j]);
                }
            }
        }
        body.import(&inner.body, &mut wire_map);
        let mut holes: Vec<(HoleId, HoleType)> =
            self.holes.iter().filter(|(id, _)| *id != h).cloned().collect();
        holes.extend(inner.holes.iter().cloned());
        Ok(Context { body, holes })
    }

    /// Fills a hole with a plain diagram.
    pub fn fill(&self, sig: &Polygraph, h: HoleId, d: &Diagram) -> Result<Context, ContextError> {
        self.substitute(sig, h, &Context::promote(d)?)
    }

    /// Fills the first hole with a diagram and returns the resulting cell;
    /// fails unless this makes the context nullary.
    pub fn apply(&self, sig: &Polygraph, d: &Diagram) -> Result<Diagram, ContextError> {
        let (h, _) = *self
            .holes
            .first()
            .ok_or(ContextError::NoSuchHole(HoleId(0)))?;
        let filled = self.fill(sig, h, d)?;
        Ok(filled.body)
    }
}

/// All occurrences of `pattern` inside `host`: unary contexts `K` with
/// `K(pattern)` isomorphic to `host`. Occurrences are label-preserving
/// embeddings whose complement excises as a valid context.
pub fn find_matches(sig: &Polygraph, pattern: &Diagram, host: &Diagram) -> Vec<Context> {
    let mut out: Vec<Context> = Vec::new();
    if pattern.node_count() == 0 {
        // an identity pattern only matches a whole identity host
        if host.iso(pattern).is_some() {
            out.push(Context::identity(&HoleType::of(pattern, sig)));
        }
        return out;
    }
    // cheap pre-filter: every pattern label must occur often enough
    let mut host_counts: BTreeMap<NodeLabel, usize> = BTreeMap::new();
    for n in host.node_ids() {
        *host_counts.entry(host.node(n).label).or_default() += 1;
    }
    let mut pattern_counts: BTreeMap<NodeLabel, usize> = BTreeMap::new();
    for n in pattern.node_ids() {
        *pattern_counts.entry(pattern.node(n).label).or_default() += 1;
    }
    for (label, count) in &pattern_counts {
        if host_counts.get(label).copied().unwrap_or(0) < *count {
            return out;
        }
    }
    let pw = match pattern.wiring() {
        Ok(w) => w,
        Err(_) => return out,
    };
    let hw = match host.wiring() {
        Ok(w) => w,
        Err(_) => return out,
    };
    let pattern_nodes: Vec<NodeId> = pattern.node_ids().collect();
    let mut node_map: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut wire_map: BTreeMap<WireId, WireId> = BTreeMap::new();
    search_embeddings(
        sig,
        pattern,
        host,
        &pw,
        &hw,
        &pattern_nodes,
        &mut node_map,
        &mut wire_map,
        &mut out,
    );
    dedup_contexts(out)
}

#[allow(clippy::too_many_arguments)]
fn search_embeddings(
    sig: &Polygraph,
    pattern: &Diagram,
    host: &Diagram,
    pw: &crate::diagram::Wiring,
    hw: &crate::diagram::Wiring,
    order: &[NodeId],
    node_map: &mut BTreeMap<NodeId, NodeId>,
    wire_map: &mut BTreeMap<WireId, WireId>,
    out: &mut Vec<Context>,
) {
    let next = order.iter().find(|n| !node_map.contains_key(n));
    let pn = match next {
        None => {
            if let Some(k) = excise(sig, pattern, host, node_map, wire_map) {
                out.push(k);
            }
            return;
        }
        Some(&n) => n,
    };
    let pnode = pattern.node(pn);
    'cand: for hn in host.node_ids() {
        if node_map.values().any(|&m| m == hn) {
            continue;
        }
        let hnode = host.node(hn);
        if hnode.label != pnode.label
            || hnode.inputs.len() != pnode.inputs.len()
            || hnode.outputs.len() != pnode.outputs.len()
        {
            continue;
        }
        let mut new_wires: Vec<(WireId, WireId)> = Vec::new();
        for (pwi, hwi) in pnode
            .inputs
            .iter()
            .chain(&pnode.outputs)
            .zip(hnode.inputs.iter().chain(&hnode.outputs))
        {
            if pattern.wire_label(*pwi) != host.wire_label(*hwi) {
                continue 'cand;
            }
            match wire_map.get(pwi) {
                Some(&m) if m != *hwi => continue 'cand,
                Some(_) => {}
                None => {
                    if wire_map.values().any(|&m| m == *hwi) {
                        continue 'cand;
                    }
                    new_wires.push((*pwi, *hwi));
                }
            }
        }
        // internal pattern wires must stay internal with matching ports
        for &(pwi, hwi) in &new_wires {
            for (pend, hend) in [
                (pw.producer[&pwi], hw.producer[&hwi]),
                (pw.consumer[&pwi], hw.consumer[&hwi]),
            ] {
                if let Port::Node(pn2, k) = pend {
                    if let Some(&hn2) = node_map.get(&pn2) {
                        if hend != Port::Node(hn2, k) && pn2 != pn {
                            continue 'cand;
                        }
                    }
                    if pn2 == pn {
                        // port on the node being placed right now
                        if hend != Port::Node(hn, k) {
                            continue 'cand;
                        }
                    }
                }
            }
        }
        node_map.insert(pn, hn);
        for &(a, b) in &new_wires {
            wire_map.insert(a, b);
        }
        search_embeddings(sig, pattern, host, pw, hw, order, node_map, wire_map, out);
        node_map.remove(&pn);
        for &(a, _) in &new_wires {
            wire_map.remove(&a);
        }
    }
}

/// Cuts the image of the pattern out of the host, leaving a hole. Returns
/// the context only when the complement is well-formed and the substitution
/// round-trip reproduces the host.
fn excise(
    sig: &Polygraph,
    pattern: &Diagram,
    host: &Diagram,
    node_map: &BTreeMap<NodeId, NodeId>,
    wire_map: &BTreeMap<WireId, WireId>,
) -> Option<Context> {
    // every internal pattern wire must map to a wire internal to the image:
    // ports of mapped nodes must line up exactly
    let pw = pattern.wiring().ok()?;
    for (pn, hn) in node_map {
        let pnode = pattern.node(*pn);
        let hnode = host.node(*hn);
        for (a, b) in pnode
            .inputs
            .iter()
            .chain(&pnode.outputs)
            .zip(hnode.inputs.iter().chain(&hnode.outputs))
        {
            if wire_map.get(a) != Some(b) {
                return None;
            }
        }
        let _ = &pw;
    }
    let mut body = host.clone();
    for hn in node_map.values() {
        body.remove_node(*hn);
    }
    // wires fully inside the image disappear; boundary wires feed the hole
    let internal: Vec<WireId> = pattern
        .wire_ids()
        .filter(|w| {
            matches!(pw.producer[w], Port::Node(_, _)) && matches!(pw.consumer[w], Port::Node(_, _))
        })
        .collect();
    for w in &internal {
        body.remove_wire(wire_map[w]);
    }
    let h = HoleId(0);
    let ins: Vec<WireId> = pattern.source_wires().iter().map(|w| wire_map[w]).collect();
    let outs: Vec<WireId> = pattern.target_wires().iter().map(|w| wire_map[w]).collect();
    body.push_node(NodeLabel::Hole(h), ins, outs);
    let ctx = Context {
        body,
        holes: vec![(h, HoleType::of(pattern, sig))],
    };
    if ctx.validate(sig).is_err() {
        return None;
    }
    // soundness: replaying the substitution must reproduce the host
    let replay = ctx.apply(sig, pattern).ok()?;
    if replay.iso(host).is_some() {
        Some(ctx)
    } else {
        None
    }
}

fn dedup_contexts(list: Vec<Context>) -> Vec<Context> {
    let mut out: Vec<Context> = Vec::new();
    for c in list {
        if !out.iter().any(|o| o.body.iso(&c.body).is_some()) {
            out.push(c);
        }
    }
    out
}

/// Which boundary a merge operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    Source,
    Target,
}

/// Connects two boundary wires of windings `n+1` and `n` around a fresh
/// hole: on the target side via an eps node (the `g^1 .. g^0` pattern), on
/// the source side via an eta node. The wires strictly between the two
/// become the boundary of the new hole.
pub fn merge(
    sig: &Polygraph,
    ctx: &Context,
    side: BoundarySide,
    i: usize,
    j: usize,
) -> Result<Context, ContextError> {
    if i >= j {
        return Err(ContextError::Invalid("merge positions must be ordered".to_string()));
    }
    let mut body = ctx.body.clone();
    let boundary = match side {
        BoundarySide::Target => body.target_wires().to_vec(),
        BoundarySide::Source => body.source_wires().to_vec(),
    };
    let (w1, w2) = (
        *boundary.get(i).ok_or_else(|| ContextError::Invalid(format!("no boundary wire {i}")))?,
        *boundary.get(j).ok_or_else(|| ContextError::Invalid(format!("no boundary wire {j}")))?,
    );
    let (l1, l2) = (body.wire_label(w1), body.wire_label(w2));
    if l1.gen != l2.gen {
        return Err(ContextError::Invalid(format!(
            "merge needs one generator on both wires, got {} and {}",
            sig.name1(l1.gen),
            sig.name1(l2.gen)
        )));
    }
    let h = HoleId(ctx.next_free_hole());
    let between: Vec<WireId> = boundary[i + 1..j].to_vec();
    let letters: Vec<_> = between.iter().map(|w| body.wire_label(*w)).collect();
    let hole_start = l1.endpoints(sig).1;
    let hole_path = Path::from_letters(sig, hole_start, letters)
        .map_err(|e| ContextError::Invalid(e.to_string()))?;
    let hole_type = match side {
        BoundarySide::Target => {
            // target ... g^{n+1} h g^n ... with the higher winding on the left
            if l1.winding != l2.winding + 1 {
                return Err(ContextError::TypeMismatch(format!(
                    "target merge needs windings n+1,n; got {},{}",
                    l1.winding, l2.winding
                )));
            }
            body.push_node(NodeLabel::Eps(l1.gen, l1.winding), vec![w1, w2], vec![]);
            body.push_node(NodeLabel::Hole(h), between.clone(), vec![]);
            let mut tgt = body.target_wires().to_vec();
            tgt.drain(i..=j);
            let src = body.source_wires().to_vec();
            body.set_boundary(src, tgt);
            HoleType { src: hole_path.clone(), tgt: Path::id(hole_path.end(sig)) }
        }
        BoundarySide::Source => {
            // source ... g^n h g^{n+1} ... with the lower winding on the left
            if l2.winding != l1.winding + 1 {
                return Err(ContextError::TypeMismatch(format!(
                    "source merge needs windings n,n+1; got {},{}",
                    l1.winding, l2.winding
                )));
            }
            body.push_node(NodeLabel::Eta(l2.gen, l2.winding), vec![], vec![w1, w2]);
            body.push_node(NodeLabel::Hole(h), vec![], between.clone());
            let mut src = body.source_wires().to_vec();
            src.drain(i..=j);
            let tgt = body.target_wires().to_vec();
            body.set_boundary(src, tgt);
            HoleType { src: Path::id(hole_path.start), tgt: hole_path.clone() }
        }
    };
    let mut holes = ctx.holes.clone();
    holes.push((h, hole_type));
    let merged = Context { body, holes };
    merged.validate(sig)?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact;
    use crate::examples;
    use crate::path::Letter;

    fn monoid() -> Polygraph {
        examples::builtin("monoid").unwrap()
    }

    #[test]
    fn promote_and_identity_neutrality() {
        let sig = monoid();
        let mu = sig.find_gen2("mu").unwrap();
        let d = Diagram::of_generator(&sig, mu).unwrap();
        let nullary = Context::promote(&d).unwrap();
        assert_eq!(nullary.arity(), 0);
        assert!(matches!(
            nullary.substitute(&sig, HoleId(0), &nullary),
            Err(ContextError::NoSuchHole(_))
        ));
        let id = Context::identity(&HoleType::of(&d, &sig));
        let filled = id.substitute(&sig, id.holes[0].0, &nullary).unwrap();
        assert!(filled.body.iso(&d).is_some());
    }

    #[test]
    fn substitution_hole_arithmetic() {
        let sig = monoid();
        let mu = sig.find_gen2("mu").unwrap();
        let d = Diagram::of_generator(&sig, mu).unwrap();
        let t = HoleType::of(&d, &sig);
        let one_hole = Context::identity(&t);
        // a two-hole context: hole (x) hole over the mu type
        let left = Context::identity(&t);
        let right = Context::identity(&t).shift_holes(1);
        let mut body = left.body.clone();
        let mut wm = BTreeMap::new();
        body.import(&right.body, &mut wm);
        let src = body.source_wires().to_vec();
        let tgt = body.target_wires().to_vec();
        let s2: Vec<WireId> = right.body.source_wires().iter().map(|w| wm[w]).collect();
        let t2: Vec<WireId> = right.body.target_wires().iter().map(|w| wm[w]).collect();
        body.set_boundary(
            src.into_iter().chain(s2).collect(),
            tgt.into_iter().chain(t2).collect(),
        );
        let two_hole = Context {
            body,
            holes: vec![left.holes[0].clone(), right.holes[0].clone()],
        };
        two_hole.validate(&sig).unwrap();
        let spliced = one_hole.substitute(&sig, one_hole.holes[0].0, &two_hole);
        // type mismatch: two-hole context has doubled boundary
        assert!(spliced.is_err());
        let direct = two_hole.substitute(&sig, two_hole.holes[0].0, &one_hole).unwrap();
        assert_eq!(direct.arity(), 2);
    }

    #[test]
    fn match_finds_both_positions() {
        let sig = monoid();
        let lhs = sig.lhs(sig.find_gen3("a").unwrap());
        let host = examples::mu_left_comb(&sig, 4);
        let ms = find_matches(&sig, lhs, &host);
        assert_eq!(ms.len(), 2);
        for k in &ms {
            assert!(k.apply(&sig, lhs).unwrap().iso(&host).is_some());
        }
    }

    #[test]
    fn match_self_includes_identity() {
        let sig = monoid();
        let d = examples::mu_mu_left(&sig);
        let ms = find_matches(&sig, &d, &d);
        assert!(ms.iter().any(|k| k.body.node_count() == 1));
    }

    #[test]
    fn match_label_mismatch() {
        let sig = examples::builtin("symmetry").unwrap();
        let gamma = sig.find_gen2("gamma").unwrap();
        let sig2 = monoid();
        let mu = sig2.find_gen2("mu").unwrap();
        let d1 = Diagram::of_generator(&sig, gamma).unwrap();
        let d2 = Diagram::of_generator(&sig2, mu).unwrap();
        // different signatures entirely: no embedding possible
        assert!(find_matches(&sig, &d1, &d2).is_empty());
    }

    #[test]
    fn merge_creates_hole() {
        // a cell f => g^1 h g^0 (hand-built: declared boundaries are
        // winding-free, compact cells arise by rotation)
        let mut sig = Polygraph::new();
        let star = sig.add_gen0("*").unwrap();
        let f = sig.add_gen1("f", star, star).unwrap();
        let g = sig.add_gen1("g", star, star).unwrap();
        let h = sig.add_gen1("h", star, star).unwrap();
        let mut d = Diagram::raw(star);
        let wf = d.fresh_wire(Letter::new(f, 0));
        let wg1 = d.fresh_wire(Letter::new(g, 1));
        let wh = d.fresh_wire(Letter::new(h, 0));
        let wg0 = d.fresh_wire(Letter::new(g, 0));
        d.push_node(NodeLabel::Hole(HoleId(7)), vec![wf], vec![wg1, wh, wg0]);
        d.set_boundary(vec![wf], vec![wg1, wh, wg0]);
        let ctx = Context {
            body: d,
            holes: vec![(
                HoleId(7),
                HoleType {
                    src: Path::word(&sig, star, &[f]).unwrap(),
                    tgt: Path::from_letters(
                        &sig,
                        star,
                        vec![Letter::new(g, 1), Letter::new(h, 0), Letter::new(g, 0)],
                    )
                    .unwrap(),
                },
            )],
        };
        ctx.validate(&sig).unwrap();
        let merged = merge(&sig, &ctx, BoundarySide::Target, 0, 2).unwrap();
        assert_eq!(merged.arity(), 2);
        let (_, t) = merged.holes.last().unwrap();
        assert_eq!(t.src.letters, vec![Letter::new(h, 0)]);
        assert!(t.tgt.is_empty());
        assert!(merged.body.target_wires().is_empty());
        merged.validate(&sig).unwrap();
        // mismatched generators are rejected
        let bad = merge(&sig, &ctx, BoundarySide::Target, 0, 1);
        assert!(bad.is_err());
    }

    /// Independent completeness oracle: all injective label-preserving node
    /// maps, checked port-by-port, then excised. No propagation pruning.
    fn brute_force_embeddings(sig: &Polygraph, pattern: &Diagram, host: &Diagram) -> usize {
        let pnodes: Vec<NodeId> = pattern.node_ids().collect();
        let hnodes: Vec<NodeId> = host.node_ids().collect();
        let mut count = 0usize;
        let mut assignment: Vec<NodeId> = Vec::new();
        fn rec(
            sig: &Polygraph,
            pattern: &Diagram,
            host: &Diagram,
            pnodes: &[NodeId],
            hnodes: &[NodeId],
            assignment: &mut Vec<NodeId>,
            count: &mut usize,
        ) {
            if assignment.len() == pnodes.len() {
                // check wire consistency of the full map
                let mut wire_map: BTreeMap<WireId, WireId> = BTreeMap::new();
                for (i, &pn) in pnodes.iter().enumerate() {
                    let (p, h) = (pattern.node(pn), host.node(assignment[i]));
                    if p.label != h.label {
                        return;
                    }
                    for (a, b) in p.inputs.iter().zip(&h.inputs).chain(p.outputs.iter().zip(&h.outputs)) {
                        if pattern.wire_label(*a) != host.wire_label(*b) {
                            return;
                        }
                        match wire_map.get(a) {
                            Some(&m) if m != *b => return,
                            Some(_) => {}
                            None => {
                                if wire_map.values().any(|&m| m == *b) {
                                    return;
                                }
                                wire_map.insert(*a, *b);
                            }
                        }
                    }
                }
                // internal pattern wires must be internal in the image
                let pw = pattern.wiring().unwrap();
                let hw = host.wiring().unwrap();
                for (a, b) in &wire_map {
                    for (pe, he) in [(pw.producer[a], hw.producer[b]), (pw.consumer[a], hw.consumer[b])] {
                        if let Port::Node(pn, i) = pe {
                            let idx = pnodes.iter().position(|&n| n == pn).unwrap();
                            if he != Port::Node(assignment[idx], i) {
                                return;
                            }
                        }
                    }
                }
                // complement must excise as a context and replay
                let mut body = host.clone();
                for hn in assignment.iter() {
                    body.remove_node(*hn);
                }
                for (a, b) in &wire_map {
                    if matches!(pw.producer[a], Port::Node(_, _)) && matches!(pw.consumer[a], Port::Node(_, _)) {
                        body.remove_wire(*b);
                    }
                }
                let ins: Vec<WireId> = pattern.source_wires().iter().map(|w| wire_map[w]).collect();
                let outs: Vec<WireId> = pattern.target_wires().iter().map(|w| wire_map[w]).collect();
                body.push_node(NodeLabel::Hole(HoleId(0)), ins, outs);
                let ctx = Context { body, holes: vec![(HoleId(0), HoleType::of(pattern, sig))] };
                if ctx.validate(sig).is_ok() {
                    if let Ok(replay) = ctx.apply(sig, pattern) {
                        if replay.iso(host).is_some() {
                            *count += 1;
                        }
                    }
                }
                return;
            }
            for &hn in hnodes {
                if assignment.contains(&hn) {
                    continue;
                }
                assignment.push(hn);
                rec(sig, pattern, host, pnodes, hnodes, assignment, count);
                assignment.pop();
            }
        }
        rec(sig, pattern, host, &pnodes, &hnodes, &mut assignment, &mut count);
        count
    }

    #[test]
    fn match_complete_against_brute_force() {
        let sig = monoid();
        let mu = sig.find_gen2("mu").unwrap();
        let eta = sig.find_gen2("eta").unwrap();
        let a_lhs = sig.lhs(sig.find_gen3("a").unwrap());
        let l_lhs = sig.lhs(sig.find_gen3("l").unwrap());
        let hosts = vec![
            crate::examples::mu_left_comb(&sig, 4),
            crate::examples::mu_left_comb(&sig, 5),
            a_lhs.clone(),
            l_lhs.clone(),
            a_lhs.hcompose(&sig, l_lhs).unwrap(),
        ];
        let patterns = vec![
            Diagram::of_generator(&sig, mu).unwrap(),
            Diagram::of_generator(&sig, eta).unwrap(),
            a_lhs.clone(),
            l_lhs.clone(),
        ];
        for host in &hosts {
            for pattern in &patterns {
                let fast = find_matches(&sig, pattern, host).len();
                let brute = brute_force_embeddings(&sig, pattern, host);
                assert_eq!(fast, brute, "match count differs from brute force");
            }
        }
    }

    #[test]
    fn substitution_associative() {
        let sig = monoid();
        let a_lhs = sig.lhs(sig.find_gen3("a").unwrap());
        let host = crate::examples::mu_left_comb(&sig, 4);
        for outer in find_matches(&sig, a_lhs, &host) {
            let t = outer.holes[0].1.clone();
            let mid = Context::identity(&t);
            let inner = Context::promote(a_lhs).unwrap();
            let h_outer = outer.holes[0].0;
            // (outer . mid) . inner == outer . (mid . inner)
            let om = outer.substitute(&sig, h_outer, &mid).unwrap();
            let left = om.substitute(&sig, om.holes[0].0, &inner).unwrap();
            let mi = mid.substitute(&sig, mid.holes[0].0, &inner).unwrap();
            let right = outer.substitute(&sig, h_outer, &mi).unwrap();
            assert!(left.body.iso(&right.body).is_some());
        }
    }

    #[test]
    fn hole_permutation_symmetry() {
        // a two-hole context filled in either order gives the same cell
        let sig = monoid();
        let ctx = crate::cli_io::parse_cell(
            &sig,
            "((?x : 1 1 => 1) * (?y : 1 1 => 1)) . mu",
        )
        .unwrap();
        let mu = Diagram::of_generator(&sig, sig.find_gen2("mu").unwrap()).unwrap();
        // a second 2 -> 1 cell distinct from a bare multiplication
        let deeper = crate::cli_io::parse_plain_cell(
            &sig,
            "(id(1) * eta * id(1)) . (mu * id(1)) . mu",
        )
        .unwrap();
        let (hx, hy) = (ctx.holes[0].0, ctx.holes[1].0);
        let one = ctx
            .fill(&sig, hx, &mu)
            .unwrap()
            .fill(&sig, hy, &deeper)
            .unwrap();
        let other = ctx
            .fill(&sig, hy, &deeper)
            .unwrap()
            .fill(&sig, hx, &mu)
            .unwrap();
        assert!(one.body.iso(&other.body).is_some());
    }

    #[test]
    fn merge_then_identity_fill_equals_direct_eps() {
        let sig = monoid();
        let one = sig.gens1().next().unwrap();
        let star = sig.gens0().next().unwrap();
        // identity on 1^1 1^0: merging its two target wires around an empty
        // hole and filling the hole with the empty identity leaves eps
        let p = Path::from_letters(&sig, star, vec![Letter::new(one, 1), Letter::new(one, 0)])
            .unwrap();
        let ctx = Context::promote(&Diagram::identity(&p)).unwrap();
        let merged = merge(&sig, &ctx, BoundarySide::Target, 0, 1).unwrap();
        assert_eq!(merged.arity(), 1);
        let filled = merged
            .fill(&sig, merged.holes[0].0, &Diagram::identity(&Path::id(star)))
            .unwrap();
        let direct = compact::eps(&sig, one, 1).unwrap();
        assert!(compact::zigzag_normalize(&filled.body).iso(&direct).is_some());
    }
}

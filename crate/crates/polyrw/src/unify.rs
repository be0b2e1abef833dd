//! Critical-pair unification in the multicategory of compact contexts.
//!
//! For every ordered pair of rules the algorithm seeds a correspondence
//! between identically-labeled nodes of the two left-hand sides, closes it
//! under the wiring (a shared node forces its neighbours on shared wires),
//! then resolves the remaining boundary wires: each free output of one copy
//! may be left open, glued onto a free input of the other copy, or connected
//! through a fresh hole. Every branch is realized as a planar diagram with
//! both copies embedded; the branch is kept when the overlap and both
//! complements are well-formed and the unifier equation replays.
//!
//! The search is finite: node correspondences are bounded by the sizes of
//! the two left-hand sides, and connections consume boundary classes.

use std::collections::{BTreeMap, BTreeSet};

use crate::context::{Context, ContextError, HoleType};
use crate::diagram::{Diagram, HoleId, IsoWitness, NodeId, NodeLabel, Port, WireId, Wiring};
use crate::path::{Letter, Path};
use crate::signature::{Gen3, Polygraph};

/// A critical pair in compact contexts: two rules with contexts `k1`, `k2`
/// (first hole of each is the rule's) unifying their left-hand sides on the
/// common `overlap` (which still contains the gluing holes, if any).
#[derive(Debug, Clone)]
pub struct CompactCriticalPair {
    pub rule1: Gen3,
    pub rule2: Gen3,
    pub k1: Context,
    pub k2: Context,
    pub overlap: Diagram,
    /// Embedding of each rule's lhs nodes into the overlap.
    pub copy1: BTreeMap<NodeId, NodeId>,
    pub copy2: BTreeMap<NodeId, NodeId>,
}

impl CompactCriticalPair {
    /// Number of gluing holes (the contexts have arity `1 + holes()`).
    pub fn holes(&self) -> usize {
        self.k1.holes.len().saturating_sub(1)
    }

    /// True when the overlap uses no winding and no units.
    pub fn is_regular_shape(&self) -> bool {
        self.overlap.is_plain() && !self.overlap.has_holes()
    }

    /// The two one-step reducts of the overlap, holes left in place.
    pub fn reducts(&self, sig: &Polygraph) -> (Diagram, Diagram) {
        let r1 = self
            .k1
            .fill(sig, self.k1.holes[0].0, sig.rhs(self.rule1))
            .expect("k1 replays")
            .body;
        let r2 = self
            .k2
            .fill(sig, self.k2.holes[0].0, sig.rhs(self.rule2))
            .expect("k2 replays")
            .body;
        (r1, r2)
    }

    /// Re-checks the unifier equation by substitution.
    pub fn verify(&self, sig: &Polygraph) -> bool {
        let a = self.k1.fill(sig, self.k1.holes[0].0, sig.lhs(self.rule1));
        let b = self.k2.fill(sig, self.k2.holes[0].0, sig.lhs(self.rule2));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                a.body.iso(&self.overlap).is_some() && b.body.iso(&self.overlap).is_some()
            }
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Sharings: forced-closure node correspondences
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Sharing {
    nodes: BTreeMap<NodeId, NodeId>,
    wires: BTreeMap<WireId, WireId>,
}

struct LhsPair<'a> {
    l1: &'a Diagram,
    l2: &'a Diagram,
    w1: Wiring,
    w2: Wiring,
}

/// Closes a sharing under the wiring; `None` on conflict.
fn close(p: &LhsPair, mut s: Sharing, seed: (NodeId, NodeId)) -> Option<Sharing> {
    let mut queue = vec![seed];
    while let Some((a, b)) = queue.pop() {
        match s.nodes.get(&a) {
            Some(&m) => {
                if m != b {
                    return None;
                }
                continue;
            }
            None => {
                if s.nodes.values().any(|&m| m == b) {
                    return None;
                }
            }
        }
        let (na, nb) = (p.l1.node(a), p.l2.node(b));
        if na.label != nb.label
            || na.inputs.len() != nb.inputs.len()
            || na.outputs.len() != nb.outputs.len()
        {
            return None;
        }
        s.nodes.insert(a, b);
        for (wa, wb) in na.inputs.iter().zip(&nb.inputs).chain(na.outputs.iter().zip(&nb.outputs)) {
            match s.wires.get(wa) {
                Some(&m) => {
                    if m != *wb {
                        return None;
                    }
                    continue;
                }
                None => {
                    if s.wires.values().any(|&m| m == *wb) {
                        return None;
                    }
                    if p.l1.wire_label(*wa) != p.l2.wire_label(*wb) {
                        return None;
                    }
                    s.wires.insert(*wa, *wb);
                }
            }
            // endpoints force further node pairs when both are nodes
            for (ea, eb) in [
                (p.w1.producer[wa], p.w2.producer[wb]),
                (p.w1.consumer[wa], p.w2.consumer[wb]),
            ] {
                if let (Port::Node(x, i), Port::Node(y, j)) = (ea, eb) {
                    if i != j {
                        return None;
                    }
                    queue.push((x, y));
                }
            }
        }
    }
    Some(s)
}

/// All nonempty closed sharings, deduplicated.
fn all_sharings(p: &LhsPair) -> Vec<Sharing> {
    let mut pairs = Vec::new();
    for a in p.l1.node_ids() {
        for b in p.l2.node_ids() {
            if p.l1.node(a).label == p.l2.node(b).label {
                pairs.push((a, b));
            }
        }
    }
    let mut found: BTreeSet<Sharing> = BTreeSet::new();
    fn extend(
        p: &LhsPair,
        pairs: &[(NodeId, NodeId)],
        s: &Sharing,
        from: usize,
        found: &mut BTreeSet<Sharing>,
    ) {
        for (k, &seed) in pairs.iter().enumerate().skip(from) {
            if s.nodes.get(&seed.0) == Some(&seed.1) {
                continue;
            }
            if let Some(next) = close(p, s.clone(), seed) {
                if found.insert(next.clone()) {
                    extend(p, pairs, &next, k + 1, found);
                }
            }
        }
    }
    extend(p, &pairs, &Sharing::default(), 0, &mut found);
    found.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Amalgam assembly
// ---------------------------------------------------------------------------

/// A wire class of the amalgam, tagged by the copies whose boundary it
/// touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum ClassId {
    One(WireId),
    Two(WireId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Resolution {
    Glue,
    Hole,
}

struct Amalgam<'a> {
    p: &'a LhsPair<'a>,
    sharing: &'a Sharing,
}

impl<'a> Amalgam<'a> {
    fn class_of1(&self, w: WireId) -> ClassId {
        ClassId::One(w)
    }

    fn class_of2(&self, w: WireId) -> ClassId {
        match self.sharing.wires.iter().find(|(_, &m)| m == w) {
            Some((&a, _)) => ClassId::One(a),
            None => ClassId::Two(w),
        }
    }

    fn label(&self, c: ClassId) -> Letter {
        match c {
            ClassId::One(w) => self.p.l1.wire_label(w),
            ClassId::Two(w) => self.p.l2.wire_label(w),
        }
    }

    /// Producing port of a class inside the amalgam, if any.
    fn producer(&self, c: ClassId) -> Option<(bool, NodeId, usize)> {
        match c {
            ClassId::One(w) => match self.p.w1.producer[&w] {
                Port::Node(n, i) => Some((true, n, i)),
                _ => match self.sharing.wires.get(&w) {
                    Some(&w2) => match self.p.w2.producer[&w2] {
                        Port::Node(n, i) => Some((false, n, i)),
                        _ => None,
                    },
                    None => None,
                },
            },
            ClassId::Two(w) => match self.p.w2.producer[&w] {
                Port::Node(n, i) => Some((false, n, i)),
                _ => None,
            },
        }
    }

    fn consumer(&self, c: ClassId) -> Option<(bool, NodeId, usize)> {
        match c {
            ClassId::One(w) => match self.p.w1.consumer[&w] {
                Port::Node(n, i) => Some((true, n, i)),
                _ => match self.sharing.wires.get(&w) {
                    Some(&w2) => match self.p.w2.consumer[&w2] {
                        Port::Node(n, i) => Some((false, n, i)),
                        _ => None,
                    },
                    None => None,
                },
            },
            ClassId::Two(w) => match self.p.w2.consumer[&w] {
                Port::Node(n, i) => Some((false, n, i)),
                _ => None,
            },
        }
    }

    fn touches_target1(&self, c: ClassId) -> bool {
        match c {
            ClassId::One(w) => self.p.l1.target_wires().contains(&w),
            ClassId::Two(_) => false,
        }
    }

    fn touches_target2(&self, c: ClassId) -> bool {
        let w2 = match c {
            ClassId::Two(w) => Some(w),
            ClassId::One(w) => self.sharing.wires.get(&w).copied(),
        };
        w2.map(|w| self.p.l2.target_wires().contains(&w)).unwrap_or(false)
    }

    fn touches_source1(&self, c: ClassId) -> bool {
        match c {
            ClassId::One(w) => self.p.l1.source_wires().contains(&w),
            ClassId::Two(_) => false,
        }
    }

    fn touches_source2(&self, c: ClassId) -> bool {
        let w2 = match c {
            ClassId::Two(w) => Some(w),
            ClassId::One(w) => self.sharing.wires.get(&w).copied(),
        };
        w2.map(|w| self.p.l2.source_wires().contains(&w)).unwrap_or(false)
    }
}

/// Interleavings of two sequences that may share elements; shared elements
/// must be consumed simultaneously.
fn interleavings(seq1: &[ClassId], seq2: &[ClassId]) -> Vec<Vec<ClassId>> {
    fn rec(s1: &[ClassId], s2: &[ClassId], acc: &mut Vec<ClassId>, out: &mut Vec<Vec<ClassId>>) {
        match (s1.first(), s2.first()) {
            (None, None) => out.push(acc.clone()),
            (h1, h2) => {
                if let (Some(&a), Some(&b)) = (h1, h2) {
                    if a == b {
                        acc.push(a);
                        rec(&s1[1..], &s2[1..], acc, out);
                        acc.pop();
                        return;
                    }
                }
                if let Some(&a) = h1 {
                    if !s2.contains(&a) {
                        acc.push(a);
                        rec(&s1[1..], s2, acc, out);
                        acc.pop();
                    }
                }
                if let Some(&b) = h2 {
                    if !s1.contains(&b) {
                        acc.push(b);
                        rec(s1, &s2[1..], acc, out);
                        acc.pop();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(seq1, seq2, &mut Vec::new(), &mut out);
    out
}

struct Realized {
    overlap: Diagram,
    copy1: BTreeMap<NodeId, NodeId>,
    copy2: BTreeMap<NodeId, NodeId>,
    copy1_wires: BTreeMap<WireId, WireId>,
    copy2_wires: BTreeMap<WireId, WireId>,
    hole_types: Vec<(HoleId, HoleType)>,
}

/// Builds the amalgam diagram for a sharing and a set of connections,
/// trying every admissible boundary order.
fn realize(
    sig: &Polygraph,
    am: &Amalgam,
    connections: &[(ClassId, ClassId, Resolution)],
) -> Vec<Realized> {
    let p = am.p;
    // glued classes map to their output-side class representative
    let mut glued_to: BTreeMap<ClassId, ClassId> = BTreeMap::new();
    for (out, inp, res) in connections {
        if *res == Resolution::Glue {
            glued_to.insert(*inp, *out);
        }
    }
    let canon = |c: ClassId| -> ClassId { glued_to.get(&c).copied().unwrap_or(c) };

    // collect all classes
    let mut classes: BTreeSet<ClassId> = BTreeSet::new();
    for w in p.l1.wire_ids() {
        classes.insert(ClassId::One(w));
    }
    for w in p.l2.wire_ids() {
        classes.insert(am.class_of2(w));
    }
    let classes: Vec<ClassId> = classes.into_iter().map(canon).collect::<BTreeSet<_>>().into_iter().collect();

    let mut d = Diagram::raw(p.l1.start());
    let mut wire_of: BTreeMap<ClassId, WireId> = BTreeMap::new();
    for &c in &classes {
        let w = d.fresh_wire(am.label(c));
        wire_of.insert(c, w);
    }
    // nodes of copy 1, then unshared nodes of copy 2
    let mut copy1 = BTreeMap::new();
    let mut copy2 = BTreeMap::new();
    for n in p.l1.node_ids() {
        let node = p.l1.node(n);
        let ins = node.inputs.iter().map(|&w| wire_of[&canon(am.class_of1(w))]).collect();
        let outs = node.outputs.iter().map(|&w| wire_of[&canon(am.class_of1(w))]).collect();
        let id = d.push_node(node.label, ins, outs);
        copy1.insert(n, id);
    }
    for (a, b) in &am.sharing.nodes {
        copy2.insert(*b, copy1[a]);
    }
    for n in p.l2.node_ids() {
        if copy2.contains_key(&n) {
            continue;
        }
        let node = p.l2.node(n);
        let ins = node.inputs.iter().map(|&w| wire_of[&canon(am.class_of2(w))]).collect();
        let outs = node.outputs.iter().map(|&w| wire_of[&canon(am.class_of2(w))]).collect();
        let id = d.push_node(node.label, ins, outs);
        copy2.insert(n, id);
    }
    // hole connections
    let mut hole_types = Vec::new();
    let mut next_hole = 0u32;
    for (out, inp, res) in connections {
        if *res == Resolution::Hole {
            let h = HoleId(next_hole);
            next_hole += 1;
            let win = wire_of[&canon(*out)];
            let wout = wire_of[&canon(*inp)];
            d.push_node(NodeLabel::Hole(h), vec![win], vec![wout]);
            let lin = am.label(*out);
            let lout = am.label(*inp);
            let src = Path::from_letters(sig, lin.endpoints(sig).0, vec![lin]);
            let tgt = Path::from_letters(sig, lout.endpoints(sig).0, vec![lout]);
            match (src, tgt) {
                (Ok(s), Ok(t)) => hole_types.push((h, HoleType { src: s, tgt: t })),
                _ => return Vec::new(),
            }
        }
    }
    // boundary orders
    let produced: BTreeSet<WireId> = d
        .node_ids()
        .flat_map(|n| d.node(n).outputs.clone())
        .collect();
    let consumed: BTreeSet<WireId> = d
        .node_ids()
        .flat_map(|n| d.node(n).inputs.clone())
        .collect();
    let srcseq = |l: &Diagram, f: &dyn Fn(WireId) -> ClassId| -> Vec<ClassId> {
        l.source_wires().iter().map(|&w| canon(f(w))).filter(|c| !produced.contains(&wire_of[c])).collect()
    };
    let tgtseq = |l: &Diagram, f: &dyn Fn(WireId) -> ClassId| -> Vec<ClassId> {
        l.target_wires().iter().map(|&w| canon(f(w))).filter(|c| !consumed.contains(&wire_of[c])).collect()
    };
    let s1 = srcseq(p.l1, &|w| am.class_of1(w));
    let s2 = srcseq(p.l2, &|w| am.class_of2(w));
    let t1 = tgtseq(p.l1, &|w| am.class_of1(w));
    let t2 = tgtseq(p.l2, &|w| am.class_of2(w));
    let mut out = Vec::new();
    for src_order in interleavings(&s1, &s2) {
        for tgt_order in interleavings(&t1, &t2) {
            let mut cand = d.clone();
            let source: Vec<WireId> = src_order.iter().map(|c| wire_of[c]).collect();
            let target: Vec<WireId> = tgt_order.iter().map(|c| wire_of[c]).collect();
            cand.set_boundary(source, target);
            let cand = match fix_start(sig, cand) {
                Some(c) => c,
                None => continue,
            };
            if cand.validate(sig).is_err() {
                continue;
            }
            let copy1_wires: BTreeMap<WireId, WireId> = p
                .l1
                .wire_ids()
                .map(|w| (w, wire_of[&canon(am.class_of1(w))]))
                .collect();
            let copy2_wires: BTreeMap<WireId, WireId> = p
                .l2
                .wire_ids()
                .map(|w| (w, wire_of[&canon(am.class_of2(w))]))
                .collect();
            out.push(Realized {
                overlap: cand,
                copy1: copy1.clone(),
                copy2: copy2.clone(),
                copy1_wires,
                copy2_wires,
                hole_types: hole_types.clone(),
            });
        }
    }
    out
}

/// Recomputes the start object from the boundary.
fn fix_start(sig: &Polygraph, d: Diagram) -> Option<Diagram> {
    let start = if let Some(&w) = d.source_wires().first() {
        d.wire_label(w).endpoints(sig).0
    } else if let Some(&w) = d.target_wires().first() {
        d.wire_label(w).endpoints(sig).0
    } else {
        d.start()
    };
    Some(d.with_start(start))
}

/// Extracts the context `overlap minus copy`: the copy's image is replaced
/// by a hole whose boundary follows the lhs boundary order.
fn excise_copy(
    sig: &Polygraph,
    overlap: &Diagram,
    lhs: &Diagram,
    copy: &BTreeMap<NodeId, NodeId>,
    copy_wires: &BTreeMap<WireId, WireId>,
    gluing_holes: &[(HoleId, HoleType)],
) -> Option<Context> {
    let lw = lhs.wiring().ok()?;
    let mut body = overlap.clone();
    for n in copy.values() {
        body.remove_node(*n)?;
    }
    for w in lhs.wire_ids() {
        if matches!(lw.producer[&w], Port::Node(_, _)) && matches!(lw.consumer[&w], Port::Node(_, _)) {
            body.remove_wire(copy_wires[&w]);
        }
    }
    let fresh = HoleId(gluing_holes.iter().map(|(h, _)| h.0 + 1).max().unwrap_or(0));
    let ins: Vec<WireId> = lhs.source_wires().iter().map(|w| copy_wires[w]).collect();
    let outs: Vec<WireId> = lhs.target_wires().iter().map(|w| copy_wires[w]).collect();
    body.push_node(NodeLabel::Hole(fresh), ins, outs);
    let mut holes = vec![(
        fresh,
        HoleType { src: lhs.source_path(sig), tgt: lhs.target_path(sig) },
    )];
    holes.extend(gluing_holes.iter().cloned());
    let ctx = Context { body, holes };
    ctx.validate(sig).ok()?;
    Some(ctx)
}

// ---------------------------------------------------------------------------
// The main enumeration
// ---------------------------------------------------------------------------

/// The finite set of compact critical pairs of a finite 3-polygraph:
/// complete, deduplicated, deterministic.
pub fn critical_pairs(sig: &Polygraph) -> Vec<CompactCriticalPair> {
    let rules: Vec<Gen3> = sig.gens3().collect();
    let mut out: Vec<CompactCriticalPair> = Vec::new();
    for (i, &r1) in rules.iter().enumerate() {
        for &r2 in &rules[i..] {
            out.extend(critical_pairs_of(sig, r1, r2));
        }
    }
    out
}

/// Critical pairs of one ordered rule pair.
pub fn critical_pairs_of(sig: &Polygraph, r1: Gen3, r2: Gen3) -> Vec<CompactCriticalPair> {
    let l1 = sig.lhs(r1);
    let l2 = sig.lhs(r2);
    let (w1, w2) = match (l1.wiring(), l2.wiring()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Vec::new(),
    };
    let pair = LhsPair { l1, l2, w1, w2 };
    let mut found: Vec<CompactCriticalPair> = Vec::new();
    for sharing in all_sharings(&pair) {
        // the identity overlap of a rule with itself is not a critical pair
        if r1 == r2
            && sharing.nodes.len() == l1.node_count()
            && sharing.nodes.iter().all(|(a, b)| a == b)
        {
            continue;
        }
        let am = Amalgam { p: &pair, sharing: &sharing };
        // boundary classes available for connections
        let mut all_classes: BTreeSet<ClassId> = BTreeSet::new();
        for w in l1.wire_ids() {
            all_classes.insert(ClassId::One(w));
        }
        for w in l2.wire_ids() {
            all_classes.insert(am.class_of2(w));
        }
        let free_outs: Vec<ClassId> = all_classes
            .iter()
            .copied()
            .filter(|&c| am.consumer(c).is_none())
            .collect();
        let free_ins: Vec<ClassId> = all_classes
            .iter()
            .copied()
            .filter(|&c| am.producer(c).is_none())
            .collect();
        // candidate cross connections: an output side of one copy feeding
        // an input side of the other
        let mut cands: Vec<(ClassId, ClassId)> = Vec::new();
        for &o in &free_outs {
            for &i in &free_ins {
                if o == i || am.label(o) != am.label(i) {
                    continue;
                }
                let cross = (am.touches_target1(o) && am.touches_source2(i))
                    || (am.touches_target2(o) && am.touches_source1(i));
                if cross {
                    cands.push((o, i));
                }
            }
        }
        // enumerate partial matchings with a per-edge glue/hole choice
        let mut stack: Vec<(ClassId, ClassId, Resolution)> = Vec::new();
        enumerate_connections(sig, &am, &cands, 0, &mut stack, &mut found, r1, r2);
    }
    let filtered: Vec<CompactCriticalPair> = found
        .into_iter()
        .filter(|u| !is_trivial(u))
        .collect();
    let minimal: Vec<CompactCriticalPair> = filtered
        .iter()
        .filter(|u| is_minimal(sig, u, &filtered))
        .cloned()
        .collect();
    dedup(sig, &minimal)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_connections(
    sig: &Polygraph,
    am: &Amalgam,
    cands: &[(ClassId, ClassId)],
    from: usize,
    stack: &mut Vec<(ClassId, ClassId, Resolution)>,
    found: &mut Vec<CompactCriticalPair>,
    r1: Gen3,
    r2: Gen3,
) {
    // realize the current set of connections
    for realized in realize(sig, am, stack) {
        if let Some(cp) = close_pair(sig, am, &realized, r1, r2) {
            found.push(cp);
        }
    }
    for (k, &(o, i)) in cands.iter().enumerate().skip(from) {
        if stack.iter().any(|&(a, b, _)| a == o || b == i) {
            continue;
        }
        for res in [Resolution::Glue, Resolution::Hole] {
            stack.push((o, i, res));
            enumerate_connections(sig, am, cands, k + 1, stack, found, r1, r2);
            stack.pop();
        }
    }
}

fn close_pair(
    sig: &Polygraph,
    am: &Amalgam,
    realized: &Realized,
    r1: Gen3,
    r2: Gen3,
) -> Option<CompactCriticalPair> {
    let k1 = excise_copy(
        sig,
        &realized.overlap,
        am.p.l1,
        &realized.copy1,
        &realized.copy1_wires,
        &realized.hole_types,
    )?;
    let k2 = excise_copy(
        sig,
        &realized.overlap,
        am.p.l2,
        &realized.copy2,
        &realized.copy2_wires,
        &realized.hole_types,
    )?;
    let cp = CompactCriticalPair {
        rule1: r1,
        rule2: r2,
        k1,
        k2,
        overlap: realized.overlap.clone(),
        copy1: realized.copy1.clone(),
        copy2: realized.copy2.clone(),
    };
    if cp.verify(sig) {
        Some(cp)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

/// A unifier is trivial when the two copies share no node: the rules then
/// apply to disjoint parts and the unifier factors through a binary context.
pub fn is_trivial(u: &CompactCriticalPair) -> bool {
    let image1: BTreeSet<NodeId> = u.copy1.values().copied().collect();
    u.copy2.values().all(|n| !image1.contains(n))
}

/// Minimality against a list: `u` is not minimal when some other unifier
/// embeds into it compatibly with the designated copies, with the remainder
/// excising as outer context material. Invertible contexts in the free
/// setting are exactly the hole-only ones, so any proper remainder
/// disqualifies `u`.
pub fn is_minimal(sig: &Polygraph, u: &CompactCriticalPair, all: &[CompactCriticalPair]) -> bool {
    for other in all {
        if other.rule1 != u.rule1 || other.rule2 != u.rule2 {
            continue;
        }
        if std::ptr::eq(other, u) {
            continue;
        }
        if embeds_properly(sig, other, u) {
            return false;
        }
    }
    true
}

/// Does `small` embed into `big` (designation-compatibly, injectively) with
/// a nonempty remainder?
fn embeds_properly(sig: &Polygraph, small: &CompactCriticalPair, big: &CompactCriticalPair) -> bool {
    let _ = sig;
    // forced node map: designated copies must coincide
    let mut node_map: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (a, s) in &small.copy1 {
        let b = match big.copy1.get(a) {
            Some(&b) => b,
            None => return false,
        };
        if let Some(&prev) = node_map.get(s) {
            if prev != b {
                return false;
            }
        }
        node_map.insert(*s, b);
    }
    for (a, s) in &small.copy2 {
        let b = match big.copy2.get(a) {
            Some(&b) => b,
            None => return false,
        };
        if let Some(&prev) = node_map.get(s) {
            if prev != b {
                return false;
            }
        }
        node_map.insert(*s, b);
    }
    // injectivity
    let images: BTreeSet<NodeId> = node_map.values().copied().collect();
    if images.len() != node_map.len() {
        return false;
    }
    // holes of `small` must map onto holes of `big` consistently; we try
    // the simple positional assignment by wiring
    let (sw, bw) = match (small.overlap.wiring(), big.overlap.wiring()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return false,
    };
    // wire map induced on internal wires; must be injective and consistent
    let mut wire_map: BTreeMap<WireId, WireId> = BTreeMap::new();
    for (s, b) in &node_map {
        let sn = small.overlap.node(*s);
        let bn = big.overlap.node(*b);
        if sn.label != bn.label {
            return false;
        }
        for (ws, wb) in sn.inputs.iter().zip(&bn.inputs).chain(sn.outputs.iter().zip(&bn.outputs)) {
            if let Some(&prev) = wire_map.get(ws) {
                if prev != *wb {
                    return false;
                }
            }
            wire_map.insert(*ws, *wb);
        }
    }
    let wimages: BTreeSet<WireId> = wire_map.values().copied().collect();
    if wimages.len() != wire_map.len() {
        return false;
    }
    // internal wires of `small` must stay identically connected
    for (ws, wb) in &wire_map {
        for (es, eb) in [
            (sw.producer[ws], bw.producer[wb]),
            (sw.consumer[ws], bw.consumer[wb]),
        ] {
            if let Port::Node(ns, i) = es {
                if !matches!(small.overlap.node(ns).label, NodeLabel::Hole(_)) {
                    match node_map.get(&ns) {
                        Some(&nb) => {
                            if eb != Port::Node(nb, i) {
                                return false;
                            }
                        }
                        None => return false,
                    }
                }
            }
        }
    }
    // small's gluing holes must find matching holes in big, wired the same
    for n in small.overlap.node_ids() {
        if let NodeLabel::Hole(_) = small.overlap.node(n).label {
            let sn = small.overlap.node(n);
            let ok = big.overlap.node_ids().any(|m| {
                if !matches!(big.overlap.node(m).label, NodeLabel::Hole(_)) {
                    return false;
                }
                let bn = big.overlap.node(m);
                sn.inputs.len() == bn.inputs.len()
                    && sn.outputs.len() == bn.outputs.len()
                    && sn
                        .inputs
                        .iter()
                        .chain(&sn.outputs)
                        .zip(bn.inputs.iter().chain(&bn.outputs))
                        .all(|(a, b)| wire_map.get(a) == Some(b))
            });
            if !ok {
                return false;
            }
        }
    }
    // proper: the big overlap has strictly more structure
    small.overlap.node_count() < big.overlap.node_count()
        || small.overlap.wire_count() < big.overlap.wire_count()
}

/// Quotients a list of pairs by hole renaming, diagram isomorphism of the
/// overlap compatible with the copy designations, swapped designations for
/// self-pairs, and rotations of the overlap boundary.
pub fn dedup(sig: &Polygraph, pairs: &[CompactCriticalPair]) -> Vec<CompactCriticalPair> {
    let mut out: Vec<CompactCriticalPair> = Vec::new();
    for u in pairs {
        if out.iter().any(|v| equivalent(sig, u, v)) {
            continue;
        }
        out.push(u.clone());
    }
    out
}

fn designation_iso(
    a: &CompactCriticalPair,
    b: &CompactCriticalPair,
    swap: bool,
) -> Option<IsoWitness> {
    let (bc1, bc2) = if swap { (&b.copy2, &b.copy1) } else { (&b.copy1, &b.copy2) };
    let img = |m: &BTreeMap<NodeId, NodeId>| -> BTreeSet<NodeId> { m.values().copied().collect() };
    let (a1, a2, b1, b2) = (img(&a.copy1), img(&a.copy2), img(bc1), img(bc2));
    a.overlap.iso_constrained(&b.overlap, &|x, y| {
        a1.contains(&x) == b1.contains(&y) && a2.contains(&x) == b2.contains(&y)
    })
}

fn equivalent(sig: &Polygraph, a: &CompactCriticalPair, b: &CompactCriticalPair) -> bool {
    if a.rule1 != b.rule1 || a.rule2 != b.rule2 {
        return false;
    }
    if designation_iso(a, b, false).is_some() {
        return true;
    }
    if a.rule1 == a.rule2 && designation_iso(a, b, true).is_some() {
        return true;
    }
    // rotation orbit of the overlap boundary
    for rotated in rotation_orbit(sig, &a.overlap) {
        if rotated.iso(&b.overlap).is_some() && a.holes() == b.holes() {
            return true;
        }
    }
    false
}

/// Rotations of a diagram's boundary: every way of moving a prefix of the
/// source up or a prefix of the target down, zig-zag normalized.
fn rotation_orbit(sig: &Polygraph, d: &Diagram) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut cur = d.clone();
    for _ in 0..d.source_wires().len() {
        match crate::compact::rotate_left(sig, &cur) {
            Ok(next) => {
                out.push(next.clone());
                cur = next;
            }
            Err(_) => break,
        }
    }
    let mut cur = d.clone();
    for _ in 0..d.target_wires().len() {
        match crate::compact::rotate_right(sig, &cur) {
            Ok(next) => {
                out.push(next.clone());
                cur = next;
            }
            Err(_) => break,
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Instantiation and the brute-force oracle
// ---------------------------------------------------------------------------

/// Recovers an ordinary unifier from a compact critical pair: gluing holes
/// are filled with the given cells and the whole is wrapped in an outer
/// regular context.
pub fn instantiate(
    sig: &Polygraph,
    ccp: &CompactCriticalPair,
    fillers: &[Diagram],
    outer: &Context,
) -> Result<(Context, Context), ContextError> {
    if fillers.len() != ccp.holes() {
        return Err(ContextError::TypeMismatch(format!(
            "expected {} fillers, got {}",
            ccp.holes(),
            fillers.len()
        )));
    }
    let mut k1 = ccp.k1.clone();
    let mut k2 = ccp.k2.clone();
    for (f, (h, t)) in fillers.iter().zip(ccp.k1.holes[1..].iter()) {
        if f.source_path(sig) != t.src || f.target_path(sig) != t.tgt {
            return Err(ContextError::TypeMismatch(format!("filler for hole {h} has wrong type")));
        }
        k1 = k1.fill(sig, *h, f)?;
        k2 = k2.fill(sig, *h, f)?;
    }
    if outer.arity() != 1 {
        return Err(ContextError::TypeMismatch("outer context must be unary".to_string()));
    }
    let oh = outer.holes[0].0;
    let k1 = outer.substitute(sig, oh, &k1)?;
    let k2 = outer.substitute(sig, oh, &k2)?;
    Ok((k1, k2))
}

/// A unifier of two plain cells: two unary contexts and their common value.
#[derive(Debug, Clone)]
pub struct RegularUnifier {
    pub k1: Context,
    pub k2: Context,
    pub overlap: Diagram,
    pub image1: BTreeSet<NodeId>,
    pub image2: BTreeSet<NodeId>,
}

impl RegularUnifier {
    pub fn shares_nodes(&self) -> bool {
        self.image1.intersection(&self.image2).next().is_some()
    }

    pub fn is_identity_overlap(&self) -> bool {
        self.image1 == self.image2
            && self.k1.body.node_count() == 1
            && self.k2.body.node_count() == 1
    }
}

/// Image of an occurrence: the host nodes and wires covered by the pattern.
fn occurrence_image(g: &Diagram, k: &Context) -> (BTreeSet<NodeId>, BTreeSet<WireId>) {
    let body_nodes: BTreeSet<NodeId> = k.body.node_ids().collect();
    let nodes: BTreeSet<NodeId> = g.node_ids().filter(|n| !body_nodes.contains(n)).collect();
    let body_wires: BTreeSet<WireId> = k.body.wire_ids().collect();
    let mut wires: BTreeSet<WireId> = g.wire_ids().filter(|w| !body_wires.contains(w)).collect();
    // the hole's boundary wires are shared between image and context
    for n in k.body.node_ids() {
        if matches!(k.body.node(n).label, NodeLabel::Hole(_)) {
            let node = k.body.node(n);
            wires.extend(node.inputs.iter().copied());
            wires.extend(node.outputs.iter().copied());
        }
    }
    (nodes, wires)
}

/// Enumerates every diagram of size at most `max_size` over the signature
/// and collects all occurrence pairs of `d1` and `d2` that jointly cover
/// its nodes and wires. Independent of the unification search; used as its
/// oracle.
pub fn brute_force_unifiers(
    sig: &Polygraph,
    d1: &Diagram,
    d2: &Diagram,
    max_size: usize,
) -> Vec<RegularUnifier> {
    let max_src = d1.source_wires().len() + d2.source_wires().len();
    let mut out: Vec<RegularUnifier> = Vec::new();
    for g in enumerate_diagrams(sig, max_size, max_src) {
        for k1 in crate::context::find_matches(sig, d1, &g) {
            let (image1, wires1) = occurrence_image(&g, &k1);
            for k2 in crate::context::find_matches(sig, d2, &g) {
                let (image2, wires2) = occurrence_image(&g, &k2);
                if image1.union(&image2).count() != g.node_count()
                    || wires1.union(&wires2).count() != g.wire_count()
                {
                    continue;
                }
                let u = RegularUnifier {
                    k1: k1.clone(),
                    k2,
                    overlap: g.clone(),
                    image1: image1.clone(),
                    image2,
                };
                if !out.iter().any(|v| same_unifier(v, &u)) {
                    out.push(u);
                }
            }
        }
    }
    out
}

fn same_unifier(a: &RegularUnifier, b: &RegularUnifier) -> bool {
    a.overlap
        .iso_constrained(&b.overlap, &|x, y| {
            a.image1.contains(&x) == b.image1.contains(&y)
                && a.image2.contains(&x) == b.image2.contains(&y)
        })
        .is_some()
}

/// All plain diagrams over the signature with at most `max_size` generator
/// nodes and at most `max_src` source wires, up to isomorphism, built by
/// stacking layers.
pub fn enumerate_diagrams(sig: &Polygraph, max_size: usize, max_src: usize) -> Vec<Diagram> {
    let mut sources: Vec<Path> = Vec::new();
    let mut frontier: Vec<Path> = sig.gens0().map(Path::id).collect();
    sources.extend(frontier.iter().cloned());
    for _ in 0..max_src {
        let mut next = Vec::new();
        for p in &frontier {
            let at = p.end(sig);
            for g in sig.gens1() {
                if sig.endpoints1(g).0 != at {
                    continue;
                }
                let mut letters = p.letters.clone();
                letters.push(Letter::new(g, 0));
                next.push(Path { start: p.start, letters });
            }
        }
        sources.extend(next.iter().cloned());
        frontier = next;
    }
    let mut all: Vec<Diagram> = Vec::new();
    for src in &sources {
        let mut layer: Vec<Diagram> = vec![Diagram::identity(src)];
        add_unique(&mut all, &layer);
        for _ in 0..max_size {
            let mut next: Vec<Diagram> = Vec::new();
            for d in &layer {
                let tgt = d.target_path(sig);
                for g in sig.gens2() {
                    let k = sig.src2(g).len();
                    if k > tgt.len()
                        && k > 0 {
                            continue;
                        }
                    for pos in 0..=tgt.len().saturating_sub(k) {
                        if tgt.letters[pos..pos + k] != sig.src2(g).letters[..] {
                            continue;
                        }
                        let left = Path { start: tgt.start, letters: tgt.letters[..pos].to_vec() };
                        if left.end(sig) != sig.src2(g).start {
                            continue;
                        }
                        let right_start = sig.src2(g).end(sig);
                        let right = match Path::from_letters(
                            sig,
                            right_start,
                            tgt.letters[pos + k..].to_vec(),
                        ) {
                            Ok(p) => p,
                            Err(_) => continue,
                        };
                        let node = Diagram::of_generator(sig, g).expect("declared");
                        let lay = Diagram::identity(&left)
                            .hcompose(sig, &node)
                            .and_then(|x| x.hcompose(sig, &Diagram::identity(&right)));
                        if let Ok(lay) = lay {
                            if let Ok(bigger) = d.vcompose(sig, &lay) {
                                next.push(bigger);
                            }
                        }
                    }
                }
            }
            let fresh = dedup_diagrams(next);
            add_unique(&mut all, &fresh);
            layer = fresh;
        }
    }
    all
}

fn dedup_diagrams(list: Vec<Diagram>) -> Vec<Diagram> {
    let mut out: Vec<Diagram> = Vec::new();
    for d in list {
        if !out.iter().any(|o| o.iso(&d).is_some()) {
            out.push(d);
        }
    }
    out
}

fn add_unique(all: &mut Vec<Diagram>, fresh: &[Diagram]) {
    for d in fresh {
        if !all.iter().any(|o| o.iso(d).is_some()) {
            all.push(d.clone());
        }
    }
}

/// Fills every gluing hole of every pair with the identity of its type and
/// returns the resulting regular unifiers of overlap size at most
/// `max_size`. Holes without an identity filler are skipped.
pub fn instantiation_closure(
    sig: &Polygraph,
    pairs: &[CompactCriticalPair],
    max_size: usize,
) -> Vec<RegularUnifier> {
    let mut out = Vec::new();
    for cp in pairs {
        let mut k1 = cp.k1.clone();
        let mut k2 = cp.k2.clone();
        let mut ok = true;
        for (h, t) in cp.k1.holes[1..].iter() {
            if t.src != t.tgt {
                ok = false;
                break;
            }
            let id = Diagram::identity(&t.src);
            match (k1.fill(sig, *h, &id), k2.fill(sig, *h, &id)) {
                (Ok(a), Ok(b)) => {
                    k1 = a;
                    k2 = b;
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let overlap = match k1.apply(sig, sig.lhs(cp.rule1)) {
            Ok(o) => o,
            Err(_) => continue,
        };
        if overlap.size() > max_size {
            continue;
        }
        // recover the images by matching the filled contexts back
        let image = |k: &Context, lhs: &Diagram| -> Option<(Context, BTreeSet<NodeId>)> {
            let full = k.apply(sig, lhs).ok()?;
            let ms = crate::context::find_matches(sig, lhs, &full);
            for m in ms {
                let body: BTreeSet<NodeId> = m.body.node_ids().collect();
                let img: BTreeSet<NodeId> = full.node_ids().filter(|n| !body.contains(n)).collect();
                if m.body.iso(&k.body).is_some() {
                    return Some((m, img));
                }
            }
            None
        };
        // both images must live in one and the same overlap diagram
        let full = overlap.clone();
        let (m1, img1) = match image(&k1, sig.lhs(cp.rule1)) {
            Some(x) => x,
            None => continue,
        };
        // align k2's value onto `full` via iso
        let val2 = match k2.apply(sig, sig.lhs(cp.rule2)) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let witness = match val2.iso(&full) {
            Some(w) => w,
            None => continue,
        };
        let (m2v, img2v) = match image(&k2, sig.lhs(cp.rule2)) {
            Some(x) => x,
            None => continue,
        };
        let img2: BTreeSet<NodeId> = img2v.iter().map(|n| witness.nodes[n]).collect();
        let u = RegularUnifier {
            k1: m1,
            k2: m2v,
            overlap: full,
            image1: img1,
            image2: img2,
        };
        if !out.iter().any(|v| same_unifier(v, &u)) {
            out.push(u);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn monoid_has_five_pairs() {
        let sig = examples::builtin("monoid").unwrap();
        let pairs = critical_pairs(&sig);
        assert_eq!(pairs.len(), 5);
        for cp in &pairs {
            assert!(cp.verify(&sig));
            assert_eq!(cp.holes(), 0);
            assert!(cp.is_regular_shape());
        }
    }

    #[test]
    fn symmetry_is_finite_and_has_the_holed_pair() {
        let sig = examples::builtin("symmetry").unwrap();
        let pairs = critical_pairs(&sig);
        assert!(!pairs.is_empty());
        assert!(pairs.iter().any(|cp| cp.holes() > 0));
        for cp in &pairs {
            assert!(cp.verify(&sig));
        }
    }

    #[test]
    fn trivial_detection() {
        let sig = examples::builtin("monoid").unwrap();
        let pairs = critical_pairs(&sig);
        for cp in &pairs {
            assert!(!is_trivial(cp));
        }
    }

    #[test]
    fn brute_force_small_monoid() {
        let sig = examples::builtin("monoid").unwrap();
        let a = sig.find_gen3("a").unwrap();
        let l = sig.find_gen3("l").unwrap();
        let unifiers = brute_force_unifiers(&sig, sig.lhs(a), sig.lhs(l), 3);
        // one genuine overlap: mu(mu(eta, x), y)
        let genuine: Vec<_> = unifiers.iter().filter(|u| u.shares_nodes()).collect();
        assert_eq!(genuine.len(), 1);
    }

    #[test]
    fn instantiate_identity_outer() {
        let sig = examples::builtin("monoid").unwrap();
        let pairs = critical_pairs(&sig);
        let cp = &pairs[0];
        let outer = Context::identity(&HoleType::of(&cp.overlap, &sig));
        let (k1, k2) = instantiate(&sig, cp, &[], &outer).unwrap();
        let v1 = k1.apply(&sig, sig.lhs(cp.rule1)).unwrap();
        let v2 = k2.apply(&sig, sig.lhs(cp.rule2)).unwrap();
        assert!(v1.iso(&v2).is_some());
        assert!(v1.iso(&cp.overlap).is_some());
    }

    #[test]
    fn wrong_filler_type_rejected() {
        let sig = examples::builtin("symmetry").unwrap();
        let pairs = critical_pairs(&sig);
        let holed = pairs.iter().find(|cp| cp.holes() == 1).expect("holed pair");
        let outer = Context::identity(&HoleType::of(&holed.overlap, &sig));
        let gamma = Diagram::of_generator(&sig, sig.find_gen2("gamma").unwrap()).unwrap();
        assert!(instantiate(&sig, holed, &[gamma], &outer).is_err());
        assert!(instantiate(&sig, holed, &[], &outer).is_err());
    }

    /// Filling the holed Yang-Baxter pair with a single identity wire gives
    /// the smallest member of the infinite family: the plain braid overlap.
    #[test]
    fn holed_pair_instantiates_to_braid() {
        let sig = examples::builtin("symmetry").unwrap();
        let pairs = critical_pairs(&sig);
        let holed = pairs.iter().find(|cp| cp.holes() == 1).expect("holed pair");
        let braid = pairs
            .iter()
            .find(|cp| cp.holes() == 0 && cp.overlap.size() == 5)
            .expect("plain braid pair");
        let (_, t) = &holed.k1.holes[1];
        let outer = {
            let filled = holed
                .k1
                .fill(&sig, holed.k1.holes[1].0, &Diagram::identity(&t.src))
                .unwrap()
                .apply(&sig, sig.lhs(holed.rule1))
                .unwrap();
            Context::identity(&HoleType::of(&filled, &sig))
        };
        let (k1, _) = instantiate(&sig, holed, &[Diagram::identity(&t.src)], &outer).unwrap();
        let instance = k1.apply(&sig, sig.lhs(holed.rule1)).unwrap();
        assert!(instance.iso(&braid.overlap).is_some());
    }

    /// A side-by-side placement of two left-hand sides shares no node and
    /// is trivial.
    #[test]
    fn side_by_side_is_trivial() {
        let sig = examples::builtin("monoid").unwrap();
        let l = sig.find_gen3("l").unwrap();
        let r = sig.find_gen3("r").unwrap();
        let overlap = sig.lhs(l).hcompose(&sig, sig.lhs(r)).unwrap();
        let k1 = crate::context::find_matches(&sig, sig.lhs(l), &overlap)
            .into_iter()
            .next()
            .unwrap();
        let k2 = crate::context::find_matches(&sig, sig.lhs(r), &overlap)
            .into_iter()
            .next()
            .unwrap();
        let copies = |k: &Context, lhs: &Diagram| -> BTreeMap<NodeId, NodeId> {
            let body: BTreeSet<NodeId> = k.body.node_ids().collect();
            let image: Vec<NodeId> = overlap.node_ids().filter(|n| !body.contains(n)).collect();
            // the two lhs nodes have distinct labels; map by label
            lhs.node_ids()
                .map(|a| {
                    let lab = lhs.node(a).label;
                    let b = image
                        .iter()
                        .find(|n| overlap.node(**n).label == lab)
                        .copied()
                        .unwrap();
                    (a, b)
                })
                .collect()
        };
        let u = CompactCriticalPair {
            rule1: l,
            rule2: r,
            copy1: copies(&k1, sig.lhs(l)),
            copy2: copies(&k2, sig.lhs(r)),
            k1,
            k2,
            overlap,
        };
        assert!(u.verify(&sig));
        assert!(is_trivial(&u));
    }

    /// Padding a unifier with an extra multiplication makes it non-minimal.
    #[test]
    fn padded_unifier_not_minimal() {
        let sig = examples::builtin("monoid").unwrap();
        let l = sig.find_gen3("l").unwrap();
        let r = sig.find_gen3("r").unwrap();
        let pairs = critical_pairs_of(&sig, l, r);
        assert_eq!(pairs.len(), 1);
        let cp5 = &pairs[0];
        // wrap the eta-eta overlap in mu . (hole (x) id)
        let one = sig.gens1().next().unwrap();
        let star = sig.gens0().next().unwrap();
        let outer_body = crate::cli_io::parse_cell(
            &sig,
            "((?x : id(*) => 1) * id(1)) . mu",
        )
        .unwrap();
        let _ = (one, star);
        let (k1p, k2p) = instantiate(&sig, cp5, &[], &outer_body).unwrap();
        let padded_overlap = k1p.apply(&sig, sig.lhs(l)).unwrap();
        let copies = |k: &Context, lhs: &Diagram| -> BTreeMap<NodeId, NodeId> {
            let ms = crate::context::find_matches(&sig, lhs, &padded_overlap);
            let m = ms.iter().find(|m| m.body.iso(&k.body).is_some()).expect("occurrence");
            let body: BTreeSet<NodeId> = m.body.node_ids().collect();
            let image: Vec<NodeId> =
                padded_overlap.node_ids().filter(|n| !body.contains(n)).collect();
            lhs.node_ids()
                .map(|a| {
                    let lab = lhs.node(a).label;
                    let b = image
                        .iter()
                        .find(|n| padded_overlap.node(**n).label == lab)
                        .copied()
                        .unwrap();
                    (a, b)
                })
                .collect()
        };
        let padded = CompactCriticalPair {
            rule1: l,
            rule2: r,
            copy1: copies(&k1p, sig.lhs(l)),
            copy2: copies(&k2p, sig.lhs(r)),
            k1: k1p,
            k2: k2p,
            overlap: padded_overlap,
        };
        assert!(padded.verify(&sig));
        let all = vec![cp5.clone(), padded.clone()];
        assert!(!is_minimal(&sig, &padded, &all));
        assert!(is_minimal(&sig, cp5, &all));
    }

    /// A pair and its once-rotated form collapse to one representative.
    #[test]
    fn dedup_rotated_pair() {
        let sig = examples::builtin("monoid").unwrap();
        let pairs = critical_pairs(&sig);
        let cp = pairs
            .iter()
            .find(|cp| !cp.overlap.source_wires().is_empty())
            .expect("pair with nonempty source");
        let rotate_ctx = |k: &Context| Context {
            body: crate::compact::rotate_left(&sig, &k.body).unwrap(),
            holes: k.holes.clone(),
        };
        let rotated = CompactCriticalPair {
            rule1: cp.rule1,
            rule2: cp.rule2,
            k1: rotate_ctx(&cp.k1),
            k2: rotate_ctx(&cp.k2),
            overlap: crate::compact::rotate_left(&sig, &cp.overlap).unwrap(),
            copy1: cp.copy1.clone(),
            copy2: cp.copy2.clone(),
        };
        let deduped = dedup(&sig, &[cp.clone(), rotated]);
        assert_eq!(deduped.len(), 1);
        // hole-renamed duplicates collapse as well
        let renamed = CompactCriticalPair {
            k1: cp.k1.clone(),
            k2: cp.k2.clone(),
            ..cp.clone()
        };
        assert_eq!(dedup(&sig, &[cp.clone(), renamed]).len(), 1);
        // genuinely distinct pairs survive
        assert_eq!(dedup(&sig, &pairs).len(), pairs.len());
    }

    #[test]
    fn deterministic_output() {
        let sig = examples::builtin("symmetry").unwrap();
        let a = critical_pairs(&sig);
        let b = critical_pairs(&sig);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.rule1, y.rule1);
            assert_eq!(x.rule2, y.rule2);
            assert_eq!(x.overlap, y.overlap);
        }
    }
}

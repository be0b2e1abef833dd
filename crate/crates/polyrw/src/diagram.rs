//! 2-cells of the free (compact) 2-category as labeled port graphs.
//!
//! A diagram is a set of labeled wires, a set of nodes consuming and
//! producing wires through ordered ports, and ordered source/target boundary
//! lists. Every wire has exactly one producer (a source slot or a node
//! output) and exactly one consumer (a target slot or a node input).
//! Internal identifiers are arbitrary; externally visible equality is
//! isomorphism ([`Diagram::iso`]).
//!
//! Planar well-formedness is *sequentializability*: [`Diagram::decompose`]
//! recovers a layering `id (x) node (x) id` whose recomposition is isomorphic
//! to the diagram.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::{Letter, Path};
use crate::signature::{Gen0, Gen1, Gen2, Polygraph};

macro_rules! raw_id {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

raw_id!(/// Internal wire identifier; not stable across operations.
    WireId);
raw_id!(/// Internal node identifier; not stable across operations.
    NodeId);
raw_id!(/// Identifier of a metavariable (hole) within one context.
    HoleId);

/// What a node in a diagram stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeLabel {
    /// A 2-generator of the signature.
    Gen(Gen2),
    /// Unit of the adjunction on `f^n`: no inputs, outputs `(f,n-1) (f,n)`.
    Eta(Gen1, i32),
    /// Counit on `f^n`: inputs `(f,n) (f,n-1)`, no outputs.
    Eps(Gen1, i32),
    /// A typed metavariable; only allowed inside contexts.
    Hole(HoleId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub label: NodeLabel,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("ill-formed diagram: {0}")]
    IllFormed(String),
}

/// One end of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// Source boundary slot.
    Source(usize),
    /// Target boundary slot.
    Target(usize),
    /// A node port (node, port index).
    Node(NodeId, usize),
}

/// Producer/consumer index of a diagram, built by [`Diagram::wiring`].
#[derive(Debug, Clone)]
pub struct Wiring {
    pub producer: BTreeMap<WireId, Port>,
    pub consumer: BTreeMap<WireId, Port>,
}

/// A labeled port graph with ordered boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    start: Gen0,
    wires: BTreeMap<WireId, Letter>,
    nodes: BTreeMap<NodeId, Node>,
    source: Vec<WireId>,
    target: Vec<WireId>,
    next_wire: u32,
    next_node: u32,
}

impl Diagram {
    pub(crate) fn raw(start: Gen0) -> Diagram {
        Diagram {
            start,
            wires: BTreeMap::new(),
            nodes: BTreeMap::new(),
            source: Vec::new(),
            target: Vec::new(),
            next_wire: 0,
            next_node: 0,
        }
    }

    pub(crate) fn fresh_wire(&mut self, l: Letter) -> WireId {
        let id = WireId(self.next_wire);
        self.next_wire += 1;
        self.wires.insert(id, l);
        id
    }

    pub(crate) fn push_node(
        &mut self,
        label: NodeLabel,
        inputs: Vec<WireId>,
        outputs: Vec<WireId>,
    ) -> NodeId {
        let id = NodeId(self.next_node);
        self.next_node += 1;
        self.nodes.insert(id, Node { label, inputs, outputs });
        id
    }

    pub(crate) fn remove_node(&mut self, n: NodeId) -> Option<Node> {
        self.nodes.remove(&n)
    }

    pub(crate) fn remove_wire(&mut self, w: WireId) {
        self.wires.remove(&w);
    }

    pub(crate) fn set_boundary(&mut self, source: Vec<WireId>, target: Vec<WireId>) {
        self.source = source;
        self.target = target;
    }

    pub(crate) fn node_mut(&mut self, n: NodeId) -> &mut Node {
        self.nodes.get_mut(&n).expect("node exists")
    }

    /// Rewires the unique consumer slot holding `old` to hold `new`.
    pub(crate) fn replace_consumer(&mut self, old: WireId, new: WireId) {
        for slot in self.target.iter_mut() {
            if *slot == old {
                *slot = new;
                return;
            }
        }
        for node in self.nodes.values_mut() {
            for slot in node.inputs.iter_mut() {
                if *slot == old {
                    *slot = new;
                    return;
                }
            }
        }
    }

    /// The 0-cell at the left end of the boundary paths.
    pub fn start(&self) -> Gen0 {
        self.start
    }

    pub(crate) fn with_start(mut self, start: Gen0) -> Diagram {
        self.start = start;
        self
    }

    pub fn wire_label(&self, w: WireId) -> Letter {
        self.wires[&w]
    }

    pub fn wire_ids(&self) -> impl Iterator<Item = WireId> + '_ {
        self.wires.keys().copied()
    }

    pub fn node(&self, n: NodeId) -> &Node {
        &self.nodes[&n]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn source_wires(&self) -> &[WireId] {
        &self.source
    }

    pub fn target_wires(&self) -> &[WireId] {
        &self.target
    }

    pub fn has_holes(&self) -> bool {
        self.nodes.values().any(|n| matches!(n.label, NodeLabel::Hole(_)))
    }

    pub fn hole_node(&self, h: HoleId) -> Option<NodeId> {
        self.nodes
            .iter()
            .find(|(_, n)| n.label == NodeLabel::Hole(h))
            .map(|(id, _)| *id)
    }

    /// True when every wire has winding 0 and the diagram uses no units.
    pub fn is_plain(&self) -> bool {
        self.wires.values().all(|l| l.winding == 0)
            && self.nodes.values().all(|n| matches!(n.label, NodeLabel::Gen(_) | NodeLabel::Hole(_)))
    }

    pub fn contains_units(&self) -> bool {
        self.nodes
            .values()
            .any(|n| matches!(n.label, NodeLabel::Eta(_, _) | NodeLabel::Eps(_, _)))
    }

    /// Ordered source boundary as a path.
    pub fn source_path(&self, _sig: &Polygraph) -> Path {
        Path { start: self.start, letters: self.source.iter().map(|w| self.wires[w]).collect() }
    }

    /// Ordered target boundary as a path.
    pub fn target_path(&self, _sig: &Polygraph) -> Path {
        Path { start: self.start, letters: self.target.iter().map(|w| self.wires[w]).collect() }
    }

    /// Number of `Gen(g)` nodes.
    pub fn weight(&self, g: Gen2) -> usize {
        self.nodes.values().filter(|n| n.label == NodeLabel::Gen(g)).count()
    }

    /// Number of 2-generator nodes. Units and holes do not count.
    pub fn size(&self) -> usize {
        self.nodes
            .values()
            .filter(|n| matches!(n.label, NodeLabel::Gen(_)))
            .count()
    }

    /// Size with eta/eps nodes counted, as needed for the zig-zag system.
    pub fn size_with_units(&self) -> usize {
        self.nodes
            .values()
            .filter(|n| !matches!(n.label, NodeLabel::Hole(_)))
            .count()
    }

    /// Builds the producer/consumer index, failing on linearity violations.
    pub fn wiring(&self) -> Result<Wiring, DiagramError> {
        let mut producer: BTreeMap<WireId, Port> = BTreeMap::new();
        let mut consumer: BTreeMap<WireId, Port> = BTreeMap::new();
        let claim = |map: &mut BTreeMap<WireId, Port>, w: WireId, p: Port, kind: &str| {
            if !self.wires.contains_key(&w) {
                return Err(DiagramError::IllFormed(format!("dangling wire id {w}")));
            }
            if map.insert(w, p).is_some() {
                return Err(DiagramError::IllFormed(format!("wire {w} has two {kind}s")));
            }
            Ok(())
        };
        for (i, &w) in self.source.iter().enumerate() {
            claim(&mut producer, w, Port::Source(i), "producer")?;
        }
        for (i, &w) in self.target.iter().enumerate() {
            claim(&mut consumer, w, Port::Target(i), "consumer")?;
        }
        for (&id, node) in &self.nodes {
            for (i, &w) in node.outputs.iter().enumerate() {
                claim(&mut producer, w, Port::Node(id, i), "producer")?;
            }
            for (i, &w) in node.inputs.iter().enumerate() {
                claim(&mut consumer, w, Port::Node(id, i), "consumer")?;
            }
        }
        for &w in self.wires.keys() {
            if !producer.contains_key(&w) {
                return Err(DiagramError::IllFormed(format!("wire {w} has no producer")));
            }
            if !consumer.contains_key(&w) {
                return Err(DiagramError::IllFormed(format!("wire {w} has no consumer")));
            }
        }
        Ok(Wiring { producer, consumer })
    }

    fn check_node_typing(&self, sig: &Polygraph, node: &Node) -> Result<(), DiagramError> {
        let letters = |ws: &[WireId]| -> Vec<Letter> { ws.iter().map(|w| self.wires[w]).collect() };
        match node.label {
            NodeLabel::Gen(g) => {
                if g.0 as usize >= sig.count(2) {
                    return Err(DiagramError::UnknownGenerator(format!("2-generator {g}")));
                }
                if letters(&node.inputs) != sig.src2(g).letters
                    || letters(&node.outputs) != sig.tgt2(g).letters
                {
                    return Err(DiagramError::IllFormed(format!(
                        "node labeled {} has boundary not matching its declaration",
                        sig.name2(g)
                    )));
                }
            }
            NodeLabel::Eta(f, n) => {
                let want = vec![Letter::new(f, n - 1), Letter::new(f, n)];
                if !node.inputs.is_empty() || letters(&node.outputs) != want {
                    return Err(DiagramError::IllFormed("bad eta typing".to_string()));
                }
            }
            NodeLabel::Eps(f, n) => {
                let want = vec![Letter::new(f, n), Letter::new(f, n - 1)];
                if !node.outputs.is_empty() || letters(&node.inputs) != want {
                    return Err(DiagramError::IllFormed("bad eps typing".to_string()));
                }
            }
            NodeLabel::Hole(_) => {}
        }
        Ok(())
    }

    /// Topological order of nodes along wire flow; errors on cycles.
    pub fn topo_order(&self, wiring: &Wiring) -> Result<Vec<NodeId>, DiagramError> {
        let mut indeg: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&n| (n, 0)).collect();
        let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (&w, &p) in &wiring.producer {
            if let (Port::Node(a, _), Some(Port::Node(b, _))) = (p, wiring.consumer.get(&w).copied()) {
                succ.entry(a).or_default().push(b);
                *indeg.get_mut(&b).unwrap() += 1;
            }
        }
        let mut queue: VecDeque<NodeId> =
            indeg.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
        let mut out = Vec::new();
        while let Some(n) = queue.pop_front() {
            out.push(n);
            for &m in succ.get(&n).into_iter().flatten() {
                let d = indeg.get_mut(&m).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push_back(m);
                }
            }
        }
        if out.len() != self.nodes.len() {
            return Err(DiagramError::IllFormed("cyclic wiring".to_string()));
        }
        Ok(out)
    }

    /// Full well-formedness check: linearity, typing, chaining, acyclicity
    /// and sequentializability.
    pub fn validate(&self, sig: &Polygraph) -> Result<(), DiagramError> {
        let wiring = self.wiring()?;
        for l in self.wires.values() {
            if l.gen.0 as usize >= sig.count(1) {
                return Err(DiagramError::UnknownGenerator(format!("1-generator {}", l.gen)));
            }
        }
        for node in self.nodes.values() {
            self.check_node_typing(sig, node)?;
        }
        let src = Path::from_letters(sig, self.start, self.source_path(sig).letters)
            .map_err(|e| DiagramError::IllFormed(format!("source boundary: {e}")))?;
        let tgt = Path::from_letters(sig, self.start, self.target_path(sig).letters)
            .map_err(|e| DiagramError::IllFormed(format!("target boundary: {e}")))?;
        if src.endpoints(sig) != tgt.endpoints(sig) {
            return Err(DiagramError::IllFormed("boundaries are not parallel".to_string()));
        }
        self.topo_order(&wiring)?;
        self.decompose()?;
        Ok(())
    }

    /// Single-generator diagram with fresh boundary wires.
    pub fn of_generator(sig: &Polygraph, g: Gen2) -> Result<Diagram, DiagramError> {
        if g.0 as usize >= sig.count(2) {
            return Err(DiagramError::UnknownGenerator(format!("2-generator {g}")));
        }
        let src = sig.src2(g).clone();
        let tgt = sig.tgt2(g).clone();
        let mut d = Diagram::raw(src.start);
        let ins: Vec<WireId> = src.letters.iter().map(|&l| d.fresh_wire(l)).collect();
        let outs: Vec<WireId> = tgt.letters.iter().map(|&l| d.fresh_wire(l)).collect();
        d.push_node(NodeLabel::Gen(g), ins.clone(), outs.clone());
        d.set_boundary(ins, outs);
        Ok(d)
    }

    /// Node-free diagram whose source and target are the wires of `q`.
    pub fn identity(q: &Path) -> Diagram {
        let mut d = Diagram::raw(q.start);
        let ws: Vec<WireId> = q.letters.iter().map(|&l| d.fresh_wire(l)).collect();
        d.set_boundary(ws.clone(), ws);
        d
    }

    /// Imports another diagram's wires and nodes with fresh identifiers.
    /// Entries already present in `wire_map` are reused instead of created.
    pub(crate) fn import(
        &mut self,
        other: &Diagram,
        wire_map: &mut BTreeMap<WireId, WireId>,
    ) -> BTreeMap<NodeId, NodeId> {
        for (&w, &l) in &other.wires {
            wire_map.entry(w).or_insert_with(|| self.fresh_wire(l));
        }
        let mut node_map = BTreeMap::new();
        for (&n, node) in &other.nodes {
            let inputs = node.inputs.iter().map(|w| wire_map[w]).collect();
            let outputs = node.outputs.iter().map(|w| wire_map[w]).collect();
            let id = self.push_node(node.label, inputs, outputs);
            node_map.insert(n, id);
        }
        node_map
    }

    /// Vertical composition: `self` first, then `other` glued on top.
    pub fn vcompose(&self, sig: &Polygraph, other: &Diagram) -> Result<Diagram, DiagramError> {
        let t = self.target_path(sig);
        let s = other.source_path(sig);
        if t != s {
            return Err(DiagramError::BoundaryMismatch(format!(
                "target {:?} does not match source {:?}",
                t.letters, s.letters
            )));
        }
        let mut out = self.clone();
        let mut wire_map: BTreeMap<WireId, WireId> = BTreeMap::new();
        for (i, &w) in other.source.iter().enumerate() {
            wire_map.insert(w, out.target[i]);
        }
        out.import(other, &mut wire_map);
        let target = other.target.iter().map(|w| wire_map[w]).collect();
        out.target = target;
        Ok(out)
    }

    /// Horizontal composition: disjoint union with concatenated boundaries.
    pub fn hcompose(&self, sig: &Polygraph, other: &Diagram) -> Result<Diagram, DiagramError> {
        let end = self.source_path(sig).end(sig);
        if end != other.start {
            return Err(DiagramError::EndpointMismatch(format!(
                "left ends at {} but right starts at {}",
                sig.name0(end),
                sig.name0(other.start)
            )));
        }
        let mut out = self.clone();
        let mut wire_map = BTreeMap::new();
        out.import(other, &mut wire_map);
        out.source.extend(other.source.iter().map(|w| wire_map[w]));
        out.target.extend(other.target.iter().map(|w| wire_map[w]));
        Ok(out)
    }

    /// Tensors a list of diagrams left to right.
    pub fn hcompose_all(sig: &Polygraph, parts: &[Diagram]) -> Result<Diagram, DiagramError> {
        let mut parts = parts.iter();
        let first = parts
            .next()
            .ok_or_else(|| DiagramError::IllFormed("empty tensor".to_string()))?;
        let mut acc = first.clone();
        for p in parts {
            acc = acc.hcompose(sig, p)?;
        }
        Ok(acc)
    }
}

/// One layer of a sequentialization: a node whiskered by identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub left: Vec<Letter>,
    pub label: NodeLabel,
    pub inputs: Vec<Letter>,
    pub outputs: Vec<Letter>,
    pub right: Vec<Letter>,
}

impl Diagram {
    /// Greedy-with-backtracking planar layering. Succeeds exactly on
    /// well-formed (planar progressive) diagrams.
    pub fn decompose(&self) -> Result<Vec<Layer>, DiagramError> {
        let wiring = self.wiring()?;
        self.topo_order(&wiring)?;
        let order = self.sequentialize()?;
        let mut layers = Vec::new();
        let mut frontier: Vec<WireId> = self.source.clone();
        for (pos, n) in order {
            let node = &self.nodes[&n];
            let k = node.inputs.len();
            let letters = |ws: &[WireId]| ws.iter().map(|w| self.wires[w]).collect::<Vec<_>>();
            layers.push(Layer {
                left: letters(&frontier[..pos]),
                label: node.label,
                inputs: letters(&node.inputs),
                outputs: letters(&node.outputs),
                right: letters(&frontier[pos + k..]),
            });
            frontier.splice(pos..pos + k, node.outputs.iter().copied());
        }
        Ok(layers)
    }

    /// Finds an order of nodes with insertion positions realizing the
    /// diagram as a stack of whiskered layers.
    fn sequentialize(&self) -> Result<Vec<(usize, NodeId)>, DiagramError> {
        let mut seen: HashSet<(Vec<WireId>, Vec<NodeId>)> = HashSet::new();
        let mut path: Vec<(usize, NodeId)> = Vec::new();
        let frontier = self.source.clone();
        let remaining: BTreeSet<NodeId> = self.nodes.keys().copied().collect();
        if self.search(frontier, remaining, &mut path, &mut seen) {
            Ok(path)
        } else {
            Err(DiagramError::IllFormed("diagram does not sequentialize".to_string()))
        }
    }

    fn search(
        &self,
        frontier: Vec<WireId>,
        remaining: BTreeSet<NodeId>,
        path: &mut Vec<(usize, NodeId)>,
        seen: &mut HashSet<(Vec<WireId>, Vec<NodeId>)>,
    ) -> bool {
        if remaining.is_empty() {
            return frontier == self.target;
        }
        let key = (frontier.clone(), remaining.iter().copied().collect::<Vec<_>>());
        if !seen.insert(key) {
            return false;
        }
        // nodes with inputs have a forced position; try them first so that
        // the free placement of 0-input nodes is explored only when needed
        let ordered: Vec<NodeId> = remaining
            .iter()
            .filter(|n| !self.nodes[n].inputs.is_empty())
            .chain(remaining.iter().filter(|n| self.nodes[n].inputs.is_empty()))
            .copied()
            .collect();
        for n in ordered {
            let node = &self.nodes[&n];
            let positions: Vec<usize> = if node.inputs.is_empty() {
                (0..=frontier.len()).collect()
            } else {
                // inputs must appear as a contiguous run, in order
                match find_run(&frontier, &node.inputs) {
                    Some(p) => vec![p],
                    None => continue,
                }
            };
            for pos in positions {
                let mut next = frontier.clone();
                next.splice(pos..pos + node.inputs.len(), node.outputs.iter().copied());
                let mut rem = remaining.clone();
                rem.remove(&n);
                path.push((pos, n));
                if self.search(next, rem, path, seen) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }

    /// Rebuilds a diagram from layers; inverse of [`Diagram::decompose`]
    /// up to isomorphism.
    pub fn recompose(
        sig: &Polygraph,
        source: &Path,
        layers: &[Layer],
    ) -> Result<Diagram, DiagramError> {
        let mut d = Diagram::identity(source);
        let mut next_hole = 0u32;
        for layer in layers {
            let pos = layer.left.len();
            let k = layer.inputs.len();
            if pos + k > d.target.len() {
                return Err(DiagramError::IllFormed("layer does not fit frontier".to_string()));
            }
            let ins: Vec<WireId> = d.target[pos..pos + k].to_vec();
            for (w, l) in ins.iter().zip(&layer.inputs) {
                if d.wires[w] != *l {
                    return Err(DiagramError::BoundaryMismatch("layer input labels".to_string()));
                }
            }
            let outs: Vec<WireId> = layer.outputs.iter().map(|&l| d.fresh_wire(l)).collect();
            let label = match layer.label {
                NodeLabel::Hole(_) => {
                    next_hole += 1;
                    NodeLabel::Hole(HoleId(next_hole - 1))
                }
                l => l,
            };
            d.push_node(label, ins, outs.clone());
            let mut target = d.target.clone();
            target.splice(pos..pos + k, outs);
            d.target = target;
        }
        let _ = sig;
        Ok(d)
    }
}

fn find_run(frontier: &[WireId], inputs: &[WireId]) -> Option<usize> {
    if inputs.is_empty() {
        return Some(0);
    }
    frontier
        .windows(inputs.len())
        .position(|win| win == inputs)
}

/// Witness of a diagram isomorphism: label, order and boundary preserving
/// bijections on wires and nodes.
#[derive(Debug, Clone, Default)]
pub struct IsoWitness {
    pub wires: BTreeMap<WireId, WireId>,
    pub nodes: BTreeMap<NodeId, NodeId>,
    pub holes: BTreeMap<HoleId, HoleId>,
}

struct IsoState<'a> {
    d1: &'a Diagram,
    d2: &'a Diagram,
    w1: Wiring,
    w2: Wiring,
    allowed: Option<&'a dyn Fn(NodeId, NodeId) -> bool>,
}

impl Diagram {
    /// Decides isomorphism, producing a witness. Boundary-anchored parts are
    /// matched by propagation; closed components by backtracking.
    pub fn iso(&self, other: &Diagram) -> Option<IsoWitness> {
        self.iso_where(other, None)
    }

    /// Isomorphism restricted to node pairings satisfying a predicate.
    pub fn iso_constrained(
        &self,
        other: &Diagram,
        allowed: &dyn Fn(NodeId, NodeId) -> bool,
    ) -> Option<IsoWitness> {
        self.iso_where(other, Some(allowed))
    }

    fn iso_where(
        &self,
        other: &Diagram,
        allowed: Option<&dyn Fn(NodeId, NodeId) -> bool>,
    ) -> Option<IsoWitness> {
        if self.start != other.start
            || self.nodes.len() != other.nodes.len()
            || self.wires.len() != other.wires.len()
            || self.source.len() != other.source.len()
            || self.target.len() != other.target.len()
        {
            return None;
        }
        let labels = |d: &Diagram, ws: &[WireId]| -> Vec<Letter> {
            ws.iter().map(|w| d.wires[w]).collect()
        };
        if labels(self, &self.source) != labels(other, &other.source)
            || labels(self, &self.target) != labels(other, &other.target)
        {
            return None;
        }
        let st = IsoState {
            d1: self,
            d2: other,
            w1: self.wiring().ok()?,
            w2: other.wiring().ok()?,
            allowed,
        };
        let mut wit = IsoWitness::default();
        let mut queue: VecDeque<(WireId, WireId)> = VecDeque::new();
        for (a, b) in self.source.iter().zip(&other.source) {
            queue.push_back((*a, *b));
        }
        for (a, b) in self.target.iter().zip(&other.target) {
            queue.push_back((*a, *b));
        }
        if !propagate(&st, &mut wit, &mut queue) {
            return None;
        }
        // remaining components have no boundary anchor; backtrack
        let rem1: Vec<NodeId> = self.nodes.keys().filter(|n| !wit.nodes.contains_key(n)).copied().collect();
        if rem1.is_empty() && wit.nodes.len() == other.nodes.len() {
            return Some(wit);
        }
        if backtrack(&st, wit.clone(), &rem1).map(|w| {
            wit = w;
        }).is_some()
        {
            Some(wit)
        } else {
            None
        }
    }
}

fn labels_compatible(a: NodeLabel, b: NodeLabel, holes: &mut BTreeMap<HoleId, HoleId>) -> bool {
    match (a, b) {
        (NodeLabel::Hole(h1), NodeLabel::Hole(h2)) => match holes.get(&h1) {
            Some(&h) => h == h2,
            None => {
                if holes.values().any(|&h| h == h2) {
                    false
                } else {
                    holes.insert(h1, h2);
                    true
                }
            }
        },
        (x, y) => x == y,
    }
}

fn propagate(st: &IsoState, wit: &mut IsoWitness, queue: &mut VecDeque<(WireId, WireId)>) -> bool {
    while let Some((a, b)) = queue.pop_front() {
        match wit.wires.get(&a) {
            Some(&mapped) => {
                if mapped != b {
                    return false;
                }
                continue;
            }
            None => {
                if wit.wires.values().any(|&w| w == b) {
                    return false;
                }
                if st.d1.wires[&a] != st.d2.wires[&b] {
                    return false;
                }
                wit.wires.insert(a, b);
            }
        }
        let ends = [
            (st.w1.producer[&a], st.w2.producer[&b]),
            (st.w1.consumer[&a], st.w2.consumer[&b]),
        ];
        for (p1, p2) in ends {
            match (p1, p2) {
                (Port::Source(i), Port::Source(j)) | (Port::Target(i), Port::Target(j)) => {
                    if i != j {
                        return false;
                    }
                }
                (Port::Node(n1, i), Port::Node(n2, j)) => {
                    if i != j {
                        return false;
                    }
                    if !pair_nodes(st, wit, n1, n2, queue) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

fn pair_nodes(
    st: &IsoState,
    wit: &mut IsoWitness,
    n1: NodeId,
    n2: NodeId,
    queue: &mut VecDeque<(WireId, WireId)>,
) -> bool {
    match wit.nodes.get(&n1) {
        Some(&m) => m == n2,
        None => {
            if wit.nodes.values().any(|&m| m == n2) {
                return false;
            }
            if let Some(allowed) = st.allowed {
                if !allowed(n1, n2) {
                    return false;
                }
            }
            let node1 = &st.d1.nodes[&n1];
            let node2 = &st.d2.nodes[&n2];
            if !labels_compatible(node1.label, node2.label, &mut wit.holes) {
                return false;
            }
            if node1.inputs.len() != node2.inputs.len() || node1.outputs.len() != node2.outputs.len() {
                return false;
            }
            wit.nodes.insert(n1, n2);
            for (a, b) in node1.inputs.iter().zip(&node2.inputs) {
                queue.push_back((*a, *b));
            }
            for (a, b) in node1.outputs.iter().zip(&node2.outputs) {
                queue.push_back((*a, *b));
            }
            true
        }
    }
}

fn backtrack(st: &IsoState, wit: IsoWitness, rem1: &[NodeId]) -> Option<IsoWitness> {
    let n1 = match rem1.iter().find(|n| !wit.nodes.contains_key(n)) {
        Some(&n) => n,
        None => return Some(wit),
    };
    // lowest node id first for deterministic tie-breaking
    let candidates: Vec<NodeId> = st
        .d2
        .nodes
        .keys()
        .filter(|n| !wit.nodes.values().any(|m| m == *n))
        .copied()
        .collect();
    for n2 in candidates {
        let mut attempt = wit.clone();
        let mut queue = VecDeque::new();
        if !pair_nodes(st, &mut attempt, n1, n2, &mut queue) {
            continue;
        }
        if !propagate(st, &mut attempt, &mut queue) {
            continue;
        }
        if let Some(done) = backtrack(st, attempt, rem1) {
            return Some(done);
        }
    }
    None
}

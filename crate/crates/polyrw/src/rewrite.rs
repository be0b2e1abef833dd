//! 3-polygraph rewriting: one-step rewrites through unary contexts,
//! fuel-bounded normalization, joinability and local-confluence verdicts.
//!
//! Undecidable questions are answered with explicit `Unknown` once the fuel
//! runs out; nothing here loops forever.

use std::collections::VecDeque;

use crate::context::{find_matches, Context};
use crate::diagram::Diagram;
use crate::signature::{Gen3, Polygraph};
use crate::unify::{self, CompactCriticalPair};

/// One application of a rule inside a unary context.
#[derive(Debug, Clone)]
pub struct RewriteStep {
    pub rule: Gen3,
    pub context: Context,
    pub before: Diagram,
    pub after: Diagram,
}

impl RewriteStep {
    /// Re-checks the defining property of the step.
    pub fn verify(&self, sig: &Polygraph) -> bool {
        let lhs = sig.lhs(self.rule);
        let rhs = sig.rhs(self.rule);
        let redex = self.context.apply(sig, lhs);
        let reduct = self.context.apply(sig, rhs);
        matches!((redex, reduct), (Ok(a), Ok(b))
            if a.iso(&self.before).is_some() && b.iso(&self.after).is_some())
    }
}

/// All redexes of all rules, in deterministic order.
pub fn one_step(sig: &Polygraph, d: &Diagram) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for r in sig.gens3() {
        let lhs = sig.lhs(r);
        let rhs = sig.rhs(r);
        for k in find_matches(sig, lhs, d) {
            if let Ok(after) = k.apply(sig, rhs) {
                out.push(RewriteStep { rule: r, context: k, before: d.clone(), after });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Always the first redex in enumeration order.
    Leftmost,
    /// Round-robin over redex positions; fair across branches.
    AllFair,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "leftmost" => Ok(Strategy::Leftmost),
            "fair" | "all-fair" => Ok(Strategy::AllFair),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeStatus {
    Normal,
    FuelExhausted,
}

/// Rewrites until no redex remains or the fuel is spent.
pub fn normalize(
    sig: &Polygraph,
    d: &Diagram,
    strategy: Strategy,
    fuel: u32,
) -> (Diagram, NormalizeStatus, Vec<RewriteStep>) {
    let mut current = d.clone();
    let mut trace = Vec::new();
    for round in 0..fuel {
        let steps = one_step(sig, &current);
        if steps.is_empty() {
            return (current, NormalizeStatus::Normal, trace);
        }
        let pick = match strategy {
            Strategy::Leftmost => 0,
            Strategy::AllFair => (round as usize) % steps.len(),
        };
        let step = steps.into_iter().nth(pick).expect("picked step");
        current = step.after.clone();
        trace.push(step);
    }
    let status = if one_step(sig, &current).is_empty() {
        NormalizeStatus::Normal
    } else {
        NormalizeStatus::FuelExhausted
    };
    (current, status, trace)
}

#[derive(Debug, Clone)]
pub enum Joinability {
    Joined(Diagram),
    Unknown,
}

/// Looks for a common reduct of two parallel cells: first by normalizing
/// both, then by a fuel-bounded breadth-first search.
pub fn joinable(sig: &Polygraph, d1: &Diagram, d2: &Diagram, fuel: u32) -> Joinability {
    if d1.iso(d2).is_some() {
        return Joinability::Joined(d1.clone());
    }
    let (n1, s1, _) = normalize(sig, d1, Strategy::Leftmost, fuel);
    let (n2, s2, _) = normalize(sig, d2, Strategy::Leftmost, fuel);
    if n1.iso(&n2).is_some() {
        return Joinability::Joined(n1);
    }
    if s1 == NormalizeStatus::Normal && s2 == NormalizeStatus::Normal {
        // distinct normal forms cannot be joined
        return Joinability::Unknown;
    }
    // bounded bidirectional search over reducts
    let mut seen1: Vec<Diagram> = vec![d1.clone()];
    let mut seen2: Vec<Diagram> = vec![d2.clone()];
    let mut queue: VecDeque<(usize, Diagram)> = VecDeque::new();
    queue.push_back((1, d1.clone()));
    queue.push_back((2, d2.clone()));
    let mut budget = fuel;
    while let Some((side, d)) = queue.pop_front() {
        if budget == 0 {
            break;
        }
        budget -= 1;
        for step in one_step(sig, &d) {
            let (mine, other) = if side == 1 {
                (&mut seen1, &mut seen2)
            } else {
                (&mut seen2, &mut seen1)
            };
            if let Some(j) = other.iter().find(|o| o.iso(&step.after).is_some()) {
                return Joinability::Joined(j.clone());
            }
            if !mine.iter().any(|o| o.iso(&step.after).is_some()) {
                mine.push(step.after.clone());
                queue.push_back((side, step.after));
            }
        }
    }
    Joinability::Unknown
}

/// The size-decrease termination criterion: every rule strictly shrinks.
pub fn size_decreasing_terminating(sig: &Polygraph, count_units: bool) -> bool {
    sig.gens3().all(|r| {
        let (l, h) = (sig.lhs(r), sig.rhs(r));
        if count_units {
            l.size_with_units() > h.size_with_units()
        } else {
            l.size() > h.size()
        }
    })
}

#[derive(Debug, Clone)]
pub enum ConfluenceVerdict {
    /// All critical pairs join; `confluent_by_newman` additionally records
    /// whether termination is established (size criterion) or assumed.
    LocallyConfluent { pairs: usize, confluent_by_newman: bool },
    /// A hole-free critical pair with two distinct normal forms.
    CounterexampleCP {
        pair: Box<CompactCriticalPair>,
        reduct1: Box<Diagram>,
        reduct2: Box<Diagram>,
    },
    Unknown { reason: String },
}

/// Enumerates critical pairs and tests joinability of each. With
/// termination (checked by the size criterion, or asserted by the caller)
/// the verdict upgrades to confluence by Newman's lemma. A non-joinable
/// compact pair with holes yields `Unknown`: joinability of compact pairs
/// is sufficient for confluence but not necessary.
pub fn local_confluence(sig: &Polygraph, fuel: u32, assume_terminating: bool) -> ConfluenceVerdict {
    let pairs = unify::critical_pairs(sig);
    let mut joined = 0usize;
    for cp in &pairs {
        let (r1, r2) = cp.reducts(sig);
        match joinable(sig, &r1, &r2, fuel) {
            Joinability::Joined(_) => joined += 1,
            Joinability::Unknown => {
                let (n1, s1, _) = normalize(sig, &r1, Strategy::Leftmost, fuel);
                let (n2, s2, _) = normalize(sig, &r2, Strategy::Leftmost, fuel);
                if cp.holes() == 0
                    && s1 == NormalizeStatus::Normal
                    && s2 == NormalizeStatus::Normal
                    && n1.iso(&n2).is_none()
                {
                    return ConfluenceVerdict::CounterexampleCP {
                        pair: Box::new(cp.clone()),
                        reduct1: Box::new(n1),
                        reduct2: Box::new(n2),
                    };
                }
                let reason = if cp.holes() > 0 {
                    "a compact critical pair with holes did not join"
                } else {
                    "fuel exhausted while joining a critical pair"
                };
                return ConfluenceVerdict::Unknown { reason: reason.to_string() };
            }
        }
    }
    let terminating = size_decreasing_terminating(sig, false)
        || size_decreasing_terminating(sig, true)
        || assume_terminating;
    ConfluenceVerdict::LocallyConfluent { pairs: joined, confluent_by_newman: terminating }
}

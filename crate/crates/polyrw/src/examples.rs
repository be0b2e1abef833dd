//! Builtin theories, the term-rewriting-system translation into
//! 3-polygraphs, and the matrix semantics for the bialgebra theory.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{Diagram, NodeLabel};
use crate::path::Path;
use crate::signature::{Gen0, Gen1, Gen2, Polygraph, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExamplesError {
    #[error("unknown builtin `{0}`")]
    UnknownName(String),
    #[error("arity mismatch: symbol `{symbol}` expects {expect} arguments, got {got}")]
    ArityMismatch { symbol: String, expect: usize, got: usize },
    #[error("variable x{0} of the right-hand side is not bound on the left")]
    UnboundVariable(usize),
    #[error("unknown symbol in diagram: {0}")]
    UnknownSymbol(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Builtin polygraphs. `delta(N)` takes a truncation bound for its
/// generator families.
pub fn builtin(name: &str) -> Result<Polygraph, ExamplesError> {
    match name {
        "monoid" => Ok(monoid()),
        "symmetry" => Ok(symmetry()),
        "srs-nz2" => Ok(srs_nz2()),
        "bialgebra" => Ok(bialgebra()),
        "delta-mu-sigma" => Ok(delta_mu_sigma()),
        other => {
            if let Some(rest) = other.strip_prefix("delta(") {
                if let Some(numstr) = rest.strip_suffix(')') {
                    if let Ok(n) = numstr.parse::<u32>() {
                        return Ok(delta(n));
                    }
                }
            }
            Err(ExamplesError::UnknownName(other.to_string()))
        }
    }
}

pub fn builtin_names() -> Vec<&'static str> {
    vec!["monoid", "symmetry", "srs-nz2", "delta(N)", "bialgebra", "delta-mu-sigma"]
}

fn one_object_base(name: &str) -> (Polygraph, Gen0, Gen1) {
    let mut p = Polygraph::with_name(name);
    let star = p.add_gen0("*").unwrap();
    let one = p.add_gen1("1", star, star).unwrap();
    (p, star, one)
}

fn word(p: &Polygraph, start: Gen0, gens: &[Gen1]) -> Path {
    Path::word(p, start, gens).unwrap()
}

/// The theory of monoids: mu, eta with associativity and both units.
fn monoid() -> Polygraph {
    let (mut p, star, one) = one_object_base("monoid");
    let mu = p.add_gen2("mu", word(&p, star, &[one, one]), word(&p, star, &[one])).unwrap();
    let eta = p.add_gen2("eta", Path::id(star), word(&p, star, &[one])).unwrap();
    let id1 = Diagram::identity(&word(&p, star, &[one]));
    let dmu = Diagram::of_generator(&p, mu).unwrap();
    let deta = Diagram::of_generator(&p, eta).unwrap();
    let assoc_l = dmu.hcompose(&p, &id1).unwrap().vcompose(&p, &dmu).unwrap();
    let assoc_r = id1.hcompose(&p, &dmu).unwrap().vcompose(&p, &dmu).unwrap();
    p.add_gen3("a", assoc_l, assoc_r).unwrap();
    let unit_l = deta.hcompose(&p, &id1).unwrap().vcompose(&p, &dmu).unwrap();
    p.add_gen3("l", unit_l, id1.clone()).unwrap();
    let unit_r = id1.hcompose(&p, &deta).unwrap().vcompose(&p, &dmu).unwrap();
    p.add_gen3("r", unit_r, id1).unwrap();
    p
}

/// The theory of symmetries: gamma with Yang-Baxter and the involution.
fn symmetry() -> Polygraph {
    let (mut p, star, one) = one_object_base("symmetry");
    let gamma = p
        .add_gen2("gamma", word(&p, star, &[one, one]), word(&p, star, &[one, one]))
        .unwrap();
    let id1 = Diagram::identity(&word(&p, star, &[one]));
    let id2 = Diagram::identity(&word(&p, star, &[one, one]));
    let dg = Diagram::of_generator(&p, gamma).unwrap();
    let gl = dg.hcompose(&p, &id1).unwrap();
    let gr = id1.hcompose(&p, &dg).unwrap();
    let yb_l = gl.vcompose(&p, &gr).unwrap().vcompose(&p, &gl).unwrap();
    let yb_r = gr.vcompose(&p, &gl).unwrap().vcompose(&p, &gr).unwrap();
    p.add_gen3("yb", yb_l, yb_r).unwrap();
    let inv = dg.vcompose(&p, &dg).unwrap();
    p.add_gen3("ii", inv, id2).unwrap();
    p
}

/// The string rewriting system presenting N x Z/2Z: ba -> ab, bb -> 1.
fn srs_nz2() -> Polygraph {
    let mut p = Polygraph::with_name("srs-nz2");
    let star = p.add_gen0("*").unwrap();
    let a = p.add_gen1("a", star, star).unwrap();
    let b = p.add_gen1("b", star, star).unwrap();
    p.add_gen2("rho", word(&p, star, &[b, a]), word(&p, star, &[a, b])).unwrap();
    p.add_gen2("tau", word(&p, star, &[b, b]), Path::id(star)).unwrap();
    p
}

/// The worked unification example: delta : 1 -> 4, mu : 4 -> 1 and a
/// unary sigma, with rules whose left sides are sigma^4 . delta and
/// mu . sigma^4.
fn delta_mu_sigma() -> Polygraph {
    let (mut p, star, one) = one_object_base("delta-mu-sigma");
    let w1 = word(&p, star, &[one]);
    let w4 = word(&p, star, &[one, one, one, one]);
    let delta = p.add_gen2("delta", w1.clone(), w4.clone()).unwrap();
    let mu = p.add_gen2("mu", w4, w1.clone()).unwrap();
    let sigma = p.add_gen2("sigma", w1.clone(), w1).unwrap();
    let ds = Diagram::of_generator(&p, sigma).unwrap();
    let four_sigmas = Diagram::hcompose_all(
        &p,
        &[ds.clone(), ds.clone(), ds.clone(), ds],
    )
    .unwrap();
    let dd = Diagram::of_generator(&p, delta).unwrap();
    let dm = Diagram::of_generator(&p, mu).unwrap();
    let lhs_a = dd.vcompose(&p, &four_sigmas).unwrap();
    p.add_gen3("ra", lhs_a, dd).unwrap();
    let lhs_b = four_sigmas.vcompose(&p, &dm).unwrap();
    p.add_gen3("rb", lhs_b, dm).unwrap();
    p
}

/// The 2-polygraph presenting the simplicial category, truncated to objects
/// `0..=bound`: generator families `mu_i^m : m+1 -> m` and
/// `eta_i^m : m -> m+1` with the three simplicial rule families.
fn delta(bound: u32) -> Polygraph {
    let mut p = Polygraph::with_name(&format!("delta({bound})"));
    let objs: Vec<Gen0> = (0..=bound).map(|k| p.add_gen0(&k.to_string()).unwrap()).collect();
    let mut mu: BTreeMap<(u32, u32), Gen1> = BTreeMap::new();
    let mut eta: BTreeMap<(u32, u32), Gen1> = BTreeMap::new();
    // mu_i^m : m+1 -> m for 0 <= i <= m-1; eta_i^m : m -> m+1 for 0 <= i <= m
    for m in 1..=bound.saturating_sub(1) {
        for i in 0..m {
            let g = p
                .add_gen1(&format!("mu_{i}_{m}"), objs[(m + 1) as usize], objs[m as usize])
                .unwrap();
            mu.insert((i, m), g);
        }
    }
    for m in 0..bound {
        for i in 0..=m {
            let g = p
                .add_gen1(&format!("eta_{i}_{m}"), objs[m as usize], objs[(m + 1) as usize])
                .unwrap();
            eta.insert((i, m), g);
        }
    }
    // words are written in diagrammatic order: first letter applied first
    let w = |p: &Polygraph, gens: &[Gen1]| {
        let (s, _) = p.endpoints1(gens[0]);
        Path::word(p, s, gens).unwrap()
    };
    let mut rules: Vec<(String, Path, Path)> = Vec::new();
    // mu_j^{n+1} mu_i^{n+2} => mu_i^{n+1} mu_{j+1}^{n+2}, i <= j
    for (&(j, m1), &gj) in &mu {
        for (&(i, m2), &gi) in &mu {
            if m2 == m1 + 1 && i <= j {
                if let (Some(&ri), Some(&rj1)) = (mu.get(&(i, m1)), mu.get(&(j + 1, m2))) {
                    rules.push((
                        format!("mm_{i}_{j}_{m1}"),
                        w(&p, &[gi, gj]),
                        w(&p, &[rj1, ri]),
                    ));
                }
            }
        }
    }
    // eta_i^{n+1} eta_j^n => eta_{j+1}^{n+1} eta_i^n, i <= j
    for (&(i, m1), &gi) in &eta {
        for (&(j, m0), &gj) in &eta {
            if m1 == m0 + 1 && i <= j {
                if let (Some(&rj1), Some(&ri)) = (eta.get(&(j + 1, m1)), eta.get(&(i, m0))) {
                    rules.push((
                        format!("ee_{i}_{j}_{m0}"),
                        w(&p, &[gj, gi]),
                        w(&p, &[ri, rj1]),
                    ));
                }
            }
        }
    }
    // mu_j^{n+1} eta_i^{n+1} => case split on i vs j
    for (&(j, m), &gj) in &mu {
        for (&(i, me), &gi) in &eta {
            if me != m {
                continue;
            }
            let lhs = w(&p, &[gi, gj]);
            let name = format!("me_{i}_{j}_{m}");
            if i == j || i == j + 1 {
                let start = lhs.start;
                rules.push((name, lhs, Path::id(start)));
            } else if i < j {
                if let (Some(&mj1), Some(&ei)) = (mu.get(&(j - 1, m - 1)), eta.get(&(i, m - 1))) {
                    rules.push((name, lhs, w(&p, &[mj1, ei])));
                }
            } else if let (Some(&mj), Some(&ei1)) = (mu.get(&(j, m - 1)), eta.get(&(i - 1, m - 1)))
            {
                rules.push((name, lhs, w(&p, &[mj, ei1])));
            }
        }
    }
    for (name, lhs, rhs) in rules {
        if lhs.endpoints(&p) == rhs.endpoints(&p) {
            p.add_gen2(&name, lhs, rhs).unwrap();
        }
    }
    p
}

/// mu . (mu (x) id): the left-associated double multiplication.
pub fn mu_mu_left(sig: &Polygraph) -> Diagram {
    mu_left_comb(sig, 3)
}

/// Left comb of multiplications with `n` leaves.
pub fn mu_left_comb(sig: &Polygraph, n: usize) -> Diagram {
    let mu = sig.find_gen2("mu").unwrap();
    let one = sig.src2(mu).letters[0];
    let dmu = Diagram::of_generator(sig, mu).unwrap();
    let mut d = dmu.clone();
    for _ in 2..n {
        let id1 = Diagram::identity(&Path {
            start: d.source_path(sig).end(sig),
            letters: vec![one],
        });
        d = d.hcompose(sig, &id1).unwrap().vcompose(sig, &dmu).unwrap();
    }
    d
}

// ---------------------------------------------------------------------------
// Term rewriting systems
// ---------------------------------------------------------------------------

/// First-order terms with numbered variables `x1, x2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(sym: usize, args: Vec<Term>) -> Term {
        Term::App(sym, args)
    }

    fn occurrences(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => out.push(*i),
            Term::App(_, args) => {
                for a in args {
                    a.occurrences(out);
                }
            }
        }
    }

    fn max_var(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::App(_, args) => args.iter().map(|a| a.max_var()).max().unwrap_or(0),
        }
    }
}

/// A term rewriting signature: symbol names with arities (coarity 1).
#[derive(Debug, Clone)]
pub struct TrsSignature {
    pub symbols: Vec<(String, usize)>,
}

struct BialgebraGens {
    one: Gen1,
    star: Gen0,
    delta: Gen2,
    eps: Gen2,
    gamma: Gen2,
}

fn wires(p: &Polygraph, star: Gen0, one: Gen1, n: usize) -> Path {
    Path::word(p, star, &vec![one; n]).unwrap()
}

/// Right-nested copy tree producing `count` copies of one wire.
fn copy_tree(
    p: &Polygraph,
    g: &BialgebraGens,
    count: usize,
) -> Diagram {
    let one_path = wires(p, g.star, g.one, 1);
    if count == 1 {
        return Diagram::identity(&one_path);
    }
    let ddelta = Diagram::of_generator(p, g.delta).unwrap();
    let mut d = ddelta.clone();
    for k in 2..count {
        let ids = Diagram::identity(&wires(p, g.star, g.one, k - 1));
        d = d.vcompose(p, &ids.hcompose(p, &ddelta).unwrap()).unwrap();
    }
    d
}

/// Wiring network performing `result[i] = input[perm[i]]` with adjacent
/// swaps, insertion-style: minimal crossings, deterministic.
fn permutation_network(p: &Polygraph, g: &BialgebraGens, perm: &[usize]) -> Diagram {
    let n = perm.len();
    let mut d = Diagram::identity(&wires(p, g.star, g.one, n));
    let dgamma = Diagram::of_generator(p, g.gamma).unwrap();
    let mut arr: Vec<usize> = (0..n).collect();
    for (i, &want) in perm.iter().enumerate() {
        let pos = arr.iter().position(|&x| x == want).unwrap();
        for q in (i..pos).rev() {
            // swap q, q+1
            let left = Diagram::identity(&wires(p, g.star, g.one, q));
            let right = Diagram::identity(&wires(p, g.star, g.one, n - q - 2));
            let layer = left
                .hcompose(p, &dgamma)
                .unwrap()
                .hcompose(p, &right)
                .unwrap();
            d = d.vcompose(p, &layer).unwrap();
            arr.swap(q, q + 1);
        }
    }
    d
}

/// The variable-management prefix: copies, then erasures, then a minimal
/// crossing permutation onto the occurrence order.
fn management(p: &Polygraph, g: &BialgebraGens, nvars: usize, occ: &[usize]) -> Diagram {
    let mut counts = vec![0usize; nvars + 1];
    for &v in occ {
        counts[v] += 1;
    }
    // copies
    let mut stage1 = Diagram::identity(&Path::id(g.star));
    for &count in counts.iter().skip(1) {
        let block = copy_tree(p, g, count.max(1));
        stage1 = stage1.hcompose(p, &block).unwrap();
    }
    // erasures
    let deps = Diagram::of_generator(p, g.eps).unwrap();
    let mut stage2 = Diagram::identity(&Path::id(g.star));
    for &count in counts.iter().skip(1) {
        if count == 0 {
            stage2 = stage2.hcompose(p, &deps).unwrap();
        } else {
            stage2 = stage2
                .hcompose(p, &Diagram::identity(&wires(p, g.star, g.one, count)))
                .unwrap();
        }
    }
    let copied = stage1.vcompose(p, &stage2).unwrap();
    // permutation onto occurrence order: the k-th occurrence of variable v
    // takes the k-th copy
    let mut offset = vec![0usize; nvars + 2];
    for v in 1..=nvars {
        offset[v + 1] = offset[v] + counts[v];
    }
    let mut taken = vec![0usize; nvars + 1];
    let mut perm = Vec::with_capacity(occ.len());
    for &v in occ {
        perm.push(offset[v] + taken[v]);
        taken[v] += 1;
    }
    let net = permutation_network(p, g, &perm);
    copied.vcompose(p, &net).unwrap()
}

/// The linear part of a term: symbols applied to fresh wires in order.
fn linear_diagram(
    p: &Polygraph,
    g: &BialgebraGens,
    sym_gens: &[Gen2],
    symbols: &[(String, usize)],
    t: &Term,
) -> Result<Diagram, ExamplesError> {
    match t {
        Term::Var(_) => Ok(Diagram::identity(&wires(p, g.star, g.one, 1))),
        Term::App(s, args) => {
            let (name, arity) = &symbols[*s];
            if *arity != args.len() {
                return Err(ExamplesError::ArityMismatch {
                    symbol: name.clone(),
                    expect: *arity,
                    got: args.len(),
                });
            }
            let mut below = Diagram::identity(&Path::id(g.star));
            for a in args {
                below = below
                    .hcompose(p, &linear_diagram(p, g, sym_gens, symbols, a)?)
                    .unwrap();
            }
            let node = Diagram::of_generator(p, sym_gens[*s]).unwrap();
            Ok(below.vcompose(p, &node).unwrap())
        }
    }
}

/// Translates a tuple of terms over `nvars` variables into a diagram
/// `nvars -> len(tuple)`: management prefix followed by the linear parts.
fn tuple_to_diagram(
    p: &Polygraph,
    g: &BialgebraGens,
    sym_gens: &[Gen2],
    symbols: &[(String, usize)],
    nvars: usize,
    terms: &[Term],
) -> Result<Diagram, ExamplesError> {
    let mut occ = Vec::new();
    for t in terms {
        t.occurrences(&mut occ);
    }
    let prefix = management(p, g, nvars, &occ);
    let mut linear = Diagram::identity(&Path::id(g.star));
    for t in terms {
        linear = linear.hcompose(p, &linear_diagram(p, g, sym_gens, symbols, t)?).unwrap();
    }
    Ok(prefix.vcompose(p, &linear).unwrap())
}

/// The 3-polygraph of a term rewriting system: symbols plus explicit
/// duplication, erasure and swap, the commutative-comonoid and naturality
/// rules, and one 3-generator per term rewriting rule.
pub fn trs_to_polygraph(
    name: &str,
    signature: &TrsSignature,
    rules: &[(Term, Term)],
) -> Result<Polygraph, ExamplesError> {
    let mut p = Polygraph::with_name(name);
    let star = p.add_gen0("*")?;
    let one = p.add_gen1("1", star, star)?;
    let mut sym_gens = Vec::new();
    for (sym, arity) in &signature.symbols {
        let src = wires(&p, star, one, *arity);
        let tgt = wires(&p, star, one, 1);
        sym_gens.push(p.add_gen2(sym, src, tgt)?);
    }
    let delta = p.add_gen2("delta", wires(&p, star, one, 1), wires(&p, star, one, 2))?;
    let eps = p.add_gen2("eps", wires(&p, star, one, 1), Path::id(star))?;
    let gamma = p.add_gen2("gamma", wires(&p, star, one, 2), wires(&p, star, one, 2))?;
    let g = BialgebraGens { one, star, delta, eps, gamma };
    add_comonoid_rules(&mut p, &g)?;
    for (i, g2) in sym_gens.iter().enumerate() {
        let arity = signature.symbols[i].1;
        add_naturality_rules(&mut p, &g, *g2, &signature.symbols[i].0, arity)?;
    }
    for (i, (lhs, rhs)) in rules.iter().enumerate() {
        let nvars = lhs.max_var();
        if rhs.max_var() > nvars {
            return Err(ExamplesError::UnboundVariable(rhs.max_var()));
        }
        let dl = tuple_to_diagram(&p, &g, &sym_gens, &signature.symbols, nvars, std::slice::from_ref(lhs))?;
        let dr = tuple_to_diagram(&p, &g, &sym_gens, &signature.symbols, nvars, std::slice::from_ref(rhs))?;
        p.add_gen3(&format!("r{i}"), dl, dr)?;
    }
    Ok(p)
}

/// Comonoid structure on the object: coassociativity, both counits,
/// cocommutativity.
fn add_comonoid_rules(p: &mut Polygraph, g: &BialgebraGens) -> Result<(), ExamplesError> {
    let id1 = Diagram::identity(&wires(p, g.star, g.one, 1));
    let dd = Diagram::of_generator(p, g.delta).unwrap();
    let de = Diagram::of_generator(p, g.eps).unwrap();
    let dg = Diagram::of_generator(p, g.gamma).unwrap();
    let coassoc_l = dd.vcompose(p, &dd.hcompose(p, &id1).unwrap()).unwrap();
    let coassoc_r = dd.vcompose(p, &id1.hcompose(p, &dd).unwrap()).unwrap();
    p.add_gen3("coassoc", coassoc_l, coassoc_r)?;
    let counit_l = dd.vcompose(p, &de.hcompose(p, &id1).unwrap()).unwrap();
    p.add_gen3("counitl", counit_l, id1.clone())?;
    let counit_r = dd.vcompose(p, &id1.hcompose(p, &de).unwrap()).unwrap();
    p.add_gen3("counitr", counit_r, id1)?;
    let cocomm = dd.vcompose(p, &dg).unwrap();
    p.add_gen3("cocomm", cocomm, dd)?;
    Ok(())
}

/// Naturality of delta, eps and gamma with respect to one symbol of the
/// given arity (coarity 1), generalizing the displayed unary pattern
/// componentwise.
fn add_naturality_rules(
    p: &mut Polygraph,
    g: &BialgebraGens,
    f: Gen2,
    fname: &str,
    arity: usize,
) -> Result<(), ExamplesError> {
    let df = Diagram::of_generator(p, f).unwrap();
    let dd = Diagram::of_generator(p, g.delta).unwrap();
    let de = Diagram::of_generator(p, g.eps).unwrap();
    let id1 = Diagram::identity(&wires(p, g.star, g.one, 1));
    let empty = Diagram::identity(&Path::id(g.star));
    // delta . f => (f (x) f) . copy-all
    let lhs = df.vcompose(p, &dd).unwrap();
    let mut copy_all = empty.clone();
    for _ in 0..arity {
        copy_all = copy_all.hcompose(p, &dd).unwrap();
    }
    // after copying pairwise: x1 x1 x2 x2 ... -> x1..xa x1..xa
    let mut perm = Vec::new();
    for k in 0..arity {
        perm.push(2 * k);
    }
    for k in 0..arity {
        perm.push(2 * k + 1);
    }
    let net = permutation_network(p, g, &perm);
    let rhs = copy_all
        .vcompose(p, &net)
        .unwrap()
        .vcompose(p, &df.hcompose(p, &df).unwrap())
        .unwrap();
    p.add_gen3(&format!("nat_delta_{fname}"), lhs, rhs)?;
    // eps . f => eps (x) ... (x) eps
    let lhs = df.vcompose(p, &de).unwrap();
    let mut rhs = empty.clone();
    for _ in 0..arity {
        rhs = rhs.hcompose(p, &de).unwrap();
    }
    p.add_gen3(&format!("nat_eps_{fname}"), lhs, rhs)?;
    // gamma . (f (x) 1) => (1 (x) f) . rotate-last-to-front
    let dgamma = Diagram::of_generator(p, g.gamma).unwrap();
    let lhs = df.hcompose(p, &id1).unwrap().vcompose(p, &dgamma).unwrap();
    let mut perm = vec![arity];
    perm.extend(0..arity);
    let net = permutation_network(p, g, &perm);
    let rhs = net.vcompose(p, &id1.hcompose(p, &df).unwrap()).unwrap();
    p.add_gen3(&format!("nat_gammal_{fname}"), lhs, rhs)?;
    // gamma . (1 (x) f) => (f (x) 1) . rotate-first-to-back
    let lhs = id1.hcompose(p, &df).unwrap().vcompose(p, &dgamma).unwrap();
    let mut perm: Vec<usize> = (1..=arity).collect();
    perm.push(0);
    let net = permutation_network(p, g, &perm);
    let rhs = net.vcompose(p, &df.hcompose(p, &id1).unwrap()).unwrap();
    p.add_gen3(&format!("nat_gammar_{fname}"), lhs, rhs)?;
    Ok(())
}

/// The theory of bicommutative bialgebras, spelled out rule by rule. The
/// commutativity rule is oriented so that it removes a swap. The term
/// rewriting system of commutative monoids translates to this polygraph.
fn bialgebra() -> Polygraph {
    let (mut p, star, one) = one_object_base("bialgebra");
    let w = |p: &Polygraph, n: usize| Path::word(p, star, &vec![one; n]).unwrap();
    let mu = p.add_gen2("mu", w(&p, 2), w(&p, 1)).unwrap();
    let eta = p.add_gen2("eta", Path::id(star), w(&p, 1)).unwrap();
    let delta = p.add_gen2("delta", w(&p, 1), w(&p, 2)).unwrap();
    let eps = p.add_gen2("eps", w(&p, 1), Path::id(star)).unwrap();
    let gamma = p.add_gen2("gamma", w(&p, 2), w(&p, 2)).unwrap();
    let dm = Diagram::of_generator(&p, mu).unwrap();
    let de = Diagram::of_generator(&p, eta).unwrap();
    let dd = Diagram::of_generator(&p, delta).unwrap();
    let dx = Diagram::of_generator(&p, eps).unwrap();
    let dg = Diagram::of_generator(&p, gamma).unwrap();
    let id = |p: &Polygraph, n: usize| Diagram::identity(&w(p, n));
    let vc = |p: &Polygraph, a: &Diagram, b: &Diagram| a.vcompose(p, b).unwrap();
    let hc = |p: &Polygraph, a: &Diagram, b: &Diagram| a.hcompose(p, b).unwrap();
    // monoid rules
    let assoc_l = vc(&p, &hc(&p, &dm, &id(&p, 1)), &dm);
    let assoc_r = vc(&p, &hc(&p, &id(&p, 1), &dm), &dm);
    p.add_gen3("r0", assoc_l, assoc_r).unwrap();
    p.add_gen3("r1", vc(&p, &hc(&p, &de, &id(&p, 1)), &dm), id(&p, 1)).unwrap();
    p.add_gen3("r2", vc(&p, &hc(&p, &id(&p, 1), &de), &dm), id(&p, 1)).unwrap();
    p.add_gen3("r3", vc(&p, &dg, &dm), dm.clone()).unwrap();
    // comonoid rules
    let coassoc_l = vc(&p, &dd, &hc(&p, &dd, &id(&p, 1)));
    let coassoc_r = vc(&p, &dd, &hc(&p, &id(&p, 1), &dd));
    p.add_gen3("coassoc", coassoc_l, coassoc_r).unwrap();
    p.add_gen3("counitl", vc(&p, &dd, &hc(&p, &dx, &id(&p, 1))), id(&p, 1)).unwrap();
    p.add_gen3("counitr", vc(&p, &dd, &hc(&p, &id(&p, 1), &dx)), id(&p, 1)).unwrap();
    p.add_gen3("cocomm", vc(&p, &dd, &dg), dd.clone()).unwrap();
    // naturality of delta, eps, gamma with respect to mu
    let copy2 = hc(&p, &dd, &dd);
    let mid_swap = hc(&p, &hc(&p, &id(&p, 1), &dg), &id(&p, 1));
    let mumu = hc(&p, &dm, &dm);
    p.add_gen3(
        "nat_delta_mu",
        vc(&p, &dm, &dd),
        vc(&p, &vc(&p, &copy2, &mid_swap), &mumu),
    )
    .unwrap();
    p.add_gen3("nat_eps_mu", vc(&p, &dm, &dx), hc(&p, &dx, &dx)).unwrap();
    // (x,y,z) -> (z,x,y) and (z,x,y) -> (x,y,z)
    let rot_l = vc(&p, &hc(&p, &id(&p, 1), &dg), &hc(&p, &dg, &id(&p, 1)));
    let rot_r = vc(&p, &hc(&p, &dg, &id(&p, 1)), &hc(&p, &id(&p, 1), &dg));
    p.add_gen3(
        "nat_gammal_mu",
        vc(&p, &hc(&p, &dm, &id(&p, 1)), &dg),
        vc(&p, &rot_l, &hc(&p, &id(&p, 1), &dm)),
    )
    .unwrap();
    p.add_gen3(
        "nat_gammar_mu",
        vc(&p, &hc(&p, &id(&p, 1), &dm), &dg),
        vc(&p, &rot_r, &hc(&p, &dm, &id(&p, 1))),
    )
    .unwrap();
    // naturality with respect to eta
    p.add_gen3("nat_delta_eta", vc(&p, &de, &dd), hc(&p, &de, &de)).unwrap();
    p.add_gen3("nat_eps_eta", vc(&p, &de, &dx), id(&p, 0)).unwrap();
    p.add_gen3(
        "nat_gammal_eta",
        vc(&p, &hc(&p, &de, &id(&p, 1)), &dg),
        hc(&p, &id(&p, 1), &de),
    )
    .unwrap();
    p.add_gen3(
        "nat_gammar_eta",
        vc(&p, &hc(&p, &id(&p, 1), &de), &dg),
        hc(&p, &de, &id(&p, 1)),
    )
    .unwrap();
    p
}

// ---------------------------------------------------------------------------
// Matrix semantics
// ---------------------------------------------------------------------------

/// A natural-number matrix; a morphism `m -> n` is an `n x m` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

impl NMatrix {
    pub fn new(rows: usize, cols: usize) -> NMatrix {
        NMatrix { rows, cols, entries: vec![vec![0; cols]; rows] }
    }

    pub fn identity(n: usize) -> NMatrix {
        let mut m = NMatrix::new(n, n);
        for i in 0..n {
            m.entries[i][i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize) -> NMatrix {
        NMatrix { rows: rows.len(), cols, entries: rows }
    }

    /// Matrix product `self * other`.
    pub fn product(&self, other: &NMatrix) -> NMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = NMatrix::new(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.entries[i][j] = (0..self.cols)
                    .map(|k| self.entries[i][k] * other.entries[k][j])
                    .sum();
            }
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &NMatrix) -> NMatrix {
        let mut out = NMatrix::new(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.entries[i][..self.cols].copy_from_slice(&self.entries[i]);
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.entries[self.rows + i][self.cols + j] = other.entries[i][j];
            }
        }
        out
    }

    pub fn swap() -> NMatrix {
        NMatrix::from_rows(vec![vec![0, 1], vec![1, 0]], 2)
    }
}

/// Compositional evaluation of a bialgebra diagram into natural-number
/// matrices: vertical composition becomes matrix product, horizontal
/// composition becomes direct sum. Generators are recognized by their
/// boundary arities (2->1, 0->1, 1->2, 1->0, 2->2), which are distinct in
/// the bialgebra theory.
pub fn matrix_semantics(sig: &Polygraph, d: &Diagram) -> Result<NMatrix, ExamplesError> {
    let layers = d
        .decompose()
        .map_err(|e| ExamplesError::UnknownSymbol(e.to_string()))?;
    let mut m = NMatrix::identity(d.source_wires().len());
    for layer in layers {
        let node = match layer.label {
            NodeLabel::Gen(g) => {
                let (a, b) = (sig.src2(g).len(), sig.tgt2(g).len());
                match (a, b) {
                    (2, 1) => NMatrix::from_rows(vec![vec![1, 1]], 2),
                    (0, 1) => NMatrix::from_rows(vec![vec![]], 0),
                    (1, 2) => NMatrix::from_rows(vec![vec![1], vec![1]], 1),
                    (1, 0) => NMatrix::new(0, 1),
                    (2, 2) => NMatrix::swap(),
                    _ => {
                        return Err(ExamplesError::UnknownSymbol(sig.name2(g).to_string()));
                    }
                }
            }
            other => {
                return Err(ExamplesError::UnknownSymbol(format!("{other:?}")));
            }
        };
        let block = NMatrix::identity(layer.left.len())
            .direct_sum(&node)
            .direct_sum(&NMatrix::identity(layer.right.len()));
        m = block.product(&m);
    }
    Ok(m)
}

/// Builds the diagram of a term tuple over the bialgebra signature; used by
/// tests and the matrix-semantics examples.
pub fn bialgebra_tuple(p: &Polygraph, nvars: usize, terms: &[Term]) -> Result<Diagram, ExamplesError> {
    let g = BialgebraGens {
        one: p.find_gen1("1").expect("object generator"),
        star: p.gens0().next().expect("base object"),
        delta: p.find_gen2("delta").expect("delta"),
        eps: p.find_gen2("eps").expect("eps"),
        gamma: p.find_gen2("gamma").expect("gamma"),
    };
    let sym_gens = vec![
        p.find_gen2("mu").expect("mu"),
        p.find_gen2("eta").expect("eta"),
    ];
    let symbols = vec![("mu".to_string(), 2), ("eta".to_string(), 0)];
    tuple_to_diagram(p, &g, &sym_gens, &symbols, nvars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_monoid_counts() {
        let p = builtin("monoid").unwrap();
        assert_eq!(
            (p.count(0), p.count(1), p.count(2), p.count(3)),
            (1, 1, 2, 3)
        );
        assert!(p.validate().is_empty());
    }

    #[test]
    fn builtin_symmetry_counts() {
        let p = builtin("symmetry").unwrap();
        assert_eq!((p.count(2), p.count(3)), (1, 2));
        assert!(p.validate().is_empty());
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin("nope"), Err(ExamplesError::UnknownName(_))));
    }

    #[test]
    fn delta_truncation_counts() {
        let p = builtin("delta(3)").unwrap();
        assert!(p.validate().is_empty());
        // frozen counts for bound 3: objects 0..3, mu_i^m for m in {1,2},
        // eta_i^m for m in {0,1,2}
        assert_eq!(p.count(0), 4);
        assert_eq!(p.count(1), 1 + 2 + 1 + 2 + 3);
        // rule families instantiated within the bound (frozen):
        // 1 mu-mu, 4 eta-eta, 8 mu-eta
        assert_eq!(p.count(2), 13);
        let p2 = builtin("delta(4)").unwrap();
        assert!(p2.validate().is_empty());
        assert!(p2.count(2) > p.count(2));
    }

    #[test]
    fn trs_translation_shapes() {
        // the displayed rule f(g(x2,x1),x2) -> g(x1,x1)
        let sig = TrsSignature {
            symbols: vec![("f".to_string(), 2), ("g".to_string(), 2)],
        };
        let lhs = Term::app(
            0,
            vec![Term::app(1, vec![Term::var(2), Term::var(1)]), Term::var(2)],
        );
        let rhs = Term::app(1, vec![Term::var(1), Term::var(1)]);
        let p = trs_to_polygraph("ex", &sig, &[(lhs, rhs)]).unwrap();
        assert!(p.validate().is_empty());
        let r = p.find_gen3("r0").unwrap();
        let l = p.lhs(r);
        // f . (g (x) id) . (gamma (x) id) . (id (x) delta): 4 nodes
        assert_eq!(l.size(), 4);
        assert_eq!(l.weight(p.find_gen2("gamma").unwrap()), 1);
        assert_eq!(l.weight(p.find_gen2("delta").unwrap()), 1);
        let rr = p.rhs(r);
        assert_eq!(rr.size(), 3);
        assert_eq!(rr.weight(p.find_gen2("eps").unwrap()), 1);
    }

    #[test]
    fn linear_rule_needs_no_management() {
        let sig = TrsSignature {
            symbols: vec![("f".to_string(), 2), ("g".to_string(), 2)],
        };
        let lhs = Term::app(0, vec![Term::var(1), Term::var(2)]);
        let rhs = Term::app(1, vec![Term::var(1), Term::var(2)]);
        let p = trs_to_polygraph("lin", &sig, &[(lhs, rhs)]).unwrap();
        let r = p.find_gen3("r0").unwrap();
        for side in [p.lhs(r), p.rhs(r)] {
            assert_eq!(side.weight(p.find_gen2("delta").unwrap()), 0);
            assert_eq!(side.weight(p.find_gen2("eps").unwrap()), 0);
            assert_eq!(side.weight(p.find_gen2("gamma").unwrap()), 0);
        }
    }

    #[test]
    fn arity_mismatch_rejected() {
        let sig = TrsSignature { symbols: vec![("f".to_string(), 2)] };
        let bad = Term::app(0, vec![Term::var(1)]);
        assert!(matches!(
            trs_to_polygraph("bad", &sig, &[(bad, Term::var(1))]),
            Err(ExamplesError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn bialgebra_counts() {
        let p = builtin("bialgebra").unwrap();
        assert_eq!(p.count(2), 5);
        assert_eq!(p.count(3), 16);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn matrix_of_the_example_tuple() {
        let p = builtin("bialgebra").unwrap();
        // (m(m(x1,x1),x2), e, x2) : 2 -> 3
        let t1 = Term::app(
            0,
            vec![Term::app(0, vec![Term::var(1), Term::var(1)]), Term::var(2)],
        );
        let t2 = Term::app(1, vec![]);
        let t3 = Term::var(2);
        let d = bialgebra_tuple(&p, 2, &[t1, t2, t3]).unwrap();
        let m = matrix_semantics(&p, &d).unwrap();
        assert_eq!(m.entries, vec![vec![2, 1], vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn matrix_of_identity_and_swap() {
        let p = builtin("bialgebra").unwrap();
        let one = p.find_gen1("1").unwrap();
        let star = p.gens0().next().unwrap();
        let id2 = Diagram::identity(&Path::word(&p, star, &[one, one]).unwrap());
        assert_eq!(matrix_semantics(&p, &id2).unwrap(), NMatrix::identity(2));
        let dg = Diagram::of_generator(&p, p.find_gen2("gamma").unwrap()).unwrap();
        assert_eq!(matrix_semantics(&p, &dg).unwrap(), NMatrix::swap());
    }

    #[test]
    fn matrix_functorial() {
        let p = builtin("bialgebra").unwrap();
        let dd = Diagram::of_generator(&p, p.find_gen2("delta").unwrap()).unwrap();
        let dm = Diagram::of_generator(&p, p.find_gen2("mu").unwrap()).unwrap();
        let v = dd.vcompose(&p, &dm).unwrap();
        let mv = matrix_semantics(&p, &v).unwrap();
        let expect = matrix_semantics(&p, &dm)
            .unwrap()
            .product(&matrix_semantics(&p, &dd).unwrap());
        assert_eq!(mv, expect);
        let h = dd.hcompose(&p, &dm).unwrap();
        let mh = matrix_semantics(&p, &h).unwrap();
        let expect = matrix_semantics(&p, &dd)
            .unwrap()
            .direct_sum(&matrix_semantics(&p, &dm).unwrap());
        assert_eq!(mh, expect);
    }
}

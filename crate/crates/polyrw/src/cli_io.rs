//! Textual polygraph format, cell expression parser, pretty-printer and the
//! DOT/TikZ renderers.
//!
//! A `.poly` file starts with `poly NAME` and declares generators one per
//! line, tagged by dimension:
//!
//! ```text
//! poly monoid
//! [0] *
//! [1] 1 : * -> *
//! [2] mu : 1 1 => 1
//! [2] eta : id(*) => 1
//! [3] a : (mu * id(1)) . mu => (id(1) * mu) . mu
//! ```
//!
//! In cell expressions `.` is vertical composition in diagrammatic order
//! (the left operand is applied first), `*` is horizontal composition,
//! `id(PATH)` an identity, `eta(f,n)`/`eps(f,n)` the compact units, and
//! `?h : SRC => TGT` a typed hole. Windings are written `f^n`.

use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::context::{Context, HoleType};
use crate::diagram::{Diagram, HoleId, NodeLabel, WireId};
use crate::path::{Letter, Path};
use crate::signature::{Gen0, Polygraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

fn err<T>(line: usize, col: usize, expected: &str) -> Result<T, ParseError> {
    Err(ParseError { line, col, expected: expected.to_string() })
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i32),
    Dot,
    Star,
    LParen,
    RParen,
    Comma,
    Caret,
    Question,
    Colon,
    Arrow1, // ->
    Arrow2, // =>
}

#[derive(Debug, Clone)]
struct Sp {
    tok: Tok,
    col: usize,
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Sp>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '#' => break,
            '.' => {
                out.push(Sp { tok: Tok::Dot, col });
                i += 1;
            }
            '(' => {
                out.push(Sp { tok: Tok::LParen, col });
                i += 1;
            }
            ')' => {
                out.push(Sp { tok: Tok::RParen, col });
                i += 1;
            }
            ',' => {
                out.push(Sp { tok: Tok::Comma, col });
                i += 1;
            }
            '^' => {
                out.push(Sp { tok: Tok::Caret, col });
                i += 1;
            }
            '?' => {
                out.push(Sp { tok: Tok::Question, col });
                i += 1;
            }
            ':' => {
                out.push(Sp { tok: Tok::Colon, col });
                i += 1;
            }
            '=' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Sp { tok: Tok::Arrow2, col });
                    i += 2;
                } else {
                    return err(line, col, "`=>`");
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Sp { tok: Tok::Arrow1, col });
                    i += 2;
                    continue;
                }
                // negative integer
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return err(line, col, "digit or `>` after `-`");
                }
                let n: i32 = chars[i..j].iter().collect::<String>().parse().unwrap();
                out.push(Sp { tok: Tok::Int(n), col });
                i = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                // a bare number can be a name (objects are often numbers);
                // disambiguated by context below
                out.push(Sp { tok: Tok::Int(word.parse().unwrap()), col });
                i = j;
            }
            '*' => {
                out.push(Sp { tok: Tok::Star, col });
                i += 1;
            }
            c if is_name_char(c) => {
                let mut j = i;
                while j < chars.len() && is_name_char(chars[j]) {
                    j += 1;
                }
                out.push(Sp { tok: Tok::Name(chars[i..j].iter().collect()), col });
                i = j;
            }
            _ => return err(line, col, "token"),
        }
    }
    Ok(out)
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tok_name(t: &Tok) -> Option<String> {
    match t {
        Tok::Name(s) => Some(s.clone()),
        Tok::Int(n) => Some(n.to_string()),
        // `*` doubles as the conventional one-object name
        Tok::Star => Some("*".to_string()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------

struct P<'a> {
    sig: &'a Polygraph,
    toks: Vec<Sp>,
    pos: usize,
    line: usize,
    holes: Vec<(String, HoleId, HoleType)>,
    warned: bool,
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|s| s.col).unwrap_or_else(|| {
            self.toks.last().map(|s| s.col + 1).unwrap_or(1)
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.line, self.col(), what)
        }
    }

    fn fail<T>(&self, what: &str) -> Result<T, ParseError> {
        err(self.line, self.col(), what)
    }

    /// PATH := 'id' '(' OBJ ')' LETTER* | LETTER+
    fn path(&mut self) -> Result<Path, ParseError> {
        let mut start: Option<Gen0> = None;
        let mut letters: Vec<Letter> = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::Name(n)) if n == "id" && self.toks.get(self.pos + 1).map(|s| &s.tok) == Some(&Tok::LParen) => {
                    self.bump();
                    self.bump();
                    let obj = match self.bump().as_ref().and_then(tok_name) {
                        Some(n) => n,
                        None => return self.fail("object name"),
                    };
                    self.expect(Tok::RParen, "`)`")?;
                    let g = self
                        .sig
                        .find_gen0(&obj)
                        .ok_or_else(|| ParseError {
                            line: self.line,
                            col: self.col(),
                            expected: format!("declared 0-generator (got `{obj}`)"),
                        })?;
                    if start.is_none() && letters.is_empty() {
                        start = Some(g);
                    }
                }
                Some(t) => match tok_name(&t) {
                    Some(name) => {
                        let g = match self.sig.find_gen1(&name) {
                            Some(g) => g,
                            None => break,
                        };
                        self.bump();
                        let mut winding = 0;
                        if self.peek() == Some(&Tok::Caret) {
                            self.bump();
                            match self.bump() {
                                Some(Tok::Int(n)) => winding = n,
                                _ => return self.fail("winding integer"),
                            }
                        }
                        if winding.abs() > 8 && !self.warned {
                            self.warned = true;
                            eprintln!(
                                "warning: winding magnitude {winding} exceeds 8; \
                                 large windings usually indicate encoding errors"
                            );
                        }
                        letters.push(Letter::new(g, winding));
                    }
                    None => break,
                },
                None => break,
            }
        }
        match (start, letters.is_empty()) {
            (Some(s), _) => Path::from_letters(self.sig, s, letters)
                .map_err(|e| ParseError { line: self.line, col: self.col(), expected: e.to_string() }),
            (None, false) => {
                let s = letters[0].endpoints(self.sig).0;
                Path::from_letters(self.sig, s, letters)
                    .map_err(|e| ParseError { line: self.line, col: self.col(), expected: e.to_string() })
            }
            (None, true) => self.fail("path"),
        }
    }

    /// CELL := HCELL ('.' HCELL)*
    fn cell(&mut self) -> Result<Diagram, ParseError> {
        let mut acc = self.hcell()?;
        while self.peek() == Some(&Tok::Dot) {
            self.bump();
            let rhs = self.hcell()?;
            acc = acc.vcompose(self.sig, &rhs).map_err(|e| ParseError {
                line: self.line,
                col: self.col(),
                expected: e.to_string(),
            })?;
        }
        Ok(acc)
    }

    /// HCELL := ATOM ('*' ATOM)*
    fn hcell(&mut self) -> Result<Diagram, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            // `*` is horizontal composition unless it is the object `*`
            // inside id(...), which the atom parser already consumed
            self.bump();
            let rhs = self.atom()?;
            acc = acc.hcompose(self.sig, &rhs).map_err(|e| ParseError {
                line: self.line,
                col: self.col(),
                expected: e.to_string(),
            })?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Diagram, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.bump();
                let d = self.cell()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(d)
            }
            Some(Tok::Question) => {
                self.bump();
                let name = match self.bump().as_ref().and_then(tok_name) {
                    Some(n) => n,
                    None => return self.fail("hole name"),
                };
                self.expect(Tok::Colon, "`:`")?;
                let src = self.path()?;
                self.expect(Tok::Arrow2, "`=>`")?;
                let tgt = self.path()?;
                let t = HoleType { src, tgt };
                let h = HoleId(self.holes.len() as u32);
                self.holes.push((name, h, t.clone()));
                let ctx = Context::identity(&t);
                let mut body = ctx.body;
                let n = body.hole_node(HoleId(0)).expect("hole");
                body.node_mut(n).label = NodeLabel::Hole(h);
                Ok(body)
            }
            Some(Tok::Name(n)) if n == "id" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let p = self.path()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Diagram::identity(&p))
            }
            Some(Tok::Name(n))
                if (n == "eta" || n == "eps")
                    && self.toks.get(self.pos + 1).map(|s| &s.tok) == Some(&Tok::LParen) =>
            {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let f = match self.bump().as_ref().and_then(tok_name) {
                    Some(f) => f,
                    None => return self.fail("1-generator"),
                };
                self.expect(Tok::Comma, "`,`")?;
                let w = match self.bump() {
                    Some(Tok::Int(k)) => k,
                    _ => return self.fail("winding integer"),
                };
                self.expect(Tok::RParen, "`)`")?;
                let g = self.sig.find_gen1(&f).ok_or_else(|| ParseError {
                    line: self.line,
                    col: self.col(),
                    expected: format!("declared 1-generator (got `{f}`)"),
                })?;
                let d = if n == "eta" {
                    crate::compact::eta(self.sig, g, w)
                } else {
                    crate::compact::eps(self.sig, g, w)
                };
                d.map_err(|e| ParseError {
                    line: self.line,
                    col: self.col(),
                    expected: e.to_string(),
                })
            }
            Some(t) => match tok_name(&t) {
                Some(name) => {
                    if let Some(g) = self.sig.find_gen2(&name) {
                        self.bump();
                        return Diagram::of_generator(self.sig, g).map_err(|e| ParseError {
                            line: self.line,
                            col: self.col(),
                            expected: e.to_string(),
                        });
                    }
                    self.fail(&format!("declared 2-generator or cell atom (got `{name}`)"))
                }
                None => self.fail("cell atom"),
            },
            None => self.fail("cell atom"),
        }
    }
}

/// Parses a cell expression over a signature. Holes are allowed; the
/// resulting context lists them in order of appearance.
pub fn parse_cell(sig: &Polygraph, text: &str) -> Result<Context, ParseError> {
    let toks = tokenize(1, text)?;
    let mut p = P { sig, toks, pos: 0, line: 1, holes: Vec::new(), warned: false };
    let body = p.cell()?;
    if p.pos != p.toks.len() {
        return err(1, p.col(), "end of expression");
    }
    Ok(Context {
        body,
        holes: p.holes.iter().map(|(_, h, t)| (*h, t.clone())).collect(),
    })
}

/// Parses a hole-free cell expression.
pub fn parse_plain_cell(sig: &Polygraph, text: &str) -> Result<Diagram, ParseError> {
    let ctx = parse_cell(sig, text)?;
    if !ctx.holes.is_empty() {
        return err(1, 1, "hole-free cell");
    }
    Ok(ctx.body)
}

/// Parses a polygraph file.
pub fn parse(text: &str) -> Result<Polygraph, ParseError> {
    let mut sig = Polygraph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("poly ") {
            sig.set_name(rest.trim());
            continue;
        }
        if !trimmed.starts_with('[') {
            return err(line, 1, "`[DIM]` declaration or `poly NAME`");
        }
        let close = match trimmed.find(']') {
            Some(i) => i,
            None => return err(line, 1, "`]`"),
        };
        let dim: u8 = match trimmed[1..close].trim().parse() {
            Ok(d) if d <= 3 => d,
            _ => return err(line, 2, "dimension 0..3"),
        };
        let rest = trimmed[close + 1..].trim();
        let toks = tokenize(line, rest)?;
        if dim == 0 {
            let name = match toks.first().map(|s| &s.tok).and_then(tok_name) {
                Some(n) => n,
                None => return err(line, close + 2, "0-generator name"),
            };
            sig.add_gen0(&name)
                .map_err(|e| ParseError { line, col: close + 2, expected: e.to_string() })?;
            continue;
        }
        // NAME : LHS (->|=>) RHS
        let name = match toks.first().map(|s| &s.tok).and_then(tok_name) {
            Some(n) => n,
            None => return err(line, close + 2, "generator name"),
        };
        if toks.get(1).map(|s| &s.tok) != Some(&Tok::Colon) {
            return err(line, toks.get(1).map(|s| s.col).unwrap_or(1), "`:`");
        }
        match dim {
            1 => {
                let arrow = toks
                    .iter()
                    .position(|s| s.tok == Tok::Arrow1)
                    .ok_or_else(|| ParseError { line, col: 1, expected: "`->`".to_string() })?;
                let obj = |slice: &[Sp], what: &str| -> Result<Gen0, ParseError> {
                    let name = slice
                        .first()
                        .map(|s| &s.tok)
                        .and_then(tok_name)
                        .ok_or_else(|| ParseError { line, col: 1, expected: what.to_string() })?;
                    sig.find_gen0(&name).ok_or_else(|| ParseError {
                        line,
                        col: 1,
                        expected: format!("declared 0-generator (got `{name}`)"),
                    })
                };
                let src = obj(&toks[2..arrow], "source object")?;
                let tgt = obj(&toks[arrow + 1..], "target object")?;
                sig.add_gen1(&name, src, tgt)
                    .map_err(|e| ParseError { line, col: 1, expected: e.to_string() })?;
            }
            2 => {
                let arrow = toks
                    .iter()
                    .position(|s| s.tok == Tok::Arrow2)
                    .ok_or_else(|| ParseError { line, col: 1, expected: "`=>`".to_string() })?;
                let mut lp = P {
                    sig: &sig,
                    toks: toks[2..arrow].to_vec(),
                    pos: 0,
                    line,
                    holes: Vec::new(),
                    warned: false,
                };
                let src = lp.path()?;
                let mut rp = P {
                    sig: &sig,
                    toks: toks[arrow + 1..].to_vec(),
                    pos: 0,
                    line,
                    holes: Vec::new(),
                    warned: false,
                };
                let tgt = rp.path()?;
                sig.add_gen2(&name, src, tgt)
                    .map_err(|e| ParseError { line, col: 1, expected: e.to_string() })?;
            }
            _ => {
                let arrow = match find_toplevel_arrow(&toks[2..]) {
                    Some(i) => i + 2,
                    None => return err(line, 1, "`=>`"),
                };
                let mut lp = P {
                    sig: &sig,
                    toks: toks[2..arrow].to_vec(),
                    pos: 0,
                    line,
                    holes: Vec::new(),
                    warned: false,
                };
                let lhs = lp.cell()?;
                if lp.pos != lp.toks.len() {
                    return err(line, lp.col(), "end of left-hand side");
                }
                let mut rp = P {
                    sig: &sig,
                    toks: toks[arrow + 1..].to_vec(),
                    pos: 0,
                    line,
                    holes: Vec::new(),
                    warned: false,
                };
                let rhs = rp.cell()?;
                if rp.pos != rp.toks.len() {
                    return err(line, rp.col(), "end of right-hand side");
                }
                sig.add_gen3(&name, lhs, rhs)
                    .map_err(|e| ParseError { line, col: 1, expected: e.to_string() })?;
            }
        }
    }
    Ok(sig)
}

/// `=>` at paren depth 0, skipping hole type annotations.
fn find_toplevel_arrow(toks: &[Sp]) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_hole = false;
    for (i, s) in toks.iter().enumerate() {
        match s.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth = depth.saturating_sub(1),
            Tok::Question => in_hole = true,
            Tok::Arrow2 => {
                if in_hole {
                    in_hole = false;
                } else if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

fn print_path(sig: &Polygraph, p: &Path) -> String {
    if p.letters.is_empty() {
        return format!("id({})", sig.name0(p.start));
    }
    p.letters
        .iter()
        .map(|l| {
            if l.winding == 0 {
                sig.name1(l.gen).to_string()
            } else {
                format!("{}^{}", sig.name1(l.gen), l.winding)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Prints a diagram as a cell expression via its layering.
pub fn print_cell(sig: &Polygraph, d: &Diagram) -> String {
    let layers = match d.decompose() {
        Ok(l) => l,
        Err(_) => return "<ill-formed>".to_string(),
    };
    if layers.is_empty() {
        return format!("id({})", print_path(sig, &d.source_path(sig)));
    }
    let mut parts = Vec::new();
    for layer in layers {
        let node = match layer.label {
            NodeLabel::Gen(g) => sig.name2(g).to_string(),
            NodeLabel::Eta(f, n) => format!("eta({},{})", sig.name1(f), n),
            NodeLabel::Eps(f, n) => format!("eps({},{})", sig.name1(f), n),
            NodeLabel::Hole(h) => format!("?h{}", h.0),
        };
        let mut factors = Vec::new();
        if !layer.left.is_empty() {
            let p = Path { start: d.start(), letters: layer.left.clone() };
            factors.push(format!("id({})", print_path(sig, &p)));
        }
        factors.push(node);
        if !layer.right.is_empty() {
            let p = Path { start: d.start(), letters: layer.right.clone() };
            factors.push(format!("id({})", print_path(sig, &p)));
        }
        let joined = factors.join(" * ");
        if factors.len() > 1 {
            parts.push(format!("({joined})"));
        } else {
            parts.push(joined);
        }
    }
    parts.join(" . ")
}

/// Prints a polygraph in the `.poly` format; `parse . print` is the
/// identity up to generator renumbering.
pub fn print(sig: &Polygraph) -> String {
    let mut out = String::new();
    if !sig.name().is_empty() {
        let _ = writeln!(out, "poly {}", sig.name());
    }
    for g in sig.gens0() {
        let _ = writeln!(out, "[0] {}", sig.name0(g));
    }
    for g in sig.gens1() {
        let (a, b) = sig.endpoints1(g);
        let _ = writeln!(out, "[1] {} : {} -> {}", sig.name1(g), sig.name0(a), sig.name0(b));
    }
    for g in sig.gens2() {
        let _ = writeln!(
            out,
            "[2] {} : {} => {}",
            sig.name2(g),
            print_path(sig, sig.src2(g)),
            print_path(sig, sig.tgt2(g))
        );
    }
    for g in sig.gens3() {
        let _ = writeln!(
            out,
            "[3] {} : {} => {}",
            sig.name3(g),
            print_cell(sig, sig.lhs(g)),
            print_cell(sig, sig.rhs(g))
        );
    }
    out
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

fn wire_name(sig: &Polygraph, d: &Diagram, w: WireId) -> String {
    let l = d.wire_label(w);
    if l.winding == 0 {
        sig.name1(l.gen).to_string()
    } else {
        format!("{}^{}", sig.name1(l.gen), l.winding)
    }
}

/// Emits the port graph in DOT, with boundary ports as points.
pub fn render_dot(sig: &Polygraph, d: &Diagram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph cell {{");
    let _ = writeln!(out, "  rankdir=TB;");
    for (i, _) in d.source_wires().iter().enumerate() {
        let _ = writeln!(out, "  src{i} [shape=point, label=\"\"];");
    }
    for (i, _) in d.target_wires().iter().enumerate() {
        let _ = writeln!(out, "  tgt{i} [shape=point, label=\"\"];");
    }
    for n in d.node_ids() {
        let label = match d.node(n).label {
            NodeLabel::Gen(g) => sig.name2(g).to_string(),
            NodeLabel::Eta(f, k) => format!("eta({},{})", sig.name1(f), k),
            NodeLabel::Eps(f, k) => format!("eps({},{})", sig.name1(f), k),
            NodeLabel::Hole(h) => format!("?h{}", h.0),
        };
        let shape = if matches!(d.node(n).label, NodeLabel::Hole(_)) { "box" } else { "circle" };
        let _ = writeln!(out, "  n{n} [shape={shape}, label=\"{label}\"];");
    }
    let wiring = match d.wiring() {
        Ok(w) => w,
        Err(_) => {
            let _ = writeln!(out, "}}");
            return out;
        }
    };
    for w in d.wire_ids() {
        let from = match wiring.producer[&w] {
            crate::diagram::Port::Source(i) => format!("src{i}"),
            crate::diagram::Port::Node(n, _) => format!("n{n}"),
            crate::diagram::Port::Target(i) => format!("tgt{i}"),
        };
        let to = match wiring.consumer[&w] {
            crate::diagram::Port::Target(i) => format!("tgt{i}"),
            crate::diagram::Port::Node(n, _) => format!("n{n}"),
            crate::diagram::Port::Source(i) => format!("src{i}"),
        };
        let _ = writeln!(out, "  {from} -> {to} [label=\"{}\"];", wire_name(sig, d, w));
    }
    let _ = writeln!(out, "}}");
    out
}

/// Emits a TikZ picture from the layering. Wires run vertically between
/// layers; use with `\usetikzlibrary{positioning}`.
pub fn render_tikz(sig: &Polygraph, d: &Diagram) -> String {
    let layers = match d.decompose() {
        Ok(l) => l,
        Err(_) => return "% ill-formed diagram".to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "% requires \\usetikzlibrary{{positioning}}");
    let _ = writeln!(out, "\\begin{{tikzpicture}}[every node/.style={{font=\\small}}]");
    let name = |l: &Letter| -> String {
        if l.winding == 0 {
            sig.name1(l.gen).to_string()
        } else {
            format!("{}^{{{}}}", sig.name1(l.gen), l.winding)
        }
    };
    // frontier of x-positions, one slot per live wire
    let mut frontier: Vec<(f32, Letter)> = d
        .source_wires()
        .iter()
        .enumerate()
        .map(|(i, w)| (i as f32, d.wire_label(*w)))
        .collect();
    for (i, (x, l)) in frontier.iter().enumerate() {
        let _ = writeln!(out, "  \\node (s{i}) at ({x},0) {{\\({}\\)}};", name(l));
    }
    for (row, layer) in layers.iter().enumerate() {
        let y = -(row as f32 + 1.0);
        let pos = layer.left.len();
        let k = layer.inputs.len();
        let span: Vec<f32> = frontier[pos..pos + k].iter().map(|(x, _)| *x).collect();
        let x = if span.is_empty() {
            pos as f32 - 0.5
        } else {
            span.iter().sum::<f32>() / span.len() as f32
        };
        let label = match layer.label {
            NodeLabel::Gen(g) => sig.name2(g).to_string(),
            NodeLabel::Eta(f, n) => format!("\\eta_{{{}^{{{n}}}}}", sig.name1(f)),
            NodeLabel::Eps(f, n) => format!("\\varepsilon_{{{}^{{{n}}}}}", sig.name1(f)),
            NodeLabel::Hole(h) => format!("?h{}", h.0),
        };
        let _ = writeln!(
            out,
            "  \\node[draw, circle, inner sep=1pt] (n{row}) at ({x},{y}) {{\\({label}\\)}};"
        );
        let outs: Vec<(f32, Letter)> = layer
            .outputs
            .iter()
            .enumerate()
            .map(|(j, l)| (x + j as f32 - (layer.outputs.len() as f32 - 1.0) / 2.0, *l))
            .collect();
        frontier.splice(pos..pos + k, outs);
    }
    let rows = layers.len() as f32;
    for (i, (x, l)) in frontier.iter().enumerate() {
        let _ = writeln!(
            out,
            "  \\node (t{i}) at ({x},{}) {{\\({}\\)}};",
            -(rows + 1.0),
            name(l)
        );
    }
    let _ = writeln!(out, "\\end{{tikzpicture}}");
    out
}

// ---------------------------------------------------------------------------
// Machine-readable output
// ---------------------------------------------------------------------------

/// Stable JSON form of a diagram.
pub fn diagram_json(sig: &Polygraph, d: &Diagram) -> Value {
    let wires: Vec<Value> = d
        .wire_ids()
        .map(|w| {
            let l = d.wire_label(w);
            json!({"id": w.0, "gen": sig.name1(l.gen), "winding": l.winding})
        })
        .collect();
    let nodes: Vec<Value> = d
        .node_ids()
        .map(|n| {
            let node = d.node(n);
            let label = match node.label {
                NodeLabel::Gen(g) => json!({"kind": "gen", "name": sig.name2(g)}),
                NodeLabel::Eta(f, k) => json!({"kind": "eta", "gen": sig.name1(f), "winding": k}),
                NodeLabel::Eps(f, k) => json!({"kind": "eps", "gen": sig.name1(f), "winding": k}),
                NodeLabel::Hole(h) => json!({"kind": "hole", "hole": h.0}),
            };
            json!({
                "id": n.0,
                "label": label,
                "inputs": node.inputs.iter().map(|w| w.0).collect::<Vec<_>>(),
                "outputs": node.outputs.iter().map(|w| w.0).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "wires": wires,
        "nodes": nodes,
        "source": d.source_wires().iter().map(|w| w.0).collect::<Vec<_>>(),
        "target": d.target_wires().iter().map(|w| w.0).collect::<Vec<_>>(),
        "expression": print_cell(sig, d),
    })
}

/// Stable JSON form of a critical-pair listing.
pub fn critical_pairs_json(sig: &Polygraph, pairs: &[crate::unify::CompactCriticalPair]) -> Value {
    let items: Vec<Value> = pairs
        .iter()
        .map(|cp| {
            let holes: Vec<Value> = cp.k1.holes[1..]
                .iter()
                .map(|(h, t)| {
                    json!({
                        "hole": h.0,
                        "src": print_path(sig, &t.src),
                        "tgt": print_path(sig, &t.tgt),
                    })
                })
                .collect();
            json!({
                "rule1": sig.name3(cp.rule1),
                "rule2": sig.name3(cp.rule2),
                "holes": holes,
                "regular": cp.is_regular_shape(),
                "overlap": diagram_json(sig, &cp.overlap),
            })
        })
        .collect();
    json!({"format": 1, "pairs": items})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn monoid_file_round_trip() {
        let sig = examples::builtin("monoid").unwrap();
        let text = print(&sig);
        let parsed = parse(&text).unwrap();
        assert!(parsed.validate().is_empty());
        assert_eq!(parsed.count(0), sig.count(0));
        assert_eq!(parsed.count(1), sig.count(1));
        assert_eq!(parsed.count(2), sig.count(2));
        assert_eq!(parsed.count(3), sig.count(3));
        for (a, b) in sig.gens3().zip(parsed.gens3()) {
            assert!(sig.lhs(a).iso(parsed.lhs(b)).is_some());
            assert!(sig.rhs(a).iso(parsed.rhs(b)).is_some());
        }
    }

    #[test]
    fn mu_declaration_shape() {
        let text = "poly t\n[0] *\n[1] 1 : * -> *\n[2] mu : 1 1 => 1\n";
        let sig = parse(text).unwrap();
        let mu = sig.find_gen2("mu").unwrap();
        assert_eq!(sig.src2(mu).len(), 2);
        assert_eq!(sig.tgt2(mu).len(), 1);
    }

    #[test]
    fn parse_error_position() {
        let text = "poly t\n[0] *\n[1] 1 : * -> *\n[2] mu : 1 1 => (1\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn unbalanced_expression() {
        let sig = examples::builtin("monoid").unwrap();
        assert!(parse_plain_cell(&sig, "(mu * id(1) . mu").is_err());
        assert!(parse_plain_cell(&sig, "mu . nope").is_err());
    }

    #[test]
    fn print_cell_and_reparse() {
        let sig = examples::builtin("monoid").unwrap();
        let d = examples::mu_mu_left(&sig);
        let text = print_cell(&sig, &d);
        let back = parse_plain_cell(&sig, &text).unwrap();
        assert!(back.iso(&d).is_some());
    }

    #[test]
    fn dot_render_mentions_ports() {
        let sig = examples::builtin("monoid").unwrap();
        let mu = sig.find_gen2("mu").unwrap();
        let d = Diagram::of_generator(&sig, mu).unwrap();
        let dot = render_dot(&sig, &d);
        assert!(dot.contains("src0"));
        assert!(dot.contains("src1"));
        assert!(dot.contains("tgt0"));
        assert_eq!(dot.matches("label=\"mu\"").count(), 1);
    }

    #[test]
    fn compact_render_shows_windings() {
        let sig = examples::builtin("monoid").unwrap();
        let one = sig.gens1().next().unwrap();
        let e = crate::compact::eta(&sig, one, 0).unwrap();
        let dot = render_dot(&sig, &e);
        assert!(dot.contains("1^-1"));
        let tikz = render_tikz(&sig, &e);
        assert!(tikz.contains("eta") || tikz.contains("\\eta"));
    }

    #[test]
    fn holes_parse() {
        let sig = examples::builtin("monoid").unwrap();
        let ctx = parse_cell(&sig, "(?x : 1 1 => 1) . (?y : 1 => 1)").unwrap();
        assert_eq!(ctx.holes.len(), 2);
        ctx.validate(&sig).unwrap();
    }
}

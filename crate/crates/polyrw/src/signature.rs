//! Polygraphs up to dimension 3: the rewriting system definition layer.
//!
//! A polygraph holds named generators in dimensions 0..3. A 1-generator has
//! 0-generators as endpoints, a 2-generator has parallel winding-free paths as
//! boundary, and a 3-generator rewrites a diagram into a parallel diagram.
//! The globular equations are enforced on insertion and re-checked by
//! [`Polygraph::validate`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::Diagram;
use crate::path::Path;

macro_rules! gen_id {
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

gen_id!(/// Index of a 0-generator (an object).
    Gen0);
gen_id!(/// Index of a 1-generator (an edge of the 1-skeleton).
    Gen1);
gen_id!(/// Index of a 2-generator (a node label for diagrams).
    Gen2);
gen_id!(/// Index of a 3-generator (a rewriting rule).
    Gen3);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate name `{0}` in dimension {1}")]
    DuplicateName(String, u8),
    #[error("globular violation for `{0}`: {1}")]
    GlobularViolation(String, String),
    #[error("invalid cell for `{0}`: {1}")]
    InvalidCell(String, String),
}

/// A violation found by [`Polygraph::validate`]; empty report means valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownGenerator { dim: u8, index: u32, detail: String },
    GlobularViolation { dim: u8, index: u32, detail: String },
    IllFormedCell { dim: u8, index: u32, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Gen1Data {
    name: String,
    src: Gen0,
    tgt: Gen0,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Gen2Data {
    name: String,
    src: Path,
    tgt: Path,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Gen3Data {
    name: String,
    lhs: Diagram,
    rhs: Diagram,
}

/// A polygraph of dimension at most 3.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Polygraph {
    name: String,
    gens0: Vec<String>,
    gens1: Vec<Gen1Data>,
    gens2: Vec<Gen2Data>,
    gens3: Vec<Gen3Data>,
}

impl Polygraph {
    pub fn new() -> Self {
        Polygraph::default()
    }

    pub fn with_name(name: &str) -> Self {
        Polygraph { name: name.to_string(), ..Default::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    fn check_fresh(&self, dim: u8, name: &str) -> Result<(), SignatureError> {
        let taken = match dim {
            0 => self.gens0.iter().any(|n| n == name),
            1 => self.gens1.iter().any(|g| g.name == name),
            2 => self.gens2.iter().any(|g| g.name == name),
            _ => self.gens3.iter().any(|g| g.name == name),
        };
        if taken {
            Err(SignatureError::DuplicateName(name.to_string(), dim))
        } else {
            Ok(())
        }
    }

    pub fn add_gen0(&mut self, name: &str) -> Result<Gen0, SignatureError> {
        self.check_fresh(0, name)?;
        self.gens0.push(name.to_string());
        Ok(Gen0(self.gens0.len() as u32 - 1))
    }

    pub fn add_gen1(&mut self, name: &str, src: Gen0, tgt: Gen0) -> Result<Gen1, SignatureError> {
        self.check_fresh(1, name)?;
        for g in [src, tgt] {
            if g.0 as usize >= self.gens0.len() {
                return Err(SignatureError::UnknownGenerator(format!("0-generator {g}")));
            }
        }
        self.gens1.push(Gen1Data { name: name.to_string(), src, tgt });
        Ok(Gen1(self.gens1.len() as u32 - 1))
    }

    /// Adds a 2-generator with winding-free parallel boundary paths.
    pub fn add_gen2(&mut self, name: &str, src: Path, tgt: Path) -> Result<Gen2, SignatureError> {
        self.check_fresh(2, name)?;
        for p in [&src, &tgt] {
            if !p.is_winding_free() {
                return Err(SignatureError::InvalidCell(
                    name.to_string(),
                    "2-generator boundary must be winding-free".to_string(),
                ));
            }
            for l in &p.letters {
                if l.gen.0 as usize >= self.gens1.len() {
                    return Err(SignatureError::UnknownGenerator(format!("1-generator {}", l.gen)));
                }
            }
        }
        if src.endpoints(self) != tgt.endpoints(self) {
            return Err(SignatureError::GlobularViolation(
                name.to_string(),
                "source and target paths are not parallel".to_string(),
            ));
        }
        self.gens2.push(Gen2Data { name: name.to_string(), src, tgt });
        Ok(Gen2(self.gens2.len() as u32 - 1))
    }

    /// Adds a rewriting rule; both sides must be valid parallel diagrams.
    pub fn add_gen3(&mut self, name: &str, lhs: Diagram, rhs: Diagram) -> Result<Gen3, SignatureError> {
        self.check_fresh(3, name)?;
        for (side, d) in [("lhs", &lhs), ("rhs", &rhs)] {
            d.validate(self).map_err(|e| {
                SignatureError::InvalidCell(name.to_string(), format!("{side}: {e}"))
            })?;
            if d.has_holes() {
                return Err(SignatureError::InvalidCell(
                    name.to_string(),
                    format!("{side} contains holes"),
                ));
            }
        }
        if lhs.source_path(self) != rhs.source_path(self) || lhs.target_path(self) != rhs.target_path(self) {
            return Err(SignatureError::GlobularViolation(
                name.to_string(),
                "rule sides are not parallel".to_string(),
            ));
        }
        self.gens3.push(Gen3Data { name: name.to_string(), lhs, rhs });
        Ok(Gen3(self.gens3.len() as u32 - 1))
    }

    pub fn gens0(&self) -> impl Iterator<Item = Gen0> + '_ {
        (0..self.gens0.len() as u32).map(Gen0)
    }

    pub fn gens1(&self) -> impl Iterator<Item = Gen1> + '_ {
        (0..self.gens1.len() as u32).map(Gen1)
    }

    pub fn gens2(&self) -> impl Iterator<Item = Gen2> + '_ {
        (0..self.gens2.len() as u32).map(Gen2)
    }

    pub fn gens3(&self) -> impl Iterator<Item = Gen3> + '_ {
        (0..self.gens3.len() as u32).map(Gen3)
    }

    pub fn count(&self, dim: u8) -> usize {
        match dim {
            0 => self.gens0.len(),
            1 => self.gens1.len(),
            2 => self.gens2.len(),
            3 => self.gens3.len(),
            _ => 0,
        }
    }

    pub fn name0(&self, g: Gen0) -> &str {
        &self.gens0[g.0 as usize]
    }

    pub fn name1(&self, g: Gen1) -> &str {
        &self.gens1[g.0 as usize].name
    }

    pub fn name2(&self, g: Gen2) -> &str {
        &self.gens2[g.0 as usize].name
    }

    pub fn name3(&self, g: Gen3) -> &str {
        &self.gens3[g.0 as usize].name
    }

    pub fn find_gen0(&self, name: &str) -> Option<Gen0> {
        self.gens0.iter().position(|n| n == name).map(|i| Gen0(i as u32))
    }

    pub fn find_gen1(&self, name: &str) -> Option<Gen1> {
        self.gens1.iter().position(|g| g.name == name).map(|i| Gen1(i as u32))
    }

    pub fn find_gen2(&self, name: &str) -> Option<Gen2> {
        self.gens2.iter().position(|g| g.name == name).map(|i| Gen2(i as u32))
    }

    pub fn find_gen3(&self, name: &str) -> Option<Gen3> {
        self.gens3.iter().position(|g| g.name == name).map(|i| Gen3(i as u32))
    }

    /// Endpoints of a 1-generator.
    pub fn endpoints1(&self, g: Gen1) -> (Gen0, Gen0) {
        let d = &self.gens1[g.0 as usize];
        (d.src, d.tgt)
    }

    pub fn src2(&self, g: Gen2) -> &Path {
        &self.gens2[g.0 as usize].src
    }

    pub fn tgt2(&self, g: Gen2) -> &Path {
        &self.gens2[g.0 as usize].tgt
    }

    pub fn lhs(&self, r: Gen3) -> &Diagram {
        &self.gens3[r.0 as usize].lhs
    }

    pub fn rhs(&self, r: Gen3) -> &Diagram {
        &self.gens3[r.0 as usize].rhs
    }

    /// The underlying polygraph of dimension `n`: higher generators dropped.
    pub fn truncate(&self, n: u8) -> Polygraph {
        let mut p = self.clone();
        if n < 3 {
            p.gens3.clear();
        }
        if n < 2 {
            p.gens2.clear();
        }
        if n < 1 {
            p.gens1.clear();
        }
        p
    }

    /// Checks every invariant; violations are returned as data.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, g) in self.gens1.iter().enumerate() {
            for e in [g.src, g.tgt] {
                if e.0 as usize >= self.gens0.len() {
                    out.push(Violation::UnknownGenerator {
                        dim: 1,
                        index: i as u32,
                        detail: format!("endpoint {e} undeclared"),
                    });
                }
            }
        }
        for (i, g) in self.gens2.iter().enumerate() {
            let mut broken = false;
            for p in [&g.src, &g.tgt] {
                for l in &p.letters {
                    if l.gen.0 as usize >= self.gens1.len() {
                        out.push(Violation::UnknownGenerator {
                            dim: 2,
                            index: i as u32,
                            detail: format!("1-generator {} undeclared", l.gen),
                        });
                        broken = true;
                    }
                }
            }
            if !broken && g.src.endpoints(self) != g.tgt.endpoints(self) {
                out.push(Violation::GlobularViolation {
                    dim: 2,
                    index: i as u32,
                    detail: "boundary paths are not parallel".to_string(),
                });
            }
        }
        for (i, g) in self.gens3.iter().enumerate() {
            let mut broken = false;
            for (side, d) in [("lhs", &g.lhs), ("rhs", &g.rhs)] {
                if let Err(e) = d.validate(self) {
                    out.push(Violation::IllFormedCell {
                        dim: 3,
                        index: i as u32,
                        detail: format!("{side}: {e}"),
                    });
                    broken = true;
                }
            }
            if !broken
                && (g.lhs.source_path(self) != g.rhs.source_path(self)
                    || g.lhs.target_path(self) != g.rhs.target_path(self))
            {
                out.push(Violation::GlobularViolation {
                    dim: 3,
                    index: i as u32,
                    detail: "rule sides are not parallel".to_string(),
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Path;

    #[test]
    fn empty_polygraph_is_valid() {
        let p = Polygraph::new();
        assert_eq!(p.count(0), 0);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn singleton_and_duplicates() {
        let mut p = Polygraph::new();
        let star = p.add_gen0("*").unwrap();
        assert_eq!(p.name0(star), "*");
        assert_eq!(p.add_gen0("*"), Err(SignatureError::DuplicateName("*".to_string(), 0)));
    }

    #[test]
    fn globular_violation_on_gen2() {
        let mut p = Polygraph::new();
        let star = p.add_gen0("*").unwrap();
        let b = p.add_gen0("B").unwrap();
        let one = p.add_gen1("1", star, star).unwrap();
        let k = p.add_gen1("k", star, b).unwrap();
        let src = Path::word(&p, star, &[one]).unwrap();
        let tgt = Path::word(&p, star, &[k]).unwrap();
        assert!(matches!(
            p.add_gen2("bad", src, tgt),
            Err(SignatureError::GlobularViolation(_, _))
        ));
    }

    #[test]
    fn truncate_composes() {
        let mut p = Polygraph::new();
        let star = p.add_gen0("*").unwrap();
        let one = p.add_gen1("1", star, star).unwrap();
        let w = Path::word(&p, star, &[one]).unwrap();
        let ww = Path::word(&p, star, &[one, one]).unwrap();
        p.add_gen2("mu", ww, w.clone()).unwrap();
        for m in 0..=3u8 {
            for n in 0..=3u8 {
                assert_eq!(p.truncate(m).truncate(n), p.truncate(m.min(n)));
            }
        }
        assert_eq!(p.truncate(3), p);
        assert_eq!(p.truncate(1).count(2), 0);
    }
}

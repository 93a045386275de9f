//! Finite simplicial sets given by nondegenerate simplices and their faces.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{ChainComplex, ComplexError};
use crate::scalar::Scalar;

/// Face of a nondegenerate simplex: `s_{j_1} … s_{j_k}(target)` with `j_1 > … > j_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceRef {
    pub degeneracies: Vec<usize>,
    pub target: String,
}

impl FaceRef {
    pub fn plain(target: impl Into<String>) -> Self {
        FaceRef { degeneracies: Vec::new(), target: target.into() }
    }

    pub fn degenerate(degeneracies: Vec<usize>, target: impl Into<String>) -> Self {
        FaceRef { degeneracies, target: target.into() }
    }
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degeneracies.is_empty() {
            return write!(f, "{}", self.target);
        }
        for j in &self.degeneracies {
            write!(f, "s_{j}")?;
        }
        write!(f, "({})", self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub name: String,
    pub faces: Vec<FaceRef>,
}

/// A simplex of the full simplicial set: a monotone surjection `eta: [d] → [n]`
/// applied to the nondegenerate simplex `base` of dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSimplex {
    pub eta: Vec<usize>,
    pub base: usize,
}

impl GenSimplex {
    pub fn nondegenerate(base: usize, dim: usize) -> Self {
        GenSimplex { eta: (0..=dim).collect(), base }
    }

    pub fn dim(&self) -> usize {
        self.eta.len() - 1
    }

    pub fn base_dim(&self) -> usize {
        *self.eta.last().unwrap()
    }

    pub fn is_degenerate(&self) -> bool {
        self.base_dim() < self.dim()
    }

    /// Degeneracy indices in normal form (strictly decreasing).
    pub fn degeneracies(&self) -> Vec<usize> {
        (0..self.dim()).rev().filter(|&j| self.eta[j] == self.eta[j + 1]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationIssue {
    DuplicateName(String),
    WrongFaceCount { simplex: String, expected: usize, found: usize },
    Dangling { simplex: String, face: usize, target: String },
    BadDegeneracy { simplex: String, face: usize, reason: String },
    Identity { simplex: String, i: usize, j: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::DuplicateName(n) => write!(f, "duplicate simplex name {n}"),
            ValidationIssue::WrongFaceCount { simplex, expected, found } => {
                write!(f, "{simplex}: expected {expected} faces, found {found}")
            }
            ValidationIssue::Dangling { simplex, face, target } => {
                write!(f, "{simplex}: face {face} refers to unknown simplex {target}")
            }
            ValidationIssue::BadDegeneracy { simplex, face, reason } => write!(f, "{simplex}: face {face}: {reason}"),
            ValidationIssue::Identity { simplex, i, j } => {
                write!(f, "{simplex}: d_{i} d_{j} != d_{} d_{i}", j - 1)
            }
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SsetError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid simplicial set: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationIssue>),
    #[error("split index {index} out of range for a simplex of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("unknown simplex {0}")]
    UnknownSimplex(String),
}

/// Nondegenerate simplices per dimension. Cells are numbered dimension by
/// dimension in listed order; that numbering is shared with the chain complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    dims: Vec<Vec<Simplex>>,
    ids: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
    /// Faces resolved to generalized simplices; filled only when valid.
    resolved: Vec<Vec<GenSimplex>>,
}

impl SimplicialSet {
    /// Assembles without checking; see [`Self::validate`].
    pub fn from_parts(dims: Vec<Vec<Simplex>>) -> Self {
        let mut ids = Vec::new();
        let mut index = HashMap::new();
        for (d, list) in dims.iter().enumerate() {
            for (k, s) in list.iter().enumerate() {
                index.entry(s.name.clone()).or_insert(ids.len());
                ids.push((d, k));
            }
        }
        let mut x = SimplicialSet { dims, ids, index, resolved: Vec::new() };
        if let Ok(r) = x.resolve_faces() {
            x.resolved = r;
        }
        x
    }

    /// Validated construction.
    pub fn new(dims: Vec<Vec<Simplex>>) -> Result<Self, SsetError> {
        let x = Self::from_parts(dims);
        let report = x.validate();
        if report.is_empty() {
            Ok(x)
        } else {
            Err(SsetError::Invalid(report))
        }
    }

    pub fn dims(&self) -> &[Vec<Simplex>] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.dims.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        let (d, k) = self.ids[id];
        &self.dims[d][k]
    }

    pub fn name(&self, id: usize) -> &str {
        &self.simplex(id).name
    }

    pub fn dim_of(&self, id: usize) -> usize {
        self.ids[id].0
    }

    pub fn vertices(&self) -> usize {
        self.dims.first().map_or(0, Vec::len)
    }

    fn face_to_gen(&self, fr: &FaceRef, dim: usize) -> Result<GenSimplex, String> {
        let target = *self.index.get(&fr.target).ok_or_else(|| format!("unknown simplex {}", fr.target))?;
        let n = self.dim_of(target);
        let k = fr.degeneracies.len();
        if n + k != dim {
            return Err(format!(
                "{} has dimension {n}, with {k} degeneracies that gives {} instead of {dim}",
                fr.target,
                n + k
            ));
        }
        if fr.degeneracies.windows(2).any(|w| w[0] <= w[1]) {
            return Err("degeneracy indices must be strictly decreasing".into());
        }
        let mut eta: Vec<usize> = (0..=n).collect();
        // s_{j_l} acts on a simplex of dimension n + (k - l), innermost first
        for (l, &j) in fr.degeneracies.iter().enumerate().rev() {
            let m = n + (k - 1 - l);
            if j > m {
                return Err(format!("s_{j} is not defined on a {m}-simplex"));
            }
            let mut next = Vec::with_capacity(eta.len() + 1);
            for v in 0..=m + 1 {
                let w = if v <= j { v } else { v - 1 };
                next.push(eta[w]);
            }
            eta = next;
        }
        Ok(GenSimplex { eta, base: target })
    }

    fn resolve_faces(&self) -> Result<Vec<Vec<GenSimplex>>, ()> {
        let mut out = Vec::with_capacity(self.ids.len());
        for id in 0..self.ids.len() {
            let s = self.simplex(id);
            let d = self.dim_of(id);
            if d == 0 {
                if !s.faces.is_empty() {
                    return Err(());
                }
                out.push(Vec::new());
                continue;
            }
            if s.faces.len() != d + 1 {
                return Err(());
            }
            let faces: Result<Vec<_>, _> = s.faces.iter().map(|f| self.face_to_gen(f, d - 1)).collect();
            out.push(faces.map_err(|_| ())?);
        }
        Ok(out)
    }

    /// `d_i` on a generalized simplex of positive dimension.
    pub fn face(&self, x: &GenSimplex, i: usize) -> GenSimplex {
        let d = x.dim();
        assert!(d >= 1 && i <= d, "face index out of range");
        let t = x.eta[i];
        let mut eta: Vec<usize> = x.eta.iter().enumerate().filter(|&(v, _)| v != i).map(|(_, &e)| e).collect();
        let still_onto = (i > 0 && x.eta[i - 1] == t) || (i < d && x.eta[i + 1] == t);
        if still_onto {
            return GenSimplex { eta, base: x.base };
        }
        for e in eta.iter_mut() {
            if *e > t {
                *e -= 1;
            }
        }
        let inner = &self.resolved[x.base][t];
        GenSimplex { eta: eta.iter().map(|&e| inner.eta[e]).collect(), base: inner.base }
    }

    /// Face spanned by the sorted vertex subset `vertices` of `x`.
    pub fn vertex_face(&self, x: &GenSimplex, vertices: &[usize]) -> GenSimplex {
        let mut cur = x.clone();
        for v in (0..=x.dim()).rev() {
            if !vertices.contains(&v) {
                cur = self.face(&cur, v);
            }
        }
        cur
    }

    /// Front face `[0..i]` and back face `[i..dim]` of the nondegenerate simplex `id`.
    pub fn front_back_faces(&self, id: usize, i: usize) -> Result<(GenSimplex, GenSimplex), SsetError> {
        let d = self.dim_of(id);
        if i > d {
            return Err(SsetError::IndexOutOfRange { index: i, dim: d });
        }
        let x = GenSimplex::nondegenerate(id, d);
        let front: Vec<usize> = (0..=i).collect();
        let back: Vec<usize> = (i..=d).collect();
        Ok((self.vertex_face(&x, &front), self.vertex_face(&x, &back)))
    }

    /// Every violated invariant; empty when the set is valid.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let mut seen = HashMap::new();
        for list in &self.dims {
            for s in list {
                if seen.insert(s.name.as_str(), ()).is_some() {
                    issues.push(ValidationIssue::DuplicateName(s.name.clone()));
                }
            }
        }
        let mut faces_ok = true;
        for id in 0..self.ids.len() {
            let s = self.simplex(id);
            let d = self.dim_of(id);
            let expected = if d == 0 { 0 } else { d + 1 };
            if s.faces.len() != expected {
                issues.push(ValidationIssue::WrongFaceCount { simplex: s.name.clone(), expected, found: s.faces.len() });
                faces_ok = false;
                continue;
            }
            for (i, fr) in s.faces.iter().enumerate() {
                if !self.index.contains_key(&fr.target) {
                    issues.push(ValidationIssue::Dangling { simplex: s.name.clone(), face: i, target: fr.target.clone() });
                    faces_ok = false;
                } else if let Err(reason) = self.face_to_gen(fr, d - 1) {
                    issues.push(ValidationIssue::BadDegeneracy { simplex: s.name.clone(), face: i, reason });
                    faces_ok = false;
                }
            }
        }
        if !faces_ok || !issues.is_empty() {
            return issues;
        }
        for id in 0..self.ids.len() {
            let d = self.dim_of(id);
            if d < 2 {
                continue;
            }
            let x = GenSimplex::nondegenerate(id, d);
            for j in 1..=d {
                for i in 0..j {
                    let lhs = self.face(&self.face(&x, j), i);
                    let rhs = self.face(&self.face(&x, i), j - 1);
                    if lhs != rhs {
                        issues.push(ValidationIssue::Identity { simplex: self.name(id).to_string(), i, j });
                    }
                }
            }
        }
        issues
    }

    /// Normalized chains: one generator per nondegenerate simplex, `∂ = Σ (-1)^i d_i`
    /// with degenerate faces dropped.
    pub fn normalized_chains<T: Scalar>(&self) -> Result<ChainComplex<T>, ComplexError> {
        let labels = (0..self.len()).map(|id| self.name(id).to_string()).collect();
        let degrees = (0..self.len()).map(|id| self.dim_of(id)).collect();
        let boundary = (0..self.len())
            .map(|id| {
                let d = self.dim_of(id);
                if d == 0 {
                    return Vec::new();
                }
                let x = GenSimplex::nondegenerate(id, d);
                (0..=d)
                    .map(|i| (i, self.face(&x, i)))
                    .filter(|(_, f)| !f.is_degenerate())
                    .map(|(i, f)| (f.base, T::sign(i as i64)))
                    .collect()
            })
            .collect();
        ChainComplex::new(labels, degrees, boundary)
    }

    /// Text form accepted by [`parse_sset`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (d, list) in self.dims.iter().enumerate() {
            out.push_str(&format!("dim {d}:\n"));
            for s in list {
                let faces: Vec<String> = s.faces.iter().map(|f| f.to_string()).collect();
                out.push_str(&format!("  {}: [{}]\n", s.name, faces.join(", ")));
            }
        }
        out
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-' | '+')
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, _src: src }
    }

    fn err(&self, message: impl Into<String>) -> SsetError {
        SsetError::Syntax { line: self.line, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), SsetError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn name(&mut self) -> Result<String, SsetError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a simplex name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<usize, SsetError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| SsetError::Syntax { line: self.line, column: start + 1, message: "expected an index".into() })
    }

    fn face(&mut self) -> Result<FaceRef, SsetError> {
        self.skip_ws();
        let start = self.pos;
        let rest: String = self.chars[self.pos..].iter().take_while(|&&c| c != ',' && c != ']').collect();
        if !rest.contains('(') {
            return Ok(FaceRef::plain(self.name()?));
        }
        let mut degeneracies = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some('(') {
                break;
            }
            if !(self.chars.get(self.pos) == Some(&'s') && self.chars.get(self.pos + 1) == Some(&'_')) {
                return Err(self.err("expected s_<index> or '('"));
            }
            self.pos += 2;
            if self.peek() == Some('{') {
                self.pos += 1;
                degeneracies.push(self.number()?);
                self.expect('}')?;
            } else {
                degeneracies.push(self.number()?);
            }
        }
        if degeneracies.is_empty() {
            self.pos = start;
            return Err(self.err("degenerate face without degeneracy operators"));
        }
        self.expect('(')?;
        let target = self.name()?;
        self.expect(')')?;
        Ok(FaceRef::degenerate(degeneracies, target))
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }
}

/// Parses and validates the text format.
///
/// ```text
/// # torus
/// dim 0:
///   v: []
/// dim 1:
///   a: [v, v]
/// dim 2:
///   t: [a, s_0(v), a]
/// ```
pub fn parse_sset(text: &str) -> Result<SimplicialSet, SsetError> {
    let mut dims: Vec<Vec<Simplex>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line);
        cur.skip_ws();
        let save = cur.pos;
        if let Ok(word) = cur.name() {
            if word == "dim" {
                cur.skip_ws();
                let d = cur.number()?;
                cur.expect(':')?;
                if !cur.at_end() {
                    return Err(cur.err("trailing characters after dimension header"));
                }
                if d != dims.len() {
                    return Err(SsetError::Syntax {
                        line,
                        column: 1,
                        message: format!("expected header for dimension {}", dims.len()),
                    });
                }
                dims.push(Vec::new());
                continue;
            }
        }
        cur.pos = save;
        let Some(list) = dims.last_mut() else {
            return Err(cur.err("simplex listed before any 'dim' header"));
        };
        let name = cur.name()?;
        cur.expect(':')?;
        cur.expect('[')?;
        let mut faces = Vec::new();
        cur.skip_ws();
        if cur.peek() == Some(']') {
            cur.pos += 1;
        } else {
            loop {
                faces.push(cur.face()?);
                cur.skip_ws();
                match cur.peek() {
                    Some(',') => cur.pos += 1,
                    Some(']') => {
                        cur.pos += 1;
                        break;
                    }
                    _ => return Err(cur.err("expected ',' or ']'")),
                }
            }
        }
        if !cur.at_end() {
            return Err(cur.err("trailing characters after face list"));
        }
        list.push(Simplex { name, faces });
    }
    SimplicialSet::new(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "dim 0:\n 0: []\n 1: []\n 2: []\ndim 1:\n 01: [1, 0]\n 02: [2, 0]\n 12: [2, 1]\ndim 2:\n 012: [12, 02, 01]\n";
    const TORUS: &str = include_str!("../fixtures/torus.sset");

    fn names(x: &SimplicialSet, g: &GenSimplex) -> (String, bool) {
        (x.name(g.base).to_string(), g.is_degenerate())
    }

    #[test]
    fn front_back_on_triangle() {
        let x = parse_sset(TRIANGLE).unwrap();
        let s = x.id("012").unwrap();
        let (f, b) = x.front_back_faces(s, 0).unwrap();
        assert_eq!((names(&x, &f), names(&x, &b)), (("0".into(), false), ("012".into(), false)));
        let (f, b) = x.front_back_faces(s, 1).unwrap();
        assert_eq!((names(&x, &f), names(&x, &b)), (("01".into(), false), ("12".into(), false)));
        let e = x.id("01").unwrap();
        let (f, b) = x.front_back_faces(e, 1).unwrap();
        assert_eq!((names(&x, &f), names(&x, &b)), (("01".into(), false), ("1".into(), false)));
        assert!(x.front_back_faces(e, 2).is_err());
    }

    #[test]
    fn degenerate_faces_compose() {
        let x = parse_sset("dim 0:\n v: []\ndim 1:\ndim 2:\n s: [s_0(v), s_0(v), s_0(v)]\n").unwrap();
        let s = GenSimplex::nondegenerate(x.id("s").unwrap(), 2);
        let e = x.face(&s, 1);
        assert_eq!(e.eta, vec![0, 0]);
        assert_eq!(e.degeneracies(), vec![0]);
        assert_eq!(x.face(&e, 0), GenSimplex::nondegenerate(0, 0));
    }

    #[test]
    fn torus_chains() {
        let x = parse_sset(TORUS).unwrap();
        assert_eq!(x.counts(), vec![1, 3, 2]);
        let c = x.normalized_chains::<i64>().unwrap();
        assert!(c.boundary_matrix(1).is_zero());
        assert_eq!(crate::algebra::snf::rank(&c.boundary_matrix(2)), 1);
    }

    #[test]
    fn round_trip() {
        for text in [TRIANGLE, TORUS, "dim 0:\n v: []\ndim 1:\n a: [v, v]\ndim 2:\n t: [a, s_{0}(v), a]\n"] {
            let x = parse_sset(text).unwrap();
            assert_eq!(parse_sset(&x.serialize()).unwrap(), x);
        }
    }

    #[test]
    fn reports_defects() {
        let dangling = SimplicialSet::from_parts(vec![
            vec![Simplex { name: "v".into(), faces: vec![] }],
            vec![Simplex { name: "a".into(), faces: vec![FaceRef::plain("v"), FaceRef::plain("w")] }],
        ]);
        assert_eq!(
            dangling.validate(),
            vec![ValidationIssue::Dangling { simplex: "a".into(), face: 1, target: "w".into() }]
        );
        let bad = "dim 0:\n 0: []\n 1: []\n 2: []\ndim 1:\n 01: [1, 0]\n 02: [2, 0]\n 12: [2, 1]\ndim 2:\n 012: [12, 01, 02]\n";
        let x = SimplicialSet::from_parts(match parse_sset(bad) {
            Err(SsetError::Invalid(_)) => {
                let mut dims = parse_sset(TRIANGLE).unwrap().dims().to_vec();
                dims[2][0].faces = vec![FaceRef::plain("12"), FaceRef::plain("01"), FaceRef::plain("02")];
                dims
            }
            other => panic!("expected an identity violation, got {other:?}"),
        });
        let issues = x.validate();
        assert!(!issues.is_empty());
        assert!(issues.iter().all(|i| matches!(i, ValidationIssue::Identity { simplex, .. } if simplex == "012")));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_sset("dim 0:\n v: [] junk\n").unwrap_err();
        assert!(matches!(err, SsetError::Syntax { line: 2, .. }), "{err}");
        let err = parse_sset("dim 0:\n v: []\ndim 1:\n a: [v v]\n").unwrap_err();
        assert!(matches!(err, SsetError::Syntax { line: 4, column: 8, .. }), "{err}");
    }
}

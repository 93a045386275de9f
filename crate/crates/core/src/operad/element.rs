use std::collections::BTreeMap;
use std::fmt;

use super::generator::{Generator, GeneratorError, Kind};

/// Planar rooted tree; leaves are inputs numbered left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Node(Generator, Vec<Tree>),
    Leaf,
}

impl Tree {
    pub fn corolla(g: Generator) -> Self {
        Tree::Node(g, vec![Tree::Leaf; g.arity()])
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(_, ch) => ch.iter().map(Tree::arity).sum(),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Tree::Leaf => 0,
            Tree::Node(g, ch) => g.degree() + ch.iter().map(Tree::degree).sum::<i64>(),
        }
    }

    pub fn vertices(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        self.postorder(&mut out);
        out
    }

    fn postorder(&self, out: &mut Vec<Generator>) {
        if let Tree::Node(g, ch) = self {
            for c in ch {
                c.postorder(out);
            }
            out.push(*g);
        }
    }

    /// Whether every root-to-leaf path (and every root-to-nullary-vertex path)
    /// meets a bimodule generator exactly once.
    pub fn is_bimodule_tree(&self) -> bool {
        fn walk(t: &Tree, seen: usize) -> bool {
            match t {
                Tree::Leaf => seen == 1,
                Tree::Node(g, ch) => {
                    let s = seen + usize::from(g.kind() == Kind::Bimodule);
                    if s > 1 {
                        return false;
                    }
                    if ch.is_empty() {
                        return s == 1;
                    }
                    ch.iter().all(|c| walk(c, s))
                }
            }
        }
        walk(self, 0)
    }

    pub fn has_bimodule_vertex(&self) -> bool {
        self.vertices().iter().any(|g| g.kind() == Kind::Bimodule)
    }

    /// Replaces leaf `p` by `sub`; also returns the total degree of the vertices
    /// that precede that leaf in postorder.
    fn graft_at(&self, p: usize, sub: &Tree) -> (Tree, i64) {
        fn walk(t: &Tree, p: usize, sub: &Tree, count: &mut usize, found: &mut bool, deg: &mut i64) -> Tree {
            match t {
                Tree::Leaf => {
                    let here = *count == p;
                    *count += 1;
                    if here {
                        *found = true;
                        sub.clone()
                    } else {
                        Tree::Leaf
                    }
                }
                Tree::Node(g, ch) => {
                    let new = ch.iter().map(|c| walk(c, p, sub, count, found, deg)).collect();
                    if !*found {
                        *deg += g.degree();
                    }
                    Tree::Node(*g, new)
                }
            }
        }
        let (mut count, mut found, mut deg) = (0, false, 0);
        let t = walk(self, p, sub, &mut count, &mut found, &mut deg);
        (t, deg)
    }

    /// Applies the counit rules: `p` under `m2_0` collapses to the sibling,
    /// `p` under `f1_0` gives `f0_0`, `p` under anything else gives zero.
    fn normalize(self) -> Option<Tree> {
        match self {
            Tree::Leaf => Some(Tree::Leaf),
            Tree::Node(g, ch) => {
                let ch: Vec<Tree> = ch.into_iter().map(Tree::normalize).collect::<Option<_>>()?;
                let is_p = |t: &Tree| matches!(t, Tree::Node(Generator::P, c) if c.is_empty());
                if !ch.iter().any(is_p) {
                    return Some(Tree::Node(g, ch));
                }
                match g {
                    Generator::M2(0) => {
                        let keep = if is_p(&ch[0]) { ch[1].clone() } else { ch[0].clone() };
                        Some(keep)
                    }
                    Generator::F1 => Some(Tree::Node(Generator::F0, Vec::new())),
                    _ => None,
                }
            }
        }
    }
}

/// `perm[planar leaf position] = input label` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub tree: Tree,
    pub perm: Vec<usize>,
}

impl Monomial {
    pub fn planar(tree: Tree) -> Self {
        let perm = (0..tree.arity()).collect();
        Monomial { tree, perm }
    }

    pub fn is_planar(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OperadError {
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("{0} is not a permutation")]
    NotAPermutation(String),
    #[error("no differential is tabulated for {0}")]
    Untabulated(Generator),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// Integer combination of tree monomials of one arity and degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperadElement {
    arity: usize,
    degree: i64,
    terms: BTreeMap<Monomial, i64>,
}

fn check_perm(p: &[usize]) -> Result<(), OperadError> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return Err(OperadError::NotAPermutation(format!("{p:?}")));
        }
        seen[x] = true;
    }
    Ok(())
}

impl OperadElement {
    pub fn zero(arity: usize, degree: i64) -> Self {
        OperadElement { arity, degree, terms: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        Self::monomial(Monomial::planar(Tree::Leaf), 1)
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(Monomial::planar(Tree::corolla(g)), 1)
    }

    pub fn monomial(m: Monomial, coefficient: i64) -> Self {
        let mut x = Self::zero(m.tree.arity(), m.tree.degree());
        x.add_monomial(m, coefficient);
        x
    }

    fn add_monomial(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn kind(&self) -> Kind {
        if self.terms.keys().any(|m| m.tree.has_bimodule_vertex()) {
            Kind::Bimodule
        } else {
            Kind::Operad
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero(self.arity, self.degree);
        for (m, v) in self.terms() {
            out.add_monomial(m.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn linear_combination(&self, a: i64, other: &Self, b: i64) -> Result<Self, OperadError> {
        if self.arity != other.arity {
            return Err(OperadError::ArityMismatch(self.arity, other.arity));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(OperadError::DegreeMismatch(self.degree, other.degree));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = Self::zero(self.arity, degree);
        for (m, v) in self.terms() {
            out.add_monomial(m.clone(), a * v);
        }
        for (m, v) in other.terms() {
            out.add_monomial(m.clone(), b * v);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, OperadError> {
        self.linear_combination(1, other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OperadError> {
        self.linear_combination(1, other, -1)
    }

    /// `x ∘_i y`: `x` substituted into input `i` (1-based) of `y`.
    pub fn compose(x: &Self, y: &Self, i: usize) -> Result<Self, OperadError> {
        if i == 0 || i > y.arity {
            return Err(OperadError::SlotOutOfRange { slot: i, arity: y.arity });
        }
        let arity = y.arity + x.arity - 1;
        let mut out = Self::zero(arity, x.degree + y.degree);
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                if let Some((m, s)) = graft(mx, my, i - 1) {
                    out.add_monomial(m, s * cx * cy);
                }
            }
        }
        Ok(out)
    }

    /// `(x_1, …, x_n) ∘ y`.
    pub fn compose_many(xs: &[&Self], y: &Self) -> Result<Self, OperadError> {
        if xs.len() != y.arity {
            return Err(OperadError::ArityMismatch(xs.len(), y.arity));
        }
        let mut acc = y.clone();
        for (s, x) in xs.iter().enumerate().rev() {
            acc = Self::compose(x, &acc, s + 1)?;
        }
        Ok(acc)
    }

    /// Left action of `sigma`: input label `j` becomes `sigma[j]`.
    pub fn act(sigma: &[usize], x: &Self) -> Result<Self, OperadError> {
        if sigma.len() != x.arity {
            return Err(OperadError::ArityMismatch(sigma.len(), x.arity));
        }
        check_perm(sigma)?;
        let mut out = Self::zero(x.arity, x.degree);
        for (m, c) in x.terms() {
            let perm = m.perm.iter().map(|&l| sigma[l]).collect();
            out.add_monomial(Monomial { tree: m.tree.clone(), perm }, c);
        }
        Ok(out)
    }

    /// Leibniz extension of the generator table.
    pub fn differential(&self) -> Result<Self, OperadError> {
        let mut out = Self::zero(self.arity, self.degree - 1);
        for (m, c) in self.terms() {
            let d = Self::act(&m.perm, &tree_differential(&m.tree)?)?;
            out = out.linear_combination(1, &d, c)?;
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            if i == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            if c.abs() != 1 {
                s.push_str(&format!("{}*", c.abs()));
            }
            s.push_str(&render_monomial(m));
        }
        s
    }
}

impl fmt::Display for OperadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Grafts `x` into input label `slot` of `y`; `None` when the counit rules give zero.
fn graft(x: &Monomial, y: &Monomial, slot: usize) -> Option<(Monomial, i64)> {
    let p = y.perm.iter().position(|&l| l == slot).expect("slot label present");
    let (tree, before) = y.tree.graft_at(p, &x.tree);
    let m = x.perm.len();
    let mut perm = Vec::with_capacity(y.perm.len() + m - 1);
    for (q, &l) in y.perm.iter().enumerate() {
        if q == p {
            perm.extend(x.perm.iter().map(|&r| slot + r));
        } else if l > slot {
            perm.push(l + m - 1);
        } else {
            perm.push(l);
        }
    }
    let sign = if (x.tree.degree() * before).rem_euclid(2) == 0 { 1 } else { -1 };
    let tree = tree.normalize()?;
    Some((Monomial { tree, perm }, sign))
}

fn tree_differential(t: &Tree) -> Result<OperadElement, OperadError> {
    match t {
        Tree::Leaf => Ok(OperadElement::zero(1, -1)),
        Tree::Node(g, ch) => {
            let mut r = OperadElement::generator(*g);
            let mut dr = generator_differential(*g)?;
            for (j, c) in ch.iter().enumerate().rev() {
                if *c == Tree::Leaf {
                    continue;
                }
                let ce = OperadElement::monomial(Monomial::planar(c.clone()), 1);
                let dc = tree_differential(c)?;
                let sign = if c.degree().rem_euclid(2) == 0 { 1 } else { -1 };
                let first = OperadElement::compose(&dc, &r, j + 1)?;
                let second = OperadElement::compose(&ce, &dr, j + 1)?;
                dr = first.linear_combination(1, &second, sign)?;
                r = OperadElement::compose(&ce, &r, j + 1)?;
            }
            Ok(dr)
        }
    }
}

fn gen(g: Generator) -> OperadElement {
    OperadElement::generator(g)
}

/// The differential table on generators.
pub fn generator_differential(g: Generator) -> Result<OperadElement, OperadError> {
    use Generator::*;
    let zero = OperadElement::zero(g.arity(), g.degree() - 1);
    let c = OperadElement::compose;
    let many = OperadElement::compose_many;
    let swap = |x: &OperadElement| OperadElement::act(&[1, 0], x);
    let sgn = |k: u32| if k.is_multiple_of(2) { 1 } else { -1 };
    if !g.is_tabulated() {
        return Err(OperadError::Untabulated(g));
    }
    match g {
        P | F0 | F1 | M2(0) => Ok(zero),
        M2(k) => {
            let prev = gen(M2(k - 1));
            prev.linear_combination(1, &swap(&prev)?, -sgn(k - 1))
        }
        M3(_) => {
            let m = gen(M2(0));
            c(&m, &m, 1)?.sub(&c(&m, &m, 2)?)
        }
        D(n) => {
            let mut out = zero;
            for k in 2..n {
                for l in 1..=(n - k + 1) {
                    let e = (k + 1) * (n - k + l);
                    let term = c(&gen(Generator::d(k)?), &gen(Generator::d(n - k + 1)?), l as usize)?;
                    out = out.linear_combination(1, &term, sgn(e))?;
                }
            }
            Ok(out)
        }
        F2(k) => {
            let f1 = gen(F1);
            let m = gen(M2(k - 1));
            let base = c(&m, &f1, 1)?.sub(&many(&[&f1, &f1], &m)?)?;
            if k == 1 {
                return Ok(base);
            }
            let f = gen(F2(k - 1));
            let sym = f.linear_combination(1, &swap(&f)?, sgn(k - 1))?;
            base.sub(&sym)
        }
        F3(_) => {
            let f1 = gen(F1);
            let f2 = gen(F2(1));
            let m3 = gen(M3(1));
            let m2 = gen(M2(0));
            let terms = [
                (1, c(&m3, &f1, 1)?),
                (-1, many(&[&f1, &f1, &f1], &m3)?),
                (-1, c(&m2, &f2, 1)?),
                (1, c(&m2, &f2, 2)?),
                (-1, many(&[&f2, &f1], &m2)?),
                (1, many(&[&f1, &f2], &m2)?),
            ];
            let mut out = zero;
            for (s, t) in terms {
                out = out.linear_combination(1, &t, s)?;
            }
            Ok(out)
        }
    }
}

fn render_tree(t: &Tree) -> String {
    match t {
        Tree::Leaf => "1".into(),
        Tree::Node(g, ch) => {
            let mut s = g.name();
            for (j, c) in ch.iter().enumerate().rev() {
                if *c == Tree::Leaf {
                    continue;
                }
                let left = render_tree(c);
                let left = if left.contains(' ') { format!("({left})") } else { left };
                let right = if s.contains(' ') { format!("({s})") } else { s };
                s = format!("{left} o{} {right}", j + 1);
            }
            s
        }
    }
}

pub fn render_monomial(m: &Monomial) -> String {
    let body = render_tree(&m.tree);
    if m.is_planar() {
        body
    } else {
        let labels: Vec<String> = m.perm.iter().map(|l| (l + 1).to_string()).collect();
        let body = if body.contains(' ') { format!("({body})") } else { body };
        format!("[{}]{}", labels.join(","), body)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DSquaredReport {
    pub checked: Vec<String>,
    /// `(generator, nonzero ∂∂ rendered)`.
    pub violations: Vec<(String, String)>,
}

impl DSquaredReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tabulated generators with arity and degree within the bounds (the unit included).
pub fn tabulated_generators(max_arity: usize, max_degree: i64) -> Vec<Generator> {
    let mut out = vec![Generator::P, Generator::F0, Generator::F1];
    for k in 0..=max_degree.max(0) as u32 {
        out.push(Generator::M2(k));
    }
    for k in 1..=max_degree.max(0) as u32 {
        out.push(Generator::F2(k));
    }
    out.push(Generator::M3(1));
    out.push(Generator::F3(2));
    for n in 3..=max_arity as u32 {
        out.push(Generator::D(n));
    }
    out.retain(|g| g.arity() <= max_arity && g.degree() <= max_degree);
    out
}

/// Checks `∂∂g = 0` for every tabulated generator within the bounds.
pub fn check_d_squared(max_arity: usize, max_degree: i64) -> DSquaredReport {
    let mut report = DSquaredReport::default();
    report.checked.push("1".into());
    for g in tabulated_generators(max_arity, max_degree) {
        report.checked.push(g.name());
        match generator_differential(g).and_then(|d| d.differential()) {
            Ok(dd) if dd.is_zero() => {}
            Ok(dd) => report.violations.push((g.name(), dd.render())),
            Err(e) => report.violations.push((g.name(), e.to_string())),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn operad_generators() -> Vec<Generator> {
        tabulated_generators(3, 4).into_iter().filter(|g| g.kind() == Kind::Operad).collect()
    }

    /// A random composite of operad generators with a random input relabelling.
    fn composite() -> impl Strategy<Value = OperadElement> {
        let gens = operad_generators();
        let n = gens.len();
        (proptest::collection::vec((0..n, 1usize..4), 1..4), any::<u64>()).prop_map(move |(steps, shuffle)| {
            let mut x = OperadElement::generator(gens[steps[0].0]);
            for &(g, slot) in &steps[1..] {
                let y = OperadElement::generator(gens[g]);
                if x.arity() >= slot && y.arity() > 0 {
                    if let Ok(z) = OperadElement::compose(&y, &x, slot) {
                        x = z;
                    }
                }
            }
            let mut sigma: Vec<usize> = (0..x.arity()).collect();
            let mut s = shuffle;
            for i in (1..sigma.len()).rev() {
                sigma.swap(i, (s % (i as u64 + 1)) as usize);
                s /= i as u64 + 1;
            }
            OperadElement::act(&sigma, &x).unwrap()
        })
    }

    #[test]
    fn table_renders() {
        let d = |g| generator_differential(g).unwrap().render();
        assert_eq!(d(Generator::M3(1)), "m2_0 o1 m2_0 - m2_0 o2 m2_0");
        assert_eq!(d(Generator::M2(1)), "m2_0 - [2,1]m2_0");
        assert_eq!(d(Generator::M2(2)), "m2_1 + [2,1]m2_1");
        assert_eq!(d(Generator::D(3)), d(Generator::M3(1)));
        assert_eq!(d(Generator::M2(0)), "0");
    }

    #[test]
    fn table_is_a_complex() {
        let r = check_d_squared(5, 4);
        assert!(r.is_clean(), "{:?}", r.violations);
        for g in ["d5", "f3_2", "m3_1", "f2_4", "m2_4"] {
            assert!(r.checked.iter().any(|c| c == g), "{g} not checked");
        }
    }

    #[test]
    fn counit_collapses() {
        let m = OperadElement::generator(Generator::M2(0));
        let p = OperadElement::generator(Generator::P);
        assert_eq!(OperadElement::compose(&p, &m, 1).unwrap(), OperadElement::unit());
        assert!(OperadElement::compose(&p, &OperadElement::generator(Generator::M2(1)), 2).unwrap().is_zero());
    }

    #[test]
    fn untabulated_generators_are_refused() {
        assert!(generator_differential(Generator::M3(2)).is_err());
    }

    proptest! {
        #[test]
        fn leibniz(x in composite(), y in composite(), slot in 1usize..4) {
            prop_assume!(slot <= y.arity());
            let xy = OperadElement::compose(&x, &y, slot).unwrap();
            let a = OperadElement::compose(&x.differential().unwrap(), &y, slot).unwrap();
            let b = OperadElement::compose(&x, &y.differential().unwrap(), slot).unwrap();
            let sign = if x.degree() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(xy.differential().unwrap(), a.linear_combination(1, &b, sign).unwrap());
        }

        #[test]
        fn differential_squares_to_zero(x in composite()) {
            prop_assert!(x.differential().unwrap().differential().unwrap().is_zero());
        }

        #[test]
        fn equivariance(x in composite(), shuffle in any::<u64>()) {
            let mut sigma: Vec<usize> = (0..x.arity()).collect();
            let mut s = shuffle;
            for i in (1..sigma.len()).rev() {
                sigma.swap(i, (s % (i as u64 + 1)) as usize);
                s /= i as u64 + 1;
            }
            let lhs = OperadElement::act(&sigma, &x).unwrap().differential().unwrap();
            prop_assert_eq!(lhs, OperadElement::act(&sigma, &x.differential().unwrap()).unwrap());
        }

        #[test]
        fn sequential_associativity(x in composite(), y in composite(), z in composite(), i in 1usize..4, j in 1usize..4) {
            prop_assume!(i <= y.arity() && j <= z.arity());
            let left = OperadElement::compose(&OperadElement::compose(&x, &y, i).unwrap(), &z, j).unwrap();
            let right = OperadElement::compose(&x, &OperadElement::compose(&y, &z, j).unwrap(), j + i - 1).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}

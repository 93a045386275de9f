//! Coalgebra structures over the fragment: an operator per generator, checked
//! against the differential table.

mod chains;
pub mod universal;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{ChainComplex, GradedOperator, OperatorError};
use crate::operad::{Generator, Kind, Monomial, OperadElement, OperadError, Tree};
use crate::scalar::Scalar;

pub use chains::{aw_diagonal, chain_structure, counit, cup_k_coproduct, reduce, CoalgebraError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Chain,
    Homology,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no operator assigned to {0}")]
    MissingGenerator(Generator),
    #[error("bimodule generator {0} evaluated without morphism data")]
    NoMorphism(Generator),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Operad(#[from] OperadError),
}

/// Operators on one complex indexed by fragment generators. The unit acts as
/// the identity; `p` is the counit (absent on reduced structures).
#[derive(Clone, Debug)]
pub struct CoalgebraStructure<T: Scalar> {
    complex: Arc<ChainComplex<T>>,
    ops: BTreeMap<Generator, GradedOperator<T>>,
    level: Level,
    reduced: bool,
}

impl<T: Scalar> CoalgebraStructure<T> {
    pub fn new(complex: Arc<ChainComplex<T>>, level: Level, reduced: bool) -> Self {
        CoalgebraStructure { complex, ops: BTreeMap::new(), level, reduced }
    }

    /// Assigns `op` to `g` after checking arity, degree and complexes.
    pub fn set(&mut self, g: Generator, op: GradedOperator<T>) -> Result<(), OperatorError> {
        if op.arity() != g.arity() || op.degree() != g.degree() || g.kind() != Kind::Operad {
            return Err(OperatorError::ShapeMismatch(format!(
                "operator of arity {} and degree {} cannot represent {g}",
                op.arity(),
                op.degree()
            )));
        }
        if !Arc::ptr_eq(op.source(), &self.complex) && **op.source() != *self.complex {
            return Err(OperatorError::ShapeMismatch(format!("operator for {g} lives on another complex")));
        }
        self.ops.insert(g, op);
        Ok(())
    }

    pub fn complex(&self) -> &Arc<ChainComplex<T>> {
        &self.complex
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn get(&self, g: Generator) -> Option<&GradedOperator<T>> {
        self.ops.get(&g)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.ops.keys().copied()
    }

    pub fn operators(&self) -> &BTreeMap<Generator, GradedOperator<T>> {
        &self.ops
    }

    /// Evaluates an operad element (no bimodule vertices).
    pub fn evaluate(&self, x: &OperadElement) -> Result<GradedOperator<T>, EvalError> {
        Evaluator { lower: self, upper: self, morphism: None }.element(x)
    }

    /// Every relation that fails: `[∂, op(g)] = op(∂g)` for each assigned generator,
    /// and the counit identities when a counit is present.
    pub fn verify(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for (&g, op) in &self.ops {
            let ok = crate::operad::generator_differential(g)
                .map_err(EvalError::from)
                .and_then(|d| self.evaluate(&d))
                .map(|rhs| op.commutator_with_differential().equals(&rhs));
            match ok {
                Ok(true) => {}
                Ok(false) => bad.push(format!("d({g})")),
                Err(e) => bad.push(format!("d({g}): {e}")),
            }
        }
        if let (Some(p), Some(m)) = (self.ops.get(&Generator::P), self.ops.get(&Generator::M2(0))) {
            let id = GradedOperator::identity(self.complex.clone());
            for (name, ops) in [("p o1 m2_0 = 1", [p, &id]), ("p o2 m2_0 = 1", [&id, p])] {
                let ok = GradedOperator::parallel(&ops, m).map(|x| x.equals(&id)).unwrap_or(false);
                if !ok {
                    bad.push(name.to_string());
                }
            }
        }
        bad
    }
}

/// Evaluates trees: vertices below a bimodule vertex act through `lower`,
/// vertices above it through `upper`, bimodule vertices through `morphism`.
pub struct Evaluator<'a, T: Scalar> {
    pub lower: &'a CoalgebraStructure<T>,
    pub upper: &'a CoalgebraStructure<T>,
    pub morphism: Option<&'a BTreeMap<Generator, GradedOperator<T>>>,
}

impl<'a, T: Scalar> Evaluator<'a, T> {
    fn tree(&self, t: &Tree, upper: bool) -> Result<GradedOperator<T>, EvalError> {
        let side = if upper { self.upper } else { self.lower };
        match t {
            Tree::Leaf => Ok(GradedOperator::identity(side.complex.clone())),
            Tree::Node(g, ch) => {
                let (op, child_upper) = if g.kind() == Kind::Bimodule {
                    let m = self.morphism.ok_or(EvalError::NoMorphism(*g))?;
                    (m.get(g).ok_or(EvalError::MissingGenerator(*g))?.clone(), true)
                } else {
                    (side.ops.get(g).ok_or(EvalError::MissingGenerator(*g))?.clone(), upper)
                };
                if ch.is_empty() {
                    return Ok(op);
                }
                let children: Vec<GradedOperator<T>> =
                    ch.iter().map(|c| self.tree(c, child_upper)).collect::<Result<_, _>>()?;
                let refs: Vec<&GradedOperator<T>> = children.iter().collect();
                Ok(GradedOperator::parallel(&refs, &op)?)
            }
        }
    }

    pub fn monomial(&self, m: &Monomial) -> Result<GradedOperator<T>, EvalError> {
        Ok(self.tree(&m.tree, false)?.permute(&m.perm)?)
    }

    pub fn element(&self, x: &OperadElement) -> Result<GradedOperator<T>, EvalError> {
        let target = if x.kind() == Kind::Bimodule || (x.is_zero() && self.morphism.is_some()) {
            self.upper.complex.clone()
        } else {
            self.lower.complex.clone()
        };
        let mut out = GradedOperator::zero(self.lower.complex.clone(), target, x.arity(), x.degree());
        for (m, c) in x.terms() {
            let op = self.monomial(m)?;
            out = out.linear_combination(&T::one(), &op, &T::from_int(c))?;
        }
        Ok(out)
    }
}

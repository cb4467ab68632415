//! The regular algebra `A = K^atoms` with pointwise operations.
//!
//! Every element has a support `s(a)` (its nonzero locus) and an inversion
//! `i(a)` (pointwise inverse on the support, zero elsewhere), the unique
//! solution of `a²x = a`, `ax² = x`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::boolean::{same_atoms, AtomSet, Idempotent, PartitionOfUnity};
use crate::error::{Error, Result};
use crate::field::Field;

/// The algebra `K^atoms`: a field together with an atom set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra<F: Field> {
    field: F,
    atoms: Arc<AtomSet>,
}

impl<F: Field> Algebra<F> {
    pub fn new(field: F, atoms: Arc<AtomSet>) -> Arc<Self> {
        Arc::new(Algebra { field, atoms })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn atoms(&self) -> &Arc<AtomSet> {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }
}

pub(crate) fn same_algebra<F: Field>(a: &Arc<Algebra<F>>, b: &Arc<Algebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || (a.field == b.field && same_atoms(&a.atoms, &b.atoms))
}

/// Pointwise binary operation selector for [`AlgebraElement::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

/// A `K`-valued function on the atoms, stored densely in atom order.
#[derive(Clone)]
pub struct AlgebraElement<F: Field> {
    values: Vec<F::Elem>,
    algebra: Arc<Algebra<F>>,
}

impl<F: Field> PartialEq for AlgebraElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && same_algebra(&self.algebra, &other.algebra)
    }
}

impl<F: Field> Eq for AlgebraElement<F> {}

impl<F: Field> std::hash::Hash for AlgebraElement<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl<F: Field> AlgebraElement<F> {
    pub fn new(algebra: &Arc<Algebra<F>>, values: Vec<F::Elem>) -> Result<Self> {
        if values.len() != algebra.dim() {
            return Err(Error::LengthMismatch {
                expected: algebra.dim(),
                found: values.len(),
            });
        }
        Ok(AlgebraElement {
            values,
            algebra: Arc::clone(algebra),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64s(algebra: &Arc<Algebra<F>>, values: &[i64]) -> Result<Self> {
        let f = algebra.field();
        Self::new(algebra, values.iter().map(|&v| f.from_i64(v)).collect())
    }

    pub fn zero(algebra: &Arc<Algebra<F>>) -> Self {
        Self::constant(algebra, algebra.field().zero())
    }

    pub fn one(algebra: &Arc<Algebra<F>>) -> Self {
        Self::constant(algebra, algebra.field().one())
    }

    pub fn constant(algebra: &Arc<Algebra<F>>, c: F::Elem) -> Self {
        AlgebraElement {
            values: vec![c; algebra.dim()],
            algebra: Arc::clone(algebra),
        }
    }

    /// The idempotent `e` as a 0/1-valued element.
    pub fn from_idempotent(algebra: &Arc<Algebra<F>>, e: &Idempotent) -> Result<Self> {
        if !same_atoms(algebra.atoms(), e.atoms()) {
            return Err(Error::ContextMismatch);
        }
        let f = algebra.field();
        let values = (0..algebra.dim())
            .map(|q| if e.contains(q) { f.one() } else { f.zero() })
            .collect();
        Ok(AlgebraElement {
            values,
            algebra: Arc::clone(algebra),
        })
    }

    pub fn random<R: Rng + ?Sized>(algebra: &Arc<Algebra<F>>, rng: &mut R) -> Self {
        let f = algebra.field();
        AlgebraElement {
            values: (0..algebra.dim()).map(|_| f.sample(rng)).collect(),
            algebra: Arc::clone(algebra),
        }
    }

    /// A random element with full support, i.e. an invertible element of `A`.
    pub fn random_unit<R: Rng + ?Sized>(algebra: &Arc<Algebra<F>>, rng: &mut R) -> Self {
        let f = algebra.field();
        AlgebraElement {
            values: (0..algebra.dim()).map(|_| f.sample_nonzero(rng)).collect(),
            algebra: Arc::clone(algebra),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        &self.algebra.field
    }

    pub fn values(&self) -> &[F::Elem] {
        &self.values
    }

    /// Value at atom index `q`.
    pub fn at(&self, q: usize) -> &F::Elem {
        &self.values[q]
    }

    pub fn set(&mut self, q: usize, value: F::Elem) {
        self.values[q] = value;
    }

    pub fn is_zero(&self) -> bool {
        let f = self.field();
        self.values.iter().all(|v| f.is_zero(v))
    }

    /// Invertible in `A`, i.e. `s(a) = 1`.
    pub fn is_unit(&self) -> bool {
        let f = self.field();
        self.values.iter().all(|v| !f.is_zero(v))
    }

    pub(crate) fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub(crate) fn check_idempotent(&self, e: &Idempotent) -> Result<()> {
        if same_atoms(self.algebra.atoms(), e.atoms()) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn map(&self, op: impl Fn(&F, &F::Elem) -> F::Elem) -> Self {
        let f = self.field();
        AlgebraElement {
            values: self.values.iter().map(|v| op(f, v)).collect(),
            algebra: Arc::clone(&self.algebra),
        }
    }

    fn zip_unchecked(&self, other: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Self {
        let f = self.field();
        AlgebraElement {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(f, a, b))
                .collect(),
            algebra: Arc::clone(&self.algebra),
        }
    }

    pub fn arith(&self, op: Op, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match op {
            Op::Add => self.zip_unchecked(other, F::add),
            Op::Sub => self.zip_unchecked(other, F::sub),
            Op::Mul => self.zip_unchecked(other, F::mul),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.arith(Op::Add, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.arith(Op::Sub, other)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.arith(Op::Mul, other)
    }

    pub fn neg(&self) -> Self {
        self.map(F::neg)
    }

    /// Multiplication by a field scalar.
    pub fn scale(&self, c: &F::Elem) -> Self {
        self.map(|f, v| f.mul(c, v))
    }

    /// `i(a)`: pointwise inverse on the support, zero elsewhere.
    pub fn inversion(&self) -> Self {
        self.map(|f, v| f.inv(v).unwrap_or_else(|| f.zero()))
    }

    /// `s(a)`: the nonzero locus of `a`.
    pub fn support(&self) -> Idempotent {
        let f = self.field();
        Idempotent::from_predicate(self.algebra.atoms(), |q| !f.is_zero(&self.values[q]))
    }

    /// `r(a) = 1 - s(a)`: the largest idempotent annihilating `a`.
    pub fn annihilator(&self) -> Idempotent {
        self.support().complement()
    }

    /// `e · a`, the image of `a` in the localization `A_e`.
    pub fn restrict(&self, e: &Idempotent) -> Result<Self> {
        self.check_idempotent(e)?;
        Ok(self.restrict_unchecked(e))
    }

    pub(crate) fn restrict_unchecked(&self, e: &Idempotent) -> Self {
        let f = self.field();
        AlgebraElement {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(q, v)| if e.contains(q) { v.clone() } else { f.zero() })
                .collect(),
            algebra: Arc::clone(&self.algebra),
        }
    }

    /// Groups atoms by equal nonzero value. Terms are ordered by the first
    /// atom of their piece.
    pub fn step_form(&self) -> StepForm<F> {
        let f = self.field();
        let mut terms: Vec<(F::Elem, Vec<usize>)> = Vec::new();
        for (q, v) in self.values.iter().enumerate() {
            if f.is_zero(v) {
                continue;
            }
            match terms.iter_mut().find(|(c, _)| c == v) {
                Some((_, atoms)) => atoms.push(q),
                None => terms.push((v.clone(), vec![q])),
            }
        }
        let atoms = self.algebra.atoms();
        StepForm {
            terms: terms
                .into_iter()
                .map(|(c, qs)| (c, Idempotent::from_indices(atoms, qs)))
                .collect(),
        }
    }
}

impl<F: Field> fmt::Debug for AlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for AlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        let parts: Vec<String> = self.values.iter().map(|v| field.render(v)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite sum `Σ c_k · e_k` with distinct nonzero values `c_k` and
/// pairwise disjoint nonzero idempotents `e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepForm<F: Field> {
    pub terms: Vec<(F::Elem, Idempotent)>,
}

impl<F: Field> StepForm<F> {
    /// Evaluates the sum; zero off the union of the pieces.
    pub fn to_element(&self, algebra: &Arc<Algebra<F>>) -> Result<AlgebraElement<F>> {
        let mut out = AlgebraElement::zero(algebra);
        for (c, e) in &self.terms {
            out = out.add(&AlgebraElement::from_idempotent(algebra, e)?.scale(c))?;
        }
        Ok(out)
    }
}

/// The unique `a` with `a · e_i = a_i · e_i` for every piece `e_i`.
pub fn mix_scalars<F: Field>(
    partition: &PartitionOfUnity,
    elems: &[AlgebraElement<F>],
) -> Result<AlgebraElement<F>> {
    if elems.len() != partition.len() {
        return Err(Error::LengthMismatch {
            expected: partition.len(),
            found: elems.len(),
        });
    }
    let first = &elems[0];
    let mut out = AlgebraElement::zero(first.algebra());
    for (piece, a) in partition.pieces().iter().zip(elems) {
        first.check(a)?;
        a.check_idempotent(piece)?;
        for q in piece.indices() {
            out.values[q] = a.values[q].clone();
        }
    }
    Ok(out)
}

//! Vectors of `A^n` and finitely presented submodules `mix(Lin(G, A))`.
//!
//! Over a finite atom set every question about the module reduces to plain
//! linear algebra in each fiber `x(q) ∈ K^n`, which is how membership and
//! independence are decided here.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{mix_scalars, same_algebra, Algebra, AlgebraElement};
use crate::boolean::{Idempotent, PartitionOfUnity};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;

/// An element of `A^n`, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleVector<F: Field> {
    coords: Vec<AlgebraElement<F>>,
}

impl<F: Field> ModuleVector<F> {
    pub fn new(coords: Vec<AlgebraElement<F>>) -> Result<Self> {
        let first = coords.first().ok_or(Error::EmptyAmbient)?;
        for c in &coords[1..] {
            first.check(c)?;
        }
        Ok(ModuleVector { coords })
    }

    pub fn zero(algebra: &Arc<Algebra<F>>, n: usize) -> Result<Self> {
        Self::new(vec![AlgebraElement::zero(algebra); n])
    }

    /// One coordinate per slice, each slice listing the values on the atoms.
    pub fn from_i64s(algebra: &Arc<Algebra<F>>, coords: &[&[i64]]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|c| AlgebraElement::from_i64s(algebra, c))
                .collect::<Result<_>>()?,
        )
    }

    /// Builds a vector from its fibers: `fibers[q][j]` is coordinate `j` at atom `q`.
    pub fn from_fibers(algebra: &Arc<Algebra<F>>, fibers: &[Vec<F::Elem>]) -> Result<Self> {
        if fibers.len() != algebra.dim() {
            return Err(Error::LengthMismatch {
                expected: algebra.dim(),
                found: fibers.len(),
            });
        }
        let n = fibers.first().map_or(0, Vec::len);
        let coords = (0..n)
            .map(|j| {
                AlgebraElement::new(algebra, fibers.iter().map(|fib| fib[j].clone()).collect())
            })
            .collect::<Result<_>>()?;
        Self::new(coords)
    }

    /// The `i`-th standard basis vector of `A^n`.
    pub fn unit(algebra: &Arc<Algebra<F>>, n: usize, i: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|j| {
                    if i == j {
                        AlgebraElement::one(algebra)
                    } else {
                        AlgebraElement::zero(algebra)
                    }
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[AlgebraElement<F>] {
        &self.coords
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        self.coords[0].algebra()
    }

    pub fn field(&self) -> &F {
        self.coords[0].field()
    }

    /// The fiber `x(q) ∈ K^n`.
    pub fn fiber(&self, q: usize) -> Vec<F::Elem> {
        self.coords.iter().map(|c| c.at(q).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(AlgebraElement::is_zero)
    }

    /// `s(x)`: the join of the coordinate supports.
    pub fn support(&self) -> Idempotent {
        let f = self.field();
        Idempotent::from_predicate(self.algebra().atoms(), |q| {
            self.coords.iter().any(|c| !f.is_zero(c.at(q)))
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        self.coords[0].check(&other.coords[0])?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ModuleVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ModuleVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?,
        })
    }

    /// The module action `a · x`.
    pub fn scale(&self, a: &AlgebraElement<F>) -> Result<Self> {
        Ok(ModuleVector {
            coords: self
                .coords
                .iter()
                .map(|c| a.mul(c))
                .collect::<Result<_>>()?,
        })
    }

    /// `e · x`.
    pub fn restrict(&self, e: &Idempotent) -> Result<Self> {
        Ok(ModuleVector {
            coords: self
                .coords
                .iter()
                .map(|c| c.restrict(e))
                .collect::<Result<_>>()?,
        })
    }
}

impl<F: Field> fmt::Debug for ModuleVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for ModuleVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A finite generating family of vectors in `A^n`, presenting the module
/// `X = mix(Lin(gens, A))`.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorSet<F: Field> {
    algebra: Arc<Algebra<F>>,
    ambient_dim: usize,
    gens: Vec<ModuleVector<F>>,
}

impl<F: Field> GeneratorSet<F> {
    pub fn new(
        algebra: &Arc<Algebra<F>>,
        ambient_dim: usize,
        gens: Vec<ModuleVector<F>>,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::EmptyAmbient);
        }
        for g in &gens {
            if !same_algebra(algebra, g.algebra()) {
                return Err(Error::ContextMismatch);
            }
            if g.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: g.dim(),
                });
            }
        }
        Ok(GeneratorSet {
            algebra: Arc::clone(algebra),
            ambient_dim,
            gens,
        })
    }

    /// The standard basis of `A^n`, presenting the free module.
    pub fn standard(algebra: &Arc<Algebra<F>>, n: usize) -> Result<Self> {
        let gens = (0..n)
            .map(|i| ModuleVector::unit(algebra, n, i))
            .collect::<Result<_>>()?;
        Self::new(algebra, n, gens)
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn gens(&self) -> &[ModuleVector<F>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn into_gens(self) -> Vec<ModuleVector<F>> {
        self.gens
    }

    /// The fibers `g(q)` of every generator at atom `q`.
    pub fn fibers(&self, q: usize) -> Vec<Vec<F::Elem>> {
        self.gens.iter().map(|g| g.fiber(q)).collect()
    }

    pub(crate) fn check_vector(&self, x: &ModuleVector<F>) -> Result<()> {
        if !same_algebra(&self.algebra, x.algebra()) {
            return Err(Error::ContextMismatch);
        }
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_idempotent(&self, e: &Idempotent) -> Result<()> {
        AlgebraElement::zero(&self.algebra).check_idempotent(e)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// The `A`-linear combination `Σ coeffs[i] · gens[i]`.
    pub fn combine(&self, coeffs: &[AlgebraElement<F>]) -> Result<ModuleVector<F>> {
        if coeffs.len() != self.gens.len() {
            return Err(Error::LengthMismatch {
                expected: self.gens.len(),
                found: coeffs.len(),
            });
        }
        let mut acc = ModuleVector::zero(&self.algebra, self.ambient_dim)?;
        for (c, g) in coeffs.iter().zip(&self.gens) {
            acc = acc.add(&g.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Atoms where every generator vanishes.
    pub fn dead_atoms(&self) -> Idempotent {
        let f = self.field();
        Idempotent::from_predicate(self.algebra.atoms(), |q| {
            self.gens
                .iter()
                .all(|g| g.coords().iter().all(|c| f.is_zero(c.at(q))))
        })
    }

    /// `e · X != 0` for every nonzero idempotent `e`.
    pub fn is_faithful(&self) -> bool {
        self.dead_atoms().is_zero()
    }
}

impl<F: Field> fmt::Debug for GeneratorSet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for GeneratorSet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "field={} atoms={{{}}} ambient_dim={} gens={}",
            self.field().spec(),
            self.algebra.atoms().labels().join(","),
            self.ambient_dim,
            self.gens.len()
        )?;
        for (i, g) in self.gens.iter().enumerate() {
            writeln!(f, "  g{}: {g}", i + 1)?;
        }
        Ok(())
    }
}

/// `s(x)` for a module vector.
pub fn support_vector<F: Field>(x: &ModuleVector<F>) -> Idempotent {
    x.support()
}

/// The unique `x` with `e_i · x = e_i · xs[i]` for every piece.
pub fn mix_vectors<F: Field>(
    partition: &PartitionOfUnity,
    xs: &[ModuleVector<F>],
) -> Result<ModuleVector<F>> {
    if xs.len() != partition.len() {
        return Err(Error::LengthMismatch {
            expected: partition.len(),
            found: xs.len(),
        });
    }
    let n = xs[0].dim();
    for x in xs {
        xs[0].check(x)?;
    }
    let coords = (0..n)
        .map(|j| {
            let column: Vec<AlgebraElement<F>> = xs.iter().map(|x| x.coords[j].clone()).collect();
            mix_scalars(partition, &column)
        })
        .collect::<Result<_>>()?;
    ModuleVector::new(coords)
}

/// Outcome of a localized membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<F: Field> {
    /// `e · x = Σ coefficients[i] · e · g_i`, coefficients supported in `e`.
    Member {
        coefficients: Vec<AlgebraElement<F>>,
    },
    /// The fiber of `x` at this atom leaves the span of the generator fibers.
    NotMember { atom: usize },
}

impl<F: Field> Membership<F> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides `e · x ∈ e · mix(Lin(G, A))` atom by atom.
pub fn membership<F: Field>(
    x: &ModuleVector<F>,
    gens: &GeneratorSet<F>,
    e: &Idempotent,
) -> Result<Membership<F>> {
    gens.check_vector(x)?;
    gens.check_idempotent(e)?;
    let f = gens.field();
    let alg = gens.algebra();
    let mut coefficients = vec![AlgebraElement::zero(alg); gens.len()];
    for q in e.indices() {
        match linalg::solve(f, &gens.fibers(q), &x.fiber(q)) {
            Some(c) => {
                for (coef, v) in coefficients.iter_mut().zip(c) {
                    coef.set(q, v);
                }
            }
            None => return Ok(Membership::NotMember { atom: q }),
        }
    }
    Ok(Membership::Member { coefficients })
}

/// Outcome of an `A_e`-linear independence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence<F: Field> {
    Independent,
    /// `Σ relation[i] · g_i(atom) = 0` with some `relation[i] != 0`.
    Dependent {
        atom: usize,
        relation: Vec<F::Elem>,
    },
}

impl<F: Field> Independence<F> {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }

    /// Lifts a fiber relation to a nontrivial `A`-relation supported on the
    /// witness atom.
    pub fn lifted_relation(&self, algebra: &Arc<Algebra<F>>) -> Option<Vec<AlgebraElement<F>>> {
        match self {
            Independence::Independent => None,
            Independence::Dependent { atom, relation } => Some(
                relation
                    .iter()
                    .map(|c| {
                        let mut a = AlgebraElement::zero(algebra);
                        a.set(*atom, c.clone());
                        a
                    })
                    .collect(),
            ),
        }
    }
}

/// Tests whether `{e · g}` is `A_e`-linearly independent.
pub fn independence_test<F: Field>(
    gens: &GeneratorSet<F>,
    e: &Idempotent,
) -> Result<Independence<F>> {
    gens.check_idempotent(e)?;
    if e.is_zero() {
        return Err(Error::ZeroIdempotent);
    }
    let f = gens.field();
    for q in e.indices() {
        if let Some(relation) = linalg::kernel_vector(f, &gens.fibers(q)) {
            return Ok(Independence::Dependent { atom: q, relation });
        }
    }
    Ok(Independence::Independent)
}

/// A vector with `s(x) = 1`: on the piece where generator `j` is the first
/// nonzero one, `x = g_j`.
pub fn full_support_element<F: Field>(gens: &GeneratorSet<F>) -> Result<ModuleVector<F>> {
    let dead = gens.dead_atoms();
    if !dead.is_zero() {
        return Err(Error::NotFaithful {
            dead_atoms: dead.labels().into_iter().map(String::from).collect(),
        });
    }
    let atoms = gens.algebra().atoms();
    let first_nonzero = |q: usize| {
        gens.gens()
            .iter()
            .position(|g| {
                let f = g.field();
                g.coords().iter().any(|c| !f.is_zero(c.at(q)))
            })
            .expect("faithful")
    };
    let partition = PartitionOfUnity::by_key(atoms, first_nonzero);
    let chosen: Vec<ModuleVector<F>> = partition
        .pieces()
        .iter()
        .map(|p| gens.gens()[first_nonzero(p.first_atom().expect("nonzero piece"))].clone())
        .collect();
    mix_vectors(&partition, &chosen)
}

/// `x ↦ [e_i · x]`, the product decomposition along a partition.
pub fn split_product<F: Field>(
    x: &ModuleVector<F>,
    partition: &PartitionOfUnity,
) -> Result<Vec<ModuleVector<F>>> {
    partition.pieces().iter().map(|e| x.restrict(e)).collect()
}

/// Inverse of [`split_product`].
pub fn reassemble<F: Field>(
    partition: &PartitionOfUnity,
    parts: &[ModuleVector<F>],
) -> Result<ModuleVector<F>> {
    mix_vectors(partition, parts)
}

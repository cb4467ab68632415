//! Seeded random instances: modules with prescribed fiber ranks, invertible
//! generator operations, and rank-profile perturbations.
//!
//! Everything takes an explicit `Rng`; callers wanting reproducible output
//! use a ChaCha stream seeded from a `u64`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Algebra, AlgebraElement};
use crate::boolean::{AtomSet, Idempotent, PartitionOfUnity};
use crate::error::Result;
use crate::field::Field;
use crate::linalg;
use crate::module_space::{GeneratorSet, ModuleVector};

pub fn random_matrix<F: Field, R: Rng + ?Sized>(
    field: &F,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Vec<Vec<F::Elem>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| field.sample(rng)).collect())
        .collect()
}

pub fn random_invertible<F: Field, R: Rng + ?Sized>(
    field: &F,
    k: usize,
    rng: &mut R,
) -> Vec<Vec<F::Elem>> {
    loop {
        let m = random_matrix(field, k, k, rng);
        if linalg::rank(field, &m) == k {
            return m;
        }
    }
}

/// A random `m × n` matrix of rank exactly `r`: `P · diag(1..1,0..0) · Q`.
pub fn matrix_with_rank<F: Field, R: Rng + ?Sized>(
    field: &F,
    m: usize,
    n: usize,
    r: usize,
    rng: &mut R,
) -> Vec<Vec<F::Elem>> {
    assert!(r <= m.min(n));
    let p = random_invertible(field, m, rng);
    let q = random_invertible(field, n, rng);
    let d: Vec<Vec<F::Elem>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j && i < r {
                        field.one()
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect();
    linalg::mat_mul(field, &linalg::mat_mul(field, &p, &d), &q)
}

/// Assembles a generator set from per-atom `m × n` matrices (row `i` is the
/// fiber of generator `i`).
pub fn module_from_fibers<F: Field>(
    algebra: &Arc<Algebra<F>>,
    n: usize,
    m: usize,
    per_atom: &[Vec<Vec<F::Elem>>],
) -> Result<GeneratorSet<F>> {
    let gens = (0..m)
        .map(|i| {
            let fibers: Vec<Vec<F::Elem>> = per_atom.iter().map(|mat| mat[i].clone()).collect();
            ModuleVector::from_fibers(algebra, &fibers)
        })
        .collect::<Result<_>>()?;
    GeneratorSet::new(algebra, n, gens)
}

/// A module whose fiber ranks take a few distinct values across the atoms.
/// One draw in four uses unstructured random entries instead.
pub fn random_module<F: Field, R: Rng + ?Sized>(
    algebra: &Arc<Algebra<F>>,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<GeneratorSet<F>> {
    let field = algebra.field();
    let d = algebra.dim();
    let per_atom: Vec<Vec<Vec<F::Elem>>> = if rng.gen_ratio(1, 4) {
        (0..d).map(|_| random_matrix(field, m, n, rng)).collect()
    } else {
        let max_rank = m.min(n);
        let levels: Vec<usize> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(0..=max_rank))
            .collect();
        (0..d)
            .map(|_| {
                let r = *levels.choose(rng).expect("nonempty");
                matrix_with_rank(field, m, n, r, rng)
            })
            .collect()
    };
    module_from_fibers(algebra, n, m, &per_atom)
}

/// A module of rank exactly `r` at every atom.
pub fn random_constant_rank_module<F: Field, R: Rng + ?Sized>(
    algebra: &Arc<Algebra<F>>,
    n: usize,
    m: usize,
    r: usize,
    rng: &mut R,
) -> Result<GeneratorSet<F>> {
    let field = algebra.field();
    let per_atom: Vec<_> = (0..algebra.dim())
        .map(|_| matrix_with_rank(field, m, n, r, rng))
        .collect();
    module_from_fibers(algebra, n, m, &per_atom)
}

pub fn random_idempotent<R: Rng + ?Sized>(atoms: &Arc<AtomSet>, rng: &mut R) -> Idempotent {
    Idempotent::from_predicate(atoms, |_| rng.gen_bool(0.5))
}

pub fn random_nonzero_idempotent<R: Rng + ?Sized>(atoms: &Arc<AtomSet>, rng: &mut R) -> Idempotent {
    loop {
        let e = random_idempotent(atoms, rng);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random partition of unity with at most `max_pieces` pieces.
pub fn random_partition<R: Rng + ?Sized>(
    atoms: &Arc<AtomSet>,
    max_pieces: usize,
    rng: &mut R,
) -> PartitionOfUnity {
    let k = rng.gen_range(1..=max_pieces.max(1));
    let labels: Vec<usize> = (0..atoms.len()).map(|_| rng.gen_range(0..k)).collect();
    PartitionOfUnity::by_key(atoms, |q| labels[q])
}

/// A random element of `Lin(G, A_e)`.
pub fn random_lin_element<F: Field, R: Rng + ?Sized>(
    gens: &GeneratorSet<F>,
    e: &Idempotent,
    rng: &mut R,
) -> Result<ModuleVector<F>> {
    let coeffs: Vec<AlgebraElement<F>> = (0..gens.len())
        .map(|_| AlgebraElement::random(gens.algebra(), rng).restrict(e))
        .collect::<Result<_>>()?;
    gens.combine(&coeffs)
}

/// An invertible change of presentation; none of these alter the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorOp<F: Field> {
    Swap(usize, usize),
    /// Multiply a generator by a unit of `A`.
    Scale {
        index: usize,
        unit: AlgebraElement<F>,
    },
    /// `g_target += coeff · g_source`, `target != source`.
    AddMultiple {
        target: usize,
        source: usize,
        coeff: AlgebraElement<F>,
    },
    /// Append `Σ coeffs[i] · g_i`.
    AppendCombination {
        coeffs: Vec<AlgebraElement<F>>,
    },
}

impl<F: Field> GeneratorOp<F> {
    pub fn apply(&self, gens: &GeneratorSet<F>) -> Result<GeneratorSet<F>> {
        let mut out = gens.gens().to_vec();
        match self {
            GeneratorOp::Swap(i, j) => out.swap(*i, *j),
            GeneratorOp::Scale { index, unit } => {
                debug_assert!(unit.is_unit());
                out[*index] = out[*index].scale(unit)?;
            }
            GeneratorOp::AddMultiple {
                target,
                source,
                coeff,
            } => {
                debug_assert_ne!(target, source);
                out[*target] = out[*target].add(&out[*source].scale(coeff)?)?;
            }
            GeneratorOp::AppendCombination { coeffs } => out.push(gens.combine(coeffs)?),
        }
        GeneratorSet::new(gens.algebra(), gens.ambient_dim(), out)
    }

    pub fn random<R: Rng + ?Sized>(gens: &GeneratorSet<F>, rng: &mut R) -> Self {
        let alg = gens.algebra();
        let m = gens.len();
        let choice = if m == 0 {
            3
        } else if m == 1 {
            *[0usize, 1, 3].choose(rng).expect("nonempty")
        } else {
            rng.gen_range(0..4)
        };
        match choice {
            0 => GeneratorOp::Swap(rng.gen_range(0..m), rng.gen_range(0..m)),
            1 => GeneratorOp::Scale {
                index: rng.gen_range(0..m),
                unit: AlgebraElement::random_unit(alg, rng),
            },
            2 => {
                let target = rng.gen_range(0..m);
                let source = (target + rng.gen_range(1..m)) % m;
                GeneratorOp::AddMultiple {
                    target,
                    source,
                    coeff: AlgebraElement::random(alg, rng),
                }
            }
            _ => GeneratorOp::AppendCombination {
                coeffs: (0..m).map(|_| AlgebraElement::random(alg, rng)).collect(),
            },
        }
    }
}

/// Applies a random automorphism of the ambient space `A^n` (invertible in
/// every fiber), optionally embedding into `A^(n + extra)` with zero padding.
pub fn random_ambient_image<F: Field, R: Rng + ?Sized>(
    gens: &GeneratorSet<F>,
    extra: usize,
    rng: &mut R,
) -> Result<GeneratorSet<F>> {
    let alg = gens.algebra();
    let field = alg.field();
    let n = gens.ambient_dim();
    let transforms: Vec<Vec<Vec<F::Elem>>> = (0..alg.dim())
        .map(|_| random_invertible(field, n, rng))
        .collect();
    let per_atom: Vec<Vec<Vec<F::Elem>>> = (0..alg.dim())
        .map(|q| {
            let t = &transforms[q];
            gens.fibers(q)
                .into_iter()
                .map(|fib| {
                    let mut img: Vec<F::Elem> = (0..n)
                        .map(|j| {
                            (0..n).fold(field.zero(), |acc, k| {
                                field.add(&acc, &field.mul(&t[j][k], &fib[k]))
                            })
                        })
                        .collect();
                    img.extend((0..extra).map(|_| field.zero()));
                    img
                })
                .collect()
        })
        .collect();
    module_from_fibers(alg, n + extra, gens.len(), &per_atom)
}

/// Changes the fiber rank at one random atom.
pub fn perturb_rank_profile<F: Field, R: Rng + ?Sized>(
    gens: &GeneratorSet<F>,
    rng: &mut R,
) -> Result<GeneratorSet<F>> {
    let alg = gens.algebra();
    let field = alg.field();
    let q = rng.gen_range(0..alg.dim());
    let n = gens.ambient_dim();
    if gens.is_empty() {
        let mut v = ModuleVector::zero(alg, n)?;
        let mut c = v.coords()[0].clone();
        c.set(q, field.one());
        let mut coords = v.coords().to_vec();
        coords[0] = c;
        v = ModuleVector::new(coords)?;
        return GeneratorSet::new(alg, n, vec![v]);
    }
    let mut per_atom: Vec<Vec<Vec<F::Elem>>> = (0..alg.dim()).map(|a| gens.fibers(a)).collect();
    if linalg::rank(field, &per_atom[q]) > 0 {
        for row in per_atom[q].iter_mut() {
            row.iter_mut().for_each(|v| *v = field.zero());
        }
    } else {
        per_atom[q][0][0] = field.one();
    }
    module_from_fibers(alg, n, gens.len(), &per_atom)
}

//! Brute-force ground truth: textbook linear algebra over `K` in each fiber.
//!
//! Shares only the field arithmetic with the engine. In particular it never
//! calls the regular elimination or the engine's fiber solver; its own
//! elimination scans column-major for the first nonzero pivot and back
//! substitutes from a plain row echelon form.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{same_algebra, AlgebraElement};
use crate::boolean::{AtomSet, Idempotent};
use crate::classification::{IsoMap, Passport, PassportEntry};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::module_space::{GeneratorSet, ModuleVector};

/// Rank of the generator matrix at every atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    atoms: Arc<AtomSet>,
    ranks: Vec<usize>,
}

impl RankProfile {
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_at(&self, atom: usize) -> usize {
        self.ranks[atom]
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.atoms.index_of(label).map(|q| self.ranks[q])
    }
}

impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .atoms
            .labels()
            .iter()
            .zip(&self.ranks)
            .map(|(l, r)| format!("{l}:{r}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Row echelon form (not reduced), pivots found by scanning columns left to
/// right and taking the first nonzero entry below the current row.
fn echelon<F: Field>(field: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for i in r + 1..rows.len() {
            if field.is_zero(&rows[i][c]) {
                continue;
            }
            let factor = field.mul(&rows[i][c], &inv);
            let (upper, lower) = rows.split_at_mut(i);
            for (x, p) in lower[0][c..cols].iter_mut().zip(&upper[r][c..cols]) {
                *x = field.sub(x, &field.mul(&factor, p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of vectors (as rows).
fn rank_of<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> usize {
    let Some(cols) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut rows = vectors.to_vec();
    echelon(field, &mut rows, cols).len()
}

/// Coefficients `c` with `Σ c_k · basis[k] = target` for independent `basis`.
fn coordinates<F: Field>(
    field: &F,
    basis: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let r = basis.len();
    // rows are equations: one per ambient coordinate, unknowns c_0..c_{r-1}
    let mut rows: Vec<Vec<F::Elem>> = (0..target.len())
        .map(|j| {
            let mut row: Vec<F::Elem> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let pivots = echelon(field, &mut rows, r + 1);
    if pivots.contains(&r) {
        return None;
    }
    let mut c = vec![field.zero(); r];
    for (i, &col) in pivots.iter().enumerate().rev() {
        let mut acc = rows[i][r].clone();
        for k in col + 1..r {
            acc = field.sub(&acc, &field.mul(&rows[i][k], &c[k]));
        }
        c[col] = field.mul(&acc, &field.inv(&rows[i][col]).expect("pivot"));
    }
    Some(c)
}

fn fiber_matrix_at<F: Field>(gens: &GeneratorSet<F>, q: usize) -> Vec<Vec<F::Elem>> {
    gens.gens()
        .iter()
        .map(|g| g.coords().iter().map(|c| c.at(q).clone()).collect())
        .collect()
}

/// Classical rank of the `m × n` fiber matrix at each atom.
pub fn atom_rank_profile<F: Field>(gens: &GeneratorSet<F>) -> RankProfile {
    let atoms = gens.algebra().atoms();
    RankProfile {
        atoms: Arc::clone(atoms),
        ranks: (0..atoms.len())
            .map(|q| rank_of(gens.field(), &fiber_matrix_at(gens, q)))
            .collect(),
    }
}

/// Groups atoms by rank; entries ascending by rank.
pub fn oracle_passport<F: Field>(gens: &GeneratorSet<F>) -> Passport {
    let profile = atom_rank_profile(gens);
    let atoms = gens.algebra().atoms();
    let mut distinct: Vec<usize> = profile.ranks.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let entries = distinct
        .into_iter()
        .map(|rank| PassportEntry {
            piece: Idempotent::from_predicate(atoms, |q| profile.ranks[q] == rank),
            rank,
        })
        .collect();
    Passport::new(entries).expect("rank grouping is a valid passport")
}

fn vec_at<F: Field>(x: &ModuleVector<F>, q: usize) -> Vec<F::Elem> {
    x.coords().iter().map(|c| c.at(q).clone()).collect()
}

/// Checks an isomorphism fiber by fiber: on each atom the map must send a
/// basis of the source fiber span bijectively onto a basis of the target
/// fiber span, agree with the recorded generator images, and commute with
/// the `A`-action and addition on sampled scalars.
pub fn oracle_verify_iso<F: Field>(
    map: &IsoMap<F>,
    g: &GeneratorSet<F>,
    h: &GeneratorSet<F>,
) -> Result<bool> {
    oracle_verify_iso_seeded(map, g, h, 0x5eed)
}

pub fn oracle_verify_iso_seeded<F: Field>(
    map: &IsoMap<F>,
    g: &GeneratorSet<F>,
    h: &GeneratorSet<F>,
    seed: u64,
) -> Result<bool> {
    if !same_algebra(&map.algebra, g.algebra()) || !same_algebra(&map.algebra, h.algebra()) {
        return Err(Error::ContextMismatch);
    }
    let field = g.field();
    if map.source_dim != g.ambient_dim()
        || map.target_dim != h.ambient_dim()
        || map.generator_images.len() != g.len()
        || map.image_coordinates.len() != g.len()
    {
        return Ok(false);
    }

    let pg = oracle_passport(g);
    if pg != oracle_passport(h) || pg.entries().len() != map.pieces.len() {
        return Ok(false);
    }
    for (entry, piece) in pg.entries().iter().zip(&map.pieces) {
        if entry.piece != piece.piece || entry.rank != piece.rank {
            return Ok(false);
        }
    }

    for piece in &map.pieces {
        let r = piece.rank;
        if piece.source_basis.len() != r
            || piece.target_basis.len() != r
            || piece.transfer.len() != r
        {
            return Ok(false);
        }
        for q in piece.piece.indices() {
            let src: Vec<_> = piece.source_basis.iter().map(|b| vec_at(b, q)).collect();
            let tgt: Vec<_> = piece.target_basis.iter().map(|b| vec_at(b, q)).collect();
            let gq = fiber_matrix_at(g, q);
            let hq = fiber_matrix_at(h, q);
            let spans = |basis: &[Vec<F::Elem>], module: &[Vec<F::Elem>]| {
                let mut both = basis.to_vec();
                both.extend(module.iter().cloned());
                rank_of(field, basis) == r
                    && rank_of(field, module) == r
                    && rank_of(field, &both) == r
            };
            if !spans(&src, &gq) || !spans(&tgt, &hq) {
                return Ok(false);
            }
            let transfer: Vec<Vec<F::Elem>> = piece
                .transfer
                .iter()
                .map(|row| row.iter().map(|a| a.at(q).clone()).collect())
                .collect();
            if transfer.iter().any(|row| row.len() != r) || rank_of(field, &transfer) != r {
                return Ok(false);
            }

            for (i, gi) in gq.iter().enumerate() {
                let Some(c) = coordinates(field, &src, gi) else {
                    return Ok(false);
                };
                let mut expected = vec![field.zero(); h.ambient_dim()];
                for (k, ck) in c.iter().enumerate() {
                    for (l, t) in tgt.iter().enumerate() {
                        let w = field.mul(ck, &transfer[k][l]);
                        for (e, tj) in expected.iter_mut().zip(t) {
                            *e = field.add(e, &field.mul(&w, tj));
                        }
                    }
                }
                if vec_at(&map.generator_images[i], q) != expected {
                    return Ok(false);
                }
                let coords = &map.image_coordinates[i];
                if coords.len() != h.len() {
                    return Ok(false);
                }
                let mut combo = vec![field.zero(); h.ambient_dim()];
                for (d, hj) in coords.iter().zip(&hq) {
                    for (e, v) in combo.iter_mut().zip(hj) {
                        *e = field.add(e, &field.mul(d.at(q), v));
                    }
                }
                if combo != expected {
                    return Ok(false);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = g.algebra();
    for _ in 0..4 {
        let a = AlgebraElement::random(alg, &mut rng);
        for (i, gi) in g.gens().iter().enumerate() {
            let Ok(image) = map.apply(&gi.scale(&a)?) else {
                return Ok(false);
            };
            if image != map.generator_images[i].scale(&a)? {
                return Ok(false);
            }
            let j = (i + 1) % g.len();
            let Ok(sum_image) = map.apply(&gi.add(&g.gens()[j].scale(&a)?)?) else {
                return Ok(false);
            };
            let expected = map.generator_images[i].add(&map.generator_images[j].scale(&a)?)?;
            if sum_image != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

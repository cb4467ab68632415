//! Classification of finitely generated modules by their passport.
//!
//! The engine is an elimination over the regular algebra itself: a pivot
//! `a` is only invertible on its support, so each pivot step splits the
//! current idempotent into `s(a)` (where elimination proceeds with `i(a)`
//! as the pivot inverse) and the remainder (where it does not). The leaves
//! of this case split partition unity into pieces of constant rank.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraElement};
use crate::boolean::{Idempotent, PartitionOfUnity};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::module_space::{membership, GeneratorSet, Membership, ModuleVector};

/// One pivot step of [`regular_eliminate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvent {
    /// The idempotent being processed.
    pub piece: Idempotent,
    /// Generator index (row) of the pivot in the original presentation.
    pub pivot_generator: usize,
    /// Ambient coordinate (column) of the pivot.
    pub pivot_coordinate: usize,
    /// `s(pivot) ∧ piece`; the elimination continues on this part.
    pub pivot_support: Idempotent,
    pub rank_before: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationTrace {
    pub events: Vec<SplitEvent>,
    /// Emitted `(piece, rank)` leaves in emission order.
    pub leaves: Vec<(Idempotent, usize)>,
}

struct Work<F: Field> {
    piece: Idempotent,
    rows: Vec<Vec<AlgebraElement<F>>>,
    row_ids: Vec<usize>,
    col_ids: Vec<usize>,
    rank: usize,
}

/// Splits `e` into pieces on which the fiberwise rank of the generator
/// matrix is constant, returning the pieces sorted by first atom.
pub fn regular_eliminate<F: Field>(
    gens: &GeneratorSet<F>,
    e: &Idempotent,
) -> Result<(Vec<(Idempotent, usize)>, EliminationTrace)> {
    gens.check_idempotent(e)?;
    if e.is_zero() {
        return Err(Error::ZeroIdempotent);
    }
    let mut trace = EliminationTrace::default();
    let mut stack = vec![Work {
        piece: e.clone(),
        rows: gens.gens().iter().map(|g| g.coords().to_vec()).collect(),
        row_ids: (0..gens.len()).collect(),
        col_ids: (0..gens.ambient_dim()).collect(),
        rank: 0,
    }];

    while let Some(work) = stack.pop() {
        let Some((pi, pj, pivot_support)) = choose_pivot(&work) else {
            trace.leaves.push((work.piece, work.rank));
            continue;
        };
        trace.events.push(SplitEvent {
            piece: work.piece.clone(),
            pivot_generator: work.row_ids[pi],
            pivot_coordinate: work.col_ids[pj],
            pivot_support: pivot_support.clone(),
            rank_before: work.rank,
        });

        let rest = work.piece.minus(&pivot_support)?;
        let reduced = eliminate_pivot(&work, pi, pj, &pivot_support)?;
        if !rest.is_zero() {
            stack.push(Work {
                piece: rest,
                ..work
            });
        }
        stack.push(reduced);
    }

    let mut leaves = trace.leaves.clone();
    leaves.sort_by_key(|(p, _)| p.first_atom());
    Ok((leaves, trace))
}

/// Entry whose support covers the most atoms of the piece; ties go to the
/// first entry in row-major order. `None` when the matrix vanishes on the
/// piece.
fn choose_pivot<F: Field>(work: &Work<F>) -> Option<(usize, usize, Idempotent)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in work.rows.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            let f = a.field();
            let count = work
                .piece
                .indices()
                .filter(|&q| !f.is_zero(a.at(q)))
                .count();
            if count > 0 && best.is_none_or(|(_, _, c)| count > c) {
                best = Some((i, j, count));
            }
        }
    }
    let (i, j, _) = best?;
    let support = work.rows[i][j].support().meet(&work.piece).ok()?;
    Some((i, j, support))
}

/// On `g = s(a) ∧ piece` the pivot `a = M[i][j]` is invertible with inverse
/// `h = i(a)`: clear column `j` from every other row with
/// `row_k - (M[k][j]·h)·row_i`, then drop row `i` and column `j`.
fn eliminate_pivot<F: Field>(
    work: &Work<F>,
    pi: usize,
    pj: usize,
    g: &Idempotent,
) -> Result<Work<F>> {
    let h = work.rows[pi][pj].inversion().restrict(g)?;
    let pivot_row = &work.rows[pi];
    let mut rows = Vec::with_capacity(work.rows.len().saturating_sub(1));
    for (k, row) in work.rows.iter().enumerate() {
        if k == pi {
            continue;
        }
        let factor = row[pj].mul(&h)?;
        let mut new_row = Vec::with_capacity(row.len() - 1);
        for (c, entry) in row.iter().enumerate() {
            if c == pj {
                continue;
            }
            new_row.push(entry.sub(&factor.mul(&pivot_row[c])?)?.restrict(g)?);
        }
        rows.push(new_row);
    }
    let mut row_ids = work.row_ids.clone();
    row_ids.remove(pi);
    let mut col_ids = work.col_ids.clone();
    col_ids.remove(pj);
    Ok(Work {
        piece: g.clone(),
        rows,
        row_ids,
        col_ids,
        rank: work.rank + 1,
    })
}

#[derive(Clone, PartialEq, Eq)]
pub struct PassportEntry {
    pub piece: Idempotent,
    pub rank: usize,
}

impl fmt::Debug for PassportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PassportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank={} piece={}", self.rank, self.piece)
    }
}

/// The passport: a partition of unity into pieces on which the module is
/// strictly homogeneous, paired with strictly increasing ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passport {
    entries: Vec<PassportEntry>,
}

impl Passport {
    /// Validates the invariants: nonzero disjoint pieces covering unity,
    /// ranks strictly increasing.
    pub fn new(entries: Vec<PassportEntry>) -> Result<Self> {
        let pieces: Vec<Idempotent> = entries.iter().map(|e| e.piece.clone()).collect();
        PartitionOfUnity::new(pieces)?;
        if entries.windows(2).any(|w| w[0].rank >= w[1].rank) {
            return Err(Error::InvalidPartition(
                "ranks must be strictly increasing".into(),
            ));
        }
        Ok(Passport { entries })
    }

    /// Merges equal-rank pieces by join and sorts by rank.
    fn from_leaves(leaves: &[(Idempotent, usize)]) -> Result<Self> {
        let mut entries: Vec<PassportEntry> = Vec::new();
        for (piece, rank) in leaves {
            match entries.iter_mut().find(|e| e.rank == *rank) {
                Some(e) => e.piece = e.piece.join(piece)?,
                None => entries.push(PassportEntry {
                    piece: piece.clone(),
                    rank: *rank,
                }),
            }
        }
        entries.sort_by_key(|e| e.rank);
        Passport::new(entries)
    }

    pub fn entries(&self) -> &[PassportEntry] {
        &self.entries
    }

    pub fn partition(&self) -> PartitionOfUnity {
        PartitionOfUnity::new(self.entries.iter().map(|e| e.piece.clone()).collect())
            .expect("passport pieces partition unity")
    }

    /// No rank-0 piece.
    pub fn is_faithful(&self) -> bool {
        self.entries.iter().all(|e| e.rank > 0)
    }

    pub fn max_rank(&self) -> usize {
        self.entries.last().map_or(0, |e| e.rank)
    }

    /// Rank at a given atom.
    pub fn rank_at(&self, atom: usize) -> usize {
        self.entries
            .iter()
            .find(|e| e.piece.contains(atom))
            .map(|e| e.rank)
            .expect("passport covers every atom")
    }

    /// Index of the first entry where the two passports differ.
    pub fn first_difference(&self, other: &Passport) -> Option<usize> {
        let n = self.entries.len().max(other.entries.len());
        (0..n).find(|&i| self.entries.get(i) != other.entries.get(i))
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// The passport of the module presented by `gens`.
pub fn passport<F: Field>(gens: &GeneratorSet<F>) -> Result<Passport> {
    let one = Idempotent::one(gens.algebra().atoms());
    let (leaves, _) = regular_eliminate(gens, &one)?;
    Passport::from_leaves(&leaves)
}

/// Value of `κ(e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa {
    Rank(usize),
    NotHomogeneous,
}

/// `κ(e)`: the rank `n` when `X_e` is `n`-homogeneous; `κ(0) = 0`.
pub fn kappa<F: Field>(gens: &GeneratorSet<F>, e: &Idempotent) -> Result<Kappa> {
    gens.check_idempotent(e)?;
    if e.is_zero() {
        return Ok(Kappa::Rank(0));
    }
    let (leaves, _) = regular_eliminate(gens, e)?;
    let rank = leaves[0].1;
    Ok(if leaves.iter().all(|(_, r)| *r == rank) {
        Kappa::Rank(rank)
    } else {
        Kappa::NotHomogeneous
    })
}

/// Whether `κ` takes one value on every nonzero sub-idempotent of `e`.
pub fn is_strictly_homogeneous<F: Field>(gens: &GeneratorSet<F>, e: &Idempotent) -> Result<bool> {
    gens.check_idempotent(e)?;
    if e.is_zero() {
        return Err(Error::ZeroIdempotent);
    }
    Ok(matches!(kappa(gens, e)?, Kappa::Rank(_)))
}

/// How [`extract_basis`] picks generators in each fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisStrategy {
    /// Lexicographically first independent subset of generator indices.
    FirstFit,
    /// Lexicographically last independent subset.
    LastFit,
}

/// An `A_piece`-basis of `piece · X`, assembled by mixing generators
/// selected atom by atom.
pub fn extract_basis<F: Field>(
    gens: &GeneratorSet<F>,
    piece: &Idempotent,
    rank: usize,
    strategy: BasisStrategy,
) -> Result<Vec<ModuleVector<F>>> {
    gens.check_idempotent(piece)?;
    if piece.is_zero() {
        return Err(Error::ZeroIdempotent);
    }
    let f = gens.field();
    let atoms = gens.algebra().atoms();
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for q in piece.indices() {
        let fibers = gens.fibers(q);
        let selected = match strategy {
            BasisStrategy::FirstFit => linalg::first_basis(f, &fibers),
            BasisStrategy::LastFit => linalg::last_basis(f, &fibers),
        };
        if selected.len() != rank {
            return Err(Error::RankMismatch {
                atom: atoms.label(q).to_string(),
                expected: rank,
                found: selected.len(),
            });
        }
        match groups.iter_mut().find(|(sel, _)| *sel == selected) {
            Some((_, qs)) => qs.push(q),
            None => groups.push((selected, vec![q])),
        }
    }
    let mut basis = Vec::with_capacity(rank);
    for k in 0..rank {
        let mut v = ModuleVector::zero(gens.algebra(), gens.ambient_dim())?;
        for (selected, qs) in &groups {
            let part = Idempotent::from_indices(atoms, qs.iter().copied());
            v = v.add(&gens.gens()[selected[k]].restrict(&part)?)?;
        }
        basis.push(v);
    }
    Ok(basis)
}

/// A local basis on every passport piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseBasis<F: Field> {
    pub partition: PartitionOfUnity,
    pub bases: Vec<Vec<ModuleVector<F>>>,
}

pub fn piecewise_basis<F: Field>(
    gens: &GeneratorSet<F>,
    strategy: BasisStrategy,
) -> Result<PiecewiseBasis<F>> {
    let pp = passport(gens)?;
    let bases = pp
        .entries()
        .iter()
        .map(|e| extract_basis(gens, &e.piece, e.rank, strategy))
        .collect::<Result<_>>()?;
    Ok(PiecewiseBasis {
        partition: pp.partition(),
        bases,
    })
}

/// Two presentations define isomorphic modules iff their passports agree.
pub fn iso_check<F: Field>(g: &GeneratorSet<F>, h: &GeneratorSet<F>) -> Result<bool> {
    g.check_same(h)?;
    Ok(passport(g)? == passport(h)?)
}

/// The map on one passport piece: `source_basis[k] ↦ Σ_l transfer[k][l] · target_basis[l]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoPiece<F: Field> {
    pub piece: Idempotent,
    pub rank: usize,
    pub source_basis: Vec<ModuleVector<F>>,
    pub target_basis: Vec<ModuleVector<F>>,
    /// `rank × rank` matrix over `A_piece`, invertible in every fiber.
    pub transfer: Vec<Vec<AlgebraElement<F>>>,
    /// Row `i`: coordinates of `piece · g_i` in the source basis.
    pub source_coordinates: Vec<Vec<AlgebraElement<F>>>,
}

/// A piecewise isomorphism `X → Y` between presented modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoMap<F: Field> {
    pub algebra: Arc<Algebra<F>>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub partition: PartitionOfUnity,
    pub pieces: Vec<IsoPiece<F>>,
    /// Image of every source generator.
    pub generator_images: Vec<ModuleVector<F>>,
    /// Row `i`: `generator_images[i]` as an `A`-combination of the target
    /// generators.
    pub image_coordinates: Vec<Vec<AlgebraElement<F>>>,
}

impl<F: Field> IsoMap<F> {
    /// Applies the map to a vector of the source module.
    pub fn apply(&self, x: &ModuleVector<F>) -> Result<ModuleVector<F>> {
        let mut out = ModuleVector::zero(&self.algebra, self.target_dim)?;
        for p in &self.pieces {
            let basis = GeneratorSet::new(&self.algebra, self.source_dim, p.source_basis.clone())?;
            let coeffs = match membership(x, &basis, &p.piece)? {
                Membership::Member { coefficients } => coefficients,
                Membership::NotMember { atom } => {
                    return Err(Error::NotInDomain {
                        atom: self.algebra.atoms().label(atom).to_string(),
                    })
                }
            };
            out = out.add(&p.image_of_coordinates(&coeffs, &self.algebra, self.target_dim)?)?;
        }
        Ok(out)
    }

    /// The fiber of the transfer matrix at an atom.
    pub fn fiber_matrix(&self, atom: usize) -> Vec<Vec<F::Elem>> {
        let p = self
            .pieces
            .iter()
            .find(|p| p.piece.contains(atom))
            .expect("pieces cover every atom");
        p.transfer
            .iter()
            .map(|row| row.iter().map(|a| a.at(atom).clone()).collect())
            .collect()
    }
}

impl<F: Field> IsoPiece<F> {
    /// `Σ_k c_k Σ_l transfer[k][l] · target_basis[l]`, restricted to the piece.
    fn image_of_coordinates(
        &self,
        coeffs: &[AlgebraElement<F>],
        algebra: &Arc<Algebra<F>>,
        target_dim: usize,
    ) -> Result<ModuleVector<F>> {
        let mut out = ModuleVector::zero(algebra, target_dim)?;
        for (c, row) in coeffs.iter().zip(&self.transfer) {
            for (t, target) in row.iter().zip(&self.target_basis) {
                out = out.add(&target.scale(&c.mul(t)?)?)?;
            }
        }
        out.restrict(&self.piece)
    }
}

/// Builds an explicit isomorphism by matching local bases piece by piece.
pub fn build_isomorphism<F: Field>(g: &GeneratorSet<F>, h: &GeneratorSet<F>) -> Result<IsoMap<F>> {
    g.check_same(h)?;
    let pg = passport(g)?;
    if pg != passport(h)? {
        return Err(Error::PassportMismatch);
    }
    let alg = g.algebra();
    let mut pieces = Vec::with_capacity(pg.entries().len());
    for entry in pg.entries() {
        let source_basis = extract_basis(g, &entry.piece, entry.rank, BasisStrategy::FirstFit)?;
        let target_basis = extract_basis(h, &entry.piece, entry.rank, BasisStrategy::FirstFit)?;
        let piece_one = AlgebraElement::from_idempotent(alg, &entry.piece)?;
        let transfer = (0..entry.rank)
            .map(|k| {
                (0..entry.rank)
                    .map(|l| {
                        if k == l {
                            piece_one.clone()
                        } else {
                            AlgebraElement::zero(alg)
                        }
                    })
                    .collect()
            })
            .collect();
        let basis_set = GeneratorSet::new(alg, g.ambient_dim(), source_basis.clone())?;
        let source_coordinates = g
            .gens()
            .iter()
            .map(|gi| match membership(gi, &basis_set, &entry.piece)? {
                Membership::Member { coefficients } => Ok(coefficients),
                Membership::NotMember { .. } => unreachable!("a local basis spans every generator"),
            })
            .collect::<Result<_>>()?;
        pieces.push(IsoPiece {
            piece: entry.piece.clone(),
            rank: entry.rank,
            source_basis,
            target_basis,
            transfer,
            source_coordinates,
        });
    }

    let mut generator_images = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let mut img = ModuleVector::zero(alg, h.ambient_dim())?;
        for p in &pieces {
            img = img.add(&p.image_of_coordinates(
                &p.source_coordinates[i],
                alg,
                h.ambient_dim(),
            )?)?;
        }
        generator_images.push(img);
    }
    let one = Idempotent::one(alg.atoms());
    let image_coordinates = generator_images
        .iter()
        .map(|img| match membership(img, h, &one)? {
            Membership::Member { coefficients } => Ok(coefficients),
            Membership::NotMember { .. } => unreachable!("images lie in the target module"),
        })
        .collect::<Result<_>>()?;

    Ok(IsoMap {
        algebra: Arc::clone(alg),
        source_dim: g.ambient_dim(),
        target_dim: h.ambient_dim(),
        partition: pg.partition(),
        pieces,
        generator_images,
        image_coordinates,
    })
}

/// Structure of a finitely generated module as a product `∏ A_{e_i}^{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimReport {
    pub passport: Passport,
    /// Upper bound on the size of any `A_e`-independent family: the largest rank.
    pub independence_bound: usize,
    pub faithful: bool,
}

impl FiniteDimReport {
    /// Passport entries with nonzero rank.
    pub fn factors(&self) -> impl Iterator<Item = &PassportEntry> {
        self.passport.entries().iter().filter(|e| e.rank > 0)
    }

    /// `A_{q2}^1 × A_{q1,q3}^2`, `A^3`, or `0 module`.
    pub fn product(&self) -> String {
        let factors: Vec<&PassportEntry> = self.factors().collect();
        match factors.as_slice() {
            [] => "0 module".to_string(),
            [only] if only.piece.is_one() => format!("A^{}", only.rank),
            _ => factors
                .iter()
                .map(|e| format!("A_{{{}}}^{}", e.piece.labels().join(","), e.rank))
                .collect::<Vec<_>>()
                .join(" × "),
        }
    }
}

impl fmt::Display for FiniteDimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure={}", self.product())?;
        writeln!(f, "independence_bound={}", self.independence_bound)?;
        writeln!(f, "faithful={}", self.faithful)
    }
}

pub fn finitely_dimensional_report<F: Field>(gens: &GeneratorSet<F>) -> Result<FiniteDimReport> {
    let passport = passport(gens)?;
    Ok(FiniteDimReport {
        independence_bound: passport.max_rank(),
        faithful: passport.is_faithful(),
        passport,
    })
}

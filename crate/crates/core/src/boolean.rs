//! The complete atomic Boolean algebra of idempotents over a finite atom set.
//!
//! An [`Idempotent`] is a subset of the atoms, stored as a word-packed mask.
//! Viewed inside the algebra `K^atoms` it is the 0/1 indicator function, so
//! meet is the product `ef` and join is `e + f - ef`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered finite set of distinct atom labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomSet {
    labels: Vec<String>,
}

impl AtomSet {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidAtomSet(
                "at least one atom is required".into(),
            ));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::InvalidAtomSet("empty atom label".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAtomSet(format!("duplicate atom label `{l}`")));
            }
        }
        Ok(Arc::new(AtomSet { labels }))
    }

    /// Atoms labelled `q1..qd`.
    pub fn numbered(d: usize) -> Result<Arc<Self>> {
        Self::new((1..=d).map(|i| format!("q{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

pub(crate) fn same_atoms(a: &Arc<AtomSet>, b: &Arc<AtomSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

const WORD: usize = 64;

/// An element of the Boolean algebra: a subset of an [`AtomSet`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Idempotent {
    bits: Vec<u64>,
    atoms: Arc<AtomSet>,
}

impl Idempotent {
    pub fn zero(atoms: &Arc<AtomSet>) -> Self {
        Idempotent {
            bits: vec![0; atoms.len().div_ceil(WORD)],
            atoms: Arc::clone(atoms),
        }
    }

    pub fn one(atoms: &Arc<AtomSet>) -> Self {
        let mut e = Self::zero(atoms);
        e.bits.iter_mut().for_each(|w| *w = !0);
        e.trim();
        e
    }

    pub fn atom(atoms: &Arc<AtomSet>, index: usize) -> Self {
        Self::from_indices(atoms, [index])
    }

    /// Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(atoms: &Arc<AtomSet>, indices: I) -> Self {
        let mut e = Self::zero(atoms);
        for i in indices {
            assert!(i < atoms.len(), "atom index {i} out of range");
            e.bits[i / WORD] |= 1 << (i % WORD);
        }
        e
    }

    pub fn from_labels<I, S>(atoms: &Arc<AtomSet>, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut idx = Vec::new();
        for l in labels {
            let l = l.as_ref();
            idx.push(
                atoms
                    .index_of(l)
                    .ok_or_else(|| Error::UnknownAtom(l.to_string()))?,
            );
        }
        Ok(Self::from_indices(atoms, idx))
    }

    pub fn from_predicate(atoms: &Arc<AtomSet>, mut pred: impl FnMut(usize) -> bool) -> Self {
        Self::from_indices(atoms, (0..atoms.len()).filter(|&i| pred(i)))
    }

    fn trim(&mut self) {
        let rem = self.atoms.len() % WORD;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn atoms(&self) -> &Arc<AtomSet> {
        &self.atoms
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.atoms.len() && self.bits[index / WORD] >> (index % WORD) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.count() == self.atoms.len()
    }

    /// Number of atoms below this idempotent.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the atoms below this idempotent, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.atoms.len()).filter(move |&i| self.contains(i))
    }

    pub fn first_atom(&self) -> Option<usize> {
        self.indices().next()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.atoms.label(i)).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_atoms(&self.atoms, &other.atoms) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check(other)?;
        let mut out = Idempotent {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| op(*a, *b))
                .collect(),
            atoms: Arc::clone(&self.atoms),
        };
        out.trim();
        Ok(out)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & b)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a | b)
    }

    /// `self ∧ C(other)`.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut out = Idempotent {
            bits: self.bits.iter().map(|w| !w).collect(),
            atoms: Arc::clone(&self.atoms),
        };
        out.trim();
        out
    }

    /// `self <= other`, i.e. `self · other = self`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0))
    }
}

impl fmt::Debug for Idempotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Idempotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

/// Supremum of a family; the empty family yields `0` over `atoms`.
pub fn sup_family(atoms: &Arc<AtomSet>, family: &[Idempotent]) -> Result<Idempotent> {
    family
        .iter()
        .try_fold(Idempotent::zero(atoms), |acc, e| acc.join(e))
}

/// Exhausts `e` by a disjoint family drawn from `family`.
///
/// Greedy first fit: while the residual `r` is nonzero, take the first
/// nonzero member `b <= r` in list order, emit it and remove it from `r`.
/// The output is pairwise disjoint with supremum `e`. Fails with
/// [`Error::NotMinorant`] when some nonzero residual dominates no member.
pub fn disjointify(e: &Idempotent, family: &[Idempotent]) -> Result<Vec<Idempotent>> {
    for b in family {
        e.check(b)?;
    }
    let mut residual = e.clone();
    let mut out = Vec::new();
    while !residual.is_zero() {
        let next = family
            .iter()
            .find(|b| !b.is_zero() && b.le(&residual).unwrap_or(false));
        match next {
            Some(b) => {
                residual = residual.minus(b)?;
                out.push(b.clone());
            }
            None => {
                return Err(Error::NotMinorant {
                    residual: residual.labels().into_iter().map(String::from).collect(),
                })
            }
        }
    }
    Ok(out)
}

/// Pairwise disjoint nonzero idempotents whose join is unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfUnity {
    pieces: Vec<Idempotent>,
}

impl PartitionOfUnity {
    pub fn new(pieces: Vec<Idempotent>) -> Result<Self> {
        let first = pieces
            .first()
            .ok_or_else(|| Error::InvalidPartition("no pieces".into()))?;
        let atoms = Arc::clone(first.atoms());
        let mut covered = Idempotent::zero(&atoms);
        for p in &pieces {
            if p.is_zero() {
                return Err(Error::InvalidPartition("zero piece".into()));
            }
            if !covered.is_disjoint(p)? {
                return Err(Error::InvalidPartition(format!(
                    "piece {p} overlaps another"
                )));
            }
            covered = covered.join(p)?;
        }
        if !covered.is_one() {
            return Err(Error::InvalidPartition(format!(
                "pieces leave {} uncovered",
                covered.complement()
            )));
        }
        Ok(PartitionOfUnity { pieces })
    }

    /// The one-piece partition `[1]`.
    pub fn trivial(atoms: &Arc<AtomSet>) -> Self {
        PartitionOfUnity {
            pieces: vec![Idempotent::one(atoms)],
        }
    }

    /// Each atom as its own piece.
    pub fn atoms(atoms: &Arc<AtomSet>) -> Self {
        PartitionOfUnity {
            pieces: (0..atoms.len())
                .map(|i| Idempotent::atom(atoms, i))
                .collect(),
        }
    }

    /// Groups atoms by a key; pieces are ordered by their first atom.
    pub fn by_key<K: PartialEq>(atoms: &Arc<AtomSet>, key: impl Fn(usize) -> K) -> Self {
        let mut keys: Vec<K> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for q in 0..atoms.len() {
            let k = key(q);
            match keys.iter().position(|x| *x == k) {
                Some(pos) => groups[pos].push(q),
                None => {
                    keys.push(k);
                    groups.push(vec![q]);
                }
            }
        }
        PartitionOfUnity {
            pieces: groups
                .into_iter()
                .map(|g| Idempotent::from_indices(atoms, g))
                .collect(),
        }
    }

    pub fn pieces(&self) -> &[Idempotent] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn atom_set(&self) -> &Arc<AtomSet> {
        self.pieces[0].atoms()
    }

    /// Pieces `e ∧ piece` that are nonzero: a partition of `e`.
    pub fn restrict_to(&self, e: &Idempotent) -> Result<Vec<Idempotent>> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let m = e.meet(p)?;
            if !m.is_zero() {
                out.push(m);
            }
        }
        Ok(out)
    }

    /// Common refinement: all nonzero pairwise meets.
    pub fn refine(&self, other: &Self) -> Result<Self> {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            pieces.extend(other.restrict_to(p)?);
        }
        Ok(PartitionOfUnity { pieces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Arc<AtomSet> {
        AtomSet::numbered(3).unwrap()
    }

    fn set(atoms: &Arc<AtomSet>, labels: &[&str]) -> Idempotent {
        Idempotent::from_labels(atoms, labels).unwrap()
    }

    #[test]
    fn atom_set_validation() {
        assert!(AtomSet::new(Vec::<String>::new()).is_err());
        assert!(AtomSet::new(["a", "a"]).is_err());
        assert!(AtomSet::new(["a", ""]).is_err());
        assert_eq!(AtomSet::new(["x", "y"]).unwrap().index_of("y"), Some(1));
    }

    #[test]
    fn meet_examples() {
        let a = q3();
        let e = set(&a, &["q1", "q2"]);
        let f = set(&a, &["q2", "q3"]);
        assert_eq!(e.meet(&f).unwrap(), set(&a, &["q2"]));
        assert_eq!(e.meet(&e).unwrap(), e);
        assert_eq!(e.meet(&Idempotent::zero(&a)).unwrap(), Idempotent::zero(&a));
    }

    #[test]
    fn join_examples() {
        let a = q3();
        let e = set(&a, &["q1"]);
        assert_eq!(e.join(&set(&a, &["q3"])).unwrap(), set(&a, &["q1", "q3"]));
        assert!(e.join(&Idempotent::one(&a)).unwrap().is_one());
    }

    #[test]
    fn complement_examples() {
        let a = q3();
        let e = set(&a, &["q1"]);
        assert_eq!(e.complement(), set(&a, &["q2", "q3"]));
        assert!(Idempotent::zero(&a).complement().is_one());
        assert_eq!(e.complement().complement(), e);
    }

    #[test]
    fn context_mismatch_fails_fast() {
        let a = q3();
        let b = AtomSet::new(["x", "y", "z"]).unwrap();
        let e = Idempotent::one(&a);
        let f = Idempotent::one(&b);
        assert_eq!(e.meet(&f), Err(Error::ContextMismatch));
        assert_eq!(e.join(&f), Err(Error::ContextMismatch));
        assert_eq!(sup_family(&a, &[e, f]), Err(Error::ContextMismatch));
        // equal label lists in separate allocations are the same context
        let a2 = q3();
        assert!(Idempotent::one(&a).meet(&Idempotent::one(&a2)).is_ok());
    }

    #[test]
    fn sup_examples() {
        let a = q3();
        let s = sup_family(&a, &[set(&a, &["q1"]), set(&a, &["q2"])]).unwrap();
        assert_eq!(s, set(&a, &["q1", "q2"]));
        assert!(sup_family(&a, &[]).unwrap().is_zero());
        let p = PartitionOfUnity::atoms(&a);
        assert!(sup_family(&a, p.pieces()).unwrap().is_one());
    }

    #[test]
    fn disjointify_examples() {
        let a = q3();
        let atoms: Vec<_> = (0..3).map(|i| Idempotent::atom(&a, i)).collect();
        assert_eq!(disjointify(&Idempotent::one(&a), &atoms).unwrap(), atoms);

        let e = set(&a, &["q1", "q2"]);
        let b = [set(&a, &["q1"]), set(&a, &["q1", "q2"])];
        assert_eq!(
            disjointify(&e, &b),
            Err(Error::NotMinorant {
                residual: vec!["q2".into()]
            })
        );

        assert!(disjointify(&Idempotent::zero(&a), &b).unwrap().is_empty());
    }

    #[test]
    fn disjointify_prefers_list_order() {
        let a = AtomSet::numbered(4).unwrap();
        let b = [
            set(&a, &["q4"]),
            set(&a, &["q1", "q2"]),
            set(&a, &["q1"]),
            set(&a, &["q2"]),
            set(&a, &["q3"]),
        ];
        let out = disjointify(&Idempotent::one(&a), &b).unwrap();
        assert_eq!(out, vec![b[0].clone(), b[1].clone(), b[4].clone()]);
    }

    #[test]
    fn partition_validation() {
        let a = q3();
        assert!(PartitionOfUnity::new(vec![]).is_err());
        assert!(PartitionOfUnity::new(vec![set(&a, &["q1"]), set(&a, &["q2", "q3"])]).is_ok());
        assert!(PartitionOfUnity::new(vec![set(&a, &["q1"]), set(&a, &["q2"])]).is_err());
        assert!(
            PartitionOfUnity::new(vec![set(&a, &["q1", "q2"]), set(&a, &["q2", "q3"])]).is_err()
        );
        assert!(PartitionOfUnity::new(vec![Idempotent::one(&a), Idempotent::zero(&a)]).is_err());
    }

    #[test]
    fn wide_atom_sets_trim_high_bits() {
        let a = AtomSet::numbered(70).unwrap();
        let one = Idempotent::one(&a);
        assert_eq!(one.count(), 70);
        assert!(one.complement().is_zero());
        let e = Idempotent::from_indices(&a, [0, 64, 69]);
        assert_eq!(e.complement().count(), 67);
        assert_eq!(e.indices().collect::<Vec<_>>(), vec![0, 64, 69]);
    }

    #[test]
    fn lattice_laws_exhaustive_on_four_atoms() {
        let a = AtomSet::numbered(4).unwrap();
        let all: Vec<Idempotent> = (0u32..16)
            .map(|m| Idempotent::from_predicate(&a, |i| m >> i & 1 == 1))
            .collect();
        for e in &all {
            assert_eq!(e.meet(e).unwrap(), *e);
            assert_eq!(e.join(e).unwrap(), *e);
            assert!(e.meet(&e.complement()).unwrap().is_zero());
            assert!(e.join(&e.complement()).unwrap().is_one());
            for f in &all {
                assert_eq!(e.meet(f).unwrap(), f.meet(e).unwrap());
                assert_eq!(e.join(f).unwrap(), f.join(e).unwrap());
                assert_eq!(e.meet(&e.join(f).unwrap()).unwrap(), *e);
                assert_eq!(e.join(&e.meet(f).unwrap()).unwrap(), *e);
                assert_eq!(
                    e.meet(f).unwrap().complement(),
                    e.complement().join(&f.complement()).unwrap()
                );
                assert_eq!(
                    e.join(f).unwrap().complement(),
                    e.complement().meet(&f.complement()).unwrap()
                );
                for g in &all {
                    assert_eq!(
                        e.meet(&f.meet(g).unwrap()).unwrap(),
                        e.meet(f).unwrap().meet(g).unwrap()
                    );
                    assert_eq!(
                        e.join(&f.join(g).unwrap()).unwrap(),
                        e.join(f).unwrap().join(g).unwrap()
                    );
                    assert_eq!(
                        e.meet(&f.join(g).unwrap()).unwrap(),
                        e.meet(f).unwrap().join(&e.meet(g).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}

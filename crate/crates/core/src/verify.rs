//! Seeded randomized property suite covering the algebraic laws of every
//! layer, the oracle equivalence of the classifier, and the isomorphism
//! criterion.
//!
//! Each case draws its field (`F_2`, `F_5`, `F_97` or `Q`), atom count,
//! ambient dimension and generator count from a ChaCha8 stream derived from
//! `(seed, property, case)`, so a run is reproducible from the seed alone.
//! A failing case is shrunk by dropping generators, coordinates and atoms
//! while it keeps failing.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{mix_scalars, Algebra, AlgebraElement};
use crate::boolean::{disjointify, sup_family, AtomSet, Idempotent, PartitionOfUnity};
use crate::classification::{
    build_isomorphism, extract_basis, is_strictly_homogeneous, iso_check, kappa, passport,
    regular_eliminate, BasisStrategy, Kappa, Passport, PassportEntry,
};
use crate::error::Error;
use crate::field::{Field, PrimeField, Rationals};
use crate::module_space::{
    full_support_element, independence_test, membership, mix_vectors, reassemble, split_product,
    GeneratorSet, Membership, ModuleVector,
};
use crate::oracle::{atom_rank_profile, oracle_passport, oracle_verify_iso};
use crate::random::{
    perturb_rank_profile, random_ambient_image, random_idempotent, random_lin_element,
    random_module, random_nonzero_idempotent, random_partition, GeneratorOp,
};

/// Deliberate corruptions used to check that the suite detects bugs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Raise the top passport rank before comparing with the oracle.
    PassportRank,
    /// Replace `i(a)` by `a` in the identity checks.
    Inversion,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "passport" => Ok(Fault::PassportRank),
            "inversion" => Ok(Fault::Inversion),
            other => Err(format!(
                "unknown fault `{other}` (expected passport|inversion)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub case: usize,
    pub case_seed: u64,
    pub module: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: usize,
    pub cases: usize,
    pub failure: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failure.is_none())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            let status = if p.failure.is_none() { "ok" } else { "FAILED" };
            writeln!(f, "{:<28} {}/{} {status}", p.name, p.passed, p.cases)?;
        }
        for p in &self.properties {
            if let Some(c) = &p.failure {
                writeln!(
                    f,
                    "counterexample for {} (case {}, case seed {:#018x}):",
                    p.name, c.case, c.case_seed
                )?;
                writeln!(f, "  {}", c.message)?;
                for line in c.module.lines() {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        let failed = self
            .properties
            .iter()
            .filter(|p| p.failure.is_some())
            .count();
        if failed == 0 {
            writeln!(f, "all {} properties passed", self.properties.len())
        } else {
            writeln!(f, "{failed} of {} properties failed", self.properties.len())
        }
    }
}

/// Failure message of a single check.
#[derive(Debug)]
pub struct Failure(pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(format!("unexpected error: {e}"))
    }
}

type Outcome = Result<(), Failure>;
type Check<F> = fn(&GeneratorSet<F>, &mut ChaCha8Rng, Option<Fault>) -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Failure(format!($($msg)+)));
        }
    };
}

struct Property {
    name: &'static str,
    fp: Check<PrimeField>,
    q: Check<Rationals>,
}

macro_rules! property {
    ($name:literal, $check:ident) => {
        Property {
            name: $name,
            fp: $check::<PrimeField>,
            q: $check::<Rationals>,
        }
    };
}

fn properties() -> Vec<Property> {
    vec![
        property!("lattice_laws", lattice_laws),
        property!("disjointify", disjointify_exhausts),
        property!("partition_restriction", partition_restriction),
        property!("support_of_product", support_of_product),
        property!("disjoint_sum", disjoint_sum),
        property!("regularity", regularity),
        property!("inversion_involution", inversion_involution),
        property!("inversion_of_idempotent", inversion_of_idempotent),
        property!("partition_uniqueness", partition_uniqueness),
        property!("step_form", step_form_roundtrip),
        property!("vector_support", vector_support),
        property!("mixing_refinement", mixing_refinement),
        property!("mixing_action", mixing_action),
        property!("mix_closure", mix_closure),
        property!("product_decomposition", product_decomposition),
        property!("full_support_element", full_support),
        property!("elimination_partition", elimination_partition),
        property!("oracle_equivalence", oracle_equivalence),
        property!("presentation_invariance", presentation_invariance),
        property!("basis_cardinality", basis_cardinality),
        property!("independence_bound", independence_bound),
        property!("gluing_and_witness", gluing_and_witness),
        property!("iso_positive", iso_positive),
        property!("iso_negative", iso_negative),
    ]
}

/// Names of all properties in suite order.
pub fn property_names() -> Vec<&'static str> {
    properties().iter().map(|p| p.name).collect()
}

fn case_seed(seed: u64, property: usize, case: usize) -> u64 {
    // splitmix64 finalizer over the packed triple
    let mut z =
        seed ^ ((property as u64) << 40) ^ (case as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn run_suite(config: &VerifyConfig) -> VerifyReport {
    let props = properties();
    let properties = props
        .iter()
        .enumerate()
        .map(|(idx, prop)| {
            let mut passed = 0;
            let mut failure = None;
            for case in 0..config.cases {
                let s = case_seed(config.seed, idx, case);
                match run_case(prop, s, config.fault) {
                    None => passed += 1,
                    Some((module, message)) => {
                        failure = Some(Counterexample {
                            case,
                            case_seed: s,
                            module,
                            message,
                        });
                        break;
                    }
                }
            }
            PropertyReport {
                name: prop.name,
                passed,
                cases: config.cases,
                failure,
            }
        })
        .collect();
    VerifyReport { properties }
}

fn run_case(prop: &Property, seed: u64, fault: Option<Fault>) -> Option<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match rng.gen_range(0..4) {
        0 => run_typed(PrimeField::new(2).expect("prime"), prop.fp, &mut rng, fault),
        1 => run_typed(PrimeField::new(5).expect("prime"), prop.fp, &mut rng, fault),
        2 => run_typed(
            PrimeField::new(97).expect("prime"),
            prop.fp,
            &mut rng,
            fault,
        ),
        _ => run_typed(Rationals, prop.q, &mut rng, fault),
    }
}

fn run_typed<F: Field>(
    field: F,
    check: Check<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Option<(String, String)> {
    let d = rng.gen_range(1..=8);
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(0..=4);
    let alg = Algebra::new(field, AtomSet::numbered(d).expect("valid atoms"));
    let module = random_module(&alg, n, m, rng).expect("generated module is valid");
    let check_seed: u64 = rng.gen();
    let run = |g: &GeneratorSet<F>| check(g, &mut ChaCha8Rng::seed_from_u64(check_seed), fault);
    let Err(Failure(message)) = run(&module) else {
        return None;
    };
    let (module, message) = shrink(module, message, run);
    Some((module.to_string(), message))
}

/// Greedily drops generators, coordinates and atoms while the check still fails.
fn shrink<F: Field>(
    mut module: GeneratorSet<F>,
    mut message: String,
    run: impl Fn(&GeneratorSet<F>) -> Outcome,
) -> (GeneratorSet<F>, String) {
    'outer: loop {
        for candidate in shrink_candidates(&module) {
            if let Err(Failure(msg)) = run(&candidate) {
                module = candidate;
                message = msg;
                continue 'outer;
            }
        }
        return (module, message);
    }
}

fn shrink_candidates<F: Field>(g: &GeneratorSet<F>) -> Vec<GeneratorSet<F>> {
    let mut out = Vec::new();
    let alg = g.algebra();
    for i in 0..g.len() {
        let mut gens = g.gens().to_vec();
        gens.remove(i);
        out.extend(GeneratorSet::new(alg, g.ambient_dim(), gens));
    }
    if g.ambient_dim() > 1 {
        for j in 0..g.ambient_dim() {
            let gens: Vec<ModuleVector<F>> = g
                .gens()
                .iter()
                .map(|v| {
                    let mut coords = v.coords().to_vec();
                    coords.remove(j);
                    ModuleVector::new(coords).expect("nonempty")
                })
                .collect();
            out.extend(GeneratorSet::new(alg, g.ambient_dim() - 1, gens));
        }
    }
    let d = alg.dim();
    if d > 1 {
        for drop in 0..d {
            let keep: Vec<usize> = (0..d).filter(|&q| q != drop).collect();
            let atoms = AtomSet::new(keep.iter().map(|&q| alg.atoms().label(q).to_string()))
                .expect("subset");
            let sub = Algebra::new(alg.field().clone(), atoms);
            let gens: Vec<ModuleVector<F>> = g
                .gens()
                .iter()
                .map(|v| {
                    let coords = v
                        .coords()
                        .iter()
                        .map(|c| {
                            AlgebraElement::new(
                                &sub,
                                keep.iter().map(|&q| c.at(q).clone()).collect(),
                            )
                        })
                        .collect::<Result<_, _>>()?;
                    ModuleVector::new(coords)
                })
                .collect::<Result<_, Error>>()
                .expect("restriction to fewer atoms");
            out.extend(GeneratorSet::new(&sub, g.ambient_dim(), gens));
        }
    }
    out
}

fn atoms_of<F: Field>(g: &GeneratorSet<F>) -> &Arc<AtomSet> {
    g.algebra().atoms()
}

fn inversion<F: Field>(a: &AlgebraElement<F>, fault: Option<Fault>) -> AlgebraElement<F> {
    if fault == Some(Fault::Inversion) {
        a.clone()
    } else {
        a.inversion()
    }
}

fn engine_passport<F: Field>(
    g: &GeneratorSet<F>,
    fault: Option<Fault>,
) -> Result<Passport, Failure> {
    let p = passport(g)?;
    if fault != Some(Fault::PassportRank) {
        return Ok(p);
    }
    let mut entries = p.entries().to_vec();
    if let Some(last) = entries.last_mut() {
        last.rank += 1;
    }
    Ok(Passport::new(entries)?)
}

fn lattice_laws<F: Field>(g: &GeneratorSet<F>, rng: &mut ChaCha8Rng, _: Option<Fault>) -> Outcome {
    let atoms = atoms_of(g);
    let (e, f, h) = (
        random_idempotent(atoms, rng),
        random_idempotent(atoms, rng),
        random_idempotent(atoms, rng),
    );
    ensure!(e.meet(&f)? == f.meet(&e)?, "meet not commutative");
    ensure!(e.join(&f)? == f.join(&e)?, "join not commutative");
    ensure!(
        e.meet(&f.meet(&h)?)? == e.meet(&f)?.meet(&h)?,
        "meet not associative"
    );
    ensure!(
        e.join(&f.join(&h)?)? == e.join(&f)?.join(&h)?,
        "join not associative"
    );
    ensure!(
        e.meet(&f.join(&h)?)? == e.meet(&f)?.join(&e.meet(&h)?)?,
        "meet does not distribute over join"
    );
    ensure!(
        e.join(&f.meet(&h)?)? == e.join(&f)?.meet(&e.join(&h)?)?,
        "join does not distribute over meet"
    );
    ensure!(e.meet(&e.join(&f)?)? == e, "absorption fails");
    ensure!(
        e.meet(&f)?.complement() == e.complement().join(&f.complement())?,
        "De Morgan fails"
    );
    ensure!(
        e.meet(&e.complement())?.is_zero() && e.join(&e.complement())?.is_one(),
        "complement laws fail"
    );
    let alg = g.algebra();
    let (ae, af) = (
        AlgebraElement::from_idempotent(alg, &e)?,
        AlgebraElement::from_idempotent(alg, &f)?,
    );
    ensure!(
        AlgebraElement::from_idempotent(alg, &e.join(&f)?)? == ae.add(&af)?.sub(&ae.mul(&af)?)?,
        "join differs from e + f - ef"
    );
    ensure!(
        AlgebraElement::from_idempotent(alg, &e.meet(&f)?)? == ae.mul(&af)?,
        "meet differs from ef"
    );
    Ok(())
}

fn disjointify_exhausts<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let atoms = atoms_of(g);
    let e = random_idempotent(atoms, rng);
    let mut family: Vec<Idempotent> = (0..rng.gen_range(0..5))
        .map(|_| random_idempotent(atoms, rng))
        .collect();
    family.extend((0..atoms.len()).map(|q| Idempotent::atom(atoms, q)));
    rand::seq::SliceRandom::shuffle(family.as_mut_slice(), rng);
    let l = disjointify(&e, &family)?;
    for (i, a) in l.iter().enumerate() {
        ensure!(a.le(&e)?, "{a} not below {e}");
        for b in &l[i + 1..] {
            ensure!(a.is_disjoint(b)?, "{a} and {b} overlap");
        }
    }
    ensure!(
        sup_family(atoms, &l)? == e,
        "sup of exhaustion differs from {e}"
    );
    Ok(())
}

fn partition_restriction<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let atoms = atoms_of(g);
    let p = random_partition(atoms, 4, rng);
    let e = random_idempotent(atoms, rng);
    let parts = p.restrict_to(&e)?;
    for (i, a) in parts.iter().enumerate() {
        ensure!(!a.is_zero(), "zero part");
        for b in &parts[i + 1..] {
            ensure!(a.is_disjoint(b)?, "parts overlap");
        }
    }
    ensure!(sup_family(atoms, &parts)? == e, "parts do not cover {e}");
    Ok(())
}

fn support_of_product<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let a = AlgebraElement::random(alg, rng);
    let b = AlgebraElement::random(alg, rng);
    let ab = a.mul(&b)?;
    let meet = a.support().meet(&b.support())?;
    ensure!(
        ab.support() == meet,
        "s(ab) = {} but s(a)s(b) = {meet}",
        ab.support()
    );
    ensure!(
        ab.is_zero() == meet.is_zero(),
        "ab = 0 disagrees with s(a)s(b) = 0"
    );
    Ok(())
}

fn disjoint_sum<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let a = AlgebraElement::random(alg, rng);
    let b = AlgebraElement::random(alg, rng).restrict(&a.annihilator())?;
    ensure!(
        a.mul(&b)?.is_zero(),
        "constructed elements are not disjoint"
    );
    let sum = a.add(&b)?;
    ensure!(
        inversion(&sum, fault) == inversion(&a, fault).add(&inversion(&b, fault))?,
        "i(a+b) != i(a)+i(b) for a={a}, b={b}"
    );
    ensure!(
        sum.support() == a.support().join(&b.support())?,
        "s(a+b) != s(a)+s(b)"
    );
    Ok(())
}

fn regularity<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let a = AlgebraElement::random(alg, rng);
    let ia = inversion(&a, fault);
    ensure!(a.mul(&a)?.mul(&ia)? == a, "a²·i(a) != a for a={a}");
    ensure!(a.mul(&ia)?.mul(&ia)? == ia, "a·i(a)² != i(a) for a={a}");
    ensure!(
        a.mul(&ia)? == AlgebraElement::from_idempotent(alg, &a.support())?,
        "a·i(a) != s(a) for a={a}"
    );
    Ok(())
}

fn inversion_involution<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let a = AlgebraElement::random(g.algebra(), rng);
    ensure!(
        inversion(&inversion(&a, fault), fault) == a,
        "i(i(a)) != a for a={a}"
    );
    Ok(())
}

fn inversion_of_idempotent<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let e = AlgebraElement::from_idempotent(alg, &random_idempotent(alg.atoms(), rng))?;
    ensure!(inversion(&e, fault) == e, "i(e) != e for e={e}");
    Ok(())
}

fn partition_uniqueness<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let p = random_partition(alg.atoms(), 4, rng);
    let a = AlgebraElement::random(alg, rng);
    // elements agreeing with a on one piece each, arbitrary elsewhere
    let locals: Vec<AlgebraElement<F>> = p
        .pieces()
        .iter()
        .map(|e| {
            let noise = AlgebraElement::random(alg, rng).restrict(&e.complement())?;
            a.restrict(e)?.add(&noise)
        })
        .collect::<Result<_, Error>>()?;
    let b = mix_scalars(&p, &locals)?;
    for e in p.pieces() {
        ensure!(b.restrict(e)? == a.restrict(e)?, "mixture disagrees on {e}");
    }
    ensure!(b == a, "a·e_i = b·e_i for all pieces but a != b");
    Ok(())
}

fn step_form_roundtrip<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let a = AlgebraElement::random(alg, rng);
    let b = AlgebraElement::random(alg, rng);
    for x in [a.clone(), a.add(&b)?, a.mul(&b)?] {
        let sf = x.step_form();
        ensure!(
            sf.to_element(alg)? == x,
            "step form of {x} does not reconstruct it"
        );
        for (i, (c, e)) in sf.terms.iter().enumerate() {
            ensure!(!alg.field().is_zero(c) && !e.is_zero(), "degenerate term");
            for (c2, e2) in &sf.terms[i + 1..] {
                ensure!(c != c2 && e.is_disjoint(e2)?, "terms not distinct/disjoint");
            }
        }
        let firsts: Vec<_> = sf.terms.iter().map(|(_, e)| e.first_atom()).collect();
        ensure!(
            firsts.windows(2).all(|w| w[0] < w[1]),
            "terms not ordered by first atom"
        );
    }
    Ok(())
}

fn vector_support<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let alg = g.algebra();
    let x = random_lin_element(g, &Idempotent::one(alg.atoms()), rng)?;
    let sx = x.support();
    ensure!(x.restrict(&sx)? == x, "s(x)·x != x");
    let e = sx.join(&random_idempotent(alg.atoms(), rng))?;
    ensure!(
        x.restrict(&e)? == x && sx.le(&e)?,
        "e·x = x but s(x) not below e"
    );
    let f = random_idempotent(alg.atoms(), rng);
    if x.restrict(&f)? == x {
        ensure!(sx.le(&f)?, "e·x = x does not force e >= s(x)");
    }
    let a = AlgebraElement::random(alg, rng);
    ensure!(
        x.scale(&a)?.support() == a.support().meet(&sx)?,
        "s(ax) != s(a)s(x)"
    );
    Ok(())
}

fn random_vectors<F: Field>(
    g: &GeneratorSet<F>,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<ModuleVector<F>>, Error> {
    let one = Idempotent::one(g.algebra().atoms());
    (0..k)
        .map(|_| {
            if g.is_empty() || rng.gen_ratio(1, 3) {
                let coords = (0..g.ambient_dim())
                    .map(|_| AlgebraElement::random(g.algebra(), rng))
                    .collect();
                ModuleVector::new(coords)
            } else {
                random_lin_element(g, &one, rng)
            }
        })
        .collect()
}

fn mixing_refinement<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let atoms = atoms_of(g);
    let p1 = random_partition(atoms, 3, rng);
    let p2 = random_partition(atoms, 3, rng);
    let xs = random_vectors(g, p1.len(), rng)?;
    let ws = random_vectors(g, p2.len(), rng)?;
    let y = mix_vectors(&p1, &xs)?;
    // second stage: the first piece of p2 takes the earlier mixture
    let mut stage2 = ws.clone();
    stage2[0] = y;
    let two_stage = mix_vectors(&p2, &stage2)?;

    let mut pieces = Vec::new();
    let mut sources = Vec::new();
    for (j, f) in p2.pieces().iter().enumerate() {
        for (i, e) in p1.pieces().iter().enumerate() {
            let piece = e.meet(f)?;
            if piece.is_zero() {
                continue;
            }
            pieces.push(piece);
            sources.push(if j == 0 { xs[i].clone() } else { ws[j].clone() });
        }
    }
    let one_stage = mix_vectors(&PartitionOfUnity::new(pieces)?, &sources)?;
    ensure!(
        two_stage == one_stage,
        "two-stage mixing differs from mixing over the refinement"
    );
    Ok(())
}

fn mixing_action<F: Field>(g: &GeneratorSet<F>, rng: &mut ChaCha8Rng, _: Option<Fault>) -> Outcome {
    let p = random_partition(atoms_of(g), 4, rng);
    let xs = random_vectors(g, p.len(), rng)?;
    let a = AlgebraElement::random(g.algebra(), rng);
    let lhs = mix_vectors(&p, &xs)?.scale(&a)?;
    let scaled: Vec<_> = xs.iter().map(|x| x.scale(&a)).collect::<Result<_, _>>()?;
    ensure!(lhs == mix_vectors(&p, &scaled)?, "a·mix(x_i) != mix(a·x_i)");
    Ok(())
}

fn mix_closure<F: Field>(g: &GeneratorSet<F>, rng: &mut ChaCha8Rng, _: Option<Fault>) -> Outcome {
    let atoms = atoms_of(g);
    let one = Idempotent::one(atoms);
    let p = random_partition(atoms, 4, rng);
    let xs = (0..p.len())
        .map(|_| random_lin_element(g, &one, rng))
        .collect::<Result<Vec<_>, _>>()?;
    let y = mix_vectors(&p, &xs)?;
    match membership(&y, g, &one)? {
        Membership::Member { coefficients } => {
            ensure!(
                g.combine(&coefficients)? == y,
                "returned coefficients do not reproduce the mixture"
            );
        }
        Membership::NotMember { atom } => {
            return Err(Failure(format!(
                "mixture of Lin elements rejected at atom {atom}"
            )))
        }
    }
    Ok(())
}

fn product_decomposition<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let p = random_partition(atoms_of(g), 4, rng);
    let v = random_vectors(g, 2, rng)?;
    let (x, y) = (&v[0], &v[1]);
    let parts = split_product(x, &p)?;
    ensure!(reassemble(&p, &parts)? == *x, "reassemble(split(x)) != x");
    let a = AlgebraElement::random(g.algebra(), rng);
    let combo = split_product(&x.scale(&a)?.add(y)?, &p)?;
    let py = split_product(y, &p)?;
    for ((c, px), qy) in combo.iter().zip(&parts).zip(&py) {
        ensure!(*c == px.scale(&a)?.add(qy)?, "split is not A-linear");
    }
    Ok(())
}

fn full_support<F: Field>(g: &GeneratorSet<F>, _: &mut ChaCha8Rng, _: Option<Fault>) -> Outcome {
    match full_support_element(g) {
        Ok(x) => {
            ensure!(
                g.is_faithful(),
                "full-support element returned for a non-faithful module"
            );
            ensure!(x.support().is_one(), "s(x) != 1");
            ensure!(
                membership(&x, g, &Idempotent::one(atoms_of(g)))?.is_member(),
                "full-support element outside the module"
            );
        }
        Err(Error::NotFaithful { dead_atoms }) => {
            let dead: Vec<String> = g
                .dead_atoms()
                .labels()
                .into_iter()
                .map(String::from)
                .collect();
            ensure!(dead_atoms == dead && !dead.is_empty(), "wrong dead atoms");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn elimination_partition<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let atoms = atoms_of(g);
    let e = random_nonzero_idempotent(atoms, rng);
    let (leaves, trace) = regular_eliminate(g, &e)?;
    let profile = atom_rank_profile(g);
    let pieces: Vec<Idempotent> = leaves.iter().map(|(p, _)| p.clone()).collect();
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            ensure!(a.is_disjoint(b)?, "leaves overlap");
        }
    }
    ensure!(
        sup_family(atoms, &pieces)? == e,
        "leaves do not partition {e}"
    );
    for (piece, rank) in &leaves {
        for q in piece.indices() {
            ensure!(
                profile.rank_at(q) == *rank,
                "leaf {piece} claims rank {rank}, atom {q} has {}",
                profile.rank_at(q)
            );
        }
    }
    ensure!(trace.leaves.len() == leaves.len(), "trace lost leaves");
    Ok(())
}

fn oracle_equivalence<F: Field>(
    g: &GeneratorSet<F>,
    _: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let engine = engine_passport(g, fault)?;
    let oracle = oracle_passport(g);
    ensure!(
        engine == oracle,
        "engine passport\n{engine}differs from oracle\n{oracle}"
    );
    Ok(())
}

fn presentation_invariance<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let before = engine_passport(g, fault)?.to_string();
    let profile = atom_rank_profile(g);
    let mut h = g.clone();
    for _ in 0..10 {
        h = GeneratorOp::random(&h, rng).apply(&h)?;
    }
    ensure!(
        passport(&h)?.to_string() == before,
        "passport changed under invertible generator operations"
    );
    ensure!(
        atom_rank_profile(&h) == profile,
        "rank profile changed under invertible generator operations"
    );
    Ok(())
}

fn basis_cardinality<F: Field>(
    g: &GeneratorSet<F>,
    _: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    for PassportEntry { piece, rank } in engine_passport(g, fault)?.entries() {
        let first = extract_basis(g, piece, *rank, BasisStrategy::FirstFit)?;
        let last = extract_basis(g, piece, *rank, BasisStrategy::LastFit)?;
        ensure!(first.len() == last.len(), "basis sizes differ on {piece}");
        for basis in [first, last] {
            let set = GeneratorSet::new(g.algebra(), g.ambient_dim(), basis)?;
            ensure!(
                independence_test(&set, piece)?.is_independent(),
                "basis dependent on {piece}"
            );
            for gi in g.gens() {
                ensure!(
                    membership(gi, &set, piece)?.is_member(),
                    "basis does not span on {piece}"
                );
            }
        }
    }
    Ok(())
}

fn independence_bound<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    _: Option<Fault>,
) -> Outcome {
    let e = random_nonzero_idempotent(atoms_of(g), rng);
    let k = rng.gen_range(1..=g.len() + 2);
    let sample = (0..k)
        .map(|_| random_lin_element(g, &e, rng))
        .collect::<Result<Vec<_>, _>>()?;
    let set = GeneratorSet::new(g.algebra(), g.ambient_dim(), sample)?;
    if independence_test(&set, &e)?.is_independent() {
        ensure!(
            k <= g.len(),
            "{k} independent elements in Lin of {} generators",
            g.len()
        );
    }
    Ok(())
}

fn gluing_and_witness<F: Field>(
    g: &GeneratorSet<F>,
    rng: &mut ChaCha8Rng,
    fault: Option<Fault>,
) -> Outcome {
    let atoms = atoms_of(g);
    for PassportEntry { piece, rank } in engine_passport(g, fault)?.entries() {
        ensure!(
            is_strictly_homogeneous(g, piece)?,
            "passport piece {piece} is not strictly homogeneous"
        );
        ensure!(
            kappa(g, piece)? == Kappa::Rank(*rank),
            "kappa({piece}) != {rank}"
        );
        let e1 = piece.meet(&random_idempotent(atoms, rng))?;
        let e2 = piece.minus(&e1)?;
        if e1.is_zero() || e2.is_zero() {
            continue;
        }
        ensure!(
            kappa(g, &e1)? == Kappa::Rank(*rank) && kappa(g, &e2)? == Kappa::Rank(*rank),
            "kappa not {rank} on the parts of {piece}"
        );
        ensure!(
            kappa(g, &e1.join(&e2)?)? == Kappa::Rank(*rank),
            "gluing changed kappa"
        );
    }
    Ok(())
}

fn iso_positive<F: Field>(g: &GeneratorSet<F>, rng: &mut ChaCha8Rng, _: Option<Fault>) -> Outcome {
    let mut h = g.clone();
    for _ in 0..rng.gen_range(0..6) {
        h = GeneratorOp::random(&h, rng).apply(&h)?;
    }
    let h = random_ambient_image(&h, rng.gen_range(0..2), rng)?;
    ensure!(iso_check(g, &h)?, "recombined module judged non-isomorphic");
    ensure!(iso_check(&h, g)?, "iso_check is not symmetric");
    let map = build_isomorphism(g, &h)?;
    ensure!(
        oracle_verify_iso(&map, g, &h)?,
        "oracle rejects the constructed isomorphism"
    );
    Ok(())
}

fn iso_negative<F: Field>(g: &GeneratorSet<F>, rng: &mut ChaCha8Rng, _: Option<Fault>) -> Outcome {
    let h = perturb_rank_profile(g, rng)?;
    ensure!(
        atom_rank_profile(g) != atom_rank_profile(&h),
        "perturbation left the rank profile intact"
    );
    ensure!(
        !iso_check(g, &h)? && !iso_check(&h, g)?,
        "modules with different profiles judged isomorphic"
    );
    ensure!(
        matches!(build_isomorphism(g, &h), Err(Error::PassportMismatch)),
        "isomorphism built across different passports"
    );
    Ok(())
}

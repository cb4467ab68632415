//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//! Run with `cargo test -p regmod --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regmod::random::{
    perturb_rank_profile, random_ambient_image, random_constant_rank_module, random_idempotent,
    random_lin_element, random_module, random_nonzero_idempotent, random_partition, GeneratorOp,
};
use regmod::{
    atom_rank_profile, build_isomorphism, extract_basis, independence_test,
    is_strictly_homogeneous, iso_check, kappa, membership, mix_scalars, mix_vectors,
    oracle_passport, oracle_verify_iso, passport, reassemble, regular_eliminate, split_product,
    Algebra, AlgebraElement, AtomSet, BasisStrategy, Field, GeneratorSet, Idempotent, Kappa,
    Membership, ModuleVector, PartitionOfUnity, PrimeField, Rationals,
};

const SEED: u64 = 0x0ac0_e97a_2024;

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Verdict {
            ok,
            detail: detail.into(),
        }
    }
}

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

fn algebra<F: Field>(field: F, d: usize) -> std::sync::Arc<Algebra<F>> {
    Algebra::new(field, AtomSet::numbered(d).expect("atoms"))
}

/// A module over one of the four test fields.
enum AnyModule {
    Fp(GeneratorSet<PrimeField>),
    Q(GeneratorSet<Rationals>),
}

macro_rules! with_module {
    ($m:expr, $g:ident => $body:expr) => {
        match $m {
            AnyModule::Fp($g) => $body,
            AnyModule::Q($g) => $body,
        }
    };
}

fn corpus_module(i: usize, rng: &mut ChaCha8Rng) -> AnyModule {
    let d = rng.gen_range(1..=16);
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(0..=6);
    match i % 4 {
        0 => AnyModule::Fp(random_module(&algebra(fp(2), d), n, m, rng).unwrap()),
        1 => AnyModule::Fp(random_module(&algebra(fp(5), d), n, m, rng).unwrap()),
        2 => AnyModule::Fp(random_module(&algebra(fp(97), d), n, m, rng).unwrap()),
        _ => AnyModule::Q(random_module(&algebra(Rationals, d), n, m, rng).unwrap()),
    }
}

fn criterion_1(corpus: &[AnyModule]) -> Verdict {
    let start = Instant::now();
    let mut agree = 0;
    let mut first_bad = None;
    for (i, m) in corpus.iter().enumerate() {
        let same = with_module!(m, g => passport(g).unwrap() == oracle_passport(g));
        if same {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(i);
        }
    }
    let elapsed = start.elapsed();
    let ok = agree == corpus.len() && elapsed <= Duration::from_secs(60);
    Verdict::new(
        ok,
        format!(
            "passport = oracle_passport on {agree}/{} modules in {:.2}s (limit 60s){}",
            corpus.len(),
            elapsed.as_secs_f64(),
            first_bad
                .map(|i| format!(", first mismatch at #{i}"))
                .unwrap_or_default()
        ),
    )
}

fn iso_pair<F: Field>(field: F, rng: &mut ChaCha8Rng) -> (bool, bool) {
    let d = rng.gen_range(1..=10);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(0..=5);
    let g = random_module(&algebra(field, d), n, m, rng).unwrap();

    let mut h = g.clone();
    for _ in 0..rng.gen_range(1..=8) {
        h = GeneratorOp::random(&h, rng).apply(&h).unwrap();
    }
    let h = random_ambient_image(&h, rng.gen_range(0..=2), rng).unwrap();
    let positive = iso_check(&g, &h).unwrap()
        && build_isomorphism(&g, &h)
            .map(|map| oracle_verify_iso(&map, &g, &h).unwrap())
            .unwrap_or(false);

    let k = perturb_rank_profile(&g, rng).unwrap();
    let negative = !iso_check(&g, &k).unwrap() && atom_rank_profile(&g) != atom_rank_profile(&k);
    (positive, negative)
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Verdict {
    let (mut pos, mut neg) = (0, 0);
    for i in 0..200 {
        let (p, n) = match i % 4 {
            0 => iso_pair(fp(2), rng),
            1 => iso_pair(fp(5), rng),
            2 => iso_pair(fp(97), rng),
            _ => iso_pair(Rationals, rng),
        };
        pos += p as usize;
        neg += n as usize;
    }
    Verdict::new(
        pos == 200 && neg == 200,
        format!("shared passport: {pos}/200 isomorphic and oracle-verified; perturbed: {neg}/200 rejected"),
    )
}

fn basis_case<F: Field>(field: F, rng: &mut ChaCha8Rng) -> bool {
    let d = rng.gen_range(1..=12);
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=6);
    let r = rng.gen_range(1..=m.min(n));
    let g = random_constant_rank_module(&algebra(field, d), n, m, r, rng).unwrap();
    let one = Idempotent::one(g.algebra().atoms());
    let first = extract_basis(&g, &one, r, BasisStrategy::FirstFit).unwrap();
    let last = extract_basis(&g, &one, r, BasisStrategy::LastFit).unwrap();
    first.len() == last.len() && first.len() == r
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Verdict {
    let mut ok = 0;
    for i in 0..200 {
        ok += match i % 4 {
            0 => basis_case(fp(2), rng),
            1 => basis_case(fp(5), rng),
            2 => basis_case(fp(97), rng),
            _ => basis_case(Rationals, rng),
        } as usize;
    }
    Verdict::new(
        ok == 200,
        format!("first_fit and last_fit bases of equal size on {ok}/200 modules"),
    )
}

const IDENTITIES: [&str; 8] = [
    "support of product",
    "inversion of disjoint sum",
    "vector support",
    "partition uniqueness",
    "mixing refinement and action",
    "regularity",
    "inversion involution",
    "inversion of idempotent",
];

fn random_vector<F: Field>(
    alg: &std::sync::Arc<Algebra<F>>,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> ModuleVector<F> {
    ModuleVector::new((0..n).map(|_| AlgebraElement::random(alg, rng)).collect()).unwrap()
}

fn identity<F: Field>(which: usize, field: &F, rng: &mut ChaCha8Rng) -> bool {
    let d = rng.gen_range(1..=16);
    let alg = algebra(field.clone(), d);
    let atoms = alg.atoms().clone();
    let a = AlgebraElement::random(&alg, rng);
    let b = AlgebraElement::random(&alg, rng);
    let s = |x: &AlgebraElement<F>| AlgebraElement::from_idempotent(&alg, &x.support()).unwrap();
    match which {
        0 => {
            let ab = a.mul(&b).unwrap();
            s(&ab) == s(&a).mul(&s(&b)).unwrap()
                && ab.is_zero() == a.support().is_disjoint(&b.support()).unwrap()
        }
        1 => {
            let b = b
                .mul(&AlgebraElement::one(&alg).sub(&s(&a)).unwrap())
                .unwrap();
            let sum = a.add(&b).unwrap();
            a.mul(&b).unwrap().is_zero()
                && sum.inversion() == a.inversion().add(&b.inversion()).unwrap()
                && s(&sum) == s(&a).add(&s(&b)).unwrap()
        }
        2 => {
            let n = rng.gen_range(1..=4);
            let x = random_vector(&alg, n, rng);
            let sx = x.support();
            let e = random_idempotent(&atoms, rng);
            let minimal = x.restrict(&e).unwrap() != x || sx.le(&e).unwrap();
            x.restrict(&sx).unwrap() == x
                && minimal
                && x.scale(&a).unwrap().support() == a.support().meet(&sx).unwrap()
        }
        3 => {
            let p = random_partition(&atoms, 5, rng);
            let locals: Vec<_> = p
                .pieces()
                .iter()
                .map(|e| {
                    let noise = AlgebraElement::random(&alg, rng)
                        .restrict(&e.complement())
                        .unwrap();
                    a.restrict(e).unwrap().add(&noise).unwrap()
                })
                .collect();
            mix_scalars(&p, &locals).unwrap() == a
        }
        4 => {
            let n = rng.gen_range(1..=3);
            let p1 = random_partition(&atoms, 3, rng);
            let p2 = random_partition(&atoms, 3, rng);
            let xs: Vec<_> = (0..p1.len()).map(|_| random_vector(&alg, n, rng)).collect();
            let mut ws: Vec<_> = (0..p2.len()).map(|_| random_vector(&alg, n, rng)).collect();
            ws[0] = mix_vectors(&p1, &xs).unwrap();
            let nested = mix_vectors(&p2, &ws).unwrap();
            let mut pieces = Vec::new();
            let mut sources = Vec::new();
            for (j, f) in p2.pieces().iter().enumerate() {
                for (i, e) in p1.pieces().iter().enumerate() {
                    let piece = e.meet(f).unwrap();
                    if !piece.is_zero() {
                        pieces.push(piece);
                        sources.push(if j == 0 { xs[i].clone() } else { ws[j].clone() });
                    }
                }
            }
            let flat = mix_vectors(&PartitionOfUnity::new(pieces).unwrap(), &sources).unwrap();
            let scaled: Vec<_> = ws.iter().map(|w| w.scale(&a).unwrap()).collect();
            nested == flat && nested.scale(&a).unwrap() == mix_vectors(&p2, &scaled).unwrap()
        }
        5 => {
            let ia = a.inversion();
            a.mul(&a).unwrap().mul(&ia).unwrap() == a && a.mul(&ia).unwrap().mul(&ia).unwrap() == ia
        }
        6 => a.inversion().inversion() == a,
        _ => {
            let g = AlgebraElement::from_idempotent(&alg, &random_idempotent(&atoms, rng)).unwrap();
            g.inversion() == g
        }
    }
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Verdict {
    const CHECKS: usize = 10_000;
    let start = Instant::now();
    let mut failures = Vec::new();
    for (which, name) in IDENTITIES.iter().enumerate() {
        let mut tally = [0usize; 4];
        for _ in 0..CHECKS {
            tally[0] += identity(which, &fp(2), rng) as usize;
            tally[1] += identity(which, &fp(5), rng) as usize;
            tally[2] += identity(which, &fp(97), rng) as usize;
            tally[3] += identity(which, &Rationals, rng) as usize;
        }
        for (backend, passed) in ["F_2", "F_5", "F_97", "Q"].iter().zip(tally) {
            if passed != CHECKS {
                failures.push(format!("{name} over {backend}: {passed}/{CHECKS}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let total = IDENTITIES.len() * 4 * CHECKS;
    let mut detail = format!(
        "{} identities x 4 fields x {CHECKS} checks ({total} total) in {:.2}s (limit 30s)",
        IDENTITIES.len(),
        elapsed.as_secs_f64()
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join(", ")));
    }
    Verdict::new(
        failures.is_empty() && elapsed <= Duration::from_secs(30),
        detail,
    )
}

fn independence_case<F: Field>(field: F, rng: &mut ChaCha8Rng) -> (bool, bool) {
    let d = rng.gen_range(1..=10);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=5);
    let g = random_module(&algebra(field, d), n, m, rng).unwrap();
    let e = random_nonzero_idempotent(g.algebra().atoms(), rng);
    let k = rng.gen_range(1..=m + 2);
    let sample: Vec<_> = (0..k)
        .map(|_| random_lin_element(&g, &e, rng).unwrap())
        .collect();
    let set = GeneratorSet::new(g.algebra(), n, sample).unwrap();
    let independent = independence_test(&set, &e).unwrap().is_independent();
    (!independent || k <= m, independent)
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Verdict {
    let (mut ok, mut independent) = (0, 0);
    for i in 0..500 {
        let (good, ind) = match i % 4 {
            0 => independence_case(fp(2), rng),
            1 => independence_case(fp(5), rng),
            2 => independence_case(fp(97), rng),
            _ => independence_case(Rationals, rng),
        };
        ok += good as usize;
        independent += ind as usize;
    }
    Verdict::new(
        ok == 500,
        format!("{ok}/500 instances respect the bound ({independent} samples were independent)"),
    )
}

fn invariance_case<F: Field>(field: F, rng: &mut ChaCha8Rng) -> bool {
    let d = rng.gen_range(1..=12);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(0..=5);
    let g = random_module(&algebra(field, d), n, m, rng).unwrap();
    let before = passport(&g).unwrap();
    let mut h = g.clone();
    for _ in 0..10 {
        h = GeneratorOp::random(&h, rng).apply(&h).unwrap();
    }
    let after = passport(&h).unwrap();
    after == before && after.to_string() == before.to_string()
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Verdict {
    let mut ok = 0;
    for i in 0..200 {
        ok += match i % 4 {
            0 => invariance_case(fp(2), rng),
            1 => invariance_case(fp(5), rng),
            2 => invariance_case(fp(97), rng),
            _ => invariance_case(Rationals, rng),
        } as usize;
    }
    Verdict::new(
        ok == 200,
        format!("passport byte-identical after 10 generator operations on {ok}/200 modules"),
    )
}

fn closure_case<F: Field>(field: F, rng: &mut ChaCha8Rng) -> (bool, bool) {
    let d = rng.gen_range(1..=12);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=5);
    let g = random_module(&algebra(field, d), n, m, rng).unwrap();
    let atoms = g.algebra().atoms().clone();
    let one = Idempotent::one(&atoms);

    let p = random_partition(&atoms, 5, rng);
    let xs: Vec<_> = (0..p.len())
        .map(|_| random_lin_element(&g, &one, rng).unwrap())
        .collect();
    let y = mix_vectors(&p, &xs).unwrap();
    let closed = match membership(&y, &g, &one).unwrap() {
        Membership::Member { coefficients } => g.combine(&coefficients).unwrap() == y,
        Membership::NotMember { .. } => false,
    };

    let q = random_partition(&atoms, 5, rng);
    let x = random_vector(g.algebra(), n, rng);
    let parts = split_product(&x, &q).unwrap();
    let round_trip = reassemble(&q, &parts).unwrap() == x
        && parts
            .iter()
            .zip(q.pieces())
            .all(|(part, e)| part.support().le(e).unwrap());
    (closed, round_trip)
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Verdict {
    let (mut closed, mut round) = (0, 0);
    for i in 0..500 {
        let (c, r) = match i % 4 {
            0 => closure_case(fp(2), rng),
            1 => closure_case(fp(5), rng),
            2 => closure_case(fp(97), rng),
            _ => closure_case(Rationals, rng),
        };
        closed += c as usize;
        round += r as usize;
    }
    Verdict::new(
        closed == 500 && round == 500,
        format!("mixtures in the module: {closed}/500; split/reassemble round trips: {round}/500"),
    )
}

fn gluing_case<F: Field>(g: &GeneratorSet<F>, rng: &mut ChaCha8Rng) -> bool {
    let pp = passport(g).unwrap();
    for entry in pp.entries() {
        if !is_strictly_homogeneous(g, &entry.piece).unwrap() {
            return false;
        }
        let mut atoms: Vec<usize> = entry.piece.indices().collect();
        atoms.shuffle(rng);
        let cut = rng.gen_range(0..=atoms.len());
        let e1 = Idempotent::from_indices(g.algebra().atoms(), atoms[..cut].iter().copied());
        let e2 = entry.piece.minus(&e1).unwrap();
        let want = Kappa::Rank(entry.rank);
        for part in [&e1, &e2] {
            if !part.is_zero() && kappa(g, part).unwrap() != want {
                return false;
            }
        }
        if kappa(g, &e1.join(&e2).unwrap()).unwrap() != want {
            return false;
        }
    }
    // equal-rank leaves of the elimination glue to a piece of the same rank
    let (leaves, _) = regular_eliminate(g, &Idempotent::one(g.algebra().atoms())).unwrap();
    for (i, (a, ra)) in leaves.iter().enumerate() {
        for (b, rb) in &leaves[i + 1..] {
            if ra == rb && kappa(g, &a.join(b).unwrap()).unwrap() != Kappa::Rank(*ra) {
                return false;
            }
        }
    }
    true
}

fn criterion_8(corpus: &[AnyModule], rng: &mut ChaCha8Rng) -> Verdict {
    let ok = corpus
        .iter()
        .filter(|m| with_module!(m, g => gluing_case(g, rng)))
        .count();
    Verdict::new(
        ok == corpus.len(),
        format!(
            "strictly homogeneous pieces and kappa-preserving joins on {ok}/{} modules",
            corpus.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let corpus: Vec<AnyModule> = (0..1000).map(|i| corpus_module(i, &mut rng)).collect();

    let results = [
        ("oracle equivalence", criterion_1(&corpus)),
        ("isomorphism criterion", criterion_2(&mut rng)),
        ("basis cardinality invariance", criterion_3(&mut rng)),
        ("identity suite", criterion_4(&mut rng)),
        ("independence bound", criterion_5(&mut rng)),
        ("presentation invariance", criterion_6(&mut rng)),
        (
            "mixing closure and product decomposition",
            criterion_7(&mut rng),
        ),
        (
            "gluing and homogeneity witness",
            criterion_8(&corpus, &mut rng),
        ),
    ];
    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name}: {}", i + 1, v.detail);
        failed += !v.ok as usize;
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", results.len());
        ExitCode::FAILURE
    }
}

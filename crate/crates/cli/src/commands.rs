//! Command implementations. Each returns the text for both streams and the
//! exit code (0 = yes, 1 = no, 2 = error).

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use regmod::random::random_module;
use regmod::verify::{run_suite, Fault, VerifyConfig, VerifyReport};
use regmod::{
    build_isomorphism, extract_basis, kappa, membership, passport, Algebra, AtomSet, BasisStrategy,
    Error, Field, GeneratorSet, Idempotent, IsoMap, Kappa, Membership, ModuleVector, Passport,
    PrimeField, Rationals,
};

use crate::format::{
    element_json, parse_module_file, parse_vector_file, render_module_file, vector_json, AnyModule,
    AnyVector,
};

pub const YES: i32 = 0;
pub const NO: i32 = 1;
pub const ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn new(code: i32, stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    pub fn error(message: impl std::fmt::Display) -> Self {
        Output {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: ERROR,
        }
    }

    fn json(code: i32, value: Value) -> Self {
        Output::new(
            code,
            format!(
                "{}\n",
                serde_json::to_string_pretty(&value).expect("serializable")
            ),
        )
    }
}

macro_rules! with_module {
    ($m:expr, $g:ident => $body:expr) => {
        match $m {
            AnyModule::Fp($g) => $body,
            AnyModule::Q($g) => $body,
        }
    };
}

fn read(path: &Path) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output::error(format!("{}: {e}", path.display())))
}

fn load_module(path: &Path) -> Result<AnyModule, Output> {
    parse_module_file(&read(path)?).map_err(|e| Output::error(format!("{}: {e}", path.display())))
}

fn load_vector(path: &Path) -> Result<AnyVector, Output> {
    parse_vector_file(&read(path)?).map_err(|e| Output::error(format!("{}: {e}", path.display())))
}

fn passport_json(p: &Passport) -> Value {
    p.entries()
        .iter()
        .map(|e| json!({"rank": e.rank, "piece": e.piece.labels()}))
        .collect::<Vec<_>>()
        .into()
}

/// Parses `q1,q3` or `{q1,q3}` into an idempotent.
fn parse_piece(atoms: &std::sync::Arc<AtomSet>, text: &str) -> Result<Idempotent, Output> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let labels: Vec<&str> = inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let e = Idempotent::from_labels(atoms, &labels).map_err(Output::error)?;
    if e.is_zero() {
        return Err(Output::error("piece must name at least one atom"));
    }
    Ok(e)
}

pub fn cmd_passport(path: &Path, as_json: bool) -> Output {
    let module = match load_module(path) {
        Ok(m) => m,
        Err(out) => return out,
    };
    let pp = match with_module!(&module, g => passport(g)) {
        Ok(p) => p,
        Err(e) => return Output::error(e),
    };
    if as_json {
        Output::json(
            YES,
            json!({"passport": passport_json(&pp), "faithful": pp.is_faithful()}),
        )
    } else {
        Output::new(YES, format!("{pp}faithful={}\n", pp.is_faithful()))
    }
}

fn render_entry(p: &Passport, i: usize) -> String {
    p.entries()
        .get(i)
        .map_or_else(|| "(none)".to_string(), ToString::to_string)
}

fn map_text<F: Field>(map: &IsoMap<F>) -> Result<String, Error> {
    let mut out = String::new();
    for p in &map.pieces {
        let _ = writeln!(out, "map rank={} piece={}", p.rank, p.piece);
        for b in &p.source_basis {
            let _ = writeln!(out, "  {b} -> {}", map.apply(b)?);
        }
    }
    let _ = writeln!(out, "generator images:");
    for (i, (img, coords)) in map
        .generator_images
        .iter()
        .zip(&map.image_coordinates)
        .enumerate()
    {
        let coords: Vec<String> = coords.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "  g{} -> {img} = [{}] in target generators",
            i + 1,
            coords.join(",")
        );
    }
    Ok(out)
}

fn map_json<F: Field>(map: &IsoMap<F>) -> Value {
    let pieces: Vec<Value> = map
        .pieces
        .iter()
        .map(|p| {
            json!({
                "piece": p.piece.labels(),
                "rank": p.rank,
                "source_basis": p.source_basis.iter().map(vector_json).collect::<Vec<_>>(),
                "target_basis": p.target_basis.iter().map(vector_json).collect::<Vec<_>>(),
                "transfer": p.transfer.iter()
                    .map(|row| row.iter().map(element_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "pieces": pieces,
        "generator_images": map.generator_images.iter().map(vector_json).collect::<Vec<_>>(),
        "image_coordinates": map.image_coordinates.iter()
            .map(|row| row.iter().map(element_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn iso_typed<F: Field>(
    g: &GeneratorSet<F>,
    h: &GeneratorSet<F>,
    emit_map: bool,
    as_json: bool,
) -> Output {
    if let Err(e) = regmod::iso_check(g, h) {
        return Output::error(e);
    }
    let (pg, ph) = match (passport(g), passport(h)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Output::error(e),
    };
    let Some(i) = pg.first_difference(&ph) else {
        let faithful = pg.is_faithful();
        let map = if emit_map && faithful {
            match build_isomorphism(g, h) {
                Ok(m) => Some(m),
                Err(e) => return Output::error(e),
            }
        } else {
            None
        };
        if as_json {
            return Output::json(
                YES,
                json!({
                    "isomorphic": true,
                    "passport": passport_json(&pg),
                    "map": map.as_ref().map(map_json),
                }),
            );
        }
        let mut out = String::from("ISOMORPHIC\n");
        if let Some(map) = &map {
            match map_text(map) {
                Ok(text) => out.push_str(&text),
                Err(e) => return Output::error(e),
            }
        } else if emit_map {
            out.push_str("map omitted: modules are not faithful\n");
        }
        return Output::new(YES, out);
    };
    if as_json {
        let entry = |p: &Passport| {
            p.entries()
                .get(i)
                .map(|e| json!({"rank": e.rank, "piece": e.piece.labels()}))
        };
        return Output::json(
            NO,
            json!({
                "isomorphic": false,
                "difference": {"entry": i + 1, "left": entry(&pg), "right": entry(&ph)},
                "left": passport_json(&pg),
                "right": passport_json(&ph),
            }),
        );
    }
    Output::new(
        NO,
        format!(
            "NOT ISOMORPHIC\nentry {}: {} vs {}\n",
            i + 1,
            render_entry(&pg, i),
            render_entry(&ph, i)
        ),
    )
}

pub fn cmd_iso(a: &Path, b: &Path, emit_map: bool, as_json: bool) -> Output {
    let (ma, mb) = match (load_module(a), load_module(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(out), _) | (_, Err(out)) => return out,
    };
    match (&ma, &mb) {
        (AnyModule::Fp(g), AnyModule::Fp(h)) => iso_typed(g, h, emit_map, as_json),
        (AnyModule::Q(g), AnyModule::Q(h)) => iso_typed(g, h, emit_map, as_json),
        _ => Output::error(Error::ContextMismatch),
    }
}

fn basis_typed<F: Field>(
    g: &GeneratorSet<F>,
    piece: &str,
    strategy: BasisStrategy,
    as_json: bool,
) -> Output {
    let e = match parse_piece(g.algebra().atoms(), piece) {
        Ok(e) => e,
        Err(out) => return out,
    };
    let rank = match kappa(g, &e) {
        Ok(Kappa::Rank(r)) => r,
        Ok(Kappa::NotHomogeneous) => {
            let pp = match passport(g) {
                Ok(p) => p,
                Err(err) => return Output::error(err),
            };
            let parts: Vec<(usize, Idempotent)> = pp
                .entries()
                .iter()
                .map(|en| (en.rank, en.piece.meet(&e).expect("same atoms")))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            if as_json {
                let parts: Vec<Value> = parts
                    .iter()
                    .map(|(r, p)| json!({"rank": r, "piece": p.labels()}))
                    .collect();
                return Output::json(
                    NO,
                    json!({"homogeneous": false, "piece": e.labels(), "parts": parts}),
                );
            }
            let mut out = format!("NOT HOMOGENEOUS piece={e}\n");
            for (r, p) in parts {
                let _ = writeln!(out, "rank={r} piece={p}");
            }
            return Output::new(NO, out);
        }
        Err(err) => return Output::error(err),
    };
    let basis = match extract_basis(g, &e, rank, strategy) {
        Ok(b) => b,
        Err(err) => return Output::error(err),
    };
    if as_json {
        return Output::json(
            YES,
            json!({
                "homogeneous": true,
                "piece": e.labels(),
                "rank": rank,
                "basis": basis.iter().map(vector_json).collect::<Vec<_>>(),
            }),
        );
    }
    let mut out = format!("rank={rank} piece={e}\n");
    for (i, b) in basis.iter().enumerate() {
        let _ = writeln!(out, "b{}: {b}", i + 1);
    }
    Output::new(YES, out)
}

pub fn cmd_basis(path: &Path, piece: &str, strategy: BasisStrategy, as_json: bool) -> Output {
    match load_module(path) {
        Ok(m) => with_module!(&m, g => basis_typed(g, piece, strategy, as_json)),
        Err(out) => out,
    }
}

fn member_typed<F: Field>(
    g: &GeneratorSet<F>,
    x: &ModuleVector<F>,
    piece: Option<&str>,
    as_json: bool,
) -> Output {
    let e = match piece {
        Some(text) => match parse_piece(g.algebra().atoms(), text) {
            Ok(e) => e,
            Err(out) => return out,
        },
        None => Idempotent::one(g.algebra().atoms()),
    };
    match membership(x, g, &e) {
        Ok(Membership::Member { coefficients }) => {
            if as_json {
                return Output::json(
                    YES,
                    json!({"member": true, "coefficients": coefficients.iter().map(element_json).collect::<Vec<_>>()}),
                );
            }
            let mut out = String::from("MEMBER\n");
            for (i, c) in coefficients.iter().enumerate() {
                let _ = writeln!(out, "c{}: {c}", i + 1);
            }
            Output::new(YES, out)
        }
        Ok(Membership::NotMember { atom }) => {
            let label = g.algebra().atoms().label(atom).to_string();
            if as_json {
                return Output::json(NO, json!({"member": false, "atom": label}));
            }
            Output::new(NO, format!("NOT MEMBER\nfails at atom {label}\n"))
        }
        Err(err) => Output::error(err),
    }
}

pub fn cmd_member(path: &Path, vector: &Path, piece: Option<&str>, as_json: bool) -> Output {
    let (m, v) = match (load_module(path), load_vector(vector)) {
        (Ok(m), Ok(v)) => (m, v),
        (Err(out), _) | (_, Err(out)) => return out,
    };
    match (&m, &v) {
        (AnyModule::Fp(g), AnyVector::Fp(x)) => member_typed(g, x, piece, as_json),
        (AnyModule::Q(g), AnyVector::Q(x)) => member_typed(g, x, piece, as_json),
        _ => Output::error(Error::ContextMismatch),
    }
}

fn report_json(config: &VerifyConfig, report: &VerifyReport) -> Value {
    let props: Vec<Value> = report
        .properties
        .iter()
        .map(|p| {
            json!({
                "name": p.name,
                "passed": p.passed,
                "cases": p.cases,
                "counterexample": p.failure.as_ref().map(|c| json!({
                    "case": c.case,
                    "case_seed": c.case_seed,
                    "message": c.message,
                    "module": c.module,
                })),
            })
        })
        .collect();
    json!({
        "seed": config.seed,
        "cases": config.cases,
        "passed": report.all_passed(),
        "properties": props,
    })
}

pub fn cmd_verify(seed: u64, cases: usize, fault: Option<Fault>, as_json: bool) -> Output {
    let config = VerifyConfig { seed, cases, fault };
    let report = run_suite(&config);
    let code = if report.all_passed() { YES } else { NO };
    if as_json {
        Output::json(code, report_json(&config, &report))
    } else {
        Output::new(code, format!("seed={seed} cases={cases}\n{report}"))
    }
}

/// Parses `fp:<p>` or `rational`.
pub fn parse_field(text: &str) -> Result<regmod::FieldSpec, String> {
    if text == "rational" {
        return Ok(regmod::FieldSpec::Rational);
    }
    let p = text
        .strip_prefix("fp:")
        .ok_or_else(|| format!("unknown field `{text}` (expected fp:<p> or rational)"))?;
    let p: u64 = p.parse().map_err(|_| format!("invalid modulus `{p}`"))?;
    PrimeField::new(p).map_err(|e| e.to_string())?;
    Ok(regmod::FieldSpec::Prime(p))
}

fn gen_typed<F: Field>(field: F, seed: u64, d: usize, n: usize, m: usize) -> Output {
    let atoms = AtomSet::numbered(d).expect("d >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match random_module(&Algebra::new(field, atoms), n, m, &mut rng) {
        Ok(g) => Output::new(YES, render_module_file(&g)),
        Err(e) => Output::error(e),
    }
}

pub fn cmd_gen(seed: u64, atoms: usize, ambient: usize, gens: usize, field: &str) -> Output {
    for (name, v) in [("atoms", atoms), ("ambient", ambient), ("gens", gens)] {
        if v == 0 {
            return Output::error(format!("--{name} must be at least 1"));
        }
    }
    match parse_field(field) {
        Ok(regmod::FieldSpec::Prime(p)) => gen_typed(
            PrimeField::new(p).expect("checked"),
            seed,
            atoms,
            ambient,
            gens,
        ),
        Ok(regmod::FieldSpec::Rational) => gen_typed(Rationals, seed, atoms, ambient, gens),
        Err(e) => Output::error(e),
    }
}

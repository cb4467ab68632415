//! JSON presentation files for modules and vectors.
//!
//! ```json
//! {
//!   "field": {"kind": "fp", "p": 5},
//!   "atoms": ["q1", "q2", "q3"],
//!   "ambient_dim": 2,
//!   "generators": [
//!     [["1", "1", "1"], ["0", "0", "0"]],
//!     [["0", "0", "0"], ["1", "0", "1"]]
//!   ]
//! }
//! ```
//!
//! Each generator is a list of `ambient_dim` coordinates, each coordinate a
//! list of one scalar string per atom. A vector file has the same `field`
//! and `atoms` and a single `vector` in place of `generators`.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Deserialize;

use regmod::{
    Algebra, AlgebraElement, AtomSet, Field, FieldSpec, GeneratorSet, ModuleVector, PrimeField,
    Rationals,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value at `{path}`: {message}")]
    Validation { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Validation {
        path: path.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldDescriptor {
    Fp { p: u64 },
    Rational,
}

impl From<FieldSpec> for FieldDescriptor {
    fn from(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Prime(p) => FieldDescriptor::Fp { p },
            FieldSpec::Rational => FieldDescriptor::Rational,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleDoc {
    field: FieldDescriptor,
    atoms: Vec<String>,
    ambient_dim: usize,
    generators: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDoc {
    field: FieldDescriptor,
    atoms: Vec<String>,
    vector: Vec<Vec<String>>,
}

/// A parsed module over whichever field its file declares.
#[derive(Clone, Debug)]
pub enum AnyModule {
    Fp(GeneratorSet<PrimeField>),
    Q(GeneratorSet<Rationals>),
}

/// A parsed vector over whichever field its file declares.
#[derive(Clone, Debug)]
pub enum AnyVector {
    Fp(ModuleVector<PrimeField>),
    Q(ModuleVector<Rationals>),
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        message: e
            .to_string()
            .split(" at line ")
            .next()
            .unwrap_or_default()
            .to_string(),
    })
}

fn atom_set(labels: Vec<String>) -> Result<Arc<AtomSet>, FormatError> {
    AtomSet::new(labels).map_err(|e| invalid("atoms", e))
}

fn coordinate<F: Field>(
    alg: &Arc<Algebra<F>>,
    values: &[String],
    path: &str,
) -> Result<AlgebraElement<F>, FormatError> {
    if values.len() != alg.dim() {
        return Err(invalid(
            path,
            format!(
                "expected {} scalars (one per atom), found {}",
                alg.dim(),
                values.len()
            ),
        ));
    }
    let elems = values
        .iter()
        .enumerate()
        .map(|(q, s)| {
            alg.field()
                .parse(s)
                .map_err(|e| invalid(format!("{path}[{q}]"), e))
        })
        .collect::<Result<_, _>>()?;
    AlgebraElement::new(alg, elems).map_err(|e| invalid(path, e))
}

fn vector<F: Field>(
    alg: &Arc<Algebra<F>>,
    n: usize,
    coords: &[Vec<String>],
    path: &str,
) -> Result<ModuleVector<F>, FormatError> {
    if coords.len() != n {
        return Err(invalid(
            path,
            format!(
                "expected {n} coordinates (ambient_dim), found {}",
                coords.len()
            ),
        ));
    }
    let coords = coords
        .iter()
        .enumerate()
        .map(|(j, c)| coordinate(alg, c, &format!("{path}[{j}]")))
        .collect::<Result<_, _>>()?;
    ModuleVector::new(coords).map_err(|e| invalid(path, e))
}

fn build_module<F: Field>(field: F, doc: ModuleDoc) -> Result<GeneratorSet<F>, FormatError> {
    let alg = Algebra::new(field, atom_set(doc.atoms)?);
    if doc.ambient_dim == 0 {
        return Err(invalid("ambient_dim", "must be at least 1"));
    }
    let gens = doc
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| vector(&alg, doc.ambient_dim, g, &format!("generators[{i}]")))
        .collect::<Result<_, _>>()?;
    GeneratorSet::new(&alg, doc.ambient_dim, gens).map_err(|e| invalid("generators", e))
}

fn prime_field(p: u64) -> Result<PrimeField, FormatError> {
    PrimeField::new(p).map_err(|e| invalid("field.p", e))
}

pub fn parse_module_file(text: &str) -> Result<AnyModule, FormatError> {
    let doc: ModuleDoc = from_json(text)?;
    match doc.field {
        FieldDescriptor::Fp { p } => Ok(AnyModule::Fp(build_module(prime_field(p)?, doc)?)),
        FieldDescriptor::Rational => Ok(AnyModule::Q(build_module(Rationals, doc)?)),
    }
}

pub fn parse_vector_file(text: &str) -> Result<AnyVector, FormatError> {
    let doc: VectorDoc = from_json(text)?;
    fn build<F: Field>(field: F, doc: VectorDoc) -> Result<ModuleVector<F>, FormatError> {
        let alg = Algebra::new(field, atom_set(doc.atoms)?);
        if doc.vector.is_empty() {
            return Err(invalid("vector", "must have at least one coordinate"));
        }
        vector(&alg, doc.vector.len(), &doc.vector, "vector")
    }
    match doc.field {
        FieldDescriptor::Fp { p } => Ok(AnyVector::Fp(build(prime_field(p)?, doc)?)),
        FieldDescriptor::Rational => Ok(AnyVector::Q(build(Rationals, doc)?)),
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn render_coordinates<F: Field>(x: &ModuleVector<F>) -> String {
    let field = x.field();
    let coords: Vec<String> = x
        .coords()
        .iter()
        .map(|c| {
            let vals: Vec<String> = c
                .values()
                .iter()
                .map(|v| json_str(&field.render(v)))
                .collect();
            format!("[{}]", vals.join(", "))
        })
        .collect();
    format!("[{}]", coords.join(", "))
}

fn render_header<F: Field>(out: &mut String, alg: &Algebra<F>) {
    let field = match FieldDescriptor::from(alg.field().spec()) {
        FieldDescriptor::Fp { p } => format!("{{\"kind\": \"fp\", \"p\": {p}}}"),
        FieldDescriptor::Rational => "{\"kind\": \"rational\"}".to_string(),
    };
    let atoms: Vec<String> = alg.atoms().labels().iter().map(|l| json_str(l)).collect();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"field\": {field},");
    let _ = writeln!(out, "  \"atoms\": [{}],", atoms.join(", "));
}

/// Renders a module file; one generator per line.
pub fn render_module_file<F: Field>(g: &GeneratorSet<F>) -> String {
    let mut out = String::new();
    render_header(&mut out, g.algebra());
    let _ = writeln!(out, "  \"ambient_dim\": {},", g.ambient_dim());
    if g.is_empty() {
        let _ = writeln!(out, "  \"generators\": []");
    } else {
        let _ = writeln!(out, "  \"generators\": [");
        let rows: Vec<String> = g
            .gens()
            .iter()
            .map(|x| format!("    {}", render_coordinates(x)))
            .collect();
        let _ = writeln!(out, "{}", rows.join(",\n"));
        let _ = writeln!(out, "  ]");
    }
    out.push_str("}\n");
    out
}

pub fn render_vector_file<F: Field>(x: &ModuleVector<F>) -> String {
    let mut out = String::new();
    render_header(&mut out, x.algebra());
    let _ = writeln!(out, "  \"vector\": {}", render_coordinates(x));
    out.push_str("}\n");
    out
}

/// JSON array of per-coordinate scalar lists, for structured output.
pub fn vector_json<F: Field>(x: &ModuleVector<F>) -> serde_json::Value {
    let field = x.field();
    x.coords()
        .iter()
        .map(|c| {
            c.values()
                .iter()
                .map(|v| field.render(v))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into()
}

pub fn element_json<F: Field>(a: &AlgebraElement<F>) -> serde_json::Value {
    let field = a.field();
    a.values()
        .iter()
        .map(|v| field.render(v))
        .collect::<Vec<_>>()
        .into()
}

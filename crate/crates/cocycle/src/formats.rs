//! JSON interchange for groups, group functions, and irrep bases, plus the
//! textual grammar for built-in groups and a deterministic JSON writer.
//!
//! Parsing goes through serde with unknown fields rejected; everything
//! parsed is re-validated by the owning type before use. Output never goes
//! through serde: [`JsonValue`] keeps object keys in insertion order and
//! prints floats with 17 significant digits, so equal data always renders
//! to identical bytes.

use crate::group::{Group, GroupError, GroupFunction};
use crate::matrix::CMatrix;
use crate::repr::{IrrepBasis, ReprError, UnitaryRep};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::value::RawValue;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error("unrecognized group spec {spec:?}: {reason}")]
    BadGroupSpec { spec: String, reason: String },
    #[error("irrep {index}: {reason}")]
    BadBasisShape { index: usize, reason: String },
    #[error("expected a finite number, got {0:?}")]
    NotANumber(String),
}

/// Exact decimal-to-binary conversion of one JSON number token. The numbers
/// land in tolerance comparisons, so the nearest representable value —
/// which the standard library guarantees and a fast JSON float path does
/// not — is the contract here.
fn exact_f64(raw: &RawValue) -> Result<f64, FormatError> {
    let text = raw.get();
    let value: f64 = text
        .parse()
        .map_err(|_| FormatError::NotANumber(text.to_string()))?;
    if !value.is_finite() {
        return Err(FormatError::NotANumber(text.to_string()));
    }
    Ok(value)
}

fn exact_complex(pair: &[Box<RawValue>; 2]) -> Result<Complex64, FormatError> {
    Ok(Complex64::new(exact_f64(&pair[0])?, exact_f64(&pair[1])?))
}

// ---------------------------------------------------------------------------
// Input formats
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

/// Parses `{"names": [...], "table": [[...], ...]}` and runs the full group
/// validation (squareness, Latin property, identity, inverses,
/// associativity).
pub fn parse_group_json(text: &str) -> Result<Group, FormatError> {
    let file: GroupFile = serde_json::from_str(text)?;
    Ok(Group::from_cayley_table(file.names, file.table)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionFile {
    values: Vec<[Box<RawValue>; 2]>,
}

/// Parses `{"values": [[re, im], ...]}` ordered by element index.
pub fn parse_function_json(
    text: &str,
    group: &Arc<Group>,
) -> Result<GroupFunction, FormatError> {
    let file: FunctionFile = serde_json::from_str(text)?;
    let values = file
        .values
        .iter()
        .map(exact_complex)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupFunction::new(Arc::clone(group), values)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IrrepFile {
    dim: usize,
    matrices: Vec<Vec<Vec<[Box<RawValue>; 2]>>>,
}

/// Parses a list of `{dim, matrices}` entries, one matrix per group element
/// in element order, and runs the full basis validation (unitarity,
/// homomorphism, irreducibility, completeness, orthogonality).
pub fn parse_basis_json(text: &str, group: &Arc<Group>) -> Result<IrrepBasis, FormatError> {
    let files: Vec<IrrepFile> = serde_json::from_str(text)?;
    let mut irreps = Vec::with_capacity(files.len());
    for (index, file) in files.iter().enumerate() {
        let shape_err = |reason: String| FormatError::BadBasisShape { index, reason };
        if file.matrices.len() != group.order() {
            return Err(shape_err(format!(
                "expected {} matrices, got {}",
                group.order(),
                file.matrices.len()
            )));
        }
        let d = file.dim;
        let mut matrices = Vec::with_capacity(file.matrices.len());
        for m in &file.matrices {
            if m.len() != d || m.iter().any(|row| row.len() != d) {
                return Err(shape_err(format!("matrix is not {d}x{d}")));
            }
            let mut entries = Vec::with_capacity(d * d);
            for row in m {
                for pair in row {
                    entries.push(exact_complex(pair)?);
                }
            }
            matrices.push(CMatrix::from_fn(d, d, |i, j| entries[i * d + j]));
        }
        irreps.push(UnitaryRep::new(Arc::clone(group), matrices)?);
    }
    Ok(IrrepBasis::new(Arc::clone(group), irreps)?)
}

// ---------------------------------------------------------------------------
// Built-in group grammar
// ---------------------------------------------------------------------------

/// Parses the builtin grammar: atoms `z<n>`/`c<n>` (cyclic), `d<n>`
/// (dihedral, order 2n), `s<n>` (symmetric), and `q8`, combined into direct
/// products with `x` — e.g. `z6`, `d4`, `z2xq8`. Case-insensitive. Size
/// limits are enforced before any table is allocated.
pub fn parse_group_spec(spec: &str) -> Result<Group, FormatError> {
    let bad = |reason: &str| FormatError::BadGroupSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    if !spec.is_ascii() {
        return Err(bad("spec must be ASCII"));
    }
    let mut product: Option<Group> = None;
    for atom in spec.split('x') {
        let atom = atom.trim().to_ascii_lowercase();
        let g = if atom == "q8" {
            Group::quaternion8()?
        } else {
            let (family, digits) = atom.split_at(atom.len().min(1));
            let n: usize = digits
                .parse()
                .map_err(|_| bad("expected a family letter followed by a number"))?;
            match family {
                "z" | "c" => Group::cyclic(n)?,
                "d" => Group::dihedral(n)?,
                "s" => Group::symmetric(n)?,
                _ => return Err(bad("unknown family (use z, c, d, s, or q8)")),
            }
        };
        product = Some(match product {
            None => g,
            Some(acc) => Group::product(&acc, &g)?,
        });
    }
    product.ok_or_else(|| bad("empty spec"))
}

// ---------------------------------------------------------------------------
// Deterministic JSON output
// ---------------------------------------------------------------------------

/// JSON document that renders to stable bytes: objects keep insertion
/// order, floats print with 17 significant digits (round-trip exact for
/// f64), and negative zero is normalized away.
#[derive(Debug, Clone, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl JsonValue {
    pub fn complex(z: Complex64) -> JsonValue {
        JsonValue::Array(vec![JsonValue::Float(z.re), JsonValue::Float(z.im)])
    }

    pub fn complex_vector(v: &[Complex64]) -> JsonValue {
        JsonValue::Array(v.iter().map(|&z| JsonValue::complex(z)).collect())
    }

    pub fn matrix(m: &CMatrix) -> JsonValue {
        JsonValue::Array(
            (0..m.rows())
                .map(|i| {
                    JsonValue::Array(
                        (0..m.cols()).map(|j| JsonValue::complex(m[(i, j)])).collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Int(i) => {
                let _ = write!(out, "{i}");
            }
            JsonValue::Float(f) => {
                let f = if *f == 0.0 { 0.0 } else { *f };
                if f.is_finite() {
                    let _ = write!(out, "{f:.16e}");
                } else {
                    out.push_str("null");
                }
            }
            JsonValue::Str(s) => write_escaped(s, out),
            JsonValue::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            JsonValue::Object(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_escaped(key, out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// The group export mirroring the input format exactly.
pub fn group_to_json(group: &Group) -> JsonValue {
    JsonValue::Object(vec![
        (
            "names".into(),
            JsonValue::Array(
                group
                    .names()
                    .iter()
                    .map(|n| JsonValue::Str(n.clone()))
                    .collect(),
            ),
        ),
        (
            "table".into(),
            JsonValue::Array(
                (0..group.order())
                    .map(|i| {
                        JsonValue::Array(
                            (0..group.order())
                                .map(|j| JsonValue::Int(group.mul(i, j) as i64))
                                .collect(),
                        )
                    })
                    .collect(),
            ),
        ),
    ])
}

/// The irrep-basis export mirroring the input format exactly.
pub fn basis_to_json(basis: &IrrepBasis) -> JsonValue {
    JsonValue::Array(
        basis
            .irreps()
            .iter()
            .map(|rep| {
                JsonValue::Object(vec![
                    ("dim".into(), JsonValue::Int(rep.dim() as i64)),
                    (
                        "matrices".into(),
                        JsonValue::Array(rep.matrices().iter().map(JsonValue::matrix).collect()),
                    ),
                ])
            })
            .collect(),
    )
}

/// The function export mirroring the input format exactly.
pub fn function_to_json(f: &GroupFunction) -> JsonValue {
    JsonValue::Object(vec![(
        "values".into(),
        JsonValue::complex_vector(f.values()),
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trips_through_json() {
        let s3 = Group::symmetric(3).unwrap();
        let text = group_to_json(&s3).render();
        let back = parse_group_json(&text).unwrap();
        assert!(back.same_structure(&s3));
        assert_eq!(back.names(), s3.names());
    }

    #[test]
    fn group_parser_rejects_malformed_input() {
        assert!(matches!(
            parse_group_json("{\"names\": [\"e\"], \"table\": [[0]], \"extra\": 1}"),
            Err(FormatError::Json(_))
        ));
        assert!(matches!(
            parse_group_json("{\"names\": [\"e\", \"a\"], \"table\": [[0, 1]]}"),
            Err(FormatError::Group(_))
        ));
        assert!(matches!(
            parse_group_json("not json"),
            Err(FormatError::Json(_))
        ));
        // A Latin square that is not associative must be rejected too.
        let text = "{\"names\": [\"0\",\"1\",\"2\",\"3\",\"4\"],
                    \"table\": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}";
        assert!(matches!(
            parse_group_json(text),
            Err(FormatError::Group(GroupError::NotAssociative { .. }))
        ));
    }

    #[test]
    fn function_round_trips_through_json() {
        let q8 = Arc::new(Group::quaternion8().unwrap());
        let f = GroupFunction::from_fn(Arc::clone(&q8), |x| {
            Complex64::new(x as f64 * 0.25 - 1.0, (x as f64).sin())
        });
        let text = function_to_json(&f).render();
        let back = parse_function_json(&text, &q8).unwrap();
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn function_parsing_is_bit_exact() {
        use rand::{Rng, SeedableRng};
        let z12 = Arc::new(Group::cyclic(12).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240815);
        for _ in 0..200 {
            let f = GroupFunction::from_fn(Arc::clone(&z12), |_| {
                Complex64::new(
                    f64::from_bits(rng.gen::<u64>() >> 2),
                    rng.gen_range(-1e3..1e3),
                )
            });
            let text = function_to_json(&f).render();
            let back = parse_function_json(&text, &z12).unwrap();
            for (a, b) in back.values().iter().zip(f.values()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
            // Render of the reparse is byte-identical too.
            assert_eq!(function_to_json(&back).render(), text);
        }
    }

    #[test]
    fn function_parser_rejects_out_of_range_numbers() {
        let z2 = Arc::new(Group::cyclic(2).unwrap());
        assert!(matches!(
            parse_function_json("{\"values\": [[1e999, 0.0], [0.0, 0.0]]}", &z2),
            Err(FormatError::NotANumber(_))
        ));
    }

    #[test]
    fn function_parser_enforces_length() {
        let z2 = Arc::new(Group::cyclic(2).unwrap());
        assert!(matches!(
            parse_function_json("{\"values\": [[1.0, 0.0]]}", &z2),
            Err(FormatError::Group(GroupError::FunctionLength { .. }))
        ));
    }

    #[test]
    fn basis_round_trips_through_json() {
        let s3 = Arc::new(Group::symmetric(3).unwrap());
        let basis = crate::repr::decompose_irreps(&s3, 42).unwrap();
        let text = basis_to_json(&basis).render();
        let back = parse_basis_json(&text, &s3).unwrap();
        assert_eq!(back.dims(), basis.dims());
        for (a, b) in back.irreps().iter().zip(basis.irreps()) {
            for x in s3.elements() {
                assert!(a.matrix(x).distance(b.matrix(x)) <= 1e-12);
            }
        }
        // Deterministic writer: render of the reparsed basis is identical.
        assert_eq!(basis_to_json(&back).render(), text);
    }

    #[test]
    fn basis_parser_rejects_bad_shapes_and_invalid_reps() {
        let z2 = Arc::new(Group::cyclic(2).unwrap());
        assert!(matches!(
            parse_basis_json("[{\"dim\": 1, \"matrices\": [[[[1.0, 0.0]]]]}]", &z2),
            Err(FormatError::BadBasisShape { .. })
        ));
        // Right shape, but the matrices are not a homomorphism.
        let text = "[{\"dim\": 1, \"matrices\": [[[[1.0, 0.0]]], [[[0.5, 0.0]]]]}]";
        assert!(matches!(
            parse_basis_json(text, &z2),
            Err(FormatError::Repr(_))
        ));
    }

    #[test]
    fn group_spec_grammar() {
        assert_eq!(parse_group_spec("z6").unwrap().order(), 6);
        assert_eq!(parse_group_spec("c3").unwrap().order(), 3);
        assert_eq!(parse_group_spec("d4").unwrap().order(), 8);
        assert_eq!(parse_group_spec("s4").unwrap().order(), 24);
        assert_eq!(parse_group_spec("Q8").unwrap().order(), 8);
        let prod = parse_group_spec("z2xq8").unwrap();
        assert_eq!(prod.order(), 16);
        assert!(parse_group_spec("z2xz3xz5").unwrap().is_abelian());
        for bad in ["", "w5", "z", "zz", "q9", "z2x", "s99", "z999999999999999999999"] {
            assert!(parse_group_spec(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn float_rendering_is_precise_and_normalized() {
        let v = JsonValue::Array(vec![
            JsonValue::Float(-0.0),
            JsonValue::Float(1.0 / 3.0),
            JsonValue::Float(-2.5e-300),
        ]);
        let text = v.render();
        assert_eq!(
            text,
            "[0.0000000000000000e0,3.3333333333333331e-1,-2.5000000000000000e-300]"
        );
        // 17 significant digits round-trip exactly.
        let parsed: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed[1], 1.0 / 3.0);
        assert_eq!(parsed[2], -2.5e-300);
    }

    #[test]
    fn string_escaping() {
        let v = JsonValue::Object(vec![(
            "k\"ey\\".into(),
            JsonValue::Str("line\nbreak\u{1}".into()),
        )]);
        assert_eq!(v.render(), "{\"k\\\"ey\\\\\":\"line\\nbreak\\u0001\"}");
        let parsed: serde_json::Value = serde_json::from_str(&v.render()).unwrap();
        assert_eq!(parsed["k\"ey\\"], "line\nbreak\u{1}");
    }
}

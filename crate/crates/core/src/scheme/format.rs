//! Canonical scheme files.
//!
//! Triple form:
//!
//! ```json
//! {
//!   "dims": [2, 2, 2],
//!   "rank": 7,
//!   "field": {"d": -1},
//!   "triples": [
//!     {"O": [["1", "0"], ["0", "1"]], "P": [...], "Q": [...]}
//!   ]
//! }
//! ```
//!
//! Encoding form replaces `rank`/`triples` with `U`, `V`, `W` (rows of entry
//! strings). Output is canonical: fixed key order, reduced fractions, one
//! triple (or one encoding row) per line.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use super::{Dims, EncodingMatrices, Scheme, Triple};
use crate::error::{Error, Result};
use crate::exactnum::{FieldDesc, QElem};
use crate::linalg::ExactMat;

/// Which of the two file layouts a document used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentForm {
    Triples,
    Encoding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDocument {
    pub form: DocumentForm,
    pub scheme: Scheme,
}

impl SchemeDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::Format("top level must be an object".into()))?;
        let dims = parse_dims(obj.get("dims"))?;
        let field = parse_field(obj.get("field"))?;
        if obj.contains_key("triples") {
            let triples = obj["triples"]
                .as_array()
                .ok_or_else(|| Error::Format("\"triples\" must be an array".into()))?;
            if let Some(rank) = obj.get("rank") {
                let r = rank.as_u64().ok_or_else(|| {
                    Error::Format("\"rank\" must be a non-negative integer".into())
                })?;
                if r as usize != triples.len() {
                    return Err(Error::Format(format!(
                        "\"rank\" is {r} but {} triples are listed",
                        triples.len()
                    )));
                }
            }
            if triples.is_empty() {
                return Err(Error::Format("scheme has no triples (rank 0)".into()));
            }
            let triples = triples
                .iter()
                .enumerate()
                .map(|(j, t)| {
                    let get = |name: &str| {
                        let v = t.get(name).ok_or_else(|| {
                            Error::Format(format!("triples[{j}] is missing \"{name}\""))
                        })?;
                        parse_matrix_value(v, field, &format!("triples[{j}].{name}"))
                    };
                    Ok(Triple::new(get("O")?, get("P")?, get("Q")?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SchemeDocument {
                form: DocumentForm::Triples,
                scheme: Scheme::new(dims, field, triples)?,
            })
        } else if obj.contains_key("U") {
            let get = |name: &str| {
                let v = obj
                    .get(name)
                    .ok_or_else(|| Error::Format(format!("missing \"{name}\"")))?;
                parse_matrix_value(v, field, name)
            };
            let enc = EncodingMatrices {
                u: get("U")?,
                v: get("V")?,
                w: get("W")?,
            };
            if enc.u.rows() == 0 {
                return Err(Error::Format("scheme has no rows (rank 0)".into()));
            }
            Ok(SchemeDocument {
                form: DocumentForm::Encoding,
                scheme: Scheme::from_encoding(dims, &enc)?,
            })
        } else {
            Err(Error::Format(
                "expected either \"triples\" or \"U\"/\"V\"/\"W\"".into(),
            ))
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SchemeDocument::parse(&std::fs::read_to_string(path)?)
    }
}

fn parse_dims(v: Option<&Value>) -> Result<Dims> {
    let err = || Error::Format("\"dims\" must be [m, n, p] with positive integers".into());
    let arr = v.and_then(Value::as_array).ok_or_else(err)?;
    let d: Vec<usize> = arr
        .iter()
        .map(|x| x.as_u64().filter(|&k| k > 0).map(|k| k as usize))
        .collect::<Option<_>>()
        .ok_or_else(err)?;
    match d[..] {
        [m, n, p] => Ok(Dims::new(m, n, p)),
        _ => Err(err()),
    }
}

/// A missing `field` means `d = -1`; that is harmless for rational schemes.
fn parse_field(v: Option<&Value>) -> Result<FieldDesc> {
    let Some(v) = v else {
        return Ok(FieldDesc::GAUSSIAN);
    };
    let d = v
        .get("d")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Format("\"field\" must be {\"d\": <integer>}".into()))?;
    FieldDesc::new(d)
}

fn parse_entry_value(v: &Value, field: FieldDesc, at: &str) -> Result<QElem> {
    let wrap = |e: Error| Error::Format(format!("{at}: {e}"));
    match v {
        Value::String(s) => QElem::parse(s, field).map_err(wrap),
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(QElem::from_int(k, field)),
            None => Err(Error::Format(format!(
                "{at}: non-integer JSON number {n}; write fractions as strings"
            ))),
        },
        other => Err(Error::Format(format!("{at}: unexpected entry {other}"))),
    }
}

fn parse_matrix_value(v: &Value, field: FieldDesc, at: &str) -> Result<ExactMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{at}: expected a list of rows")))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| Error::Format(format!("{at}[{i}]: expected a row")))?
                .iter()
                .enumerate()
                .map(|(j, e)| parse_entry_value(e, field, &format!("{at}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ExactMat::from_rows(field, rows).map_err(|e| Error::Format(format!("{at}: {e}")))
}

/// Parses a bracketed matrix literal such as `[[1, i], [0, 1/2]]`. Entries may
/// be bare or quoted.
pub fn parse_matrix_literal(text: &str, field: FieldDesc) -> Result<ExactMat> {
    let bad = |why: &str| Error::Format(format!("matrix literal {text:?}: {why}"));
    let t: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '"')
        .collect();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("expected [[...], ...]"))?;
    let mut rows = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest.strip_prefix('[').ok_or_else(|| bad("expected '['"))?;
        let close = body.find(']').ok_or_else(|| bad("unclosed row"))?;
        let row = body[..close]
            .split(',')
            .map(|e| QElem::parse(e, field))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
        rest = &body[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            rest = r;
            if rest.is_empty() {
                return Err(bad("trailing comma"));
            }
        } else if !rest.is_empty() {
            return Err(bad("expected ',' between rows"));
        }
    }
    if rows.is_empty() {
        return Err(bad("empty matrix"));
    }
    ExactMat::from_rows(field, rows)
}

fn write_matrix(out: &mut String, m: &ExactMat) {
    out.push('[');
    for i in 0..m.rows() {
        if i > 0 {
            out.push_str(", ");
        }
        write_row(out, m.row(i));
    }
    out.push(']');
}

fn write_row(out: &mut String, row: &[QElem]) {
    out.push('[');
    for (j, e) in row.iter().enumerate() {
        if j > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "\"{e}\"");
    }
    out.push(']');
}

fn write_header(out: &mut String, s: &Scheme) {
    let Dims { m, n, p } = s.dims();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"dims\": [{m}, {n}, {p}],");
}

impl Scheme {
    /// Canonical triple-form document.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_header(&mut out, self);
        let _ = writeln!(out, "  \"rank\": {},", self.rank());
        let _ = writeln!(out, "  \"field\": {{\"d\": {}}},", self.field().d());
        out.push_str("  \"triples\": [\n");
        for (j, t) in self.triples().iter().enumerate() {
            out.push_str("    {\"O\": ");
            write_matrix(&mut out, &t.o);
            out.push_str(", \"P\": ");
            write_matrix(&mut out, &t.p);
            out.push_str(", \"Q\": ");
            write_matrix(&mut out, &t.q);
            out.push('}');
            if j + 1 < self.rank() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]\n}\n");
        out
    }

    /// Canonical encoding-form document.
    pub fn to_encoding_json(&self) -> String {
        let enc = self.to_encoding();
        let mut out = String::new();
        write_header(&mut out, self);
        let _ = writeln!(out, "  \"field\": {{\"d\": {}}},", self.field().d());
        let blocks = [("U", &enc.u), ("V", &enc.v), ("W", &enc.w)];
        for (b, (name, mat)) in blocks.iter().enumerate() {
            let _ = writeln!(out, "  \"{name}\": [");
            for i in 0..mat.rows() {
                out.push_str("    ");
                write_row(&mut out, mat.row(i));
                if i + 1 < mat.rows() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("  ]");
            if b + 1 < blocks.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Scheme> {
        Ok(SchemeDocument::parse(text)?.scheme)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scheme::Slot;
    use proptest::prelude::*;

    #[test]
    fn strassen_round_trips_both_forms() {
        let s = fixtures::strassen();
        let text = s.to_json();
        let doc = SchemeDocument::parse(&text).unwrap();
        assert_eq!(doc.form, DocumentForm::Triples);
        assert_eq!(doc.scheme, s);
        assert_eq!(doc.scheme.to_json(), text);

        let enc = s.to_encoding_json();
        let doc = SchemeDocument::parse(&enc).unwrap();
        assert_eq!(doc.form, DocumentForm::Encoding);
        assert_eq!(doc.scheme, s);
        assert_eq!(doc.scheme.to_encoding_json(), enc);
    }

    #[test]
    fn canonical_layout() {
        let text = fixtures::strassen().to_json();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("{"));
        assert_eq!(lines.next(), Some("  \"dims\": [2, 2, 2],"));
        assert_eq!(lines.next(), Some("  \"rank\": 7,"));
        assert_eq!(lines.next(), Some("  \"field\": {\"d\": -1},"));
        assert_eq!(lines.next(), Some("  \"triples\": ["));
        assert_eq!(
            lines.next(),
            Some(
                "    {\"O\": [[\"1\", \"0\"], [\"0\", \"1\"]], \"P\": [[\"1\", \"0\"], [\"0\", \"1\"]], \"Q\": [[\"1\", \"0\"], [\"0\", \"1\"]]},"
            )
        );
    }

    #[test]
    fn lenient_input() {
        let text =
            r#"{"dims": [1, 1, 1], "triples": [{"O": [[1]], "P": [["2/4"]], "Q": [[" 2 "]]}]}"#;
        let s = Scheme::from_json(text).unwrap();
        assert_eq!(s.field(), FieldDesc::GAUSSIAN);
        assert!(s.brent_verify().ok());
    }

    #[test]
    fn parse_errors() {
        let cases = [
            "not json",
            "[]",
            r#"{"dims": [2, 2], "triples": []}"#,
            r#"{"dims": [1, 1, 1], "triples": []}"#,
            r#"{"dims": [1, 1, 1], "rank": 2, "triples": [{"O": [[1]], "P": [[1]], "Q": [[1]]}]}"#,
            r#"{"dims": [1, 1, 1], "triples": [{"O": [[1]], "P": [[1]]}]}"#,
            r#"{"dims": [1, 1, 1], "triples": [{"O": [["x"]], "P": [[1]], "Q": [[1]]}]}"#,
            r#"{"dims": [1, 1, 1], "triples": [{"O": [[0.5]], "P": [[1]], "Q": [[1]]}]}"#,
            r#"{"dims": [1, 1, 1], "field": {"d": 4}, "triples": [{"O": [[1]], "P": [[1]], "Q": [[1]]}]}"#,
            r#"{"dims": [1, 1, 2], "triples": [{"O": [[1]], "P": [[1]], "Q": [[1]]}]}"#,
            r#"{"dims": [1, 1, 1]}"#,
        ];
        for c in cases {
            assert!(SchemeDocument::parse(c).is_err(), "{c}");
        }
        match SchemeDocument::parse("{\n  \"dims\": [1,\n  }") {
            Err(Error::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let err = SchemeDocument::parse(
            r#"{"dims": [1, 1, 1], "triples": [{"O": [["x"]], "P": [[1]], "Q": [[1]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("triples[0].O[0][0]"), "{err}");
    }

    #[test]
    fn matrix_literals() {
        let f = FieldDesc::GAUSSIAN;
        let m = parse_matrix_literal("[[1, i], [0, -1/2]]", f).unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m.get(0, 1), &QElem::sqrt_d(f));
        let q = parse_matrix_literal(r#"[["1","1+i"]]"#, f).unwrap();
        assert_eq!(q.shape(), (1, 2));
        for bad in [
            "",
            "[]",
            "[[1,2],[3]]",
            "[[1,2]",
            "[[1,2],]",
            "[[1,2]x[3,4]]",
        ] {
            assert!(parse_matrix_literal(bad, f).is_err(), "{bad:?}");
        }
    }

    fn arb_entry() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (-9i64..10, 1i64..6, -9i64..10, 1i64..6)
    }

    proptest! {
        #[test]
        fn canonical_text_is_a_fixed_point(
            j in 0usize..7,
            (an, ad, bn, bd) in arb_entry(),
            slot in prop_oneof![Just(Slot::O), Just(Slot::P), Just(Slot::Q)],
        ) {
            prop_assume!(an != 0 || bn != 0);
            let f = FieldDesc::GAUSSIAN;
            let alpha = QElem::new(
                crate::exactnum::ratio(an, ad),
                crate::exactnum::ratio(bn, bd),
                f,
            );
            let other = if slot == Slot::O { Slot::P } else { Slot::O };
            let s = fixtures::strassen()
                .scalar_redistribute(j, &alpha, slot, other)
                .unwrap();
            let text = s.to_json();
            let back = Scheme::from_json(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_json(), text);
            let enc = s.to_encoding_json();
            prop_assert_eq!(Scheme::from_json(&enc).unwrap(), s);
        }
    }
}

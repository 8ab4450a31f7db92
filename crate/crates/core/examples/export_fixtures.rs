//! Writes the bundled schemes and matrices as JSON files.
//!
//! Usage: cargo run --example export_fixtures -- <dir>

use std::path::PathBuf;

use mmdescend::exactnum::ratio;
use mmdescend::fixtures;
use mmdescend::scheme::Slot;
use mmdescend::{ExactMat, FieldDesc, QElem, Scheme, Triple};

fn literal(m: &ExactMat) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|e| format!("\"{e}\"")).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn corrupted_strassen() -> Scheme {
    let s = fixtures::strassen();
    let mut triples: Vec<Triple> = s.triples().to_vec();
    triples[0].o.set(0, 0, QElem::zero(s.field()));
    Scheme::new(s.dims(), s.field(), triples).expect("shapes unchanged")
}

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    let f = FieldDesc::GAUSSIAN;
    let half = QElem::from_rat(ratio(1, 2), f);
    let schemes = [
        ("strassen.json", fixtures::strassen().to_json()),
        (
            "strassen_encoding.json",
            fixtures::strassen().to_encoding_json(),
        ),
        ("standard_222.json", fixtures::standard_222().to_json()),
        (
            "strassen_complexified.json",
            fixtures::complexified_strassen().to_json(),
        ),
        ("split_nonreal.json", fixtures::split_nonreal().to_json()),
        ("half_trace_toy.json", fixtures::half_trace_toy().to_json()),
        ("strassen_corrupted.json", corrupted_strassen().to_json()),
        (
            "strassen_half.json",
            fixtures::strassen()
                .scalar_redistribute(1, &half, Slot::O, Slot::P)
                .expect("valid index")
                .to_json(),
        ),
    ];
    for (name, text) in schemes {
        std::fs::write(dir.join(name), text)?;
    }

    let parse = |t: &str| mmdescend::scheme::parse_matrix_literal(t, f).expect("literal");
    let matrices = [
        ("diag_i_1", parse("[[i, 0], [0, 1]]")),
        ("diag_i_minus_i", parse("[[i, 0], [0, -i]]")),
        ("complexify_x", parse("[[1, i], [0, 1]]")),
        ("complexify_y", parse("[[i, 0], [1, 1]]")),
        ("descent_basis", fixtures::descent_example_basis()),
        ("descent_pqo_basis", fixtures::descent_example_pqo_basis()),
        ("descent_x", fixtures::descent_example_x()),
        ("descent_y", fixtures::descent_example_y()),
        ("descent_z", fixtures::descent_example_z()),
    ];
    let mut out = String::from("{\n  \"field\": {\"d\": -1},\n");
    for (k, (name, m)) in matrices.iter().enumerate() {
        let sep = if k + 1 < matrices.len() { "," } else { "" };
        out.push_str(&format!("  \"{name}\": {}{sep}\n", literal(m)));
    }
    out.push_str("}\n");
    std::fs::write(dir.join("matrices.json"), out)?;
    Ok(())
}

//! Regenerates the constant tables and diffs them against the checked-in
//! copies. Set `HODGEVIR_BLESS=1` to rewrite the files.

use std::path::PathBuf;

use hodgevir::pipeline::{a_table, c_table};

const ORDER: u32 = 10;

fn check(name: &str, fresh: serde_json::Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let rendered = serde_json::to_string_pretty(&fresh).unwrap() + "\n";
    if std::env::var_os("HODGEVIR_BLESS").is_some() {
        std::fs::write(&path, &rendered).unwrap();
        return;
    }
    let stored = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let stored_json: serde_json::Value = serde_json::from_str(&stored).unwrap();
    assert_eq!(stored_json, fresh, "{name} differs from the regenerated table");
}

#[test]
fn a_table_matches_golden() {
    check("a.json", a_table(ORDER));
}

#[test]
fn c_table_matches_golden() {
    check("c.json", c_table(ORDER));
}

use std::path::PathBuf;

use partop::compose::{slack_table, SlackTable};

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden/slack.json")
}

/// Set `PARTOP_BLESS=1` to rewrite the table.
#[test]
fn slack_table_matches_golden() {
    let table = slack_table().unwrap();
    let path = golden_path();
    if std::env::var_os("PARTOP_BLESS").is_some() {
        let text = serde_json::to_string_pretty(&table).unwrap() + "\n";
        std::fs::write(&path, text).unwrap();
    }
    let golden: SlackTable = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(table, golden);
}

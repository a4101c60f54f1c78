//! Replays the checked-in fuzz corpus with the fuzz targets' properties.

use std::path::PathBuf;

use efcce::dynamics::log;
use efcce::games::{load, save};

fn corpus(name: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(name);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter_map(|p| std::fs::read_to_string(&p).ok().map(|s| (p, s)))
        .collect();
    out.sort();
    out
}

#[test]
fn efg_seq_seeds() {
    let seeds = corpus("efg_seq");
    let mut loaded = 0;
    for (path, text) in &seeds {
        if let Ok(game) = load(text) {
            loaded += 1;
            let saved = save(&game).unwrap();
            assert_eq!(save(&load(&saved).unwrap()).unwrap(), saved, "{}", path.display());
        }
    }
    assert!(loaded >= 3 && loaded < seeds.len());
}

#[test]
fn csv_log_seeds() {
    let seeds = corpus("csv_log");
    let mut parsed = 0;
    for (path, text) in &seeds {
        if let Ok((n, rows)) = log::parse_csv(text) {
            parsed += 1;
            let back = log::parse_csv(&log::to_csv(n, &rows)).unwrap();
            assert_eq!(back.1.len(), rows.len(), "{}", path.display());
        }
    }
    assert!(parsed >= 2 && parsed < seeds.len());
}

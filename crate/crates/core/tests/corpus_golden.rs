//! The `.delp` corpus is the wire format of record: every program parses
//! without diagnostics, validates, survives the format/parse round trip,
//! and its canonical rendering is bit-stable against the checked-in golden
//! files (regenerate with UPDATE_GOLDEN=1 after an intentional grammar
//! change).

use std::path::PathBuf;

use delp_core::corpus;
use delp_core::model::validate;
use delp_core::parser::{format_program, parse_program};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.delp"))
}

#[test]
fn corpus_parses_without_diagnostics() {
    for entry in corpus::all() {
        let parsed = parse_program(entry.text, entry.mode);
        assert!(parsed.is_ok(), "{}: {:?}", entry.name, parsed.err());
    }
}

#[test]
fn corpus_validates() {
    for entry in corpus::all() {
        let p = corpus::program(entry.name);
        assert!(validate(&p).is_ok(), "{}", entry.name);
    }
}

#[test]
fn corpus_round_trips() {
    for entry in corpus::all() {
        let p = corpus::program(entry.name);
        let text = format_program(&p);
        let again = parse_program(&text, entry.mode).expect("reparse");
        assert_eq!(p, again, "{}", entry.name);
        assert_eq!(text, format_program(&again), "{}", entry.name);
    }
}

#[test]
fn corpus_canonical_form_is_stable() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for entry in corpus::all() {
        let canonical = format_program(&corpus::program(entry.name));
        let path = golden_path(entry.name);
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &canonical).unwrap();
            continue;
        }
        let golden = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: missing golden file ({e})", entry.name));
        assert_eq!(canonical, golden, "{}: canonical form drifted", entry.name);
    }
}

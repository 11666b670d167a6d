//! Fixture loading shared by the benchmarks.

use std::path::PathBuf;

use designcat::funcstruct::parse_structure;
use designcat::{DesignProblem, FunctionStructure};

pub fn fixture(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn structure(name: &str) -> FunctionStructure {
    match parse_structure(&fixture(name)).expect("fixture parses") {
        DesignProblem::Structure(fs) => fs,
        DesignProblem::BlackBox(_) => panic!("{name} is a black box"),
    }
}

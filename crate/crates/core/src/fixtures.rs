//! Reference designs and data, bundled as CSV.
//!
//! | name           | contents                                       |
//! |----------------|------------------------------------------------|
//! | `d1`, `d2`     | 3-component designs, 6 runs, unblocked          |
//! | `d1_blocked`   | `d1` split into 2 blocks of 3                    |
//! | `d2_blocked`   | `d2` split into 2 blocks of 3                    |
//! | `tb20`, `tb15`, `tb12` | m=5, k=3 with 20, 15, 12 runs per block  |
//! | `tb40`, `tb27`, `tb25` | m=5, k=2 with 40, 27, 25 runs per block  |
//! | `tb_unblocked` | five-drug experiment without blocking, with `y`  |
//!
//! `tb12` also carries the five-drug responses.

use crate::design::DesignFile;
use crate::error::Result;

pub const NAMES: [&str; 11] =
    ["d1", "d2", "d1_blocked", "d2_blocked", "tb20", "tb40", "tb15", "tb25", "tb12", "tb27", "tb_unblocked"];

/// The 24 squares for m=5 in long form: `L,row,C1..C5`.
pub const LATIN_SQUARES_M5: &str = include_str!("../fixtures/latin_squares_m5.csv");

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "d1" => include_str!("../fixtures/d1.csv"),
        "d2" => include_str!("../fixtures/d2.csv"),
        "d1_blocked" => include_str!("../fixtures/d1_blocked.csv"),
        "d2_blocked" => include_str!("../fixtures/d2_blocked.csv"),
        "tb20" => include_str!("../fixtures/tb20.csv"),
        "tb40" => include_str!("../fixtures/tb40.csv"),
        "tb15" => include_str!("../fixtures/tb15.csv"),
        "tb25" => include_str!("../fixtures/tb25.csv"),
        "tb12" => include_str!("../fixtures/tb12.csv"),
        "tb27" => include_str!("../fixtures/tb27.csv"),
        "tb_unblocked" => include_str!("../fixtures/tb_unblocked.csv"),
        _ => return None,
    })
}

/// Parses a bundled fixture. Panics on an unknown name.
pub fn load(name: &str) -> Result<DesignFile> {
    let text = text(name).unwrap_or_else(|| panic!("unknown fixture `{name}`"));
    DesignFile::parse(text)
}

/// Parses [`LATIN_SQUARES_M5`] into 24 squares of 5 rows each.
pub fn latin_squares_m5() -> Vec<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<Vec<u8>>> = Vec::new();
    for line in LATIN_SQUARES_M5.lines().skip(1) {
        let f: Vec<usize> = line.split(',').map(|s| s.parse().unwrap()).collect();
        if out.len() < f[0] {
            out.push(Vec::new());
        }
        out[f[0] - 1].push(f[2..].iter().map(|&v| v as u8).collect());
    }
    out
}

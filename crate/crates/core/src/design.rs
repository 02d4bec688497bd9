//! Design types, validation and CSV interchange.
//!
//! A run of an m-component design is a vector `z` where `z[j]` is the
//! position (1-based) at which component `j+1` is added, so every run is a
//! permutation of `1..=m`. Blocked designs attach a block label in `1..=k`.
//!
//! CSV layout: header `Run,Z1,...,Zm[,B][,y]`, one line per run. The run
//! column is written 1-based and ignored on read.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::latin::is_permutation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OofaDesign {
    m: usize,
    levels: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockOofaDesign {
    m: usize,
    k: usize,
    levels: Vec<u8>,
    blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Row (1-based) whose position part is not a permutation of `1..=m`.
    NotPermutation { row: usize },
    /// Row (1-based) carrying a block label outside `1..=k`.
    BlockOutOfRange { row: usize, block: usize },
    /// Block sizes differ; sizes listed for blocks `1..=k`.
    Unbalanced { sizes: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPermutation { row } => write!(f, "row {row}: row not a permutation"),
            Violation::BlockOutOfRange { row, block } => {
                write!(f, "row {row}: block label {block} out of range")
            }
            Violation::Unbalanced { sizes } => write!(f, "unbalanced blocks: sizes {sizes:?}"),
        }
    }
}

impl OofaDesign {
    /// Builds a design from runs. Rows must have length `m`; permutation
    /// checks are left to [`OofaDesign::validate`].
    pub fn new(m: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut levels = Vec::with_capacity(rows.len() * m);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidPoint(format!("row {} has {} entries, expected {m}", i + 1, r.len())));
            }
            levels.extend_from_slice(r);
        }
        Ok(Self { m, levels })
    }

    /// All `m!` permutations in lexicographic order.
    pub fn full(m: usize) -> Self {
        Self { m, levels: all_permutations(m).concat() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_runs(&self) -> usize {
        self.levels.len() / self.m
    }

    pub fn run(&self, i: usize) -> &[u8] {
        &self.levels[i * self.m..(i + 1) * self.m]
    }

    pub fn runs(&self) -> impl Iterator<Item = &[u8]> {
        self.levels.chunks(self.m)
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.runs()
            .enumerate()
            .filter(|(_, r)| !is_permutation(r.iter().copied(), self.m))
            .map(|(i, _)| Violation::NotPermutation { row: i + 1 })
            .collect()
    }

    /// Treats the design as a single block.
    pub fn as_blocked(&self) -> BlockOofaDesign {
        BlockOofaDesign { m: self.m, k: 1, levels: self.levels.clone(), blocks: vec![1; self.n_runs()] }
    }
}

impl BlockOofaDesign {
    pub fn new(m: usize, k: usize, rows: &[(Vec<u8>, usize)]) -> Result<Self> {
        let mut levels = Vec::with_capacity(rows.len() * m);
        let mut blocks = Vec::with_capacity(rows.len());
        for (i, (r, b)) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidPoint(format!("row {} has {} entries, expected {m}", i + 1, r.len())));
            }
            levels.extend_from_slice(r);
            blocks.push(*b);
        }
        Ok(Self { m, k, levels, blocks })
    }

    pub(crate) fn from_parts(m: usize, k: usize, levels: Vec<u8>, blocks: Vec<usize>) -> Self {
        debug_assert_eq!(levels.len(), blocks.len() * m);
        Self { m, k, levels, blocks }
    }

    /// Every permutation in every block: the `k·m!`-run full blocked design.
    pub fn full(m: usize, k: usize) -> Self {
        let perms = all_permutations(m);
        let mut levels = Vec::with_capacity(k * perms.len() * m);
        let mut blocks = Vec::with_capacity(k * perms.len());
        for b in 1..=k {
            for p in &perms {
                levels.extend_from_slice(p);
                blocks.push(b);
            }
        }
        Self { m, k, levels, blocks }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_runs(&self) -> usize {
        self.blocks.len()
    }

    pub fn run(&self, i: usize) -> &[u8] {
        &self.levels[i * self.m..(i + 1) * self.m]
    }

    pub fn block(&self, i: usize) -> usize {
        self.blocks[i]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn runs(&self) -> impl Iterator<Item = (&[u8], usize)> {
        self.levels.chunks(self.m).zip(self.blocks.iter().copied())
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &b in &self.blocks {
            if (1..=self.k).contains(&b) {
                sizes[b - 1] += 1;
            }
        }
        sizes
    }

    /// Runs per block, if the design is balanced.
    pub fn block_size(&self) -> Option<usize> {
        let sizes = self.block_sizes();
        sizes.windows(2).all(|w| w[0] == w[1]).then(|| sizes[0])
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, (r, b)) in self.runs().enumerate() {
            if !is_permutation(r.iter().copied(), self.m) {
                out.push(Violation::NotPermutation { row: i + 1 });
            }
            if b == 0 || b > self.k {
                out.push(Violation::BlockOutOfRange { row: i + 1, block: b });
            }
        }
        let sizes = self.block_sizes();
        if sizes.windows(2).any(|w| w[0] != w[1]) {
            out.push(Violation::Unbalanced { sizes });
        }
        out
    }

    /// Drops the block labels.
    pub fn positions(&self) -> OofaDesign {
        OofaDesign { m: self.m, levels: self.levels.clone() }
    }
}

/// `n_B = λ·m(m-1) + γ·m + δ`, chosen greedily (largest λ, then largest γ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignShape {
    pub m: usize,
    pub k: usize,
    pub block_size: usize,
    pub lambda: usize,
    pub gamma: usize,
    pub delta: usize,
}

pub fn decompose_block_size(m: usize, k: usize, block_size: usize) -> Result<DesignShape> {
    let factorial: usize = (1..=m).product();
    let max = factorial.checked_div(k).unwrap_or(0);
    if block_size == 0 || block_size > max || m < 2 {
        return Err(Error::InfeasibleSize { m, k, block_size, max });
    }
    let coa_rows = m * (m - 1);
    let lambda = block_size / coa_rows;
    let rest = block_size % coa_rows;
    Ok(DesignShape { m, k, block_size, lambda, gamma: rest / m, delta: rest % m })
}

pub(crate) fn all_permutations(m: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for z in 0..used.len() {
            if !used[z] {
                used[z] = true;
                prefix.push(z as u8 + 1);
                rec(prefix, used, out);
                prefix.pop();
                used[z] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AnyDesign {
    Unblocked(OofaDesign),
    Blocked(BlockOofaDesign),
}

impl AnyDesign {
    pub fn m(&self) -> usize {
        match self {
            AnyDesign::Unblocked(d) => d.m(),
            AnyDesign::Blocked(d) => d.m(),
        }
    }

    pub fn n_runs(&self) -> usize {
        match self {
            AnyDesign::Unblocked(d) => d.n_runs(),
            AnyDesign::Blocked(d) => d.n_runs(),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            AnyDesign::Unblocked(d) => d.validate(),
            AnyDesign::Blocked(d) => d.validate(),
        }
    }

    /// Blocked view; an unblocked design becomes a single block.
    pub fn to_blocked(&self) -> BlockOofaDesign {
        match self {
            AnyDesign::Unblocked(d) => d.as_blocked(),
            AnyDesign::Blocked(d) => d.clone(),
        }
    }
}

/// A design plus an optional response column, as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignFile {
    pub design: AnyDesign,
    pub response: Option<Vec<f64>>,
}

impl DesignFile {
    pub fn blocked(design: BlockOofaDesign) -> Self {
        Self { design: AnyDesign::Blocked(design), response: None }
    }

    pub fn to_csv(&self) -> String {
        let m = self.design.m();
        let mut header: Vec<String> = vec!["Run".into()];
        header.extend((1..=m).map(|j| format!("Z{j}")));
        if matches!(self.design, AnyDesign::Blocked(_)) {
            header.push("B".into());
        }
        if self.response.is_some() {
            header.push("y".into());
        }
        let mut out = header.join(",");
        out.push('\n');
        for i in 0..self.design.n_runs() {
            let mut fields = vec![(i + 1).to_string()];
            match &self.design {
                AnyDesign::Unblocked(d) => fields.extend(d.run(i).iter().map(u8::to_string)),
                AnyDesign::Blocked(d) => {
                    fields.extend(d.run(i).iter().map(u8::to_string));
                    fields.push(d.block(i).to_string());
                }
            }
            if let Some(y) = &self.response {
                fields.push(y[i].to_string());
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        let header = match records.next() {
            Some(rec) => rec.map_err(csv_error)?,
            None => return Err(parse_error(1, 1, "empty file")),
        };
        let layout = Layout::from_header(&header)?;

        let mut rows: Vec<(Vec<u8>, usize)> = Vec::new();
        let mut response = Vec::new();
        for (idx, rec) in records.enumerate() {
            let rec = rec.map_err(csv_error)?;
            let line = idx + 2;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            if rec.len() != layout.width() {
                return Err(parse_error(
                    line,
                    rec.len().min(layout.width()) + 1,
                    &format!("expected {} fields, found {}", layout.width(), rec.len()),
                ));
            }
            let mut z = Vec::with_capacity(layout.m);
            for j in 0..layout.m {
                z.push(parse_level(&rec[1 + j], line, 2 + j)?);
            }
            let b = if layout.blocked {
                let col = 1 + layout.m;
                rec[col]
                    .parse::<usize>()
                    .map_err(|_| parse_error(line, col + 1, &format!("invalid block label `{}`", &rec[col])))?
            } else {
                1
            };
            if layout.response {
                let col = layout.width() - 1;
                let y = rec[col]
                    .parse::<f64>()
                    .map_err(|_| parse_error(line, col + 1, &format!("invalid response `{}`", &rec[col])))?;
                response.push(y);
            }
            rows.push((z, b));
        }

        let design = if layout.blocked {
            let k = rows.iter().map(|(_, b)| *b).max().unwrap_or(1);
            AnyDesign::Blocked(BlockOofaDesign::new(layout.m, k, &rows)?)
        } else {
            let plain: Vec<Vec<u8>> = rows.into_iter().map(|(z, _)| z).collect();
            AnyDesign::Unblocked(OofaDesign::new(layout.m, &plain)?)
        };
        let violations = design.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        Ok(Self { design, response: layout.response.then_some(response) })
    }
}

struct Layout {
    m: usize,
    blocked: bool,
    response: bool,
}

impl Layout {
    fn width(&self) -> usize {
        1 + self.m + usize::from(self.blocked) + usize::from(self.response)
    }

    fn from_header(h: &csv::StringRecord) -> Result<Self> {
        if h.get(0) != Some("Run") {
            return Err(parse_error(1, 1, "header must start with `Run`"));
        }
        let mut m = 0;
        while h.get(1 + m) == Some(format!("Z{}", m + 1).as_str()) {
            m += 1;
        }
        if m < 2 {
            return Err(parse_error(1, 2, "header needs at least Z1,Z2"));
        }
        let mut col = 1 + m;
        let blocked = h.get(col) == Some("B");
        if blocked {
            col += 1;
        }
        let response = h.get(col) == Some("y");
        if response {
            col += 1;
        }
        if col != h.len() {
            return Err(parse_error(1, col + 1, &format!("unexpected header field `{}`", &h[col])));
        }
        Ok(Self { m, blocked, response })
    }
}

fn parse_level(s: &str, line: usize, column: usize) -> Result<u8> {
    s.parse::<u8>().map_err(|_| parse_error(line, column, &format!("invalid level `{s}`")))
}

fn parse_error(line: usize, column: usize, message: &str) -> Error {
    Error::Parse { line, column, message: message.to_string() }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_error(line, 0, &e.to_string())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<DesignFile> {
    DesignFile::parse(&std::fs::read_to_string(path)?)
}

pub fn write_csv(file: &DesignFile, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, file.to_csv())?;
    Ok(())
}

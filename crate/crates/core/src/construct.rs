//! Latin-square stacking construction with randomized exchange search.
//!
//! A block size is split as `n_B = λ·m(m-1) + γ·m + δ`:
//!
//! - `λ` whole COAs per block, the first `kλ` COAs assigned in index order;
//! - `γ` whole Latin squares per block, drawn from the next candidates;
//! - `δ` single rows per block, drawn from the candidates not used whole.
//!
//! When `γ = δ = 0` the result is deterministic. Otherwise each of `I_1`
//! restarts draws a random assignment, tries `I_2` random swaps of Latin
//! squares between blocks, then `I_3` random swaps of rows between blocks,
//! keeping a swap only when the word length pattern strictly improves. The
//! best restart wins; ties go to the lowest restart index.
//!
//! Restart `r` draws from `ChaCha8Rng::seed_from_u64(seed ^ r)`, so the
//! result does not depend on thread count.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::contrasts::contrast_table;
use crate::design::{decompose_block_size, BlockOofaDesign, DesignShape};
use crate::error::{Error, Result};
use crate::indicator::{degree_table, position_vector, IndicatorSpectrum, DENSE_MAX_M};
use crate::latin::CandidateSet;
use crate::wlp::{self, compare_slices, WordLengthPattern, COMPARE_TOL};
use crate::DEFAULT_SEED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// `I_1`
    pub restarts: usize,
    /// `I_2`
    pub ls_swaps: usize,
    /// `I_3`
    pub row_swaps: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { restarts: 500, ls_swaps: 50, row_swaps: 50, seed: DEFAULT_SEED }
    }
}

impl SearchBudget {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// Where the runs of one block came from. Indices are 1-based; `rows`
/// holds `(square, row)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockProvenance {
    pub coas: Vec<usize>,
    pub squares: Vec<usize>,
    pub rows: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionResult {
    pub design: BlockOofaDesign,
    pub wlp: WordLengthPattern,
    pub shape: DesignShape,
    pub provenance: Vec<BlockProvenance>,
    /// Restarts actually run; 0 for the deterministic case.
    pub restarts: usize,
    pub best_restart: Option<usize>,
    pub seed: u64,
}

impl ConstructionResult {
    /// Rebuilds the design from its provenance.
    pub fn rebuild(&self, candidates: &CandidateSet) -> BlockOofaDesign {
        assemble(self.shape.m, candidates, &self.provenance)
    }
}

/// Lays out each block as COA rows, then whole squares, then single rows.
pub fn assemble(m: usize, candidates: &CandidateSet, provenance: &[BlockProvenance]) -> BlockOofaDesign {
    let k = provenance.len();
    let mut levels = Vec::new();
    let mut blocks = Vec::new();
    for (b, prov) in provenance.iter().enumerate() {
        let mut push = |row: &[u8]| {
            levels.extend_from_slice(row);
            blocks.push(b + 1);
        };
        for &c in &prov.coas {
            candidates.coa(c).rows().for_each(&mut push);
        }
        for &l in &prov.squares {
            candidates.square(l).rows().for_each(&mut push);
        }
        for &(l, r) in &prov.rows {
            push(candidates.square(l).row(r - 1));
        }
    }
    BlockOofaDesign::from_parts(m, k, levels, blocks)
}

/// Number of candidate squares the `γ`/`δ` phase draws from.
pub fn candidate_count(shape: &DesignShape) -> usize {
    (shape.k * (shape.gamma * shape.m + shape.delta)).div_ceil(shape.m)
}

fn check_candidates(shape: &DesignShape, candidates: &CandidateSet) -> Result<()> {
    let needed = shape.k * shape.lambda * (shape.m - 1) + candidate_count(shape);
    let available = candidates.squares.len();
    if needed > available {
        return Err(Error::CandidateExhausted { needed, available });
    }
    Ok(())
}

fn coa_provenance(shape: &DesignShape) -> Vec<BlockProvenance> {
    (0..shape.k)
        .map(|b| BlockProvenance {
            coas: (b * shape.lambda + 1..=(b + 1) * shape.lambda).collect(),
            squares: Vec::new(),
            rows: Vec::new(),
        })
        .collect()
}

pub fn construct(m: usize, k: usize, block_size: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    let shape = decompose_block_size(m, k, block_size)?;
    let candidates = CandidateSet::new(m)?;
    check_candidates(&shape, &candidates)?;

    if shape.gamma == 0 && shape.delta == 0 {
        let provenance = coa_provenance(&shape);
        let design = assemble(m, &candidates, &provenance);
        return Ok(ConstructionResult {
            wlp: wlp::wlp(&design)?,
            design,
            shape,
            provenance,
            restarts: 0,
            best_restart: None,
            seed: budget.seed,
        });
    }

    let space = SearchSpace::with_candidates(shape, candidates)?;
    let restarts = budget.restarts.max(1);
    let mut outcomes: Vec<(Vec<f64>, Vec<BlockProvenance>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ r as u64);
            let mut state = space.random_state(&mut rng);
            state.search(budget.ls_swaps, budget.row_swaps, &mut rng);
            (state.interleaved(), state.provenance())
        })
        .collect();

    let mut best = 0;
    for r in 1..outcomes.len() {
        if compare_slices(&outcomes[r].0, &outcomes[best].0) == Ordering::Less {
            best = r;
        }
    }
    let provenance = outcomes.swap_remove(best).1;
    let design = assemble(m, &space.candidates, &provenance);
    Ok(ConstructionResult {
        wlp: wlp::wlp(&design)?,
        design,
        shape,
        provenance,
        restarts,
        best_restart: Some(best),
        seed: budget.seed,
    })
}

/// Everything a restart needs that does not change between restarts:
/// candidate squares, their per-row position vectors and the fixed COA part.
pub struct SearchSpace {
    shape: DesignShape,
    candidates: CandidateSet,
    /// 1-based index of the first candidate square.
    first: usize,
    count: usize,
    row_vecs: Vec<Vec<f64>>,
    square_vecs: Vec<Vec<f64>>,
    coa_sums: Vec<Vec<f64>>,
    buckets: Vec<Vec<u32>>,
}

impl SearchSpace {
    pub fn new(m: usize, k: usize, block_size: usize) -> Result<Self> {
        let shape = decompose_block_size(m, k, block_size)?;
        let candidates = CandidateSet::new(m)?;
        check_candidates(&shape, &candidates)?;
        Self::with_candidates(shape, candidates)
    }

    fn with_candidates(shape: DesignShape, candidates: CandidateSet) -> Result<Self> {
        let m = shape.m;
        if m > DENSE_MAX_M {
            return Err(Error::SizeLimit(m));
        }
        let pos = contrast_table(m)?;
        let first = shape.k * shape.lambda * (m - 1) + 1;
        let count = candidate_count(&shape);
        let mut row_vecs = Vec::with_capacity(count * m);
        let mut square_vecs = Vec::with_capacity(count);
        for l in first..first + count {
            let mut total = vec![0.0; m.pow(m as u32)];
            for row in candidates.square(l).rows() {
                let v = position_vector(&pos, row);
                total.iter_mut().zip(&v).for_each(|(a, x)| *a += x);
                row_vecs.push(v);
            }
            square_vecs.push(total);
        }
        let coa_sums = coa_provenance(&shape)
            .iter()
            .map(|prov| {
                let mut total = vec![0.0; m.pow(m as u32)];
                for &c in &prov.coas {
                    for row in candidates.coa(c).rows() {
                        let v = position_vector(&pos, row);
                        total.iter_mut().zip(&v).for_each(|(a, x)| *a += x);
                    }
                }
                total
            })
            .collect();
        let mut buckets = vec![Vec::new(); m * (m - 1)];
        for (t, &d) in degree_table(m).iter().enumerate() {
            if d > 0 {
                buckets[d as usize - 1].push(t as u32);
            }
        }
        Ok(Self { shape, candidates, first, count, row_vecs, square_vecs, coa_sums, buckets })
    }

    pub fn shape(&self) -> &DesignShape {
        &self.shape
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    /// State for an explicit assignment. COA entries are ignored; squares and
    /// rows must come from this space's candidates.
    pub fn state_from_provenance(&self, provenance: &[BlockProvenance]) -> Result<SearchState<'_>> {
        let DesignShape { m, k, gamma, delta, .. } = self.shape;
        let local = |l: usize| {
            (self.first..self.first + self.count)
                .contains(&l)
                .then(|| l - self.first)
                .ok_or_else(|| Error::InvalidPoint(format!("square {l} is not a candidate")))
        };
        if provenance.len() != k {
            return Err(Error::ShapeMismatch);
        }
        let mut squares = Vec::with_capacity(k);
        let mut rows = Vec::with_capacity(k);
        for prov in provenance {
            if prov.squares.len() != gamma || prov.rows.len() != delta {
                return Err(Error::ShapeMismatch);
            }
            squares.push(prov.squares.iter().map(|&l| local(l)).collect::<Result<Vec<_>>>()?);
            rows.push(prov.rows.iter().map(|&(l, r)| Ok(local(l)? * m + r - 1)).collect::<Result<Vec<_>>>()?);
        }
        Ok(SearchState::new(self, squares, rows))
    }

    /// A random starting assignment, as drawn at the start of a restart.
    pub fn random_state(&self, rng: &mut impl Rng) -> SearchState<'_> {
        let DesignShape { m, k, gamma, delta, .. } = self.shape;
        let mut order: Vec<usize> = (0..self.count).collect();
        order.shuffle(rng);
        let (whole, rest) = order.split_at(k * gamma);
        let mut pool: Vec<usize> = rest.iter().flat_map(|&l| (0..m).map(move |r| l * m + r)).collect();
        pool.shuffle(rng);
        let squares: Vec<Vec<usize>> = whole.chunks(gamma.max(1)).map(<[usize]>::to_vec).collect();
        let rows: Vec<Vec<usize>> = pool[..k * delta].chunks(delta.max(1)).map(<[usize]>::to_vec).collect();
        let squares = if gamma == 0 { vec![Vec::new(); k] } else { squares };
        let rows = if delta == 0 { vec![Vec::new(); k] } else { rows };
        SearchState::new(self, squares, rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MoveKind {
    LsSwap,
    RowSwap,
}

/// A swap of two units between blocks. Applying it twice is the identity,
/// so the move itself is its undo token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Exchange {
    pub kind: MoveKind,
    pub block_a: usize,
    pub slot_a: usize,
    pub block_b: usize,
    pub slot_b: usize,
}

/// One restart's assignment plus the per-block sums
/// `S_b(t) = Σ_{rows in b} X_t(z)` kept current under swaps.
pub struct SearchState<'a> {
    space: &'a SearchSpace,
    /// Local candidate indices of whole squares, per block.
    squares: Vec<Vec<usize>>,
    /// Local row ids (`square·m + row`), per block.
    rows: Vec<Vec<usize>>,
    sums: Vec<Vec<f64>>,
    pure: Vec<f64>,
    mixed: Vec<f64>,
}

impl<'a> SearchState<'a> {
    fn new(space: &'a SearchSpace, squares: Vec<Vec<usize>>, rows: Vec<Vec<usize>>) -> Self {
        let sums = (0..space.shape.k)
            .map(|b| {
                let mut s = space.coa_sums[b].clone();
                for &l in &squares[b] {
                    s.iter_mut().zip(&space.square_vecs[l]).for_each(|(a, x)| *a += x);
                }
                for &r in &rows[b] {
                    s.iter_mut().zip(&space.row_vecs[r]).for_each(|(a, x)| *a += x);
                }
                s
            })
            .collect();
        let mut state = Self { space, squares, rows, sums, pure: Vec::new(), mixed: Vec::new() };
        state.refresh();
        state
    }

    fn n_runs(&self) -> f64 {
        (self.space.shape.k * self.space.shape.block_size) as f64
    }

    /// Recomputes both pattern halves from the block sums.
    fn refresh(&mut self) {
        let k = self.space.shape.k as f64;
        let n2 = self.n_runs().powi(2);
        let mut pure = Vec::with_capacity(self.space.buckets.len());
        let mut mixed = Vec::with_capacity(self.space.buckets.len());
        for bucket in &self.space.buckets {
            let (mut p, mut q) = (0.0, 0.0);
            for &t in bucket {
                let t = t as usize;
                let (mut total, mut sq) = (0.0, 0.0);
                for s in &self.sums {
                    total += s[t];
                    sq += s[t] * s[t];
                }
                p += total * total;
                q += k * sq - total * total;
            }
            pure.push(p / n2);
            mixed.push(q / n2);
        }
        self.pure = pure;
        self.mixed = mixed;
    }

    pub fn interleaved(&self) -> Vec<f64> {
        self.pure.iter().zip(&self.mixed).flat_map(|(p, b)| [*p, *b]).collect()
    }

    pub fn wlp(&self) -> WordLengthPattern {
        WordLengthPattern::new(self.pure.clone(), Some(self.mixed.clone()))
    }

    pub fn provenance(&self) -> Vec<BlockProvenance> {
        let m = self.space.shape.m;
        let first = self.space.first;
        coa_provenance(&self.space.shape)
            .into_iter()
            .enumerate()
            .map(|(b, mut prov)| {
                prov.squares = self.squares[b].iter().map(|&l| first + l).collect();
                prov.rows = self.rows[b].iter().map(|&r| (first + r / m, r % m + 1)).collect();
                prov
            })
            .collect()
    }

    pub fn design(&self) -> BlockOofaDesign {
        assemble(self.space.shape.m, &self.space.candidates, &self.provenance())
    }

    /// Spectrum implied by the maintained block sums.
    pub fn spectrum(&self) -> Result<IndicatorSpectrum> {
        let shape = &self.space.shape;
        IndicatorSpectrum::from_block_sums(shape.m, shape.k, shape.k * shape.block_size, &self.sums)
    }

    fn units(&self, kind: MoveKind) -> &[Vec<usize>] {
        match kind {
            MoveKind::LsSwap => &self.squares,
            MoveKind::RowSwap => &self.rows,
        }
    }

    fn vector(&self, kind: MoveKind, unit: usize) -> &'a [f64] {
        match kind {
            MoveKind::LsSwap => &self.space.square_vecs[unit],
            MoveKind::RowSwap => &self.space.row_vecs[unit],
        }
    }

    /// Draws a uniformly random swap between two distinct blocks.
    pub fn propose(&self, kind: MoveKind, rng: &mut impl Rng) -> Result<Exchange> {
        let units = self.units(kind);
        let k = units.len();
        let per_block = units.first().map_or(0, Vec::len);
        if k < 2 || per_block == 0 {
            return Err(Error::NoMoveAvailable(match kind {
                MoveKind::LsSwap => "Latin-square swap",
                MoveKind::RowSwap => "row swap",
            }));
        }
        let block_a = rng.random_range(0..k);
        let mut block_b = rng.random_range(0..k - 1);
        if block_b >= block_a {
            block_b += 1;
        }
        Ok(Exchange {
            kind,
            block_a,
            slot_a: rng.random_range(0..per_block),
            block_b,
            slot_b: rng.random_range(0..per_block),
        })
    }

    /// Applies a swap and returns it as the undo token.
    pub fn apply(&mut self, ex: Exchange) -> Exchange {
        let ua = self.units(ex.kind)[ex.block_a][ex.slot_a];
        let ub = self.units(ex.kind)[ex.block_b][ex.slot_b];
        let (va, vb) = (self.vector(ex.kind, ua), self.vector(ex.kind, ub));
        for t in 0..va.len() {
            let d = vb[t] - va[t];
            self.sums[ex.block_a][t] += d;
            self.sums[ex.block_b][t] -= d;
        }
        let units = match ex.kind {
            MoveKind::LsSwap => &mut self.squares,
            MoveKind::RowSwap => &mut self.rows,
        };
        units[ex.block_a][ex.slot_a] = ub;
        units[ex.block_b][ex.slot_b] = ua;
        self.refresh();
        ex
    }

    pub fn undo(&mut self, token: Exchange) {
        self.apply(token);
    }

    /// Draws and applies a random swap.
    pub fn exchange_move(&mut self, kind: MoveKind, rng: &mut impl Rng) -> Result<Exchange> {
        let ex = self.propose(kind, rng)?;
        Ok(self.apply(ex))
    }

    /// Compares the pattern after `ex` with the current one, entry by entry,
    /// stopping at the first difference. Swaps keep the overall multiset of
    /// rows, so only the mixed entries can move.
    pub fn compare_move(&self, ex: &Exchange) -> Ordering {
        let ua = self.units(ex.kind)[ex.block_a][ex.slot_a];
        let ub = self.units(ex.kind)[ex.block_b][ex.slot_b];
        let (va, vb) = (self.vector(ex.kind, ua), self.vector(ex.kind, ub));
        let (sa, sb) = (&self.sums[ex.block_a], &self.sums[ex.block_b]);
        let scale = 2.0 * self.space.shape.k as f64 / self.n_runs().powi(2);
        for bucket in &self.space.buckets {
            let mut dq = 0.0;
            for &t in bucket {
                let t = t as usize;
                let d = vb[t] - va[t];
                dq += d * (sa[t] - sb[t] + d);
            }
            let delta = scale * dq;
            if delta.abs() > COMPARE_TOL {
                return if delta < 0.0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }

    fn try_moves(&mut self, kind: MoveKind, attempts: usize, rng: &mut impl Rng) {
        for _ in 0..attempts {
            let Ok(ex) = self.propose(kind, rng) else {
                return;
            };
            if self.compare_move(&ex) == Ordering::Less {
                self.apply(ex);
            }
        }
    }

    /// `I_2` square swaps then `I_3` row swaps, accepting strict improvements.
    pub fn search(&mut self, ls_swaps: usize, row_swaps: usize, rng: &mut impl Rng) {
        if self.space.shape.gamma > 0 {
            self.try_moves(MoveKind::LsSwap, ls_swaps, rng);
        }
        if self.space.shape.delta > 0 {
            self.try_moves(MoveKind::RowSwap, row_swaps, rng);
        }
    }
}

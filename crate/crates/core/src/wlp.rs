//! Word length patterns and the aberration order.
//!
//! `w_l^P` sums `(a_t'/a_0')²` over words of total degree `l` with `s = 0`;
//! `w_l^B` does the same over `s > 0`. Both run over `l = 1..=m(m-1)`.
//! Designs are ranked by comparing the interleaved vector
//! `(w_1^P, w_1^B, w_2^P, w_2^B, ...)` lexicographically.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::contrasts::ContrastTable;
use crate::design::{AnyDesign, BlockOofaDesign, OofaDesign};
use crate::error::{Error, Result};
use crate::indicator::{degree_table, tables, IndicatorSpectrum, DENSE_MAX_M};

pub const COMPARE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordLengthPattern {
    pure: Vec<f64>,
    mixed: Option<Vec<f64>>,
}

impl WordLengthPattern {
    pub fn new(pure: Vec<f64>, mixed: Option<Vec<f64>>) -> Self {
        Self { pure, mixed }
    }

    /// `w_1^P ..`
    pub fn pure(&self) -> &[f64] {
        &self.pure
    }

    /// `w_1^B ..`, absent for unblocked designs.
    pub fn mixed(&self) -> Option<&[f64]> {
        self.mixed.as_deref()
    }

    pub fn is_blocked(&self) -> bool {
        self.mixed.is_some()
    }

    /// `w_l^P` with `l` 1-based.
    pub fn p(&self, l: usize) -> f64 {
        self.pure[l - 1]
    }

    /// `w_l^B` with `l` 1-based; zero for unblocked designs.
    pub fn b(&self, l: usize) -> f64 {
        self.mixed.as_ref().map_or(0.0, |v| v[l - 1])
    }

    pub fn interleaved(&self) -> Vec<f64> {
        match &self.mixed {
            None => self.pure.clone(),
            Some(mixed) => self.pure.iter().zip(mixed).flat_map(|(p, b)| [*p, *b]).collect(),
        }
    }

    /// `Less` means `self` has less aberration.
    pub fn compare(&self, other: &WordLengthPattern) -> Result<Ordering> {
        compare(self, other)
    }
}

pub fn compare(a: &WordLengthPattern, b: &WordLengthPattern) -> Result<Ordering> {
    if a.pure.len() != b.pure.len() || a.is_blocked() != b.is_blocked() {
        return Err(Error::ShapeMismatch);
    }
    Ok(compare_slices(&a.interleaved(), &b.interleaved()))
}

pub(crate) fn compare_slices(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > COMPARE_TOL {
            return if x < y { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

fn max_degree(m: usize) -> usize {
    m * (m - 1)
}

impl IndicatorSpectrum {
    /// Blocked pattern when `k > 1` or `blocked` is set, else the pure one.
    pub fn wlp(&self, blocked: bool) -> Result<WordLengthPattern> {
        let a0 = self.a0();
        if self.n_runs() == 0 || a0 == 0.0 {
            return Err(Error::EmptyDesign);
        }
        let m = self.m();
        let tol = 1e-9 * a0.abs();
        let deg = degree_table(m);
        let mut pure = vec![0.0; max_degree(m)];
        let mut mixed = vec![0.0; max_degree(m)];
        for s in 0..self.k() {
            let target = if s == 0 { &mut pure } else { &mut mixed };
            for (&a, &d) in self.slab(s).iter().zip(&deg) {
                if d > 0 && a.abs() > tol {
                    target[d as usize - 1] += (a / a0).powi(2);
                }
            }
        }
        Ok(WordLengthPattern { pure, mixed: (blocked || self.k() > 1).then_some(mixed) })
    }
}

/// Pattern of a blocked design. Uses the dense spectrum for `m <= 7` and
/// streams over words otherwise.
pub fn wlp(design: &BlockOofaDesign) -> Result<WordLengthPattern> {
    if design.n_runs() == 0 {
        return Err(Error::EmptyDesign);
    }
    if design.m() <= DENSE_MAX_M {
        IndicatorSpectrum::of_design(design)?.wlp(true)
    } else {
        wlp_streaming(design, true)
    }
}

pub fn wlp_unblocked(design: &OofaDesign) -> Result<WordLengthPattern> {
    let blocked = design.as_blocked();
    if blocked.n_runs() == 0 {
        return Err(Error::EmptyDesign);
    }
    if design.m() <= DENSE_MAX_M {
        IndicatorSpectrum::of_design(&blocked)?.wlp(false)
    } else {
        wlp_streaming(&blocked, false)
    }
}

pub fn wlp_any(design: &AnyDesign) -> Result<WordLengthPattern> {
    match design {
        AnyDesign::Unblocked(d) => wlp_unblocked(d),
        AnyDesign::Blocked(d) => wlp(d),
    }
}

/// Pattern of the full blocked design (every permutation in every block).
/// Block balance makes every mixed entry zero, so `k` only fixes the shape.
pub fn wlp_of_full_design(m: usize, k: usize) -> Result<WordLengthPattern> {
    if m > DENSE_MAX_M {
        return Err(Error::SizeLimit(m));
    }
    let full = OofaDesign::full(m);
    let pure = IndicatorSpectrum::of_unblocked(&full)?.wlp(false)?.pure;
    let mixed = (k > 1).then(|| vec![0.0; pure.len()]);
    Ok(WordLengthPattern { pure, mixed })
}

/// Accumulates the pattern word by word without storing the spectrum.
/// Memory is `O(n·m)`; time is `O(n·m^m)`.
pub fn wlp_streaming(design: &BlockOofaDesign, blocked: bool) -> Result<WordLengthPattern> {
    let (m, k, n) = (design.m(), design.k(), design.n_runs());
    if n == 0 {
        return Err(Error::EmptyDesign);
    }
    if design.validate().iter().any(|v| !matches!(v, crate::design::Violation::Unbalanced { .. })) {
        return Err(Error::Validation(design.validate()));
    }
    let (pos, blk) = tables(m, k)?;
    let rows: Vec<(&[u8], usize)> = design.runs().collect();
    let walker = Walker { m, k, n: n as f64, pos: &pos, blk: &blk, rows: &rows };
    let parts: Vec<(Vec<f64>, Vec<f64>)> = (0..m)
        .into_par_iter()
        .map(|t1| {
            let mut acc = (vec![0.0; max_degree(m) + 1], vec![0.0; max_degree(m) + 1]);
            let partial: Vec<f64> = rows.iter().map(|(z, _)| pos.value(t1, z[0] as usize)).collect();
            walker.descend(1, t1, &partial, &mut acc);
            acc
        })
        .collect();
    let mut pure = vec![0.0; max_degree(m)];
    let mut mixed = vec![0.0; max_degree(m)];
    for (p, b) in parts {
        for l in 1..=max_degree(m) {
            pure[l - 1] += p[l];
            mixed[l - 1] += b[l];
        }
    }
    Ok(WordLengthPattern { pure, mixed: (blocked || k > 1).then_some(mixed) })
}

struct Walker<'a> {
    m: usize,
    k: usize,
    n: f64,
    pos: &'a ContrastTable,
    blk: &'a ContrastTable,
    rows: &'a [(&'a [u8], usize)],
}

impl Walker<'_> {
    fn descend(&self, depth: usize, degree: usize, partial: &[f64], acc: &mut (Vec<f64>, Vec<f64>)) {
        if depth == self.m {
            self.leaf(degree, partial, acc);
            return;
        }
        let mut next = vec![0.0; partial.len()];
        for u in 0..self.m {
            for ((slot, p), (z, _)) in next.iter_mut().zip(partial).zip(self.rows) {
                *slot = p * self.pos.value(u, z[depth] as usize);
            }
            self.descend(depth + 1, degree + u, &next, acc);
        }
    }

    fn leaf(&self, degree: usize, partial: &[f64], acc: &mut (Vec<f64>, Vec<f64>)) {
        if degree == 0 {
            return;
        }
        for s in 0..self.k {
            let sum: f64 = partial.iter().zip(self.rows).map(|(p, (_, b))| p * self.blk.value(s, *b)).sum();
            // a_t'/a_0' = sum / n
            let ratio = sum / self.n;
            if ratio.abs() > 1e-9 {
                let target = if s == 0 { &mut acc.0 } else { &mut acc.1 };
                target[degree] += ratio * ratio;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn load(name: &str) -> AnyDesign {
        fixtures::load(name).unwrap().design
    }

    fn close(got: &[f64], want: &[f64], tol: f64) -> bool {
        got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() < tol)
    }

    #[test]
    fn unblocked_three_component() {
        let w = wlp_any(&load("d1")).unwrap();
        assert!(!w.is_blocked());
        assert!(close(w.pure(), &[0.0, 0.75, 0.0, 2.25, 0.0, 0.5], 1e-9));
        let w2 = wlp_any(&load("d2")).unwrap();
        assert_eq!(w.compare(&w2).unwrap(), Ordering::Less);
    }

    #[test]
    fn blocked_three_component() {
        let w1 = wlp_any(&load("d1_blocked")).unwrap();
        let w2 = wlp_any(&load("d2_blocked")).unwrap();
        let want = [0.0, 0.0, 0.75, 0.0, 0.0, 4.5, 2.25, 0.0, 0.0, 0.0, 0.5, 0.0];
        assert!(close(&w2.interleaved(), &want, 1e-9));
        assert_eq!(compare(&w2, &w1).unwrap(), Ordering::Less);
        assert_eq!(compare(&w1, &w1).unwrap(), Ordering::Equal);
    }

    #[test]
    fn table_four_design() {
        let w = wlp_any(&load("tb20")).unwrap();
        assert!((w.p(2) - 0.625).abs() < 5e-4);
        assert!((w.p(4) - 1.527).abs() < 5e-4);
        assert!((w.b(4) - 0.476).abs() < 5e-4);
        for l in 1..=3 {
            assert!(w.b(l).abs() < 1e-12);
        }
    }

    #[test]
    fn full_design_reference() {
        let w = wlp_of_full_design(5, 3).unwrap();
        assert!((w.p(2) - 0.625).abs() < 5e-4);
        assert!((w.p(4) - 1.408).abs() < 5e-4);
        assert!(w.mixed().unwrap().iter().all(|&x| x == 0.0));
        let w2 = wlp_of_full_design(5, 2).unwrap();
        assert_eq!(w.pure(), w2.pure());
        let w3 = wlp_of_full_design(3, 2).unwrap();
        assert!(close(w3.pure(), wlp_any(&load("d1")).unwrap().pure(), 1e-12));
    }

    #[test]
    fn full_blocked_design_has_no_mixed_words() {
        let w = wlp(&BlockOofaDesign::full(4, 3)).unwrap();
        assert!(w.mixed().unwrap().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn streaming_agrees_with_dense() {
        for name in ["d1_blocked", "tb12", "tb27"] {
            let d = load(name).to_blocked();
            let dense = wlp(&d).unwrap();
            let stream = wlp_streaming(&d, true).unwrap();
            assert!(close(&dense.interleaved(), &stream.interleaved(), 1e-10), "{name}");
        }
    }

    #[test]
    fn row_order_within_blocks_is_irrelevant() {
        let d = load("tb15").to_blocked();
        let mut rows: Vec<(Vec<u8>, usize)> = d.runs().map(|(z, b)| (z.to_vec(), b)).collect();
        rows.reverse();
        let shuffled = BlockOofaDesign::new(5, 3, &rows).unwrap();
        assert!(close(&wlp(&d).unwrap().interleaved(), &wlp(&shuffled).unwrap().interleaved(), 1e-10));
    }

    #[test]
    fn shape_mismatch() {
        let a = wlp_any(&load("d1")).unwrap();
        let b = wlp_any(&load("d1_blocked")).unwrap();
        assert!(matches!(compare(&a, &b), Err(Error::ShapeMismatch)));
    }

    #[test]
    fn empty_design() {
        let d = BlockOofaDesign::new(3, 2, &[]).unwrap();
        assert!(matches!(wlp(&d), Err(Error::EmptyDesign)));
    }
}

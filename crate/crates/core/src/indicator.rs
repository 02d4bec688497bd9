//! Indicator-function spectra of (blocked) OofA designs.
//!
//! For a point `z' = (z_1..z_m, b)` and index `t' = (t_1..t_m, s)` the basis
//! function is `X_t'(z') = p_{t_1}(z_1)···p_{t_m}(z_m)·c_s(b)`. A design's
//! coefficients are `a_t' = Σ_{rows} X_t'(z') / (k·m^m)`, and
//! `F(z') = Σ a_t' X_t'(z')` returns the replicate count of `z'`.
//!
//! Coefficients are stored densely, one slab of `m^m` values per block
//! contrast `s`. Within a slab, `t` is read as a base-`m` number with `t_1`
//! most significant.

use serde::Serialize;

use crate::contrasts::{block_contrast_table, contrast_table, ContrastTable};
use crate::design::{BlockOofaDesign, OofaDesign};
use crate::error::{Error, Result};
use crate::latin::is_permutation;

/// Largest `m` for which the dense spectrum is materialized.
pub const DENSE_MAX_M: usize = 7;

#[derive(Debug, Clone)]
pub struct IndicatorSpectrum {
    m: usize,
    k: usize,
    n_runs: usize,
    pos: ContrastTable,
    blk: ContrastTable,
    coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Word {
    pub t: Vec<usize>,
    pub s: usize,
    pub coefficient: f64,
    /// `(a_t' / a_0')²`
    pub ratio_sq: f64,
}

pub(crate) fn tables(m: usize, k: usize) -> Result<(ContrastTable, ContrastTable)> {
    let pos = contrast_table(m)?;
    let blk = if k == 1 { ContrastTable::trivial() } else { block_contrast_table(k)? };
    Ok((pos, blk))
}

/// `X_t(z)` for every `t` in slab order.
pub(crate) fn position_vector(pos: &ContrastTable, z: &[u8]) -> Vec<f64> {
    let m = pos.size();
    let mut v = vec![1.0];
    for &level in z {
        let col = pos.column(level as usize);
        let mut next = Vec::with_capacity(v.len() * m);
        for &x in &v {
            next.extend(col.iter().map(|c| x * c));
        }
        v = next;
    }
    v
}

/// Total polynomial degree `t_1 + ... + t_m` for every slab index.
pub(crate) fn degree_table(m: usize) -> Vec<u16> {
    let mut deg: Vec<u16> = vec![0];
    for _ in 0..m {
        let mut next = Vec::with_capacity(deg.len() * m);
        for &d in &deg {
            next.extend((0..m as u16).map(|u| d + u));
        }
        deg = next;
    }
    deg
}

fn check_point(m: usize, k: usize, z: &[u8], b: usize) -> Result<()> {
    if z.len() != m || !is_permutation(z.iter().copied(), m) {
        return Err(Error::InvalidPoint(format!("{z:?} is not a permutation of 1..={m}")));
    }
    if b == 0 || b > k {
        return Err(Error::InvalidPoint(format!("block label {b} outside 1..={k}")));
    }
    Ok(())
}

impl IndicatorSpectrum {
    /// Zero spectrum for an empty design.
    pub fn empty(m: usize, k: usize) -> Result<Self> {
        if m > DENSE_MAX_M {
            return Err(Error::SizeLimit(m));
        }
        let (pos, blk) = tables(m, k)?;
        Ok(Self { m, k, n_runs: 0, pos, blk, coeffs: vec![0.0; m.pow(m as u32) * k] })
    }

    pub fn of_design(design: &BlockOofaDesign) -> Result<Self> {
        let mut spec = Self::empty(design.m(), design.k())?;
        for (z, b) in design.runs() {
            spec.add_row(z, b, 1.0)?;
        }
        Ok(spec)
    }

    pub fn of_unblocked(design: &OofaDesign) -> Result<Self> {
        Self::of_design(&design.as_blocked())
    }

    /// Builds a spectrum from per-block sums `S_b(t) = Σ_{rows in b} X_t(z)`.
    pub(crate) fn from_block_sums(m: usize, k: usize, n_runs: usize, sums: &[Vec<f64>]) -> Result<Self> {
        let mut spec = Self::empty(m, k)?;
        spec.n_runs = n_runs;
        let size = spec.slab_len();
        let scale = 1.0 / (k * size) as f64;
        for s in 0..k {
            let slab = &mut spec.coeffs[s * size..(s + 1) * size];
            for (b, sb) in sums.iter().enumerate() {
                let c = spec.blk.value(s, b + 1) * scale;
                for (a, x) in slab.iter_mut().zip(sb) {
                    *a += c * x;
                }
            }
        }
        Ok(spec)
    }

    fn add_row(&mut self, z: &[u8], b: usize, sign: f64) -> Result<()> {
        check_point(self.m, self.k, z, b)?;
        let v = position_vector(&self.pos, z);
        let size = v.len();
        let scale = sign / (self.k * size) as f64;
        for s in 0..self.k {
            let c = self.blk.value(s, b) * scale;
            for (a, x) in self.coeffs[s * size..(s + 1) * size].iter_mut().zip(&v) {
                *a += c * x;
            }
        }
        self.n_runs = (self.n_runs as isize + sign as isize) as usize;
        Ok(())
    }

    /// Updates the spectrum in place for removed and added rows.
    pub fn apply_delta(&mut self, removed: &[(Vec<u8>, usize)], added: &[(Vec<u8>, usize)]) -> Result<()> {
        for (z, b) in removed {
            self.add_row(z, *b, -1.0)?;
        }
        for (z, b) in added {
            self.add_row(z, *b, 1.0)?;
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_runs(&self) -> usize {
        self.n_runs
    }

    pub(crate) fn slab_len(&self) -> usize {
        self.coeffs.len() / self.k
    }

    pub fn a0(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient slab for block contrast `s`.
    pub fn slab(&self, s: usize) -> &[f64] {
        let size = self.slab_len();
        &self.coeffs[s * size..(s + 1) * size]
    }

    pub fn coefficient(&self, t: &[usize], s: usize) -> f64 {
        let idx = t.iter().fold(0, |acc, &d| acc * self.m + d);
        self.slab(s)[idx]
    }

    /// `X_t'(z')` for one basis function.
    pub fn single_term(&self, z: &[u8], b: usize, t: &[usize], s: usize) -> Result<f64> {
        check_point(self.m, self.k, z, b)?;
        let mut x = self.blk.value(s, b);
        for (&level, &deg) in z.iter().zip(t) {
            x *= self.pos.value(deg, level as usize);
        }
        Ok(x)
    }

    /// `F(z')`; equals the number of times `z'` occurs in the design.
    pub fn evaluate(&self, z: &[u8], b: usize) -> Result<f64> {
        check_point(self.m, self.k, z, b)?;
        let v = position_vector(&self.pos, z);
        Ok((0..self.k)
            .map(|s| {
                let c = self.blk.value(s, b);
                self.slab(s).iter().zip(&v).map(|(a, x)| a * x).sum::<f64>() * c
            })
            .sum())
    }

    /// Every coefficient with `|a| > 1e-9·|a_0|`, in index order.
    pub fn words(&self) -> Vec<Word> {
        let a0 = self.a0();
        let tol = 1e-9 * a0.abs();
        let size = self.slab_len();
        let mut out = Vec::new();
        for s in 0..self.k {
            for (idx, &a) in self.slab(s).iter().enumerate() {
                if a.abs() > tol {
                    out.push(Word {
                        t: digits(idx, self.m, size),
                        s,
                        coefficient: a,
                        ratio_sq: if a0 == 0.0 { f64::NAN } else { (a / a0).powi(2) },
                    });
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &IndicatorSpectrum) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

fn digits(mut idx: usize, m: usize, size: usize) -> Vec<usize> {
    let n = (size as f64).log(m as f64).round() as usize;
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    t
}

/// Spectrum of the edited design, leaving `spec` untouched.
pub fn delta_spectrum(
    spec: &IndicatorSpectrum,
    removed: &[(Vec<u8>, usize)],
    added: &[(Vec<u8>, usize)],
) -> Result<IndicatorSpectrum> {
    let mut out = spec.clone();
    out.apply_delta(removed, added)?;
    Ok(out)
}

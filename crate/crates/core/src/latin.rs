//! Candidate Latin squares and component orthogonal arrays.
//!
//! The base squares `L_1..L_{m-1}` come from GF(m): cell `(i, j)` of `L_r`
//! is `α_i + α_r·α_j`. The full candidate list repeats the base group once
//! for every permutation of columns `3..m` (lexicographic order, identity
//! first), giving `(m-1)!` squares. Consecutive groups of `m-1` squares stack
//! into the `(m-2)!` component orthogonal arrays.
//!
//! Levels are stored 1-based to match design rows.

use crate::error::{Error, Result};
use crate::galois::GaloisField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    m: usize,
    /// 1-based position in the ordered candidate list.
    index: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Row `i` (0-based) as a slice of levels in `1..=m`.
    pub fn row(&self, i: usize) -> &[u8] {
        &self.cells[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.cells.chunks(self.m)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.m + j]
    }

    pub fn is_latin(&self) -> bool {
        let m = self.m;
        (0..m).all(|i| is_permutation((0..m).map(|j| self.get(i, j)), m))
            && (0..m).all(|j| is_permutation((0..m).map(|i| self.get(i, j)), m))
    }

    /// Two squares are orthogonal when superimposing them yields every
    /// ordered pair of levels exactly once.
    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        let m = self.m;
        if other.m != m {
            return false;
        }
        let mut seen = vec![false; m * m];
        for (a, b) in self.cells.iter().zip(&other.cells) {
            let slot = (*a as usize - 1) * m + (*b as usize - 1);
            if seen[slot] {
                return false;
            }
            seen[slot] = true;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentOrthogonalArray {
    m: usize,
    index: usize,
    rows: Vec<u8>,
}

impl ComponentOrthogonalArray {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len() / self.m
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.rows.chunks(self.m)
    }

    /// Every row is a permutation and every ordered pair of distinct levels
    /// occurs exactly once in every pair of columns.
    pub fn is_coa(&self) -> bool {
        let m = self.m;
        if self.n_rows() != m * (m - 1) || !self.rows().all(|r| is_permutation(r.iter().copied(), m)) {
            return false;
        }
        for c1 in 0..m {
            for c2 in 0..m {
                if c1 == c2 {
                    continue;
                }
                let mut count = vec![0usize; m * m];
                for r in self.rows() {
                    count[(r[c1] as usize - 1) * m + (r[c2] as usize - 1)] += 1;
                }
                for a in 0..m {
                    for b in 0..m {
                        let expect = usize::from(a != b);
                        if count[a * m + b] != expect {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

pub(crate) fn is_permutation(levels: impl Iterator<Item = u8>, m: usize) -> bool {
    let mut seen = vec![false; m];
    let mut count = 0;
    for z in levels {
        let z = z as usize;
        if z == 0 || z > m || seen[z - 1] {
            return false;
        }
        seen[z - 1] = true;
        count += 1;
    }
    count == m
}

/// The `m-1` mutually orthogonal squares `L_1..L_{m-1}` built from the field.
pub fn base_mols(field: &GaloisField) -> Result<Vec<LatinSquare>> {
    let m = field.order();
    if m <= 3 {
        return Err(Error::OrderTooSmall(m));
    }
    Ok((1..m)
        .map(|r| {
            let mut cells = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    cells.push((field.add(i, field.mul(r, j)) + 1) as u8);
                }
            }
            LatinSquare { m, index: r, cells }
        })
        .collect())
}

/// All `(m-1)!` candidate squares in order; entry `(g-1)(m-1)+f` is base
/// square `f` under the `g`-th column permutation.
pub fn full_ls_set(field: &GaloisField) -> Result<Vec<LatinSquare>> {
    let base = base_mols(field)?;
    let m = field.order();
    let mut out = Vec::new();
    let mut tail: Vec<usize> = (2..m).collect();
    loop {
        let order: Vec<usize> = [0, 1].into_iter().chain(tail.iter().copied()).collect();
        for sq in &base {
            let mut cells = Vec::with_capacity(m * m);
            for i in 0..m {
                cells.extend(order.iter().map(|&c| sq.get(i, c)));
            }
            out.push(LatinSquare { m, index: out.len() + 1, cells });
        }
        if !next_permutation(&mut tail) {
            break;
        }
    }
    Ok(out)
}

/// Stacks consecutive groups of `m-1` squares into COAs `C_1..C_{(m-2)!}`.
pub fn coa_set(ls_set: &[LatinSquare]) -> Vec<ComponentOrthogonalArray> {
    let Some(first) = ls_set.first() else {
        return Vec::new();
    };
    let m = first.m;
    ls_set
        .chunks(m - 1)
        .enumerate()
        .map(|(g, group)| ComponentOrthogonalArray {
            m,
            index: g + 1,
            rows: group.iter().flat_map(|sq| sq.cells.iter().copied()).collect(),
        })
        .collect()
}

/// Candidate squares and COAs for one order `m`.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub squares: Vec<LatinSquare>,
    pub coas: Vec<ComponentOrthogonalArray>,
}

impl CandidateSet {
    pub fn new(m: usize) -> Result<Self> {
        let field = GaloisField::new(m)?;
        let squares = full_ls_set(&field)?;
        let coas = coa_set(&squares);
        Ok(Self { squares, coas })
    }

    /// 1-based lookup, matching `L_i`.
    pub fn square(&self, index: usize) -> &LatinSquare {
        &self.squares[index - 1]
    }

    pub fn coa(&self, index: usize) -> &ComponentOrthogonalArray {
        &self.coas[index - 1]
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn set(m: usize) -> CandidateSet {
        CandidateSet::new(m).unwrap()
    }

    #[test]
    fn base_squares_for_m5() {
        let c = set(5);
        assert_eq!(c.square(1).row(0), &[1, 2, 3, 4, 5]);
        assert_eq!(c.square(1).row(1), &[2, 3, 4, 5, 1]);
        assert_eq!(c.square(2).row(0), &[1, 3, 5, 2, 4]);
        assert!(c.square(1).is_orthogonal_to(c.square(2)));
    }

    #[test]
    fn permuted_groups_for_m5() {
        let c = set(5);
        assert_eq!(c.squares.len(), 24);
        assert_eq!(c.square(5).row(0), &[1, 2, 3, 5, 4]);
        assert_eq!(c.square(9).row(0), &[1, 2, 4, 3, 5]);
        let distinct: HashSet<_> = c.squares.iter().map(|s| s.cells.clone()).collect();
        assert_eq!(distinct.len(), 24);
    }

    #[test]
    fn every_square_is_latin_and_groups_are_mols() {
        for m in [4, 5, 7, 8] {
            let c = set(m);
            assert!(c.squares.iter().all(LatinSquare::is_latin));
            for group in c.squares.chunks(m - 1) {
                for (a, sa) in group.iter().enumerate() {
                    for sb in &group[a + 1..] {
                        assert!(sa.is_orthogonal_to(sb));
                    }
                }
            }
        }
    }

    #[test]
    fn coas_cover_the_full_design() {
        for m in [4, 5, 7] {
            let c = set(m);
            let factorial: usize = (1..=m).product();
            assert_eq!(c.coas.len(), factorial / (m * (m - 1)));
            assert!(c.coas.iter().all(ComponentOrthogonalArray::is_coa));
            let rows: HashSet<Vec<u8>> = c.coas.iter().flat_map(|g| g.rows().map(<[u8]>::to_vec)).collect();
            assert_eq!(rows.len(), factorial);
        }
    }

    #[test]
    fn coa_stacks_consecutive_squares() {
        let c = set(5);
        let c6: Vec<u8> = c.coa(6).rows().flatten().copied().collect();
        let stacked: Vec<u8> = (21..=24).flat_map(|i| c.square(i).cells.clone()).collect();
        assert_eq!(c6, stacked);
    }

    #[test]
    fn small_orders_rejected() {
        let f = GaloisField::new(3).unwrap();
        assert!(matches!(base_mols(&f), Err(Error::OrderTooSmall(3))));
    }

    #[test]
    fn lexicographic_permutations() {
        let mut v = vec![2, 3, 4];
        let mut all = vec![v.clone()];
        while next_permutation(&mut v) {
            all.push(v.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![2, 4, 3]);
        assert_eq!(all[5], vec![4, 3, 2]);
    }
}

//! Dense GF(2) matrices packed into 64-bit words.

use super::TannerGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    /// The m x n parity-check matrix of `g` (rows are checks).
    pub fn parity_check(g: &TannerGraph) -> Self {
        let mut h = BitMatrix::zeros(g.num_checks(), g.num_variables());
        for (v, c) in g.edges() {
            h.set(c, v, true);
        }
        h
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if bit {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        for k in 0..self.words {
            let s = self.data[src * self.words + k];
            self.data[dst * self.words + k] ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// `self * x^T` for a bit vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        let mut packed = vec![0u64; self.words];
        for (i, &b) in x.iter().enumerate() {
            if b & 1 == 1 {
                packed[i / 64] |= 1 << (i % 64);
            }
        }
        (0..self.rows)
            .map(|r| {
                let ones: u32 = self.row(r).iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
                (ones & 1) as u8
            })
            .collect()
    }
}

/// Rank of the parity-check matrix of `g` over GF(2).
pub fn gf2_rank(g: &TannerGraph) -> usize {
    BitMatrix::parity_check(g).rank()
}

/// A basis of the null space of the parity-check matrix: the codewords.
pub fn nullspace_basis(g: &TannerGraph) -> Vec<Vec<u8>> {
    let mut h = BitMatrix::parity_check(g);
    let pivots = h.rref();
    let n = g.num_variables();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![0u8; n];
            x[f] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                if h.get(r, f) {
                    x[p] = 1;
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let g = TannerGraph::from_edges(5, 5, (0..5).map(|i| (i, i))).unwrap();
        assert_eq!(gf2_rank(&g), 5);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let g = TannerGraph::from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        let basis = nullspace_basis(&g);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![1, 1, 1]);
        for x in &basis {
            assert!(g.syndrome(x).unwrap().iter().all(|&b| b == 0));
        }
    }
}

//! Dense Boolean matrices packed into 64-bit words, one bitset per row.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolMat {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BoolMat {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = BoolMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set positions in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| {
            self.row(r).iter().enumerate().flat_map(move |(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((r, wi * 64 + b))
                })
            })
        })
    }

    /// Boolean product: `(self · other)[r][c] = ∃k self[r][k] ∧ other[k][c]`.
    pub fn mul(&self, other: &BoolMat) -> BoolMat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = BoolMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let dst = r * out.words;
            for (wi, &w) in self.row(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (d, s) in out.bits[dst..dst + out.words].iter_mut().zip(other.row(k)) {
                        *d |= s;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BoolMat {
        let mut out = BoolMat::zeros(self.cols, self.rows);
        for (r, c) in self.ones() {
            out.set(c, r, true);
        }
        out
    }

    /// Kronecker product with left-factor-major indexing.
    pub fn kron(&self, other: &BoolMat) -> BoolMat {
        let mut out = BoolMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r1, c1) in self.ones() {
            for (r2, c2) in other.ones() {
                out.set(r1 * other.rows + r2, c1 * other.cols + c2, true);
            }
        }
        out
    }

    pub fn or(&self, other: &BoolMat) -> BoolMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes differ");
        let mut out = self.clone();
        for (d, s) in out.bits.iter_mut().zip(&other.bits) {
            *d |= s;
        }
        out
    }

    pub fn and(&self, other: &BoolMat) -> BoolMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes differ");
        let mut out = self.clone();
        for (d, s) in out.bits.iter_mut().zip(&other.bits) {
            *d &= s;
        }
        out
    }

    /// Block-diagonal sum, `self` in the upper-left block.
    pub fn direct_sum(&self, other: &BoolMat) -> BoolMat {
        let mut out = BoolMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for (r, c) in self.ones() {
            out.set(r, c, true);
        }
        for (r, c) in other.ones() {
            out.set(self.rows + r, self.cols + c, true);
        }
        out
    }

    /// Matrix whose bit at row-major position `p` is bit `p` of `code`.
    pub fn from_code(rows: usize, cols: usize, code: u64) -> BoolMat {
        assert!(rows * cols <= 64, "code only addresses 64 entries");
        BoolMat::from_fn(rows, cols, |r, c| code >> (r * cols + c) & 1 == 1)
    }
}

impl fmt::Debug for BoolMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(";")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

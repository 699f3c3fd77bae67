//! Small numeric and bitset helpers shared across modules.

/// Compensated (Neumaier) summation. The entropy checks run at 1e-12
/// tolerances over up to millions of terms, which plain summation does not
/// reliably meet.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// x * ln x with the 0 ln 0 = 0 convention.
pub fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Fixed-capacity bitset over u64 blocks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bits {
    blocks: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn is_superset(&self, other: &Bits) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & b == *b)
    }

    /// Index of the first bit present in `self` but missing from `cover`.
    pub fn first_uncovered(&self, cover: &Bits) -> Option<usize> {
        for (i, (a, b)) in self.blocks.iter().zip(&cover.blocks).enumerate() {
            let diff = a & !b;
            if diff != 0 {
                return Some(i * 64 + diff.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_is_exact_on_dyadics() {
        let n = 1 << 16;
        let total = neumaier_sum((0..n).map(|_| 1.0 / n as f64));
        assert_eq!(total, 1.0);
    }

    #[test]
    fn bits_cover_queries() {
        let mut a = Bits::new(130);
        a.set(0);
        a.set(129);
        let mut b = Bits::new(130);
        b.set(0);
        assert!(a.is_superset(&b));
        assert_eq!(a.first_uncovered(&b), Some(129));
        b.set(129);
        assert_eq!(a.first_uncovered(&b), None);
        assert_eq!(a.count(), 2);
    }
}

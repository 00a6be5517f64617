//! Fixed-width bitset over Z_N with the cyclic operations the set algebra
//! needs: rotation, intersection count, union, support extraction.

/// Bitset over {0, 1, ..., n-1}, packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    n: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_sorted(n: usize, elems: &[usize]) -> Self {
        let mut b = BitSet::new(n);
        for &x in elems {
            b.insert(x);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < self.n);
        self.words[x >> 6] |= 1u64 << (x & 63);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        debug_assert!(x < self.n);
        self.words[x >> 6] &= !(1u64 << (x & 63));
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x < self.n);
        self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions set in both `self` and `other`.
    pub fn intersection_count(&self, other: &BitSet) -> usize {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Cyclic rotation: position x of the result is set iff position
    /// (x - s) mod n is set in the input, i.e. the set is translated by +s.
    pub fn rotate(&self, s: usize) -> BitSet {
        let s = s % self.n.max(1);
        let mut out = BitSet::new(self.n);
        for x in self.iter() {
            let y = x + s;
            out.insert(if y >= self.n { y - self.n } else { y });
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi << 6) | b)
                }
            })
        })
    }

    pub fn to_sorted_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

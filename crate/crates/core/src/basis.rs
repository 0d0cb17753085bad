//! Strictly increasing multi-indices `I = {i1 < ... < ik}` naming basis forms `dx_I`.

use std::fmt;

/// Bitmask of 0-based variable indices; bit `i` set means `dx_{i+1}` is present.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex(u32);

pub const MAX_VARS: usize = 32;

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn single(i: usize) -> Self {
        assert!(i < MAX_VARS);
        MultiIndex(1 << i)
    }

    pub fn from_bits(bits: u32) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Build from arbitrary indices; `None` if an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for &i in indices {
            let b = 1u32 << i;
            if bits & b != 0 {
                return None;
            }
            bits |= b;
        }
        Some(MultiIndex(bits))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..MAX_VARS).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn without(self, i: usize) -> Self {
        MultiIndex(self.0 & !(1 << i))
    }

    /// `dx_I ∧ dx_J = sign · dx_{I∪J}`, or `None` when `I ∩ J ≠ ∅`.
    pub fn wedge(self, other: MultiIndex) -> Option<(i32, MultiIndex)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // inversions: pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        for j in other.indices() {
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, MultiIndex(self.0 | other.0)))
    }

    /// Position of `i` inside the increasing list of indices.
    pub fn position(self, i: usize) -> Option<usize> {
        if !self.contains(i) {
            return None;
        }
        Some((self.0 & ((1u32 << i) - 1)).count_ones() as usize)
    }

    /// All index sets of size `k` drawn from `0..n`, ascending.
    pub fn all_of_degree(n: usize, k: usize) -> Vec<MultiIndex> {
        assert!(n <= MAX_VARS);
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let limit: u64 = 1u64 << n;
        for bits in 0..limit {
            if (bits as u32).count_ones() as usize == k {
                out.push(MultiIndex(bits as u32));
            }
        }
        out
    }

    /// Write as `dx1^dx3` (or `1` for the empty set) with the given prefix.
    pub fn display_with(self, prefix: &str) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        self.indices()
            .map(|i| format!("d{prefix}{}", i + 1))
            .collect::<Vec<_>>()
            .join("^")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_signs() {
        let d1 = MultiIndex::single(0);
        let d2 = MultiIndex::single(1);
        assert_eq!(d1.wedge(d2), Some((1, MultiIndex::from_bits(0b11))));
        assert_eq!(d2.wedge(d1), Some((-1, MultiIndex::from_bits(0b11))));
        assert_eq!(d1.wedge(d1), None);
        let d13 = MultiIndex::from_indices(&[0, 2]).unwrap();
        // dx2 ^ (dx1^dx3) = - dx1^dx2^dx3
        assert_eq!(d2.wedge(d13).unwrap().0, -1);
        assert_eq!(d13.wedge(d2).unwrap().0, -1);
    }

    #[test]
    fn enumeration_and_position() {
        assert_eq!(MultiIndex::all_of_degree(4, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_degree(2, 3).len(), 0);
        let i = MultiIndex::from_indices(&[1, 3, 4]).unwrap();
        assert_eq!(i.position(3), Some(1));
        assert_eq!(i.position(0), None);
        assert_eq!(i.to_string(), "dx2^dx4^dx5");
    }
}

use std::fmt;

/// Position of an element inside its algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u8);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Elem {
        debug_assert!(i < 64);
        Elem(i as u8)
    }
}

/// A subset of the elements of an algebra, as a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(pub(crate) u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> ElemSet {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The first `n` elements.
    pub fn full(n: usize) -> ElemSet {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: Elem) -> ElemSet {
        ElemSet(1u64 << e.0)
    }

    pub fn contains(self, e: Elem) -> bool {
        self.0 & (1u64 << e.0) != 0
    }

    pub fn insert(&mut self, e: Elem) {
        self.0 |= 1u64 << e.0;
    }

    pub fn remove(&mut self, e: Elem) {
        self.0 &= !(1u64 << e.0);
    }

    pub fn with(self, e: Elem) -> ElemSet {
        ElemSet(self.0 | (1u64 << e.0))
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> ElemSetIter {
        ElemSetIter(self.0)
    }

    /// All subsets of `self`, in increasing bit order of the mask.
    pub fn subsets(self) -> impl Iterator<Item = ElemSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(ElemSet(cur))
        })
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for ElemSet {
    type Item = Elem;
    type IntoIter = ElemSetIter;
    fn into_iter(self) -> ElemSetIter {
        self.iter()
    }
}

pub struct ElemSetIter(u64);

impl Iterator for ElemSetIter {
    type Item = Elem;
    fn next(&mut self) -> Option<Elem> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Elem(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_powerset() {
        let s = ElemSet::from_bits(0b1011);
        let subs: Vec<u64> = s.subsets().map(|x| x.bits()).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|&b| b & !0b1011 == 0));
        assert_eq!(ElemSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn iter_in_index_order() {
        let s: ElemSet = [Elem(5), Elem(0), Elem(3)].into_iter().collect();
        let v: Vec<usize> = s.iter().map(Elem::index).collect();
        assert_eq!(v, vec![0, 3, 5]);
    }
}

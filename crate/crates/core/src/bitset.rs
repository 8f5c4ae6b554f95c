use std::fmt;

const WORD: usize = 64;

/// Fixed-capacity set of vertices backed by 64-bit words.
///
/// Collections with at most 64 vertices fit in a single word, which is the
/// representation the solvers read directly via [`VertexSet::word`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(WORD).max(1)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_with(capacity: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for v in items {
            s.insert(v);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.words.len() * WORD
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        self.grow_to(v);
        let (w, b) = (v / WORD, v % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        match self.words.get_mut(w) {
            Some(word) => {
                let was = *word >> b & 1 == 1;
                *word &= !(1 << b);
                was
            }
            None => false,
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / WORD)
            .is_some_and(|w| w >> (v % WORD) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The first word; exact when every member is below 64.
    #[inline]
    pub fn word(&self) -> u64 {
        self.words[0]
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn symmetric_difference_len(&self, other: &VertexSet) -> usize {
        let common = self.words.len().min(other.words.len());
        let mut total: usize = (0..common)
            .map(|i| (self.words[i] ^ other.words[i]).count_ones() as usize)
            .sum();
        for w in self.words.iter().skip(common).chain(other.words.iter().skip(common)) {
            total += w.count_ones() as usize;
        }
        total
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (i, a) in self.words.iter_mut().enumerate() {
            *a &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn grow_to(&mut self, v: usize) {
        let need = v / WORD + 1;
        if need > self.words.len() {
            self.words.resize(need, 0);
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterate the set bits of a single word.
#[inline]
pub fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            return None;
        }
        let b = word.trailing_zeros() as usize;
        word &= word - 1;
        Some(b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_across_words() {
        let mut s = VertexSet::new(10);
        assert!(s.insert(3));
        assert!(s.insert(130));
        assert!(!s.insert(3));
        assert_eq!(s.to_vec(), vec![3, 130]);
        assert_eq!(s.len(), 2);
        assert!(s.remove(130));
        assert!(!s.contains(130));
        assert!(!s.remove(999));
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter_with(70, [0, 1, 2, 65]);
        let b = VertexSet::from_iter_with(70, [1, 2, 3]);
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(a.symmetric_difference_len(&b), 3);
        let mut c = a.clone();
        c.difference_with(&b);
        assert_eq!(c.to_vec(), vec![0, 65]);
        let small = VertexSet::from_iter_with(4, [0]);
        assert_eq!(a.symmetric_difference_len(&small), 3);
    }

    #[test]
    fn word_bits() {
        assert_eq!(bits(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
    }
}

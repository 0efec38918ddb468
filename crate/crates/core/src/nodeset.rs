use std::fmt;

use crate::error::{Error, Result};

/// Subset of the nodes `0..n` of a graph, stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    n: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(n: usize, i: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, nodes: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for i in nodes {
            if i >= n {
                return Err(Error::InvalidSet(format!("node {i} out of range for n={n}")));
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// From a 64-bit mask; bits at or above `n` are rejected.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n < 64 && mask >> n != 0 {
            return Err(Error::InvalidSet(format!("mask {mask:#x} has bits beyond n={n}")));
        }
        let mut s = Self::empty(n);
        if let Some(w) = s.words.first_mut() {
            *w = mask;
        }
        Ok(s)
    }

    /// The set as a single word, when the universe fits in 64 nodes.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Size of the universe.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "node {i} out of range for n={}", self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.n {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                (bits != 0).then(|| {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    wi * 64 + b
                })
            })
        })
    }

    pub fn complement(&self) -> NodeSet {
        let mut c = Self::empty(self.n);
        for i in 0..self.n {
            if !self.contains(i) {
                c.insert(i);
            }
        }
        c
    }

    /// Members joined by `;`, e.g. `0;1;6`.
    pub fn to_list_string(&self) -> String {
        self.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

//! Permutations of {0..n-1} and iteration over symmetric groups.

use std::fmt;

/// A permutation stored as the image list: `i ↦ images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image list. Returns `None` if the list
    /// is not a bijection of {0..n-1}.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Composition `self * other`: apply `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Sign via inversion count.
    pub fn sign(&self) -> i32 {
        let mut inv = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inv += 1;
                }
            }
        }
        if inv.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm{:?}", self.images)
    }
}

/// All permutations of {0..n-1} in lexicographic order of image lists.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation {
            images: current.clone(),
        });
        if !next_lex(&mut current) {
            break;
        }
    }
    out
}

/// Permutations of {0..n-1} moving only the positions in `support`.
pub fn symmetric_group_on(n: usize, support: &[usize]) -> Vec<Permutation> {
    let k = support.len();
    symmetric_group(k)
        .into_iter()
        .map(|p| {
            let mut images: Vec<usize> = (0..n).collect();
            for (a, &s) in support.iter().enumerate() {
                images[s] = support[p.apply(a)];
            }
            Permutation { images }
        })
        .collect()
}

fn next_lex(v: &mut [usize]) -> bool {
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

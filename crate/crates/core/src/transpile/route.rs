//! Qubit placement and SWAP routing on the static line.

/// Arrangement of logical qubits on line positions: `order()[p]` is the
/// logical qubit at position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Returns `None` unless `image` is a bijection on `0..image.len()`.
    pub fn new(image: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.image
    }

    /// `positions()[q]` is the position holding logical qubit `q`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.image.len()];
        for (p, &q) in self.image.iter().enumerate() {
            pos[q] = p;
        }
        pos
    }

    /// Exchanges the contents of positions `p` and `p + 1`.
    pub fn swap_adjacent(&mut self, p: usize) {
        self.image.swap(p, p + 1);
    }

    /// Number of adjacent transpositions needed to turn `self` into `other`.
    pub fn inversions_to(&self, other: &Permutation) -> usize {
        let keys = relative_keys(self, other);
        let mut count = 0;
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                if keys[i] > keys[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

fn relative_keys(current: &Permutation, desired: &Permutation) -> Vec<usize> {
    let target = desired.positions();
    current.image.iter().map(|&q| target[q]).collect()
}

/// Adjacent position swaps `p <-> p+1` that rearrange `current` into
/// `desired`, produced by bubble sort so that the count equals the
/// inversion number of the relative permutation.
pub fn route_static(current: &Permutation, desired: &Permutation) -> Vec<usize> {
    assert_eq!(current.len(), desired.len(), "orders over different registers");
    let mut keys = relative_keys(current, desired);
    let mut swaps = Vec::new();
    let n = keys.len();
    for pass in 0..n {
        let mut changed = false;
        for p in 0..n.saturating_sub(pass + 1) {
            if keys[p] > keys[p + 1] {
                keys.swap(p, p + 1);
                swaps.push(p);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    swaps
}

/// Line arrangement placing each pair on adjacent positions `(0,1), (2,3), ...`
/// with any unpaired qubit last, choosing among all slot assignments and
/// orientations the one closest (fewest inversions) to `current`.
pub fn pairing_layout(current: &Permutation, pairs: &[[usize; 2]]) -> Permutation {
    let n = current.len();
    assert!(2 * pairs.len() <= n && n <= 2 * pairs.len() + 1, "pairs must cover the register");
    let mut used = vec![false; n];
    for &q in pairs.iter().flatten() {
        assert!(!std::mem::replace(&mut used[q], true), "qubit {q} paired twice");
    }
    let idle: Vec<usize> = (0..n).filter(|&q| !used[q]).collect();

    let mut best: Option<(usize, Permutation)> = None;
    for slots in permutations(pairs.len()) {
        for flips in 0..1usize << pairs.len() {
            let mut image = Vec::with_capacity(n);
            for (k, &s) in slots.iter().enumerate() {
                let [a, b] = pairs[s];
                if flips >> k & 1 == 1 {
                    image.extend([b, a]);
                } else {
                    image.extend([a, b]);
                }
            }
            image.extend(&idle);
            let candidate = Permutation { image };
            let cost = current.inversions_to(&candidate);
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, candidate));
            }
        }
    }
    best.expect("at least one arrangement").1
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).expect("successor");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

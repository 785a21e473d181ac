//! Improved-logistic-weight-order schedules.
//!
//! [`IlwoExactGenerator`] emits every pattern in ascending
//! `(iLW, Hamming weight, lexicographic support)` order by best-first search
//! over a spanning tree of the UPO Hasse diagram. [`ApproxIlwoGenerator`] is
//! the low-complexity state machine limited to three flipped bits.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::pattern::{improved_logistic_weight, ErrorPattern};

type HeapKey = Reverse<(u64, usize, Vec<usize>)>;

fn heap_key(support: Vec<usize>) -> HeapKey {
    Reverse((improved_logistic_weight(&support), support.len(), support))
}

/// Exact iLWO source. Yields the all-zero pattern first.
///
/// Tree: the parent of a pattern moves its last index one step left when that
/// slot is free and drops it otherwise. Children are therefore "move the last
/// index right" and "append last + 1"; both raise iLW, so the heap minimum is
/// always the next pattern overall.
#[derive(Debug, Clone)]
pub struct IlwoExactGenerator {
    n: usize,
    h_max: Option<usize>,
    frontier: BinaryHeap<HeapKey>,
    started: bool,
}

impl IlwoExactGenerator {
    pub fn new(n: usize) -> Self {
        Self::with_h_max(n, None)
    }

    /// Patterns above `h_max` are never generated; their descendants would
    /// all exceed the cap as well.
    pub fn with_h_max(n: usize, h_max: Option<usize>) -> Self {
        Self {
            n,
            h_max,
            frontier: BinaryHeap::new(),
            started: false,
        }
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    fn push(&mut self, support: Vec<usize>) {
        if self.h_max.is_none_or(|h| support.len() <= h) {
            self.frontier.push(heap_key(support));
        }
    }

    fn expand(&mut self, support: &[usize]) {
        match support.last() {
            None => {
                if self.n > 0 {
                    self.push(vec![0]);
                }
            }
            Some(&last) if last + 1 < self.n => {
                let mut moved = support.to_vec();
                *moved.last_mut().unwrap() = last + 1;
                self.push(moved);
                let mut grown = support.to_vec();
                grown.push(last + 1);
                self.push(grown);
            }
            Some(_) => {}
        }
    }
}

impl Iterator for IlwoExactGenerator {
    type Item = ErrorPattern;

    fn next(&mut self) -> Option<ErrorPattern> {
        let support = if !self.started {
            self.started = true;
            Vec::new()
        } else {
            self.frontier.pop()?.0 .2
        };
        self.expand(&support);
        Some(ErrorPattern::from_sorted_unchecked(self.n, support))
    }
}

/// First `q` exact-iLWO patterns with Hamming weight at most `h_max`.
pub fn ilwo_sequence(n: usize, q: usize, h_max: Option<usize>) -> Vec<ErrorPattern> {
    IlwoExactGenerator::with_h_max(n, h_max).take(q).collect()
}

/// Sweep of equal-iLW triples: `(a, b, c) -> (a + 1, b + 1, c - 1)` while the
/// result stays strictly ascending. The seed itself is not included.
pub fn create_remaining_h3(l: usize, m: usize, n: usize) -> Vec<[usize; 3]> {
    let (mut a, mut b, mut c) = (l, m, n);
    let mut out = Vec::new();
    while c > b + 2 {
        a += 1;
        b += 1;
        c -= 1;
        out.push([a, b, c]);
    }
    out
}

/// State of the approximate iLWO machine between weights.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApproxIlwoState {
    /// Next weight to generate.
    pub dw: u64,
    /// Last weight at which triples were created.
    pub h3dw: u64,
    pub l: usize,
    /// Second and third index of the first triple created at `h3dw`.
    pub m: usize,
    pub n: usize,
    pub n_bits: usize,
}

impl ApproxIlwoState {
    pub fn new(n_bits: usize) -> Self {
        Self {
            dw: 1,
            n_bits,
            ..Self::default()
        }
    }

    /// Patterns of iLW `self.dw` (at most three flipped bits), then advances
    /// to the next weight. Patterns touching an index `>= n_bits` are
    /// dropped; the state machine itself is unaffected by the bound.
    pub fn next_weight(&mut self) -> Vec<ErrorPattern> {
        let dw = self.dw;
        assert!(dw >= 1, "weights start at 1");
        let mut raw: Vec<Vec<usize>> = vec![vec![dw as usize - 1]];

        if dw > 4 {
            let mut w = (dw as usize - 1) / 2 - 1;
            let mut k = (dw as usize - 1) % 2;
            if w >= 1 && w > k {
                raw.push(vec![k, w]);
                while w > k + 3 {
                    w -= 1;
                    k += 2;
                    raw.push(vec![k, w]);
                }
            }

            let triple = |l: usize, m: usize, n: usize, raw: &mut Vec<Vec<usize>>| {
                raw.push(vec![l, m, n]);
                raw.extend(create_remaining_h3(l, m, n).into_iter().map(Vec::from));
            };

            if dw == 14 {
                (self.l, self.m, self.n) = (0, 1, 2);
                raw.push(vec![0, 1, 2]);
                self.h3dw = dw;
            } else if dw > 14 {
                let (m_old, n_old) = (self.m, self.n);
                if self.h3dw == dw - 1 {
                    if self.m > 1 {
                        (self.l, self.m, self.n) = (0, self.m - 1, self.n + 1);
                        triple(0, self.m, self.n, &mut raw);
                        self.h3dw = dw;
                    }
                    if m_old + 2 < n_old - 1 {
                        let (m1, n1) = (m_old + 2, n_old - 1);
                        if self.h3dw == dw - 1 {
                            (self.l, self.m, self.n) = (0, m1, n1);
                        }
                        triple(0, m1, n1, &mut raw);
                        self.h3dw = dw;
                    }
                } else if self.h3dw == dw - 2 && self.n > self.m + 1 {
                    (self.l, self.m) = (0, self.m + 1);
                    triple(0, self.m, self.n, &mut raw);
                    self.h3dw = dw;
                } else if self.h3dw == dw - 3 {
                    (self.l, self.m, self.n) = (0, 1, self.n + 1);
                    triple(0, 1, self.n, &mut raw);
                    self.h3dw = dw;
                }
            }
        }

        self.dw += 1;
        let n_bits = self.n_bits;
        raw.into_iter()
            .filter(|s| s.iter().all(|&j| j < n_bits))
            .map(|s| ErrorPattern::from_sorted_unchecked(n_bits, s))
            .collect()
    }
}

/// Batch for a single weight `dw`, replaying the machine from weight 1.
pub fn approx_next_weight(n_bits: usize, dw: u64) -> Vec<ErrorPattern> {
    let mut state = ApproxIlwoState::new(n_bits);
    let mut batch = Vec::new();
    while state.dw <= dw {
        batch = state.next_weight();
    }
    batch
}

/// Largest iLW reachable with at most three flipped bits below `n_bits`.
fn max_h3_weight(n_bits: usize) -> u64 {
    let h = n_bits.min(3);
    improved_logistic_weight(&(n_bits - h..n_bits).collect::<Vec<_>>())
}

/// Approximate iLWO source (h <= 3). Yields the all-zero pattern first.
#[derive(Debug, Clone)]
pub struct ApproxIlwoGenerator {
    state: ApproxIlwoState,
    pending: VecDeque<ErrorPattern>,
    last_weight: u64,
    started: bool,
}

impl ApproxIlwoGenerator {
    pub fn new(n_bits: usize) -> Self {
        Self {
            state: ApproxIlwoState::new(n_bits),
            pending: VecDeque::new(),
            last_weight: max_h3_weight(n_bits),
            started: false,
        }
    }

    pub fn state(&self) -> &ApproxIlwoState {
        &self.state
    }
}

impl Iterator for ApproxIlwoGenerator {
    type Item = ErrorPattern;

    fn next(&mut self) -> Option<ErrorPattern> {
        if !self.started {
            self.started = true;
            return Some(ErrorPattern::zero(self.state.n_bits));
        }
        while self.pending.is_empty() {
            if self.state.dw > self.last_weight {
                return None;
            }
            self.pending.extend(self.state.next_weight());
        }
        self.pending.pop_front()
    }
}

pub fn approx_sequence(n_bits: usize, q: usize) -> Vec<ErrorPattern> {
    ApproxIlwoGenerator::new(n_bits).take(q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{ilwo_cmp, upo_leq};
    use std::collections::{BTreeMap, BTreeSet, HashSet};

    fn supports(seq: &[ErrorPattern]) -> Vec<Vec<usize>> {
        seq.iter().map(|p| p.support().to_vec()).collect()
    }

    fn brute_force(n: usize) -> Vec<ErrorPattern> {
        let mut all: Vec<_> = (0u32..1 << n)
            .map(|m| {
                let s = (0..n).filter(|&j| m >> j & 1 == 1).collect();
                ErrorPattern::new(n, s).unwrap()
            })
            .collect();
        all.sort_by(ilwo_cmp);
        all
    }

    /// All supports with at most three indices below `n`, grouped by iLW.
    fn h3_levels(n: usize, max_w: u64) -> BTreeMap<u64, BTreeSet<Vec<usize>>> {
        let mut levels: BTreeMap<u64, BTreeSet<Vec<usize>>> = BTreeMap::new();
        let mut add = |s: Vec<usize>| {
            let w = improved_logistic_weight(&s);
            if w <= max_w {
                levels.entry(w).or_default().insert(s);
            }
        };
        for a in 0..n {
            add(vec![a]);
            for b in a + 1..n {
                add(vec![a, b]);
                for c in b + 1..n {
                    if improved_logistic_weight(&[a, b, c]) <= max_w {
                        add(vec![a, b, c]);
                    }
                }
            }
        }
        levels
    }

    #[test]
    fn exact_first_emissions() {
        let seq = ilwo_sequence(8, 10, None);
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![4],
            vec![0, 1],
            vec![5],
            vec![6],
            vec![0, 2],
        ];
        assert_eq!(supports(&seq), expected);
        assert_eq!(
            supports(&ilwo_sequence(5, 3, None)),
            vec![vec![], vec![0], vec![1]]
        );
    }

    #[test]
    fn first_triple_at_weight_14() {
        let first = IlwoExactGenerator::new(64)
            .find(|p| p.hamming_weight() == 3)
            .unwrap();
        assert_eq!(first.support(), &[0, 1, 2]);
        assert_eq!(first.improved_logistic_weight(), 14);
    }

    #[test]
    fn exact_matches_brute_force() {
        for n in 0..=12 {
            let seq: Vec<_> = IlwoExactGenerator::new(n).collect();
            assert_eq!(seq, brute_force(n), "n={n}");
        }
        let all = ilwo_sequence(5, 32, None);
        assert_eq!(all.len(), 32);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 32);
    }

    #[test]
    fn exact_with_cap_is_filtered_brute_force() {
        for h in 0..=4 {
            let seq: Vec<_> = IlwoExactGenerator::with_h_max(10, Some(h)).collect();
            let expected: Vec<_> = brute_force(10)
                .into_iter()
                .filter(|p| p.hamming_weight() <= h)
                .collect();
            assert_eq!(seq, expected);
        }
    }

    #[test]
    fn exact_large_n_non_decreasing() {
        let seq = ilwo_sequence(128, 1000, None);
        assert_eq!(seq.len(), 1000);
        assert!(seq.windows(2).all(|w| ilwo_cmp(&w[0], &w[1]).is_lt()));
    }

    #[test]
    fn remaining_h3_examples() {
        assert_eq!(create_remaining_h3(0, 1, 4), vec![[1, 2, 3]]);
        assert!(create_remaining_h3(0, 1, 2).is_empty());
        assert_eq!(create_remaining_h3(0, 1, 6), vec![[1, 2, 5], [2, 3, 4]]);
        for [a, b, c] in create_remaining_h3(0, 3, 40) {
            assert_eq!(
                improved_logistic_weight(&[a, b, c]),
                improved_logistic_weight(&[0, 3, 40])
            );
        }
    }

    #[test]
    fn approx_batches() {
        assert_eq!(supports(&approx_next_weight(128, 5)), vec![vec![4], vec![0, 1]]);
        assert_eq!(
            supports(&approx_next_weight(128, 6)),
            vec![vec![5]],
            "no pair has iLW 6"
        );
        assert_eq!(
            supports(&approx_next_weight(128, 11)),
            vec![vec![10], vec![0, 4], vec![2, 3]]
        );
        assert_eq!(
            supports(&approx_next_weight(128, 14)),
            vec![vec![13], vec![1, 5], vec![3, 4], vec![0, 1, 2]]
        );
        let b20 = approx_next_weight(128, 20);
        let h3: Vec<_> = b20.iter().filter(|p| p.hamming_weight() == 3).cloned().collect();
        assert_eq!(supports(&h3), vec![vec![0, 1, 4], vec![1, 2, 3]]);
    }

    #[test]
    fn approx_state_before_weight_20() {
        let mut s = ApproxIlwoState::new(128);
        while s.dw < 20 {
            s.next_weight();
        }
        assert_eq!((s.h3dw, s.m, s.n), (19, 2, 3));
    }

    #[test]
    fn approx_sequences() {
        assert_eq!(
            supports(&approx_sequence(128, 8)),
            vec![vec![], vec![0], vec![1], vec![2], vec![3], vec![4], vec![0, 1], vec![5]]
        );
        assert_eq!(
            supports(&approx_sequence(4, 6)),
            vec![vec![], vec![0], vec![1], vec![2], vec![3], vec![0, 1]]
        );
        assert_eq!(approx_sequence(128, 1000), approx_sequence(128, 1000));
    }

    #[test]
    fn approx_terminates_for_small_n() {
        for n in 0..=12 {
            let seq: Vec<_> = ApproxIlwoGenerator::new(n).collect();
            assert!(seq.len() <= 1 << n);
            assert_eq!(seq.iter().collect::<HashSet<_>>().len(), seq.len());
        }
    }

    #[test]
    fn approx_weight_invariant() {
        let mut state = ApproxIlwoState::new(128);
        let mut seen = HashSet::new();
        for dw in 1..=1000u64 {
            for p in state.next_weight() {
                assert_eq!(p.improved_logistic_weight(), dw, "{p}");
                assert!(p.hamming_weight() <= 3);
                assert!(seen.insert(p));
            }
        }
    }

    #[test]
    fn approx_is_upo_compliant() {
        for n in 1..=10 {
            let seq: Vec<_> = ApproxIlwoGenerator::new(n).collect();
            for (i, early) in seq.iter().enumerate() {
                for late in &seq[i + 1..] {
                    assert!(!upo_leq(late.support(), early.support()), "{late} before {early}");
                }
            }
        }
    }

    /// h = 2 family of one weight under either reading of the loop guard.
    fn pair_family(dw: u64, literal_guard: bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if dw <= 4 {
            return out;
        }
        let mut w = (dw as usize - 1) / 2 - 1;
        let mut k = (dw as usize - 1) % 2;
        let enter = if literal_guard { k > w } else { w > k };
        if w >= 1 && enter {
            out.push(vec![k, w]);
            while w > k + 3 {
                w -= 1;
                k += 2;
                out.push(vec![k, w]);
            }
        }
        out
    }

    #[test]
    fn pair_guard_readings() {
        let levels = h3_levels(128, 200);
        let exact: usize = levels
            .values()
            .map(|l| l.iter().filter(|s| s.len() == 2).count())
            .sum();
        let covered = |literal: bool| -> usize {
            (1..=200u64)
                .map(|dw| {
                    pair_family(dw, literal)
                        .iter()
                        .filter(|s| s.iter().all(|&j| j < 128))
                        .filter(|s| levels.get(&dw).is_some_and(|l| l.contains(*s)))
                        .count()
                })
                .sum()
        };
        let (as_w_gt_k, as_k_gt_w) = (covered(false), covered(true));
        eprintln!("h=2 coverage up to iLW 200: w>k {as_w_gt_k}/{exact}, k>w {as_k_gt_w}/{exact}");
        assert_eq!(as_w_gt_k, exact);
        assert_eq!(as_k_gt_w, 0);
    }

    #[test]
    fn approx_is_subset_of_exact_levels() {
        let max_w = 300;
        let levels = h3_levels(128, max_w);
        let mut state = ApproxIlwoState::new(128);
        let mut emitted = 0usize;
        for dw in 1..=max_w {
            for p in state.next_weight() {
                assert!(levels[&dw].contains(p.support()));
                emitted += 1;
            }
        }
        let total: usize = levels.values().map(BTreeSet::len).sum();
        eprintln!(
            "approx coverage of exact h<=3 levels up to iLW {max_w}: {emitted}/{total} = {:.3}",
            emitted as f64 / total as f64
        );
    }
}

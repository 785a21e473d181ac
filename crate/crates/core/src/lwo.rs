//! Logistic-weight-order schedule, generated one pattern at a time.
//!
//! Each level of the sequence holds the patterns of one logistic weight, i.e.
//! the partitions of that weight into distinct parts (part `j + 1` for flipped
//! index `j`). Within a level, patterns come out in descending lexicographic
//! order of their parts, starting from the greedy minimum-Hamming-weight
//! decomposition and ending with the greedy-from-below one. Successors are
//! computed from the previous pattern alone.

use crate::error::{GrandError, Result};
use crate::pattern::ErrorPattern;

fn max_weight(n: usize) -> u64 {
    let n = n as u64;
    n * (n + 1) / 2
}

/// Greedy decomposition of `weight` into distinct parts `<= len`, largest
/// part first. Returns the flipped indices in ascending order.
fn greedy_parts(len: usize, weight: u64) -> Option<Vec<usize>> {
    if weight > max_weight(len) {
        return None;
    }
    let mut k = weight;
    let mut support = Vec::new();
    for part in (1..=len as u64).rev() {
        if k == 0 {
            break;
        }
        if part <= k {
            support.push(part as usize - 1);
            k -= part;
        }
    }
    support.reverse();
    (k == 0).then_some(support)
}

/// The pattern of logistic weight `weight` with the fewest flipped bits,
/// built greedily from the largest index down.
pub fn max_integer_partition(n: usize, weight: u64) -> Result<ErrorPattern> {
    greedy_parts(n, weight)
        .map(|s| ErrorPattern::from_sorted_unchecked(n, s))
        .ok_or(GrandError::InfeasibleWeight {
            n,
            weight: weight as usize,
        })
}

/// True iff `e` closes its logistic-weight level.
pub fn is_last(e: &ErrorPattern) -> bool {
    let bits = e.to_bits();
    let mut k = e.logistic_weight() as i64;
    if k == 0 {
        return true;
    }
    for part in (1..=bits.len() as i64).rev() {
        if part * (part - 1) < 2 * k {
            if !bits[part as usize - 1] {
                return false;
            }
            k -= part;
            if k == 0 {
                return true;
            }
        }
    }
    false
}

/// Successor of `e` in the logistic-weight order.
pub fn next_lwo_pattern(e: &ErrorPattern) -> Result<ErrorPattern> {
    let n = e.len_n();
    let lw = e.logistic_weight();
    if is_last(e) {
        return max_integer_partition(n, lw + 1).map_err(|_| GrandError::Exhausted);
    }

    let mut bits = e.to_bits();
    // Every pass clears the pivot bit, so at most n passes.
    for _ in 0..n {
        // Pivot: lowest flipped index excluding the two least reliable slots.
        let pivot = (2..n)
            .find(|&j| bits[j])
            .expect("a pattern that is not last in its level has a movable part");
        let part = pivot as u64 + 1;
        let above: u64 = (pivot + 1..n).filter(|&j| bits[j]).map(|j| j as u64 + 1).sum();
        if part * (part - 1) / 2 + above < lw {
            bits[..=pivot].fill(false);
            continue;
        }
        let low = greedy_parts(pivot, lw - above).expect("feasibility checked above");
        let support = low
            .into_iter()
            .chain((pivot + 1..n).filter(|&j| bits[j]))
            .collect();
        return Ok(ErrorPattern::from_sorted_unchecked(n, support));
    }
    unreachable!("successor search did not terminate within {n} passes");
}

/// Stateful LWO source. Yields the all-zero pattern first.
#[derive(Debug, Clone)]
pub struct LwoGenerator {
    n: usize,
    current: Option<ErrorPattern>,
    emitted: u64,
    done: bool,
}

impl LwoGenerator {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            current: None,
            emitted: 0,
            done: false,
        }
    }

    /// Continue the sequence after `last`, using nothing but that pattern.
    pub fn resume_from(last: ErrorPattern) -> Self {
        Self {
            n: last.len_n(),
            current: Some(last),
            emitted: 0,
            done: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn current(&self) -> Option<&ErrorPattern> {
        self.current.as_ref()
    }

    pub fn emitted_count(&self) -> u64 {
        self.emitted
    }

    pub fn next_pattern(&mut self) -> Result<ErrorPattern> {
        if self.done {
            return Err(GrandError::Exhausted);
        }
        let next = match &self.current {
            None => Ok(ErrorPattern::zero(self.n)),
            Some(e) => next_lwo_pattern(e),
        };
        match next {
            Ok(p) => {
                self.current = Some(p.clone());
                self.emitted += 1;
                Ok(p)
            }
            Err(e) => {
                self.done = true;
                Err(e)
            }
        }
    }
}

impl Iterator for LwoGenerator {
    type Item = ErrorPattern;

    fn next(&mut self) -> Option<ErrorPattern> {
        self.next_pattern().ok()
    }
}

/// First `q` LWO patterns, skipping (not counting) those above `h_max`.
pub fn lwo_sequence(n: usize, q: usize, h_max: Option<usize>) -> Vec<ErrorPattern> {
    LwoGenerator::new(n)
        .filter(|p| h_max.is_none_or(|h| p.hamming_weight() <= h))
        .take(q)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::upo_leq;
    use std::collections::HashSet;

    fn pat(n: usize, s: &[usize]) -> ErrorPattern {
        ErrorPattern::new(n, s.to_vec()).unwrap()
    }

    fn supports(seq: &[ErrorPattern]) -> Vec<Vec<usize>> {
        seq.iter().map(|p| p.support().to_vec()).collect()
    }

    #[test]
    fn max_integer_partition_examples() {
        assert_eq!(max_integer_partition(5, 3).unwrap(), pat(5, &[2]));
        assert_eq!(max_integer_partition(5, 4).unwrap(), pat(5, &[3]));
        assert_eq!(max_integer_partition(5, 0).unwrap(), pat(5, &[]));
        assert_eq!(max_integer_partition(5, 15).unwrap(), pat(5, &[0, 1, 2, 3, 4]));
        assert!(matches!(
            max_integer_partition(5, 16),
            Err(GrandError::InfeasibleWeight { n: 5, weight: 16 })
        ));
    }

    #[test]
    fn is_last_examples() {
        assert!(is_last(&pat(5, &[])));
        assert!(!is_last(&pat(5, &[2])));
        assert!(is_last(&pat(5, &[0, 1])));
        assert!(is_last(&pat(5, &[1, 2])));
        assert!(!is_last(&pat(5, &[4])));
    }

    #[test]
    fn first_patterns_for_n5() {
        let seq = lwo_sequence(5, 10, None);
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![3],
            vec![0, 2],
            vec![4],
            vec![0, 3],
            vec![1, 2],
        ];
        assert_eq!(supports(&seq), expected);
        assert_eq!(next_lwo_pattern(&pat(5, &[0, 1])).unwrap(), pat(5, &[3]));
        assert_eq!(next_lwo_pattern(&pat(5, &[])).unwrap(), pat(5, &[0]));
    }

    #[test]
    fn sequence_with_cap() {
        assert_eq!(
            supports(&lwo_sequence(5, 4, None)),
            vec![vec![], vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            supports(&lwo_sequence(5, 16, Some(1))),
            vec![vec![], vec![0], vec![1], vec![2], vec![3], vec![4]]
        );
        let seq = lwo_sequence(127, 10_000, Some(4));
        assert_eq!(seq.len(), 10_000);
        assert!(seq.iter().all(|p| p.hamming_weight() <= 4));
    }

    #[test]
    fn all_ones_is_terminal() {
        let ones = pat(4, &[0, 1, 2, 3]);
        assert!(matches!(next_lwo_pattern(&ones), Err(GrandError::Exhausted)));
        let mut g = LwoGenerator::resume_from(ones);
        assert!(g.next_pattern().is_err());
        assert!(g.next().is_none());
    }

    #[test]
    fn exhaustive_and_monotone() {
        for n in 1..=12 {
            let mut g = LwoGenerator::new(n);
            let seq: Vec<_> = g.by_ref().collect();
            assert_eq!(seq.len(), 1 << n);
            assert_eq!(g.emitted_count(), 1 << n);
            let uniq: HashSet<_> = seq.iter().collect();
            assert_eq!(uniq.len(), 1 << n);
            assert!(seq
                .windows(2)
                .all(|w| w[0].logistic_weight() <= w[1].logistic_weight()));
        }
    }

    #[test]
    fn memoryless_resume() {
        let n = 9;
        let full: Vec<_> = LwoGenerator::new(n).collect();
        for (i, p) in full.iter().enumerate().step_by(7) {
            let suffix: Vec<_> = LwoGenerator::resume_from(p.clone()).collect();
            assert_eq!(suffix, full[i + 1..]);
        }
    }

    #[test]
    fn never_emits_upo_descendant_first() {
        for n in 1..=10 {
            let seq: Vec<_> = LwoGenerator::new(n).collect();
            for (i, early) in seq.iter().enumerate() {
                for late in &seq[i + 1..] {
                    if late.logistic_weight() <= early.logistic_weight() {
                        assert!(!upo_leq(late.support(), early.support()) || late == early);
                    }
                }
            }
        }
    }
}

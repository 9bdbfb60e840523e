//! Shallowness: the statistic-based decider, the right/left reduction
//! operators, replayable certificates and the constructive generator.
//!
//! A permutation is shallow when `I + T = D`. The recursive characterization
//! works on the right end: removing the maximum `n` (moving the last entry into
//! its slot) preserves shallowness exactly when the moved entry lands as a
//! left-to-right maximum or right-to-left minimum. Running that backwards from
//! every shallow permutation of size `n - 1` produces each shallow permutation
//! of size `n` exactly once.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{reduce, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShallowError {
    #[error("operator needs size at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error("slot {position} is outside 1..={len}")]
    SlotOutOfRange { position: usize, len: usize },
    #[error(
        "illegal slot {position}: value {value} is not a left-to-right maximum \
         (larger value {blocking_max} precedes it) and not a right-to-left minimum \
         (smaller value {blocking_min} follows it)"
    )]
    IllegalSlot { position: usize, value: u32, blocking_max: u32, blocking_min: u32 },
}

pub fn is_shallow(p: &Permutation) -> bool {
    p.inversions() + p.reflection_length() as u64 == p.displacement()
}

/// Upper Diaconis–Graham bound `D = 2I`.
pub fn achieves_upper_bound(p: &Permutation) -> bool {
    p.displacement() == 2 * p.inversions()
}

pub fn r_operator(p: &Permutation) -> Result<Permutation, ShallowError> {
    let n = p.len();
    if n < 2 {
        return Err(ShallowError::SizeTooSmall(n));
    }
    let mut w = p.as_slice().to_vec();
    let last = w.pop().unwrap();
    if last as usize != n {
        let j = w.iter().position(|&v| v as usize == n).unwrap();
        w[j] = last;
    }
    Ok(Permutation::from_vec_unchecked(w))
}

pub fn l_operator(p: &Permutation) -> Result<Permutation, ShallowError> {
    let n = p.len();
    if n < 2 {
        return Err(ShallowError::SizeTooSmall(n));
    }
    let mut w = p.as_slice().to_vec();
    let first = w[0];
    if first != 1 {
        let j = w.iter().position(|&v| v == 1).unwrap();
        w[j] = first;
    }
    w.remove(0);
    Ok(reduce(&w).expect("entries stay distinct"))
}

/// `τ = n (p_1+1) … (p_m+1) 1` with `n = m + 2`.
pub fn wrap_n1(p: &Permutation) -> Permutation {
    let n = p.len() as u32 + 2;
    let mut w = Vec::with_capacity(n as usize);
    w.push(n);
    w.extend(p.as_slice().iter().map(|&v| v + 1));
    w.push(1);
    Permutation::from_vec_unchecked(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtensionSlot {
    Append,
    /// 1-based position whose entry is moved to the end and replaced by the new maximum.
    AtPosition(usize),
}

/// Inverse of [`r_operator`]: grows `t` by one, placing the new maximum in `slot`.
pub fn extend_right(t: &Permutation, slot: ExtensionSlot) -> Result<Permutation, ShallowError> {
    if let ExtensionSlot::AtPosition(i) = slot {
        if i == 0 || i > t.len() {
            return Err(ShallowError::SlotOutOfRange { position: i, len: t.len() });
        }
        if !t.is_lr_max_at(i) && !t.is_rl_min_at(i) {
            let w = t.as_slice();
            return Err(ShallowError::IllegalSlot {
                position: i,
                value: w[i - 1],
                blocking_max: *w[..i - 1].iter().max().unwrap(),
                blocking_min: *w[i..].iter().min().unwrap(),
            });
        }
    }
    Ok(insert_max(t, slot))
}

fn insert_max(t: &Permutation, slot: ExtensionSlot) -> Permutation {
    let n = t.len() as u32 + 1;
    let mut w = t.as_slice().to_vec();
    match slot {
        ExtensionSlot::Append => w.push(n),
        ExtensionSlot::AtPosition(i) => {
            let moved = std::mem::replace(&mut w[i - 1], n);
            w.push(moved);
        }
    }
    Permutation::from_vec_unchecked(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepClass {
    /// The last entry was already the maximum.
    AppendedMax,
    LeftToRightMax,
    RightToLeftMin,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    /// Size of the permutation before this step.
    pub size: usize,
    pub position_of_max: usize,
    pub moved_value: Option<u32>,
    pub classification: StepClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShallowCertificate {
    pub subject: Permutation,
    pub steps: Vec<ReductionStep>,
    /// What remains after the last step (size 0 or 1).
    pub base: Permutation,
    pub verdict: bool,
}

impl ShallowCertificate {
    pub fn first_violation(&self) -> Option<&ReductionStep> {
        self.steps.iter().find(|s| s.classification == StepClass::Violation)
    }

    /// Rebuilds the subject from the base by undoing each step.
    pub fn replay(&self) -> Permutation {
        self.steps.iter().rev().fold(self.base.clone(), |t, step| {
            let slot = match step.moved_value {
                None => ExtensionSlot::Append,
                Some(_) => ExtensionSlot::AtPosition(step.position_of_max),
            };
            if step.classification == StepClass::Violation {
                insert_max(&t, slot)
            } else {
                extend_right(&t, slot).expect("certificate step is a legal slot")
            }
        })
    }
}

/// Repeatedly applies the right operator, classifying each move.
pub fn certify_shallow(p: &Permutation) -> ShallowCertificate {
    let mut steps = Vec::with_capacity(p.len().saturating_sub(1));
    let mut current = p.clone();
    while current.len() >= 2 {
        let n = current.len();
        let j = current.position_of(n as u32).unwrap();
        let reduced = r_operator(&current).unwrap();
        let (moved_value, classification) = if j == n {
            (None, StepClass::AppendedMax)
        } else {
            let class = if reduced.is_lr_max_at(j) {
                StepClass::LeftToRightMax
            } else if reduced.is_rl_min_at(j) {
                StepClass::RightToLeftMin
            } else {
                StepClass::Violation
            };
            (Some(current.at(n)), class)
        };
        steps.push(ReductionStep { size: n, position_of_max: j, moved_value, classification });
        current = reduced;
    }
    let verdict = steps.iter().all(|s| s.classification != StepClass::Violation);
    ShallowCertificate { subject: p.clone(), steps, base: current, verdict }
}

/// Depth-first walk over the generation tree, calling `visit` on every
/// shallow permutation of size `n`. The permutation handed to `visit` is a
/// scratch buffer; clone it to keep it.
pub fn visit_shallow<F: FnMut(&Permutation)>(n: usize, mut visit: F) {
    if n == 0 {
        visit(&Permutation::empty());
        return;
    }
    let mut scratch = Permutation::identity(1);
    descend(&mut scratch, n, &mut visit);
}

/// Visits the subtree under `root` (which must be shallow) down to size `n`.
pub(crate) fn visit_shallow_from<F: FnMut(&Permutation)>(root: &Permutation, n: usize, mut visit: F) {
    let mut scratch = root.clone();
    descend(&mut scratch, n, &mut visit);
}

fn descend<F: FnMut(&Permutation)>(cur: &mut Permutation, n: usize, visit: &mut F) {
    let m = cur.len();
    if m == n {
        visit(cur);
        return;
    }
    let top = m as u32 + 1;
    // Legal slots are computed up front: the scratch buffer is mutated below.
    let legal = legal_slots(cur.as_slice());
    cur.word_mut().push(top);
    descend(cur, n, visit);
    cur.word_mut().pop();
    for i in 0..m {
        if legal & (1u64 << i) == 0 {
            continue;
        }
        let w = cur.word_mut();
        let moved = std::mem::replace(&mut w[i], top);
        w.push(moved);
        descend(cur, n, visit);
        let w = cur.word_mut();
        w.pop();
        w[i] = moved;
    }
}

/// Bitmask of 0-based positions holding a left-to-right maximum or a
/// right-to-left minimum.
fn legal_slots(w: &[u32]) -> u64 {
    assert!(w.len() <= 64, "generation is limited to size 64");
    let mut mask = 0u64;
    let mut best = 0;
    for (i, &v) in w.iter().enumerate() {
        if v > best {
            mask |= 1 << i;
            best = v;
        }
    }
    let mut best = u32::MAX;
    for (i, &v) in w.iter().enumerate().rev() {
        if v < best {
            mask |= 1 << i;
            best = v;
        }
    }
    mask
}

/// Every shallow permutation of size `depth`; used as partition roots for
/// parallel generation.
pub(crate) fn shallow_roots(depth: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    visit_shallow(depth, |p| out.push(p.clone()));
    out
}

/// Streaming iterator over all shallow permutations of a given size.
///
/// Memory is a stack of at most `n` frames; children are produced grouped by
/// their parent.
pub struct ShallowIter {
    target: usize,
    stack: Vec<(Permutation, usize, u64)>,
    emitted_empty: bool,
}

impl ShallowIter {
    fn new(n: usize) -> Self {
        let stack = if n == 0 {
            Vec::new()
        } else {
            let root = Permutation::identity(1);
            let legal = legal_slots(root.as_slice());
            vec![(root, 0, legal)]
        };
        Self { target: n, stack, emitted_empty: n != 0 }
    }
}

impl Iterator for ShallowIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if !self.emitted_empty {
            self.emitted_empty = true;
            return Some(Permutation::empty());
        }
        loop {
            let (parent, cursor, legal) = self.stack.last_mut()?;
            if parent.len() == self.target {
                let (done, _, _) = self.stack.pop().unwrap();
                return Some(done);
            }
            let m = parent.len();
            // cursor 0 is Append, cursor i >= 1 is AtPosition(i)
            let mut c = *cursor;
            while c >= 1 && c <= m && *legal & (1 << (c - 1)) == 0 {
                c += 1;
            }
            if c > m {
                self.stack.pop();
                continue;
            }
            *cursor = c + 1;
            let slot = if c == 0 { ExtensionSlot::Append } else { ExtensionSlot::AtPosition(c) };
            let child = insert_max(parent, slot);
            let legal = legal_slots(child.as_slice());
            self.stack.push((child, 0, legal));
        }
    }
}

pub fn generate_shallow(n: usize) -> ShallowIter {
    ShallowIter::new(n)
}

/// `|T_n|` without materializing the permutations.
pub fn count_shallow(n: usize) -> u64 {
    let mut count = 0u64;
    visit_shallow(n, |_| count += 1);
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_permutation;
    use std::collections::HashSet;

    fn p(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    fn all(n: usize) -> Vec<Permutation> {
        let mut out = vec![];
        let mut cur = Permutation::identity(n);
        loop {
            out.push(cur.clone());
            if !cur.next_lex() {
                return out;
            }
        }
    }

    #[test]
    fn decider_examples() {
        assert!(is_shallow(&p("421635")));
        assert!(!is_shallow(&p("3412")));
        for n in 0..8 {
            assert!(is_shallow(&Permutation::identity(n)));
            assert!(achieves_upper_bound(&Permutation::identity(n)));
        }
        assert!(!achieves_upper_bound(&p("321")));
    }

    #[test]
    fn upper_bound_for_321_avoiders_of_size_five() {
        let avoids_321 = |q: &Permutation| {
            let w = q.as_slice();
            !(0..w.len()).any(|i| (i + 1..w.len()).any(|j| w[i] > w[j] && (j + 1..w.len()).any(|k| w[j] > w[k])))
        };
        let mut seen = 0;
        for q in all(5).into_iter().filter(avoids_321) {
            assert!(achieves_upper_bound(&q), "{q}");
            seen += 1;
        }
        assert_eq!(seen, 42);
    }

    #[test]
    fn right_operator() {
        assert_eq!(r_operator(&p("421635")).unwrap(), p("42153"));
        assert_eq!(r_operator(&p("1234")).unwrap(), p("123"));
        assert_eq!(r_operator(&p("42153")).unwrap(), p("4213"));
        assert_eq!(r_operator(&p("1")), Err(ShallowError::SizeTooSmall(1)));
        assert_eq!(r_operator(&Permutation::empty()), Err(ShallowError::SizeTooSmall(0)));
    }

    #[test]
    fn left_operator() {
        assert_eq!(l_operator(&p("421635")).unwrap(), p("13524"));
        assert_eq!(l_operator(&p("1234")).unwrap(), p("123"));
        assert_eq!(l_operator(&p("312")).unwrap(), p("21"));
        assert!(l_operator(&p("1")).is_err());
    }

    #[test]
    fn left_is_conjugate_of_right() {
        for n in 2..=7 {
            for q in all(n) {
                let via_rc = r_operator(&q.reverse_complement()).unwrap().reverse_complement();
                assert_eq!(l_operator(&q).unwrap(), via_rc, "{q}");
            }
        }
    }

    #[test]
    fn certificate_of_worked_example() {
        let cert = certify_shallow(&p("421635"));
        assert!(cert.verdict);
        assert_eq!(cert.steps.len(), 5);
        let first = &cert.steps[0];
        assert_eq!(first.classification, StepClass::LeftToRightMax);
        assert_eq!((first.position_of_max, first.moved_value), (4, Some(5)));
        let classes: Vec<_> = cert.steps.iter().map(|s| s.classification).collect();
        assert_eq!(
            classes,
            [
                StepClass::LeftToRightMax,
                StepClass::RightToLeftMin,
                StepClass::LeftToRightMax,
                StepClass::LeftToRightMax,
                StepClass::AppendedMax
            ]
        );
        assert_eq!(cert.base, p("1"));
        assert_eq!(cert.replay(), p("421635"));
    }

    #[test]
    fn certificate_edge_cases() {
        let cert = certify_shallow(&p("3412"));
        assert!(!cert.verdict);
        assert!(cert.first_violation().is_some());
        assert_eq!(cert.replay(), p("3412"));

        let cert = certify_shallow(&p("1"));
        assert!(cert.verdict && cert.steps.is_empty());
        let cert = certify_shallow(&Permutation::empty());
        assert!(cert.verdict && cert.steps.is_empty());
    }

    #[test]
    fn certificates_agree_and_replay_up_to_seven() {
        for n in 0..=7 {
            for q in all(n) {
                let cert = certify_shallow(&q);
                assert_eq!(cert.verdict, is_shallow(&q), "{q}");
                assert_eq!(cert.replay(), q);
                for step in &cert.steps {
                    assert_eq!(step.moved_value.is_none(), step.classification == StepClass::AppendedMax);
                }
            }
        }
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extend_right(&p("42153"), ExtensionSlot::AtPosition(4)).unwrap(), p("421635"));
        assert_eq!(extend_right(&p("321"), ExtensionSlot::Append).unwrap(), p("3214"));
        assert_eq!(extend_right(&p("12"), ExtensionSlot::AtPosition(1)).unwrap(), p("321"));
        assert!(matches!(
            extend_right(&p("12"), ExtensionSlot::AtPosition(3)),
            Err(ShallowError::SlotOutOfRange { .. })
        ));
    }

    #[test]
    fn illegal_slot_names_the_blockers() {
        // 2 sits between an earlier 3 and a later 1
        let err = extend_right(&p("3241"), ExtensionSlot::AtPosition(2)).unwrap_err();
        assert_eq!(err, ShallowError::IllegalSlot { position: 2, value: 2, blocking_max: 3, blocking_min: 1 });
    }

    #[test]
    fn round_trip_through_extension() {
        for n in 1..=6 {
            for t in generate_shallow(n) {
                for i in 1..=n {
                    if let Ok(child) = extend_right(&t, ExtensionSlot::AtPosition(i)) {
                        assert_eq!(r_operator(&child).unwrap(), t);
                        assert!(is_shallow(&child));
                    }
                }
                assert_eq!(r_operator(&extend_right(&t, ExtensionSlot::Append).unwrap()).unwrap(), t);
            }
        }
    }

    #[test]
    fn generator_small_sizes() {
        assert_eq!(generate_shallow(0).collect::<Vec<_>>(), vec![Permutation::empty()]);
        assert_eq!(generate_shallow(1).collect::<Vec<_>>(), vec![p("1")]);
        let mut three: Vec<_> = generate_shallow(3).collect();
        three.sort();
        assert_eq!(three, all(3));
        let four: HashSet<_> = generate_shallow(4).collect();
        let expected: HashSet<_> = all(4).into_iter().filter(|q| *q != p("3412")).collect();
        assert_eq!(four, expected);
        assert_eq!(count_shallow(4), 23);
    }

    #[test]
    fn generator_matches_filter_up_to_eight() {
        for n in 0..=8 {
            let generated: Vec<_> = generate_shallow(n).collect();
            let unique: HashSet<_> = generated.iter().cloned().collect();
            assert_eq!(unique.len(), generated.len(), "repeat at n={n}");
            let expected: HashSet<_> = all(n).into_iter().filter(is_shallow).collect();
            assert_eq!(unique, expected, "n={n}");
            assert_eq!(count_shallow(n), generated.len() as u64);
            let mut visited = 0;
            visit_shallow(n, |q| {
                assert!(unique.contains(q));
                visited += 1;
            });
            assert_eq!(visited, generated.len());
        }
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_n1(&p("1")), p("321"));
        assert_eq!(wrap_n1(&p("12")), p("4231"));
        assert!(is_shallow(&p("4231")));
        let wrapped = wrap_n1(&p("3412"));
        assert_eq!(wrapped, p("645231"));
        assert!(!is_shallow(&wrapped));
        assert_eq!(wrap_n1(&Permutation::empty()), p("21"));
    }
}

//! Classical pattern containment plus the four anchors needed for the two
//! mesh patterns that every shallow permutation avoids:
//!
//! * `3n12`: a 3412 whose "4" is the host's maximum and whose "1" is its minimum;
//! * `u3412`: a 3412 whose "3" sits in the first position and "2" in the last.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::perm::{parse_permutation, Permutation};

pub const MAX_PATTERN_LEN: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern {0:?} is not a permutation of length 1..=4")]
    BadPattern(String),
    #[error("anchor list has {anchors} entries for a pattern of length {len}")]
    AnchorArity { anchors: usize, len: usize },
    #[error("anchor {0:?} used more than once")]
    RepeatedAnchor(Anchor),
    #[error("anchor {anchor:?} not allowed on letter {letter}")]
    MisplacedAnchor { anchor: Anchor, letter: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Anchor {
    /// Letter must be matched by the host's largest value.
    ValueMax,
    /// Letter must be matched by the value 1.
    ValueMin,
    /// Letter must be matched at host position 1.
    PosFirst,
    /// Letter must be matched at the host's last position.
    PosLast,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    pattern: Permutation,
    anchors: Vec<Option<Anchor>>,
}

impl PatternSpec {
    pub fn new(pattern: Permutation, anchors: Vec<Option<Anchor>>) -> Result<Self, PatternError> {
        let len = pattern.len();
        if len == 0 || len > MAX_PATTERN_LEN {
            return Err(PatternError::BadPattern(pattern.to_string()));
        }
        if anchors.len() != len {
            return Err(PatternError::AnchorArity { anchors: anchors.len(), len });
        }
        let mut used = Vec::new();
        for (letter, anchor) in anchors.iter().enumerate() {
            let Some(a) = *anchor else { continue };
            if used.contains(&a) {
                return Err(PatternError::RepeatedAnchor(a));
            }
            used.push(a);
            let misplaced = match a {
                Anchor::PosFirst => letter != 0,
                Anchor::PosLast => letter != len - 1,
                _ => false,
            };
            if misplaced {
                return Err(PatternError::MisplacedAnchor { anchor: a, letter: letter + 1 });
            }
        }
        Ok(Self { pattern, anchors })
    }

    pub fn classical(pattern: Permutation) -> Result<Self, PatternError> {
        let anchors = vec![None; pattern.len()];
        Self::new(pattern, anchors)
    }

    /// 3412 with the "4" pinned to the maximum value and the "1" to the value 1.
    pub fn value_anchored_3412() -> Self {
        Self::new(parse_permutation("3412").unwrap(), vec![None, Some(Anchor::ValueMax), Some(Anchor::ValueMin), None])
            .unwrap()
    }

    /// 3412 with the "3" pinned to the first position and the "2" to the last.
    pub fn position_anchored_3412() -> Self {
        Self::new(parse_permutation("3412").unwrap(), vec![Some(Anchor::PosFirst), None, None, Some(Anchor::PosLast)])
            .unwrap()
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn anchors(&self) -> &[Option<Anchor>] {
        &self.anchors
    }

    pub fn is_classical(&self) -> bool {
        self.anchors.iter().all(Option::is_none)
    }

    pub fn without_anchors(&self) -> Self {
        Self { pattern: self.pattern.clone(), anchors: vec![None; self.pattern.len()] }
    }

    /// Lexicographically least occurrence in `host`, as 1-based positions.
    pub fn find_occurrence(&self, host: &Permutation) -> Option<Occurrence> {
        let m = self.pattern.len();
        if host.len() < m {
            return None;
        }
        let mut chosen = [0usize; MAX_PATTERN_LEN];
        if self.search(host.as_slice(), 0, 0, &mut chosen) {
            Some(Occurrence { indices: chosen[..m].iter().map(|&i| i + 1).collect() })
        } else {
            None
        }
    }

    /// Whether the 1-based `indices` of `host` form an occurrence.
    pub fn is_occurrence(&self, host: &Permutation, indices: &[usize]) -> bool {
        let n = host.len();
        if indices.len() != self.pattern.len()
            || indices.windows(2).any(|w| w[0] >= w[1])
            || indices.iter().any(|&i| i == 0 || i > n)
        {
            return false;
        }
        let vals: Vec<u32> = indices.iter().map(|&i| host.at(i)).collect();
        let pat = self.pattern.as_slice();
        let shape = (0..vals.len()).all(|a| (0..a).all(|b| (vals[b] < vals[a]) == (pat[b] < pat[a])));
        shape
            && self.anchors.iter().zip(indices).zip(&vals).all(|((a, &i), &v)| match a {
                None => true,
                Some(Anchor::ValueMax) => v as usize == n,
                Some(Anchor::ValueMin) => v == 1,
                Some(Anchor::PosFirst) => i == 1,
                Some(Anchor::PosLast) => i == n,
            })
    }

    pub fn is_contained_in(&self, host: &Permutation) -> bool {
        self.find_occurrence(host).is_some()
    }

    fn search(&self, host: &[u32], letter: usize, start: usize, chosen: &mut [usize; MAX_PATTERN_LEN]) -> bool {
        let m = self.pattern.len();
        if letter == m {
            return true;
        }
        let n = host.len();
        let pat = self.pattern.as_slice();
        // leave room for the remaining letters
        let end = n - (m - letter - 1);
        let (lo, hi) = match self.anchors[letter] {
            Some(Anchor::PosFirst) => (start, end.min(1)),
            Some(Anchor::PosLast) => (start.max(n - 1), end),
            _ => (start, end),
        };
        for idx in lo..hi {
            let v = host[idx];
            let anchored = match self.anchors[letter] {
                Some(Anchor::ValueMax) => v as usize == n,
                Some(Anchor::ValueMin) => v == 1,
                _ => true,
            };
            if !anchored {
                continue;
            }
            let consistent = (0..letter).all(|prev| (host[chosen[prev]] < v) == (pat[prev] < pat[letter]));
            if !consistent {
                continue;
            }
            chosen[letter] = idx;
            if self.search(host, letter + 1, idx + 1, chosen) {
                return true;
            }
        }
        false
    }
}

/// Text form: a digit pattern such as `132`, or the reserved names `3n12`
/// (value anchored 3412) and `u3412` (position anchored 3412).
impl FromStr for PatternSpec {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "3n12" => Ok(Self::value_anchored_3412()),
            "u3412" => Ok(Self::position_anchored_3412()),
            other => {
                if other.is_empty() || other.len() > MAX_PATTERN_LEN || !other.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(PatternError::BadPattern(other.to_string()));
                }
                let p = parse_permutation(other).map_err(|_| PatternError::BadPattern(other.to_string()))?;
                Self::classical(p)
            }
        }
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::value_anchored_3412() {
            return f.write_str("3n12");
        }
        if *self == Self::position_anchored_3412() {
            return f.write_str("u3412");
        }
        for (v, a) in self.pattern.as_slice().iter().zip(&self.anchors) {
            match a {
                None => write!(f, "{v}")?,
                Some(a) => write!(f, "{v}[{a:?}]")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternSpec({self})")
    }
}

impl Serialize for PatternSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    /// Strictly increasing 1-based host positions, one per pattern letter.
    pub indices: Vec<usize>,
}

impl Occurrence {
    pub fn values(&self, host: &Permutation) -> Vec<u32> {
        self.indices.iter().map(|&i| host.at(i)).collect()
    }
}

pub fn find_occurrence(host: &Permutation, spec: &PatternSpec) -> Option<Occurrence> {
    spec.find_occurrence(host)
}

pub fn avoids(host: &Permutation, specs: &[PatternSpec]) -> bool {
    specs.iter().all(|s| !s.is_contained_in(host))
}

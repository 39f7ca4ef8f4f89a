//! Integer partitions, conjugation and modified Frobenius coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A weakly decreasing sequence of positive integers. The empty partition is ∅.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("cannot parse partition `{0}`")]
    Parse(String),
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Accepts trailing zeros and drops them; rejects increasing sequences.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Partition { parts })
    }

    /// `(1^m)`.
    pub fn column(m: u32) -> Self {
        Partition { parts: vec![1; m as usize] }
    }

    /// `(m)`, empty for `m = 0`.
    pub fn row(m: u32) -> Self {
        Partition { parts: if m == 0 { vec![] } else { vec![m] } }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// 1-based part, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn first(&self) -> u32 {
        self.part(1)
    }

    pub fn conjugate(&self) -> Partition {
        conjugate(self)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(n, n, &mut cur, &mut out);
        out
    }

    /// All partitions fitting in an `rows x cols` box.
    pub fn all_in_box(rows: u32, cols: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(rows: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition { parts: cur.clone() });
            if cur.len() as u32 == rows {
                return;
            }
            for p in (1..=max).rev() {
                cur.push(p);
                go(rows, p, cur, out);
                cur.pop();
            }
        }
        go(rows, cols, &mut cur, &mut out);
        out
    }
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// The transposed diagram: `result[i] = #{j : mu[j] >= i}`.
pub fn conjugate(mu: &Partition) -> Partition {
    let cols = mu.first();
    let parts = (1..=cols).map(|i| mu.parts.iter().filter(|&&p| p >= i).count() as u32).collect();
    Partition { parts }
}

/// Finitely supported map from positive half-integers to non-negative
/// integers. Keys are stored doubled: key `2r` holds the entry at `r`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaCoords {
    entries: BTreeMap<u32, u32>,
}

impl ThetaCoords {
    /// Entry at `r = twice / 2`.
    pub fn get_twice(&self, twice: u32) -> u32 {
        self.entries.get(&twice).copied().unwrap_or(0)
    }

    /// Nonzero entries as `(2r, value)`.
    pub fn iter_twice(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn total(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `theta_{i-1/2} = max(mu'_i - i + 1, 0)`, `theta_i = max(mu_i - i, 0)`.
pub fn theta(mu: &Partition) -> ThetaCoords {
    let conj = conjugate(mu);
    let mut entries = BTreeMap::new();
    let bound = mu.len().max(conj.len());
    for i in 1..=bound {
        let half = (conj.part(i) + 1).saturating_sub(i as u32);
        if half > 0 {
            entries.insert(2 * i as u32 - 1, half);
        }
        let int = mu.part(i).saturating_sub(i as u32);
        if int > 0 {
            entries.insert(2 * i as u32, int);
        }
    }
    ThetaCoords { entries }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Parses `(3,1)`; `()` is the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| PartitionError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        if parts.contains(&0) {
            return Err(PartitionError::Parse(s.to_string()));
        }
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&Partition::empty()), Partition::empty());
        assert_eq!(conjugate(&Partition::column(5)), Partition::row(5));
        assert_eq!(conjugate(&p(&[3, 1])), p(&[2, 1, 1]));
    }

    #[test]
    fn theta_examples() {
        assert!(theta(&Partition::empty()).is_zero());
        let t1 = theta(&p(&[1]));
        assert_eq!(t1.iter_twice().collect::<Vec<_>>(), vec![(1, 1)]);
        let t31 = theta(&p(&[3, 1]));
        assert_eq!(t31.iter_twice().collect::<Vec<_>>(), vec![(1, 2), (2, 2)]);
    }

    #[test]
    fn counts_of_all_partitions() {
        let counts: Vec<usize> = (0..=10).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        // C(2+2, 2) partitions fit in a 2x2 box.
        assert_eq!(Partition::all_in_box(2, 2).len(), 6);
    }

    #[test]
    fn text_format() {
        assert_eq!(p(&[3, 1]).to_string(), "(3,1)");
        assert_eq!(Partition::empty().to_string(), "()");
        assert_eq!("(3,1)".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert!("(1,3)".parse::<Partition>().is_err());
        assert!("3,1".parse::<Partition>().is_err());
    }

    fn arb_partition(max_size: u32) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1u32..=max_size, 0..8).prop_map(move |mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let mut total = 0;
            v.retain(|x| {
                total += x;
                total <= max_size
            });
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugation_is_involution(mu in arb_partition(40)) {
            prop_assert_eq!(conjugate(&conjugate(&mu)), mu);
        }

        #[test]
        fn theta_counts_boxes(mu in arb_partition(40)) {
            prop_assert_eq!(theta(&mu).total(), mu.size());
        }

        #[test]
        fn theta_monotone_support(mu in arb_partition(40)) {
            let t = theta(&mu);
            for i in 1..20u32 {
                prop_assert!(t.get_twice(2 * i + 1) <= t.get_twice(2 * i - 1));
                prop_assert!(t.get_twice(2 * i + 2) <= t.get_twice(2 * i));
            }
        }
    }
}

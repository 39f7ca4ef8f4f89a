//! Borel subalgebras as total orderings of finite index windows, and odd
//! reflections acting on highest weights.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::weight::{to_weight, DominantTuple, Flavor, Index, Weight, WeightError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynkinError {
    #[error("{0} has equal parity on both ends, so it is not an odd root")]
    EvenRoot(OddRoot),
    #[error("{0} is not a simple root of the ordering: {1} is not immediately followed by {2}")]
    NotSimple(OddRoot, Index, Index),
    #[error("index {0} is not in the ordering window")]
    NotInWindow(Index),
    #[error("{0} must be at least 1")]
    BadRank(&'static str),
    #[error("size constraint for target {target} violated: {clause}")]
    SizeConstraint { target: Target, clause: String },
    #[error("transport mismatch for target {target}: folded {folded}, expected {expected}")]
    TransportMismatch { target: Target, folded: Weight, expected: Weight },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// The isotropic root `ε_r - ε_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddRoot {
    pub r: Index,
    pub s: Index,
}

impl OddRoot {
    pub fn new(r: Index, s: Index) -> Result<Self, DynkinError> {
        let a = OddRoot { r, s };
        if r.is_odd() == s.is_odd() {
            return Err(DynkinError::EvenRoot(a));
        }
        Ok(a)
    }

    fn unchecked(r: Index, s: Index) -> Self {
        debug_assert_ne!(r.is_odd(), s.is_odd());
        OddRoot { r, s }
    }
}

impl fmt::Display for OddRoot {
    /// `e(1)-e(3/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})-e({})", self.r, self.s)
    }
}

impl FromStr for OddRoot {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DynkinError::Parse(format!("root `{s}`"));
        let t = s.trim();
        let (a, b) = t.strip_prefix("e(").and_then(|x| x.strip_suffix(')')).and_then(|x| x.split_once(")-e(")).ok_or_else(bad)?;
        OddRoot::new(a.parse()?, b.parse()?)
    }
}

/// Named orderings produced by this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingName {
    Standard,
    C(u32),
    S(u32),
    DiamondC(u32),
    DiamondS(u32),
    GlK2Nonstandard,
    GlK2Standard,
}

/// Reflection targets of the transport proposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    C,
    S,
    DiamondC,
    DiamondS,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::C, Target::S, Target::DiamondC, Target::DiamondS];

    pub fn flavor(&self) -> Flavor {
        match self {
            Target::C => Flavor::Plain,
            Target::S => Flavor::Bar,
            Target::DiamondC => Flavor::Diamond,
            Target::DiamondS => Flavor::BarDiamond,
        }
    }

    pub fn name(&self, n: u32) -> OrderingName {
        match self {
            Target::C => OrderingName::C(n),
            Target::S => OrderingName::S(n),
            Target::DiamondC => OrderingName::DiamondC(n),
            Target::DiamondS => OrderingName::DiamondS(n),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::C => "c",
            Target::S => "s",
            Target::DiamondC => "dc",
            Target::DiamondS => "ds",
        })
    }
}

impl FromStr for Target {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "c" => Target::C,
            "s" => Target::S,
            "dc" => Target::DiamondC,
            "ds" => Target::DiamondS,
            _ => return Err(DynkinError::Parse(format!("target `{s}`"))),
        })
    }
}

/// A total order on a finite window of indices, smallest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BorelOrdering {
    order: Vec<Index>,
    pub name: Option<OrderingName>,
}

impl BorelOrdering {
    /// Any permutation of a window; duplicates are rejected by panicking in debug.
    pub fn from_order(order: Vec<Index>) -> Self {
        debug_assert!({
            let mut s = order.clone();
            s.sort();
            s.windows(2).all(|w| w[0] != w[1])
        });
        BorelOrdering { order, name: None }
    }

    /// Standard order on `{h : lo < 2h <= hi}` together with `bar1..bark`.
    pub fn standard_twice(k: usize, lo_twice: i64, hi_twice: i64) -> Self {
        let mut order: Vec<Index> = ((lo_twice + 1)..=hi_twice).map(Index::Half).collect();
        order.extend((1..=k as u32).map(Index::Bar));
        order.sort();
        BorelOrdering { order, name: Some(OrderingName::Standard) }
    }

    /// Standard order on the window `-n < h <= n` plus the barred indices.
    pub fn standard(k: usize, n: u32) -> Self {
        Self::standard_twice(k, -2 * n as i64, 2 * n as i64)
    }

    /// `-1/2 ≺ 1̄ ≺ … ≺ k̄ ≺ 1/2`.
    pub fn gl_k2_nonstandard(k: usize) -> Self {
        let mut b = Self::standard_twice(k, -2, 1);
        b.order.retain(|i| i.is_odd() || i.is_bar());
        b.name = Some(OrderingName::GlK2Nonstandard);
        b
    }

    pub fn order(&self) -> &[Index] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, i: Index) -> Option<usize> {
        self.order.iter().position(|x| *x == i)
    }

    pub fn contains(&self, i: Index) -> bool {
        self.position(i).is_some()
    }

    /// Pairs `(a, b)` with `a` before `b`; the root `ε_a - ε_b` is positive.
    pub fn positive_roots(&self) -> Vec<(Index, Index)> {
        let mut out = Vec::new();
        for i in 0..self.order.len() {
            for j in (i + 1)..self.order.len() {
                out.push((self.order[i], self.order[j]));
            }
        }
        out
    }

    /// Adjacent pairs of opposite parity.
    pub fn odd_simple_roots(&self) -> Vec<OddRoot> {
        self.order.windows(2).filter(|w| w[0].is_odd() != w[1].is_odd()).map(|w| OddRoot::unchecked(w[0], w[1])).collect()
    }

    fn check_simple(&self, a: OddRoot) -> Result<usize, DynkinError> {
        if a.r.is_odd() == a.s.is_odd() {
            return Err(DynkinError::EvenRoot(a));
        }
        let p = self.position(a.r).ok_or(DynkinError::NotInWindow(a.r))?;
        if !self.contains(a.s) {
            return Err(DynkinError::NotInWindow(a.s));
        }
        if self.order.get(p + 1) != Some(&a.s) {
            return Err(DynkinError::NotSimple(a, a.r, a.s));
        }
        Ok(p)
    }
}

impl fmt::Display for BorelOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(Index::to_string).collect();
        f.write_str(&parts.join(" ≺ "))
    }
}

impl FromStr for BorelOrdering {
    type Err = DynkinError;

    /// Accepts `≺`- or `<`-separated index lists.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let order = s
            .split(['≺', '<'])
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.trim().parse::<Index>().map_err(DynkinError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let mut sorted = order.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(DynkinError::Parse(format!("ordering `{s}` repeats an index")));
        }
        Ok(BorelOrdering { order, name: None })
    }
}

/// Swaps `r` and `s`; keeps `mu` when `mu(r) + mu(s) = 0`, else returns `mu - α`.
pub fn odd_reflect(b: &BorelOrdering, mu: &Weight, alpha: OddRoot) -> Result<(BorelOrdering, Weight), DynkinError> {
    let p = b.check_simple(alpha)?;
    let mut order = b.order.clone();
    order.swap(p, p + 1);
    let nu = if mu.coeff(alpha.r) + mu.coeff(alpha.s) == 0 { mu.clone() } else { mu.minus_root(alpha.r, alpha.s) };
    Ok((BorelOrdering { order, name: None }, nu))
}

/// Applies a sequence of odd reflections in turn.
pub fn fold(b: &BorelOrdering, mu: &Weight, seq: &[OddRoot]) -> Result<(BorelOrdering, Weight), DynkinError> {
    let mut cur = (b.clone(), mu.clone());
    for a in seq {
        cur = odd_reflect(&cur.0, &cur.1, *a)?;
    }
    Ok(cur)
}

fn root(r_twice: i64, s_twice: i64) -> OddRoot {
    OddRoot::unchecked(Index::Half(r_twice), Index::Half(s_twice))
}

/// Positive side, integers moved behind the half-integers: for `j = 1..n-1`,
/// `ε_j - ε_{j+1/2}, ε_{j-1} - ε_{j+1/2}, …, ε_1 - ε_{j+1/2}`.
fn s_positive(n: u32) -> Vec<OddRoot> {
    let n = n as i64;
    let mut out = Vec::new();
    for j in 1..n {
        for i in (1..=j).rev() {
            out.push(root(2 * i, 2 * j + 1));
        }
    }
    out
}

/// Negative side, integers moved behind the half-integers: for `j = 1..n-1`,
/// `ε_{-j} - ε_{-j+1/2}, …, ε_{-j} - ε_{-1/2}`.
fn s_negative(n: u32) -> Vec<OddRoot> {
    let n = n as i64;
    let mut out = Vec::new();
    for j in 1..n {
        for h in (0..j).rev() {
            out.push(root(-2 * j, -2 * h - 1));
        }
    }
    out
}

/// Positive side, half-integers moved behind the integers.
fn c_positive(n: u32) -> Vec<OddRoot> {
    let n = n as i64;
    let mut out = Vec::new();
    for j in 1..=n {
        for h in (1..=j).rev() {
            out.push(root(2 * h - 1, 2 * j));
        }
    }
    out
}

/// Negative side, integers moved in front of the half-integers.
fn diamond_negative(n: u32) -> Vec<OddRoot> {
    let n = n as i64;
    let mut out = Vec::new();
    for h in 1..=n {
        for j in (1 - h)..=0 {
            out.push(root(1 - 2 * h, 2 * j));
        }
    }
    out
}

/// The two-phase sequence of `n(n-1)` reflections from the standard order to `s(n)`.
pub fn sequence_standard_to_bs(n: u32) -> Result<Vec<OddRoot>, DynkinError> {
    if n < 1 {
        return Err(DynkinError::BadRank("n"));
    }
    let mut seq = s_positive(n);
    seq.extend(s_negative(n));
    Ok(seq)
}

/// Reflection sequence from the standard order to the target order at rank `n`.
pub fn sequence_to(target: Target, n: u32) -> Result<Vec<OddRoot>, DynkinError> {
    if n < 1 {
        return Err(DynkinError::BadRank("n"));
    }
    Ok(match target {
        Target::S => sequence_standard_to_bs(n)?,
        Target::C => [c_positive(n), s_negative(n)].concat(),
        Target::DiamondC => [diamond_negative(n), c_positive(n)].concat(),
        Target::DiamondS => [diamond_negative(n), s_positive(n)].concat(),
    })
}

/// `[ε_{-1/2} - ε_1̄, …, ε_{-1/2} - ε_k̄]`.
pub fn sequence_gl_k2(k: u32) -> Result<Vec<OddRoot>, DynkinError> {
    if k < 1 {
        return Err(DynkinError::BadRank("k"));
    }
    Ok((1..=k).map(|j| OddRoot::unchecked(Index::Half(-1), Index::Bar(j))).collect())
}

/// Parses `bs:n`, `c:n`, `dc:n`, `ds:n`, `glk2:k`, or a comma-separated list of roots.
pub fn parse_sequence(spec: &str) -> Result<Vec<OddRoot>, DynkinError> {
    let spec = spec.trim();
    if let Some((tag, num)) = spec.split_once(':') {
        if let Ok(v) = num.trim().parse::<u32>() {
            return match tag.trim() {
                "bs" | "s" => sequence_standard_to_bs(v),
                "glk2" => sequence_gl_k2(v),
                other => sequence_to(other.parse()?, v),
            };
        }
    }
    spec.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect()
}

/// Checks the size constraint attached to `target`.
pub fn check_size(t: &DominantTuple, n: u32, target: Target) -> Result<(), DynkinError> {
    let minus_len = t.minus.len() as u32;
    let minus_first = t.minus.first();
    let plus_len = t.plus.len() as u32;
    let plus_first = t.plus.first();
    let (neg_ok, neg_clause) = match target {
        Target::C | Target::S => (minus_len <= n, format!("(lambda-)'_1 = {minus_len} <= {n}")),
        _ => (minus_first <= n, format!("lambda-_1 = {minus_first} <= {n}")),
    };
    let (pos_ok, pos_clause) = match target {
        Target::C | Target::DiamondC => (plus_len <= n, format!("(lambda+)'_1 = {plus_len} <= {n}")),
        _ => (plus_first <= n, format!("lambda+_1 = {plus_first} <= {n}")),
    };
    if !neg_ok {
        return Err(DynkinError::SizeConstraint { target, clause: neg_clause });
    }
    if !pos_ok {
        return Err(DynkinError::SizeConstraint { target, clause: pos_clause });
    }
    Ok(())
}

/// Highest weight of the tilde module with respect to the target order at rank `n`.
///
/// The result is `to_weight(t, target.flavor())`, confirmed by folding the
/// reflection sequence from the standard order.
pub fn transport_highest_weight(t: &DominantTuple, n: u32, target: Target) -> Result<Weight, DynkinError> {
    check_size(t, n, target)?;
    let expected = to_weight(t, target.flavor())?;
    if n == 0 {
        // Only the trivial partitions pass the size check.
        return Ok(expected);
    }
    let start = BorelOrdering::standard(t.k(), n);
    let tilde = to_weight(t, Flavor::Tilde)?;
    let (_, folded) = fold(&start, &tilde, &sequence_to(target, n)?)?;
    if folded != expected {
        return Err(DynkinError::TransportMismatch { target, folded, expected });
    }
    Ok(expected)
}

/// The order reached from the standard order at rank `n` by the target sequence.
pub fn named_ordering(k: usize, n: u32, target: Target) -> Result<BorelOrdering, DynkinError> {
    let (mut b, _) = fold(&BorelOrdering::standard(k, n), &Weight::zero(), &sequence_to(target, n)?)?;
    b.name = Some(target.name(n));
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn h(t: i64) -> Index {
        Index::Half(t)
    }

    #[test]
    fn odd_reflect_branches() {
        let b = BorelOrdering::standard(0, 1);
        let a = OddRoot::new(h(1), h(2)).unwrap();
        let (b2, w) = odd_reflect(&b, &Weight::zero(), a).unwrap();
        assert_eq!(w, Weight::zero());
        assert_eq!(b2.order(), &[h(-1), h(0), h(2), h(1)]);

        let mu = Weight::from_coeffs(0, [(h(1), 1)]);
        let (_, w) = odd_reflect(&b, &mu, a).unwrap();
        assert_eq!(w, Weight::from_coeffs(0, [(h(2), 1)]));

        let mu = Weight::from_coeffs(0, [(h(1), 1), (h(2), -1)]);
        assert_eq!(odd_reflect(&b, &mu, a).unwrap().1, mu);
    }

    #[test]
    fn odd_reflect_rejections() {
        let b = BorelOrdering::standard(0, 2);
        assert!(matches!(OddRoot::new(h(2), h(4)), Err(DynkinError::EvenRoot(_))));
        let far = OddRoot::new(h(1), h(4)).unwrap();
        assert!(matches!(odd_reflect(&b, &Weight::zero(), far), Err(DynkinError::NotSimple(..))));
        let backwards = OddRoot::new(h(2), h(1)).unwrap();
        assert!(odd_reflect(&b, &Weight::zero(), backwards).is_err());
    }

    #[test]
    fn bs_sequences() {
        assert!(sequence_standard_to_bs(0).is_err());
        assert!(sequence_standard_to_bs(1).unwrap().is_empty());
        let two: Vec<String> = sequence_standard_to_bs(2).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(two, ["e(1)-e(3/2)", "e(-1)-e(-1/2)"]);
        let three: Vec<String> = sequence_standard_to_bs(3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(
            three,
            ["e(1)-e(3/2)", "e(2)-e(5/2)", "e(1)-e(5/2)", "e(-1)-e(-1/2)", "e(-2)-e(-3/2)", "e(-2)-e(-1/2)"]
        );
        for n in 1..6 {
            assert_eq!(sequence_standard_to_bs(n).unwrap().len() as u32, n * (n - 1));
        }
    }

    #[test]
    fn gl_k2_sequences() {
        assert!(sequence_gl_k2(0).is_err());
        let s: Vec<String> = sequence_gl_k2(2).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(s, ["e(-1/2)-e(bar1)", "e(-1/2)-e(bar2)"]);
        assert_eq!(sequence_gl_k2(3).unwrap().last().unwrap().s, Index::Bar(3));
        let (b, _) = fold(&BorelOrdering::gl_k2_nonstandard(2), &Weight::zero(), &sequence_gl_k2(2).unwrap()).unwrap();
        assert_eq!(b.to_string(), "bar1 ≺ bar2 ≺ -1/2 ≺ 1/2");
    }

    #[test]
    fn named_orderings_have_expected_shape() {
        let s = named_ordering(0, 2, Target::S).unwrap();
        assert_eq!(s.to_string(), "-3/2 ≺ -1/2 ≺ -1 ≺ 0 ≺ 1/2 ≺ 3/2 ≺ 1 ≺ 2");
        let c = named_ordering(0, 2, Target::C).unwrap();
        assert_eq!(c.to_string(), "-3/2 ≺ -1/2 ≺ -1 ≺ 0 ≺ 1 ≺ 2 ≺ 1/2 ≺ 3/2");
        let dc = named_ordering(1, 2, Target::DiamondC).unwrap();
        assert_eq!(dc.to_string(), "-1 ≺ 0 ≺ -3/2 ≺ -1/2 ≺ bar1 ≺ 1 ≺ 2 ≺ 1/2 ≺ 3/2");
        let ds = named_ordering(0, 2, Target::DiamondS).unwrap();
        assert_eq!(ds.to_string(), "-1 ≺ 0 ≺ -3/2 ≺ -1/2 ≺ 1/2 ≺ 3/2 ≺ 1 ≺ 2");
    }

    #[test]
    fn transport_examples() {
        let triv = DominantTuple::trivial(4, 2);
        for target in Target::ALL {
            assert_eq!(transport_highest_weight(&triv, 3, target).unwrap(), Weight::level(4));
        }
        let t = DominantTuple::new(1, vec![3, -2], Partition::column(2), Partition::column(3));
        let w = transport_highest_weight(&t, 3, Target::DiamondS).unwrap();
        let expect = Weight::from_coeffs(1, [(h(-1), -2), (Index::Bar(1), 3), (Index::Bar(2), -2), (h(1), 3)]);
        assert_eq!(w, expect);
        let t = DominantTuple::new(0, vec![], Partition::empty(), Partition::new(vec![2, 1]).unwrap());
        let w = transport_highest_weight(&t, 2, Target::S).unwrap();
        assert_eq!(w, Weight::from_coeffs(0, [(h(1), 2), (h(3), 1)]));
    }

    #[test]
    fn transport_size_errors_name_the_clause() {
        let t = DominantTuple::new(0, vec![], Partition::empty(), Partition::row(3));
        let e = transport_highest_weight(&t, 2, Target::S).unwrap_err();
        assert!(e.to_string().contains("lambda+_1 = 3 <= 2"), "{e}");
        assert!(transport_highest_weight(&t, 2, Target::C).is_ok());
    }

    #[test]
    fn ordering_text_round_trip() {
        let b = BorelOrdering::standard(1, 1);
        let s = b.to_string();
        assert_eq!(s, "-1/2 ≺ 0 ≺ bar1 ≺ 1/2 ≺ 1");
        assert_eq!(s.parse::<BorelOrdering>().unwrap().order(), b.order());
        assert_eq!(parse_sequence("e(1)-e(3/2), e(-1)-e(-1/2)").unwrap(), sequence_standard_to_bs(2).unwrap());
        assert_eq!(parse_sequence("bs:3").unwrap().len(), 6);
    }
}

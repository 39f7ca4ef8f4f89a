//! Index alphabet, weights, dominant tuples and the five weight flavors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::partition::{conjugate, theta, Partition, PartitionError, ThetaCoords};

/// An element of the ordered index set: a half-integer `h` (stored as `2h`)
/// or a barred index `j̄` with `1 <= j <= k`.
///
/// `Ord` is the standard order `… < -1/2 < 0 < 1̄ < … < k̄ < 1/2 < 1 < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index {
    Half(i64),
    Bar(u32),
}

impl Index {
    /// The half-integer `twice / 2`.
    pub fn half(twice: i64) -> Self {
        Index::Half(twice)
    }

    /// The integer `h`.
    pub fn int(h: i64) -> Self {
        Index::Half(2 * h)
    }

    pub fn bar(j: u32) -> Self {
        Index::Bar(j)
    }

    /// Barred indices and integers are even; half-odd integers are odd.
    pub fn is_odd(&self) -> bool {
        matches!(self, Index::Half(t) if t.rem_euclid(2) == 1)
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, Index::Bar(_))
    }

    /// `2h` for half-integers.
    pub fn twice(&self) -> Option<i64> {
        match self {
            Index::Half(t) => Some(*t),
            Index::Bar(_) => None,
        }
    }

    fn rank(&self) -> (u8, i64) {
        match *self {
            Index::Half(t) if t <= 0 => (0, t),
            Index::Bar(j) => (1, j as i64),
            Index::Half(t) => (2, t),
        }
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Index {
    /// `-1/2`, `0`, `3`, `bar1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Index::Bar(j) => write!(f, "bar{j}"),
            Index::Half(t) if t % 2 == 0 => write!(f, "{}", t / 2),
            Index::Half(t) => write!(f, "{t}/2"),
        }
    }
}

impl FromStr for Index {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeightError::Parse(format!("index `{s}`"));
        let s = s.trim();
        if let Some(j) = s.strip_prefix("bar") {
            let j: u32 = j.parse().map_err(|_| bad())?;
            if j == 0 {
                return Err(bad());
            }
            return Ok(Index::Bar(j));
        }
        if let Some(num) = s.strip_suffix("/2") {
            let t: i64 = num.parse().map_err(|_| bad())?;
            if t.rem_euclid(2) != 1 {
                return Err(bad());
            }
            return Ok(Index::Half(t));
        }
        let h: i64 = s.parse().map_err(|_| bad())?;
        Ok(Index::int(h))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("dominance violated: lambda0[{0}] < lambda0[{1}] while alpha_bar{0} is in Y0")]
    DominanceViolated(usize, usize),
    #[error("Y0 contains alpha_bar{0}, but only 1..k-1 = 1..{1} are allowed")]
    BadY0(u32, usize),
    #[error("index {index} does not lie in the index set of flavor {flavor}")]
    OutsideFlavor { index: Index, flavor: Flavor },
    #[error("barred index {0} exceeds k = {1}")]
    BarOutOfRange(Index, usize),
    #[error("not a dominant weight of flavor {flavor}: first violation at {coordinate}")]
    NotDominant { flavor: Flavor, coordinate: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// A finitely supported integral weight `Σ c_i ε_i + level·Λ₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    coeffs: BTreeMap<Index, i64>,
    pub level: i64,
}

impl Weight {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `level·Λ₀`.
    pub fn level(level: i64) -> Self {
        Weight { coeffs: BTreeMap::new(), level }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (Index, i64)>>(level: i64, coeffs: I) -> Self {
        let mut w = Weight::level(level);
        for (i, c) in coeffs {
            w.add(i, c);
        }
        w
    }

    /// Evaluation at `Ê_ii`.
    pub fn coeff(&self, i: Index) -> i64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: Index, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&i);
        }
    }

    pub fn set(&mut self, i: Index, c: i64) {
        if c == 0 {
            self.coeffs.remove(&i);
        } else {
            self.coeffs.insert(i, c);
        }
    }

    /// Nonzero coefficients in standard order.
    pub fn iter(&self) -> impl Iterator<Item = (Index, i64)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, *c))
    }

    pub fn support(&self) -> impl Iterator<Item = Index> + '_ {
        self.coeffs.keys().copied()
    }

    /// `self - (ε_r - ε_s)`.
    pub fn minus_root(&self, r: Index, s: Index) -> Weight {
        let mut w = self.clone();
        w.add(r, -1);
        w.add(s, 1);
        w
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        let mut w = self.clone();
        w.level -= other.level;
        for (i, c) in other.iter() {
            w.add(i, -c);
        }
        w
    }

    pub fn plus(&self, other: &Weight) -> Weight {
        let mut w = self.clone();
        w.level += other.level;
        for (i, c) in other.iter() {
            w.add(i, c);
        }
        w
    }

    /// Drops coefficients outside `keep`.
    pub fn restrict(&self, keep: impl Fn(Index) -> bool) -> Weight {
        Weight { coeffs: self.coeffs.iter().filter(|(i, _)| keep(**i)).map(|(i, c)| (*i, *c)).collect(), level: self.level }
    }
}

impl fmt::Display for Weight {
    /// `level=a;i:c,...`, coefficients in standard order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.iter().map(|(i, c)| format!("{i}:{c}")).collect();
        write!(f, "level={};{}", self.level, body.join(","))
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeightError::Parse(format!("weight `{s}`"));
        let (lv, body) = s.trim().split_once(';').ok_or_else(bad)?;
        let level: i64 = lv.trim().strip_prefix("level=").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let mut w = Weight::level(level);
        for item in body.split(',').filter(|x| !x.trim().is_empty()) {
            let (i, c) = item.rsplit_once(':').ok_or_else(bad)?;
            w.add(i.parse()?, c.trim().parse().map_err(|_| bad())?);
        }
        Ok(w)
    }
}

/// One of the five index subsets and the weight formula attached to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Tilde,
    Plain,
    Bar,
    Diamond,
    BarDiamond,
}

impl Flavor {
    pub const ALL: [Flavor; 5] = [Flavor::Tilde, Flavor::Plain, Flavor::Bar, Flavor::Diamond, Flavor::BarDiamond];

    /// Membership of a half-integer or barred index in the flavor's index set.
    pub fn contains(&self, i: Index) -> bool {
        let t = match i {
            Index::Bar(_) => return true,
            Index::Half(t) => t,
        };
        let int = t % 2 == 0;
        match self {
            Flavor::Tilde => true,
            Flavor::Plain => int,
            Flavor::Bar => (t <= 0 && int) || (t > 0 && !int),
            Flavor::Diamond => (t < 0 && !int) || (t > 0 && int),
            Flavor::BarDiamond => !int,
        }
    }

    /// Whether the non-positive side uses odd (half-integer) indices.
    pub fn odd_negative(&self) -> bool {
        matches!(self, Flavor::Diamond | Flavor::BarDiamond)
    }

    /// Whether the positive side uses odd (half-integer) indices.
    pub fn odd_positive(&self) -> bool {
        matches!(self, Flavor::Bar | Flavor::BarDiamond)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Tilde => "tilde",
            Flavor::Plain => "plain",
            Flavor::Bar => "bar",
            Flavor::Diamond => "diamond",
            Flavor::BarDiamond => "bar-diamond",
        }
    }

    /// Indices of the finite-rank window `-m < h < n+1` in standard order,
    /// with the `k` barred indices in the middle.
    pub fn window(&self, k: usize, m: u32, n: u32) -> Vec<Index> {
        let lo = -2 * m as i64 + 1;
        let hi = 2 * (n as i64 + 1) - 1;
        let mut out: Vec<Index> = (lo..=0).map(Index::Half).filter(|i| self.contains(*i)).collect();
        out.extend((1..=k as u32).map(Index::Bar));
        out.extend((1..=hi).map(Index::Half).filter(|i| self.contains(*i)));
        out
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "tilde" => Flavor::Tilde,
            "plain" => Flavor::Plain,
            "bar" => Flavor::Bar,
            "diamond" => Flavor::Diamond,
            "bar-diamond" | "bardiamond" => Flavor::BarDiamond,
            _ => return Err(WeightError::Parse(format!("flavor `{s}`"))),
        })
    }
}

/// The tuple `(a, λ⁰; λ⁻, λ⁺)` together with the subset `Y₀`, stored as the
/// set of `j` with `α_j̄ ∈ Y₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantTuple {
    pub level: i64,
    pub lambda0: Vec<i64>,
    pub minus: Partition,
    pub plus: Partition,
    pub y0: BTreeSet<u32>,
}

impl DominantTuple {
    /// Tuple with `Y₀ = ∅`.
    pub fn new(level: i64, lambda0: Vec<i64>, minus: Partition, plus: Partition) -> Self {
        DominantTuple { level, lambda0, minus, plus, y0: BTreeSet::new() }
    }

    pub fn trivial(level: i64, k: usize) -> Self {
        Self::new(level, vec![0; k], Partition::empty(), Partition::empty())
    }

    pub fn k(&self) -> usize {
        self.lambda0.len()
    }

    pub fn with_y0(mut self, y0: BTreeSet<u32>) -> Result<Self, WeightError> {
        self.y0 = y0;
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<(), WeightError> {
        for &j in &self.y0 {
            if j == 0 || j as usize >= self.k() {
                return Err(WeightError::BadY0(j, self.k().saturating_sub(1)));
            }
            let j = j as usize;
            if self.lambda0[j - 1] < self.lambda0[j] {
                return Err(WeightError::DominanceViolated(j, j + 1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DominantTuple {
    /// `a=<int>;l0=<c1,...,ck>;lm=(..);lp=(..)`, plus `;y0=..` when nonempty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l0: Vec<String> = self.lambda0.iter().map(i64::to_string).collect();
        write!(f, "a={};l0={};lm={};lp={}", self.level, l0.join(","), self.minus, self.plus)?;
        if !self.y0.is_empty() {
            let y: Vec<String> = self.y0.iter().map(u32::to_string).collect();
            write!(f, ";y0={}", y.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for DominantTuple {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |what: &str| WeightError::Parse(format!("tuple `{s}`: {what}"));
        let mut level = None;
        let mut l0 = None;
        let mut lm = None;
        let mut lp = None;
        let mut y0 = BTreeSet::new();
        for field in s.trim().split(';') {
            let (key, val) = field.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let val = val.trim();
            match key.trim() {
                "a" => level = Some(val.parse::<i64>().map_err(|_| bad("level"))?),
                "l0" => {
                    let v = if val.is_empty() {
                        vec![]
                    } else {
                        val.split(',').map(|c| c.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("l0"))?
                    };
                    l0 = Some(v);
                }
                "lm" => lm = Some(val.parse::<Partition>()?),
                "lp" => lp = Some(val.parse::<Partition>()?),
                "y0" => {
                    for c in val.split(',').filter(|c| !c.trim().is_empty()) {
                        y0.insert(c.trim().parse::<u32>().map_err(|_| bad("y0"))?);
                    }
                }
                other => return Err(bad(&format!("unknown key `{other}`"))),
            }
        }
        let t = DominantTuple {
            level: level.ok_or_else(|| bad("missing a"))?,
            lambda0: l0.ok_or_else(|| bad("missing l0"))?,
            minus: lm.ok_or_else(|| bad("missing lm"))?,
            plus: lp.ok_or_else(|| bad("missing lp"))?,
            y0,
        };
        t.check()?;
        Ok(t)
    }
}

/// The dominant weight of flavor `f` attached to `t`.
pub fn to_weight(t: &DominantTuple, f: Flavor) -> Result<Weight, WeightError> {
    t.check()?;
    let mut w = Weight::level(t.level);
    for (j, c) in t.lambda0.iter().enumerate() {
        w.add(Index::Bar(j as u32 + 1), *c);
    }
    match f {
        Flavor::Tilde => {
            for (tw, c) in theta(&conjugate(&t.minus)).iter_twice() {
                w.add(Index::Half(1 - tw as i64), -(c as i64));
            }
            for (tw, c) in theta(&t.plus).iter_twice() {
                w.add(Index::Half(tw as i64), c as i64);
            }
        }
        _ => {
            if f.odd_negative() {
                for (j, c) in conjugate(&t.minus).parts().iter().enumerate() {
                    w.add(Index::Half(1 - 2 * (j as i64 + 1)), -(*c as i64));
                }
            } else {
                for (j, c) in t.minus.parts().iter().enumerate() {
                    w.add(Index::int(-(j as i64)), -(*c as i64));
                }
            }
            if f.odd_positive() {
                for (j, c) in conjugate(&t.plus).parts().iter().enumerate() {
                    w.add(Index::Half(2 * (j as i64 + 1) - 1), *c as i64);
                }
            } else {
                for (j, c) in t.plus.parts().iter().enumerate() {
                    w.add(Index::int(j as i64 + 1), *c as i64);
                }
            }
        }
    }
    Ok(w)
}

/// Inverse of [`to_weight`] for an ambient `k` (with `Y₀ = ∅`).
pub fn from_weight(w: &Weight, f: Flavor, k: usize) -> Result<DominantTuple, WeightError> {
    from_weight_y0(w, f, k, BTreeSet::new())
}

pub fn from_weight_y0(w: &Weight, f: Flavor, k: usize, y0: BTreeSet<u32>) -> Result<DominantTuple, WeightError> {
    let mut lambda0 = vec![0i64; k];
    let mut neg: BTreeMap<i64, i64> = BTreeMap::new();
    let mut pos: BTreeMap<i64, i64> = BTreeMap::new();
    for (i, c) in w.iter() {
        if !f.contains(i) {
            return Err(WeightError::OutsideFlavor { index: i, flavor: f });
        }
        match i {
            Index::Bar(j) => {
                if j as usize > k {
                    return Err(WeightError::BarOutOfRange(i, k));
                }
                lambda0[j as usize - 1] = c;
            }
            Index::Half(t) if t <= 0 => {
                neg.insert(t, c);
            }
            Index::Half(t) => {
                pos.insert(t, c);
            }
        }
    }
    let not_dom = |coordinate: String| WeightError::NotDominant { flavor: f, coordinate };
    let (minus, plus) = match f {
        Flavor::Tilde => {
            // Negative side carries -θ((λ⁻)′) at index 1/2 - r.
            let neg_theta: BTreeMap<u32, i64> = neg.iter().map(|(t, c)| ((1 - t) as u32, -c)).collect();
            let conj_minus = invert_theta(&neg_theta).map_err(|tw| not_dom(Index::Half(1 - tw as i64).to_string()))?;
            let pos_theta: BTreeMap<u32, i64> = pos.iter().map(|(t, c)| (*t as u32, *c)).collect();
            let plus = invert_theta(&pos_theta).map_err(|tw| not_dom(Index::Half(tw as i64).to_string()))?;
            (conjugate(&conj_minus), plus)
        }
        _ => {
            // Slot j = 1, 2, … of the negative side sits at -(j-1) (even) or 1/2 - j (odd).
            let neg_slot = |j: i64| if f.odd_negative() { 1 - 2 * j } else { -2 * (j - 1) };
            let pos_slot = |j: i64| if f.odd_positive() { 2 * j - 1 } else { 2 * j };
            let minus_seq = read_slots(&neg, neg_slot, -1).map_err(|t| not_dom(Index::Half(t).to_string()))?;
            let plus_seq = read_slots(&pos, pos_slot, 1).map_err(|t| not_dom(Index::Half(t).to_string()))?;
            let minus = Partition::new(minus_seq)?;
            let plus = Partition::new(plus_seq)?;
            (
                if f.odd_negative() { conjugate(&minus) } else { minus },
                if f.odd_positive() { conjugate(&plus) } else { plus },
            )
        }
    };
    let t = DominantTuple { level: w.level, lambda0, minus, plus, y0 };
    t.check()?;
    Ok(t)
}

/// Reads `sign * coeff(slot(j))` for `j = 1, 2, …` as a partition; returns the
/// first offending index (as `2h`) on failure.
fn read_slots(side: &BTreeMap<i64, i64>, slot: impl Fn(i64) -> i64, sign: i64) -> Result<Vec<u32>, i64> {
    let mut last = 0;
    for t in side.keys() {
        let j = (1..=t.abs() + 2).find(|j| slot(*j) == *t).ok_or(*t)?;
        last = last.max(j);
    }
    let mut out = Vec::new();
    let mut prev = i64::MAX;
    for j in 1..=last {
        let v = sign * side.get(&slot(j)).copied().unwrap_or(0);
        if v < 0 || v > prev {
            return Err(slot(j));
        }
        prev = v;
        out.push(v as u32);
    }
    Ok(out)
}

/// Reconstructs `μ` from `θ(μ)` given as doubled-key map; `Err` carries the
/// first bad key.
fn invert_theta(th: &BTreeMap<u32, i64>) -> Result<Partition, u32> {
    if let Some((k, _)) = th.iter().find(|(_, v)| **v < 0) {
        return Err(*k);
    }
    let get = |tw: u32| th.get(&tw).copied().unwrap_or(0) as u32;
    let d = (1..).take_while(|i| get(2 * i - 1) > 0).count() as u32;
    let mut rows: Vec<u32> = (1..=d).map(|i| get(2 * i) + i).collect();
    let cols: Vec<u32> = (1..=d).map(|i| get(2 * i - 1) + i - 1).collect();
    let depth = cols.first().copied().unwrap_or(0);
    for i in (d + 1)..=depth {
        rows.push(cols.iter().filter(|&&c| c >= i).count() as u32);
    }
    let mu = Partition::new(rows).map_err(|_| th.keys().next().copied().unwrap_or(1))?;
    let back = theta(&mu);
    let expect = ThetaFromMap(th);
    if let Some(bad) = expect.first_mismatch(&back) {
        return Err(bad);
    }
    Ok(mu)
}

struct ThetaFromMap<'a>(&'a BTreeMap<u32, i64>);

impl ThetaFromMap<'_> {
    fn first_mismatch(&self, back: &ThetaCoords) -> Option<u32> {
        let mut keys: BTreeSet<u32> = self.0.iter().filter(|(_, v)| **v != 0).map(|(k, _)| *k).collect();
        keys.extend(back.iter_twice().map(|(k, _)| k));
        keys.into_iter().find(|k| self.0.get(k).copied().unwrap_or(0) != back.get_twice(*k) as i64)
    }
}

/// Finite truncation ranks; `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Ranks {
    pub m: Option<u32>,
    pub n: Option<u32>,
}

impl Ranks {
    pub fn finite(m: u32, n: u32) -> Self {
        Ranks { m: Some(m), n: Some(n) }
    }

    pub fn infinite() -> Self {
        Ranks { m: None, n: None }
    }

    /// Whether a half-integer index lies in `-m < h < n+1`.
    pub fn contains(&self, i: Index) -> bool {
        match i {
            Index::Bar(_) => true,
            Index::Half(t) => {
                self.m.is_none_or(|m| t > -2 * m as i64) && self.n.is_none_or(|n| t < 2 * (n as i64 + 1))
            }
        }
    }
}

/// True iff every coefficient at `j <= -m` and `j >= n+1` vanishes.
pub fn survives_truncation(w: &Weight, ranks: Ranks) -> bool {
    w.support().all(|i| ranks.contains(i))
}

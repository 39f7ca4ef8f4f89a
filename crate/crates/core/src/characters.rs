//! Formal characters truncated at a depth: Verma and parabolic Verma
//! characters, irreducible and tilting characters assembled from Fock-space
//! (dual) canonical bases, truncation, and the `gl(k|2)` pipeline.
//!
//! A character is stored relative to its base weight `λ` and a Borel ordering
//! `o_0 ≺ o_1 ≺ …`: the key `d` stands for the weight `λ - Σ d_i (ε_{o_i} - ε_{o_{i+1}})`
//! and only keys with `Σ d_i <= depth` are kept.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::dynkin::{self, BorelOrdering, DynkinError, OddRoot};
use crate::fock::{self, FockError, Kind, Monomial, Shape};
use crate::lusztig::BasisKind;
use crate::partition::Partition;
use crate::weight::{from_weight, survives_truncation, to_weight, DominantTuple, Flavor, Index, Ranks, Weight, WeightError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Dynkin(#[from] DynkinError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("weight {0} is not below {1} in the ordering")]
    NotBelow(String, String),
    #[error("finite ranks (m, n) are required")]
    InfiniteRank,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
}

/// Simple-root coordinates of `λ - ν`.
pub type Drop = Vec<u32>;

pub fn height(d: &[u32]) -> u32 {
    d.iter().sum()
}

type Series = HashMap<Drop, i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharacter {
    pub base: Weight,
    pub borel: BorelOrdering,
    pub depth: u32,
    coeffs: BTreeMap<Drop, i64>,
}

impl FormalCharacter {
    pub fn zero(base: Weight, borel: BorelOrdering, depth: u32) -> Self {
        FormalCharacter { base, borel, depth, coeffs: BTreeMap::new() }
    }

    fn from_series(base: Weight, borel: BorelOrdering, depth: u32, s: Series) -> Self {
        let coeffs = s.into_iter().filter(|(d, c)| *c != 0 && height(d) <= depth).collect();
        FormalCharacter { base, borel, depth, coeffs }
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.borel.len().saturating_sub(1)
    }

    pub fn get(&self, d: &[u32]) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms sorted by height, then lexicographically.
    pub fn terms(&self) -> Vec<(Drop, i64)> {
        let mut v: Vec<(Drop, i64)> = self.coeffs.iter().map(|(d, c)| (d.clone(), *c)).collect();
        v.sort_by(|a, b| (height(&a.0), &a.0).cmp(&(height(&b.0), &b.0)));
        v
    }

    pub fn weight_at(&self, d: &[u32]) -> Weight {
        let order = self.borel.order();
        let mut w = self.base.clone();
        for (p, i) in order.iter().enumerate() {
            let here = d.get(p).copied().unwrap_or(0) as i64;
            let before = if p == 0 { 0 } else { d[p - 1] as i64 };
            w.add(*i, before - here);
        }
        w
    }

    /// Coordinates of `base - w`, or `None` if `w` is not below the base.
    pub fn drop_of(&self, w: &Weight) -> Option<Drop> {
        if w.level != self.base.level {
            return None;
        }
        let diff = self.base.sub(w);
        if diff.support().any(|i| !self.borel.contains(i)) {
            return None;
        }
        let order = self.borel.order();
        let mut d = Vec::with_capacity(self.rank());
        let mut acc = 0i64;
        for (p, i) in order.iter().enumerate() {
            acc += diff.coeff(*i);
            if p + 1 < order.len() {
                if acc < 0 {
                    return None;
                }
                d.push(acc as u32);
            }
        }
        (acc == 0).then_some(d)
    }

    /// Partial sums of `base - w` along the ordering, allowing negative entries.
    pub fn signed_drop(&self, w: &Weight) -> Option<Vec<i64>> {
        if w.level != self.base.level {
            return None;
        }
        let diff = self.base.sub(w);
        if diff.support().any(|i| !self.borel.contains(i)) {
            return None;
        }
        let mut acc = 0;
        let mut d: Vec<i64> = self.borel.order().iter().map(|i| {
            acc += diff.coeff(*i);
            acc
        }).collect();
        (d.pop() == Some(0) || d.is_empty() && acc == 0).then_some(d)
    }

    /// Adds `c · ch M(ν)` for the Verma module over this ordering, where `ν`
    /// may lie above the base.
    pub fn add_verma(&mut self, nu: &Weight, c: i64) {
        let Some(sd) = self.signed_drop(nu) else { return };
        let lift = self.depth as i64 - sd.iter().sum::<i64>();
        if lift < 0 {
            return;
        }
        let v = verma_character(nu, &self.borel, lift as u32);
        for (d, m) in &v.coeffs {
            let dd: Option<Drop> = d.iter().zip(&sd).map(|(x, y)| u32::try_from(*x as i64 + y).ok()).collect();
            if let Some(dd) = dd {
                self.add_term(dd, c * m);
            }
        }
    }

    /// The character as a map from weights to multiplicities.
    pub fn weights(&self) -> BTreeMap<Weight, i64> {
        self.coeffs.iter().map(|(d, c)| (self.weight_at(d), *c)).collect()
    }

    pub fn add_term(&mut self, d: Drop, c: i64) {
        if c == 0 || height(&d) > self.depth {
            return;
        }
        let e = self.coeffs.entry(d).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.retain(|_, v| *v != 0);
        }
    }

    /// Adds `c · other`, which must share the ordering and lie below the base.
    pub fn add_scaled(&mut self, other: &FormalCharacter, c: i64) -> Result<(), CharError> {
        if other.borel.order() != self.borel.order() {
            return Err(CharError::Integrity("characters over different orderings".into()));
        }
        let off = self.drop_of(&other.base).ok_or_else(|| CharError::NotBelow(other.base.to_string(), self.base.to_string()))?;
        for (d, v) in &other.coeffs {
            let dd: Drop = d.iter().zip(&off).map(|(a, b)| a + b).collect();
            self.add_term(dd, c * v);
        }
        Ok(())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| *c >= 0)
    }

    /// Same character at a smaller depth.
    pub fn truncate_depth(&self, depth: u32) -> FormalCharacter {
        let coeffs = self.coeffs.iter().filter(|(d, _)| height(d) <= depth).map(|(d, c)| (d.clone(), *c)).collect();
        FormalCharacter { base: self.base.clone(), borel: self.borel.clone(), depth, coeffs }
    }
}

impl fmt::Display for FormalCharacter {
    /// One line per term: height, drop vector, weight, multiplicity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base {} over {} (depth {})", self.base, self.borel, self.depth)?;
        for (d, c) in self.terms() {
            let dv: Vec<String> = d.iter().map(u32::to_string).collect();
            writeln!(f, "{}\t[{}]\t{}\t{}", height(&d), dv.join(","), self.weight_at(&d), c)?;
        }
        Ok(())
    }
}

fn root_vector(rank: usize, i: usize, j: usize) -> Drop {
    (0..rank).map(|p| (i <= p && p < j) as u32).collect()
}

fn add_vec(a: &[u32], b: &[u32]) -> Drop {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `s · (1 - e^{-β})^{-1}`.
fn mul_even(s: &Series, beta: &[u32], depth: u32) -> Series {
    let mut out = Series::new();
    for (d, c) in s {
        let mut e = d.clone();
        while height(&e) <= depth {
            *out.entry(e.clone()).or_insert(0) += c;
            e = add_vec(&e, beta);
        }
    }
    out
}

/// `s · (1 + e^{-β})`.
fn mul_odd(s: &Series, beta: &[u32], depth: u32) -> Series {
    let mut out = s.clone();
    for (d, c) in s {
        let e = add_vec(d, beta);
        if height(&e) <= depth {
            *out.entry(e).or_insert(0) += c;
        }
    }
    out
}

fn convolve(a: &Series, b: &Series, depth: u32) -> Series {
    let mut out = Series::new();
    for (x, c) in a {
        for (y, d) in b {
            let z = add_vec(x, y);
            if height(&z) <= depth {
                *out.entry(z).or_insert(0) += c * d;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `e^μ Π_{even α>0} (1 - e^{-α})^{-1} Π_{odd α>0} (1 + e^{-α})` for the Borel `b`.
pub fn verma_character(mu: &Weight, b: &BorelOrdering, depth: u32) -> FormalCharacter {
    let order = b.order();
    let rank = order.len().saturating_sub(1);
    let mut s = Series::from([(vec![0; rank], 1)]);
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            s = times_root(&s, rank, i, j, order[i].is_odd() != order[j].is_odd(), depth);
        }
    }
    FormalCharacter::from_series(mu.clone(), b.clone(), depth, s)
}

fn times_root(s: &Series, rank: usize, i: usize, j: usize, odd: bool, depth: u32) -> Series {
    let beta = root_vector(rank, i, j);
    if odd {
        mul_odd(s, &beta, depth)
    } else {
        mul_even(s, &beta, depth)
    }
}

/// The flavor's standard ordering on the window of ranks `(m, n)`.
pub fn flavor_borel(f: Flavor, k: usize, m: u32, n: u32) -> BorelOrdering {
    BorelOrdering::from_order(f.window(k, m, n))
}

fn finite(ranks: Ranks) -> Result<(u32, u32), CharError> {
    match (ranks.m, ranks.n) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(CharError::InfiniteRank),
    }
}

/// Levi block of an index: negative side, positive side, or a run of bars joined by `Y₀`.
fn levi_block(i: Index, y0: &BTreeSet<u32>) -> (u8, u32) {
    match i {
        Index::Bar(j) => {
            // Runs start at bars j with α_{(j-1)bar} ∉ Y₀.
            let mut start = j;
            while start > 1 && y0.contains(&(start - 1)) {
                start -= 1;
            }
            (1, start)
        }
        Index::Half(t) if t <= 0 => (0, 0),
        Index::Half(_) => (2, 0),
    }
}

/// Counts of hook-semistandard tableaux of shape `shape` by content.
///
/// Letters are `0..odd.len()` in increasing order; an even letter may repeat
/// along a row only, an odd letter down a column only.
fn hook_tableaux(shape: &[u32], odd: &[bool]) -> HashMap<Vec<u32>, i64> {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut counts = vec![0u32; odd.len()];
    let mut out = HashMap::new();
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        odd: &[bool],
        counts: &mut Vec<u32>,
        out: &mut HashMap<Vec<u32>, i64>,
    ) {
        if idx == cells.len() {
            *out.entry(counts.clone()).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[idx];
        for l in 0..odd.len() {
            if c > 0 {
                let left = grid[r][c - 1];
                if l < left || (l == left && odd[l]) {
                    continue;
                }
            }
            if r > 0 {
                let up = grid[r - 1][c];
                if l < up || (l == up && !odd[l]) {
                    continue;
                }
            }
            grid[r][c] = l;
            counts[l] += 1;
            go(idx + 1, cells, grid, odd, counts, out);
            counts[l] -= 1;
        }
    }
    go(0, &cells, &mut grid, odd, &mut counts, &mut out);
    out
}

/// Character of one Levi block as a series of drops below `top`.
///
/// `letters` are the block indices ordered from the highest-weight end; the
/// weight at a letter is `sign · count + offset`.
fn block_series(top: &FormalCharacter, letters: &[Index], shape: &[u32], sign: i64, offset: i64) -> Result<Series, CharError> {
    let odd: Vec<bool> = letters.iter().map(Index::is_odd).collect();
    let mut out = Series::new();
    for (counts, mult) in hook_tableaux(shape, &odd) {
        let mut w = top.base.clone();
        for (l, c) in letters.iter().zip(&counts) {
            w.set(*l, sign * *c as i64 + offset);
        }
        let d = top.drop_of(&w).ok_or_else(|| CharError::Integrity(format!("Levi weight {w} above {}", top.base)))?;
        if height(&d) <= top.depth {
            *out.entry(d).or_insert(0) += mult;
        }
    }
    if !out.contains_key(&vec![0; top.rank()]) {
        return Err(CharError::Integrity(format!("Levi block character misses its highest weight {}", top.base)));
    }
    Ok(out)
}

/// Parabolic Verma character `ch Δ(μ)` at ranks `(m, n)`; zero when `μ` does not survive.
pub fn parabolic_verma_character(t: &DominantTuple, f: Flavor, ranks: Ranks, depth: u32) -> Result<FormalCharacter, CharError> {
    let (m, n) = finite(ranks)?;
    let mu = to_weight(t, f)?;
    let borel = flavor_borel(f, t.k(), m, n);
    let top = FormalCharacter::zero(mu.clone(), borel.clone(), depth);
    if !survives_truncation(&mu, ranks) {
        return Ok(top);
    }
    let order = borel.order();
    let rank = top.rank();
    let neg: Vec<Index> = order.iter().rev().filter(|i| matches!(i, Index::Half(t) if *t <= 0)).copied().collect();
    let pos: Vec<Index> = order.iter().filter(|i| matches!(i, Index::Half(t) if *t > 0)).copied().collect();
    let mut s = Series::from([(vec![0; rank], 1)]);
    s = convolve(&s, &block_series(&top, &neg, t.minus.parts(), -1, 0)?, depth);
    s = convolve(&s, &block_series(&top, &pos, t.plus.parts(), 1, 0)?, depth);
    // Runs of bars joined by Y₀ carry finite gl characters of the shifted λ⁰.
    let mut runs: BTreeMap<u32, Vec<Index>> = BTreeMap::new();
    for i in order.iter().filter(|i| i.is_bar()) {
        runs.entry(levi_block(*i, &t.y0).1).or_default().push(*i);
    }
    for run in runs.values().filter(|r| r.len() > 1) {
        let vals: Vec<i64> = run.iter().map(|i| mu.coeff(*i)).collect();
        let low = *vals.last().unwrap();
        let shape: Vec<u32> = vals.iter().map(|v| (v - low) as u32).filter(|v| *v > 0).collect();
        s = convolve(&s, &block_series(&top, run, &shape, 1, low)?, depth);
    }
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if levi_block(order[i], &t.y0) == levi_block(order[j], &t.y0) && !order[i].is_bar() {
                continue;
            }
            if order[i].is_bar() && order[j].is_bar() && levi_block(order[i], &t.y0) == levi_block(order[j], &t.y0) {
                continue;
            }
            s = times_root(&s, rank, i, j, order[i].is_odd() != order[j].is_odd(), depth);
        }
    }
    Ok(FormalCharacter::from_series(mu, borel, depth, s))
}

/// Bijection between weights of a flavor at finite rank and monomials of
/// its Fock space.
///
/// Along the ordering, position `p` with parity sign `s_p` (`+1` even, `-1`
/// odd) and actual `gl` coefficient `g_p` gets the value `c_p = s_p g_p + t_p`,
/// where `t` starts at 0 and steps by `-1` between two even positions, `+1`
/// between two odd ones, `0` otherwise; the monomial index is `-c_p`.
pub struct Dictionary {
    pub flavor: Flavor,
    pub shape: Shape,
    order: Vec<Index>,
    t: Vec<i64>,
    level: i64,
}

impl Dictionary {
    pub fn new(f: Flavor, k: usize, m: u32, n: u32, level: i64) -> Result<Self, CharError> {
        if f == Flavor::Tilde {
            return Err(CharError::Unsupported("the tilde flavor has no Fock space of its own".into()));
        }
        let order = f.window(k, m, n);
        let neg = order.iter().filter(|i| matches!(i, Index::Half(t) if *t <= 0)).count();
        let pos = order.iter().filter(|i| matches!(i, Index::Half(t) if *t > 0)).count();
        let kind = |odd: bool| if odd { Kind::W } else { Kind::V };
        let shape = Shape { left: (kind(f.odd_negative()), neg), k, right: (kind(f.odd_positive()), pos) };
        let mut t = Vec::with_capacity(order.len());
        let mut cur = 0;
        for (p, i) in order.iter().enumerate() {
            if p > 0 {
                let prev = order[p - 1];
                cur += match (prev.is_odd(), i.is_odd()) {
                    (false, false) => -1,
                    (true, true) => 1,
                    _ => 0,
                };
            }
            t.push(cur);
        }
        Ok(Dictionary { flavor: f, shape, order, t, level })
    }

    /// Difference between the actual `gl` coefficient and the `Ê` coefficient.
    fn shift(&self, i: Index) -> i64 {
        match i {
            Index::Half(t) if t <= 0 => {
                if i.is_odd() {
                    -self.level
                } else {
                    self.level
                }
            }
            _ => 0,
        }
    }

    fn sign(i: Index) -> i64 {
        if i.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn monomial(&self, w: &Weight) -> Result<Monomial, CharError> {
        if w.level != self.level {
            return Err(CharError::Integrity(format!("weight {w} has level other than {}", self.level)));
        }
        let entries: Vec<i32> = self
            .order
            .iter()
            .zip(&self.t)
            .map(|(i, t)| -(Self::sign(*i) * (w.coeff(*i) + self.shift(*i)) + t) as i32)
            .collect();
        let (l, rest) = entries.split_at(self.shape.left.1);
        let (mid, r) = rest.split_at(self.shape.k);
        self.shape.monomial(l, mid, r).map_err(|_| CharError::Unsupported(format!("weight {w} is not Levi-dominant")))
    }

    pub fn weight(&self, m: &Monomial) -> Weight {
        let (l, rest) = m.0.split_at(self.shape.left.1);
        let (mid, r) = rest.split_at(self.shape.k);
        let arrange = |xs: &[i32], kind: Kind| -> Vec<i32> {
            let mut v = xs.to_vec();
            if kind == Kind::W {
                v.reverse();
            }
            v
        };
        let entries: Vec<i32> = arrange(l, self.shape.left.0).into_iter().chain(mid.iter().copied()).chain(arrange(r, self.shape.right.0)).collect();
        let mut w = Weight::level(self.level);
        for ((i, t), e) in self.order.iter().zip(&self.t).zip(entries) {
            let g = Self::sign(*i) * (-(e as i64) - t);
            w.add(*i, g - self.shift(*i));
        }
        w
    }
}

/// Cap on the Fock window margin past the admitted entries.
const MARGIN_CAP: i32 = 24;

/// Nonzero `q = 1` entries of the (dual) canonical basis element of `λ`
/// whose weights pass `keep`. The search is pruned to `admit`, a set closed
/// downward in the Borel of the flavor that contains every kept weight and
/// whose coefficients lie within `reach` of those of `λ`.
fn fock_column(
    dict: &Dictionary,
    lambda: &Weight,
    kind: BasisKind,
    reach: i32,
    admit: impl Fn(&Weight) -> bool,
    keep: impl Fn(&Weight) -> bool,
) -> Result<Vec<(Weight, i64)>, CharError> {
    let mon = dict.monomial(lambda)?;
    let col = fock::stable_column(dict.shape, &mon, kind, reach, MARGIN_CAP, |m| admit(&dict.weight(m)))?;
    Ok(col
        .into_iter()
        .map(|(m, c)| (dict.weight(&m), c.eval_one()))
        .filter(|(w, v)| *v != 0 && keep(w))
        .collect())
}

/// Vectors in `ℕ^rank` with coordinate sum at most `depth`.
fn drops_up_to(rank: usize, depth: u32) -> Vec<Drop> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        let mut next = Vec::new();
        for d in &out {
            let used = height(d);
            for x in 0..=depth - used {
                let mut e = d.clone();
                e.push(x);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Verma-expansion coefficients `a_{μλ}` (dual canonical) or Verma-flag
/// multiplicities (canonical) for every `μ` within `depth` of `λ`.
pub fn verma_coefficients(t: &DominantTuple, f: Flavor, ranks: Ranks, depth: u32, kind: BasisKind) -> Result<Vec<(DominantTuple, i64)>, CharError> {
    let (m, n) = finite(ranks)?;
    if !t.y0.is_empty() {
        return Err(CharError::Unsupported("irreducible and tilting characters need Y0 = {}".into()));
    }
    let k = t.k();
    let lam = to_weight(t, f)?;
    let top = FormalCharacter::zero(lam.clone(), flavor_borel(f, k, m, n), depth);
    if !survives_truncation(&lam, ranks) {
        return Ok(vec![]);
    }
    let within = |w: &Weight| top.drop_of(w).is_some_and(|d| height(&d) <= depth);
    let mut out = if f == Flavor::Tilde {
        tilde_coefficients(t, &top, kind)?
    } else {
        let dict = Dictionary::new(f, k, m, n, t.level)?;
        let mut out = Vec::new();
        for (w, a) in fock_column(&dict, &lam, kind, depth as i32, within, |_| true)? {
            let mu = from_weight(&w, f, k).map_err(|_| CharError::Integrity(format!("coefficient {a} on the non-dominant weight {w}")))?;
            out.push((mu, a));
        }
        out
    };
    let key = |mu: &DominantTuple| to_weight(mu, f).ok().and_then(|w| top.drop_of(&w)).map(|d| (height(&d), d));
    out.sort_by_key(|(mu, _)| key(mu));
    Ok(out)
}

/// Tilde coefficients come from the plain Fock space at a rank large enough
/// to hold every linked tilde-dominant weight within the depth.
fn tilde_coefficients(t: &DominantTuple, top: &FormalCharacter, kind: BasisKind) -> Result<Vec<(DominantTuple, i64)>, CharError> {
    let k = t.k();
    let mut cands: BTreeSet<DominantTuple> = BTreeSet::new();
    for d in drops_up_to(top.rank(), top.depth) {
        if let Ok(mu) = from_weight(&top.weight_at(&d), Flavor::Tilde, k) {
            cands.insert(mu);
        }
    }
    let rank_for = |set: &BTreeSet<DominantTuple>| {
        let m = set.iter().map(|mu| mu.minus.len()).max().unwrap_or(0) as u32;
        let n = set.iter().map(|mu| mu.plus.len()).max().unwrap_or(0) as u32;
        (m, n)
    };
    let content = |dict: &Dictionary, mu: &DominantTuple| -> Result<Vec<i32>, CharError> {
        let mut c = dict.monomial(&to_weight(mu, Flavor::Plain)?)?.0;
        c.sort_unstable();
        Ok(c)
    };
    let (m, n) = rank_for(&cands);
    let wide = Dictionary::new(Flavor::Plain, k, m, n, t.level)?;
    let target = content(&wide, t)?;
    let mut linked = BTreeSet::new();
    for mu in cands {
        if content(&wide, &mu)? == target {
            linked.insert(mu);
        }
    }
    let (m, n) = rank_for(&linked);
    let dict = Dictionary::new(Flavor::Plain, k, m, n, t.level)?;
    let keep = |w: &Weight| from_weight(w, Flavor::Plain, k).is_ok_and(|mu| linked.contains(&mu));
    let mut out = Vec::new();
    for (w, a) in fock_column(&dict, &to_weight(t, Flavor::Plain)?, kind, 0, |_| true, keep)? {
        out.push((from_weight(&w, Flavor::Plain, k)?, a));
    }
    Ok(out)
}

/// A character together with the Verma terms it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembled {
    pub character: FormalCharacter,
    pub terms: Vec<(DominantTuple, i64)>,
}

fn assemble(t: &DominantTuple, f: Flavor, ranks: Ranks, depth: u32, kind: BasisKind) -> Result<Assembled, CharError> {
    let (m, n) = finite(ranks)?;
    let lam = to_weight(t, f)?;
    let mut character = FormalCharacter::zero(lam, flavor_borel(f, t.k(), m, n), depth);
    let terms = verma_coefficients(t, f, ranks, depth, kind)?;
    for (mu, a) in &terms {
        character.add_scaled(&parabolic_verma_character(mu, f, ranks, depth)?, *a)?;
    }
    Ok(Assembled { character, terms })
}

/// `ch L(λ) = Σ_μ a_{μλ} ch Δ(μ)` at ranks `(m, n)`, with `a` read from the
/// dual canonical basis.
pub fn irreducible_character(t: &DominantTuple, f: Flavor, ranks: Ranks, depth: u32) -> Result<Assembled, CharError> {
    assemble(t, f, ranks, depth, BasisKind::Dual)
}

/// Parabolic Verma multiplicities of a tilting module, bottom first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VermaFlag {
    pub entries: Vec<(Weight, i64)>,
}

pub fn tilting_character(t: &DominantTuple, f: Flavor, ranks: Ranks, depth: u32) -> Result<(FormalCharacter, VermaFlag), CharError> {
    let a = assemble(t, f, ranks, depth, BasisKind::Canonical)?;
    let mut entries = Vec::with_capacity(a.terms.len());
    for (mu, c) in &a.terms {
        if *c <= 0 {
            return Err(CharError::Integrity(format!("tilting multiplicity {c} at {mu}")));
        }
        entries.push((to_weight(mu, f)?, *c));
    }
    if let Some(first) = entries.first() {
        if first != &(to_weight(t, f)?, 1) {
            return Err(CharError::Integrity("tilting flag does not start with (λ, 1)".into()));
        }
    }
    Ok((a.character, VermaFlag { entries }))
}

/// Recovers `a_{μλ}` from a character by peeling off parabolic Verma
/// characters in order of height.
pub fn extract_verma_coefficients(ch: &FormalCharacter, f: Flavor, k: usize, ranks: Ranks) -> Result<Vec<(DominantTuple, i64)>, CharError> {
    let mut rest = ch.clone();
    let mut out = Vec::new();
    while let Some((d, c)) = rest.terms().into_iter().next() {
        let w = rest.weight_at(&d);
        let mu = from_weight(&w, f, k).map_err(|_| CharError::Integrity(format!("leading weight {w} is not dominant")))?;
        rest.add_scaled(&parabolic_verma_character(&mu, f, ranks, ch.depth)?, -c)?;
        out.push((mu, c));
    }
    Ok(out)
}

/// Keeps the weights supported in the `(m, n)` window; zero if the base is not.
pub fn truncate_character(c: &FormalCharacter, ranks: Ranks) -> FormalCharacter {
    let order: Vec<Index> = c.borel.order().iter().filter(|i| ranks.contains(**i)).copied().collect();
    let mut out = FormalCharacter::zero(c.base.clone(), BorelOrdering::from_order(order), c.depth);
    if !survives_truncation(&c.base, ranks) {
        return out;
    }
    for (d, v) in &c.coeffs {
        let w = c.weight_at(d);
        if survives_truncation(&w, ranks) {
            if let Some(nd) = out.drop_of(&w) {
                out.add_term(nd, *v);
            }
        }
    }
    out
}

/// Borel subalgebras of `gl(k|2)` on `-1/2, 1̄, …, k̄, 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GlK2Borel {
    /// `1̄ ≺ … ≺ k̄ ≺ -1/2 ≺ 1/2`.
    Standard,
    /// `-1/2 ≺ 1̄ ≺ … ≺ k̄ ≺ 1/2`.
    Nonstandard,
}

impl GlK2Borel {
    pub fn ordering(self, k: usize) -> BorelOrdering {
        let mut order: Vec<Index> = (1..=k as u32).map(Index::Bar).collect();
        match self {
            GlK2Borel::Standard => order.extend([Index::Half(-1), Index::Half(1)]),
            GlK2Borel::Nonstandard => {
                order.insert(0, Index::Half(-1));
                order.push(Index::Half(1));
            }
        }
        BorelOrdering::from_order(order)
    }
}

/// A `gl(k|2)` character in actual coordinates (level 0) with its Verma terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlK2Character {
    pub character: FormalCharacter,
    pub terms: Vec<(Weight, i64)>,
}

/// Supertrace weight `Σ ε_ī - ε_{-1/2} - ε_{1/2}`.
fn supertrace(k: usize, c: i64) -> Weight {
    let mut w = Weight::from_coeffs(0, (1..=k as u32).map(|j| (Index::Bar(j), c)));
    w.add(Index::Half(-1), -c);
    w.add(Index::Half(1), -c);
    w
}

/// Irreducible `gl(k|2)` character of highest weight `mu` for the chosen Borel.
///
/// The weight is twisted by a power of the supertrace so that its `1/2`
/// coefficient vanishes, read as the tuple `(-p, λ⁰; ∅, ∅)` in the
/// bar-diamond flavor at ranks `(1, 0)`, expanded there, and untwisted.
/// For the standard Borel the highest weight is first moved to the
/// nonstandard one by odd reflections and the Verma labels are shifted by
/// `Σ ε_ī - k ε_{-1/2}`.
pub fn gl_k2_character(mu: &Weight, k: usize, borel: GlK2Borel, depth: u32) -> Result<GlK2Character, CharError> {
    let ordering = borel.ordering(k);
    if mu.level != 0 || mu.support().any(|i| !ordering.contains(i)) {
        return Err(CharError::Unsupported(format!("{mu} is not an integral gl({k}|2) weight")));
    }
    let nonstandard = GlK2Borel::Nonstandard.ordering(k);
    let lam_ns = match borel {
        GlK2Borel::Nonstandard => mu.clone(),
        GlK2Borel::Standard => {
            let seq: Vec<OddRoot> = (1..=k as u32).rev().map(|j| OddRoot::new(Index::Bar(j), Index::Half(-1))).collect::<Result<_, _>>()?;
            let (b, w) = dynkin::fold(&ordering, mu, &seq)?;
            if b.order() != nonstandard.order() {
                return Err(CharError::Integrity(format!("reflections reached {b}, not {nonstandard}")));
            }
            w
        }
    };
    let twist = supertrace(k, lam_ns.coeff(Index::Half(1)));
    let lam_tw = lam_ns.plus(&twist);
    let p = lam_tw.coeff(Index::Half(-1));
    let lambda0: Vec<i64> = (1..=k as u32).map(|j| lam_tw.coeff(Index::Bar(j))).collect();
    let tuple = DominantTuple::new(-p, lambda0, Partition::empty(), Partition::empty());
    let dict = Dictionary::new(Flavor::BarDiamond, k, 1, 0, -p)?;
    let shift = match borel {
        GlK2Borel::Nonstandard => Weight::zero(),
        GlK2Borel::Standard => {
            let mut s = Weight::from_coeffs(0, (1..=k as u32).map(|j| (Index::Bar(j), 1)));
            s.add(Index::Half(-1), -(k as i64));
            s
        }
    };
    // Ê-weight at level -p to the twisted actual weight, then to the requested Verma label.
    let actual = |w: &Weight| -> Weight {
        let mut a = Weight::from_coeffs(0, w.iter());
        a.add(Index::Half(-1), p);
        a
    };
    let relabel = |w: &Weight| actual(w).sub(&twist).plus(&shift);
    // Standard labels may sit above μ; their Vermas still reach the window.
    // The odd simple root occurs at most 2k times in a sum of distinct odd roots.
    let mut character = FormalCharacter::zero(mu.clone(), ordering.clone(), depth);
    let odd_slot = (borel == GlK2Borel::Standard && k > 0).then(|| k - 1);
    let reaches = |sd: &[i64]| sd.iter().map(|x| x.max(&0)).sum::<i64>() <= depth as i64 && odd_slot.is_none_or(|p| sd[p] >= -2 * k as i64);
    let within = |w: &Weight| character.signed_drop(&relabel(w)).is_some_and(|sd| reaches(&sd));
    // Per-coordinate bounds on the nonstandard drop that cover every label passing `within`.
    let ns_top = FormalCharacter::zero(lam_tw.clone(), nonstandard.clone(), 0);
    let admit = |w: &Weight| {
        ns_top.drop_of(&actual(w)).is_some_and(|e| match borel {
            GlK2Borel::Nonstandard => height(&e) <= depth,
            GlK2Borel::Standard => e.iter().enumerate().all(|(j, x)| *x as usize <= depth as usize + 2 * k + j),
        })
    };
    let lam_hat = to_weight(&tuple, Flavor::BarDiamond)?;
    let reach = (depth as usize + 3 * k) as i32;
    let mut terms: Vec<(Weight, i64)> = fock_column(&dict, &lam_hat, BasisKind::Dual, reach, admit, within)?.into_iter().map(|(w, a)| (relabel(&w), a)).collect();
    terms.sort_by_key(|(w, _)| character.signed_drop(w).map(|sd| (sd.iter().sum::<i64>(), sd)));
    for (w, a) in &terms {
        character.add_verma(w, *a);
    }
    if character.get(&vec![0; k + 1]) != 1 {
        return Err(CharError::Integrity(format!("character of {mu} has multiplicity other than 1 at the top")));
    }
    Ok(GlK2Character { character, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn verma_depth_zero_and_single_odd_root() {
        let b: BorelOrdering = "0 < 1/2".parse().unwrap();
        let mu = Weight::from_coeffs(0, [(Index::int(0), 2)]);
        assert_eq!(verma_character(&mu, &b, 0).terms(), vec![(vec![0], 1)]);
        assert_eq!(verma_character(&mu, &b, 5).terms(), vec![(vec![0], 1), (vec![1], 1)]);
        let even: BorelOrdering = "0 < 1".parse().unwrap();
        assert_eq!(verma_character(&mu, &even, 3).len(), 4);
    }

    #[test]
    fn drop_round_trip() {
        let b: BorelOrdering = "-1/2 < bar1 < 0 < 1/2".parse().unwrap();
        let ch = FormalCharacter::zero(Weight::from_coeffs(3, [(Index::bar(1), 2)]), b, 4);
        for d in drops_up_to(3, 3) {
            assert_eq!(ch.drop_of(&ch.weight_at(&d)), Some(d));
        }
        assert_eq!(ch.drop_of(&Weight::from_coeffs(3, [(Index::bar(1), 3), (Index::int(0), -1)])), None);
    }

    #[test]
    fn hook_tableaux_counts() {
        // s_(1,1)(x1, x2, x3) has 3 terms; shape (2,1) over one even and one odd letter has 2.
        let t = hook_tableaux(&[1, 1], &[false, false, false]);
        assert_eq!(t.values().sum::<i64>(), 3);
        let t = hook_tableaux(&[2, 1], &[false, true]);
        assert_eq!(t.values().sum::<i64>(), 2);
        // Odd letters only: shape λ behaves like λ' over even letters.
        assert_eq!(hook_tableaux(&[2], &[true, true]).values().sum::<i64>(), 1);
        assert_eq!(hook_tableaux(&[1, 1], &[true, true]).values().sum::<i64>(), 3);
    }

    #[test]
    fn dictionary_round_trip() {
        for f in [Flavor::Plain, Flavor::Bar, Flavor::Diamond, Flavor::BarDiamond] {
            for (lm, lp) in [(vec![], vec![]), (vec![1], vec![2]), (vec![2, 1], vec![1, 1])] {
                let t = DominantTuple::new(-1, vec![2, -1], part(&lm), part(&lp));
                let w = to_weight(&t, f).unwrap();
                let dict = Dictionary::new(f, 2, 2, 2, -1).unwrap();
                assert_eq!(dict.weight(&dict.monomial(&w).unwrap()), w, "{f} {t}");
            }
        }
    }

    #[test]
    fn gl2_trivial_is_one_dimensional() {
        // Plain at ranks (1, 1) with k = 0 is gl(2) on indices 0, 1.
        let t = DominantTuple::trivial(0, 0);
        let a = irreducible_character(&t, Flavor::Plain, Ranks::finite(1, 1), 5).unwrap();
        assert_eq!(a.terms.len(), 2);
        assert_eq!(a.character.terms(), vec![(vec![0], 1)]);
    }

    #[test]
    fn non_interacting_block_is_single_verma() {
        // gl(1|1) typical weight.
        let t = DominantTuple::new(0, vec![3], Partition::empty(), Partition::empty());
        let a = irreducible_character(&t, Flavor::Bar, Ranks::finite(0, 0), 4).unwrap();
        assert_eq!(a.terms, vec![(t.clone(), 1)]);
        let v = parabolic_verma_character(&t, Flavor::Bar, Ranks::finite(0, 0), 4).unwrap();
        assert_eq!(a.character, v);
        let (_, flag) = tilting_character(&t, Flavor::Bar, Ranks::finite(0, 0), 4).unwrap();
        assert_eq!(flag.entries, vec![(to_weight(&t, Flavor::Bar).unwrap(), 1)]);
    }

    #[test]
    fn truncation_identity_and_zero() {
        let t = DominantTuple::new(0, vec![1], part(&[1]), part(&[2]));
        let a = irreducible_character(&t, Flavor::Plain, Ranks::finite(1, 1), 3).unwrap();
        assert_eq!(truncate_character(&a.character, Ranks::infinite()), a.character);
        let z = truncate_character(&a.character, Ranks::finite(0, 1));
        assert!(z.is_zero());
    }

    #[test]
    fn gl_k2_trivial_module() {
        for k in 0..=3 {
            for borel in [GlK2Borel::Standard, GlK2Borel::Nonstandard] {
                let c = gl_k2_character(&Weight::zero(), k, borel, 6).unwrap();
                assert_eq!(c.character.terms(), vec![(vec![0; k + 1], 1)], "k={k} {borel:?}");
            }
        }
    }
}

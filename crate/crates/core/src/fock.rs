//! The q-Fock spaces `∧^m X ⊗ 𝕍^{⊗k} ⊗ ∧^n Y` (with `X, Y ∈ {𝕍, 𝕎}`) over a
//! finite index window, their bar involution, and (dual) canonical bases.
//!
//! Conventions: `𝕍` has basis `v_i` of weight `ε_i`, `𝕎` has basis `w_i` of
//! weight `-ε_i`, and `F_i` lowers by `α_i = ε_i - ε_{i+1}`, so
//! `F_i v_i = v_{i+1}` and `F_i w_{i+1} = w_i`. The coproduct is
//! `Δ(F_i) = F_i ⊗ K_i + 1 ⊗ F_i`. A wedge factor `∧^p` is the minuscule module
//! with basis indexed by `p`-subsets, on which `E_i`, `F_i` act by moving one
//! element with coefficient 1.

use std::cell::RefCell;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::hecke::Perm;
use crate::lusztig::{self, BasisKind, Column, LusztigError};
use crate::poly::LaurentPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FockError {
    #[error("window exhausted: coefficients still changing at margin {margin} (cap {cap})")]
    WindowExhausted { margin: i32, cap: i32 },
    #[error("monomial {0} lies outside the window [{1}, {2}]")]
    OutsideWindow(String, i32, i32),
    #[error("monomials {0} and {1} have different content")]
    NotLinked(String, String),
    #[error("bad monomial `{0}`: {1}")]
    BadMonomial(String, String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error(transparent)]
    Lusztig(#[from] LusztigError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    V,
    W,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::V => 'v',
            Kind::W => 'w',
        }
    }

    fn sign(self) -> i32 {
        match self {
            Kind::V => 1,
            Kind::W => -1,
        }
    }
}

/// `∧^{left.1} left.0 ⊗ 𝕍^{⊗k} ⊗ ∧^{right.1} right.0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub left: (Kind, usize),
    pub k: usize,
    pub right: (Kind, usize),
}

impl Shape {
    /// `∧^m 𝕎 ⊗ 𝕍^{⊗k} ⊗ ∧^n 𝕎`.
    pub fn mixed(m: usize, k: usize, n: usize) -> Self {
        Shape { left: (Kind::W, m), k, right: (Kind::W, n) }
    }

    /// `∧^m 𝕍 ⊗ 𝕍^{⊗k} ⊗ ∧^n 𝕍`.
    pub fn plain(m: usize, k: usize, n: usize) -> Self {
        Shape { left: (Kind::V, m), k, right: (Kind::V, n) }
    }

    pub fn is_all_v(&self) -> bool {
        (self.left.1 == 0 || self.left.0 == Kind::V) && (self.right.1 == 0 || self.right.0 == Kind::V)
    }

    /// Nonempty factors in tensor order.
    pub fn factors(&self) -> Vec<(Kind, usize)> {
        let mut out = Vec::new();
        if self.left.1 > 0 {
            out.push(self.left);
        }
        out.extend(std::iter::repeat_n((Kind::V, 1), self.k));
        if self.right.1 > 0 {
            out.push(self.right);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.left.1 + self.k + self.right.1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Builds a monomial from the three groups; wedge entries in any order.
    pub fn monomial(&self, left: &[i32], middle: &[i32], right: &[i32]) -> Result<Monomial, FockError> {
        let bad = |why: &str| FockError::BadMonomial(format!("{left:?}|{middle:?}|{right:?}"), why.to_string());
        if left.len() != self.left.1 || middle.len() != self.k || right.len() != self.right.1 {
            return Err(bad("group sizes do not match the shape"));
        }
        let wedge = |group: &[i32]| {
            let mut g = group.to_vec();
            g.sort_unstable();
            if g.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad("repeated index in a wedge"));
            }
            Ok(g)
        };
        let mut out = wedge(left)?;
        out.extend_from_slice(middle);
        out.extend(wedge(right)?);
        Ok(Monomial(out))
    }

    /// `w[3,1]|v[2,2]|w[5]`: wedges listed decreasingly.
    pub fn format(&self, m: &Monomial) -> String {
        let (l, rest) = m.0.split_at(self.left.1);
        let (mid, r) = rest.split_at(self.k);
        let group = |kind: Kind, xs: &[i32], rev: bool| {
            let mut v: Vec<String> = xs.iter().map(i32::to_string).collect();
            if rev {
                v.reverse();
            }
            format!("{}[{}]", kind.letter(), v.join(","))
        };
        format!("{}|{}|{}", group(self.left.0, l, true), group(Kind::V, mid, false), group(self.right.0, r, true))
    }

    pub fn parse(&self, s: &str) -> Result<Monomial, FockError> {
        let bad = |why: &str| FockError::BadMonomial(s.to_string(), why.to_string());
        let groups: Vec<&str> = s.trim().split('|').collect();
        if groups.len() != 3 {
            return Err(bad("expected three `|`-separated groups"));
        }
        let mut parsed = Vec::new();
        for (g, kind) in groups.iter().zip([self.left.0, Kind::V, self.right.0]) {
            let g = g.trim();
            let inner = g
                .strip_prefix(kind.letter())
                .and_then(|x| x.strip_prefix('['))
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| bad("group must look like v[..] or w[..] matching the shape"))?;
            let vals = if inner.trim().is_empty() {
                vec![]
            } else {
                inner.split(',').map(|x| x.trim().parse::<i32>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("entries must be integers"))?
            };
            parsed.push(vals);
        }
        self.monomial(&parsed[0], &parsed[1], &parsed[2])
    }
}

/// Standard basis element; wedge entries stored ascending, factors concatenated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Net multiplicity of each `ε_i`: `+1` per `v_i`, `-1` per `w_i`.
pub type Content = BTreeMap<i32, i32>;

/// Vectors over prefixes of any length.
type Vector = BTreeMap<Vec<i32>, LaurentPoly>;

fn add_into(acc: &mut Vector, key: Vec<i32>, c: &LaurentPoly) {
    if c.is_zero() {
        return;
    }
    match acc.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// The space restricted to indices `lo..=hi`, acting through `U_q(gl)` of that window.
pub struct FockSpace {
    pub shape: Shape,
    pub lo: i32,
    pub hi: i32,
    factors: Vec<(Kind, usize)>,
    offsets: Vec<usize>,
    memo: RefCell<HashMap<(usize, Vec<i32>), Vector>>,
}

impl FockSpace {
    pub fn new(shape: Shape, lo: i32, hi: i32) -> Self {
        let factors = shape.factors();
        let mut offsets = vec![0];
        for (_, p) in &factors {
            offsets.push(offsets.last().unwrap() + p);
        }
        FockSpace { shape, lo, hi, factors, offsets, memo: RefCell::new(HashMap::new()) }
    }

    pub fn content(&self, m: &Monomial) -> Content {
        content_of(&self.factors, &m.0)
    }

    fn check_window(&self, m: &Monomial) -> Result<(), FockError> {
        if m.0.iter().any(|&x| x < self.lo || x > self.hi) {
            return Err(FockError::OutsideWindow(self.shape.format(m), self.lo, self.hi));
        }
        Ok(())
    }

    /// `K_i` eigenvalue exponent `⟨wt, α_i⟩` of a monomial.
    pub fn k_exponent(&self, i: i32, m: &Monomial) -> i32 {
        (0..self.factors.len()).map(|j| pairing(i, self.factors[j].0, self.slot(&m.0, j))).sum()
    }

    fn slot<'a>(&self, x: &'a [i32], j: usize) -> &'a [i32] {
        &x[self.offsets[j]..self.offsets[j + 1]]
    }

    /// `F_i` on the first `r` factors of `x`.
    fn f_prefix(&self, i: i32, r: usize, x: &[i32]) -> Vec<(Vec<i32>, LaurentPoly)> {
        let mut out = Vec::new();
        // Exponent of K_i acting on factors after j.
        let mut tail = 0;
        for j in (0..r).rev() {
            let (kind, _) = self.factors[j];
            let s = self.slot(x, j);
            if let Some(ns) = move_one(kind, s, i, true) {
                let mut y = x[..self.offsets[r]].to_vec();
                y[self.offsets[j]..self.offsets[j + 1]].copy_from_slice(&ns);
                out.push((y, LaurentPoly::monomial(1, tail)));
            }
            tail += pairing(i, kind, s);
        }
        out
    }

    fn e_prefix(&self, i: i32, r: usize, x: &[i32]) -> Vec<(Vec<i32>, LaurentPoly)> {
        // Δ(E_i) = E_i ⊗ 1 + K_i^{-1} ⊗ E_i.
        let mut out = Vec::new();
        let mut head = 0;
        for j in 0..r {
            let (kind, _) = self.factors[j];
            let s = self.slot(x, j);
            if let Some(ns) = move_one(kind, s, i, false) {
                let mut y = x[..self.offsets[r]].to_vec();
                y[self.offsets[j]..self.offsets[j + 1]].copy_from_slice(&ns);
                out.push((y, LaurentPoly::monomial(1, -head)));
            }
            head += pairing(i, kind, s);
        }
        out
    }

    fn f_vec(&self, i: i32, r: usize, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (x, c) in v {
            for (y, d) in self.f_prefix(i, r, x) {
                add_into(&mut out, y, &(&d * c));
            }
        }
        out
    }

    /// Bar involution on the first `r` factors of a monomial.
    fn psi(&self, r: usize, x: &[i32]) -> Vector {
        if r == 0 {
            return Vector::from([(vec![], LaurentPoly::one())]);
        }
        let key = (r, x.to_vec());
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let (kind, size) = self.factors[r - 1];
        let b = self.slot(x, r - 1);
        let prefix = &x[..self.offsets[r - 1]];
        let out = if is_highest(kind, size, b, self.lo, self.hi) {
            self.psi(r - 1, prefix)
                .into_iter()
                .map(|(mut y, c)| {
                    y.extend_from_slice(b);
                    (y, c)
                })
                .collect()
        } else {
            // b = F_i b' for the smallest raisable i.
            let (i, bp) = (self.lo..self.hi).find_map(|i| move_one(kind, b, i, false).map(|bp| (i, bp))).expect("non-highest factor can be raised");
            let mut xb = prefix.to_vec();
            xb.extend_from_slice(&bp);
            let mut out = self.f_vec(i, r, &self.psi(r, &xb));
            let coeff = LaurentPoly::monomial(-1, -pairing(i, kind, &bp));
            for (y, c) in self.f_prefix(i, r - 1, prefix) {
                let mut yb = y;
                yb.extend_from_slice(&bp);
                let cb = &coeff * &c.bar();
                for (z, d) in self.psi(r, &yb) {
                    add_into(&mut out, z, &(&d * &cb));
                }
            }
            out
        };
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `ψ` of a monomial.
    pub fn bar_monomial(&self, m: &Monomial) -> Result<BTreeMap<Monomial, LaurentPoly>, FockError> {
        self.check_window(m)?;
        Ok(self.psi(self.factors.len(), &m.0).into_iter().map(|(k, v)| (Monomial(k), v)).collect())
    }

    /// `ψ` of a vector (antilinear).
    pub fn bar(&self, x: &BTreeMap<Monomial, LaurentPoly>) -> Result<BTreeMap<Monomial, LaurentPoly>, FockError> {
        let mut out = Vector::new();
        for (m, c) in x {
            let cb = c.bar();
            for (k, v) in self.bar_monomial(m)? {
                add_into(&mut out, k.0, &(&v * &cb));
            }
        }
        Ok(out.into_iter().map(|(k, v)| (Monomial(k), v)).collect())
    }

    /// `F_i`, `E_i` on a vector.
    pub fn chevalley(&self, gen: Generator, i: i32, x: &BTreeMap<Monomial, LaurentPoly>) -> BTreeMap<Monomial, LaurentPoly> {
        let r = self.factors.len();
        let mut out = Vector::new();
        for (m, c) in x {
            match gen {
                Generator::K => add_into(&mut out, m.0.clone(), &c.shift(self.k_exponent(i, m))),
                Generator::F | Generator::E => {
                    if i < self.lo || i >= self.hi {
                        continue;
                    }
                    let terms = if gen == Generator::F { self.f_prefix(i, r, &m.0) } else { self.e_prefix(i, r, &m.0) };
                    for (y, d) in terms {
                        add_into(&mut out, y, &(&d * c));
                    }
                }
            }
        }
        out.into_iter().map(|(k, v)| (Monomial(k), v)).collect()
    }

    /// All monomials in the window with the given content, in lexicographic order.
    pub fn monomials_with_content(&self, content: &Content) -> Vec<Monomial> {
        // Choose the 𝕍 factors; the content then fixes the multiset of 𝕎 indices.
        let v_slots: Vec<usize> = (0..self.factors.len()).filter(|j| self.factors[*j].0 == Kind::V).collect();
        let w_slots: Vec<usize> = (0..self.factors.len()).filter(|j| self.factors[*j].0 == Kind::W).collect();
        let window: Vec<i32> = (self.lo..=self.hi).collect();
        let mut choice = vec![Vec::new(); self.factors.len()];
        let mut out = Vec::new();
        self.choose_v(0, &v_slots, &w_slots, &window, &mut choice, &mut Content::new(), content, &mut out);
        out.sort();
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn choose_v(
        &self,
        idx: usize,
        v_slots: &[usize],
        w_slots: &[usize],
        window: &[i32],
        choice: &mut Vec<Vec<i32>>,
        vcount: &mut Content,
        target: &Content,
        out: &mut Vec<Monomial>,
    ) {
        let w_total: usize = w_slots.iter().map(|j| self.factors[*j].1).sum();
        // Excess of 𝕍 over the target must fit in the 𝕎 wedges, each holding an index at most once.
        let excess_ok = |vcount: &Content| {
            let mut total = 0;
            for (x, v) in vcount {
                let d = v - target.get(x).copied().unwrap_or(0);
                if d > w_slots.len() as i32 {
                    return false;
                }
                total += d.max(0) as usize;
            }
            total <= w_total
        };
        if idx == v_slots.len() {
            let mut need = Content::new();
            for x in vcount.keys().chain(target.keys()) {
                let d = vcount.get(x).copied().unwrap_or(0) - target.get(x).copied().unwrap_or(0);
                if d < 0 {
                    return;
                }
                if d > 0 {
                    need.insert(*x, d);
                }
            }
            if need.values().sum::<i32>() as usize == w_total {
                self.choose_w(0, w_slots, choice, &mut need, out);
            }
            return;
        }
        let j = v_slots[idx];
        for set in combinations(window, self.factors[j].1) {
            for &x in &set {
                *vcount.entry(x).or_insert(0) += 1;
            }
            if excess_ok(vcount) {
                choice[j] = set.clone();
                self.choose_v(idx + 1, v_slots, w_slots, window, choice, vcount, target, out);
            }
            for &x in &set {
                *vcount.entry(x).or_insert(0) -= 1;
            }
        }
    }

    fn choose_w(&self, idx: usize, w_slots: &[usize], choice: &mut Vec<Vec<i32>>, need: &mut Content, out: &mut Vec<Monomial>) {
        if idx == w_slots.len() {
            if need.values().all(|v| *v == 0) {
                out.push(Monomial(choice.concat()));
            }
            return;
        }
        let j = w_slots[idx];
        let avail: Vec<i32> = need.iter().filter(|(_, v)| **v > 0).map(|(x, _)| *x).collect();
        for set in combinations(&avail, self.factors[j].1) {
            for x in &set {
                *need.get_mut(x).unwrap() -= 1;
            }
            choice[j] = set.clone();
            self.choose_w(idx + 1, w_slots, choice, need, out);
            for x in &set {
                *need.get_mut(x).unwrap() += 1;
            }
        }
    }

    /// The basis element labelled `lambda`, computed on the monomials reachable
    /// from it through `ψ` and accepted by `admit`.
    ///
    /// `admit` must be closed downward: a rejected monomial may not lead to an
    /// accepted one. Only then do the kept entries agree with [`Block::column`].
    pub fn column_pruned(&self, lambda: &Monomial, kind: BasisKind, admit: impl Fn(&Monomial) -> bool) -> Result<BTreeMap<Monomial, LaurentPoly>, FockError> {
        self.check_window(lambda)?;
        let mut found = vec![lambda.clone()];
        let mut index = HashMap::from([(lambda.clone(), 0usize)]);
        let mut psi: Vec<Column> = Vec::new();
        while psi.len() < found.len() {
            let m = found[psi.len()].clone();
            let mut col = Column::new();
            for (y, c) in self.psi(self.factors.len(), &m.0) {
                let y = Monomial(y);
                if y != m && !admit(&y) {
                    continue;
                }
                let next = found.len();
                let yi = *index.entry(y.clone()).or_insert_with(|| {
                    found.push(y);
                    next
                });
                col.insert(yi, c);
            }
            psi.push(col);
        }
        let order = lusztig::triangular_order(&psi)?;
        let psi = lusztig::permute(&psi, &order);
        let col = lusztig::solve_column(&psi, psi.len() - 1, kind)?;
        if order.last() != Some(&0) {
            return Err(FockError::Integrity(format!("{} is not maximal among its descendants", self.shape.format(lambda))));
        }
        Ok(col.into_iter().map(|(i, c)| (found[order[i]].clone(), c)).collect())
    }

    /// The content block of `m` with its bar matrix and both bases.
    pub fn block_of(&self, m: &Monomial) -> Result<Block, FockError> {
        self.check_window(m)?;
        self.block(&self.content(m))
    }

    pub fn block(&self, content: &Content) -> Result<Block, FockError> {
        let found = self.monomials_with_content(content);
        let index: HashMap<Monomial, usize> = found.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut psi: Vec<Column> = Vec::with_capacity(found.len());
        for m in &found {
            let mut col = Column::new();
            for (y, c) in self.psi(self.factors.len(), &m.0) {
                let yi = index.get(&Monomial(y.clone())).ok_or_else(|| {
                    FockError::Integrity(format!("bar of {} leaves its content block", self.shape.format(m)))
                })?;
                col.insert(*yi, c);
            }
            psi.push(col);
        }
        let order = lusztig::triangular_order(&psi)?;
        let psi = lusztig::permute(&psi, &order);

        let monomials: Vec<Monomial> = order.iter().map(|&i| found[i].clone()).collect();
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let canonical = lusztig::solve(&psi, BasisKind::Canonical)?;
        let dual = lusztig::solve(&psi, BasisKind::Dual)?;
        Ok(Block { shape: self.shape, lo: self.lo, hi: self.hi, monomials, index, psi, canonical, dual })
    }
}

/// Chevalley generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    K,
}

fn content_of(factors: &[(Kind, usize)], x: &[i32]) -> Content {
    let mut c = Content::new();
    let mut off = 0;
    for (kind, size) in factors {
        for &v in &x[off..off + size] {
            *c.entry(v).or_insert(0) += kind.sign();
        }
        off += size;
    }
    c.retain(|_, v| *v != 0);
    c
}

/// `⟨wt(S), α_i⟩` for one factor.
fn pairing(i: i32, kind: Kind, s: &[i32]) -> i32 {
    let has = |x: i32| s.binary_search(&x).is_ok() as i32;
    kind.sign() * (has(i) - has(i + 1))
}

/// `F_i` (`lower = true`) or `E_i` on a single factor.
fn move_one(kind: Kind, s: &[i32], i: i32, lower: bool) -> Option<Vec<i32>> {
    // For 𝕍, F_i moves i -> i+1; for 𝕎 it moves i+1 -> i.
    let (from, to) = match (kind, lower) {
        (Kind::V, true) | (Kind::W, false) => (i, i + 1),
        (Kind::V, false) | (Kind::W, true) => (i + 1, i),
    };
    let has = |x: i32| s.binary_search(&x).is_ok();
    if !has(from) || has(to) {
        return None;
    }
    let mut out: Vec<i32> = s.iter().map(|&x| if x == from { to } else { x }).collect();
    out.sort_unstable();
    Some(out)
}

fn is_highest(kind: Kind, size: usize, s: &[i32], lo: i32, hi: i32) -> bool {
    match kind {
        Kind::V => s.iter().enumerate().all(|(j, &x)| x == lo + j as i32),
        Kind::W => s.iter().enumerate().all(|(j, &x)| x == hi - (size - 1 - j) as i32),
    }
}

/// Increasing `size`-subsets of a sorted slice.
fn combinations(items: &[i32], size: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn go(items: &[i32], size: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for (i, &x) in items.iter().enumerate() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(x);
            go(&items[i + 1..], size, cur, out);
            cur.pop();
        }
    }
    go(items, size, &mut cur, &mut out);
    out
}

/// One content block: monomials in a triangular order and both bases.
pub struct Block {
    pub shape: Shape,
    pub lo: i32,
    pub hi: i32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub psi: Vec<Column>,
    canonical: Vec<Column>,
    dual: Vec<Column>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Result<usize, FockError> {
        self.index.get(m).copied().ok_or_else(|| FockError::NotLinked(self.shape.format(m), "block".into()))
    }

    pub fn columns(&self, kind: BasisKind) -> &[Column] {
        match kind {
            BasisKind::Canonical => &self.canonical,
            BasisKind::Dual => &self.dual,
        }
    }

    /// `t_{μλ}(q)`: coefficient of `m_μ` in `b_λ` (or `b*_λ`).
    pub fn transition(&self, mu: &Monomial, lambda: &Monomial, kind: BasisKind) -> Result<LaurentPoly, FockError> {
        let li = self.position(lambda)?;
        let mi = self.index.get(mu).copied().ok_or_else(|| FockError::NotLinked(self.shape.format(mu), self.shape.format(lambda)))?;
        Ok(self.columns(kind)[li].get(&mi).cloned().unwrap_or_default())
    }

    /// Nonzero entries of the basis element labelled `lambda`.
    pub fn column(&self, lambda: &Monomial, kind: BasisKind) -> Result<BTreeMap<Monomial, LaurentPoly>, FockError> {
        let li = self.position(lambda)?;
        Ok(self.columns(kind)[li].iter().map(|(i, c)| (self.monomials[*i].clone(), c.clone())).collect())
    }

    /// Checks `ψ² = 1`, `ψ(b) = b` and the degree constraints; returns the first failure.
    pub fn verify(&self) -> Result<(), FockError> {
        for j in 0..self.len() {
            let unit = Column::from([(j, LaurentPoly::one())]);
            let twice = lusztig::apply(&self.psi, &lusztig::apply(&self.psi, &unit));
            if twice != unit {
                return Err(FockError::Integrity(format!("bar is not an involution on {}", self.shape.format(&self.monomials[j]))));
            }
            for kind in [BasisKind::Canonical, BasisKind::Dual] {
                let b = &self.columns(kind)[j];
                if &lusztig::apply(&self.psi, b) != b {
                    return Err(FockError::Integrity(format!("{kind:?} element not bar-invariant")));
                }
                for (i, c) in b {
                    let ok = if *i == j {
                        c.is_one()
                    } else {
                        match kind {
                            BasisKind::Canonical => c.min_degree().is_some_and(|d| d > 0),
                            BasisKind::Dual => c.max_degree().is_some_and(|d| d < 0),
                        }
                    };
                    if !ok {
                        return Err(FockError::Integrity(format!("{kind:?} entry {c} violates the degree constraint")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Hecke label of a monomial in a regular block of an all-`𝕍` space.
///
/// Positions are read left to right with wedge entries listed decreasingly;
/// the largest entry becomes 1. Returns the permutation (minimal in its
/// coset) and the parabolic subset `J` of simple reflections inside wedges.
pub fn hecke_label(shape: Shape, m: &Monomial) -> Option<(Perm, Vec<usize>)> {
    if !shape.is_all_v() {
        return None;
    }
    let (l, rest) = m.0.split_at(shape.left.1);
    let (mid, r) = rest.split_at(shape.k);
    let seq: Vec<i32> = l.iter().rev().chain(mid).chain(r.iter().rev()).copied().collect();
    let mut sorted = seq.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let n = seq.len();
    let one_line = seq.iter().map(|a| (n - sorted.binary_search(a).unwrap()) as u8).collect();
    let mut j: Vec<usize> = (1..shape.left.1).collect();
    let start = shape.left.1 + shape.k;
    j.extend(start + 1..start + shape.right.1);
    Some((Perm::new(one_line).ok()?, j))
}

/// Default reach and margin cap for window stabilization.
pub const DEFAULT_REACH: i32 = 2;
pub const DEFAULT_MARGIN_CAP: i32 = 16;

/// Column of `b_λ` or `b*_λ` restricted to the downward-closed set `admit`.
///
/// Every admitted monomial must have its entries within `reach` of the
/// entries of `λ`. The admitted part of the block is enumerated first; the
/// column is then computed on windows extending a margin `m` past those
/// entries, with `m = 2, 4, …` until two consecutive margins agree or `m`
/// passes `cap`. Spaces with only `𝕍` factors are exact on the content range.
pub fn stable_column(
    shape: Shape,
    lambda: &Monomial,
    kind: BasisKind,
    reach: i32,
    cap: i32,
    admit: impl Fn(&Monomial) -> bool,
) -> Result<BTreeMap<Monomial, LaurentPoly>, FockError> {
    let bounds = |m: &Monomial| (m.0.iter().copied().min().unwrap_or(0), m.0.iter().copied().max().unwrap_or(0));
    let (cmin, cmax) = bounds(lambda);
    let at = |lo: i32, hi: i32| -> Result<BTreeMap<Monomial, LaurentPoly>, FockError> {
        let space = FockSpace::new(shape, lo, hi);
        Ok(space.column_pruned(lambda, kind, &admit)?.into_iter().filter(|(m, _)| admit(m)).collect())
    };
    if shape.is_all_v() {
        return at(cmin, cmax);
    }
    let wide = FockSpace::new(shape, cmin - reach, cmax + reach);
    let (mut lo, mut hi) = (cmin, cmax);
    for m in wide.monomials_with_content(&wide.content(lambda)).iter().filter(|m| admit(m)) {
        let (a, b) = bounds(m);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let mut mg = 2;
    let mut prev = at(lo - mg, hi + mg)?;
    while mg < cap {
        let next = at(lo - mg - 2, hi + mg + 2)?;
        if next == prev {
            return Ok(prev);
        }
        prev = next;
        mg += 2;
    }
    Err(FockError::WindowExhausted { margin: mg, cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(space: &FockSpace, entries: &[(&str, &str)]) -> BTreeMap<Monomial, LaurentPoly> {
        entries.iter().map(|(m, c)| (space.shape.parse(m).unwrap(), c.parse().unwrap())).collect()
    }

    #[test]
    fn monomial_text_format() {
        let shape = Shape::mixed(2, 2, 1);
        let m = shape.parse("w[3,1]|v[2,2]|w[5]").unwrap();
        assert_eq!(m.0, vec![1, 3, 2, 2, 5]);
        assert_eq!(shape.format(&m), "w[3,1]|v[2,2]|w[5]");
        assert!(shape.parse("w[1,1]|v[2,2]|w[5]").is_err());
        assert!(shape.parse("v[3,1]|v[2,2]|w[5]").is_err());
        assert!(shape.parse("w[3]|v[2,2]|w[5]").is_err());
    }

    #[test]
    fn rank_one_actions() {
        let shape = Shape::plain(0, 1, 0);
        let space = FockSpace::new(shape, 0, 3);
        let v1 = vec_of(&space, &[("v[]|v[1]|v[]", "1")]);
        assert_eq!(space.chevalley(Generator::F, 1, &v1), vec_of(&space, &[("v[]|v[2]|v[]", "1")]));
        assert!(space.chevalley(Generator::E, 1, &v1).is_empty());
        assert_eq!(space.chevalley(Generator::K, 1, &v1), vec_of(&space, &[("v[]|v[1]|v[]", "q")]));
        assert_eq!(space.chevalley(Generator::K, 0, &v1), vec_of(&space, &[("v[]|v[1]|v[]", "q^-1")]));
        for i in 0..=3 {
            let m = shape.parse(&format!("v[]|v[{i}]|v[]")).unwrap();
            assert_eq!(space.bar_monomial(&m).unwrap(), BTreeMap::from([(m, LaurentPoly::one())]));
        }
    }

    #[test]
    fn two_factor_bar_and_bases() {
        // v_0 ⊗ v_1 and v_1 ⊗ v_0.
        let shape = Shape::plain(0, 2, 0);
        let space = FockSpace::new(shape, 0, 1);
        let up = shape.parse("v[]|v[0,1]|v[]").unwrap();
        let down = shape.parse("v[]|v[1,0]|v[]").unwrap();
        assert_eq!(space.bar_monomial(&down).unwrap(), BTreeMap::from([(down.clone(), LaurentPoly::one())]));
        let got = space.bar_monomial(&up).unwrap();
        assert_eq!(got[&down].to_string(), "-q^-1+q");
        let block = space.block_of(&up).unwrap();
        block.verify().unwrap();
        assert_eq!(block.transition(&down, &up, BasisKind::Canonical).unwrap().to_string(), "q");
        assert_eq!(block.transition(&down, &up, BasisKind::Dual).unwrap().to_string(), "-q^-1");
    }

    #[test]
    fn mixed_smallest_interacting_block() {
        // ∧^1 𝕎 ⊗ 𝕍: w_i ⊗ v_i has zero content.
        let shape = Shape::mixed(1, 1, 0);
        let space = FockSpace::new(shape, 0, 1);
        let block = space.block(&Content::new()).unwrap();
        assert_eq!(block.len(), 2);
        block.verify().unwrap();
        let top = &block.monomials[1];
        let low = &block.monomials[0];
        assert_eq!(block.transition(low, top, BasisKind::Canonical).unwrap(), LaurentPoly::q());
    }

    #[test]
    fn non_interacting_block_is_standard() {
        let shape = Shape::plain(0, 2, 0);
        let space = FockSpace::new(shape, 0, 3);
        let m = shape.parse("v[]|v[2,2]|v[]").unwrap();
        let block = space.block_of(&m).unwrap();
        assert_eq!(block.len(), 1);
        assert!(block.column(&m, BasisKind::Canonical).unwrap()[&m].is_one());
    }

    #[test]
    fn bar_commutes_with_f() {
        let shape = Shape::mixed(1, 1, 1);
        let space = FockSpace::new(shape, -1, 2);
        for s in ["w[0]|v[1]|w[2]", "w[2]|v[0]|w[1]", "w[1]|v[1]|w[-1]"] {
            let x = vec_of(&space, &[(s, "1")]);
            for i in -1..2 {
                let lhs = space.bar(&space.chevalley(Generator::F, i, &x)).unwrap();
                let rhs = space.chevalley(Generator::F, i, &space.bar(&x).unwrap());
                assert_eq!(lhs, rhs, "{s} F_{i}");
            }
        }
    }

    #[test]
    fn stable_column_on_gl11() {
        // v_j ⊗ w_j: dual canonical is an alternating series in the completion.
        let shape = Shape { left: (Kind::V, 0), k: 1, right: (Kind::W, 1) };
        let lam = shape.parse("v[]|v[0]|w[0]").unwrap();
        let col = stable_column(shape, &lam, BasisKind::Dual, 2, 16, |m| (m.0[0] - lam.0[0]).abs() <= 2).unwrap();
        let rendered: Vec<String> = col.iter().map(|(m, c)| format!("{}:{c}", shape.format(m))).collect();
        assert!(rendered.contains(&"v[]|v[0]|w[0]:1".to_string()), "{rendered:?}");
    }
}

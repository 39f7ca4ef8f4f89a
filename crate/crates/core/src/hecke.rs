//! Type A Hecke algebra: Bruhat order, Kazhdan-Lusztig polynomials and the
//! antispherical parabolic module.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::lusztig::{self, BasisKind, Column, LusztigError};
use crate::poly::LaurentPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("permutations of different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("{0} is not a minimal coset representative for J = {1:?}")]
    NotMinimal(Perm, Vec<usize>),
    #[error("simple reflection s{0} out of range for S{1}")]
    BadReflection(usize, usize),
    #[error("{x} and {w} are not linked in the same module")]
    NotLinked { x: Perm, w: Perm },
    #[error("parity violation in v-polynomial {0}")]
    Parity(String),
    #[error(transparent)]
    Lusztig(#[from] LusztigError),
}

/// A permutation of `{1..N}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(one_line: Vec<u8>) -> Result<Self, HeckeError> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(HeckeError::NotPermutation(format!("{one_line:?}")));
            }
            seen[v as usize] = true;
        }
        Ok(Perm(one_line))
    }

    pub fn identity(n: usize) -> Self {
        Perm((1..=n as u8).collect())
    }

    pub fn longest(n: usize) -> Self {
        Perm((1..=n as u8).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> &[u8] {
        &self.0
    }

    /// Value at 1-based position `p`.
    pub fn at(&self, p: usize) -> u8 {
        self.0[p - 1]
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let mut l = 0;
        for i in 0..self.0.len() {
            for j in (i + 1)..self.0.len() {
                if self.0[i] > self.0[j] {
                    l += 1;
                }
            }
        }
        l
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (p, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = p as u8 + 1;
        }
        Perm(inv)
    }

    /// `s_i · self`: swaps the values `i` and `i+1`.
    pub fn left_mul(&self, i: usize) -> Perm {
        let (a, b) = (i as u8, i as u8 + 1);
        Perm(self.0.iter().map(|&v| if v == a { b } else if v == b { a } else { v }).collect())
    }

    /// `self · s_i`: swaps the positions `i` and `i+1`.
    pub fn right_mul(&self, i: usize) -> Perm {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        Perm(v)
    }

    /// Whether `s_i · self < self`, i.e. `i+1` occurs before `i`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.0[i] < inv.0[i - 1]
    }

    /// Whether `self · s_i < self`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    /// All permutations of `{1..n}` sorted by length, then lexicographically.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=n as u8).collect();
        permutations(&mut cur, 0, &mut out);
        out.sort_by_key(|p| (p.length(), p.clone()));
        out
    }
}

fn permutations(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Perm>) {
    if k == cur.len() {
        out.push(Perm(cur.clone()));
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Display for Perm {
    /// `3412`, or comma-separated when `N >= 10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(if self.0.len() >= 10 { "," } else { "" }))
    }
}

impl FromStr for Perm {
    type Err = HeckeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HeckeError::NotPermutation(s.to_string());
        let s = s.trim();
        let vals: Vec<u8> = if s.contains(',') {
            s.split(',').map(|x| x.trim().parse::<u8>().map_err(|_| bad())).collect::<Result<_, _>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect::<Result<_, _>>()?
        };
        Perm::new(vals)
    }
}

/// Bruhat order via the tableau criterion: for every `k`, the sorted first
/// `k` values of `x` are dominated entrywise by those of `w`.
pub fn bruhat_leq(x: &Perm, w: &Perm) -> Result<bool, HeckeError> {
    if x.n() != w.n() {
        return Err(HeckeError::SizeMismatch(x.n(), w.n()));
    }
    let mut a: Vec<u8> = Vec::with_capacity(x.n());
    let mut b: Vec<u8> = Vec::with_capacity(w.n());
    for k in 0..x.n() {
        let pa = a.partition_point(|&v| v < x.0[k]);
        a.insert(pa, x.0[k]);
        let pb = b.partition_point(|&v| v < w.0[k]);
        b.insert(pb, w.0[k]);
        if a.iter().zip(&b).any(|(p, q)| p > q) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn leq(x: &Perm, w: &Perm) -> bool {
    bruhat_leq(x, w).unwrap_or(false)
}

type ModuleMemo = HashMap<(usize, Vec<usize>), Arc<AntisphericalModule>>;

/// Memo table shared by the KL computations; safe for concurrent readers.
#[derive(Clone, Default)]
pub struct KlTable {
    classical: Arc<RwLock<HashMap<(Perm, Perm), LaurentPoly>>>,
    parabolic: Arc<RwLock<ModuleMemo>>,
}

impl KlTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Classical `P_{x,w}(q)`; zero when `x` is not below `w`.
    pub fn kl_polynomial(&self, x: &Perm, w: &Perm) -> Result<LaurentPoly, HeckeError> {
        if x.n() != w.n() {
            return Err(HeckeError::SizeMismatch(x.n(), w.n()));
        }
        Ok(self.p(x, w))
    }

    fn p(&self, x: &Perm, w: &Perm) -> LaurentPoly {
        if !leq(x, w) {
            return LaurentPoly::zero();
        }
        if x == w {
            return LaurentPoly::one();
        }
        if let Some(v) = self.classical.read().unwrap().get(&(x.clone(), w.clone())) {
            return v.clone();
        }
        let s = (1..w.n()).find(|&i| w.has_left_descent(i)).expect("w > x has a descent");
        let v = w.left_mul(s);
        let sx = x.left_mul(s);
        let c = if x.has_left_descent(s) { 1 } else { 0 };
        let mut out = &self.p(&sx, &v).shift(1 - c) + &self.p(x, &v).shift(c);
        let lw = w.length() as i32;
        let lv = v.length();
        for z in Perm::all(w.n()) {
            let lz = z.length();
            if lz >= lv || (lv - lz).is_multiple_of(2) || !z.has_left_descent(s) || !leq(x, &z) || !leq(&z, &v) {
                continue;
            }
            let mu = self.p(&z, &v).coeff(((lv - lz - 1) / 2) as i32);
            if mu != 0 {
                out -= &self.p(x, &z).scale(mu).shift((lw - lz as i32) / 2);
            }
        }
        self.classical.write().unwrap().insert((x.clone(), w.clone()), out.clone());
        out
    }

    /// The antispherical module for `S_n` and parabolic subset `J` (simple
    /// reflections acting on positions), memoized.
    pub fn module(&self, n: usize, j: &[usize]) -> Result<Arc<AntisphericalModule>, HeckeError> {
        let mut key_j = j.to_vec();
        key_j.sort_unstable();
        key_j.dedup();
        let key = (n, key_j.clone());
        if let Some(m) = self.parabolic.read().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(AntisphericalModule::new(n, &key_j)?);
        self.parabolic.write().unwrap().insert(key, m.clone());
        Ok(m)
    }

    /// Antispherical `n_{x,w}(v)` with `v` in place of `q`: off-diagonal entries lie in `vℤ[v]`.
    pub fn parabolic_kl_v(&self, j: &[usize], x: &Perm, w: &Perm) -> Result<LaurentPoly, HeckeError> {
        let m = self.module(w.n(), j)?;
        m.entry(x, w, BasisKind::Canonical)
    }

    /// The same polynomial converted to the classical normalization
    /// `n_{x,w}(v) = v^{ℓ(w)-ℓ(x)} P(v^{-2})`.
    pub fn parabolic_kl(&self, j: &[usize], x: &Perm, w: &Perm) -> Result<LaurentPoly, HeckeError> {
        let nv = self.parabolic_kl_v(j, x, w)?;
        to_classical(&nv, w.length() as i32 - x.length() as i32)
    }

    /// `a`-coefficients at `v = 1` in the requested direction.
    pub fn coefficient_a(&self, j: &[usize], lambda: &Perm, mu: &Perm, dir: Direction) -> Result<i64, HeckeError> {
        let m = self.module(lambda.n(), j)?;
        m.coefficient_a(lambda, mu, dir)
    }
}

/// Converts `n(v) = v^d P(v^{-2})` into `P(q)`.
pub fn to_classical(nv: &LaurentPoly, d: i32) -> Result<LaurentPoly, HeckeError> {
    let mut terms = Vec::new();
    for (e, c) in nv.terms() {
        if (d - e) % 2 != 0 || d < e {
            return Err(HeckeError::Parity(nv.to_string()));
        }
        terms.push(((d - e) / 2, c));
    }
    Ok(LaurentPoly::from_terms(terms))
}

pub fn kl_polynomial(x: &Perm, w: &Perm) -> Result<LaurentPoly, HeckeError> {
    KlTable::new().kl_polynomial(x, w)
}

pub fn parabolic_kl(j: &[usize], x: &Perm, w: &Perm) -> Result<LaurentPoly, HeckeError> {
    KlTable::new().parabolic_kl(j, x, w)
}

/// Which side of the character identity the `a`-coefficients express.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `ch L(λ) = Σ_μ a_{μλ} ch Δ(μ)`: dual canonical coefficients at `v = 1`.
    LToVerma,
    /// `ch Δ(λ) = Σ_μ d_{μλ} ch L(μ)`: the inverse matrix.
    VermaToL,
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l-to-verma" => Ok(Direction::LToVerma),
            "verma-to-l" => Ok(Direction::VermaToL),
            _ => Err(format!("unknown direction `{s}`")),
        }
    }
}

/// `H ⊗_{H_J} sgn` with basis `m_x`, `x` minimal in `xW_J`, under the
/// normalization `(H_s - v⁻¹)(H_s + v) = 0` and `H_t ↦ -v` for `t ∈ J`.
pub struct AntisphericalModule {
    pub n: usize,
    pub j: Vec<usize>,
    /// Minimal coset representatives sorted by length.
    pub reps: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `ψ(m_x)` in the `reps` order.
    pub psi: Vec<Column>,
    canonical: Vec<Column>,
    dual: Vec<Column>,
}

impl AntisphericalModule {
    pub fn new(n: usize, j: &[usize]) -> Result<Self, HeckeError> {
        if let Some(&bad) = j.iter().find(|&&s| s == 0 || s >= n) {
            return Err(HeckeError::BadReflection(bad, n));
        }
        let reps: Vec<Perm> = Perm::all(n).into_iter().filter(|x| is_minimal(x, j)).collect();
        let index: HashMap<Perm, usize> = reps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut psi: Vec<Column> = Vec::with_capacity(reps.len());
        for (xi, x) in reps.iter().enumerate() {
            if xi == 0 {
                psi.push(Column::from([(0, LaurentPoly::one())]));
                continue;
            }
            let s = (1..n).find(|&i| x.has_left_descent(i)).expect("non-identity has a descent");
            let sx = index[&x.left_mul(s)];
            // ψ(m_x) = (H_s + v - v⁻¹) ψ(m_{sx}).
            let base = psi[sx].clone();
            let mut col = Column::new();
            let shift = &LaurentPoly::q() - &LaurentPoly::monomial(1, -1);
            for (y, c) in &base {
                for (z, h) in act(&reps, &index, j, s, *y) {
                    *col.entry(z).or_default() += &(&h * c);
                }
                *col.entry(*y).or_default() += &(&shift * c);
            }
            col.retain(|_, c| !c.is_zero());
            psi.push(col);
        }
        let canonical = lusztig::solve(&psi, BasisKind::Canonical)?;
        let dual = lusztig::solve(&psi, BasisKind::Dual)?;
        Ok(AntisphericalModule { n, j: j.to_vec(), reps, index, psi, canonical, dual })
    }

    pub fn position(&self, x: &Perm) -> Result<usize, HeckeError> {
        self.index.get(x).copied().ok_or_else(|| HeckeError::NotMinimal(x.clone(), self.j.clone()))
    }

    /// Coefficient of `m_x` in the (dual) canonical element labelled `w`.
    pub fn entry(&self, x: &Perm, w: &Perm, kind: BasisKind) -> Result<LaurentPoly, HeckeError> {
        let (xi, wi) = (self.position(x)?, self.position(w)?);
        let t = match kind {
            BasisKind::Canonical => &self.canonical,
            BasisKind::Dual => &self.dual,
        };
        Ok(t[wi].get(&xi).cloned().unwrap_or_default())
    }

    pub fn columns(&self, kind: BasisKind) -> &[Column] {
        match kind {
            BasisKind::Canonical => &self.canonical,
            BasisKind::Dual => &self.dual,
        }
    }

    pub fn coefficient_a(&self, lambda: &Perm, mu: &Perm, dir: Direction) -> Result<i64, HeckeError> {
        let (li, mi) = (self.position(lambda)?, self.position(mu)?);
        Ok(match dir {
            Direction::LToVerma => self.dual[li].get(&mi).map(LaurentPoly::eval_one).unwrap_or(0),
            Direction::VermaToL => lusztig::invert_at_one(&self.dual)[li].get(&mi).copied().unwrap_or(0),
        })
    }
}

/// `x` is minimal in `xW_J` iff it has no right descent in `J`.
pub fn is_minimal(x: &Perm, j: &[usize]) -> bool {
    j.iter().all(|&s| !x.has_right_descent(s))
}

/// `H_s m_y` expanded in the basis.
fn act(reps: &[Perm], index: &HashMap<Perm, usize>, j: &[usize], s: usize, y: usize) -> Vec<(usize, LaurentPoly)> {
    let x = &reps[y];
    let sx = x.left_mul(s);
    let v = LaurentPoly::q();
    let vinv = LaurentPoly::monomial(1, -1);
    if x.has_left_descent(s) {
        return vec![(index[&sx], LaurentPoly::one()), (y, &vinv - &v)];
    }
    match index.get(&sx) {
        Some(&z) if is_minimal(&sx, j) => vec![(z, LaurentPoly::one())],
        _ => vec![(y, -&v)],
    }
}

/// Pairs `(x, w)` in one module with `x <= w`, for tabulation.
pub fn comparable_pairs(reps: &[Perm]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (a, x) in reps.iter().enumerate() {
        for (b, w) in reps.iter().enumerate() {
            if leq(x, w) {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Full classical KL table of `S_n` keyed by `(x, w)` for `x <= w`.
pub fn kl_table(n: usize) -> BTreeMap<(Perm, Perm), LaurentPoly> {
    let t = KlTable::new();
    let all = Perm::all(n);
    let mut out = BTreeMap::new();
    for w in &all {
        for x in &all {
            if leq(x, w) {
                out.insert((x.clone(), w.clone()), t.p(x, w));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn perm_basics() {
        assert_eq!(p("3412").length(), 4);
        assert_eq!(p("3412").to_string(), "3412");
        assert!("1224".parse::<Perm>().is_err());
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(p("2314").inverse(), p("3124"));
        assert!(p("2134").has_left_descent(1));
        assert!(!p("1234").has_right_descent(2));
    }

    #[test]
    fn bruhat_examples() {
        let e = Perm::identity(4);
        for w in Perm::all(4) {
            assert!(bruhat_leq(&e, &w).unwrap());
            assert!(bruhat_leq(&w, &w).unwrap());
        }
        assert!(bruhat_leq(&p("1324"), &p("3412")).unwrap());
        assert!(!bruhat_leq(&p("4123"), &p("3412")).unwrap());
        assert!(bruhat_leq(&p("12"), &p("123")).is_err());
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_polynomial(&p("1234"), &p("3412")).unwrap().to_string(), "1+q");
        assert_eq!(kl_polynomial(&p("1324"), &p("3412")).unwrap().to_string(), "1+q");
        assert_eq!(kl_polynomial(&p("4123"), &p("3412")).unwrap(), LaurentPoly::zero());
        for w in Perm::all(3) {
            for x in Perm::all(3) {
                if bruhat_leq(&x, &w).unwrap() {
                    assert!(kl_polynomial(&x, &w).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn parabolic_with_empty_j_matches_classical() {
        let t = KlTable::new();
        for w in Perm::all(4) {
            for x in Perm::all(4) {
                assert_eq!(t.parabolic_kl(&[], &x, &w).unwrap(), t.kl_polynomial(&x, &w).unwrap(), "{x} {w}");
            }
        }
    }

    #[test]
    fn grassmannian_s4() {
        let t = KlTable::new();
        let m = t.module(4, &[1, 3]).unwrap();
        assert_eq!(m.reps.len(), 6);
        let mut nonconstant = Vec::new();
        for x in &m.reps {
            for w in &m.reps {
                let pk = t.parabolic_kl(&[1, 3], x, w).unwrap();
                if pk.max_degree().unwrap_or(0) > 0 {
                    nonconstant.push(format!("{x}<{w}:{pk}"));
                }
            }
        }
        // Values frozen from the full Hecke algebra projection in tests/hecke_oracle.rs.
        assert_eq!(nonconstant, ["1234<3412:q", "1324<3412:q"]);
        assert!(t.parabolic_kl(&[1, 3], &p("2134"), &p("3412")).is_err());
    }

    #[test]
    fn sl2_coefficients() {
        let t = KlTable::new();
        let (e, s) = (p("12"), p("21"));
        assert_eq!(t.coefficient_a(&[], &s, &s, Direction::LToVerma).unwrap(), 1);
        assert_eq!(t.coefficient_a(&[], &s, &e, Direction::LToVerma).unwrap(), -1);
        assert_eq!(t.coefficient_a(&[], &s, &e, Direction::VermaToL).unwrap(), 1);
        assert_eq!(t.coefficient_a(&[], &e, &s, Direction::LToVerma).unwrap(), 0);
    }
}

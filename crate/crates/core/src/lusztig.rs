//! Canonical and dual canonical bases from a unitriangular bar involution.
//!
//! Both the Hecke module and the Fock space reduce to the same linear-algebra
//! problem: given the matrix of an antilinear involution `ψ` in a standard
//! basis `m_0, …, m_{N-1}`, upper unitriangular for the index order, find the
//! `ψ`-fixed elements `b_j = m_j + Σ_{i<j} t_ij m_i` with off-diagonal entries
//! in `qℤ[q]` (canonical) or `q⁻¹ℤ[q⁻¹]` (dual canonical).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::poly::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    Canonical,
    Dual,
}

impl BasisKind {
    fn sign(self) -> i32 {
        match self {
            BasisKind::Canonical => 1,
            BasisKind::Dual => -1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LusztigError {
    #[error("bar involution is not unitriangular at column {col}, row {row}")]
    NotUnitriangular { row: usize, col: usize },
    #[error("bar involution matrix has a cycle through basis element {0}")]
    Cycle(usize),
    #[error("inconsistent bar involution at ({row}, {col}): residual {residual} is not antisymmetric")]
    NotAntisymmetric { row: usize, col: usize, residual: String },
}

/// Sparse column: row index to entry.
pub type Column = BTreeMap<usize, LaurentPoly>;

/// Solves for the (dual) canonical basis. `psi[j]` is the column `ψ(m_j)`.
///
/// Returns columns `t[j]` with `t[j][j] = 1`.
pub fn solve(psi: &[Column], kind: BasisKind) -> Result<Vec<Column>, LusztigError> {
    for (j, col) in psi.iter().enumerate() {
        for (&i, c) in col {
            if i > j || (i == j && !c.is_one()) {
                return Err(LusztigError::NotUnitriangular { row: i, col: j });
            }
        }
        if !col.contains_key(&j) {
            return Err(LusztigError::NotUnitriangular { row: j, col: j });
        }
    }
    (0..psi.len()).map(|lam| solve_column(psi, lam, kind)).collect()
}

/// The single column `t[lam]`; `psi` must already be unitriangular.
pub fn solve_column(psi: &[Column], lam: usize, kind: BasisKind) -> Result<Column, LusztigError> {
    let mut t = Column::new();
    t.insert(lam, LaurentPoly::one());
    // Rows that can possibly be nonzero: everything reachable downward from lam.
    let mut rows: BTreeSet<usize> = psi[lam].keys().copied().collect();
    for mu in (0..lam).rev() {
        if !rows.contains(&mu) {
            continue;
        }
        let mut p = LaurentPoly::zero();
        for (&nu, tn) in t.range(mu + 1..) {
            if let Some(r) = psi[nu].get(&mu) {
                p += &(r * &tn.bar());
            }
        }
        if p.is_zero() {
            continue;
        }
        if p.coeff(0) != 0 || p.bar() != -&p {
            return Err(LusztigError::NotAntisymmetric { row: mu, col: lam, residual: p.to_string() });
        }
        let v = p.strict_part(kind.sign());
        if !v.is_zero() {
            rows.extend(psi[mu].keys().copied());
            t.insert(mu, v);
        }
    }
    Ok(t)
}

/// Orders the labels `0..n` so that `psi` becomes upper unitriangular.
///
/// `psi[j]` lists the rows of `ψ(m_j)`; returns `order` with `order[pos] = label`.
pub fn triangular_order(psi: &[Column]) -> Result<Vec<usize>, LusztigError> {
    let n = psi.len();
    // Edge i -> j when m_i occurs in ψ(m_j), i != j: i must precede j.
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, col) in psi.iter().enumerate() {
        for &i in col.keys() {
            if i == j {
                continue;
            }
            if i >= n {
                return Err(LusztigError::NotUnitriangular { row: i, col: j });
            }
            succ[i].push(j);
            indeg[j] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|i| indeg[*i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.insert(j);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|i| indeg[*i] > 0).unwrap_or(0);
        return Err(LusztigError::Cycle(stuck));
    }
    Ok(order)
}

/// Relabels columns by `order` (position -> old label).
pub fn permute(psi: &[Column], order: &[usize]) -> Vec<Column> {
    let mut pos = vec![0usize; order.len()];
    for (p, &l) in order.iter().enumerate() {
        pos[l] = p;
    }
    order.iter().map(|&l| psi[l].iter().map(|(i, c)| (pos[*i], c.clone())).collect()).collect()
}

/// Applies `ψ` to a vector given by its coordinates, using the matrix `psi`.
pub fn apply(psi: &[Column], x: &Column) -> Column {
    let mut out = Column::new();
    for (j, c) in x {
        let cb = c.bar();
        for (i, r) in &psi[*j] {
            let e = out.entry(*i).or_default();
            *e += &(r * &cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Inverse of an upper unitriangular matrix given by columns, evaluated at `q = 1`.
pub fn invert_at_one(t: &[Column]) -> Vec<BTreeMap<usize, i64>> {
    let n = t.len();
    let mut inv: Vec<BTreeMap<usize, i64>> = Vec::with_capacity(n);
    for j in 0..n {
        // Solve Σ_k t[k][i] inv[j][k] = δ_ij by back substitution from row j down.
        let mut col: BTreeMap<usize, i64> = BTreeMap::new();
        col.insert(j, 1);
        for i in (0..j).rev() {
            let mut s = 0i64;
            for (&k, v) in col.range(i + 1..) {
                if let Some(c) = t[k].get(&i) {
                    s += c.eval_one() * v;
                }
            }
            if s != 0 {
                col.insert(i, -s);
            }
        }
        inv.push(col);
    }
    inv
}

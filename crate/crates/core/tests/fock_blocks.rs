//! Every small content block of the mixed Fock spaces.

use std::collections::BTreeMap;

use superchar::fock::{Content, FockSpace, Monomial, Shape};

fn all_blocks(space: &FockSpace) -> BTreeMap<Content, Vec<Monomial>> {
    let mut out: BTreeMap<Content, Vec<Monomial>> = BTreeMap::new();
    let s = space.shape;
    let idx: Vec<i32> = (space.lo..=space.hi).collect();
    // Every monomial, grouped by content.
    let mut stack: Vec<Vec<i32>> = vec![vec![]];
    for (_, size) in s.factors() {
        let mut next = Vec::new();
        for pre in &stack {
            for set in subsets(&idx, size) {
                let mut p = pre.clone();
                p.extend(set);
                next.push(p);
            }
        }
        stack = next;
    }
    for m in stack {
        let m = Monomial(m);
        out.entry(space.content(&m)).or_default().push(m);
    }
    out
}

fn subsets(idx: &[i32], size: usize) -> Vec<Vec<i32>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in idx.iter().enumerate() {
        for mut rest in subsets(&idx[i + 1..], size - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[test]
fn bar_is_involutive_and_bases_are_valid() {
    let mut blocks = 0;
    for (m, k, n) in [(1, 1, 0), (0, 1, 1), (1, 1, 1), (1, 2, 1)] {
        let space = FockSpace::new(Shape::mixed(m, k, n), -2, 3);
        for (content, mut brute) in all_blocks(&space) {
            let block = space.block(&content).unwrap();
            let mut got = block.monomials.clone();
            got.sort();
            brute.sort();
            assert_eq!(got, brute);
            if block.len() > 6 {
                continue;
            }
            block.verify().unwrap();
            blocks += 1;
        }
    }
    println!("{blocks} blocks");
    assert!(blocks > 50);
}

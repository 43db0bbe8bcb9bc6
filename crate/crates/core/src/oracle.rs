//! Brute-force reference routines used to cross-check the counting functions
//! and enumerations. Everything here takes an independent computational route
//! from the closed forms it checks: subspaces are generated as explicit
//! echelon matrices or vector spans, and set counts come from direct
//! enumeration.
//!
//! These are test oracles, not production paths; they favor obviousness over
//! speed.

use std::collections::BTreeSet;

use crate::gf::{all_vectors, FieldContext, FieldElem, Subspace};

/// All m-dim subspaces of F_q^k, generated by direct construction of reduced
/// row echelon matrices: choose pivot columns, then fill every free position
/// with every field value.
pub fn enumerate_rref_subspaces(field: &FieldContext, k: usize, m: usize) -> Vec<Subspace> {
    assert!(m <= k);
    let mut out = BTreeSet::new();
    for pivots in combinations(k, m) {
        // Free positions: row i, column c with c > pivots[i] and c not a pivot.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..k {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let q = field.order();
        let total = q.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0 as FieldElem; k]; m];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for (slot, &(r, c)) in free.iter().enumerate() {
                rows[r][c] = (code / q.pow(slot as u32) % q) as FieldElem;
            }
            let space = Subspace::span(field, &rows, k).unwrap();
            // The constructed matrix is already canonical.
            assert_eq!(space.basis(), rows.as_slice());
            out.insert(space);
        }
    }
    out.into_iter().collect()
}

/// Counts distinct m-dim subspaces by spanning every m-tuple of vectors.
/// Exponential in m; only for tiny cases.
pub fn count_subspaces_by_spanning(field: &FieldContext, k: usize, m: usize) -> usize {
    let vectors = all_vectors(field, k);
    let mut spaces = BTreeSet::new();
    let mut tuple = vec![0usize; m];
    loop {
        let rows: Vec<Vec<FieldElem>> = tuple.iter().map(|&i| vectors[i].clone()).collect();
        let s = Subspace::span(field, &rows, k).unwrap();
        if s.dim() == m {
            spaces.insert(s);
        }
        // Odometer over tuple indices.
        let mut pos = 0;
        loop {
            if pos == m {
                return spaces.len();
            }
            tuple[pos] += 1;
            if tuple[pos] < vectors.len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// All distinct 1-dim subspaces of F_q^k, canonically ordered.
pub fn enumerate_lines(field: &FieldContext, k: usize) -> Vec<Subspace> {
    let mut lines = BTreeSet::new();
    for v in all_vectors(field, k) {
        if v.iter().any(|&c| c != 0) {
            lines.insert(Subspace::span(field, &[v], k).unwrap());
        }
    }
    lines.into_iter().collect()
}

/// Number of lines T with dim(S + T) = dim(S) + 1, by enumerating every line.
pub fn count_lines_extending(field: &FieldContext, space: &Subspace) -> u64 {
    enumerate_lines(field, space.ambient_dim())
        .iter()
        .filter(|t| !space.contains_subspace(field, t).unwrap())
        .count() as u64
}

/// Brute-force count of unordered b-sized line sets {T_1..T_b} such that
/// A + T_1 + ... + T_b has dimension a + b, where A is the span of the first
/// a standard basis vectors of F_q^k. DFS over lines in canonical order; a
/// prefix is abandoned as soon as it fails to gain a dimension.
///
/// Cost is proportional to the count itself, so callers must keep the
/// instance small.
pub fn count_extension_sets_brute(field: &FieldContext, k: usize, a: usize, b: usize) -> u64 {
    let basis: Vec<Vec<FieldElem>> = (0..a)
        .map(|i| crate::gf::standard_basis_vector(k, i))
        .collect();
    let start = Subspace::span(field, &basis, k).unwrap();
    let lines = enumerate_lines(field, k);
    fn dfs(
        field: &FieldContext,
        lines: &[Subspace],
        from: usize,
        current: &Subspace,
        remaining: usize,
    ) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for i in from..lines.len() {
            if !current.contains_subspace(field, &lines[i]).unwrap() {
                let next = current.sum(field, &lines[i]).unwrap();
                total += dfs(field, lines, i + 1, &next, remaining - 1);
            }
        }
        total
    }
    dfs(field, &lines, 0, &start, b)
}

/// Number of lines T with A' + T = A, by enumerating every line of the
/// ambient space.
pub fn count_line_completions_brute(
    field: &FieldContext,
    a_prime: &Subspace,
    a: &Subspace,
) -> u64 {
    enumerate_lines(field, a.ambient_dim())
        .iter()
        .filter(|t| a_prime.sum(field, t).unwrap() == *a)
        .count() as u64
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, 0, &mut Vec::with_capacity(r), &mut out);
    out
}

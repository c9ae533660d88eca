//! Sparse exact elimination over the rationals: incremental reduced row
//! echelon form and nullspace extraction. The RREF of a row space is unique,
//! so the reduced basis (and everything downstream: canonical coset
//! representatives, ranks, dimension tables) does not depend on the order
//! generators arrive in.

use crate::rat::Rat;

/// Sparse row: (column, coefficient) pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Rat)>;

fn normalize(row: &mut SparseRow) {
    row.retain(|(_, c)| !c.is_zero());
    row.sort_by_key(|(j, _)| *j);
}

fn axpy(target: &mut SparseRow, coef: &Rat, source: &SparseRow) {
    // target += coef * source, both sorted
    let mut out: SparseRow = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0usize, 0usize);
    while a < target.len() || b < source.len() {
        match (target.get(a), source.get(b)) {
            (Some((ja, ca)), Some((jb, cb))) => {
                if ja < jb {
                    out.push((*ja, ca.clone()));
                    a += 1;
                } else if jb < ja {
                    let c = cb * coef;
                    if !c.is_zero() {
                        out.push((*jb, c));
                    }
                    b += 1;
                } else {
                    let c = ca + &(cb * coef);
                    if !c.is_zero() {
                        out.push((*ja, c));
                    }
                    a += 1;
                    b += 1;
                }
            }
            (Some((ja, ca)), None) => {
                out.push((*ja, ca.clone()));
                a += 1;
            }
            (None, Some((jb, cb))) => {
                let c = cb * coef;
                if !c.is_zero() {
                    out.push((*jb, c));
                }
                b += 1;
            }
            (None, None) => break,
        }
    }
    *target = out;
}

/// Incrementally maintained reduced row echelon form. Pivots are the
/// smallest column of each inserted row; pivot entries are normalized to 1
/// and cleared from every other row.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// Rows keyed by pivot column, each starting with (pivot, 1).
    rows: std::collections::BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseRow)> {
        self.rows.iter()
    }

    /// Reduce a row against the current basis (canonical representative of
    /// its coset modulo the row space).
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut work = row.clone();
        normalize(&mut work);
        loop {
            let hit = work
                .iter()
                .find(|(j, _)| self.rows.contains_key(j))
                .map(|(j, c)| (*j, c.clone()));
            match hit {
                None => return work,
                Some((j, c)) => {
                    let pivot_row = &self.rows[&j];
                    axpy(&mut work, &-c, pivot_row);
                }
            }
        }
    }

    /// Insert a row; returns true when it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut reduced = self.reduce(&row);
        if reduced.is_empty() {
            return false;
        }
        let (pivot, lead) = (reduced[0].0, reduced[0].1.clone());
        let inv = lead.recip();
        for (_, c) in reduced.iter_mut() {
            *c *= &inv;
        }
        // clear the new pivot column from existing rows
        let affected: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, r)| r.iter().any(|(j, _)| *j == pivot))
            .map(|(p, _)| *p)
            .collect();
        for p in affected {
            let coef = {
                let r = &self.rows[&p];
                r.iter().find(|(j, _)| *j == pivot).map(|(_, c)| c.clone())
            };
            if let Some(coef) = coef {
                let row_mut = self.rows.get_mut(&p).unwrap();
                axpy(row_mut, &-coef, &reduced);
            }
        }
        self.rows.insert(pivot, reduced);
        true
    }

    /// Nullspace basis of the stacked rows, one canonical vector per free
    /// column: the free coordinate is 1, pivot coordinates complete it.
    pub fn nullspace(&self, ncols: usize) -> Vec<Vec<(usize, Rat)>> {
        let mut out = Vec::new();
        for f in 0..ncols {
            if self.has_pivot(f) {
                continue;
            }
            let mut v: Vec<(usize, Rat)> = vec![(f, Rat::one())];
            for (pivot, row) in &self.rows {
                if let Some((_, c)) = row.iter().find(|(j, _)| *j == f) {
                    v.push((*pivot, -c.clone()));
                }
            }
            v.sort_by_key(|(j, _)| *j);
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(j, c)| (j, Rat::from_int(c))).collect()
    }

    #[test]
    fn rank_and_reduce() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 2)])));
        assert!(e.insert(row(&[(1, 1), (2, 1)])));
        assert!(!e.insert(row(&[(0, 2), (1, 6), (2, 2)]))); // combination
        assert_eq!(e.rank(), 2);
        let r = e.reduce(&row(&[(0, 1), (1, 2)]));
        assert!(r.is_empty());
        // reduce is idempotent
        let x = row(&[(0, 3), (2, 5)]);
        let once = e.reduce(&x);
        assert_eq!(e.reduce(&once), once);
    }

    #[test]
    fn rref_is_order_independent() {
        let rows = vec![
            row(&[(0, 2), (1, 4), (3, 2)]),
            row(&[(1, 1), (2, 3)]),
            row(&[(0, 1), (2, -3), (3, 1)]),
            row(&[(2, 5), (3, 5)]),
        ];
        let mut fwd = Echelon::new();
        for r in &rows {
            fwd.insert(r.clone());
        }
        let mut rev = Echelon::new();
        for r in rows.iter().rev() {
            rev.insert(r.clone());
        }
        let a: Vec<_> = fwd.rows().map(|(p, r)| (*p, r.clone())).collect();
        let b: Vec<_> = rev.rows().map(|(p, r)| (*p, r.clone())).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn nullspace_solves() {
        let mut e = Echelon::new();
        e.insert(row(&[(0, 1), (1, -1)]));
        e.insert(row(&[(2, 1), (3, -2)]));
        let ns = e.nullspace(4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            // check each row annihilates the vector
            for (_, r) in e.rows() {
                let mut acc = Rat::zero();
                for (j, c) in r {
                    if let Some((_, vc)) = v.iter().find(|(vj, _)| vj == j) {
                        acc += &(c * vc);
                    }
                }
                assert!(acc.is_zero());
            }
        }
    }
}

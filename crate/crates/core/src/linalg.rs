//! Exact sparse Gaussian elimination over a [`CoeffField`].

use std::collections::BTreeMap;

use crate::coefficients::CoeffField;

pub type SparseRow<E> = BTreeMap<usize, E>;

/// Row-echelon basis built incrementally. Every stored row has a leading
/// entry of 1 in a column no other stored row leads with.
#[derive(Debug, Clone)]
pub struct Echelon<F: CoeffField> {
    field: F,
    rows: BTreeMap<usize, SparseRow<F::Elem>>,
}

impl<F: CoeffField> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    fn axpy(&self, row: &mut SparseRow<F::Elem>, factor: &F::Elem, other: &SparseRow<F::Elem>) {
        let f = &self.field;
        for (c, v) in other {
            let t = f.mul(factor, v);
            match row.get_mut(c) {
                Some(e) => {
                    *e = f.sub(e, &t);
                    if f.is_zero(e) {
                        row.remove(c);
                    }
                }
                None => {
                    row.insert(*c, f.neg(&t));
                }
            }
        }
    }

    /// Reduce `row` against the stored pivots (leading columns only).
    pub fn reduce(&self, mut row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let mut cursor = 0usize;
        loop {
            let Some((&c, _)) = row.range(cursor..).next() else {
                return row;
            };
            if let Some(p) = self.rows.get(&c) {
                let factor = row[&c].clone();
                self.axpy(&mut row, &factor, p);
            } else {
                cursor = c + 1;
            }
        }
    }

    /// Insert a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseRow<F::Elem>) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lv)) = row.iter().next() else {
            return false;
        };
        let inv = self.field.inv(lv).expect("nonzero leading entry");
        let normalized = row
            .into_iter()
            .map(|(c, v)| (c, self.field.mul(&v, &inv)))
            .collect();
        self.rows.insert(lead, normalized);
        true
    }

    /// Fully reduced rows (each pivot column is zero in every other row).
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseRow<F::Elem>> {
        let mut out: BTreeMap<usize, SparseRow<F::Elem>> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            // Eliminate later pivots, already reduced.
            let later: Vec<usize> = r.keys().copied().filter(|c| *c > p && out.contains_key(c)).collect();
            for c in later {
                if let Some(factor) = r.get(&c).cloned() {
                    self.axpy(&mut r, &factor, &out[&c]);
                }
            }
            out.insert(p, r);
        }
        out
    }

    /// Basis of `{v : row . v = 0 for all rows}` in `ncols` unknowns.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseRow<F::Elem>> {
        let reduced = self.reduced_rows();
        let f = &self.field;
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|c| !reduced.contains_key(c)) {
            let mut v = SparseRow::new();
            v.insert(free, f.one());
            for (&p, row) in &reduced {
                if let Some(e) = row.get(&free) {
                    v.insert(p, f.neg(e));
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of a list of sparse rows.
pub fn rank<F: CoeffField>(field: &F, rows: impl IntoIterator<Item = SparseRow<F::Elem>>) -> usize {
    let mut e = Echelon::new(field.clone());
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solve `A x = b` where `A` is given by sparse rows and `b` by one value
/// per row. Returns one particular solution (free variables set to zero).
pub fn solve<F: CoeffField>(
    field: &F,
    rows: &[SparseRow<F::Elem>],
    rhs: &[F::Elem],
    ncols: usize,
) -> Option<Vec<F::Elem>> {
    // Augment with the right-hand side in column `ncols`.
    let mut e = Echelon::new(field.clone());
    for (r, b) in rows.iter().zip(rhs) {
        let mut row = r.clone();
        if !field.is_zero(b) {
            row.insert(ncols, b.clone());
        }
        e.insert(row);
    }
    if e.rows.contains_key(&ncols) {
        return None;
    }
    let reduced = e.reduced_rows();
    let mut x = vec![field.zero(); ncols];
    for (p, row) in reduced {
        if let Some(b) = row.get(&ncols) {
            x[p] = b.clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Classical;
    use num_rational::BigRational;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn row(entries: &[(usize, i64)]) -> SparseRow<BigRational> {
        entries.iter().map(|&(c, v)| (c, r(v))).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![row(&[(0, 1), (1, 2), (2, 3)]), row(&[(0, 2), (1, 4), (2, 6)]), row(&[(1, 1), (2, 1)])];
        let mut e = Echelon::new(Classical);
        for r in rows.clone() {
            e.insert(r);
        }
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace(3);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for rw in &rows {
                let dot = rw.iter().fold(r(0), |acc, (c, a)| acc + a * v.get(c).cloned().unwrap_or_default());
                assert_eq!(dot, r(0));
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)])];
        let x = solve(&Classical, &rows, &[r(3), r(1)], 2).unwrap();
        assert_eq!(x, vec![r(2), r(1)]);
        let rows = vec![row(&[(0, 1)]), row(&[(0, 2)])];
        assert!(solve(&Classical, &rows, &[r(1), r(3)], 1).is_none());
    }
}

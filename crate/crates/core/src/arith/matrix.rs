use std::fmt;

use super::monomial::VarList;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Dense matrix of polynomials over one shared variable list.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: VarList,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, vars: VarList, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::usage(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|p| p.vars() != &vars) {
            return Err(Error::usage("matrix entries live over different variable lists"));
        }
        Ok(PolyMatrix {
            rows,
            cols,
            vars,
            entries,
        })
    }

    pub fn from_rows(vars: VarList, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::usage("ragged matrix rows"));
        }
        PolyMatrix::new(r, c, vars, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, vars: VarList, mut f: impl FnMut(usize, usize) -> Poly) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix::new(rows, cols, vars, entries)
    }

    pub fn identity(n: usize, vars: VarList) -> Self {
        let one = Poly::one(vars.clone());
        let zero = Poly::zero(vars.clone());
        PolyMatrix::from_fn(n, n, vars, |i, j| if i == j { one.clone() } else { zero.clone() })
            .expect("square by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Result<Self> {
        let entries: Vec<Poly> = self.entries.iter().map(f).collect();
        let vars = entries.first().map_or_else(|| self.vars.clone(), |p| p.vars().clone());
        PolyMatrix::new(self.rows, self.cols, vars, entries)
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.vars != other.vars {
            return Err(Error::usage("matrices live over different variable lists"));
        }
        PolyMatrix::from_fn(self.rows, other.cols, self.vars.clone(), |i, j| {
            (0..self.cols).fold(Poly::zero(self.vars.clone()), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        })
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::usage(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Determinant. Cofactor expansion up to 3x3, fraction-free elimination
    /// above that.
    pub fn det(&self) -> Result<Poly> {
        self.require_square()?;
        if self.rows <= 3 {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> Result<Poly> {
        self.require_square()?;
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.cofactor_expand(&idx, &idx))
    }

    fn cofactor_expand(&self, rows: &[usize], cols: &[usize]) -> Poly {
        match rows.len() {
            0 => Poly::one(self.vars.clone()),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => {
                &(self.get(rows[0], cols[0]) * self.get(rows[1], cols[1]))
                    - &(self.get(rows[0], cols[1]) * self.get(rows[1], cols[0]))
            }
            _ => {
                let mut acc = Poly::zero(self.vars.clone());
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(rows[0], c);
                    if entry.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let minor = self.cofactor_expand(&rows[1..], &sub_cols);
                    let term = entry * &minor;
                    acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Bareiss fraction-free elimination: every intermediate division is
    /// exact in the polynomial ring.
    pub fn det_bareiss(&self) -> Result<Poly> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(self.vars.clone()));
        }
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut prev = Poly::one(self.vars.clone());
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(Poly::zero(self.vars.clone())),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = t
                        .div_exact(&prev)
                        .ok_or_else(|| Error::integrity("inexact division during fraction-free elimination"))?;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Poly> {
        let sub = PolyMatrix::from_fn(rows.len(), cols.len(), self.vars.clone(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })?;
        sub.det()
    }

    /// `[c_1, ..., c_n]` with `det(t I + M) = sum_j c_j t^(n-j)`, `c_0 = 1`.
    /// `c_j` is the sum of the principal `j x j` minors, so `c_1` is the
    /// trace and `c_n` the determinant.
    pub fn charpoly_coeffs(&self) -> Result<Vec<Poly>> {
        self.require_square()?;
        let n = self.rows;
        let mut out = Vec::with_capacity(n);
        for j in 1..=n {
            let mut acc = Poly::zero(self.vars.clone());
            for subset in subsets(n, j) {
                acc = &acc + &self.minor(&subset, &subset)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Poly> {
        self.require_square()?;
        Ok((0..self.rows).fold(Poly::zero(self.vars.clone()), |acc, i| &acc + self.get(i, i)))
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix[{:?}]{}", self.vars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::int;

    fn ring() -> (VarList, Poly, Poly) {
        let v = VarList::new(["p", "q"]).unwrap();
        let p = Poly::var(&v, "p").unwrap();
        let q = Poly::var(&v, "q").unwrap();
        (v, p, q)
    }

    #[test]
    fn diagonal_and_swap() {
        let (v, p, q) = ring();
        let zero = Poly::zero(v.clone());
        let one = Poly::one(v.clone());
        let d = PolyMatrix::from_rows(
            v.clone(),
            vec![vec![p.clone(), zero.clone()], vec![zero.clone(), q.clone()]],
        )
        .unwrap();
        assert_eq!(d.det().unwrap(), &p * &q);
        let s = PolyMatrix::from_rows(v.clone(), vec![vec![zero.clone(), one.clone()], vec![one, zero]]).unwrap();
        assert_eq!(s.det().unwrap(), Poly::constant(v.clone(), int(-1)));
        assert_eq!(s.det_bareiss().unwrap(), Poly::constant(v, int(-1)));
    }

    #[test]
    fn non_square_is_rejected() {
        let (v, p, _) = ring();
        let m = PolyMatrix::new(1, 2, v, vec![p.clone(), p]).unwrap();
        assert!(matches!(m.det(), Err(Error::Usage(_))));
        assert!(matches!(m.charpoly_coeffs(), Err(Error::Usage(_))));
    }

    #[test]
    fn characteristic_coefficients() {
        let (v, p, q) = ring();
        let zero = Poly::zero(v.clone());
        let one = Poly::one(v.clone());
        let d = PolyMatrix::from_rows(
            v.clone(),
            vec![vec![p.clone(), zero.clone()], vec![zero.clone(), q.clone()]],
        )
        .unwrap();
        assert_eq!(d.charpoly_coeffs().unwrap(), vec![&p + &q, &p * &q]);
        let s = PolyMatrix::from_rows(
            v.clone(),
            vec![vec![zero.clone(), one.clone()], vec![one, zero.clone()]],
        )
        .unwrap();
        assert_eq!(s.charpoly_coeffs().unwrap(), vec![zero, Poly::constant(v, int(-1))]);
    }

    #[test]
    fn bareiss_pivots_past_zeros() {
        let v = VarList::new(["x"]).unwrap();
        let x = Poly::var(&v, "x").unwrap();
        let z = Poly::zero(v.clone());
        let o = Poly::one(v.clone());
        let m = PolyMatrix::from_rows(
            v,
            vec![
                vec![z.clone(), x.clone(), o.clone(), z.clone()],
                vec![x.clone(), z.clone(), z.clone(), o.clone()],
                vec![o.clone(), o.clone(), x.clone(), z.clone()],
                vec![z.clone(), o.clone(), z.clone(), x.clone()],
            ],
        )
        .unwrap();
        assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
    }
}

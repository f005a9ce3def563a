//! Dense integer matrices with Hermite and Smith normal forms, kernels,
//! lattice membership and finitely generated abelian group presentations.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact_core::bezout;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` is taken from the first row.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        IntMatrix {
            rows: r,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `dim`.
    pub fn from_cols(cols: &[Vec<BigInt>], dim: usize) -> Self {
        let mut m = IntMatrix::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| x.into()).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Self::from_rows_with_cols(rows, self.cols + other.cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// row[i] += k·row[j]
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(j, c)] * k;
            self[(i, c)] += v;
        }
    }

    /// col[i] += k·col[j]
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, j)] * k;
            self[(r, i)] += v;
        }
    }

    fn neg_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// Replaces rows (i, j) by (a·ri + b·rj, c·ri + d·rj).
    fn combine_rows(&mut self, i: usize, j: usize, t: [&BigInt; 4]) {
        for col in 0..self.cols {
            let (x, y) = (self[(i, col)].clone(), self[(j, col)].clone());
            self[(i, col)] = t[0] * &x + t[1] * &y;
            self[(j, col)] = t[2] * &x + t[3] * &y;
        }
    }

    fn combine_cols(&mut self, i: usize, j: usize, t: [&BigInt; 4]) {
        for row in 0..self.rows {
            let (x, y) = (self[(row, i)].clone(), self[(row, j)].clone());
            self[(row, i)] = t[0] * &x + t[1] * &y;
            self[(row, j)] = t[2] * &x + t[3] * &y;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut r = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = a * &o[(k, j)];
                    r[(i, j)] += v;
                }
            }
        }
        r
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form: returns (H, U) with U unimodular and U·M = H.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for j in 0..m.cols {
        if r == m.rows {
            break;
        }
        for i in r + 1..m.rows {
            if h[(i, j)].is_zero() {
                continue;
            }
            let (a, b) = (h[(r, j)].clone(), h[(i, j)].clone());
            let (g, x, y) = bezout(&a, &b);
            let (p, q) = (-(&b / &g), &a / &g);
            h.combine_rows(r, i, [&x, &y, &p, &q]);
            u.combine_rows(r, i, [&x, &y, &p, &q]);
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.neg_row(r);
            u.neg_row(r);
        }
        let piv = h[(r, j)].clone();
        for i in 0..r {
            let q = -h[(i, j)].div_floor(&piv);
            if !q.is_zero() {
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Pivot columns of a row echelon matrix, one per nonzero row.
pub fn pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows)
        .filter_map(|i| h.row(i).iter().position(|x| !x.is_zero()))
        .collect()
}

/// Smith normal form: returns (S, U, V) with U·M·V = S diagonal, each
/// diagonal entry dividing the next, U and V unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (s, u, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let (a, b) = (s[(t, t)].clone(), s[(i, t)].clone());
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    s.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                } else {
                    let (g, x, y) = bezout(&a, &b);
                    let (p, q) = (-(&b / &g), &a / &g);
                    s.combine_rows(t, i, [&x, &y, &p, &q]);
                    u.combine_rows(t, i, [&x, &y, &p, &q]);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let (a, b) = (s[(t, t)].clone(), s[(t, j)].clone());
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    s.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                } else {
                    let (g, x, y) = bezout(&a, &b);
                    let (p, q) = (-(&b / &g), &a / &g);
                    s.combine_cols(t, j, [&x, &y, &p, &q]);
                    v.combine_cols(t, j, [&x, &y, &p, &q]);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and redo
            let piv = s[(t, t)].clone();
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&s[(i, j)] % &piv).is_zero()));
            match bad {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.neg_row(t);
            u.neg_row(t);
        }
    }
    (s, u, v)
}

/// Diagonal of a Smith form, including zeros, of length min(rows, cols).
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let (s, _, _) = smith_normal_form(m);
    (0..m.rows.min(m.cols)).map(|i| s[(i, i)].clone()).collect()
}

/// HNF-reduced Z-basis of the column lattice, returned as rows.
pub fn column_lattice_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, _) = hermite_normal_form(&a.transpose());
    h.row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Columns form a Z-basis of {x : M·x = 0}, HNF-reduced.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(&m.transpose());
    let rank = pivots(&h).len();
    let rows: Vec<Vec<BigInt>> = (rank..h.rows).map(|i| u.row(i).to_vec()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(m.cols, 0);
    }
    let (k, _) = hermite_normal_form(&IntMatrix::from_rows_with_cols(rows, m.cols));
    k.transpose()
}

/// Solves A·x = v over the integers, if possible.
pub fn solve_in_lattice(a: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(v.len(), a.rows);
    let (h, u) = hermite_normal_form(&a.transpose());
    let mut rem = v.to_vec();
    let mut coeff = vec![BigInt::zero(); h.rows];
    for (i, p) in pivots(&h).into_iter().enumerate() {
        let (q, r) = rem[p].div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        for (j, x) in rem.iter_mut().enumerate() {
            *x -= &q * &h[(i, j)];
        }
        coeff[i] = q;
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // x^T = coeff^T · U
    Some(
        (0..a.cols)
            .map(|j| (0..h.rows).map(|i| &coeff[i] * &u[(i, j)]).sum())
            .collect(),
    )
}

pub fn in_lattice(a: &IntMatrix, v: &[BigInt]) -> bool {
    solve_in_lattice(a, v).is_some()
}

/// True iff the column lattices of `a` and `b` coincide.
pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows, b.rows, "ambient dimension mismatch");
    column_lattice_basis(a) == column_lattice_basis(b)
}

/// A finitely generated abelian group ⊕ Z/d_i ⊕ Z^r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianPresentation {
    pub generator_labels: Vec<String>,
    #[serde(skip)]
    pub relation_matrix: IntMatrix,
    /// Nontrivial invariant factors; 0 stands for a free summand.
    #[serde(serialize_with = "ser_bigints")]
    pub invariant_factors: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl AbelianPresentation {
    /// Group on `labels.len()` generators modulo the columns of `rels`.
    pub fn from_relations(labels: Vec<String>, rels: IntMatrix) -> Self {
        let n = labels.len();
        assert_eq!(rels.rows, n);
        let diag = smith_diagonal(&rels);
        let free = n - diag.iter().filter(|d| !d.is_zero()).count();
        let mut inv: Vec<BigInt> = diag
            .into_iter()
            .filter(|d| !d.is_one() && !d.is_zero())
            .collect();
        inv.extend(std::iter::repeat_n(BigInt::zero(), free));
        AbelianPresentation {
            generator_labels: labels,
            relation_matrix: rels,
            invariant_factors: inv,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| d.is_zero())
            .count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect()
    }

    /// Additive order of the class of `v` (coordinates in the generators);
    /// `None` when the class has infinite order.
    pub fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        let (s, u, _) = smith_normal_form(&self.relation_matrix);
        let w = u.mul_vec(v);
        let mut ord = BigInt::one();
        for (i, x) in w.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let d = if i < s.cols.min(s.rows) {
                s[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if d.is_zero() {
                return None;
            }
            ord = ord.lcm(&(&d / d.gcd(x)));
        }
        Some(ord)
    }
}

impl fmt::Display for AbelianPresentation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Presentation of (column lattice of `sub_gens`) / (column lattice of `rels`).
pub fn quotient_presentation(
    sub_gens: &IntMatrix,
    rels: Option<&IntMatrix>,
) -> Result<AbelianPresentation, Error> {
    let basis = column_lattice_basis(sub_gens);
    let dim = sub_gens.rows;
    let bmat = IntMatrix::from_cols(&basis, dim);
    let labels: Vec<String> = (1..=basis.len()).map(|i| format!("g{i}")).collect();
    let mut coords = Vec::new();
    if let Some(r) = rels {
        assert_eq!(r.rows, dim);
        for c in r.col_vecs() {
            coords.push(solve_in_lattice(&bmat, &c).ok_or(Error::SpanViolation)?);
        }
    }
    let rel_matrix = IntMatrix::from_cols(&coords, basis.len());
    Ok(AbelianPresentation::from_relations(labels, rel_matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_echelon(h: &IntMatrix) -> bool {
        let p = pivots(h);
        let nonzero = (0..h.nrows())
            .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .count();
        p.windows(2).all(|w| w[0] < w[1])
            && p.len() == nonzero
            && p.iter().enumerate().all(|(i, &c)| {
                h[(i, c)].is_positive()
                    && (0..i).all(|k| !h[(k, c)].is_negative() && h[(k, c)] < h[(i, c)])
            })
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));

        let m = IntMatrix::from_i64(&[&[2, 4], &[0, 3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 1], &[0, 3]]));
        assert_eq!(&u * &m, h);
        assert_eq!(u.det().abs(), BigInt::one());

        let z = IntMatrix::zeros(2, 2);
        let (h, u) = hermite_normal_form(&z);
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
        assert!(is_echelon(&h));
    }

    #[test]
    fn snf_examples() {
        let d: Vec<BigInt> = smith_diagonal(&IntMatrix::from_i64(&[&[6, 0], &[0, 4]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(
            smith_diagonal(&IntMatrix::identity(2)),
            vec![BigInt::one(), BigInt::one()]
        );
        let d = smith_diagonal(&IntMatrix::from_i64(&[&[2, 0], &[0, 0]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.ncols(), 1);
        assert!(lattice_equal(&k, &IntMatrix::from_i64(&[&[1], &[-1]])));

        let m = IntMatrix::from_i64(&[&[2, 4]]);
        let k = kernel_basis(&m);
        assert!((&m * &k).is_zero());
        assert!(lattice_equal(&k, &IntMatrix::from_i64(&[&[2], &[-1]])));
        assert!(smith_diagonal(&k).iter().all(One::is_one));

        assert_eq!(kernel_basis(&IntMatrix::identity(2)).ncols(), 0);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_presentation(
            &IntMatrix::identity(2),
            Some(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])),
        )
        .unwrap();
        assert_eq!(q.invariant_factors, vec![BigInt::from(6)]);

        let q = quotient_presentation(&IntMatrix::identity(1), None).unwrap();
        assert_eq!(q.invariant_factors, vec![BigInt::zero()]);
        assert_eq!(q.free_rank(), 1);

        let gens = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        let rels = IntMatrix::from_i64(&[&[2], &[0]]);
        let q = quotient_presentation(&gens, Some(&rels)).unwrap();
        assert_eq!(q.invariant_factors, vec![BigInt::zero()]);

        let bad = IntMatrix::from_i64(&[&[1], &[0]]);
        assert!(quotient_presentation(&gens, Some(&bad)).is_err());
    }

    #[test]
    fn lattice_equal_examples() {
        assert!(lattice_equal(
            &IntMatrix::identity(2),
            &IntMatrix::identity(2)
        ));
        assert!(!lattice_equal(
            &IntMatrix::from_i64(&[&[1], &[0]]),
            &IntMatrix::from_i64(&[&[2], &[0]])
        ));
        assert!(lattice_equal(
            &IntMatrix::from_i64(&[&[2, 1], &[1, 1]]),
            &IntMatrix::identity(2)
        ));
    }

    #[test]
    fn order_of_class() {
        let p = AbelianPresentation::from_relations(
            vec!["a".into(), "b".into()],
            IntMatrix::from_i64(&[&[4], &[0]]),
        );
        assert_eq!(p.order_of(&[2.into(), 0.into()]), Some(2.into()));
        assert_eq!(p.order_of(&[0.into(), 1.into()]), None);
        assert_eq!(p.order_of(&[0.into(), 0.into()]), Some(1.into()));
    }

    #[test]
    fn det_bareiss() {
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[3, 1, 0], &[1, 1, 1]]);
        assert_eq!(m.det(), BigInt::from(-4));
    }
}

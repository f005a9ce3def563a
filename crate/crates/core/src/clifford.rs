//! The real Clifford algebra C_m (e_i² = −1, e_i e_j = −e_j e_i) with
//! coefficients in Q(√2).

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::fmt;

use crate::exact_core::QSqrt2;
use crate::Error;

pub const MAX_DIM: usize = 16;
const MAX_DENSE_DIM: usize = 8;

/// Element of C_m; monomials are bitmasks with bit i−1 standing for e_i.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordElement {
    m: usize,
    terms: BTreeMap<u32, QSqrt2>,
}

fn reorder_sign(a: u32, b: u32) -> bool {
    // parity of pairs (i ∈ a, j ∈ b) with i > j, plus one per shared index
    let mut swaps = 0;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    (swaps + (a & b).count_ones()) % 2 == 1
}

impl CliffordElement {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_DIM, "Clifford dimension {m} exceeds {MAX_DIM}");
        CliffordElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(m: usize, c: QSqrt2) -> Self {
        let mut x = Self::zero(m);
        x.add_term(0, c);
        x
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, QSqrt2::one())
    }

    /// The generator e_i, 1 ≤ i ≤ m.
    pub fn e(m: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= m, "e_{i} outside C_{m}");
        let mut x = Self::zero(m);
        x.add_term(1 << (i - 1), QSqrt2::one());
        x
    }

    /// Product e_{i1}⋯e_{ik} in the given order.
    pub fn blade(m: usize, idx: &[usize]) -> Self {
        idx.iter()
            .fold(Self::one(m), |acc, &i| acc.mul(&Self::e(m, i)).unwrap())
    }

    /// Vector Σ c_i e_i from coefficients (c_1, …, c_k), k ≤ m.
    pub fn vector(m: usize, coeffs: &[QSqrt2]) -> Self {
        let mut x = Self::zero(m);
        for (i, c) in coeffs.iter().enumerate() {
            x.add_term(1 << i, c.clone());
        }
        x
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &QSqrt2)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, mask: u32) -> QSqrt2 {
        self.terms.get(&mask).cloned().unwrap_or_else(QSqrt2::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mask: u32, c: QSqrt2) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(QSqrt2::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    fn check_dim(&self, o: &Self) -> Result<(), Error> {
        if self.m != o.m {
            return Err(Error::Clifford(format!(
                "dimension mismatch {} vs {}",
                self.m, o.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        self.check_dim(o)?;
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add_term(*k, v.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&QSqrt2::from_int(-1))
    }

    pub fn scale(&self, c: &QSqrt2) -> Self {
        let mut r = Self::zero(self.m);
        for (k, v) in &self.terms {
            r.add_term(*k, v * c);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        self.check_dim(o)?;
        let mut r = Self::zero(self.m);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let p = x * y;
                r.add_term(a ^ b, if reorder_sign(*a, *b) { -p } else { p });
            }
        }
        Ok(r)
    }

    /// The canonical automorphism α: negates odd-grade parts.
    pub fn grade_involution(&self) -> Self {
        self.map_sign(|k| k.count_ones() % 2 == 1)
    }

    /// The anti-automorphism reversing products of generators.
    pub fn reversion(&self) -> Self {
        self.map_sign(|k| {
            let g = k.count_ones();
            (g * g.saturating_sub(1) / 2) % 2 == 1
        })
    }

    fn map_sign(&self, flip: impl Fn(u32) -> bool) -> Self {
        let mut r = Self::zero(self.m);
        for (k, v) in &self.terms {
            r.add_term(*k, if flip(*k) { -v } else { v.clone() });
        }
        r
    }

    /// Scalar value when the element lies in the grade-0 part.
    pub fn as_scalar(&self) -> Option<QSqrt2> {
        match self.terms.len() {
            0 => Some(QSqrt2::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_grade(&self, g: u32) -> bool {
        self.terms.keys().all(|k| k.count_ones() == g)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.count_ones() % 2 == 0)
    }

    /// Supported on 1 and products of the blocks e_{2i−1}e_{2i}.
    pub fn in_standard_torus_support(&self) -> bool {
        self.terms.keys().all(|&k| {
            let odd = k & 0x5555_5555;
            let even = (k >> 1) & 0x5555_5555;
            odd == even
        })
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mon: Vec<String> = (0..self.m)
                    .filter(|i| k >> i & 1 == 1)
                    .map(|i| format!("e{}", i + 1))
                    .collect();
                if mon.is_empty() {
                    format!("({v})")
                } else {
                    format!("({v}){}", mon.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn cl_multiply(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement, Error> {
    a.mul(b)
}

/// Exact inverse. Uses the reversion or Clifford-conjugate norm when it is
/// scalar, and otherwise solves the left-multiplication system (m ≤ 8).
pub fn cl_invert(u: &CliffordElement) -> Result<CliffordElement, Error> {
    let m = u.m;
    for cand in [u.reversion(), u.reversion().grade_involution()] {
        if let Some(n) = u.mul(&cand)?.as_scalar() {
            if let Some(ni) = n.inverse() {
                let inv = cand.scale(&ni);
                if u.mul(&inv)? == CliffordElement::one(m) {
                    return Ok(inv);
                }
            }
        }
    }
    if m > MAX_DENSE_DIM {
        return Err(Error::Clifford(format!(
            "no scalar norm and dense inversion is limited to m ≤ {MAX_DENSE_DIM}"
        )));
    }
    dense_invert(u)
}

fn dense_invert(u: &CliffordElement) -> Result<CliffordElement, Error> {
    let m = u.m;
    let n = 1usize << m;
    // column b of the matrix is u·e_b
    let mut a = vec![vec![QSqrt2::zero(); n + 1]; n];
    for b in 0..n as u32 {
        let mut eb = CliffordElement::zero(m);
        eb.add_term(b, QSqrt2::one());
        for (k, v) in u.mul(&eb)?.terms {
            a[k as usize][b as usize] = v;
        }
    }
    a[0][n] = QSqrt2::one();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Clifford("element is not a unit".into()))?;
        a.swap(col, piv);
        let inv = a[col][col].inverse().unwrap();
        for j in col..=n {
            a[col][j] = &a[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
    }
    let mut x = CliffordElement::zero(m);
    for (k, row) in a.iter().enumerate() {
        x.add_term(k as u32, row[n].clone());
    }
    Ok(x)
}

/// ω_i = (e_{2i−1} − e_{2i})/√2.
pub fn omega_i(m: usize, i: usize) -> CliffordElement {
    let r = QSqrt2::inv_sqrt2();
    CliffordElement::e(m, 2 * i - 1)
        .sub(&CliffordElement::e(m, 2 * i))
        .unwrap()
        .scale(&r)
}

/// v_i = (e_{2i−1} + e_{2i})/√2.
pub fn v_i(m: usize, i: usize) -> CliffordElement {
    let r = QSqrt2::inv_sqrt2();
    CliffordElement::e(m, 2 * i - 1)
        .add(&CliffordElement::e(m, 2 * i))
        .unwrap()
        .scale(&r)
}

/// ω = ω_1⋯ω_s in C_m.
pub fn omega(s: usize, m: usize) -> Result<CliffordElement, Error> {
    if s == 0 || s % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "s = {s} must be even and positive"
        )));
    }
    if m < 2 * s || m > MAX_DIM {
        return Err(Error::InvalidParams(format!(
            "need 2s ≤ m ≤ {MAX_DIM}, got s={s}, m={m}"
        )));
    }
    (1..=s).try_fold(CliffordElement::one(m), |acc, i| acc.mul(&omega_i(m, i)))
}

/// Rational m×m matrix with entries in Q(√2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub n: usize,
    pub entries: Vec<Vec<QSqrt2>>,
}

impl QMatrix {
    pub fn identity(n: usize) -> Self {
        let mut e = vec![vec![QSqrt2::zero(); n]; n];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = QSqrt2::one();
        }
        QMatrix { n, entries: e }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let entries: Vec<Vec<QSqrt2>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| QSqrt2::from_int(x)).collect())
            .collect();
        QMatrix {
            n: entries.len(),
            entries,
        }
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut r = vec![vec![QSqrt2::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = QSqrt2::zero();
                for k in 0..n {
                    acc = &acc + &(&self.entries[i][k] * &o.entries[k][j]);
                }
                r[i][j] = acc;
            }
        }
        QMatrix { n, entries: r }
    }

    pub fn transpose(&self) -> QMatrix {
        let n = self.n;
        let e = (0..n)
            .map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        QMatrix { n, entries: e }
    }

    pub fn det(&self) -> QSqrt2 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut d = QSqrt2::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return QSqrt2::zero();
            };
            if p != c {
                a.swap(p, c);
                d = -d;
            }
            d = &d * &a[c][c];
            let inv = a[c][c].inverse().unwrap();
            for r in c + 1..n {
                let f = &a[r][c] * &inv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        d
    }

    /// Block diagonal diag(f, …, f) on the first 2k coordinates with
    /// f = [[0,1],[1,0]], identity elsewhere.
    pub fn flip_blocks(k: usize, n: usize) -> QMatrix {
        let mut q = QMatrix::identity(n);
        for i in 0..k {
            let (a, b) = (2 * i, 2 * i + 1);
            q.entries[a][a] = QSqrt2::zero();
            q.entries[b][b] = QSqrt2::zero();
            q.entries[a][b] = QSqrt2::one();
            q.entries[b][a] = QSqrt2::one();
        }
        q
    }
}

/// Matrix of v ↦ α(x)·v·x⁻¹ in the basis e_1..e_m.
pub fn twisted_projection(x: &CliffordElement) -> Result<QMatrix, Error> {
    let m = x.m;
    let ax = x.grade_involution();
    let xi = cl_invert(x)?;
    let mut entries = vec![vec![QSqrt2::zero(); m]; m];
    for j in 1..=m {
        let img = ax.mul(&CliffordElement::e(m, j))?.mul(&xi)?;
        if !img.is_grade(1) {
            return Err(Error::Clifford(format!("α(x)e_{j}x⁻¹ is not a vector")));
        }
        for (i, row) in entries.iter_mut().enumerate() {
            row[j - 1] = img.coeff(1 << i);
        }
    }
    Ok(QMatrix { n: m, entries })
}

/// h_i = 1 + e_{4i−3}e_{4i} − e_{4i−2}e_{4i} + e_{4i−1}e_{4i}.
pub fn h_i(m: usize, i: usize) -> CliffordElement {
    let b = |a: usize| CliffordElement::blade(m, &[a, 4 * i]);
    CliffordElement::one(m)
        .add(&b(4 * i - 3))
        .and_then(|x| x.sub(&b(4 * i - 2)))
        .and_then(|x| x.add(&b(4 * i - 1)))
        .unwrap()
}

/// h = h_1⋯h_{s/2} in C_m.
pub fn conjugating_element(s: usize, m: usize) -> Result<CliffordElement, Error> {
    if s == 0 || s % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "s = {s} must be even and positive"
        )));
    }
    if m < 2 * s || m > MAX_DIM {
        return Err(Error::InvalidParams(format!(
            "need 2s ≤ m ≤ {MAX_DIM}, got s={s}, m={m}"
        )));
    }
    (1..=s / 2).try_fold(CliffordElement::one(m), |acc, i| acc.mul(&h_i(m, i)))
}

/// h·x·h⁻¹.
pub fn conjugate(h: &CliffordElement, x: &CliffordElement) -> Result<CliffordElement, Error> {
    h.mul(x)?.mul(&cl_invert(h)?)
}

/// An angle that is an integer multiple of π/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuarterTurn(i64);

impl QuarterTurn {
    pub fn quarters(k: i64) -> Self {
        QuarterTurn(k.rem_euclid(4))
    }

    /// The angle (num/den)·π; fails unless it is a multiple of π/2.
    pub fn from_pi_fraction(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 || (2 * num) % den != 0 {
            return Err(Error::InvalidParams(format!(
                "{num}π/{den} is not a quarter turn"
            )));
        }
        Ok(QuarterTurn::quarters(2 * num / den))
    }

    pub fn cos(self) -> i64 {
        [1, 0, -1, 0][self.0 as usize]
    }

    pub fn sin(self) -> i64 {
        [0, 1, 0, -1][self.0 as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusVariant {
    Standard,
    /// Factors v_k v_{k+1} (k odd) and −ω_{k−1}ω_k (k even) for k ≤ s.
    Conjugate {
        s: usize,
    },
}

/// Product of the factors cos θ_k + b_k sin θ_k, k = 1..len, in C_m.
pub fn torus_element(
    thetas: &[QuarterTurn],
    variant: TorusVariant,
    m: usize,
) -> Result<CliffordElement, Error> {
    if 2 * thetas.len() > m || m > MAX_DIM {
        return Err(Error::InvalidParams(format!(
            "{} angles do not fit in C_{m}",
            thetas.len()
        )));
    }
    let mut acc = CliffordElement::one(m);
    for (idx, th) in thetas.iter().enumerate() {
        let k = idx + 1;
        let bivector = match variant {
            TorusVariant::Conjugate { s } if k <= s => {
                if k % 2 == 1 {
                    if k + 1 > thetas.len() {
                        return Err(Error::InvalidParams(
                            "conjugate variant needs k+1 ≤ len".into(),
                        ));
                    }
                    v_i(m, k).mul(&v_i(m, k + 1))?
                } else {
                    omega_i(m, k - 1).mul(&omega_i(m, k))?.neg()
                }
            }
            _ => CliffordElement::blade(m, &[2 * k - 1, 2 * k]),
        };
        let factor = CliffordElement::scalar(m, QSqrt2::from_int(th.cos()))
            .add(&bivector.scale(&QSqrt2::from_int(th.sin())))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Outcome of the geometric checks for a given s.
#[derive(Clone, Debug)]
pub struct GeometryReport {
    pub s: usize,
    pub m: usize,
    pub omega_square: QSqrt2,
    pub omega_square_expected: i64,
    pub projection_is_flip: bool,
    pub conjugated: CliffordElement,
    pub conjugate_in_torus: bool,
    pub torus_reaches_omega: bool,
}

impl GeometryReport {
    pub fn passed(&self) -> bool {
        self.omega_square == QSqrt2::from_int(self.omega_square_expected)
            && self.projection_is_flip
            && self.conjugate_in_torus
            && self.torus_reaches_omega
    }
}

/// ω², p(ω) = diag(f,…,f), hωh⁻¹ ∈ T̃ and ω ∈ T for the given s, m.
pub fn geometry_checks(s: usize, m: usize) -> Result<GeometryReport, Error> {
    let w = omega(s, m)?;
    let sq = w.mul(&w)?.as_scalar().unwrap_or_else(QSqrt2::zero);
    let expected = if s.is_multiple_of(4) { 1 } else { -1 };
    let p = twisted_projection(&w)?;
    let h = conjugating_element(s, m)?;
    let conj = conjugate(&h, &w)?;
    let thetas: Vec<QuarterTurn> = (1..=s)
        .map(|k| {
            if k % 2 == 0 {
                QuarterTurn::quarters(-1)
            } else {
                QuarterTurn::quarters(0)
            }
        })
        .collect();
    let t = torus_element(&thetas, TorusVariant::Conjugate { s }, m)?;
    Ok(GeometryReport {
        s,
        m,
        omega_square: sq,
        omega_square_expected: expected,
        projection_is_flip: p == QMatrix::flip_blocks(s, m),
        conjugate_in_torus: conj.in_standard_torus_support() && !conj.is_zero(),
        conjugated: conj,
        torus_reaches_omega: t == w,
    })
}

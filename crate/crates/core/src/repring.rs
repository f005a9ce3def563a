//! Case parameters, the finite-rank ring B, restriction images, the change of
//! generators P_i → U_l → V_l, and a Laurent-character oracle for the
//! restriction formulas.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact_core::{
    bezout_coeffs, binom, gcd_list, pow2, pow2_int, two_adic_split, unimodular_completion,
};
use crate::intlinalg::IntMatrix;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    /// m odd, s ≡ 0 mod 4
    OddZero,
    /// m even, s ≡ 0 mod 4
    EvenZero,
    /// m odd, s ≡ 2 mod 4
    OddTwo,
    /// m even, s ≡ 2 mod 4
    EvenTwo,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseParams {
    pub m: i64,
    pub s: i64,
    pub n: i64,
    pub c: i64,
    pub case: Case,
    /// gcd of the scaled binomials over the free index range; 0 when the
    /// range is empty (m even, s = 2).
    pub b0: BigInt,
    pub alpha: i64,
    pub betas: Vec<BigInt>,
}

impl CaseParams {
    pub fn is_odd(&self) -> bool {
        self.m % 2 == 1
    }

    /// +1 when s ≡ 0 mod 4, −1 when s ≡ 2 mod 4: overall sign of Res(δ).
    pub fn eps(&self) -> i64 {
        if self.s % 4 == 0 {
            1
        } else {
            -1
        }
    }

    /// The sign in 1 ± binom(…) of the δ_c relations: −1 for s ≡ 0 mod 4.
    pub fn sigma(&self) -> i64 {
        -self.eps()
    }

    /// Largest Π-generator index of RSpin(m).
    pub fn top(&self) -> i64 {
        if self.is_odd() {
            self.n - 1
        } else {
            self.n - 2
        }
    }

    /// Indices i = c+1..top of the generators P_i.
    pub fn free_indices(&self) -> Vec<i64> {
        (self.c + 1..=self.top()).collect()
    }

    /// binom(s/2 + i − 1, i)·2^{2i−1}.
    pub fn p_coeff(&self, i: i64) -> BigInt {
        binom(self.s / 2 + i - 1, i) * pow2_int(2 * i - 1)
    }

    /// n for m odd, n − 1 for m even.
    pub fn alpha_bound(&self) -> i64 {
        if self.is_odd() {
            self.n
        } else {
            self.n - 1
        }
    }

    pub fn has_u4(&self) -> bool {
        self.alpha < self.alpha_bound()
    }

    pub fn rank(&self) -> usize {
        if self.is_odd() {
            4
        } else {
            8
        }
    }

    /// Number of exterior t-generators.
    pub fn t_count(&self) -> i64 {
        (self.s - 2).max(0)
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.m, self.s)
    }
}

/// Derives n, c, the parity case, b0, α and the Bezout coefficients β.
pub fn build_case(m: i64, s: i64) -> Result<CaseParams, Error> {
    if s < 1 || m < 1 {
        return Err(Error::InvalidParams(format!(
            "m = {m}, s = {s} must be positive"
        )));
    }
    if s % 2 == 1 {
        return Err(Error::Unsupported(format!("s = {s} is odd")));
    }
    if 2 * s > m {
        return Err(Error::InvalidParams(format!(
            "2s = {} exceeds m = {m}",
            2 * s
        )));
    }
    let n = m / 2;
    let c = (m - 2 * s) / 2;
    if c == 0 {
        return Err(Error::Unsupported(format!("c = 0 for (m, s) = ({m}, {s})")));
    }
    let case = match (m % 2 == 1, s % 4 == 0) {
        (true, true) => Case::OddZero,
        (false, true) => Case::EvenZero,
        (true, false) => Case::OddTwo,
        (false, false) => Case::EvenTwo,
    };
    let mut p = CaseParams {
        m,
        s,
        n,
        c,
        case,
        b0: BigInt::zero(),
        alpha: 0,
        betas: vec![],
    };
    let list: Vec<BigInt> = p.free_indices().iter().map(|&i| p.p_coeff(i)).collect();
    if list.is_empty() {
        p.alpha = p.alpha_bound();
        return Ok(p);
    }
    let b0 = gcd_list(&list)?;
    let (g, betas) = bezout_coeffs(&list)?;
    debug_assert_eq!(g, b0);
    let (v, _) = two_adic_split(&b0)?;
    p.alpha = (v as i64).min(p.alpha_bound());
    p.b0 = b0;
    p.betas = betas;
    Ok(p)
}

/// Exponents (y, δ_c, δ⁺) of a monomial.
pub type Mono = (u32, u32, u32);

/// An element of B in its monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BElement {
    pub coords: Vec<BigInt>,
}

impl BElement {
    pub fn zero(rank: usize) -> Self {
        BElement {
            coords: vec![BigInt::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BElement {
            coords: self.coords.iter().map(|x| x * k).collect(),
        }
    }

    pub fn scale_i(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }
}

impl Add for &BElement {
    type Output = BElement;
    fn add(self, o: &BElement) -> BElement {
        BElement {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &BElement {
    type Output = BElement;
    fn sub(self, o: &BElement) -> BElement {
        BElement {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &BElement {
    type Output = BElement;
    fn neg(self) -> BElement {
        BElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

/// B = Z[y, δ_c]/I of rank 4 (m odd), or Z[y, δ_c, δ⁺]/I of rank 8 (m even),
/// stored through its structure constants.
#[derive(Clone, Debug)]
pub struct BAlgebra {
    pub params: CaseParams,
    rank: usize,
    table: Vec<Vec<BElement>>,
    /// δ_c² = −2^{c+1}δ_c + k_delta·y
    pub k_delta: BigInt,
    /// (δ⁺)² = δ_cδ⁺ + 2^{c−1}δ_c − k_plus·y
    pub k_plus: BigInt,
}

pub const BASIS_LABELS: [&str; 8] = ["1", "y", "δ_c", "δ_c y", "δ⁺", "δ⁺ y", "δ_c δ⁺", "δ_c δ⁺ y"];

fn mono_index(mo: Mono) -> usize {
    (mo.0 + 2 * mo.1 + 4 * mo.2) as usize
}

fn index_mono(i: usize) -> Mono {
    ((i & 1) as u32, (i >> 1 & 1) as u32, (i >> 2 & 1) as u32)
}

impl BAlgebra {
    pub fn new(params: &CaseParams) -> Self {
        let c = params.c;
        let k_delta = pow2_int(2 * c - 1) * (1 + params.sigma() * binom(params.s / 2 + c, c));
        let lp: BigInt = 1 + params.sigma() * binom(params.s / 2 + c - 1, c - 1);
        let kp = pow2(2 * c - 3) * num_rational::BigRational::from_integer(lp);
        assert!(kp.is_integer(), "2^(2c-3)·L' is not integral");
        let mut alg = BAlgebra {
            params: params.clone(),
            rank: params.rank(),
            table: vec![],
            k_delta,
            k_plus: kp.to_integer(),
        };
        let r = alg.rank;
        alg.table = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let (a, b) = (index_mono(i), index_mono(j));
                        let mut poly = BTreeMap::new();
                        poly.insert((a.0 + b.0, a.1 + b.1, a.2 + b.2), BigInt::one());
                        alg.reduce(poly)
                    })
                    .collect()
            })
            .collect();
        alg
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> Vec<&'static str> {
        BASIS_LABELS[..self.rank].to_vec()
    }

    /// Rewrites a polynomial in y, δ_c, δ⁺ into the monomial basis.
    pub fn reduce(&self, mut poly: BTreeMap<Mono, BigInt>) -> BElement {
        let c = self.params.c;
        let two = BigInt::from(2);
        while let Some((&mo, _)) = poly
            .iter()
            .find(|(mo, v)| !v.is_zero() && (mo.0 > 1 || mo.1 > 1 || mo.2 > 1))
        {
            let k = poly.remove(&mo).unwrap();
            let (a, b, d) = mo;
            let mut put = |key: Mono, v: BigInt| {
                *poly.entry(key).or_insert_with(BigInt::zero) += v;
            };
            if a > 1 {
                put((a - 1, b, d), -&two * &k);
            } else if b > 1 {
                put((a, b - 1, d), -pow2_int(c + 1) * &k);
                put((a + 1, b - 2, d), &self.k_delta * &k);
            } else {
                put((a, b + 1, d - 1), k.clone());
                put((a, b + 1, d - 2), pow2_int(c - 1) * &k);
                put((a + 1, b, d - 2), -&self.k_plus * &k);
            }
        }
        let mut e = BElement::zero(self.rank);
        for (mo, v) in poly {
            if v.is_zero() {
                continue;
            }
            assert!(mono_index(mo) < self.rank, "δ⁺ in a rank-4 algebra");
            e.coords[mono_index(mo)] += v;
        }
        e
    }

    pub fn zero(&self) -> BElement {
        BElement::zero(self.rank)
    }

    pub fn basis(&self, i: usize) -> BElement {
        let mut e = self.zero();
        e.coords[i] = BigInt::one();
        e
    }

    pub fn one(&self) -> BElement {
        self.basis(0)
    }

    pub fn constant(&self, k: &BigInt) -> BElement {
        self.one().scale(k)
    }

    pub fn y(&self) -> BElement {
        self.basis(1)
    }

    pub fn delta(&self) -> BElement {
        self.basis(2)
    }

    pub fn delta_plus(&self) -> BElement {
        assert_eq!(self.rank, 8, "δ⁺ exists only for m even");
        self.basis(4)
    }

    /// θ = 1 + y.
    pub fn theta(&self) -> BElement {
        &self.one() + &self.y()
    }

    /// y^a δ_c^b (δ⁺)^d.
    pub fn monomial(&self, mo: Mono) -> BElement {
        let mut poly = BTreeMap::new();
        poly.insert(mo, BigInt::one());
        self.reduce(poly)
    }

    pub fn mul(&self, a: &BElement, b: &BElement) -> BElement {
        let mut r = self.zero();
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, t) in self.table[i][j].coords.iter().enumerate() {
                    if !t.is_zero() {
                        r.coords[k] += &xy * t;
                    }
                }
            }
        }
        r
    }

    pub fn pow(&self, a: &BElement, e: u32) -> BElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Matrix of x ↦ a·x; column j is a·(basis j).
    pub fn mult_operator(&self, a: &BElement) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.rank)
            .map(|j| self.mul(a, &self.basis(j)).coords)
            .collect();
        IntMatrix::from_cols(&cols, self.rank)
    }

    /// Structure constant table entry basis_i · basis_j.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &BElement {
        &self.table[i][j]
    }

    /// Exhaustive unit, commutativity and associativity check on the basis.
    pub fn check_axioms(&self) -> bool {
        let r = self.rank;
        let unit = (0..r).all(|i| self.table[0][i] == self.basis(i));
        let comm = (0..r).all(|i| (0..r).all(|j| self.table[i][j] == self.table[j][i]));
        let assoc = (0..r).all(|i| {
            (0..r).all(|j| {
                (0..r).all(|k| {
                    let left = self.mul(&self.table[i][j], &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.table[j][k]);
                    left == right
                })
            })
        });
        unit && comm && assoc
    }

    /// Evaluates Σ coeff·monomial.
    pub fn from_terms(&self, terms: &[(BigInt, Mono)]) -> BElement {
        let mut poly = BTreeMap::new();
        for (k, mo) in terms {
            *poly.entry(*mo).or_insert_with(BigInt::zero) += k;
        }
        self.reduce(poly)
    }

    pub fn format(&self, e: &BElement) -> String {
        let mut parts = vec![];
        for (i, x) in e.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let lab = BASIS_LABELS[i];
            parts.push(if i == 0 {
                x.to_string()
            } else {
                format!("{x}·{lab}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn build_b(params: &CaseParams) -> BAlgebra {
    BAlgebra::new(params)
}

/// Res(δ_n) (m odd) or Res(δ_n⁺) (m even) in B.
pub fn res_delta(params: &CaseParams) -> BElement {
    let b = BAlgebra::new(params);
    let shift = if params.is_odd() { 1 } else { 2 };
    let e = BigInt::from(params.eps());
    let dy = pow2_int(params.s - shift);
    let d = pow2_int(params.s - shift + 1);
    let y = pow2_int(params.n - shift);
    b.from_terms(&[
        (&e * dy, (1, 1, 0)),
        (&e * d, (0, 1, 0)),
        (&e * y, (1, 0, 0)),
    ])
}

/// One summand (constant + y_coeff·y)·Π̄_j of Res(Π_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResPiTerm {
    pub j: i64,
    pub constant: BigInt,
    pub y_coeff: BigInt,
}

/// Res(Π_i) = Σ_j (constant_j + y_coeff_j·y)·Π̄_j in RH.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResPi {
    pub i: i64,
    pub terms: Vec<ResPiTerm>,
}

/// Coefficient of t^i in (1 + 2ty)^{s/2}·Π̄[t], with y^k = (−2)^{k−1}y.
pub fn res_pi_in_rh(params: &CaseParams, i: i64) -> Result<ResPi, Error> {
    if i < 1 || i > params.top() {
        return Err(Error::IndexOutOfRange(i.max(0) as usize));
    }
    let half = params.s / 2;
    let terms = (0..=i.min(params.c))
        .map(|j| {
            let k = i - j;
            if k == 0 {
                ResPiTerm {
                    j,
                    constant: BigInt::one(),
                    y_coeff: BigInt::zero(),
                }
            } else {
                let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
                ResPiTerm {
                    j,
                    constant: BigInt::zero(),
                    y_coeff: sign * binom(half, k) * pow2_int(2 * k - 1),
                }
            }
        })
        .collect();
    Ok(ResPi { i, terms })
}

/// Π̄_j in B: 1 for j = 0, −binom(s/2+j−1, j)·2^{2j−1}·y for 1 ≤ j ≤ c, 0 above.
pub fn pibar_in_b(b: &BAlgebra, j: i64) -> BElement {
    let p = &b.params;
    match j {
        0 => b.one(),
        j if j <= p.c => b.y().scale(&-p.p_coeff(j)),
        _ => b.zero(),
    }
}

/// Π'_i = Res(Π_i) in B for c < i ≤ top, by the recursive formula
/// Π'_i = binom(s/2+i−1, i)2^{2i−1}y − Σ_{j=c+1}^{i−1} binom(s/2+i−j−1, i−j)2^{2(i−j)}Π'_j.
pub fn pi_prime_in_b(params: &CaseParams, i: i64) -> Result<BElement, Error> {
    if i <= params.c || i > params.top() {
        return Err(Error::IndexOutOfRange(i.max(0) as usize));
    }
    let b = BAlgebra::new(params);
    let mut memo: BTreeMap<i64, BElement> = BTreeMap::new();
    for k in params.c + 1..=i {
        let mut v = b.y().scale(&params.p_coeff(k));
        for j in params.c + 1..k {
            let coef = binom(params.s / 2 + k - j - 1, k - j) * pow2_int(2 * (k - j));
            v = &v - &memo[&j].scale(&coef);
        }
        memo.insert(k, v);
    }
    Ok(memo.remove(&i).unwrap())
}

/// Res(Π_i) in B by direct expansion of the generating function, any 1 ≤ i ≤ top.
pub fn pi_prime_by_expansion(params: &CaseParams, i: i64) -> Result<BElement, Error> {
    let b = BAlgebra::new(params);
    let rp = res_pi_in_rh(params, i)?;
    let mut acc = b.zero();
    for t in rp.terms {
        let coef = &b.constant(&t.constant) + &b.y().scale(&t.y_coeff);
        acc = &acc + &b.mul(&coef, &pibar_in_b(&b, t.j));
    }
    Ok(acc)
}

/// The substitutions P_i → U_l → V_l and their restrictions.
#[derive(Clone, Debug)]
pub struct ChangeOfGenerators {
    pub indices: Vec<i64>,
    /// Row r expresses P_{indices[r]} in the Π'_{indices[·]}; unitriangular.
    pub p_matrix: IntMatrix,
    pub res_p: Vec<BElement>,
    pub e: IntMatrix,
    pub a: Vec<BigInt>,
    /// Row l expresses V_l in the Π'_{indices[·]}.
    pub v_matrix: IntMatrix,
    pub res_u: Vec<BElement>,
    pub res_v: Vec<BElement>,
}

impl ChangeOfGenerators {
    pub fn p_unitriangular(&self) -> bool {
        let k = self.indices.len();
        (0..k).all(|i| {
            self.p_matrix[(i, i)].is_one() && (i + 1..k).all(|j| self.p_matrix[(i, j)].is_zero())
        })
    }

    /// Res(P_i) = binom(s/2+i−1, i)2^{2i−1}y, Res(V_1) = b0·y, Res(V_l) = 0.
    pub fn verify(&self, params: &CaseParams) -> bool {
        let b = BAlgebra::new(params);
        let p_ok = self
            .indices
            .iter()
            .zip(&self.res_p)
            .all(|(&i, r)| *r == b.y().scale(&params.p_coeff(i)));
        let e_ok = self.indices.is_empty()
            || (self.e.det().abs().is_one() && self.e.row(0) == params.betas.as_slice());
        let v_ok = self.res_v.iter().enumerate().all(|(l, r)| {
            if l == 0 {
                *r == b.y().scale(&params.b0)
            } else {
                r.is_zero()
            }
        });
        p_ok && e_ok && v_ok && self.p_unitriangular()
    }
}

pub fn change_of_generators(params: &CaseParams) -> Result<ChangeOfGenerators, Error> {
    let b = BAlgebra::new(params);
    let idx = params.free_indices();
    let k = idx.len();
    let mut pm = IntMatrix::zeros(k, k);
    for (r, &i) in idx.iter().enumerate() {
        pm[(r, r)] = BigInt::one();
        for (col, &j) in idx.iter().enumerate().take(r) {
            pm[(r, col)] = binom(params.s / 2 + i - j - 1, i - j) * pow2_int(2 * (i - j));
        }
    }
    let pi_primes: Vec<BElement> = idx
        .iter()
        .map(|&i| pi_prime_in_b(params, i))
        .collect::<Result<_, _>>()?;
    let combine = |row: &[BigInt]| {
        row.iter()
            .zip(&pi_primes)
            .fold(b.zero(), |acc, (x, v)| &acc + &v.scale(x))
    };
    let res_p: Vec<BElement> = (0..k).map(|r| combine(pm.row(r))).collect();
    if k == 0 {
        return Ok(ChangeOfGenerators {
            indices: idx,
            p_matrix: pm,
            res_p,
            e: IntMatrix::zeros(0, 0),
            a: vec![],
            v_matrix: IntMatrix::zeros(0, 0),
            res_u: vec![],
            res_v: vec![],
        });
    }
    let e = unimodular_completion(&params.betas)?;
    let u_matrix = &e * &pm;
    let res_u: Vec<BElement> = (0..k).map(|l| combine(u_matrix.row(l))).collect();
    let a: Vec<BigInt> = (0..k)
        .map(|l| {
            let s: BigInt = (0..k).map(|j| &e[(l, j)] * params.p_coeff(idx[j])).sum();
            debug_assert!(s.is_multiple_of(&params.b0));
            s / &params.b0
        })
        .collect();
    let mut vm = u_matrix.clone();
    for l in 1..k {
        for j in 0..k {
            let t = &a[l] * &u_matrix[(0, j)];
            vm[(l, j)] -= t;
        }
    }
    let res_v: Vec<BElement> = (0..k).map(|l| combine(vm.row(l))).collect();
    Ok(ChangeOfGenerators {
        indices: idx,
        p_matrix: pm,
        res_p,
        e,
        a,
        v_matrix: vm,
        res_u,
        res_v,
    })
}

/// Element of Z[z_1^{±1}, …, z_k^{±1}] ⊗ Z[φ]/(φ⁴ − 1).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentElement {
    terms: BTreeMap<(Vec<i32>, u8), BigInt>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: usize, exps: Vec<i32>, phi: i32, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), k);
        let mut e = Self::zero();
        e.add_term(exps, phi.rem_euclid(4) as u8, coeff);
        e
    }

    pub fn constant(k: usize, c: i64) -> Self {
        Self::monomial(k, vec![0; k], 0, c.into())
    }

    /// z_i^{±1}, 0-based variable index.
    pub fn z(k: usize, i: usize, power: i32) -> Self {
        let mut ex = vec![0; k];
        ex[i] = power;
        Self::monomial(k, ex, 0, BigInt::one())
    }

    pub fn phi(k: usize, power: i32) -> Self {
        Self::monomial(k, vec![0; k], power, BigInt::one())
    }

    fn add_term(&mut self, exps: Vec<i32>, phi: u8, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (exps, phi);
        let e = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut r = Self::zero();
        for ((ex, p), v) in &self.terms {
            r.add_term(ex.clone(), *p, v * k);
        }
        r
    }

    /// Image under z_i ↦ 1, φ ↦ 1.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Inverse of a single signed monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((ex, p), v) = self.terms.iter().next().unwrap();
        if !v.abs().is_one() {
            return None;
        }
        let mut r = Self::zero();
        r.add_term(
            ex.iter().map(|x| -x).collect(),
            ((4 - *p as i32) % 4) as u8,
            v.clone(),
        );
        Some(r)
    }
}

impl Add for &LaurentElement {
    type Output = LaurentElement;
    fn add(self, o: &LaurentElement) -> LaurentElement {
        let mut r = self.clone();
        for ((ex, p), v) in &o.terms {
            r.add_term(ex.clone(), *p, v.clone());
        }
        r
    }
}

impl Sub for &LaurentElement {
    type Output = LaurentElement;
    fn sub(self, o: &LaurentElement) -> LaurentElement {
        self + &o.scale(&BigInt::from(-1))
    }
}

impl Mul for &LaurentElement {
    type Output = LaurentElement;
    fn mul(self, o: &LaurentElement) -> LaurentElement {
        let mut r = LaurentElement::zero();
        for ((e1, p1), v1) in &self.terms {
            for ((e2, p2), v2) in &o.terms {
                let ex = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(ex, (p1 + p2) % 4, v1 * v2);
            }
        }
        r
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((ex, p), v)| {
                let mut s = v.to_string();
                if *p > 0 {
                    s += &format!("·φ^{p}");
                }
                for (i, e) in ex.iter().enumerate() {
                    if *e != 0 {
                        s += &format!("·z{}^{e}", i + 1);
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial in t with Laurent coefficients.
type TPoly = Vec<LaurentElement>;

fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut r = vec![LaurentElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = &r[i + j] + &(x * y);
        }
    }
    r
}

/// Character data for the restriction μ^#: z_i for i ≤ s map to 1 (odd i)
/// or −φ (even i); z_i for i > s become the variables of the torus of
/// Spin(m − 2s).
pub struct LaurentModel {
    pub params: CaseParams,
    k: usize,
}

impl LaurentModel {
    pub fn new(params: &CaseParams) -> Self {
        LaurentModel {
            params: params.clone(),
            k: params.c as usize,
        }
    }

    pub fn nvars(&self) -> usize {
        self.k
    }

    /// μ^#(z_i), 1-based i ≤ n.
    pub fn mu(&self, i: i64) -> LaurentElement {
        let k = self.k;
        if i > self.params.s {
            LaurentElement::z(k, (i - self.params.s - 1) as usize, 1)
        } else if i % 2 == 1 {
            LaurentElement::constant(k, 1)
        } else {
            LaurentElement::phi(k, 1).scale(&BigInt::from(-1))
        }
    }

    pub fn y(&self) -> LaurentElement {
        &LaurentElement::phi(self.k, 2) - &LaurentElement::constant(self.k, 1)
    }

    pub fn theta(&self) -> LaurentElement {
        LaurentElement::phi(self.k, 2)
    }

    fn square_diff(x: &LaurentElement) -> LaurentElement {
        let d = x - &x.monomial_inverse().unwrap();
        &d * &d
    }

    /// μ^#(Π[t]) = ∏_{i ≤ n} (1 + t·(μ(z_i) − μ(z_i)⁻¹)²), as coefficients of t^0..t^n.
    pub fn pi_generating(&self) -> TPoly {
        let one = LaurentElement::constant(self.k, 1);
        (1..=self.params.n).fold(vec![one.clone()], |acc, i| {
            tpoly_mul(&acc, &vec![one.clone(), Self::square_diff(&self.mu(i))])
        })
    }

    /// Π̄_j as the j-th elementary symmetric polynomial in (z − z⁻¹)² over the
    /// c free variables, by subset enumeration.
    pub fn pibar(&self, j: i64) -> LaurentElement {
        let k = self.k;
        let sq: Vec<LaurentElement> = (0..k)
            .map(|i| Self::square_diff(&LaurentElement::z(k, i, 1)))
            .collect();
        let mut acc = LaurentElement::zero();
        for mask in 0u32..(1 << k) {
            if mask.count_ones() as i64 != j {
                continue;
            }
            let term = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .fold(LaurentElement::constant(k, 1), |a, i| &a * &sq[i]);
            acc = &acc + &term;
        }
        acc
    }

    /// ∏_{i ∈ S} μ(z_i)^{±1} summed over sign patterns with the given parity
    /// of inverted factors (None: all patterns).
    fn spin_sum(
        &self,
        range: std::ops::RangeInclusive<i64>,
        parity: Option<u32>,
    ) -> LaurentElement {
        let idx: Vec<i64> = range.collect();
        let vals: Vec<(LaurentElement, LaurentElement)> = idx
            .iter()
            .map(|&i| {
                let x = if i > self.params.s {
                    LaurentElement::z(self.k, (i - self.params.s - 1) as usize, 1)
                } else {
                    self.mu(i)
                };
                let xi = x.monomial_inverse().unwrap();
                (x, xi)
            })
            .collect();
        let mut acc = LaurentElement::zero();
        for mask in 0u32..(1 << idx.len()) {
            if let Some(p) = parity {
                if mask.count_ones() % 2 != p {
                    continue;
                }
            }
            let term = vals
                .iter()
                .enumerate()
                .fold(LaurentElement::constant(self.k, 1), |a, (b, (x, xi))| {
                    &a * if mask >> b & 1 == 1 { xi } else { x }
                });
            acc = &acc + &term;
        }
        acc
    }

    /// μ^#(Δ_n) (m odd) or μ^#(Δ_n⁺) (m even).
    pub fn delta_image(&self) -> LaurentElement {
        let parity = if self.params.is_odd() { None } else { Some(0) };
        self.spin_sum(1..=self.params.n, parity)
    }

    /// μ^#(χ_n) = μ^#(Δ_n⁺) − μ^#(Δ_n⁻), m even.
    pub fn chi_image(&self) -> LaurentElement {
        let n = self.params.n;
        &self.spin_sum(1..=n, Some(0)) - &self.spin_sum(1..=n, Some(1))
    }

    fn phi_twist(&self) -> LaurentElement {
        LaurentElement::phi(self.k, if self.params.s % 4 == 0 { 0 } else { 1 })
    }

    /// Δ̄_c = φ^κΔ_c with κ = 0 (s ≡ 0 mod 4) or 1 (s ≡ 2 mod 4); the
    /// parity selects Δ̄_c^± instead.
    pub fn delta_bar(&self, parity: Option<u32>) -> LaurentElement {
        let s = self.params.s;
        let base = self.spin_sum(s + 1..=self.params.n, parity);
        &self.phi_twist() * &base
    }

    /// Image of a B-element under y ↦ φ² − 1, δ_c ↦ Δ̄_c − 2^c,
    /// δ⁺ ↦ Δ̄_c⁺ − 2^{c−1}.
    pub fn eval_b(&self, b: &BAlgebra, e: &BElement) -> LaurentElement {
        let k = self.k;
        let c = self.params.c;
        let y = self.y();
        let d = &self.delta_bar(None) - &LaurentElement::constant(k, 1).scale(&pow2_int(c));
        let dp = if b.rank() == 8 {
            &self.delta_bar(Some(0)) - &LaurentElement::constant(k, 1).scale(&pow2_int(c - 1))
        } else {
            LaurentElement::zero()
        };
        let one = LaurentElement::constant(k, 1);
        let mut acc = LaurentElement::zero();
        for (i, x) in e.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (ey, ed, ep) = index_mono(i);
            let mut t = one.clone();
            if ey == 1 {
                t = &t * &y;
            }
            if ed == 1 {
                t = &t * &d;
            }
            if ep == 1 {
                t = &t * &dp;
            }
            acc = &acc + &t.scale(x);
        }
        acc
    }
}

/// Comparison of one restriction value against its character computation.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRecord {
    pub what: String,
    pub passed: bool,
}

/// Compares μ^#(Π_i) for all 1 ≤ i ≤ top and μ^#(Δ) (and μ^#(χ) = 0 for m
/// even) with the closed forms. The Δ comparison is between rank-zero
/// shifts: both sides have their augmentation subtracted.
pub fn laurent_oracle(params: &CaseParams) -> Vec<OracleRecord> {
    let model = LaurentModel::new(params);
    let b = BAlgebra::new(params);
    let k = model.nvars();
    let mut out = vec![];
    let gen = model.pi_generating();
    let y = model.y();
    let one = LaurentElement::constant(k, 1);
    for i in 1..=params.top() {
        let rp = res_pi_in_rh(params, i).unwrap();
        let closed = rp.terms.iter().fold(LaurentElement::zero(), |acc, t| {
            let coef = &one.scale(&t.constant) + &y.scale(&t.y_coeff);
            &acc + &(&coef * &model.pibar(t.j))
        });
        out.push(OracleRecord {
            what: format!("Res(Π_{i})"),
            passed: closed == gen[i as usize],
        });
    }
    let img = model.delta_image();
    let shifted = &img - &one.scale(&img.augmentation());
    let closed = model.eval_b(&b, &res_delta(params));
    let name = if params.is_odd() {
        "Res(δ_n)"
    } else {
        "Res(δ_n⁺)"
    };
    out.push(OracleRecord {
        what: name.into(),
        passed: closed == shifted,
    });
    if !params.is_odd() {
        out.push(OracleRecord {
            what: "Res(χ_n) = 0".into(),
            passed: model.chi_image().is_zero(),
        });
    }
    out.extend(ring_identities(params));
    out
}

/// Δ̄_c² = θ^κ Σ 2^{2(c−i)}Π̄_i and, for m even, Δ̄_c⁺Δ̄_c⁻ = θ^κ Σ 2^{2(c−1−i)}Π̄_i,
/// checked in the Laurent ring and then transported into B through the
/// Π̄_i values of B.
pub fn ring_identities(params: &CaseParams) -> Vec<OracleRecord> {
    let model = LaurentModel::new(params);
    let b = BAlgebra::new(params);
    let k = model.nvars();
    let c = params.c;
    let tw = if params.s % 4 == 0 {
        LaurentElement::constant(k, 1)
    } else {
        model.theta()
    };
    let tw_b = if params.s % 4 == 0 {
        b.one()
    } else {
        b.theta()
    };
    let mut out = vec![];

    let d = model.delta_bar(None);
    let rhs = (0..=c).fold(LaurentElement::zero(), |acc, i| {
        &acc + &model.pibar(i).scale(&pow2_int(2 * (c - i)))
    });
    out.push(OracleRecord {
        what: "Δ̄_c² in RH".into(),
        passed: &d * &d == &tw * &rhs,
    });

    let db = &b.delta() + &b.constant(&pow2_int(c));
    let rhs_b = (0..=c).fold(b.zero(), |acc, i| {
        &acc + &pibar_in_b(&b, i).scale(&pow2_int(2 * (c - i)))
    });
    out.push(OracleRecord {
        what: "δ_c² relation in B".into(),
        passed: b.mul(&db, &db) == b.mul(&tw_b, &rhs_b),
    });

    if !params.is_odd() {
        let dp = model.delta_bar(Some(0));
        let dm = model.delta_bar(Some(1));
        let rhs = (0..c).fold(LaurentElement::zero(), |acc, i| {
            &acc + &model.pibar(i).scale(&pow2_int(2 * (c - 1 - i)))
        });
        out.push(OracleRecord {
            what: "Δ̄_c⁺Δ̄_c⁻ in RH".into(),
            passed: &dp * &dm == &tw * &rhs,
        });
        out.push(OracleRecord {
            what: "Δ̄_c = Δ̄_c⁺ + Δ̄_c⁻".into(),
            passed: &dp + &dm == d,
        });

        let half = b.constant(&pow2_int(c - 1));
        let dpb = &b.delta_plus() + &half;
        let dmb = &(&b.delta() - &b.delta_plus()) + &half;
        let rhs_b = (0..c).fold(b.zero(), |acc, i| {
            &acc + &pibar_in_b(&b, i).scale(&pow2_int(2 * (c - 1 - i)))
        });
        out.push(OracleRecord {
            what: "δ⁺δ⁻ relation in B".into(),
            passed: b.mul(&dpb, &dmb) == b.mul(&tw_b, &rhs_b),
        });
    }
    out
}

/// The five elementary identities: θ(θ+1) = θ+1, y^j = (−2)^{j−1}y,
/// (1+θ)^j = 2^{j−1}(1+θ), (1+t)^j = 2^{j−1}(1+t) and
/// (1+tθ)^j = 2^{j−1}(1+tθ) for t = ±1, j = 1..6.
pub fn elementary_identities(b: &BAlgebra) -> bool {
    let th = b.theta();
    let one = b.one();
    let tp1 = &th + &one;
    let mut ok = b.mul(&th, &tp1) == tp1;
    for j in 1..=6u32 {
        let p = pow2_int(j as i64 - 1);
        let sign = if (j - 1) % 2 == 0 { 1 } else { -1 };
        ok &= b.pow(&b.y(), j) == b.y().scale(&(sign * &p));
        ok &= b.pow(&tp1, j) == tp1.scale(&p);
        for t in [1i64, -1] {
            let a = b.constant(&BigInt::from(1 + t));
            ok &= b.pow(&a, j) == a.scale(&p);
            let x = &one + &th.scale_i(t);
            ok &= b.pow(&x, j) == x.scale(&p);
        }
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn case_examples() {
        let p = build_case(13, 4).unwrap();
        assert_eq!((p.n, p.c, p.case, p.alpha), (6, 2, Case::OddZero, 6));
        assert_eq!(p.b0, bi(128));
        let list: Vec<BigInt> = [3, 4, 5]
            .iter()
            .map(|&i| binom(i + 1, i) * pow2_int(2 * i - 1))
            .collect();
        assert_eq!(list, vec![bi(128), bi(640), bi(3072)]);
        let s: BigInt = p.betas.iter().zip(&list).map(|(a, b)| a * b).sum();
        assert_eq!(s, p.b0);

        let p = build_case(9, 2).unwrap();
        assert_eq!((p.n, p.c, p.case, p.alpha), (4, 2, Case::OddTwo, 4));
        assert_eq!(p.b0, bi(32));

        assert!(matches!(build_case(12, 3), Err(Error::Unsupported(_))));
        assert!(matches!(build_case(8, 4), Err(Error::Unsupported(_))));
        assert!(matches!(build_case(7, 4), Err(Error::InvalidParams(_))));

        let p = build_case(10, 4).unwrap();
        assert_eq!((p.n, p.c, p.free_indices()), (5, 1, vec![2, 3]));
    }

    #[test]
    fn b_structure_examples() {
        let p = build_case(13, 4).unwrap();
        let b = BAlgebra::new(&p);
        let dd = b.mul(&b.delta(), &b.delta());
        assert_eq!(
            dd,
            b.from_terms(&[(bi(-8), (0, 1, 0)), (bi(-40), (1, 0, 0))])
        );
        assert_eq!(b.mul(&b.y(), &b.y()), b.y().scale_i(-2));
        for i in 0..b.rank() {
            assert_eq!(b.mul(&b.one(), &b.basis(i)), b.basis(i));
        }
    }

    #[test]
    fn axioms_and_identities_on_grid() {
        for m in 5..=16 {
            for s in [2, 4] {
                if let Ok(p) = build_case(m, s) {
                    let b = BAlgebra::new(&p);
                    assert!(b.check_axioms(), "{}", p.label());
                    assert!(elementary_identities(&b), "{}", p.label());
                }
            }
        }
    }

    #[test]
    fn res_delta_examples() {
        let cases = [
            (13, 4, [32, 16, 8]),
            (9, 2, [-8, -4, -2]),
            (14, 4, [32, 8, 4]),
        ];
        for (m, s, [y, d, dy]) in cases {
            let p = build_case(m, s).unwrap();
            let b = BAlgebra::new(&p);
            let expected =
                b.from_terms(&[(bi(y), (1, 0, 0)), (bi(d), (0, 1, 0)), (bi(dy), (1, 1, 0))]);
            assert_eq!(res_delta(&p), expected);
        }
    }

    #[test]
    fn res_pi_examples() {
        let p = build_case(13, 4).unwrap();
        let r = res_pi_in_rh(&p, 1).unwrap();
        // (1 + 2ty)²Π̄[t] at t¹: Π̄_1 + 2·2y·Π̄_0
        assert_eq!(
            r.terms[0],
            ResPiTerm {
                j: 0,
                constant: bi(0),
                y_coeff: bi(4)
            }
        );
        assert_eq!(
            r.terms[1],
            ResPiTerm {
                j: 1,
                constant: bi(1),
                y_coeff: bi(0)
            }
        );
        assert!(res_pi_in_rh(&p, 0).is_err());
        assert!(res_pi_in_rh(&p, 6).is_err());
    }

    #[test]
    fn pi_prime_recursion_matches_expansion() {
        for m in 5..=16 {
            for s in [2, 4] {
                let Ok(p) = build_case(m, s) else { continue };
                for i in 1..=p.top() {
                    let exp = pi_prime_by_expansion(&p, i).unwrap();
                    if i <= p.c {
                        assert!(exp.is_zero(), "{} i={i}", p.label());
                        assert!(pi_prime_in_b(&p, i).is_err());
                    } else {
                        assert_eq!(pi_prime_in_b(&p, i).unwrap(), exp, "{} i={i}", p.label());
                    }
                }
            }
        }
        let p = build_case(13, 4).unwrap();
        let b = BAlgebra::new(&p);
        assert_eq!(
            pi_prime_in_b(&p, 3).unwrap(),
            b.y().scale(&(binom(4, 3) * pow2_int(5)))
        );
    }

    #[test]
    fn change_of_generators_grid() {
        for m in 5..=16 {
            for s in [2, 4] {
                let Ok(p) = build_case(m, s) else { continue };
                let cg = change_of_generators(&p).unwrap();
                assert!(cg.verify(&p), "{}", p.label());
            }
        }
        let p = build_case(13, 4).unwrap();
        let cg = change_of_generators(&p).unwrap();
        assert_eq!((cg.e.nrows(), cg.e.ncols()), (3, 3));
    }

    #[test]
    fn laurent_reductions() {
        let k = 1;
        let phi = LaurentElement::phi(k, 1);
        let phi3 = LaurentElement::phi(k, 3);
        let d = &phi3 - &phi;
        let y = &LaurentElement::phi(k, 2) - &LaurentElement::constant(k, 1);
        assert_eq!(&d * &d, y.scale(&bi(2)));
        let tp = &LaurentElement::phi(k, 2) + &LaurentElement::constant(k, 1);
        let mut acc = LaurentElement::constant(k, 1);
        for j in 1..=5 {
            acc = &acc * &tp;
            assert_eq!(acc, tp.scale(&pow2_int(j - 1)));
        }
    }

    #[test]
    fn oracle_on_grid() {
        for m in 5..=16 {
            for s in [2, 4] {
                let Ok(p) = build_case(m, s) else { continue };
                for r in laurent_oracle(&p) {
                    assert!(r.passed, "{} {}", p.label(), r.what);
                }
            }
        }
    }
}

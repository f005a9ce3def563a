//! The Koszul complex 0 → B(x₁∧x₂) → Bx₁ ⊕ Bx₂ → B → 0, its homology, the
//! explicit kernel generators u₁..u₄ and v, the relation tables, leading-term
//! generator selection and the solution-table harness.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact_core::{binom, pow2, pow2_int};
use crate::intlinalg::{
    hermite_normal_form, in_lattice, kernel_basis, lattice_equal, pivots, quotient_presentation,
    AbelianPresentation, IntMatrix,
};
use crate::repring::{res_delta, BAlgebra, BElement, Case, CaseParams, Mono, BASIS_LABELS};
use crate::Error;

/// An element p·x₁ + q·x₂ of Bx₁ ⊕ Bx₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector {
    pub x1: BElement,
    pub x2: BElement,
}

impl ModuleVector {
    pub fn zero(rank: usize) -> Self {
        ModuleVector {
            x1: BElement::zero(rank),
            x2: BElement::zero(rank),
        }
    }

    pub fn coords(&self) -> Vec<BigInt> {
        self.x1
            .coords
            .iter()
            .chain(&self.x2.coords)
            .cloned()
            .collect()
    }

    pub fn from_coords(v: &[BigInt]) -> Self {
        let r = v.len() / 2;
        ModuleVector {
            x1: BElement {
                coords: v[..r].to_vec(),
            },
            x2: BElement {
                coords: v[r..].to_vec(),
            },
        }
    }

    pub fn add(&self, o: &ModuleVector) -> Self {
        ModuleVector {
            x1: &self.x1 + &o.x1,
            x2: &self.x2 + &o.x2,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        ModuleVector {
            x1: self.x1.scale(k),
            x2: self.x2.scale(k),
        }
    }

    /// b·(p x₁ + q x₂).
    pub fn times(&self, alg: &BAlgebra, b: &BElement) -> Self {
        ModuleVector {
            x1: alg.mul(b, &self.x1),
            x2: alg.mul(b, &self.x2),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct KoszulData {
    pub params: CaseParams,
    pub algebra: BAlgebra,
    pub d1_x1: BElement,
    pub d1_x2: BElement,
    /// rank × 2·rank, columns indexed by the basis of Bx₁ then Bx₂.
    pub d1: IntMatrix,
    /// 2·rank × rank, column j is d₂(b_j·x₁∧x₂).
    pub d2: IntMatrix,
}

/// d₁(x₁) = b₀y, d₁(x₂) = Res(δ), d₂(x₁∧x₂) = d₁(x₁)x₂ − d₁(x₂)x₁.
pub fn build_koszul(params: &CaseParams) -> Result<KoszulData, Error> {
    let alg = BAlgebra::new(params);
    let d1_x1 = alg.y().scale(&params.b0);
    let d1_x2 = res_delta(params);
    let d1 = alg.mult_operator(&d1_x1).hstack(&alg.mult_operator(&d1_x2));
    let r = alg.rank();
    let cols: Vec<Vec<BigInt>> = (0..r)
        .map(|j| {
            let b = alg.basis(j);
            ModuleVector {
                x1: -&alg.mul(&b, &d1_x2),
                x2: alg.mul(&b, &d1_x1),
            }
            .coords()
        })
        .collect();
    let d2 = IntMatrix::from_cols(&cols, 2 * r);
    if !(&d1 * &d2).is_zero() {
        return Err(Error::Internal(format!("d1·d2 ≠ 0 for {}", params.label())));
    }
    Ok(KoszulData {
        params: params.clone(),
        algebra: alg,
        d1_x1,
        d1_x2,
        d1,
        d2,
    })
}

impl KoszulData {
    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    pub fn d1_apply(&self, v: &ModuleVector) -> BElement {
        BElement {
            coords: self.d1.mul_vec(&v.coords()),
        }
    }

    pub fn d2_apply(&self, p: &BElement) -> ModuleVector {
        ModuleVector::from_coords(&self.d2.mul_vec(&p.coords))
    }

    pub fn is_cycle(&self, v: &ModuleVector) -> bool {
        self.d1_apply(v).is_zero()
    }

    /// Z-basis of Ker(d₁), as columns.
    pub fn kernel_d1(&self) -> IntMatrix {
        kernel_basis(&self.d1)
    }

    /// Matrix whose columns are b·g for every basis monomial b and every g.
    pub fn b_span(&self, gens: &[ModuleVector]) -> IntMatrix {
        let r = self.rank();
        let cols: Vec<Vec<BigInt>> = gens
            .iter()
            .flat_map(|g| {
                (0..r).map(move |j| g.times(&self.algebra, &self.algebra.basis(j)).coords())
            })
            .collect();
        IntMatrix::from_cols(&cols, 2 * r)
    }

    pub fn b_span_scalar(&self, gens: &[BElement]) -> IntMatrix {
        let r = self.rank();
        let cols: Vec<Vec<BigInt>> = gens
            .iter()
            .flat_map(|g| (0..r).map(move |j| self.algebra.mul(g, &self.algebra.basis(j)).coords))
            .collect();
        IntMatrix::from_cols(&cols, r)
    }
}

/// H₀ = B / (d₁(x₁), d₁(x₂))B.
#[derive(Clone, Debug, Serialize)]
pub struct H0Report {
    pub presentation: AbelianPresentation,
    /// Additive order of the class of y; `None` if infinite.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub y_order: Option<BigInt>,
    #[serde(serialize_with = "ser_bigint")]
    pub expected_y_order: BigInt,
    pub one_nonzero: bool,
}

impl H0Report {
    pub fn y_order_ok(&self) -> bool {
        self.y_order.as_ref() == Some(&self.expected_y_order)
    }
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_bigint<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

pub fn homology_h0(kd: &KoszulData) -> H0Report {
    let labels: Vec<String> = kd.algebra.labels().iter().map(|s| s.to_string()).collect();
    let presentation = AbelianPresentation::from_relations(labels, kd.d1.clone());
    let y_order = presentation.order_of(&kd.algebra.y().coords);
    let one_nonzero = presentation.order_of(&kd.algebra.one().coords) != Some(BigInt::one());
    H0Report {
        presentation,
        y_order,
        expected_y_order: pow2_int(kd.params.alpha),
        one_nonzero,
    }
}

/// H₂ = Ker(d₂) compared with the standard generator v = (2+y)(2^{c+1}+δ_c).
#[derive(Clone, Debug)]
pub struct H2Report {
    /// Z-basis of Ker(d₂), as columns.
    pub kernel: IntMatrix,
    pub z_rank: usize,
    /// The HNF-normalized generator when the kernel has Z-rank 1.
    pub generator: Option<BElement>,
    pub v: BElement,
    /// Ker(d₂) equals the B-span of v.
    pub spanned_by_v: bool,
    /// Ker(d₂) equals Z·v.
    pub equals_zv: bool,
}

pub fn standard_v(kd: &KoszulData) -> BElement {
    let a = &kd.algebra;
    let t = &a.y() + &a.constant(&BigInt::from(2));
    let d = &a.delta() + &a.constant(&pow2_int(kd.params.c + 1));
    a.mul(&t, &d)
}

pub fn homology_h2(kd: &KoszulData) -> H2Report {
    let kernel = kernel_basis(&kd.d2);
    let z_rank = kernel.ncols();
    let generator = (z_rank == 1).then(|| BElement {
        coords: kernel.col(0),
    });
    let v = standard_v(kd);
    let spanned_by_v = lattice_equal(&kernel, &kd.b_span_scalar(std::slice::from_ref(&v)));
    let equals_zv = lattice_equal(
        &kernel,
        &IntMatrix::from_cols(std::slice::from_ref(&v.coords), kd.rank()),
    );
    H2Report {
        kernel,
        z_rank,
        generator,
        v,
        spanned_by_v,
        equals_zv,
    }
}

/// Named elements of Bx₁ ⊕ Bx₂.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub names: Vec<String>,
    pub vectors: Vec<ModuleVector>,
    pub leading_terms: Vec<String>,
}

impl GeneratorSet {
    pub fn get(&self, name: &str) -> Option<&ModuleVector> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.vectors[i])
    }
}

fn exact_div_pow2(x: &BigInt, e: i64) -> BigInt {
    if e <= 0 {
        return x * pow2_int(-e);
    }
    let d = pow2_int(e);
    assert!(x.is_multiple_of(&d), "{x} is not divisible by 2^{e}");
    x / d
}

/// u₁ = (y+2)x₁, u₂ = (y+2)(2^{c+1}+δ_c)x₂,
/// u₃ = 2^{n−α−h}x₁ + ε2^{−α}b₀y x₂,
/// u₄ = 2^{n−1−α−h}δ_c x₁ − ε2^{−α}b₀(δ_c + 2^c y + 2^{c+1})x₂,
/// with h = 1 for m even and ε the sign of Res(δ); u₄ only when α is below its bound.
pub fn standard_kernel_generators(params: &CaseParams) -> GeneratorSet {
    let a = BAlgebra::new(params);
    let (n, c, al) = (params.n, params.c, params.alpha);
    let h = if params.is_odd() { 0 } else { 1 };
    let eps = BigInt::from(params.eps());
    let b0a = exact_div_pow2(&params.b0, al);
    let two = a.constant(&BigInt::from(2));
    let yp2 = &a.y() + &two;
    let u1 = ModuleVector {
        x1: yp2.clone(),
        x2: a.zero(),
    };
    let u2 = ModuleVector {
        x1: a.zero(),
        x2: a.mul(&yp2, &(&a.delta() + &a.constant(&pow2_int(c + 1)))),
    };
    let u3 = ModuleVector {
        x1: a.constant(&pow2_int(n - al - h)),
        x2: a.y().scale(&(&eps * &b0a)),
    };
    let mut names = vec!["u1", "u2", "u3"];
    let mut vectors = vec![u1, u2, u3];
    if params.has_u4() {
        let tail = a.from_terms(&[
            (BigInt::one(), (0, 1, 0)),
            (pow2_int(c), (1, 0, 0)),
            (pow2_int(c + 1), (0, 0, 0)),
        ]);
        vectors.push(ModuleVector {
            x1: a.delta().scale(&pow2_int(n - 1 - al - h)),
            x2: tail.scale(&-(&eps * &b0a)),
        });
        names.push("u4");
    }
    let order = module_order(a.rank());
    let leading_terms = vectors
        .iter()
        .map(|v| {
            leading(&v.coords(), &order).map_or("0".into(), |(p, _)| position_label(p, a.rank()))
        })
        .collect();
    GeneratorSet {
        names: names.into_iter().map(String::from).collect(),
        vectors,
        leading_terms,
    }
}

/// Membership and spanning of the explicit generators in Ker(d₁).
#[derive(Clone, Debug)]
pub struct H1Report {
    pub in_kernel: Vec<(String, bool)>,
    /// B-span(gens) + Im(d₂) = Ker(d₁).
    pub spans: bool,
    /// B-span(gens) alone = Ker(d₁).
    pub spans_without_boundaries: bool,
    pub d2_image_zero_in_quotient: bool,
    pub presentation: Option<AbelianPresentation>,
}

impl H1Report {
    pub fn passed(&self) -> bool {
        self.in_kernel.iter().all(|(_, b)| *b) && self.spans
    }
}

pub fn verify_h1(kd: &KoszulData, gens: &GeneratorSet) -> H1Report {
    let in_kernel = gens
        .names
        .iter()
        .cloned()
        .zip(gens.vectors.iter().map(|g| kd.is_cycle(g)))
        .collect();
    let ker = kd.kernel_d1();
    let span = kd.b_span(&gens.vectors);
    let spans = lattice_equal(&ker, &span.hstack(&kd.d2));
    let spans_without_boundaries = lattice_equal(&ker, &span);
    let presentation = quotient_presentation(&ker, Some(&kd.d2)).ok();
    let d2_image_zero_in_quotient =
        presentation.is_some() && (0..kd.rank()).all(|j| in_lattice(&kd.d2, &kd.d2.col(j)));
    H1Report {
        in_kernel,
        spans,
        spans_without_boundaries,
        d2_image_zero_in_quotient,
        presentation,
    }
}

/// (a₁b₂ − a₂b₁) as the coefficient of x₁∧x₂.
pub fn wedge_multiply(
    kd: &KoszulData,
    a: &ModuleVector,
    b: &ModuleVector,
) -> Result<BElement, Error> {
    if !kd.is_cycle(a) || !kd.is_cycle(b) {
        return Err(Error::NotACycle("wedge factors must lie in Ker(d1)".into()));
    }
    Ok(wedge_raw(&kd.algebra, a, b))
}

fn wedge_raw(alg: &BAlgebra, a: &ModuleVector, b: &ModuleVector) -> BElement {
    &alg.mul(&a.x1, &b.x2) - &alg.mul(&a.x2, &b.x1)
}

/// Exterior part of a relation term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Ext {
    One,
    U(u8),
    UU(u8, u8),
    V,
}

impl Ext {
    pub fn mentions_u4(&self) -> bool {
        matches!(self, Ext::U(4) | Ext::UU(_, 4) | Ext::UU(4, _))
    }

    pub fn names(&self) -> Vec<String> {
        match self {
            Ext::One => vec![],
            Ext::U(i) => vec![format!("u{i}")],
            Ext::UU(i, j) => vec![format!("u{i}"), format!("u{j}")],
            Ext::V => vec!["v".into()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Level {
    B,
    H0,
    H1,
    H2,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelTerm {
    pub coeff: BigRational,
    pub mono: Mono,
    pub ext: Ext,
}

/// Σ coeff·monomial·exterior = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Level and row within that level's table, e.g. "H1-6".
    pub id: String,
    pub level: Level,
    pub terms: Vec<RelTerm>,
}

impl Relation {
    pub fn mentions_u4(&self) -> bool {
        self.terms.iter().any(|t| t.ext.mentions_u4())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_integer())
    }
}

struct RelBuilder {
    level: Level,
    id: String,
    terms: Vec<RelTerm>,
}

impl RelBuilder {
    fn new(level: Level, row: usize) -> Self {
        RelBuilder {
            level,
            id: format!("{level}-{row}"),
            terms: vec![],
        }
    }

    fn t(mut self, coeff: BigRational, mono: Mono, ext: Ext) -> Self {
        if !coeff.is_zero() {
            self.terms.push(RelTerm { coeff, mono, ext });
        }
        self
    }

    fn done(self) -> Relation {
        Relation {
            id: self.id,
            level: self.level,
            terms: self.terms,
        }
    }
}

fn q(k: i64, e: i64) -> BigRational {
    pow2(e) * BigRational::from_integer(k.into())
}

const ONE: Mono = (0, 0, 0);
const Y: Mono = (1, 0, 0);
const D: Mono = (0, 1, 0);
const DY: Mono = (1, 1, 0);

/// The full relation table of the case, before the u₄ convention is applied.
pub fn relation_table(params: &CaseParams) -> Vec<Relation> {
    let (n, c, s, al) = (params.n, params.c, params.s, params.alpha);
    let h = if params.is_odd() { 0 } else { 1 };
    let e = params.eps();
    let sigma = params.sigma();
    let b0 = BigRational::from_integer(params.b0.clone());
    let qb = |k: i64, ex: i64| q(k, ex) * &b0;
    let l = BigRational::from_integer(1 + sigma * binom(s / 2 + c, c));
    let lp = BigRational::from_integer(1 + sigma * binom(s / 2 + c - 1, c - 1));
    let (u1, u2, u3, u4) = (Ext::U(1), Ext::U(2), Ext::U(3), Ext::U(4));
    let mut rels = vec![];

    rels.push(
        RelBuilder::new(Level::B, 1)
            .t(q(1, 0), (2, 0, 0), Ext::One)
            .t(q(2, 0), Y, Ext::One)
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::B, 2)
            .t(q(1, 0), (0, 2, 0), Ext::One)
            .t(q(1, c + 1), D, Ext::One)
            .t(-q(1, 2 * c - 1) * &l, Y, Ext::One)
            .done(),
    );
    if !params.is_odd() {
        rels.push(
            RelBuilder::new(Level::B, 3)
                .t(q(1, 0), (0, 1, 1), Ext::One)
                .t(q(1, c - 1), D, Ext::One)
                .t(-q(1, 2 * c - 3) * &lp, Y, Ext::One)
                .t(q(-1, 0), (0, 0, 2), Ext::One)
                .done(),
        );
    }

    rels.push(
        RelBuilder::new(Level::H0, 1)
            .t(q(1, al), Y, Ext::One)
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H0, 2)
            .t(q(1, s - h), D, Ext::One)
            .t(q(1, s - 1 - h), DY, Ext::One)
            .t(q(1, n - 1 - h), Y, Ext::One)
            .done(),
    );

    rels.push(
        RelBuilder::new(Level::H1, 1)
            .t(q(e, al), ONE, u3)
            .t(q(-e, s - 1 - h), D, u1)
            .t(q(-e, n - 1 - h), ONE, u1)
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H1, 2)
            .t(q(1, 0), Y, u3)
            .t(q(2, 0), ONE, u3)
            .t(q(-1, n - al - h), ONE, u1)
            .done(),
    );
    rels.push(RelBuilder::new(Level::H1, 3).t(q(1, 0), Y, u1).done());
    rels.push(RelBuilder::new(Level::H1, 4).t(q(1, 0), Y, u2).done());
    rels.push(RelBuilder::new(Level::H1, 5).t(q(1, 0), D, u2).done());
    rels.push(
        RelBuilder::new(Level::H1, 6)
            .t(q(1, 0), Y, u4)
            .t(q(2, 0), ONE, u4)
            .t(q(-1, n - 1 - al - h), D, u1)
            .t(qb(e, -al), ONE, u2)
            .done(),
    );
    // (y+2)(2^cδ + 1)u₃ = 2^c δy + 2^{c+1}δ + y + 2
    rels.push(
        RelBuilder::new(Level::H1, 7)
            .t(q(1, c), DY, u3)
            .t(q(1, c + 1), D, u3)
            .t(q(1, 0), Y, u3)
            .t(q(2, 0), ONE, u3)
            .t(q(1, 0), DY, u4)
            .t(q(2, 0), D, u4)
            .t(q(-1, n - al - h), ONE, u1)
            .done(),
    );
    // (y+2)(2^{c+1}+δ) = δy + 2δ + 2^{c+1}y + 2^{c+2}
    rels.push(
        RelBuilder::new(Level::H1, 8)
            .t(qb(1, c - al + 1), ONE, u2)
            .t(q(e, 0), DY, u4)
            .t(q(2 * e, 0), D, u4)
            .t(q(e, c + 1), Y, u4)
            .t(q(e, c + 2), ONE, u4)
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H1, 9)
            .t(qb(e, c - al - 1), ONE, u2)
            .t(q(1, c - 1), D, u3)
            .t(q(1, 2 * c - 2) * &l, Y, u3)
            .t(q(1, c - 1), DY, u3)
            .t(q(1, c), ONE, u4)
            .t(q(1, 0), D, u4)
            .t(q(1, c), Y, u4)
            .t(q(1, 0), DY, u4)
            .done(),
    );

    let uu = Ext::UU;
    rels.push(
        RelBuilder::new(Level::H2, 1)
            .t(q(1, 0), ONE, uu(2, 4))
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H2, 2)
            .t(q(1, 0), ONE, uu(1, 3))
            .done(),
    );
    rels.push(RelBuilder::new(Level::H2, 3).t(q(1, 0), D, uu(1, 4)).done());
    let sh = if h == 1 { -1 } else { 1 };
    rels.push(
        RelBuilder::new(Level::H2, 4)
            .t(qb(1, n - al - 2 * h), ONE, uu(1, 2))
            .t(q(e, n), ONE, uu(1, 4))
            .t(qb(sh, 0), ONE, uu(2, 3))
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H2, 5)
            .t(qb(1, n - 2 * al - h), ONE, uu(1, 2))
            .t(qb(1, -al), ONE, uu(2, 3))
            .t(q(2 * e, 0), ONE, uu(3, 4))
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H2, 6)
            .t(q(-1, n - al + 1 - h), ONE, uu(1, 4))
            .t(qb(e, -al), ONE, uu(2, 3))
            .t(q(2, 0), ONE, uu(3, 4))
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H2, 7)
            .t(qb(1, n - 2 * al - h), ONE, uu(1, 2))
            .t(q(e, n - al - h), ONE, uu(1, 4))
            .t(q(2 * e, 0), ONE, uu(3, 4))
            .done(),
    );
    rels.push(
        RelBuilder::new(Level::H2, 8)
            .t(q(1, 0), ONE, uu(1, 2))
            .t(q(-2, 0), ONE, Ext::V)
            .done(),
    );
    rels
}

/// A printed relation that disagrees with the computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrintedDeviation {
    pub id: &'static str,
    pub printed: &'static str,
    pub used: &'static str,
}

/// Relations of the case whose printed form fails and was replaced.
pub fn printed_deviations(params: &CaseParams) -> Vec<PrintedDeviation> {
    let mut out = vec![];
    if params.case == Case::OddZero && params.has_u4() {
        out.push(PrintedDeviation {
            id: "H1-6",
            printed: "introductory restatement: (y+2)u4 2 2^(n-1-α)δ_c u1 - 2^(-α)b0 u2",
            used: "(y+2)u4 - 2^(n-1-α)δ_c u1 + 2^(-α)b0 u2",
        });
        out.push(PrintedDeviation {
            id: "H2-4",
            printed: "introductory restatement: 2^(nα)b0 u1u2 + 2^n u1u4 + b0 u2u3",
            used: "2^(n-α)b0 u1u2 + 2^n u1u4 + b0 u2u3",
        });
    }
    if params.case == Case::EvenTwo && params.has_u4() {
        out.push(PrintedDeviation {
            id: "H1-7",
            printed: "(y+2)(2^c δ_c + 1)u3 - (y+2)δ_c u4 = 2^(n-α-1)u1",
            used: "(y+2)(2^c δ_c + 1)u3 + (y+2)δ_c u4 = 2^(n-α-1)u1",
        });
    }
    out
}

/// The relations of the ideal I: the table with every u₄-relation removed
/// when u₄ does not exist.
pub fn active_relations(params: &CaseParams) -> Vec<Relation> {
    let keep_u4 = params.has_u4();
    relation_table(params)
        .into_iter()
        .filter(|r| keep_u4 || !r.mentions_u4())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationOutcome {
    pub id: String,
    pub level: Level,
    pub passed: bool,
    pub detail: String,
}

/// Evaluates every active relation at its level: B-relations in B,
/// H₀-relations modulo Im(d₁), H₁-relations modulo Im(d₂), H₂-relations as
/// exact identities in B(x₁∧x₂).
pub fn verify_relations(kd: &KoszulData) -> Vec<RelationOutcome> {
    let gens = standard_kernel_generators(&kd.params);
    let alg = &kd.algebra;
    let u = |i: u8| gens.get(&format!("u{i}")).cloned();
    let v = standard_v(kd);
    active_relations(&kd.params)
        .into_iter()
        .map(|rel| {
            let (passed, detail) = if !rel.is_integral() {
                (false, "non-integral coefficient".to_string())
            } else {
                evaluate_relation(kd, alg, &rel, &u, &v)
            };
            RelationOutcome {
                id: rel.id,
                level: rel.level,
                passed,
                detail,
            }
        })
        .collect()
}

fn evaluate_relation(
    kd: &KoszulData,
    alg: &BAlgebra,
    rel: &Relation,
    u: &dyn Fn(u8) -> Option<ModuleVector>,
    v: &BElement,
) -> (bool, String) {
    let r = alg.rank();
    let mut scalar = BElement::zero(r);
    let mut module = ModuleVector::zero(r);
    let mut wedge = BElement::zero(r);
    for t in &rel.terms {
        let k = t.coeff.to_integer();
        let mono = alg.monomial(t.mono).scale(&k);
        match t.ext {
            Ext::One => scalar = &scalar + &mono,
            Ext::U(i) => match u(i) {
                Some(g) => module = module.add(&g.times(alg, &mono)),
                None => return (false, format!("u{i} is undefined")),
            },
            Ext::UU(i, j) => match (u(i), u(j)) {
                (Some(a), Some(b)) => wedge = &wedge + &alg.mul(&mono, &wedge_raw(alg, &a, &b)),
                _ => return (false, format!("u{i}u{j} is undefined")),
            },
            Ext::V => wedge = &wedge + &alg.mul(&mono, v),
        }
    }
    match rel.level {
        Level::B => (
            scalar.is_zero(),
            format!("residual {}", alg.format(&scalar)),
        ),
        Level::H0 => (
            in_lattice(&kd.d1, &scalar.coords),
            format!("value {}", alg.format(&scalar)),
        ),
        Level::H1 => (
            in_lattice(&kd.d2, &module.coords()),
            format!(
                "x1: {}; x2: {}",
                alg.format(&module.x1),
                alg.format(&module.x2)
            ),
        ),
        Level::H2 => (
            wedge.is_zero(),
            format!("residual {}·x1∧x2", alg.format(&wedge)),
        ),
    }
}

/// Module positions of Bx₁ ⊕ Bx₂ from highest to lowest: position over term
/// with x₁ > x₂ and degree-lexicographic order δ⁺ > δ_c > y on B.
pub fn module_order(rank: usize) -> Vec<usize> {
    let mut mons: Vec<usize> = (0..rank).collect();
    mons.sort_by_key(|&i| {
        let (ey, ed, ep) = ((i & 1) as u32, (i >> 1 & 1) as u32, (i >> 2 & 1) as u32);
        std::cmp::Reverse((ey + ed + ep, ep, ed, ey))
    });
    mons.iter()
        .copied()
        .chain(mons.iter().map(|&i| i + rank))
        .collect()
}

/// Leading position and coefficient of a coordinate vector under `order`.
pub fn leading(v: &[BigInt], order: &[usize]) -> Option<(usize, BigInt)> {
    order
        .iter()
        .find(|&&p| !v[p].is_zero())
        .map(|&p| (p, v[p].clone()))
}

pub fn position_label(p: usize, rank: usize) -> String {
    let (m, x) = (p % rank, if p < rank { "x_1" } else { "x_2" });
    if m == 0 {
        x.to_string()
    } else {
        format!("{} {x}", BASIS_LABELS[m])
    }
}

#[derive(Clone, Debug)]
pub struct GrobnerCandidate {
    pub lead: usize,
    pub lead_coeff: BigInt,
    pub vector: ModuleVector,
    pub redundant_by: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct GrobnerReport {
    pub candidates: Vec<GrobnerCandidate>,
    pub selected: GeneratorSet,
    /// Every leading term of Ker(d₁) is a monomial multiple of a selected
    /// leading term with dividing coefficient.
    pub lt_module_ok: bool,
    /// B-span(selection) = Ker(d₁).
    pub span_ok: bool,
}

fn support(v: &[BigInt]) -> Vec<usize> {
    (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
}

/// Monomial m multiplies g without any reduction in B.
fn pure_shift(g: &[BigInt], m: usize, rank: usize) -> bool {
    support(g).iter().all(|&p| (p % rank) & m == 0)
}

fn shift_pos(p: usize, m: usize, rank: usize) -> usize {
    (p / rank) * rank + ((p % rank) | m)
}

fn covers(g: &GrobnerCandidate, target: usize, coeff: &BigInt, rank: usize) -> Option<usize> {
    let gv = g.vector.coords();
    (0..rank).find(|&m| {
        pure_shift(&gv, m, rank)
            && shift_pos(g.lead, m, rank) == target
            && coeff.is_multiple_of(&g.lead_coeff)
    })
}

/// Walks the HNF of Ker(d₁) in the module order: each pivot row is the kernel
/// element with that leading monomial and minimal positive leading
/// coefficient; a candidate is dropped when a lower candidate reaches its
/// leading term by a reduction-free monomial shift with dividing coefficient.
pub fn grobner_select(kd: &KoszulData) -> GrobnerReport {
    let r = kd.rank();
    let order = module_order(r);
    let ker = kd.kernel_d1();
    let rows: Vec<Vec<BigInt>> = ker
        .col_vecs()
        .into_iter()
        .map(|v| order.iter().map(|&p| v[p].clone()).collect())
        .collect();
    let (hnf, _) = hermite_normal_form(&IntMatrix::from_rows_with_cols(rows, 2 * r));
    let mut candidates: Vec<GrobnerCandidate> = pivots(&hnf)
        .into_iter()
        .enumerate()
        .map(|(i, piv)| {
            let mut coords = vec![BigInt::zero(); 2 * r];
            for (k, &p) in order.iter().enumerate() {
                coords[p] = hnf[(i, k)].clone();
            }
            GrobnerCandidate {
                lead: order[piv],
                lead_coeff: hnf[(i, piv)].clone(),
                vector: ModuleVector::from_coords(&coords),
                redundant_by: None,
            }
        })
        .collect();
    for i in 0..candidates.len() {
        let (target, coeff) = (candidates[i].lead, candidates[i].lead_coeff.clone());
        let hit = (i + 1..candidates.len())
            .find_map(|j| covers(&candidates[j], target, &coeff, r).map(|m| (j, m)));
        candidates[i].redundant_by = hit;
    }
    let chosen: Vec<&GrobnerCandidate> = candidates
        .iter()
        .filter(|c| c.redundant_by.is_none())
        .collect();
    let lt_module_ok = candidates.iter().all(|c| {
        chosen
            .iter()
            .any(|g| covers(g, c.lead, &c.lead_coeff, r).is_some())
    });
    let vectors: Vec<ModuleVector> = chosen.iter().map(|c| c.vector.clone()).collect();
    let span_ok = lattice_equal(&ker, &kd.b_span(&vectors));
    let selected = GeneratorSet {
        names: (1..=vectors.len()).map(|i| format!("g{i}")).collect(),
        leading_terms: chosen.iter().map(|c| position_label(c.lead, r)).collect(),
        vectors,
    };
    GrobnerReport {
        candidates,
        selected,
        lt_module_ok,
        span_ok,
    }
}

/// Leading positions of the standard generators, for comparison with the selection.
pub fn standard_leading_positions(params: &CaseParams) -> BTreeSet<usize> {
    let gens = standard_kernel_generators(params);
    let order = module_order(params.rank());
    gens.vectors
        .iter()
        .filter_map(|v| leading(&v.coords(), &order).map(|(p, _)| p))
        .collect()
}

/// One row of the solution tables: the coefficient tuple in the printed
/// column order (p₁, p₂, p₃, q₁, q₃, p₄, q₂, q₄) and the displayed element in
/// slot order (δ_c y, δ_c, y, 1) for x₁ then x₂. Entries use n, c, a (= α)
/// and b (= b₀).
#[derive(Clone, Debug)]
pub struct TableRow {
    pub id: &'static str,
    pub tuple: Option<[&'static str; 8]>,
    pub element: [&'static str; 8],
}

/// Evaluates a linear exponent like "n+c-a-1" or "c-2a".
fn eval_lin(s: &str, n: i64, c: i64, a: i64) -> i64 {
    split_signed(s)
        .into_iter()
        .map(|(sign, tok)| {
            let digits: String = tok.chars().take_while(|ch| ch.is_ascii_digit()).collect();
            let rest = &tok[digits.len()..];
            let k: i64 = if digits.is_empty() {
                1
            } else {
                digits.parse().unwrap()
            };
            let val = match rest {
                "" => 1,
                "n" => n,
                "c" => c,
                "a" => a,
                other => panic!("unknown symbol {other}"),
            };
            sign * k * val
        })
        .sum()
}

/// Splits at top-level + and −, keeping signs.
fn split_signed(s: &str) -> Vec<(i64, String)> {
    let mut out = vec![];
    let mut depth = 0;
    let mut sign = 1;
    let mut cur = String::new();
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.is_empty() {
                    out.push((sign, std::mem::take(&mut cur)));
                }
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push((sign, cur));
    }
    out
}

/// Evaluates an entry such as "-3*2^(n+c-a+1)b" to a rational number.
pub fn eval_entry(s: &str, n: i64, c: i64, a: i64, b0: &BigInt) -> BigRational {
    split_signed(s)
        .into_iter()
        .map(|(sign, tok)| {
            let mut rest = tok.as_str();
            let mut val = BigRational::from_integer(sign.into());
            if !rest.starts_with("2^(") {
                let digits: String = rest.chars().take_while(|ch| ch.is_ascii_digit()).collect();
                if !digits.is_empty() {
                    val *= BigRational::from_integer(digits.parse::<BigInt>().unwrap());
                    rest = &rest[digits.len()..];
                }
                rest = rest.strip_prefix('*').unwrap_or(rest);
            }
            if let Some(r) = rest.strip_prefix("2^(") {
                let close = r.find(')').expect("unbalanced exponent");
                val *= pow2(eval_lin(&r[..close], n, c, a));
                rest = &r[close + 1..];
            }
            if rest == "b" {
                val *= BigRational::from_integer(b0.clone());
            } else {
                assert!(rest.is_empty(), "unparsed entry tail {rest:?} in {s:?}");
            }
            val
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// Tuple column → element slot.
const TUPLE_TO_SLOT: [usize; 8] = [0, 1, 2, 4, 6, 3, 5, 7];
/// Element slot → rank-4 module coordinate.
const SLOT_TO_COORD: [usize; 8] = [3, 2, 1, 0, 7, 6, 5, 4];

macro_rules! row {
    ($id:expr, [$($t:expr),*], [$($e:expr),*]) => {
        TableRow { id: $id, tuple: Some([$($t),*]), element: [$($e),*] }
    };
    ($id:expr, [$($e:expr),*]) => {
        TableRow { id: $id, tuple: None, element: [$($e),*] }
    };
}

pub fn solution_table() -> Vec<TableRow> {
    vec![
        row!(
            "1.1",
            [
                "2^(n-a)",
                "0",
                "0",
                "0",
                "0",
                "-2^(n+c-a+2)",
                "2^(-a+2)b",
                "2^(c+3-a)b"
            ],
            [
                "2^(n-a)",
                "0",
                "0",
                "-2^(n+c-a+2)",
                "0",
                "2^(-a+2)b",
                "0",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "1.2",
            [
                "0",
                "2^(n-a)",
                "0",
                "0",
                "0",
                "2^(n+c-a+1)",
                "-2^(-a+1)b",
                "-2^(c+2-a)b"
            ],
            [
                "0",
                "2^(n-a)",
                "0",
                "2^(n+c-a+1)",
                "0",
                "-2^(1-a)b",
                "0",
                "-2^(c+2-a)b"
            ]
        ),
        row!(
            "1.3",
            [
                "0",
                "2^(n-1-a)",
                "0",
                "0",
                "0",
                "2^(n+c-a)",
                "-2^(-a)b",
                "-2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-a-1)",
                "0",
                "2^(n+c-a)",
                "0",
                "-2^(-a)b",
                "0",
                "-2^(c+1-a)b"
            ]
        ),
        row!(
            "1.4",
            ["0", "0", "1", "0", "0", "2", "0", "0"],
            ["0", "0", "1", "2", "0", "0", "0", "0"]
        ),
        row!(
            "1.5",
            [
                "0",
                "0",
                "0",
                "2^(-a)b",
                "0",
                "-2^(n+c-a+1)",
                "2^(1-a)b",
                "2^(c+2-a)b"
            ],
            [
                "0",
                "0",
                "0",
                "-2^(n+c-a+1)",
                "2^(-a)b",
                "-2^(n+c+1-a)b",
                "0",
                "2^(c+2-a)b"
            ]
        ),
        row!(
            "1.6",
            ["0", "0", "0", "0", "2^(-a)b", "2^(n-a)", "0", "0"],
            ["0", "0", "0", "2^(n-a)", "0", "0", "2^(-a)b", "0"]
        ),
        row!(
            "1.7",
            ["0", "0", "0", "1", "2^(c+1)", "0", "2", "2^(c+2)"],
            ["0", "0", "0", "0", "1", "2", "2^(c+1)", "2^(c+2)"]
        ),
        row!(
            "1.8",
            ["0", "0", "1", "0", "2^(-a)b", "2^(n-a)+2", "0", "0"],
            ["0", "0", "1", "2^(n-a)+2", "0", "0", "2^(-a)b", "0"]
        ),
        row!(
            "1.9",
            [
                "0",
                "0",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "0",
                "-2^(n+c-a)",
                "2^(-a+1)b",
                "2^(c+2-a)b"
            ],
            [
                "0",
                "0",
                "2^(n+c-a-1)",
                "-2^(n+c-a)",
                "2^(-a)b",
                "2^(1-a)b",
                "0",
                "2^(c+2-a)b"
            ]
        ),
        row!(
            "1.10",
            [
                "0",
                "2^(n-a)",
                "0",
                "0",
                "-2^(c-a+1)b",
                "0",
                "-2^(-a+1)b",
                "-2^(c+2-a)b"
            ],
            [
                "0",
                "2^(n-a)",
                "0",
                "0",
                "0",
                "-2^(1-a)b",
                "-2^(c+1-a)b",
                "-2^(c+2-a)b"
            ]
        ),
        row!(
            "1.11",
            [
                "0",
                "2^(n-1-a)",
                "0",
                "0",
                "-2^(c-a)b",
                "0",
                "-2^(-a)b",
                "-2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-1-a)",
                "0",
                "0",
                "0",
                "-2^(-a)b",
                "-2^(c-a)b",
                "-2^(c+1-a)b"
            ]
        ),
        row!(
            "1.12",
            ["0", "2^(n-a)", "0", "2^(-a)b", "0", "0", "0", "0"],
            ["0", "2^(n-a)", "0", "0", "2^(-a)b", "0", "0", "0"]
        ),
        row!(
            "1.13",
            [
                "0",
                "2^(n-1-a)",
                "0",
                "2^(-a)b",
                "0",
                "-2^(n+c-a)",
                "2^(-a)b",
                "2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-1-a)",
                "0",
                "2^(n+c-a)",
                "2^(-a)b",
                "2^(-a)b",
                "0",
                "2^(c+1-a)b"
            ]
        ),
        row!(
            "1.14",
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "0",
                "0",
                "3*2^(n+c-a)",
                "-2^(-a+1)b",
                "-2^(c+2-a)b"
            ],
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "3*2^(n+c-a)",
                "0",
                "-2^(1-a)b",
                "0",
                "-2^(c+2-a)b"
            ]
        ),
        row!(
            "1.15",
            [
                "0",
                "2^(n-1-a)",
                "-2^(n+c-a-1)",
                "0",
                "0",
                "0",
                "-2^(-a)b",
                "-2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-a-1)",
                "-2^(n+c-a-1)",
                "0",
                "0",
                "-2^(-a)b",
                "0",
                "-2^(c+1-a)b"
            ]
        ),
        row!(
            "1.16",
            [
                "2^(n-a)",
                "0",
                "0",
                "0",
                "2^(c-a)b",
                "-3*2^(n+c-a)",
                "2^(-a+2)b",
                "2^(c-a+3)b"
            ],
            [
                "2^(n-a)",
                "0",
                "0",
                "-3*2^(n+c-a)",
                "0",
                "2^(2-a)b",
                "2^(c-a)b",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "1.17",
            [
                "2^(n-a)",
                "0",
                "0",
                "2^(-a)b",
                "0",
                "-3*2^(n+c-a+1)",
                "3*2^(-a+1)b",
                "3*2^(-a+c+2)b"
            ],
            [
                "2^(n-a)",
                "0",
                "0",
                "-3*2^(n+c-a+1)",
                "2^(-a)b",
                "3*2^(1-a)b",
                "0",
                "3*2^(c+2-a)b"
            ]
        ),
        row!(
            "1.18",
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "0",
                "0",
                "-3*2^(n+c-a)",
                "2^(-a+2)b",
                "2^(c-a+3)b"
            ],
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "-3*2^(n+c-a)",
                "0",
                "2^(2-a)b",
                "0",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "1.19",
            ["1", "2", "0", "0", "0", "0", "0", "0"],
            ["1", "2", "0", "0", "0", "0", "0", "0"]
        ),
        row!(
            "1.20",
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "0",
                "2^(c-a)b",
                "2^(n+c-a+2)",
                "-2^(-a+1)b",
                "-2^(c+2-a)b"
            ],
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(n+c-a+2)",
                "0",
                "-2^(1-a)b",
                "2^(c-a)b",
                "-2^(c+2-a)b"
            ]
        ),
        row!(
            "1.21",
            [
                "0",
                "2^(n-1-a)",
                "-2^(n+c-a-1)",
                "0",
                "2^(c-a)b",
                "2^(n+c-a)",
                "-2^(-a)b",
                "-2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-a-1)",
                "-2^(n+c-a-1)",
                "2^(n+c-a)",
                "0",
                "-2^(-a)b",
                "2^(c-a)b",
                "-2^(c+1-a)b"
            ]
        ),
        row!(
            "1.22",
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "0",
                "2^(c-a)b",
                "-2^(n+c-a+1)",
                "2^(-a+2)b",
                "2^(c-a+3)b"
            ],
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "-2^(n+c-a+1)",
                "0",
                "2^(2-a)b",
                "2^(c-a)b",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "1.23",
            ["1", "2", "2^(c+1)", "0", "0", "2^(c+2)", "0", "0"],
            ["1", "2", "2^(c+1)", "2^(c+2)", "0", "0", "0", "0"]
        ),
        row!(
            "1.24",
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "0",
                "2^(n+c-a)",
                "0",
                "0"
            ],
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(n+c-a)",
                "2^(-a)b",
                "0",
                "0",
                "0"
            ]
        ),
        row!(
            "1.25",
            [
                "0",
                "2^(n-1-a)",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "0",
                "0",
                "2^(-a)b",
                "2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-a-1)",
                "2^(n+c-a-1)",
                "0",
                "2^(-a)b",
                "2^(-a)b",
                "0",
                "2^(c+1-a)b"
            ]
        ),
        row!(
            "1.26",
            [
                "0",
                "0",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "2^(c-a)b",
                "0",
                "2^(-a+1)b",
                "2^(c-a+2)b"
            ],
            [
                "0",
                "0",
                "2^(n+c-a-1)",
                "0",
                "2^(-a)b",
                "2^(1-a)b",
                "2^(c-a)b",
                "2^(c+2-a)b"
            ]
        ),
        row!(
            "2.1",
            [
                "2^(n-a)",
                "0",
                "0",
                "2^(-a)b",
                "2^(c-a)b",
                "-5*2^(n+c-a)",
                "3*2^(-a+1)b",
                "3*2^(-a+c+2)b"
            ],
            [
                "2^(n-a)",
                "0",
                "0",
                "-5*2^(n+c-a)",
                "2^(-a)b",
                "3*2^(1-a)b",
                "2^(c-a)b",
                "3*2^(c+2-a)b"
            ]
        ),
        row!(
            "2.2",
            [
                "2^(n-a)",
                "2^(n-a)",
                "0",
                "0",
                "2^(c-a)b",
                "-2^(n+c-a)",
                "2^(-a+1)b",
                "2^(c-a+2)b"
            ],
            [
                "2^(n-a)",
                "2^(n-a)",
                "0",
                "-2^(n+c-a)",
                "0",
                "2^(1-a)b",
                "2^(c-a)b",
                "2^(c+2-a)b"
            ]
        ),
        row!(
            "2.3",
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "0",
                "-5*2^(n+c-a)",
                "-3*2^(-a+1)b",
                "-3*2^(c-a+2)b"
            ],
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "-5*2^(n+c-a)",
                "2^(-a)b",
                "-3*2^(1-a)b",
                "0",
                "-3*2^(c+2-a)b"
            ]
        ),
        row!(
            "2.4",
            [
                "2^(n-a)",
                "2^(n-a)",
                "0",
                "2^(-a)b",
                "0",
                "-2^(n+c-a+2)",
                "2^(-a+2)b",
                "2^(c-a+3)b"
            ],
            [
                "2^(n-a)",
                "2^(n-a)",
                "0",
                "-2^(n+c-a+2)",
                "2^(-a)b",
                "2^(2-a)b",
                "0",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "2.5",
            [
                "0",
                "2^(n-a)",
                "0",
                "2^(-a)b",
                "2^(c-a)b",
                "2^(n+c-a)",
                "0",
                "0"
            ],
            [
                "0",
                "2^(n-a)",
                "0",
                "2^(n+c-a)",
                "2^(-a)b",
                "0",
                "2^(c-a)b",
                "0"
            ]
        ),
        row!(
            "2.6",
            [
                "0",
                "2^(n-1-a)",
                "0",
                "2^(-a)b",
                "2^(c-a)b",
                "0",
                "2^(-a)b",
                "2^(c+1-a)b"
            ],
            [
                "0",
                "2^(n-a-1)",
                "0",
                "0",
                "2^(-a)b",
                "2^(-a)b",
                "2^(c-a)b",
                "2^(c+1-a)b"
            ]
        ),
        row!(
            "2.7",
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "0",
                "-3*2^(n+c-a)",
                "2^(-a+2)b",
                "2^(c-a+3)b"
            ],
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "-3*2^(n+c-a)",
                "2^(-a)b",
                "2^(2-a)b",
                "0",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "2.8",
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "0",
                "2^(-a)b",
                "0",
                "2^(-a+1)b",
                "2^(c-a+2)b"
            ],
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "0",
                "0",
                "2^(1-a)b",
                "2^(c-a)b",
                "2^(c+2-a)b"
            ]
        ),
        row!(
            "2.9",
            [
                "2^(n-a)",
                "2^(n-a)",
                "0",
                "2^(-a)b",
                "2^(c-a)b",
                "-3*2^(n+c-a)",
                "2^(-a+2)b",
                "2^(c-a+2)b"
            ],
            [
                "2^(n-a)",
                "2^(n-a)",
                "0",
                "-3*2^(n+c-2a)",
                "2^(-a)b",
                "2^(2-a)b",
                "2^(c-a)b",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "2.10",
            [
                "2^(n-a)",
                "0",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "2^(c-a)b",
                "2^(n+c-a+2)",
                "3*2^(-a+1)b",
                "3*2^(c-a+2)b"
            ],
            [
                "2^(n-a)",
                "0",
                "0",
                "2^(n+c-a+2)",
                "2^(-a)b",
                "3*2^(1-a)b",
                "2^(c-a)b",
                "3*2^(c+2-a)b"
            ]
        ),
        row!(
            "2.11",
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "2^(c-a)b",
                "2^(n+c-a+1)",
                "0",
                "0"
            ],
            [
                "0",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(n+c-a+1)",
                "2^(-a)b",
                "0",
                "2^(c-a)b",
                "0"
            ]
        ),
        row!(
            "2.12",
            [
                "0",
                "2^(n-1-a)",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "2^(c-a)b",
                "2^(n+c-a)",
                "2^(-a)b",
                "2^(-a)b"
            ],
            [
                "0",
                "2^(n-a-1)",
                "2^(n+c-a)",
                "2^(n+c-a+1)",
                "2^(-a)b",
                "2^(-a)b",
                "2^(c-a)b",
                "2^(c+1-a)b"
            ]
        ),
        row!(
            "2.13",
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "2^(-a)b",
                "2^(c-a)b",
                "-2^(n+c-a+1)",
                "2^(-a+2)",
                "2^(c-a+3)"
            ],
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "-2^(n+c-a+1)",
                "2^(-a)b",
                "2^(2-a)b",
                "2^(c-a)b",
                "2^(c+3-a)b"
            ]
        ),
        row!(
            "3.1",
            [
                "0",
                "2^(n-a)",
                "0",
                "3*2^(n+c-a)",
                "0",
                "-2^(1-a)b",
                "2^(c-a)b",
                "-2^(c+2-a)b"
            ]
        ),
        row!(
            "3.2",
            [
                "0",
                "0",
                "0",
                "-2^(n+c-a)",
                "2^(-a)b",
                "2^(1-a)b",
                "2^(c-a)b",
                "2^(c+2-a)b"
            ]
        ),
        row!(
            "3.3",
            [
                "0",
                "2^(n-a)",
                "0",
                "2^(n+c-a+1)",
                "2^(-a)b",
                "0",
                "2^(c-a)b",
                "0"
            ]
        ),
        row!(
            "3.4",
            [
                "2^(n-a)",
                "2^(n-a)",
                "2^(n+c-a-1)",
                "-2^(n+c-a+1)",
                "2^(-a)b",
                "2^(2-a)b",
                "2^(c-a)b",
                "2^(c+3-a)b"
            ]
        ),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowOutcome {
    pub id: String,
    pub status: RowStatus,
    /// Tuple reproduces the displayed element (None when the row has no tuple).
    pub tuple_consistent: Option<bool>,
    pub detail: String,
}

fn instantiate(entries: &[&str; 8], p: &CaseParams) -> Vec<BigRational> {
    entries
        .iter()
        .map(|e| eval_entry(e, p.n, p.c, p.alpha, &p.b0))
        .collect()
}

/// Instantiates the solution tables for an odd, s ≡ 0 mod 4 case and tests
/// each displayed element for membership in Ker(d₁).
pub fn verify_solution_tables(kd: &KoszulData) -> Result<Vec<RowOutcome>, Error> {
    if kd.params.case != Case::OddZero {
        return Err(Error::Unsupported(format!(
            "solution tables need the OddZero case, got {}",
            kd.params.case
        )));
    }
    let alg = &kd.algebra;
    Ok(solution_table()
        .into_iter()
        .map(|row| {
            let elem = instantiate(&row.element, &kd.params);
            if !elem.iter().all(|x| x.is_integer()) {
                return RowOutcome {
                    id: row.id.into(),
                    status: RowStatus::Skip,
                    tuple_consistent: None,
                    detail: "negative power of 2 in the displayed element".into(),
                };
            }
            let mut coords = vec![BigInt::zero(); 8];
            for (slot, x) in elem.iter().enumerate() {
                coords[SLOT_TO_COORD[slot]] = x.to_integer();
            }
            let tuple_consistent = row.tuple.map(|t| {
                let tv = instantiate(&t, &kd.params);
                (0..8).all(|col| tv[col] == elem[TUPLE_TO_SLOT[col]])
            });
            let v = ModuleVector::from_coords(&coords);
            let res = kd.d1_apply(&v);
            let status = if res.is_zero() {
                RowStatus::Pass
            } else {
                RowStatus::Fail
            };
            RowOutcome {
                id: row.id.into(),
                status,
                tuple_consistent,
                detail: if res.is_zero() {
                    "d1 = 0".into()
                } else {
                    format!("d1 = {}", alg.format(&res))
                },
            }
        })
        .collect())
}

/// Fraction of instantiable rows in Ker(d₁).
pub fn table_pass_rate(rows: &[RowOutcome]) -> f64 {
    let inst: Vec<_> = rows
        .iter()
        .filter(|r| r.status != RowStatus::Skip)
        .collect();
    if inst.is_empty() {
        return 0.0;
    }
    inst.iter().filter(|r| r.status == RowStatus::Pass).count() as f64 / inst.len() as f64
}

/// Rows of Table 3 carry only grouped coefficients, not a full element listing.
pub fn is_grouped_only(id: &str) -> bool {
    id.starts_with("3.")
}

/// Pass count and instantiable count over the fully listed rows (Tables 1 and 2).
pub fn listed_table_tally(rows: &[RowOutcome]) -> (usize, usize) {
    let inst: Vec<_> = rows
        .iter()
        .filter(|r| r.status != RowStatus::Skip && !is_grouped_only(&r.id))
        .collect();
    (
        inst.iter().filter(|r| r.status == RowStatus::Pass).count(),
        inst.len(),
    )
}

/// All parameter pairs 5 ≤ m ≤ m_max, even s ≤ s_max, with c ≥ 1.
pub fn grid(m_max: i64, s_max: i64) -> Vec<CaseParams> {
    (5..=m_max)
        .flat_map(|m| {
            (2..=s_max)
                .step_by(2)
                .filter_map(move |s| crate::repring::build_case(m, s).ok())
        })
        .collect()
}

//! Final ring presentation per case, the tangent-bundle class, the full
//! cross-check report and text/JSON serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::clifford::{geometry_checks, MAX_DIM};
use crate::koszul::{
    active_relations, build_koszul, grobner_select, homology_h0, homology_h2, is_grouped_only,
    listed_table_tally, printed_deviations, standard_kernel_generators, standard_leading_positions,
    verify_h1, verify_relations, verify_solution_tables, Ext, Level, Relation, RowStatus,
};
use crate::repring::{
    change_of_generators, elementary_identities, laurent_oracle, BAlgebra, Case, CaseParams, Mono,
};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseSummary {
    pub m: i64,
    pub s: i64,
    pub n: i64,
    pub c: i64,
    pub kind: Case,
    pub b0: String,
    pub alpha: i64,
    pub has_u4: bool,
}

impl CaseSummary {
    pub fn new(p: &CaseParams) -> Self {
        CaseSummary {
            m: p.m,
            s: p.s,
            n: p.n,
            c: p.c,
            kind: p.case,
            b0: p.b0.to_string(),
            alpha: p.alpha,
            has_u4: p.has_u4(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generators {
    pub exterior: Vec<String>,
    pub polynomial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LhsTerm {
    pub coeff: String,
    /// Generator name and exponent, polynomial generators first (y < δ_c < δ⁺),
    /// then exterior generators.
    pub monomial: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationRelation {
    pub id: String,
    pub level: Level,
    pub lhs_terms: Vec<LhsTerm>,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub status: Status,
}

/// Λ*[t₁..t_{s−2}, u₁, u₂, u₃, (u₄), v] ⊗ Z[y, δ_c(, δ⁺)]/I.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KRingPresentation {
    pub case: CaseSummary,
    pub generators: Generators,
    pub relations: Vec<PresentationRelation>,
    pub tangent_class: i64,
    pub checks: Vec<CheckSummary>,
}

/// Coefficient of [y] in the class of the complexified tangent bundle.
pub fn tangent_class(params: &CaseParams) -> i64 {
    tangent_coefficient(params.m, params.s)
}

/// s(m − s − 1); defined for every m ≥ s + 1, including c = 0.
pub fn tangent_coefficient(m: i64, s: i64) -> i64 {
    s * (m - s - 1)
}

fn level_source(level: Level) -> &'static str {
    match level {
        Level::B => "relations of B",
        Level::H0 => "relations in H0",
        Level::H1 => "relations in H1",
        Level::H2 => "relations in H2",
    }
}

fn monomial_pairs(mono: Mono, ext: Ext) -> Vec<(String, u32)> {
    let mut out = vec![];
    for (name, e) in [("y", mono.0), ("δ_c", mono.1), ("δ⁺", mono.2)] {
        if e > 0 {
            out.push((name.to_string(), e));
        }
    }
    out.extend(ext.names().into_iter().map(|n| (n, 1)));
    out
}

fn present_relation(rel: &Relation) -> PresentationRelation {
    let row = rel.id.rsplit('-').next().unwrap_or("");
    PresentationRelation {
        id: rel.id.clone(),
        level: rel.level,
        lhs_terms: rel
            .terms
            .iter()
            .map(|t| LhsTerm {
                coeff: t.coeff.to_string(),
                monomial: monomial_pairs(t.mono, t.ext),
            })
            .collect(),
        source: format!("{}, row {row}", level_source(rel.level)),
    }
}

pub fn assemble_presentation(params: &CaseParams) -> KRingPresentation {
    assemble_with_checks(params, vec![])
}

fn assemble_with_checks(params: &CaseParams, checks: Vec<CheckSummary>) -> KRingPresentation {
    let mut exterior: Vec<String> = (1..=params.t_count()).map(|i| format!("t{i}")).collect();
    exterior.extend(standard_kernel_generators(params).names);
    exterior.push("v".into());
    let mut polynomial = vec!["y".to_string(), "δ_c".to_string()];
    if !params.is_odd() {
        polynomial.push("δ⁺".into());
    }
    KRingPresentation {
        case: CaseSummary::new(params),
        generators: Generators {
            exterior,
            polynomial,
        },
        relations: active_relations(params)
            .iter()
            .map(present_relation)
            .collect(),
        tangent_class: tangent_class(params),
        checks,
    }
}

/// The presentation together with the gating status of every check.
pub fn assemble_verified_presentation(params: &CaseParams) -> KRingPresentation {
    let report = cross_check(params, false);
    let checks = report
        .records
        .iter()
        .map(|r| CheckSummary {
            name: r.name.clone(),
            status: r.status,
        })
        .collect();
    assemble_with_checks(params, checks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    /// Gating checks decide the exit status of `verify`.
    pub gating: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErratumEntry {
    pub location: String,
    pub printed: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub case: CaseSummary,
    pub records: Vec<CheckRecord>,
    pub errata: Vec<ErratumEntry>,
}

impl VerificationReport {
    pub fn gating_passed(&self) -> bool {
        self.records
            .iter()
            .filter(|r| r.gating)
            .all(|r| r.status != Status::Fail)
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

fn rec(name: impl Into<String>, ok: bool, gating: bool, detail: impl Into<String>) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        gating,
        detail: detail.into(),
    }
}

fn skip(name: impl Into<String>, detail: impl Into<String>) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        status: Status::Skip,
        gating: false,
        detail: detail.into(),
    }
}

/// Runs every verification for one case. `deep` adds the Clifford geometry
/// and the Laurent-character oracle.
pub fn cross_check(params: &CaseParams, deep: bool) -> VerificationReport {
    let mut records = vec![];
    let mut errata = vec![];

    if !deep {
        records.push(skip("clifford geometry", "enabled by --deep"));
        records.push(skip("laurent oracle", "enabled by --deep"));
    } else {
        let dim = (params.m as usize).min(MAX_DIM);
        if 2 * params.s as usize > MAX_DIM {
            records.push(skip("clifford geometry", format!("2s > {MAX_DIM}")));
        } else {
            match geometry_checks(params.s as usize, dim) {
                Ok(g) => records.push(rec(
                    "clifford geometry",
                    g.passed(),
                    true,
                    format!(
                        "in C_{dim}: ω² = {}, p(ω) flip {}, hωh⁻¹ in torus {}, torus reaches ω {}",
                        g.omega_square,
                        g.projection_is_flip,
                        g.conjugate_in_torus,
                        g.torus_reaches_omega
                    ),
                )),
                Err(e) => records.push(rec("clifford geometry", false, true, e.to_string())),
            }
        }
        let oracle = laurent_oracle(params);
        let bad: Vec<&str> = oracle
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.what.as_str())
            .collect();
        records.push(rec(
            "laurent oracle",
            bad.is_empty(),
            true,
            if bad.is_empty() {
                format!("{} comparisons agree", oracle.len())
            } else {
                format!("mismatch: {}", bad.join(", "))
            },
        ));
    }

    let alg = BAlgebra::new(params);
    records.push(rec(
        "B axioms",
        alg.check_axioms(),
        true,
        format!("rank {}", alg.rank()),
    ));
    records.push(rec(
        "elementary identities",
        elementary_identities(&alg),
        true,
        "θ, y, 1 ± θ power laws",
    ));
    match change_of_generators(params) {
        Ok(cg) => records.push(rec(
            "change of generators",
            cg.verify(params),
            true,
            format!("{} free indices", cg.indices.len()),
        )),
        Err(e) => records.push(rec("change of generators", false, true, e.to_string())),
    }

    let kd = match build_koszul(params) {
        Ok(kd) => {
            records.push(rec("d1·d2 = 0", true, true, ""));
            kd
        }
        Err(e) => {
            records.push(rec("d1·d2 = 0", false, true, e.to_string()));
            return VerificationReport {
                case: CaseSummary::new(params),
                records,
                errata,
            };
        }
    };

    let h0 = homology_h0(&kd);
    records.push(rec(
        "H0 order of y",
        h0.y_order_ok() && h0.one_nonzero,
        true,
        format!(
            "order {} (expected {}), H0 = {}",
            h0.y_order.as_ref().map_or("∞".into(), ToString::to_string),
            h0.expected_y_order,
            h0.presentation
        ),
    ));

    let h2 = homology_h2(&kd);
    let h2_ok = if params.is_odd() {
        h2.equals_zv
    } else {
        h2.spanned_by_v
    };
    records.push(rec(
        "H2 = span of v",
        h2_ok,
        true,
        format!(
            "Z-rank {}, Z·v {}, B·v {}",
            h2.z_rank, h2.equals_zv, h2.spanned_by_v
        ),
    ));

    let gens = standard_kernel_generators(params);
    let h1 = verify_h1(&kd, &gens);
    records.push(rec(
        "H1 generators",
        h1.passed(),
        true,
        format!(
            "{}; spanning {}; H1 = {}",
            h1.in_kernel
                .iter()
                .map(|(n, b)| format!("{n} {}", if *b { "cycle" } else { "NOT a cycle" }))
                .collect::<Vec<_>>()
                .join(", "),
            h1.spans,
            h1.presentation
                .as_ref()
                .map_or("?".into(), ToString::to_string)
        ),
    ));

    for d in printed_deviations(params) {
        errata.push(ErratumEntry {
            location: format!("relation {}", d.id),
            printed: d.printed.into(),
            computed: format!("{} (verified in the relation check)", d.used),
        });
    }
    for r in verify_relations(&kd) {
        if !r.passed {
            errata.push(ErratumEntry {
                location: format!("relation {}", r.id),
                printed: render_relation_by_id(params, &r.id),
                computed: r.detail.clone(),
            });
        }
        records.push(rec(format!("relation {}", r.id), r.passed, true, r.detail));
    }

    let gb = grobner_select(&kd);
    let selected: std::collections::BTreeSet<usize> = gb
        .candidates
        .iter()
        .filter(|c| c.redundant_by.is_none())
        .map(|c| c.lead)
        .collect();
    let matches = selected == standard_leading_positions(params);
    records.push(rec(
        "groebner selection",
        gb.lt_module_ok && gb.span_ok && matches,
        params.case == Case::OddZero,
        format!(
            "leading terms [{}], Lt criterion {}, spans {}, matches generators {}",
            gb.selected.leading_terms.join(", "),
            gb.lt_module_ok,
            gb.span_ok,
            matches
        ),
    ));

    match verify_solution_tables(&kd) {
        Ok(rows) => {
            let (pass, inst) = listed_table_tally(&rows);
            let grouped: Vec<_> = rows.iter().filter(|r| is_grouped_only(&r.id)).collect();
            let grouped_pass = grouped
                .iter()
                .filter(|r| r.status == RowStatus::Pass)
                .count();
            for r in rows
                .iter()
                .filter(|r| r.status == RowStatus::Fail || r.tuple_consistent == Some(false))
            {
                errata.push(ErratumEntry {
                    location: format!("solution table row {}", r.id),
                    printed: table_row_text(&r.id),
                    computed: format!(
                        "{}{}",
                        r.detail,
                        if r.tuple_consistent == Some(false) {
                            "; coefficient tuple disagrees with element"
                        } else {
                            ""
                        }
                    ),
                });
            }
            records.push(rec(
                "solution tables",
                pass * 10 >= inst * 9,
                false,
                format!(
                    "{pass}/{inst} instantiable listed rows in Ker(d1); grouped rows {grouped_pass}/{}",
                    grouped.len()
                ),
            ));
        }
        Err(e) => records.push(skip("solution tables", e.to_string())),
    }

    VerificationReport {
        case: CaseSummary::new(params),
        records,
        errata,
    }
}

/// Erratum entries of every valid case with m ≤ m_max and s ≤ s_max, keyed by "(m,s)".
pub fn errata_ledger(m_max: i64, s_max: i64) -> BTreeMap<String, Vec<ErratumEntry>> {
    crate::koszul::grid(m_max, s_max)
        .iter()
        .map(|p| (p.label(), cross_check(p, false).errata))
        .filter(|(_, e)| !e.is_empty())
        .collect()
}

fn render_relation_by_id(params: &CaseParams, id: &str) -> String {
    active_relations(params)
        .iter()
        .find(|r| r.id == id)
        .map(|r| render_terms(&present_relation(r).lhs_terms))
        .unwrap_or_default()
}

fn table_row_text(id: &str) -> String {
    crate::koszul::solution_table()
        .into_iter()
        .find(|r| r.id == id)
        .map(|r| format!("[{}]", r.element.join(", ")))
        .unwrap_or_default()
}

/// "y^2 + 2y", "8δ_c·y·u3 - 2v", …
pub fn render_terms(terms: &[LhsTerm]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let c: BigInt = t.coeff.parse().unwrap_or_else(|_| BigInt::zero());
        let neg = c.is_negative() || t.coeff.starts_with('-');
        let mag = t.coeff.trim_start_matches('-');
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = t
            .monomial
            .iter()
            .map(|(n, e)| {
                if *e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        let unit = mag == "1";
        if factors.is_empty() {
            out.push_str(mag);
        } else {
            if !unit {
                out.push_str(mag);
            }
            out.push_str(&factors.join("·"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn presentation_to_text(p: &KRingPresentation) -> String {
    let mut s = String::new();
    let c = &p.case;
    let _ = writeln!(s, "K*(FV_{{{},{}}})  case {:?}", c.m, 2 * c.s, c.kind);
    let _ = writeln!(
        s,
        "m = {}, s = {}, n = {}, c = {}, b0 = {}, alpha = {}",
        c.m, c.s, c.n, c.c, c.b0, c.alpha
    );
    let _ = writeln!(
        s,
        "exterior generators: {}",
        p.generators.exterior.join(", ")
    );
    let _ = writeln!(
        s,
        "polynomial generators: {}",
        p.generators.polynomial.join(", ")
    );
    let _ = writeln!(s, "relations ({}):", p.relations.len());
    for r in &p.relations {
        let _ = writeln!(s, "  [{}] {}", r.id, render_terms(&r.lhs_terms));
    }
    let _ = writeln!(s, "tangent class: {}[y]", p.tangent_class);
    if !p.checks.is_empty() {
        let _ = writeln!(s, "checks:");
        for ch in &p.checks {
            let _ = writeln!(s, "  {:?}  {}", ch.status, ch.name);
        }
    }
    s
}

pub fn report_to_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let c = &r.case;
    let _ = writeln!(s, "verification of ({}, {})  case {:?}", c.m, c.s, c.kind);
    for rec in &r.records {
        let tag = if rec.gating { "" } else { " (report)" };
        let _ = writeln!(s, "  {:?}  {}{}  {}", rec.status, rec.name, tag, rec.detail);
    }
    if !r.errata.is_empty() {
        let _ = writeln!(s, "errata:");
        for e in &r.errata {
            let _ = writeln!(
                s,
                "  {}: printed {} | computed {}",
                e.location, e.printed, e.computed
            );
        }
    }
    let _ = writeln!(
        s,
        "gating: {}",
        if r.gating_passed() { "PASS" } else { "FAIL" }
    );
    s
}

pub fn serialize<T: Serialize>(
    value: &T,
    text: impl Fn(&T) -> String,
    format: Format,
) -> Result<String, Error> {
    match format {
        Format::Text => Ok(text(value)),
        Format::Json => serde_json::to_string_pretty(value)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Internal(e.to_string())),
    }
}

pub fn serialize_presentation(p: &KRingPresentation, format: Format) -> Result<String, Error> {
    serialize(p, presentation_to_text, format)
}

pub fn serialize_report(r: &VerificationReport, format: Format) -> Result<String, Error> {
    serialize(r, report_to_text, format)
}

/// Exit status for a report: 0 when every gating check passes, else 1.
pub fn exit_code(r: &VerificationReport) -> i32 {
    if r.gating_passed() {
        0
    } else {
        1
    }
}

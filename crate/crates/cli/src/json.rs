//! JSON renderings of the core values. Coefficients are strings, since
//! they are arbitrary-precision ("-3", "5/2").

use serde::{Deserialize, Serialize};

use kucomm_core::charcls::U2TableReport;
use kucomm_core::hopf::HopfElem;
use kucomm_core::ku::KuElem;
use kucomm_core::multisym::{MSymExpr, Rank2Quot};
use kucomm_core::poly::MPoly;
use kucomm_core::s4::S4Report;

/// One term `coeff * u^a * y_n` of a K-homology element.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct KuTerm {
    pub a: u32,
    pub n: u32,
    pub coeff: String,
}

pub fn ku_terms(e: &KuElem) -> Vec<KuTerm> {
    e.terms()
        .map(|(k, c)| KuTerm {
            a: k.u_pow,
            n: k.y_idx,
            coeff: c.to_string(),
        })
        .collect()
}

/// One term of a Hopf ring element: `coeff * [component] * prod zeta^mult`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct HopfTerm {
    pub component: i64,
    /// triples `[a, b, multiplicity]`
    pub monomial: Vec<[u32; 3]>,
    pub coeff: String,
}

pub fn hopf_terms(e: &HopfElem) -> Vec<HopfTerm> {
    e.terms()
        .map(|((comp, mono), c)| HopfTerm {
            component: *comp,
            monomial: mono
                .distinct()
                .into_iter()
                .map(|(g, m)| [g.a, g.b, m])
                .collect(),
            coeff: c.to_string(),
        })
        .collect()
}

/// One term of an abstract multisymmetric expression.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MSymTerm {
    /// triples `[a, b, multiplicity]`
    pub monomial: Vec<[u32; 3]>,
    pub coeff: String,
}

pub fn msym_terms(e: &MSymExpr) -> Vec<MSymTerm> {
    e.terms()
        .map(|(mono, c)| MSymTerm {
            monomial: mono
                .distinct()
                .into_iter()
                .map(|(g, m)| [g.a, g.b, m])
                .collect(),
            coeff: c.to_string(),
        })
        .collect()
}

/// Polynomial term as an exponent vector with an exact rational coefficient.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    pub numerator: String,
    pub denominator: String,
}

pub fn mpoly_terms(p: &MPoly<kucomm_core::Rat>) -> Vec<PolyTerm> {
    p.terms()
        .map(|(m, c)| PolyTerm {
            exponents: m.exps().to_vec(),
            numerator: c.numer().to_string(),
            denominator: c.denom().to_string(),
        })
        .collect()
}

pub fn mpoly_terms_int(p: &MPoly<kucomm_core::Int>) -> Vec<PolyTerm> {
    p.terms()
        .map(|(m, c)| PolyTerm {
            exponents: m.exps().to_vec(),
            numerator: c.to_string(),
            denominator: String::from("1"),
        })
        .collect()
}

/// A rank-2 quotient class: canonical text plus the raw term list.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Rank2Json {
    pub text: String,
    pub terms: Vec<PolyTerm>,
}

pub fn rank2_json(q: &Rank2Quot) -> Rank2Json {
    Rank2Json {
        text: q.to_string(),
        terms: mpoly_terms(q.poly()),
    }
}

/// Relation report, `relations` rendered canonically.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub rank: usize,
    pub degree: u32,
    pub kernel_dimension: usize,
    pub relations: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct U2RowJson {
    pub name: String,
    pub claimed: String,
    pub stable_side: Rank2Json,
    pub claimed_side: Rank2Json,
    pub ok: bool,
    pub su_derived: String,
    pub su_expected: String,
    pub su_ok: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct U2TableJson {
    pub rows: Vec<U2RowJson>,
    pub relations_vanish: bool,
    pub injective_through_weight: u32,
    pub injectivity_ok: bool,
    pub torsion_ok: bool,
    pub torsion_classes_nonzero: bool,
    pub all_ok: bool,
}

pub fn u2_table_json(r: &U2TableReport) -> U2TableJson {
    U2TableJson {
        rows: r
            .rows
            .iter()
            .map(|row| U2RowJson {
                name: row.name.to_string(),
                claimed: row.claimed.to_string(),
                stable_side: rank2_json(&row.stable_side),
                claimed_side: rank2_json(&row.claimed_side),
                ok: row.ok,
                su_derived: row.su_derived.to_string(),
                su_expected: row.su_expected.to_string(),
                su_ok: row.su_ok,
            })
            .collect(),
        relations_vanish: r.relations_vanish,
        injective_through_weight: r.injective_through_weight,
        injectivity_ok: r.injectivity_ok,
        torsion_ok: r.torsion_ok,
        torsion_classes_nonzero: r.torsion_classes_nonzero,
        all_ok: r.all_ok(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct S4Json {
    pub image_v: String,
    pub image_w: String,
    pub image_v_plus_w_half: String,
    pub basis_determinant: i64,
    /// both orientation choices of the doubled class
    pub h_tilde_plus: String,
    pub h_tilde_minus: String,
    pub all_ok: bool,
}

pub fn s4_json(r: &S4Report) -> S4Json {
    S4Json {
        image_v: r.image_v.to_string(),
        image_w: r.image_w.to_string(),
        image_v_plus_w_half: r.image_mid.to_string(),
        basis_determinant: r.determinant,
        h_tilde_plus: r.h_tilde_images.0.to_string(),
        h_tilde_minus: r.h_tilde_images.1.to_string(),
        all_ok: r.all_ok(),
    }
}

//! Serializable certificate schema.
//!
//! Certificates are versioned JSON documents with deterministic field
//! order (struct order plus BTreeMaps), rationals as "num/den" strings,
//! and ring elements in the dyadic module's digit form, so re-running an
//! identical configuration produces byte-identical output.

use crate::dyadic::{DyadicRationalFunction, Quarters};
use crate::gf2x::WittVector2;
use crate::lift::{LiftCertificate, Regime};
use crate::swan::{GoodReductionVerdict, Place};
use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub ring: RingSection,
    pub problem: ProblemSection,
    pub branch_data: BranchSection,
    pub regime: String,
    pub lift: LiftSection,
    pub phi1: VerdictSection,
    pub twisting_character: TwistSection,
    pub branch_locus: LocusSection,
    pub assembled: VerdictSection,
    pub combined_reduction_matches: bool,
    pub substitution_identity: Option<IdentitySection>,
    pub depth_diagnostics: DepthSection,
    pub good_reduction: bool,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

#[derive(Serialize)]
pub struct RingSection {
    pub residue_degree: u32,
    pub precision_pi_units: i64,
    pub ramification_index: u32,
}

#[derive(Serialize)]
pub struct ProblemSection {
    pub m1: u64,
    pub n2: u64,
    pub f2: BTreeMap<String, String>,
    pub v: Vec<ElementSection>,
    pub g: String,
}

#[derive(Serialize)]
pub struct ElementSection {
    pub rendered: String,
    pub digits: Vec<Vec<String>>,
    pub precision: String,
}

#[derive(Serialize)]
pub struct BranchSection {
    pub m1: u64,
    pub m2: u64,
    pub conductor: u64,
}

#[derive(Serialize)]
pub struct LiftSection {
    pub f1: String,
    pub g2: String,
    pub g2_min: String,
    pub correcting_element: String,
    pub g2_numerator_degree: u64,
}

#[derive(Serialize)]
pub struct VerdictSection {
    pub verdict: bool,
    pub branch_count: u64,
    pub expected_conductor: u64,
    pub reduction: Option<String>,
    pub diagnostics: Vec<String>,
}

#[derive(Serialize)]
pub struct TwistSection {
    pub nu: Option<String>,
    pub reduction: Option<String>,
    pub matches_f2: bool,
    pub index2_count: u64,
    pub index2_allowance: u64,
    pub within_allowance: bool,
}

#[derive(Serialize)]
pub struct LocusSection {
    pub total: u64,
    pub index2: u64,
    pub index4: u64,
    pub points: Vec<PointSection>,
}

#[derive(Serialize)]
pub struct PointSection {
    pub place: String,
    pub count: u64,
    pub index: u8,
}

#[derive(Serialize)]
pub struct IdentitySection {
    pub holds: bool,
    pub mod_pi_relation: String,
}

#[derive(Serialize)]
pub struct DepthSection {
    pub g2_depth: String,
    pub g2_depth_doubled_normalization: String,
    pub g2_dsw: Option<String>,
    pub g2_dsw_is_expected: bool,
    pub g2_min_depth: String,
    pub g2_min_dsw: Option<String>,
    pub g2_min_dsw_is_expected: bool,
    pub note: String,
}

#[derive(Serialize, Clone)]
pub struct OracleSection {
    pub ghost_constants: Vec<String>,
    pub greedy_planted_cases: Vec<(String, usize)>,
    pub tiny_breaks: Vec<(u64, u64)>,
}

fn depth_str(
    d: &Option<crate::lift::CharacterDiagnostics>,
    pick: impl Fn(&crate::lift::CharacterDiagnostics) -> i64,
) -> String {
    match d {
        Some(d) => Quarters(pick(d)).to_string(),
        None => "unavailable".into(),
    }
}

fn render_drf(f: &DyadicRationalFunction) -> String {
    format!("{f}")
}

fn verdict_section(v: &GoodReductionVerdict) -> VerdictSection {
    VerdictSection {
        verdict: v.verdict,
        branch_count: v.branch_count,
        expected_conductor: v.expected_conductor,
        reduction: v.reduction.as_ref().map(|r| format!("{r}")),
        diagnostics: v.diagnostics.clone(),
    }
}

pub fn witt_string(v: &WittVector2) -> String {
    format!("{v}")
}

impl Certificate {
    pub fn from_lift(cert: &LiftCertificate, oracle: Option<OracleSection>) -> Certificate {
        let p = &cert.problem;
        let ring = p.ring.clone();
        let f2 =
            p.f2.iter()
                .map(|(j, c)| (j.to_string(), format!("{c}")))
                .collect();
        let v =
            p.v.iter()
                .map(|vi| ElementSection {
                    rendered: format!("{vi}"),
                    digits: vi.digit_strings(),
                    precision: match vi.prec() {
                        crate::dyadic::Prec::Exact => "exact".into(),
                        crate::dyadic::Prec::Mod(q) => format!("pi^{q}"),
                    },
                })
                .collect();
        Certificate {
            schema_version: SCHEMA_VERSION,
            ring: RingSection {
                residue_degree: ring.residue_degree(),
                precision_pi_units: ring.precision(),
                ramification_index: 4,
            },
            problem: ProblemSection {
                m1: p.m1,
                n2: p.n2(),
                f2,
                v,
                g: format!("{}", p.g),
            },
            branch_data: BranchSection {
                m1: cert.branch_data.m1,
                m2: cert.branch_data.m2,
                conductor: cert.branch_data.conductor,
            },
            regime: match cert.regime {
                Regime::Minimal => "minimal".into(),
                Regime::SmallN2 => "n2 <= m1".into(),
                Regime::LargeN2 { alpha, beta } => {
                    format!("n2 > m1 (alpha = {alpha}, beta = {beta})")
                }
            },
            lift: LiftSection {
                f1: render_drf(&cert.f1),
                g2: render_drf(&cert.g2),
                g2_min: render_drf(&cert.g2_min),
                correcting_element: render_drf(&cert.hint),
                g2_numerator_degree: cert.g2_numerator_degree,
            },
            phi1: verdict_section(&cert.phi1_verdict),
            twisting_character: TwistSection {
                nu: cert.phi_prime_nu_quarters.map(|q| Quarters(q).to_string()),
                reduction: cert.phi_prime_reduction.as_ref().map(|r| format!("{r}")),
                matches_f2: cert.phi_prime_matches_f2,
                index2_count: cert.index2_count,
                index2_allowance: cert.branch_data.m2 - cert.branch_data.m1,
                within_allowance: cert.index2_bound_ok,
            },
            branch_locus: LocusSection {
                total: cert.locus.total(),
                index2: cert.locus.count_index(2),
                index4: cert.locus.count_index(4),
                points: cert
                    .locus
                    .points
                    .iter()
                    .map(|pt| PointSection {
                        place: match pt.place {
                            Place::AtZero => "X = 0".into(),
                            Place::AtInfinity => "X = infinity".into(),
                            Place::Finite(v) => format!("{}/{}", v.numer(), v.denom()),
                        },
                        count: pt.count,
                        index: pt.index,
                    })
                    .collect(),
            },
            assembled: verdict_section(&cert.assembled),
            combined_reduction_matches: cert.combined_reduction_matches,
            substitution_identity: cert.green_matignon.as_ref().map(|g| IdentitySection {
                holds: g.holds,
                mod_pi_relation: format!("y2^2 + y2 = y1 * ({})", g.mod_pi_rhs),
            }),
            depth_diagnostics: DepthSection {
                g2_depth: depth_str(&cert.g2_diagnostics, |d| d.depth_quarters),
                g2_depth_doubled_normalization: depth_str(&cert.g2_diagnostics, |d| {
                    d.depth_doubled_normalization
                }),
                g2_dsw: cert
                    .g2_diagnostics
                    .as_ref()
                    .and_then(|d| d.dsw.as_ref())
                    .map(|w| format!("{w}")),
                g2_dsw_is_expected: cert
                    .g2_diagnostics
                    .as_ref()
                    .is_some_and(|d| d.dsw_is_expected),
                g2_min_depth: depth_str(&cert.g2_min_diagnostics, |d| d.depth_quarters),
                g2_min_dsw: cert
                    .g2_min_diagnostics
                    .as_ref()
                    .and_then(|d| d.dsw.as_ref())
                    .map(|w| format!("{w}")),
                g2_min_dsw_is_expected: cert
                    .g2_min_diagnostics
                    .as_ref()
                    .is_some_and(|d| d.dsw_is_expected),
                note: "depth is reported under nu(2) = 1; doubling gives the \
                       normalization by a uniformizer of a ramification-2 base"
                    .into(),
            },
            good_reduction: cert.verdict,
            diagnostics: cert.diagnostics.clone(),
            oracle,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

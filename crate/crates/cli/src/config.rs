//! JSON configuration schema and its validation into live objects.
//!
//! Every referenced ring element is parsed and checked against its
//! valuation constraints up front, before any pipeline computation
//! starts; shape errors and unknown fields are configuration errors.

use serde::Deserialize;
use std::collections::BTreeMap;
use wittlift::dyadic::{
    make_ring, parse_dyadic_element, parse_dyadic_ratfunc, DyadicPoly, DyadicRationalFunction,
    RingConfig,
};
use wittlift::error::{Error, Result};
use wittlift::gf2x::{parse_gf, parse_ratfunc, RationalFunction, WittVector2};
use wittlift::lift::LiftProblem;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub ring: RingSpec,
    #[serde(default)]
    pub problem: Option<ProblemSpec>,
    #[serde(default)]
    pub options: Option<OptionsSpec>,
    #[serde(default)]
    pub swan: Option<SwanSpec>,
    #[serde(default)]
    pub breaks: Option<BreaksSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub d: u32,
    pub precision: i64,
}

#[derive(Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub m1: u64,
    /// Map from odd pole order to a ground-field element string.
    #[serde(default)]
    pub f2: BTreeMap<String, String>,
    /// Ring-element expressions; omitted means the default distinct
    /// uniformizer powers.
    #[serde(default)]
    pub v: Option<Vec<String>>,
    /// Unit polynomial expression with residue 1.
    #[serde(rename = "G", default)]
    pub g: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default)]
    pub oracle_checks: bool,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub grid: Option<Vec<ProblemSpec>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwanSpec {
    #[serde(rename = "F")]
    pub f: String,
    #[serde(default)]
    pub hint: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreaksSpec {
    pub f1: String,
    #[serde(default)]
    pub f2: Option<String>,
}

pub fn load(path: &std::path::Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad config: {e}")))
}

pub fn build_ring(spec: &RingSpec, precision_override: Option<i64>) -> Result<RingConfig> {
    make_ring(spec.d, precision_override.unwrap_or(spec.precision))
}

/// Validate a problem spec into a live problem; all element expressions
/// are parsed and constrained here.
pub fn build_problem(ring: &RingConfig, spec: &ProblemSpec) -> Result<LiftProblem> {
    let d = ring.residue_degree();
    let mut f2 = BTreeMap::new();
    for (key, value) in &spec.f2 {
        let j: u64 = key
            .parse()
            .map_err(|_| Error::Parse(format!("f2 key {key:?} is not a pole order")))?;
        f2.insert(j, parse_gf(d, value)?);
    }
    let g = match &spec.g {
        None => DyadicPoly::one(ring),
        Some(src) => {
            let f = parse_dyadic_ratfunc(ring, src)?;
            if f.denominator().degree() != Some(0) {
                return Err(Error::InvalidParameter(format!(
                    "G = {src:?} must be a polynomial"
                )));
            }
            let den = f.denominator().coeff(0);
            if den == ring.one() && den.is_exact() {
                f.numerator().clone()
            } else {
                f.numerator().mul_scalar(&den.invert_unit()?)
            }
        }
    };
    match &spec.v {
        None => {
            if spec.g.is_some() {
                let q1 = (spec.m1.max(1) - 1) / 2;
                let v = (0..q1).map(|i| ring.pi().pow(i + 1)).collect();
                LiftProblem::new(ring.clone(), spec.m1, f2, v, g)
            } else {
                LiftProblem::with_default_v(ring, spec.m1, f2)
            }
        }
        Some(exprs) => {
            let v = exprs
                .iter()
                .map(|src| parse_dyadic_element(ring, src))
                .collect::<Result<Vec<_>>>()?;
            LiftProblem::new(ring.clone(), spec.m1, f2, v, g)
        }
    }
}

pub struct SwanInput {
    pub f: DyadicRationalFunction,
    pub hint: Option<DyadicRationalFunction>,
}

pub fn build_swan(ring: &RingConfig, spec: &SwanSpec) -> Result<SwanInput> {
    let f = parse_dyadic_ratfunc(ring, &spec.f)?;
    let hint = spec
        .hint
        .as_ref()
        .map(|h| parse_dyadic_ratfunc(ring, h))
        .transpose()?;
    Ok(SwanInput { f, hint })
}

pub fn build_breaks(d: u32, spec: &BreaksSpec) -> Result<WittVector2> {
    let f1 = parse_ratfunc(d, &spec.f1)?;
    let f2 = match &spec.f2 {
        None => RationalFunction::zero(),
        Some(src) => parse_ratfunc(d, src)?,
    };
    Ok(WittVector2::new(f1, f2))
}

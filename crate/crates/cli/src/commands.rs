use std::path::Path;

use serde_json::{json, Value};
use voaplus_core::algebra::AlgebraDump;
use voaplus_core::autgroup::{aut_group, default_kind, distinguished_set, DistinguishedKind};
use voaplus_core::classify::{
    enumerate_idempotents, enumerate_virasoro, type0_family, IdempotentRecord, VirasoroOutcome,
};
use voaplus_core::lattice::GramFile;
use voaplus_core::rational::{format_q, parse_q, parse_q_list, ExactText};
use voaplus_core::spectra::ad_spectrum;
use voaplus_core::verify::{verify_all, verify_one};
use voaplus_core::{Algebra, Lattice2, Scalar};

use crate::error::CliError;

/// Either `{"gram": ...}` or the output of `build`.
pub enum Input {
    Gram(Lattice2),
    Dump(Box<AlgebraDump>),
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        let json_err = |e: serde_json::Error| CliError::Json { path: path.into(), message: e.to_string() };
        let value: Value = serde_json::from_str(&text).map_err(json_err)?;
        if value.get("mult_table").is_some() {
            Ok(Input::Dump(Box::new(serde_json::from_value(value).map_err(json_err)?)))
        } else {
            let g: GramFile = serde_json::from_value(value).map_err(json_err)?;
            Ok(Input::Gram(Lattice2::validate(g.gram)?))
        }
    }

    pub fn lattice(&self) -> Result<Lattice2, CliError> {
        match self {
            Input::Gram(l) => Ok(*l),
            Input::Dump(d) => Ok(Lattice2::validate(d.gram)?),
        }
    }

    pub fn algebra(&self) -> Result<Algebra, CliError> {
        match self {
            Input::Gram(l) => Ok(Algebra::build(l)?),
            Input::Dump(d) => Ok(Algebra::from_dump(d)?),
        }
    }
}

fn records<S: Scalar + ExactText>(rs: &[IdempotentRecord<S>]) -> Value {
    json!(rs.iter().map(|r| r.to_json()).collect::<Vec<_>>())
}

pub fn classify(input: &Input) -> Result<Value, CliError> {
    let class = input.lattice()?.classify();
    let mut v = serde_json::to_value(&class).expect("serializable");
    v["label"] = json!(class.label());
    v["b"] = json!(class.b());
    Ok(v)
}

pub fn build(input: &Input) -> Result<Value, CliError> {
    Ok(serde_json::to_value(input.algebra()?.dump()).expect("serializable"))
}

pub fn idempotents(input: &Input, kind: Option<u8>, norm: Option<&str>) -> Result<Value, CliError> {
    let alg = input.algebra()?;
    let norm = norm.map(parse_q).transpose()?;
    // without a norm the type-0 family is reported as a descriptor only
    let types: Vec<u8> = match (kind, &norm) {
        (Some(t), _) => vec![t],
        (None, Some(_)) => vec![0, 1, 2],
        (None, None) => vec![1, 2],
    };
    let en = enumerate_idempotents(&alg, &types, norm.as_ref())?;
    let family = match (&en.family, kind, &norm) {
        (Some(f), _, _) => Some(f.clone()),
        (None, None, None) => Some(type0_family(&alg)),
        _ => None,
    };
    Ok(json!({
        "gram": alg.lattice().gram(),
        "basis": alg.label_names(),
        "types": types,
        "norm": norm.as_ref().map(format_q),
        "complete": en.complete,
        "irrational_root_flags": en.irrational_root_flags,
        "rational": records(&en.records),
        "quadratic": records(&en.irrational),
        "type0_family": family.map(|f| json!({
            "norm": format_q(&f.norm),
            "description": f.description,
            "distinguished": records(&f.distinguished),
        })),
    }))
}

pub fn virasoro(input: &Input, central_charge: &str) -> Result<Value, CliError> {
    let alg = input.algebra()?;
    let c = parse_q(central_charge)?;
    let out = match enumerate_virasoro(&alg, &c)? {
        VirasoroOutcome::Finite { records, irrational, complete } => json!({
            "status": "finite",
            "complete": complete,
            "rational": records.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "quadratic": irrational.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }),
        VirasoroOutcome::PositiveDimensional { dimension, groebner_basis, variables, vanishing_v } => json!({
            "status": "positive_dimensional",
            "dimension": dimension,
            "variables": variables,
            "groebner_basis": groebner_basis.iter().map(|p| p.display(&variables)).collect::<Vec<_>>(),
            "vanishing_v": vanishing_v,
        }),
    };
    Ok(
        json!({ "gram": alg.lattice().gram(), "basis": alg.label_names(), "central_charge": format_q(&c), "result": out }),
    )
}

pub fn spectrum(input: &Input, element: &str) -> Result<Value, CliError> {
    let alg = input.algebra()?;
    let w = alg.element(parse_q_list(element)?)?;
    let mut v = serde_json::to_value(ad_spectrum(&alg, &w.coords).report()).expect("serializable");
    v["basis"] = json!(alg.label_names());
    Ok(v)
}

pub fn aut(input: &Input, kind: Option<DistinguishedKind>, product_only: bool) -> Result<Value, CliError> {
    let alg = input.algebra()?;
    let ds = distinguished_set(&alg, kind.unwrap_or_else(|| default_kind(&alg)))?;
    let g = aut_group(&alg, &ds, !product_only)?;
    let mut v = serde_json::to_value(g.report()).expect("serializable");
    v["gram"] = json!(alg.lattice().gram());
    v["basis"] = json!(alg.label_names());
    Ok(v)
}

/// The report and, separately, its one-line-per-check summary.
pub fn verify_paper(criterion: Option<u8>) -> Result<(Value, Vec<String>, bool), CliError> {
    let report = match criterion {
        Some(n) => {
            let c = verify_one(n).ok_or_else(|| CliError::Usage(format!("no criterion {n}; expected 1 to 9")))?;
            voaplus_core::verify::VerificationReport { passed: c.passed, checks: vec![c] }
        }
        None => verify_all(),
    };
    let lines = report.summary_lines();
    Ok((serde_json::to_value(&report).expect("serializable"), lines, report.passed))
}

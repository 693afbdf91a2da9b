//! Browser bindings. Every export takes plain strings and returns a JSON string,
//! so the same functions run natively under `cargo test`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use periodzero::ambient::{named_coordinates, Convention, DiffOp, Section, SectionJson};
use periodzero::coinvariant::{annihilates, apply_normal_form, p1_zero_locus, relation_predicate, SpecialPoint, ZeroLocus};
use periodzero::exactalg::GaussianRational;
use periodzero::invariants::{aronhold, convert_convention};
use periodzero::membership::{membership as rank_test, verify_witness, MembershipOptions};
use periodzero::{Error, Result};

fn point(m: usize, text: &str) -> Result<Section> {
    let t = text.trim();
    match t {
        "fermat" => return Ok(Section::fermat(m)),
        "lcsl" => return Ok(Section::lcsl(m)),
        _ => {}
    }
    if t.starts_with('{') {
        let j: SectionJson = serde_json::from_str(t)?;
        return Section::from_json(&j);
    }
    let body = t.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let vals = body.split(',').map(|x| x.trim().parse::<GaussianRational>()).collect::<Result<Vec<_>>>()?;
    let named = named_coordinates(m);
    if vals.len() != named.len() {
        return Err(Error::DimensionMismatch(format!("expected {} coordinates, got {}", named.len(), vals.len())));
    }
    Section::from_values(m, Convention::Monomial, &named, &vals)
}

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({"error": {"kind": e.kind(), "message": e.to_string()}}).to_string(),
    }
}

/// S, T and the discriminant of a plane cubic given by its ten numbered coordinates.
#[wasm_bindgen]
pub fn invariants(cubic: &str) -> String {
    respond((|| {
        let b = point(2, cubic)?;
        let v = aronhold(&convert_convention(&b, Convention::Salmon)?)?;
        Ok(json!({"S": v.s.to_string(), "T": v.t.to_string(), "Delta": v.delta.to_string(), "smooth": v.delta != GaussianRational::from_int(0)}))
    })())
}

/// Rank test on P¹ or P²; on P¹ the verdict is compared with the period formula.
#[wasm_bindgen]
pub fn membership(m: usize, at: &str, delta: &str) -> String {
    respond((|| {
        let b = point(m, at)?;
        let d = DiffOp::parse(m, delta)?;
        let cert = rank_test(&b, &d, &MembershipOptions::default())?;
        let verified = cert.witness.as_ref().map(|w| verify_witness(&b, &d, w)).transpose()?;
        let mut v = json!({
            "member": cert.member,
            "rank_m": cert.rank_m,
            "rank_aug": cert.rank_aug,
            "rows": cert.rows,
            "cols": cert.cols,
            "witness_verified": verified,
        });
        if m == 1 {
            let locus = match p1_zero_locus(&d)? {
                ZeroLocus::All => "all".to_string(),
                ZeroLocus::Empty => "empty".to_string(),
                ZeroLocus::Locus(q) => format!("{q} = 0"),
            };
            v["period_locus"] = json!(locus);
            v["period_agrees"] = json!(periodzero::coinvariant::p1_period_vanishes(&d, &b)? == cert.member);
        }
        Ok(v)
    })())
}

/// Normal form of `δ e^f` at a special point.
#[wasm_bindgen]
pub fn annihilate(at: &str, delta: &str) -> String {
    respond((|| {
        let pt: SpecialPoint = at.parse()?;
        let d = DiffOp::parse(pt.m(), delta)?;
        let nf = apply_normal_form(pt, &d)?;
        Ok(json!({
            "normal_form": nf.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "annihilates": annihilates(pt, &d)?,
            "relation": relation_predicate(pt, &d)?,
        }))
    })())
}

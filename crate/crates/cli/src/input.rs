//! Argument decoding. Every structured argument may be a path to a file or the text itself.

use std::collections::BTreeMap;
use std::path::Path;

use periodzero::ambient::{named_coordinates, DiffOp, DiffOpJson, Multidegree, Section, SectionJson};
use periodzero::exactalg::GaussianRational;
use periodzero::invariants::{FirstOrderJson, FirstOrderOp};
use periodzero::{Error, Result};

pub fn read_arg(s: &str) -> Result<String> {
    let p = Path::new(s);
    if s.len() < 4096 && p.is_file() {
        return std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{s}: {e}")));
    }
    Ok(s.to_string())
}

/// `p1`, `p2`, ... or a bare number.
pub fn space(s: &str) -> Result<usize> {
    let t = s.trim().trim_start_matches(['p', 'P']);
    match t.parse::<usize>() {
        Ok(m) if m >= 1 => Ok(m),
        _ => Err(Error::Parse(format!("unknown space {s:?}; expected p1, p2, ..."))),
    }
}

fn need_m(m: Option<usize>, what: &str) -> Result<usize> {
    m.ok_or_else(|| Error::Parse(format!("{what} needs --space")))
}

fn tuple(body: &str, m: usize) -> Result<Section> {
    let vals = body
        .split(',')
        .map(|x| x.trim().trim_matches('"').parse::<GaussianRational>())
        .collect::<Result<Vec<_>>>()?;
    let named = named_coordinates(m);
    if vals.len() != named.len() {
        return Err(Error::DimensionMismatch(format!("p{m} points have {} coordinates, got {}", named.len(), vals.len())));
    }
    Section::from_values(m, periodzero::ambient::Convention::Monomial, &named, &vals)
}

fn section_value(v: &serde_json::Value, m: Option<usize>) -> Result<Section> {
    match v {
        serde_json::Value::String(s) => section_text(s, m),
        serde_json::Value::Array(xs) => {
            let parts: Vec<String> = xs
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            tuple(&parts.join(","), need_m(m, "a coordinate tuple")?)
        }
        other => {
            let j: SectionJson = serde_json::from_value(other.clone())?;
            if let Some(m) = m {
                if j.m != m {
                    return Err(Error::WrongDimension { expected: m, found: j.m });
                }
            }
            Section::from_json(&j)
        }
    }
}

fn section_text(text: &str, m: Option<usize>) -> Result<Section> {
    let t = text.trim();
    match t.to_ascii_lowercase().as_str() {
        "fermat" => return Ok(Section::fermat(need_m(m, "fermat")?)),
        "lcsl" => return Ok(Section::lcsl(need_m(m, "lcsl")?)),
        _ => {}
    }
    if let Some(body) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return tuple(body, need_m(m, "a coordinate tuple")?);
    }
    let v: serde_json::Value = serde_json::from_str(t)?;
    section_value(&v, m)
}

/// Section JSON, `fermat`, `lcsl`, or a tuple `(a0,a1,...)` in the numbered coordinates.
pub fn section(arg: &str, m: Option<usize>) -> Result<Section> {
    section_text(&read_arg(arg)?, m)
}

/// A JSON array of sections, or one section per line.
pub fn sections(arg: &str, m: Option<usize>) -> Result<Vec<Section>> {
    let text = read_arg(arg)?;
    let t = text.trim();
    if t.starts_with('[') {
        if let Ok(serde_json::Value::Array(xs)) = serde_json::from_str::<serde_json::Value>(t) {
            return xs.iter().map(|x| section_value(x, m)).collect();
        }
    }
    t.lines().filter(|l| !l.trim().is_empty()).map(|l| section_text(l, m)).collect()
}

/// DiffOp JSON, or an expression such as `∂0^2 - d1*d2`.
pub fn diffop(arg: &str, m: Option<usize>) -> Result<DiffOp> {
    let text = read_arg(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        let j: DiffOpJson = serde_json::from_str(t)?;
        if let Some(m) = m {
            if j.m != m {
                return Err(Error::WrongDimension { expected: m, found: j.m });
            }
        }
        return DiffOp::from_json(&j);
    }
    DiffOp::parse(need_m(m, "an operator expression")?, t)
}

/// `{"lambda":{"111":"2"}}`, `300:1,030:1,003:1`, or `e111`.
pub fn first_order(arg: &str) -> Result<FirstOrderOp> {
    let text = read_arg(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        let j: FirstOrderJson = serde_json::from_str(t)?;
        return FirstOrderOp::from_json(&j);
    }
    let mut lam = BTreeMap::new();
    for part in t.split([',', '+']).map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = match part.split_once(':') {
            Some((k, v)) => (k.trim(), v.parse::<GaussianRational>()?),
            None => (part.trim_start_matches('e'), GaussianRational::from_int(1)),
        };
        let md = Multidegree::parse(key, 3)?;
        if md.total() != 3 {
            return Err(Error::InvalidExponent(key.to_string()));
        }
        let prev = lam.remove(&md).unwrap_or_else(|| GaussianRational::from_int(0));
        lam.insert(md, prev + val);
    }
    FirstOrderOp::new(lam)
}

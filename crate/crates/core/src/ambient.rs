//! The ambient space `X = P^m`.
//!
//! `R` is modelled inside `Q(i)[x0..xm]` as the span of monomials whose degree
//! is a multiple of `m+1`; an element of `R_k` has x-degree `(m+1)k`. Sections
//! of the anticanonical bundle are degree `m+1` forms, and a constant
//! coefficient operator `p(∂)` is carried by its symbol (a polynomial in the
//! section coordinates) together with its Fourier image in `R`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{vars_from, GaussianRational, Monomial, Poly, Vars};
use crate::invariants;

/// Exponent vector of a monomial in `x0..xm`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Digit-string key ("210"); comma separated once an exponent exceeds 9.
    pub fn key(&self) -> String {
        if self.0.iter().all(|&e| e < 10) {
            self.0.iter().map(|e| e.to_string()).collect()
        } else {
            self.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse(s: &str, len: usize) -> Result<Self> {
        let exps: Option<Vec<u32>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10)).collect()
        };
        match exps {
            Some(v) if v.len() == len => Ok(Multidegree(v)),
            _ => Err(Error::InvalidExponent(format!("`{s}` is not an exponent key of length {len}"))),
        }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial(self.0.clone())
    }
}

impl Ord for Multidegree {
    fn cmp(&self, o: &Self) -> Ordering {
        self.monomial().cmp(&o.monomial())
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Monomials of total degree `(m+1)k` in `m+1` variables, `x0`-heavy first.
/// This is the basis of `R_k`.
pub fn section_basis(m: usize, k: usize) -> Vec<Multidegree> {
    fn rec(left: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Multidegree>) {
        if slots == 1 {
            prefix.push(left);
            out.push(Multidegree(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(left - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(((m + 1) * k) as u32, m + 1, &mut Vec::new(), &mut out);
    out
}

/// Basis of `R_{<=d}`: `R_0`, then `R_1`, ... up to `R_d`.
pub fn r_basis_upto(m: usize, d: usize) -> Vec<Multidegree> {
    (0..=d).flat_map(|k| section_basis(m, k)).collect()
}

pub fn x_vars(m: usize) -> Vars {
    vars_from(&(0..=m).map(|i| format!("x{i}")).collect::<Vec<_>>())
}

/// Coordinate names `a<key>` on the section space, in [`section_basis`]`(m, 1)` order.
pub fn a_vars(m: usize) -> Vars {
    vars_from(&section_basis(m, 1).iter().map(|md| format!("a{}", md.key())).collect::<Vec<_>>())
}

/// Customary numbered coordinates `a0, a1, ...` on the section space.
///
/// For `P^1`: `f = a0 x0x1 + a1 x0^2 + a2 x1^2`. For `P^2`:
/// `f = a0 x0x1x2 + a1 x0^3 + a2 x0^2x1 + a3 x0x1^2 + a4 x1^3 + a5 x1^2x2
///  + a6 x1x2^2 + a7 x2^3 + a8 x0x2^2 + a9 x0^2x2`.
/// Other dimensions fall back to [`section_basis`] order.
pub fn named_coordinates(m: usize) -> Vec<Multidegree> {
    let keys: &[&str] = match m {
        1 => &["11", "20", "02"],
        2 => &["111", "300", "210", "120", "030", "021", "012", "003", "102", "201"],
        _ => return section_basis(m, 1),
    };
    keys.iter().map(|k| Multidegree::parse(k, m + 1).expect("static key")).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `f = Σ c_I x^I`.
    Monomial,
    /// `f = Σ (3!/(i!j!k!)) a_I x^I`, the classical convention for ternary cubics.
    Salmon,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Monomial => "monomial",
            Convention::Salmon => "salmon",
        })
    }
}

/// A point `b` of the section space, missing keys meaning zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section {
    m: usize,
    convention: Convention,
    coeffs: BTreeMap<Multidegree, GaussianRational>,
}

impl Section {
    pub fn zero(m: usize, convention: Convention) -> Self {
        Section { m, convention, coeffs: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn set(&mut self, md: Multidegree, c: GaussianRational) -> Result<()> {
        if md.0.len() != self.m + 1 || md.total() as usize != self.m + 1 {
            return Err(Error::InvalidExponent(format!("{md} is not a degree-{} exponent", self.m + 1)));
        }
        if c.is_zero() {
            self.coeffs.remove(&md);
        } else {
            self.coeffs.insert(md, c);
        }
        Ok(())
    }

    pub fn with(mut self, key: &str, c: GaussianRational) -> Result<Self> {
        let md = Multidegree::parse(key, self.m + 1)?;
        self.set(md, c)?;
        Ok(self)
    }

    pub fn coeff(&self, md: &Multidegree) -> GaussianRational {
        self.coeffs.get(md).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Multidegree, &GaussianRational)> {
        self.coeffs.iter()
    }

    /// Builds a section from values listed in `order`.
    pub fn from_values(m: usize, convention: Convention, order: &[Multidegree], values: &[GaussianRational]) -> Result<Self> {
        if order.len() != values.len() {
            return Err(Error::DimensionMismatch(format!("{} values for {} coordinates", values.len(), order.len())));
        }
        let mut s = Section::zero(m, convention);
        for (md, v) in order.iter().zip(values) {
            s.set(md.clone(), v.clone())?;
        }
        Ok(s)
    }

    /// Values in [`section_basis`]`(m, 1)` order.
    pub fn values(&self) -> Vec<GaussianRational> {
        section_basis(self.m, 1).iter().map(|md| self.coeff(md)).collect()
    }

    /// `P^1` section from `(a0, a1, a2)` with `f = a0 x0x1 + a1 x0^2 + a2 x1^2`.
    pub fn p1(a0: GaussianRational, a1: GaussianRational, a2: GaussianRational) -> Self {
        Section::from_values(1, Convention::Monomial, &named_coordinates(1), &[a0, a1, a2]).expect("three coordinates")
    }

    pub fn fermat(m: usize) -> Self {
        let mut s = Section::zero(m, Convention::Monomial);
        for i in 0..=m {
            let mut e = vec![0; m + 1];
            e[i] = (m + 1) as u32;
            s.set(Multidegree(e), GaussianRational::one()).expect("valid exponent");
        }
        s
    }

    /// The large complex structure limit `x0 x1 ... xm`.
    pub fn lcsl(m: usize) -> Self {
        let mut s = Section::zero(m, Convention::Monomial);
        s.set(Multidegree(vec![1; m + 1]), GaussianRational::one()).expect("valid exponent");
        s
    }

    pub fn scaled(&self, c: &GaussianRational) -> Self {
        let mut s = Section::zero(self.m, self.convention);
        for (md, v) in &self.coeffs {
            s.set(md.clone(), v.clone() * c).expect("same exponents");
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn require_monomial(&self) -> Result<()> {
        match self.convention {
            Convention::Monomial => Ok(()),
            c => Err(Error::ConventionMismatch { expected: "monomial".into(), found: c.to_string() }),
        }
    }

    /// Converts to the monomial convention when possible.
    pub fn to_monomial(&self) -> Result<Section> {
        match self.convention {
            Convention::Monomial => Ok(self.clone()),
            Convention::Salmon => invariants::convert_convention(self, Convention::Monomial),
        }
    }

    pub fn to_json(&self) -> SectionJson {
        SectionJson {
            m: self.m,
            convention: self.convention,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.key(), v.clone())).collect(),
        }
    }

    pub fn from_json(j: &SectionJson) -> Result<Self> {
        let mut s = Section::zero(j.m, j.convention);
        for (k, v) in &j.coeffs {
            s.set(Multidegree::parse(k, j.m + 1)?, v.clone())?;
        }
        Ok(s)
    }
}

/// `{"m":2,"convention":"monomial","coeffs":{"300":"1","030":"1","003":"1"}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionJson {
    pub m: usize,
    #[serde(default = "default_convention")]
    pub convention: Convention,
    pub coeffs: BTreeMap<String, GaussianRational>,
}

fn default_convention() -> Convention {
    Convention::Monomial
}

/// `f(b) = Σ b_I x^I` as an element of `R_1`.
pub fn universal_section_at(b: &Section) -> Result<Poly> {
    b.require_monomial()?;
    let vars = x_vars(b.m);
    Ok(Poly::from_terms(&vars, b.coeffs.iter().map(|(md, c)| (md.monomial(), c.clone()))))
}

/// A constant coefficient operator `Σ c_α ∂^α` on the section space.
///
/// `symbol` is the polynomial `Σ c_α a^α` in the monomial-convention
/// coordinates [`a_vars`]; `fourier` is its image under `∂_I ↦ x^I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    m: usize,
    symbol: Poly,
    fourier: Poly,
}

impl DiffOp {
    pub fn from_symbol(m: usize, symbol: Poly) -> Result<Self> {
        if symbol.vars() != &a_vars(m) {
            return Err(Error::VariableMismatch { left: a_vars(m).to_vec(), right: symbol.vars().to_vec() });
        }
        let xv = x_vars(m);
        let images: Vec<Poly> =
            section_basis(m, 1).iter().map(|md| Poly::monomial(&xv, md.monomial(), GaussianRational::one())).collect();
        let fourier = symbol.compose(&images)?;
        Ok(DiffOp { m, symbol, fourier })
    }

    /// `Σ_I λ_I ∂_I` with `λ` keyed by exponent.
    pub fn first_order(m: usize, lambda: &BTreeMap<Multidegree, GaussianRational>) -> Result<Self> {
        let av = a_vars(m);
        let basis = section_basis(m, 1);
        let mut sym = Poly::zero(&av);
        for (md, c) in lambda {
            let idx = basis.iter().position(|b| b == md).ok_or_else(|| Error::InvalidExponent(md.key()))?;
            sym = &sym + &Poly::var(&av, idx).scale(c);
        }
        Self::from_symbol(m, sym)
    }

    /// Parses operator text such as `∂0^2 - ∂1∂2`, `2*d[300] - (1+i) d[030]`
    /// or `1`. Bare indices refer to [`named_coordinates`]; bracketed keys
    /// name an exponent directly. `d` is accepted for `∂`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        Self::from_symbol(m, parse_symbol(m, text)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn symbol(&self) -> &Poly {
        &self.symbol
    }

    pub fn fourier(&self) -> &Poly {
        &self.fourier
    }

    /// Order of the operator; 0 for constants and for the zero operator.
    pub fn degree(&self) -> usize {
        self.symbol.total_degree().unwrap_or(0) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.symbol.is_homogeneous()
    }

    /// Terms `(α, c_α)` with `α` listed in [`section_basis`]`(m, 1)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.symbol.terms()
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp> {
        if self.m != o.m {
            return Err(Error::WrongDimension { expected: self.m, found: o.m });
        }
        Self::from_symbol(self.m, self.symbol.checked_add(&o.symbol)?)
    }

    pub fn scale(&self, c: &GaussianRational) -> DiffOp {
        DiffOp { m: self.m, symbol: self.symbol.scale(c), fourier: self.fourier.scale(c) }
    }

    pub fn to_json(&self) -> DiffOpJson {
        let basis = section_basis(self.m, 1);
        DiffOpJson {
            m: self.m,
            terms: self
                .symbol
                .terms()
                .map(|(mono, c)| DiffOpTermJson {
                    c: c.clone(),
                    alpha: mono
                        .0
                        .iter()
                        .zip(&basis)
                        .filter(|(e, _)| **e > 0)
                        .map(|(e, md)| (md.key(), *e))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &DiffOpJson) -> Result<Self> {
        let av = a_vars(j.m);
        let basis = section_basis(j.m, 1);
        let mut sym = Poly::zero(&av);
        for t in &j.terms {
            let mut exps = vec![0u32; basis.len()];
            for (k, e) in &t.alpha {
                let md = Multidegree::parse(k, j.m + 1)?;
                let idx = basis.iter().position(|b| *b == md).ok_or_else(|| Error::InvalidExponent(k.clone()))?;
                exps[idx] += e;
            }
            sym.add_term(Monomial(exps), t.c.clone());
        }
        Self::from_symbol(j.m, sym)
    }
}

/// `{"m":1,"terms":[{"c":"1","alpha":{"11":2}},{"c":"-1","alpha":{"20":1,"02":1}}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffOpJson {
    pub m: usize,
    pub terms: Vec<DiffOpTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffOpTermJson {
    pub c: GaussianRational,
    #[serde(default)]
    pub alpha: BTreeMap<String, u32>,
}

fn parse_symbol(m: usize, text: &str) -> Result<Poly> {
    let av = a_vars(m);
    let basis = section_basis(m, 1);
    let named = named_coordinates(m);
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |msg: &str| Error::Parse(format!("operator `{text}`: {msg}"));
    let mut pos = 0;
    let mut out = Poly::zero(&av);
    if chars.is_empty() {
        return Err(err("empty"));
    }
    while pos < chars.len() {
        let mut sign = GaussianRational::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if pos > 0 {
            return Err(err("expected + or -"));
        }
        // coefficient
        let mut coeff = GaussianRational::one();
        let mut saw_coeff = false;
        if pos < chars.len() && chars[pos] == '(' {
            let end = chars[pos..].iter().position(|&c| c == ')').ok_or_else(|| err("unclosed ("))? + pos;
            let s: String = chars[pos + 1..end].iter().collect();
            coeff = GaussianRational::from_str(&s)?;
            pos = end + 1;
            saw_coeff = true;
        } else {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                pos += 1;
            }
            if pos < chars.len() && chars[pos] == 'i' {
                pos += 1;
            }
            if pos > start {
                let s: String = chars[start..pos].iter().collect();
                coeff = GaussianRational::from_str(&s)?;
                saw_coeff = true;
            }
        }
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
        }
        let mut exps = vec![0u32; basis.len()];
        let mut saw_factor = false;
        while pos < chars.len() && (chars[pos] == '∂' || chars[pos] == 'd') {
            pos += 1;
            let md = if pos < chars.len() && chars[pos] == '[' {
                let end = chars[pos..].iter().position(|&c| c == ']').ok_or_else(|| err("unclosed ["))? + pos;
                let key: String = chars[pos + 1..end].iter().collect();
                pos = end + 1;
                Multidegree::parse(&key, m + 1)?
            } else {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let idx: usize = chars[start..pos].iter().collect::<String>().parse().map_err(|_| err("missing index"))?;
                named.get(idx).cloned().ok_or_else(|| err("coordinate index out of range"))?
            };
            let mut power = 1u32;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                power = chars[start..pos].iter().collect::<String>().parse().map_err(|_| err("bad power"))?;
            }
            let idx = basis.iter().position(|b| *b == md).ok_or_else(|| err("unknown coordinate"))?;
            exps[idx] += power;
            saw_factor = true;
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
            }
        }
        if !saw_coeff && !saw_factor {
            return Err(err(&format!("unexpected character at position {pos}")));
        }
        out.add_term(Monomial(exps), sign * coeff);
    }
    Ok(out)
}

/// A basis element of `ĝ = sl(m+1) ⊕ C·e`, acting on `R·e^{f(b)}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum LieGenerator {
    /// `x_i ∂_{x_i} - x_{i+1} ∂_{x_{i+1}}`.
    SlDiag(usize),
    /// `x_u ∂_{x_v}` with `u != v`.
    OffDiag(usize, usize),
    /// `E + 1` with `E = (1/(m+1)) Σ x_i ∂_{x_i}`.
    EulerShift,
}

impl fmt::Display for LieGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieGenerator::SlDiag(i) => write!(f, "x{i}d{i}-x{}d{}", i + 1, i + 1),
            LieGenerator::OffDiag(u, v) => write!(f, "x{u}d{v}"),
            LieGenerator::EulerShift => f.write_str("E+1"),
        }
    }
}

/// Fixed generator order: sl-diagonals, off-diagonals by `(u, v)`, then `E+1`.
/// For `m = 1` this is `h, x, y, E+1`.
pub fn lie_generators(m: usize) -> Vec<LieGenerator> {
    let mut g: Vec<LieGenerator> = (0..m).map(LieGenerator::SlDiag).collect();
    for u in 0..=m {
        for v in 0..=m {
            if u != v {
                g.push(LieGenerator::OffDiag(u, v));
            }
        }
    }
    g.push(LieGenerator::EulerShift);
    g
}

fn x_times_dx(p: &Poly, u: usize, v: usize) -> Poly {
    let xv = p.vars().clone();
    &Poly::var(&xv, u) * &p.diff(v)
}

/// Checks that every term of `r` has x-degree divisible by `m+1`.
pub fn check_in_r(r: &Poly, m: usize) -> Result<()> {
    for (mono, _) in r.terms() {
        if mono.degree() as usize % (m + 1) != 0 {
            return Err(Error::NotInR(r.format_monomial(mono)));
        }
    }
    Ok(())
}

/// Euler operator `E = (1/(m+1)) Σ x_i ∂_{x_i}`, i.e. multiplication by the
/// `R`-degree on each term.
pub fn euler(r: &Poly, m: usize) -> Result<Poly> {
    check_in_r(r, m)?;
    let mut out = Poly::zero(r.vars());
    for (mono, c) in r.terms() {
        let k = mono.degree() as i64 / (m as i64 + 1);
        out.add_term(mono.clone(), c.clone() * GaussianRational::from_int(k));
    }
    Ok(out)
}

/// The first-order part of a generator acting on a polynomial (no twist).
pub fn vector_field(g: LieGenerator, p: &Poly, m: usize) -> Result<Poly> {
    Ok(match g {
        LieGenerator::SlDiag(i) => &x_times_dx(p, i, i) - &x_times_dx(p, i + 1, i + 1),
        LieGenerator::OffDiag(u, v) => x_times_dx(p, u, v),
        LieGenerator::EulerShift => euler(p, m)?,
    })
}

/// `g(r·e^{f}) / e^{f}`, i.e. `g(r) + r·g(f)`, plus `r` for the Euler twist.
pub fn apply_generator(g: LieGenerator, r: &Poly, f: &Poly, m: usize) -> Result<Poly> {
    check_in_r(r, m)?;
    let mut out = &vector_field(g, r, m)? + &(r * &vector_field(g, f, m)?);
    if g == LieGenerator::EulerShift {
        out = &out + r;
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Smooth,
    Singular,
    Unknown,
}

/// Decides smoothness of `f(b) = 0` for `m = 1, 2` via the discriminant.
pub fn smoothness(b: &Section) -> Result<Smoothness> {
    let disc = match b.m {
        1 => invariants::p1_discriminant(&b.to_monomial()?)?,
        2 => invariants::cubic_discriminant(b)?,
        _ => return Ok(Smoothness::Unknown),
    };
    Ok(if disc.is_zero() { Smoothness::Singular } else { Smoothness::Smooth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn section_basis_examples() {
        let keys: Vec<String> = section_basis(1, 1).iter().map(Multidegree::key).collect();
        assert_eq!(keys, ["20", "11", "02"]);
        assert_eq!(section_basis(2, 1).len(), 10);
        assert_eq!(section_basis(2, 2).len(), 28);
        for m in 1..5 {
            for k in 0..4 {
                assert_eq!(section_basis(m, k).len(), binom((m + 1) * k + m, m));
            }
        }
    }

    #[test]
    fn universal_section_examples() {
        let b = Section::p1(q(0), q(1), q(1));
        let f = universal_section_at(&b).unwrap();
        let xv = x_vars(1);
        assert_eq!(f, &Poly::var(&xv, 0).pow(2) + &Poly::var(&xv, 1).pow(2));
        let f = universal_section_at(&Section::fermat(2)).unwrap();
        let xv = x_vars(2);
        let cubes = (0..3).fold(Poly::zero(&xv), |acc, i| &acc + &Poly::var(&xv, i).pow(3));
        assert_eq!(f, cubes);
        assert!(universal_section_at(&Section::zero(2, Convention::Monomial)).unwrap().is_zero());
        let sal = Section::zero(2, Convention::Salmon);
        assert!(matches!(universal_section_at(&sal), Err(Error::ConventionMismatch { .. })));
    }

    #[test]
    fn generator_counts() {
        assert_eq!(lie_generators(1).len(), 4);
        assert_eq!(lie_generators(2).len(), 9);
        for m in 1..6 {
            assert_eq!(lie_generators(m).len(), (m + 1) * (m + 1));
        }
        let names: Vec<String> = lie_generators(1).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["x0d0-x1d1", "x0d1", "x1d0", "E+1"]);
    }

    #[test]
    fn apply_generator_examples() {
        let b = Section::p1(q(0), q(1), q(1));
        let f = universal_section_at(&b).unwrap();
        let one = Poly::one(&x_vars(1));
        let r = apply_generator(LieGenerator::OffDiag(0, 1), &one, &f, 1).unwrap();
        assert_eq!(r.to_string(), "(2)*x0*x1");
        let r = apply_generator(LieGenerator::EulerShift, &one, &f, 1).unwrap();
        assert_eq!(r, &f + &one);
        let zero_f = Poly::zero(&x_vars(1));
        for g in lie_generators(1).into_iter().filter(|g| *g != LieGenerator::EulerShift) {
            assert!(apply_generator(g, &one, &zero_f, 1).unwrap().is_zero());
        }
        let x0 = Poly::var(&x_vars(1), 0);
        assert!(matches!(apply_generator(LieGenerator::EulerShift, &x0, &f, 1), Err(Error::NotInR(_))));
    }

    #[test]
    fn generators_on_one_span_the_jacobian_style_ideal() {
        // g(1·e^f)/e^f for sl generators is x_u ∂_v f (or its diagonal differences)
        let f = universal_section_at(&Section::fermat(2)).unwrap();
        let one = Poly::one(&x_vars(2));
        for g in lie_generators(2) {
            let got = apply_generator(g, &one, &f, 2).unwrap();
            let expect = match g {
                LieGenerator::OffDiag(u, v) => &Poly::var(&x_vars(2), u) * &f.diff(v),
                LieGenerator::SlDiag(i) => {
                    &(&Poly::var(&x_vars(2), i) * &f.diff(i)) - &(&Poly::var(&x_vars(2), i + 1) * &f.diff(i + 1))
                }
                LieGenerator::EulerShift => &f + &one,
            };
            assert_eq!(got, expect, "{g}");
        }
    }

    #[test]
    fn leibniz_for_off_diagonal() {
        let b = Section::fermat(2).with("111", q(3)).unwrap().with("210", q(-2)).unwrap();
        let f = universal_section_at(&b).unwrap();
        let xv = x_vars(2);
        let r1 = &Poly::monomial(&xv, Monomial(vec![1, 1, 1]), q(2)) + &Poly::one(&xv);
        let r2 = Poly::monomial(&xv, Monomial(vec![0, 3, 0]), q(5));
        for g in lie_generators(2).into_iter().filter(|g| *g != LieGenerator::EulerShift) {
            let direct = apply_generator(g, &(&r1 * &r2), &f, 2).unwrap();
            let gf = vector_field(g, &f, 2).unwrap();
            let split = &(&(&r1 * &vector_field(g, &r2, 2).unwrap()) + &(&r2 * &vector_field(g, &r1, 2).unwrap()))
                + &(&(&r1 * &r2) * &gf);
            assert_eq!(direct, split);
        }
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(smoothness(&Section::p1(q(0), q(1), q(1))).unwrap(), Smoothness::Smooth);
        assert_eq!(smoothness(&Section::p1(q(2), q(1), q(1))).unwrap(), Smoothness::Singular);
        let xyz = Section::lcsl(2);
        assert_eq!(smoothness(&xyz).unwrap(), Smoothness::Singular);
        assert_eq!(smoothness(&Section::fermat(2)).unwrap(), Smoothness::Smooth);
        assert_eq!(smoothness(&Section::fermat(3)).unwrap(), Smoothness::Unknown);
    }

    #[test]
    fn operator_parsing() {
        let d = DiffOp::parse(1, "∂0^2 - ∂1∂2").unwrap();
        assert_eq!(d.degree(), 2);
        // ∂0 ↦ x0x1, ∂1 ↦ x0^2, ∂2 ↦ x1^2
        assert!(d.fourier().is_zero());
        let d = DiffOp::parse(1, "d1").unwrap();
        assert_eq!(d.fourier().to_string(), "x0^2");
        let d = DiffOp::parse(2, "2*d[300] - (1+i) d[030]").unwrap();
        assert_eq!(d.fourier().coeff_of(&[0, 3, 0]), "-1-i".parse().unwrap());
        let d = DiffOp::parse(1, "1").unwrap();
        assert_eq!(d.degree(), 0);
        assert!(DiffOp::parse(1, "∂7").is_err());
        assert!(DiffOp::parse(1, "∂0 ∂").is_err());
        assert!(DiffOp::parse(1, "").is_err());
    }

    #[test]
    fn section_json_round_trip() {
        let j = r#"{"m":2,"convention":"monomial","coeffs":{"300":"1","030":"1","003":"1"}}"#;
        let s = Section::from_json(&serde_json::from_str(j).unwrap()).unwrap();
        assert_eq!(s, Section::fermat(2));
        let back = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(Section::from_json(&serde_json::from_str(&back).unwrap()).unwrap(), s);
        let bad = r#"{"m":2,"coeffs":{"200":"1"}}"#;
        assert!(Section::from_json(&serde_json::from_str(bad).unwrap()).is_err());
    }

    #[test]
    fn diffop_json_round_trip() {
        let d = DiffOp::parse(2, "d0^2 - 3/2 d2 d6 + d4").unwrap();
        let j = serde_json::to_string(&d.to_json()).unwrap();
        assert_eq!(DiffOp::from_json(&serde_json::from_str(&j).unwrap()).unwrap(), d);
    }
}

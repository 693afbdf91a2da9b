//! Aronhold invariants of the ternary cubic and the arithmetic facts built on them.
//!
//! `S` and `T` are stored as term tables in the classical (Salmon) coordinates
//! `a_ijk`, where the cubic reads `Σ (3!/(i!j!k!)) a_ijk x^i y^j z^k`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ambient::{a_vars, section_basis, x_vars, Convention, DiffOp, Multidegree, Section};
use crate::error::{Error, Result};
use crate::exactalg::{gint_gcd, lift_f2, val_one_plus_i, GaussianInt, GaussianRational, Monomial, MultiPoly, Poly, F2, Z4};

const S_TABLE: &str = include_str!("aronhold_s.txt");
const T_TABLE: &str = include_str!("aronhold_t.txt");

/// The six odd-coefficient terms of `T`, written out independently of the table.
const T0_TABLE: &str = "+1 300^2 030^2 003^2
-3 300^2 021^2 012^2
-3 030^2 201^2 102^2
-3 003^2 210^2 120^2
-27 201^2 120^2 012^2
-27 210^2 102^2 021^2";

const H_TABLE: &str = "+1 300 030 003
+1 300 021 012
+1 030 201 102
+1 003 210 120
+1 201 120 012
+1 210 102 021";

/// Parses lines like `-12 003 012^2 111` into a polynomial in [`a_vars`]`(2)`.
pub fn parse_term_table(text: &str) -> Result<Poly> {
    let vars = a_vars(2);
    let basis = section_basis(2, 1);
    let mut p = Poly::zero(&vars);
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let mut toks = line.split_whitespace();
        let c: i64 = toks
            .next()
            .and_then(|t| t.trim_start_matches('+').parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad coefficient in `{line}`")))?;
        let mut exps = vec![0u32; basis.len()];
        for tok in toks {
            let (key, pow) = match tok.split_once('^') {
                Some((k, e)) => (k, e.parse().map_err(|_| Error::Parse(format!("bad power in `{line}`")))?),
                None => (tok, 1),
            };
            let md = Multidegree::parse(key, 3)?;
            let idx = basis.iter().position(|b| *b == md).ok_or_else(|| Error::InvalidExponent(key.into()))?;
            exps[idx] += pow;
        }
        let m = Monomial(exps);
        if !p.coeff(&m).is_zero() {
            return Err(Error::Parse(format!("repeated monomial in `{line}`")));
        }
        p.add_term(m, GaussianRational::from_int(c));
    }
    Ok(p)
}

pub struct TernaryCubicInvariants {
    pub s: Poly,
    pub t: Poly,
    pub delta: Poly,
    pub h: MultiPoly<F2>,
    pub t0: Poly,
}

/// The invariant polynomials, built once.
pub fn cubic_invariants() -> &'static TernaryCubicInvariants {
    static CELL: OnceLock<TernaryCubicInvariants> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = parse_term_table(S_TABLE).expect("S table");
        let t = parse_term_table(T_TABLE).expect("T table");
        let delta = &s.pow(3).scale(&GaussianRational::from_int(64)) - &t.pow(2);
        let h = parse_term_table(H_TABLE).expect("H table").reduce_mod_two().expect("integral");
        let t0 = parse_term_table(T0_TABLE).expect("T0 table");
        TernaryCubicInvariants { s, t, delta, h, t0 }
    })
}

/// `3!/(i!j!k!)`.
pub fn multinomial(md: &Multidegree) -> i64 {
    let fact = |n: u32| (1..=n as i64).product::<i64>();
    fact(md.total()) / md.0.iter().map(|&e| fact(e)).product::<i64>()
}

/// Rescales between the monomial and Salmon conventions (`c_I = m_I a_I`).
pub fn convert_convention(b: &Section, to: Convention) -> Result<Section> {
    if b.m() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: b.m() });
    }
    if b.convention() == to {
        return Ok(b.clone());
    }
    let mut out = Section::zero(2, to);
    for (md, c) in b.coeffs() {
        let f = GaussianRational::from_int(multinomial(md));
        let v = match to {
            Convention::Salmon => c.checked_div(&f)?,
            Convention::Monomial => c.clone() * &f,
        };
        out.set(md.clone(), v)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AronholdValues {
    #[serde(rename = "S")]
    pub s: GaussianRational,
    #[serde(rename = "T")]
    pub t: GaussianRational,
    #[serde(rename = "Delta")]
    pub delta: GaussianRational,
}

/// Values at a Salmon-coordinate point, in [`section_basis`]`(2, 1)` order.
fn salmon_point(b: &Section) -> Result<Vec<GaussianRational>> {
    if b.m() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: b.m() });
    }
    if b.convention() != Convention::Salmon {
        return Err(Error::ConventionMismatch { expected: "salmon".into(), found: b.convention().to_string() });
    }
    Ok(b.values())
}

/// `S(b)`, `T(b)` and `Δ(b) = 64 S³ - T²`; the input must be in Salmon coordinates.
pub fn aronhold(b: &Section) -> Result<AronholdValues> {
    let pt = salmon_point(b)?;
    let inv = cubic_invariants();
    let s = inv.s.eval(&pt)?;
    let t = inv.t.eval(&pt)?;
    let delta = s.pow(3) * GaussianRational::from_int(64) - t.pow(2);
    Ok(AronholdValues { s, t, delta })
}

/// Discriminant of a plane cubic section in either convention.
pub fn cubic_discriminant(b: &Section) -> Result<GaussianRational> {
    Ok(aronhold(&convert_convention(b, Convention::Salmon)?)?.delta)
}

/// `a0² - 4 a1 a2` for `f = a0 x0x1 + a1 x0² + a2 x1²`.
pub fn p1_discriminant(b: &Section) -> Result<GaussianRational> {
    if b.m() != 1 {
        return Err(Error::WrongDimension { expected: 1, found: b.m() });
    }
    b.require_monomial()?;
    let g = |k: &str| b.coeff(&Multidegree::parse(k, 2).expect("static key"));
    Ok(g("11").pow(2) - GaussianRational::from_int(4) * g("20") * g("02"))
}

/// `δ = Σ_I λ_I ∂/∂a_I` on plane cubics, in Salmon coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderOp {
    lambda: BTreeMap<Multidegree, GaussianRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstOrderJson {
    pub lambda: BTreeMap<String, GaussianRational>,
}

impl FirstOrderOp {
    pub fn new(lambda: BTreeMap<Multidegree, GaussianRational>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (md, c) in lambda {
            if md.0.len() != 3 || md.total() != 3 {
                return Err(Error::InvalidExponent(md.key()));
            }
            if !c.is_zero() {
                clean.insert(md, c);
            }
        }
        if clean.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Ok(FirstOrderOp { lambda: clean })
    }

    /// From `(key, value)` pairs such as `[("300", 1), ("111", 2)]`.
    pub fn from_pairs(pairs: &[(&str, GaussianRational)]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (k, v) in pairs {
            let md = Multidegree::parse(k, 3)?;
            let e = m.entry(md).or_insert_with(GaussianRational::zero);
            *e = e.clone() + v;
        }
        Self::new(m)
    }

    pub fn unit(key: &str) -> Self {
        Self::from_pairs(&[(key, GaussianRational::one())]).expect("valid key")
    }

    pub fn get(&self, key: &str) -> GaussianRational {
        Multidegree::parse(key, 3).map(|md| self.coeff(&md)).unwrap_or_default()
    }

    pub fn coeff(&self, md: &Multidegree) -> GaussianRational {
        self.lambda.get(md).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Multidegree, &GaussianRational)> {
        self.lambda.iter()
    }

    pub fn scale(&self, c: &GaussianRational) -> Result<Self> {
        Self::new(self.lambda.iter().map(|(k, v)| (k.clone(), v.clone() * c)).collect())
    }

    /// The Gaussian-integer entries, or an error when some entry is not integral.
    pub fn integral_entries(&self) -> Result<BTreeMap<Multidegree, GaussianInt>> {
        self.lambda
            .iter()
            .map(|(k, v)| v.to_gaussian_int().map(|z| (k.clone(), z)).ok_or_else(|| Error::NonIntegral(v.to_string())))
            .collect()
    }

    /// Applies `δ` to a polynomial in [`a_vars`]`(2)`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let mut out = Poly::zero(p.vars());
        for (md, c) in &self.lambda {
            let d = p.diff_by_name(&format!("a{}", md.key()))?;
            out = out.checked_add(&d.scale(c))?;
        }
        Ok(out)
    }

    /// The same operator in monomial coordinates: `∂/∂a_I = m_I ∂/∂c_I`.
    pub fn to_diffop(&self) -> Result<DiffOp> {
        let lam = self
            .lambda
            .iter()
            .map(|(md, c)| (md.clone(), c.clone() * GaussianRational::from_int(multinomial(md))))
            .collect();
        DiffOp::first_order(2, &lam)
    }

    pub fn to_json(&self) -> FirstOrderJson {
        FirstOrderJson { lambda: self.lambda.iter().map(|(k, v)| (k.key(), v.clone())).collect() }
    }

    pub fn from_json(j: &FirstOrderJson) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (k, v) in &j.lambda {
            m.insert(Multidegree::parse(k, 3)?, v.clone());
        }
        Self::new(m)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Invariant {
    S,
    T,
}

/// `δS` (degree 3) or `δT` (degree 5).
pub fn delta_of_invariant(lambda: &FirstOrderOp, which: Invariant) -> Poly {
    let inv = cubic_invariants();
    let p = match which {
        Invariant::S => &inv.s,
        Invariant::T => &inv.t,
    };
    lambda.apply(p).expect("invariants live in the a-variables")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn new(name: &str, failure: Option<String>) -> Self {
        CheckResult { name: name.into(), pass: failure.is_none(), detail: failure }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn compare<C: crate::exactalg::Ring>(lhs: &MultiPoly<C>, rhs: &MultiPoly<C>) -> Option<String> {
    lhs.first_difference(rhs)
        .map(|(m, a, b)| format!("term {}: left has {a}, right has {b}", lhs.format_monomial(&m)))
}

/// The congruences between `S`, `T`, `H` and `T0` for the stored invariants.
pub fn congruence_checks() -> Report {
    let inv = cubic_invariants();
    congruence_checks_for(&inv.s, &inv.t)
}

/// Same checks for caller-supplied `S` and `T`; the failure detail names the
/// first monomial where the two sides disagree.
pub fn congruence_checks_for(s: &Poly, t: &Poly) -> Report {
    let inv = cubic_invariants();
    let h = &inv.h;
    let a111 = s.var_index("a111").expect("a111");
    let mut checks = Vec::new();
    let reduce2 = |p: &Poly| p.reduce_mod_two().expect("integral coefficients");

    // (a) 64S³ - T² ≡ H⁴
    let delta = &s.pow(3).scale(&GaussianRational::from_int(64)) - &t.pow(2);
    checks.push(CheckResult::new("delta_eq_h4_mod2", compare(&reduce2(&delta), &h.pow(4))));

    // (b) T ≡ T0 mod 2, and T0 is exactly the odd part of T
    let mut fail = compare(&reduce2(t), &reduce2(&inv.t0));
    if fail.is_none() {
        for (m, c) in inv.t0.terms() {
            if t.coeff(m) != *c {
                fail = Some(format!("term {}: T has {}, T0 lists {c}", t.format_monomial(m), t.coeff(m)));
                break;
            }
        }
    }
    if fail.is_none() && inv.t0.num_terms() != 6 {
        fail = Some(format!("T0 has {} terms", inv.t0.num_terms()));
    }
    checks.push(CheckResult::new("t_eq_t0_mod2", fail));

    // (c) T ≡ H² mod 4
    let h_int = lift_f2(h);
    let lhs: MultiPoly<Z4> = t.reduce_mod_four().expect("integral");
    let rhs: MultiPoly<Z4> = h_int.pow(2).reduce_mod_four().expect("integral");
    checks.push(CheckResult::new("t_eq_h2_mod4", compare(&lhs, &rhs)));

    // (d) ∂111 S ≡ H mod 2
    checks.push(CheckResult::new("d111_s_eq_h_mod2", compare(&reduce2(&s.diff(a111)), h)));

    // (e) S ≡ H a111 + a111⁴ + P with P free of a111
    let s2 = reduce2(s);
    let x = MultiPoly::<F2>::var(s2.vars(), a111);
    let p = &(&s2 - &(h * &x)) - &x.pow(4);
    let fail = if p.degree_in(a111) == 0 {
        None
    } else {
        let bad = p.terms().find(|(m, _)| m.0[a111] > 0).map(|(m, _)| p.format_monomial(m)).unwrap_or_default();
        Some(format!("remainder P contains a111 in term {bad}"))
    };
    checks.push(CheckResult::new("s_eq_h_a111_plus_p_mod2", fail));

    // (f), (g) agreement with the invariants recomputed as an sl3 kernel;
    // these see sign errors that the mod-2 identities cannot
    let (ks, kt) = kernel_invariants();
    for (name, given, kernel) in [("s_matches_sl3_kernel", s, ks), ("t_matches_sl3_kernel", t, kt)] {
        let fail = match kernel {
            Some(k) => compare(given, k),
            None => Some("kernel is not one-dimensional".into()),
        };
        checks.push(CheckResult::new(name, fail));
    }

    Report { checks }
}

/// The derivation of `C[a]` induced by `x_v -> x_v + ε x_u` on the cubic,
/// in Salmon coordinates: `Σ_I (I_v m_I / m_J) a_I ∂/∂a_J` with `J = I + e_u - e_v`.
pub fn sl3_derivation(p: &Poly, u: usize, v: usize) -> Poly {
    let basis = section_basis(2, 1);
    let vars = p.vars().clone();
    let mut out = Poly::zero(&vars);
    for (ii, i) in basis.iter().enumerate() {
        if i.0[v] == 0 {
            continue;
        }
        let mut j = i.0.clone();
        j[u] += 1;
        j[v] -= 1;
        let j = Multidegree(j);
        let jj = basis.iter().position(|b| *b == j).expect("degree preserved");
        let w = GaussianRational::from_ratio(i.0[v] as i64 * multinomial(i), multinomial(&j)).expect("nonzero");
        let term = &Poly::var(&vars, ii) * &p.diff(jj);
        out = &out + &term.scale(&w);
    }
    out
}

/// The unique (up to scale) degree-`n` polynomial killed by all six
/// off-diagonal derivations, normalised so that `a111^n` has coefficient `lead`.
/// Built from the torus-invariant monomials by exact kernel computation; no
/// use is made of the stored tables. Returns `None` if the kernel is not a line.
pub fn sl3_kernel_invariant(n: u32, lead: &GaussianRational) -> Option<Poly> {
    let vars = a_vars(2);
    let basis = section_basis(2, 1);
    let monos: Vec<Monomial> = all_monomials(10, n)
        .into_iter()
        .filter(|m| {
            let mut w = [0u32; 3];
            for (e, md) in m.0.iter().zip(&basis) {
                for k in 0..3 {
                    w[k] += e * md.0[k];
                }
            }
            w == [n, n, n]
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let mut index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut ech = crate::linalg::Echelon::new();
    let mut kernel = Vec::new();
    for mono in &monos {
        let p = Poly::monomial(&vars, mono.clone(), GaussianRational::one());
        let mut col = crate::linalg::SparseVec::new();
        for (k, &(u, v)) in pairs.iter().enumerate() {
            for (m, c) in sl3_derivation(&p, u, v).terms() {
                let len = index.len();
                let row = *index.entry((k, m.clone())).or_insert(len);
                col.insert(row, c.clone());
            }
        }
        if let Some(kv) = ech.insert(col) {
            kernel.push(kv);
        }
    }
    if kernel.len() != 1 {
        return None;
    }
    let p = Poly::from_terms(&vars, kernel[0].iter().map(|(j, c)| (monos[*j].clone(), c.clone())));
    let mut e = vec![0u32; 10];
    e[4] = n;
    let c = p.coeff_of(&e);
    if c.is_zero() {
        return None;
    }
    Some(p.scale(&lead.checked_div(&c).ok()?))
}

fn all_monomials(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(left: u32, slot: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if slot == n - 1 {
            cur.push(left);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(left - e, slot + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(deg, 0, nvars, &mut Vec::new(), &mut out);
    out
}

fn kernel_invariants() -> &'static (Option<Poly>, Option<Poly>) {
    static CELL: OnceLock<(Option<Poly>, Option<Poly>)> = OnceLock::new();
    CELL.get_or_init(|| {
        (sl3_kernel_invariant(4, &GaussianRational::one()), sl3_kernel_invariant(6, &GaussianRational::from_int(-8)))
    })
}

/// Coefficient of `a111^12` in `Δ`.
pub fn delta_a111_power_coefficient() -> GaussianRational {
    let inv = cubic_invariants();
    let idx = inv.delta.var_index("a111").expect("a111");
    let mut e = vec![0u32; inv.delta.vars().len()];
    e[idx] = 12;
    inv.delta.coeff_of(&e)
}

/// Degrees of the generators of the invariant ring of ternary cubics.
pub fn generator_degrees() -> [u32; 2] {
    let inv = cubic_invariants();
    [inv.s.total_degree().unwrap_or(0), inv.t.total_degree().unwrap_or(0)]
}

/// Some generator degree is `≡ 1 mod 3`.
pub fn degree_sanity_check() -> bool {
    generator_degrees().iter().any(|d| d % 3 == 1)
}

/// The gcd condition on `λ` under which the zero locus is known to be non-empty:
/// unit gcd, `(1+i) | λ111`, and the residues of `λ300, λ030, λ003` mod `(1+i)`
/// are not a permutation of `{1, 0, 0}`.
pub fn admissible(lambda: &FirstOrderOp) -> Result<bool> {
    let ints = lambda.integral_entries()?;
    let mut g = GaussianInt::zero();
    for v in ints.values() {
        g = if g.is_zero() { v.unit_canonical() } else { gint_gcd(&g, v)? };
    }
    if !g.is_unit() {
        return Ok(false);
    }
    let get = |k: &str| ints.get(&Multidegree::parse(k, 3).expect("key")).cloned().unwrap_or_default();
    if get("111").residue_one_plus_i() != 0 {
        return Ok(false);
    }
    let ones = ["300", "030", "003"].iter().filter(|k| get(k).residue_one_plus_i() == 1).count();
    Ok(ones != 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcdReport {
    pub gcd_lambda: GaussianInt,
    pub content_delta_s: GaussianInt,
    pub content_divides_gcd: bool,
    /// Only present when `(1+i)` does not divide the gcd of the `λ_I`, `I != 111`.
    pub val_content_delta_t: Option<u32>,
    pub val_is_two: Option<bool>,
}

impl GcdReport {
    pub fn all_pass(&self) -> bool {
        self.content_divides_gcd && self.val_is_two.unwrap_or(true)
    }
}

fn gcd_all<'a>(it: impl Iterator<Item = &'a GaussianInt>) -> Result<GaussianInt> {
    let mut g = GaussianInt::zero();
    for v in it {
        if v.is_zero() {
            continue;
        }
        g = if g.is_zero() { v.unit_canonical() } else { gint_gcd(&g, v)? };
    }
    Ok(g)
}

/// Content of `δS` against `gcd(λ)`, and the `(1+i)`-adic valuation of the content of `δT`.
pub fn gcd_lemma_checks(lambda: &FirstOrderOp) -> Result<GcdReport> {
    let ints = lambda.integral_entries()?;
    let gcd_lambda = gcd_all(ints.values())?;
    let ds = delta_of_invariant(lambda, Invariant::S);
    let content_delta_s = ds.content()?;
    let content_divides_gcd = gcd_lambda.div_exact(&content_delta_s).is_some();
    let a111 = Multidegree(vec![1, 1, 1]);
    let rest = gcd_all(ints.iter().filter(|(k, _)| **k != a111).map(|(_, v)| v))?;
    let (val_content_delta_t, val_is_two) = if !rest.is_zero() && rest.residue_one_plus_i() == 1 {
        let dt = delta_of_invariant(lambda, Invariant::T);
        let v = val_one_plus_i(&dt.content()?)?;
        (Some(v), Some(v == 2))
    } else {
        (None, None)
    };
    Ok(GcdReport { gcd_lambda, content_delta_s, content_divides_gcd, val_content_delta_t, val_is_two })
}

/// True when no nonzero linear form over `F2` divides `p`.
///
/// For a linear form `L` containing variable `v`, `L | p` iff `p` vanishes
/// after substituting `v := L - v`.
pub fn has_no_linear_factor_f2(p: &MultiPoly<F2>) -> bool {
    let vars = p.vars().clone();
    let used: Vec<usize> = (0..vars.len()).filter(|&i| p.degree_in(i) > 0).collect();
    let a111 = vars.iter().position(|v| v == "a111");
    let mut cands = used.clone();
    if let Some(i) = a111 {
        if !cands.contains(&i) {
            cands.push(i);
        }
    }
    let n = cands.len();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| cands[b]).collect();
        let v = support[0];
        let images: Vec<MultiPoly<F2>> = (0..vars.len())
            .map(|i| {
                if i == v {
                    support[1..].iter().fold(MultiPoly::zero(&vars), |acc, &j| &acc + &MultiPoly::var(&vars, j))
                } else {
                    MultiPoly::var(&vars, i)
                }
            })
            .collect();
        if p.compose(&images).expect("same variables").is_zero() {
            return false;
        }
    }
    true
}

/// Irreducibility of `H` over `F2` by exhaustive linear-divisor search.
pub fn h_irreducibility() -> bool {
    let h = &cubic_invariants().h;
    h.total_degree() == Some(3) && has_no_linear_factor_f2(h)
}

fn det3(g: &[[GaussianRational; 3]; 3]) -> GaussianRational {
    let m = |i: usize, j: usize| &g[i][j];
    m(0, 0).clone() * &(m(1, 1).clone() * m(2, 2) - m(1, 2).clone() * m(2, 1))
        - m(0, 1).clone() * &(m(1, 0).clone() * m(2, 2) - m(1, 2).clone() * m(2, 0))
        + m(0, 2).clone() * &(m(1, 0).clone() * m(2, 1) - m(1, 1).clone() * m(2, 0))
}

/// Coefficients of `f(b)(g·x)`, in the convention of `b`; requires `det g = 1`.
pub fn sl3_substitute(b: &Section, g: &[[GaussianRational; 3]; 3]) -> Result<Section> {
    if b.m() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: b.m() });
    }
    let det = det3(g);
    if !det.is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let mono = b.to_monomial()?;
    let xv = x_vars(2);
    let f = crate::ambient::universal_section_at(&mono)?;
    let images: Vec<Poly> = (0..3)
        .map(|i| (0..3).fold(Poly::zero(&xv), |acc, j| &acc + &Poly::var(&xv, j).scale(&g[i][j])))
        .collect();
    let fg = f.compose(&images)?;
    let mut out = Section::zero(2, Convention::Monomial);
    for (m, c) in fg.terms() {
        out.set(Multidegree(m.0.clone()), c.clone())?;
    }
    convert_convention(&out, b.convention())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_section, random_unimodular, Rng};

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn salmon(pairs: &[(&str, i64)]) -> Section {
        pairs.iter().fold(Section::zero(2, Convention::Salmon), |s, (k, v)| s.with(k, q(*v)).unwrap())
    }

    #[test]
    fn table_shapes() {
        let inv = cubic_invariants();
        assert_eq!(inv.s.num_terms(), 25);
        assert_eq!(inv.t.num_terms(), 103);
        assert!(inv.s.is_homogeneous() && inv.s.total_degree() == Some(4));
        assert!(inv.t.is_homogeneous() && inv.t.total_degree() == Some(6));
        assert_eq!(inv.delta.total_degree(), Some(12));
        assert_eq!(inv.h.num_terms(), 6);
    }

    #[test]
    fn torus_weights() {
        // every monomial of S and T has index sum deg·(1,1,1)
        let basis = section_basis(2, 1);
        let inv = cubic_invariants();
        for p in [&inv.s, &inv.t] {
            for (m, _) in p.terms() {
                let mut w = [0u32; 3];
                for (e, md) in m.0.iter().zip(&basis) {
                    for k in 0..3 {
                        w[k] += e * md.0[k];
                    }
                }
                let d = m.degree();
                assert_eq!(w, [d, d, d], "{}", p.format_monomial(m));
            }
        }
    }

    #[test]
    fn convention_examples() {
        let f = Section::fermat(2);
        let s = convert_convention(&f, Convention::Salmon).unwrap();
        assert_eq!(s.values(), f.values());
        let m = Section::zero(2, Convention::Monomial).with("111", q(6)).unwrap();
        let s = convert_convention(&m, Convention::Salmon).unwrap();
        assert_eq!(s.coeff(&Multidegree(vec![1, 1, 1])), q(1));
        let mut rng = Rng::seed(3);
        for _ in 0..10 {
            let b = random_section(&mut rng, 2, 5);
            let back = convert_convention(&convert_convention(&b, Convention::Salmon).unwrap(), Convention::Monomial);
            assert_eq!(back.unwrap(), b);
        }
        assert!(convert_convention(&Section::fermat(1), Convention::Salmon).is_err());
    }

    #[test]
    fn aronhold_examples() {
        let v = aronhold(&salmon(&[("111", 1)])).unwrap();
        assert_eq!((v.s, v.t, v.delta), (q(1), q(-8), q(0)));
        let v = aronhold(&salmon(&[("300", 1), ("030", 1), ("003", 1)])).unwrap();
        assert_eq!((v.s, v.t, v.delta), (q(0), q(1), q(-1)));
        let v = aronhold(&Section::zero(2, Convention::Salmon)).unwrap();
        assert!(v.s.is_zero() && v.t.is_zero() && v.delta.is_zero());
        assert!(matches!(aronhold(&Section::fermat(2)), Err(Error::ConventionMismatch { .. })));
    }

    #[test]
    fn discriminant_vanishes_on_nodal_and_cuspidal_cubics() {
        // y²z - x³ - x²z (node) and y²z - x³ (cusp), written in monomial coordinates
        let node = Section::zero(2, Convention::Monomial)
            .with("021", q(1)).unwrap()
            .with("300", q(-1)).unwrap()
            .with("201", q(-1)).unwrap();
        assert!(cubic_discriminant(&node).unwrap().is_zero());
        let cusp = Section::zero(2, Convention::Monomial).with("021", q(1)).unwrap().with("300", q(-1)).unwrap();
        assert!(cubic_discriminant(&cusp).unwrap().is_zero());
        // y²z - x³ + xz² is smooth
        let smooth = cusp.with("102", q(1)).unwrap();
        assert!(!cubic_discriminant(&smooth).unwrap().is_zero());
    }

    #[test]
    fn homogeneity() {
        let mut rng = Rng::seed(11);
        for _ in 0..5 {
            let b = convert_convention(&random_section(&mut rng, 2, 4), Convention::Salmon).unwrap();
            let l = rng.small_rational(5);
            let v = aronhold(&b).unwrap();
            let w = aronhold(&b.scaled(&l)).unwrap();
            assert_eq!(w.s, v.s.clone() * l.pow(4));
            assert_eq!(w.t, v.t.clone() * l.pow(6));
            assert_eq!(w.delta, v.delta.clone() * l.pow(12));
        }
    }

    #[test]
    fn sl3_invariance() {
        let mut rng = Rng::seed(5);
        for _ in 0..10 {
            let b = random_section(&mut rng, 2, 4);
            let g = random_unimodular(&mut rng);
            let gb = sl3_substitute(&b, &g).unwrap();
            let v = aronhold(&convert_convention(&b, Convention::Salmon).unwrap()).unwrap();
            let w = aronhold(&convert_convention(&gb, Convention::Salmon).unwrap()).unwrap();
            assert_eq!(v, w);
        }
    }

    #[test]
    fn sl3_examples() {
        let id: [[GaussianRational; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| if i == j { q(1) } else { q(0) }));
        let f = Section::fermat(2);
        assert_eq!(sl3_substitute(&f, &id).unwrap(), f);
        let mut shear = id.clone();
        shear[0][1] = q(1);
        let g = sl3_substitute(&f, &shear).unwrap();
        assert_ne!(g, f);
        let sal = |s: &Section| aronhold(&convert_convention(s, Convention::Salmon).unwrap()).unwrap();
        assert_eq!(sal(&g), sal(&f));
        let mut sing = id.clone();
        sing[0][0] = q(2);
        assert!(matches!(sl3_substitute(&f, &sing), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn a111_twelfth_power_absent() {
        assert!(delta_a111_power_coefficient().is_zero());
    }

    #[test]
    fn congruences_hold() {
        let r = congruence_checks();
        assert_eq!(r.checks.len(), 7);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn corrupted_s_is_caught() {
        let inv = cubic_invariants();
        let v = |k: &str| inv.s.var_index(k).unwrap();
        let mut e = vec![0u32; 10];
        e[v("a300")] = 1;
        e[v("a012")] = 2;
        e[v("a120")] = 1;
        let m = Monomial(e);
        assert_eq!(inv.s.coeff(&m), q(-1));
        // flip -a300 a012^2 a120 to +a300 a012^2 a120
        let bad = &inv.s + &Poly::monomial(inv.s.vars(), m, q(2));
        let r = congruence_checks_for(&bad, &inv.t);
        assert!(!r.all_pass());
        let fail = r.get("s_matches_sl3_kernel").unwrap();
        assert!(!fail.pass);
        assert!(fail.detail.as_ref().unwrap().contains("a300*a120*a012^2"), "{fail:?}");
        // an odd change is also seen by the mod-2 identities
        let bad = &inv.s + &Poly::monomial(inv.s.vars(), Monomial(vec![0, 0, 0, 0, 4, 0, 0, 0, 0, 0]), q(1));
        let r = congruence_checks_for(&bad, &inv.t);
        assert!(!r.get("s_eq_h_a111_plus_p_mod2").unwrap().pass);
    }

    #[test]
    fn kernel_reproduces_tables() {
        let inv = cubic_invariants();
        assert_eq!(sl3_kernel_invariant(4, &q(1)).as_ref(), Some(&inv.s));
        assert_eq!(sl3_kernel_invariant(6, &q(-8)).as_ref(), Some(&inv.t));
        for (u, v) in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)] {
            assert!(sl3_derivation(&inv.s, u, v).is_zero());
            assert!(sl3_derivation(&inv.t, u, v).is_zero());
        }
    }

    #[test]
    fn delta_examples() {
        let e111 = FirstOrderOp::unit("111");
        let ds = delta_of_invariant(&e111, Invariant::S);
        let vars = ds.vars().clone();
        let idx = |k: &str| vars.iter().position(|v| v == k).unwrap();
        let mut e = vec![0u32; 10];
        for k in ["a003", "a030", "a300"] {
            e[idx(k)] = 1;
        }
        assert_eq!(ds.coeff_of(&e), q(-1));
        assert_eq!(ds.reduce_mod_two().unwrap(), cubic_invariants().h);
        let dt2 = delta_of_invariant(&e111, Invariant::T).scale(&GaussianRational::from_ratio(1, 2).unwrap());
        assert_eq!(dt2.reduce_mod_two().unwrap().degree_in(idx("a111")), 0);
        let e300 = FirstOrderOp::unit("300");
        let a111_4 = Poly::var(&vars, idx("a111")).pow(4);
        assert!(e300.apply(&a111_4).unwrap().is_zero());
    }

    #[test]
    fn linearity_in_lambda() {
        let a = FirstOrderOp::from_pairs(&[("300", q(2)), ("111", q(-1)), ("021", q(3))]).unwrap();
        let b = FirstOrderOp::from_pairs(&[("300", q(1)), ("012", q(5))]).unwrap();
        let sum = FirstOrderOp::from_pairs(&[("300", q(3)), ("111", q(-1)), ("021", q(3)), ("012", q(5))]).unwrap();
        for w in [Invariant::S, Invariant::T] {
            let lhs = delta_of_invariant(&sum, w);
            let rhs = &delta_of_invariant(&a, w) + &delta_of_invariant(&b, w);
            assert_eq!(lhs, rhs);
        }
        let twice = a.scale(&q(2)).unwrap();
        assert_eq!(delta_of_invariant(&twice, Invariant::S), delta_of_invariant(&a, Invariant::S).scale(&q(2)));
    }

    #[test]
    fn admissible_examples() {
        assert!(!admissible(&FirstOrderOp::unit("111")).unwrap());
        let fermat_dir = FirstOrderOp::from_pairs(&[("300", q(1)), ("030", q(1)), ("003", q(1))]).unwrap();
        assert!(admissible(&fermat_dir).unwrap());
        assert!(!admissible(&FirstOrderOp::unit("300")).unwrap());
        let two = FirstOrderOp::from_pairs(&[("300", q(2)), ("030", q(2))]).unwrap();
        assert!(!admissible(&two).unwrap());
        let half = FirstOrderOp::from_pairs(&[("300", GaussianRational::from_ratio(1, 2).unwrap())]).unwrap();
        assert!(admissible(&half).is_err());
    }

    #[test]
    fn gcd_lemma_examples() {
        let r = gcd_lemma_checks(&FirstOrderOp::unit("111")).unwrap();
        assert!(r.content_delta_s.is_unit());
        let r = gcd_lemma_checks(&FirstOrderOp::unit("300")).unwrap();
        assert_eq!(r.val_content_delta_t, Some(2));
        assert!(r.all_pass());
        let r = gcd_lemma_checks(&FirstOrderOp::from_pairs(&[("300", q(2))]).unwrap()).unwrap();
        assert_eq!(r.content_delta_s, GaussianInt::from_int(2));
        assert!(r.content_divides_gcd);
        assert_eq!(r.val_content_delta_t, None);
    }

    #[test]
    fn h_is_irreducible() {
        assert!(h_irreducibility());
    }

    #[test]
    fn reducible_controls() {
        let vars = a_vars(2);
        let v = |k: &str| {
            let idx = vars.iter().position(|n| n == k).unwrap();
            MultiPoly::<F2>::var(&vars, idx)
        };
        let p = &(&v("a300") * &v("a030")) * &v("a003");
        assert!(!has_no_linear_factor_f2(&p));
        let p = &v("a300") * &(&(&v("a030") * &v("a003")) + &(&v("a021") * &v("a012")));
        assert!(!has_no_linear_factor_f2(&p));
        // (a300 + a030)·q: the divisor has two terms
        let p = &(&v("a300") + &v("a030")) * &(&(&v("a003") * &v("a003")) + &(&v("a021") * &v("a012")));
        assert!(!has_no_linear_factor_f2(&p));
    }

    #[test]
    fn p1_discriminant_examples() {
        assert_eq!(p1_discriminant(&Section::p1(q(0), q(1), q(1))).unwrap(), q(-4));
        assert_eq!(p1_discriminant(&Section::p1(q(2), q(1), q(1))).unwrap(), q(0));
        assert_eq!(p1_discriminant(&Section::p1(q(1), q(0), q(0))).unwrap(), q(1));
    }

    #[test]
    fn degree_check() {
        assert_eq!(generator_degrees(), [4, 6]);
        assert!(degree_sanity_check());
    }
}

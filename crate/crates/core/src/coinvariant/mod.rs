//! Closed-form normal forms in the coinvariant quotient at four special
//! points, and the period calculus on P¹ where the period is `Δ^{-1/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ambient::{named_coordinates, section_basis, smoothness, DiffOp, Multidegree, Section, Smoothness};
use crate::error::{Error, Result};
use crate::exactalg::{vars_from, GaussianRational, Monomial, Poly, Vars};

type Q = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpecialPoint {
    P1Lcsl,
    P1Fermat,
    P2Lcsl,
    P2Fermat,
}

impl SpecialPoint {
    pub const ALL: [SpecialPoint; 4] = [SpecialPoint::P1Lcsl, SpecialPoint::P1Fermat, SpecialPoint::P2Lcsl, SpecialPoint::P2Fermat];

    pub fn m(self) -> usize {
        match self {
            SpecialPoint::P1Lcsl | SpecialPoint::P1Fermat => 1,
            _ => 2,
        }
    }

    pub fn section(self) -> Section {
        match self {
            SpecialPoint::P1Lcsl | SpecialPoint::P2Lcsl => Section::lcsl(self.m()),
            _ => Section::fermat(self.m()),
        }
    }

    pub fn is_smooth(self) -> bool {
        self != SpecialPoint::P2Lcsl
    }

    /// Dimension of the local solution space, which is the length of every normal form.
    pub fn dimension(self) -> usize {
        if self == SpecialPoint::P2Fermat {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for SpecialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecialPoint::P1Lcsl => "p1-lcsl",
            SpecialPoint::P1Fermat => "p1-fermat",
            SpecialPoint::P2Lcsl => "p2-lcsl",
            SpecialPoint::P2Fermat => "p2-fermat",
        })
    }
}

impl FromStr for SpecialPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let k = s.to_ascii_lowercase().replace('_', "-");
        SpecialPoint::ALL
            .into_iter()
            .find(|p| p.to_string() == k)
            .ok_or_else(|| Error::Parse(format!("unknown special point {s:?}")))
    }
}

/// Coordinates on the quotient basis: the class of 1, plus the class of
/// `x₀x₁x₂` at the P² Fermat point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm(pub Vec<Q>);

impl NormalForm {
    pub fn zero(n: usize) -> Self {
        NormalForm(vec![Q::zero(); n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Q::is_zero)
    }

    fn add_scaled(&mut self, c: &Q, o: &NormalForm) {
        for (x, y) in self.0.iter_mut().zip(&o.0) {
            *x = x.clone() + &(c.clone() * y);
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n!!` with `(-1)!! = 1`.
fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 0 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// `n!!!` with `(-1)!!! = (-2)!!! = 1`.
fn triple_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 0 {
        acc *= k;
        k -= 3;
    }
    acc
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn ratio(num: BigInt, den: BigInt) -> Q {
    Q::from_int(num).checked_div(&Q::from_int(den)).expect("positive denominator")
}

/// Class of `x^ι e^{f(pt)}` in the quotient.
pub fn normal_form(pt: SpecialPoint, iota: &Multidegree) -> Result<NormalForm> {
    let m = pt.m();
    if iota.0.len() != m + 1 || iota.total() % (m as u32 + 1) != 0 {
        return Err(Error::InvalidExponent(format!("{} is not in R for m = {m}", iota.key())));
    }
    let i = &iota.0;
    let mut nf = NormalForm::zero(pt.dimension());
    match pt {
        SpecialPoint::P1Lcsl => {
            if i[0] == i[1] {
                nf.0[0] = Q::from_int(factorial(i[0]) * sign(i[0]));
            }
        }
        SpecialPoint::P1Fermat => {
            if i[0] % 2 == 0 && i[1] % 2 == 0 {
                let h = (i[0] + i[1]) / 2;
                let num = double_factorial(i[0] as i64 - 1) * double_factorial(i[1] as i64 - 1) * sign(h);
                nf.0[0] = ratio(num, BigInt::from(2).pow(h));
            }
        }
        SpecialPoint::P2Lcsl => {
            if i[0] == i[1] && i[1] == i[2] {
                nf.0[0] = Q::from_int(factorial(i[0]) * sign(i[0]));
            }
        }
        SpecialPoint::P2Fermat => {
            let r = i[0] % 3;
            if i.iter().any(|&e| e % 3 != r) || r == 2 {
                return Ok(nf);
            }
            let c3 = iota.total() / 3;
            let prod: BigInt = i.iter().map(|&e| triple_factorial(e as i64 - 2)).product();
            if r == 0 {
                nf.0[0] = ratio(prod * sign(c3), BigInt::from(3).pow(c3));
            } else {
                nf.0[1] = ratio(-prod * sign(c3), BigInt::from(3).pow(c3 - 1));
            }
        }
    }
    Ok(nf)
}

fn check_dim(pt: SpecialPoint, delta: &DiffOp) -> Result<()> {
    if delta.m() != pt.m() {
        return Err(Error::WrongDimension { expected: pt.m(), found: delta.m() });
    }
    Ok(())
}

/// Exponent of `x` produced by `∂^e` acting on `e^f`, with `e` in section-basis order.
fn exponent_image(m: usize, e: &Monomial) -> Multidegree {
    let basis = section_basis(m, 1);
    let mut out = vec![0u32; m + 1];
    for (k, md) in e.0.iter().zip(&basis) {
        for (o, x) in out.iter_mut().zip(&md.0) {
            *o += k * x;
        }
    }
    Multidegree(out)
}

/// Normal form of `δ e^{f(pt)}`.
pub fn apply_normal_form(pt: SpecialPoint, delta: &DiffOp) -> Result<NormalForm> {
    check_dim(pt, delta)?;
    let mut acc = NormalForm::zero(pt.dimension());
    for (mono, c) in delta.terms() {
        acc.add_scaled(c, &normal_form(pt, &exponent_image(pt.m(), mono))?);
    }
    Ok(acc)
}

/// Whether `δ e^{f(pt)}` lies in the image of the Lie algebra.
pub fn annihilates(pt: SpecialPoint, delta: &DiffOp) -> Result<bool> {
    Ok(apply_normal_form(pt, delta)?.is_zero())
}

/// Terms of `δ` as exponent vectors in the numbered coordinates `a₀, a₁, …`.
pub fn named_terms(delta: &DiffOp) -> Vec<(Vec<u32>, Q)> {
    let m = delta.m();
    let basis = section_basis(m, 1);
    let named = named_coordinates(m);
    let pos: Vec<usize> = named.iter().map(|md| basis.iter().position(|b| b == md).expect("same set")).collect();
    delta.terms().map(|(mono, c)| (pos.iter().map(|&p| mono.0[p]).collect(), c.clone())).collect()
}

/// The exponent maps written out on the numbered coordinates.
pub fn beta(m: usize, a: &[u32]) -> Vec<u32> {
    match m {
        1 => vec![a[0] + 2 * a[1], a[0] + 2 * a[2]],
        _ => vec![
            a[0] + 3 * a[1] + 2 * a[2] + a[3] + a[8] + 2 * a[9],
            a[0] + a[2] + 2 * a[3] + 3 * a[4] + 2 * a[5] + a[6],
            a[0] + a[5] + 2 * a[6] + 3 * a[7] + 2 * a[8] + a[9],
        ],
    }
}

/// The hard-coded maps agree with `Σ α_k · (named coordinate k)` on unit vectors.
pub fn beta_self_check() -> bool {
    [1usize, 2].iter().all(|&m| {
        let named = named_coordinates(m);
        (0..named.len()).all(|k| {
            let mut a = vec![0u32; named.len()];
            a[k] = 1;
            beta(m, &a) == named[k].0
        })
    })
}

/// The linear relations on the coefficients `c_α`, evaluated term by term.
pub fn relation_predicate(pt: SpecialPoint, delta: &DiffOp) -> Result<bool> {
    check_dim(pt, delta)?;
    let terms = named_terms(delta);
    let mut sums = vec![Q::zero(); pt.dimension()];
    for (a, c) in &terms {
        let n: u32 = a.iter().sum();
        match pt {
            SpecialPoint::P1Lcsl => {
                if a[1] == a[2] {
                    sums[0] = sums[0].clone() + &(c.clone() * Q::from_int(factorial(n) * sign(n)));
                }
            }
            SpecialPoint::P1Fermat => {
                if a[0] % 2 == 0 {
                    let b = beta(1, a);
                    let num = double_factorial(b[0] as i64 - 1) * double_factorial(b[1] as i64 - 1) * sign(n);
                    sums[0] = sums[0].clone() + &(c.clone() * ratio(num, BigInt::from(2).pow(n)));
                }
            }
            SpecialPoint::P2Lcsl => {
                let b = beta(2, a);
                if b[0] == b[1] && b[1] == b[2] {
                    sums[0] = sums[0].clone() + &(c.clone() * Q::from_int(factorial(n) * sign(n)));
                }
            }
            SpecialPoint::P2Fermat => {
                let b = beta(2, a);
                let prod: BigInt = b.iter().map(|&e| triple_factorial(e as i64 - 2)).product();
                if b.iter().all(|e| e % 3 == 0) {
                    sums[0] = sums[0].clone() + &(c.clone() * ratio(prod * sign(n), BigInt::from(3).pow(n)));
                } else if b.iter().all(|e| e % 3 == 1) {
                    sums[1] = sums[1].clone() + &(c.clone() * ratio(prod * sign(n - 1), BigInt::from(3).pow(n - 1)));
                }
            }
        }
    }
    Ok(sums.iter().all(Q::is_zero))
}

/// Variables `a0, a1, a2` in the numbered order on P¹.
pub fn p1_vars() -> Vars {
    vars_from(&["a0", "a1", "a2"])
}

/// `a₀² − 4a₁a₂`.
pub fn p1_delta() -> Poly {
    let v = p1_vars();
    let a = |k| Poly::var(&v, k);
    &a(0).pow(2) - &(&a(1) * &a(2)).scale(&Q::from_int(4))
}

/// `Δ^s · q` on P¹ with `s = twice_s / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtDiscFunction {
    pub twice_s: i64,
    pub q: Poly,
}

impl SqrtDiscFunction {
    pub fn period() -> Self {
        SqrtDiscFunction { twice_s: -1, q: Poly::one(&p1_vars()) }
    }

    /// `∂(Δ^s q) = Δ^{s−1}(s ∂Δ · q + Δ ∂q)`.
    pub fn diff(&self, k: usize) -> Self {
        let delta = p1_delta();
        let s = Q::from_ratio(self.twice_s, 2).expect("nonzero");
        let q = &(&delta.diff(k) * &self.q).scale(&s) + &(&delta * &self.q.diff(k));
        SqrtDiscFunction { twice_s: self.twice_s - 2, q }
    }

    /// Same function written with exponent lowered to `twice_s / 2`.
    pub fn lowered_to(&self, twice_s: i64) -> Self {
        assert!(twice_s <= self.twice_s && (self.twice_s - twice_s) % 2 == 0);
        let k = ((self.twice_s - twice_s) / 2) as u32;
        SqrtDiscFunction { twice_s, q: &self.q * &p1_delta().pow(k) }
    }
}

fn require_p1(delta: &DiffOp) -> Result<()> {
    if delta.m() != 1 {
        return Err(Error::WrongDimension { expected: 1, found: delta.m() });
    }
    Ok(())
}

/// `δ(Δ^{-1/2}) = Δ^{-1/2-d} P_d`, returning `(d, P_d)` with `d` the order of `δ`.
pub fn p1_apply_to_period(delta: &DiffOp) -> Result<(usize, Poly)> {
    require_p1(delta)?;
    let d = delta.degree();
    let mut cache: BTreeMap<Vec<u32>, SqrtDiscFunction> = BTreeMap::new();
    let mut total = Poly::zero(&p1_vars());
    for (a, c) in named_terms(delta) {
        let g = derivative_of_period(&a, &mut cache);
        let g = g.lowered_to(-1 - 2 * d as i64);
        total = &total + &g.q.scale(&c);
    }
    Ok((d, total))
}

fn derivative_of_period(a: &[u32], cache: &mut BTreeMap<Vec<u32>, SqrtDiscFunction>) -> SqrtDiscFunction {
    if let Some(f) = cache.get(a) {
        return f.clone();
    }
    let out = match a.iter().position(|&e| e > 0) {
        None => SqrtDiscFunction::period(),
        Some(k) => {
            let mut prev = a.to_vec();
            prev[k] -= 1;
            derivative_of_period(&prev, cache).diff(k)
        }
    };
    cache.insert(a.to_vec(), out.clone());
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroLocus {
    All,
    Empty,
    /// Zero set of `q` inside `Δ ≠ 0`.
    Locus(Poly),
}

pub fn p1_zero_locus(delta: &DiffOp) -> Result<ZeroLocus> {
    let (_, p) = p1_apply_to_period(delta)?;
    if p.is_zero() {
        return Ok(ZeroLocus::All);
    }
    let disc = p1_delta();
    let mut q = p;
    while let Some(next) = q.divide_exact(&disc) {
        q = next;
    }
    if q.total_degree() == Some(0) {
        Ok(ZeroLocus::Empty)
    } else {
        Ok(ZeroLocus::Locus(q))
    }
}

/// Values `(a₀, a₁, a₂)` of a P¹ section in the numbered order.
pub fn p1_named_values(b: &Section) -> Result<Vec<Q>> {
    if b.m() != 1 {
        return Err(Error::WrongDimension { expected: 1, found: b.m() });
    }
    b.require_monomial()?;
    Ok(named_coordinates(1).iter().map(|md| b.coeff(md)).collect())
}

/// Whether `b` lies in the differential zero locus of `δ`, by the period formula.
pub fn p1_period_vanishes(delta: &DiffOp, b: &Section) -> Result<bool> {
    if smoothness(b)? != Smoothness::Smooth {
        return Err(Error::Singular);
    }
    let vals = p1_named_values(b)?;
    Ok(match p1_zero_locus(delta)? {
        ZeroLocus::All => true,
        ZeroLocus::Empty => false,
        ZeroLocus::Locus(q) => q.eval(&vals)?.is_zero(),
    })
}

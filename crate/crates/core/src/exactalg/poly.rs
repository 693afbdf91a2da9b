//! Sparse multivariate polynomials over a [`Ring`].
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose order is by total
//! degree first and then lexicographically with the first variable largest.
//! Iteration therefore goes `1, x0, x1, ..., x0^2, x0x1, ...`, which fixes
//! matrix layouts and serialized output across runs. Zero coefficients are
//! never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gaussian::{gint_gcd, GaussianInt, GaussianRational};
use super::modular::{F2, Z4};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Exponent vector aligned with a polynomial's variable list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    /// Graded lexicographic comparison (a proper monomial order).
    pub fn grlex_cmp(&self, o: &Monomial) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub type Vars = Arc<[String]>;

pub fn vars_from<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<C: Ring> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomials over `Q(i)`, the workhorse coefficient field.
pub type Poly = MultiPoly<GaussianRational>;

impl<C: Ring> MultiPoly<C> {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, Monomial(e), C::one())
    }

    pub fn monomial(vars: &Vars, exps: Monomial, c: C) -> Self {
        assert_eq!(exps.0.len(), vars.len(), "exponent length must match variable count");
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent length must match variable count");
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·x^m` in place, pruning a cancelled term.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = std::mem::replace(v, C::zero()) + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> C {
        self.coeff(&Monomial(exps.to_vec()))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            Some(d) => it.all(|e| e == d),
            None => true,
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Leading term for graded lex order with `x0 > x1 > ...`.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch { left: self.vars.to_vec(), right: o.vars.to_vec() })
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = Self::zero(&self.vars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c.clone() * C::from_i64(e as i64));
        }
        out
    }

    pub fn diff_by_name(&self, name: &str) -> Result<Self> {
        Ok(self.diff(self.var_index(name)?))
    }

    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} values for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x;
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn eval_map(&self, point: &BTreeMap<String, C>) -> Result<C> {
        let vals = self
            .vars
            .iter()
            .map(|v| point.get(v).cloned().ok_or_else(|| Error::MissingAssignment(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.eval(&vals)
    }

    /// Substitutes `x_k := images[k]`; all images share one variable list.
    pub fn compose(&self, images: &[MultiPoly<C>]) -> Result<MultiPoly<C>> {
        if images.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        for im in images {
            if im.vars != target {
                return Err(Error::VariableMismatch { left: target.to_vec(), right: im.vars.to_vec() });
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MultiPoly<C>>> = images.iter().map(|p| vec![MultiPoly::one(&target), p.clone()]).collect();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap() * &images[k];
                    powers[k].push(next);
                }
                t = &t * &powers[k][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<MultiPoly<D>> {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Splits `self = Σ_k x_var^k · p_k`, returning `p_k` indexed by `k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(&self.vars); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let k = std::mem::take(&mut m2.0[var]) as usize;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    /// First term (in storage order) where `self` and `o` differ.
    pub fn first_difference(&self, o: &Self) -> Option<(Monomial, C, C)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(o.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|m| {
            let (a, b) = (self.coeff(m), o.coeff(m));
            (a != b).then(|| (m.clone(), a, b))
        })
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(self.vars.iter())
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(m, c)| TermJson { exp: m.0.clone(), c: c.to_string() }).collect()
    }
}

/// Serialized polynomial term: `{"exp":[...],"c":"..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub c: String,
}

impl Poly {
    pub fn from_json_terms(vars: &Vars, terms: &[TermJson]) -> Result<Self> {
        let mut p = Poly::zero(vars);
        for t in terms {
            if t.exp.len() != vars.len() {
                return Err(Error::InvalidExponent(format!("{:?}", t.exp)));
            }
            p.add_term(Monomial(t.exp.clone()), t.c.parse()?);
        }
        Ok(p)
    }

    /// `self / q` when `q` divides `self` exactly, otherwise `None`.
    pub fn divide_exact(&self, q: &Poly) -> Option<Poly> {
        if q.is_zero() || self.check_vars(q).is_err() {
            return None;
        }
        let (lm, lc) = q.leading_term()?;
        let (lm, lc_inv) = (lm.clone(), lc.inv().ok()?);
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let t = Poly::monomial(&self.vars, m.div(&lm), c.clone() * &lc_inv);
            rem = &rem - &(&t * q);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Unit-canonical gcd of the coefficients of an integral polynomial.
    pub fn content(&self) -> Result<GaussianInt> {
        let mut g: Option<GaussianInt> = None;
        for c in self.terms.values() {
            let z = c.to_gaussian_int().ok_or_else(|| Error::NonIntegral(c.to_string()))?;
            g = Some(match g {
                None => z.unit_canonical(),
                Some(h) => gint_gcd(&h, &z)?,
            });
        }
        g.ok_or(Error::ContentOfZero)
    }

    /// Divides every coefficient by `d`; `None` unless all divisions are exact in `Z[i]`.
    pub fn divide_coeffs_exact(&self, d: &GaussianInt) -> Option<Poly> {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_gaussian_int()?.div_exact(d)?.into());
        }
        Some(out)
    }

    pub fn reduce_mod_two(&self) -> Result<MultiPoly<F2>> {
        self.try_map_coeffs(|c| Ok(F2::new(real_residue(c, 2)?)))
    }

    pub fn reduce_mod_four(&self) -> Result<MultiPoly<Z4>> {
        self.try_map_coeffs(|c| Ok(Z4::new(real_residue(c, 4)?)))
    }

    /// Reduction into the residue field `Z[i]/(1+i) = F2`.
    pub fn reduce_mod_one_plus_i(&self) -> Result<MultiPoly<F2>> {
        self.try_map_coeffs(|c| {
            let z = c.to_gaussian_int().ok_or_else(|| Error::NonIntegral(c.to_string()))?;
            Ok(F2::new(z.residue_one_plus_i() as i64))
        })
    }

    /// Magnitude scale `Σ |c_μ|·|b|^μ` of the terms at `point`.
    pub fn term_scale(&self, point: &[num_complex::Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(point).fold(c.abs_f64(), |acc, (&e, z)| acc * z.norm().powi(e as i32))
            })
            .sum()
    }
}

fn real_residue(c: &GaussianRational, n: i64) -> Result<i64> {
    let z = c.to_gaussian_int().filter(GaussianInt::is_real).ok_or_else(|| Error::NonIntegral(c.to_string()))?;
    let r = z.re % num_bigint::BigInt::from(n);
    use num_traits::ToPrimitive;
    Ok(r.to_i64().expect("residue fits in i64").rem_euclid(n))
}

/// Lifts an `F2` polynomial back to `Q(i)` with coefficients in `{0, 1}`.
pub fn lift_f2(p: &MultiPoly<F2>) -> Poly {
    p.map_coeffs(|c| GaussianRational::from_int(c.value() as i64))
}

macro_rules! poly_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, 'b, C: Ring> $tr<&'b MultiPoly<C>> for &'a MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $m(self, o: &'b MultiPoly<C>) -> MultiPoly<C> {
                self.$checked(o).expect("polynomial operands must share a variable list")
            }
        }
        impl<C: Ring> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $m(self, o: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$m(&o)
            }
        }
    };
}

poly_op!(Add, add, checked_add);
poly_op!(Sub, sub, checked_sub);
poly_op!(Mul, mul, checked_mul);

impl<C: Ring> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Ring> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // highest degree first for reading
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mono = self.format_monomial(m);
            if mono == "1" {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn avars() -> Vars {
        vars_from(&["a0", "a1", "a2"])
    }

    fn disc() -> Poly {
        let v = avars();
        let a0 = Poly::var(&v, 0);
        let a1 = Poly::var(&v, 1);
        let a2 = Poly::var(&v, 2);
        &(&a0 * &a0) - &(&(&a1 * &a2).scale(&q(4)))
    }

    #[test]
    fn iteration_order_is_graded_then_lex_descending() {
        let v = vars_from(&["x0", "x1"]);
        let p = Poly::from_terms(
            &v,
            [(Monomial(vec![0, 2]), q(1)), (Monomial(vec![2, 0]), q(1)), (Monomial(vec![1, 1]), q(1)), (Monomial(vec![0, 0]), q(1))],
        );
        let order: Vec<Vec<u32>> = p.terms().map(|(m, _)| m.0.clone()).collect();
        assert_eq!(order, vec![vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn arithmetic_examples() {
        let d = disc();
        assert_eq!(&d + &Poly::zero(&avars()), d);
        let a0 = Poly::var(&avars(), 0);
        assert_eq!(&a0 * &a0, Poly::monomial(&avars(), Monomial(vec![2, 0, 0]), q(1)));
        let cube = d.pow(3);
        assert_eq!(cube.num_terms(), 4);
        let (lm, lc) = cube.leading_term().unwrap();
        assert_eq!(lm.0, vec![6, 0, 0]);
        assert_eq!(lc, &q(1));
    }

    #[test]
    fn cube_matches_repeated_distribution() {
        // (a0^2 - 4a1a2)^3 expanded by hand via the binomial theorem:
        // a0^6 - 12 a0^4 a1 a2 + 48 a0^2 a1^2 a2^2 - 64 a1^3 a2^3
        let expect = Poly::from_terms(
            &avars(),
            [
                (Monomial(vec![6, 0, 0]), q(1)),
                (Monomial(vec![4, 1, 1]), q(-12)),
                (Monomial(vec![2, 2, 2]), q(48)),
                (Monomial(vec![0, 3, 3]), q(-64)),
            ],
        );
        let d = disc();
        assert_eq!(&(&d * &d) * &d, expect);
        assert_eq!(d.pow(3), expect);
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let p = Poly::var(&avars(), 0);
        let r = Poly::var(&vars_from(&["x"]), 0);
        assert!(matches!(p.checked_add(&r), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn derivative_examples() {
        let d = disc();
        assert_eq!(d.diff(0), Poly::var(&avars(), 0).scale(&q(2)));
        assert_eq!(d.diff(1), Poly::var(&avars(), 2).scale(&q(-4)));
        assert!(matches!(d.diff_by_name("b"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn evaluation_examples() {
        let d = disc();
        assert_eq!(d.eval(&[q(0), q(1), q(1)]).unwrap(), q(-4));
        assert_eq!(d.eval(&[q(2), q(1), q(1)]).unwrap(), q(0));
        let mut pt = BTreeMap::new();
        pt.insert("a0".to_string(), q(1));
        assert!(matches!(d.eval_map(&pt), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn reduction_examples() {
        let a0 = Poly::var(&avars(), 0);
        assert!(a0.scale(&q(2)).reduce_mod_two().unwrap().is_zero());
        let half = Poly::constant(&avars(), "1/2".parse().unwrap());
        assert!(matches!(half.reduce_mod_two(), Err(Error::NonIntegral(_))));
        let c = Poly::constant(&avars(), "3+i".parse().unwrap());
        assert!(c.reduce_mod_one_plus_i().unwrap().is_zero());
    }

    #[test]
    fn content_and_exact_division() {
        let v = avars();
        let p = &Poly::var(&v, 0).scale(&q(2)) + &Poly::var(&v, 1).scale(&q(4));
        assert_eq!(p.content().unwrap(), GaussianInt::new(2, 0));
        assert_eq!(Poly::zero(&v).content(), Err(Error::ContentOfZero));
        let d = disc();
        let a0 = Poly::var(&v, 0);
        assert_eq!((&d * &a0).divide_exact(&d), Some(a0.clone()));
        let a0sq1 = &(&a0 * &a0) + &Poly::one(&v);
        assert_eq!(a0sq1.divide_exact(&a0), None);
    }

    #[test]
    fn compose_substitutes() {
        let v = vars_from(&["s"]);
        let s = Poly::var(&v, 0);
        let imgs = vec![s.clone(), Poly::one(&v), &s + &Poly::one(&v)];
        // a0^2 - 4 a1 a2 at (s, 1, s+1) = s^2 - 4s - 4
        let r = disc().compose(&imgs).unwrap();
        assert_eq!(r.eval(&[q(3)]).unwrap(), q(9 - 12 - 4));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_poly() -> impl Strategy<Value = Poly> {
            proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6), 0..6).prop_map(|ts| {
                Poly::from_terms(&avars(), ts.into_iter().map(|((a, b, c), k)| (Monomial(vec![a, b, c]), q(k))))
            })
        }

        fn point() -> impl Strategy<Value = Vec<GaussianRational>> {
            proptest::collection::vec((-4i64..5, -3i64..4), 3).prop_map(|v| {
                v.into_iter().map(|(a, b)| GaussianRational::from_parts((a, 1), (b, 2)).unwrap()).collect()
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(p in small_poly(), r in small_poly(), s in small_poly()) {
                prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
                prop_assert_eq!(&p * &(&r + &s), &(&p * &r) + &(&p * &s));
                prop_assert_eq!(&p * &r, &r * &p);
                prop_assert!((&p - &p).is_zero());
            }

            #[test]
            fn evaluation_is_a_ring_hom(p in small_poly(), r in small_poly(), x in point()) {
                let lhs = (&p * &r).eval(&x).unwrap();
                let rhs = p.eval(&x).unwrap() * r.eval(&x).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn reduction_commutes_with_product(p in small_poly(), r in small_poly()) {
                let prod = (&p * &r).reduce_mod_four().unwrap();
                let sep = &p.reduce_mod_four().unwrap() * &r.reduce_mod_four().unwrap();
                prop_assert_eq!(prod, sep);
                let prod2 = (&p * &r).reduce_mod_one_plus_i().unwrap();
                let sep2 = &p.reduce_mod_one_plus_i().unwrap() * &r.reduce_mod_one_plus_i().unwrap();
                prop_assert_eq!(prod2, sep2);
            }

            #[test]
            fn exact_division_recovers_factor(p in small_poly(), r in small_poly()) {
                prop_assume!(!r.is_zero());
                prop_assert_eq!((&p * &r).divide_exact(&r), Some(p.clone()));
            }
        }
    }
}

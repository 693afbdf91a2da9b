//! First-order operators on plane cubics.
//!
//! For `δ = Σ λ_I ∂/∂a_I` (Salmon coordinates) and smooth `b`, `b` is a
//! differential zero of all periods iff `(δS)(b) = (δT)(b) = 0`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ambient::{section_basis, Convention, Section};
use crate::error::{Error, Result};
use crate::exactalg::{vars_from, GaussianRational, Poly};
use crate::invariants::{aronhold, convert_convention, cubic_invariants, delta_of_invariant, FirstOrderOp, Invariant};
use crate::linalg::Matrix;
use crate::random::Rng;
use crate::univariate::{self as up, UPoly};

/// `(δS, δT)`, of degrees 3 and 5 in the Salmon coordinates.
pub fn zero_locus_equations(lambda: &FirstOrderOp) -> (Poly, Poly) {
    (delta_of_invariant(lambda, Invariant::S), delta_of_invariant(lambda, Invariant::T))
}

/// `δS(b) = δT(b) = 0`, for smooth `b` in either convention.
pub fn first_order_membership(lambda: &FirstOrderOp, b: &Section) -> Result<bool> {
    let sal = convert_convention(b, Convention::Salmon)?;
    if aronhold(&sal)?.delta.is_zero() {
        return Err(Error::Singular);
    }
    let (ds, dt) = zero_locus_equations(lambda);
    let pt = sal.values();
    Ok(ds.eval(&pt)?.is_zero() && dt.eval(&pt)?.is_zero())
}

pub fn eval_complex(p: &Poly, z: &[Complex64]) -> Complex64 {
    p.terms()
        .map(|(m, c)| m.0.iter().zip(z).fold(c.to_complex64(), |acc, (&e, x)| acc * x.powu(e)))
        .sum()
}

fn det(m: &Matrix) -> GaussianRational {
    let n = m.rows;
    let mut a: Vec<Vec<GaussianRational>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut d = GaussianRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return GaussianRational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let inv = a[c][c].inv().expect("nonzero pivot");
        d = d * &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * &inv;
            for j in c..n {
                let v = a[i][j].clone() - &(f.clone() * &a[c][j]);
                a[i][j] = v;
            }
        }
    }
    d
}

/// Sylvester resultant of `p`, `q` (lowest coefficient first) using the given formal degrees.
pub fn sylvester_resultant(p: &[GaussianRational], q: &[GaussianRational]) -> GaussianRational {
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let n = dp + dq;
    if n == 0 {
        return GaussianRational::one();
    }
    let mut m = Matrix::zeros(n, n);
    for r in 0..dq {
        for (k, c) in p.iter().rev().enumerate() {
            m.set(r, r + k, c.clone());
        }
    }
    for r in 0..dp {
        for (k, c) in q.iter().rev().enumerate() {
            m.set(dq + r, r + k, c.clone());
        }
    }
    det(&m)
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    pub budget: usize,
    pub residual_tol: f64,
    pub disc_floor: f64,
    pub precision_bits: u32,
    /// Base point of every plane; random when absent.
    pub anchor: Option<Section>,
    pub coord_bound: i64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            budget: 20,
            residual_tol: 1e-10,
            disc_floor: 1e-8,
            precision_bits: 128,
            anchor: None,
            coord_bound: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneOutcome {
    /// Both restrictions vanish identically, or share a factor.
    Degenerate,
    NoRoot,
    Found,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroWitness {
    /// Salmon coordinates.
    #[serde(skip)]
    pub point: Section,
    pub exact: bool,
    pub plane: usize,
    pub residual_s: f64,
    pub residual_t: f64,
    pub scale_s: f64,
    pub scale_t: f64,
    pub abs_delta: f64,
    pub scale_delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub witness: Option<ZeroWitness>,
    pub planes: Vec<PlaneOutcome>,
}

struct Plane {
    b0: Vec<GaussianRational>,
    u: Vec<GaussianRational>,
    v: Vec<GaussianRational>,
}

impl Plane {
    fn point(&self, s: &GaussianRational, t: &GaussianRational) -> Vec<GaussianRational> {
        (0..self.b0.len()).map(|i| self.b0[i].clone() + &(s.clone() * &self.u[i]) + &(t.clone() * &self.v[i])).collect()
    }
}

fn plane_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

fn sample_plane(opts: &SearchOptions, k: usize) -> Result<Plane> {
    let mut rng = Rng::seed(plane_seed(opts.seed, k));
    let n = section_basis(2, 1).len();
    let rand_vec = |rng: &mut Rng| -> Vec<GaussianRational> {
        (0..n).map(|_| GaussianRational::from_int(rng.int(opts.coord_bound))).collect()
    };
    let b0 = match &opts.anchor {
        Some(a) => convert_convention(a, Convention::Salmon)?.values(),
        None => rand_vec(&mut rng),
    };
    let u = rand_vec(&mut rng);
    let v = rand_vec(&mut rng);
    Ok(Plane { b0, u, v })
}

/// Restriction of a polynomial in the section coordinates to the plane, in `(s, t)`.
fn restrict(p: &Poly, plane: &Plane) -> Result<Poly> {
    let st = vars_from(&["s", "t"]);
    let s = Poly::var(&st, 0);
    let t = Poly::var(&st, 1);
    let images: Vec<Poly> = (0..plane.b0.len())
        .map(|i| &(&Poly::constant(&st, plane.b0[i].clone()) + &s.scale(&plane.u[i])) + &t.scale(&plane.v[i]))
        .collect();
    p.compose(&images)
}

/// Coefficients in `t` at a fixed `s`, using the formal `t`-degree.
fn at_s(p: &Poly, s: &GaussianRational) -> UPoly {
    let deg = p.degree_in(1) as usize;
    let mut out = vec![GaussianRational::zero(); deg + 1];
    for (m, c) in p.terms() {
        let k = m.0[1] as usize;
        out[k] = out[k].clone() + &(c.clone() * &s.pow(m.0[0]));
    }
    out
}

fn at_s_complex(p: &Poly, s: Complex64) -> Vec<Complex64> {
    let deg = p.degree_in(1) as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (m, c) in p.terms() {
        out[m.0[1] as usize] += c.to_complex64() * s.powu(m.0[0]);
    }
    out
}

/// `Res_t(P, Q)` as a polynomial in `s`, by evaluation and interpolation.
fn resultant_in_s(p: &Poly, q: &Poly) -> UPoly {
    let bound = (p.total_degree().unwrap_or(0) * q.total_degree().unwrap_or(0)) as i64;
    let xs: Vec<GaussianRational> = (0..=bound).map(GaussianRational::from_int).collect();
    let ys: Vec<GaussianRational> = xs.iter().map(|s| sylvester_resultant(&at_s(p, s), &at_s(q, s))).collect();
    up::interpolate(&xs, &ys)
}

fn newton_polish(p: &Poly, q: &Poly, s: Complex64, t: Complex64, bits: u32) -> Option<(GaussianRational, GaussianRational)> {
    let (ps, pt, qs, qt) = (p.diff(0), p.diff(1), q.diff(0), q.diff(1));
    let mut s = GaussianRational::from_complex64(s, bits);
    let mut t = GaussianRational::from_complex64(t, bits);
    let mut last = f64::INFINITY;
    for _ in 0..60 {
        let pt_ = [s.clone(), t.clone()];
        let f = (p.eval(&pt_).ok()?, q.eval(&pt_).ok()?);
        let j = [ps.eval(&pt_).ok()?, pt.eval(&pt_).ok()?, qs.eval(&pt_).ok()?, qt.eval(&pt_).ok()?];
        let dj = j[0].clone() * &j[3] - j[1].clone() * &j[2];
        if dj.is_zero() {
            return None;
        }
        let ds = (j[3].clone() * &f.0 - j[1].clone() * &f.1).checked_div(&dj).ok()?;
        let dt = (j[0].clone() * &f.1 - j[2].clone() * &f.0).checked_div(&dj).ok()?;
        s = (s - ds.clone()).round_dyadic(bits);
        t = (t - dt.clone()).round_dyadic(bits);
        let step = ds.abs_f64() + dt.abs_f64();
        if step < 2f64.powi(-(bits as i32) + 8) || (step >= last && step < 1e-20) {
            break;
        }
        if !step.is_finite() || step > 1e12 {
            return None;
        }
        last = step;
    }
    Some((s, t))
}

fn to_section(values: &[GaussianRational]) -> Section {
    Section::from_values(2, Convention::Salmon, &section_basis(2, 1), values).expect("ten values")
}

/// Residual report at a Salmon point.
fn assess(lambda_eqs: &(Poly, Poly), values: &[GaussianRational], plane: usize, exact: bool) -> Result<ZeroWitness> {
    let inv = cubic_invariants();
    let z: Vec<Complex64> = values.iter().map(GaussianRational::to_complex64).collect();
    let (ds, dt) = lambda_eqs;
    let point = to_section(values);
    let ar = aronhold(&point)?;
    let scale_sv = inv.s.term_scale(&z);
    let scale_tv = inv.t.term_scale(&z);
    Ok(ZeroWitness {
        exact,
        plane,
        residual_s: ds.eval(values)?.abs_f64(),
        residual_t: dt.eval(values)?.abs_f64(),
        scale_s: ds.term_scale(&z),
        scale_t: dt.term_scale(&z),
        abs_delta: ar.delta.abs_f64(),
        scale_delta: 64.0 * scale_sv.powi(3) + scale_tv.powi(2),
        point,
    })
}

impl ZeroWitness {
    pub fn accepted(&self, opts: &SearchOptions) -> bool {
        if self.exact {
            return self.residual_s == 0.0 && self.residual_t == 0.0 && self.abs_delta > 0.0;
        }
        self.residual_s <= opts.residual_tol * self.scale_s
            && self.residual_t <= opts.residual_tol * self.scale_t
            && self.abs_delta >= opts.disc_floor * self.scale_delta
    }
}

/// Exact common roots for a rational `s`, via the gcd in `t`.
fn exact_at(p: &Poly, q: &Poly, s: &GaussianRational) -> Vec<GaussianRational> {
    let g = up::gcd(&at_s(p, s), &at_s(q, s));
    match up::degree(&g) {
        Some(1) => vec![-(g[0].clone())],
        Some(d) if d > 1 => up::roots(&up::to_complex(&g))
            .into_iter()
            .filter_map(|z| up::gaussian_rational_near(z, 10_000))
            .filter(|t| up::eval(&g, t).is_zero())
            .collect(),
        _ => Vec::new(),
    }
}

/// One plane trial; pure given `opts.seed` and `k`.
pub fn search_plane(lambda: &FirstOrderOp, opts: &SearchOptions, k: usize) -> Result<(PlaneOutcome, Option<ZeroWitness>)> {
    let eqs = zero_locus_equations(lambda);
    let plane = sample_plane(opts, k)?;
    let p = restrict(&eqs.0, &plane)?;
    let q = restrict(&eqs.1, &plane)?;
    if p.is_zero() || q.is_zero() || p.degree_in(1) == 0 || q.degree_in(1) == 0 {
        return Ok((PlaneOutcome::Degenerate, None));
    }
    let res = resultant_in_s(&p, &q);
    match up::degree(&res) {
        None => return Ok((PlaneOutcome::Degenerate, None)),
        Some(0) => return Ok((PlaneOutcome::NoRoot, None)),
        _ => {}
    }
    let sroots = up::roots(&up::to_complex(&res));
    // exact candidates first
    for sr in &sroots {
        let Some(s) = up::gaussian_rational_near(*sr, 10_000) else { continue };
        if (s.to_complex64() - sr).norm() > 1e-6 * (1.0 + sr.norm()) {
            continue;
        }
        for t in exact_at(&p, &q, &s) {
            let vals = plane.point(&s, &t);
            let w = assess(&eqs, &vals, k, true)?;
            if w.accepted(opts) {
                return Ok((PlaneOutcome::Found, Some(w)));
            }
        }
    }
    for sr in &sroots {
        let mut cands: Vec<Complex64> = up::roots(&at_s_complex(&p, *sr));
        cands.extend(up::roots(&at_s_complex(&q, *sr)));
        let best = cands.into_iter().min_by(|a, b| {
            let fa = eval_complex(&q, &[*sr, *a]).norm() + eval_complex(&p, &[*sr, *a]).norm();
            let fb = eval_complex(&q, &[*sr, *b]).norm() + eval_complex(&p, &[*sr, *b]).norm();
            fa.total_cmp(&fb)
        });
        let Some(t0) = best else { continue };
        let Some((s, t)) = newton_polish(&p, &q, *sr, t0, opts.precision_bits) else { continue };
        let vals = plane.point(&s, &t);
        let w = assess(&eqs, &vals, k, false)?;
        if w.accepted(opts) {
            return Ok((PlaneOutcome::Found, Some(w)));
        }
    }
    Ok((PlaneOutcome::NoRoot, None))
}

/// Looks for a point of the zero locus on up to `budget` random planes.
/// `None` means the budget ran out; it is not evidence of emptiness.
pub fn search_zero(lambda: &FirstOrderOp, opts: &SearchOptions) -> Result<SearchResult> {
    let mut planes = Vec::new();
    for k in 0..opts.budget {
        let (outcome, w) = search_plane(lambda, opts, k)?;
        planes.push(outcome);
        if w.is_some() {
            return Ok(SearchResult { witness: w, planes });
        }
    }
    Ok(SearchResult { witness: None, planes })
}

#[derive(Clone, Debug, Serialize)]
pub struct HesseResult {
    /// Monic gcd of the two restrictions with discriminant factors removed, in `ψ`.
    pub common: Vec<GaussianRational>,
    pub roots: Vec<(f64, f64)>,
}

/// Common zeros on the Hesse pencil `x³ + y³ + z³ + ψ xyz`.
pub fn hesse_search(lambda: &FirstOrderOp) -> Result<HesseResult> {
    let (ds, dt) = zero_locus_equations(lambda);
    let pv = vars_from(&["psi"]);
    let psi = Poly::var(&pv, 0);
    let basis = section_basis(2, 1);
    let images: Vec<Poly> = basis
        .iter()
        .map(|md| match md.key().as_str() {
            "300" | "030" | "003" => Poly::one(&pv),
            "111" => psi.scale(&GaussianRational::from_ratio(1, 6).expect("nonzero")),
            _ => Poly::zero(&pv),
        })
        .collect();
    let to_u = |p: &Poly| -> Result<UPoly> {
        let r = p.compose(&images)?;
        let mut out = vec![GaussianRational::zero(); r.total_degree().unwrap_or(0) as usize + 1];
        for (m, c) in r.terms() {
            out[m.0[0] as usize] = c.clone();
        }
        Ok(up::trim(out))
    };
    let inv = cubic_invariants();
    let disc = to_u(&inv.delta)?;
    let mut g = up::gcd(&to_u(&ds)?, &to_u(&dt)?);
    loop {
        let c = up::gcd(&g, &disc);
        if up::degree(&c).unwrap_or(0) == 0 || up::degree(&g).is_none() {
            break;
        }
        g = up::div_rem(&g, &c).0;
    }
    let roots = match up::degree(&g) {
        Some(d) if d > 0 => up::roots(&up::to_complex(&g)).into_iter().map(|z| (z.re, z.im)).collect(),
        _ => Vec::new(),
    };
    Ok(HesseResult { common: g, roots })
}

/// An operator for which `b` is a zero by construction: `h = Σ z_uv x_u ∂_v f(b)`
/// lies in the image of the generators at `b`. Returns `None` when the
/// resulting `λ` is zero.
pub fn engineered_operator(b: &Section, rng: &mut Rng) -> Result<Option<FirstOrderOp>> {
    use crate::ambient::{lie_generators, universal_section_at, vector_field, LieGenerator, Multidegree};
    use crate::invariants::multinomial;
    let mono = b.to_monomial()?;
    let f = universal_section_at(&mono)?;
    let mut h = Poly::zero(f.vars());
    for g in lie_generators(2) {
        if g == LieGenerator::EulerShift {
            continue;
        }
        let z = GaussianRational::from_int(rng.int(2));
        h = &h + &vector_field(g, &f, 2)?.scale(&z);
    }
    let mut lam = std::collections::BTreeMap::new();
    for (m, c) in h.terms() {
        let md = Multidegree(m.0.clone());
        let w = GaussianRational::from_int(multinomial(&md));
        lam.insert(md, c.checked_div(&w)?);
    }
    match FirstOrderOp::new(lam) {
        Ok(op) => Ok(Some(op)),
        Err(Error::ZeroOperator) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::admissible;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn equation_examples() {
        let e111 = FirstOrderOp::unit("111");
        let (ds, dt) = zero_locus_equations(&e111);
        assert_eq!(ds.reduce_mod_two().unwrap(), cubic_invariants().h);
        let half = dt.scale(&GaussianRational::from_ratio(1, 2).unwrap());
        let a111 = half.var_index("a111").unwrap();
        assert_eq!(half.reduce_mod_two().unwrap().degree_in(a111), 0);
        let two = e111.scale(&q(2)).unwrap();
        assert_eq!(zero_locus_equations(&two).0, ds.scale(&q(2)));
    }

    #[test]
    fn fermat_is_not_a_zero_of_d111() {
        let e111 = FirstOrderOp::unit("111");
        assert!(!first_order_membership(&e111, &Section::fermat(2)).unwrap());
        let sal = convert_convention(&Section::fermat(2), Convention::Salmon).unwrap();
        assert_eq!(zero_locus_equations(&e111).0.eval(&sal.values()).unwrap(), q(-1));
        assert_eq!(first_order_membership(&e111, &Section::lcsl(2)), Err(Error::Singular));
    }

    #[test]
    fn resultant_of_linear_pair() {
        // Res(x - 2, x - 5) = 2 - 5... up to sign convention: Res(p,q) = lead^.. Π(q(roots of p))
        let r = sylvester_resultant(&[q(-2), q(1)], &[q(-5), q(1)]);
        assert_eq!(r, q(-3));
        let r = sylvester_resultant(&[q(-2), q(1)], &[q(-2), q(0), q(1)]);
        // q(2) = 2
        assert_eq!(r, q(2));
    }

    #[test]
    fn search_finds_zero_for_admissible_direction() {
        let lam = FirstOrderOp::from_pairs(&[("300", q(1)), ("030", q(1)), ("003", q(1))]).unwrap();
        assert!(admissible(&lam).unwrap());
        let r = search_zero(&lam, &SearchOptions::default()).unwrap();
        let w = r.witness.expect("zero found");
        assert!(w.accepted(&SearchOptions::default()));
        if w.exact {
            assert!(first_order_membership(&lam, &w.point).unwrap());
        }
    }

    #[test]
    fn engineered_points_are_found_exactly() {
        let mut rng = Rng::seed(1);
        let b = crate::random::random_smooth_section(&mut rng, 2, 3);
        let lam = engineered_operator(&b, &mut rng).unwrap().unwrap();
        assert!(first_order_membership(&lam, &b).unwrap());
        let opts = SearchOptions { anchor: Some(b.clone()), budget: 5, ..Default::default() };
        let w = search_zero(&lam, &opts).unwrap().witness.expect("anchor is a zero");
        assert!(w.exact);
        assert!(first_order_membership(&lam, &w.point).unwrap());
    }

    #[test]
    fn hesse_pencil_for_d111() {
        let r = hesse_search(&FirstOrderOp::unit("111")).unwrap();
        assert_eq!(up::degree(&r.common), Some(0));
        assert!(r.roots.is_empty());
    }

    #[test]
    fn degenerate_plane_is_reported() {
        // λ = e111 with a plane that never moves a111 and starts at 0 gives δS = H-part only;
        // a zero anchor together with zero directions makes both restrictions vanish
        let lam = FirstOrderOp::unit("111");
        let opts = SearchOptions { anchor: Some(Section::zero(2, Convention::Salmon)), coord_bound: 0, budget: 2, ..Default::default() };
        let r = search_zero(&lam, &opts).unwrap();
        assert!(r.witness.is_none());
        assert_eq!(r.planes, vec![PlaneOutcome::Degenerate; 2]);
    }
}

//! Deciding `δ e^{f(b)} ∈ ĝ R e^{f(b)}` by a rank condition.
//!
//! With `h` the Fourier polynomial of `δ` of degree `d`, membership holds iff
//! `h = Σ_g g(r_g e^f)/e^f` for some `r_g ∈ R_{<=d-1}`. Writing the `r_g` in the
//! monomial basis gives a linear system `M_d(b) Λ = Θ` whose matrix has entries
//! affine in the section coordinates.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::ambient::{
    apply_generator, lie_generators, r_basis_upto, section_basis, smoothness, universal_section_at, vector_field, x_vars,
    DiffOp, LieGenerator, Multidegree, Section, Smoothness,
};
use crate::error::{Error, Result};
use crate::exactalg::{GaussianRational, Poly};
use crate::linalg::{Echelon, Matrix, SparseVec};

pub const DEFAULT_MAX_ROWS: usize = 20_000;

/// `c + Σ_I c_I a_I`, with `I` indexing [`section_basis`]`(m, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: GaussianRational,
    pub linear: BTreeMap<usize, GaussianRational>,
}

impl AffineForm {
    fn add_linear(&mut self, i: usize, c: GaussianRational) {
        let e = self.linear.entry(i).or_default();
        *e = e.clone() + c;
        if e.is_zero() {
            self.linear.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }

    pub fn eval(&self, a: &[GaussianRational]) -> GaussianRational {
        self.linear.iter().fold(self.constant.clone(), |acc, (i, c)| acc + &(c.clone() * &a[*i]))
    }
}

/// `M_d(a)`: rows `R_{<=d}`, columns `(g, e_j)` for `g` a generator and `e_j ∈ R_{<=d-1}`,
/// generator-major. Stored by column, sparse.
#[derive(Clone, Debug)]
pub struct SymbolicMatrix {
    pub m: usize,
    pub d: usize,
    pub rows: Vec<Multidegree>,
    pub cols: Vec<(LieGenerator, Multidegree)>,
    pub entries: Vec<BTreeMap<usize, AffineForm>>,
}

fn row_index(rows: &[Multidegree]) -> HashMap<Multidegree, usize> {
    rows.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect()
}

/// Builds `M_d(a)`.
pub fn build_md(m: usize, d: usize) -> SymbolicMatrix {
    let rows = r_basis_upto(m, d);
    let idx = row_index(&rows);
    let xv = x_vars(m);
    let sec = section_basis(m, 1);
    let gens = lie_generators(m);
    let ebasis = if d == 0 { Vec::new() } else { r_basis_upto(m, d - 1) };
    // g(x^I) for each generator and section monomial
    let gf: Vec<Vec<Poly>> = gens
        .iter()
        .map(|g| {
            sec.iter()
                .map(|md| {
                    let p = Poly::monomial(&xv, md.monomial(), GaussianRational::one());
                    vector_field(*g, &p, m).expect("sections lie in R")
                })
                .collect()
        })
        .collect();
    let mut cols = Vec::new();
    let mut entries = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for e in &ebasis {
            let ep = Poly::monomial(&xv, e.monomial(), GaussianRational::one());
            let mut col: BTreeMap<usize, AffineForm> = BTreeMap::new();
            let mut constant = vector_field(*g, &ep, m).expect("basis lies in R");
            if *g == LieGenerator::EulerShift {
                constant = &constant + &ep;
            }
            for (mono, c) in constant.terms() {
                col.entry(idx[&Multidegree(mono.0.clone())]).or_default().constant = c.clone();
            }
            for (ii, gfi) in gf[gi].iter().enumerate() {
                for (mono, c) in (&ep * gfi).terms() {
                    col.entry(idx[&Multidegree(mono.0.clone())]).or_default().add_linear(ii, c.clone());
                }
            }
            col.retain(|_, v| !v.is_zero());
            cols.push((*g, e.clone()));
            entries.push(col);
        }
    }
    SymbolicMatrix { m, d, rows, cols, entries }
}

/// Cached `M_d(a)`; building it is the same for every point.
pub fn symbolic_matrix(m: usize, d: usize) -> Arc<SymbolicMatrix> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<SymbolicMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache lock").get(&(m, d)) {
        return s.clone();
    }
    let s = Arc::new(build_md(m, d));
    cache.lock().expect("cache lock").insert((m, d), s.clone());
    s
}

fn point_values(b: &Section, m: usize) -> Result<Vec<GaussianRational>> {
    if b.m() != m {
        return Err(Error::WrongDimension { expected: m, found: b.m() });
    }
    b.require_monomial()?;
    Ok(b.values())
}

impl SymbolicMatrix {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    /// Sparse columns of `M_d(b)`.
    pub fn evaluate_columns(&self, b: &Section) -> Result<Vec<SparseVec>> {
        let a = point_values(b, self.m)?;
        Ok(self
            .entries
            .iter()
            .map(|col| {
                col.iter().map(|(r, f)| (*r, f.eval(&a))).filter(|(_, v)| !v.is_zero()).collect::<SparseVec>()
            })
            .collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = section_basis(self.m, 1);
        let mut ents = Vec::new();
        for (j, col) in self.entries.iter().enumerate() {
            for (i, f) in col {
                let lin: BTreeMap<String, String> = f.linear.iter().map(|(k, c)| (names[*k].key(), c.to_string())).collect();
                ents.push(serde_json::json!({"row": i, "col": j, "c": f.constant.to_string(), "a": lin}));
            }
        }
        serde_json::json!({
            "kind": "symbolic",
            "m": self.m,
            "d": self.d,
            "rows": self.rows.iter().map(Multidegree::key).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|(g, e)| serde_json::json!({"gen": g.to_string(), "e": e.key()})).collect::<Vec<_>>(),
            "entries": ents,
        })
    }
}

/// `M_d(b)` as a dense matrix.
pub fn evaluate_md(sm: &SymbolicMatrix, b: &Section) -> Result<Matrix> {
    let cols = sm.evaluate_columns(b)?;
    let mut out = Matrix::zeros(sm.num_rows(), sm.num_cols());
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `M_d(b)` assembled directly from `g(e_j e^{f(b)})/e^{f(b)}`; an independent
/// route to the same matrix.
pub fn build_md_at(b: &Section, d: usize) -> Result<Matrix> {
    let m = b.m();
    let f = universal_section_at(b)?;
    let rows = r_basis_upto(m, d);
    let idx = row_index(&rows);
    let xv = x_vars(m);
    let ebasis = if d == 0 { Vec::new() } else { r_basis_upto(m, d - 1) };
    let gens = lie_generators(m);
    let mut out = Matrix::zeros(rows.len(), gens.len() * ebasis.len());
    let mut j = 0;
    for g in &gens {
        for e in &ebasis {
            let ep = Poly::monomial(&xv, e.monomial(), GaussianRational::one());
            for (mono, c) in apply_generator(*g, &ep, &f, m)?.terms() {
                out.set(idx[&Multidegree(mono.0.clone())], j, c.clone());
            }
            j += 1;
        }
    }
    Ok(out)
}

/// Coordinates of an element of `R_{<=d}` in the row basis.
pub fn coordinates(h: &Poly, rows: &[Multidegree]) -> Result<Vec<GaussianRational>> {
    let idx = row_index(rows);
    let mut out = vec![GaussianRational::zero(); rows.len()];
    for (mono, c) in h.terms() {
        let md = Multidegree(mono.0.clone());
        let i = *idx.get(&md).ok_or_else(|| Error::NotInR(h.format_monomial(mono)))?;
        out[i] = c.clone();
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MembershipOptions {
    /// Skip the smoothness test (required for `m >= 3`).
    pub assume_smooth: bool,
    pub max_rows: usize,
    /// Witness degree bound; defaults to the order of `δ`.
    pub degree: Option<usize>,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions { assume_smooth: false, max_rows: DEFAULT_MAX_ROWS, degree: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCertificate {
    pub m: usize,
    pub d: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank_m: usize,
    pub rank_aug: usize,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<GaussianRational>>,
    pub theta: Vec<GaussianRational>,
}

fn require_smooth(b: &Section, assume: bool) -> Result<()> {
    if assume {
        return Ok(());
    }
    match smoothness(b)? {
        Smoothness::Smooth => Ok(()),
        Smoothness::Singular => Err(Error::Singular),
        Smoothness::Unknown => Err(Error::SmoothnessUnknown(b.m())),
    }
}

/// `M_d(b)` reduced once, for answering many membership queries at one point.
pub struct PointContext {
    pub b: Section,
    pub d: usize,
    pub sm: Arc<SymbolicMatrix>,
    echelon: Echelon,
}

impl PointContext {
    pub fn new(b: &Section, d: usize, opts: &MembershipOptions) -> Result<Self> {
        let b = b.to_monomial()?;
        require_smooth(&b, opts.assume_smooth)?;
        let rows = r_basis_upto(b.m(), d).len();
        if rows > opts.max_rows {
            return Err(Error::MatrixTooLarge { rows, limit: opts.max_rows });
        }
        let sm = symbolic_matrix(b.m(), d);
        let mut echelon = Echelon::new();
        for col in sm.evaluate_columns(&b)? {
            echelon.insert(col);
        }
        Ok(PointContext { b, d, sm, echelon })
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn corank(&self) -> usize {
        self.sm.num_rows() - self.rank()
    }

    pub fn query(&self, delta: &DiffOp) -> Result<MembershipCertificate> {
        if delta.m() != self.b.m() {
            return Err(Error::WrongDimension { expected: self.b.m(), found: delta.m() });
        }
        if delta.degree() > self.d {
            return Err(Error::DimensionMismatch(format!(
                "operator of order {} needs degree bound >= {}, got {}",
                delta.degree(),
                delta.degree(),
                self.d
            )));
        }
        let theta = coordinates(delta.fourier(), &self.sm.rows)?;
        let th: SparseVec =
            theta.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        let witness = self.echelon.solve(&th);
        let rank_m = self.rank();
        let member = witness.is_some();
        Ok(MembershipCertificate {
            m: self.b.m(),
            d: self.d,
            rows: self.sm.num_rows(),
            cols: self.sm.num_cols(),
            rank_m,
            rank_aug: rank_m + usize::from(!member),
            member,
            witness,
            theta,
        })
    }
}

/// Decides whether `b` is a differential zero of all periods for `δ`.
pub fn membership(b: &Section, delta: &DiffOp, opts: &MembershipOptions) -> Result<MembershipCertificate> {
    let d = opts.degree.unwrap_or(delta.degree());
    PointContext::new(b, d, opts)?.query(delta)
}

fn degree_from_witness_len(m: usize, len: usize) -> Option<usize> {
    let g = (m + 1) * (m + 1);
    if len == 0 {
        return Some(0);
    }
    (1..64).find(|&d| g * r_basis_upto(m, d - 1).len() == len)
}

/// Rebuilds `r_g` from `Λ` and checks `h = Σ_g g(r_g e^f)/e^f` as polynomials.
pub fn verify_witness(b: &Section, delta: &DiffOp, witness: &[GaussianRational]) -> Result<bool> {
    let b = b.to_monomial()?;
    let m = b.m();
    let Some(d) = degree_from_witness_len(m, witness.len()) else {
        return Ok(false);
    };
    let f = universal_section_at(&b)?;
    let xv = x_vars(m);
    let ebasis = if d == 0 { Vec::new() } else { r_basis_upto(m, d - 1) };
    let mut total = Poly::zero(&xv);
    for (gi, g) in lie_generators(m).into_iter().enumerate() {
        let r = Poly::from_terms(
            &xv,
            ebasis.iter().enumerate().map(|(j, e)| (e.monomial(), witness[gi * ebasis.len() + j].clone())),
        );
        total = &total + &apply_generator(g, &r, &f, m)?;
    }
    Ok(&total == delta.fourier())
}

/// `dim R_{<=d} - rank M_d(b)`.
pub fn coinvariant_corank(b: &Section, d: usize, opts: &MembershipOptions) -> Result<usize> {
    Ok(PointContext::new(b, d, opts)?.corank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumEntry {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn stratum_entry(index: usize, b: &Section, d: usize, opts: &MembershipOptions) -> StratumEntry {
    match PointContext::new(b, d, opts) {
        Ok(ctx) => StratumEntry { index, rank: Some(ctx.rank()), corank: Some(ctx.corank()), error: None },
        Err(e) => StratumEntry { index, rank: None, corank: None, error: Some(e.to_string()) },
    }
}

/// Rank of `M_d(b)` at each point; singular points get an error entry.
pub fn stratify(points: &[Section], d: usize, opts: &MembershipOptions) -> Vec<StratumEntry> {
    points.iter().enumerate().map(|(i, b)| stratum_entry(i, b, d, opts)).collect()
}

/// Evaluated matrix as JSON with exact entries.
pub fn matrix_json(m: &Matrix, sm: &SymbolicMatrix) -> serde_json::Value {
    let mut ents = Vec::new();
    for i in 0..m.rows {
        for j in 0..m.cols {
            if !m.get(i, j).is_zero() {
                ents.push(serde_json::json!({"row": i, "col": j, "v": m.get(i, j).to_string()}));
            }
        }
    }
    serde_json::json!({
        "kind": "evaluated",
        "m": sm.m,
        "d": sm.d,
        "rows": sm.rows.iter().map(Multidegree::key).collect::<Vec<_>>(),
        "cols": sm.cols.iter().map(|(g, e)| serde_json::json!({"gen": g.to_string(), "e": e.key()})).collect::<Vec<_>>(),
        "entries": ents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{Convention, DiffOp};
    use crate::linalg::exact_rank;
    use crate::random::{random_homogeneous_diffop, random_smooth_rational_section, random_smooth_section, Rng};

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn p1(a0: i64, a1: i64, a2: i64) -> Section {
        Section::p1(q(a0), q(a1), q(a2))
    }

    fn col(m: &Matrix, j: usize) -> Vec<GaussianRational> {
        (0..m.rows).map(|i| m.get(i, j).clone()).collect()
    }

    fn ints(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|x| q(*x)).collect()
    }

    #[test]
    fn build_examples() {
        let sm = build_md(1, 1);
        assert_eq!((sm.num_rows(), sm.num_cols()), (4, 4));
        let keys: Vec<String> = sm.rows.iter().map(Multidegree::key).collect();
        assert_eq!(keys, ["00", "20", "11", "02"]);
        // Euler column (1, a1, a0, a2) with a0 ↔ x0x1, a1 ↔ x0², a2 ↔ x1²
        let e = &sm.entries[3];
        assert_eq!(e[&0].constant, q(1));
        let basis = section_basis(1, 1);
        let at = |k: &str| basis.iter().position(|b| b.key() == k).unwrap();
        assert_eq!(e[&1].linear, BTreeMap::from([(at("20"), q(1))]));
        assert_eq!(e[&2].linear, BTreeMap::from([(at("11"), q(1))]));
        assert_eq!(e[&3].linear, BTreeMap::from([(at("02"), q(1))]));
        // x0∂1 column (0, a0, 2a2, 0)
        let x = &sm.entries[1];
        assert_eq!(x.len(), 2);
        assert_eq!(x[&1].linear, BTreeMap::from([(at("11"), q(1))]));
        assert_eq!(x[&2].linear, BTreeMap::from([(at("02"), q(2))]));
        let sm2 = build_md(2, 1);
        assert_eq!((sm2.num_rows(), sm2.num_cols()), (11, 9));
    }

    #[test]
    fn evaluate_example() {
        let m = evaluate_md(&build_md(1, 1), &p1(0, 1, 1)).unwrap();
        assert_eq!(col(&m, 0), ints(&[0, 2, 0, -2]));
        assert_eq!(col(&m, 1), ints(&[0, 0, 2, 0]));
        assert_eq!(col(&m, 2), ints(&[0, 0, 2, 0]));
        assert_eq!(col(&m, 3), ints(&[1, 1, 0, 1]));
        assert_eq!(exact_rank(&m), 3);
        let z = evaluate_md(&build_md(1, 2), &Section::zero(1, Convention::Monomial)).unwrap();
        for j in 0..z.cols {
            let (g, e) = &build_md(1, 2).cols[j];
            let nz = (0..z.rows).filter(|&i| !z.get(i, j).is_zero()).count();
            if *g == LieGenerator::EulerShift {
                assert_eq!(nz, 1, "{e}");
            }
        }
    }

    #[test]
    fn symbolic_matches_direct() {
        let mut rng = Rng::seed(21);
        for (m, d) in [(1, 1), (1, 3), (2, 1), (2, 2)] {
            for _ in 0..3 {
                let b = crate::random::random_section(&mut rng, m, 4);
                assert_eq!(evaluate_md(&build_md(m, d), &b).unwrap(), build_md_at(&b, d).unwrap());
            }
        }
    }

    #[test]
    fn p1_examples() {
        let opts = MembershipOptions::default();
        let c = membership(&p1(0, 1, 1), &DiffOp::parse(1, "∂0").unwrap(), &opts).unwrap();
        assert!(c.member);
        assert_eq!((c.rank_m, c.rank_aug), (3, 3));
        assert!(verify_witness(&p1(0, 1, 1), &DiffOp::parse(1, "∂0").unwrap(), c.witness.as_ref().unwrap()).unwrap());
        let c = membership(&p1(0, 1, 1), &DiffOp::parse(1, "∂1").unwrap(), &opts).unwrap();
        assert!(!c.member);
        assert_eq!((c.rank_m, c.rank_aug), (3, 4));
        let c = membership(&p1(0, 1, 1), &DiffOp::parse(1, "1").unwrap(), &opts).unwrap();
        assert!(!c.member);
        assert_eq!(membership(&p1(2, 1, 1), &DiffOp::parse(1, "∂0").unwrap(), &opts), Err(Error::Singular));
    }

    #[test]
    fn witness_controls() {
        let b = p1(0, 1, 1);
        let d0 = DiffOp::parse(1, "∂0").unwrap();
        let w = membership(&b, &d0, &MembershipOptions::default()).unwrap().witness.unwrap();
        let mut bad = w.clone();
        bad[0] = bad[0].clone() + q(1);
        assert!(!verify_witness(&b, &d0, &bad).unwrap());
        let zero = vec![q(0); w.len()];
        assert!(!verify_witness(&b, &d0, &zero).unwrap());
    }

    #[test]
    fn corank_examples() {
        let opts = MembershipOptions::default();
        assert_eq!(coinvariant_corank(&p1(0, 1, 1), 1, &opts).unwrap(), 1);
        assert_eq!(coinvariant_corank(&Section::fermat(2), 2, &opts).unwrap(), 2);
        let mut rng = Rng::seed(4);
        let b = random_smooth_section(&mut rng, 1, 5);
        assert_eq!(coinvariant_corank(&b, 3, &opts).unwrap(), 1);
    }

    #[test]
    fn stratify_examples() {
        let opts = MembershipOptions::default();
        let r = stratify(&[p1(0, 1, 1), p1(1, 1, 1), p1(1, 0, 0)], 1, &opts);
        assert!(r.iter().all(|e| e.rank == Some(3)));
        assert!(stratify(&[], 1, &opts).is_empty());
        let r = stratify(&[Section::fermat(2)], 1, &opts);
        assert_eq!(r[0].rank, Some(9));
        let r = stratify(&[p1(2, 1, 1)], 1, &opts);
        assert!(r[0].error.is_some());
    }

    #[test]
    fn padding_invariance_and_witnesses() {
        let mut rng = Rng::seed(8);
        for _ in 0..15 {
            let m = 1 + rng.below(2);
            let b = random_smooth_section(&mut rng, m, 3);
            let deg = 1 + rng.below(2) as u32;
            let delta = random_homogeneous_diffop(&mut rng, m, deg, 3, 3);
            let base = membership(&b, &delta, &MembershipOptions::default()).unwrap();
            let padded = membership(&b, &delta, &MembershipOptions { degree: Some(deg as usize + 1), ..Default::default() })
                .unwrap();
            assert_eq!(base.member, padded.member);
            for c in [&base, &padded] {
                if let Some(w) = &c.witness {
                    assert!(verify_witness(&b, &delta, w).unwrap());
                }
            }
        }
    }

    #[test]
    fn linearity_of_members() {
        // members at b span a subspace: sums of member operators are members
        let mut rng = Rng::seed(12);
        let b = random_smooth_rational_section(&mut rng, 1, 3);
        let ctx = PointContext::new(&b, 2, &MembershipOptions::default()).unwrap();
        let mut members = Vec::new();
        for _ in 0..60 {
            let deg = 1 + rng.below(2) as u32;
            let d = random_homogeneous_diffop(&mut rng, 1, deg, 2, 2);
            if ctx.query(&d).unwrap().member {
                members.push(d);
            }
        }
        for w in members.windows(2) {
            let sum = w[0].add(&w[1]).unwrap();
            assert!(ctx.query(&sum).unwrap().member);
        }
    }

    #[test]
    fn size_guard() {
        let opts = MembershipOptions { max_rows: 10, ..Default::default() };
        let r = membership(&Section::fermat(2), &DiffOp::parse(2, "d1").unwrap(), &opts);
        assert!(matches!(r, Err(Error::MatrixTooLarge { rows: 11, limit: 10 })));
    }

    #[test]
    fn unknown_smoothness_needs_assertion() {
        let b = Section::fermat(3);
        let d = DiffOp::parse(3, "d0").unwrap();
        assert_eq!(membership(&b, &d, &MembershipOptions::default()), Err(Error::SmoothnessUnknown(3)));
        let c = membership(&b, &d, &MembershipOptions { assume_smooth: true, ..Default::default() }).unwrap();
        assert_eq!(c.rows, 1 + 35);
    }
}

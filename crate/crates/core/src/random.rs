//! Seeded random instances for tests, property suites and the search routine.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::Zero;

use crate::ambient::{named_coordinates, section_basis, smoothness, Convention, DiffOp, Section, Smoothness};
use crate::exactalg::{GaussianRational, Monomial, Poly};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn seed(s: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(s))
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn int(&mut self, bound: i64) -> i64 {
        self.0.gen_range(-bound..=bound)
    }

    pub fn unit_f64(&mut self) -> f64 {
        self.0.gen::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.gen()
    }

    /// Nonzero `p/q` with `|p| <= bound`, `1 <= q <= bound`.
    pub fn small_rational(&mut self, bound: i64) -> GaussianRational {
        loop {
            let p = self.int(bound);
            if p != 0 {
                let q = self.0.gen_range(1..=bound.max(1));
                return GaussianRational::from_ratio(p, q).expect("q > 0");
            }
        }
    }

    pub fn small_gaussian(&mut self, bound: i64) -> GaussianRational {
        GaussianRational::from_parts((self.int(bound), 1), (self.int(bound), 1)).expect("unit denominators")
    }

    /// Gaussian integer, zero with probability `1 - density`.
    pub fn sparse_gaussian(&mut self, bound: i64, density: f64) -> GaussianRational {
        if self.unit_f64() < density {
            self.small_gaussian(bound)
        } else {
            GaussianRational::zero()
        }
    }
}

/// Section with integer coefficients in `[-bound, bound]`, monomial convention.
pub fn random_section(rng: &mut Rng, m: usize, bound: i64) -> Section {
    let basis = section_basis(m, 1);
    let vals: Vec<GaussianRational> = basis.iter().map(|_| GaussianRational::from_int(rng.int(bound))).collect();
    Section::from_values(m, Convention::Monomial, &basis, &vals).expect("matching lengths")
}

/// Smooth section with integer coefficients (`m = 1, 2`).
pub fn random_smooth_section(rng: &mut Rng, m: usize, bound: i64) -> Section {
    loop {
        let b = random_section(rng, m, bound);
        if smoothness(&b).ok() == Some(Smoothness::Smooth) {
            return b;
        }
    }
}

/// Smooth section with small rational coefficients.
pub fn random_smooth_rational_section(rng: &mut Rng, m: usize, bound: i64) -> Section {
    loop {
        let basis = section_basis(m, 1);
        let vals: Vec<GaussianRational> = basis
            .iter()
            .map(|_| if rng.below(4) == 0 { GaussianRational::zero() } else { rng.small_rational(bound) })
            .collect();
        let b = Section::from_values(m, Convention::Monomial, &basis, &vals).expect("matching lengths");
        if smoothness(&b).ok() == Some(Smoothness::Smooth) {
            return b;
        }
    }
}

/// Product of a few integer shears and signed permutations; determinant 1.
pub fn random_unimodular(rng: &mut Rng) -> [[GaussianRational; 3]; 3] {
    let mut g: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..4 {
        let i = rng.below(3);
        let mut j = rng.below(3);
        while j == i {
            j = rng.below(3);
        }
        if rng.below(3) == 0 {
            // x_i, x_j -> x_j, -x_i
            for row in g.iter_mut() {
                let (a, b) = (row[i], row[j]);
                row[i] = b;
                row[j] = -a;
            }
        } else {
            let t = rng.int(2);
            for row in g.iter_mut() {
                row[j] += t * row[i];
            }
        }
    }
    std::array::from_fn(|i| std::array::from_fn(|j| GaussianRational::from_int(g[i][j])))
}

/// Random operator with up to `terms` monomials of order `<= max_degree`,
/// small integer coefficients. May be zero only if `terms == 0`.
pub fn random_diffop(rng: &mut Rng, m: usize, max_degree: u32, terms: usize, bound: i64) -> DiffOp {
    let n = section_basis(m, 1).len();
    let av = crate::ambient::a_vars(m);
    loop {
        let mut sym = Poly::zero(&av);
        for _ in 0..terms {
            let deg = rng.below(max_degree as usize + 1) as u32;
            let mut e = vec![0u32; n];
            for _ in 0..deg {
                e[rng.below(n)] += 1;
            }
            let c = GaussianRational::from_int(rng.int(bound));
            sym.add_term(Monomial(e), c);
        }
        if !sym.is_zero() || terms == 0 {
            return DiffOp::from_symbol(m, sym).expect("a-variables");
        }
    }
}

/// Random homogeneous operator of exact order `degree`.
pub fn random_homogeneous_diffop(rng: &mut Rng, m: usize, degree: u32, terms: usize, bound: i64) -> DiffOp {
    let n = section_basis(m, 1).len();
    let av = crate::ambient::a_vars(m);
    loop {
        let mut sym = Poly::zero(&av);
        for _ in 0..terms {
            let mut e = vec![0u32; n];
            for _ in 0..degree {
                e[rng.below(n)] += 1;
            }
            sym.add_term(Monomial(e), GaussianRational::from_int(rng.int(bound)));
        }
        if !sym.is_zero() {
            return DiffOp::from_symbol(m, sym).expect("a-variables");
        }
    }
}

/// Random operator in the customary numbered coordinates, as `(α, c_α)` pairs.
pub fn random_named_terms(rng: &mut Rng, m: usize, max_degree: u32, terms: usize, bound: i64) -> Vec<(Vec<u32>, i64)> {
    let n = named_coordinates(m).len();
    (0..terms)
        .map(|_| {
            let deg = rng.below(max_degree as usize + 1) as u32;
            let mut e = vec![0u32; n];
            for _ in 0..deg {
                e[rng.below(n)] += 1;
            }
            (e, rng.int(bound))
        })
        .collect()
}

//! Deterministic generators of triples `(a, b, c)` satisfying
//! `a(ba)^2 = abaca = acaba = (ac)^2 a`.
//!
//! The engineered families are built in a block form and then conjugated by
//! a random unimodular integer matrix. The condition is invariant under
//! simultaneous similarity, so every family stays integral.

use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{ExactMatrix, Matrix};
use crate::scalar::{Gaussian, Scalar, Tolerance};
use crate::transfer::{StrategyKind, Triple};

/// Seed that makes `gen_block_nilpotent` at dimension 4 return the
/// reference 4x4 fixture.
pub const EXAMPLE_SEED: u64 = 0;
pub const DEFAULT_ENTRY_BOUND: i64 = 3;
pub const DEFAULT_MAX_TRIES: usize = 10_000;
const MAX_ATTEMPTS: usize = 64;

const EXACT: Tolerance = Tolerance::exact();

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{strategy} needs dim >= {min}, got {got}")]
    InvalidDimension {
        strategy: StrategyKind,
        min: usize,
        got: usize,
    },
    #[error("{strategy}: no valid triple after {attempts} attempts")]
    RetryExhausted {
        strategy: StrategyKind,
        attempts: usize,
    },
    #[error("random search found nothing in {} tries", stats.tries)]
    NotFound { stats: SearchStats },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub tries: usize,
    pub found: bool,
}

/// Full recipe for one generated triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenStrategy {
    pub kind: StrategyKind,
    pub seed: u64,
    pub dim: usize,
    pub entry_bound: i64,
}

impl GenStrategy {
    pub fn new(kind: StrategyKind, seed: u64, dim: usize) -> Self {
        GenStrategy {
            kind,
            seed,
            dim,
            entry_bound: DEFAULT_ENTRY_BOUND,
        }
    }

    pub fn generate(&self) -> Result<Triple<Gaussian>, GenError> {
        match self.kind {
            StrategyKind::PaperExample => Ok(example_33()),
            StrategyKind::Trivial => gen_trivial(self.dim, self.seed, self.entry_bound),
            StrategyKind::Corach => gen_corach(self.dim, self.seed, self.entry_bound),
            StrategyKind::BlockNilpotent => {
                gen_block_nilpotent(self.dim, self.seed, self.entry_bound)
            }
            StrategyKind::RandomSearch => {
                gen_random_search(self.dim, self.seed, self.entry_bound, DEFAULT_MAX_TRIES)
                    .map(|(t, _)| t)
            }
            StrategyKind::Input => Err(GenError::RetryExhausted {
                strategy: StrategyKind::Input,
                attempts: 0,
            }),
        }
    }
}

fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::from_i64_rows(rows).expect("fixture is square")
}

/// Example fixture: `A(BA)^2 = ABACA = ACABA = (AC)^2 A = 0` while `ABA != ACA`.
pub fn example_33() -> Triple<Gaussian> {
    let a = int_matrix(&[&[1, 0, -1, 0], &[0, 1, 0, -1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
    let b = int_matrix(&[&[1, 1, 1, 0], &[0, 1, 0, 0], &[1, -1, 0, 0], &[0, 1, 0, 0]]);
    let c = int_matrix(&[&[1, -1, 0, 1], &[0, 1, 0, 0], &[1, 1, 0, 1], &[0, 1, 0, 0]]);
    Triple::new(a, b, c, StrategyKind::PaperExample, EXAMPLE_SEED, EXACT)
        .expect("fixture matrices share a dimension")
}

/// Printed group inverse of `I - AC` for the fixture.
pub fn example_33_group_inverse_ac() -> ExactMatrix {
    int_matrix(&[&[1, -2, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])
}

/// Printed group inverse of `I - BA` for the fixture.
pub fn example_33_group_inverse_ba() -> ExactMatrix {
    int_matrix(&[
        &[2, 3, -1, -3],
        &[0, 2, 0, -1],
        &[1, 1, 0, -1],
        &[0, 1, 0, 0],
    ])
}

fn rng_for(kind: StrategyKind, seed: u64, dim: usize) -> ChaCha8Rng {
    let salt = match kind {
        StrategyKind::PaperExample => 0x11,
        StrategyKind::Trivial => 0x23,
        StrategyKind::Corach => 0x37,
        StrategyKind::BlockNilpotent => 0x4b,
        StrategyKind::RandomSearch => 0x5f,
        StrategyKind::Input => 0x61,
    };
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (salt << 56) ^ dim as u64)
}

fn random_entry(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

fn random_rect(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    Matrix::rect_from_fn(rows, cols, |_, _| Gaussian::int(random_entry(rng, bound)))
}

/// Random unimodular `U` and its inverse, both integral.
fn unimodular_pair(rng: &mut ChaCha8Rng, n: usize) -> (ExactMatrix, ExactMatrix) {
    let mut u = ExactMatrix::identity(n);
    let mut u_inv = ExactMatrix::identity(n);
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..n + 1 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut e = ExactMatrix::identity(n);
        e.set(i, j, Gaussian::int(s));
        let mut e_inv = ExactMatrix::identity(n);
        e_inv.set(i, j, Gaussian::int(-s));
        u = &u * &e;
        u_inv = &e_inv * &u_inv;
    }
    (u, u_inv)
}

fn conjugate(m: &ExactMatrix, u: &ExactMatrix, u_inv: &ExactMatrix) -> ExactMatrix {
    &(u * m) * u_inv
}

/// Writes `block` into `m` at `(row, col)`.
fn place(m: &mut ExactMatrix, row: usize, col: usize, block: &ExactMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            m.set(row + i, col + j, block.get(i, j).clone());
        }
    }
}

/// Base pair `(a0, b0)` with `a0 = diag(A1, 0)`, `A1` unit upper triangular
/// of size `rank`, and `b0 a0` carrying a Jordan chain of length `chain` at
/// eigenvalue 1, so that `1 - ba` has index `chain`.
fn planted_pair(
    rng: &mut ChaCha8Rng,
    dim: usize,
    rank: usize,
    chain: usize,
    bound: i64,
) -> (ExactMatrix, ExactMatrix) {
    let chain = chain.min(rank);
    let mut a1 = ExactMatrix::identity(rank);
    let mut t = ExactMatrix::zeros(rank);
    for i in 0..rank {
        for j in i + 1..rank {
            a1.set(i, j, Gaussian::int(random_entry(rng, bound)));
            t.set(i, j, Gaussian::int(random_entry(rng, bound)));
        }
        let d = if i < chain {
            1
        } else {
            // Any eigenvalue except 1 keeps the chain length exact.
            loop {
                let d = random_entry(rng, bound);
                if d != 1 {
                    break d;
                }
            }
        };
        t.set(i, i, Gaussian::int(d));
        if i + 1 < chain {
            t.set(i, i + 1, Gaussian::one());
        }
    }
    let a1_inv = a1.inverse(EXACT).expect("unit triangular");
    let b11 = &t * &a1_inv;

    let mut a0 = ExactMatrix::zeros(dim);
    place(&mut a0, 0, 0, &a1);
    let mut b0 = random_rect(rng, dim, dim, bound);
    place(&mut b0, 0, 0, &b11);
    (a0, b0)
}

fn check_dim(kind: StrategyKind, dim: usize, min: usize) -> Result<(), GenError> {
    if dim < min {
        return Err(GenError::InvalidDimension {
            strategy: kind,
            min,
            got: dim,
        });
    }
    Ok(())
}

fn finish(
    a: ExactMatrix,
    b: ExactMatrix,
    c: ExactMatrix,
    kind: StrategyKind,
    seed: u64,
) -> Option<Triple<Gaussian>> {
    let t = Triple::new(a, b, c, kind, seed, EXACT).ok()?;
    t.condition_ok.then_some(t)
}

/// `c = b`, where the condition holds identically.
pub fn gen_trivial(dim: usize, seed: u64, bound: i64) -> Result<Triple<Gaussian>, GenError> {
    let kind = StrategyKind::Trivial;
    check_dim(kind, dim, 1)?;
    let bound = bound.max(1);
    let mut rng = rng_for(kind, seed, dim);
    let rank = rng.gen_range(1..=dim);
    let chain = rng.gen_range(0..=2);
    let (a0, b0) = planted_pair(&mut rng, dim, rank, chain, bound);
    let (u, u_inv) = unimodular_pair(&mut rng, dim);
    let a = conjugate(&a0, &u, &u_inv);
    let b = conjugate(&b0, &u, &u_inv);
    finish(a, b.clone(), b, kind, seed).ok_or(GenError::RetryExhausted {
        strategy: kind,
        attempts: 1,
    })
}

/// Scales each column of a rational matrix to a primitive integer vector.
fn integral_columns(m: &ExactMatrix) -> ExactMatrix {
    let mut out = m.clone();
    for j in 0..m.cols() {
        let mut lcm = num_bigint::BigInt::one();
        for i in 0..m.rows() {
            lcm = lcm.lcm(m.get(i, j).re.denom());
        }
        let factor = Gaussian::real(num_rational::BigRational::from_integer(lcm));
        for i in 0..m.rows() {
            out.set(i, j, m.get(i, j).clone() * factor.clone());
        }
    }
    out
}

/// `aba = aca` with `b != c`: `c = b + k` where `k = K_r R_1 + R_2 K_l^T`,
/// `K_r` spanning `ker a` and `K_l` spanning `ker a^T`, so `a k a = 0`.
pub fn gen_corach(dim: usize, seed: u64, bound: i64) -> Result<Triple<Gaussian>, GenError> {
    let kind = StrategyKind::Corach;
    check_dim(kind, dim, 2)?;
    let bound = bound.max(1);
    let mut rng = rng_for(kind, seed, dim);
    for _ in 0..MAX_ATTEMPTS {
        let rank = rng.gen_range(1..dim);
        let chain = rng.gen_range(0..=2);
        let (a0, b0) = planted_pair(&mut rng, dim, rank, chain, bound);
        let (u, u_inv) = unimodular_pair(&mut rng, dim);
        let a = conjugate(&a0, &u, &u_inv);
        let b = conjugate(&b0, &u, &u_inv);

        let right = integral_columns(&a.null_space(EXACT));
        let left = integral_columns(&a.transpose().null_space(EXACT));
        let r1 = random_rect(&mut rng, right.cols(), dim, 1);
        let r2 = random_rect(&mut rng, dim, left.cols(), 1);
        let k = &(&right * &r1) + &(&r2 * &left.transpose());
        if k.is_zero() {
            continue;
        }
        let c = &b + &k;
        if let Some(t) = finish(a, b, c, kind, seed) {
            return Ok(t);
        }
    }
    Err(GenError::RetryExhausted {
        strategy: kind,
        attempts: MAX_ATTEMPTS,
    })
}

/// Integer vector orthogonal (bilinear, no conjugation) to `u`.
fn orthogonal_to(rng: &mut ChaCha8Rng, u: &[i64], bound: i64) -> Vec<i64> {
    let w: Vec<i64> = (0..u.len()).map(|_| random_entry(rng, bound)).collect();
    let uu: i64 = u.iter().map(|x| x * x).sum();
    let uw: i64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
    w.iter().zip(u).map(|(wi, ui)| uu * wi - uw * ui).collect()
}

fn outer(u: &[i64], v: &[i64]) -> ExactMatrix {
    Matrix::rect_from_fn(u.len(), v.len(), |i, j| Gaussian::int(u[i] * v[j]))
}

/// Generalizes the reference fixture: `a = [[I, -I, 0], [0, 0, 0], ...]`
/// with `h = dim / 2`, so `aba` and `aca` only see `D = B11 - B21` and
/// `E = C11 - C21`. Choosing `D = u p^T`, `E = u q^T` with `p, q ⟂ u`
/// makes every product in the condition vanish, while `p != q` keeps
/// `aba != aca`.
pub fn gen_block_nilpotent(
    dim: usize,
    seed: u64,
    bound: i64,
) -> Result<Triple<Gaussian>, GenError> {
    let kind = StrategyKind::BlockNilpotent;
    check_dim(kind, dim, 4)?;
    if dim == 4 && seed == EXAMPLE_SEED {
        let mut t = example_33();
        t.source = kind;
        return Ok(t);
    }
    let bound = bound.max(1);
    let h = dim / 2;
    let mut rng = rng_for(kind, seed, dim);
    for _ in 0..MAX_ATTEMPTS {
        let u: Vec<i64> = (0..h).map(|_| random_entry(&mut rng, bound)).collect();
        if u.iter().all(|&x| x == 0) {
            continue;
        }
        let p = orthogonal_to(&mut rng, &u, bound);
        let q = orthogonal_to(&mut rng, &u, bound);
        if p == q {
            continue;
        }
        let d = outer(&u, &p);
        let e = outer(&u, &q);

        let mut a0 = ExactMatrix::zeros(dim);
        place(&mut a0, 0, 0, &ExactMatrix::identity(h));
        place(&mut a0, 0, h, &-&ExactMatrix::identity(h));
        let mut b0 = random_rect(&mut rng, dim, dim, bound);
        let mut c0 = random_rect(&mut rng, dim, dim, bound);
        let b11 = b0
            .select_rows(&(0..h).collect::<Vec<_>>())
            .select_columns(&(0..h).collect::<Vec<_>>());
        let c11 = c0
            .select_rows(&(0..h).collect::<Vec<_>>())
            .select_columns(&(0..h).collect::<Vec<_>>());
        place(&mut b0, h, 0, &(&b11 - &d));
        place(&mut c0, h, 0, &(&c11 - &e));

        let (uni, uni_inv) = unimodular_pair(&mut rng, dim);
        let a = conjugate(&a0, &uni, &uni_inv);
        let b = conjugate(&b0, &uni, &uni_inv);
        let c = conjugate(&c0, &uni, &uni_inv);
        let aba = &(&a * &b) * &a;
        let aca = &(&a * &c) * &a;
        if aba == aca {
            continue;
        }
        if let Some(t) = finish(a, b, c, kind, seed) {
            return Ok(t);
        }
    }
    Err(GenError::RetryExhausted {
        strategy: kind,
        attempts: MAX_ATTEMPTS,
    })
}

/// Rejection sampling over integer matrices with entries in `[-bound, bound]`.
pub fn gen_random_search(
    dim: usize,
    seed: u64,
    bound: i64,
    max_tries: usize,
) -> Result<(Triple<Gaussian>, SearchStats), GenError> {
    let kind = StrategyKind::RandomSearch;
    check_dim(kind, dim, 1)?;
    let bound = bound.abs();
    let mut rng = rng_for(kind, seed, dim);
    let mut stats = SearchStats::default();
    while stats.tries < max_tries {
        stats.tries += 1;
        let a = random_rect(&mut rng, dim, dim, bound);
        let b = random_rect(&mut rng, dim, dim, bound);
        let c = random_rect(&mut rng, dim, dim, bound);
        if let Some(t) = finish(a, b, c, kind, seed) {
            stats.found = true;
            return Ok((t, stats));
        }
    }
    Err(GenError::NotFound { stats })
}

/// Random integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix(dim: usize, seed: u64, bound: i64) -> ExactMatrix {
    let mut rng = rng_for(StrategyKind::Input, seed, dim);
    random_rect(&mut rng, dim, dim, bound.abs())
}

/// Random integer matrix `U diag(G, N) U^{-1}` with `N` strictly upper
/// triangular of random size, so the Drazin index ranges over `0..=dim`.
pub fn random_structured_matrix(dim: usize, seed: u64, bound: i64) -> ExactMatrix {
    let mut rng = rng_for(StrategyKind::Input, seed.wrapping_add(0x5bd1_e995), dim);
    let bound = bound.abs().max(1);
    let nil = rng.gen_range(0..=dim);
    let r = dim - nil;
    let g = random_rect(&mut rng, r, r, bound);
    let mut n = ExactMatrix::rect_zeros(nil, nil);
    for i in 0..nil {
        for j in i + 1..nil {
            let v = if j == i + 1 && rng.gen_bool(0.75) {
                1
            } else {
                random_entry(&mut rng, bound)
            };
            n.set(i, j, Gaussian::int(v));
        }
    }
    let mut m = ExactMatrix::zeros(dim);
    place(&mut m, 0, 0, &g);
    place(&mut m, r, r, &n);
    let (u, u_inv) = unimodular_pair(&mut rng, dim);
    conjugate(&m, &u, &u_inv)
}

/// Random integer pair `(a, b)` for the two-element identities.
pub fn random_pair(dim: usize, seed: u64, bound: i64) -> (ExactMatrix, ExactMatrix) {
    let mut rng = rng_for(StrategyKind::RandomSearch, seed ^ 0x9e37_79b9, dim);
    let bound = bound.abs();
    let a = random_rect(&mut rng, dim, dim, bound);
    let b = random_rect(&mut rng, dim, dim, bound);
    (a, b)
}

/// One triple per `(strategy, seed)` for the engineered families, cycling
/// dimensions through each family's admissible range up to `max_dim`.
pub fn standard_corpus(
    per_strategy: usize,
    max_dim: usize,
    base_seed: u64,
) -> Vec<Result<Triple<Gaussian>, GenError>> {
    let families = [
        (StrategyKind::Trivial, 1),
        (StrategyKind::Corach, 2),
        (StrategyKind::BlockNilpotent, 4),
    ];
    let mut out = Vec::new();
    for (kind, min_dim) in families {
        if max_dim < min_dim {
            continue;
        }
        let span = max_dim - min_dim + 1;
        for i in 0..per_strategy {
            let dim = min_dim + i % span;
            let seed = base_seed.wrapping_add(i as u64 + 1);
            out.push(GenStrategy::new(kind, seed, dim).generate());
        }
    }
    out
}

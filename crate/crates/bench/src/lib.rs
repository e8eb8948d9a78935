//! Inputs shared by the benchmarks.

use hodgecalc::harness::generators::{generate_polarized_fixture, random_summands, Block, Frame};
use hodgecalc::hodge::SesquilinearForm;
use hodgecalc::nilpotent::{jordan_matrix, NilpotentOp};
use hodgecalc::sl2hodge::{BiSl2HodgeData, PolarizedCone};
use hodgecalc::{Matrix, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense `n × n` matrix of small Gaussian integers.
pub fn dense_matrix(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * n)
        .map(|_| Scalar::gaussian(rng.random_range(-3..=3), rng.random_range(-1..=1)))
        .collect();
    Matrix::new(n, n, data)
}

/// Jordan type `sizes` in scrambled coordinates.
pub fn scrambled_nilpotent(sizes: &[usize], seed: u64) -> NilpotentOp {
    let m = jordan_matrix(sizes);
    let f = Frame::random(m.rows(), &mut ChaCha8Rng::seed_from_u64(seed));
    NilpotentOp::new(f.operator(&m)).expect("conjugate of a nilpotent")
}

pub fn merge_input(seed: u64, max_dim: usize) -> (BiSl2HodgeData, SesquilinearForm) {
    generate_polarized_fixture(seed, &random_summands(seed, max_dim))
        .expect("generated fixture")
        .bisl2()
}

/// The Jordan-tensor cone `irrep(a) ⊗ irrep(b)` in scrambled coordinates.
pub fn scrambled_cone(a: u32, b: u32, seed: u64) -> PolarizedCone {
    let block = Block::irrep(a).tensor(&Block::irrep(b).swap());
    let f = Frame::random(block.dim(), &mut ChaCha8Rng::seed_from_u64(seed));
    f.cone(&block.cone())
}

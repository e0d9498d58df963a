//! Fixtures shared by the benchmarks under `benches/`.

use codesign_core::lqg::CtLqgSystem;
use nalgebra::DMatrix;

/// Chain of `n` masses with a force on the last one, positions observed.
pub fn mass_chain(n: usize) -> CtLqgSystem {
    let k = 2 * n;
    let mut a = DMatrix::zeros(k, k);
    for i in 0..n {
        a[(2 * i, 2 * i + 1)] = 1.0;
        a[(2 * i + 1, 2 * i)] = -2.0;
        a[(2 * i + 1, 2 * i + 1)] = -0.1;
        if i > 0 {
            a[(2 * i + 1, 2 * i - 2)] = 1.0;
        }
        if i + 1 < n {
            a[(2 * i + 1, 2 * i + 2)] = 1.0;
        }
    }
    let mut b = DMatrix::zeros(k, 1);
    b[(k - 1, 0)] = 1.0;
    let c = DMatrix::from_fn(n, k, |i, j| if j == 2 * i { 1.0 } else { 0.0 });
    CtLqgSystem::new(
        a,
        b,
        c,
        DMatrix::identity(k, k) * 0.1,
        DMatrix::identity(n, n) * 0.01,
        DMatrix::identity(k, k),
        DMatrix::identity(1, 1),
        1.0,
    )
    .expect("mass chain is stabilizable and detectable")
}

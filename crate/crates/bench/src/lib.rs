//! Shared inputs for the benchmarks.

use ramsat_core::encoder::{encode_circulant, encode_ramsey};
use ramsat_core::solver::{decode, solve};
use ramsat_core::{BackendKind, ColorMatrix, Limits, RamseyParams};

/// A circulant (4,3,3;29) coloring, found by the solver.
pub fn circulant_29() -> ColorMatrix {
    let p: RamseyParams = "4,3,3:29".parse().expect("params");
    let (vm, mut f) = encode_ramsey(&p);
    f.extend(encode_circulant(&vm));
    let r = solve(&f, &BackendKind::Cadical, &Limits::unlimited()).expect("solve");
    decode(r.model.as_ref().expect("circulant coloring exists"), &vm).expect("decode")
}

/// Pseudo-random complete `k`-coloring of `K_n`.
pub fn random_coloring(n: usize, k: u8, seed: u64) -> ColorMatrix {
    let mut x = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    ColorMatrix::from_fn(n, k, |_, _| {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x % u64::from(k)) as u8 + 1
    })
}

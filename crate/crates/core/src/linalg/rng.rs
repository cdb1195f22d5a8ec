use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::DenseMatrix;

/// Seed for every randomized routine.
///
/// Streams are xoshiro256++ generators whose 256-bit state is expanded from
/// the 64-bit seed by SplitMix64. [`Seed::split`] derives independent child
/// seeds by mixing a stream index into the parent value, so a single
/// user-facing seed can feed many routines reproducibly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(self.0)
    }

    /// Child seed for stream `index`.
    pub fn split(self, index: u64) -> Seed {
        // one SplitMix64 finalizer round over the combined word
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }

    /// Matrix with i.i.d. standard normal entries, filled row by row.
    pub fn gaussian_matrix(self, rows: usize, cols: usize) -> DenseMatrix {
        let mut rng = self.rng();
        DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
    }

    /// Matrix with i.i.d. entries uniform on `[-1, 1)`.
    pub fn uniform_matrix(self, rows: usize, cols: usize) -> DenseMatrix {
        let mut rng = self.rng();
        DenseMatrix::from_fn(rows, cols, |_, _| uniform_pm1(&mut rng))
    }

    /// `len` values uniform on `[lo, hi)`.
    pub fn uniform_vec(self, len: usize, lo: f64, hi: f64) -> alloc::vec::Vec<f64> {
        let mut rng = self.rng();
        (0..len)
            .map(|_| lo + (hi - lo) * 0.5 * (uniform_pm1(&mut rng) + 1.0))
            .collect()
    }
}

fn uniform_pm1(rng: &mut impl RngCore) -> f64 {
    // 53 random mantissa bits
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    2.0 * u - 1.0
}

//! Reproducible random windows.
//!
//! The generator is xoshiro256** (Blackman and Vigna) seeded through
//! SplitMix64, which yields the same stream on every platform. Real and
//! imaginary parts are drawn uniformly from `[-1, 1]`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::group::FiniteAbelianGroup;
use crate::transforms::Window;

pub struct WindowRng(Xoshiro256StarStar);

impl WindowRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.0.gen_range(-1.0..=1.0), self.0.gen_range(-1.0..=1.0))
    }

    pub fn window(&mut self, g: &FiniteAbelianGroup) -> Window {
        let values = (0..g.order()).map(|_| self.complex()).collect();
        Window::new(g, values).expect("finite values of the right length")
    }

    /// Uniform index in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn unit(&mut self) -> f64 {
        self.0.gen_range(0.0..1.0)
    }
}

/// The window used by `random:<seed>`.
pub fn random_window(g: &FiniteAbelianGroup, seed: u64) -> Window {
    WindowRng::new(seed).window(g)
}

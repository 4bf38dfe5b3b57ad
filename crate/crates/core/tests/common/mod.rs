//! Shared test support: a deterministic splitmix64 generator so random-input
//! tests are reproducible without external crates.
#![allow(dead_code)] // each test binary uses its own subset of the helpers

use num_complex::Complex64;

pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_u32_below(&mut self, bound: u32) -> u32 {
        (self.next_u64() % u64::from(bound)) as u32
    }

    /// Uniform over the disk |z| <= radius.
    pub fn complex_in_disk(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.next_f64().sqrt();
        let t = self.in_range(0.0, std::f64::consts::TAU);
        Complex64::from_polar(r, t)
    }

    /// Uniform over the annulus r_lo <= |z| <= r_hi.
    pub fn complex_in_annulus(&mut self, r_lo: f64, r_hi: f64) -> Complex64 {
        let r = (self.in_range(r_lo * r_lo, r_hi * r_hi)).sqrt();
        let t = self.in_range(0.0, std::f64::consts::TAU);
        Complex64::from_polar(r, t)
    }
}

use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::fm;

/// Counter-addressed random source.
///
/// A `(seed, stream)` pair selects a ChaCha8 key and nonce; draws are taken
/// at explicit counter positions, so a work item that owns counters
/// `[k, k + n)` produces the same values whichever thread runs it and in
/// whatever order items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
}

/// u64 draws are two ChaCha words each.
const WORDS_PER_DRAW: u128 = 2;

impl RandomStream {
    pub const fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Cursor positioned at draw index `counter`.
    pub fn cursor(&self, counter: u64) -> SampleCursor {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(counter as u128 * WORDS_PER_DRAW);
        SampleCursor { rng }
    }
}

/// Sequential reader over a [`RandomStream`], starting at some counter.
#[derive(Debug, Clone)]
pub struct SampleCursor {
    rng: ChaCha8Rng,
}

impl SampleCursor {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval (0, 1); one draw.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit-mean exponential; one draw.
    pub fn exponential(&mut self) -> f64 {
        -fm::ln(self.uniform())
    }

    /// Two independent standard normals (Box-Muller); two draws.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let r = fm::sqrt(-2.0 * fm::ln(self.uniform()));
        let t = 2.0 * PI * self.uniform();
        (r * fm::cos(t), r * fm::sin(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_streams_give_identical_bytes() {
        let a: Vec<u64> = {
            let mut c = RandomStream::new(7, 3).cursor(0);
            (0..1000).map(|_| c.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut c = RandomStream::new(7, 3).cursor(0);
            (0..1000).map(|_| c.next_u64()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn counter_addressing_is_order_independent() {
        let s = RandomStream::new(42, 0);
        let mut full = s.cursor(0);
        let seq: Vec<u64> = (0..64).map(|_| full.next_u64()).collect();
        // Read the tail first, then the head.
        let mut tail = s.cursor(40);
        let t: Vec<u64> = (0..24).map(|_| tail.next_u64()).collect();
        let mut head = s.cursor(0);
        let h: Vec<u64> = (0..40).map(|_| head.next_u64()).collect();
        assert_eq!(&seq[40..], &t[..]);
        assert_eq!(&seq[..40], &h[..]);
    }

    #[test]
    fn streams_and_seeds_differ() {
        let x = RandomStream::new(1, 0).cursor(0).next_u64();
        let y = RandomStream::new(1, 1).cursor(0).next_u64();
        let z = RandomStream::new(2, 0).cursor(0).next_u64();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn sample_moments_are_sane() {
        let mut c = RandomStream::new(11, 0).cursor(0);
        let n = 200_000;
        let mean_u: f64 = (0..n).map(|_| c.uniform()).sum::<f64>() / n as f64;
        let mean_e: f64 = (0..n).map(|_| c.exponential()).sum::<f64>() / n as f64;
        let mut s2 = 0.0;
        for _ in 0..n / 2 {
            let (a, b) = c.normal_pair();
            s2 += a * a + b * b;
        }
        assert!((mean_u - 0.5).abs() < 5e-3);
        assert!((mean_e - 1.0).abs() < 1e-2);
        assert!((s2 / n as f64 - 1.0).abs() < 1e-2);
    }
}

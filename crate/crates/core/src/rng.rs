//! Named, seeded random streams.
//!
//! Every stochastic decision in a run draws from one of a few labelled
//! streams. A stream is ChaCha8 keyed by the run seed, with the ChaCha stream
//! word derived from the label, so two labels never share state and the same
//! `(seed, label)` replays the same draws on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EDITS: &str = "edits";
pub const SELECTION: &str = "selection";
pub const ACCEPTANCE: &str = "acceptance";

/// FNV-1a, used only to map a stream label to a ChaCha stream word.
fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    label: String,
    counter: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, label: &str) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(label_hash(label));
        Self {
            seed,
            label: label.to_owned(),
            counter: 0,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Uniform index in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "cannot draw from an empty range");
        self.counter += 1;
        // Sampled as u64 so 32-bit targets see the same sequence.
        self.inner.random_range(0..n as u64) as usize
    }

    /// Uniform integer in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    /// Uniform real in `(0, 1]`. A threshold `t` compared as `t >= u` fires
    /// never for `t = 0` and always for `t = 1`.
    pub fn unit(&mut self) -> f64 {
        self.counter += 1;
        1.0 - self.inner.random::<f64>()
    }

    /// Two distinct indices in `0..n`, drawn without replacement.
    pub fn distinct_pair(&mut self, n: usize) -> (usize, usize) {
        assert!(n >= 2, "need at least two positions");
        let a = self.below(n);
        let mut b = self.below(n - 1);
        if b >= a {
            b += 1;
        }
        (a, b)
    }
}

/// The three streams a search run draws from.
#[derive(Debug, Clone)]
pub struct RunRng {
    /// Edit kinds, positions, compose lengths.
    pub edits: RngStream,
    /// Tournaments, crossover splits, harmony memory picks.
    pub selection: RngStream,
    /// Annealing, tabu aspiration, mutation coins, HMCR/PAR coins.
    pub acceptance: RngStream,
}

impl RunRng {
    pub fn new(seed: u64) -> Self {
        Self {
            edits: RngStream::new(seed, EDITS),
            selection: RngStream::new(seed, SELECTION),
            acceptance: RngStream::new(seed, ACCEPTANCE),
        }
    }
}

//! Counter-based random numbers.
//!
//! Every draw is a pure hash of `(seed, stream, counter, sub)`, so a sample
//! at sweep `t`, site `i` is the same no matter how work is scheduled or
//! resumed. Not cryptographic; statistical quality comes from two rounds of
//! the splitmix64 finalizer per word.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stateless generator keyed by a 64-bit seed and a stream id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix(seed ^ GOLDEN.wrapping_mul(stream).wrapping_add(stream));
        CounterRng { key }
    }

    /// The 64-bit word at position `(ctr, sub)` of this stream.
    #[inline]
    pub fn word(&self, ctr: u64, sub: u64) -> u64 {
        let a = mix(self.key ^ ctr.wrapping_mul(GOLDEN).wrapping_add(1));
        mix(a ^ sub.wrapping_mul(0xd1b5_4a32_d192_ed03).wrapping_add(2))
    }

    /// Uniform in `[0,1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, ctr: u64, sub: u64) -> f64 {
        (self.word(ctr, sub) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn bernoulli(&self, ctr: u64, sub: u64, p: f64) -> bool {
        self.uniform(ctr, sub) < p
    }

    /// Uniform integer in `[0, n)` by 128-bit multiply (no modulo bias worth
    /// caring about at n << 2^64).
    #[inline]
    pub fn below(&self, ctr: u64, sub: u64, n: u64) -> u64 {
        ((self.word(ctr, sub) as u128 * n as u128) >> 64) as u64
    }
}

/// Convenience sequential view over a `CounterRng`: an internal counter is
/// advanced on every draw. Used by instance generators, where only
/// whole-sequence reproducibility matters.
#[derive(Clone, Debug)]
pub struct SeqRng {
    rng: CounterRng,
    ctr: u64,
}

impl SeqRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeqRng {
            rng: CounterRng::new(seed, stream),
            ctr: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.ctr += 1;
        self.rng.word(self.ctr, 0)
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    #[inline]
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    #[inline]
    pub fn bool_with(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    /// Random subset of `items`, each kept with probability `p`.
    pub fn subset<T: Clone>(&mut self, items: &[T], p: f64) -> Vec<T> {
        items
            .iter()
            .filter(|_| self.bool_with(p))
            .cloned()
            .collect()
    }
}

//! SplitMix64 (Steele, Lea & Flood), used as an immutable value.
//!
//! A state is a `(seed, gamma)` pair. Drawing adds `gamma` to `seed` and
//! scrambles the result with the variant-13 finalizer. Splitting draws a new
//! seed and a new odd gamma from the parent. The constants and the mixing
//! functions are fixed, so a seed always yields the same stream.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Root seed of a test campaign, written as a decimal string. Plain JSON
/// numbers are accepted on input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seed(pub u64);

impl Serialize for Seed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(u64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::Number(n) => Ok(Seed(n)),
        }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Seed {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(Seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rng {
    seed: u64,
    gamma: u64,
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix_gamma(mut z: u64) -> u64 {
    z = (z ^ (z >> 33)).wrapping_mul(0xff51_afd7_ed55_8ccd);
    z = (z ^ (z >> 33)).wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    z = (z ^ (z >> 33)) | 1;
    if (z ^ (z >> 1)).count_ones() < 24 {
        z ^ 0xaaaa_aaaa_aaaa_aaaa
    } else {
        z
    }
}

impl Rng {
    pub fn from_seed(seed: Seed) -> Self {
        Rng { seed: seed.0, gamma: GOLDEN_GAMMA }
    }

    pub fn next_u64(self) -> (u64, Rng) {
        let seed = self.seed.wrapping_add(self.gamma);
        (mix64(seed), Rng { seed, gamma: self.gamma })
    }

    /// Two streams that share no draws with each other or with `self`.
    pub fn split(self) -> (Rng, Rng) {
        let (child_seed, rest) = self.next_u64();
        let gamma_seed = rest.seed.wrapping_add(rest.gamma);
        let parent = Rng { seed: gamma_seed, gamma: rest.gamma };
        let child = Rng { seed: child_seed, gamma: mix_gamma(gamma_seed) };
        (parent, child)
    }

    /// `n` independent streams, for fanning out over test cases.
    pub fn split_n(self, n: usize) -> (Vec<Rng>, Rng) {
        let mut rest = self;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let (parent, child) = rest.split();
            out.push(child);
            rest = parent;
        }
        (out, rest)
    }

    /// Uniform over the closed range `lo..=hi`; requires `lo <= hi`.
    pub fn next_in_range(self, lo: i64, hi: i64) -> (i64, Rng) {
        debug_assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            let (x, rng) = self.next_u64();
            return (x as i64, rng);
        }
        let span = span as u64;
        // Lemire's multiply-and-reject.
        let threshold = span.wrapping_neg() % span;
        let mut rng = self;
        loop {
            let (x, next) = rng.next_u64();
            rng = next;
            let m = x as u128 * span as u128;
            if (m as u64) >= threshold {
                return ((lo as i128 + (m >> 64) as i128) as i64, rng);
            }
        }
    }
}

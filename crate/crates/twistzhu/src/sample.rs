//! Seeded sampling for the verification suites: exhaustive low-weight
//! windows extended by reproducible pseudo-random rational combinations.
//! Samples are always drawn up front on one thread, so reports are a
//! function of (config, seed) alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{keys_up_to, FockVector, Sector};
use crate::rat::Rat;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rat(&mut self) -> Rat {
        let mut num = 0;
        while num == 0 {
            num = self.rng.gen_range(-9i64..=9);
        }
        Rat::new(num, self.rng.gen_range(1i64..=4))
    }

    /// Random combination of one to `terms` basis monomials below the depth
    /// bound (doubled).
    pub fn vector(&mut self, sector: Sector, max_depth2: i64, terms: usize) -> FockVector {
        let keys = keys_up_to(sector, max_depth2);
        let mut v = FockVector::zero(sector);
        let count = self.rng.gen_range(1..=terms.max(1));
        for _ in 0..count {
            let k = keys.choose(&mut self.rng).unwrap().clone();
            let c = self.rat();
            v.add_term(k, &c);
        }
        v
    }

    /// Exhaustive basis pairs up to `window2` plus `extra` random pairs.
    pub fn pairs(
        &mut self,
        sector: Sector,
        window2: i64,
        max_depth2: i64,
        extra: usize,
    ) -> Vec<(FockVector, FockVector)> {
        let window: Vec<FockVector> = keys_up_to(sector, window2)
            .into_iter()
            .map(FockVector::monomial)
            .collect();
        let mut out = Vec::new();
        for u in &window {
            for w in &window {
                out.push((u.clone(), w.clone()));
            }
        }
        for _ in 0..extra {
            out.push((
                self.vector(sector, max_depth2, 3),
                self.vector(sector, max_depth2, 3),
            ));
        }
        out
    }

    /// Random triples on top of an exhaustive window handled by the caller.
    pub fn triples(
        &mut self,
        sector: Sector,
        max_depth2: i64,
        count: usize,
    ) -> Vec<(FockVector, FockVector, FockVector)> {
        (0..count)
            .map(|_| {
                (
                    self.vector(sector, max_depth2, 2),
                    self.vector(sector, max_depth2, 2),
                    self.vector(sector, max_depth2, 2),
                )
            })
            .collect()
    }
}

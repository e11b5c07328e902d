//! Seeded generators for random Bott tower constants, J-vectors and classes.
//!
//! ChaCha8 keeps sequences identical across platforms, so a seed fully
//! determines every generated corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bott::BottSpec;
use crate::cohomology::CohomologyClass;
use crate::wedge::JVector;

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Corpus {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A spec of the given height with every constant drawn from
    /// `[-max_abs, max_abs]`.
    pub fn bott_spec_of_height(&mut self, height: usize, max_abs: i64) -> BottSpec {
        let mut spec = BottSpec::new(height.max(1)).expect("height >= 1");
        for j in 2..=spec.height() {
            for i in 1..j {
                let v = self.rng.gen_range(-max_abs..=max_abs);
                spec.set(i, j, v).expect("indices in range");
            }
        }
        spec
    }

    pub fn bott_spec(&mut self, heights: std::ops::RangeInclusive<usize>, max_abs: i64) -> BottSpec {
        let height = self.rng.gen_range(heights);
        self.bott_spec_of_height(height, max_abs)
    }

    /// A J-vector over `m` rays with `1..=max_extra` atomic steps.
    pub fn j_vector(&mut self, m: usize, max_extra: usize) -> JVector {
        let mut entries = vec![1; m];
        let extra = self.rng.gen_range(1..=max_extra.max(1));
        for _ in 0..extra {
            let i = self.rng.gen_range(0..m);
            entries[i] += 1;
        }
        JVector::new(entries).expect("entries >= 1")
    }

    pub fn class(&mut self, m: usize, max_abs: i64) -> CohomologyClass {
        CohomologyClass::new((0..m).map(|_| self.rng.gen_range(-max_abs..=max_abs)).collect())
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.rng);
    }
}

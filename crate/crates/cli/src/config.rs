//! Suite configuration: field choices, seeds and sample sizes.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use ffhgf::ffield::{build_field_with, DEFAULT_CAP};
use ffhgf::{Ctx, Elem, Error, Field, FieldSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Sample sizes for the randomized parts of the suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Samples {
    /// Random elements of W_Δ on top of its generators.
    pub random_w: usize,
    /// Random parameter matrices z per (Δ, q).
    pub random_z: usize,
    /// Random g ∈ GL₂ and h ∈ H_Δ per z.
    pub random_gh: usize,
    /// Random z per (Δ, q) for the point-count comparison.
    pub count_z: usize,
    /// Random functions on (k*)² for the Fourier suite.
    pub torus_fns: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples { random_w: 50, random_z: 20, random_gh: 5, count_z: 10, torus_fns: 50 }
    }
}

/// Everything a suite run depends on; runs are deterministic in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    /// Field sizes replacing each criterion's default list.
    pub fields: Option<Vec<u64>>,
    pub seed: u64,
    pub samples: Samples,
    /// Largest field (or extension) size that may be built.
    pub cap: u64,
    /// Which multiplicative generator to use (0 = smallest code).
    pub gen_rank: usize,
    /// Code a of the additive character ψ_a (None = ψ₁).
    pub psi: Option<u32>,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig {
            suite: suite.into(),
            fields: None,
            seed: 0,
            samples: Samples::default(),
            cap: DEFAULT_CAP,
            gen_rank: 0,
            psi: None,
        }
    }

    /// The configuration of the choice-independence re-run: second-smallest
    /// generator and the additive character ψ₂.
    pub fn alternative_choices(&self) -> Self {
        SuiteConfig { gen_rank: 1, psi: Some(2), ..self.clone() }
    }

    /// The field sizes to use where a criterion defaults to `default`.
    pub fn qs(&self, default: &[u64]) -> Vec<u64> {
        self.fields.clone().unwrap_or_else(|| default.to_vec())
    }

    /// Builds F_q with the configured generator; when fewer generators
    /// exist than the rank asks for, the smallest one is used instead.
    pub fn field(&self, q: u64) -> ffhgf::Result<Arc<Field>> {
        let spec = FieldSpec::from_q(q)?;
        match build_field_with(spec, self.cap, self.gen_rank) {
            Err(Error::NoSuchGenerator { .. }) => build_field_with(spec, self.cap, 0).map(Arc::new),
            other => other.map(Arc::new),
        }
    }

    /// Whether the generator of F_q is the requested one.
    pub fn generator_fallback(&self, q: u64) -> bool {
        FieldSpec::from_q(q)
            .map(|s| matches!(build_field_with(s, self.cap, self.gen_rank), Err(Error::NoSuchGenerator { .. })))
            .unwrap_or(false)
    }

    /// Character context over F_q with the configured ψ.
    pub fn ctx(&self, q: u64) -> ffhgf::Result<Ctx> {
        let f = self.field(q)?;
        match self.psi {
            None => Ok(Ctx::new(f)),
            Some(a) => {
                let a = Elem(a % f.q());
                Ctx::with_psi(f, if a.is_zero() { Elem::ONE } else { a })
            }
        }
    }

    /// A generator seeded by (seed, label), independent of evaluation order.
    pub fn rng(&self, label: &str) -> ChaCha8Rng {
        let mut h = DefaultHasher::new();
        label.hash(&mut h);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(h.finish());
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let c = SuiteConfig::new("x");
        let a: u64 = c.rng("one").gen();
        assert_eq!(a, c.rng("one").gen::<u64>());
        assert_ne!(a, c.rng("two").gen::<u64>());
    }

    #[test]
    fn generator_rank_falls_back_over_f3() {
        let c = SuiteConfig::new("x").alternative_choices();
        assert!(c.generator_fallback(3));
        assert!(!c.generator_fallback(5));
        assert_eq!(c.field(3).unwrap().generator(), Elem(2));
        assert_eq!(c.field(5).unwrap().generator(), Elem(3));
        assert_eq!(c.ctx(5).unwrap().psi().a, Elem(2));
    }
}

//! Reproducible random sources. One [`RngStream`] per trial: the same
//! (seed, stream) pair gives the identical draw sequence on any thread count.

use crate::error::{Error, Result};
use crate::float::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};

/// Per-scalar access to the base distributions. Implemented concretely for
/// `f32`/`f64` so generic code never carries rand_distr bounds around.
pub trait Draws: Sized {
    fn draw_normal(mean: Self, sd: Self, rng: &mut ChaCha8Rng) -> Option<Self>;
    fn draw_gamma(shape: Self, scale: Self, rng: &mut ChaCha8Rng) -> Option<Self>;
}

macro_rules! impl_draws {
    ($t:ty) => {
        impl Draws for $t {
            fn draw_normal(mean: Self, sd: Self, rng: &mut ChaCha8Rng) -> Option<Self> {
                Some(Normal::new(mean, sd).ok()?.sample(rng))
            }
            fn draw_gamma(shape: Self, scale: Self, rng: &mut ChaCha8Rng) -> Option<Self> {
                Some(Gamma::new(shape, scale).ok()?.sample(rng))
            }
        }
    };
}

impl_draws!(f32);
impl_draws!(f64);

/// A counter-based RNG stream keyed by (seed, stream_id).
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Draw from N(mean, variance).
pub fn sample_gaussian<S: Scalar>(mean: S, variance: S, rng: &mut RngStream) -> Result<S> {
    if !(variance > S::zero()) {
        return Err(Error::param("variance", format!("must be > 0, got {variance}")));
    }
    S::draw_normal(mean, variance.sqrt(), &mut rng.rng)
        .ok_or_else(|| Error::param("variance", "rejected by sampler".to_string()))
}

/// Draw from the chi distribution with `k` (possibly non-integer) degrees of
/// freedom, as the square root of a Gamma(k/2, scale 2) draw.
///
/// rand_distr's Gamma is the Marsaglia-Tsang squeeze sampler with the shape<1
/// boost, which is what makes fractional degrees of freedom (n-j)*beta work.
pub fn sample_chi<S: Scalar>(k: S, rng: &mut RngStream) -> Result<S> {
    if !(k > S::zero()) {
        return Err(Error::param("k", format!("degrees of freedom must be > 0, got {k}")));
    }
    S::draw_gamma(k / S::c(2.0), S::c(2.0), &mut rng.rng)
        .map(|g| g.sqrt())
        .ok_or_else(|| Error::param("k", "rejected by sampler".to_string()))
}

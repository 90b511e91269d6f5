use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one independent stream derived from `(seed, stream)`.
///
/// Bootstrap replicates and property trials each get their own stream so that
/// results do not depend on evaluation order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

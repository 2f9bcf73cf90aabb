use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for task `stream` of a run seeded with `seed`.
///
/// Independent streams let multistart runs execute in any order and still
/// produce identical results.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

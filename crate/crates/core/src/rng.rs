//! Seeded random streams.
//!
//! Every consumer of randomness draws from ChaCha8 keyed by the user seed,
//! with a distinct ChaCha stream id per purpose. Adding a new consumer
//! therefore never shifts the draws seen by an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags; the discriminant is the ChaCha stream id and must never change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    ErdosRenyi = 1,
    WattsStrogatz = 2,
    InitialPhases = 3,
}

pub fn stream(seed: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn purposes_are_independent_streams() {
        let a: u64 = stream(7, Purpose::ErdosRenyi).gen();
        let b: u64 = stream(7, Purpose::InitialPhases).gen();
        assert_ne!(a, b);
        let again: u64 = stream(7, Purpose::ErdosRenyi).gen();
        assert_eq!(a, again);
    }

    #[test]
    fn fixed_algorithm_snapshot() {
        // Pins the generator so seeded artifacts stay stable across releases.
        let mut rng = stream(0, Purpose::InitialPhases);
        let first: u64 = rng.gen();
        assert_eq!(first, 722_560_577_158_678_697);
    }
}

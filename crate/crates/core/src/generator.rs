//! Synthetic feasible instances shaped like overlapping digest fragments of a
//! residue chain: a hidden coloring is drawn first and every fragment reports
//! its true color counts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Color, ColorPrefix, Coloring, Instance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("need 1 <= min_len <= max_len <= chain_length, got min {min_len}, max {max_len}, chain {chain_length}")]
    BadLengths { chain_length: usize, min_len: usize, max_len: usize },
    #[error("fragment_count must be at least 1")]
    NoFragments,
}

/// Draws a hidden coloring and `fragment_count` random fragments whose
/// requirements are the hidden coloring's counts. Fragments are drawn with
/// replacement. Deterministic in `seed`.
pub fn random_hdx_instance(
    chain_length: usize,
    fragment_count: usize,
    min_len: usize,
    max_len: usize,
    seed: u64,
) -> Result<(Instance, Coloring), GeneratorError> {
    if min_len == 0 || min_len > max_len || max_len > chain_length {
        return Err(GeneratorError::BadLengths { chain_length, min_len, max_len });
    }
    if fragment_count == 0 {
        return Err(GeneratorError::NoFragments);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hidden = Coloring::new((0..chain_length).map(|_| Color::from_index(rng.gen_range(0..3))).collect());
    let prefix = ColorPrefix::new(&hidden);
    let spans: Vec<_> = (0..fragment_count)
        .map(|_| {
            let len = rng.gen_range(min_len..=max_len);
            let lo = rng.gen_range(1..=chain_length - len + 1);
            let hi = lo + len - 1;
            (lo, hi, prefix.range(lo, hi))
        })
        .collect();
    let inst = Instance::from_spans(chain_length, spans).expect("spans are in range by construction");
    Ok((inst, hidden))
}

/// Uniformly random coloring of `n` positions, deterministic in `seed`.
pub fn random_coloring(n: usize, seed: u64) -> Coloring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Coloring::new((0..n).map(|_| Color::from_index(rng.gen_range(0..3))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::emit_instance;
    use crate::model::{check_consistency, verify};

    #[test]
    fn single_full_fragment() {
        let (inst, hidden) = random_hdx_instance(5, 1, 5, 5, 11).unwrap();
        assert_eq!(inst.len(), 1);
        let iv = &inst.intervals()[0];
        assert_eq!((iv.lo, iv.hi, iv.req.total()), (1, 5, 5));
        assert!(verify(&inst, &hidden).unwrap().is_feasible());
    }

    #[test]
    fn planted_witness_verifies() {
        let (inst, hidden) = random_hdx_instance(50, 30, 3, 10, 7).unwrap();
        assert!(check_consistency(&inst).is_empty());
        assert!(verify(&inst, &hidden).unwrap().is_feasible());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_hdx_instance(40, 20, 2, 9, 3).unwrap();
        let b = random_hdx_instance(40, 20, 2, 9, 3).unwrap();
        assert_eq!(emit_instance(&a.0), emit_instance(&b.0));
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn random_coloring_is_seeded() {
        assert_eq!(random_coloring(30, 4), random_coloring(30, 4));
        assert_ne!(random_coloring(30, 4), random_coloring(30, 5));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(random_hdx_instance(5, 1, 0, 3, 0).is_err());
        assert!(random_hdx_instance(5, 1, 4, 3, 0).is_err());
        assert!(random_hdx_instance(5, 1, 3, 6, 0).is_err());
        assert_eq!(random_hdx_instance(5, 0, 1, 3, 0).unwrap_err(), GeneratorError::NoFragments);
    }
}

//! Koszul signs for permuting graded symbols.
//!
//! A permutation is given as a list of target positions: `perm[i]` is where
//! the element currently at position `i` ends up. Every swap of two symbols
//! of shifted degrees `p` and `q` contributes `(-1)^(p q)`.

use super::scalar::{sign, Scalar};
use crate::error::{Error, Result};

pub fn is_odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// Parity of the Koszul sign, `true` when the sign is `-1`.
pub fn koszul_parity(degrees: &[i64], perm: &[usize]) -> Result<bool> {
    let n = degrees.len();
    if perm.len() != n {
        return Err(Error::Malformed(format!(
            "permutation has length {} but {} degrees were given",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Malformed(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let mut odd = false;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] && is_odd(degrees[i]) && is_odd(degrees[j]) {
                odd = !odd;
            }
        }
    }
    Ok(odd)
}

pub fn koszul_sign(degrees: &[i64], perm: &[usize]) -> Result<Scalar> {
    koszul_parity(degrees, perm).map(sign)
}

/// Sign of exchanging two adjacent blocks of total shifted degrees `p` and `q`.
pub fn block_swap_odd(p: i64, q: i64) -> bool {
    is_odd(p) && is_odd(q)
}

/// Applies a permutation (target-position form) to a sequence.
pub fn permute<T: Clone>(items: &[T], perm: &[usize]) -> Vec<T> {
    let mut out: Vec<Option<T>> = vec![None; items.len()];
    for (i, x) in items.iter().enumerate() {
        out[perm[i]] = Some(x.clone());
    }
    out.into_iter().map(|x| x.expect("permutation")).collect()
}

/// Target-position form of the cyclic rotation moving the first `r` entries
/// to the back.
pub fn rotation(n: usize, r: usize) -> Vec<usize> {
    (0..n).map(|i| (i + n - r % n.max(1)) % n.max(1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::scalar::int;
    use proptest::prelude::*;

    #[test]
    fn swaps() {
        assert_eq!(koszul_sign(&[0, 0], &[1, 0]).unwrap(), int(1));
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]).unwrap(), int(-1));
    }

    #[test]
    fn rotation_example() {
        // (0,1,2) -> (1,2,0): inverted pairs (0,1),(0,2); sign (-1)^(1*0 + 1*1)
        assert_eq!(koszul_sign(&[1, 0, 1], &[1, 2, 0]).unwrap(), int(-1));
    }

    #[test]
    fn rotation_helper_moves_prefix_back() {
        let r = rotation(4, 1);
        assert_eq!(permute(&['a', 'b', 'c', 'd'], &r), vec!['b', 'c', 'd', 'a']);
    }

    #[test]
    fn length_mismatch_is_malformed() {
        assert!(matches!(
            koszul_sign(&[1, 1], &[0]),
            Err(Error::Malformed(_))
        ));
        assert!(koszul_sign(&[1, 1], &[0, 0]).is_err());
    }

    fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
        tau.iter().map(|&t| sigma[t]).collect()
    }

    proptest! {
        #[test]
        fn multiplicative(
            degrees in proptest::collection::vec(-1i64..3, 1..6),
            seed_a in any::<u64>(),
            seed_b in any::<u64>(),
        ) {
            let n = degrees.len();
            let shuffle = |mut seed: u64| {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    p.swap(i, (seed >> 33) as usize % (i + 1));
                }
                p
            };
            let sigma = shuffle(seed_a);
            let tau = shuffle(seed_b);
            let moved = permute(&degrees, &tau);
            let lhs = koszul_sign(&degrees, &compose(&sigma, &tau)).unwrap();
            let rhs = koszul_sign(&moved, &sigma).unwrap() * koszul_sign(&degrees, &tau).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

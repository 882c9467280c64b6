//! Node and edge counts of `O_n(k)` and `I_n^k` by formula.

use num_bigint::BigUint;

use crate::lattice::triangular;
use crate::scalar::{checked_pow, lift, Count};

fn tn_pow<C: Count>(n: u64, e: u32) -> Option<C> {
    checked_pow(&lift::<C>(triangular(n)), &BigUint::from(e))
}

/// `|O_n(k)|` by the recursion `|O_n(k)| = |O_n(k-1)| T_n - n^2 + 1`,
/// starting from `|O_n(1)| = T_{n+1}`.
pub fn overall_nodes_recursive<C: Count>(n: u64, k: u32) -> Option<C> {
    assert!(n >= 2 && k >= 1);
    let t = lift::<C>(triangular(n));
    let shrink = lift::<C>(n * n - 1);
    let mut acc = lift::<C>(triangular(n + 1));
    for _ in 1..k {
        acc = acc.checked_mul(&t)?.checked_sub(&shrink)?;
    }
    Some(acc)
}

/// `|O_n(k)| = ((n + 4) T_n^k + 2 (n + 1)) / (n + 2)`.
///
/// Returns `None` on overflow. Panics if the division is not exact, which
/// would mean the closed form was mistranscribed.
pub fn overall_nodes_explicit<C: Count>(n: u64, k: u32) -> Option<C> {
    assert!(n >= 2 && k >= 1);
    let num = lift::<C>(n + 4).checked_mul(&tn_pow::<C>(n, k)?)?.checked_add(&lift::<C>(2 * (n + 1)))?;
    let (q, r) = num.div_rem(&lift::<C>(n + 2));
    assert!(r.is_zero(), "|O_{n}({k})| closed form is not integral");
    Some(q)
}

/// `E(O_n(k)) = 3 T_n^k`.
pub fn overall_edges<C: Count>(n: u64, k: u32) -> Option<C> {
    lift::<C>(3).checked_mul(&tn_pow::<C>(n, k)?)
}

/// `|I_n^k| = T_n^k`.
pub fn inscribed_nodes<C: Count>(n: u64, k: u32) -> Option<C> {
    tn_pow(n, k)
}

/// `E(I_n^k) = sum_{i=1..k} 3 T_{n-1} T_n^{i-1}`.
pub fn inscribed_edges<C: Count>(n: u64, k: u32) -> Option<C> {
    let base = lift::<C>(3 * triangular(n - 1));
    (0..k).try_fold(C::zero(), |acc, i| acc.checked_add(&base.checked_mul(&tn_pow::<C>(n, i)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_node_examples() {
        assert_eq!(overall_nodes_recursive::<u64>(6, 3), Some(11578));
        assert_eq!(overall_nodes_explicit::<u64>(6, 3), Some(11578));
        assert_eq!(overall_nodes_explicit::<u64>(5, 6), Some(14645091));
        for k in 1..=12 {
            let closed = (4 * 10u128.pow(k) + 5) / 3;
            assert_eq!(overall_nodes_explicit::<u128>(4, k), Some(closed));
            assert_eq!(overall_nodes_recursive::<u128>(4, k), Some(closed));
        }
    }

    #[test]
    fn recursive_and_explicit_agree_in_bignum() {
        for n in 2..=20 {
            for k in 1..=15 {
                assert_eq!(
                    overall_nodes_recursive::<BigUint>(n, k),
                    overall_nodes_explicit::<BigUint>(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn word_overflow_is_reported() {
        assert_eq!(overall_nodes_explicit::<u32>(9, 10), None);
        assert_eq!(overall_nodes_recursive::<u32>(9, 10), None);
        assert!(overall_nodes_explicit::<BigUint>(9, 10).is_some());
    }

    #[test]
    fn edge_examples() {
        assert_eq!(overall_edges::<u64>(4, 2), Some(300));
        assert_eq!(overall_edges::<u64>(2, 1), Some(9));
        assert_eq!(overall_edges::<u64>(5, 3), Some(10125));
        assert_eq!(inscribed_nodes::<u64>(4, 2), Some(100));
        assert_eq!(inscribed_edges::<u64>(3, 1), Some(9));
        assert_eq!(inscribed_edges::<u64>(3, 2), Some(63));
    }
}

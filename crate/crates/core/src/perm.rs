//! Permutation helpers shared by the solvers and oracles.

use crate::error::{Error, Result};

/// Checks that `order` is a bijection on `0..n`.
pub fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::invalid(format!(
            "order has {} entries, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n {
            return Err(Error::invalid(format!(
                "index {i} out of range for {n} items"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::invalid(format!("index {i} appears twice")));
        }
    }
    Ok(())
}

/// Advances `v` to the next permutation in lexicographic order. Returns
/// `false` (leaving `v` sorted ascending) after the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut v: Vec<usize> = (0..n).collect();
    loop {
        f(&v);
        if !next_permutation(&mut v) {
            break;
        }
    }
}

pub fn reversed(order: &[usize]) -> Vec<usize> {
    order.iter().rev().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_permutations_in_order() {
        let mut seen = Vec::new();
        for_each_permutation(3, |p| seen.push(p.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0],
            ]
        );
        let mut count = 0;
        for_each_permutation(6, |_| count += 1);
        assert_eq!(count, 720);
    }

    #[test]
    fn single_and_empty() {
        let mut count = 0;
        for_each_permutation(1, |p| {
            assert_eq!(p, &[0]);
            count += 1
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn permutation_validation() {
        assert!(check_permutation(&[2, 0, 1], 3).is_ok());
        assert!(check_permutation(&[0, 0, 1], 3).is_err());
        assert!(check_permutation(&[0, 3, 1], 3).is_err());
        assert!(check_permutation(&[0, 1], 3).is_err());
    }
}

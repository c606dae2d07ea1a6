pub mod qap;
pub mod real;
pub mod tsp;

/// True when `perm` contains every value in `0..perm.len()` exactly once.
pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

#[cfg(test)]
mod tests {
    use super::is_permutation;

    #[test]
    fn permutation_check() {
        assert!(is_permutation(&[]));
        assert!(is_permutation(&[2, 0, 1]));
        assert!(!is_permutation(&[0, 0, 1]));
        assert!(!is_permutation(&[0, 3, 1]));
    }
}

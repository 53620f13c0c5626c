use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Greedy hitting set: repeatedly take the vertex in the most unhit sets,
/// breaking ties toward the smaller id. Output is sorted.
///
/// `k` is the promised minimum set size; a smaller set is rejected.
pub fn hitting_set(sets: &[Vec<usize>], k: f64) -> Result<Vec<usize>> {
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::Invalid(format!("set {i} is empty and cannot be hit")));
        }
        if (s.len() as f64) < k {
            return Err(Error::Invalid(format!("set {i} has {} < k = {k} elements", s.len())));
        }
    }
    let mut alive = vec![true; sets.len()];
    let mut remaining = sets.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for (s, _) in sets.iter().zip(&alive).filter(|(_, &a)| a) {
            for &v in s {
                *count.entry(v).or_default() += 1;
            }
        }
        // BTreeMap iterates ascending, so max_by_key with reversed id keeps the smallest
        let (&best, _) = count.iter().max_by_key(|&(&v, &c)| (c, std::cmp::Reverse(v))).unwrap();
        chosen.push(best);
        for (s, a) in sets.iter().zip(alive.iter_mut()) {
            if *a && s.contains(&best) {
                *a = false;
                remaining -= 1;
            }
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(hitting_set(&[vec![0, 1], vec![1, 2]], 2.0).unwrap(), vec![1]);
        assert_eq!(hitting_set(&[vec![0, 1], vec![2, 3]], 2.0).unwrap().len(), 2);
        assert_eq!(hitting_set(&[vec![4, 2, 3]], 1.0).unwrap().len(), 1);
        assert!(hitting_set(&[vec![]], 0.0).is_err());
        assert!(hitting_set(&[], 3.0).unwrap().is_empty());
    }
}

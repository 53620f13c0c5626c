use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Bucketing {
    pub i_star: usize,
    /// Positions (into the input) of the pairs in bucket `i*`.
    pub members: Vec<usize>,
    /// Total `γ` per bucket `0..=⌈log2 |P|⌉`.
    pub masses: Vec<BigRational>,
    pub x_star: Vec<f64>,
}

fn pow2_inv(i: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << i)
}

/// Buckets pairs by `γ ∈ (2^{-i-1}, 2^{-i}]`, picks the heaviest bucket
/// (ties to the smaller index) and scales `x* = min(1, 2^{i*+2} x)`.
/// `None` entries are pairs without mass. Returns `None` if every pair is.
pub fn bucket_and_scale(gammas: &[Option<BigRational>], x: &[f64]) -> Option<Bucketing> {
    let count = gammas.len().max(1);
    let top = (usize::BITS - (count - 1).leading_zeros()) as usize; // ⌈log2 count⌉
    let mut masses = vec![BigRational::zero(); top + 1];
    let mut bucket_of = vec![None; gammas.len()];
    for (p, g) in gammas.iter().enumerate() {
        let Some(g) = g else { continue };
        if let Some(i) = (0..=top).find(|&i| *g > pow2_inv(i + 1) && *g <= pow2_inv(i)) {
            masses[i] += g;
            bucket_of[p] = Some(i);
        }
    }
    let best = masses.iter().cloned().fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    if best.is_zero() {
        return None;
    }
    let i_star = masses.iter().position(|m| *m == best).unwrap();
    let members = (0..gammas.len()).filter(|&p| bucket_of[p] == Some(i_star)).collect();
    let scale = 2f64.powi(i_star as i32 + 2);
    let x_star = x.iter().map(|&v| (scale * v).min(1.0)).collect();
    Some(Bucketing { i_star, members, masses, x_star })
}

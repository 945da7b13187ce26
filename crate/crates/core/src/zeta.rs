//! In-place zeta and Möbius transforms over the subset lattice.
//!
//! Each transform is a sweep over the `n` coordinate directions, `O(n 2^n)`.

use crate::scalar::Scalar;

fn sweep<T: Scalar>(xs: &mut [T], mut step: impl FnMut(&mut T, &mut T)) {
    debug_assert!(xs.len().is_power_of_two());
    let len = xs.len();
    let mut half = 1;
    while half < len {
        for block in xs.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (z, o) in lo.iter_mut().zip(hi.iter_mut()) {
                step(z, o);
            }
        }
        half *= 2;
    }
}

/// `y[B] = sum_{A ⊆ B} x[A]`.
pub fn subset_sum<T: Scalar>(xs: &mut [T]) {
    sweep(xs, |z, o| *o += z.clone());
}

/// Inverse of [`subset_sum`]: `y[B] = sum_{A ⊆ B} (-1)^{|B|-|A|} x[A]`.
pub fn subset_mobius<T: Scalar>(xs: &mut [T]) {
    sweep(xs, |z, o| *o -= z.clone());
}

/// `y[A] = sum_{B ⊇ A} x[B]`.
pub fn superset_sum<T: Scalar>(xs: &mut [T]) {
    sweep(xs, |z, o| *z += o.clone());
}

/// Inverse of [`superset_sum`].
pub fn superset_mobius<T: Scalar>(xs: &mut [T]) {
    sweep(xs, |z, o| *z -= o.clone());
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn naive_subset_sum(xs: &[BigRational]) -> Vec<BigRational> {
        (0..xs.len())
            .map(|b| {
                (0..xs.len())
                    .filter(|a| a & !b == 0)
                    .fold(BigRational::from_i64(0), |acc, a| acc + xs[a].clone())
            })
            .collect()
    }

    #[test]
    fn transforms_match_naive_sums_and_invert() {
        let xs: Vec<BigRational> = (0..32).map(|i| BigRational::from_ratio(i * 7 % 11 - 5, 3)).collect();
        let mut ys = xs.clone();
        subset_sum(&mut ys);
        assert_eq!(ys, naive_subset_sum(&xs));
        subset_mobius(&mut ys);
        assert_eq!(ys, xs);

        let mut zs = xs.clone();
        superset_sum(&mut zs);
        for (a, z) in zs.iter().enumerate() {
            let want = (0..32usize)
                .filter(|b| a & !b == 0)
                .fold(BigRational::from_i64(0), |acc, b| acc + xs[b].clone());
            assert_eq!(*z, want);
        }
        superset_mobius(&mut zs);
        assert_eq!(zs, xs);
    }
}

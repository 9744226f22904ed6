//! Property tests for the spec-level invariants.

use proptest::prelude::*;

use mmd::exact;
use mmd::fast;
use mmd::{kernel_eval, median_heuristic, power_bandwidth, KernelSpec, Sample};

fn finite_values(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, len)
}

fn sigma_strategy() -> impl Strategy<Value = f64> {
    0.05f64..20.0
}

fn sorted_sample(values: Vec<f64>) -> Sample<f64> {
    Sample::univariate(values).unwrap().to_sorted().unwrap()
}

proptest! {
    #[test]
    fn kernel_symmetric_and_bounded(
        x in finite_values(1..5),
        shift in finite_values(1..5),
        sigma in sigma_strategy(),
        gaussian in any::<bool>(),
    ) {
        let d = x.len().min(shift.len());
        let x = &x[..d];
        let y: Vec<f64> = x.iter().zip(&shift[..d]).map(|(a, s)| a + s).collect();
        let spec = if gaussian {
            KernelSpec::gaussian(sigma).unwrap()
        } else {
            KernelSpec::laplacian(sigma).unwrap()
        };
        let kxy = kernel_eval(&spec, x, &y).unwrap();
        let kyx = kernel_eval(&spec, &y, x).unwrap();
        prop_assert_eq!(kxy, kyx);
        // Strict positivity holds up to the f64 underflow threshold of the
        // exponent; beyond it the kernel value is a clean zero.
        prop_assert!(kxy >= 0.0 && kxy <= 1.0);
        if kxy == 0.0 {
            let exponent = if gaussian {
                let sq: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
                sq / (2.0 * sigma * sigma)
            } else {
                let dist: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
                dist / sigma
            };
            prop_assert!(exponent > 700.0);
        }
        let same = kernel_eval(&spec, x, x).unwrap();
        prop_assert_eq!(same, 1.0);
        if x != y.as_slice() {
            prop_assert!(kxy < 1.0);
        }
    }

    #[test]
    fn laplacian_power_identity(
        x in -50.0f64..50.0,
        y in -50.0f64..50.0,
        sigma in sigma_strategy(),
        p in 1u32..=5,
    ) {
        let spec = KernelSpec::laplacian(sigma).unwrap();
        let powered = power_bandwidth(&spec, p).unwrap();
        let lhs = kernel_eval(&powered, &[x], &[y]).unwrap();
        let rhs = kernel_eval(&spec, &[x], &[y]).unwrap().powi(p as i32);
        prop_assert!((lhs - rhs).abs() <= 1e-14);
    }

    #[test]
    fn median_heuristic_translation_and_permutation_invariant(
        xv in finite_values(2..12),
        yv in finite_values(1..12),
        shift in -100.0f64..100.0,
        swap in any::<bool>(),
    ) {
        let x = Sample::univariate(xv.clone()).unwrap();
        let y = Sample::univariate(yv.clone()).unwrap();
        let base = match median_heuristic(&x, &y) {
            Ok(v) => v,
            Err(_) => return Ok(()), // degenerate all-ties draw
        };

        let mut xp = xv.clone();
        xp.reverse();
        let x_perm = Sample::univariate(xp).unwrap();
        let perm = if swap {
            median_heuristic(&y, &x_perm).unwrap()
        } else {
            median_heuristic(&x_perm, &y).unwrap()
        };
        prop_assert!((base - perm).abs() <= 1e-12 * base);

        let xs = Sample::univariate(xv.iter().map(|v| v + shift).collect()).unwrap();
        let ys = Sample::univariate(yv.iter().map(|v| v + shift).collect()).unwrap();
        let shifted = median_heuristic(&xs, &ys).unwrap();
        prop_assert!((base - shifted).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn row_sum_identity(values in finite_values(1..40), sigma in sigma_strategy()) {
        let s = sorted_sample(values);
        let acc = fast::prefix_suffix(&s, sigma).unwrap();
        let v = s.values().unwrap();
        prop_assert_eq!(acc.r()[0], 0.0);
        prop_assert_eq!(acc.l()[v.len() - 1], 0.0);
        for i in 0..v.len() {
            prop_assert!(acc.r()[i] >= 0.0 && acc.l()[i] >= 0.0);
            let brute: f64 = (0..v.len())
                .filter(|&j| j != i)
                .map(|j| (-(v[i] - v[j]).abs() / sigma).exp())
                .sum();
            prop_assert!((acc.row_sum(i) - brute).abs() <= 1e-12 * brute.max(1e-9));
        }
    }

    #[test]
    fn cross_row_sum_identity(
        xv in finite_values(1..24),
        yv in finite_values(1..24),
        sigma in sigma_strategy(),
        quantize in any::<bool>(),
    ) {
        let (mut xv, mut yv) = (xv, yv);
        if quantize {
            // Force merge ties between and within the samples.
            mmd_oracle::gen::quantize(&mut xv, 1.0);
            mmd_oracle::gen::quantize(&mut yv, 1.0);
        }
        let x = sorted_sample(xv);
        let y = sorted_sample(yv);
        let set = fast::cross_prefix_suffix(&x, &y, sigma).unwrap();
        let (bx, by) = mmd_oracle::laplace_cross_row_sums(
            x.values().unwrap(),
            y.values().unwrap(),
            sigma,
        );
        for (got, want) in set.xy_row_sums().iter().zip(&bx) {
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1e-9));
        }
        for (got, want) in set.yx_row_sums().iter().zip(&by) {
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1e-9));
        }
    }

    #[test]
    fn squared_kernel_pass_identity(values in finite_values(2..32), sigma in sigma_strategy()) {
        // Row sums at power_bandwidth(sigma, 2) recover the squared-kernel
        // sums at sigma.
        let s = sorted_sample(values);
        let spec = KernelSpec::laplacian(sigma).unwrap();
        let half = power_bandwidth(&spec, 2).unwrap().sigma();
        let acc = fast::prefix_suffix(&s, half).unwrap();
        let total: f64 = (0..s.len()).map(|i| acc.row_sum(i)).sum();
        let brute = mmd_oracle::laplace_sq_kernel_sum(s.values().unwrap(), sigma);
        prop_assert!((total - brute).abs() <= 1e-12 * brute.max(1e-9));
    }

    #[test]
    fn fast_mean_equals_matrix_mean(
        xv in finite_values(2..32),
        yv in finite_values(2..32),
        sigma in sigma_strategy(),
    ) {
        let x = Sample::univariate(xv).unwrap();
        let y = Sample::univariate(yv).unwrap();
        let fast_val = fast::mmd2_fast(&x, &y, sigma).unwrap();
        let spec = KernelSpec::laplacian(sigma).unwrap();
        let matrix_val = exact::mmd2_unbiased(&x, &y, &spec).unwrap();
        prop_assert!((fast_val - matrix_val).abs() <= 1e-11 * matrix_val.abs().max(1.0));
    }

    #[test]
    fn sample_order_and_swap_invariance(
        xv in finite_values(4..24),
        yv in finite_values(4..24),
        sigma in sigma_strategy(),
        seed in any::<u64>(),
    ) {
        let spec = KernelSpec::laplacian(sigma).unwrap();
        let x = Sample::univariate(xv.clone()).unwrap();
        let y = Sample::univariate(yv.clone()).unwrap();
        let base = exact::variance_full(&x, &y, &spec).unwrap();

        // Deterministic shuffle of X rows.
        let mut perm = xv.clone();
        let mut state = seed | 1;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled = exact::variance_full(&Sample::univariate(perm).unwrap(), &y, &spec).unwrap();
        prop_assert!((base.mmd2 - shuffled.mmd2).abs() <= 1e-12 * base.mmd2.abs().max(1.0));
        prop_assert!(
            (base.var_total - shuffled.var_total).abs()
                <= 1e-12 * base.var_total.abs().max(1e-9)
        );

        let swapped = exact::variance_full(&y, &x, &spec).unwrap();
        prop_assert!((base.mmd2 - swapped.mmd2).abs() <= 1e-12 * base.mmd2.abs().max(1.0));
        prop_assert!(
            (base.var_total - swapped.var_total).abs()
                <= 1e-12 * base.var_total.abs().max(1e-9)
        );
    }
}

//! Brute-force reference implementations for cross-checking the `mmd`
//! crate, plus deterministic test-instance generators.
//!
//! Everything here is written the slow, obvious way on purpose: explicit
//! kernel matrices, double loops, and distinct-index tuple enumeration
//! with falling-factorial denominators. Nothing calls into the estimator
//! paths it is used to check — only the `mmd` interface types are shared.
//! The CLI self-test ships these oracles, so this is a regular crate
//! rather than test-only code.

use mmd::{KernelFamily, KernelSpec, Sample};

pub mod gen;

/// Direct kernel evaluation, independent of `mmd::kernel_eval`.
pub fn kernel(spec: &KernelSpec<f64>, x: &[f64], y: &[f64]) -> f64 {
    match spec.family() {
        KernelFamily::Laplacian => {
            let dist: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
            (-dist / spec.sigma()).exp()
        }
        KernelFamily::Gaussian => {
            let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            (-sq / (2.0 * spec.sigma() * spec.sigma())).exp()
        }
    }
}

/// Within-sample kernel matrix with zero diagonal.
pub fn kernel_matrix_self(s: &Sample<f64>, spec: &KernelSpec<f64>) -> Vec<Vec<f64>> {
    let n = s.len();
    let mut mat = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                mat[i][j] = kernel(spec, s.row(i), s.row(j));
            }
        }
    }
    mat
}

/// Cross kernel matrix, n rows by m columns.
pub fn kernel_matrix_cross(
    x: &Sample<f64>,
    y: &Sample<f64>,
    spec: &KernelSpec<f64>,
) -> Vec<Vec<f64>> {
    let (n, m) = (x.len(), y.len());
    let mut mat = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            mat[i][j] = kernel(spec, x.row(i), y.row(j));
        }
    }
    mat
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|s| (n - s) as f64).product()
}

/// `A`, `B`, `C` components of the unbiased MMD^2.
pub fn mmd2_components(
    x: &Sample<f64>,
    y: &Sample<f64>,
    spec: &KernelSpec<f64>,
) -> (f64, f64, f64) {
    let (n, m) = (x.len() as f64, y.len() as f64);
    let kxx = kernel_matrix_self(x, spec);
    let kyy = kernel_matrix_self(y, spec);
    let kxy = kernel_matrix_cross(x, y, spec);
    let a: f64 = kxx.iter().flatten().sum::<f64>() / (n * (n - 1.0));
    let b: f64 = kyy.iter().flatten().sum::<f64>() / (m * (m - 1.0));
    let c: f64 = kxy.iter().flatten().sum::<f64>() / (n * m);
    (a, b, c)
}

pub fn mmd2(x: &Sample<f64>, y: &Sample<f64>, spec: &KernelSpec<f64>) -> f64 {
    let (a, b, c) = mmd2_components(x, y, spec);
    a + b - 2.0 * c
}

/// Empirical projections, straight from the definitions.
pub fn projections(
    x: &Sample<f64>,
    y: &Sample<f64>,
    spec: &KernelSpec<f64>,
) -> (Vec<f64>, Vec<f64>) {
    let (n, m) = (x.len(), y.len());
    let mut u = vec![0.0; n];
    for i in 0..n {
        let within: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| kernel(spec, x.row(i), x.row(j)))
            .sum();
        let across: f64 = (0..m).map(|j| kernel(spec, x.row(i), y.row(j))).sum();
        u[i] = within / (n as f64 - 1.0) - across / m as f64;
    }
    let mut v = vec![0.0; m];
    for j in 0..m {
        let within: f64 = (0..m)
            .filter(|&l| l != j)
            .map(|l| kernel(spec, y.row(j), y.row(l)))
            .sum();
        let across: f64 = (0..n).map(|i| kernel(spec, x.row(i), y.row(j))).sum();
        v[j] = within / (m as f64 - 1.0) - across / n as f64;
    }
    (u, v)
}

fn sample_var(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
}

/// First-order variance term from raw projection vectors.
pub fn var_t1(u: &[f64], v: &[f64]) -> f64 {
    let n = u.len() as f64;
    let m = v.len() as f64;
    4.0 * (n - 2.0) / (n * (n - 1.0)) * sample_var(u)
        + 4.0 * (m - 2.0) / (m * (m - 1.0)) * sample_var(v)
}

/// (frob_sq, rowsum_sq, grand_sum) of a zero-diagonal within-sample block.
pub fn self_functionals(s: &Sample<f64>, spec: &KernelSpec<f64>) -> (f64, f64, f64) {
    let mat = kernel_matrix_self(s, spec);
    let frob: f64 = mat.iter().flatten().map(|k| k * k).sum();
    let rowsum_sq: f64 = mat
        .iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            s * s
        })
        .sum();
    let grand: f64 = mat.iter().flatten().sum();
    (frob, rowsum_sq, grand)
}

/// (frob_sq, rowsum_sq, colsum_sq, grand_sum) of the cross block.
pub fn cross_functionals(
    x: &Sample<f64>,
    y: &Sample<f64>,
    spec: &KernelSpec<f64>,
) -> (f64, f64, f64, f64) {
    let mat = kernel_matrix_cross(x, y, spec);
    let (n, m) = (x.len(), y.len());
    let frob: f64 = mat.iter().flatten().map(|k| k * k).sum();
    let rowsum_sq: f64 = mat
        .iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            s * s
        })
        .sum();
    let colsum_sq: f64 = (0..m)
        .map(|j| {
            let s: f64 = (0..n).map(|i| mat[i][j]).sum();
            s * s
        })
        .sum();
    let grand: f64 = mat.iter().flatten().sum();
    (frob, rowsum_sq, colsum_sq, grand)
}

/// Unbiased second-order moments by exhaustive distinct-index tuple
/// enumeration. Feasible for n, m up to a dozen or so.
pub fn g2_moments_enumerated(
    x: &Sample<f64>,
    y: &Sample<f64>,
    spec: &KernelSpec<f64>,
) -> (f64, f64, f64) {
    let within = |mat: &[Vec<f64>]| -> f64 {
        let n = mat.len();
        let mut e_k2 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if j != i {
                    e_k2 += mat[i][j] * mat[i][j];
                }
            }
        }
        e_k2 /= falling(n, 2);

        // E[k(x, x') k(x, x'')] over distinct (i, j, l), shared first index.
        let mut e_proj = 0.0;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for l in 0..n {
                    if l == i || l == j {
                        continue;
                    }
                    e_proj += mat[i][j] * mat[i][l];
                }
            }
        }
        e_proj /= falling(n, 3);

        let mut e_theta2 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    for l in 0..n {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        e_theta2 += mat[i][j] * mat[k][l];
                    }
                }
            }
        }
        e_theta2 /= falling(n, 4);

        e_k2 - 2.0 * e_proj + e_theta2
    };

    let kxx = kernel_matrix_self(x, spec);
    let kyy = kernel_matrix_self(y, spec);
    let g2a = within(&kxx);
    let g2b = within(&kyy);

    let kxy = kernel_matrix_cross(x, y, spec);
    let (n, m) = (x.len(), y.len());

    let mut e_k2 = 0.0;
    for i in 0..n {
        for j in 0..m {
            e_k2 += kxy[i][j] * kxy[i][j];
        }
    }
    e_k2 /= n as f64 * m as f64;

    // E[k(x, y) k(x, y')]: shared x, distinct y pair.
    let mut e_px = 0.0;
    for i in 0..n {
        for j in 0..m {
            for l in 0..m {
                if l != j {
                    e_px += kxy[i][j] * kxy[i][l];
                }
            }
        }
    }
    e_px /= n as f64 * falling(m, 2);

    // E[k(x, y) k(x', y)]: shared y, distinct x pair.
    let mut e_py = 0.0;
    for j in 0..m {
        for i in 0..n {
            for l in 0..n {
                if l != i {
                    e_py += kxy[i][j] * kxy[l][j];
                }
            }
        }
    }
    e_py /= m as f64 * falling(n, 2);

    let mut e_theta2 = 0.0;
    for i in 0..n {
        for k in 0..n {
            if k == i {
                continue;
            }
            for j in 0..m {
                for l in 0..m {
                    if l == j {
                        continue;
                    }
                    e_theta2 += kxy[i][j] * kxy[k][l];
                }
            }
        }
    }
    e_theta2 /= falling(n, 2) * falling(m, 2);

    let g2c = e_k2 - e_px - e_py + e_theta2;
    (g2a, g2b, g2c)
}

/// Second-order variance term from the enumerated moments.
pub fn var_t2(g2a: f64, g2b: f64, g2c: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    2.0 / (n * (n - 1.0)) * g2a + 2.0 / (m * (m - 1.0)) * g2b + 4.0 / (n * m) * g2c
}

/// (mmd2, var_t1, var_t2, var_total) fully via the brute-force routes.
pub fn full_report(
    x: &Sample<f64>,
    y: &Sample<f64>,
    spec: &KernelSpec<f64>,
) -> (f64, f64, f64, f64) {
    let stat = mmd2(x, y, spec);
    let (u, v) = projections(x, y, spec);
    let t1 = var_t1(&u, &v);
    let (g2a, g2b, g2c) = g2_moments_enumerated(x, y, spec);
    let t2 = var_t2(g2a, g2b, g2c, x.len(), y.len());
    (stat, t1, t2, t1 + t2)
}

/// Off-diagonal Laplacian row sums of a univariate value slice.
pub fn laplace_row_sums(values: &[f64], sigma: f64) -> Vec<f64> {
    (0..values.len())
        .map(|i| {
            (0..values.len())
                .filter(|&j| j != i)
                .map(|j| (-(values[i] - values[j]).abs() / sigma).exp())
                .sum()
        })
        .collect()
}

/// Cross Laplacian row sums (per-x, per-y) of univariate value slices.
pub fn laplace_cross_row_sums(xs: &[f64], ys: &[f64], sigma: f64) -> (Vec<f64>, Vec<f64>) {
    let per_x = xs
        .iter()
        .map(|&a| ys.iter().map(|&b| (-(a - b).abs() / sigma).exp()).sum())
        .collect();
    let per_y = ys
        .iter()
        .map(|&b| xs.iter().map(|&a| (-(a - b).abs() / sigma).exp()).sum())
        .collect();
    (per_x, per_y)
}

/// `sum_{i != j} k_L(s_i, s_j)^2` at bandwidth sigma, squared explicitly.
pub fn laplace_sq_kernel_sum(values: &[f64], sigma: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i != j {
                let k = (-(values[i] - values[j]).abs() / sigma).exp();
                total += k * k;
            }
        }
    }
    total
}

//! Quadratic kernel-matrix reference path.
//!
//! Valid for any kernel family, any dimension, and any `n != m`. All
//! functionals exclude the within-sample diagonals and are reduced with
//! compensated summation in a fixed order, so this path doubles as the
//! numerical ground truth for the sorted fast path.

use crate::error::{MmdError, Result};
use crate::float::Real;
use crate::kernel::KernelSpec;
use crate::report::{EstimatePath, MmdReport};
use crate::sample::Sample;
use crate::sum::{self, NeumaierSum};

/// How kernel blocks are traversed.
///
/// `Streaming` evaluates tile-by-tile and keeps O(tile^2) transient state;
/// `Materialized` builds each full block in memory, which is what the
/// naive quadratic algorithm does and what the oracle tests and the memory
/// benchmark exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMode {
    Streaming { tile: usize },
    Materialized,
}

impl Default for MatrixMode {
    fn default() -> Self {
        MatrixMode::Streaming { tile: 1024 }
    }
}

/// Empirical Hoeffding projections of both samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionVectors<F> {
    pub u_hat: Vec<F>,
    pub v_hat: Vec<F>,
    pub u_mean: F,
    pub v_mean: F,
}

/// Scalar functionals of one within-sample kernel block (zero diagonal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStats<F> {
    /// Sum of squared off-diagonal entries.
    pub frob_sq: F,
    /// Squared L2 norm of the off-diagonal row sums.
    pub rowsum_sq: F,
    /// Grand sum of the off-diagonal entries.
    pub grand_sum: F,
}

/// Scalar functionals of the cross block (full matrix, no diagonal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossBlockStats<F> {
    pub frob_sq: F,
    /// `||K_xy 1_m||^2`: squared norm of the n per-x row sums.
    pub rowsum_sq: F,
    /// `||K_xy^T 1_n||^2`: squared norm of the m per-y column sums.
    pub colsum_sq: F,
    pub grand_sum: F,
}

/// The matrix functionals feeding the second-order moment estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelMatrixStats<F> {
    pub xx: BlockStats<F>,
    pub yy: BlockStats<F>,
    pub xy: CrossBlockStats<F>,
}

/// Unbiased estimates of the squared second-order projection components.
///
/// Individually unbiased, so slightly negative values are possible in
/// tiny samples; they are reported raw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderMoments<F> {
    pub g2a: F,
    pub g2b: F,
    pub g2c: F,
}

/// Row sums and Frobenius terms of all three blocks, one sweep each.
struct Aggregates<F> {
    rowsum_xx: Vec<F>,
    rowsum_yy: Vec<F>,
    rowsum_xy: Vec<F>,
    colsum_xy: Vec<F>,
    frob_xx: F,
    frob_yy: F,
    frob_xy: F,
}

fn check_pair<F: Real>(x: &Sample<F>, y: &Sample<F>, needed: usize) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(MmdError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if x.len() < needed || y.len() < needed {
        let err = if needed >= 4 {
            MmdError::InsufficientSampleForVariance {
                needed,
                n: x.len(),
                m: y.len(),
            }
        } else {
            MmdError::InsufficientSample {
                needed,
                n: x.len(),
                m: y.len(),
            }
        };
        return Err(err);
    }
    Ok(())
}

fn self_block_streaming<F: Real>(
    s: &Sample<F>,
    spec: &KernelSpec<F>,
    tile: usize,
) -> (Vec<F>, F) {
    let n = s.len();
    let mut rows = vec![NeumaierSum::new(); n];
    let mut frob = NeumaierSum::new();
    for ti in (0..n).step_by(tile) {
        let ri = ti..(ti + tile).min(n);
        for tj in (0..n).step_by(tile) {
            let rj = tj..(tj + tile).min(n);
            for i in ri.clone() {
                for j in rj.clone() {
                    if i == j {
                        continue;
                    }
                    let k = spec.eval_unchecked(s.row(i), s.row(j));
                    rows[i].add(k);
                    frob.add(k * k);
                }
            }
        }
    }
    (rows.iter().map(NeumaierSum::value).collect(), frob.value())
}

fn self_block_materialized<F: Real>(s: &Sample<F>, spec: &KernelSpec<F>) -> (Vec<F>, F) {
    let n = s.len();
    let mut mat = vec![F::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let k = spec.eval_unchecked(s.row(i), s.row(j));
            mat[i * n + j] = k;
            mat[j * n + i] = k;
        }
    }
    let mut rows = Vec::with_capacity(n);
    let mut frob = NeumaierSum::new();
    for i in 0..n {
        let mut row = NeumaierSum::new();
        for &k in &mat[i * n..(i + 1) * n] {
            row.add(k);
            frob.add(k * k);
        }
        rows.push(row.value());
    }
    (rows, frob.value())
}

fn cross_block_streaming<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
    tile: usize,
) -> (Vec<F>, Vec<F>, F) {
    let (n, m) = (x.len(), y.len());
    let mut rows = vec![NeumaierSum::new(); n];
    let mut cols = vec![NeumaierSum::new(); m];
    let mut frob = NeumaierSum::new();
    for ti in (0..n).step_by(tile) {
        let ri = ti..(ti + tile).min(n);
        for tj in (0..m).step_by(tile) {
            let rj = tj..(tj + tile).min(m);
            for i in ri.clone() {
                for j in rj.clone() {
                    let k = spec.eval_unchecked(x.row(i), y.row(j));
                    rows[i].add(k);
                    cols[j].add(k);
                    frob.add(k * k);
                }
            }
        }
    }
    (
        rows.iter().map(NeumaierSum::value).collect(),
        cols.iter().map(NeumaierSum::value).collect(),
        frob.value(),
    )
}

fn cross_block_materialized<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
) -> (Vec<F>, Vec<F>, F) {
    let (n, m) = (x.len(), y.len());
    let mut mat = vec![F::zero(); n * m];
    for i in 0..n {
        for j in 0..m {
            mat[i * m + j] = spec.eval_unchecked(x.row(i), y.row(j));
        }
    }
    let mut rows = Vec::with_capacity(n);
    let mut cols = vec![NeumaierSum::new(); m];
    let mut frob = NeumaierSum::new();
    for i in 0..n {
        let mut row = NeumaierSum::new();
        for (j, &k) in mat[i * m..(i + 1) * m].iter().enumerate() {
            row.add(k);
            cols[j].add(k);
            frob.add(k * k);
        }
        rows.push(row.value());
    }
    (
        rows,
        cols.iter().map(NeumaierSum::value).collect(),
        frob.value(),
    )
}

fn aggregates<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
    mode: MatrixMode,
) -> Aggregates<F> {
    match mode {
        MatrixMode::Streaming { tile } => {
            let tile = tile.max(1);
            let (rowsum_xx, frob_xx) = self_block_streaming(x, spec, tile);
            let (rowsum_yy, frob_yy) = self_block_streaming(y, spec, tile);
            let (rowsum_xy, colsum_xy, frob_xy) = cross_block_streaming(x, y, spec, tile);
            Aggregates {
                rowsum_xx,
                rowsum_yy,
                rowsum_xy,
                colsum_xy,
                frob_xx,
                frob_yy,
                frob_xy,
            }
        }
        MatrixMode::Materialized => {
            let (rowsum_xx, frob_xx) = self_block_materialized(x, spec);
            let (rowsum_yy, frob_yy) = self_block_materialized(y, spec);
            let (rowsum_xy, colsum_xy, frob_xy) = cross_block_materialized(x, y, spec);
            Aggregates {
                rowsum_xx,
                rowsum_yy,
                rowsum_xy,
                colsum_xy,
                frob_xx,
                frob_yy,
                frob_xy,
            }
        }
    }
}

impl<F: Real> Aggregates<F> {
    fn mmd2(&self) -> F {
        let n = F::from_count(self.rowsum_xx.len());
        let m = F::from_count(self.rowsum_yy.len());
        let one = F::one();
        let two = F::from_count(2);
        let a = sum::sum(&self.rowsum_xx) / (n * (n - one));
        let b = sum::sum(&self.rowsum_yy) / (m * (m - one));
        let c = sum::sum(&self.rowsum_xy) / (n * m);
        a + b - two * c
    }

    fn projections(&self) -> ProjectionVectors<F> {
        let n = self.rowsum_xx.len();
        let m = self.rowsum_yy.len();
        let nf = F::from_count(n);
        let mf = F::from_count(m);
        let u_hat: Vec<F> = self
            .rowsum_xx
            .iter()
            .zip(&self.rowsum_xy)
            .map(|(&xx, &xy)| xx / (nf - F::one()) - xy / mf)
            .collect();
        let v_hat: Vec<F> = self
            .rowsum_yy
            .iter()
            .zip(&self.colsum_xy)
            .map(|(&yy, &xy)| yy / (mf - F::one()) - xy / nf)
            .collect();
        let u_mean = sum::sum(&u_hat) / nf;
        let v_mean = sum::sum(&v_hat) / mf;
        ProjectionVectors {
            u_hat,
            v_hat,
            u_mean,
            v_mean,
        }
    }

    fn stats(&self) -> KernelMatrixStats<F> {
        KernelMatrixStats {
            xx: BlockStats {
                frob_sq: self.frob_xx,
                rowsum_sq: sum::sum_of_squares(&self.rowsum_xx),
                grand_sum: sum::sum(&self.rowsum_xx),
            },
            yy: BlockStats {
                frob_sq: self.frob_yy,
                rowsum_sq: sum::sum_of_squares(&self.rowsum_yy),
                grand_sum: sum::sum(&self.rowsum_yy),
            },
            xy: CrossBlockStats {
                frob_sq: self.frob_xy,
                rowsum_sq: sum::sum_of_squares(&self.rowsum_xy),
                colsum_sq: sum::sum_of_squares(&self.colsum_xy),
                grand_sum: sum::sum(&self.rowsum_xy),
            },
        }
    }
}

/// Unbiased estimator of the squared MMD: `A + B - 2C` with the
/// within-sample diagonals excluded.
pub fn mmd2_unbiased<F: Real>(x: &Sample<F>, y: &Sample<F>, spec: &KernelSpec<F>) -> Result<F> {
    check_pair(x, y, 2)?;
    Ok(aggregates(x, y, spec, MatrixMode::default()).mmd2())
}

/// Empirical projections of the pooled statistic onto each observation.
pub fn empirical_projections<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
) -> Result<ProjectionVectors<F>> {
    check_pair(x, y, 2)?;
    Ok(aggregates(x, y, spec, MatrixMode::default()).projections())
}

/// First-order variance term: weighted sum of the marginal sample
/// variances of the empirical projections.
pub fn var_t1<F: Real>(proj: &ProjectionVectors<F>) -> F {
    let n = proj.u_hat.len();
    let m = proj.v_hat.len();
    let four = F::from_count(4);
    let coeff = |len: usize| {
        let l = F::from_count(len);
        four * (l - F::from_count(2)) / (l * (l - F::one()))
    };
    coeff(n) * sum::sample_variance(&proj.u_hat) + coeff(m) * sum::sample_variance(&proj.v_hat)
}

/// The five matrix functionals per block, with XX/YY diagonals zeroed.
pub fn matrix_stats<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
) -> Result<KernelMatrixStats<F>> {
    matrix_stats_with(x, y, spec, MatrixMode::default())
}

pub fn matrix_stats_with<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
    mode: MatrixMode,
) -> Result<KernelMatrixStats<F>> {
    check_pair(x, y, 2)?;
    Ok(aggregates(x, y, spec, mode).stats())
}

/// Unbiased estimators of E[g2^2] for the three second-order components,
/// assembled from the matrix functionals with falling-factorial
/// denominators. Requires n, m >= 4 because (n)_3 and (n)_4 appear in
/// denominators.
pub fn second_order_moments<F: Real>(
    stats: &KernelMatrixStats<F>,
    n: usize,
    m: usize,
) -> Result<SecondOrderMoments<F>> {
    if n < 4 || m < 4 {
        return Err(MmdError::InsufficientSampleForVariance { needed: 4, n, m });
    }
    let two = F::from_count(2);
    let four = F::from_count(4);

    let within = |b: &BlockStats<F>, l: usize| {
        let f2 = F::falling_factorial(l, 2);
        let f3 = F::falling_factorial(l, 3);
        let f4 = F::falling_factorial(l, 4);
        b.frob_sq / f2 - two / f3 * (b.rowsum_sq - b.frob_sq)
            + (b.grand_sum * b.grand_sum - four * b.rowsum_sq + two * b.frob_sq) / f4
    };
    let g2a = within(&stats.xx, n);
    let g2b = within(&stats.yy, m);

    let nf = F::from_count(n);
    let mf = F::from_count(m);
    let n2 = F::falling_factorial(n, 2);
    let m2 = F::falling_factorial(m, 2);
    let xy = &stats.xy;
    // Each distinct-index tuple class pairs with its own falling-factorial
    // count: row sums couple (j, j') for fixed i, column sums couple
    // (i, i') for fixed j.
    let g2c = xy.frob_sq / (nf * mf) - (xy.rowsum_sq - xy.frob_sq) / (nf * m2)
        - (xy.colsum_sq - xy.frob_sq) / (mf * n2)
        + (xy.grand_sum * xy.grand_sum - xy.rowsum_sq - xy.colsum_sq + xy.frob_sq) / (n2 * m2);

    Ok(SecondOrderMoments { g2a, g2b, g2c })
}

/// Second-order variance term assembled from the moment estimates.
pub fn var_t2<F: Real>(moments: &SecondOrderMoments<F>, n: usize, m: usize) -> F {
    let two = F::from_count(2);
    let four = F::from_count(4);
    let nf = F::from_count(n);
    let mf = F::from_count(m);
    two / (nf * (nf - F::one())) * moments.g2a + two / (mf * (mf - F::one())) * moments.g2b
        + four / (nf * mf) * moments.g2c
}

/// Full report via the matrix path: MMD^2, Var(T1), Var(T2) and their sum.
pub fn variance_full<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
) -> Result<MmdReport<F>> {
    variance_full_with(x, y, spec, MatrixMode::default())
}

pub fn variance_full_with<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    spec: &KernelSpec<F>,
    mode: MatrixMode,
) -> Result<MmdReport<F>> {
    check_pair(x, y, 4)?;
    let (n, m) = (x.len(), y.len());
    let agg = aggregates(x, y, spec, mode);
    let t1 = var_t1(&agg.projections());
    let t2 = var_t2(&second_order_moments(&agg.stats(), n, m)?, n, m);
    Ok(MmdReport::assemble(
        agg.mmd2(),
        t1,
        t2,
        n,
        m,
        *spec,
        EstimatePath::Matrix,
    ))
}

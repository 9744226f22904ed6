//! Sorted-accumulator fast path for the univariate Laplacian kernel.
//!
//! `exp(-(a+b)) = exp(-a) exp(-b)` turns every kernel row sum over a sorted
//! sequence into a linear recursion: the prefix accumulator decays by the
//! gap to the previous element and the suffix accumulator by the gap to the
//! next. Squared-kernel sums reuse the same sweeps at bandwidth `sigma / 2`
//! (the Laplacian power identity), so the full variance report costs
//! O(n log n + m log m), all of it in the sorts.
//!
//! The entry points [`mmd2_fast`] and [`variance_fast`] sort unsorted
//! inputs themselves; the accumulator primitives demand the sortedness
//! certificate and fail otherwise.

use std::borrow::Cow;
use std::io::{self, Write};

use crate::error::{MmdError, Result};
use crate::exact::{
    second_order_moments, var_t1, var_t2, BlockStats, CrossBlockStats, KernelMatrixStats,
    ProjectionVectors,
};
use crate::float::Real;
use crate::kernel::{power_bandwidth, KernelSpec};
use crate::report::{EstimatePath, MmdReport};
use crate::sample::Sample;
use crate::sum::{self, NeumaierSum};

/// Origin tag of a merged-sequence element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    X,
    Y,
}

/// Prefix/suffix row-sum accumulators of one sorted sample (Proposition
/// semantics are 1-indexed; storage is 0-indexed with `r[0] = 0` and
/// `l[len-1] = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatorSet<F> {
    r: Vec<F>,
    l: Vec<F>,
    sigma_used: F,
}

impl<F: Real> AccumulatorSet<F> {
    pub fn r(&self) -> &[F] {
        &self.r
    }

    pub fn l(&self) -> &[F] {
        &self.l
    }

    pub fn sigma_used(&self) -> F {
        self.sigma_used
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `r[i] + l[i]`: the off-diagonal kernel row sum at element `i`.
    pub fn row_sum(&self, i: usize) -> F {
        self.r[i] + self.l[i]
    }

    /// Columnar debug dump: index, prefix, suffix, row sum.
    pub fn dump_columnar(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "index\tr\tl\trowsum")?;
        for i in 0..self.len() {
            writeln!(w, "{}\t{}\t{}\t{}", i + 1, self.r[i], self.l[i], self.row_sum(i))?;
        }
        Ok(())
    }
}

/// Cross-kernel accumulators over the merged sorted sequence.
///
/// `a_xy`/`z_xy` are restricted to X positions (in sorted-X order) and
/// `a_yx`/`z_yx` to Y positions; `labels` and `deltas` cover every merged
/// position (`deltas[0] = 0`). For each X element, `a_xy + z_xy` is its
/// cross row sum, and symmetrically for Y.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossAccumulatorSet<F> {
    a_xy: Vec<F>,
    z_xy: Vec<F>,
    a_yx: Vec<F>,
    z_yx: Vec<F>,
    labels: Vec<Origin>,
    deltas: Vec<F>,
    merged: Vec<F>,
    sigma_used: F,
}

impl<F: Real> CrossAccumulatorSet<F> {
    pub fn a_xy(&self) -> &[F] {
        &self.a_xy
    }

    pub fn z_xy(&self) -> &[F] {
        &self.z_xy
    }

    pub fn a_yx(&self) -> &[F] {
        &self.a_yx
    }

    pub fn z_yx(&self) -> &[F] {
        &self.z_yx
    }

    pub fn labels(&self) -> &[Origin] {
        &self.labels
    }

    pub fn deltas(&self) -> &[F] {
        &self.deltas
    }

    pub fn sigma_used(&self) -> F {
        self.sigma_used
    }

    /// Cross row sums for the X sample: `sum_j k_L(x_i, y_j)`.
    pub fn xy_row_sums(&self) -> Vec<F> {
        self.a_xy.iter().zip(&self.z_xy).map(|(&a, &z)| a + z).collect()
    }

    /// Cross row sums for the Y sample: `sum_i k_L(x_i, y_j)`.
    pub fn yx_row_sums(&self) -> Vec<F> {
        self.a_yx.iter().zip(&self.z_yx).map(|(&a, &z)| a + z).collect()
    }

    /// Columnar trace dump: merged index, value, origin label, gap, and
    /// the prefix/suffix accumulators for that position's own direction.
    pub fn dump_columnar(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "index\tvalue\tlabel\tdelta\tprefix\tsuffix")?;
        let (mut ix, mut iy) = (0usize, 0usize);
        for (k, (&label, &value)) in self.labels.iter().zip(&self.merged).enumerate() {
            let (tag, a, z) = match label {
                Origin::X => {
                    let row = (self.a_xy[ix], self.z_xy[ix]);
                    ix += 1;
                    ("X", row.0, row.1)
                }
                Origin::Y => {
                    let row = (self.a_yx[iy], self.z_yx[iy]);
                    iy += 1;
                    ("Y", row.0, row.1)
                }
            };
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                k + 1,
                value,
                tag,
                self.deltas[k],
                a,
                z
            )?;
        }
        Ok(())
    }
}

fn check_sigma<F: Real>(sigma: F) -> Result<()> {
    if !(sigma.is_finite() && sigma > F::zero()) {
        return Err(MmdError::InvalidBandwidth {
            sigma: sigma.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Values of a univariate sample carrying the sortedness certificate.
fn certified_values<F: Real>(s: &Sample<F>) -> Result<&[F]> {
    let values = s.values()?;
    if !s.is_sorted() {
        return Err(MmdError::UnsortedInput);
    }
    Ok(values)
}

/// Borrow the sample when already sorted, otherwise sort a copy.
fn sorted_cow<F: Real>(s: &Sample<F>) -> Result<Cow<'_, Sample<F>>> {
    if s.dim() != 1 {
        return Err(MmdError::NotUnivariate { dim: s.dim() });
    }
    if s.is_sorted() {
        Ok(Cow::Borrowed(s))
    } else {
        Ok(Cow::Owned(s.to_sorted()?))
    }
}

/// Lower-triangular Laplacian sum over a sorted slice:
/// `T = sum_{i} sum_{i' < i} k_L(s_i, s_{i'})` via `R_i = (R_{i-1} + 1) D_i`.
fn trissl_slice<F: Real>(values: &[F], sigma: F) -> F {
    let mut total = NeumaierSum::new();
    let mut r = F::zero();
    for w in values.windows(2) {
        r = (r + F::one()) * (-(w[1] - w[0]) / sigma).exp();
        total.add(r);
    }
    total.value()
}

/// Same triangular sum over the merged view of two sorted slices, without
/// materializing the merge. Ties take X first.
fn trissl_merged<F: Real>(xs: &[F], ys: &[F], sigma: F) -> F {
    let mut total = NeumaierSum::new();
    let mut r = F::zero();
    let mut prev: Option<F> = None;
    let (mut i, mut j) = (0usize, 0usize);
    while i < xs.len() || j < ys.len() {
        let take_x = j >= ys.len() || (i < xs.len() && xs[i] <= ys[j]);
        let v = if take_x {
            i += 1;
            xs[i - 1]
        } else {
            j += 1;
            ys[j - 1]
        };
        if let Some(p) = prev {
            r = (r + F::one()) * (-(v - p) / sigma).exp();
            total.add(r);
        }
        prev = Some(v);
    }
    total.value()
}

/// Off-diagonal row sums `R_i + L_i` of one sorted slice, one output array.
fn row_sums<F: Real>(values: &[F], sigma: F) -> Vec<F> {
    let n = values.len();
    let mut s = vec![F::zero(); n];
    let mut r = F::zero();
    for i in 1..n {
        r = (r + F::one()) * (-(values[i] - values[i - 1]) / sigma).exp();
        s[i] = r;
    }
    let mut l = F::zero();
    for i in (0..n.saturating_sub(1)).rev() {
        l = (l + F::one()) * (-(values[i + 1] - values[i]) / sigma).exp();
        s[i] += l;
    }
    s
}

/// Cross row sums for both directions via the merged two-pointer sweeps.
/// Returns (per-x sums, per-y sums) in sorted order.
fn cross_row_sums<F: Real>(xs: &[F], ys: &[F], sigma: F) -> (Vec<F>, Vec<F>) {
    let (n, m) = (xs.len(), ys.len());
    let mut sxy = vec![F::zero(); n];
    let mut syx = vec![F::zero(); m];

    // Forward: prefix contributions (sources at or before each position).
    let (mut i, mut j) = (0usize, 0usize);
    let (mut axy, mut ayx) = (F::zero(), F::zero());
    let mut prev: Option<F> = None;
    while i < n || j < m {
        let take_x = j >= m || (i < n && xs[i] <= ys[j]);
        let v = if take_x { xs[i] } else { ys[j] };
        if let Some(p) = prev {
            let d = (-(v - p) / sigma).exp();
            axy = axy * d;
            ayx = ayx * d;
        }
        if take_x {
            ayx += F::one();
            sxy[i] = axy;
            i += 1;
        } else {
            axy += F::one();
            syx[j] = ayx;
            j += 1;
        }
        prev = Some(v);
    }

    // Backward: suffix contributions (sources strictly after each position).
    let (mut i, mut j) = (n as isize - 1, m as isize - 1);
    let (mut zxy, mut zyx) = (F::zero(), F::zero());
    let mut next: Option<(F, bool)> = None;
    while i >= 0 || j >= 0 {
        // Reverse of the forward tie order: Y side first on equal values.
        let take_x = j < 0 || (i >= 0 && xs[i as usize] > ys[j as usize]);
        let v = if take_x {
            xs[i as usize]
        } else {
            ys[j as usize]
        };
        if let Some((nv, next_is_x)) = next {
            let d = (-(nv - v) / sigma).exp();
            zxy = d * (zxy + if next_is_x { F::zero() } else { F::one() });
            zyx = d * (zyx + if next_is_x { F::one() } else { F::zero() });
        }
        if take_x {
            sxy[i as usize] += zxy;
            i -= 1;
        } else {
            syx[j as usize] += zyx;
            j -= 1;
        }
        next = Some((v, take_x));
    }

    (sxy, syx)
}

/// Total cross Frobenius-style sum `sum_{i,j} k_L(x_i, y_j)` accumulated at
/// X positions, streaming (no per-position storage).
fn cross_total<F: Real>(xs: &[F], ys: &[F], sigma: F) -> F {
    let (n, m) = (xs.len(), ys.len());
    let mut total = NeumaierSum::new();

    let (mut i, mut j) = (0usize, 0usize);
    let mut axy = F::zero();
    let mut prev: Option<F> = None;
    while i < n || j < m {
        let take_x = j >= m || (i < n && xs[i] <= ys[j]);
        let v = if take_x { xs[i] } else { ys[j] };
        if let Some(p) = prev {
            axy = axy * (-(v - p) / sigma).exp();
        }
        if take_x {
            total.add(axy);
            i += 1;
        } else {
            axy += F::one();
            j += 1;
        }
        prev = Some(v);
    }

    let (mut i, mut j) = (n as isize - 1, m as isize - 1);
    let mut zxy = F::zero();
    let mut next: Option<(F, bool)> = None;
    while i >= 0 || j >= 0 {
        let take_x = j < 0 || (i >= 0 && xs[i as usize] > ys[j as usize]);
        let v = if take_x {
            xs[i as usize]
        } else {
            ys[j as usize]
        };
        if let Some((nv, next_is_x)) = next {
            let d = (-(nv - v) / sigma).exp();
            zxy = d * (zxy + if next_is_x { F::zero() } else { F::one() });
        }
        if take_x {
            total.add(zxy);
            i -= 1;
        } else {
            j -= 1;
        }
        next = Some((v, take_x));
    }

    total.value()
}

/// Triangular Sorted Sum of Laplacians over one sorted sample.
///
/// Equals the naive lower-triangular double sum; requires the sortedness
/// certificate.
pub fn trissl<F: Real>(s: &Sample<F>, sigma: F) -> Result<F> {
    check_sigma(sigma)?;
    Ok(trissl_slice(certified_values(s)?, sigma))
}

/// Prefix/suffix accumulators of one sorted sample (`R_i + L_i` is the
/// off-diagonal row sum at element `i`).
pub fn prefix_suffix<F: Real>(s: &Sample<F>, sigma: F) -> Result<AccumulatorSet<F>> {
    check_sigma(sigma)?;
    let values = certified_values(s)?;
    let n = values.len();
    let mut r = vec![F::zero(); n];
    for i in 1..n {
        r[i] = (r[i - 1] + F::one()) * (-(values[i] - values[i - 1]) / sigma).exp();
    }
    let mut l = vec![F::zero(); n];
    for i in (0..n.saturating_sub(1)).rev() {
        l[i] = (l[i + 1] + F::one()) * (-(values[i + 1] - values[i]) / sigma).exp();
    }
    Ok(AccumulatorSet {
        r,
        l,
        sigma_used: sigma,
    })
}

/// Cross-kernel prefix and suffix accumulators over the merged sequence.
///
/// On merge ties, X-origin elements precede Y-origin elements; the order is
/// mathematically irrelevant (zero gap) but fixed for reproducible dumps.
/// An element's own indicator feeds only the opposite-direction
/// accumulator, so self terms never leak into cross row sums, including at
/// the first and last merged positions.
pub fn cross_prefix_suffix<F: Real>(
    x: &Sample<F>,
    y: &Sample<F>,
    sigma: F,
) -> Result<CrossAccumulatorSet<F>> {
    check_sigma(sigma)?;
    let xs = certified_values(x)?;
    let ys = certified_values(y)?;
    let (n, m) = (xs.len(), ys.len());
    let total = n + m;

    let mut labels = Vec::with_capacity(total);
    let mut merged = Vec::with_capacity(total);
    let mut deltas = vec![F::zero(); total];
    let mut a_xy = vec![F::zero(); n];
    let mut z_xy = vec![F::zero(); n];
    let mut a_yx = vec![F::zero(); m];
    let mut z_yx = vec![F::zero(); m];

    let (mut i, mut j) = (0usize, 0usize);
    let (mut axy, mut ayx) = (F::zero(), F::zero());
    let mut prev: Option<F> = None;
    while i < n || j < m {
        let take_x = j >= m || (i < n && xs[i] <= ys[j]);
        let v = if take_x { xs[i] } else { ys[j] };
        if let Some(p) = prev {
            let d = (-(v - p) / sigma).exp();
            axy = axy * d;
            ayx = ayx * d;
            deltas[merged.len()] = v - p;
        }
        if take_x {
            ayx += F::one();
            a_xy[i] = axy;
            labels.push(Origin::X);
            i += 1;
        } else {
            axy += F::one();
            a_yx[j] = ayx;
            labels.push(Origin::Y);
            j += 1;
        }
        merged.push(v);
        prev = Some(v);
    }

    let (mut i, mut j) = (n as isize - 1, m as isize - 1);
    let (mut zxy, mut zyx) = (F::zero(), F::zero());
    let mut next: Option<(F, bool)> = None;
    while i >= 0 || j >= 0 {
        let take_x = j < 0 || (i >= 0 && xs[i as usize] > ys[j as usize]);
        let v = if take_x {
            xs[i as usize]
        } else {
            ys[j as usize]
        };
        if let Some((nv, next_is_x)) = next {
            let d = (-(nv - v) / sigma).exp();
            zxy = d * (zxy + if next_is_x { F::zero() } else { F::one() });
            zyx = d * (zyx + if next_is_x { F::one() } else { F::zero() });
        }
        if take_x {
            z_xy[i as usize] = zxy;
            i -= 1;
        } else {
            z_yx[j as usize] = zyx;
            j -= 1;
        }
        next = Some((v, take_x));
    }

    Ok(CrossAccumulatorSet {
        a_xy,
        z_xy,
        a_yx,
        z_yx,
        labels,
        deltas,
        merged,
        sigma_used: sigma,
    })
}

fn check_fast_sizes<F: Real>(x: &Sample<F>, y: &Sample<F>, needed: usize) -> Result<()> {
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

/// Unbiased MMD^2 via per-row accumulator sums. Sorts unsorted inputs.
pub fn mmd2_fast<F: Real>(x: &Sample<F>, y: &Sample<F>, sigma: F) -> Result<F> {
    check_sigma(sigma)?;
    check_fast_sizes(x, y, 2)?;
    let xs = sorted_cow(x)?;
    let ys = sorted_cow(y)?;
    let xv = xs.values()?;
    let yv = ys.values()?;
    let (n, m) = (F::from_count(xv.len()), F::from_count(yv.len()));
    let two = F::from_count(2);

    let (sxy, _) = cross_row_sums(xv, yv, sigma);
    let a = sum::sum(&row_sums(xv, sigma)) / (n * (n - F::one()));
    let b = sum::sum(&row_sums(yv, sigma)) / (m * (m - F::one()));
    let c = sum::sum(&sxy) / (n * m);
    Ok(a + b - two * c)
}

/// Unbiased MMD^2 via the merged-set decomposition `T3 = T4 - T1 - T2`.
/// Alternate route to [`mmd2_fast`], kept for cross-validation.
pub fn mmd2_fast_merged<F: Real>(x: &Sample<F>, y: &Sample<F>, sigma: F) -> Result<F> {
    check_sigma(sigma)?;
    check_fast_sizes(x, y, 2)?;
    let xs = sorted_cow(x)?;
    let ys = sorted_cow(y)?;
    let xv = xs.values()?;
    let yv = ys.values()?;
    let (n, m) = (F::from_count(xv.len()), F::from_count(yv.len()));
    let two = F::from_count(2);

    let t1 = trissl_slice(xv, sigma);
    let t2 = trissl_slice(yv, sigma);
    let t3 = trissl_merged(xv, yv, sigma) - t1 - t2;
    Ok(two * (t1 / (n * (n - F::one())) + t2 / (m * (m - F::one())) - t3 / (n * m)))
}

/// Full variance report via sorted accumulators, output-compatible with
/// the matrix path's [`crate::exact::variance_full`].
///
/// Two independent sweep passes: bandwidth `sigma` feeds the row sums,
/// projections, row-sum norms and grand sums; bandwidth `sigma / 2` (the
/// Laplacian power identity) feeds the Frobenius terms, which only need
/// streamed totals.
pub fn variance_fast<F: Real>(x: &Sample<F>, y: &Sample<F>, sigma: F) -> Result<MmdReport<F>> {
    check_sigma(sigma)?;
    check_fast_sizes(x, y, 4)?;
    let spec = KernelSpec::laplacian(sigma)?;
    let xs = sorted_cow(x)?;
    let ys = sorted_cow(y)?;
    let xv = xs.values()?;
    let yv = ys.values()?;
    let (n, m) = (xv.len(), yv.len());
    let nf = F::from_count(n);
    let mf = F::from_count(m);
    let one = F::one();
    let two = F::from_count(2);

    // Pass 1: base bandwidth.
    let sx = row_sums(xv, sigma);
    let sy = row_sums(yv, sigma);
    let (sxy, syx) = cross_row_sums(xv, yv, sigma);

    let grand_xx = sum::sum(&sx);
    let grand_yy = sum::sum(&sy);
    let grand_xy = sum::sum(&sxy);
    let mmd2 = grand_xx / (nf * (nf - one)) + grand_yy / (mf * (mf - one))
        - two * grand_xy / (nf * mf);

    let u_hat: Vec<F> = sx
        .iter()
        .zip(&sxy)
        .map(|(&s, &c)| s / (nf - one) - c / mf)
        .collect();
    let v_hat: Vec<F> = sy
        .iter()
        .zip(&syx)
        .map(|(&s, &c)| s / (mf - one) - c / nf)
        .collect();
    let proj = ProjectionVectors {
        u_mean: sum::sum(&u_hat) / nf,
        v_mean: sum::sum(&v_hat) / mf,
        u_hat,
        v_hat,
    };
    let t1 = var_t1(&proj);

    let rowsum_sq_xx = sum::sum_of_squares(&sx);
    let rowsum_sq_yy = sum::sum_of_squares(&sy);
    let rowsum_sq_xy = sum::sum_of_squares(&sxy);
    let colsum_sq_xy = sum::sum_of_squares(&syx);
    drop((sx, sy, sxy, syx, proj));

    // Pass 2: half bandwidth for the squared-kernel (Frobenius) terms.
    let half = power_bandwidth(&spec, 2)?.sigma();
    let stats = KernelMatrixStats {
        xx: BlockStats {
            frob_sq: two * trissl_slice(xv, half),
            rowsum_sq: rowsum_sq_xx,
            grand_sum: grand_xx,
        },
        yy: BlockStats {
            frob_sq: two * trissl_slice(yv, half),
            rowsum_sq: rowsum_sq_yy,
            grand_sum: grand_yy,
        },
        xy: CrossBlockStats {
            frob_sq: cross_total(xv, yv, half),
            rowsum_sq: rowsum_sq_xy,
            colsum_sq: colsum_sq_xy,
            grand_sum: grand_xy,
        },
    };
    let t2 = var_t2(&second_order_moments(&stats, n, m)?, n, m);

    Ok(MmdReport::assemble(
        mmd2,
        t1,
        t2,
        n,
        m,
        spec,
        EstimatePath::FastLaplace,
    ))
}

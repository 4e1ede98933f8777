//! Dense linear algebra for indefinite metrics.
//!
//! Rank decisions are made once on plain `f64` data through singular values.
//! The elimination and orthonormalization kernels are generic over
//! [`Scalar`] and can replay the pivot choices recorded on the `f64` pass, so
//! the same construction can be pushed through dual numbers to obtain
//! derivatives of the resulting frames.

mod mat;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use mat::{add, axpy, combine, dot, max_abs, norm, re_vec, scale, scale_f, sub, Mat};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default relative singular-value threshold.
pub const DEFAULT_TOL: f64 = 1e-9;

fn to_nalgebra(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Singular values in decreasing order.
pub fn singular_values(m: &Mat<f64>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values with `σₖ ≥ tol·σ₁` count.
pub fn rank(m: &Mat<f64>, tol: f64) -> usize {
    rank_at_scale(m, tol, 0.0)
}

/// Rank with the cutoff `tol·max(σ₁, scale)`, so that a matrix made only of
/// rounding noise relative to `scale` has rank zero.
pub fn rank_at_scale(m: &Mat<f64>, tol: f64, scale: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0).max(scale);
    if top > 0.0 {
        s.iter().filter(|&&x| x >= tol * top).count()
    } else {
        0
    }
}

/// Natural size of Gram entries of `vectors`: `max|ḡᵢⱼ| · max‖v‖²`.
pub fn gram_scale(vectors: &[Vec<f64>], metric: &Mat<f64>) -> f64 {
    let g = (0..metric.rows())
        .flat_map(|i| (0..metric.cols()).map(move |j| (i, j)))
        .fold(0.0f64, |m, ij| m.max(metric[ij].abs()));
    let v = vectors.iter().map(|v| norm(v)).fold(0.0f64, f64::max);
    g * v * v
}

/// Rank of the matrix whose columns are `vectors`.
pub fn span_rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    match vectors.first() {
        Some(v) => rank(&Mat::from_columns(vectors, v.len()), tol),
        None => 0,
    }
}

/// Euclidean orthonormal basis of `span(vectors)` from the left singular
/// vectors above the rank threshold.
pub fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let m = to_nalgebra(&Mat::from_columns(vectors, first.len()));
    let svd = m.svd(true, false);
    let Some(u) = svd.u else {
        return Vec::new();
    };
    let top = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    if top == 0.0 {
        return Vec::new();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= tol * top)
        .map(|(k, _)| u.column(k).iter().copied().collect())
        .collect()
}

/// Relative distance of `v` from `span(basis)`: `‖v − Pv‖ / ‖v‖`, zero for
/// the zero vector.
pub fn membership_residual(v: &[f64], basis: &[Vec<f64>], tol: f64) -> f64 {
    let nv = norm(v);
    if nv == 0.0 {
        return 0.0;
    }
    let q = orthonormal_basis(basis, tol);
    let mut r = v.to_vec();
    for u in &q {
        let c = dot(u, v);
        r = axpy(&-c, u, &r);
    }
    norm(&r) / nv
}

/// Least-squares coefficients `c` minimizing `‖Σ cⱼ basisⱼ − v‖`.
pub fn least_squares(basis: &[Vec<f64>], v: &[f64], tol: f64) -> Vec<f64> {
    if basis.is_empty() {
        return Vec::new();
    }
    let a = to_nalgebra(&Mat::from_columns(basis, v.len()));
    let b = nalgebra::DVector::from_column_slice(v);
    let svd = a.svd(true, true);
    let top = svd.singular_values.iter().fold(0.0f64, |x, &y| x.max(y));
    match svd.solve(&b, tol * top.max(f64::MIN_POSITIVE)) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![0.0; basis.len()],
    }
}

/// `Gᵢⱼ = ḡ(vᵢ, vⱼ)`.
pub fn gram<S: Scalar>(vectors: &[Vec<S>], metric: &Mat<S>) -> Result<Mat<S>> {
    let n = metric.rows();
    if metric.cols() != n {
        return Err(Error::Dimension(format!(
            "metric is {}x{}",
            metric.rows(),
            metric.cols()
        )));
    }
    if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "vector of length {} against a metric of dimension {n}",
            bad.len()
        )));
    }
    let lowered: Vec<Vec<S>> = vectors.iter().map(|v| metric.mul_vec(v)).collect();
    let k = vectors.len();
    let mut g = Mat::from_fn(k, k, |_, _| metric[(0, 0)].zero_like());
    for i in 0..k {
        for j in i..k {
            let v = dot(&vectors[i], &lowered[j]);
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Solve `A X = B` by Gaussian elimination with partial pivoting on the
/// real parts. Returns `None` when a pivot falls below `1e-13` of the
/// largest entry.
pub fn solve<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Option<Mat<S>> {
    let n = a.rows();
    assert_eq!(a.cols(), n, "solve needs a square matrix");
    assert_eq!(b.rows(), n, "solve right-hand side shape");
    let m = b.cols();
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(0.0f64, |acc, ij| acc.max(a[ij].abs_re()));
    if scale == 0.0 {
        return if n == 0 { Some(b.clone()) } else { None };
    }
    let mut a = a.clone();
    let mut b = b.clone();
    for col in 0..n {
        let (p, best) = (col..n)
            .map(|r| (r, a[(r, col)].abs_re()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 1e-13 * scale {
            return None;
        }
        if p != col {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(col, j)].clone();
                a[(col, j)] = t;
            }
            for j in 0..m {
                let t = b[(p, j)].clone();
                b[(p, j)] = b[(col, j)].clone();
                b[(col, j)] = t;
            }
        }
        let piv = a[(col, col)].clone();
        for r in col + 1..n {
            let f = a[(r, col)].clone() / piv.clone();
            for j in col..n {
                a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
            }
            for j in 0..m {
                b[(r, j)] = b[(r, j)].clone() - f.clone() * b[(col, j)].clone();
            }
        }
    }
    let mut x = b.clone();
    for j in 0..m {
        for r in (0..n).rev() {
            let mut acc = b[(r, j)].clone();
            for k in r + 1..n {
                acc = acc - a[(r, k)].clone() * x[(k, j)].clone();
            }
            x[(r, j)] = acc / a[(r, r)].clone();
        }
    }
    Some(x)
}

/// Pivot positions `(row, col)` of a full-pivoting Gauss-Jordan elimination
/// carried out for `steps` steps.
pub fn choose_pivots(a: &Mat<f64>, steps: usize) -> Vec<(usize, usize)> {
    let mut work = a.clone();
    let mut used_r = vec![false; a.rows()];
    let mut used_c = vec![false; a.cols()];
    let mut pivots = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut best = (usize::MAX, usize::MAX, -1.0);
        for i in (0..a.rows()).filter(|&i| !used_r[i]) {
            for j in (0..a.cols()).filter(|&j| !used_c[j]) {
                let v = work[(i, j)].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.0 == usize::MAX {
            break;
        }
        let (r, c, _) = best;
        used_r[r] = true;
        used_c[c] = true;
        pivots.push((r, c));
        eliminate(&mut work, r, c);
    }
    pivots
}

fn eliminate<S: Scalar>(work: &mut Mat<S>, r: usize, c: usize) {
    let piv = work[(r, c)].clone();
    for j in 0..work.cols() {
        work[(r, j)] = work[(r, j)].clone() / piv.clone();
    }
    for i in 0..work.rows() {
        if i == r {
            continue;
        }
        let f = work[(i, c)].clone();
        for j in 0..work.cols() {
            work[(i, j)] = work[(i, j)].clone() - f.clone() * work[(r, j)].clone();
        }
    }
}

/// Kernel basis of `a` from a Gauss-Jordan elimination with the given pivot
/// sequence. One basis vector per non-pivot column, carrying a `1` there and
/// `0` at the other free columns.
pub fn kernel_with_pivots<S: Scalar>(a: &Mat<S>, pivots: &[(usize, usize)]) -> Vec<Vec<S>> {
    let mut work = a.clone();
    for &(r, c) in pivots {
        eliminate(&mut work, r, c);
    }
    let template = a[(0, 0)].zero_like();
    let free: Vec<usize> = (0..a.cols())
        .filter(|j| pivots.iter().all(|&(_, c)| c != *j))
        .collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![template.clone(); a.cols()];
            x[f] = template.one_like();
            for &(r, c) in pivots {
                x[c] = -work[(r, f)].clone();
            }
            x
        })
        .collect()
}

/// Kernel of `a` with rank decided by singular values.
pub fn kernel(a: &Mat<f64>, tol: f64) -> (Vec<Vec<f64>>, Vec<(usize, usize)>) {
    let r = rank(a, tol);
    let pivots = choose_pivots(a, r);
    (kernel_with_pivots(a, &pivots), pivots)
}

/// Bundle tag for frame vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Radical,
    Screen,
    ScreenTransversal,
    NullTransversal,
    Other,
}

/// Ambient vectors with bundle tags and signatures (`0` for null vectors).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBlock {
    pub vectors: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub signatures: Vec<i8>,
}

impl FrameBlock {
    pub fn new(vectors: Vec<Vec<f64>>, label: Label, signatures: Vec<i8>) -> Self {
        Self {
            labels: vec![label; vectors.len()],
            vectors,
            signatures,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Radical of `span(vectors)`: coefficient combinations spanning the kernel
/// of the Gram matrix, returned in ambient coordinates.
pub fn radical(vectors: &[Vec<f64>], metric: &Mat<f64>, tol: f64) -> Result<FrameBlock> {
    if vectors.is_empty() {
        return Ok(FrameBlock::new(Vec::new(), Label::Radical, Vec::new()));
    }
    let k = vectors.len();
    if span_rank(vectors, tol) < k {
        return Err(Error::Degenerate(format!(
            "{k} input vectors are linearly dependent"
        )));
    }
    let g = gram(vectors, metric)?;
    let rk = rank_at_scale(&g, tol, gram_scale(vectors, metric));
    let coeffs = kernel_with_pivots(&g, &choose_pivots(&g, rk));
    let zero = vec![0.0; metric.rows()];
    let out: Vec<Vec<f64>> = coeffs.iter().map(|c| combine(c, vectors, &zero)).collect();
    let sig = vec![0; out.len()];
    Ok(FrameBlock::new(out, Label::Radical, sig))
}

/// One step of the signed Gram-Schmidt process: the input position that was
/// normalized and, when every remaining vector was null, the partner it was
/// mixed with and the mixing sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GsStep {
    pub pivot: usize,
    pub partner: Option<(usize, f64)>,
}

/// Orthonormalized vectors with their signatures.
#[derive(Clone, Debug)]
pub struct Orthonormal<S> {
    pub vectors: Vec<Vec<S>>,
    pub signs: Vec<f64>,
    pub steps: Vec<GsStep>,
}

/// Gram-Schmidt for an indefinite inner product.
///
/// Each step normalizes the remaining vector with the largest
/// `|ḡ(v,v)|/‖v‖²`. If all remaining vectors are null, the pair with the
/// largest cross product is mixed (`vᵢ + s·vⱼ`) first. Outputs keep their
/// input positions. Passing `replay` reuses recorded steps instead of
/// choosing pivots.
pub fn signed_gram_schmidt<S: Scalar>(
    vectors: &[Vec<S>],
    metric: &Mat<S>,
    tol: f64,
    replay: Option<&[GsStep]>,
) -> Result<Orthonormal<S>> {
    let k = vectors.len();
    let mut work: Vec<Vec<S>> = vectors.to_vec();
    let mut out: Vec<Option<Vec<S>>> = vec![None; k];
    let mut signs = vec![0.0; k];
    let mut steps = Vec::with_capacity(k);
    let mut remaining: Vec<usize> = (0..k).collect();
    let gscale = (0..metric.rows())
        .flat_map(|i| (0..metric.cols()).map(move |j| (i, j)))
        .fold(0.0f64, |m, ij| m.max(metric[ij].abs_re()))
        .max(f64::MIN_POSITIVE);
    for t in 0..k {
        let step = match replay {
            Some(r) => *r.get(t).ok_or_else(|| {
                Error::Degenerate("orthonormalization replay is shorter than input".into())
            })?,
            None => choose_gs_step(&work, &remaining, metric, tol, gscale)?,
        };
        let mut v = work[step.pivot].clone();
        if let Some((j, s)) = step.partner {
            v = axpy(&v[0].lift(s), &work[j], &v);
        }
        let self_product = metric.form(&v, &v);
        let sp = self_product.re();
        if sp == 0.0 {
            return Err(Error::Degenerate(
                "vanishing self-product during orthonormalization".into(),
            ));
        }
        let sign = sp.signum();
        let inv = self_product.scale(sign).sqrt();
        let u: Vec<S> = v.iter().map(|x| x.clone() / inv.clone()).collect();
        remaining.retain(|&i| i != step.pivot);
        let gu = metric.mul_vec(&u);
        for &j in &remaining {
            let c = dot(&work[j], &gu).scale(sign);
            work[j] = axpy(&-c, &u, &work[j]);
        }
        out[step.pivot] = Some(u);
        signs[step.pivot] = sign;
        steps.push(step);
    }
    Ok(Orthonormal {
        vectors: out
            .into_iter()
            .map(|v| v.expect("every position normalized"))
            .collect(),
        signs,
        steps,
    })
}

fn choose_gs_step<S: Scalar>(
    work: &[Vec<S>],
    remaining: &[usize],
    metric: &Mat<S>,
    tol: f64,
    gscale: f64,
) -> Result<GsStep> {
    let g = metric.re();
    let vecs: Vec<Vec<f64>> = work.iter().map(|v| re_vec(v)).collect();
    let rel = |i: usize, j: usize| {
        let d = norm(&vecs[i]) * norm(&vecs[j]) * gscale;
        if d == 0.0 {
            0.0
        } else {
            g.form(&vecs[i], &vecs[j]) / d
        }
    };
    let mut best = (usize::MAX, 0.0f64);
    for &i in remaining {
        let v = rel(i, i).abs();
        if best.0 == usize::MAX || v > best.1 {
            best = (i, v);
        }
    }
    if best.1 >= tol {
        return Ok(GsStep {
            pivot: best.0,
            partner: None,
        });
    }
    let mut pair = (usize::MAX, usize::MAX, 0.0f64);
    for (a, &i) in remaining.iter().enumerate() {
        for &j in &remaining[a + 1..] {
            let v = rel(i, j);
            if pair.0 == usize::MAX || v.abs() > pair.2.abs() {
                pair = (i, j, v);
            }
        }
    }
    if pair.0 == usize::MAX || pair.2.abs() < tol {
        return Err(Error::Degenerate(
            "span is degenerate: no non-null direction left to normalize".into(),
        ));
    }
    Ok(GsStep {
        pivot: pair.0,
        partner: Some((pair.1, pair.2.signum())),
    })
}

/// Orthonormalize `vectors` (plain `f64` entry point).
pub fn signed_orthonormalize(
    vectors: &[Vec<f64>],
    metric: &Mat<f64>,
    tol: f64,
) -> Result<FrameBlock> {
    if !vectors.is_empty() {
        let g = gram(vectors, metric)?;
        if rank(&g, tol) < vectors.len() {
            return Err(Error::Degenerate("span is degenerate".into()));
        }
    }
    let on = signed_gram_schmidt(vectors, metric, tol, None)?;
    let sig = on.signs.iter().map(|s| *s as i8).collect();
    Ok(FrameBlock::new(on.vectors, Label::Screen, sig))
}

/// Lightlike transversal vectors `Nᵢ` dual to the radical basis `rad`.
///
/// Each `Nᵢ` starts as the solution of `ḡ(V, Eⱼ) = δᵢⱼ`, `ḡ(V, X) = 0` on the
/// screen and `ḡ(V, W) = 0` on the screen transversal bundle with the
/// smallest norm under the positive-definite `reference` metric; the products
/// `ḡ(Vᵢ,Vⱼ)` are then removed with radical corrections.
pub fn null_transversal<S: Scalar>(
    rad: &[Vec<S>],
    screen: &[Vec<S>],
    screen_transversal: &[Vec<S>],
    metric: &Mat<S>,
    reference: &Mat<S>,
) -> Result<Vec<Vec<S>>> {
    let r = rad.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    let n = metric.rows();
    let rows: Vec<Vec<S>> = rad
        .iter()
        .chain(screen)
        .chain(screen_transversal)
        .map(|v| metric.mul_vec(v))
        .collect();
    let k = rows.len();
    let c = Mat::from_rows(&rows);
    let zero = metric[(0, 0)].zero_like();
    let ct = c.transpose();
    let y = solve(reference, &ct)
        .ok_or_else(|| Error::Degenerate("reference metric is singular".into()))?;
    let m = c.matmul(&y);
    let d = Mat::from_fn(k, r, |i, j| {
        if i == j {
            zero.one_like()
        } else {
            zero.clone()
        }
    });
    let z = solve(&m, &d).ok_or_else(|| Error::Degenerate("screen not complementary".into()))?;
    let v = y.matmul(&z);
    let vs: Vec<Vec<S>> = (0..r).map(|i| v.column(i)).collect();
    let zero_vec = vec![zero.clone(); n];
    let out = (0..r)
        .map(|i| {
            let coeffs: Vec<S> = (0..r)
                .map(|j| metric.form(&vs[i], &vs[j]).scale(-0.5))
                .collect();
            add(&vs[i], &combine(&coeffs, rad, &zero_vec))
        })
        .collect();
    Ok(out)
}

/// `f64` entry point for [`null_transversal`] with the given tangent and
/// screen-transversal spans. The screen is recovered as a complement of
/// `rad` inside `tangent_span`.
pub fn null_transversal_frame(
    rad: &FrameBlock,
    tangent_span: &[Vec<f64>],
    screen_transversal: &[Vec<f64>],
    metric: &Mat<f64>,
    reference: &Mat<f64>,
    tol: f64,
) -> Result<FrameBlock> {
    let mut screen: Vec<Vec<f64>> = Vec::new();
    let mut acc = rad.vectors.clone();
    for t in tangent_span {
        let mut trial = acc.clone();
        trial.push(t.clone());
        if span_rank(&trial, tol) == trial.len() {
            acc = trial;
            screen.push(t.clone());
        }
    }
    let out = null_transversal(&rad.vectors, &screen, screen_transversal, metric, reference)?;
    let sig = vec![0; out.len()];
    Ok(FrameBlock::new(out, Label::NullTransversal, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;

    fn diag(d: &[f64]) -> Mat<f64> {
        Mat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    #[test]
    fn gram_of_signature_basis() {
        let g = gram(&[vec![1.0, 0.0], vec![0.0, 1.0]], &diag(&[-1.0, 1.0])).unwrap();
        assert_eq!(g, diag(&[-1.0, 1.0]));
        assert!(gram(&[vec![1.0]], &diag(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn radical_of_null_vector() {
        let rad = radical(&[vec![1.0, 1.0]], &diag(&[-1.0, 1.0]), 1e-9).unwrap();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad.vectors[0], vec![1.0, 1.0]);
        let eu = radical(&[vec![1.0, 0.0], vec![0.0, 1.0]], &diag(&[1.0, 1.0]), 1e-9).unwrap();
        assert!(eu.is_empty());
        assert!(radical(&[vec![1.0, 0.0], vec![2.0, 0.0]], &diag(&[1.0, 1.0]), 1e-9).is_err());
    }

    #[test]
    fn null_partner_in_two_dimensions() {
        let g = diag(&[-1.0, 1.0]);
        let n = null_transversal(&[vec![1.0, 1.0]], &[], &[], &g, &diag(&[1.0, 1.0])).unwrap();
        assert!((n[0][0] + 0.5).abs() < 1e-15 && (n[0][1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn orthonormalize_is_idempotent_on_orthonormal_input() {
        let g = diag(&[1.0, 1.0, 1.0]);
        let e = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let out = signed_orthonormalize(&e, &g, 1e-9).unwrap();
        assert_eq!(out.vectors, e);
        assert_eq!(out.signatures, vec![1, 1]);
    }

    #[test]
    fn null_pair_is_mixed() {
        let g = diag(&[-1.0, 1.0]);
        let v = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let out = signed_orthonormalize(&v, &g, 1e-9).unwrap();
        let gg = gram(&out.vectors, &g).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j {
                    f64::from(out.signatures[i])
                } else {
                    0.0
                };
                assert!((gg[(i, j)] - want).abs() < 1e-14);
            }
        }
        assert!(signed_orthonormalize(&[vec![1.0, 1.0]], &g, 1e-9).is_err());
    }

    #[test]
    fn replay_matches_recorded_run_and_differentiates() {
        let g = diag(&[-1.0, 1.0, 1.0]);
        let v = vec![
            vec![1.0, 2.0, 0.5],
            vec![0.3, -1.0, 2.0],
            vec![0.0, 0.4, 1.0],
        ];
        let rec = signed_gram_schmidt(&v, &g, 1e-9, None).unwrap();
        let dv: Vec<Vec<Dual>> = v
            .iter()
            .map(|x| x.iter().map(|&a| Dual::new(a, a * 0.1)).collect())
            .collect();
        let gd = g.map(|&a| Dual::constant(a));
        let rep = signed_gram_schmidt(&dv, &gd, 1e-9, Some(&rec.steps)).unwrap();
        for (a, b) in rec.vectors.iter().zip(&rep.vectors) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y.re).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = Mat::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]);
        let (k, _) = kernel(&a, 1e-9);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(max_abs(&a.mul_vec(v)) < 1e-14);
        }
    }

    #[test]
    fn membership() {
        let span = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert!(membership_residual(&[2.0, -1.0, 0.0], &span, 1e-9) < 1e-15);
        assert!((membership_residual(&[0.0, 0.0, 3.0], &span, 1e-9) - 1.0).abs() < 1e-15);
        let c = least_squares(&span, &[2.0, -1.0, 0.0], 1e-12);
        assert!((c[0] - 2.0).abs() < 1e-14 && (c[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn noise_gram_has_full_radical() {
        // (1, cos t, sin t) is null in R^3_1 up to rounding
        let (sn, cs) = 0.3f64.sin_cos();
        let u = vec![vec![1.0, cs, sn]];
        let g = diag(&[-1.0, 1.0, 1.0]);
        let gr = gram(&u, &g).unwrap();
        assert_eq!(rank_at_scale(&gr, 1e-9, gram_scale(&u, &g)), 0);
        assert_eq!(radical(&u, &g, 1e-9).unwrap().len(), 1);
        let m = Mat::from_rows(&[vec![1e-17]]);
        assert_eq!(rank(&m, 1e-9), 1);
        assert_eq!(rank_at_scale(&m, 1e-9, 1.0), 0);
    }
}

//! Exponential-map toolkit: matrix exp/log series, the truncated
//! Baker-Campbell-Dynkin-Hausdorff composition, the `F(x,t)` series of the
//! log-derivative lemma, discretized path length, and the explicit
//! metric-comparison constant `M`.

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::vector::AlgebraVector;
use nalgebra::{DMatrix, DVector};

/// An invertible truncated-group element, stored as a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: DMatrix<f64>,
}

impl GroupElement {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "group elements are square");
        GroupElement { matrix }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { matrix: DMatrix::identity(n, n) }
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `self^{-1} * rhs` via LU solve.
    pub fn solve(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.matrix.clone().lu().solve(rhs).ok_or(Error::Singular)
    }
}

/// Operator (spectral) norm estimated by power iteration on `m^T m`:
/// 20 iterations or an estimate change below 1e-10.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    // deterministic start with all coordinates distinct, so no singular
    // direction is exactly orthogonal to it by symmetry
    let mut v = DVector::from_fn(n, |i, _| 1.0 + i as f64);
    v /= v.norm();
    let mut est = 0.0;
    for _ in 0..20 {
        let u = m * &v;
        let next = u.norm();
        if next == 0.0 {
            return 0.0;
        }
        let w = m.transpose() * u;
        v = &w / w.norm();
        if (next - est).abs() <= 1e-10 * next.max(1.0) {
            return next;
        }
        est = next;
    }
    est
}

/// Matrix exponential by scaling-and-squaring with an error-controlled
/// Taylor series on the scaled matrix; relative accuracy ~1e-13 or better.
pub fn exp_dense(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / 2f64.powi(squarings as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=40 {
        term = (&term * &scaled) / k as f64;
        result += &term;
        if term.norm() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

pub fn exp_matrix(x: &AlgebraVector, alg: &TruncatedAlgebra) -> Result<GroupElement> {
    Ok(GroupElement::new(exp_dense(&alg.embed_matrix(x)?)))
}

/// Mercator series `log g = sum (-1)^{n-1} (g-I)^n / n`, summed until the
/// term norm drops below 1e-15 or 200 terms. Errors when the spectral-norm
/// estimate of `g - I` is `>= 1 - 1e-6`, where convergence is unsafe.
pub fn log_matrix(g: &GroupElement) -> Result<DMatrix<f64>> {
    let n = g.size();
    let a = g.matrix() - DMatrix::<f64>::identity(n, n);
    let norm = operator_norm(&a);
    if norm >= 1.0 - 1e-6 {
        return Err(Error::LogDomain { norm });
    }
    let mut result = DMatrix::zeros(n, n);
    let mut power = DMatrix::identity(n, n);
    for k in 1..=200 {
        power *= &a;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        result += &power * (sign / k as f64);
        if power.norm() / (k as f64) < 1e-15 {
            break;
        }
    }
    Ok(result)
}

/// `log g` written back in the `xi` basis.
pub fn log_to_algebra(g: &GroupElement, alg: &TruncatedAlgebra) -> Result<AlgebraVector> {
    Ok(alg.project_matrix(&log_matrix(g)?))
}

/// One term of the BCDH series: the block word `(p_1,q_1,...,p_m,q_m)` and
/// its Dynkin coefficient `(-1)^{m-1} / (m * sum(p_i+q_i) * prod p_i! q_i!)`.
#[derive(Debug, Clone)]
pub struct BCDHTerm {
    pub word: Vec<(u32, u32)>,
    pub coefficient: f64,
}

impl BCDHTerm {
    pub fn degree(&self) -> u32 {
        self.word.iter().map(|&(p, q)| p + q).sum()
    }

    /// Letters of the word, `true` for `x`.
    fn letters(&self) -> Vec<bool> {
        let mut out = Vec::new();
        for &(p, q) in &self.word {
            out.extend(std::iter::repeat(true).take(p as usize));
            out.extend(std::iter::repeat(false).take(q as usize));
        }
        out
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// All BCDH terms of total degree `<= order`.
pub fn bcdh_terms(order: usize) -> Result<Vec<BCDHTerm>> {
    if !(1..=6).contains(&order) {
        return Err(Error::OrderOutOfRange(order));
    }
    let mut terms = Vec::new();
    let mut word: Vec<(u32, u32)> = Vec::new();
    extend_word(&mut word, order as u32, &mut terms);
    Ok(terms)
}

fn extend_word(word: &mut Vec<(u32, u32)>, degree_left: u32, out: &mut Vec<BCDHTerm>) {
    if !word.is_empty() {
        let m = word.len() as f64;
        let total: u32 = word.iter().map(|&(p, q)| p + q).sum();
        let fact: f64 = word.iter().map(|&(p, q)| factorial(p) * factorial(q)).product();
        let sign = if word.len() % 2 == 1 { 1.0 } else { -1.0 };
        out.push(BCDHTerm { word: word.clone(), coefficient: sign / (m * total as f64 * fact) });
    }
    if degree_left == 0 {
        return;
    }
    for p in 0..=degree_left {
        for q in 0..=(degree_left - p) {
            if p + q == 0 {
                continue;
            }
            word.push((p, q));
            extend_word(word, degree_left - p - q, out);
            word.pop();
        }
    }
}

/// Sum of all BCDH terms of total degree `<= order`, each evaluated as the
/// right-nested bracket word `[L_1,[L_2,[...,L_n]]]`; words whose last two
/// letters agree vanish identically and are skipped.
pub fn bcdh_truncated(
    x: &AlgebraVector,
    y: &AlgebraVector,
    order: usize,
    alg: &TruncatedAlgebra,
) -> Result<AlgebraVector> {
    let mut acc = AlgebraVector::zero(x.family());
    for term in bcdh_terms(order)? {
        let letters = term.letters();
        let n = letters.len();
        if n >= 2 && letters[n - 1] == letters[n - 2] {
            continue;
        }
        let pick = |l: bool| if l { x } else { y };
        let mut w = pick(letters[n - 1]).clone();
        for &l in letters[..n - 1].iter().rev() {
            w = alg.bracket(pick(l), &w)?;
            if w.is_zero() {
                break;
            }
        }
        acc.axpy(term.coefficient, &w);
    }
    Ok(acc)
}

/// Partial sum of the log-derivative series
/// `F(x,t) = A + 1/2 [x,A] - sum_{p>=1} [..[[x,A],x],..,x] / (2(p+2)p!)`,
/// through `p = max_terms` or until a term norm drops below 1e-15.
pub fn f_series(
    x: &AlgebraVector,
    a: &AlgebraVector,
    max_terms: usize,
    alg: &TruncatedAlgebra,
) -> Result<AlgebraVector> {
    let mut out = a.clone();
    let mut b = alg.bracket(x, a)?; // [x, A]
    out.axpy(0.5, &b);
    for p in 1..=max_terms {
        b = alg.bracket(&b, x)?;
        if b.norm() < 1e-15 {
            break;
        }
        out.axpy(-1.0 / (2.0 * (p as f64 + 2.0) * factorial(p as u32)), &b);
    }
    Ok(out)
}

/// A path in the truncated group sampled on a grid `0 = t_0 < ... < t_K = 1`.
#[derive(Debug, Clone)]
pub struct PathSample {
    times: Vec<f64>,
    points: Vec<GroupElement>,
}

impl PathSample {
    pub fn new(times: Vec<f64>, points: Vec<GroupElement>) -> Result<Self> {
        if times.len() != points.len() {
            return Err(Error::BadPath(format!(
                "{} times but {} points",
                times.len(),
                points.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::BadPath("need at least two samples".into()));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return Err(Error::BadPath("grid must start at 0 and end at 1".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadPath("grid must be strictly increasing".into()));
        }
        Ok(PathSample { times, points })
    }

    /// Sample `g(t) = curve(t)` on a uniform grid of `k+1` points.
    pub fn from_curve(k: usize, curve: impl Fn(f64) -> GroupElement) -> Result<Self> {
        let times: Vec<f64> = (0..=k).map(|v| v as f64 / k as f64).collect();
        let points = times.iter().map(|&t| curve(t)).collect();
        Self::new(times, points)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor guarantees at least two samples
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn point(&self, k: usize) -> &GroupElement {
        &self.points[k]
    }
}

fn finite_difference<T>(
    values: &[T],
    times: &[f64],
    k: usize,
    combine: impl Fn(&T, &T, f64) -> T,
) -> T {
    // central differences inside, one-sided at the endpoints
    let (lo, hi) = if k == 0 {
        (0, 1)
    } else if k == values.len() - 1 {
        (k - 1, k)
    } else {
        (k - 1, k + 1)
    };
    combine(&values[hi], &values[lo], times[hi] - times[lo])
}

/// Maximum over interior grid points of `|h'(t) - F(h(t), A(t))|` where
/// `h = log g` and `A = g^{-1} g'`, both by finite differences. Expected to
/// shrink at second order in the grid spacing.
pub fn log_derivative_residual(path: &PathSample, alg: &TruncatedAlgebra) -> Result<f64> {
    let k = path.len();
    let mut h = Vec::with_capacity(k);
    for p in &path.points {
        h.push(log_to_algebra(p, alg)?);
    }
    let mut worst = 0.0f64;
    for t in 1..k - 1 {
        let gdot = finite_difference(&path.points, &path.times, t, |a, b, dt| {
            GroupElement::new((a.matrix() - b.matrix()) / dt)
        });
        let a_t = alg.project_matrix(&path.points[t].solve(gdot.matrix())?);
        let hdot = finite_difference(&h, &path.times, t, |a, b, dt| {
            a.sub(b).expect("same family").scaled(1.0 / dt)
        });
        let f = f_series(&h[t], &a_t, 60, alg)?;
        worst = worst.max(hdot.sub(&f)?.norm());
    }
    Ok(worst)
}

/// First-order length `sum_k |log(g(t_{k-1})^{-1} g(t_k))|` in the algebra
/// norm; exact on piecewise one-parameter segments.
pub fn path_length(path: &PathSample, alg: &TruncatedAlgebra) -> Result<f64> {
    let mut total = 0.0;
    for k in 1..path.len() {
        let chord = GroupElement::new(path.points[k - 1].solve(path.points[k].matrix())?);
        total += log_to_algebra(&chord, alg)?.norm();
    }
    Ok(total)
}

/// The metric-comparison constant
/// `M = sum_{k>=1} C^k L^{k-1} / ((k+1)!(k+1))`, summed to machine
/// precision via the term recurrence. Finite for every `C >= 0`, `L >= 0`;
/// the two-sided bound `|d(I,e^x) - |x|| <= M|x|^2` needs `L < ln2/(2C)`.
pub fn metric_constant(c: f64, l: f64) -> f64 {
    assert!(c >= 0.0 && l >= 0.0);
    if c == 0.0 {
        return 0.0;
    }
    let mut term = c / 4.0; // k = 1: C / (2! * 2)
    let mut sum = 0.0;
    for k in 1..=1000u32 {
        sum += term;
        if term.abs() < 1e-22 {
            break;
        }
        let k = k as f64;
        term *= c * l * (k + 1.0) / ((k + 2.0) * (k + 2.0));
    }
    sum
}

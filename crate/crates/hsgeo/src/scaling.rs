//! Diagonal scaling sequences `l_1, l_2, ...` defining the weighted inner
//! product, plus the scaling-spec mini-language `const:<c>`, `power:<p>`,
//! `geometric:<r>`, `file:<path>`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Boundedness cap for explicit lists; values above this are rejected.
pub const DEFAULT_CAP: f64 = 1e6;

/// A positive weight sequence `l_i`, queryable for any index `i >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScalingSequence {
    /// `l_i = c`.
    Constant(f64),
    /// `l_i = i^(-p)`, `p >= 0`.
    Power(f64),
    /// `l_i = r^i`, `0 < r <= 1`.
    Geometric(f64),
    /// Explicit per-index values; indices past the list repeat the last value.
    Explicit(Vec<f64>),
}

impl ScalingSequence {
    pub fn constant(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(ScalingSequence::Constant(c))
        } else {
            Err(Error::ScalingParameter(format!("constant {c} must be positive")))
        }
    }

    pub fn power(p: f64) -> Result<Self> {
        // p < 0 would make l_i = i^(-p) unbounded.
        if p >= 0.0 && p.is_finite() {
            Ok(ScalingSequence::Power(p))
        } else {
            Err(Error::ScalingParameter(format!("power exponent {p} must be >= 0")))
        }
    }

    pub fn geometric(r: f64) -> Result<Self> {
        if r > 0.0 && r <= 1.0 {
            Ok(ScalingSequence::Geometric(r))
        } else {
            Err(Error::ScalingParameter(format!("geometric ratio {r} must be in (0, 1]")))
        }
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        Self::explicit_with_cap(values, DEFAULT_CAP)
    }

    pub fn explicit_with_cap(values: Vec<f64>, cap: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ScalingParameter("explicit list is empty".into()));
        }
        for (k, &v) in values.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::ScalingParameter(format!(
                    "value {v} at line {} must be a positive finite number",
                    k + 1
                )));
            }
            if v > cap {
                return Err(Error::UnboundedScaling { index: k as u32 + 1, value: v, cap });
            }
        }
        Ok(ScalingSequence::Explicit(values))
    }

    /// The weight `l_i`, `i >= 1`.
    pub fn lambda(&self, i: u32) -> f64 {
        debug_assert!(i >= 1);
        match self {
            ScalingSequence::Constant(c) => *c,
            ScalingSequence::Power(p) => (i as f64).powf(-p),
            ScalingSequence::Geometric(r) => r.powi(i as i32),
            ScalingSequence::Explicit(v) => v[(i as usize - 1).min(v.len() - 1)],
        }
    }

    /// `sup_i l_i`, finite for every kind by construction.
    pub fn sup(&self) -> f64 {
        match self {
            ScalingSequence::Constant(c) => *c,
            ScalingSequence::Power(_) => 1.0, // maximum at i = 1 since p >= 0
            ScalingSequence::Geometric(r) => *r,
            ScalingSequence::Explicit(v) => v.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Compensated power sum `sum_{i=1}^{n} l_i^q`.
    pub fn power_sum(&self, q: i32, n: u32) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for i in 1..=n {
            let term = self.lambda(i).powi(q);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Parse the mini-language: `const:<c>`, `power:<p>`, `geometric:<r>`,
    /// `file:<path>` (one positive decimal per line, line k = `l_k`).
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) =
            spec.split_once(':').ok_or_else(|| Error::ScalingParse(spec.to_string()))?;
        let num = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| Error::ScalingParse(spec.to_string()))
        };
        match kind {
            "const" => Self::constant(num(arg)?),
            "power" => Self::power(num(arg)?),
            "geometric" => Self::geometric(num(arg)?),
            "file" => Self::from_file(Path::new(arg)),
            _ => Err(Error::ScalingParse(spec.to_string())),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::ScalingParse(format!("{}:{}: `{line}`", path.display(), k + 1))
            })?;
            values.push(v);
        }
        Self::explicit(values)
    }

    /// Compact descriptor used in report rows.
    pub fn describe(&self) -> String {
        match self {
            ScalingSequence::Constant(c) => format!("const:{c}"),
            ScalingSequence::Power(p) => format!("power:{p}"),
            ScalingSequence::Geometric(r) => format!("geometric:{r}"),
            ScalingSequence::Explicit(v) => format!("explicit[{}]", v.len()),
        }
    }
}

/// A general (not necessarily product-form) positive weight table
/// `(i,j) -> l_ij`, used by the bracket non-closure demonstration.
#[derive(Debug, Clone)]
pub struct GeneralScaling {
    get: fn(u32, u32) -> f64,
}

impl GeneralScaling {
    pub fn new(get: fn(u32, u32) -> f64) -> Self {
        GeneralScaling { get }
    }

    pub fn lambda(&self, i: u32, j: u32) -> f64 {
        let v = (self.get)(i, j);
        debug_assert!(v > 0.0);
        v
    }
}

/// Partial sum of `|[x,y]|^2` for the divergent construction: weights
/// `l_{3l+1,3l+2} = l_{3l+1,3l+3} = 1/l` and `l_{3l+2,3l+3} = 1/l^4`, with
/// coefficients `x_l = y_l = 1/l`. Each of the first `k` terms equals
/// `a_l^8 / b_l^2 = 1`, so the partial sums grow without bound.
pub fn counterexample_partial_sum(k: u32) -> f64 {
    let scaling = GeneralScaling::new(|i, j| {
        // block l >= 1 occupies indices {3l+1, 3l+2, 3l+3}
        debug_assert_eq!((i - 1) / 3, (j - 1) / 3);
        let l = ((i - 1) / 3) as f64;
        match (i % 3, j % 3) {
            (1, 2) | (1, 0) => 1.0 / l,      // a_l, both off-block-diagonal pairs
            (2, 0) => 1.0 / (l * l * l * l), // b_l
            _ => 1.0,
        }
    });
    let mut sum = 0.0;
    let mut comp = 0.0;
    for l in 1..=k {
        let a = 1.0 / l as f64; // x_l = y_l = a_l
        let (i1, i2, i3) = (3 * l + 1, 3 * l + 2, 3 * l + 3);
        // coefficient of the output pair: x_l y_l * l_{i1,i2} l_{i1,i3} / l_{i2,i3}
        let coeff =
            a * a * scaling.lambda(i1, i2) * scaling.lambda(i1, i3) / scaling.lambda(i2, i3);
        let term = coeff * coeff;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

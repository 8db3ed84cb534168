//! Report types: closed-form vs oracle curvature tables and principal-
//! curvature sweeps, serializable to CSV and JSON.

use serde::Serialize;

/// 17 significant digits: enough decimal text to round-trip binary64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub family: String,
    pub scaling: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub i: u32,
    pub j: u32,
    pub closed_form: f64,
    pub oracle: Option<f64>,
    pub residual: Option<f64>,
}

/// Closed-form vs oracle values for the truncated Ricci curvature.
#[derive(Debug, Clone, Default, Serialize)]
#[serde(transparent)]
pub struct CurvatureReport {
    pub rows: Vec<ReportRow>,
}

impl CurvatureReport {
    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,scaling,N,i,j,closed_form,oracle,residual\n");
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.family,
                r.scaling,
                r.n,
                r.i,
                r.j,
                fmt17(r.closed_form),
                opt(r.oracle),
                opt(r.residual)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Least-squares line `a_km(N) ~ slope * N + intercept` over `window`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitRecord {
    pub slope: f64,
    pub intercept: f64,
    pub window: [u32; 2],
}

/// Samples `(N, a_km(N))` of one principal Ricci curvature along a grid of
/// truncation levels.
#[derive(Debug, Clone)]
pub struct PrincipalCurve {
    pub k: u32,
    pub m: u32,
    samples: Vec<(u32, f64)>,
}

impl PrincipalCurve {
    pub fn new(k: u32, m: u32) -> Self {
        PrincipalCurve { k, m, samples: Vec::new() }
    }

    pub fn push(&mut self, n: u32, value: f64) {
        assert!(
            self.samples.last().map_or(true, |&(last, _)| n > last),
            "truncation levels must be strictly increasing"
        );
        self.samples.push((n, value));
    }

    pub fn samples(&self) -> &[(u32, f64)] {
        &self.samples
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,a_km\n");
        for &(n, v) in &self.samples {
            out.push_str(&format!("{},{}\n", n, fmt17(v)));
        }
        out
    }

    /// Fit over the top half of the grid, where the transient terms of the
    /// asymptotic expansions have decayed.
    pub fn fit_top_half(&self) -> FitRecord {
        let start = self.samples.len() / 2;
        let window = &self.samples[start.min(self.samples.len().saturating_sub(2))..];
        let n = window.len() as f64;
        let sx: f64 = window.iter().map(|&(x, _)| x as f64).sum();
        let sy: f64 = window.iter().map(|&(_, y)| y).sum();
        let sxx: f64 = window.iter().map(|&(x, _)| (x as f64) * (x as f64)).sum();
        let sxy: f64 = window.iter().map(|&(x, y)| x as f64 * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        FitRecord { slope, intercept, window: [window[0].0, window[window.len() - 1].0] }
    }
}

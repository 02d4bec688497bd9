use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::model::{ModelMatrix, INTERCEPT};
use super::tdist::t_pvalue;
use crate::error::{Error, Result};

/// Relative pivot tolerance for rank checks.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsFit {
    pub labels: Vec<String>,
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub df: usize,
    pub sigma2: f64,
    pub rss: f64,
}

impl OlsFit {
    pub fn estimate(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.estimates[i])
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least squares by Householder QR.
pub fn ols(x: &ModelMatrix, y: &[f64]) -> Result<OlsFit> {
    let (n, p) = (x.n_rows(), x.n_cols());
    if y.len() != n {
        return Err(Error::ShapeMismatch);
    }
    if n <= p {
        return Err(Error::TooFewRuns { n, p });
    }
    let mat = DMatrix::from_fn(n, p, |i, j| x.columns()[j][i]);
    let qr = mat.qr();
    let r = qr.r();
    for j in 0..p {
        if r[(j, j)].abs() <= RANK_TOL * norm(&x.columns()[j]).max(f64::MIN_POSITIVE) {
            return Err(Error::RankDeficient(x.labels()[j].clone()));
        }
    }
    let qty = qr.q().transpose() * DVector::from_column_slice(y);
    let beta = r.solve_upper_triangular(&qty).ok_or_else(|| Error::RankDeficient(x.labels()[p - 1].clone()))?;
    let fitted = x.predict(beta.as_slice());
    let rss: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b).powi(2)).sum();
    let df = n - p;
    let sigma2 = rss / df as f64;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| Error::RankDeficient(x.labels()[p - 1].clone()))?;
    let mut std_errors = Vec::with_capacity(p);
    let mut t_values = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    for j in 0..p {
        // diag((XᵀX)⁻¹) = squared row norms of R⁻¹
        let v: f64 = r_inv.row(j).iter().map(|a| a * a).sum();
        let se = (sigma2 * v).sqrt();
        let t = beta[j] / se;
        std_errors.push(se);
        t_values.push(t);
        p_values.push(t_pvalue(t, df as f64));
    }
    Ok(OlsFit {
        labels: x.labels().to_vec(),
        estimates: beta.as_slice().to_vec(),
        std_errors,
        t_values,
        p_values,
        df,
        sigma2,
        rss,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForwardFit {
    /// Selected terms in entry order, without the intercept.
    pub selected: Vec<String>,
    /// p-value of each selected term at the step it entered.
    pub entry_p_values: Vec<f64>,
    /// Final refit of the intercept plus the selected terms.
    pub fit: OlsFit,
}

impl ForwardFit {
    pub fn estimate(&self, label: &str) -> Option<f64> {
        self.fit.estimate(label)
    }

    /// `(label, estimate)` pairs of the final model, intercept first.
    pub fn effects(&self) -> Vec<(String, f64)> {
        self.fit.labels.iter().cloned().zip(self.fit.estimates.iter().copied()).collect()
    }
}

/// Forward selection by entry p-value with the intercept always in the
/// model. Every non-intercept column of `x` is a candidate.
///
/// Each step residualizes the candidates on an orthonormal basis of the
/// current model, so the t statistic of a candidate in the enlarged model is
/// `(x̃·r) / sqrt(‖x̃‖² · RSS'/df')`. Columns that are (numerically) in the
/// span of the current model are skipped.
pub fn forward_select(x: &ModelMatrix, y: &[f64], alpha: f64) -> Result<ForwardFit> {
    let n = x.n_rows();
    if y.len() != n {
        return Err(Error::ShapeMismatch);
    }
    let intercept = x.index_of(INTERCEPT);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut resid = y.to_vec();
    let add_to_basis = |basis: &mut Vec<Vec<f64>>, resid: &mut Vec<f64>, v: Vec<f64>| {
        let c = dot(&v, resid);
        resid.iter_mut().zip(&v).for_each(|(r, q)| *r -= c * q);
        basis.push(v);
    };
    let ones = vec![1.0 / (n as f64).sqrt(); n];
    add_to_basis(&mut basis, &mut resid, ones);

    let mut chosen = vec![false; x.n_cols()];
    if let Some(i) = intercept {
        chosen[i] = true;
    }
    let mut selected = Vec::new();
    let mut entry_p_values = Vec::new();
    loop {
        let df_new = n as isize - (basis.len() as isize + 1);
        if df_new < 1 {
            break;
        }
        let rss = dot(&resid, &resid);
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for (j, col) in x.columns().iter().enumerate() {
            if chosen[j] {
                continue;
            }
            let mut v = col.clone();
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&v, q);
                    v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
            }
            let nrm2 = dot(&v, &v);
            if nrm2 <= (RANK_TOL * norm(col)).powi(2) {
                continue;
            }
            let xr = dot(&v, &resid);
            let rss_new = (rss - xr * xr / nrm2).max(0.0);
            let t = if rss_new > 0.0 {
                xr / (nrm2 * rss_new / df_new as f64).sqrt()
            } else if xr != 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            if best.as_ref().is_none_or(|(_, bt, _)| t.abs() > bt.abs()) {
                best = Some((j, t, v));
            }
        }
        let Some((j, t, v)) = best else { break };
        let p = t_pvalue(t, df_new as f64);
        if p >= alpha {
            break;
        }
        chosen[j] = true;
        selected.push(x.labels()[j].clone());
        entry_p_values.push(p);
        let nv = norm(&v);
        add_to_basis(&mut basis, &mut resid, v.into_iter().map(|a| a / nv).collect());
    }

    let mut labels: Vec<&str> = vec![INTERCEPT];
    labels.extend(selected.iter().map(String::as_str));
    let design = if intercept.is_some() {
        x.select(&labels)?
    } else {
        let mut cols = vec![vec![1.0; n]];
        cols.extend(selected.iter().map(|l| x.column(l).unwrap().to_vec()));
        ModelMatrix::new(labels.iter().map(|s| s.to_string()).collect(), cols)?
    };
    Ok(ForwardFit { selected, entry_p_values, fit: ols(&design, y)? })
}

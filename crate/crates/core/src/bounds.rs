//! Closed-form bound evaluators.

use serde::Serialize;

use crate::error::{parameter, Error, Result};

fn check_hg(h: u32, g: u32) -> Result<()> {
    if g >= h && h >= 2 {
        Ok(())
    } else {
        Err(parameter(format!("need g >= h >= 2, got h={h}, g={g}")))
    }
}

/// Main term `(g-1)^(1/h) n^(1-1/h)` of the upper bound for sets in `[n]`.
/// The error term has order `n^(1/2 - 1/(2h))` with no explicit constant.
pub fn thm1_main(n: f64, h: u32, g: u32) -> Result<f64> {
    check_hg(h, g)?;
    let h = h as f64;
    Ok((g as f64 - 1.0).powf(1.0 / h) * n.powf(1.0 - 1.0 / h))
}

/// Exponent of the unspecified error term of [`thm1_main`].
pub fn thm1_error_order(h: u32) -> f64 {
    0.5 - 0.5 / h as f64
}

/// Furedi's bound `(s-t)^(1/2) n m^(1-1/t) + t m^(2-2/t) + t n` on `z(m,n,s,t)`.
pub fn eq2_furedi(m: u64, n: u64, s: u64, t: u64) -> Result<f64> {
    if !(m >= s && s >= t && t >= 1 && n >= t) {
        return Err(parameter(format!(
            "need m >= s >= t >= 1 and n >= t, got m={m}, n={n}, s={s}, t={t}"
        )));
    }
    let (m, n, s, t) = (m as f64, n as f64, s as f64, t as f64);
    Ok((s - t).sqrt() * n * m.powf(1.0 - 1.0 / t) + t * m.powf(2.0 - 2.0 / t) + t * n)
}

/// Upper bound `(g-h+1)^(1/h) n^(1-1/h) + h n^(1-2/h) + h` for a C_h[g]-set
/// in a group of order `n`.
pub fn eq3_group(n: f64, h: u32, g: u32) -> Result<f64> {
    check_hg(h, g)?;
    let (hf, gf) = (h as f64, g as f64);
    Ok((gf - hf + 1.0).powf(1.0 / hf) * n.powf(1.0 - 1.0 / hf) + hf * n.powf(1.0 - 2.0 / hf) + hf)
}

/// `(1 - 1/h)(1 - 1/g)(1 + 1/(hg - 1))`.
pub fn density_exponent(h: u32, g: u32) -> f64 {
    let (h, g) = (h as f64, g as f64);
    (1.0 - 1.0 / h) * (1.0 - 1.0 / g) * (1.0 + 1.0 / (h * g - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Density {
    pub p: f64,
    pub np: f64,
}

/// Sampling probability solving `2pn = n^(g+h-1) (2p)^(hg)`.
pub fn np_density(n: f64, h: u32, g: u32) -> Result<Density> {
    check_hg(h, g)?;
    let np = 0.5 * n.powf(density_exponent(h, g));
    let p = np / n;
    if !(p > 0.0 && p <= 1.0) {
        return Err(parameter(format!("n={n} is too small for h={h}, g={g}: p={p} > 1")));
    }
    let residual = density_residual(n, h, g, p);
    if residual > 1e-9 {
        return Err(Error::Internal(format!("density equation residual {residual:e}")));
    }
    Ok(Density { p, np })
}

/// Relative gap between the two sides of `2pn = n^(g+h-1) (2p)^(hg)`,
/// compared in log space.
pub fn density_residual(n: f64, h: u32, g: u32, p: f64) -> f64 {
    let lhs = (2.0 * p * n).ln();
    let rhs = (g + h - 1) as f64 * n.ln() + (h * g) as f64 * (2.0 * p).ln();
    ((lhs - rhs).exp() - 1.0).abs()
}

/// `(1/8) n^((1-1/h)(1-1/g)(1+1/(hg-1)))`, which is `np / 4`.
pub fn thm5_lower(n: f64, h: u32, g: u32) -> Result<f64> {
    check_hg(h, g)?;
    Ok(n.powf(density_exponent(h, g)) / 8.0)
}

/// `A(n) (ln n)^(1/h) / n^(1-1/h)` per point; points with `n < 2` are skipped.
pub fn thm6_ratio(counts: &[(u64, u64)], h: u32) -> Vec<(u64, f64)> {
    let hf = h as f64;
    counts
        .iter()
        .filter(|&&(n, _)| n >= 2)
        .map(|&(n, a)| {
            let nf = n as f64;
            (n, a as f64 * nf.ln().powf(1.0 / hf) / nf.powf(1.0 - 1.0 / hf))
        })
        .collect()
}

/// Every bound column for one parameter triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub h: u32,
    pub g: u32,
    pub thm1_main: f64,
    pub thm1_error_order: f64,
    pub eq3_group: f64,
    pub eq3_interval_via_z2n: f64,
    pub thm5_lower: f64,
    pub np_density: Option<Density>,
    pub eq2_furedi: Option<f64>,
}

impl BoundReport {
    pub fn new(n: u64, h: u32, g: u32) -> Result<Self> {
        let nf = n as f64;
        Ok(BoundReport {
            n,
            h,
            g,
            thm1_main: thm1_main(nf, h, g)?,
            thm1_error_order: thm1_error_order(h),
            eq3_group: eq3_group(nf, h, g)?,
            eq3_interval_via_z2n: eq3_group(2.0 * nf, h, g)?,
            thm5_lower: thm5_lower(nf, h, g)?,
            np_density: np_density(nf, h, g).ok(),
            eq2_furedi: None,
        })
    }
}

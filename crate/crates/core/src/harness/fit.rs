use std::collections::BTreeMap;

use crate::error::{input, Result};
use crate::harness::bench::BenchRow;

/// Least-squares slope of `log(edges - baseline)` against `log p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub baseline: f64,
    /// Number of distinct `p` values used.
    pub points: usize,
    /// Set when the medians do not vary; the exponent is then 0.
    pub degenerate: bool,
}

/// Fits the growth exponent of the per-`p` median edge count.
///
/// `baseline` is subtracted from every median before taking logs and stands
/// for an additive term independent of `p`. Needs at least four distinct `p`
/// values and a single `(kind, n)` across `rows`.
pub fn fit_exponent(rows: &[BenchRow], baseline: f64) -> Result<ExponentFit> {
    let Some(first) = rows.first() else {
        return Err(input("no rows to fit"));
    };
    if rows.iter().any(|r| r.kind != first.kind || r.n != first.n) {
        return Err(input("rows mix kinds or graph sizes"));
    }
    let mut by_p: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in rows {
        by_p.entry(r.p).or_default().push(r.edges as f64);
    }
    if by_p.len() < 4 {
        return Err(input(format!(
            "need at least 4 distinct p values, got {}",
            by_p.len()
        )));
    }
    let medians: Vec<(f64, f64)> = by_p
        .into_iter()
        .map(|(p, mut e)| (p as f64, median(&mut e)))
        .collect();

    let points = medians.len();
    if medians.iter().all(|&(_, e)| e == medians[0].1) {
        return Ok(ExponentFit {
            exponent: 0.0,
            r_squared: 1.0,
            baseline,
            points,
            degenerate: true,
        });
    }
    let mut xy = Vec::with_capacity(points);
    for &(p, e) in &medians {
        if e - baseline <= 0.0 {
            return Err(input(format!(
                "median {e} at p = {p} does not exceed the baseline {baseline}"
            )));
        }
        xy.push((p.ln(), (e - baseline).ln()));
    }
    let (slope, r_squared) = least_squares(&xy);
    Ok(ExponentFit {
        exponent: slope,
        r_squared,
        baseline,
        points,
        degenerate: false,
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

/// Slope and coefficient of determination of the line through `xy`.
fn least_squares(xy: &[(f64, f64)]) -> (f64, f64) {
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: usize, edges: usize) -> BenchRow {
        BenchRow {
            kind: "plus2".into(),
            n: 100,
            m: 400,
            p,
            seed: 0,
            edges,
            rounds: 1,
            mean_fraction: 1.0,
            forced_base: false,
            budget: edges,
            wall_ms: 0,
            bound_reference: 0.0,
        }
    }

    #[test]
    fn exact_power_law() {
        // 7·p^(1/3) on perfect cubes is integral
        let rows: Vec<_> = [1usize, 8, 27, 64, 125, 1000]
            .iter()
            .map(|&p| row(p, 7 * (p as f64).cbrt().round() as usize))
            .collect();
        let fit = fit_exponent(&rows, 0.0).unwrap();
        assert!((fit.exponent - 1.0 / 3.0).abs() < 0.01, "{fit:?}");
        assert!(fit.r_squared > 0.999);
        assert!(!fit.degenerate);
    }

    #[test]
    fn baseline_is_removed() {
        let rows: Vec<_> = [4usize, 16, 64, 256, 1024]
            .iter()
            .map(|&p| row(p, 500 + 3 * (p as f64).sqrt() as usize))
            .collect();
        let fit = fit_exponent(&rows, 500.0).unwrap();
        assert!((fit.exponent - 0.5).abs() < 0.01, "{fit:?}");
    }

    #[test]
    fn constant_data_is_flagged() {
        let rows: Vec<_> = [2usize, 4, 8, 16].iter().map(|&p| row(p, 99)).collect();
        let fit = fit_exponent(&rows, 0.0).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.exponent, 0.0);
    }

    #[test]
    fn medians_are_used() {
        let mut rows = Vec::new();
        for &p in &[2usize, 4, 8, 16] {
            rows.push(row(p, p));
            rows.push(row(p, p));
            rows.push(row(p, 1_000_000));
        }
        let fit = fit_exponent(&rows, 0.0).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_inputs() {
        let three: Vec<_> = [2usize, 4, 8].iter().map(|&p| row(p, p)).collect();
        assert!(fit_exponent(&three, 0.0).is_err());
        assert!(fit_exponent(&[], 0.0).is_err());
        let mut mixed: Vec<_> = [2usize, 4, 8, 16].iter().map(|&p| row(p, p)).collect();
        mixed[0].n = 7;
        assert!(fit_exponent(&mixed, 0.0).is_err());
        let low: Vec<_> = [2usize, 4, 8, 16].iter().map(|&p| row(p, p)).collect();
        assert!(fit_exponent(&low, 3.0).is_err());
    }
}

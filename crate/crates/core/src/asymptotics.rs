//! Golden-ratio asymptotics: the constant estimates and convergence
//! diagnostics derived from an enumerated table.
//!
//! Counts cross into floating point only here; every identity check
//! elsewhere stays in exact integers. N(g) grows like S phi^g and the
//! per-efficacy counts like S phi^(g-h-2); the constant C = S phi^2 has
//! the rapidly summable series (1/sqrt 5) sum of r(k) phi^(1-k), whose
//! partial sums are rigorous lower bounds because every term is
//! nonnegative.

use crate::error::Result;
use crate::recursion::{w, RSequence};
use crate::tree::{CountTable, DaSumReport};

/// The golden ratio (1 + sqrt 5) / 2.
pub fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Monotone partial-sum estimates of C and S = C / phi^2.
#[derive(Clone, Copy, Debug)]
pub struct ConstantEstimate {
    /// Number of series terms used: k runs from -1 to terms_used.
    pub terms_used: i64,
    pub c_lower: f64,
    pub s_lower: f64,
    pub phi: f64,
}

/// Partial sum of the C series through k = k_upper.
pub fn c_lower_partial(r: &RSequence, k_upper: i64) -> Result<f64> {
    let phi = phi();
    let mut acc = 0.0;
    for k in -1..=k_upper {
        acc += r.get(k)? as f64 * phi.powi((1 - k) as i32);
    }
    Ok(acc / 5f64.sqrt())
}

/// Estimates C and S from every harvested r value. All omitted terms are
/// nonnegative, so both numbers are rigorous lower bounds.
pub fn estimate_constants(r: &RSequence) -> ConstantEstimate {
    let phi = phi();
    let c_lower = c_lower_partial(r, r.k_max()).expect("r values in range");
    ConstantEstimate {
        terms_used: r.k_max(),
        c_lower,
        s_lower: c_lower / (phi * phi),
        phi,
    }
}

/// Per-genus convergence diagnostics.
#[derive(Clone, Debug)]
pub struct GenusRow {
    pub genus: u32,
    /// N(g) / phi^g, converging to S.
    pub n_over_phig: f64,
    /// t(g, h) phi^(h+2) / N(g) for h = 0..=h_max; 1 in the limit.
    pub ratios: Vec<f64>,
    /// sum over h of |t(g, h) - S_hat phi^(g-h-2)| / phi^g.
    pub theorem2_residual: f64,
    /// sum of phi^(-k) r(k) for g <= k <= k_max (only when g <= k_max).
    pub lemma2_tail: Option<f64>,
    /// |w(g) - C_hat phi^g| / phi^g (only when g <= k_max).
    pub w_residual: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub h_max: u32,
    /// The rigorous lower bound used in place of the unknown true S.
    pub s_hat_used: f64,
    pub rows: Vec<GenusRow>,
    /// |s_lower - mean of N(g)/phi^g over the last five genera|: two
    /// independent views of S whose gap must shrink with depth.
    pub s_view_gap: f64,
}

/// Builds the full diagnostic report. `est` must come from the same `r`,
/// which must come from the same table depth.
pub fn convergence_report(
    table: &CountTable,
    r: &RSequence,
    est: &ConstantEstimate,
    h_max: u32,
) -> Result<ConvergenceReport> {
    let phi = phi();
    let s_hat = est.s_lower;
    let c_hat = est.c_lower;
    let mut rows = Vec::with_capacity(table.max_genus() as usize + 1);
    for g in 0..=table.max_genus() {
        let n_g = table.n(g) as f64;
        let phig = phi.powi(g as i32);
        let ratios: Vec<f64> = (0..=h_max)
            .map(|h| table.t(g, h) as f64 * phi.powi(h as i32 + 2) / n_g)
            .collect();
        // the h > g + 1 tail of the residual sum is exact geometry:
        // sum of S_hat phi^(g-h-2) over h >= g+2 equals S_hat phi^(-2)
        let mut residual = s_hat * phi.powi(-2);
        for h in 0..=g + 1 {
            residual +=
                (table.t(g, h) as f64 - s_hat * phi.powi(g as i32 - h as i32 - 2)).abs();
        }
        residual /= phig;
        let in_r = (g as i64) <= r.k_max();
        let lemma2_tail = in_r.then(|| {
            (g as i64..=r.k_max())
                .map(|k| phi.powi(-(k as i32)) * r.get(k).unwrap() as f64)
                .sum()
        });
        let w_residual = in_r.then(|| {
            let wn = w(r, g as i64).unwrap() as f64;
            let phin = phi.powi(g as i32);
            (wn - c_hat * phin).abs() / phin
        });
        rows.push(GenusRow {
            genus: g,
            n_over_phig: n_g / phig,
            ratios,
            theorem2_residual: residual,
            lemma2_tail,
            w_residual,
        });
    }
    let k = rows.len().min(5);
    let mean =
        rows[rows.len() - k..].iter().map(|r| r.n_over_phig).sum::<f64>() / k as f64;
    Ok(ConvergenceReport {
        h_max,
        s_hat_used: s_hat,
        rows,
        s_view_gap: (est.s_lower - mean).abs(),
    })
}

impl ConvergenceReport {
    /// CSV: one row per genus. Optional columns are empty when the genus
    /// exceeds the harvested r range.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("genus,n_over_phig");
        for h in 0..=self.h_max {
            out.push_str(&format!(",ratio_h{h}"));
        }
        out.push_str(",theorem2_residual,lemma2_tail,w_residual\n");
        for row in &self.rows {
            out.push_str(&format!("{},{}", row.genus, row.n_over_phig));
            for v in &row.ratios {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(",{}", row.theorem2_residual));
            match row.lemma2_tail {
                Some(v) => out.push_str(&format!(",{v}")),
                None => out.push(','),
            }
            match row.w_residual {
                Some(v) => out.push_str(&format!(",{v}")),
                None => out.push(','),
            }
            out.push('\n');
        }
        out
    }
}

/// Quarter-mean trend over a reported sequence: does the final quarter
/// average at or below the first quarter's average?
#[derive(Clone, Debug)]
pub struct TrendSummary {
    pub len: usize,
    pub first_quarter_mean: f64,
    pub last_quarter_mean: f64,
    pub nonincreasing: bool,
}

pub fn trend_of(values: &[f64]) -> TrendSummary {
    if values.is_empty() {
        return TrendSummary {
            len: 0,
            first_quarter_mean: 0.0,
            last_quarter_mean: 0.0,
            nonincreasing: true,
        };
    }
    let q = values.len().div_ceil(4);
    let first = values[..q].iter().sum::<f64>() / q as f64;
    let last = values[values.len() - q..].iter().sum::<f64>() / q as f64;
    TrendSummary {
        len: values.len(),
        first_quarter_mean: first,
        last_quarter_mean: last,
        nonincreasing: last <= first,
    }
}

/// Trend summary for a sequence of D_a reports at increasing a.
pub fn lemma3_trend(reports: &[DaSumReport]) -> TrendSummary {
    let values: Vec<f64> = reports.iter().map(|r| r.value).collect();
    trend_of(&values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{count_tables, TraversalOptions};

    #[test]
    fn phi_satisfies_its_equation() {
        let p = phi();
        assert!((p * p - (p + 1.0)).abs() / (p + 1.0) < 1e-14);
    }

    #[test]
    fn two_term_estimate_is_phi_cubed() {
        // r(-1) = r(0) = 1 alone: C >= (phi^2 + phi)/sqrt 5 = phi^3/sqrt 5
        let r = RSequence::from_parts(&[], 0);
        let c = c_lower_partial(&r, 0).unwrap();
        let p = phi();
        assert!((c - p.powi(3) / 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn partial_sums_nondecreasing() {
        let t = count_tables(13, &TraversalOptions::default()).unwrap();
        let r = RSequence::from_table(&t).unwrap();
        let mut prev = 0.0;
        for k in -1..=r.k_max() {
            let c = c_lower_partial(&r, k).unwrap();
            assert!(c >= prev, "k={k}");
            prev = c;
        }
        let est = estimate_constants(&r);
        assert!((est.s_lower - prev / (phi() * phi())).abs() < 1e-14);
        assert_eq!(est.terms_used, r.k_max());
    }

    #[test]
    fn report_shape_and_small_values() {
        let t = count_tables(10, &TraversalOptions::default()).unwrap();
        let r = RSequence::from_table(&t).unwrap();
        let est = estimate_constants(&r);
        let rep = convergence_report(&t, &r, &est, 4).unwrap();
        assert_eq!(rep.rows.len(), 11);
        // N(g)/phi^g starts 1, 0.618..., 0.763...
        assert!((rep.rows[0].n_over_phig - 1.0).abs() < 1e-12);
        assert!((rep.rows[1].n_over_phig - 1.0 / phi()).abs() < 1e-12);
        assert!((rep.rows[2].n_over_phig - 2.0 / phi().powi(2)).abs() < 1e-12);
        // zero cells give zero ratios
        assert_eq!(rep.rows[0].ratios[0], 0.0);
        for row in &rep.rows {
            assert!(row.theorem2_residual.is_finite() && row.theorem2_residual >= 0.0);
            for v in &row.ratios {
                assert!(v.is_finite() && *v >= 0.0);
            }
        }
        // optional columns populated exactly up to k_max
        for row in &rep.rows {
            assert_eq!(row.lemma2_tail.is_some(), (row.genus as i64) <= r.k_max());
        }
        let csv = rep.to_csv();
        assert!(csv.starts_with(
            "genus,n_over_phig,ratio_h0,ratio_h1,ratio_h2,ratio_h3,ratio_h4,theorem2_residual,lemma2_tail,w_residual\n"
        ));
        assert_eq!(csv.lines().count(), 12);
    }

    #[test]
    fn trend_primitive() {
        let t = trend_of(&[]);
        assert!(t.nonincreasing);
        assert_eq!(t.len, 0);

        let t = trend_of(&[4.0, 3.0, 2.0, 1.0]);
        assert!(t.nonincreasing);
        assert_eq!(t.first_quarter_mean, 4.0);
        assert_eq!(t.last_quarter_mean, 1.0);

        let t = trend_of(&[1.0, 1.0, 5.0, 9.0]);
        assert!(!t.nonincreasing);
    }
}

//! Numerical probes of the open questions: monotonicity of N(g), the
//! Fibonacci-like lower bound, Ye's inequality (a theorem, so a failure
//! is an enumeration bug), the alternating-sign pattern of s2 on the
//! diagonal just inside the bad region, and the growth rate of the
//! Fibonacci-gap differences N(g+2) - N(g+1) - N(g).

use crate::error::{Error, Result};
use crate::recursion::{s2, RSequence};
use crate::tree::CountTable;
use serde::Serialize;

/// Largest contiguous prefix over which a per-g check held, plus the
/// first failing g if any.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PrefixCheck {
    pub holds_up_to: u32,
    pub first_failure: Option<u32>,
}

/// Strict monotonicity N(g) < N(g + 1), checked for g >= 1 (it fails
/// trivially at g = 0 where N(0) = N(1) = 1).
pub fn check_conjecture1(n: &[u64]) -> PrefixCheck {
    prefix_check(n, 1, |n, g| n[g] < n[g + 1])
}

/// N(g + 2) >= N(g + 1) + N(g) for g >= 1; equality counts as holding.
pub fn check_fibonacci_conjecture(n: &[u64]) -> PrefixCheck {
    prefix_check(n, 2, |n, g| n[g + 2] >= n[g + 1] + n[g])
}

fn prefix_check(n: &[u64], span: usize, ok: impl Fn(&[u64], usize) -> bool) -> PrefixCheck {
    let mut holds_up_to = 0;
    for g in 1..n.len().saturating_sub(span) {
        if !ok(n, g) {
            return PrefixCheck {
                holds_up_to,
                first_failure: Some(g as u32),
            };
        }
        holds_up_to = g as u32;
    }
    PrefixCheck {
        holds_up_to,
        first_failure: None,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct YeCheck {
    pub holds: bool,
    pub first_failure: Option<u32>,
}

/// Ye's inequality N(g + 1) >= N(g) - N(g - 1). This is a theorem: any
/// failure means the table is wrong and callers must treat it as an
/// internal error.
pub fn check_ye(n: &[u64]) -> YeCheck {
    for g in 1..n.len().saturating_sub(1) {
        if n[g + 1] + n[g - 1] < n[g] {
            return YeCheck {
                holds: false,
                first_failure: Some(g as u32),
            };
        }
    }
    YeCheck {
        holds: true,
        first_failure: None,
    }
}

/// One row of the diagonal probe s2(2h + 2, h) against (-1)^h.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct S2DiagonalRow {
    pub h: u32,
    pub s2_value: i64,
    pub matches_sign: bool,
}

/// Evaluates s2 on the first diagonal inside the bad region for every
/// checkable h. The value needs r(h + 2), so h is capped by the
/// harvested r range as well as by 2h + 2 <= max genus; the report says
/// how far it could look.
pub fn s2_diagonal_check(table: &CountTable, r: &RSequence) -> Result<Vec<S2DiagonalRow>> {
    let by_genus = (table.max_genus() as i64 - 2) / 2;
    let by_r = r.k_max() - 2;
    let h_max = by_genus.min(by_r);
    let mut rows = Vec::new();
    if h_max >= 0 {
        for h in 0..=h_max as u32 {
            let g = 2 * h + 2;
            let value = s2(table, r, g, h)?;
            let expected = if h % 2 == 0 { 1 } else { -1 };
            rows.push(S2DiagonalRow {
                h,
                s2_value: value,
                matches_sign: value == expected,
            });
        }
    }
    Ok(rows)
}

/// Least-squares fit of log d(g) over the tail window.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsiFit {
    pub psi: f64,
    pub alpha: f64,
    pub window_lo: u32,
    pub window_hi: u32,
}

/// Fits d ~ alpha * psi^g to (g, d) points by least squares on log d.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 4 {
        return Err(Error::FitRefused {
            reason: format!("window has {} points, need at least 4", points.len()),
        });
    }
    if let Some((g, d)) = points.iter().find(|&&(_, d)| d <= 0.0) {
        return Err(Error::FitRefused {
            reason: format!("nonpositive difference d({g}) = {d}"),
        });
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1.ln()).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1.ln()).sum();
    let slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    let intercept = (sy - slope * sx) / n;
    Ok((slope.exp(), intercept.exp()))
}

/// Estimates the growth of d(g) = N(g + 2) - N(g + 1) - N(g) over the
/// last half of the usable range. Refuses when any windowed difference
/// is nonpositive (itself a conjecture-relevant finding) or the window
/// is shorter than 4 points.
pub fn estimate_psi(n: &[u64]) -> Result<PsiFit> {
    if n.len() < 4 {
        return Err(Error::FitRefused {
            reason: "need at least N(0..=3)".into(),
        });
    }
    // d(g) defined for 1 <= g <= len - 3
    let g_hi = n.len() - 3;
    let span = g_hi; // number of defined differences
    let window = span.div_ceil(2);
    let g_lo = g_hi - window + 1;
    let points: Vec<(f64, f64)> = (g_lo..=g_hi)
        .map(|g| {
            let d = n[g + 2] as i128 - n[g + 1] as i128 - n[g] as i128;
            (g as f64, d as f64)
        })
        .collect();
    let (psi, alpha) = fit_exponential(&points)?;
    Ok(PsiFit {
        psi,
        alpha,
        window_lo: g_lo as u32,
        window_hi: g_hi as u32,
    })
}

/// Everything the conjectures command emits, JSON-ready.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub conjecture1_holds_up_to: u32,
    pub conjecture1_first_failure: Option<u32>,
    pub fibonacci_conj_holds_up_to: u32,
    pub fibonacci_first_failure: Option<u32>,
    pub ye_inequality_holds: bool,
    pub s2_diagonal: Vec<S2DiagonalRow>,
    pub s2_diagonal_max_h: Option<u32>,
    pub psi_estimate: Option<f64>,
    pub alpha_estimate: Option<f64>,
    pub psi_window: Option<(u32, u32)>,
    pub psi_note: Option<String>,
}

pub fn run_all(table: &CountTable, r: &RSequence) -> Result<ConjectureReport> {
    let n = table.n_values();
    let c1 = check_conjecture1(n);
    let fibc = check_fibonacci_conjecture(n);
    let ye = check_ye(n);
    let s2_diagonal = s2_diagonal_check(table, r)?;
    let (psi, alpha, window, note) = match estimate_psi(n) {
        Ok(fit) => (
            Some(fit.psi),
            Some(fit.alpha),
            Some((fit.window_lo, fit.window_hi)),
            None,
        ),
        Err(e) => (None, None, None, Some(e.to_string())),
    };
    Ok(ConjectureReport {
        conjecture1_holds_up_to: c1.holds_up_to,
        conjecture1_first_failure: c1.first_failure,
        fibonacci_conj_holds_up_to: fibc.holds_up_to,
        fibonacci_first_failure: fibc.first_failure,
        ye_inequality_holds: ye.holds,
        s2_diagonal_max_h: s2_diagonal.last().map(|row| row.h),
        s2_diagonal,
        psi_estimate: psi,
        alpha_estimate: alpha,
        psi_window: window,
        psi_note: note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{count_tables, TraversalOptions};

    #[test]
    fn conjecture1_on_figure_one() {
        let c = check_conjecture1(&[1, 1, 2, 4, 7]);
        assert_eq!(c.holds_up_to, 3);
        assert!(c.first_failure.is_none());

        let c = check_conjecture1(&[1, 1, 2, 2, 7]);
        assert_eq!(c.holds_up_to, 1);
        assert_eq!(c.first_failure, Some(2));
    }

    #[test]
    fn fibonacci_conjecture_cases() {
        assert_eq!(check_fibonacci_conjecture(&[1, 1, 2, 4]).holds_up_to, 1);
        assert_eq!(check_fibonacci_conjecture(&[1, 1, 2, 4, 7]).holds_up_to, 2);
        // equality counts as holding
        assert_eq!(check_fibonacci_conjecture(&[5, 1, 2, 3, 5]).holds_up_to, 2);
        let c = check_fibonacci_conjecture(&[9, 1, 2, 4, 5]);
        assert_eq!(c.first_failure, Some(2));
    }

    #[test]
    fn ye_on_real_and_corrupted_data() {
        assert!(check_ye(&[1, 1, 2, 4, 7]).holds);
        let t = count_tables(14, &TraversalOptions::default()).unwrap();
        assert!(check_ye(t.n_values()).holds);
        let bad = check_ye(&[1, 1, 10, 4, 7]);
        assert!(!bad.holds);
        assert_eq!(bad.first_failure, Some(2));
    }

    #[test]
    fn fit_recovers_planted_exponential() {
        let points: Vec<(f64, f64)> =
            (3..12).map(|g| (g as f64, 2.0 * 1.5f64.powi(g))).collect();
        let (psi, alpha) = fit_exponential(&points).unwrap();
        assert!((psi - 1.5).abs() < 1e-9, "psi = {psi}");
        assert!((alpha - 2.0).abs() < 1e-9, "alpha = {alpha}");

        assert!(matches!(
            fit_exponential(&points[..3]),
            Err(Error::FitRefused { .. })
        ));
        let mut with_zero = points.clone();
        with_zero[4].1 = 0.0;
        assert!(matches!(
            fit_exponential(&with_zero),
            Err(Error::FitRefused { .. })
        ));
    }

    #[test]
    fn psi_from_planted_differences() {
        // integer-exact plant: d(g) = 2 * 2^(gmax - g) * 3^g has ratio
        // exactly 1.5; build N by the defining recurrence
        let gmax = 14usize;
        let mut n = vec![1u64, 1, 2];
        for g in 1..=gmax {
            let d = 2u64 * (1u64 << (gmax - g)) * 3u64.pow(g as u32);
            let next = n[g + 1] + n[g] + d;
            n.push(next);
        }
        let fit = estimate_psi(&n).unwrap();
        assert!((fit.psi - 1.5).abs() < 1e-9, "psi = {}", fit.psi);
        assert!(fit.window_lo >= 1 && (fit.window_hi as usize) == n.len() - 3);

        assert!(estimate_psi(&[1, 1, 2]).is_err());
    }

    #[test]
    fn s2_diagonal_region() {
        let t = count_tables(14, &TraversalOptions::default()).unwrap();
        let r = RSequence::from_table(&t).unwrap();
        let rows = s2_diagonal_check(&t, &r).unwrap();
        // k_max = 6 limits h to 4; 2h + 2 = 10 <= 14
        assert_eq!(rows.last().unwrap().h, 4);
        for row in &rows {
            assert!(2 * row.h + 2 <= 14);
        }
    }

    #[test]
    fn full_report_assembles() {
        let t = count_tables(14, &TraversalOptions::default()).unwrap();
        let r = RSequence::from_table(&t).unwrap();
        let rep = run_all(&t, &r).unwrap();
        assert!(rep.ye_inequality_holds);
        assert_eq!(rep.conjecture1_holds_up_to, 13);
        assert_eq!(rep.fibonacci_conj_holds_up_to, 12);
        let json = serde_json::to_string_pretty(&rep).unwrap();
        assert!(json.contains("\"ye_inequality_holds\": true"));
    }
}

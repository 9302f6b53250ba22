use collapse_core::diagnostics::{
    fit_mu_b, fit_series, fit_t0, linear_fit, select_fit_window, FitError, FitWindow,
};
use collapse_core::selfsimilar::SelfSimilarSolution;
use collapse_core::{Record, TimeSeries};
use proptest::prelude::*;

fn synthetic(c: f64, b: f64, t0: f64, x0: f64, count: usize) -> TimeSeries {
    let s = SelfSimilarSolution::new(c, b, t0, x0).unwrap();
    let records = (0..count)
        .map(|k| {
            let t = 0.99 * t0 * k as f64 / count as f64;
            let xf = s.half_width(t).unwrap();
            Record {
                t,
                x_left: x0 - xf,
                x_right: x0 + xf,
                h_max: s.h_max(t).unwrap(),
            }
        })
        .collect();
    TimeSeries::from_records(records)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn exact_series_round_trip(
        c in 1.6f64..3.0,
        b in 0.2f64..5.0,
        t0 in 0.3f64..4.0,
        x0 in -2.0f64..2.0,
    ) {
        let series = synthetic(c, b, t0, x0, 2000);
        let mu = (c - 1.0) / (2.0 * c - 3.0);
        let window = FitWindow { start: 0.0, end: t0 };
        let (t0_fit, _) = fit_t0(&series, c, &window).unwrap();
        let (mu_fit, b_fit, _) = fit_mu_b(&series, t0_fit, &window).unwrap();
        prop_assert!(rel(t0_fit, t0) < 1e-6, "t0 {} vs {}", t0_fit, t0);
        prop_assert!(rel(mu_fit, mu) < 1e-6, "mu {} vs {}", mu_fit, mu);
        prop_assert!(rel(b_fit, b) < 1e-6, "B {} vs {}", b_fit, b);

        let auto = fit_series(&series, c).unwrap();
        prop_assert!(rel(auto.t0, t0) < 1e-6);
        prop_assert!(rel(auto.mu, mu) < 1e-6);
        prop_assert!(rel(auto.b, b) < 1e-6);
    }
}

#[test]
fn t0_line_has_unit_slope_at_c_seven_quarters() {
    let series = synthetic(1.75, 1.3, 2.0, 0.0, 500);
    let t: Vec<f64> = series.records.iter().map(|r| r.t).collect();
    let y: Vec<f64> = series
        .records
        .iter()
        .map(|r| r.half_width().powi(2) / r.h_max)
        .collect();
    let line = linear_fit(&t, &y).unwrap();
    assert!((line.slope + 1.0).abs() < 1e-12, "{}", line.slope);
}

#[test]
fn time_shift_moves_only_t0() {
    let series = synthetic(2.0, 1.0, 1.0, 0.0, 1000);
    let shifted = TimeSeries::from_records(
        series
            .records
            .iter()
            .map(|r| Record { t: r.t + 5.0, ..*r })
            .collect(),
    );
    let a = fit_series(&series, 2.0).unwrap();
    let b = fit_series(&shifted, 2.0).unwrap();
    assert!((b.t0 - a.t0 - 5.0).abs() < 1e-9);
    assert!((a.mu - b.mu).abs() < 1e-9);
    assert!(rel(b.b, a.b) < 1e-8);
}

#[test]
fn rescaling_space_scales_b_only() {
    let lambda = 3.0;
    let series = synthetic(1.75, 1.0, 1.0, 0.0, 1000);
    let scaled = TimeSeries::from_records(
        series
            .records
            .iter()
            .map(|r| Record {
                t: r.t,
                x_left: lambda * r.x_left,
                x_right: lambda * r.x_right,
                h_max: lambda * lambda * r.h_max,
            })
            .collect(),
    );
    let a = fit_series(&series, 1.75).unwrap();
    let b = fit_series(&scaled, 1.75).unwrap();
    assert!(rel(b.t0, a.t0) < 1e-9);
    assert!((a.mu - b.mu).abs() < 1e-9);
    assert!(rel(b.b, lambda * a.b) < 1e-8);
}

#[test]
fn short_series_is_rejected() {
    let series = synthetic(1.75, 1.0, 1.0, 0.0, 20);
    assert!(matches!(
        select_fit_window(&series),
        Err(FitError::TooFewRecords { .. })
    ));
}

#[test]
fn series_without_collapse_has_no_window() {
    let records = (0..200)
        .map(|k| Record {
            t: k as f64 * 0.01,
            x_left: -1.0,
            x_right: 1.0,
            h_max: 1.0,
        })
        .collect();
    let series = TimeSeries::from_records(records);
    assert!(fit_series(&series, 1.75).is_err());
}

#[test]
fn collapse_time_inside_window_is_rejected() {
    let series = synthetic(1.75, 1.0, 1.0, 0.0, 100);
    let window = FitWindow {
        start: 0.0,
        end: 1.0,
    };
    assert!(matches!(
        fit_mu_b(&series, 0.5, &window),
        Err(FitError::CollapseTimeInWindow { .. })
    ));
}

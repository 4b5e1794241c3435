//! Experiment grid execution and its on-disk artifacts.
//!
//! A run is one `(topology, model, n_nodes, sigma, algorithm, rep)` cell:
//! grow a DAG, sample data from it, learn a PDAG and score it. Every random
//! stream a run uses is derived from the master seed and the run's own
//! coordinates (see [`derive_run_seed`]), never from a shared generator, so
//! results do not depend on scheduling or on the worker count.

mod config;
mod grid;
mod plot;
mod records;
mod seed;
mod stats;

pub use config::{ExperimentConfig, TestChoice, TopologyLevel};
pub use grid::{execute_run, run_grid, write_trace_csv, RunOptions, RunPlan};
pub use plot::{emit_plots, render_box_panel, render_pvalue_panel};
pub use records::{emit_csv, parse_csv, read_csv, write_csv, RunRecord, RUNS_CSV_HEADER};
pub use seed::derive_run_seed;
pub use stats::{compare_topologies, write_pvalues_csv, PValueRow, PVALUES_CSV_HEADER};

/// Shortest decimal rendering with 17 significant digits, `%.17g` style:
/// positional notation for decimal exponents in `-5..17`, scientific
/// otherwise, trailing zeros dropped. Parsing the output gives back the
/// identical `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let s = format!("{:.*}", (16 - exp) as usize, x);
        trim_zeros(&s).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_f64;
    use proptest::prelude::*;

    #[test]
    fn formats_like_percent_17g() {
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(0.1), "0.10000000000000001");
        assert_eq!(fmt_f64(-2.25), "-2.25");
        assert_eq!(fmt_f64(1e-7), "9.9999999999999995e-8");
        assert_eq!(fmt_f64(1e20), "1e20");
        assert_eq!(fmt_f64(123456.0), "123456");
    }

    proptest! {
        #[test]
        fn round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}

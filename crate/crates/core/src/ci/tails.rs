//! Tail probabilities for the test statistics.

use statrs::function::gamma;

/// `P(Z > t)` for a standard normal `Z`.
pub fn normal_upper_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// `P(X > t)` for `X ~ chi2(dof)`, i.e. the regularized upper incomplete
/// gamma function `Q(dof / 2, t / 2)`.
pub fn chi2_upper_tail(t: f64, dof: u32) -> f64 {
    assert!(dof > 0, "chi-squared needs positive degrees of freedom");
    if t <= 0.0 {
        return 1.0;
    }
    if t.is_infinite() {
        return 0.0;
    }
    gamma::gamma_ur(dof as f64 / 2.0, t / 2.0).clamp(0.0, 1.0)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    // reference values from 40-digit mpmath evaluations
    const NORMAL: &[(f64, f64)] = &[
        (0.5, 0.3085375387259868963622954),
        (1.0, 0.1586552539314570514147675),
        (1.959964, 0.02499999909644240430249510),
        (2.5, 0.006209665325776135166978105),
        (4.0, 0.00003167124183311992125377076),
        (6.0, 9.865876450376981407008641e-10),
        (8.0, 6.220960574271784123515995e-16),
        (-3.0, 0.9986501019683699054733482),
    ];

    const CHI2: &[(f64, u32, f64)] = &[
        (1.0, 1, 0.3173105078629141028295349),
        (3.841459, 1, 0.04999999465319576511115303),
        (10.0, 3, 0.01856613546304323330317143),
        (50.0, 10, 0.0000002669083424904495639694643),
        (150.0, 100, 0.0009039320423540090857556448),
        (100.0, 100, 0.4811916845279567181090943),
        (500.0, 100, 1.720121005369537461271827e-54),
        (0.01, 2, 0.995012479192682313249),
        (30.0, 7, 0.00009495972508134183759741829),
        (250.0, 60, 4.9017479615631470420395e-25),
    ];

    #[test]
    fn normal_tail_reference_values() {
        assert_eq!(normal_upper_tail(0.0), 0.5);
        for &(t, want) in NORMAL {
            let got = normal_upper_tail(t);
            assert!((got - want).abs() <= 1e-12, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn normal_tail_symmetry() {
        for i in 0..=160 {
            let t = i as f64 * 0.05;
            assert!((normal_upper_tail(t) + normal_upper_tail(-t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn chi2_tail_reference_values() {
        assert_eq!(chi2_upper_tail(0.0, 1), 1.0);
        for &(t, k, want) in CHI2 {
            let got = chi2_upper_tail(t, k);
            assert!((got - want).abs() <= 1e-10, "t={t} k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn chi2_one_dof_is_squared_normal() {
        for i in 1..=400 {
            let t = i as f64 * 0.1;
            let lhs = chi2_upper_tail(t, 1);
            let rhs = 2.0 * normal_upper_tail(t.sqrt());
            assert!((lhs - rhs).abs() < 1e-12, "t={t}: {lhs} vs {rhs}");
        }
    }
}

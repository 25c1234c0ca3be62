//! Small summary statistics shared by the Monte-Carlo estimators.

use statrs::function::beta::inv_beta_reg;

/// Mean and standard error (sample std / √n) of per-replication values.
///
/// Summation is sequential in index order, so the result depends only on the
/// values, never on how they were produced in parallel.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let std = (ss / (n - 1) as f64).sqrt();
    (mean, std / (n as f64).sqrt())
}

/// Exact (Clopper–Pearson) two-sided binomial interval at level `1 - alpha`.
pub fn clopper_pearson(hits: u64, n: u64, alpha: f64) -> (f64, f64) {
    assert!(n > 0 && hits <= n, "need 0 <= hits <= n, n > 0");
    let (x, n) = (hits as f64, n as f64);
    let lower = if hits == 0 {
        0.0
    } else {
        inv_beta_reg(x, n - x + 1.0, alpha / 2.0)
    };
    let upper = if hits as f64 == n {
        1.0
    } else {
        inv_beta_reg(x + 1.0, n - x, 1.0 - alpha / 2.0)
    };
    (lower, upper)
}

/// √(se₁² + se₂²), the error scale used when comparing two estimates.
pub fn combined_std_error(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_se_of_small_sample() {
        let (m, se) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sample variance 5/3
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_value_has_zero_error() {
        assert_eq!(mean_and_std_error(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn clopper_pearson_edge_cases() {
        let (lo, hi) = clopper_pearson(0, 10, 0.05);
        assert_eq!(lo, 0.0);
        // 1 - 0.025^(1/10)
        assert!((hi - (1.0 - 0.025f64.powf(0.1))).abs() < 1e-10);
        let (lo, hi) = clopper_pearson(10, 10, 0.05);
        assert_eq!(hi, 1.0);
        assert!((lo - 0.025f64.powf(0.1)).abs() < 1e-10);
    }

    #[test]
    fn clopper_pearson_brackets_the_proportion() {
        let (lo, hi) = clopper_pearson(3_679, 10_000, 0.05);
        assert!(lo < 0.3679 && 0.3679 < hi);
        // close to the normal approximation at this size
        let half = 1.96 * (0.3679f64 * 0.6321 / 1e4).sqrt();
        assert!(((hi - lo) / 2.0 - half).abs() < 2e-4);
    }
}

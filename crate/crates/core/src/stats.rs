//! Sample statistics and the paired t-test used to compare solvers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("samples differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty sample")]
    Empty,
}

/// Mean and sample (n - 1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

/// Mean and sample standard deviation; the deviation of a single value is 0.
pub fn mean_std(values: &[f64]) -> Result<SampleSummary, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Ok(SampleSummary { mean, std, n })
}

/// Outcome of comparing sample `a` against sample `b` (lower is better).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `a` is significantly better.
    DPlus,
    /// `a` is significantly worse.
    DMinus,
    /// No significant difference.
    N,
    /// Not applicable.
    NA,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::DPlus => "D+",
            Verdict::DMinus => "D-",
            Verdict::N => "N",
            Verdict::NA => "NA",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestVerdict {
    pub t_statistic: f64,
    pub p_value: f64,
    pub verdict: Verdict,
}

impl TTestVerdict {
    pub const NOT_APPLICABLE: TTestVerdict = TTestVerdict {
        t_statistic: f64::NAN,
        p_value: f64::NAN,
        verdict: Verdict::NA,
    };
}

/// Two-sided paired t-test on `d = a - b` at significance `alpha`.
pub fn paired_t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<TTestVerdict, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n == 0 {
        return Err(StatsError::Empty);
    }
    if n == 1 {
        return Ok(TTestVerdict::NOT_APPLICABLE);
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let SampleSummary { mean, std, .. } = mean_std(&diffs)?;
    let by_sign = || if mean < 0.0 { Verdict::DPlus } else { Verdict::DMinus };
    if std == 0.0 {
        return Ok(if mean == 0.0 {
            TTestVerdict {
                t_statistic: 0.0,
                p_value: 1.0,
                verdict: Verdict::N,
            }
        } else {
            TTestVerdict {
                t_statistic: mean.signum() * f64::INFINITY,
                p_value: 0.0,
                verdict: by_sign(),
            }
        });
    }
    let t = mean / (std / (n as f64).sqrt());
    if !t.is_finite() {
        // differences that overflow the arithmetic, such as infinite costs
        return Ok(TTestVerdict::NOT_APPLICABLE);
    }
    let p = student_t_two_sided(t, (n - 1) as f64);
    let verdict = if p > alpha { Verdict::N } else { by_sign() };
    Ok(TTestVerdict {
        t_statistic: t,
        p_value: p,
        verdict,
    })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, 0.5 * df, 0.5).clamp(0.0, 1.0)
}

/// `I_x(a, b)` by the Lentz continued fraction, using the symmetry
/// `I_x(a, b) = 1 - I_{1-x}(b, a)` where the fraction converges faster.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_fraction(1.0 - x, b, a) / b
    }
}

fn beta_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const TOL: f64 = 1e-15;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < TOL {
            break;
        }
    }
    h
}

/// Lanczos approximation (g = 7, 9 terms), accurate to about 1e-15.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std_uses_n_minus_one() {
        let s = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(s.mean, 5.0);
        assert!((s.std - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[3.0]).unwrap().std, 0.0);
        assert_eq!(mean_std(&[]), Err(StatsError::Empty));
    }

    #[test]
    fn worked_example() {
        let r = paired_t_test(&[1.0, 2.0, 3.0, 4.0], &[2.0, 2.0, 4.0, 5.0], 0.05).unwrap();
        assert!((r.t_statistic + 3.0).abs() < 1e-12);
        assert!((r.p_value - 0.0577).abs() < 5e-5, "{}", r.p_value);
        assert_eq!(r.verdict, Verdict::N);
    }

    #[test]
    fn closed_forms() {
        // df = 1 is Cauchy: p = 1 - 2 atan(|t|) / pi
        for t in [0.3, 1.0, 4.0] {
            let exact = 1.0 - 2.0 * f64::atan(t) / std::f64::consts::PI;
            assert!((student_t_two_sided(t, 1.0) - exact).abs() < 1e-12);
        }
        // df = 2: p = 1 - |t| / sqrt(2 + t^2)
        for t in [0.5f64, 2.0, 7.0] {
            let exact = 1.0 - t / (2.0 + t * t).sqrt();
            assert!((student_t_two_sided(t, 2.0) - exact).abs() < 1e-12);
        }
        assert_eq!(student_t_two_sided(0.0, 5.0), 1.0);
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut f = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - f.ln()).abs() < 1e-12);
            f *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            paired_t_test(&[1.0, 2.0], &[1.0, 2.0], 0.05).unwrap().verdict,
            Verdict::N
        );
        let same = paired_t_test(&[1.0, 2.0], &[1.0, 2.0], 0.05).unwrap();
        assert_eq!(same.t_statistic, 0.0);
        let shifted = paired_t_test(&[1.0, 2.0], &[2.0, 3.0], 0.05).unwrap();
        assert_eq!((shifted.verdict, shifted.p_value), (Verdict::DPlus, 0.0));
        let shifted = paired_t_test(&[3.0, 4.0], &[2.0, 3.0], 0.05).unwrap();
        assert_eq!(shifted.verdict, Verdict::DMinus);
        assert_eq!(paired_t_test(&[1.0], &[2.0], 0.05).unwrap().verdict, Verdict::NA);
        assert!(paired_t_test(&[1.0], &[2.0, 3.0], 0.05).is_err());
    }

    #[test]
    fn swapping_samples_flips_verdict() {
        let a = [1.0, 1.5, 0.8, 1.2, 0.9];
        let b = [2.0, 2.1, 1.9, 2.6, 2.2];
        let ab = paired_t_test(&a, &b, 0.05).unwrap();
        let ba = paired_t_test(&b, &a, 0.05).unwrap();
        assert_eq!(ab.verdict, Verdict::DPlus);
        assert_eq!(ba.verdict, Verdict::DMinus);
        assert!((ab.p_value - ba.p_value).abs() < 1e-15);
        assert_eq!(ab.t_statistic, -ba.t_statistic);
    }

    #[test]
    fn common_shift_leaves_test_unchanged() {
        let a = [1.0, 1.5, 0.8, 1.2, 0.9];
        let b = [1.1, 1.2, 1.0, 1.6, 1.3];
        let base = paired_t_test(&a, &b, 0.05).unwrap();
        let a2: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
        let b2: Vec<f64> = b.iter().map(|x| x + 100.0).collect();
        let moved = paired_t_test(&a2, &b2, 0.05).unwrap();
        assert!((base.t_statistic - moved.t_statistic).abs() < 1e-9);
        assert_eq!(base.verdict, moved.verdict);
    }
}

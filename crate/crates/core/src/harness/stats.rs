//! Sample summaries and the two-sample F and t tests used to judge whether
//! an evolved EA differs from the baseline.

use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    /// Unbiased (n - 1) standard deviation.
    pub stddev: f64,
    pub count: usize,
}

impl SampleStats {
    pub fn variance(&self) -> f64 {
        self.stddev * self.stddev
    }
}

pub fn summarize(samples: &[f64]) -> Result<SampleStats> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 samples, got {}", samples.len())));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite sample {bad}")));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok(SampleStats { mean, stddev: (ss / (n - 1.0)).sqrt(), count: samples.len() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    /// Degrees of freedom; for the F test this is the numerator df.
    pub df: f64,
    pub p_value: f64,
}

/// Two-tailed variance-ratio test. The larger variance goes on top.
pub fn f_test(a: &[f64], b: &[f64]) -> Result<TestResult> {
    let (sa, sb) = (summarize(a)?, summarize(b)?);
    if sa.variance() == 0.0 || sb.variance() == 0.0 {
        return Err(Error::DegenerateSample("F test needs non-zero variance in both samples".into()));
    }
    let (top, bottom) = if sa.variance() >= sb.variance() { (sa, sb) } else { (sb, sa) };
    let (d1, d2) = ((top.count - 1) as f64, (bottom.count - 1) as f64);
    let f = top.variance() / bottom.variance();
    let dist = FisherSnedecor::new(d1, d2).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(TestResult { statistic: f, df: d1, p_value: (2.0 * dist.sf(f)).min(1.0) })
}

fn t_statistic(a: &[f64], b: &[f64], equal_variance: bool) -> Result<(f64, f64)> {
    let (sa, sb) = (summarize(a)?, summarize(b)?);
    let (na, nb) = (sa.count as f64, sb.count as f64);
    let (va, vb) = (sa.variance(), sb.variance());
    let diff = sa.mean - sb.mean;
    let (se, df) = if equal_variance {
        let pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
        ((pooled * (1.0 / na + 1.0 / nb)).sqrt(), na + nb - 2.0)
    } else {
        let (qa, qb) = (va / na, vb / nb);
        let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
        ((qa + qb).sqrt(), df)
    };
    if se == 0.0 {
        return Err(Error::DegenerateSample("t test needs non-zero variance".into()));
    }
    Ok((diff / se, df))
}

fn student(df: f64) -> Result<StudentsT> {
    StudentsT::new(0.0, 1.0, df).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Two-tailed t test of equal means: pooled variance or Welch.
pub fn t_test(a: &[f64], b: &[f64], equal_variance: bool) -> Result<TestResult> {
    let (t, df) = t_statistic(a, b, equal_variance)?;
    let p = (2.0 * student(df)?.sf(t.abs())).min(1.0);
    Ok(TestResult { statistic: t, df, p_value: p })
}

/// One-sided t test of `mean(a) < mean(b)`.
pub fn t_test_less(a: &[f64], b: &[f64], equal_variance: bool) -> Result<TestResult> {
    let (t, df) = t_statistic(a, b, equal_variance)?;
    Ok(TestResult { statistic: t, df, p_value: student(df)?.cdf(t) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanComparison {
    pub variance: TestResult,
    pub equal_variance: bool,
    pub means: TestResult,
}

/// F test at `alpha` picks pooled or Welch, then a two-tailed t test.
pub fn compare_means(a: &[f64], b: &[f64], alpha: f64) -> Result<MeanComparison> {
    let variance = f_test(a, b)?;
    let equal_variance = variance.p_value >= alpha;
    let means = t_test(a, b, equal_variance)?;
    Ok(MeanComparison { variance, equal_variance, means })
}

//! Real-vector function optimisation: ten benchmark functions on box domains,
//! convex (midpoint) crossover and clamped Gaussian mutation.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::interp::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
}

const ACKLEY_A: f64 = 20.0;
const ACKLEY_B: f64 = 0.2;
const ACKLEY_C: f64 = 2.0 * PI;

impl FunctionId {
    pub const ALL: [FunctionId; 10] = [
        FunctionId::F1,
        FunctionId::F2,
        FunctionId::F3,
        FunctionId::F4,
        FunctionId::F5,
        FunctionId::F6,
        FunctionId::F7,
        FunctionId::F8,
        FunctionId::F9,
        FunctionId::F10,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    /// Symmetric default domain `[-b, b]`.
    pub fn default_bound(self) -> f64 {
        match self {
            FunctionId::F1 | FunctionId::F3 => 10.0,
            FunctionId::F2 | FunctionId::F4 | FunctionId::F5 => 100.0,
            FunctionId::F6 => 30.0,
            FunctionId::F7 => 5.0,
            FunctionId::F8 => 32.0,
            FunctionId::F9 | FunctionId::F10 => 500.0,
        }
    }

    pub fn default_domain(self, n: usize) -> Result<RealDomain> {
        let b = self.default_bound();
        RealDomain::new(-b, b, n)
    }

    /// Tabulated minimum value.
    pub fn f_min(self, n: usize) -> f64 {
        match self {
            FunctionId::F10 => -(n as f64) * 418.98,
            _ => 0.0,
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.index())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let idx = s
            .strip_prefix('f')
            .or_else(|| s.strip_prefix('F'))
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|i| (1..=10).contains(i))
            .ok_or_else(|| Error::InvalidInput(format!("unknown function `{s}` (expected f1..f10)")))?;
        Ok(FunctionId::ALL[idx - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealDomain {
    pub min_x: f64,
    pub max_x: f64,
    pub n: usize,
}

impl RealDomain {
    pub fn new(min_x: f64, max_x: f64, n: usize) -> Result<Self> {
        if min_x.is_nan() || max_x.is_nan() || min_x >= max_x {
            return Err(Error::config(format!("empty domain [{min_x}, {max_x}]")));
        }
        if n == 0 {
            return Err(Error::config("dimension must be at least 1"));
        }
        Ok(RealDomain { min_x, max_x, n })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.n && x.iter().all(|&v| v >= self.min_x && v <= self.max_x)
    }
}

fn check_dim(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected a {n}-dimensional point, got {} components",
            x.len()
        )));
    }
    Ok(())
}

fn eval_unchecked(fid: FunctionId, x: &[f64], f5_abs: bool) -> f64 {
    let n = x.len() as f64;
    match fid {
        FunctionId::F1 => x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum(),
        FunctionId::F2 => x.iter().map(|v| v * v).sum(),
        FunctionId::F3 => {
            x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
        }
        FunctionId::F4 => {
            let mut prefix = 0.0;
            let mut total = 0.0;
            for v in x {
                prefix += v * v;
                total += prefix;
            }
            total
        }
        FunctionId::F5 => {
            let comp = |v: &f64| if f5_abs { v.abs() } else { *v };
            x.iter().map(comp).fold(f64::NEG_INFINITY, f64::max)
        }
        FunctionId::F6 => x
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum(),
        FunctionId::F7 => {
            10.0 * n + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
        }
        FunctionId::F8 => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = x.iter().map(|v| (ACKLEY_C * v).cos()).sum::<f64>() / n;
            -ACKLEY_A * (-ACKLEY_B * sq.sqrt()).exp() - cs.exp() + ACKLEY_A + E
        }
        FunctionId::F9 => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
            let prod: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                .product();
            sq - prod + 1.0
        }
        FunctionId::F10 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
    }
}

/// Evaluates `fid` at `x` (dimension `n`). `f5` uses the signed maximum.
pub fn evaluate(fid: FunctionId, x: &[f64], n: usize) -> Result<f64> {
    check_dim(x, n)?;
    Ok(eval_unchecked(fid, x, false))
}

/// Componentwise midpoint of the parents.
pub fn convex_crossover(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_dim(y, x.len())?;
    Ok(x.iter().zip(y).map(|(a, b)| (a + b) / 2.0).collect())
}

/// Adds independent N(0, sigma) noise to every component and clamps to the domain.
pub fn gaussian_mutation<R: Rng + ?Sized>(
    x: &[f64],
    sigma: f64,
    domain: &RealDomain,
    rng: &mut R,
) -> Vec<f64> {
    if sigma == 0.0 {
        return x.to_vec();
    }
    let normal = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
    x.iter()
        .map(|v| (v + normal.sample(rng)).clamp(domain.min_x, domain.max_x))
        .collect()
}

pub fn random_individual<R: Rng + ?Sized>(domain: &RealDomain, rng: &mut R) -> Vec<f64> {
    (0..domain.n)
        .map(|_| rng.random_range(domain.min_x..=domain.max_x))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealProblem {
    pub function: FunctionId,
    pub domain: RealDomain,
    pub sigma: f64,
    /// Use `max |x_i|` for f5 instead of the signed maximum.
    pub f5_abs: bool,
}

impl RealProblem {
    pub const DEFAULT_SIGMA: f64 = 0.01;

    /// Default domain for `function`, sigma 0.01.
    pub fn new(function: FunctionId, n: usize) -> Result<Self> {
        Ok(RealProblem {
            function,
            domain: function.default_domain(n)?,
            sigma: Self::DEFAULT_SIGMA,
            f5_abs: false,
        })
    }

    pub fn with_domain(mut self, domain: RealDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_f5_abs(mut self, f5_abs: bool) -> Self {
        self.f5_abs = f5_abs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::config(format!("sigma must be finite and >= 0, got {}", self.sigma)));
        }
        RealDomain::new(self.domain.min_x, self.domain.max_x, self.domain.n).map(|_| ())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(x, self.domain.n)?;
        Ok(eval_unchecked(self.function, x, self.f5_abs))
    }
}

impl Problem for RealProblem {
    type Individual = Vec<f64>;

    fn random_individual<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        random_individual(&self.domain, rng)
    }

    fn evaluate(&self, x: &Vec<f64>) -> f64 {
        eval_unchecked(self.function, x, self.f5_abs)
    }

    fn crossover<R: Rng + ?Sized>(&self, a: &Vec<f64>, b: &Vec<f64>, _rng: &mut R) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect()
    }

    fn mutate<R: Rng + ?Sized>(&self, p: &Vec<f64>, rng: &mut R) -> Vec<f64> {
        gaussian_mutation(p, self.sigma, &self.domain, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::seq::SliceRandom;

    #[test]
    fn zeros_at_origin() {
        let z = [0.0; 5];
        for fid in FunctionId::ALL {
            if matches!(fid, FunctionId::F6 | FunctionId::F10) {
                continue;
            }
            let v = evaluate(fid, &z, 5).unwrap();
            assert!(v.abs() < 1e-9, "{fid}: {v}");
        }
        assert_eq!(evaluate(FunctionId::F6, &[1.0; 5], 5).unwrap(), 0.0);
    }

    #[test]
    fn f1_weighted_sum() {
        // 1*1 + 2*4 + 3*9 + 4*16 + 5*25
        let oracle: f64 = (1..=5).map(|i| (i * i * i) as f64).sum();
        assert_eq!(oracle, 225.0);
        assert_eq!(evaluate(FunctionId::F1, &[1.0, 2.0, 3.0, 4.0, 5.0], 5).unwrap(), oracle);
    }

    #[test]
    fn f10_near_tabulated_minimum() {
        let v = evaluate(FunctionId::F10, &[420.9687; 5], 5).unwrap();
        assert!((v - FunctionId::F10.f_min(5)).abs() < 0.5, "{v}");
        assert!((v + 2094.9).abs() < 0.5);
    }

    #[test]
    fn f5_variants() {
        let x = [-3.0, -7.0, -1.0];
        assert_eq!(evaluate(FunctionId::F5, &x, 3).unwrap(), -1.0);
        let p = RealProblem::new(FunctionId::F5, 3).unwrap().with_f5_abs(true);
        assert_eq!(p.value(&x).unwrap(), 7.0);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(evaluate(FunctionId::F1, &[0.0; 4], 5), Err(Error::InvalidInput(_))));
        assert!(convex_crossover(&[0.0, 1.0], &[0.0]).is_err());
    }

    #[test]
    fn symmetric_functions_ignore_order() {
        let mut rng = rng_from_seed(21);
        for fid in [
            FunctionId::F2,
            FunctionId::F3,
            FunctionId::F5,
            FunctionId::F7,
            FunctionId::F8,
            FunctionId::F10,
        ] {
            let dom = fid.default_domain(5).unwrap();
            for _ in 0..50 {
                let mut x = random_individual(&dom, &mut rng);
                let before = evaluate(fid, &x, 5).unwrap();
                x.shuffle(&mut rng);
                let after = evaluate(fid, &x, 5).unwrap();
                assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0), "{fid}");
            }
        }
    }

    #[test]
    fn midpoint() {
        assert_eq!(convex_crossover(&[0.0, 0.0], &[2.0, 4.0]).unwrap(), vec![1.0, 2.0]);
        assert_eq!(convex_crossover(&[3.0, -1.0], &[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
    }

    #[test]
    fn mutation_clamps_and_identity() {
        let dom = RealDomain::new(-1.0, 1.0, 3).unwrap();
        let mut rng = rng_from_seed(5);
        let x = vec![1.0, -1.0, 0.0];
        assert_eq!(gaussian_mutation(&x, 0.0, &dom, &mut rng), x);
        let mut hit_max = false;
        for _ in 0..200 {
            let y = gaussian_mutation(&x, 10.0, &dom, &mut rng);
            assert!(dom.contains(&y));
            hit_max |= y[0] == 1.0;
        }
        assert!(hit_max);
    }

    #[test]
    fn mutation_spread() {
        // Sample sd of 1e5 normals: relative standard error ~ 1/sqrt(2(N-1)) = 0.22%,
        // so a 5% band is > 20 standard errors wide.
        let dom = RealDomain::new(-10.0, 10.0, 1).unwrap();
        let mut rng = rng_from_seed(6);
        let n = 100_000;
        let samples: Vec<f64> =
            (0..n).map(|_| gaussian_mutation(&[0.5], 0.01, &dom, &mut rng)[0] - 0.5).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var.sqrt() - 0.01).abs() < 0.05 * 0.01, "{}", var.sqrt());
    }

    #[test]
    fn domains() {
        assert!(RealDomain::new(1.0, 1.0, 5).is_err());
        assert!(RealDomain::new(0.0, 1.0, 0).is_err());
        let dom = FunctionId::F1.default_domain(5).unwrap();
        assert_eq!((dom.min_x, dom.max_x, dom.n), (-10.0, 10.0, 5));
        let mut rng = rng_from_seed(7);
        for _ in 0..1000 {
            assert!(dom.contains(&random_individual(&dom, &mut rng)));
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!("f1".parse::<FunctionId>().unwrap(), FunctionId::F1);
        assert_eq!("f10".parse::<FunctionId>().unwrap(), FunctionId::F10);
        assert!("f11".parse::<FunctionId>().is_err());
        assert!("g1".parse::<FunctionId>().is_err());
        assert_eq!(FunctionId::F7.to_string(), "f7");
    }
}

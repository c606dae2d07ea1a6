//! Quadratic assignment: QAPLIB instances, the cost `C(π) = Σ a_ij b_π(i)π(j)`,
//! swap mutation and an assignment-preserving DPX.
//!
//! `perm[i] = j` means facility `j` is placed at location `i`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::interp::Problem;
use crate::problems::is_permutation;

#[derive(Clone, Debug, PartialEq)]
pub struct QapInstance {
    pub name: String,
    n: usize,
    /// Location distances, row-major.
    a: Vec<f64>,
    /// Facility flows, row-major.
    b: Vec<f64>,
}

impl QapInstance {
    pub fn new(name: impl Into<String>, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("QAP size must be at least 1"));
        }
        if a.len() != n * n || b.len() != n * n {
            return Err(Error::config(format!(
                "QAP matrices must be {n}x{n} (got {} and {} entries)",
                a.len(),
                b.len()
            )));
        }
        Ok(QapInstance { name: name.into(), n, a, b })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn flow(&self, i: usize, j: usize) -> f64 {
        self.b[i * self.n + j]
    }

    pub fn cost(&self, perm: &[usize]) -> Result<f64> {
        if perm.len() != self.n || !is_permutation(perm) {
            return Err(Error::InvalidIndividual(format!(
                "not an assignment of {} facilities",
                self.n
            )));
        }
        Ok(self.cost_unchecked(perm))
    }

    fn cost_unchecked(&self, perm: &[usize]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for (i, &pi) in perm.iter().enumerate() {
            let row_a = &self.a[i * n..(i + 1) * n];
            let row_b = &self.b[pi * n..(pi + 1) * n];
            for (&aij, &pj) in row_a.iter().zip(perm) {
                total += aij * row_b[pj];
            }
        }
        total
    }
}

/// Whitespace-separated `n`, then `n²` entries of A, then `n²` entries of B.
pub fn parse_qaplib(name: &str, text: &str) -> Result<QapInstance> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let (line, first) = tokens.next().ok_or_else(|| Error::parse(1, "empty QAPLIB document"))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::parse(line, format!("expected the instance size, got `{first}`")))?;
    if n == 0 {
        return Err(Error::parse(line, "instance size must be positive"));
    }
    let values = tokens
        .map(|(line, t)| {
            t.parse::<f64>()
                .map_err(|_| Error::parse(line, format!("expected a number, got `{t}`")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let expected = 2 * n * n;
    if values.len() != expected {
        let last = text.lines().count().max(1);
        return Err(Error::parse(
            last,
            format!(
                "expected {} tokens (1 + 2*{n}^2), found {}",
                expected + 1,
                values.len() + 1
            ),
        ));
    }
    let b = values[n * n..].to_vec();
    let mut a = values;
    a.truncate(n * n);
    QapInstance::new(name, n, a, b)
}

pub fn swap_mutation<R: Rng + ?Sized>(perm: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let n = perm.len();
    if n < 2 {
        return Err(Error::config(format!("swap mutation needs at least 2 facilities, got {n}")));
    }
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let mut out = perm.to_vec();
    out.swap(i, j);
    Ok(out)
}

/// Keeps the locations where both parents agree and places the remaining
/// facilities on the remaining locations in uniformly random order.
pub fn qap_dpx_crossover<R: Rng + ?Sized>(p1: &[usize], p2: &[usize], rng: &mut R) -> Vec<usize> {
    let n = p1.len();
    let mut placed = vec![false; n];
    let mut child = vec![usize::MAX; n];
    for i in 0..n {
        if p1[i] == p2[i] {
            child[i] = p1[i];
            placed[p1[i]] = true;
        }
    }
    let mut free: Vec<usize> = (0..n).filter(|&f| !placed[f]).collect();
    free.shuffle(rng);
    let mut free = free.into_iter();
    for slot in child.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("one free facility per open location");
    }
    child
}

pub fn random_assignment<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

#[derive(Clone, Debug)]
pub struct QapProblem {
    pub instance: QapInstance,
}

impl QapProblem {
    pub fn new(instance: QapInstance) -> Result<Self> {
        if instance.len() < 2 {
            return Err(Error::config("QAP runs need at least 2 facilities for swap mutation"));
        }
        Ok(QapProblem { instance })
    }
}

impl Problem for QapProblem {
    type Individual = Vec<usize>;

    fn random_individual<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        random_assignment(self.instance.len(), rng)
    }

    fn evaluate(&self, perm: &Vec<usize>) -> f64 {
        self.instance.cost_unchecked(perm)
    }

    fn crossover<R: Rng + ?Sized>(&self, a: &Vec<usize>, b: &Vec<usize>, rng: &mut R) -> Vec<usize> {
        qap_dpx_crossover(a, b, rng)
    }

    fn mutate<R: Rng + ?Sized>(&self, p: &Vec<usize>, rng: &mut R) -> Vec<usize> {
        swap_mutation(p, rng).expect("instance has at least 2 facilities")
    }
}

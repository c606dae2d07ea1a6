//! Symmetric TSP: TSPLIB coordinate instances, integer TSPLIB distances,
//! nearest-neighbour construction, DPX recombination and 2-exchange mutation.
//!
//! A tour is a permutation of `0..n` stored as `Vec<usize>`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::interp::Problem;
use crate::problems::is_permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeWeightType {
    Euc2d,
    Att,
}

impl fmt::Display for EdgeWeightType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeWeightType::Euc2d => "EUC_2D",
            EdgeWeightType::Att => "ATT",
        })
    }
}

impl EdgeWeightType {
    fn distance(self, a: (f64, f64), b: (f64, f64)) -> i64 {
        let dx = a.0 - b.0;
        let dy = a.1 - b.1;
        match self {
            EdgeWeightType::Euc2d => ((dx * dx + dy * dy).sqrt() + 0.5) as i64,
            EdgeWeightType::Att => {
                let r = ((dx * dx + dy * dy) / 10.0).sqrt();
                let t = (r + 0.5) as i64;
                if (t as f64) < r {
                    t + 1
                } else {
                    t
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TspInstance {
    name: String,
    coords: Vec<(f64, f64)>,
    kind: EdgeWeightType,
    dist: Vec<i64>,
}

impl TspInstance {
    pub fn new(name: impl Into<String>, coords: Vec<(f64, f64)>, kind: EdgeWeightType) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::config(format!("a TSP instance needs at least 3 cities, got {n}")));
        }
        let mut dist = vec![0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = kind.distance(coords[i], coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(TspInstance { name: name.into(), coords, kind, dist })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn edge_weight_type(&self) -> EdgeWeightType {
        self.kind
    }

    #[inline]
    pub(crate) fn d(&self, i: usize, j: usize) -> i64 {
        self.dist[i * self.coords.len() + j]
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<i64> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::InvalidInput(format!("city index out of range 0..{n}: ({i}, {j})")));
        }
        Ok(self.d(i, j))
    }

    pub fn tour_length(&self, tour: &[usize]) -> Result<i64> {
        if tour.len() != self.len() || !is_permutation(tour) {
            return Err(Error::InvalidIndividual(format!(
                "not a tour over {} cities",
                self.len()
            )));
        }
        Ok(self.length_unchecked(tour))
    }

    fn length_unchecked(&self, tour: &[usize]) -> i64 {
        let n = tour.len();
        (0..n).map(|i| self.d(tour[i], tour[(i + 1) % n])).sum()
    }
}

enum Section {
    Header,
    Coords,
    Skip,
}

/// Parses the TSPLIB subset with `NODE_COORD_SECTION` and `EUC_2D`/`ATT`
/// weights. Unknown header keywords are ignored.
pub fn parse_tsplib(text: &str) -> Result<TspInstance> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut kind: Option<EdgeWeightType> = None;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut coord_line = 0;
    let mut section = Section::Header;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        last_line = no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if let Section::Coords | Section::Skip = section {
            let starts_numeric = line.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+');
            if starts_numeric {
                if let Section::Coords = section {
                    let parts: Vec<&str> = line.split_whitespace().collect();
                    let parsed = match parts.as_slice() {
                        [idx, x, y] => idx
                            .parse::<usize>()
                            .ok()
                            .zip(x.parse::<f64>().ok())
                            .zip(y.parse::<f64>().ok())
                            .map(|((i, x), y)| (i, x, y)),
                        _ => None,
                    };
                    let (idx, x, y) = parsed.ok_or_else(|| {
                        Error::parse(no, format!("NODE_COORD_SECTION: expected `index x y`, got `{line}`"))
                    })?;
                    if idx == 0 || idx > coords.len() {
                        return Err(Error::parse(
                            no,
                            format!("NODE_COORD_SECTION: node {idx} outside 1..={}", coords.len()),
                        ));
                    }
                    if coords[idx - 1].replace((x, y)).is_some() {
                        return Err(Error::parse(no, format!("NODE_COORD_SECTION: node {idx} given twice")));
                    }
                }
                continue;
            }
            section = Section::Header;
        }

        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, ""),
            },
        };
        match key {
            "NAME" => name = value.to_string(),
            "TYPE" => {
                if value != "TSP" {
                    return Err(Error::parse(no, format!("TYPE: unsupported problem type `{value}`")));
                }
            }
            "DIMENSION" => {
                let n = value
                    .parse::<usize>()
                    .map_err(|_| Error::parse(no, format!("DIMENSION: expected an integer, got `{value}`")))?;
                dimension = Some(n);
            }
            "EDGE_WEIGHT_TYPE" => {
                kind = Some(match value {
                    "EUC_2D" => EdgeWeightType::Euc2d,
                    "ATT" => EdgeWeightType::Att,
                    other => {
                        return Err(Error::parse(
                            no,
                            format!("EDGE_WEIGHT_TYPE: unsupported type `{other}` (expected EUC_2D or ATT)"),
                        ))
                    }
                });
            }
            "NODE_COORD_SECTION" => {
                let n = dimension
                    .ok_or_else(|| Error::parse(no, "NODE_COORD_SECTION before DIMENSION"))?;
                coords = vec![None; n];
                coord_line = no;
                section = Section::Coords;
            }
            k if k.ends_with("_SECTION") => section = Section::Skip,
            _ => {}
        }
    }

    let n = dimension.ok_or_else(|| Error::parse(last_line.max(1), "missing DIMENSION"))?;
    let kind = kind.ok_or_else(|| Error::parse(last_line.max(1), "missing EDGE_WEIGHT_TYPE"))?;
    if coord_line == 0 {
        return Err(Error::parse(last_line.max(1), "missing NODE_COORD_SECTION"));
    }
    let missing = coords.iter().filter(|c| c.is_none()).count();
    if missing > 0 {
        return Err(Error::parse(
            coord_line,
            format!("NODE_COORD_SECTION: {missing} of {n} DIMENSION nodes have no coordinates"),
        ));
    }
    TspInstance::new(name, coords.into_iter().flatten().collect(), kind)
}

/// Greedy tour from `start`, always moving to the nearest unvisited city
/// (lowest index on ties).
pub fn nearest_neighbor_tour(inst: &TspInstance, start: usize) -> Result<Vec<usize>> {
    let n = inst.len();
    if start >= n {
        return Err(Error::InvalidInput(format!("start city {start} outside 0..{n}")));
    }
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    tour.push(cur);
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut best = i64::MAX;
        for (c, &seen) in visited.iter().enumerate() {
            if !seen && inst.d(cur, c) < best {
                best = inst.d(cur, c);
                next = c;
            }
        }
        visited[next] = true;
        tour.push(next);
        cur = next;
    }
    Ok(tour)
}

/// `adj[c] = [predecessor, successor]` of city `c` in `tour`.
fn neighbours(tour: &[usize]) -> Vec<[usize; 2]> {
    let n = tour.len();
    let mut adj = vec![[0; 2]; n];
    for i in 0..n {
        adj[tour[i]] = [tour[(i + n - 1) % n], tour[(i + 1) % n]];
    }
    adj
}

fn adjacent(adj: &[[usize; 2]], a: usize, b: usize) -> bool {
    adj[a][0] == b || adj[a][1] == b
}

/// Distance-preserving crossover. Edges shared by both parents are kept as
/// fragments; fragments are then chained greedily from a random start,
/// always moving to the nearest free fragment endpoint, preferring
/// connections that appear in neither parent.
pub fn dpx_crossover<R: Rng + ?Sized>(
    inst: &TspInstance,
    p1: &[usize],
    p2: &[usize],
    rng: &mut R,
) -> Vec<usize> {
    let n = p1.len();
    let adj1 = neighbours(p1);
    let adj2 = neighbours(p2);
    let common = |pos: usize| adjacent(&adj2, p1[pos], p1[(pos + 1) % n]);

    let Some(first_cut) = (0..n).find(|&pos| !common(pos)) else {
        return p1.to_vec();
    };

    let mut fragments: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for k in 0..n {
        let pos = (first_cut + 1 + k) % n;
        current.push(p1[pos]);
        if !common(pos) {
            fragments.push(std::mem::take(&mut current));
        }
    }

    let m = fragments.len();
    let mut used = vec![false; m];
    let first = rng.random_range(0..m);
    used[first] = true;
    let mut child = Vec::with_capacity(n);
    child.extend_from_slice(&fragments[first]);

    for _ in 1..m {
        let tail = *child.last().expect("child is non-empty");
        // (distance, fragment, reversed) for the best fresh and best overall link.
        let mut fresh: Option<(i64, usize, bool)> = None;
        let mut any: Option<(i64, usize, bool)> = None;
        for (f, frag) in fragments.iter().enumerate() {
            if used[f] {
                continue;
            }
            let ends = [(frag[0], false), (*frag.last().unwrap(), true)];
            for (end, reversed) in ends {
                let d = inst.d(tail, end);
                let cand = (d, f, reversed);
                if any.is_none_or(|b| d < b.0) {
                    any = Some(cand);
                }
                let in_parent = adjacent(&adj1, tail, end) || adjacent(&adj2, tail, end);
                if !in_parent && fresh.is_none_or(|b| d < b.0) {
                    fresh = Some(cand);
                }
            }
        }
        let (_, f, reversed) = fresh.or(any).expect("an unused fragment remains");
        used[f] = true;
        if reversed {
            child.extend(fragments[f].iter().rev());
        } else {
            child.extend_from_slice(&fragments[f]);
        }
    }
    child
}

/// Removes the edges leaving positions `i` and `j` (`i < j`, non-adjacent)
/// and reconnects by reversing `tour[i+1..=j]`.
pub fn two_exchange_at(tour: &[usize], i: usize, j: usize) -> Result<Vec<usize>> {
    let n = tour.len();
    if n < 4 {
        return Err(Error::config(format!("2-exchange needs at least 4 cities, got {n}")));
    }
    if !(i < j && j < n) || j == i + 1 || (i == 0 && j == n - 1) {
        return Err(Error::InvalidInput(format!("edges {i} and {j} are not a valid non-adjacent pair")));
    }
    let mut out = tour.to_vec();
    out[i + 1..=j].reverse();
    Ok(out)
}

/// 2-exchange on a uniformly chosen pair of non-adjacent edges.
pub fn two_exchange<R: Rng + ?Sized>(tour: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let n = tour.len();
    if n < 4 {
        return Err(Error::config(format!("2-exchange needs at least 4 cities, got {n}")));
    }
    loop {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        let (i, j) = (a.min(b), a.max(b));
        if i != j && j != i + 1 && !(i == 0 && j == n - 1) {
            return two_exchange_at(tour, i, j);
        }
    }
}

#[derive(Clone, Debug)]
pub struct TspProblem {
    pub instance: TspInstance,
}

impl TspProblem {
    pub fn new(instance: TspInstance) -> Result<Self> {
        if instance.len() < 4 {
            return Err(Error::config("TSP runs need at least 4 cities for 2-exchange"));
        }
        Ok(TspProblem { instance })
    }
}

impl Problem for TspProblem {
    type Individual = Vec<usize>;

    /// Nearest-neighbour tour from a uniformly random start city.
    fn random_individual<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let start = rng.random_range(0..self.instance.len());
        nearest_neighbor_tour(&self.instance, start).expect("start is in range")
    }

    fn evaluate(&self, tour: &Vec<usize>) -> f64 {
        self.instance.length_unchecked(tour) as f64
    }

    fn crossover<R: Rng + ?Sized>(&self, a: &Vec<usize>, b: &Vec<usize>, rng: &mut R) -> Vec<usize> {
        dpx_crossover(&self.instance, a, b, rng)
    }

    fn mutate<R: Rng + ?Sized>(&self, p: &Vec<usize>, rng: &mut R) -> Vec<usize> {
        two_exchange(p, rng).expect("instance has at least 4 cities")
    }
}

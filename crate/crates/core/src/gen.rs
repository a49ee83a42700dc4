use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::Graph;

/// Graph families the generator knows how to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Uniform random spanning tree plus uniformly random extra pairs
    /// (parallel edges allowed). Always connected.
    RandomConnected,
    /// Path 0-1-...-(n-1) plus random chords. The worst case for cycle
    /// walking: fundamental cycles are long.
    PathChords,
    /// r x c grid with unit-spaced rows and columns, r*c == n.
    Grid,
    /// Uniform random spanning tree, nothing else.
    Tree,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::RandomConnected => "random-connected",
            Family::PathChords => "path-chords",
            Family::Grid => "grid",
            Family::Tree => "tree",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-connected" => Ok(Family::RandomConnected),
            "path-chords" => Ok(Family::PathChords),
            "grid" => Ok(Family::Grid),
            "tree" => Ok(Family::Tree),
            other => Err(format!(
                "unknown family `{other}` (expected random-connected, path-chords, grid, or tree)"
            )),
        }
    }
}

/// What to generate. `m` is the total edge count where the family allows
/// a choice; leave it None for the family default.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub m: Option<usize>,
    /// Weights are drawn uniformly from [-wmax, +wmax].
    pub wmax: i64,
    pub seed: u64,
}

/// A generated edge list. Kept as raw tuples so it can be written out or
/// turned into a Graph without committing to either.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

impl Generated {
    pub fn to_graph(&self) -> Graph<i64> {
        Graph::new(self.n, self.edges.iter().copied())
    }

    /// Writes the `n m` header followed by one `u v w` line per edge.
    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{} {}", self.n, self.edges.len())?;
        for &(u, v, w) in &self.edges {
            writeln!(out, "{u} {v} {w}")?;
        }
        Ok(())
    }
}

/// Decodes a uniformly random Pruefer sequence into its tree, so every
/// labelled tree on n vertices is equally likely. O(n).
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1u32; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &s in &seq {
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 && s < ptr {
            leaf = s;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

fn random_pair(n: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let u = rng.gen_range(0..n);
    loop {
        let v = rng.gen_range(0..n);
        if v != u {
            return (u, v);
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Generated, Error> {
    if spec.n == 0 {
        return Err(Error::Infeasible("n must be at least 1".into()));
    }
    if spec.wmax < 0 {
        return Err(Error::Infeasible("wmax must be non-negative".into()));
    }
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let skeleton: Vec<(usize, usize)> = match spec.family {
        Family::RandomConnected | Family::Tree => random_tree(n, &mut rng),
        Family::PathChords => (1..n).map(|v| (v - 1, v)).collect(),
        Family::Grid => {
            let mut r = (n as f64).sqrt().floor() as usize;
            r = r.max(1);
            while !n.is_multiple_of(r) {
                r -= 1;
            }
            let c = n / r;
            let mut edges = Vec::with_capacity(2 * n);
            for i in 0..r {
                for j in 0..c {
                    let v = i * c + j;
                    if j + 1 < c {
                        edges.push((v, v + 1));
                    }
                    if i + 1 < r {
                        edges.push((v, v + c));
                    }
                }
            }
            edges
        }
    };

    let m = match spec.family {
        Family::Tree => {
            if let Some(m) = spec.m {
                if m != n - 1 {
                    return Err(Error::Infeasible(format!(
                        "family tree has exactly n-1 = {} edges, not {m}",
                        n - 1
                    )));
                }
            }
            skeleton.len()
        }
        Family::Grid => {
            if let Some(m) = spec.m {
                if m != skeleton.len() {
                    return Err(Error::Infeasible(format!(
                        "this grid has exactly {} edges, not {m}",
                        skeleton.len()
                    )));
                }
            }
            skeleton.len()
        }
        Family::RandomConnected | Family::PathChords => {
            let m = spec.m.unwrap_or(n.saturating_sub(1));
            if m < n - 1 {
                return Err(Error::Infeasible(format!(
                    "m = {m} is below the n-1 = {} edges needed for connectivity",
                    n - 1
                )));
            }
            if n == 1 && m > 0 {
                return Err(Error::Infeasible(
                    "a single vertex admits no edges (self-loops are not generated)".into(),
                ));
            }
            m
        }
    };

    let mut edges = Vec::with_capacity(m);
    let weight = |rng: &mut ChaCha8Rng| -> i64 {
        if spec.wmax == 0 {
            0
        } else {
            rng.gen_range(-spec.wmax..=spec.wmax)
        }
    };
    for &(u, v) in &skeleton {
        let w = weight(&mut rng);
        edges.push((u, v, w));
    }
    for _ in skeleton.len()..m {
        let (u, v) = random_pair(n, &mut rng);
        let w = weight(&mut rng);
        edges.push((u, v, w));
    }

    Ok(Generated { n, edges })
}

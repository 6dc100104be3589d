//! Eigenvector centrality of a team's pass graph within one slice.
//!
//! Centrality flows from passer to receiver: the score vector is the Perron
//! eigenvector of `(A + ε·J)ᵀ`, where `A[i][j]` counts completed passes
//! `i → j` and the uniform teleport `ε` makes the matrix strictly positive
//! (hence irreducible and primitive). Scores are scaled so the top player
//! gets 1.
//!
//! Power iteration runs on successive squares of the iteration matrix, so
//! step `k` applies `2^k - 1` products in total. Near-periodic pass patterns
//! (two players feeding each other) have a second eigenvalue of modulus close
//! to the first and would otherwise need thousands of plain steps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::config::CentralityConfig;
use crate::error::{Error, Result};
use crate::events::PlayerId;

/// Directed completed-pass counts between players of one team in one slice.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PassGraph {
    nodes: BTreeSet<PlayerId>,
    edges: BTreeMap<(PlayerId, PlayerId), u32>,
}

impl PassGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a player who took part in the slice, with or without passes.
    pub fn add_node(&mut self, p: PlayerId) {
        self.nodes.insert(p);
    }

    /// Adds one completed pass. Self-passes are ignored.
    pub fn add_pass(&mut self, from: PlayerId, to: PlayerId) {
        if from == to {
            return;
        }
        self.nodes.insert(from);
        self.nodes.insert(to);
        *self.edges.entry((from, to)).or_insert(0) += 1;
    }

    pub fn nodes(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, from: PlayerId, to: PlayerId) -> u32 {
        self.edges.get(&(from, to)).copied().unwrap_or(0)
    }

    /// Dense adjacency in node order.
    pub fn adjacency(&self) -> (Vec<PlayerId>, Vec<Vec<f64>>) {
        let ids: Vec<PlayerId> = self.nodes.iter().copied().collect();
        let index: BTreeMap<PlayerId, usize> = ids.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut a = alloc::vec![alloc::vec![0.0; ids.len()]; ids.len()];
        for (&(f, t), &w) in &self.edges {
            a[index[&f]][index[&t]] = f64::from(w);
        }
        (ids, a)
    }
}

/// Max-normalised eigenvector centrality per node; all zeros without edges.
pub fn network_score(graph: &PassGraph, cfg: &CentralityConfig) -> Result<BTreeMap<PlayerId, f64>> {
    let (ids, a) = graph.adjacency();
    if graph.edge_count() == 0 {
        return Ok(ids.into_iter().map(|p| (p, 0.0)).collect());
    }
    let n = ids.len();
    // p = (A + εJ)ᵀ
    let mut p = alloc::vec![alloc::vec![0.0; n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[j][i] + cfg.teleport;
        }
    }
    let mut x = alloc::vec![1.0 / n as f64; n];
    for _ in 0..cfg.max_iterations {
        let mut y = mat_vec(&p, &x);
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
        let delta = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        if delta < cfg.tolerance {
            let top = x.iter().copied().fold(0.0, f64::max);
            return Ok(ids.into_iter().zip(x).map(|(id, v)| (id, v / top)).collect());
        }
        p = mat_square(&p);
        let m = p.iter().flatten().copied().fold(0.0, f64::max);
        p.iter_mut().flatten().for_each(|v| *v /= m);
    }
    Err(Error::NoConvergence { iterations: cfg.max_iterations })
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

#[allow(clippy::needless_range_loop)]
fn mat_square(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut out = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let a = m[i][k];
            for j in 0..n {
                out[i][j] += a * m[k][j];
            }
        }
    }
    out
}

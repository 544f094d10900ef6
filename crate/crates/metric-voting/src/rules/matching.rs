//! Matching-based candidate quality tests: the matching uncovered set and
//! the domination graph, both decided by perfect-matching checks over
//! voter-to-voter bipartite graphs on the unit expansion.

use std::collections::VecDeque;

use crate::election::ElectionInstance;

use super::{unit_expansion, RuleError};

/// Maximum bipartite matching size (Hopcroft–Karp).
pub fn hopcroft_karp(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> usize {
    assert_eq!(adj.len(), n_left);
    const FREE: usize = usize::MAX;
    let mut match_left = vec![FREE; n_left];
    let mut match_right = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        // BFS layers from unmatched left vertices
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if match_left[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = FREE;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match match_right[r] {
                    FREE => found = true,
                    l2 => {
                        if dist[l2] == FREE {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !found {
            return size;
        }
        fn dfs(
            l: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            match_left: &mut [usize],
            match_right: &mut [usize],
        ) -> bool {
            const FREE: usize = usize::MAX;
            for i in 0..adj[l].len() {
                let r = adj[l][i];
                let next = match_right[r];
                if next == FREE
                    || (dist[next] == dist[l] + 1
                        && dfs(next, adj, dist, match_left, match_right))
                {
                    match_left[l] = r;
                    match_right[r] = l;
                    return true;
                }
            }
            dist[l] = FREE;
            false
        }
        for l in 0..n_left {
            if match_left[l] == FREE
                && dist[l] == 0
                && dfs(l, adj, &mut dist, &mut match_left, &mut match_right)
            {
                size += 1;
            }
        }
    }
}

/// True iff for every rival `b != a` the graph with an edge `(v, v')`
/// whenever some candidate `c` satisfies `a ⪰_v c` and `c ⪰_{v'} b` has a
/// perfect matching.
pub fn matching_uncovered_member(instance: &ElectionInstance, a: usize) -> Result<bool, RuleError> {
    let units = unit_expansion(instance)?;
    let n = units.len();
    let blocks = instance.block_count();
    let m = instance.candidate_count();
    for b in 0..m {
        if b == a {
            continue;
        }
        // block-level adjacency: suffix of `a` in v meets prefix of `b` in v'
        let mut block_edge = vec![vec![false; blocks]; blocks];
        for v in 0..blocks {
            // least position (in v') over candidates ranked at-or-below a by v
            let suffix: Vec<usize> = {
                let pos_a = instance.position(v, a);
                instance.voters()[v].ranking[pos_a..].to_vec()
            };
            for v2 in 0..blocks {
                let pos_b = instance.position(v2, b);
                block_edge[v][v2] = suffix.iter().any(|&c| instance.position(v2, c) <= pos_b);
            }
        }
        if !has_perfect_matching_on_units(&units, &block_edge, n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the graph with an edge `(v, v')` whenever `a ⪰_v top(v')` has
/// a perfect matching.
pub fn domination_graph_member(instance: &ElectionInstance, a: usize) -> Result<bool, RuleError> {
    let units = unit_expansion(instance)?;
    let n = units.len();
    let blocks = instance.block_count();
    let mut block_edge = vec![vec![false; blocks]; blocks];
    for v in 0..blocks {
        let pos_a = instance.position(v, a);
        for v2 in 0..blocks {
            let top = instance.voters()[v2].ranking[0];
            block_edge[v][v2] = pos_a <= instance.position(v, top);
        }
    }
    Ok(has_perfect_matching_on_units(&units, &block_edge, n))
}

/// All members of the matching uncovered set.
pub fn matching_uncovered_set(instance: &ElectionInstance) -> Result<Vec<usize>, RuleError> {
    (0..instance.candidate_count())
        .filter_map(|a| match matching_uncovered_member(instance, a) {
            Ok(true) => Some(Ok(a)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

fn has_perfect_matching_on_units(units: &[usize], block_edge: &[Vec<bool>], n: usize) -> bool {
    let adj: Vec<Vec<usize>> = units
        .iter()
        .map(|&bv| {
            (0..n)
                .filter(|&u2| block_edge[bv][units[u2]])
                .collect()
        })
        .collect();
    hopcroft_karp(n, n, &adj) == n
}

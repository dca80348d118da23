//! Integer-side search: generalized Diophantine tuples with property D_k(n)
//! and SD_k(n) at desk scale, plus the even-k divisor-pair bound.

use crate::clique::UGraph;
use crate::error::{DtError, Result};
use serde::Serialize;

pub const N_CAP: u64 = 10_000_000;
pub const K_CAP: u32 = 64;
pub const ACTIVE_VERTEX_CAP: usize = 20_000;

/// Floor of the integer k-th root, by bisection only.
pub fn integer_kth_root(m: u64, k: u32) -> u64 {
    if m == 0 || k == 1 {
        return m;
    }
    let mut lo = 0u64;
    let mut hi = 1u64 << (64 / k + 1).min(63);
    while hi.checked_pow(k).map_or(false, |v| v <= m) {
        hi <<= 1;
    }
    // invariant: lo^k <= m < hi^k
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(k) {
            Some(v) if v <= m => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

pub fn is_kth_power(m: u64, k: u32) -> bool {
    let r = integer_kth_root(m, k);
    r.checked_pow(k) == Some(m)
}

/// Sorted table of k-th powers up to a limit; membership by binary search.
pub struct PowerTable {
    pub k: u32,
    powers: Vec<u64>,
}

impl PowerTable {
    pub fn new(k: u32, limit: u64) -> PowerTable {
        let mut powers = Vec::new();
        let mut y = 0u64;
        loop {
            match y.checked_pow(k) {
                Some(v) if v <= limit => powers.push(v),
                _ => break,
            }
            y += 1;
        }
        PowerTable { k, powers }
    }

    pub fn contains(&self, m: u64) -> bool {
        self.powers.binary_search(&m).is_ok()
    }

    pub fn roots(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.powers
            .iter()
            .enumerate()
            .map(|(y, &v)| (y as u64, v))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    pub violating_pair: Option<(u64, u64)>,
}

/// a_i·a_j + n must be a perfect k-th power for all i < j (strong: i ≤ j).
pub fn check_property(set: &[u64], k: u32, n: u64, strong: bool) -> Result<PropertyCheck> {
    if set.iter().any(|&x| x == 0) {
        return Err(DtError::BadSet("positive integers only".into()));
    }
    for (i, x) in set.iter().enumerate() {
        if set[i + 1..].contains(x) {
            return Err(DtError::BadSet(format!("repeated element {x}")));
        }
    }
    for (i, &a) in set.iter().enumerate() {
        let from = if strong { i } else { i + 1 };
        for &b in &set[from..] {
            let prod = a
                .checked_mul(b)
                .and_then(|v| v.checked_add(n))
                .ok_or_else(|| DtError::CapExceeded("product overflow".into()))?;
            if !is_kth_power(prod, k) {
                return Ok(PropertyCheck {
                    holds: false,
                    violating_pair: Some((a, b)),
                });
            }
        }
    }
    Ok(PropertyCheck {
        holds: true,
        violating_pair: None,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntegerTupleQuery {
    pub k: u32,
    pub n: u64,
    pub n_max: u64,
    pub strong: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegerCliqueResult {
    pub size: usize,
    pub witness: Vec<u64>,
    pub active_vertices: usize,
    pub node_count: u64,
}

/// Edges (a, b), a < b ≤ N, with ab + n a k-th power, enumerated from the
/// power table through divisor pairs of y^k − n.
fn edges(query: &IntegerTupleQuery) -> Result<Vec<(u64, u64)>> {
    let IntegerTupleQuery { k, n, n_max, .. } = *query;
    let limit = n_max
        .checked_mul(n_max)
        .and_then(|v| v.checked_add(n))
        .ok_or_else(|| DtError::CapExceeded("N^2 + n overflows".into()))?;
    let table = PowerTable::new(k, limit);
    let mut out = Vec::new();
    for (_, v) in table.roots() {
        let Some(m) = v.checked_sub(n) else { continue };
        if m < 2 {
            continue;
        }
        let mut a = 1u64;
        while a * a < m {
            if m % a == 0 {
                let b = m / a;
                if b <= n_max {
                    out.push((a, b));
                }
            }
            a += 1;
        }
    }
    Ok(out)
}

/// For strong queries, x must solve x² + n = y^k. Even k factors every
/// solution through divisor pairs of n; odd k falls back to a bounded scan.
fn strong_vertices(query: &IntegerTupleQuery) -> Result<Vec<u64>> {
    let diag_ok = |x: u64| -> bool {
        x.checked_mul(x)
            .and_then(|v| v.checked_add(query.n))
            .map_or(false, |v| is_kth_power(v, query.k))
    };
    let mut out = Vec::new();
    if query.k % 2 == 0 {
        for d1 in crate::sieve::divisors(query.n) {
            let d2 = query.n / d1;
            if d1 < d2 && (d2 - d1) % 2 == 0 {
                let x = (d2 - d1) / 2;
                if x >= 1 && x <= query.n_max && diag_ok(x) {
                    out.push(x);
                }
            }
        }
    } else {
        if query.n_max > 200_000 {
            return Err(DtError::CapExceeded(
                "strong search with odd k scans vertices; N <= 200000".into(),
            ));
        }
        out.extend((1..=query.n_max).filter(|&x| diag_ok(x)));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exact maximum tuple size by clique search on the non-isolated subgraph
/// (strong graphs keep their isolated diagonal solutions as 1-cliques).
pub fn search_max_tuple(query: &IntegerTupleQuery) -> Result<IntegerCliqueResult> {
    if query.n == 0 {
        return Err(DtError::Domain("n >= 1 by definition".into()));
    }
    if query.n_max > N_CAP || query.k < 2 || query.k > K_CAP {
        return Err(DtError::CapExceeded(format!(
            "query caps: N <= {N_CAP}, 2 <= k <= {K_CAP}"
        )));
    }

    let (vertex_ids, edge_list) = if query.strong {
        // the vertex set is tiny, so pairs are tested directly
        let verts = strong_vertices(query)?;
        let mut edges = Vec::new();
        for (i, &a) in verts.iter().enumerate() {
            for &b in &verts[i + 1..] {
                let ok = a
                    .checked_mul(b)
                    .and_then(|v| v.checked_add(query.n))
                    .map_or(false, |v| is_kth_power(v, query.k));
                if ok {
                    edges.push((a, b));
                }
            }
        }
        (verts, edges)
    } else {
        let edge_list = edges(query)?;
        let mut verts: Vec<u64> = edge_list.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.sort_unstable();
        verts.dedup();
        (verts, edge_list)
    };
    if vertex_ids.len() > ACTIVE_VERTEX_CAP {
        return Err(DtError::GraphTooLarge(vertex_ids.len(), ACTIVE_VERTEX_CAP));
    }

    let mut graph = UGraph::new(vertex_ids.len());
    for &(a, b) in &edge_list {
        let (Ok(i), Ok(j)) = (vertex_ids.binary_search(&a), vertex_ids.binary_search(&b))
        else {
            continue;
        };
        graph.add_edge(i, j);
    }
    let (w, stats) = graph.max_clique_lex_min();
    let mut witness: Vec<u64> = w.iter().map(|&i| vertex_ids[i]).collect();
    witness.sort_unstable();
    let size = witness.len();

    // re-validate against the defining property
    if !witness.is_empty() {
        let check = check_property(&witness, query.k, query.n, query.strong)?;
        if !check.holds {
            return Err(DtError::Domain(format!(
                "witness validation failed: {:?}",
                check.violating_pair
            )));
        }
    }
    Ok(IntegerCliqueResult {
        size,
        witness,
        active_vertices: vertex_ids.len(),
        node_count: stats.nodes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorBoundCheck {
    pub tau: usize,
    pub diagonal_solutions: usize,
    pub search_max: usize,
    pub holds: bool,
}

/// Even k: every strong-tuple element solves x² + n = y², so the maximum is
/// bounded by the divisor pairs of n, hence by τ(n).
pub fn strong_divisor_bound_check(k: u32, n: u64, n_max: u64) -> Result<DivisorBoundCheck> {
    if k % 2 != 0 {
        return Err(DtError::Domain("divisor bound needs even k".into()));
    }
    let divisors = crate::sieve::divisors(n);
    let tau = divisors.len();
    let mut diagonal_solutions = 0usize;
    for &d1 in &divisors {
        let d2 = n / d1;
        if d1 < d2 && (d2 - d1) % 2 == 0 {
            diagonal_solutions += 1; // x = (d2 - d1) / 2 >= 1
        }
    }
    let query = IntegerTupleQuery {
        k,
        n,
        n_max,
        strong: true,
    };
    let search_max = search_max_tuple(&query)?.size;
    Ok(DivisorBoundCheck {
        tau,
        diagonal_solutions,
        search_max,
        holds: search_max <= diagonal_solutions && search_max <= tau,
    })
}

//! Exact maximum clique by branch and bound with greedy-coloring upper
//! bounds over bitset adjacency rows, vertices pre-ordered by degeneracy.

use crate::bitset::BitSet;

pub struct UGraph {
    pub n: usize,
    pub adj: Vec<BitSet>,
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub nodes: u64,
}

impl UGraph {
    pub fn new(n: usize) -> UGraph {
        UGraph {
            n,
            adj: (0..n).map(|_| BitSet::new(n)).collect(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    /// Peel minimum-degree vertices; returns the removal order.
    fn degeneracy_order(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .unwrap();
            removed[v] = true;
            order.push(v);
            for u in self.adj[v].iter() {
                if !removed[u] {
                    deg[u] -= 1;
                }
            }
        }
        order
    }

    /// Exact maximum clique size with search statistics.
    pub fn max_clique_size(&self) -> (usize, SearchStats) {
        let mut stats = SearchStats::default();
        let size = self.max_clique_in(&BitSet::full(self.n), 0, &mut stats);
        (size, stats)
    }

    /// Exact maximum clique size within `sub`; stops early once `target`
    /// is reached (pass 0 for the true maximum).
    pub fn max_clique_in(&self, sub: &BitSet, target: usize, stats: &mut SearchStats) -> usize {
        // Internal order: degeneracy order of the whole graph, so the
        // branching explores dense cores first (search runs in reverse).
        let order = self.degeneracy_order();
        let mut pos = vec![0usize; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut cand: Vec<usize> = sub.iter().collect();
        cand.sort_by_key(|&v| pos[v]);
        let mut best = 0usize;
        self.expand(&cand, 0, &mut best, target, stats);
        best
    }

    fn expand(
        &self,
        cand: &[usize],
        size: usize,
        best: &mut usize,
        target: usize,
        stats: &mut SearchStats,
    ) {
        stats.nodes += 1;
        if size > *best {
            *best = size;
        }
        if cand.is_empty() || (target > 0 && *best >= target) {
            return;
        }
        // Greedy coloring in candidate order; color number bounds the clique
        // size attainable inside the candidate set.
        let m = cand.len();
        let mut color = vec![0usize; m];
        let mut color_members: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in cand.iter().enumerate() {
            let mut c = 0;
            'assign: loop {
                if c == color_members.len() {
                    color_members.push(vec![i]);
                    break;
                }
                if color_members[c].iter().all(|&j| !self.adj[v].contains(cand[j])) {
                    color_members[c].push(i);
                    break 'assign;
                }
                c += 1;
            }
            color[i] = c + 1;
        }
        // Branch from the highest color downwards.
        let mut idxs: Vec<usize> = (0..m).collect();
        idxs.sort_by_key(|&i| color[i]);
        let mut alive = vec![true; m];
        for &i in idxs.iter().rev() {
            if size + color[i] <= *best {
                return;
            }
            let v = cand[i];
            let next: Vec<usize> = cand
                .iter()
                .enumerate()
                .filter(|&(j, &u)| alive[j] && u != v && self.adj[v].contains(u))
                .map(|(_, &u)| u)
                .collect();
            self.expand(&next, size + 1, best, target, stats);
            if target > 0 && *best >= target {
                return;
            }
            alive[i] = false;
        }
    }

    /// Lexicographically smallest maximum clique under vertex order
    /// (deterministic witness). Runs a size query first, then rebuilds the
    /// witness greedily with feasibility queries.
    pub fn max_clique_lex_min(&self) -> (Vec<usize>, SearchStats) {
        let (size, mut stats) = self.max_clique_size();
        let mut witness = Vec::with_capacity(size);
        let mut cand = BitSet::full(self.n);
        let mut need = size;
        while need > 0 {
            for v in cand.clone().iter() {
                let sub = cand.intersection(&self.adj[v]);
                let inner = if need == 1 {
                    0
                } else {
                    self.max_clique_in(&sub, need - 1, &mut stats)
                };
                if inner >= need - 1 {
                    witness.push(v);
                    cand = sub;
                    need -= 1;
                    break;
                }
                cand.remove(v);
            }
        }
        debug_assert_eq!(witness.len(), size);
        (witness, stats)
    }
}

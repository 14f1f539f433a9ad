//! Exact independent-set routines on ≤ 128-vertex bitset graphs.

/// Maximum-weight independent set inside `cand` (weights ≥ 0).
/// Branch and bound over connected components, with simplicial-vertex
/// reductions and a weighted greedy clique-cover bound.
pub fn mwis(adj: &[u128], w: &[i128], cand: u128) -> (i128, u128) {
    // weight-0 vertices never help; drop them up front
    let cand = (0..adj.len()).filter(|&v| cand >> v & 1 == 1 && w[v] > 0).fold(0u128, |m, v| m | 1 << v);
    split(adj, w, cand)
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn component(adj: &[u128], cand: u128, v: usize) -> u128 {
    let mut comp = 1u128 << v;
    let mut frontier = comp;
    while frontier != 0 {
        let next = bits(frontier).fold(0, |m, u| m | adj[u]) & cand & !comp;
        comp |= next;
        frontier = next;
    }
    comp
}

fn split(adj: &[u128], w: &[i128], cand: u128) -> (i128, u128) {
    let mut total = (0, 0);
    let mut rest = cand;
    while rest != 0 {
        let comp = component(adj, rest, rest.trailing_zeros() as usize);
        rest &= !comp;
        let mut best = greedy(adj, w, comp);
        branch(adj, w, comp, 0, 0, &mut best);
        total.0 += best.0;
        total.1 |= best.1;
    }
    total
}

fn by_weight(w: &[i128], cand: u128) -> Vec<usize> {
    let mut vs: Vec<usize> = bits(cand).collect();
    vs.sort_by_key(|&v| (std::cmp::Reverse(w[v]), v));
    vs
}

fn greedy(adj: &[u128], w: &[i128], cand: u128) -> (i128, u128) {
    let mut set = 0u128;
    let mut val = 0;
    let mut free = cand;
    for v in by_weight(w, cand) {
        if free >> v & 1 == 1 {
            set |= 1 << v;
            val += w[v];
            free &= !(adj[v] | 1 << v);
        }
    }
    (val, set)
}

/// Heaviest-first clique partition; each clique contributes its top weight.
fn clique_bound(adj: &[u128], w: &[i128], cand: u128) -> i128 {
    let mut cliques: Vec<u128> = Vec::new();
    let mut bound = 0;
    for v in by_weight(w, cand) {
        match cliques.iter_mut().find(|c| **c & !adj[v] == 0) {
            Some(c) => *c |= 1 << v,
            None => {
                cliques.push(1 << v);
                bound += w[v];
            }
        }
    }
    bound
}

/// Takes every vertex whose remaining neighbourhood is a clique of no
/// heavier vertices; some optimum contains it.
fn reduce(adj: &[u128], w: &[i128], mut cand: u128) -> (u128, i128, u128) {
    let (mut set, mut gain) = (0u128, 0);
    loop {
        let mut changed = false;
        for v in bits(cand) {
            if cand >> v & 1 == 0 {
                continue;
            }
            let nb = adj[v] & cand;
            if bits(nb).all(|u| w[u] <= w[v] && nb & !adj[u] & !(1u128 << u) == 0) {
                set |= 1 << v;
                gain += w[v];
                cand &= !(nb | 1 << v);
                changed = true;
            }
        }
        if !changed {
            return (cand, gain, set);
        }
    }
}

fn branch(adj: &[u128], w: &[i128], cand: u128, val: i128, set: u128, best: &mut (i128, u128)) {
    let (cand, gain, taken) = reduce(adj, w, cand);
    let (val, set) = (val + gain, set | taken);
    if cand == 0 {
        if val > best.0 {
            *best = (val, set);
        }
        return;
    }
    if val + clique_bound(adj, w, cand) <= best.0 {
        return;
    }
    let comp = component(adj, cand, cand.trailing_zeros() as usize);
    if comp != cand {
        let (v, s) = split(adj, w, cand);
        if val + v > best.0 {
            *best = (val + v, set | s);
        }
        return;
    }
    // branch on a maximum-degree vertex
    let v = bits(cand).max_by_key(|&u| ((adj[u] & cand).count_ones(), std::cmp::Reverse(u))).unwrap();
    branch(adj, w, cand & !(adj[v] | 1 << v), val + w[v], set | 1 << v, best);
    branch(adj, w, cand & !(1u128 << v), val, set, best);
}

/// All maximal independent sets (Bron–Kerbosch on the complement, with
/// pivoting), within the vertex set `within`.
pub fn maximal_independent_sets(adj: &[u128], within: u128) -> Vec<u128> {
    let mut out = Vec::new();
    bk(adj, 0, within, 0, &mut out);
    out
}

fn bk(adj: &[u128], r: u128, p: u128, x: u128, out: &mut Vec<u128>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // pivot: vertex of P∪X with most non-neighbours in P
    let px = p | x;
    let mut pivot = px.trailing_zeros() as usize;
    let mut most = 0;
    let mut it = px;
    while it != 0 {
        let u = it.trailing_zeros() as usize;
        it &= it - 1;
        let c = (p & !adj[u] & !(1u128 << u)).count_ones();
        if c >= most {
            most = c;
            pivot = u;
        }
    }
    // in the complement graph, neighbours of v are non-neighbours in G
    let non = |v: usize| !adj[v] & !(1u128 << v);
    let mut cands = p & !non(pivot);
    let (mut p, mut x) = (p, x);
    while cands != 0 {
        let v = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        bk(adj, r | 1 << v, p & non(v), x & non(v), out);
        p &= !(1u128 << v);
        x |= 1 << v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(n: usize, edges: &[(usize, usize)]) -> Vec<u128> {
        let mut a = vec![0u128; n];
        for &(u, v) in edges {
            a[u] |= 1 << v;
            a[v] |= 1 << u;
        }
        a
    }

    fn brute(a: &[u128], w: &[i128]) -> i128 {
        let n = a.len();
        (0u128..1 << n)
            .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || a[v] & s == 0))
            .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).map(|v| w[v]).sum())
            .max()
            .unwrap()
    }

    #[test]
    fn mwis_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = r.gen_range(1..=11);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| r.gen_bool(0.35))
                .collect();
            let a = adj(n, &edges);
            let w: Vec<i128> = (0..n).map(|_| r.gen_range(0..6)).collect();
            let all = (1u128 << n) - 1;
            let (v, set) = mwis(&a, &w, all);
            assert_eq!(v, brute(&a, &w));
            assert!((0..n).all(|u| set >> u & 1 == 0 || a[u] & set == 0));
        }
    }

    #[test]
    fn maximal_sets_of_small_graphs() {
        // path 0-1-2: {0,2}, {1}
        let mut m = maximal_independent_sets(&adj(3, &[(0, 1), (1, 2)]), 0b111);
        m.sort();
        assert_eq!(m, vec![0b010, 0b101]);
        // C5 has five maximal independent sets
        let c5 = adj(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert_eq!(maximal_independent_sets(&c5, 0b11111).len(), 5);
    }
}

//! Hamilton-cycle backtracking on sparse undirected graphs, with degree
//! propagation and subtour elimination.

use crate::{guard, Result};

const UNKNOWN: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

#[derive(Clone)]
struct State {
    status: Vec<u8>,
    deg_in: Vec<u32>,
    deg_unk: Vec<u32>,
    /// For a fragment endpoint, the opposite endpoint; `v` itself when isolated.
    end: Vec<usize>,
    in_count: usize,
}

pub struct Hamilton<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    inc: Vec<Vec<usize>>,
    nodes: u64,
}

impl<'a> Hamilton<'a> {
    pub fn new(n: usize, edges: &'a [(usize, usize)]) -> Self {
        let mut inc = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        Hamilton {
            n,
            edges,
            inc,
            nodes: 0,
        }
    }

    fn initial(&self, fixed: &[Option<bool>]) -> Option<State> {
        let mut st = State {
            status: vec![UNKNOWN; self.edges.len()],
            deg_in: vec![0; self.n],
            deg_unk: self.inc.iter().map(|l| l.len() as u32).collect(),
            end: (0..self.n).collect(),
            in_count: 0,
        };
        let mut queue: Vec<usize> = (0..self.n).collect();
        for (e, f) in fixed.iter().enumerate() {
            match f {
                Some(true) => {
                    if !self.set_in(&mut st, e, &mut queue) {
                        return None;
                    }
                }
                Some(false) => self.set_out(&mut st, e, &mut queue),
                None => {}
            }
        }
        self.propagate(&mut st, &mut queue).then_some(st)
    }

    fn set_in(&self, st: &mut State, e: usize, queue: &mut Vec<usize>) -> bool {
        if st.status[e] != UNKNOWN {
            return st.status[e] == IN;
        }
        let (u, v) = self.edges[e];
        if st.deg_in[u] >= 2 || st.deg_in[v] >= 2 {
            return false;
        }
        if st.end[u] == v && st.in_count + 1 != self.n {
            return false;
        }
        let (eu, ev) = (st.end[u], st.end[v]);
        st.end[eu] = ev;
        st.end[ev] = eu;
        st.status[e] = IN;
        st.in_count += 1;
        for w in [u, v] {
            st.deg_in[w] += 1;
            st.deg_unk[w] -= 1;
            queue.push(w);
        }
        true
    }

    fn set_out(&self, st: &mut State, e: usize, queue: &mut Vec<usize>) {
        if st.status[e] != UNKNOWN {
            return;
        }
        st.status[e] = OUT;
        let (u, v) = self.edges[e];
        for w in [u, v] {
            st.deg_unk[w] -= 1;
            queue.push(w);
        }
    }

    fn propagate(&self, st: &mut State, queue: &mut Vec<usize>) -> bool {
        while let Some(v) = queue.pop() {
            let (din, dunk) = (st.deg_in[v], st.deg_unk[v]);
            if din > 2 || din + dunk < 2 {
                return false;
            }
            if dunk == 0 {
                continue;
            }
            if din == 2 {
                for &e in &self.inc[v] {
                    self.set_out(st, e, queue);
                }
            } else if din + dunk == 2 {
                for &e in &self.inc[v] {
                    if st.status[e] == UNKNOWN && !self.set_in(st, e, queue) {
                        return false;
                    }
                }
            } else if din == 1 && st.in_count + 1 < self.n {
                // the edge back to the own fragment's other end closes a subtour
                let other = st.end[v];
                for &e in &self.inc[v] {
                    let (a, b) = self.edges[e];
                    if st.status[e] == UNKNOWN && (a == other || b == other) {
                        self.set_out(st, e, queue);
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, st: State, f: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            guard::check("hamilton search nodes", self.nodes as u128)?;
        }
        if st.in_count == self.n {
            let cycle: Vec<usize> = (0..self.edges.len()).filter(|&e| st.status[e] == IN).collect();
            return Ok(f(&cycle));
        }
        // most constrained open vertex
        let mut pick: Option<(u32, usize)> = None;
        for v in 0..self.n {
            if st.deg_in[v] < 2 && st.deg_unk[v] > 0 && pick.is_none_or(|(d, _)| st.deg_unk[v] < d) {
                pick = Some((st.deg_unk[v], v));
            }
        }
        let Some((_, v)) = pick else {
            return Ok(true);
        };
        let e = *self.inc[v].iter().find(|&&e| st.status[e] == UNKNOWN).expect("open vertex");
        let mut with = st.clone();
        let mut queue = Vec::new();
        if self.set_in(&mut with, e, &mut queue) && self.propagate(&mut with, &mut queue) && !self.search(with, f)? {
            return Ok(false);
        }
        let mut without = st;
        self.set_out(&mut without, e, &mut queue);
        if self.propagate(&mut without, &mut queue) {
            return self.search(without, f);
        }
        Ok(true)
    }

    /// Calls `f` with the edge indices of every Hamilton cycle respecting
    /// `fixed` (Some(true) = must use, Some(false) = must avoid) until `f`
    /// returns false. Returns whether the enumeration ran to completion.
    pub fn for_each(&mut self, fixed: &[Option<bool>], mut f: impl FnMut(&[usize]) -> bool) -> Result<bool> {
        if self.n < 3 {
            return Ok(true);
        }
        match self.initial(fixed) {
            None => Ok(true),
            Some(st) => self.search(st, &mut f),
        }
    }

    pub fn find(&mut self, fixed: &[Option<bool>]) -> Result<Option<Vec<usize>>> {
        let mut found = None;
        self.for_each(fixed, |c| {
            found = Some(c.to_vec());
            false
        })?;
        Ok(found)
    }
}

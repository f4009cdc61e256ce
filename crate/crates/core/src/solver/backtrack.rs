use std::collections::VecDeque;
use std::time::Instant;

use super::compile::Compiled;

/// Result of the search; `None` inside `Done` means unsatisfiable.
pub(crate) enum Search {
    Done(Option<Vec<u8>>),
    Timeout,
}

struct Term {
    eq: usize,
    coef: i128,
    vars: Vec<u32>,
    ones: u32,
    zeros: u32,
}

impl Term {
    fn dead(&self) -> bool {
        self.zeros > 0
    }

    fn active(&self) -> bool {
        self.ones as usize == self.vars.len()
    }
}

struct State {
    terms: Vec<Term>,
    /// term ids per equation, |coef| descending
    eq_terms: Vec<Vec<usize>>,
    lo: Vec<i128>,
    hi: Vec<i128>,
    constant: Vec<i128>,
    /// free variable occurrences in terms that are not dead
    open_free: Vec<usize>,
    occ: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<u32>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
}

impl State {
    fn new(c: &Compiled) -> Self {
        let mut terms = Vec::new();
        let mut eq_terms = Vec::with_capacity(c.eqs.len());
        let mut lo = Vec::with_capacity(c.eqs.len());
        let mut hi = Vec::with_capacity(c.eqs.len());
        let mut open_free = Vec::with_capacity(c.eqs.len());
        let mut occ = vec![Vec::new(); c.n];
        for (i, e) in c.eqs.iter().enumerate() {
            let (mut l, mut h) = (e.constant, e.constant);
            let mut ids = Vec::with_capacity(e.terms.len());
            for (coef, vars) in &e.terms {
                let id = terms.len();
                for &v in vars {
                    occ[v as usize].push(id);
                }
                if *coef > 0 {
                    h += coef;
                } else {
                    l += coef;
                }
                terms.push(Term { eq: i, coef: *coef, vars: vars.clone(), ones: 0, zeros: 0 });
                ids.push(id);
            }
            eq_terms.push(ids);
            open_free.push(e.terms.iter().map(|t| t.1.len()).sum());
            lo.push(l);
            hi.push(h);
        }
        let m = c.eqs.len();
        State {
            terms,
            eq_terms,
            lo,
            hi,
            constant: c.eqs.iter().map(|e| e.constant).collect(),
            open_free,
            occ,
            value: vec![-1; c.n],
            trail: Vec::new(),
            queue: (0..m).collect(),
            queued: vec![true; m],
        }
    }

    fn enqueue(&mut self, eq: usize) {
        if !self.queued[eq] {
            self.queued[eq] = true;
            self.queue.push_back(eq);
        }
    }

    fn assign(&mut self, v: u32, val: u8) {
        self.value[v as usize] = val as i8;
        self.trail.push(v);
        for k in 0..self.occ[v as usize].len() {
            let id = self.occ[v as usize][k];
            let t = &mut self.terms[id];
            let (eq, coef) = (t.eq, t.coef);
            if !t.dead() {
                let free = t.vars.len() - (t.ones + t.zeros) as usize;
                self.open_free[eq] -= if val == 0 { free } else { 1 };
            }
            if val == 0 {
                t.zeros += 1;
                if t.zeros == 1 {
                    // open → dead
                    if coef > 0 {
                        self.hi[eq] -= coef;
                    } else {
                        self.lo[eq] -= coef;
                    }
                }
            } else {
                t.ones += 1;
                if t.active() {
                    if coef > 0 {
                        self.lo[eq] += coef;
                    } else {
                        self.hi[eq] += coef;
                    }
                }
            }
            self.enqueue(eq);
        }
    }

    fn unassign(&mut self) {
        let v = self.trail.pop().unwrap();
        let val = self.value[v as usize];
        self.value[v as usize] = -1;
        for k in 0..self.occ[v as usize].len() {
            let id = self.occ[v as usize][k];
            let t = &mut self.terms[id];
            let (eq, coef) = (t.eq, t.coef);
            if val == 0 {
                if t.zeros == 1 {
                    if coef > 0 {
                        self.hi[eq] += coef;
                    } else {
                        self.lo[eq] += coef;
                    }
                }
                t.zeros -= 1;
                if !t.dead() {
                    self.open_free[eq] += t.vars.len() - (t.ones + t.zeros) as usize;
                }
            } else {
                if t.active() {
                    if coef > 0 {
                        self.lo[eq] -= coef;
                    } else {
                        self.hi[eq] -= coef;
                    }
                }
                t.ones -= 1;
                if !t.dead() {
                    self.open_free[eq] += 1;
                }
            }
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            self.unassign();
        }
    }

    /// False on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(eq) = self.queue.pop_front() {
            self.queued[eq] = false;
            if !self.propagate_eq(eq) {
                for q in self.queue.drain(..) {
                    self.queued[q] = false;
                }
                return false;
            }
        }
        true
    }

    fn propagate_eq(&mut self, eq: usize) -> bool {
        let mut k = 0;
        while k < self.eq_terms[eq].len() {
            let (lo, hi) = (self.lo[eq], self.hi[eq]);
            if lo > 0 || hi < 0 {
                return false;
            }
            let id = self.eq_terms[eq][k];
            k += 1;
            let t = &self.terms[id];
            if t.coef.unsigned_abs() <= (-lo).min(hi) as u128 {
                break;
            }
            if t.dead() || t.active() {
                continue;
            }
            let c = t.coef;
            let must_dead = lo + c.max(0) > 0 || hi + c.min(0) < 0;
            let must_active = lo - c.min(0) > 0 || hi - c.max(0) < 0;
            if must_dead && must_active {
                return false;
            }
            if must_active {
                let free: Vec<u32> = t.vars.iter().copied().filter(|&v| self.value[v as usize] < 0).collect();
                for v in free {
                    self.assign(v, 1);
                }
            } else if must_dead && t.ones as usize + 1 == t.vars.len() {
                let v = t.vars.iter().copied().find(|&v| self.value[v as usize] < 0).unwrap();
                self.assign(v, 0);
            }
        }
        self.lo[eq] <= 0 && self.hi[eq] >= 0 && self.divisible(eq)
    }

    /// The fixed part must be a multiple of the gcd of the open coefficients.
    fn divisible(&self, eq: usize) -> bool {
        let mut fixed = self.constant[eq];
        let mut g = 0u128;
        for &id in &self.eq_terms[eq] {
            let t = &self.terms[id];
            if t.active() {
                fixed += t.coef;
            } else if !t.dead() {
                g = gcd(g, t.coef.unsigned_abs());
                if g == 1 {
                    return true;
                }
            }
        }
        if g == 0 {
            fixed == 0
        } else {
            fixed.unsigned_abs() % g == 0
        }
    }

    /// A free variable of the equation with the fewest free occurrences,
    /// ties broken by `rank`.
    fn pick(&self, rank: &[u32]) -> Option<u32> {
        let eq = (0..self.open_free.len()).filter(|&e| self.open_free[e] > 0).min_by_key(|&e| self.open_free[e])?;
        self.eq_terms[eq]
            .iter()
            .map(|&id| &self.terms[id])
            .filter(|t| !t.dead())
            .flat_map(|t| t.vars.iter().copied())
            .filter(|&v| self.value[v as usize] < 0)
            .min_by_key(|&v| rank[v as usize])
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Depth-first search with unit-style propagation, interval and gcd
/// pruning. Branches on a variable of the most constrained equation
/// (fewest free occurrences), trying 0 before 1; variables in no live
/// term are filled in most-occurring-first order.
pub(crate) fn search(c: &Compiled, deadline: Option<Instant>) -> Search {
    let mut s = State::new(c);
    let mut order: Vec<u32> = (0..c.n as u32).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(s.occ[v as usize].len()), v));
    let mut rank = vec![0u32; c.n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i as u32;
    }
    // (trail length before the decision, variable, value tried)
    let mut decisions: Vec<(usize, u32, u8)> = Vec::new();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if nodes % 1024 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return Search::Timeout;
        }
        if !s.propagate() {
            // flip the deepest decision still at 0
            loop {
                let Some((len, v, val)) = decisions.pop() else {
                    return Search::Done(None);
                };
                s.undo_to(len);
                if val == 0 {
                    decisions.push((len, v, 1));
                    s.assign(v, 1);
                    break;
                }
            }
            continue;
        }
        match s.pick(&rank).or_else(|| order.iter().copied().find(|&v| s.value[v as usize] < 0)) {
            Some(v) => {
                decisions.push((s.trail.len(), v, 0));
                s.assign(v, 0);
            }
            None => {
                let x = s.value.iter().map(|&b| b as u8).collect();
                return Search::Done(Some(x));
            }
        }
    }
}

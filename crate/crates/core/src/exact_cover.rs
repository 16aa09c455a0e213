//! Dancing-links exact cover with secondary items.
//!
//! Primary items must be covered exactly once, secondary items at most once.
//! Branching picks the primary item with the fewest remaining options.

use crate::search::{Budget, SearchOutcome};

pub(crate) struct ExactCover {
    primary: usize,
    // Node arrays; nodes 0..=items are headers, node 0 the root.
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    item: Vec<usize>,
    option: Vec<usize>,
    len: Vec<usize>,
    options: usize,
}

impl ExactCover {
    pub(crate) fn new(primary: usize, secondary: usize) -> Self {
        let n = primary + secondary;
        let mut s = Self {
            primary,
            left: vec![0; n + 1],
            right: vec![0; n + 1],
            up: (0..=n).collect(),
            down: (0..=n).collect(),
            item: (0..=n).collect(),
            option: vec![usize::MAX; n + 1],
            len: vec![0; n + 1],
            options: 0,
        };
        // Only primary headers are linked into the root's list.
        for i in 0..=n {
            s.left[i] = i;
            s.right[i] = i;
        }
        for i in 1..=primary {
            s.left[i] = i - 1;
            s.right[i - 1] = i;
        }
        s.right[primary] = 0;
        s.left[0] = primary;
        s
    }

    /// Items are 0-based: primary first, then secondary. Returns the option index.
    pub(crate) fn add_option(&mut self, items: &[usize]) -> usize {
        let first = self.item.len();
        let n = items.len();
        for (k, &it) in items.iter().enumerate() {
            let h = it + 1;
            let node = first + k;
            self.item.push(h);
            self.option.push(self.options);
            self.len[h] += 1;
            let last = self.up[h];
            self.up.push(last);
            self.down.push(h);
            self.down[last] = node;
            self.up[h] = node;
            self.left.push(first + (k + n - 1) % n);
            self.right.push(first + (k + 1) % n);
        }
        self.options += 1;
        self.options - 1
    }

    fn cover(&mut self, h: usize) {
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[h];
        while i != h {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.len[self.item[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, h: usize) {
        let mut i = self.up[h];
        while i != h {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.len[self.item[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = h;
        self.left[r] = h;
    }

    /// First solution in search order as a list of option indices. One unit
    /// of budget per option tried.
    pub(crate) fn solve(&mut self, budget: &mut Budget) -> SearchOutcome<Vec<usize>> {
        let mut chosen = Vec::new();
        match self.search(&mut chosen, budget) {
            Some(true) => SearchOutcome::Found(chosen),
            Some(false) => SearchOutcome::Exhausted,
            None => SearchOutcome::OutOfBudget,
        }
    }

    fn search(&mut self, chosen: &mut Vec<usize>, budget: &mut Budget) -> Option<bool> {
        if self.right[0] == 0 {
            return Some(true);
        }
        let mut best = self.right[0];
        let mut h = best;
        while h != 0 {
            if self.len[h] < self.len[best] {
                best = h;
            }
            h = self.right[h];
        }
        if self.len[best] == 0 {
            return Some(false);
        }
        debug_assert!(best <= self.primary);
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            if !budget.spend() {
                self.uncover(best);
                return None;
            }
            chosen.push(self.option[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.item[j]);
                j = self.right[j];
            }
            let out = self.search(chosen, budget);
            if out == Some(true) {
                return out;
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.item[j]);
                j = self.left[j];
            }
            chosen.pop();
            if out.is_none() {
                self.uncover(best);
                return None;
            }
            r = self.down[r];
        }
        self.uncover(best);
        Some(false)
    }
}

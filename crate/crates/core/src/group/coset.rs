//! Todd-Coxeter enumeration of the cosets of the trivial subgroup, giving a
//! multiplication table for a finite presented group.

use super::{Presentation, Word};

/// Default bound on the group order.
pub const DEFAULT_COSET_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CosetError {
    #[error("coset enumeration exceeded {0} cosets; the group may be infinite")]
    TooLarge(usize),
}

/// A finite group given by its right regular action on itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    num_generators: usize,
    /// `table[e][2 g]` is `e * g`, `table[e][2 g + 1]` is `e * g^-1`.
    table: Vec<Vec<usize>>,
}

fn col(l: super::Letter) -> usize {
    2 * l.generator + usize::from(l.inverse)
}

struct Enumerator {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    cols: usize,
    limit: usize,
}

impl Enumerator {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn new_coset(&mut self) -> Result<usize, CosetError> {
        if self.table.len() >= self.limit {
            return Err(CosetError::TooLarge(self.limit));
        }
        self.table.push(vec![None; self.cols]);
        self.parent.push(self.table.len() - 1);
        Ok(self.table.len() - 1)
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, CosetError> {
        let d = self.new_coset()?;
        self.table[c][x] = Some(d);
        self.table[d][x ^ 1] = Some(c);
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let Some(f) = self.table[e][x] else { continue };
                self.table[f][x ^ 1] = None;
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t);
                } else if let Some(t) = self.table[f1][x ^ 1] {
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][x ^ 1] = Some(e1);
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), CosetError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(t) => {
                        f = t;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(t) => {
                        b = t;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerate the elements of the group presented by `p`.
///
/// `cap` bounds the order; the number of cosets defined along the way is
/// allowed to reach a fixed multiple of it.
pub fn enumerate_finite(p: &Presentation, cap: usize) -> Result<FiniteGroup, CosetError> {
    let n = p.num_generators();
    let cols = 2 * n;
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|&l| col(l)).collect())
        .collect();
    let mut e = Enumerator {
        table: Vec::new(),
        parent: Vec::new(),
        queue: Vec::new(),
        cols,
        limit: cap.saturating_mul(16).max(64),
    };
    e.new_coset()?;
    let mut c = 0;
    while c < e.table.len() {
        if e.alive(c) {
            for r in &relators {
                e.scan_and_fill(c, r)?;
                if !e.alive(c) {
                    break;
                }
            }
            if e.alive(c) {
                for x in 0..cols {
                    if e.table[c][x].is_none() {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.alive(c)).collect();
    if live.len() > cap {
        return Err(CosetError::TooLarge(cap));
    }
    let mut index = vec![usize::MAX; e.table.len()];
    for (k, &c) in live.iter().enumerate() {
        index[c] = k;
    }
    let table = live
        .iter()
        .map(|&c| {
            (0..cols)
                .map(|x| {
                    let t = e.table[c][x].expect("complete coset table");
                    let t = e.rep(t);
                    index[t]
                })
                .collect()
        })
        .collect();
    Ok(FiniteGroup {
        num_generators: n,
        table,
    })
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// `e * g` (or `e * g^-1`).
    pub fn act(&self, e: usize, generator: usize, inverse: bool) -> usize {
        self.table[e][2 * generator + usize::from(inverse)]
    }

    /// Element represented by a word, as `identity * w`.
    pub fn evaluate(&self, w: &Word) -> usize {
        self.multiply_word(self.identity(), w)
    }

    pub fn multiply_word(&self, mut e: usize, w: &Word) -> usize {
        for l in w.letters() {
            e = self.table[e][col(*l)];
        }
        e
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.evaluate(w) == self.identity()
    }

    /// A word for every element, by breadth-first search from the identity.
    pub fn normal_words(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.order()];
        words[0] = Some(Word::empty());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let w = words[e].clone().expect("visited");
            for g in 0..self.num_generators {
                for inv in [false, true] {
                    let t = self.act(e, g, inv);
                    if words[t].is_none() {
                        let mut wt = w.clone();
                        wt.push(super::Letter::new(g, inv));
                        words[t] = Some(wt);
                        queue.push_back(t);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.expect("group is generated")).collect()
    }

    /// Order of the element represented by `w`.
    pub fn element_order(&self, w: &Word) -> usize {
        let mut e = self.evaluate(w);
        let mut k = 1;
        while e != self.identity() {
            e = self.multiply_word(e, w);
            k += 1;
        }
        k
    }
}

//! Maximum independent sets: dynamic programming over a tree decomposition
//! and a branch-and-bound oracle for small graphs.

use serde::{Deserialize, Serialize};

use crate::decomposition::{validate_decomposition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, IntersectionGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisResult {
    pub size: usize,
    /// Sorted vertex ids.
    pub witness: Vec<usize>,
}

impl MisResult {
    /// Whether the witness has the claimed size and spans no edge of `g`.
    pub fn is_valid_for(&self, g: &IntersectionGraph) -> bool {
        let adj = g.adjacency();
        self.witness.len() == self.size
            && self.witness.windows(2).all(|w| w[0] < w[1])
            && self.witness.last().is_none_or(|&v| v < g.n())
            && self
                .witness
                .iter()
                .all(|&v| adj.neighbors(v).iter().all(|w| self.witness.binary_search(w).is_err()))
    }
}

/// Largest graph accepted by [`mis_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 24;

/// Largest bag the dynamic program accepts; tables have `2^k` entries.
pub const DP_BAG_LIMIT: usize = 16;

const NEG: i32 = i32::MIN / 4;

#[derive(Debug, Clone, Copy)]
enum Kind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug)]
struct NiceNode {
    kind: Kind,
    /// Sorted.
    bag: Vec<usize>,
    children: [usize; 2],
}

/// Nice decomposition whose nodes are stored children-before-parents; the
/// last node is the root and has an empty bag.
struct Nice {
    nodes: Vec<NiceNode>,
}

impl Nice {
    fn push(&mut self, kind: Kind, bag: Vec<usize>, children: [usize; 2]) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Forgets `from \ to` one at a time, then introduces `to \ from`.
    fn chain(&mut self, mut node: usize, to: &[usize]) -> usize {
        let from = self.nodes[node].bag.clone();
        let mut bag = from.clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|&x| x != v);
            node = self.push(Kind::Forget(v), bag.clone(), [node, usize::MAX]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let at = bag.partition_point(|&x| x < v);
            bag.insert(at, v);
            node = self.push(Kind::Introduce(v), bag.clone(), [node, usize::MAX]);
        }
        node
    }

    fn from_decomposition(td: &TreeDecomposition) -> Nice {
        let mut nice = Nice {
            nodes: Vec::with_capacity(6 * td.len()),
        };
        let children = td.children();
        let bags = td.bags();
        // Postorder without recursion.
        let mut order = Vec::with_capacity(bags.len());
        let mut stack = vec![td.root()];
        while let Some(b) = stack.pop() {
            order.push(b);
            stack.extend(children[b].iter().copied());
        }
        let mut top = vec![usize::MAX; bags.len()];
        for &b in order.iter().rev() {
            let bag = &bags[b].sides;
            let mut joined: Option<usize> = None;
            for &c in &children[b] {
                let lifted = nice.chain(top[c], bag);
                joined = Some(match joined {
                    None => lifted,
                    Some(j) => nice.push(Kind::Join, bag.clone(), [j, lifted]),
                });
            }
            top[b] = match joined {
                Some(j) => j,
                None => {
                    let leaf = nice.push(Kind::Leaf, Vec::new(), [usize::MAX; 2]);
                    nice.chain(leaf, bag)
                }
            };
        }
        nice.chain(top[td.root()], &[]);
        nice
    }
}

/// Removes bit `p` from `mask`, shifting higher bits down.
fn drop_bit(mask: usize, p: usize) -> usize {
    let low = mask & ((1 << p) - 1);
    low | ((mask >> (p + 1)) << p)
}

/// Inserts a zero bit at position `p`.
fn insert_bit(mask: usize, p: usize) -> usize {
    let low = mask & ((1 << p) - 1);
    low | ((mask >> p) << (p + 1))
}

/// Exact maximum independent set by dynamic programming over `td`, which
/// must be a valid decomposition of `g`.
pub fn mis_dp(g: &IntersectionGraph, td: &TreeDecomposition) -> Result<MisResult> {
    let report = validate_decomposition(g, td);
    if !report.passed() {
        return Err(Error::InvalidDecomposition(format!(
            "{} counterexamples (uncovered vertices {:?}, uncovered edges {:?}, disconnected {:?}, out of range {:?})",
            report.counterexample_count(),
            head(&report.vertex_coverage.witnesses),
            head(&report.edge_coverage.witnesses),
            head(&report.connectivity.witnesses),
            head(&report.out_of_range),
        )));
    }
    if let Some(b) = td.bags().iter().find(|b| b.sides.len() > DP_BAG_LIMIT) {
        return Err(Error::InvalidDecomposition(format!(
            "bag {} has {} sides, above the limit of {DP_BAG_LIMIT}",
            b.id,
            b.sides.len()
        )));
    }
    let adj = g.adjacency();
    let nice = Nice::from_decomposition(td);
    let tables = fill_tables(&nice, &adj);
    let witness = backtrack(&nice, &tables);
    let root = nice.nodes.len() - 1;
    Ok(MisResult {
        size: tables[root][0] as usize,
        witness,
    })
}

fn head<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().take(5).cloned().collect()
}

fn fill_tables(nice: &Nice, adj: &Adjacency) -> Vec<Vec<i32>> {
    let mut tables: Vec<Vec<i32>> = Vec::with_capacity(nice.nodes.len());
    for node in &nice.nodes {
        let size = 1usize << node.bag.len();
        let table = match node.kind {
            Kind::Leaf => vec![0],
            Kind::Introduce(v) => {
                let child = &tables[node.children[0]];
                let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                let vb = 1 << p;
                let mut nb = 0usize;
                for &w in adj.neighbors(v) {
                    if let Ok(q) = node.bag.binary_search(&w) {
                        nb |= 1 << q;
                    }
                }
                (0..size)
                    .map(|s| {
                        let c = child[drop_bit(s & !vb, p)];
                        if s & vb == 0 {
                            c
                        } else if s & nb != 0 || c == NEG {
                            NEG
                        } else {
                            c + 1
                        }
                    })
                    .collect()
            }
            Kind::Forget(v) => {
                let child_node = &nice.nodes[node.children[0]];
                let child = &tables[node.children[0]];
                let p = child_node.bag.binary_search(&v).expect("forgotten vertex in child");
                (0..size)
                    .map(|s| {
                        let base = insert_bit(s, p);
                        child[base].max(child[base | (1 << p)])
                    })
                    .collect()
            }
            Kind::Join => {
                let (a, b) = (&tables[node.children[0]], &tables[node.children[1]]);
                (0..size)
                    .map(|s| {
                        if a[s] == NEG || b[s] == NEG {
                            NEG
                        } else {
                            a[s] + b[s] - s.count_ones() as i32
                        }
                    })
                    .collect()
            }
        };
        tables.push(table);
    }
    tables
}

/// Recovers one optimal set, preferring to keep a forgotten vertex when
/// both choices are optimal.
fn backtrack(nice: &Nice, tables: &[Vec<i32>]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut stack = vec![(nice.nodes.len() - 1, 0usize)];
    while let Some((id, s)) = stack.pop() {
        let node = &nice.nodes[id];
        match node.kind {
            Kind::Leaf => {}
            Kind::Introduce(v) => {
                let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                if s & (1 << p) != 0 {
                    chosen.push(v);
                }
                stack.push((node.children[0], drop_bit(s & !(1 << p), p)));
            }
            Kind::Forget(v) => {
                let c = node.children[0];
                let p = nice.nodes[c].bag.binary_search(&v).expect("forgotten vertex in child");
                let base = insert_bit(s, p);
                let with = base | (1 << p);
                let pick = if tables[c][with] >= tables[c][base] { with } else { base };
                stack.push((c, pick));
            }
            Kind::Join => {
                stack.push((node.children[1], s));
                stack.push((node.children[0], s));
            }
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    chosen
}

/// Exact maximum independent set by branch and bound, for `n <= 24`. The
/// witness is the lexicographically smallest maximum set.
pub fn mis_bruteforce(g: &IntersectionGraph) -> Result<MisResult> {
    let n = g.n();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let mut nbr = vec![0u32; n];
    for &(a, b) in g.edges() {
        nbr[a] |= 1 << b;
        nbr[b] |= 1 << a;
    }
    if n == 0 {
        return Ok(MisResult {
            size: 0,
            witness: Vec::new(),
        });
    }
    let all: u32 = (1u32 << n) - 1;
    // A greedy set only seeds the bound; the witness comes from the search
    // so that ties resolve in index order.
    let greedy = greedy_size(&nbr, all);
    let mut search = Search {
        nbr: &nbr,
        best: greedy as u32 - 1,
        best_set: None,
    };
    search.run(0, 0, all);
    let set = search.best_set.expect("a set of greedy size exists");
    let witness: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
    Ok(MisResult {
        size: witness.len(),
        witness,
    })
}

fn greedy_size(nbr: &[u32], mut p: u32) -> usize {
    let mut size = 0;
    while p != 0 {
        let v = (0..nbr.len())
            .filter(|&v| p >> v & 1 == 1)
            .min_by_key(|&v| (nbr[v] & p).count_ones())
            .expect("non-empty");
        size += 1;
        p &= !(nbr[v] | 1 << v);
    }
    size
}

struct Search<'a> {
    nbr: &'a [u32],
    best: u32,
    best_set: Option<u32>,
}

impl Search<'_> {
    /// Include-first branching in index order: the first set found at
    /// each size is the lexicographically smallest one.
    fn run(&mut self, set: u32, size: u32, p: u32) {
        if size + p.count_ones() <= self.best {
            return;
        }
        if p == 0 {
            self.best = size;
            self.best_set = Some(set);
            return;
        }
        let v = p.trailing_zeros();
        let with = p & !(self.nbr[v as usize] | 1 << v);
        self.run(set | 1 << v, size + 1, with);
        self.run(set, size, p & !(1 << v));
    }
}

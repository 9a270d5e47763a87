//! Exhaustive oracle, branch-and-bound and the right-aligned 2-approximation.
//!
//! Every exact method returns the same configuration for a given instance:
//! among all optimal configurations the one whose top-to-bottom order is
//! lexicographically smallest, and among those the smallest protruding
//! position.

use crate::error::{Error, Result};
use crate::perm::for_each_permutation;
use crate::rational::Rational;
use crate::stack::{overhang_unchecked, BlockSet, StackConfiguration};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;

pub const DEFAULT_ORACLE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub config: StackConfiguration,
    pub overhang: Rational,
    pub nodes_explored: u64,
    /// `true` for exact methods, `false` for approximations.
    pub optimal: bool,
}

/// Optimal fully right-aligned order under a top load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightAlignedSolution {
    pub order: Vec<usize>,
    pub value: Rational,
    pub nodes_explored: u64,
}

/// Which pruning rules the branch-and-bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pruning {
    /// Adjacent right-aligned blocks `a` over `b` must satisfy
    /// `w_a / (M + m_a) >= w_b / (M + m_b)`.
    pub pairwise: bool,
    /// A block that is wider and has a larger width-to-mass ratio never sits
    /// directly under another right-aligned block.
    pub dominance: bool,
    /// A block strictly widest and weakly lightest must protrude.
    pub forced_protruding: bool,
    /// Upper-bound cut against the incumbent.
    pub bound: bool,
    /// Only canonical arrangements of identical blocks are expanded.
    pub symmetry: bool,
}

impl Pruning {
    pub const ALL: Pruning = Pruning {
        pairwise: true,
        dominance: true,
        forced_protruding: true,
        bound: true,
        symmetry: true,
    };

    pub const NONE: Pruning = Pruning {
        pairwise: false,
        dominance: false,
        forced_protruding: false,
        bound: false,
        symmetry: false,
    };
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning::ALL
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate {
    value: Rational,
    order: Vec<usize>,
    protruding: usize,
}

impl Candidate {
    /// Larger value first, then lexicographically smaller order, then
    /// smaller protruding position.
    fn beats(&self, other: &Candidate) -> bool {
        match self.value.cmp(&other.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (&self.order, self.protruding) < (&other.order, other.protruding),
        }
    }
}

/// Enumerates every configuration (every order, and every protruding
/// position when counterweights are allowed) and evaluates each one
/// directly. Refuses instances above [`DEFAULT_ORACLE_CAP`].
pub fn oracle_solve(blocks: &BlockSet, allow_counterbalancing: bool) -> Result<SolveResult> {
    oracle_solve_with_cap(blocks, allow_counterbalancing, DEFAULT_ORACLE_CAP)
}

pub fn oracle_solve_with_cap(
    blocks: &BlockSet,
    allow_counterbalancing: bool,
    cap: usize,
) -> Result<SolveResult> {
    let n = blocks.len();
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let mut best: Option<Candidate> = None;
    let mut nodes = 0u64;
    for_each_permutation(n, |order| {
        let positions = if allow_counterbalancing { n } else { 1 };
        for p in 0..positions {
            nodes += 1;
            let value = overhang_unchecked(blocks, order, p);
            // permutations arrive in lexicographic order, so only a strictly
            // better value replaces the incumbent
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(Candidate {
                    value,
                    order: order.to_vec(),
                    protruding: p,
                });
            }
        }
    });
    let best = best.expect("at least one configuration");
    Ok(SolveResult {
        config: StackConfiguration::new(best.order, best.protruding)?,
        overhang: best.value,
        nodes_explored: nodes,
        optimal: true,
    })
}

/// Brute force over all right-aligned orders with `load` resting on top.
pub fn oracle_solve_loaded(
    blocks: &BlockSet,
    load: &Rational,
    cap: usize,
) -> Result<RightAlignedSolution> {
    let n = blocks.len();
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut nodes = 0u64;
    for_each_permutation(n, |order| {
        nodes += 1;
        let mut mass = load.clone();
        let mut value = Rational::zero();
        for &i in order {
            mass += blocks[i].mass();
            value += blocks[i].half_width() * blocks[i].mass() / &mass;
        }
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, order.to_vec()));
        }
    });
    let (value, order) = best.expect("at least one order");
    Ok(RightAlignedSolution {
        order,
        value,
        nodes_explored: nodes,
    })
}

/// Branch-and-bound with every pruning rule enabled.
pub fn exact_solve(blocks: &BlockSet, allow_counterbalancing: bool) -> SolveResult {
    exact_solve_with(blocks, allow_counterbalancing, Pruning::ALL)
}

pub fn exact_solve_with(
    blocks: &BlockSet,
    allow_counterbalancing: bool,
    pruning: Pruning,
) -> SolveResult {
    let mut search = Search::new(blocks, Rational::zero(), allow_counterbalancing, pruning);
    let seed = search.seed_candidate();
    search.run(seed);
    let best = search.best.expect("search always finds a configuration");
    SolveResult {
        config: StackConfiguration::new(best.order, best.protruding)
            .expect("search builds permutations"),
        overhang: best.value,
        nodes_explored: search.nodes,
        optimal: true,
    }
}

/// Exact optimum of `sum_i w_i m_i / (load + M_i)` over right-aligned orders.
pub fn exact_solve_loaded(
    blocks: &BlockSet,
    load: &Rational,
    pruning: Pruning,
) -> Result<RightAlignedSolution> {
    if load.is_negative() {
        return Err(Error::invalid("load must be non-negative"));
    }
    let mut search = Search::new(blocks, load.clone(), false, pruning);
    let seed = search.seed_candidate();
    search.run(seed);
    let best = search.best.expect("search always finds an order");
    Ok(RightAlignedSolution {
        order: best.order,
        value: best.value,
        nodes_explored: search.nodes,
    })
}

/// The best fully right-aligned stack, returned as an approximate answer to
/// the counterbalanced problem. Its overhang is at least half the optimum.
pub fn two_approx_solve(blocks: &BlockSet) -> SolveResult {
    let mut res = exact_solve(blocks, false);
    res.optimal = false;
    res
}

/// Blocks by decreasing `w / m`, then decreasing `w`, then index.
pub fn ratio_heuristic_order(blocks: &BlockSet) -> Vec<usize> {
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by(|&a, &b| {
        let (ba, bb) = (&blocks[a], &blocks[b]);
        bb.ratio()
            .cmp(&ba.ratio())
            .then_with(|| bb.half_width().cmp(ba.half_width()))
            .then(a.cmp(&b))
    });
    order
}

/// First adjacent pair `(upper, lower)` of positions that breaks
/// `w_a / (M + m_a) >= w_b / (M + m_b)`. Only pairs whose upper block
/// contributes `w m / M` are checked: positions below the protruding block,
/// plus the protruding block itself when it carries no counterweights.
pub fn first_pairwise_violation(
    blocks: &BlockSet,
    config: &StackConfiguration,
) -> Option<(usize, usize)> {
    let order = config.order();
    let mut above = Rational::zero();
    for k in 0..order.len() {
        let a = &blocks[order[k]];
        let checked = k > config.protruding() || (k == config.protruding() && k == 0);
        if checked && k + 1 < order.len() {
            let b = &blocks[order[k + 1]];
            let lhs = a.half_width() / (&above + a.mass());
            let rhs = b.half_width() / (&above + b.mass());
            if lhs < rhs {
                return Some((k, k + 1));
            }
        }
        above += a.mass();
    }
    None
}

pub fn satisfies_pairwise_condition(blocks: &BlockSet, config: &StackConfiguration) -> bool {
    first_pairwise_violation(blocks, config).is_none()
}

/// The block that is strictly wider than every other block and no heavier
/// than any, if one exists.
pub fn forced_protruding_block(blocks: &BlockSet) -> Option<usize> {
    let n = blocks.len();
    let widest = (0..n).max_by(|&a, &b| blocks[a].half_width().cmp(blocks[b].half_width()))?;
    let w = blocks[widest].half_width();
    let m = blocks[widest].mass();
    (0..n)
        .filter(|&j| j != widest)
        .all(|j| blocks[j].half_width() < w && m <= blocks[j].mass())
        .then_some(widest)
}

/// Depth-first search that fills positions from the bottom up. The block
/// placed in the current slot always has exactly the unplaced blocks (and
/// the load) above it, so its contribution is final when it is placed.
struct Search<'a> {
    blocks: &'a BlockSet,
    load: Rational,
    allow_counterbalancing: bool,
    pruning: Pruning,
    /// Blocks with equal width and mass share a class.
    class: Vec<usize>,
    /// `never_below[a][b]`: block `a` must not sit directly under block `b`.
    never_below: Vec<Vec<bool>>,
    forced: Option<usize>,
    /// Upper bound on each block's right-aligned contribution.
    caps: Vec<Rational>,
    two: Rational,

    placed: Vec<usize>,
    unplaced: Vec<bool>,
    unplaced_mass: Rational,
    unplaced_caps: Rational,
    best: Option<Candidate>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(
        blocks: &'a BlockSet,
        load: Rational,
        allow_counterbalancing: bool,
        pruning: Pruning,
    ) -> Self {
        let n = blocks.len();
        let mut classes: HashMap<&Block2, usize> = HashMap::new();
        let keys: Vec<Block2> = blocks
            .iter()
            .map(|b| (b.half_width().clone(), b.mass().clone()))
            .collect();
        let class = keys
            .iter()
            .map(|k| {
                let next = classes.len();
                *classes.entry(k).or_insert(next)
            })
            .collect();
        let never_below = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        a != b
                            && blocks[a].half_width() > blocks[b].half_width()
                            && blocks[a].ratio() > blocks[b].ratio()
                    })
                    .collect()
            })
            .collect();
        let caps: Vec<Rational> = blocks
            .iter()
            .map(|b| b.half_width() * b.mass() / (b.mass() + &load))
            .collect();
        let unplaced_caps = caps.iter().fold(Rational::zero(), |a, c| a + c);
        Search {
            blocks,
            allow_counterbalancing,
            pruning,
            class,
            never_below,
            forced: forced_protruding_block(blocks),
            caps,
            two: Rational::from_integer(2.into()),
            placed: Vec::with_capacity(n),
            unplaced: vec![true; n],
            unplaced_mass: blocks.total_mass(),
            unplaced_caps,
            best: None,
            nodes: 0,
            load,
        }
    }

    /// The ratio-heuristic order, with the best protruding position for it
    /// when counterweights are allowed.
    fn seed_candidate(&self) -> Candidate {
        let order = ratio_heuristic_order(self.blocks);
        if self.allow_counterbalancing {
            (0..order.len())
                .map(|p| Candidate {
                    value: overhang_unchecked(self.blocks, &order, p),
                    order: order.clone(),
                    protruding: p,
                })
                .reduce(|a, b| if b.beats(&a) { b } else { a })
                .expect("non-empty")
        } else {
            let mut mass = self.load.clone();
            let mut value = Rational::zero();
            for &i in &order {
                mass += self.blocks[i].mass();
                value += self.blocks[i].half_width() * self.blocks[i].mass() / &mass;
            }
            Candidate {
                value,
                order,
                protruding: 0,
            }
        }
    }

    fn run(&mut self, seed: Candidate) {
        self.best = Some(seed);
        self.descend(Rational::zero());
    }

    fn offer(&mut self, cand: Candidate) {
        if self.best.as_ref().is_none_or(|b| cand.beats(b)) {
            self.best = Some(cand);
        }
    }

    fn upper_bound(&self, value: &Rational, remaining: usize) -> Rational {
        let mut ub = value + &self.unplaced_caps;
        if self.allow_counterbalancing && remaining >= 2 {
            // protruding block: w (2 - m / M_p) <= w (2 - m / M)
            let extra = (0..self.blocks.len())
                .filter(|&i| self.unplaced[i])
                .map(|i| {
                    let b = &self.blocks[i];
                    b.half_width() * (Rational::one() - b.mass() / &self.unplaced_mass)
                })
                .max()
                .unwrap_or_else(Rational::zero);
            ub += extra;
        }
        ub
    }

    /// Whether block `i` may sit directly on the block placed last, with
    /// `mass_above` resting on `i`.
    fn fits_on_previous(&self, i: usize, mass_above: &Rational) -> bool {
        let Some(&below) = self.placed.last() else {
            return true;
        };
        if self.pruning.dominance && self.never_below[below][i] {
            return false;
        }
        if self.pruning.pairwise {
            let a = &self.blocks[i];
            let b = &self.blocks[below];
            let lhs = a.half_width() / (mass_above + a.mass());
            let rhs = b.half_width() / (mass_above + b.mass());
            if lhs < rhs {
                return false;
            }
        }
        true
    }

    fn is_canonical_pick(&self, i: usize) -> bool {
        if !self.pruning.symmetry {
            return true;
        }
        // identical blocks are placed from the highest index downwards, so
        // they read in increasing index order from the top
        !(i + 1..self.blocks.len()).any(|j| self.unplaced[j] && self.class[j] == self.class[i])
    }

    fn leaf(&mut self, protruding_block: usize, value: Rational) {
        let mut order: Vec<usize> = (0..self.blocks.len())
            .filter(|&j| self.unplaced[j] && j != protruding_block)
            .collect();
        let p = order.len();
        order.push(protruding_block);
        order.extend(self.placed.iter().rev());
        self.offer(Candidate {
            value,
            order,
            protruding: p,
        });
    }

    fn descend(&mut self, value: Rational) {
        self.nodes += 1;
        let remaining = self.unplaced.iter().filter(|&&u| u).count();
        if self.pruning.bound {
            if let Some(best) = &self.best {
                if self.upper_bound(&value, remaining) < best.value {
                    return;
                }
            }
        }
        let slot_mass = &self.unplaced_mass + &self.load;
        for i in 0..self.blocks.len() {
            if !self.unplaced[i] || !self.is_canonical_pick(i) {
                continue;
            }
            let b = &self.blocks[i];
            let mass_above = &slot_mass - b.mass();
            let forced_elsewhere =
                self.pruning.forced_protruding && self.forced.is_some_and(|f| f != i);
            let is_forced = self.pruning.forced_protruding && self.forced == Some(i);

            if remaining == 1 {
                // top of the stack; right-aligned and protruding coincide
                if !forced_elsewhere && self.fits_on_previous(i, &mass_above) {
                    let gain = b.half_width() * b.mass() / &slot_mass;
                    self.leaf(i, &value + gain);
                }
                continue;
            }

            if self.allow_counterbalancing && !forced_elsewhere {
                let gain = b.half_width() * (&self.two - b.mass() / &slot_mass);
                self.leaf(i, &value + gain);
            }

            if !is_forced && self.fits_on_previous(i, &mass_above) {
                let gain = b.half_width() * b.mass() / &slot_mass;
                let child = &value + gain;
                self.unplaced[i] = false;
                self.unplaced_mass -= self.blocks[i].mass();
                self.unplaced_caps -= &self.caps[i];
                self.placed.push(i);
                self.descend(child);
                self.placed.pop();
                self.unplaced_caps += &self.caps[i];
                self.unplaced_mass += self.blocks[i].mass();
                self.unplaced[i] = true;
            }
        }
    }
}

type Block2 = (Rational, Rational);

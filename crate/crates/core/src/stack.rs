//! Blocks, stack configurations and the overhang objectives.
//!
//! A stack is described top to bottom. Blocks above the protruding position
//! are counterweights; the protruding block and every block below it are
//! right-aligned, meaning the center of gravity of everything above a block
//! sits exactly on that block's right edge.

use crate::error::{Error, Result};
use crate::perm::check_permutation;
use crate::rational::Rational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    half_width: Rational,
    mass: Rational,
}

impl Block {
    pub fn new(half_width: Rational, mass: Rational) -> Result<Self> {
        if half_width.is_negative() {
            return Err(Error::invalid(format!(
                "half-width must be non-negative, got {half_width}"
            )));
        }
        if !mass.is_positive() {
            return Err(Error::invalid(format!("mass must be positive, got {mass}")));
        }
        Ok(Block { half_width, mass })
    }

    pub fn half_width(&self) -> &Rational {
        &self.half_width
    }

    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    /// Width-to-mass ratio `w / m`.
    pub fn ratio(&self) -> Rational {
        &self.half_width / &self.mass
    }
}

/// A non-empty, indexed collection of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSet {
    blocks: Vec<Block>,
}

impl BlockSet {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("a block set needs at least one block"));
        }
        Ok(BlockSet { blocks })
    }

    /// Builds a set from `(half_width, mass)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let blocks = pairs
            .into_iter()
            .map(|(w, m)| Block::new(w, m))
            .collect::<Result<Vec<_>>>()?;
        BlockSet::new(blocks)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn get(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Block> {
        self.blocks.iter()
    }

    pub fn total_mass(&self) -> Rational {
        self.blocks
            .iter()
            .fold(Rational::zero(), |acc, b| acc + &b.mass)
    }
}

impl std::ops::Index<usize> for BlockSet {
    type Output = Block;

    fn index(&self, i: usize) -> &Block {
        &self.blocks[i]
    }
}

/// A stacking order plus the position of the protruding block.
///
/// `order[k]` is the block at position `k` counted from the top, and
/// `protruding` is a position (not a block index). Positions `0..protruding`
/// hold counterweights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackConfiguration {
    order: Vec<usize>,
    protruding: usize,
}

impl StackConfiguration {
    pub fn new(order: Vec<usize>, protruding: usize) -> Result<Self> {
        check_permutation(&order, order.len())?;
        if order.is_empty() {
            return Err(Error::invalid("a configuration needs at least one block"));
        }
        if protruding >= order.len() {
            return Err(Error::invalid(format!(
                "protruding position {protruding} out of range for {} blocks",
                order.len()
            )));
        }
        Ok(StackConfiguration { order, protruding })
    }

    /// Fully right-aligned stack; the top block protrudes.
    pub fn right_aligned(order: Vec<usize>) -> Result<Self> {
        StackConfiguration::new(order, 0)
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn protruding(&self) -> usize {
        self.protruding
    }

    pub fn protruding_block(&self) -> usize {
        self.order[self.protruding]
    }

    pub fn counterweights(&self) -> &[usize] {
        &self.order[..self.protruding]
    }

    /// The protruding block and everything below it.
    pub fn right_aligned_blocks(&self) -> &[usize] {
        &self.order[self.protruding..]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check_for(&self, blocks: &BlockSet) -> Result<()> {
        if self.order.len() != blocks.len() {
            return Err(Error::invalid(format!(
                "configuration covers {} blocks but the set has {}",
                self.order.len(),
                blocks.len()
            )));
        }
        Ok(())
    }
}

/// Midpoint of every block, top to bottom, relative to the table edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedStack {
    pub positions: Vec<Rational>,
    /// `max_i (x_i + w_i)` over all blocks.
    pub overhang: Rational,
    /// Right edge of the protruding block.
    pub protruding_reach: Rational,
}

/// Cumulative masses `M_k` of positions `0..=k`, starting from `load`.
fn prefix_masses(blocks: &BlockSet, order: &[usize], load: &Rational) -> Vec<Rational> {
    let mut acc = load.clone();
    order
        .iter()
        .map(|&i| {
            acc += blocks[i].mass();
            acc.clone()
        })
        .collect()
}

/// Overhang reached by the protruding block when the stack is built as
/// far right as balance allows:
/// `w_p (2 - m_p / M_p) + sum over blocks i below p of w_i m_i / M_i`.
pub fn overhang_with_protruding(
    blocks: &BlockSet,
    config: &StackConfiguration,
) -> Result<Rational> {
    config.check_for(blocks)?;
    Ok(overhang_unchecked(
        blocks,
        config.order(),
        config.protruding(),
    ))
}

pub(crate) fn overhang_unchecked(
    blocks: &BlockSet,
    order: &[usize],
    protruding: usize,
) -> Rational {
    let masses = prefix_masses(blocks, order, &Rational::zero());
    let p = &blocks[order[protruding]];
    let two = Rational::from_integer(2.into());
    let mut total = p.half_width() * (two - p.mass() / &masses[protruding]);
    for k in protruding + 1..order.len() {
        let b = &blocks[order[k]];
        total += b.half_width() * b.mass() / &masses[k];
    }
    total
}

/// Overhang of the fully right-aligned stack: `sum_i w_i m_i / M_i`.
pub fn overhang_right_aligned(blocks: &BlockSet, order: &[usize]) -> Result<Rational> {
    overhang_right_aligned_loaded(blocks, order, &Rational::zero())
}

/// Right-aligned overhang with an extra mass `load` resting on top of the
/// stack. The load adds to every `M_i` but contributes no overhang itself.
pub fn overhang_right_aligned_loaded(
    blocks: &BlockSet,
    order: &[usize],
    load: &Rational,
) -> Result<Rational> {
    check_permutation(order, blocks.len())?;
    if load.is_negative() {
        return Err(Error::invalid("load must be non-negative"));
    }
    let masses = prefix_masses(blocks, order, load);
    Ok(order
        .iter()
        .zip(&masses)
        .fold(Rational::zero(), |acc, (&i, big_m)| {
            acc + blocks[i].half_width() * blocks[i].mass() / big_m
        }))
}

/// Places every block of `config` so that the stack is right-aligned from
/// the protruding block down, all counterweights sit concentrically at the
/// left edge of the protruding block, and the overall center of gravity is
/// exactly at the table edge.
pub fn realize(blocks: &BlockSet, config: &StackConfiguration) -> Result<RealizedStack> {
    config.check_for(blocks)?;
    let order = config.order();
    let p = config.protruding();
    let wp = blocks[order[p]].half_width().clone();

    // Provisional frame with the protruding block at 0.
    let mut positions = vec![Rational::zero(); order.len()];
    for x in positions.iter_mut().take(p) {
        *x = -wp.clone();
    }
    let mut mass_above = Rational::zero();
    let mut moment = Rational::zero();
    for (k, &i) in order.iter().enumerate() {
        let b = &blocks[i];
        if k > p {
            let center = &moment / &mass_above;
            positions[k] = center - b.half_width();
        }
        moment += b.mass() * &positions[k];
        mass_above += b.mass();
    }
    let shift = moment / mass_above;
    for x in positions.iter_mut() {
        *x -= &shift;
    }

    let overhang = order
        .iter()
        .zip(&positions)
        .map(|(&i, x)| x + blocks[i].half_width())
        .max()
        .expect("non-empty stack");
    let protruding_reach = &positions[p] + &wp;
    Ok(RealizedStack {
        positions,
        overhang,
        protruding_reach,
    })
}

/// The first balance condition a position vector breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceViolation {
    /// The center of gravity of positions `0..=above` lies outside the block
    /// at position `above + 1`.
    Interface {
        above: usize,
        center: Rational,
        left_edge: Rational,
        right_edge: Rational,
    },
    /// The whole stack's center of gravity is right of the table edge.
    Table { center: Rational },
}

impl std::fmt::Display for BalanceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::rational::format_rational as r;
        match self {
            BalanceViolation::Interface {
                above,
                center,
                left_edge,
                right_edge,
            } => write!(
                f,
                "interface {}: center of gravity {} of the top {} blocks is outside [{}, {}]",
                above + 1,
                r(center),
                above + 1,
                r(left_edge),
                r(right_edge)
            ),
            BalanceViolation::Table { center } => {
                write!(
                    f,
                    "table: overall center of gravity {} is right of the edge",
                    r(center)
                )
            }
        }
    }
}

/// Returns the first violated balance inequality, if any. Comparisons are
/// closed, so marginally balanced stacks pass.
pub fn find_balance_violation(
    blocks: &BlockSet,
    order: &[usize],
    positions: &[Rational],
) -> Result<Option<BalanceViolation>> {
    check_permutation(order, blocks.len())?;
    if positions.len() != order.len() {
        return Err(Error::invalid(format!(
            "{} positions given for {} blocks",
            positions.len(),
            order.len()
        )));
    }
    let mut mass = Rational::zero();
    let mut moment = Rational::zero();
    for k in 0..order.len() {
        let b = &blocks[order[k]];
        mass += b.mass();
        moment += b.mass() * &positions[k];
        let center = &moment / &mass;
        if k + 1 < order.len() {
            let below = &blocks[order[k + 1]];
            let left_edge = &positions[k + 1] - below.half_width();
            let right_edge = &positions[k + 1] + below.half_width();
            if center < left_edge || center > right_edge {
                return Ok(Some(BalanceViolation::Interface {
                    above: k,
                    center,
                    left_edge,
                    right_edge,
                }));
            }
        } else if center.is_positive() {
            return Ok(Some(BalanceViolation::Table { center }));
        }
    }
    Ok(None)
}

pub fn verify_balance(blocks: &BlockSet, order: &[usize], positions: &[Rational]) -> Result<bool> {
    Ok(find_balance_violation(blocks, order, positions)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn set(pairs: &[(i64, i64)]) -> BlockSet {
        BlockSet::from_pairs(pairs.iter().map(|&(w, m)| (int(w), int(m)))).unwrap()
    }

    fn two_block_example() -> BlockSet {
        // a = (w 1, m 2), b = (w 2, m 1)
        set(&[(1, 2), (2, 1)])
    }

    #[test]
    fn rejects_invalid_blocks() {
        assert!(Block::new(int(-1), int(1)).is_err());
        assert!(Block::new(int(1), int(0)).is_err());
        assert!(Block::new(int(0), int(1)).is_ok());
        assert!(BlockSet::new(vec![]).is_err());
    }

    #[test]
    fn rejects_invalid_configurations() {
        assert!(StackConfiguration::new(vec![0, 0], 0).is_err());
        assert!(StackConfiguration::new(vec![0, 1], 2).is_err());
        assert!(StackConfiguration::new(vec![], 0).is_err());
        let cfg = StackConfiguration::new(vec![1, 0, 2], 1).unwrap();
        assert_eq!(cfg.counterweights(), &[1]);
        assert_eq!(cfg.right_aligned_blocks(), &[0, 2]);
        assert_eq!(cfg.protruding_block(), 0);
        assert!(overhang_with_protruding(&two_block_example(), &cfg).is_err());
    }

    #[test]
    fn two_block_overhangs() {
        let blocks = two_block_example();
        let b_on_a = StackConfiguration::new(vec![1, 0], 0).unwrap();
        assert_eq!(
            overhang_with_protruding(&blocks, &b_on_a).unwrap(),
            frac(8, 3)
        );
        let a_counterweight = StackConfiguration::new(vec![0, 1], 1).unwrap();
        assert_eq!(
            overhang_with_protruding(&blocks, &a_counterweight).unwrap(),
            frac(10, 3)
        );
    }

    #[test]
    fn single_block() {
        let blocks = set(&[(5, 3)]);
        let cfg = StackConfiguration::right_aligned(vec![0]).unwrap();
        assert_eq!(overhang_with_protruding(&blocks, &cfg).unwrap(), int(5));
        let unit = set(&[(1, 1)]);
        let real = realize(&unit, &cfg).unwrap();
        assert_eq!(real.positions, vec![int(0)]);
        assert_eq!(real.overhang, int(1));
    }

    #[test]
    fn right_aligned_examples() {
        let identical = set(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(
            overhang_right_aligned(&identical, &[2, 0, 1]).unwrap(),
            frac(11, 6)
        );
        let ratio_trap = set(&[(11, 1), (21, 2), (33, 4)]);
        assert_eq!(
            overhang_right_aligned(&ratio_trap, &[0, 1, 2]).unwrap(),
            frac(307, 7)
        );
        assert_eq!(
            overhang_right_aligned(&ratio_trap, &[1, 2, 0]).unwrap(),
            frac(312, 7)
        );
    }

    #[test]
    fn loaded_overhang_adds_mass_on_top() {
        let blocks = set(&[(3, 1)]);
        let v = overhang_right_aligned_loaded(&blocks, &[0], &int(2)).unwrap();
        assert_eq!(v, int(1));
    }

    #[test]
    fn realize_two_identical_blocks() {
        let blocks = set(&[(1, 1), (1, 1)]);
        let cfg = StackConfiguration::right_aligned(vec![0, 1]).unwrap();
        let real = realize(&blocks, &cfg).unwrap();
        let (x1, x2) = (&real.positions[0], &real.positions[1]);
        assert_eq!(x1, &(x2 + int(1)));
        assert_eq!(x1 + x2, int(0));
        assert_eq!(real.overhang, frac(3, 2));
        assert!(verify_balance(&blocks, cfg.order(), &real.positions).unwrap());
    }

    #[test]
    fn realize_counterweight_example() {
        let blocks = two_block_example();
        let cfg = StackConfiguration::new(vec![0, 1], 1).unwrap();
        let real = realize(&blocks, &cfg).unwrap();
        assert_eq!(real.overhang, frac(10, 3));
        // counterweight centered on the protruding block's left edge
        assert_eq!(real.positions[0], &real.positions[1] - int(2));
        assert!(verify_balance(&blocks, cfg.order(), &real.positions).unwrap());
    }

    #[test]
    fn harmonic_positions_balance() {
        let blocks = set(&[(1, 1), (1, 1), (1, 1)]);
        // bottom centered so the overall center of gravity is at 0
        let positions = vec![frac(5, 6), frac(-1, 6), frac(-2, 3)];
        assert!(verify_balance(&blocks, &[0, 1, 2], &positions).unwrap());
    }

    #[test]
    fn shifted_top_block_topples() {
        let blocks = set(&[(1, 1), (1, 1)]);
        let eps = frac(1, 1000);
        let positions = vec![frac(1, 2) + &eps, frac(-1, 2)];
        let violation = find_balance_violation(&blocks, &[0, 1], &positions)
            .unwrap()
            .unwrap();
        assert!(matches!(
            violation,
            BalanceViolation::Interface { above: 0, .. }
        ));
        assert!(violation.to_string().starts_with("interface 1"));
    }

    #[test]
    fn center_of_gravity_right_of_table_fails() {
        let blocks = set(&[(1, 1)]);
        assert!(!verify_balance(&blocks, &[0], &[frac(1, 10)]).unwrap());
        assert!(verify_balance(&blocks, &[0], &[frac(-1, 10)]).unwrap());
    }

    #[test]
    fn balance_length_mismatch_is_an_error() {
        let blocks = set(&[(1, 1), (1, 1)]);
        assert!(verify_balance(&blocks, &[0, 1], &[int(0)]).is_err());
    }

    #[test]
    fn zero_width_blocks_are_allowed() {
        let blocks = set(&[(0, 5), (2, 1)]);
        let v = overhang_right_aligned(&blocks, &[1, 0]).unwrap();
        assert_eq!(v, int(2));
        let cfg = StackConfiguration::right_aligned(vec![1, 0]).unwrap();
        let real = realize(&blocks, &cfg).unwrap();
        assert!(verify_balance(&blocks, cfg.order(), &real.positions).unwrap());
    }

    #[test]
    fn wide_counterweight_can_reach_past_the_protruding_block() {
        // A counterweight wider than twice the protruding block sticks out.
        let blocks = set(&[(1, 2), (3, 1)]);
        let cfg = StackConfiguration::new(vec![1, 0], 1).unwrap();
        let real = realize(&blocks, &cfg).unwrap();
        assert_eq!(
            real.protruding_reach,
            overhang_with_protruding(&blocks, &cfg).unwrap()
        );
        assert!(real.overhang > real.protruding_reach);
    }

    fn arb_blocks(max_n: usize) -> impl Strategy<Value = BlockSet> {
        prop::collection::vec((0i64..20, 1i64..5, 1i64..20, 1i64..5), 1..=max_n).prop_map(|v| {
            BlockSet::from_pairs(
                v.into_iter()
                    .map(|(wn, wd, mn, md)| (frac(wn, wd), frac(mn, md))),
            )
            .unwrap()
        })
    }

    fn arb_config(max_n: usize) -> impl Strategy<Value = (BlockSet, StackConfiguration)> {
        arb_blocks(max_n).prop_flat_map(|blocks| {
            let n = blocks.len();
            (
                Just(blocks),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                0..n,
            )
                .prop_map(|(b, order, p)| (b, StackConfiguration::new(order, p).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn realize_is_balanced_and_reaches_objective((blocks, cfg) in arb_config(7)) {
            let real = realize(&blocks, &cfg).unwrap();
            let value = overhang_with_protruding(&blocks, &cfg).unwrap();
            prop_assert!(verify_balance(&blocks, cfg.order(), &real.positions).unwrap());
            prop_assert_eq!(&real.protruding_reach, &value);
            prop_assert!(real.overhang >= value.clone());
            let widest_cw = cfg.counterweights().iter().map(|&i| blocks[i].half_width().clone()).max();
            let wp = blocks[cfg.protruding_block()].half_width().clone();
            if widest_cw.is_none_or(|w| w <= wp.clone() + wp) {
                prop_assert_eq!(real.overhang, value);
            }
            // center of gravity exactly at the edge
            let mass = blocks.total_mass();
            let moment = cfg.order().iter().zip(&real.positions)
                .fold(Rational::zero(), |acc, (&i, x)| acc + blocks[i].mass() * x);
            prop_assert_eq!(moment / mass, Rational::zero());
        }

        #[test]
        fn right_aligned_is_protruding_on_top((blocks, cfg) in arb_config(7)) {
            let top = StackConfiguration::right_aligned(cfg.order().to_vec()).unwrap();
            prop_assert_eq!(
                overhang_right_aligned(&blocks, cfg.order()).unwrap(),
                overhang_with_protruding(&blocks, &top).unwrap()
            );
        }

        #[test]
        fn scale_invariance((blocks, cfg) in arb_config(6), sn in 1i64..9, sd in 1i64..9) {
            let s = frac(sn, sd);
            let base = overhang_with_protruding(&blocks, &cfg).unwrap();
            let heavier = BlockSet::from_pairs(
                blocks.iter().map(|b| (b.half_width().clone(), b.mass() * &s))).unwrap();
            prop_assert_eq!(overhang_with_protruding(&heavier, &cfg).unwrap(), base.clone());
            let wider = BlockSet::from_pairs(
                blocks.iter().map(|b| (b.half_width() * &s, b.mass().clone()))).unwrap();
            prop_assert_eq!(overhang_with_protruding(&wider, &cfg).unwrap(), base * s);
        }

        #[test]
        fn splitting_a_block_never_hurts(
            (blocks, cfg) in arb_config(6),
            pick in 0usize..6,
            cut_n in 1i64..10,
        ) {
            let k = pick % blocks.len();
            let order = cfg.order();
            let target = order[k];
            let cut = frac(cut_n, 10);
            let m = blocks[target].mass().clone();
            let upper_mass = &m * &cut;
            let lower_mass = &m - &upper_mass;
            let w = blocks[target].half_width().clone();
            let mut pairs: Vec<(Rational, Rational)> = blocks.iter()
                .map(|b| (b.half_width().clone(), b.mass().clone())).collect();
            pairs[target] = (w.clone(), upper_mass);
            pairs.push((w, lower_mass));
            let split = BlockSet::from_pairs(pairs).unwrap();
            let mut split_order = order.to_vec();
            split_order.insert(k + 1, blocks.len());
            prop_assert!(
                overhang_right_aligned(&split, &split_order).unwrap()
                    >= overhang_right_aligned(&blocks, order).unwrap()
            );
        }

        /// Pulling the top `i + 1` blocks left off alignment and then
        /// applying the compensating shift from the alignment argument keeps
        /// the stack balanced and gains overhang.
        #[test]
        fn alignment_shift_improves((blocks, cfg) in arb_config(6), pick in 0usize..6, frac_d in 1i64..10) {
            let n = blocks.len();
            prop_assume!(n >= 2);
            let p = cfg.protruding();
            prop_assume!(p < n - 1);
            let i = p + pick % (n - 1 - p);
            let order = cfg.order();
            let real = realize(&blocks, &cfg).unwrap();
            let below = &blocks[order[i + 1]];
            prop_assume!(below.half_width().is_positive());
            let reach = &real.positions[p] + blocks[order[p]].half_width();
            let gap = &reach - (&real.positions[i + 1] + below.half_width());
            prop_assume!(gap.is_positive());
            let d = below.half_width().clone().min(gap) * frac(frac_d, 10);

            let mut pulled = real.positions.clone();
            for x in pulled.iter_mut().take(i + 1) {
                *x -= &d;
            }
            prop_assume!(verify_balance(&blocks, order, &pulled).unwrap());

            let mass_top = order[..=i].iter().fold(Rational::zero(), |a, &j| a + blocks[j].mass());
            let m_next = below.mass().clone();
            // delta * m_next = eps * mass_top, both at most d / 2
            let half = &d / Rational::from_integer(2.into());
            let (delta, eps) = if &mass_top / &m_next <= Rational::from_integer(1.into()) {
                (&half * &mass_top / &m_next, half.clone())
            } else {
                (half.clone(), &half * &m_next / &mass_top)
            };
            let mut shifted = pulled.clone();
            for x in shifted.iter_mut().take(i + 1) {
                *x += &eps;
            }
            shifted[i + 1] -= &delta;
            prop_assert!(verify_balance(&blocks, order, &shifted).unwrap());
            let reach_of = |xs: &[Rational]| order.iter().zip(xs)
                .map(|(&j, x)| x + blocks[j].half_width()).max().unwrap();
            prop_assert!(reach_of(&shifted) > reach_of(&pulled));
        }
    }
}

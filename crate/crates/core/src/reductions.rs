//! Transformations between the problems.
//!
//! * Partition to counterbalanced stacking: `n` unit-width blocks with the
//!   Partition values as masses, plus two auxiliary blocks. Every optimal
//!   stack puts the light, very wide block `star` on the protruding position
//!   with the wide block `bullet` right under it; the mass above `star`
//!   equals half the total exactly when a perfect partition exists.
//! * Right-aligned stacking and airplane refueling: `c = m`, `v = w m` and
//!   back with `m = c`, `w = v / c`. A top-to-bottom stack order read
//!   bottom-up is the matching dropout order.

use crate::airplane::AirplaneFleet;
use crate::error::{Error, Result};
use crate::rational::{frac, int, Rational};
use crate::solvers::{exact_solve, SolveResult};
use crate::stack::{BlockSet, StackConfiguration};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionInstance {
    values: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid(
                "partition instance needs at least one value",
            ));
        }
        if values.contains(&0) {
            return Err(Error::invalid("partition values must be positive"));
        }
        Ok(PartitionInstance { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().sum()
    }

    /// Half the total, if the total is even.
    pub fn target(&self) -> Option<u64> {
        let s = self.sum();
        s.is_multiple_of(2).then_some(s / 2)
    }
}

/// Blocks `0..n` carry the Partition values; `bullet` and `star` are the two
/// auxiliary blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    blocks: BlockSet,
    target: u64,
    bullet: usize,
    star: usize,
}

impl GadgetInstance {
    pub fn blocks(&self) -> &BlockSet {
        &self.blocks
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn bullet(&self) -> usize {
        self.bullet
    }

    pub fn star(&self) -> usize {
        self.star
    }

    pub fn bullet_width(&self) -> &Rational {
        self.blocks[self.bullet].half_width()
    }

    pub fn star_width(&self) -> &Rational {
        self.blocks[self.star].half_width()
    }

    pub fn bullet_mass(&self) -> &Rational {
        self.blocks[self.bullet].mass()
    }

    pub fn star_mass(&self) -> &Rational {
        self.blocks[self.star].mass()
    }

    /// Number of value blocks.
    pub fn value_count(&self) -> usize {
        self.bullet
    }
}

/// `bullet`: mass 1, half-width `(2T + 5/4)^5`.
/// `star`: mass 1/4, half-width `4 w_bullet (1 - 1/(T + 5/4))^2`.
pub fn build_gadget(p: &PartitionInstance) -> Result<GadgetInstance> {
    let target = p.target().ok_or(Error::OddSum)?;
    let t = Rational::from_integer(BigInt::from(target));
    let five_quarters = frac(5, 4);
    let bullet_width = num_traits::pow(&t * int(2) + &five_quarters, 5);
    let shrink = Rational::one() - Rational::one() / (&t + &five_quarters);
    let star_width = int(4) * &bullet_width * &shrink * &shrink;

    let n = p.values.len();
    let mut pairs: Vec<(Rational, Rational)> = p
        .values
        .iter()
        .map(|&a| (int(1), Rational::from_integer(BigInt::from(a))))
        .collect();
    pairs.push((bullet_width, int(1)));
    pairs.push((star_width, frac(1, 4)));
    Ok(GadgetInstance {
        blocks: BlockSet::from_pairs(pairs)?,
        target,
        bullet: n,
        star: n + 1,
    })
}

/// `star` protrudes and `bullet` sits directly beneath it.
pub fn check_bullet_star_protruding(g: &GadgetInstance, result: &SolveResult) -> bool {
    is_bullet_star_protruding(g, &result.config)
}

pub fn is_bullet_star_protruding(g: &GadgetInstance, cfg: &StackConfiguration) -> bool {
    if cfg.len() != g.blocks.len() || cfg.protruding_block() != g.star {
        return false;
    }
    cfg.order().get(cfg.protruding() + 1) == Some(&g.bullet)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionVerdict {
    /// The values sum to an odd number; no reduction was attempted.
    OddSum,
    /// The optimal stack carries a counterweight other than `T`.
    NoPerfectPartition { counterweight: Rational },
    /// Value indices above `star` and below `bullet`; both sum to `T`.
    Perfect {
        counterweights: Vec<usize>,
        right_aligned: Vec<usize>,
    },
}

impl PartitionVerdict {
    pub fn is_perfect(&self) -> bool {
        matches!(self, PartitionVerdict::Perfect { .. })
    }
}

/// Decides Partition by solving the gadget with `solver`, which must return
/// an optimal counterbalanced configuration.
pub fn decide_partition_via_bsp<F>(p: &PartitionInstance, solver: F) -> Result<PartitionVerdict>
where
    F: FnOnce(&BlockSet) -> Result<SolveResult>,
{
    if p.target().is_none() {
        return Ok(PartitionVerdict::OddSum);
    }
    let g = build_gadget(p)?;
    let res = solver(&g.blocks)?;
    let cfg = &res.config;
    let counterweight = cfg
        .counterweights()
        .iter()
        .fold(Rational::zero(), |acc, &i| acc + g.blocks[i].mass());
    if counterweight != Rational::from_integer(BigInt::from(g.target)) {
        return Ok(PartitionVerdict::NoPerfectPartition { counterweight });
    }
    let counterweights: Vec<usize> = cfg
        .counterweights()
        .iter()
        .copied()
        .filter(|&i| i < g.value_count())
        .collect();
    let right_aligned = cfg
        .right_aligned_blocks()
        .iter()
        .copied()
        .filter(|&i| i < g.value_count())
        .collect();
    Ok(PartitionVerdict::Perfect {
        counterweights,
        right_aligned,
    })
}

/// [`decide_partition_via_bsp`] with the branch-and-bound solver.
pub fn decide_partition(p: &PartitionInstance) -> Result<PartitionVerdict> {
    decide_partition_via_bsp(p, |blocks| Ok(exact_solve(blocks, true)))
}

fn check_counterweight(g: &GadgetInstance, c: u64) -> Result<()> {
    if c > 2 * g.target {
        return Err(Error::invalid(format!(
            "counterweight mass {c} out of range 0..={}",
            2 * g.target
        )));
    }
    Ok(())
}

/// Overhang of `star` and `bullet` when `star` carries counterweight `c`.
fn auxiliary_part(g: &GadgetInstance, c: &Rational) -> Rational {
    let (ws, ms) = (g.star_width(), g.star_mass());
    let (wb, mb) = (g.bullet_width(), g.bullet_mass());
    ws * (int(2) - ms / (c + ms)) + wb * mb / (c + ms + mb)
}

/// Largest overhang of a bullet-star stack with counterweight `c`: the
/// right-aligned mass `2T - c` split into unit blocks.
pub fn omax(g: &GadgetInstance, c: u64) -> Result<Rational> {
    check_counterweight(g, c)?;
    let cr = Rational::from_integer(BigInt::from(c));
    let base = &cr + g.star_mass() + g.bullet_mass();
    let harmonic = (1..=2 * g.target - c).fold(Rational::zero(), |acc, i| {
        acc + Rational::one() / (&base + Rational::from_integer(BigInt::from(i)))
    });
    Ok(auxiliary_part(g, &cr) + harmonic)
}

/// Smallest overhang of a bullet-star stack with counterweight `c`: a single
/// block of mass `2T - c` under `bullet`.
pub fn omin(g: &GadgetInstance, c: u64) -> Result<Rational> {
    check_counterweight(g, c)?;
    let cr = Rational::from_integer(BigInt::from(c));
    let two_t = Rational::from_integer(BigInt::from(2 * g.target));
    let rest = (&two_t - &cr) / (&two_t + g.star_mass() + g.bullet_mass());
    Ok(auxiliary_part(g, &cr) + rest)
}

pub fn bsp_to_ar(blocks: &BlockSet) -> AirplaneFleet {
    AirplaneFleet::from_pairs(
        blocks
            .iter()
            .map(|b| (b.half_width() * b.mass(), b.mass().clone())),
    )
    .expect("blocks map to valid airplanes")
}

pub fn ar_to_bsp(fleet: &AirplaneFleet) -> BlockSet {
    BlockSet::from_pairs(fleet.planes().iter().map(|p| {
        (
            p.tank_volume() / p.consumption_rate(),
            p.consumption_rate().clone(),
        )
    }))
    .expect("airplanes map to valid blocks")
}

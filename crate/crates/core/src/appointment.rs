//! Robust appointment scheduling.
//!
//! Each job has a processing-time interval `[p_low, p_high]` and a per-unit
//! overage cost; idle time costs `u` per unit for every job. For a fixed
//! processing order the optimal allocations and the worst-case cost have
//! closed forms, and minimizing that cost is the same as maximizing
//! `sum_i delta_i / (u + O_i)`, where `O_i` sums the overage costs of job `i`
//! and every job after it.

use crate::airplane::{
    self, auxiliary_tank_volume, fleet_range, Airplane, AirplaneFleet, ArSolution, DropoutOrder,
};
use crate::error::{Error, Result};
use crate::perm::{check_permutation, reversed};
use crate::rational::Rational;
use crate::solvers::{exact_solve_loaded, oracle_solve_loaded, Pruning, DEFAULT_ORACLE_CAP};
use crate::stack::BlockSet;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Job {
    p_low: Rational,
    p_high: Rational,
    overage_cost: Rational,
}

impl Job {
    pub fn new(p_low: Rational, p_high: Rational, overage_cost: Rational) -> Result<Self> {
        if p_low.is_negative() {
            return Err(Error::invalid(
                "processing time lower bound must be non-negative",
            ));
        }
        if p_high < p_low {
            return Err(Error::invalid(format!(
                "processing interval [{p_low}, {p_high}] is empty"
            )));
        }
        if !overage_cost.is_positive() {
            return Err(Error::invalid("overage cost must be positive"));
        }
        Ok(Job {
            p_low,
            p_high,
            overage_cost,
        })
    }

    pub fn p_low(&self) -> &Rational {
        &self.p_low
    }

    pub fn p_high(&self) -> &Rational {
        &self.p_high
    }

    pub fn overage_cost(&self) -> &Rational {
        &self.overage_cost
    }

    /// Width of the processing interval.
    pub fn delta(&self) -> Rational {
        &self.p_high - &self.p_low
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScheduleInstance {
    jobs: Vec<Job>,
    underutilization_cost: Rational,
}

impl ScheduleInstance {
    pub fn new(jobs: Vec<Job>, underutilization_cost: Rational) -> Result<Self> {
        if jobs.is_empty() {
            return Err(Error::invalid("a schedule needs at least one job"));
        }
        if !underutilization_cost.is_positive() {
            return Err(Error::invalid("underutilization cost must be positive"));
        }
        Ok(ScheduleInstance {
            jobs,
            underutilization_cost,
        })
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn underutilization_cost(&self) -> &Rational {
        &self.underutilization_cost
    }

    pub fn is_trivial(&self) -> bool {
        self.jobs.iter().all(|j| j.p_low == j.p_high)
    }

    /// The stacking instance with `w = delta / o` and `m = o`; the shift `u`
    /// becomes a load on top of the stack.
    fn as_blocks(&self) -> BlockSet {
        BlockSet::from_pairs(
            self.jobs
                .iter()
                .map(|j| (j.delta() / &j.overage_cost, j.overage_cost.clone())),
        )
        .expect("jobs map to valid blocks")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    /// Processing order, first job first.
    pub order: Vec<usize>,
    /// Allocated time `t_i`, indexed by job.
    pub allocations: Vec<Rational>,
    pub worst_case_cost: Rational,
}

/// Suffix sums `O_i` of overage costs, indexed by job.
fn overage_suffixes(inst: &ScheduleInstance, order: &[usize]) -> Result<Vec<Rational>> {
    check_permutation(order, inst.len())?;
    let mut sums = vec![Rational::zero(); inst.len()];
    let mut acc = Rational::zero();
    for &i in order.iter().rev() {
        acc += &inst.jobs[i].overage_cost;
        sums[i] = acc.clone();
    }
    Ok(sums)
}

/// `t_i = (u p_low + O_i p_high) / (u + O_i)`, indexed by job.
pub fn allocations_for_order(inst: &ScheduleInstance, order: &[usize]) -> Result<Vec<Rational>> {
    let u = &inst.underutilization_cost;
    Ok(overage_suffixes(inst, order)?
        .iter()
        .zip(&inst.jobs)
        .map(|(o, j)| (u * &j.p_low + o * &j.p_high) / (u + o))
        .collect())
}

/// `sum_i delta_i u O_i / (u + O_i)`.
pub fn worst_case_cost(inst: &ScheduleInstance, order: &[usize]) -> Result<Rational> {
    let u = &inst.underutilization_cost;
    Ok(overage_suffixes(inst, order)?
        .iter()
        .zip(&inst.jobs)
        .fold(Rational::zero(), |acc, (o, j)| {
            acc + j.delta() * u * o / (u + o)
        }))
}

/// `sum_i delta_i / (u + O_i)`.
pub fn shifted_objective(inst: &ScheduleInstance, order: &[usize]) -> Result<Rational> {
    let u = &inst.underutilization_cost;
    Ok(overage_suffixes(inst, order)?
        .iter()
        .zip(&inst.jobs)
        .fold(Rational::zero(), |acc, (o, j)| acc + j.delta() / (u + o)))
}

pub fn schedule_for_order(inst: &ScheduleInstance, order: Vec<usize>) -> Result<Schedule> {
    let allocations = allocations_for_order(inst, &order)?;
    let worst_case_cost = worst_case_cost(inst, &order)?;
    Ok(Schedule {
        order,
        allocations,
        worst_case_cost,
    })
}

/// Order maximizing the shifted objective. Solved as a right-aligned stack
/// with `u` resting on top; the processing order reads the stack bottom-up.
pub fn optimal_shifted_order(
    inst: &ScheduleInstance,
    method: airplane::Method,
) -> Result<Vec<usize>> {
    let blocks = inst.as_blocks();
    let sol = match method {
        airplane::Method::Oracle => {
            oracle_solve_loaded(&blocks, &inst.underutilization_cost, DEFAULT_ORACLE_CAP)?
        }
        airplane::Method::Exact => {
            exact_solve_loaded(&blocks, &inst.underutilization_cost, Pruning::ALL)?
        }
    };
    Ok(reversed(&sol.order))
}

/// Minimum worst-case-cost schedule.
pub fn solve_ras(inst: &ScheduleInstance, method: airplane::Method) -> Result<Schedule> {
    let order = optimal_shifted_order(inst, method)?;
    schedule_for_order(inst, order)
}

/// Result of turning a scheduling instance into an airplane fleet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RasReduction {
    /// Every interval is a single point; any order costs nothing.
    Trivial,
    /// Planes `v_i = delta_i`, `c_i = o_i`, followed by the auxiliary plane
    /// with `c = u` whose tank forces it to drop last.
    Fleet {
        fleet: AirplaneFleet,
        auxiliary: usize,
    },
}

pub fn ras_to_ar(inst: &ScheduleInstance) -> Result<RasReduction> {
    if inst.is_trivial() {
        return Ok(RasReduction::Trivial);
    }
    let mut fleet = AirplaneFleet::from_pairs(
        inst.jobs
            .iter()
            .map(|j| (j.delta(), j.overage_cost.clone())),
    )?;
    let c_star = inst.underutilization_cost.clone();
    let v_star = auxiliary_tank_volume(&fleet, &c_star)?;
    fleet.push(Airplane::new(v_star, c_star)?);
    let auxiliary = inst.len();
    Ok(RasReduction::Fleet { fleet, auxiliary })
}

/// Solves the scheduling instance through the airplane reduction: the
/// dropout order of the augmented fleet, minus the auxiliary plane, is the
/// processing order.
pub fn solve_ras_via_ar(inst: &ScheduleInstance, method: airplane::Method) -> Result<Schedule> {
    match ras_to_ar(inst)? {
        RasReduction::Trivial => schedule_for_order(inst, (0..inst.len()).collect()),
        RasReduction::Fleet { fleet, auxiliary } => {
            let sol = airplane::solve_ar(&fleet, method)?;
            if sol.order.last() != auxiliary {
                return Err(Error::invalid("auxiliary airplane was not dropped last"));
            }
            let order = sol
                .order
                .sequence()
                .iter()
                .copied()
                .filter(|&i| i != auxiliary)
                .collect();
            schedule_for_order(inst, order)
        }
    }
}

/// Solves airplane refueling with a solver for the shifted scheduling
/// objective. Each plane in turn is assumed to drop last and its rate acts
/// as the shift `u` for the remaining planes; the best of these candidates
/// wins (earliest plane on ties).
pub fn ar_to_ras_solve<F>(fleet: &AirplaneFleet, mut ras_solver: F) -> Result<ArSolution>
where
    F: FnMut(&ScheduleInstance) -> Result<Vec<usize>>,
{
    let n = fleet.len();
    if n == 1 {
        let order = DropoutOrder::new(vec![0], 1)?;
        let range = fleet_range(fleet, &order)?;
        return Ok(ArSolution {
            order,
            range,
            nodes_explored: 1,
        });
    }
    let mut best: Option<(Rational, DropoutOrder)> = None;
    for last in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != last).collect();
        let jobs = others
            .iter()
            .map(|&i| {
                let p = &fleet[i];
                Job::new(
                    Rational::zero(),
                    p.tank_volume().clone(),
                    p.consumption_rate().clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let inst = ScheduleInstance::new(jobs, fleet[last].consumption_rate().clone())?;
        let local = ras_solver(&inst)?;
        check_permutation(&local, others.len())?;
        let mut seq: Vec<usize> = local.iter().map(|&k| others[k]).collect();
        seq.push(last);
        let order = DropoutOrder::new(seq, n)?;
        let range = fleet_range(fleet, &order)?;
        if best.as_ref().is_none_or(|(b, _)| range > *b) {
            best = Some((range, order));
        }
    }
    let (range, order) = best.expect("at least one candidate");
    Ok(ArSolution {
        order,
        range,
        nodes_explored: n as u64,
    })
}

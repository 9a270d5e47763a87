//! Airplane refueling: a fleet shares fuel in flight and planes drop out one
//! at a time. A plane leaves as soon as the others can hold all remaining
//! fuel, which makes the range a closed-form function of the dropout order.

use crate::error::{Error, Result};
use crate::perm::{check_permutation, reversed};
use crate::rational::Rational;
use crate::reductions::ar_to_bsp;
use crate::solvers::{exact_solve, oracle_solve};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Airplane {
    tank_volume: Rational,
    consumption_rate: Rational,
}

impl Airplane {
    pub fn new(tank_volume: Rational, consumption_rate: Rational) -> Result<Self> {
        if tank_volume.is_negative() {
            return Err(Error::invalid(format!(
                "tank volume must be non-negative, got {tank_volume}"
            )));
        }
        if !consumption_rate.is_positive() {
            return Err(Error::invalid(format!(
                "consumption rate must be positive, got {consumption_rate}"
            )));
        }
        Ok(Airplane {
            tank_volume,
            consumption_rate,
        })
    }

    pub fn tank_volume(&self) -> &Rational {
        &self.tank_volume
    }

    pub fn consumption_rate(&self) -> &Rational {
        &self.consumption_rate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AirplaneFleet {
    planes: Vec<Airplane>,
}

impl AirplaneFleet {
    pub fn new(planes: Vec<Airplane>) -> Result<Self> {
        if planes.is_empty() {
            return Err(Error::invalid("a fleet needs at least one airplane"));
        }
        Ok(AirplaneFleet { planes })
    }

    /// Builds a fleet from `(tank_volume, consumption_rate)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let planes = pairs
            .into_iter()
            .map(|(v, c)| Airplane::new(v, c))
            .collect::<Result<Vec<_>>>()?;
        AirplaneFleet::new(planes)
    }

    pub fn planes(&self) -> &[Airplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn push(&mut self, plane: Airplane) {
        self.planes.push(plane);
    }
}

impl std::ops::Index<usize> for AirplaneFleet {
    type Output = Airplane;

    fn index(&self, i: usize) -> &Airplane {
        &self.planes[i]
    }
}

/// Planes listed in the order they drop out, first to leave first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DropoutOrder(Vec<usize>);

impl DropoutOrder {
    pub fn new(sequence: Vec<usize>, n: usize) -> Result<Self> {
        check_permutation(&sequence, n)?;
        Ok(DropoutOrder(sequence))
    }

    pub fn sequence(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("non-empty order")
    }
}

fn check_order(fleet: &AirplaneFleet, order: &DropoutOrder) -> Result<()> {
    check_permutation(order.sequence(), fleet.len())
}

/// Combined consumption `C_k` of the planes still flying when the plane at
/// position `k` drops, i.e. the suffix sums of consumption rates.
fn flying_rates(fleet: &AirplaneFleet, order: &[usize]) -> Vec<Rational> {
    let mut acc = Rational::zero();
    let mut rates: Vec<Rational> = order
        .iter()
        .rev()
        .map(|&i| {
            acc += fleet[i].consumption_rate();
            acc.clone()
        })
        .collect();
    rates.reverse();
    rates
}

/// Range of the fleet: `sum_k v_{s(k)} / (c_{s(k)} + ... + c_{s(n)})`.
pub fn fleet_range(fleet: &AirplaneFleet, order: &DropoutOrder) -> Result<Rational> {
    check_order(fleet, order)?;
    let seq = order.sequence();
    Ok(seq
        .iter()
        .zip(flying_rates(fleet, seq))
        .fold(Rational::zero(), |acc, (&i, rate)| {
            acc + fleet[i].tank_volume() / rate
        }))
}

fn efficiency(plane: &Airplane, x: &Rational) -> Rational {
    let c = plane.consumption_rate();
    plane.tank_volume() / (c * (x + c))
}

/// Position `k` of the first adjacent pair that fails the necessary
/// optimality condition `f_k(C_{k+1}) >= f_{k-1}(C_{k+1})` with
/// `f(x) = v / (c (x + c))`, where the plane at `k` drops right after the
/// one at `k - 1`.
pub fn first_dropout_violation(
    fleet: &AirplaneFleet,
    order: &DropoutOrder,
) -> Result<Option<usize>> {
    check_order(fleet, order)?;
    let seq = order.sequence();
    let rates = flying_rates(fleet, seq);
    for k in 1..seq.len() {
        let after = rates.get(k + 1).cloned().unwrap_or_else(Rational::zero);
        if efficiency(&fleet[seq[k]], &after) < efficiency(&fleet[seq[k - 1]], &after) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn check_dropout_condition(fleet: &AirplaneFleet, order: &DropoutOrder) -> Result<bool> {
    Ok(first_dropout_violation(fleet, order)?.is_none())
}

/// Tank volume that forces an added plane with consumption `c_star` to be
/// dropped last in every optimal order:
/// `v* = c* max_j v_j / c_min^2 * (c* + sum_j c_j)`, `c_min = min(c*, c_j)`.
pub fn auxiliary_tank_volume(fleet: &AirplaneFleet, c_star: &Rational) -> Result<Rational> {
    if !c_star.is_positive() {
        return Err(Error::invalid(
            "auxiliary consumption rate must be positive",
        ));
    }
    let max_volume = fleet
        .planes()
        .iter()
        .map(|p| p.tank_volume())
        .max()
        .expect("non-empty fleet");
    if max_volume.is_zero() {
        return Err(Error::ZeroTankVolumes);
    }
    let c_min = fleet
        .planes()
        .iter()
        .map(|p| p.consumption_rate())
        .chain(std::iter::once(c_star))
        .min()
        .expect("non-empty");
    let total_rate = fleet
        .planes()
        .iter()
        .fold(c_star.clone(), |acc, p| acc + p.consumption_rate());
    Ok(c_star * max_volume / (c_min * c_min) * total_rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oracle,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArSolution {
    pub order: DropoutOrder,
    pub range: Rational,
    pub nodes_explored: u64,
}

/// Optimal dropout order, found by solving the equivalent right-aligned
/// stacking problem (`w = v / c`, `m = c`) and reading the stack bottom-up.
pub fn solve_ar(fleet: &AirplaneFleet, method: Method) -> Result<ArSolution> {
    let blocks = ar_to_bsp(fleet);
    let res = match method {
        Method::Oracle => oracle_solve(&blocks, false)?,
        Method::Exact => exact_solve(&blocks, false),
    };
    let order = DropoutOrder::new(reversed(res.config.order()), fleet.len())?;
    Ok(ArSolution {
        order,
        range: res.overhang,
        nodes_explored: res.nodes_explored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::for_each_permutation;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn fleet(pairs: &[(i64, i64)]) -> AirplaneFleet {
        AirplaneFleet::from_pairs(pairs.iter().map(|&(v, c)| (int(v), int(c)))).unwrap()
    }

    fn order(seq: &[usize], n: usize) -> DropoutOrder {
        DropoutOrder::new(seq.to_vec(), n).unwrap()
    }

    #[test]
    fn rejects_invalid_planes() {
        assert!(Airplane::new(int(-1), int(1)).is_err());
        assert!(Airplane::new(int(1), int(0)).is_err());
        assert!(AirplaneFleet::new(vec![]).is_err());
        assert!(DropoutOrder::new(vec![0, 0], 2).is_err());
    }

    #[test]
    fn range_examples() {
        assert_eq!(
            fleet_range(&fleet(&[(10, 2)]), &order(&[0], 1)).unwrap(),
            int(5)
        );
        assert_eq!(
            fleet_range(&fleet(&[(1, 1), (1, 1)]), &order(&[0, 1], 2)).unwrap(),
            frac(3, 2)
        );
        assert!(fleet_range(&fleet(&[(1, 1)]), &order(&[0, 1], 2)).is_err());
    }

    #[test]
    fn dropout_condition_examples() {
        assert!(check_dropout_condition(&fleet(&[(3, 2)]), &order(&[0], 1)).unwrap());
        let f = fleet(&[(1, 1), (100, 1)]);
        // dropping the big tank first wastes it
        assert!(!check_dropout_condition(&f, &order(&[1, 0], 2)).unwrap());
        assert!(check_dropout_condition(&f, &order(&[0, 1], 2)).unwrap());
        assert!(
            fleet_range(&f, &order(&[1, 0], 2)).unwrap()
                < fleet_range(&f, &order(&[0, 1], 2)).unwrap()
        );
    }

    #[test]
    fn auxiliary_volume_examples() {
        assert_eq!(
            auxiliary_tank_volume(&fleet(&[(1, 1)]), &int(1)).unwrap(),
            int(2)
        );
        assert_eq!(
            auxiliary_tank_volume(&fleet(&[(4, 2), (1, 1)]), &frac(1, 2)).unwrap(),
            int(28)
        );
        assert_eq!(
            auxiliary_tank_volume(&fleet(&[(0, 1), (0, 3)]), &int(1)).unwrap_err(),
            Error::ZeroTankVolumes
        );
        assert!(auxiliary_tank_volume(&fleet(&[(1, 1)]), &int(0)).is_err());
    }

    #[test]
    fn harmonic_fleet() {
        let f = fleet(&[(1, 1), (1, 1), (1, 1), (1, 1)]);
        let sol = solve_ar(&f, Method::Exact).unwrap();
        assert_eq!(sol.range, frac(25, 12));
        assert_eq!(solve_ar(&f, Method::Oracle).unwrap().range, frac(25, 12));
    }

    #[test]
    fn two_plane_mapped_example() {
        // blocks (w 1, m 2) and (w 2, m 1) map to planes (v 2, c 2), (v 2, c 1)
        let f = fleet(&[(2, 2), (2, 1)]);
        let sol = solve_ar(&f, Method::Exact).unwrap();
        assert_eq!(sol.range, frac(8, 3));
        assert_eq!(sol.order.sequence(), &[0, 1]);
    }

    fn brute_force_best(f: &AirplaneFleet) -> (Rational, Vec<Vec<usize>>) {
        let mut best: Option<Rational> = None;
        let mut argmax = Vec::new();
        for_each_permutation(f.len(), |seq| {
            let r = seq
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    let rate = seq[k..]
                        .iter()
                        .fold(Rational::zero(), |a, &j| a + f[j].consumption_rate());
                    f[i].tank_volume() / rate
                })
                .fold(Rational::zero(), |a, x| a + x);
            match &best {
                Some(b) if r < *b => {}
                Some(b) if r == *b => argmax.push(seq.to_vec()),
                _ => {
                    best = Some(r);
                    argmax = vec![seq.to_vec()];
                }
            }
        });
        (best.unwrap(), argmax)
    }

    fn arb_fleet(max_n: usize) -> impl Strategy<Value = AirplaneFleet> {
        prop::collection::vec((0i64..15, 1i64..4, 1i64..10, 1i64..4), 1..=max_n).prop_map(|v| {
            AirplaneFleet::from_pairs(v.into_iter().map(|(a, b, c, d)| (frac(a, b), frac(c, d))))
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn solver_matches_brute_force(f in arb_fleet(6)) {
            let (best, argmax) = brute_force_best(&f);
            for method in [Method::Oracle, Method::Exact] {
                let sol = solve_ar(&f, method).unwrap();
                prop_assert_eq!(&sol.range, &best);
                prop_assert_eq!(fleet_range(&f, &sol.order).unwrap(), best.clone());
            }
            for seq in argmax {
                prop_assert!(check_dropout_condition(&f, &order(&seq, f.len())).unwrap());
            }
        }

        #[test]
        fn auxiliary_plane_drops_last(f in arb_fleet(5), cn in 1i64..10, cd in 1i64..4) {
            prop_assume!(f.planes().iter().any(|p| !p.tank_volume().is_zero()));
            let c_star = frac(cn, cd);
            let v_star = auxiliary_tank_volume(&f, &c_star).unwrap();
            let mut augmented = f.clone();
            augmented.push(Airplane::new(v_star, c_star).unwrap());
            let aux = f.len();
            let (_, argmax) = brute_force_best(&augmented);
            for seq in argmax {
                prop_assert_eq!(*seq.last().unwrap(), aux);
            }
        }
    }
}

//! JSON instance and configuration files.
//!
//! Every number is written as a string in canonical form (`"7"`, `"-3/4"`).
//! On input, strings may also be finite decimals (`"0.125"`) and plain JSON
//! integers are accepted; both convert exactly. Indices in files are
//! one-based.

use crate::airplane::AirplaneFleet;
use crate::appointment::{Job, ScheduleInstance};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reductions::PartitionInstance;
use crate::stack::BlockSet;
use serde::{Deserialize, Serialize};
use std::fmt;

mod exact {
    use super::*;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("an integer or a string holding an exact fraction or decimal")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            Err(E::custom(format!(
                "floating-point literal {v} is not exact; quote it as a string"
            )))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub mod list {
        use super::*;
        use serde::ser::SerializeSeq;

        #[derive(Deserialize)]
        struct Wrapped(#[serde(with = "super")] Rational);

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v: Vec<Wrapped> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|w| w.0).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    #[serde(with = "exact")]
    pub half_width: Rational,
    #[serde(with = "exact")]
    pub mass: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneEntry {
    #[serde(with = "exact")]
    pub tank_volume: Rational,
    #[serde(with = "exact")]
    pub consumption_rate: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobEntry {
    #[serde(with = "exact")]
    pub p_low: Rational,
    #[serde(with = "exact")]
    pub p_high: Rational,
    #[serde(with = "exact")]
    pub overage_cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceFile {
    Bsp {
        blocks: Vec<BlockEntry>,
    },
    Ar {
        planes: Vec<PlaneEntry>,
        /// One-based index of an auxiliary plane added by a reduction.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        auxiliary: Option<usize>,
    },
    Ras {
        #[serde(with = "exact")]
        underutilization_cost: Rational,
        jobs: Vec<JobEntry>,
    },
    Partition {
        values: Vec<u64>,
    },
}

/// A parsed and validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Bsp(BlockSet),
    Ar {
        fleet: AirplaneFleet,
        auxiliary: Option<usize>,
    },
    Ras(ScheduleInstance),
    Partition(PartitionInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Bsp(_) => "bsp",
            Instance::Ar { .. } => "ar",
            Instance::Ras(_) => "ras",
            Instance::Partition(_) => "partition",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<crate::Error> for FormatError {
    fn from(e: crate::Error) -> Self {
        FormatError(e.to_string())
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = FormatError;

    fn try_from(file: InstanceFile) -> Result<Self, FormatError> {
        Ok(match file {
            InstanceFile::Bsp { blocks } => Instance::Bsp(BlockSet::from_pairs(
                blocks.into_iter().map(|b| (b.half_width, b.mass)),
            )?),
            InstanceFile::Ar { planes, auxiliary } => {
                let fleet = AirplaneFleet::from_pairs(
                    planes
                        .into_iter()
                        .map(|p| (p.tank_volume, p.consumption_rate)),
                )?;
                let auxiliary = match auxiliary {
                    None => None,
                    Some(a) if (1..=fleet.len()).contains(&a) => Some(a - 1),
                    Some(a) => {
                        return Err(FormatError(format!("auxiliary plane {a} does not exist")))
                    }
                };
                Instance::Ar { fleet, auxiliary }
            }
            InstanceFile::Ras {
                underutilization_cost,
                jobs,
            } => {
                let jobs = jobs
                    .into_iter()
                    .map(|j| Job::new(j.p_low, j.p_high, j.overage_cost))
                    .collect::<crate::Result<Vec<_>>>()?;
                Instance::Ras(ScheduleInstance::new(jobs, underutilization_cost)?)
            }
            InstanceFile::Partition { values } => {
                Instance::Partition(PartitionInstance::new(values)?)
            }
        })
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        match inst {
            Instance::Bsp(blocks) => InstanceFile::Bsp {
                blocks: blocks
                    .iter()
                    .map(|b| BlockEntry {
                        half_width: b.half_width().clone(),
                        mass: b.mass().clone(),
                    })
                    .collect(),
            },
            Instance::Ar { fleet, auxiliary } => InstanceFile::Ar {
                planes: fleet
                    .planes()
                    .iter()
                    .map(|p| PlaneEntry {
                        tank_volume: p.tank_volume().clone(),
                        consumption_rate: p.consumption_rate().clone(),
                    })
                    .collect(),
                auxiliary: auxiliary.map(|a| a + 1),
            },
            Instance::Ras(inst) => InstanceFile::Ras {
                underutilization_cost: inst.underutilization_cost().clone(),
                jobs: inst
                    .jobs()
                    .iter()
                    .map(|j| JobEntry {
                        p_low: j.p_low().clone(),
                        p_high: j.p_high().clone(),
                        overage_cost: j.overage_cost().clone(),
                    })
                    .collect(),
            },
            Instance::Partition(p) => InstanceFile::Partition {
                values: p.values().to_vec(),
            },
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| FormatError(e.to_string()))?;
    Instance::try_from(file)
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn emit_instance(inst: &Instance) -> String {
    let mut out = serde_json::to_string_pretty(&InstanceFile::from(inst)).expect("serializable");
    out.push('\n');
    out
}

/// A candidate solution supplied to `verify` and `render`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConfigFile {
    /// Top-to-bottom block order with either a protruding position or
    /// explicit midpoints.
    Stack {
        order: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        protruding: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_list")]
        positions: Option<Vec<Rational>>,
    },
    /// Airplanes, first to drop first.
    Dropout { order: Vec<usize> },
    /// Jobs in processing order.
    Schedule { order: Vec<usize> },
}

mod opt_list {
    use super::exact;
    use super::Rational;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => exact::list::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        exact::list::deserialize(d).map(Some)
    }
}

impl ConfigFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigFile::Stack { .. } => "stack",
            ConfigFile::Dropout { .. } => "dropout",
            ConfigFile::Schedule { .. } => "schedule",
        }
    }

    pub fn order(&self) -> &[usize] {
        match self {
            ConfigFile::Stack { order, .. }
            | ConfigFile::Dropout { order }
            | ConfigFile::Schedule { order } => order,
        }
    }

    /// The order converted to zero-based indices.
    pub fn zero_based_order(&self) -> Result<Vec<usize>, FormatError> {
        self.order()
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| FormatError("indices in configuration files start at 1".into()))
            })
            .collect()
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError(e.to_string()))
}

pub fn emit_config(cfg: &ConfigFile) -> String {
    let mut out = serde_json::to_string_pretty(cfg).expect("serializable");
    out.push('\n');
    out
}

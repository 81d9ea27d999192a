use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerversityKind {
    LowerMiddle,
    UpperMiddle,
    Custom,
}

/// Goresky–MacPherson perversity `p̄(k)` for codimensions `k ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perversity {
    pub kind: PerversityKind,
    /// Explicit values for custom perversities, keyed by codimension.
    pub values: BTreeMap<usize, i32>,
}

impl Perversity {
    /// `m̄(k) = ⌊(k-2)/2⌋`.
    pub fn lower_middle() -> Self {
        Perversity { kind: PerversityKind::LowerMiddle, values: BTreeMap::new() }
    }

    /// `n̄(k) = ⌈(k-2)/2⌉`.
    pub fn upper_middle() -> Self {
        Perversity { kind: PerversityKind::UpperMiddle, values: BTreeMap::new() }
    }

    /// Values for codimensions `2, 3, …`; must satisfy the growth condition.
    pub fn custom(values: &[i32]) -> Result<Self> {
        if values.first() != Some(&0) {
            return Err(Error::BadInput { pointer: "/perversity/0".into(), message: "p(2) must be 0".into() });
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] < w[0] || w[1] > w[0] + 1 {
                return Err(Error::BadInput {
                    pointer: format!("/perversity/{}", i + 1),
                    message: format!("p({}) = {} violates p(k) <= p(k+1) <= p(k)+1", i + 3, w[1]),
                });
            }
        }
        let values = values.iter().enumerate().map(|(i, v)| (i + 2, *v)).collect();
        Ok(Perversity { kind: PerversityKind::Custom, values })
    }

    /// Parses `lower-middle`, `upper-middle` or `custom:0,1,1`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lower-middle" => Ok(Self::lower_middle()),
            "upper-middle" => Ok(Self::upper_middle()),
            _ => {
                let list = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::BadInput { pointer: "/perversity".into(), message: format!("unknown perversity `{s}`") })?;
                let values = list
                    .split(',')
                    .map(|x| x.trim().parse::<i32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::BadInput { pointer: "/perversity".into(), message: e.to_string() })?;
                Self::custom(&values)
            }
        }
    }

    /// Cutoff at codimension `k ≥ 2`; `None` when a custom list is too short.
    pub fn value(&self, k: usize) -> Option<i32> {
        debug_assert!(k >= 2);
        let k = k as i32;
        match self.kind {
            PerversityKind::LowerMiddle => Some((k - 2).div_euclid(2)),
            PerversityKind::UpperMiddle => Some((k - 1).div_euclid(2)),
            PerversityKind::Custom => self.values.get(&(k as usize)).copied(),
        }
    }

    /// Complementary perversity `t̄(k) - p̄(k)` with `t̄(k) = k - 2`, on
    /// codimensions `2..=max_codim`.
    pub fn complement(&self, max_codim: usize) -> Perversity {
        match self.kind {
            PerversityKind::LowerMiddle => Self::upper_middle(),
            PerversityKind::UpperMiddle => Self::lower_middle(),
            PerversityKind::Custom => Perversity {
                kind: PerversityKind::Custom,
                values: (2..=max_codim).filter_map(|k| self.value(k).map(|v| (k, k as i32 - 2 - v))).collect(),
            },
        }
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PerversityKind::LowerMiddle => write!(f, "lower-middle"),
            PerversityKind::UpperMiddle => write!(f, "upper-middle"),
            PerversityKind::Custom => {
                let v: Vec<String> = self.values.values().map(|x| x.to_string()).collect();
                write!(f, "custom:{}", v.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_values() {
        let m = Perversity::lower_middle();
        let n = Perversity::upper_middle();
        let mv: Vec<i32> = (2..=7).map(|k| m.value(k).unwrap()).collect();
        let nv: Vec<i32> = (2..=7).map(|k| n.value(k).unwrap()).collect();
        assert_eq!(mv, vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(nv, vec![0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn custom_growth() {
        assert!(Perversity::custom(&[0, 1, 1, 2]).is_ok());
        assert!(Perversity::custom(&[1]).is_err());
        assert!(Perversity::custom(&[0, 2]).is_err());
        assert!(Perversity::custom(&[0, 1, 0]).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["lower-middle", "upper-middle", "custom:0,1,1"] {
            assert_eq!(Perversity::parse(s).unwrap().to_string(), s);
        }
        assert!(Perversity::parse("middle").is_err());
    }

    #[test]
    fn complement_swaps_middles() {
        assert_eq!(Perversity::lower_middle().complement(5), Perversity::upper_middle());
        let c = Perversity::custom(&[0, 0, 1]).unwrap().complement(4);
        assert_eq!(c.values, BTreeMap::from([(2, 0), (3, 1), (4, 1)]));
    }
}

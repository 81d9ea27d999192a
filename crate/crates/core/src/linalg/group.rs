use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ … ⊕ Z/dm`
/// with `d1 | d2 | … | dm` and every `di ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct FGAbelianGroup {
    #[serde(rename = "rank")]
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

/// Invariant-factor form of a list of cyclic orders.
fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = orders.iter().copied().filter(|d| *d != 1).collect();
    assert!(v.iter().all(|d| *d != 0), "cyclic order 0 is a free summand");
    loop {
        let mut changed = false;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let (a, b) = (v[i], v[j]);
                if b % a != 0 {
                    v[i] = a.gcd(&b);
                    v[j] = a.lcm(&b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    v.retain(|d| *d != 1);
    v.sort_unstable();
    v
}

impl FGAbelianGroup {
    pub fn new(free_rank: usize, cyclic_orders: &[u64]) -> Self {
        FGAbelianGroup { free_rank, torsion: invariant_factors(cyclic_orders) }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        if order == 0 {
            Self::free(1)
        } else {
            Self::new(0, &[order])
        }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Checks the divisibility-chain invariant.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|d| *d >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }

    /// Dimension after tensoring with the rationals.
    pub fn rational_rank(&self) -> usize {
        self.free_rank
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend(&other.torsion);
        Self::new(self.free_rank + other.free_rank, &t)
    }

    pub fn power(&self, n: usize) -> Self {
        (0..n).fold(Self::trivial(), |acc, _| acc.direct_sum(self))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let free = self.free_rank * other.free_rank;
        let mut t = Vec::new();
        for _ in 0..self.free_rank {
            t.extend(&other.torsion);
        }
        for _ in 0..other.free_rank {
            t.extend(&self.torsion);
        }
        for a in &self.torsion {
            for b in &other.torsion {
                t.push(a.gcd(b));
            }
        }
        Self::new(free, &t)
    }
}

/// `Tor_1^Z(g, h)`: free summands are flat, and `Tor(Z/a, Z/b) = Z/gcd(a, b)`.
pub fn tor1(g: &FGAbelianGroup, h: &FGAbelianGroup) -> FGAbelianGroup {
    let mut t = Vec::new();
    for a in &g.torsion {
        for b in &h.torsion {
            t.push(a.gcd(b));
        }
    }
    FGAbelianGroup::new(0, &t)
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let g = FGAbelianGroup::new(1, &[2, 3]);
        assert_eq!(g.torsion, vec![6]);
        let h = FGAbelianGroup::new(0, &[4, 2, 1]);
        assert_eq!(h.torsion, vec![2, 4]);
        assert!(h.is_canonical());
    }

    #[test]
    fn tor_examples() {
        let z = FGAbelianGroup::free(1);
        let z2 = FGAbelianGroup::cyclic(2);
        assert!(tor1(&z, &FGAbelianGroup::new(3, &[5, 10])).is_trivial());
        assert_eq!(tor1(&z2, &z2), z2);
        assert_eq!(tor1(&FGAbelianGroup::cyclic(4), &FGAbelianGroup::cyclic(6)), z2);
    }

    #[test]
    fn tensor_examples() {
        let z2 = FGAbelianGroup::cyclic(2);
        assert_eq!(z2.tensor(&z2), z2);
        assert_eq!(FGAbelianGroup::free(1).tensor(&FGAbelianGroup::free(2)), FGAbelianGroup::free(2));
        assert!(z2.tensor(&FGAbelianGroup::cyclic(3)).is_trivial());
    }
}

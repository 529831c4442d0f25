//! Built-in group families.
//!
//! Dihedral and semidihedral groups act faithfully on the 2^{n-1} points of
//! their cyclic maximal subgroup, extended by the defining automorphism
//! x ↦ x^i (i = −1 dihedral, i = 2^{n-2}−1 semidihedral). Generalized
//! quaternion groups have a unique minimal subgroup, so no action on
//! 2^{n-1} points is faithful; they act on 2^n points written as x^a·y^b.
//! SL2(3) permutes the 8 nonzero vectors of F_3². Extraspecial and
//! elementary abelian groups are collection-backed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::collect::{pc_group_from_data, PcData};
use crate::group::{Backend, Group, ENUMERATION_CAP};

/// A constructor for one of the built-in families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Cyclic(u64),
    /// Total order 2^n, n ≥ 3.
    Dihedral(u64),
    /// Total order 2^n, n ≥ 4.
    Semidihedral(u64),
    /// Total order 2^n, n ≥ 3.
    GeneralizedQuaternion(u64),
    /// Order p³ for an odd prime p; exponent is p or p².
    Extraspecial { p: u64, exponent: u64 },
    ElementaryAbelian { p: u64, k: u32 },
    Sl23,
    DirectProduct(Vec<FamilySpec>),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cyclic(m) => write!(f, "cyclic:{m}"),
            FamilySpec::Dihedral(m) => write!(f, "dihedral:{m}"),
            FamilySpec::Semidihedral(m) => write!(f, "semidihedral:{m}"),
            FamilySpec::GeneralizedQuaternion(m) => write!(f, "quaternion:{m}"),
            FamilySpec::Extraspecial { p, exponent } => write!(f, "extraspecial:{p}:exp{exponent}"),
            FamilySpec::ElementaryAbelian { p, k } => write!(f, "elemab:{p}:{k}"),
            FamilySpec::Sl23 => write!(f, "sl23"),
            FamilySpec::DirectProduct(parts) => {
                write!(f, "product:")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilySpec> {
        let bad = || Error::Domain(format!("unrecognized group spec '{s}'"));
        if s == "sl23" {
            return Ok(FamilySpec::Sl23);
        }
        if let Some(rest) = s.strip_prefix("product:") {
            let parts: Vec<FamilySpec> = rest
                .split(',')
                .map(|p| {
                    if p.starts_with("product:") {
                        Err(Error::Domain(
                            "nested product specs are not supported on the command line".into(),
                        ))
                    } else {
                        p.parse()
                    }
                })
                .collect::<Result<_>>()?;
            if parts.is_empty() {
                return Err(bad());
            }
            return Ok(FamilySpec::DirectProduct(parts));
        }
        let fields: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match fields.as_slice() {
            ["cyclic", m] => Ok(FamilySpec::Cyclic(num(m)?)),
            ["dihedral", m] => Ok(FamilySpec::Dihedral(num(m)?)),
            ["semidihedral", m] => Ok(FamilySpec::Semidihedral(num(m)?)),
            ["quaternion", m] => Ok(FamilySpec::GeneralizedQuaternion(num(m)?)),
            ["extraspecial", p, e] => {
                let exponent = e
                    .strip_prefix("exp")
                    .ok_or_else(bad)
                    .and_then(|v| num(v))?;
                Ok(FamilySpec::Extraspecial {
                    p: num(p)?,
                    exponent,
                })
            }
            ["elemab", p, k] => Ok(FamilySpec::ElementaryAbelian {
                p: num(p)?,
                k: num(k)? as u32,
            }),
            _ => Err(bad()),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// n for orders 2^n with n at least `min_n`.
fn two_power_exponent(order: u64, min_n: u32, what: &str) -> Result<u32> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::Domain(format!(
            "{what} requires the order to be a power of 2, got {order}"
        )));
    }
    let n = order.trailing_zeros();
    if n < min_n {
        return Err(Error::Domain(format!(
            "{what} of order {order} does not exist (need at least 2^{min_n})"
        )));
    }
    Ok(n)
}

pub fn build_family(spec: &FamilySpec) -> Result<Group> {
    let label = spec.to_string();
    match spec {
        FamilySpec::Cyclic(m) => {
            if *m == 0 {
                return Err(Error::Domain("cyclic group order must be positive".into()));
            }
            if *m > ENUMERATION_CAP {
                return Err(Error::OrderCap {
                    order: *m as u128,
                    cap: ENUMERATION_CAP,
                });
            }
            let data = if *m == 1 {
                PcData::free_abelian(vec![])
            } else {
                PcData::free_abelian(vec![*m])
            };
            pc_group_from_data(data, label)
        }
        FamilySpec::Dihedral(order) => {
            let n = two_power_exponent(*order, 3, "dihedral")?;
            let d = 1u64 << (n - 1);
            let rot: Vec<u32> = (0..d).map(|x| ((x + 1) % d) as u32).collect();
            let refl: Vec<u32> = (0..d).map(|x| ((d - x) % d) as u32).collect();
            let g = Group::from_permutations(d as usize, vec![rot, refl], label)?;
            expect_order(g, *order)
        }
        FamilySpec::Semidihedral(order) => {
            let n = two_power_exponent(*order, 4, "semidihedral")?;
            let d = 1u64 << (n - 1);
            let i = (1u64 << (n - 2)) - 1;
            let rot: Vec<u32> = (0..d).map(|x| ((x + 1) % d) as u32).collect();
            let twist: Vec<u32> = (0..d).map(|x| ((x * i) % d) as u32).collect();
            let g = Group::from_permutations(d as usize, vec![rot, twist], label)?;
            expect_order(g, *order)
        }
        FamilySpec::GeneralizedQuaternion(order) => {
            let n = two_power_exponent(*order, 3, "generalized quaternion")?;
            let d = 1u64 << (n - 1);
            let half = 1u64 << (n - 2);
            let pt = |a: u64, b: u64| (b * d + a) as u32;
            let mut x = vec![0u32; (2 * d) as usize];
            let mut y = vec![0u32; (2 * d) as usize];
            for a in 0..d {
                for b in 0..2 {
                    x[pt(a, b) as usize] = pt((a + 1) % d, b);
                    y[pt(a, b) as usize] = if b == 0 {
                        pt((d - a) % d, 1)
                    } else {
                        pt((half + d - a) % d, 0)
                    };
                }
            }
            let g = Group::from_permutations((2 * d) as usize, vec![x, y], label)?;
            expect_order(g, *order)
        }
        FamilySpec::Extraspecial { p, exponent } => {
            if !is_prime(*p) || *p == 2 {
                return Err(Error::Domain(format!(
                    "extraspecial constructor needs an odd prime, got {p} \
                     (for order 8 use dihedral:8 or quaternion:8)"
                )));
            }
            let (powers, label_exp) = if exponent == p {
                (vec![None, None, None], *p)
            } else if *exponent == p * p {
                (vec![Some(vec![0, 0, 1]), None, None], p * p)
            } else {
                return Err(Error::Domain(format!(
                    "extraspecial exponent must be {p} or {}, got {exponent}",
                    p * p
                )));
            };
            let _ = label_exp;
            // pairs in triangular order: (g2,g1), (g3,g1), (g3,g2)
            let comms = vec![Some(vec![0, 0, 1]), None, None];
            let data = PcData::new(vec![*p, *p, *p], powers, comms);
            let g = pc_group_from_data(data, label)?;
            expect_order(g, p * p * p)
        }
        FamilySpec::ElementaryAbelian { p, k } => {
            if !is_prime(*p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            if *k == 0 {
                return Err(Error::Domain("elementary abelian rank must be positive".into()));
            }
            let order = (*p as u128).pow(*k);
            if order > ENUMERATION_CAP as u128 {
                return Err(Error::OrderCap {
                    order,
                    cap: ENUMERATION_CAP,
                });
            }
            pc_group_from_data(PcData::free_abelian(vec![*p; *k as usize]), label)
        }
        FamilySpec::Sl23 => {
            // points: nonzero vectors (a, b) of F_3², index 3a + b − 1
            let pt = |a: u64, b: u64| (3 * a + b - 1) as u32;
            let act = |m: [[u64; 2]; 2]| -> Vec<u32> {
                let mut perm = vec![0u32; 8];
                for a in 0..3 {
                    for b in 0..3 {
                        if a == 0 && b == 0 {
                            continue;
                        }
                        let na = (m[0][0] * a + m[0][1] * b) % 3;
                        let nb = (m[1][0] * a + m[1][1] * b) % 3;
                        perm[pt(a, b) as usize] = pt(na, nb);
                    }
                }
                perm
            };
            let g = Group::from_permutations(
                8,
                vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])],
                label,
            )?;
            expect_order(g, 24)
        }
        FamilySpec::DirectProduct(parts) => {
            if parts.is_empty() {
                return Err(Error::Domain("empty direct product".into()));
            }
            let factors: Vec<Group> = parts.iter().map(build_family).collect::<Result<_>>()?;
            let expected: u128 = factors.iter().map(|f| f.order() as u128).product();
            if expected > ENUMERATION_CAP as u128 {
                return Err(Error::OrderCap {
                    order: expected,
                    cap: ENUMERATION_CAP,
                });
            }
            let parts_perms: Vec<(usize, Vec<Vec<u32>>)> =
                factors.iter().map(permutation_parts).collect();
            let degree: usize = parts_perms.iter().map(|(d, _)| d).sum();
            let mut gens: Vec<Vec<u32>> = Vec::new();
            let mut offset = 0usize;
            for (d, factor_gens) in &parts_perms {
                for fg in factor_gens {
                    let mut perm: Vec<u32> = (0..degree as u32).collect();
                    for (x, &img) in fg.iter().enumerate() {
                        perm[offset + x] = offset as u32 + img;
                    }
                    gens.push(perm);
                }
                offset += d;
            }
            let g = Group::from_permutations(degree, gens, label)?;
            expect_order(g, expected as u64)
        }
    }
}

/// A faithful permutation action of the factor: its own action when it is
/// permutation-backed, otherwise the left regular action on its elements.
fn permutation_parts(g: &Group) -> (usize, Vec<Vec<u32>>) {
    if let Backend::Perm { degree } = g.backend() {
        let gens = g
            .generators()
            .iter()
            .map(|&i| match g.element(i) {
                crate::group::Element::Perm(p) => p.to_vec(),
                _ => unreachable!("perm backend holds perm elements"),
            })
            .collect();
        return (*degree, gens);
    }
    let n = g.order() as usize;
    let gens = g
        .generators()
        .iter()
        .map(|&t| (0..n as u32).map(|x| g.mul(t, x)).collect())
        .collect();
    (n, gens)
}

fn expect_order(g: Group, order: u64) -> Result<Group> {
    if g.order() != order {
        return Err(Error::Internal(format!(
            "constructed '{}' has order {}, expected {}",
            g.label(),
            g.order(),
            order
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn involutions(g: &Group) -> usize {
        (0..g.order() as u32)
            .filter(|&x| x != 0 && g.element_order(x) == 2)
            .count()
    }

    #[test]
    fn family_orders_are_exact() {
        for (spec, order) in [
            (FamilySpec::Dihedral(8), 8),
            (FamilySpec::Dihedral(64), 64),
            (FamilySpec::Semidihedral(16), 16),
            (FamilySpec::GeneralizedQuaternion(32), 32),
            (FamilySpec::Extraspecial { p: 7, exponent: 7 }, 343),
            (FamilySpec::ElementaryAbelian { p: 3, k: 4 }, 81),
            (FamilySpec::Sl23, 24),
            (FamilySpec::Cyclic(9), 9),
        ] {
            assert_eq!(build_family(&spec).unwrap().order(), order, "{spec}");
        }
    }

    #[test]
    fn quaternion_groups_have_a_unique_involution() {
        for n in [3u32, 4, 5, 6] {
            let g = build_family(&FamilySpec::GeneralizedQuaternion(1 << n)).unwrap();
            assert_eq!(involutions(&g), 1, "Q_{}", 1u64 << n);
        }
    }

    #[test]
    fn dihedral_involution_count_is_half_plus_one() {
        for n in [3u32, 4, 5, 6] {
            let g = build_family(&FamilySpec::Dihedral(1 << n)).unwrap();
            assert_eq!(involutions(&g), (1 << (n - 1)) + 1, "D_{}", 1u64 << n);
        }
    }

    #[test]
    fn invalid_parameters_are_domain_errors() {
        assert!(build_family(&FamilySpec::Semidihedral(8)).is_err());
        assert!(build_family(&FamilySpec::Dihedral(12)).is_err());
        assert!(build_family(&FamilySpec::GeneralizedQuaternion(4)).is_err());
        assert!(build_family(&FamilySpec::Extraspecial { p: 2, exponent: 4 }).is_err());
        assert!(build_family(&FamilySpec::Extraspecial { p: 5, exponent: 11 }).is_err());
        assert!(build_family(&FamilySpec::ElementaryAbelian { p: 6, k: 2 }).is_err());
    }

    #[test]
    fn direct_product_mixes_backends() {
        let spec = FamilySpec::DirectProduct(vec![
            FamilySpec::Cyclic(2),
            FamilySpec::Dihedral(8),
        ]);
        let g = build_family(&spec).unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.label(), "product:cyclic:2,dihedral:8");
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "dihedral:16",
            "semidihedral:32",
            "quaternion:16",
            "extraspecial:5:exp5",
            "extraspecial:5:exp25",
            "cyclic:9",
            "elemab:3:4",
            "sl23",
            "product:cyclic:2,dihedral:8",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("frobenius:20".parse::<FamilySpec>().is_err());
        assert!("product:product:cyclic:2,cyclic:2,cyclic:3"
            .parse::<FamilySpec>()
            .is_err());
    }

    #[test]
    fn sl23_element_order_statistics() {
        let g = build_family(&FamilySpec::Sl23).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for x in 0..24u32 {
            *counts.entry(g.element_order(x)).or_insert(0u32) += 1;
        }
        // 1 identity, 1 central involution, 8 of order 3, 6 of order 4, 8 of order 6
        assert_eq!(
            counts.into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]
        );
    }
}

//! Structural data of a finite group: conjugacy classes, power maps,
//! central series, maximal and normal subgroups, Sylow towers.

mod series;
mod subgroups;

pub use series::{
    central_series_data, center, derived_subgroup, is_maximal_class, nilpotency_class,
    second_center, upper_central_series, CentralSeriesData,
};
pub use subgroups::{
    abelian_maximal_subgroup, has_sylow_tower, maximal_subgroups, normal_subgroups, SylowTower,
    NORMAL_SUBGROUP_CANDIDATE_LIMIT,
};

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::Group;

/// Conjugacy class decomposition with derived maps.
///
/// Classes are ordered by the minimal element index they contain, which puts
/// the identity first and makes every downstream table reproducible.
#[derive(Debug, Clone)]
pub struct ClassData {
    /// Minimal-index representative of each class.
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
    /// element index → class index
    pub class_of: Vec<u32>,
    /// full member lists, each sorted ascending
    pub members: Vec<Vec<u32>>,
    /// class of the inverses
    pub inverse_class: Vec<u32>,
    /// |G| / size, per class
    pub centralizer_orders: Vec<u64>,
    /// orders of the class representatives
    pub rep_orders: Vec<u64>,
    /// lcm of all element orders
    pub exponent: u64,
    /// for each divisor m of the exponent, class(g) ↦ class(g^m)
    pub power_maps: BTreeMap<u64, Vec<u32>>,
}

impl ClassData {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

fn divisors(e: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= e {
        if e % d == 0 {
            small.push(d);
            if d != e / d {
                large.push(e / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Orbit decomposition of the group under conjugation by its generators.
pub fn conjugacy_classes(g: &Group) -> Result<ClassData> {
    let order = g.order();
    let n = order as usize;
    let gens: Vec<u32> = g.generators().to_vec();
    let gen_invs: Vec<u32> = gens.iter().map(|&x| g.inv(x)).collect();

    let mut class_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    for x in 0..n as u32 {
        if class_of[x as usize] != u32::MAX {
            continue;
        }
        let cls = reps.len() as u32;
        reps.push(x);
        let mut orbit = vec![x];
        class_of[x as usize] = cls;
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head];
            head += 1;
            for (&t, &ti) in gens.iter().zip(&gen_invs) {
                let z = g.mul(g.mul(ti, y), t);
                if class_of[z as usize] == u32::MAX {
                    class_of[z as usize] = cls;
                    orbit.push(z);
                }
            }
        }
        orbit.sort_unstable();
        members.push(orbit);
    }

    let sizes: Vec<u64> = members.iter().map(|m| m.len() as u64).collect();
    let mut centralizer_orders = Vec::with_capacity(sizes.len());
    for (&sz, &rep) in sizes.iter().zip(&reps) {
        if order % sz != 0 {
            return Err(Error::Internal(format!(
                "class of element {rep} has size {sz}, which does not divide {order}"
            )));
        }
        centralizer_orders.push(order / sz);
    }
    debug_assert_eq!(sizes.iter().sum::<u64>(), order);
    debug_assert_eq!(sizes[0], 1);

    let rep_orders: Vec<u64> = reps.iter().map(|&r| g.element_order(r)).collect();
    let exponent = rep_orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
    let inverse_class: Vec<u32> = reps
        .iter()
        .map(|&r| class_of[g.inv(r) as usize])
        .collect();

    let mut power_maps = BTreeMap::new();
    for m in divisors(exponent) {
        let map: Vec<u32> = reps
            .iter()
            .map(|&r| class_of[g.pow(r, m) as usize])
            .collect();
        power_maps.insert(m, map);
    }

    Ok(ClassData {
        reps,
        sizes,
        class_of,
        members,
        inverse_class,
        centralizer_orders,
        rep_orders,
        exponent,
        power_maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, FamilySpec};

    #[test]
    fn dihedral8_has_five_classes() {
        let g = build_family(&FamilySpec::Dihedral(8)).unwrap();
        let c = conjugacy_classes(&g).unwrap();
        let mut sizes = c.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(c.count(), 5);
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let g = build_family(&FamilySpec::ElementaryAbelian { p: 3, k: 3 }).unwrap();
        let c = conjugacy_classes(&g).unwrap();
        assert_eq!(c.count(), 27);
        assert!(c.sizes.iter().all(|&s| s == 1));
        assert!((0..27).all(|i| c.class_of[i] == i as u32 && c.reps[i] == i as u32));
    }

    #[test]
    fn extraspecial125_class_statistics() {
        let g = build_family(&FamilySpec::Extraspecial { p: 5, exponent: 5 }).unwrap();
        let c = conjugacy_classes(&g).unwrap();
        assert_eq!(c.count(), 29);
        assert_eq!(c.sizes.iter().filter(|&&s| s == 1).count(), 5);
        assert_eq!(c.sizes.iter().filter(|&&s| s == 5).count(), 24);
    }

    #[test]
    fn class_equation_and_centralizers() {
        for spec in [
            FamilySpec::Dihedral(16),
            FamilySpec::Sl23,
            FamilySpec::GeneralizedQuaternion(16),
            FamilySpec::Extraspecial { p: 3, exponent: 9 },
        ] {
            let g = build_family(&spec).unwrap();
            let c = conjugacy_classes(&g).unwrap();
            assert_eq!(c.sizes.iter().sum::<u64>(), g.order(), "{spec}");
            assert_eq!(c.sizes[0], 1);
            assert_eq!(c.reps[0], 0);
            for i in 0..c.count() {
                assert_eq!(c.sizes[i] * c.centralizer_orders[i], g.order());
            }
        }
    }

    #[test]
    fn power_maps_commute_with_class_map() {
        for spec in [
            FamilySpec::Dihedral(16),
            FamilySpec::Sl23,
            FamilySpec::Extraspecial { p: 3, exponent: 3 },
        ] {
            let g = build_family(&spec).unwrap();
            let c = conjugacy_classes(&g).unwrap();
            assert!(g.order() <= 200);
            for m in c.power_maps.keys() {
                let map = &c.power_maps[m];
                for x in 0..g.order() as u32 {
                    let lhs = c.class_of[g.pow(x, *m) as usize];
                    let rhs = map[c.class_of[x as usize] as usize];
                    assert_eq!(lhs, rhs, "{spec}: power {m} at element {x}");
                }
            }
        }
    }

    #[test]
    fn inverse_classes_pair_up() {
        let g = build_family(&FamilySpec::Cyclic(9)).unwrap();
        let c = conjugacy_classes(&g).unwrap();
        for i in 0..c.count() {
            let j = c.inverse_class[i] as usize;
            assert_eq!(c.inverse_class[j], i as u32);
        }
    }
}

//! Central series, derived subgroup, and the maximal-class predicate.

use crate::error::{Error, Result};
use crate::group::{quotient, ElementSet, Group};
use crate::structure::{conjugacy_classes, ClassData};

/// The center: union of the singleton conjugacy classes.
pub fn center(_g: &Group, classes: &ClassData) -> ElementSet {
    let mut out = Vec::new();
    for (i, &sz) in classes.sizes.iter().enumerate() {
        if sz == 1 {
            out.push(classes.reps[i]);
        }
    }
    ElementSet::from_unsorted(out)
}

/// The derived subgroup: normal closure of the commutators of the
/// generators.
pub fn derived_subgroup(g: &Group) -> ElementSet {
    let gens = g.generators();
    let mut seeds: Vec<u32> = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = g.commutator(a, b);
            if c != 0 && !seeds.contains(&c) {
                seeds.push(c);
            }
        }
    }
    loop {
        let sub = g.generated_subgroup(&seeds);
        let mut grew = false;
        for x in sub.iter() {
            for &t in gens {
                let y = g.conj(x, t);
                if !sub.contains(y) {
                    seeds.push(y);
                    grew = true;
                }
            }
        }
        if !grew {
            return sub;
        }
    }
}

/// The preimage in G of the center of G/Z(G).
pub fn second_center(g: &Group, classes: &ClassData) -> Result<ElementSet> {
    let z = center(g, classes);
    if z.len() == g.order() as usize {
        return Ok(z);
    }
    let (q, proj) = quotient(g, &z)?;
    let q_classes = conjugacy_classes(&q)?;
    let zq = center(&q, &q_classes);
    let mut out = Vec::new();
    for x in 0..g.order() as u32 {
        if zq.contains(proj[x as usize]) {
            out.push(x);
        }
    }
    Ok(ElementSet::from_unsorted(out))
}

/// Ascending central series Z_1 ⊆ Z_2 ⊆ …, stopping when it reaches the
/// whole group or stabilizes short of it (non-nilpotent case).
pub fn upper_central_series(g: &Group) -> Result<Vec<ElementSet>> {
    let mut series: Vec<ElementSet> = Vec::new();
    let classes = conjugacy_classes(g)?;
    let mut current = center(g, &classes);
    loop {
        series.push(current.clone());
        if current.len() == g.order() as usize {
            return Ok(series);
        }
        let (q, proj) = quotient(g, &current)?;
        let q_classes = conjugacy_classes(&q)?;
        let zq = center(&q, &q_classes);
        let mut next = Vec::new();
        for x in 0..g.order() as u32 {
            if zq.contains(proj[x as usize]) {
                next.push(x);
            }
        }
        let next = ElementSet::from_unsorted(next);
        if next.len() == current.len() {
            return Ok(series);
        }
        current = next;
    }
}

/// Length of the upper central series when it terminates at G; `None` for
/// non-nilpotent groups.
pub fn nilpotency_class(g: &Group) -> Result<Option<u32>> {
    if g.order() == 1 {
        return Ok(Some(0));
    }
    let series = upper_central_series(g)?;
    let last = series.last().expect("series has at least one term");
    if last.len() == g.order() as usize {
        Ok(Some(series.len() as u32))
    } else {
        Ok(None)
    }
}

/// Center, second center, derived subgroup, and the central series in one
/// bundle.
#[derive(Debug, Clone)]
pub struct CentralSeriesData {
    pub center: ElementSet,
    pub second_center: ElementSet,
    pub derived: ElementSet,
    pub nilpotency_class: Option<u32>,
    pub series: Vec<ElementSet>,
}

pub fn central_series_data(g: &Group, classes: &ClassData) -> Result<CentralSeriesData> {
    let series = upper_central_series(g)?;
    let z = center(g, classes);
    debug_assert_eq!(series[0], z);
    let second = if z.len() == g.order() as usize {
        z.clone()
    } else {
        series
            .get(1)
            .cloned()
            .unwrap_or_else(|| series.last().expect("nonempty").clone())
    };
    let nilpotency = if series.last().expect("nonempty").len() == g.order() as usize {
        Some(series.len() as u32)
    } else {
        None
    };
    Ok(CentralSeriesData {
        center: z,
        second_center: second,
        derived: derived_subgroup(g),
        nilpotency_class: nilpotency,
        series,
    })
}

/// Maximal-class test for p-groups of order p^n: some element has a
/// centralizer of order exactly p², equivalently the nilpotency class is
/// n − 1. Both criteria are evaluated and must agree. Abelian groups are
/// answered `false`; non-p-groups are a domain error.
pub fn is_maximal_class(g: &Group, classes: &ClassData) -> Result<bool> {
    let (p, n) = g
        .prime_power()
        .ok_or_else(|| Error::Domain(format!("'{}' is not a p-group", g.label())))?;
    if g.is_abelian() {
        return Ok(false);
    }
    let p2 = p * p;
    let by_centralizer = classes.centralizer_orders.iter().any(|&c| c == p2);
    let by_class = match nilpotency_class(g)? {
        Some(c) => c == n - 1,
        None => {
            return Err(Error::Internal(format!(
                "p-group '{}' reported as non-nilpotent",
                g.label()
            )))
        }
    };
    if by_centralizer != by_class {
        return Err(Error::Internal(format!(
            "maximal-class criteria disagree on '{}': centralizer test {}, class test {}",
            g.label(),
            by_centralizer,
            by_class
        )));
    }
    Ok(by_centralizer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, FamilySpec};

    fn classes_of(spec: &FamilySpec) -> (Group, ClassData) {
        let g = build_family(spec).unwrap();
        let c = conjugacy_classes(&g).unwrap();
        (g, c)
    }

    #[test]
    fn dihedral16_central_series_sizes() {
        let (g, c) = classes_of(&FamilySpec::Dihedral(16));
        let z = center(&g, &c);
        assert_eq!(z.len(), 2);
        let z2 = second_center(&g, &c).unwrap();
        assert_eq!(z2.len(), 4);
        assert!(z.is_subset_of(&z2));
    }

    #[test]
    fn center_of_abelian_group_is_everything() {
        let (g, c) = classes_of(&FamilySpec::Cyclic(12));
        assert_eq!(center(&g, &c).len(), 12);
        assert_eq!(nilpotency_class(&g).unwrap(), Some(1));
    }

    #[test]
    fn derived_subgroup_of_q8_is_the_center() {
        let (g, c) = classes_of(&FamilySpec::GeneralizedQuaternion(8));
        let d = derived_subgroup(&g);
        assert_eq!(d.len(), 2);
        assert_eq!(d, center(&g, &c));
    }

    #[test]
    fn second_center_agrees_with_direct_definition() {
        for spec in [
            FamilySpec::Dihedral(16),
            FamilySpec::GeneralizedQuaternion(16),
            FamilySpec::Extraspecial { p: 3, exponent: 3 },
            FamilySpec::Sl23,
        ] {
            let (g, c) = classes_of(&spec);
            let z = center(&g, &c);
            let z2 = second_center(&g, &c).unwrap();
            // direct: x with [x, y] central for every y
            let direct: Vec<u32> = (0..g.order() as u32)
                .filter(|&x| (0..g.order() as u32).all(|y| z.contains(g.commutator(x, y))))
                .collect();
            assert_eq!(z2, ElementSet::from_unsorted(direct), "{spec}");
        }
    }

    #[test]
    fn nilpotency_classes_of_known_groups() {
        assert_eq!(
            nilpotency_class(&build_family(&FamilySpec::Dihedral(16)).unwrap()).unwrap(),
            Some(3)
        );
        assert_eq!(
            nilpotency_class(&build_family(&FamilySpec::Extraspecial { p: 5, exponent: 5 }).unwrap())
                .unwrap(),
            Some(2)
        );
        assert_eq!(
            nilpotency_class(&build_family(&FamilySpec::Sl23).unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn maximal_class_predicate_on_known_groups() {
        for n in 3..=6u32 {
            let (g, c) = classes_of(&FamilySpec::Dihedral(1 << n));
            assert!(is_maximal_class(&g, &c).unwrap(), "D_{}", 1u64 << n);
        }
        let (g, c) = classes_of(&FamilySpec::Extraspecial { p: 5, exponent: 5 });
        assert!(is_maximal_class(&g, &c).unwrap());
        let (g, c) = classes_of(&FamilySpec::ElementaryAbelian { p: 3, k: 4 });
        assert!(!is_maximal_class(&g, &c).unwrap());
        let (g, c) = classes_of(&FamilySpec::Sl23);
        assert!(is_maximal_class(&g, &c).is_err(), "not a p-group");
    }
}

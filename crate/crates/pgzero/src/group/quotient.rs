//! Quotient groups by verified normal subgroups.
//!
//! A coset is identified with its minimal-index representative in the parent,
//! so quotient elements keep the parent's concrete representation and the
//! quotient index order is deterministic across runs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Backend, Element, ElementSet, Group};

/// The quotient G/N together with the projection map sending each parent
/// element index to its coset's quotient index. `n` must be a subgroup and
/// normal; both are verified.
pub fn quotient(g: &Group, n: &ElementSet) -> Result<(Group, Vec<u32>)> {
    if !n.contains(0) {
        return Err(Error::Domain("kernel must contain the identity".into()));
    }
    // subgroup check (closure) happens inside `subgroup`
    let n_group = g.subgroup(n, "N")?;
    let _ = n_group;
    for x in n.iter() {
        for &gen in g.generators() {
            if !n.contains(g.conj(x, gen)) {
                return Err(Error::Domain(
                    "subgroup is not normal: a conjugate escapes".into(),
                ));
            }
        }
    }

    let order = g.order() as usize;
    let mut coset_min = vec![u32::MAX; order];
    let mut reps: Vec<u32> = Vec::with_capacity(order / n.len());
    for x in 0..order as u32 {
        if coset_min[x as usize] != u32::MAX {
            continue;
        }
        reps.push(x);
        for m in n.iter() {
            let y = g.mul(x, m);
            debug_assert_eq!(coset_min[y as usize], u32::MAX);
            coset_min[y as usize] = x;
        }
    }
    if reps.len() * n.len() != order {
        return Err(Error::Internal("coset partition has the wrong size".into()));
    }

    let coset_min = Arc::new(coset_min);
    let rank = |parent_idx: u32| -> u32 {
        reps.binary_search(&coset_min[parent_idx as usize])
            .expect("canonical representative is enumerated") as u32
    };

    let elements: Vec<Element> = reps.iter().map(|&r| g.element(r).clone()).collect();
    let inv: Vec<u32> = reps.iter().map(|&r| rank(g.inv(r))).collect();
    let mut gens: Vec<u32> = Vec::new();
    for &pg in g.generators() {
        let q = rank(pg);
        if q != 0 && !gens.contains(&q) {
            gens.push(q);
        }
    }
    let projection: Vec<u32> = (0..order as u32).map(rank).collect();

    let label = format!("{}/N{}", g.label(), n.len());
    let backend = Backend::Quotient {
        parent: g.clone(),
        coset_min,
        reps,
    };
    Ok((
        Group::from_parts(backend, elements, inv, gens, label),
        projection,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, FamilySpec};

    fn center_set(g: &Group) -> ElementSet {
        let all: Vec<u32> = (0..g.order() as u32)
            .filter(|&z| (0..g.order() as u32).all(|x| g.mul(z, x) == g.mul(x, z)))
            .collect();
        ElementSet::from_unsorted(all)
    }

    #[test]
    fn q8_mod_center_is_elementary_abelian_of_order_4() {
        let q8 = build_family(&FamilySpec::GeneralizedQuaternion(8)).unwrap();
        let z = center_set(&q8);
        assert_eq!(z.len(), 2);
        let (q, proj) = quotient(&q8, &z).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_abelian());
        for x in 0..4u32 {
            assert_eq!(q.mul(x, x), 0, "every class squares to the identity");
        }
        // projection is a homomorphism on all pairs
        for a in 0..8u32 {
            for b in 0..8u32 {
                assert_eq!(
                    proj[q8.mul(a, b) as usize],
                    q.mul(proj[a as usize], proj[b as usize])
                );
            }
        }
    }

    #[test]
    fn quotient_by_trivial_subgroup_preserves_structure() {
        let g = build_family(&FamilySpec::Dihedral(16)).unwrap();
        let (q, proj) = quotient(&g, &ElementSet::singleton_identity()).unwrap();
        assert_eq!(q.order(), g.order());
        for a in 0..g.order() as u32 {
            assert_eq!(proj[a as usize], a);
            for b in 0..g.order() as u32 {
                assert_eq!(q.mul(a, b), g.mul(a, b));
            }
        }
    }

    #[test]
    fn dihedral16_mod_center_is_dihedral8() {
        let g = build_family(&FamilySpec::Dihedral(16)).unwrap();
        let z = center_set(&g);
        assert_eq!(z.len(), 2);
        let (q, _) = quotient(&g, &z).unwrap();
        assert_eq!(q.order(), 8);
        // dihedral of order 8: cyclic index-2 subgroup with 2 involutions
        // outside it, 5 involutions total
        let invol = (0..8u32).filter(|&x| x != 0 && q.mul(x, x) == 0).count();
        assert_eq!(invol, 5);
        assert_eq!(q.exponent(), 4);
        assert!(!q.is_abelian());
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let d8 = build_family(&FamilySpec::Dihedral(8)).unwrap();
        // a reflection generates a non-normal subgroup of order 2
        let s = d8.generators()[1];
        let sub = ElementSet::from_unsorted(vec![0, s]);
        assert!(quotient(&d8, &sub).is_err());
    }

    #[test]
    fn non_subgroup_is_rejected() {
        let d8 = build_family(&FamilySpec::Dihedral(8)).unwrap();
        let r = d8.generators()[0];
        let not_closed = ElementSet::from_unsorted(vec![0, r]);
        assert!(quotient(&d8, &not_closed).is_err());
    }

    #[test]
    fn quotient_of_quotient_composes() {
        let g = build_family(&FamilySpec::Dihedral(32)).unwrap();
        let z = center_set(&g);
        let (q1, _) = quotient(&g, &z).unwrap();
        let z1 = center_set(&q1);
        let (q2, _) = quotient(&q1, &z1).unwrap();
        assert_eq!(q2.order(), 8);
        assert!(!q2.is_abelian());
    }
}

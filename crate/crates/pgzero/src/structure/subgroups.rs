//! Maximal subgroups of p-groups, normal subgroup enumeration, and Sylow
//! tower detection.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::group::{quotient, ElementSet, Group};
use crate::structure::{derived_subgroup, ClassData};

/// Default cap on candidate class-union sets during normal subgroup
/// enumeration.
pub const NORMAL_SUBGROUP_CANDIDATE_LIMIT: usize = 100_000;

/// Frattini subgroup of a p-group: generated by the derived subgroup and
/// the p-th powers of the generators.
fn frattini(g: &Group, p: u64) -> ElementSet {
    let derived = derived_subgroup(g);
    let mut seeds: Vec<u32> = derived.iter().collect();
    for &t in g.generators() {
        seeds.push(g.pow(t, p));
    }
    g.generated_subgroup(&seeds)
}

/// The maximal subgroups of a p-group: preimages of the index-p subgroups
/// of the elementary abelian quotient G/Φ(G), one per hyperplane, in the
/// deterministic order of normalized functionals.
pub fn maximal_subgroups(g: &Group) -> Result<Vec<ElementSet>> {
    let (p, _) = g
        .prime_power()
        .ok_or_else(|| Error::Domain(format!("'{}' is not a p-group", g.label())))?;
    if g.order() == 1 {
        return Ok(Vec::new());
    }
    let phi = frattini(g, p);
    let (q, proj) = quotient(g, &phi)?;

    // sanity: the Frattini quotient must be elementary abelian
    if !q.is_abelian() || (q.order() > 1 && q.exponent() != p) {
        return Err(Error::Internal(format!(
            "Frattini quotient of '{}' is not elementary abelian",
            g.label()
        )));
    }

    // greedy basis of the F_p vector space
    let mut basis: Vec<u32> = Vec::new();
    let mut span: HashSet<u32> = HashSet::new();
    span.insert(0);
    for x in 1..q.order() as u32 {
        if span.contains(&x) {
            continue;
        }
        basis.push(x);
        let snapshot: Vec<u32> = span.iter().copied().collect();
        for s in snapshot {
            let mut cur = s;
            for _ in 1..p {
                cur = q.mul(cur, x);
                span.insert(cur);
            }
        }
    }
    let r = basis.len();
    if span.len() as u64 != q.order() {
        return Err(Error::Internal("basis does not span the Frattini quotient".into()));
    }

    // coordinates of every quotient element over the basis
    let mut coords: HashMap<u32, Vec<u64>> = HashMap::new();
    let mut stack = vec![(0u32, vec![0u64; r])];
    coords.insert(0, vec![0u64; r]);
    while let Some((x, cx)) = stack.pop() {
        for (i, &b) in basis.iter().enumerate() {
            if cx[i] + 1 < p {
                let y = q.mul(x, b);
                if !coords.contains_key(&y) {
                    let mut cy = cx.clone();
                    cy[i] += 1;
                    coords.insert(y, cy.clone());
                    stack.push((y, cy));
                }
            }
        }
    }
    if coords.len() as u64 != q.order() {
        return Err(Error::Internal("coordinate walk missed quotient elements".into()));
    }

    // normalized nonzero functionals, lexicographic
    let mut functionals: Vec<Vec<u64>> = Vec::new();
    let mut cur = vec![0u64; r];
    loop {
        // increment base-p counter
        let mut i = r;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < p {
                break;
            }
            cur[i] = 0;
            if i == 0 {
                cur = Vec::new();
                break;
            }
        }
        if cur.is_empty() {
            break;
        }
        if cur.iter().find(|&&a| a != 0) == Some(&1) {
            functionals.push(cur.clone());
        }
    }

    let mut out = Vec::with_capacity(functionals.len());
    for f in functionals {
        let mut members = Vec::with_capacity((g.order() / p) as usize);
        for x in 0..g.order() as u32 {
            let cx = &coords[&proj[x as usize]];
            let dot: u64 = f.iter().zip(cx).map(|(a, c)| a * c % p).sum::<u64>() % p;
            if dot == 0 {
                members.push(x);
            }
        }
        out.push(ElementSet::from_sorted(members));
    }
    Ok(out)
}

/// First abelian maximal subgroup in the deterministic enumeration order,
/// if any.
pub fn abelian_maximal_subgroup(g: &Group) -> Result<Option<ElementSet>> {
    for m in maximal_subgroups(g)? {
        let sub = g.subgroup(&m, format!("{}-max", g.label()))?;
        if sub.is_abelian() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// All normal subgroups, enumerated as multiplicatively closed unions of
/// conjugacy classes by breadth-first closure over class joins.
///
/// The search is capped: more than `limit` distinct candidates aborts with a
/// partial-result error.
pub fn normal_subgroups(
    g: &Group,
    classes: &ClassData,
    limit: Option<usize>,
) -> Result<Vec<ElementSet>> {
    let limit = limit.unwrap_or(NORMAL_SUBGROUP_CANDIDATE_LIMIT);
    let k = classes.count();

    // class-product map: classes appearing in C_i · C_j, memoized
    let mut cpm: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    let mut products = |i: u32, j: u32| -> Vec<u32> {
        if let Some(v) = cpm.get(&(i, j)) {
            return v.clone();
        }
        let rep_j = classes.reps[j as usize];
        let mut hit: BTreeSet<u32> = BTreeSet::new();
        for &x in &classes.members[i as usize] {
            hit.insert(classes.class_of[g.mul(x, rep_j) as usize]);
        }
        let v: Vec<u32> = hit.into_iter().collect();
        cpm.insert((i, j), v.clone());
        v
    };

    let close = |start: BTreeSet<u32>, products: &mut dyn FnMut(u32, u32) -> Vec<u32>| {
        let mut set = start;
        loop {
            let snapshot: Vec<u32> = set.iter().copied().collect();
            let mut grew = false;
            for &i in &snapshot {
                for &j in &snapshot {
                    for c in products(i, j) {
                        grew |= set.insert(c);
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    };

    let trivial: BTreeSet<u32> = [0u32].into_iter().collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(vec![0]);
    let mut found: Vec<BTreeSet<u32>> = vec![trivial];
    let mut head = 0;
    while head < found.len() {
        let base = found[head].clone();
        head += 1;
        for c in 0..k as u32 {
            if base.contains(&c) {
                continue;
            }
            let mut start = base.clone();
            start.insert(c);
            let closed = close(start, &mut products);
            let key: Vec<u32> = closed.iter().copied().collect();
            if seen.insert(key) {
                if seen.len() > limit {
                    return Err(Error::Partial(format!(
                        "normal subgroup search exceeded {limit} candidate sets"
                    )));
                }
                found.push(closed);
            }
        }
    }

    let mut out: Vec<ElementSet> = found
        .into_iter()
        .map(|cls| {
            let mut members = Vec::new();
            for c in cls {
                members.extend_from_slice(&classes.members[c as usize]);
            }
            ElementSet::from_unsorted(members)
        })
        .collect();
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    Ok(out)
}

/// Result of the Sylow tower search: whether a tower exists and, if so, the
/// sequence of primes peeled off (each with a normal Hall complement below).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylowTower {
    pub holds: bool,
    pub primes: Vec<u64>,
}

/// Detect a Sylow tower by looking for a prime p whose p'-elements form a
/// normal Hall subgroup (tested as: the set of elements of order coprime to
/// p has exactly the p'-part of |G| elements and is closed under
/// multiplication), then recursing into that subgroup. p-groups trivially
/// have a tower.
pub fn has_sylow_tower(g: &Group) -> Result<SylowTower> {
    if g.order() == 1 {
        return Ok(SylowTower {
            holds: true,
            primes: Vec::new(),
        });
    }
    if let Some((p, _)) = g.prime_power() {
        return Ok(SylowTower {
            holds: true,
            primes: vec![p],
        });
    }
    let orders: Vec<u64> = (0..g.order() as u32).map(|x| g.element_order(x)).collect();
    for &(p, a) in g.order_factors() {
        let hall_size = g.order() / p.pow(a);
        let members: Vec<u32> = (0..g.order() as u32)
            .filter(|&x| orders[x as usize] % p != 0)
            .collect();
        if members.len() as u64 != hall_size {
            continue;
        }
        let set = ElementSet::from_sorted(members);
        let closed = set
            .iter()
            .all(|x| set.iter().all(|y| set.contains(g.mul(x, y))));
        if !closed {
            continue;
        }
        let sub = g.subgroup(&set, format!("{}-hall-{}'", g.label(), p))?;
        let rec = has_sylow_tower(&sub)?;
        if rec.holds {
            let mut primes = vec![p];
            primes.extend(rec.primes);
            return Ok(SylowTower {
                holds: true,
                primes,
            });
        }
    }
    Ok(SylowTower {
        holds: false,
        primes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, FamilySpec};
    use crate::structure::conjugacy_classes;

    #[test]
    fn dihedral16_maximal_subgroups() {
        let g = build_family(&FamilySpec::Dihedral(16)).unwrap();
        let maxes = maximal_subgroups(&g).unwrap();
        assert_eq!(maxes.len(), 3);
        assert!(maxes.iter().all(|m| m.len() == 8));
        let abelian = abelian_maximal_subgroup(&g).unwrap().unwrap();
        // the unique abelian one is the cyclic rotation subgroup
        let sub = g.subgroup(&abelian, "U").unwrap();
        assert!(sub.is_abelian());
        assert!((0..8u32).any(|x| sub.element_order(x) == 8), "cyclic of order 8");
        let abelian_count = maxes
            .iter()
            .filter(|m| g.subgroup(m, "M").unwrap().is_abelian())
            .count();
        assert_eq!(abelian_count, 1);
    }

    #[test]
    fn q8_maximal_subgroups_are_all_abelian() {
        let g = build_family(&FamilySpec::GeneralizedQuaternion(8)).unwrap();
        let maxes = maximal_subgroups(&g).unwrap();
        assert_eq!(maxes.len(), 3);
        for m in &maxes {
            assert_eq!(m.len(), 4);
            let sub = g.subgroup(m, "M").unwrap();
            assert!(sub.is_abelian());
            assert!((0..4u32).any(|x| sub.element_order(x) == 4), "cyclic of order 4");
        }
    }

    #[test]
    fn elementary_abelian_9_has_four_maximals() {
        let g = build_family(&FamilySpec::ElementaryAbelian { p: 3, k: 2 }).unwrap();
        assert_eq!(maximal_subgroups(&g).unwrap().len(), 4);
    }

    #[test]
    fn maximal_abelian_subgroup_of_two_groups_of_maximal_class() {
        for spec in [
            FamilySpec::Dihedral(32),
            FamilySpec::Semidihedral(32),
            FamilySpec::GeneralizedQuaternion(32),
        ] {
            let g = build_family(&spec).unwrap();
            let u = abelian_maximal_subgroup(&g).unwrap().expect("exists");
            assert_eq!(u.len() as u64 * 2, g.order(), "{spec}: index 2");
        }
    }

    #[test]
    fn normal_subgroup_counts_match_known_lattices() {
        let q8 = build_family(&FamilySpec::GeneralizedQuaternion(8)).unwrap();
        let c = conjugacy_classes(&q8).unwrap();
        let normals = normal_subgroups(&q8, &c, None).unwrap();
        assert_eq!(normals.len(), 6);
        let sizes: Vec<usize> = normals.iter().map(|n| n.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 4, 4, 8]);

        let d8 = build_family(&FamilySpec::Dihedral(8)).unwrap();
        let c = conjugacy_classes(&d8).unwrap();
        assert_eq!(normal_subgroups(&d8, &c, None).unwrap().len(), 6);

        let c5 = build_family(&FamilySpec::Cyclic(5)).unwrap();
        let c = conjugacy_classes(&c5).unwrap();
        assert_eq!(normal_subgroups(&c5, &c, None).unwrap().len(), 2);
    }

    #[test]
    fn candidate_limit_yields_partial_error() {
        let g = build_family(&FamilySpec::ElementaryAbelian { p: 2, k: 4 }).unwrap();
        let c = conjugacy_classes(&g).unwrap();
        match normal_subgroups(&g, &c, Some(10)) {
            Err(Error::Partial(_)) => {}
            other => panic!("expected partial-result error, got {other:?}"),
        }
    }

    #[test]
    fn sl23_has_a_sylow_tower_with_witness() {
        let g = build_family(&FamilySpec::Sl23).unwrap();
        let t = has_sylow_tower(&g).unwrap();
        assert!(t.holds);
        assert_eq!(t.primes, vec![3, 2]);
    }

    #[test]
    fn p_groups_trivially_have_towers() {
        let g = build_family(&FamilySpec::Dihedral(16)).unwrap();
        let t = has_sylow_tower(&g).unwrap();
        assert!(t.holds);
        assert_eq!(t.primes, vec![2]);
    }

    #[test]
    fn symmetric_group_on_four_points_has_no_tower() {
        let s4 = crate::group::Group::from_permutations(
            4,
            vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]],
            "s4",
        )
        .unwrap();
        assert_eq!(s4.order(), 24);
        let t = has_sylow_tower(&s4).unwrap();
        assert!(!t.holds);
    }
}

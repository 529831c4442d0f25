//! Finite groups with an exact multiplication oracle and full element
//! enumeration.
//!
//! A [`Group`] is immutable after construction. Elements are addressed by
//! dense indices in `[0, |G|)` with the identity at index 0; every structural
//! and character-theoretic computation downstream works through the index
//! interface (`mul`, `inv`, `pow`, `element_order`) and never touches the
//! backend directly, so permutation-backed and collection-backed groups are
//! interchangeable everywhere.

mod collect;
mod family;
mod quotient;

pub use collect::{build_from_pcp, PcPresentation};
pub use family::{build_family, FamilySpec};
pub use quotient::quotient;

pub(crate) use collect::PcData;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Enumeration refuses any group larger than this. Everything the analytics
/// target is far below it; the cap keeps a typo in a presentation file from
/// silently eating the machine.
pub const ENUMERATION_CAP: u64 = 1 << 21;

/// A group element in one of the two concrete representations.
///
/// Quotient groups reuse the representation of the parent: a coset is carried
/// by its canonical (minimal-index) representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    /// Permutation of `0..d`, stored as the image array.
    Perm(Box<[u32]>),
    /// Fully collected exponent vector of a polycyclic presentation.
    Pc(Box<[u32]>),
}

impl Element {
    fn kind(&self) -> &'static str {
        match self {
            Element::Perm(_) => "permutation",
            Element::Pc(_) => "pc",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Backend {
    Perm {
        degree: usize,
    },
    Pc {
        data: Arc<PcData>,
    },
    /// Cosets of a normal subgroup of `parent`, represented by their
    /// minimal-index representatives. `coset_min[x]` is the canonical
    /// representative (a parent element index) of the coset containing `x`.
    Quotient {
        parent: Group,
        coset_min: Arc<Vec<u32>>,
        /// Parent indices of this group's elements, parallel to `elements`.
        reps: Vec<u32>,
    },
}

impl Backend {
    fn kind(&self) -> &'static str {
        match self {
            Backend::Perm { .. } => "permutation",
            Backend::Pc { .. } => "pc",
            Backend::Quotient { parent, .. } => parent.inner.backend.kind(),
        }
    }

    fn identity(&self) -> Element {
        match self {
            Backend::Perm { degree } => Element::Perm((0..*degree as u32).collect()),
            Backend::Pc { data } => Element::Pc(vec![0u32; data.ngens()].into()),
            Backend::Quotient { parent, .. } => parent.element(0).clone(),
        }
    }

    /// Multiply two elements of this backend. Quotient backends are handled
    /// at the index level and never reach this.
    fn mul_elements(&self, a: &Element, b: &Element) -> Result<Element> {
        match (self, a, b) {
            (Backend::Perm { degree }, Element::Perm(x), Element::Perm(y)) => {
                if x.len() != *degree || y.len() != *degree {
                    return Err(Error::Backend(format!(
                        "permutation degree mismatch: {} and {} in a degree-{} group",
                        x.len(),
                        y.len(),
                        degree
                    )));
                }
                // (x·y)(pt) = x(y(pt)): apply y first, then x.
                Ok(Element::Perm(y.iter().map(|&p| x[p as usize]).collect()))
            }
            (Backend::Pc { data }, Element::Pc(x), Element::Pc(y)) => {
                Ok(Element::Pc(data.multiply(x, y)?.into()))
            }
            _ => Err(Error::Backend(format!(
                "cannot multiply {} and {} elements in a {} group",
                a.kind(),
                b.kind(),
                self.kind()
            ))),
        }
    }
}

#[derive(Debug)]
struct Inner {
    backend: Backend,
    elements: Vec<Element>,
    index: HashMap<Element, u32>,
    inv: Vec<u32>,
    gens: Vec<u32>,
    label: String,
    /// Prime factorization of the order.
    factors: Vec<(u64, u32)>,
}

/// An immutable finite group with enumerated elements.
#[derive(Debug, Clone)]
pub struct Group {
    inner: Arc<Inner>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Group {
    /// Enumerate the closure of `gen_elems` under multiplication, starting at
    /// the identity, and build the index tables. Inverses are propagated along
    /// the search tree: if y = x·g then y^{-1} = g^{-1}·x^{-1}.
    pub(crate) fn enumerate(
        backend: Backend,
        gen_elems: Vec<Element>,
        label: String,
    ) -> Result<Group> {
        let identity = backend.identity();

        // Generator inverses by walking the cyclic group each generates.
        let mut gen_invs = Vec::with_capacity(gen_elems.len());
        for g in &gen_elems {
            let mut prev = identity.clone();
            let mut cur = g.clone();
            let mut steps: u64 = 0;
            while cur != identity {
                let next = backend.mul_elements(&cur, g)?;
                prev = cur;
                cur = next;
                steps += 1;
                if steps > ENUMERATION_CAP {
                    return Err(Error::OrderCap {
                        order: steps as u128,
                        cap: ENUMERATION_CAP,
                    });
                }
            }
            gen_invs.push(prev);
        }

        let mut elements = vec![identity.clone()];
        let mut inv_elems = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0u32);
        let mut head = 0usize;
        while head < elements.len() {
            for (g, ginv) in gen_elems.iter().zip(&gen_invs) {
                let y = backend.mul_elements(&elements[head], g)?;
                if !index.contains_key(&y) {
                    if elements.len() as u64 >= ENUMERATION_CAP {
                        return Err(Error::OrderCap {
                            order: elements.len() as u128 + 1,
                            cap: ENUMERATION_CAP,
                        });
                    }
                    let y_inv = backend.mul_elements(ginv, &inv_elems[head])?;
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                    inv_elems.push(y_inv);
                }
            }
            head += 1;
        }

        let inv: Vec<u32> = inv_elems
            .iter()
            .map(|e| {
                index
                    .get(e)
                    .copied()
                    .ok_or_else(|| Error::Internal("inverse escaped the enumerated set".into()))
            })
            .collect::<Result<_>>()?;

        let gens: Vec<u32> = {
            let mut seen = Vec::new();
            for g in &gen_elems {
                let i = *index
                    .get(g)
                    .ok_or_else(|| Error::Internal("generator missing from index".into()))?;
                if i != 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
            seen
        };

        let order = elements.len() as u64;
        Ok(Group {
            inner: Arc::new(Inner {
                backend,
                elements,
                index,
                inv,
                gens,
                label,
                factors: factorize(order),
            }),
        })
    }

    pub(crate) fn from_parts(
        backend: Backend,
        elements: Vec<Element>,
        inv: Vec<u32>,
        gens: Vec<u32>,
        label: String,
    ) -> Group {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        let order = elements.len() as u64;
        Group {
            inner: Arc::new(Inner {
                backend,
                elements,
                index,
                inv,
                gens,
                label,
                factors: factorize(order),
            }),
        }
    }

    /// Build a permutation group from explicit generators on `0..degree`.
    pub fn from_permutations(
        degree: usize,
        gens: Vec<Vec<u32>>,
        label: impl Into<String>,
    ) -> Result<Group> {
        let mut gen_elems = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != degree {
                return Err(Error::Domain(format!(
                    "generator has {} points, expected {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &img in &g {
                if img as usize >= degree || seen[img as usize] {
                    return Err(Error::Domain("generator is not a bijection".into()));
                }
                seen[img as usize] = true;
            }
            gen_elems.push(Element::Perm(g.into()));
        }
        Group::enumerate(Backend::Perm { degree }, gen_elems, label.into())
    }

    pub fn order(&self) -> u64 {
        self.inner.elements.len() as u64
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn relabeled(&self, label: impl Into<String>) -> Group {
        let old = &self.inner;
        Group {
            inner: Arc::new(Inner {
                backend: old.backend.clone(),
                elements: old.elements.clone(),
                index: old.index.clone(),
                inv: old.inv.clone(),
                gens: old.gens.clone(),
                label: label.into(),
                factors: old.factors.clone(),
            }),
        }
    }

    /// Prime factorization of the order.
    pub fn order_factors(&self) -> &[(u64, u32)] {
        &self.inner.factors
    }

    /// `Some((p, n))` when the order is a nontrivial prime power `p^n`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.inner.factors.as_slice() {
            [(p, n)] => Some((*p, *n)),
            _ => None,
        }
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn element(&self, i: u32) -> &Element {
        &self.inner.elements[i as usize]
    }

    pub fn elements(&self) -> &[Element] {
        &self.inner.elements
    }

    pub fn index_of(&self, e: &Element) -> Option<u32> {
        self.inner.index.get(e).copied()
    }

    pub fn generators(&self) -> &[u32] {
        &self.inner.gens
    }

    pub(crate) fn backend(&self) -> &Backend {
        &self.inner.backend
    }

    /// Product by index. Panics only on a broken internal invariant.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.inner.backend {
            Backend::Quotient {
                parent,
                coset_min,
                reps,
            } => {
                let p = parent.mul(reps[a as usize], reps[b as usize]);
                let canon = coset_min[p as usize];
                reps.binary_search(&canon)
                    .expect("coset representative missing from quotient") as u32
            }
            backend => {
                let prod = backend
                    .mul_elements(self.element(a), self.element(b))
                    .expect("enumerated elements share the group backend");
                *self
                    .inner
                    .index
                    .get(&prod)
                    .expect("group index is closed under multiplication")
            }
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inner.inv[a as usize]
    }

    /// Conjugate `x` by `g`: g^{-1}·x·g.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Commutator [a, b] = a^{-1}·b^{-1}·a·b.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.mul(self.inv(a), self.inv(b)), a), b)
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 0u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Least m ≥ 1 with g^m = 1, by stripping primes from the group order.
    pub fn element_order(&self, a: u32) -> u64 {
        let mut o = self.order();
        for &(p, _) in self.order_factors() {
            while o % p == 0 && self.pow(a, o / p) == 0 {
                o /= p;
            }
        }
        o
    }

    /// lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for i in 0..self.order() as u32 {
            let o = self.element_order(i);
            e = num_integer::lcm(e, o);
            if e == self.order() {
                break;
            }
        }
        e
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The public multiplication oracle on element values, with membership
    /// and backend validation.
    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        for e in [g, h] {
            let compatible = match (&self.inner.backend, e) {
                (Backend::Perm { .. }, Element::Perm(_)) => true,
                (Backend::Pc { .. }, Element::Pc(_)) => true,
                (Backend::Quotient { .. }, _) => self.inner.backend.kind() == e.kind(),
                _ => false,
            };
            if !compatible {
                return Err(Error::Backend(format!(
                    "{} element used with a {} group",
                    e.kind(),
                    self.inner.backend.kind()
                )));
            }
        }
        let a = self
            .index_of(g)
            .ok_or_else(|| Error::Domain("left factor is not an element of the group".into()))?;
        let b = self
            .index_of(h)
            .ok_or_else(|| Error::Domain("right factor is not an element of the group".into()))?;
        Ok(self.element(self.mul(a, b)).clone())
    }

    /// View a multiplicatively closed element set as a group in its own
    /// right. Validates closure and computes a small generating set.
    pub fn subgroup(&self, set: &ElementSet, label: impl Into<String>) -> Result<Group> {
        if !set.contains(0) {
            return Err(Error::Domain("subgroup must contain the identity".into()));
        }
        let (gens_parent, closure) = self.closure_generators(set)?;
        if closure.len() != set.len() {
            return Err(Error::Domain(
                "element set is not closed under multiplication".into(),
            ));
        }

        let rank = |x: u32| -> Result<u32> {
            set.position(x)
                .map(|p| p as u32)
                .ok_or_else(|| Error::Internal("subgroup inverse escaped the set".into()))
        };
        let elements: Vec<Element> = set.iter().map(|i| self.element(i).clone()).collect();
        let inv: Vec<u32> = set
            .iter()
            .map(|i| rank(self.inv(i)))
            .collect::<Result<_>>()?;
        let gens: Vec<u32> = gens_parent
            .iter()
            .map(|&g| rank(g))
            .collect::<Result<_>>()?;

        let backend = match &self.inner.backend {
            Backend::Quotient {
                parent,
                coset_min,
                reps,
            } => Backend::Quotient {
                parent: parent.clone(),
                coset_min: coset_min.clone(),
                reps: set.iter().map(|i| reps[i as usize]).collect(),
            },
            b => b.clone(),
        };
        Ok(Group::from_parts(backend, elements, inv, gens, label.into()))
    }

    /// Greedy generating set for a closed subset, plus the closure reached.
    /// Fails fast if the closure leaves `set`.
    fn closure_generators(&self, set: &ElementSet) -> Result<(Vec<u32>, Vec<u32>)> {
        let mut gens: Vec<u32> = Vec::new();
        let mut closed: Vec<u32> = vec![0];
        let mut member = vec![false; self.order() as usize];
        member[0] = true;
        for x in set.iter() {
            if member[x as usize] {
                continue;
            }
            gens.push(x);
            member[x as usize] = true;
            closed.push(x);
            // re-close everything under the enlarged generator list
            let mut queue: Vec<u32> = closed.clone();
            let mut head = 0;
            while head < queue.len() {
                let c = queue[head];
                head += 1;
                for &g in &gens {
                    let y = self.mul(c, g);
                    if !member[y as usize] {
                        if !set.contains(y) {
                            return Err(Error::Domain(
                                "element set is not closed under multiplication".into(),
                            ));
                        }
                        member[y as usize] = true;
                        closed.push(y);
                        queue.push(y);
                    }
                }
            }
        }
        closed.sort_unstable();
        Ok((gens, closed))
    }

    /// Closure of `seed` indices under multiplication, as a sorted set.
    pub fn generated_subgroup(&self, seed: &[u32]) -> ElementSet {
        let mut member = vec![false; self.order() as usize];
        member[0] = true;
        let mut out = vec![0u32];
        let mut queue = vec![0u32];
        let gens: Vec<u32> = seed.iter().copied().filter(|&g| g != 0).collect();
        for &g in &gens {
            if !member[g as usize] {
                member[g as usize] = true;
                out.push(g);
                queue.push(g);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in &gens {
                let y = self.mul(x, g);
                if !member[y as usize] {
                    member[y as usize] = true;
                    out.push(y);
                    queue.push(y);
                }
            }
        }
        ElementSet::from_unsorted(out)
    }
}

/// A sorted, deduplicated set of element indices of some fixed group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSet(Vec<u32>);

impl ElementSet {
    pub fn from_unsorted(mut v: Vec<u32>) -> ElementSet {
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }

    pub fn from_sorted(v: Vec<u32>) -> ElementSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        ElementSet(v)
    }

    pub fn singleton_identity() -> ElementSet {
        ElementSet(vec![0])
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: u32) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

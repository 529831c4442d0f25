//! Power-commutator presentations and collection from the left.
//!
//! A presentation has generators g_1 < g_2 < … < g_n with relative orders
//! o_i, power relations g_i^{o_i} = w_i, and commutator relations encoded as
//! the rewrite g_j·g_i = g_i·g_j·w_{j,i} for j > i. Every relation word may
//! reference only generators of index greater than i, which is what makes
//! left collection drive any word into the normal form g_1^{a_1}…g_n^{a_n}.
//!
//! Collection is not guaranteed to terminate quickly on pathological input,
//! so every product carries a step budget; exceeding it rejects the
//! presentation. Consistency is checked by closure: enumeration must produce
//! exactly ∏ o_i distinct normal forms, otherwise the relations collapse the
//! group and the presentation is rejected.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Backend, Element, Group, ENUMERATION_CAP};

/// Per-product step budget for collection from the left.
const STEP_BUDGET: u64 = 10_000_000;

/// Internal collection tables, shared by every group built on them.
#[derive(Debug, Clone)]
pub struct PcData {
    rel_orders: Vec<u64>,
    /// powers[i]: word for g_i^{o_i}, exponents over all generators.
    powers: Vec<Option<Vec<u64>>>,
    /// comms[triangle(j, i)]: word w with g_j·g_i = g_i·g_j·w, for j > i.
    comms: Vec<Option<Vec<u64>>>,
}

fn triangle(j: usize, i: usize) -> usize {
    debug_assert!(j > i);
    j * (j - 1) / 2 + i
}

impl PcData {
    pub(crate) fn new(
        rel_orders: Vec<u64>,
        powers: Vec<Option<Vec<u64>>>,
        comms: Vec<Option<Vec<u64>>>,
    ) -> PcData {
        PcData {
            rel_orders,
            powers,
            comms,
        }
    }

    /// Tables with every relation trivial (a direct product of cyclic groups).
    pub(crate) fn free_abelian(rel_orders: Vec<u64>) -> PcData {
        let n = rel_orders.len();
        PcData {
            rel_orders,
            powers: vec![None; n],
            comms: vec![None; n * (n - 1) / 2],
        }
    }

    pub(crate) fn ngens(&self) -> usize {
        self.rel_orders.len()
    }

    pub(crate) fn target_order(&self) -> u128 {
        self.rel_orders.iter().map(|&o| o as u128).product()
    }

    fn push_word(stack: &mut Vec<(u32, u64)>, word: &[u64]) {
        for (t, &a) in word.iter().enumerate().rev() {
            if a > 0 {
                stack.push((t as u32, a));
            }
        }
    }

    /// Collect `left · (letters…)` into normal form.
    fn collect(&self, left: &[u32], letters: &[(u32, u64)]) -> Result<Vec<u32>> {
        let n = self.ngens();
        let mut c: Vec<u64> = left.iter().map(|&x| x as u64).collect();
        let mut stack: Vec<(u32, u64)> = letters.iter().rev().copied().collect();
        let mut steps: u64 = 0;
        while let Some((gi, e)) = stack.pop() {
            if e == 0 {
                continue;
            }
            steps += 1;
            if steps > STEP_BUDGET {
                return Err(Error::CollectionBudget(STEP_BUDGET));
            }
            let i = gi as usize;
            // rightmost collected generator that blocks slot i
            match (i + 1..n).rev().find(|&m| c[m] > 0) {
                None => {
                    let total = c[i] + e;
                    let o = self.rel_orders[i];
                    c[i] = total % o;
                    let q = total / o;
                    if q > 0 {
                        if let Some(w) = &self.powers[i] {
                            for _ in 0..q {
                                Self::push_word(&mut stack, w);
                            }
                        }
                    }
                }
                Some(m) => {
                    // c = c'·g_m; rewrite c'·g_m·g_i^e = c'·g_i·g_m·w·g_i^{e-1}
                    c[m] -= 1;
                    if e > 1 {
                        stack.push((gi, e - 1));
                    }
                    if let Some(w) = &self.comms[triangle(m, i)] {
                        Self::push_word(&mut stack, w);
                    }
                    stack.push((m as u32, 1));
                    stack.push((gi, 1));
                }
            }
        }
        Ok(c.into_iter().map(|x| x as u32).collect())
    }

    /// Product of two normal forms.
    pub(crate) fn multiply(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        let letters: Vec<(u32, u64)> = b
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(t, &x)| (t as u32, x as u64))
            .collect();
        self.collect(a, &letters)
    }

    fn gen_nf(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.ngens()];
        v[i] = 1;
        v
    }

    fn gen_power_nf(&self, i: usize, e: u64) -> Result<Vec<u32>> {
        self.collect(&vec![0u32; self.ngens()], &[(i as u32, e)])
    }

    /// Critical-pair consistency verification. Counting normal forms alone
    /// does not rule out a non-confluent presentation whose collection
    /// product fails associativity, so every accepted presentation must
    /// resolve the standard overlaps:
    ///
    ///   g_k(g_j g_i) = (g_k g_j)g_i                 for k > j > i
    ///   g_j^{o_j} g_i = g_j^{o_j-1}(g_j g_i)        for j > i
    ///   g_j g_i^{o_i} = (g_j g_i)g_i^{o_i-1}        for j > i
    ///   g_i g_i^{o_i} = g_i^{o_i} g_i               for all i
    pub(crate) fn check_consistency(&self) -> Result<()> {
        let n = self.ngens();
        let fail = |what: String| Err(Error::Presentation(format!("inconsistent: {what}")));
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let l = self.multiply(&self.multiply(&self.gen_nf(k), &self.gen_nf(j))?, &self.gen_nf(i))?;
                    let r = self.multiply(&self.gen_nf(k), &self.multiply(&self.gen_nf(j), &self.gen_nf(i))?)?;
                    if l != r {
                        return fail(format!(
                            "(g{}·g{})·g{} differs from g{}·(g{}·g{})",
                            k + 1, j + 1, i + 1, k + 1, j + 1, i + 1
                        ));
                    }
                }
            }
        }
        for j in 0..n {
            let oj = self.rel_orders[j];
            let gj_full = self.gen_power_nf(j, oj)?;
            for i in 0..j {
                let oi = self.rel_orders[i];
                let l = self.multiply(&gj_full, &self.gen_nf(i))?;
                let mid = self.multiply(&self.gen_nf(j), &self.gen_nf(i))?;
                let r = self.multiply(&self.gen_power_nf(j, oj - 1)?, &mid)?;
                if l != r {
                    return fail(format!("power overlap at g{}^o·g{}", j + 1, i + 1));
                }
                let l = self.multiply(&self.gen_nf(j), &self.gen_power_nf(i, oi)?)?;
                let r = self.multiply(&mid, &self.gen_power_nf(i, oi - 1)?)?;
                if l != r {
                    return fail(format!("power overlap at g{}·g{}^o", j + 1, i + 1));
                }
            }
            let l = self.multiply(&self.gen_nf(j), &gj_full)?;
            let r = self.multiply(&gj_full, &self.gen_nf(j))?;
            if l != r {
                return fail(format!("power overlap at g{0}·g{0}^o", j + 1));
            }
        }
        Ok(())
    }
}

/// A validated polycyclic presentation of a p-group, the input format for
/// group catalogs. Generator indices are 1-based in `powers` and
/// `commutators`, matching the file format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcPresentation {
    pub prime: u64,
    pub ngens: usize,
    pub rel_orders: Vec<u64>,
    /// power relation g_i^{o_i} = word, keyed by i.
    pub powers: BTreeMap<usize, Vec<u64>>,
    /// rewrite g_j·g_i = g_i·g_j·word, keyed by (j, i) with j > i.
    pub commutators: BTreeMap<(usize, usize), Vec<u64>>,
    pub label: String,
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

impl PcPresentation {
    /// Structural validation; returns the first offending field by name.
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.prime) {
            return Err(Error::Presentation(format!(
                "prime: {} is not prime",
                self.prime
            )));
        }
        if self.ngens == 0 {
            return Err(Error::Presentation("ngens: must be positive".into()));
        }
        if self.rel_orders.len() != self.ngens {
            return Err(Error::Presentation(format!(
                "rel_orders: has {} entries, expected ngens = {}",
                self.rel_orders.len(),
                self.ngens
            )));
        }
        for (i, &o) in self.rel_orders.iter().enumerate() {
            let mut m = o;
            while m > 1 && m % self.prime == 0 {
                m /= self.prime;
            }
            if o < 2 || m != 1 {
                return Err(Error::Presentation(format!(
                    "rel_orders[{}]: {} is not a power of the prime {}",
                    i, o, self.prime
                )));
            }
        }
        let check_word = |field: &str, min_index: usize, word: &[u64]| -> Result<()> {
            if word.len() != self.ngens {
                return Err(Error::Presentation(format!(
                    "{field}: word has length {}, expected ngens = {}",
                    word.len(),
                    self.ngens
                )));
            }
            for (t, &a) in word.iter().enumerate() {
                if a >= self.rel_orders[t] {
                    return Err(Error::Presentation(format!(
                        "{field}: exponent out of range (entry {} is {}, relative order {})",
                        t + 1,
                        a,
                        self.rel_orders[t]
                    )));
                }
                if a > 0 && t + 1 <= min_index {
                    return Err(Error::Presentation(format!(
                        "{field}: word references generator {} but may only use generators above {}",
                        t + 1,
                        min_index
                    )));
                }
            }
            Ok(())
        };
        for (&i, word) in &self.powers {
            if i < 1 || i > self.ngens {
                return Err(Error::Presentation(format!(
                    "powers: generator index {i} out of range"
                )));
            }
            check_word(&format!("powers[{i}]"), i, word)?;
        }
        for (&(j, i), word) in &self.commutators {
            if j <= i || i < 1 {
                return Err(Error::Presentation(format!(
                    "commutators[{j},{i}]: requires j > i >= 1"
                )));
            }
            if j > self.ngens {
                return Err(Error::Presentation(format!(
                    "commutators[{j},{i}]: generator index {j} out of range"
                )));
            }
            check_word(&format!("commutators[{j},{i}]"), i, word)?;
        }
        Ok(())
    }

    pub(crate) fn to_data(&self) -> PcData {
        let n = self.ngens;
        let mut powers = vec![None; n];
        for (&i, w) in &self.powers {
            if w.iter().any(|&a| a > 0) {
                powers[i - 1] = Some(w.clone());
            }
        }
        let mut comms = vec![None; n * (n - 1) / 2];
        for (&(j, i), w) in &self.commutators {
            if w.iter().any(|&a| a > 0) {
                comms[triangle(j - 1, i - 1)] = Some(w.clone());
            }
        }
        PcData::new(self.rel_orders.clone(), powers, comms)
    }
}

/// Build the group defined by a presentation. Enumeration from the identity
/// must reach exactly ∏ rel_orders normal forms; anything less means the
/// relations are inconsistent and the input is rejected with a diagnostic.
pub fn build_from_pcp(pres: &PcPresentation) -> Result<Group> {
    pres.validate()?;
    let data = Arc::new(pres.to_data());
    data.check_consistency()?;
    let target = data.target_order();
    if target > ENUMERATION_CAP as u128 {
        return Err(Error::OrderCap {
            order: target,
            cap: ENUMERATION_CAP,
        });
    }
    let n = data.ngens();
    let gens: Vec<Element> = (0..n)
        .map(|i| {
            let mut v = vec![0u32; n];
            v[i] = 1;
            Element::Pc(v.into())
        })
        .collect();
    let group = Group::enumerate(Backend::Pc { data: data.clone() }, gens, pres.label.clone())?;
    if group.order() as u128 != target {
        return Err(Error::Presentation(format!(
            "closure yielded {} elements, expected {} = product of relative orders \
             (the relations are inconsistent)",
            group.order(),
            target
        )));
    }
    Ok(group)
}

pub(crate) fn pc_group_from_data(data: PcData, label: String) -> Result<Group> {
    data.check_consistency()?;
    let target = data.target_order();
    if target > ENUMERATION_CAP as u128 {
        return Err(Error::OrderCap {
            order: target,
            cap: ENUMERATION_CAP,
        });
    }
    let n = data.ngens();
    let data = Arc::new(data);
    let gens: Vec<Element> = (0..n)
        .map(|i| {
            let mut v = vec![0u32; n];
            v[i] = 1;
            Element::Pc(v.into())
        })
        .collect();
    let group = Group::enumerate(Backend::Pc { data }, gens, label)?;
    if group.order() as u128 != target {
        return Err(Error::Internal(format!(
            "built-in presentation collapsed: {} of {} elements",
            group.order(),
            target
        )));
    }
    Ok(group)
}

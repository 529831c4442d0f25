//! Vanishing-element analytics and the statement verification harness.
//!
//! All counted quantities derive from two exact predicates on table values:
//! the zero test and the root-of-unity test. Proportions are exact
//! rationals. Verifiers for proven statements report `Pass`/`Fail` (a `Fail`
//! would mean a counterexample or an implementation bug and always carries a
//! witness); scanners for open conjectures never assert truth — they report
//! `Consistent`, `CounterexampleCandidate`, or `InsufficientData`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::group::{ElementSet, Group};
use crate::structure::{
    abelian_maximal_subgroup, center, has_sylow_tower, is_maximal_class, normal_subgroups,
    second_center,
};

/// An exact reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub num: u64,
    pub den: u64,
}

impl Proportion {
    pub fn new(num: u64, den: u64) -> Proportion {
        debug_assert!(den > 0);
        let g = num.gcd(&den);
        Proportion {
            num: num / g,
            den: den / g,
        }
    }

    pub fn at_least_half(&self) -> bool {
        2 * self.num >= self.den
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The lower bound p^n − p^{n−1} + p² − p on vanishing elements of a
/// non-linear irreducible character of a group of order p^n.
pub fn vanishing_bound(p: u64, n: u32) -> u64 {
    p.pow(n) - p.pow(n - 1) + p * p - p
}

/// The class-2 specialization bound p^n − p^{n−2}.
pub fn class2_vanishing_bound(p: u64, n: u32) -> u64 {
    p.pow(n) - p.pow(n - 2)
}

/// Per-character vanishing statistics.
#[derive(Debug, Clone)]
pub struct ZeroProfile {
    pub char_id: String,
    pub degree: u64,
    pub faithful: bool,
    pub linear: bool,
    /// Classes where the character vanishes.
    pub vanishing_classes: Vec<u32>,
    /// Z(χ): elements where the character vanishes.
    pub zero_elements: u64,
    pub zero_class_count: u32,
    /// R(χ): elements where the value is a root of unity.
    pub root_of_unity_elements: u64,
    /// Z(χ) + R(χ).
    pub miller_count: u64,
    /// (Z + R) / |G| as an exact rational.
    pub miller: Proportion,
}

/// Exact counts for one row of a verified table, weighted by class sizes.
///
/// For p-groups this also enforces, as a runtime assertion, the proven
/// lower bound on non-linear characters; a violation is reported as an
/// internal error because it can only arise from a table bug.
pub fn zero_profile(t: &CharacterTable, idx: usize) -> Result<ZeroProfile> {
    let row = &t.rows[idx];
    let mut vanishing_classes = Vec::new();
    let mut zero_elements = 0u64;
    let mut rou_elements = 0u64;
    for (i, v) in row.values.iter().enumerate() {
        if v.is_zero() {
            vanishing_classes.push(i as u32);
            zero_elements += t.classes.sizes[i];
        } else if v.is_root_of_unity() {
            rou_elements += t.classes.sizes[i];
        }
    }
    if row.linear && zero_elements > 0 {
        return Err(Error::Internal(format!(
            "linear character {} of '{}' reports zeros",
            t.char_id(idx),
            t.label
        )));
    }
    if let Some((p, n)) = t.prime_power {
        if !row.linear && zero_elements < vanishing_bound(p, n) {
            return Err(Error::Internal(format!(
                "character {} of '{}' vanishes on {} elements, below the proven bound {}",
                t.char_id(idx),
                t.label,
                zero_elements,
                vanishing_bound(p, n)
            )));
        }
    }
    let miller_count = zero_elements + rou_elements;
    Ok(ZeroProfile {
        char_id: t.char_id(idx),
        degree: row.degree,
        faithful: row.faithful,
        linear: row.linear,
        zero_class_count: vanishing_classes.len() as u32,
        vanishing_classes,
        zero_elements,
        root_of_unity_elements: rou_elements,
        miller_count,
        miller: Proportion::new(miller_count, t.order),
    })
}

pub fn zero_profiles(t: &CharacterTable) -> Result<Vec<ZeroProfile>> {
    (0..t.rows.len()).map(|i| zero_profile(t, i)).collect()
}

/// Minimum number of vanishing elements over the non-linear irreducible
/// characters. Undefined (a domain error) for abelian groups.
pub fn mz(t: &CharacterTable) -> Result<u64> {
    let mut best: Option<u64> = None;
    for i in 0..t.rows.len() {
        if t.rows[i].linear {
            continue;
        }
        let z = zero_profile(t, i)?.zero_elements;
        best = Some(best.map_or(z, |b| b.min(z)));
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "mz is undefined for abelian group '{}' (no non-linear characters)",
            t.label
        ))
    })
}

/// One catalog entry for a minimum-vanishing scan.
#[derive(Debug, Clone)]
pub struct MzEntry {
    pub label: String,
    pub order: u64,
    pub mz: u64,
}

/// Minimum of mz over a catalog of groups of one fixed order, with every
/// group attaining it.
pub fn mz_scan(entries: &[MzEntry]) -> Result<(u64, Vec<String>)> {
    if entries.is_empty() {
        return Err(Error::Domain("mz scan over an empty catalog".into()));
    }
    let order = entries[0].order;
    if entries.iter().any(|e| e.order != order) {
        return Err(Error::Domain(
            "mz scan requires all catalog groups to share one order".into(),
        ));
    }
    let min = entries.iter().map(|e| e.mz).min().expect("nonempty");
    let mut labels: Vec<String> = entries
        .iter()
        .filter(|e| e.mz == min)
        .map(|e| e.label.clone())
        .collect();
    labels.sort();
    Ok((min, labels))
}

/// Exact zero-or-root-of-unity proportion of one character.
pub fn miller_proportion(t: &CharacterTable, idx: usize) -> Result<Proportion> {
    Ok(zero_profile(t, idx)?.miller)
}

/// The same proportion restricted to elements outside a proper normal
/// subgroup.
pub fn miller_relative(t: &CharacterTable, idx: usize, n: &ElementSet) -> Result<Proportion> {
    if n.len() as u64 >= t.order {
        return Err(Error::Domain(
            "relative proportion requires a proper normal subgroup".into(),
        ));
    }
    let row = &t.rows[idx];
    let mut hits = 0u64;
    for (i, v) in row.values.iter().enumerate() {
        let good = v.is_zero() || v.is_root_of_unity();
        if !good {
            continue;
        }
        for &x in &t.classes.members[i] {
            if !n.contains(x) {
                hits += 1;
            }
        }
    }
    Ok(Proportion::new(hits, t.order - n.len() as u64))
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

/// Identifier of a verifiable statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statement {
    #[serde(rename = "thmA")]
    ThmA,
    #[serde(rename = "thmB")]
    ThmB,
    #[serde(rename = "lemC2")]
    LemC2,
    #[serde(rename = "thmOdd")]
    ThmOdd,
    #[serde(rename = "rel")]
    Rel,
    #[serde(rename = "corMS")]
    CorMS,
    #[serde(rename = "con3max")]
    Con3Max,
    #[serde(rename = "conMZ")]
    ConMZ,
    #[serde(rename = "thmC")]
    ThmC,
    #[serde(rename = "millerRelative")]
    MillerRelative,
}

impl Statement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Statement::ThmA => "thmA",
            Statement::ThmB => "thmB",
            Statement::LemC2 => "lemC2",
            Statement::ThmOdd => "thmOdd",
            Statement::Rel => "rel",
            Statement::CorMS => "corMS",
            Statement::Con3Max => "con3max",
            Statement::ConMZ => "conMZ",
            Statement::ThmC => "thmC",
            Statement::MillerRelative => "millerRelative",
        }
    }
}

/// Outcome of one verification. Proven statements use `Pass`/`Fail`;
/// conjecture scanners use the other three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Consistent,
    CounterexampleCandidate,
    InsufficientData,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Consistent => "CONSISTENT",
            Outcome::CounterexampleCandidate => "COUNTEREXAMPLE-CANDIDATE",
            Outcome::InsufficientData => "INSUFFICIENT-DATA",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fail)
    }
}

/// The result of checking one statement against one group or catalog.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement: Statement,
    pub group: String,
    pub outcome: Outcome,
    pub witness: Vec<String>,
}

impl VerificationReport {
    pub fn new(
        statement: Statement,
        group: impl Into<String>,
        outcome: Outcome,
        witness: Vec<String>,
    ) -> VerificationReport {
        debug_assert!(
            outcome != Outcome::Fail || !witness.is_empty(),
            "failure reports must carry a witness"
        );
        VerificationReport {
            statement,
            group: group.into(),
            outcome,
            witness,
        }
    }
}

fn require_p_group(t: &CharacterTable) -> Result<(u64, u32)> {
    t.prime_power
        .ok_or_else(|| Error::Domain(format!("'{}' is not a p-group", t.label)))
}

/// The vanishing lower bound plus the structure of its equality case.
///
/// Emits two reports: one for the bound over all non-linear characters, and
/// one for the equality analysis (faithfulness, degree p, maximal class, an
/// abelian maximal subgroup, and for orders above p³ the exact zero set
/// (G − U) ∪ (Z₂(G) − Z(G))).
pub fn verify_thm_b(g: &Group, t: &CharacterTable) -> Result<Vec<VerificationReport>> {
    let (p, n) = require_p_group(t)?;
    let bound = vanishing_bound(p, n);
    let profiles = zero_profiles(t)?;

    let nonlinear: Vec<&ZeroProfile> = profiles.iter().filter(|pr| !pr.linear).collect();
    if nonlinear.is_empty() {
        return Ok(vec![
            VerificationReport::new(
                Statement::ThmB,
                &t.label,
                Outcome::Pass,
                vec!["abelian: no non-linear characters, bound holds vacuously".into()],
            ),
            VerificationReport::new(
                Statement::ThmOdd,
                &t.label,
                Outcome::Pass,
                vec!["no equality witnesses".into()],
            ),
        ]);
    }

    let mut bound_witness = Vec::new();
    let mut bound_ok = true;
    for pr in &nonlinear {
        if pr.zero_elements < bound {
            bound_ok = false;
            bound_witness.push(format!(
                "{} (degree {}) vanishes on {} < {}",
                pr.char_id, pr.degree, pr.zero_elements, bound
            ));
        }
    }
    if bound_ok {
        bound_witness.push(format!(
            "all {} non-linear characters vanish on at least {} of {} elements",
            nonlinear.len(),
            bound,
            t.order
        ));
    }

    let witnesses: Vec<&ZeroProfile> = nonlinear
        .iter()
        .copied()
        .filter(|pr| pr.zero_elements == bound)
        .collect();
    let mut eq_witness = Vec::new();
    let mut eq_ok = true;
    if witnesses.is_empty() {
        eq_witness.push("no character attains the bound exactly".into());
    } else {
        let maximal = is_maximal_class(g, &t.classes)?;
        let abelian_max = abelian_maximal_subgroup(g)?;
        if !maximal {
            eq_ok = false;
            eq_witness.push("equality attained but the group is not of maximal class".into());
        }
        if abelian_max.is_none() {
            eq_ok = false;
            eq_witness.push("equality attained but no maximal subgroup is abelian".into());
        }
        for pr in &witnesses {
            if !pr.faithful {
                eq_ok = false;
                eq_witness.push(format!("{} attains equality but is not faithful", pr.char_id));
            }
            if pr.degree != p {
                eq_ok = false;
                eq_witness.push(format!(
                    "{} attains equality with degree {} ≠ {}",
                    pr.char_id, pr.degree, p
                ));
            }
        }
        if n > 3 {
            if let Some(u) = &abelian_max {
                let z = center(g, &t.classes);
                let z2 = second_center(g, &t.classes)?;
                for pr in &witnesses {
                    let mut zeros: Vec<u32> = Vec::new();
                    for &c in &pr.vanishing_classes {
                        zeros.extend_from_slice(&t.classes.members[c as usize]);
                    }
                    let zeros = ElementSet::from_unsorted(zeros);
                    let mut expected: Vec<u32> = (0..g.order() as u32)
                        .filter(|&x| !u.contains(x))
                        .collect();
                    expected.extend(z2.iter().filter(|&x| !z.contains(x)));
                    let expected = ElementSet::from_unsorted(expected);
                    if zeros != expected {
                        eq_ok = false;
                        eq_witness.push(format!(
                            "{}: zero set differs from (G − U) ∪ (Z₂ − Z)",
                            pr.char_id
                        ));
                    }
                }
            }
        }
        if eq_ok {
            let ids: Vec<String> = witnesses.iter().map(|pr| pr.char_id.clone()).collect();
            eq_witness.push(format!(
                "equality witnesses [{}]: faithful, degree {}, maximal class, abelian maximal subgroup{}",
                ids.join(", "),
                p,
                if n > 3 { ", exact zero-set structure" } else { "" }
            ));
        }
    }

    Ok(vec![
        VerificationReport::new(
            Statement::ThmB,
            &t.label,
            if bound_ok { Outcome::Pass } else { Outcome::Fail },
            bound_witness,
        ),
        VerificationReport::new(
            Statement::ThmOdd,
            &t.label,
            if eq_ok { Outcome::Pass } else { Outcome::Fail },
            eq_witness,
        ),
    ])
}

/// For 2-groups: some character vanishes on exactly 2^{n−1}+2 elements iff
/// the group is of maximal class. Checked over the supplied catalog only.
pub fn verify_thm_a(catalog: &[(Group, CharacterTable)]) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (g, t) in catalog {
        let (p, n) = require_p_group(t)?;
        if p != 2 {
            return Err(Error::Domain(format!(
                "'{}' has odd order; the 2-group criterion does not apply",
                t.label
            )));
        }
        let bound = vanishing_bound(2, n);
        let attained = if g.is_abelian() {
            false
        } else {
            mz(t)? == bound
        };
        let maximal = is_maximal_class(g, &t.classes)?;
        let ok = attained == maximal;
        let mut witness = vec![format!(
            "order 2^{n}: minimum vanishing bound {bound}, attained = {attained}, maximal class = {maximal}"
        )];
        witness.push("scope-limited: equivalence checked over the supplied catalog only".into());
        out.push(VerificationReport::new(
            Statement::ThmA,
            &t.label,
            if ok { Outcome::Pass } else { Outcome::Fail },
            witness,
        ));
    }
    Ok(out)
}

/// Class-2 specialization: every non-linear character of a class-≤2 p-group
/// vanishes on at least p^n − p^{n−2} elements, and equality with the
/// general bound forces n = 3.
pub fn verify_lem_c2(g: &Group, t: &CharacterTable) -> Result<VerificationReport> {
    let (p, n) = require_p_group(t)?;
    let class = crate::structure::nilpotency_class(g)?
        .ok_or_else(|| Error::Internal(format!("p-group '{}' not nilpotent", t.label)))?;
    if class > 2 {
        return Err(Error::Domain(format!(
            "'{}' has nilpotency class {class}; the specialization needs class at most 2",
            t.label
        )));
    }
    let mut witness = Vec::new();
    let mut ok = true;
    let strong = class2_vanishing_bound(p, n);
    for pr in zero_profiles(t)? {
        if pr.linear {
            continue;
        }
        if pr.zero_elements < strong {
            ok = false;
            witness.push(format!(
                "{} vanishes on {} < {}",
                pr.char_id, pr.zero_elements, strong
            ));
        }
        if pr.zero_elements == vanishing_bound(p, n) && n != 3 {
            ok = false;
            witness.push(format!(
                "{} attains the general bound with n = {n} ≠ 3",
                pr.char_id
            ));
        }
    }
    if ok {
        witness.push(format!(
            "all non-linear characters vanish on at least {strong} elements (class {class})"
        ));
    }
    Ok(VerificationReport::new(
        Statement::LemC2,
        &t.label,
        if ok { Outcome::Pass } else { Outcome::Fail },
        witness,
    ))
}

/// Equivalence for faithful characters: vanishing on exactly
/// p^n − p^{n−1} + p² − p elements iff vanishing on exactly p² − 1 classes.
pub fn verify_rel(t: &CharacterTable) -> Result<VerificationReport> {
    let (p, n) = require_p_group(t)?;
    let bound = vanishing_bound(p, n);
    let class_target = p * p - 1;
    let mut witness = Vec::new();
    let mut ok = true;
    let mut any_faithful = false;
    for pr in zero_profiles(t)? {
        if !pr.faithful {
            continue;
        }
        any_faithful = true;
        let lhs = pr.zero_elements == bound;
        let rhs = pr.zero_class_count as u64 == class_target;
        if lhs != rhs {
            ok = false;
            witness.push(format!(
                "{}: {} zero elements (target {}), {} zero classes (target {})",
                pr.char_id, pr.zero_elements, bound, pr.zero_class_count, class_target
            ));
        } else {
            witness.push(format!(
                "{}: element count {} {} target, class count {} {} target — equivalent",
                pr.char_id,
                pr.zero_elements,
                if lhs { "=" } else { "≠" },
                pr.zero_class_count,
                if rhs { "=" } else { "≠" },
            ));
        }
    }
    if !any_faithful {
        witness.push("vacuous: no faithful irreducible character".into());
    }
    Ok(VerificationReport::new(
        Statement::Rel,
        &t.label,
        if ok { Outcome::Pass } else { Outcome::Fail },
        witness,
    ))
}

/// Smallest prime that does not divide m.
pub fn smallest_prime_not_dividing(m: u64) -> u64 {
    let mut p = 2u64;
    loop {
        let is_prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if is_prime && m % p != 0 {
            return p;
        }
        p += 1;
    }
}

/// Order-bound consistency for p > 3: a group attaining the vanishing bound
/// has order at most p^{r+1}, r the smallest prime not dividing p − 1.
/// Data-gated: with no catalog the check degrades to the bound computation.
pub fn verify_cor_ms(
    p: u64,
    catalog: &[(Group, CharacterTable)],
) -> Result<Vec<VerificationReport>> {
    if p <= 3 {
        return Err(Error::Domain(format!(
            "the order bound needs p > 3, got {p}"
        )));
    }
    let r = smallest_prime_not_dividing(p - 1);
    let mut out = Vec::new();
    let mut witness = vec![format!(
        "p = {p}: smallest prime not dividing {} is r = {r}; attaining groups have order ≤ p^{}",
        p - 1,
        r + 1
    )];
    if catalog.is_empty() {
        witness.push("scope-limited: no catalog ingested, bound computation only".into());
        out.push(VerificationReport::new(
            Statement::CorMS,
            format!("p={p}"),
            Outcome::InsufficientData,
            witness,
        ));
        return Ok(out);
    }
    out.push(VerificationReport::new(
        Statement::CorMS,
        format!("p={p}"),
        Outcome::Pass,
        witness,
    ));
    for (g, t) in catalog {
        let (pg, n) = require_p_group(t)?;
        if pg != p {
            return Err(Error::Domain(format!(
                "catalog group '{}' is a {pg}-group, expected p = {p}",
                t.label
            )));
        }
        let bound = vanishing_bound(p, n);
        let attained = !g.is_abelian() && mz(t)? == bound;
        let ok = !attained || n <= r as u32 + 1;
        out.push(VerificationReport::new(
            Statement::CorMS,
            &t.label,
            if ok { Outcome::Pass } else { Outcome::Fail },
            vec![format!(
                "order p^{n}: bound {bound} attained = {attained}, permitted up to p^{}",
                r + 1
            )],
        ));
    }
    Ok(out)
}

fn structural_predicate(g: &Group, t: &CharacterTable) -> Result<bool> {
    Ok(is_maximal_class(g, &t.classes)? && abelian_maximal_subgroup(g)?.is_some())
}

/// Conjecture scan for 3-groups: a character vanishing on exactly
/// 3^n − 3^{n−1} + 6 elements should exist iff the group has maximal class
/// with an abelian maximal subgroup. The forward direction is proven; a
/// predicate-true group that fails to attain is a counterexample candidate.
pub fn verify_con_3max(
    catalog: &[(Group, CharacterTable)],
) -> Result<Vec<VerificationReport>> {
    if catalog.is_empty() {
        return Ok(vec![VerificationReport::new(
            Statement::Con3Max,
            "catalog",
            Outcome::InsufficientData,
            vec!["no 3-group catalog supplied".into()],
        )]);
    }
    let mut out = Vec::new();
    for (g, t) in catalog {
        let (p, n) = require_p_group(t)?;
        if p != 3 {
            return Err(Error::Domain(format!(
                "catalog group '{}' is not a 3-group",
                t.label
            )));
        }
        let target = vanishing_bound(3, n);
        let attained = !g.is_abelian()
            && zero_profiles(t)?
                .iter()
                .any(|pr| !pr.linear && pr.zero_elements == target);
        let predicate = structural_predicate(g, t)?;
        let (outcome, note) = match (attained, predicate) {
            (true, true) | (false, false) => (Outcome::Consistent, "consistent"),
            (true, false) => (Outcome::Fail, "attains the bound without the structure (would contradict the proven direction)"),
            (false, true) => (
                Outcome::CounterexampleCandidate,
                "maximal class with abelian maximal subgroup but no character attains the target",
            ),
        };
        out.push(VerificationReport::new(
            Statement::Con3Max,
            &t.label,
            outcome,
            vec![format!(
                "target {target}: attained = {attained}, structural predicate = {predicate} — {note}"
            )],
        ));
    }
    Ok(out)
}

/// Conjecture scan at a fixed order p^n: mz(G) should equal the catalog
/// minimum iff G has maximal class with an abelian maximal (normal)
/// subgroup. Both directions are open, so mismatches are candidates.
pub fn verify_con_mz(catalog: &[(Group, CharacterTable)]) -> Result<Vec<VerificationReport>> {
    let non_abelian: Vec<&(Group, CharacterTable)> =
        catalog.iter().filter(|(g, _)| !g.is_abelian()).collect();
    if non_abelian.is_empty() {
        return Ok(vec![VerificationReport::new(
            Statement::ConMZ,
            "catalog",
            Outcome::InsufficientData,
            vec!["no non-abelian groups in the catalog".into()],
        )]);
    }
    let order = non_abelian[0].1.order;
    if non_abelian.iter().any(|(_, t)| t.order != order) {
        return Err(Error::Domain(
            "the minimum scan requires a catalog of one fixed order".into(),
        ));
    }
    let entries: Vec<MzEntry> = non_abelian
        .iter()
        .map(|(_, t)| {
            Ok(MzEntry {
                label: t.label.clone(),
                order: t.order,
                mz: mz(t)?,
            })
        })
        .collect::<Result<_>>()?;
    let (minimum, argmin) = mz_scan(&entries)?;
    let mut out = vec![VerificationReport::new(
        Statement::ConMZ,
        format!("catalog-of-order-{order}"),
        Outcome::Consistent,
        vec![format!(
            "minimum vanishing count over {} non-abelian groups: {} (attained by [{}])",
            entries.len(),
            minimum,
            argmin.join(", ")
        )],
    )];
    for ((g, t), entry) in non_abelian.iter().zip(&entries) {
        let attains = entry.mz == minimum;
        let predicate = structural_predicate(g, t)?;
        let outcome = if attains == predicate {
            Outcome::Consistent
        } else {
            Outcome::CounterexampleCandidate
        };
        out.push(VerificationReport::new(
            Statement::ConMZ,
            &t.label,
            outcome,
            vec![format!(
                "mz = {} (catalog minimum {minimum}), structural predicate = {predicate}",
                entry.mz
            )],
        ));
    }
    Ok(out)
}

/// For groups with a Sylow tower: every irreducible character is zero or a
/// root of unity on at least half the elements.
pub fn verify_thm_c(g: &Group, t: &CharacterTable) -> Result<VerificationReport> {
    let tower = has_sylow_tower(g)?;
    if !tower.holds {
        return Err(Error::Domain(format!(
            "'{}' has no Sylow tower; the proportion bound does not apply",
            t.label
        )));
    }
    let mut ok = true;
    let mut worst: Option<Proportion> = None;
    let mut witness = vec![format!(
        "Sylow tower primes: [{}]",
        tower
            .primes
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )];
    for (i, pr) in zero_profiles(t)?.iter().enumerate() {
        if !pr.miller.at_least_half() {
            ok = false;
            witness.push(format!(
                "{} has zero-or-root-of-unity proportion {} < 1/2",
                t.char_id(i),
                pr.miller
            ));
        }
        let replace = worst.map_or(true, |w| {
            (pr.miller.num as u128) * (w.den as u128) < (w.num as u128) * (pr.miller.den as u128)
        });
        if replace {
            worst = Some(pr.miller);
        }
    }
    if ok {
        witness.push(format!(
            "all {} characters have proportion ≥ 1/2 (minimum {})",
            t.rows.len(),
            worst.expect("at least the trivial character")
        ));
    }
    Ok(VerificationReport::new(
        Statement::ThmC,
        &t.label,
        if ok { Outcome::Pass } else { Outcome::Fail },
        witness,
    ))
}

/// Conjecture scan: the zero-or-root-of-unity proportion outside every
/// proper normal subgroup is at least 1/2 for every irreducible character.
pub fn verify_miller(g: &Group, t: &CharacterTable) -> Result<VerificationReport> {
    let normals = normal_subgroups(g, &t.classes, None)?;
    let mut ok = true;
    let mut witness = Vec::new();
    let mut checked = 0usize;
    for idx in 0..t.rows.len() {
        for n in &normals {
            if n.len() as u64 == t.order {
                continue;
            }
            checked += 1;
            let prop = miller_relative(t, idx, n)?;
            if !prop.at_least_half() {
                ok = false;
                witness.push(format!(
                    "{} outside the normal subgroup of order {}: proportion {} < 1/2",
                    t.char_id(idx),
                    n.len(),
                    prop
                ));
            }
        }
    }
    if ok {
        witness.push(format!(
            "{} (character, proper normal subgroup) pairs all have proportion ≥ 1/2",
            checked
        ));
    }
    Ok(VerificationReport::new(
        Statement::MillerRelative,
        &t.label,
        if ok {
            Outcome::Consistent
        } else {
            Outcome::CounterexampleCandidate
        },
        witness,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::group::{build_family, build_from_pcp, FamilySpec, PcPresentation};
    use std::collections::BTreeMap;

    fn analyzed(spec: &FamilySpec) -> (Group, CharacterTable) {
        let g = build_family(spec).unwrap();
        let t = character_table(&g).unwrap();
        (g, t)
    }

    #[test]
    fn dihedral8_degree2_profile() {
        let (_, t) = analyzed(&FamilySpec::Dihedral(8));
        let idx = t.rows.iter().position(|r| r.degree == 2).unwrap();
        let pr = zero_profile(&t, idx).unwrap();
        assert_eq!(pr.zero_elements, 6);
        assert_eq!(pr.miller, Proportion::new(6, 8));
    }

    #[test]
    fn trivial_character_profile() {
        let (_, t) = analyzed(&FamilySpec::Dihedral(8));
        let pr = zero_profile(&t, 0).unwrap();
        assert_eq!(pr.zero_elements, 0);
        assert_eq!(pr.root_of_unity_elements, 8);
        assert_eq!(pr.miller, Proportion::new(1, 1));
    }

    #[test]
    fn extraspecial125_equality_statistics() {
        let (_, t) = analyzed(&FamilySpec::Extraspecial { p: 5, exponent: 5 });
        for pr in zero_profiles(&t).unwrap() {
            if pr.linear {
                continue;
            }
            assert_eq!(pr.degree, 5);
            assert_eq!(pr.zero_elements, 120);
            assert_eq!(pr.zero_class_count, 24);
        }
    }

    #[test]
    fn known_minimum_vanishing_counts() {
        let (_, t) = analyzed(&FamilySpec::Dihedral(16));
        assert_eq!(mz(&t).unwrap(), 10);
        let (_, t) = analyzed(&FamilySpec::GeneralizedQuaternion(8));
        assert_eq!(mz(&t).unwrap(), 6);
        let (_, t) = analyzed(&FamilySpec::Cyclic(9));
        assert!(matches!(mz(&t), Err(Error::Domain(_))));
    }

    #[test]
    fn product_with_c2_exceeds_the_two_group_minimum() {
        let (_, t) = analyzed(&FamilySpec::DirectProduct(vec![
            FamilySpec::Cyclic(2),
            FamilySpec::Dihedral(8),
        ]));
        assert_eq!(mz(&t).unwrap(), 12);
    }

    #[test]
    fn mz_scan_over_order_16_catalog() {
        let mut entries = Vec::new();
        for spec in [
            FamilySpec::Dihedral(16),
            FamilySpec::Semidihedral(16),
            FamilySpec::GeneralizedQuaternion(16),
            FamilySpec::DirectProduct(vec![FamilySpec::Cyclic(2), FamilySpec::Dihedral(8)]),
        ] {
            let (_, t) = analyzed(&spec);
            entries.push(MzEntry {
                label: t.label.clone(),
                order: t.order,
                mz: mz(&t).unwrap(),
            });
        }
        let (min, labels) = mz_scan(&entries).unwrap();
        assert_eq!(min, 10);
        assert_eq!(
            labels,
            vec!["dihedral:16", "quaternion:16", "semidihedral:16"]
        );
        assert!(mz_scan(&[]).is_err());
    }

    #[test]
    fn relative_proportion_outside_the_center() {
        let (g, t) = analyzed(&FamilySpec::Dihedral(8));
        let idx = t.rows.iter().position(|r| r.degree == 2).unwrap();
        let z = center(&g, &t.classes);
        let prop = miller_relative(&t, idx, &z).unwrap();
        assert_eq!(prop, Proportion::new(1, 1), "all six zeros lie outside the center");
        let all = ElementSet::from_unsorted((0..8).collect());
        assert!(miller_relative(&t, idx, &all).is_err());
    }

    #[test]
    fn bound_and_equality_analysis_on_extraspecial_343() {
        let (g, t) = analyzed(&FamilySpec::Extraspecial { p: 7, exponent: 7 });
        let reports = verify_thm_b(&g, &t).unwrap();
        assert!(reports.iter().all(|r| r.outcome == Outcome::Pass));
        // every non-linear character vanishes on exactly 343 − 7 = 336 elements
        for pr in zero_profiles(&t).unwrap() {
            if !pr.linear {
                assert_eq!(pr.zero_elements, 336);
            }
        }
    }

    #[test]
    fn equality_structure_with_zero_set_on_dihedral16() {
        let (g, t) = analyzed(&FamilySpec::Dihedral(16));
        let reports = verify_thm_b(&g, &t).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.outcome == Outcome::Pass), "{reports:?}");
        assert!(reports[1].witness[0].contains("exact zero-set structure"));
    }

    #[test]
    fn two_group_equivalence_over_builtin_catalog() {
        let mut catalog = Vec::new();
        for spec in [
            FamilySpec::Dihedral(16),
            FamilySpec::Semidihedral(16),
            FamilySpec::GeneralizedQuaternion(16),
            FamilySpec::DirectProduct(vec![FamilySpec::Cyclic(2), FamilySpec::Dihedral(8)]),
            FamilySpec::ElementaryAbelian { p: 2, k: 4 },
        ] {
            catalog.push(analyzed(&spec));
        }
        let reports = verify_thm_a(&catalog).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.outcome == Outcome::Pass), "{reports:?}");
    }

    #[test]
    fn element_class_equivalence_on_dihedral16() {
        let (_, t) = analyzed(&FamilySpec::Dihedral(16));
        let report = verify_rel(&t).unwrap();
        assert_eq!(report.outcome, Outcome::Pass);
        // the faithful degree-2 characters vanish on 10 elements and 3 classes
        for pr in zero_profiles(&t).unwrap() {
            if pr.faithful {
                assert_eq!(pr.zero_elements, 10);
                assert_eq!(pr.zero_class_count, 3);
            }
        }
    }

    fn central_product_16() -> Group {
        // central product of the order-8 dihedral group with a cyclic group
        // of order 4: class 2, order 16, with faithful degree-2 characters
        let mut powers = BTreeMap::new();
        powers.insert(2, vec![0, 0, 0, 1]);
        powers.insert(3, vec![0, 0, 0, 1]);
        let mut commutators = BTreeMap::new();
        commutators.insert((2, 1), vec![0, 0, 0, 1]);
        build_from_pcp(&PcPresentation {
            prime: 2,
            ngens: 4,
            rel_orders: vec![2, 2, 2, 2],
            powers,
            commutators,
            label: "centralprod:16".into(),
        })
        .unwrap()
    }

    #[test]
    fn class2_group_fails_both_sides_of_the_equivalence() {
        let g = central_product_16();
        assert_eq!(g.order(), 16);
        let t = character_table(&g).unwrap();
        assert_eq!(
            crate::structure::nilpotency_class(&g).unwrap(),
            Some(2)
        );
        let report = verify_rel(&t).unwrap();
        assert_eq!(report.outcome, Outcome::Pass);
        let faithful: Vec<ZeroProfile> = zero_profiles(&t)
            .unwrap()
            .into_iter()
            .filter(|p| p.faithful)
            .collect();
        assert!(!faithful.is_empty());
        for pr in &faithful {
            // zeros = G − Z(χ): 12 elements in 6 classes; both sides false
            assert_eq!(pr.zero_elements, 12);
            assert_ne!(pr.zero_elements, vanishing_bound(2, 4));
            assert_ne!(pr.zero_class_count as u64, 3);
        }
        let lem = verify_lem_c2(&g, &t).unwrap();
        assert_eq!(lem.outcome, Outcome::Pass);
    }

    #[test]
    fn order_bound_parameters() {
        assert_eq!(smallest_prime_not_dividing(4), 3);
        assert_eq!(smallest_prime_not_dividing(6), 5);
        assert_eq!(smallest_prime_not_dividing(10), 3);
        let reports = verify_cor_ms(5, &[]).unwrap();
        assert_eq!(reports[0].outcome, Outcome::InsufficientData);
        assert!(reports[0].witness[0].contains("r = 3"));
        let reports = verify_cor_ms(7, &[]).unwrap();
        assert!(reports[0].witness[0].contains("r = 5"));
        assert!(verify_cor_ms(3, &[]).is_err());
    }

    #[test]
    fn three_group_scan_on_extraspecials() {
        let catalog = vec![
            analyzed(&FamilySpec::Extraspecial { p: 3, exponent: 3 }),
            analyzed(&FamilySpec::Extraspecial { p: 3, exponent: 9 }),
            analyzed(&FamilySpec::ElementaryAbelian { p: 3, k: 3 }),
        ];
        let reports = verify_con_3max(&catalog).unwrap();
        assert!(reports
            .iter()
            .all(|r| r.outcome == Outcome::Consistent), "{reports:?}");
        let empty = verify_con_3max(&[]).unwrap();
        assert_eq!(empty[0].outcome, Outcome::InsufficientData);
    }

    #[test]
    fn tower_proportion_bound_on_sl23() {
        let (g, t) = analyzed(&FamilySpec::Sl23);
        // the three degree-2 characters vanish on exactly 6 elements
        let mut two_dim = 0;
        for pr in zero_profiles(&t).unwrap() {
            if pr.degree == 2 {
                two_dim += 1;
                assert_eq!(pr.zero_elements, 6);
            }
            assert!(pr.miller.at_least_half());
        }
        assert_eq!(two_dim, 3);
        let report = verify_thm_c(&g, &t).unwrap();
        assert_eq!(report.outcome, Outcome::Pass);
        assert!(report.witness[0].contains("[3, 2]"));
    }

    #[test]
    fn tower_requirement_is_enforced() {
        let s4 = Group::from_permutations(4, vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]], "s4")
            .unwrap();
        let t = character_table(&s4).unwrap();
        assert!(matches!(verify_thm_c(&s4, &t), Err(Error::Domain(_))));
    }

    #[test]
    fn miller_relative_scan_is_consistent_on_small_groups() {
        for spec in [
            FamilySpec::Dihedral(8),
            FamilySpec::GeneralizedQuaternion(8),
            FamilySpec::Sl23,
            FamilySpec::Cyclic(6),
        ] {
            let (g, t) = analyzed(&spec);
            let report = verify_miller(&g, &t).unwrap();
            assert_eq!(report.outcome, Outcome::Consistent, "{spec}");
        }
    }

    #[test]
    fn cyclic_groups_are_pure_roots_of_unity() {
        let (_, t) = analyzed(&FamilySpec::Cyclic(12));
        for pr in zero_profiles(&t).unwrap() {
            assert_eq!(pr.zero_elements, 0);
            assert_eq!(pr.root_of_unity_elements, 12);
            assert_eq!(pr.miller, Proportion::new(1, 1));
        }
    }
}

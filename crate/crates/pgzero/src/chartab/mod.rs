//! Exact irreducible character tables via the modular class-algebra method.
//!
//! Pipeline: structure constants of the class algebra → a prime ℓ ≡ 1 (mod
//! exponent) with ℓ > 2√|G| → simultaneous eigenvectors of the class
//! matrices over F_ℓ → degrees and modular character values → exact
//! cyclotomic values by discrete Fourier sums over the power maps. The lift
//! is exact because every root-of-unity multiplicity is bounded by the
//! degree, hence below ℓ/2.
//!
//! Rows are sorted canonically (trivial character first, then by degree and
//! lexicographic value encoding), so a table is bit-identical across runs
//! and thread counts.

mod modp;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cyclo::{self, CycInt};
use crate::error::{Error, Result};
use crate::group::{ElementSet, Group};
use crate::structure::{conjugacy_classes, ClassData};
use modp::{
    addmod, charpoly, invmod, is_prime_u64, kernel_basis, mat_vec, mulmod, powmod,
    primitive_root, roots_mod_p, rref, sqrt_mod, submod,
};

/// Sparse structure constants of the class algebra together with the
/// modular setup used to split it.
#[derive(Debug, Clone)]
pub struct ClassAlgebraTables {
    /// constants[i][j] = sorted sparse row of a_{ijk}: C_i·C_j = Σ_k a_{ijk} C_k.
    pub constants: Vec<Vec<Vec<(u32, u64)>>>,
    /// The working prime ℓ.
    pub modulus: u64,
    /// A primitive e-th root of unity mod ℓ.
    pub root: u64,
    /// Group exponent e.
    pub exponent: u64,
}

/// Smallest prime ℓ ≡ 1 (mod e) with ℓ² > 4·order, together with a
/// primitive e-th root of unity mod ℓ.
pub fn choose_prime(order: u64, e: u64) -> Result<(u64, u64)> {
    let mut candidate = e + 1;
    loop {
        if candidate as u128 > 1 << 40 {
            return Err(Error::Internal(format!(
                "no working prime below 2^40 for order {order}, exponent {e}"
            )));
        }
        if (candidate as u128) * (candidate as u128) > 4 * order as u128
            && is_prime_u64(candidate)
        {
            let g = primitive_root(candidate)?;
            let z = powmod(g, (candidate - 1) / e, candidate);
            return Ok((candidate, z));
        }
        candidate += e;
    }
}

/// Compute the structure constants a_{ijk} of the class algebra.
///
/// For each pair (i, j), every x ∈ C_i is multiplied by the fixed
/// representative of C_j and the landing classes are tallied; the tally is
/// rescaled by |C_j|/|C_k|, which must divide exactly. Every row is checked
/// against Σ_k a_{ijk}·|C_k| = |C_i|·|C_j|.
pub fn structure_constants(g: &Group, classes: &ClassData) -> Result<ClassAlgebraTables> {
    let k = classes.count();
    let (modulus, root) = choose_prime(g.order(), classes.exponent)?;

    let constants: Vec<Vec<Vec<(u32, u64)>>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rows = Vec::with_capacity(k);
            let mut tally = vec![0u64; k];
            for j in 0..k {
                let rep_j = classes.reps[j];
                for &x in &classes.members[i] {
                    tally[classes.class_of[g.mul(x, rep_j) as usize] as usize] += 1;
                }
                let mut row = Vec::new();
                let mut weighted_sum: u128 = 0;
                for (t, cnt) in tally.iter_mut().enumerate() {
                    if *cnt == 0 {
                        continue;
                    }
                    let num = *cnt as u128 * classes.sizes[j] as u128;
                    let den = classes.sizes[t] as u128;
                    if num % den != 0 {
                        return Err(Error::Internal(format!(
                            "structure constant a[{i}][{j}][{t}] is not integral"
                        )));
                    }
                    let a = (num / den) as u64;
                    weighted_sum += a as u128 * classes.sizes[t] as u128;
                    row.push((t as u32, a));
                    *cnt = 0;
                }
                if weighted_sum != classes.sizes[i] as u128 * classes.sizes[j] as u128 {
                    return Err(Error::Internal(format!(
                        "row sum of structure constants fails at classes ({i}, {j})"
                    )));
                }
                rows.push(row);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;

    Ok(ClassAlgebraTables {
        constants,
        modulus,
        root,
        exponent: classes.exponent,
    })
}

fn class_matrix(tables: &ClassAlgebraTables, j: usize, k: usize) -> Vec<Vec<u64>> {
    let p = tables.modulus;
    let mut m = vec![vec![0u64; k]; k];
    for (i, row) in m.iter_mut().enumerate() {
        for &(t, a) in &tables.constants[j][i] {
            row[t as usize] = a % p;
        }
    }
    m
}

/// The modular irreducible characters: common eigenvectors of the class
/// matrices over F_ℓ, converted to character values χ_ℓ(g_i) = d·ω_i/h_i.
/// Rows come back in a canonical (sorted) order; each row's entry at the
/// identity class is the degree, chosen as the representative below ℓ/2.
pub fn modular_characters(
    tables: &ClassAlgebraTables,
    classes: &ClassData,
    order: u64,
) -> Result<Vec<Vec<u64>>> {
    let k = classes.count();
    let p = tables.modulus;

    // common eigenspace refinement, deterministic over the class matrices
    let mut subspaces: Vec<(Vec<Vec<u64>>, Vec<usize>)> = {
        let mut basis = vec![vec![0u64; k]; k];
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = 1;
        }
        vec![(basis, (0..k).collect())]
    };
    for j in 1..k {
        if subspaces.iter().all(|(b, _)| b.len() == 1) {
            break;
        }
        let m = class_matrix(tables, j, k);
        let mut next = Vec::with_capacity(subspaces.len());
        for (basis, pivots) in subspaces {
            let d = basis.len();
            if d == 1 {
                next.push((basis, pivots));
                continue;
            }
            // restriction of M to the subspace, in RREF-basis coordinates
            let images: Vec<Vec<u64>> = basis.iter().map(|b| mat_vec(&m, b, p)).collect();
            let mut restricted = vec![vec![0u64; d]; d];
            for (s, w) in images.iter().enumerate() {
                for (t, &pc) in pivots.iter().enumerate() {
                    restricted[t][s] = w[pc];
                }
                // the subspace must be invariant: residual check
                let mut recon = vec![0u64; k];
                for (t, b) in basis.iter().enumerate() {
                    let c = restricted[t][s];
                    if c != 0 {
                        for (r, &bv) in recon.iter_mut().zip(b) {
                            *r = addmod(*r, mulmod(c, bv, p), p);
                        }
                    }
                }
                if &recon != w {
                    return Err(Error::Internal(format!(
                        "class matrix {j} does not stabilize a refinement subspace"
                    )));
                }
            }
            let cp = charpoly(&restricted, p);
            let roots = roots_mod_p(&cp, p);
            if roots.is_empty() {
                return Err(Error::Internal(format!(
                    "class matrix {j} has no eigenvalue in F_{p} on a {d}-dim subspace"
                )));
            }
            let mut split_total = 0usize;
            for &lambda in &roots {
                let shifted: Vec<Vec<u64>> = restricted
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        let mut row = row.clone();
                        row[r] = submod(row[r], lambda, p);
                        row
                    })
                    .collect();
                let ker = kernel_basis(&shifted, p);
                if ker.is_empty() {
                    return Err(Error::Internal(
                        "eigenvalue with empty eigenspace during refinement".into(),
                    ));
                }
                split_total += ker.len();
                // map back to length-k vectors and canonicalize
                let mut vecs: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|coords| {
                        let mut v = vec![0u64; k];
                        for (t, &c) in coords.iter().enumerate() {
                            if c != 0 {
                                for (x, &bv) in v.iter_mut().zip(&basis[t]) {
                                    *x = addmod(*x, mulmod(c, bv, p), p);
                                }
                            }
                        }
                        v
                    })
                    .collect();
                let piv = rref(&mut vecs, p);
                next.push((vecs, piv));
            }
            if split_total != d {
                return Err(Error::Internal(format!(
                    "eigenspaces of class matrix {j} cover {split_total} of {d} dimensions"
                )));
            }
        }
        subspaces = next;
    }
    if subspaces.iter().any(|(b, _)| b.len() != 1) {
        return Err(Error::Internal(
            "eigenspace refinement failed to reach one dimension everywhere".into(),
        ));
    }

    // normalize to class-algebra character values ω with ω_0 = 1
    let mut omegas: Vec<Vec<u64>> = subspaces
        .into_iter()
        .map(|(mut basis, _)| {
            let v = basis.pop().expect("one-dimensional");
            if v[0] == 0 {
                return Err(Error::Internal(
                    "class-algebra eigenvector vanishes at the identity class".into(),
                ));
            }
            let inv = invmod(v[0], p);
            Ok(v.into_iter().map(|x| mulmod(x, inv, p)).collect())
        })
        .collect::<Result<_>>()?;
    omegas.sort_unstable();
    omegas.dedup();
    if omegas.len() != k {
        return Err(Error::Internal(format!(
            "expected {k} distinct class-algebra characters, found {}",
            omegas.len()
        )));
    }

    // degrees: d² = |G| / Σ_i ω_i·ω_{i*}/h_i, then χ_ℓ(g_i) = d·ω_i/h_i
    let size_inv: Vec<u64> = classes
        .sizes
        .iter()
        .map(|&h| invmod(h % p, p))
        .collect();
    let order_mod = order % p;
    let mut rows = Vec::with_capacity(k);
    for omega in omegas {
        let mut s = 0u64;
        for i in 0..k {
            let istar = classes.inverse_class[i] as usize;
            s = addmod(s, mulmod(mulmod(omega[i], omega[istar], p), size_inv[i], p), p);
        }
        if s == 0 {
            return Err(Error::Internal("degree norm sum vanished mod ℓ".into()));
        }
        let d2 = mulmod(order_mod, invmod(s, p), p);
        let d = sqrt_mod(d2, p).ok_or_else(|| {
            Error::Internal("degree square has no square root mod ℓ".into())
        })?;
        let d = d.min(p - d);
        if d == 0 {
            return Err(Error::Internal("character degree lifted to zero".into()));
        }
        let row: Vec<u64> = (0..k)
            .map(|i| mulmod(mulmod(d, omega[i], p), size_inv[i], p))
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

/// Root multiplicities of χ(g) by the inverse discrete Fourier sum
/// m_t = o^{-1} Σ_r χ_ℓ(g^r)·z_o^{-rt} (mod ℓ), lifted to the least
/// nonnegative residue. Valid because each multiplicity is at most the
/// degree, which is below ℓ/2.
fn multiplicities_from_fourier_sum(
    chi: &[u64],
    pc: &[u32],
    o: u64,
    inv_pows: &[u64],
    p: u64,
) -> Result<Vec<(u64, u64)>> {
    let inv_o = invmod(o % p, p);
    let mut out = Vec::new();
    for t in 0..o {
        let mut s = 0u64;
        for r in 0..o {
            s = addmod(
                s,
                mulmod(chi[pc[r as usize] as usize], inv_pows[((r * t) % o) as usize], p),
                p,
            );
        }
        let m = mulmod(inv_o, s, p);
        if m == 0 {
            continue;
        }
        if m >= (p + 1) / 2 {
            return Err(Error::Internal(format!(
                "lifted multiplicity {m} exceeds ℓ/2; prime bound violated"
            )));
        }
        out.push((t, m));
    }
    Ok(out)
}

/// Root multiplicities recovered through the eigenvalue polynomial: the
/// power sums p_r = χ_ℓ(g^r) for r ≤ d determine the elementary symmetric
/// functions of the d eigenvalues by Newton's identities, and the
/// eigenvalues are read off by testing the o candidate roots of unity.
/// Same output as the Fourier sum at cost O(d² + o·d) instead of O(o²).
fn multiplicities_from_power_sums(
    chi: &[u64],
    pc: &[u32],
    o: u64,
    degree: u64,
    pows: &[u64],
    p: u64,
) -> Result<Vec<(u64, u64)>> {
    let d = degree as usize;
    // Newton: k·e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i, with p_i = χ_ℓ(g^i)
    let mut elementary = vec![0u64; d + 1];
    elementary[0] = 1;
    for t in 1..=d {
        let mut s = 0u64;
        for i in 1..=t {
            let term = mulmod(elementary[t - i], chi[pc[i % pc.len()] as usize], p);
            if i % 2 == 1 {
                s = addmod(s, term, p);
            } else {
                s = submod(s, term, p);
            }
        }
        elementary[t] = mulmod(s, invmod(t as u64 % p, p), p);
    }
    // P(x) = Σ_k (−1)^k e_k x^{d−k}, low-to-high coefficients
    let mut poly = vec![0u64; d + 1];
    for (t, &ek) in elementary.iter().enumerate() {
        poly[d - t] = if t % 2 == 0 { ek } else { submod(0, ek, p) };
    }
    let eval = |f: &[u64], x: u64| -> u64 {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = addmod(mulmod(acc, x, p), c, p);
        }
        acc
    };
    let mut out = Vec::new();
    let mut remaining = poly;
    let mut found = 0u64;
    for t in 0..o {
        if found == degree {
            break;
        }
        let lambda = pows[t as usize];
        if eval(&remaining, lambda) != 0 {
            continue;
        }
        // strip (x − λ) as often as it divides
        let mut mult = 0u64;
        loop {
            // synthetic division by (x − λ)
            let deg = remaining.len() - 1;
            let mut quotient = vec![0u64; deg];
            let mut carry = 0u64;
            for idx in (0..deg).rev() {
                carry = addmod(mulmod(carry, lambda, p), remaining[idx + 1], p);
                quotient[idx] = carry;
            }
            let rem = addmod(mulmod(carry, lambda, p), remaining[0], p);
            if rem != 0 {
                break;
            }
            remaining = quotient;
            mult += 1;
            if remaining.len() == 1 {
                break;
            }
        }
        if mult == 0 {
            return Err(Error::Internal(
                "eigenvalue polynomial root lost its multiplicity".into(),
            ));
        }
        found += mult;
        out.push((t, mult));
    }
    if found != degree {
        return Err(Error::Internal(format!(
            "eigenvalue polynomial has {found} of {degree} roots among the o-th roots of unity"
        )));
    }
    Ok(out)
}

/// One row of a character table.
#[derive(Debug, Clone)]
pub struct CharRow {
    /// Exact values, one per class, all at the group exponent's conductor.
    pub values: Vec<CycInt>,
    /// Root multiplicities per class: χ(g_i) = Σ m·ζ_e^pos, used for the
    /// convolution-based orthogonality checks.
    pub sparse: Vec<Vec<(u32, u64)>>,
    pub degree: u64,
    pub kernel_classes: Vec<u32>,
    pub kernel: ElementSet,
    pub faithful: bool,
    pub linear: bool,
}

/// An exact irreducible character table with its class data.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub label: String,
    pub order: u64,
    pub prime_power: Option<(u64, u32)>,
    pub exponent: u64,
    pub modulus: u64,
    pub root: u64,
    pub classes: ClassData,
    pub rows: Vec<CharRow>,
}

impl CharacterTable {
    pub fn char_id(&self, idx: usize) -> String {
        format!("chi{idx}")
    }

    pub fn linear_count(&self) -> usize {
        self.rows.iter().filter(|r| r.linear).count()
    }
}

/// Dixon lifting: recover exact cyclotomic values from the modular rows.
///
/// For a class representative of order o, χ(g) = Σ_t m_t ζ_o^t with
/// m_t = o^{-1} Σ_r χ_ℓ(g^r)·z_o^{-rt} (mod ℓ) lifted to the least
/// nonnegative residue; the residues are the true multiplicities because
/// each is at most the degree < ℓ/2.
pub fn lift_table(
    g: &Group,
    classes: ClassData,
    tables: &ClassAlgebraTables,
    modular_rows: Vec<Vec<u64>>,
) -> Result<CharacterTable> {
    let k = classes.count();
    let e = tables.exponent;
    let p = tables.modulus;
    let z = tables.root;

    // class of rep_i^r for r < o_i
    let power_classes: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let o = classes.rep_orders[i];
            let rep = classes.reps[i];
            let mut cur = 0u32;
            let mut pc = Vec::with_capacity(o as usize);
            for _ in 0..o {
                pc.push(classes.class_of[cur as usize]);
                cur = g.mul(cur, rep);
            }
            pc
        })
        .collect();

    // power tables of z_o (both directions) per distinct class order
    let mut zo_tables: HashMap<u64, (Vec<u64>, Vec<u64>)> = HashMap::new();
    for &o in &classes.rep_orders {
        zo_tables.entry(o).or_insert_with(|| {
            let zo = powmod(z, e / o, p);
            let zo_inv = invmod(zo, p);
            let mut pows = Vec::with_capacity(o as usize);
            let mut inv_pows = Vec::with_capacity(o as usize);
            let (mut a, mut b) = (1u64, 1u64);
            for _ in 0..o {
                pows.push(a);
                inv_pows.push(b);
                a = mulmod(a, zo, p);
                b = mulmod(b, zo_inv, p);
            }
            (pows, inv_pows)
        });
    }

    let rows: Vec<CharRow> = modular_rows
        .into_par_iter()
        .map(|chi| -> Result<CharRow> {
            let degree = chi[0];
            if degree == 0 || degree >= (p + 1) / 2 {
                return Err(Error::Internal(format!(
                    "modular degree {degree} out of range for ℓ = {p}"
                )));
            }
            let mut values = Vec::with_capacity(k);
            let mut sparse_row = Vec::with_capacity(k);
            for i in 0..k {
                let o = classes.rep_orders[i];
                let (pows, inv_pows) = &zo_tables[&o];
                let pc = &power_classes[i];
                let sparse = if o > 2 * degree {
                    multiplicities_from_power_sums(&chi, pc, o, degree, pows, p)?
                } else {
                    multiplicities_from_fourier_sum(&chi, pc, o, inv_pows, p)?
                };
                let total: u64 = sparse.iter().map(|&(_, m)| m).sum();
                if total != degree {
                    return Err(Error::Internal(format!(
                        "root multiplicities at class {i} sum to {total}, expected degree {degree}"
                    )));
                }
                let sparse: Vec<(u32, u64)> = sparse
                    .into_iter()
                    .map(|(t, m)| ((t * (e / o)) as u32, m))
                    .collect();
                let value = CycInt::from_sparse_roots(
                    e,
                    sparse.iter().map(|&(pos, m)| (pos as u64, m as i64)),
                )?;
                values.push(value);
                sparse_row.push(sparse);
            }

            let degree_value = CycInt::from_int(e, degree as i64)?;
            let kernel_classes: Vec<u32> = (0..k as u32)
                .filter(|&i| values[i as usize] == degree_value)
                .collect();
            let mut kernel_members = Vec::new();
            for &c in &kernel_classes {
                kernel_members.extend_from_slice(&classes.members[c as usize]);
            }
            let kernel = ElementSet::from_unsorted(kernel_members);
            let faithful = kernel.len() == 1;
            Ok(CharRow {
                values,
                sparse: sparse_row,
                degree,
                kernel_classes,
                kernel,
                faithful,
                linear: degree == 1,
            })
        })
        .collect::<Result<_>>()?;

    let mut rows = rows;
    let one = CycInt::from_int(e, 1)?;
    let is_trivial = |r: &CharRow| r.degree == 1 && r.values.iter().all(|v| *v == one);
    rows.sort_by(|a, b| {
        (a.degree, !is_trivial(a), &a.values).cmp(&(b.degree, !is_trivial(b), &b.values))
    });
    if rows.is_empty() || !is_trivial(&rows[0]) {
        return Err(Error::Internal("trivial character missing from row 0".into()));
    }

    Ok(CharacterTable {
        label: g.label().to_string(),
        order: g.order(),
        prime_power: g.prime_power(),
        exponent: e,
        modulus: p,
        root: z,
        classes,
        rows,
    })
}

/// Full pipeline: classes → structure constants → modular characters →
/// exact lift → integrity verification. Any failed check aborts with a
/// table-integrity error.
pub fn character_table(g: &Group) -> Result<CharacterTable> {
    let classes = conjugacy_classes(g)?;
    let tables = structure_constants(g, &classes)?;
    let modular = modular_characters(&tables, &classes, g.order())?;
    let table = lift_table(g, classes, &tables, modular)?;
    let report = verify_table(&table);
    if !report.pass {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Error::TableIntegrity(failed.join("; ")));
    }
    Ok(table)
}

/// One verification check outcome.
#[derive(Debug, Clone)]
pub struct TableCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of the table integrity checks.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub checks: Vec<TableCheck>,
    pub pass: bool,
}

/// Sum over terms of weight · a · conj(b) as an exact element of Z[ζ_e],
/// computed by sparse convolution of root multiplicities with a single
/// canonical reduction at the end. On (practically unreachable) i128
/// overflow the `slow` closure recomputes the sum in generic cyclotomic
/// arithmetic.
fn hermitian_sum<'a, I, F>(e: u64, terms: I, slow: F) -> Result<CycInt>
where
    I: Iterator<Item = (&'a [(u32, u64)], &'a [(u32, u64)], u64)>,
    F: Fn() -> Result<CycInt>,
{
    let mut acc = vec![0i128; e as usize];
    for (sa, sb, w) in terms {
        let w = w as i128;
        for &(p1, m1) in sa {
            for &(p2, m2) in sb {
                let pos = ((p1 as u64 + e - p2 as u64) % e) as usize;
                let term = w
                    .checked_mul(m1 as i128)
                    .and_then(|t| t.checked_mul(m2 as i128));
                match term.and_then(|t| acc[pos].checked_add(t)) {
                    Some(v) => acc[pos] = v,
                    None => return slow(),
                }
            }
        }
    }
    if cyclo::reduce_dense_i128(e, &mut acc)?.is_some() {
        let mut terms: Vec<(u64, i64)> = Vec::new();
        for (pos, &c) in acc.iter().enumerate() {
            if c != 0 {
                match i64::try_from(c) {
                    Ok(v) => terms.push((pos as u64, v)),
                    Err(_) => return slow(),
                }
            }
        }
        // coefficients are already reduced mod Φ_e: positions < φ(e)
        return CycInt::from_sparse_roots(e, terms);
    }
    slow()
}

/// Generic-arithmetic route for the same sum, used as the overflow fallback.
fn hermitian_sum_slow<'a, I>(e: u64, values: I) -> Result<CycInt>
where
    I: Iterator<Item = (&'a CycInt, &'a CycInt, u64)>,
{
    let mut total = CycInt::zero(e)?;
    for (x, y, w) in values {
        let prod = x.mul(&y.conj())?;
        let weighted = prod.mul(&CycInt::from_int(e, w as i64)?)?;
        total = total.add(&weighted)?;
    }
    Ok(total)
}

/// First and second orthogonality, degree integrality, and the degree-sum
/// identity, each reported pass/fail.
pub fn verify_table(t: &CharacterTable) -> TableReport {
    let mut checks = Vec::new();
    let k = t.classes.count();
    let e = t.exponent;

    // degrees: positive integers, value at identity equals the degree
    let mut degree_ok = true;
    let mut degree_detail = String::from("all degrees are positive integers");
    for (r, row) in t.rows.iter().enumerate() {
        let at_identity = row.values[0]
            .as_integer()
            .and_then(|v| v.to_u64());
        if row.degree == 0 || at_identity != Some(row.degree) {
            degree_ok = false;
            degree_detail = format!("row {r} has degree {} but identity value mismatch", row.degree);
            break;
        }
    }
    checks.push(TableCheck {
        name: "degree-integrality".into(),
        pass: degree_ok,
        detail: degree_detail,
    });

    let sum_sq: u128 = t.rows.iter().map(|r| (r.degree as u128).pow(2)).sum();
    checks.push(TableCheck {
        name: "degree-sum".into(),
        pass: sum_sq == t.order as u128,
        detail: format!("Σ degree² = {sum_sq}, order = {}", t.order),
    });

    checks.push(TableCheck {
        name: "row-count".into(),
        pass: t.rows.len() == k,
        detail: format!("{} rows over {} classes", t.rows.len(), k),
    });

    // first orthogonality: Σ_i h_i χ(g_i)·conj(ψ(g_i)) = |G|·δ
    let first_fail: Option<String> = (0..t.rows.len())
        .into_par_iter()
        .map(|r| {
            let a = &t.rows[r];
            for (s, b) in t.rows.iter().enumerate().skip(r) {
                let expected = if r == s { t.order as i64 } else { 0 };
                let terms = a
                    .sparse
                    .iter()
                    .zip(&b.sparse)
                    .zip(&t.classes.sizes)
                    .map(|((x, y), &w)| (x.as_slice(), y.as_slice(), w));
                let slow = || {
                    hermitian_sum_slow(
                        e,
                        a.values
                            .iter()
                            .zip(&b.values)
                            .zip(&t.classes.sizes)
                            .map(|((x, y), &w)| (x, y, w)),
                    )
                };
                let sum = hermitian_sum(e, terms, slow).ok()?;
                let target = CycInt::from_int(e, expected).ok()?;
                if sum != target {
                    return Some(format!("rows ({r}, {s}): got {sum}, expected {expected}"));
                }
            }
            None
        })
        .find_map_first(|x| x);
    checks.push(TableCheck {
        name: "first-orthogonality".into(),
        pass: first_fail.is_none(),
        detail: first_fail.unwrap_or_else(|| "all row pairs orthonormal".into()),
    });

    // second orthogonality: Σ_χ χ(g_i)·conj(χ(g_j)) = |C(g_i)|·δ
    let second_fail: Option<String> = (0..k)
        .into_par_iter()
        .map(|i| {
            for j in i..k {
                let expected = if i == j {
                    t.classes.centralizer_orders[i] as i64
                } else {
                    0
                };
                let terms = t
                    .rows
                    .iter()
                    .map(|r| (r.sparse[i].as_slice(), r.sparse[j].as_slice(), 1));
                let slow = || {
                    hermitian_sum_slow(
                        e,
                        t.rows.iter().map(|r| (&r.values[i], &r.values[j], 1)),
                    )
                };
                let sum = hermitian_sum(e, terms, slow).ok()?;
                let target = CycInt::from_int(e, expected).ok()?;
                if sum != target {
                    return Some(format!("classes ({i}, {j}): got {sum}, expected {expected}"));
                }
            }
            None
        })
        .find_map_first(|x| x);
    checks.push(TableCheck {
        name: "second-orthogonality".into(),
        pass: second_fail.is_none(),
        detail: second_fail.unwrap_or_else(|| "all class pairs orthogonal".into()),
    });

    let pass = checks.iter().all(|c| c.pass);
    TableReport { checks, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, FamilySpec};
    use num_bigint::BigInt;

    fn table_of(spec: &FamilySpec) -> CharacterTable {
        character_table(&build_family(spec).unwrap()).unwrap()
    }

    #[test]
    fn chosen_primes_match_hand_scans() {
        assert_eq!(choose_prime(8, 4).unwrap().0, 13);
        assert_eq!(choose_prime(27, 3).unwrap().0, 13);
        let (l, z) = choose_prime(16807, 49).unwrap();
        assert_eq!(l, 491);
        // z must have multiplicative order exactly 49
        assert_eq!(powmod(z, 49, l), 1);
        assert_ne!(powmod(z, 7, l), 1);
    }

    #[test]
    fn identity_class_constants_are_diagonal() {
        let g = build_family(&FamilySpec::GeneralizedQuaternion(8)).unwrap();
        let classes = conjugacy_classes(&g).unwrap();
        let t = structure_constants(&g, &classes).unwrap();
        for (j, row) in t.constants[0].iter().enumerate() {
            assert_eq!(row, &vec![(j as u32, 1)]);
        }
    }

    #[test]
    fn q8_squared_class_expands_as_expected() {
        let g = build_family(&FamilySpec::GeneralizedQuaternion(8)).unwrap();
        let classes = conjugacy_classes(&g).unwrap();
        let t = structure_constants(&g, &classes).unwrap();
        // find a class of size 2 whose elements have order 4
        let i = (0..classes.count())
            .find(|&i| classes.sizes[i] == 2 && classes.rep_orders[i] == 4)
            .unwrap();
        // C_i · C_i = 2·C_1 + 2·C_{central involution}
        let row = &t.constants[i][i];
        assert_eq!(row.len(), 2);
        assert!(row.iter().all(|&(_, a)| a == 2));
        assert_eq!(row[0].0, 0);
    }

    #[test]
    fn abelian_tables_are_all_linear() {
        for spec in [
            FamilySpec::Cyclic(12),
            FamilySpec::ElementaryAbelian { p: 3, k: 2 },
        ] {
            let t = table_of(&spec);
            assert!(t.rows.iter().all(|r| r.degree == 1), "{spec}");
            assert_eq!(t.rows.len() as u64, t.order);
        }
    }

    #[test]
    fn q8_and_dihedral8_degree_patterns() {
        for spec in [
            FamilySpec::GeneralizedQuaternion(8),
            FamilySpec::Dihedral(8),
        ] {
            let t = table_of(&spec);
            let mut degrees: Vec<u64> = t.rows.iter().map(|r| r.degree).collect();
            degrees.sort_unstable();
            assert_eq!(degrees, vec![1, 1, 1, 1, 2], "{spec}");
            // the degree-2 row takes values (2, −2, 0, 0, 0) up to class order
            let row = t.rows.iter().find(|r| r.degree == 2).unwrap();
            let mut vals: Vec<Option<BigInt>> =
                row.values.iter().map(|v| v.as_integer()).collect();
            vals.sort();
            let as_ints: Vec<BigInt> = vals.into_iter().map(|v| v.unwrap()).collect();
            assert_eq!(
                as_ints,
                vec![
                    BigInt::from(-2),
                    BigInt::from(0),
                    BigInt::from(0),
                    BigInt::from(0),
                    BigInt::from(2)
                ],
                "{spec}"
            );
        }
    }

    #[test]
    fn trivial_character_is_row_zero() {
        for spec in [
            FamilySpec::Dihedral(16),
            FamilySpec::Sl23,
            FamilySpec::Cyclic(9),
        ] {
            let t = table_of(&spec);
            assert_eq!(t.rows[0].degree, 1);
            assert!(t.rows[0]
                .values
                .iter()
                .all(|v| v.as_integer() == Some(BigInt::from(1))));
            assert_eq!(t.rows[0].kernel.len() as u64, t.order);
        }
    }

    #[test]
    fn p_group_degrees_are_p_powers_and_linear_count_is_abelianization() {
        for spec in [
            FamilySpec::Dihedral(32),
            FamilySpec::Extraspecial { p: 5, exponent: 5 },
            FamilySpec::Extraspecial { p: 3, exponent: 9 },
        ] {
            let g = build_family(&spec).unwrap();
            let (p, _) = g.prime_power().unwrap();
            let t = character_table(&g).unwrap();
            for row in &t.rows {
                let mut d = row.degree;
                while d % p == 0 {
                    d /= p;
                }
                assert_eq!(d, 1, "{spec}: degree {} is a power of {}", row.degree, p);
            }
            let derived = crate::structure::derived_subgroup(&g);
            assert_eq!(
                t.linear_count() as u64,
                g.order() / derived.len() as u64,
                "{spec}"
            );
        }
    }

    #[test]
    fn sl23_has_seven_characters_with_known_degrees() {
        let t = table_of(&FamilySpec::Sl23);
        let mut degrees: Vec<u64> = t.rows.iter().map(|r| r.degree).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn verification_catches_a_perturbed_value() {
        let mut t = table_of(&FamilySpec::Dihedral(8));
        assert!(verify_table(&t).pass);
        // corrupt one non-identity value by +1
        let one = CycInt::from_int(t.exponent, 1).unwrap();
        t.rows[4].values[2] = t.rows[4].values[2].add(&one).unwrap();
        t.rows[4].sparse[2].push((0, 1));
        let report = verify_table(&t);
        assert!(!report.pass);
        assert!(report
            .checks
            .iter()
            .any(|c| !c.pass && c.name.contains("orthogonality")));
    }

    #[test]
    fn kernels_are_normal_subgroups() {
        let g = build_family(&FamilySpec::Dihedral(16)).unwrap();
        let t = character_table(&g).unwrap();
        for row in &t.rows {
            // union of classes that is multiplicatively closed
            let sub = g.subgroup(&row.kernel, "ker").unwrap();
            assert!(sub.order() as usize == row.kernel.len());
            for x in row.kernel.iter() {
                for &gen in g.generators() {
                    assert!(row.kernel.contains(g.conj(x, gen)));
                }
            }
        }
    }

    #[test]
    fn faithful_characters_of_q8() {
        let t = table_of(&FamilySpec::GeneralizedQuaternion(8));
        let faithful: Vec<u64> = t
            .rows
            .iter()
            .filter(|r| r.faithful)
            .map(|r| r.degree)
            .collect();
        assert_eq!(faithful, vec![2]);
    }
}

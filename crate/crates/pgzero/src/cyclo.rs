//! Exact arithmetic in rings of cyclotomic integers Z[ζ_e].
//!
//! A value is a coefficient vector of length φ(e) representing a residue
//! modulo the e-th cyclotomic polynomial Φ_e(x). Reduction mod Φ_e is applied
//! on every construction, so the representation is canonical for a fixed
//! conductor: a value is zero iff every coefficient is zero. That makes the
//! zero test — the predicate every downstream count is built on — an exact
//! integer comparison with no tolerance anywhere.
//!
//! Coefficients are arbitrary-precision integers. Binary operations on values
//! with different conductors embed both into the lcm conductor first.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Euler's totient.
pub fn euler_phi(e: u64) -> u64 {
    let mut n = e;
    let mut result = e;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
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

// ---------------------------------------------------------------------------
// Cyclotomic polynomials, cached per conductor
// ---------------------------------------------------------------------------

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact division of integer polynomials; `den` must be monic and divide `num`.
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                let t = dj * &c;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// The e-th cyclotomic polynomial as a dense coefficient vector of length
/// φ(e)+1 (monic). Computed by dividing x^e − 1 by all lower-index cyclotomic
/// polynomials of divisor conductors; results are cached.
pub fn cyclotomic_polynomial(e: u64) -> Result<Arc<Vec<BigInt>>> {
    if e == 0 {
        return Err(Error::Domain("cyclotomic conductor must be positive".into()));
    }
    if let Some(p) = phi_cache().lock().unwrap().get(&e) {
        return Ok(p.clone());
    }
    // x^e - 1
    let mut num = vec![BigInt::zero(); e as usize + 1];
    num[0] = -BigInt::one();
    num[e as usize] = BigInt::one();
    let mut cur = num;
    for d in divisors(e) {
        if d == e {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d)?;
        cur = poly_exact_div(&cur, &phi_d);
    }
    debug_assert_eq!(cur.len() as u64 - 1, euler_phi(e));
    let arc = Arc::new(cur);
    phi_cache().lock().unwrap().insert(e, arc.clone());
    Ok(arc)
}

fn phi_i64_cache() -> &'static Mutex<HashMap<u64, Option<Arc<Vec<i64>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Option<Arc<Vec<i64>>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_e with i64 coefficients when they fit, for the fixed-width reduction
/// fast path. `None` if any coefficient overflows i64.
pub(crate) fn cyclotomic_polynomial_i64(e: u64) -> Result<Option<Arc<Vec<i64>>>> {
    if let Some(p) = phi_i64_cache().lock().unwrap().get(&e) {
        return Ok(p.clone());
    }
    let big = cyclotomic_polynomial(e)?;
    let small: Option<Vec<i64>> = big.iter().map(|c| c.to_i64()).collect();
    let entry = small.map(Arc::new);
    phi_i64_cache()
        .lock()
        .unwrap()
        .insert(e, entry.clone());
    Ok(entry)
}

/// Reduce a dense degree-<len polynomial in i128 coefficients mod Φ_e,
/// in place down to φ(e) coefficients. Returns None on arithmetic overflow,
/// in which case the caller must redo the reduction in BigInt.
pub(crate) fn reduce_dense_i128(e: u64, dense: &mut Vec<i128>) -> Result<Option<()>> {
    let phi = match cyclotomic_polynomial_i64(e)? {
        Some(p) => p,
        None => return Ok(None),
    };
    let deg = phi.len() - 1;
    while dense.len() > deg {
        let k = dense.len() - 1;
        let c = dense[k];
        dense.pop();
        if c != 0 {
            for (j, &pj) in phi.iter().take(deg).enumerate() {
                let t = match (pj as i128).checked_mul(c) {
                    Some(t) => t,
                    None => return Ok(None),
                };
                let pos = k - deg + j;
                dense[pos] = match dense[pos].checked_sub(t) {
                    Some(v) => v,
                    None => return Ok(None),
                };
            }
        }
    }
    dense.resize(deg, 0);
    Ok(Some(()))
}

fn reduce_dense_big(e: u64, mut dense: Vec<BigInt>) -> Result<Vec<BigInt>> {
    let phi = cyclotomic_polynomial(e)?;
    let deg = phi.len() - 1;
    while dense.len() > deg {
        let k = dense.len() - 1;
        let c = dense.pop().unwrap();
        if !c.is_zero() {
            for (j, pj) in phi.iter().take(deg).enumerate() {
                let t = pj * &c;
                dense[k - deg + j] -= t;
            }
        }
    }
    dense.resize(deg, BigInt::zero());
    Ok(dense)
}

// ---------------------------------------------------------------------------
// CycInt
// ---------------------------------------------------------------------------

/// An exact cyclotomic integer: residue in Z[x]/(Φ_e(x)) with x ↦ ζ_e.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    conductor: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(e: u64) -> Result<CycInt> {
        check_conductor(e)?;
        Ok(CycInt {
            conductor: e,
            coeffs: vec![BigInt::zero(); euler_phi(e) as usize],
        })
    }

    pub fn from_int(e: u64, n: i64) -> Result<CycInt> {
        Self::from_bigint(e, BigInt::from(n))
    }

    pub fn from_bigint(e: u64, n: BigInt) -> Result<CycInt> {
        let mut v = CycInt::zero(e)?;
        if v.coeffs.is_empty() {
            // e = 1 or 2 still has φ(e) = 1; unreachable, but keep the guard
            return Err(Error::Internal("empty coefficient vector".into()));
        }
        v.coeffs[0] = n;
        Ok(v)
    }

    /// ζ_e^k.
    pub fn root_of_unity(e: u64, k: u64) -> Result<CycInt> {
        check_conductor(e)?;
        let mut dense = vec![BigInt::zero(); (k % e) as usize + 1];
        *dense.last_mut().unwrap() = BigInt::one();
        Ok(CycInt {
            conductor: e,
            coeffs: reduce_dense_big(e, dense)?,
        })
    }

    /// Σ_k m[k]·ζ_e^k for a multiplicity vector of length e.
    pub fn from_root_multiplicities(e: u64, m: &[i64]) -> Result<CycInt> {
        check_conductor(e)?;
        if m.len() as u64 != e {
            return Err(Error::Domain(format!(
                "multiplicity vector has length {}, expected conductor {}",
                m.len(),
                e
            )));
        }
        Self::from_sparse_roots(e, m.iter().enumerate().map(|(k, &c)| (k as u64, c)))
    }

    /// Sparse variant of `from_root_multiplicities`.
    pub fn from_sparse_roots<I>(e: u64, terms: I) -> Result<CycInt>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        check_conductor(e)?;
        let mut dense = vec![0i128; e as usize];
        let mut big_terms: Vec<(u64, i64)> = Vec::new();
        for (k, c) in terms {
            if k >= e {
                return Err(Error::Domain(format!(
                    "root exponent {k} out of range for conductor {e}"
                )));
            }
            dense[k as usize] += c as i128;
            big_terms.push((k, c));
        }
        if reduce_dense_i128(e, &mut dense)?.is_some() {
            return Ok(CycInt {
                conductor: e,
                coeffs: dense.into_iter().map(BigInt::from).collect(),
            });
        }
        // Fallback: exact but slower.
        let mut big = vec![BigInt::zero(); e as usize];
        for (k, c) in big_terms {
            big[k as usize] += BigInt::from(c);
        }
        Ok(CycInt {
            conductor: e,
            coeffs: reduce_dense_big(e, big)?,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reinterpret at a larger conductor `target` (self.conductor | target).
    pub fn embed(&self, target: u64) -> Result<CycInt> {
        check_conductor(target)?;
        if target == self.conductor {
            return Ok(self.clone());
        }
        if target % self.conductor != 0 {
            return Err(Error::Domain(format!(
                "cannot embed conductor {} into {}",
                self.conductor, target
            )));
        }
        let scale = (target / self.conductor) as usize;
        let mut dense = vec![BigInt::zero(); (self.coeffs.len() - 1) * scale + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            dense[k * scale] = c.clone();
        }
        Ok(CycInt {
            conductor: target,
            coeffs: reduce_dense_big(target, dense)?,
        })
    }

    fn common(a: &CycInt, b: &CycInt) -> Result<(CycInt, CycInt)> {
        if a.conductor == b.conductor {
            return Ok((a.clone(), b.clone()));
        }
        let e = a.conductor.lcm(&b.conductor);
        Ok((a.embed(e)?, b.embed(e)?))
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt> {
        let (mut a, b) = Self::common(self, other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt> {
        let (mut a, b) = Self::common(self, other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt> {
        let (a, b) = Self::common(self, other)?;
        let e = a.conductor;
        let mut dense = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        Ok(CycInt {
            conductor: e,
            coeffs: reduce_dense_big(e, dense)?,
        })
    }

    /// The Galois substitution ζ_e ↦ ζ_e^t for gcd(t, e) = 1.
    pub fn galois(&self, t: u64) -> Result<CycInt> {
        let e = self.conductor;
        let t = t % e.max(1);
        if e > 1 && t.gcd(&e) != 1 {
            return Err(Error::Domain(format!(
                "galois exponent {t} not coprime to conductor {e}"
            )));
        }
        let mut dense = vec![BigInt::zero(); e as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[((k as u64 * t) % e) as usize] += c;
            }
        }
        Ok(CycInt {
            conductor: e,
            coeffs: reduce_dense_big(e, dense)?,
        })
    }

    /// Complex conjugation, ζ_e ↦ ζ_e^{e−1}.
    pub fn conj(&self) -> CycInt {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
            .expect("e-1 is coprime to e")
    }

    /// a · conj(a); real and nonnegative, but returned as a CycInt.
    pub fn abs_square(&self) -> CycInt {
        self.mul(&self.conj()).expect("same conductor")
    }

    /// True iff the value equals ±ζ_e^k for some k — the complete set of
    /// roots of unity inside the e-th cyclotomic field. Tested by direct
    /// comparison against the 2e candidates, which are cached per conductor.
    pub fn is_root_of_unity(&self) -> bool {
        let set = root_candidates(self.conductor);
        set.contains(&self.coeffs)
    }

    /// Compact display form used in human-readable tables, e.g. `2`, `-1`,
    /// `z8-z8^3`. Deterministic and free of characters that need CSV quoting.
    pub fn display_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(sign);
            }
            if k == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&format!("z{}", self.conductor));
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_string())
    }
}

fn check_conductor(e: u64) -> Result<()> {
    if e == 0 {
        Err(Error::Domain("cyclotomic conductor must be positive".into()))
    } else {
        Ok(())
    }
}

fn root_candidates(e: u64) -> Arc<HashSet<Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<HashSet<Vec<BigInt>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&e) {
        return s.clone();
    }
    let mut set = HashSet::new();
    let mut pow = CycInt::from_int(e, 1).expect("conductor checked");
    let step = CycInt::root_of_unity(e, 1).expect("conductor checked");
    for _ in 0..e {
        set.insert(pow.coeffs.clone());
        set.insert(pow.neg().coeffs.clone());
        pow = pow.mul(&step).expect("same conductor");
    }
    let arc = Arc::new(set);
    cache.lock().unwrap().insert(e, arc.clone());
    arc
}

/// Values equal as algebraic numbers, regardless of conductor.
pub fn values_equal(a: &CycInt, b: &CycInt) -> Result<bool> {
    let (x, y) = CycInt::common(a, b)?;
    Ok(x.coeffs == y.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(e: u64, k: u64) -> CycInt {
        CycInt::root_of_unity(e, k).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials_match_known_values() {
        let as_i64 = |e: u64| -> Vec<i64> {
            cyclotomic_polynomial(e)
                .unwrap()
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_i64(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        // first conductor with a coefficient outside {-1, 0, 1}
        assert!(as_i64(105).iter().any(|&c| c.abs() == 2));
    }

    #[test]
    fn sum_of_all_cube_roots_vanishes() {
        let v = CycInt::from_root_multiplicities(3, &[1, 1, 1]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let v = CycInt::from_root_multiplicities(4, &[0, 0, 1, 0]).unwrap();
        assert_eq!(v.as_integer().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn inverse_roots_multiply_to_one() {
        let v = zeta(8, 1).mul(&zeta(8, 7)).unwrap();
        assert_eq!(v.as_integer().unwrap(), BigInt::from(1));
    }

    #[test]
    fn order_four_fusion_vanishes() {
        // ζ4 + ζ4^{-1} = 0, while ζ4 + ζ4 = 2ζ4 ≠ 0.
        let fused = zeta(4, 1).add(&zeta(4, 3)).unwrap();
        assert!(fused.is_zero());
        let doubled = zeta(4, 1).add(&zeta(4, 1)).unwrap();
        assert!(!doubled.is_zero());
    }

    #[test]
    fn twice_a_root_is_not_zero() {
        let v = zeta(3, 1).add(&zeta(3, 1)).unwrap();
        assert!(!v.is_zero());
        assert!(!v.is_root_of_unity());
    }

    #[test]
    fn conjugation_inverts_roots() {
        assert!(values_equal(&zeta(8, 1).conj(), &zeta(8, 7)).unwrap());
        assert!(values_equal(&zeta(5, 2).conj(), &zeta(5, 3)).unwrap());
    }

    #[test]
    fn abs_square_of_signed_roots_is_one() {
        for e in [3u64, 4, 5, 8, 12] {
            for k in 0..e {
                let v = zeta(e, k);
                assert_eq!(v.abs_square().as_integer().unwrap(), BigInt::from(1));
                assert_eq!(v.neg().abs_square().as_integer().unwrap(), BigInt::from(1));
            }
        }
    }

    #[test]
    fn galois_substitutes_exponents() {
        let v = CycInt::from_int(5, 1).unwrap().add(&zeta(5, 1)).unwrap();
        let expect = CycInt::from_int(5, 1).unwrap().add(&zeta(5, 2)).unwrap();
        assert_eq!(v.galois(2).unwrap(), expect);
    }

    #[test]
    fn galois_rejects_non_coprime_exponent() {
        assert!(zeta(8, 1).galois(2).is_err());
    }

    #[test]
    fn conductor_zero_rejected() {
        assert!(CycInt::zero(0).is_err());
        assert!(CycInt::from_root_multiplicities(0, &[]).is_err());
    }

    #[test]
    fn root_of_unity_test_matches_examples() {
        assert!(zeta(8, 3).neg().is_root_of_unity());
        assert!(!CycInt::zero(8).unwrap().is_root_of_unity());
        let golden = CycInt::from_int(5, 1).unwrap().add(&zeta(5, 1)).unwrap();
        assert!(!golden.is_root_of_unity());
    }

    #[test]
    fn embedding_preserves_values() {
        let a = zeta(4, 1);
        let b = a.embed(12).unwrap();
        assert!(values_equal(&a, &b).unwrap());
        assert!(b.is_root_of_unity());
        assert!(values_equal(&b, &zeta(12, 3)).unwrap());
    }

    fn arb_conductor() -> impl Strategy<Value = u64> {
        prop_oneof![Just(3u64), Just(4), Just(5), Just(8), Just(12)]
    }

    proptest! {
        #[test]
        fn ring_axioms_hold(e in arb_conductor(), seed in proptest::collection::vec(-6i64..=6, 36)) {
            let n = e as usize;
            let a = CycInt::from_root_multiplicities(e, &seed[..n]).unwrap();
            let b = CycInt::from_root_multiplicities(e, &seed[12..12 + n]).unwrap();
            let c = CycInt::from_root_multiplicities(e, &seed[24..24 + n]).unwrap();
            // associativity
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            // commutativity
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            // distributivity
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn self_difference_is_zero(e in arb_conductor(), m in proptest::collection::vec(-9i64..=9, 12)) {
            let a = CycInt::from_root_multiplicities(e, &m[..e as usize]).unwrap();
            prop_assert!(a.sub(&a).unwrap().is_zero());
            prop_assert_eq!(a.abs_square(), a.conj().abs_square());
        }

        #[test]
        fn embedding_round_trips(e in arb_conductor(), m in proptest::collection::vec(-5i64..=5, 12), f in 2u64..=4) {
            let a = CycInt::from_root_multiplicities(e, &m[..e as usize]).unwrap();
            let b = a.embed(e * f).unwrap();
            prop_assert!(values_equal(&a, &b).unwrap());
            prop_assert!(a.add(&b).unwrap().sub(&a).unwrap().sub(&a).unwrap().is_zero());
        }

        #[test]
        fn signed_roots_are_roots_of_unity(e in arb_conductor(), k in 0u64..12, c in 2i64..=5) {
            let k = k % e;
            let z = CycInt::root_of_unity(e, k).unwrap();
            prop_assert!(z.is_root_of_unity());
            prop_assert!(z.neg().is_root_of_unity());
            let scaled = CycInt::from_sparse_roots(e, [(k, c)]).unwrap();
            prop_assert!(!scaled.is_root_of_unity());
            let scaled_neg = CycInt::from_sparse_roots(e, [(k, -c)]).unwrap();
            prop_assert!(!scaled_neg.is_root_of_unity());
        }
    }
}

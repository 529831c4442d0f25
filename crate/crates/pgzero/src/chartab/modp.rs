//! Arithmetic and small dense linear algebra over prime fields F_ℓ.
//!
//! Everything here is deterministic: eigenvalues are reported in ascending
//! order, nullspace bases come out of reduced row echelon form (which is
//! unique), and the polynomial splitting tries shift constants in a fixed
//! sequence.

use crate::error::{Error, Result};

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    a %= p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse in F_p for prime p and a ≢ 0.
pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root of the prime p.
pub(crate) fn primitive_root(p: u64) -> Result<u64> {
    if p == 2 {
        return Ok(1);
    }
    let factors = distinct_prime_factors(p - 1);
    'outer: for g in 2..p {
        for &q in &factors {
            if powmod(g, (p - 1) / q, p) == 1 {
                continue 'outer;
            }
        }
        return Ok(g);
    }
    Err(Error::Internal(format!("no primitive root found mod {p}")))
}

/// Square root mod an odd prime by Tonelli-Shanks.
pub(crate) fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(n);
    }
    if powmod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(n, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // smallest quadratic non-residue as the auxiliary generator
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(n, q, p);
    let mut r = powmod(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

// ---------------------------------------------------------------------------
// Dense matrices and vectors
// ---------------------------------------------------------------------------

pub(crate) fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| {
            let mut acc = 0u128;
            for (a, b) in row.iter().zip(v) {
                acc += *a as u128 * *b as u128;
                // keep the accumulator small enough to never overflow
                if acc >= 1u128 << 120 {
                    acc %= p as u128;
                }
            }
            (acc % p as u128) as u64
        })
        .collect()
}

/// Reduced row echelon form in place. Returns the pivot columns; zero rows
/// are removed. RREF is unique, which makes downstream bases canonical.
pub(crate) fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(sel) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = invmod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = submod(*x, mulmod(f, *y, p), p);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Canonical basis of the nullspace of a square matrix.
pub(crate) fn kernel_basis(mat: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = mat.len();
    let mut rows: Vec<Vec<u64>> = mat.to_vec();
    let pivots = rref(&mut rows, p);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; d];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..d {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for (col, pr) in pivot_set.iter().enumerate() {
            if let Some(r) = pr {
                v[col] = submod(0, rows[*r][free], p);
            }
        }
        basis.push(v);
    }
    basis
}

/// Characteristic polynomial det(xI − M), monic, coefficients low-to-high.
/// Computed by similarity reduction to Hessenberg form followed by the
/// leading-minor recurrence.
pub(crate) fn charpoly(mat: &[Vec<u64>], p: u64) -> Vec<u64> {
    let d = mat.len();
    if d == 0 {
        return vec![1];
    }
    let mut h: Vec<Vec<u64>> = mat.to_vec();
    for j in 0..d.saturating_sub(2) {
        let Some(sel) = (j + 1..d).find(|&r| h[r][j] != 0) else {
            continue;
        };
        if sel != j + 1 {
            h.swap(sel, j + 1);
            for row in h.iter_mut() {
                row.swap(sel, j + 1);
            }
        }
        let inv = invmod(h[j + 1][j], p);
        for r in j + 2..d {
            if h[r][j] == 0 {
                continue;
            }
            let f = mulmod(h[r][j], inv, p);
            let base = h[j + 1].clone();
            for (x, y) in h[r].iter_mut().zip(&base) {
                *x = submod(*x, mulmod(f, *y, p), p);
            }
            // column operation keeps the transform a similarity
            for row in h.iter_mut() {
                let add = mulmod(f, row[r], p);
                row[j + 1] = addmod(row[j + 1], add, p);
            }
        }
    }
    // p_m(x) = (x − h[m-1][m-1])·p_{m-1}
    //          − Σ_{i=1}^{m-1} h[i-1][m-1]·(∏_{t=i}^{m-1} h[t][t-1])·p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=d {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        let diag = h[m - 1][m - 1];
        for (t, &c) in prev.iter().enumerate() {
            cur[t + 1] = addmod(cur[t + 1], c, p);
            cur[t] = submod(cur[t], mulmod(diag, c, p), p);
        }
        let mut subprod = 1u64;
        for i in (1..m).rev() {
            subprod = mulmod(subprod, h[i][i - 1], p);
            if subprod == 0 {
                break;
            }
            let w = mulmod(h[i - 1][m - 1], subprod, p);
            if w == 0 {
                continue;
            }
            for (t, &c) in polys[i - 1].iter().enumerate() {
                cur[t] = submod(cur[t], mulmod(w, c, p), p);
            }
        }
        polys.push(cur);
    }
    polys.pop().expect("loop ran to d")
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (dense, low-to-high)
// ---------------------------------------------------------------------------

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    let db = b.len() - 1;
    if db == 0 {
        return vec![0];
    }
    let lead_inv = invmod(b[db], p);
    while r.len() - 1 >= db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let f = mulmod(r[dr], lead_inv, p);
        if f != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let idx = dr - db + j;
                r[idx] = submod(r[idx], mulmod(f, bj, p), p);
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.len() == 1 && r[0] == 0 {
            break;
        }
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalize monic
    let lead = *x.last().unwrap();
    if lead != 0 && lead != 1 {
        let inv = invmod(lead, p);
        for c in x.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    x
}

/// base^e mod (f, p)
fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), f, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_rem(&poly_mul(&b, &b, p), f, p);
        }
    }
    acc
}

fn poly_eval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = addmod(mulmod(acc, x, p), c, p);
    }
    acc
}

/// Distinct roots of f in F_p, ascending. For small p a direct scan; for
/// large p the radical is split by gcds with (x+c)^{(p−1)/2} − 1 over the
/// fixed shift sequence c = 0, 1, 2, …
pub(crate) fn roots_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    let mut f = f.to_vec();
    poly_trim(&mut f);
    if f.len() <= 1 {
        return Vec::new();
    }
    if p <= (1 << 16) {
        return (0..p).filter(|&x| poly_eval(&f, x, p) == 0).collect();
    }
    // radical with all roots in F_p: gcd(f, x^p − x)
    let xp = poly_powmod(&[0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    if xp_minus_x.len() < 2 {
        xp_minus_x.resize(2, 0);
    }
    xp_minus_x[1] = submod(xp_minus_x[1], 1, p);
    poly_trim(&mut xp_minus_x);
    let radical = poly_gcd(&f, &xp_minus_x, p);
    let mut roots = Vec::new();
    split_linear(&radical, p, &mut roots);
    roots.sort_unstable();
    roots
}

fn split_linear(g: &[u64], p: u64, out: &mut Vec<u64>) {
    let d = g.len() - 1;
    if d == 0 {
        return;
    }
    if d == 1 {
        // monic x + c0 → root −c0
        let c0 = mulmod(g[0], invmod(g[1], p), p);
        out.push(submod(0, c0, p));
        return;
    }
    for c in 0.. {
        let shifted = [c % p, 1];
        let h = poly_powmod(&shifted, (p - 1) / 2, g, p);
        let mut h1 = h;
        if h1.is_empty() {
            h1 = vec![0];
        }
        h1[0] = submod(h1[0], 1, p);
        poly_trim(&mut h1);
        let d1 = poly_gcd(g, &h1, p);
        let deg1 = d1.len() - 1;
        if deg1 > 0 && deg1 < d {
            let mut quotient = g.to_vec();
            // divide exactly: quotient = g / d1 via repeated subtraction
            quotient = poly_div_exact(&quotient, &d1, p);
            split_linear(&d1, p, out);
            split_linear(&quotient, p, out);
            return;
        }
    }
}

fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = invmod(b[db], p);
    for k in (0..q.len()).rev() {
        let f = mulmod(r[k + db], lead_inv, p);
        q[k] = f;
        if f != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = submod(r[k + j], mulmod(f, bj, p), p);
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "non-exact polynomial division");
    poly_trim(&mut q);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_roots() {
        assert!(is_prime_u64(13));
        assert!(is_prime_u64(491));
        assert!(!is_prime_u64(221));
        assert!(is_prime_u64(1_000_000_007));
        let g = primitive_root(13).unwrap();
        assert_eq!(g, 2);
    }

    #[test]
    fn tonelli_shanks_finds_square_roots() {
        for p in [13u64, 17, 97, 491, 12289] {
            for x in 1..p.min(60) {
                let sq = mulmod(x, x, p);
                let r = sqrt_mod(sq, p).unwrap();
                assert!(r == x || r == p - x, "p={p} x={x} r={r}");
            }
        }
        assert!(sqrt_mod(5, 13).is_none(), "5 is a non-residue mod 13");
    }

    #[test]
    fn charpoly_of_companion_like_matrices() {
        let p = 97;
        // diag(2, 3): (x−2)(x−3) = x² −5x + 6
        let m = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(charpoly(&m, p), vec![6, 97 - 5, 1]);
        // nilpotent Jordan block: x²
        let m = vec![vec![0, 1], vec![0, 0]];
        assert_eq!(charpoly(&m, p), vec![0, 0, 1]);
        // a 3×3 with known trace/determinant
        let m = vec![vec![1, 2, 0], vec![0, 1, 5], vec![7, 0, 3]];
        let cp = charpoly(&m, p);
        assert_eq!(cp.len(), 4);
        assert_eq!(cp[3], 1);
        // trace = 5: coefficient of x² is −5
        assert_eq!(cp[2], p - 5);
        // det = 1·(3−0) − 2·(0−35) + 0 = 73; constant term = −det for odd dim
        assert_eq!(cp[0], p - 73);
    }

    #[test]
    fn eigen_decomposition_via_kernels() {
        let p = 13;
        let m = vec![vec![4, 0], vec![0, 9]];
        let roots = roots_mod_p(&charpoly(&m, p), p);
        assert_eq!(roots, vec![4, 9]);
        for &r in &roots {
            let shifted: Vec<Vec<u64>> = m
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut row = row.clone();
                    row[i] = submod(row[i], r, p);
                    row
                })
                .collect();
            assert_eq!(kernel_basis(&shifted, p).len(), 1);
        }
    }

    #[test]
    fn root_finding_handles_large_primes() {
        // (x − 3)(x − 1_000_000) over a large prime, via gcd splitting
        let p = 1_000_000_007u64;
        let f = poly_mul(&[p - 3, 1], &[p - 1_000_000, 1], p);
        assert_eq!(roots_mod_p(&f, p), vec![3, 1_000_000]);
    }

    #[test]
    fn rref_is_canonical() {
        let p = 7;
        let mut rows = vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 0]];
        let pivots = rref(&mut rows, p);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows, vec![vec![1, 0, 3], vec![0, 1, 0]]);
    }
}

//! Word-sized modular arithmetic: powers, inverses, square roots, primality
//! and factoring of `p - 1`.
//!
//! All moduli here are below `2^64`, so products are formed in `u128`.

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = egcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(reduce_i128(s, m))
}

/// Legendre symbol `(a / p)` for an odd prime `p`: returns -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = reduce_i128(a as i128, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of `a` modulo an odd prime `p` by Tonelli–Shanks.
///
/// The quadratic non-residue is the smallest `z >= 2` with `(z/p) = -1`, so
/// the returned root is a deterministic function of `(a, p)`. Of the two
/// roots the smaller one in `[0, p)` is returned.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let root = if s == 1 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let mut z = 2u64;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

/// Deterministic Miller–Rabin, exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in `[lo, hi]` by a segmented sieve of Eratosthenes.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut small = vec![true; (root + 1) as usize];
    let mut base = Vec::new();
    for i in 2..=root {
        if small[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += i;
            }
        }
    }
    let mut seg = vec![true; (hi - lo + 1) as usize];
    for &b in &base {
        let start = (b * b).max(lo.div_ceil(b) * b);
        let mut j = start;
        while j <= hi {
            seg[(j - lo) as usize] = false;
            j += b;
        }
    }
    seg.iter()
        .enumerate()
        .filter(|(_, &keep)| keep)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

fn pollard_rho(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..64u64 {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return Some(d);
        }
    }
    None
}

/// Distinct prime factors of `n` in increasing order.
///
/// Trial division up to `2^16`, then Pollard rho on what is left.
pub fn prime_factors(n: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m && d < (1 << 16) {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if m > 1 {
        stack.push(m);
    }
    while let Some(x) = stack.pop() {
        if is_prime(x) {
            out.push(x);
            continue;
        }
        let f = pollard_rho(x).ok_or(Error::FactorizationFailure(n))?;
        stack.push(f);
        stack.push(x / f);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_matches_brute_force() {
        for p in primes_in(3, 400) {
            for a in 0..p {
                let brute = (0..p).find(|x| mul_mod(*x, *x, p) == a);
                match sqrt_mod(a, p) {
                    Some(r) => {
                        assert_eq!(mul_mod(r, r, p), a);
                        assert_eq!(Some(r), brute);
                    }
                    None => assert!(brute.is_none(), "missed root of {a} mod {p}"),
                }
            }
        }
    }

    #[test]
    fn sieve_agrees_with_miller_rabin() {
        let sieved = primes_in(1, 20_000);
        let mr: Vec<u64> = (1..=20_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, mr);
        assert_eq!(primes_in(100, 130), vec![101, 103, 107, 109, 113, 127]);
    }

    #[test]
    fn factors_of_p_minus_one() {
        assert_eq!(prime_factors(29788).unwrap(), vec![2, 11, 677]);
        assert_eq!(prime_factors(12).unwrap(), vec![2, 3]);
        assert_eq!(prime_factors(1).unwrap(), Vec::<u64>::new());
        // 2^32 + 15 is prime; the product exercises the rho branch.
        let big = 4_294_967_311u64 * 65_537;
        assert_eq!(prime_factors(big).unwrap(), vec![65_537, 4_294_967_311]);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 5), Some(2));
        assert_eq!(inv_mod(5, 25), None);
        assert_eq!(legendre(-1, 13), 1);
        assert_eq!(legendre(-1, 7), -1);
    }
}

//! Integer helpers: gcd, modular powers, factorization and CRT.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
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

pub fn is_odd_prime(n: u64) -> bool {
    n != 2 && is_prime(n)
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Combines `x = r_i (mod m_i)` for pairwise coprime moduli into the unique
/// residue modulo their product.
pub fn crt(residues: &[u64], moduli: &[u64]) -> Option<(u64, u64)> {
    if residues.len() != moduli.len() {
        return None;
    }
    let mut x = 0u128;
    let mut m = 1u128;
    for (&r, &mi) in residues.iter().zip(moduli) {
        if gcd(m as u64, mi) != 1 {
            return None;
        }
        // x + m*t = r (mod mi)  =>  t = (r - x) * m^{-1} (mod mi)
        let inv = mod_inverse((m % mi as u128) as u64, mi)? as u128;
        let diff = (r as u128 + mi as u128 - x % mi as u128) % mi as u128;
        let t = diff * inv % mi as u128;
        x += m * t;
        m *= mi as u128;
    }
    Some((x as u64, m as u64))
}

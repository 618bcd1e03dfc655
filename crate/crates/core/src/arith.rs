//! The three arithmetic functions attached to elliptic coverings: the
//! primitive n-torsion count t(n), the covering-counting function sigma'(n),
//! and Euler's totient. All multiplicative; t = sigma' * totient for odd n.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithTriple {
    pub n: u64,
    pub torsion: u64,
    pub sigma_prime: u64,
    pub euler_phi: u64,
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// t(n) = prod (p^2 - 1) p^{2(k-1)}: the number of primitive n-torsion
/// points of an elliptic curve.
pub fn torsion_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let mut acc = 1u64;
    for (p, k) in factorize(n) {
        acc = acc
            .checked_mul((p * p - 1) * p.pow(2 * (k - 1)))
            .ok_or_else(|| Error::InvalidInput("torsion count overflows u64".into()))?;
    }
    Ok(acc)
}

/// sigma'(p^k) = p^{k-1}(p+1) for odd p, sigma'(2^k) = 2^{k+1} - 1,
/// multiplicatively extended.
pub fn sigma_prime(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let mut acc = 1u64;
    for (p, k) in factorize(n) {
        let factor = if p == 2 {
            (1u64 << (k + 1)) - 1
        } else {
            p.pow(k - 1) * (p + 1)
        };
        acc = acc
            .checked_mul(factor)
            .ok_or_else(|| Error::InvalidInput("sigma' overflows u64".into()))?;
    }
    Ok(acc)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let mut acc = n;
    for (p, _) in factorize(n) {
        acc = acc / p * (p - 1);
    }
    Ok(acc)
}

pub fn arith_functions(n: u64) -> Result<ArithTriple> {
    Ok(ArithTriple {
        n,
        torsion: torsion_count(n)?,
        sigma_prime: sigma_prime(n)?,
        euler_phi: euler_phi(n)?,
    })
}

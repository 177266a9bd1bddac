//! Differential-length bookkeeping: the function rho, p-adic valuations and
//! binomial coefficients mod p.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fp_linalg::{is_prime, FpScalar};

fn check_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    Ok(())
}

/// rho(k) for k >= -1, exact.
///
/// rho(-1) = 1, rho(0) = 0, rho(2k-1) = (p^{2k+1}+1)/(p+1),
/// rho(2k) = (p^{2k+2}-p^2)/(p^2-1).
pub fn rho(p: u32, k: i64) -> Result<BigInt> {
    check_prime(p)?;
    if k < -1 {
        return Err(Error::OutOfRange(format!("rho({k}) needs k >= -1")));
    }
    let pb = BigInt::from(p);
    Ok(match k {
        -1 => BigInt::one(),
        0 => BigInt::zero(),
        k if k % 2 != 0 => {
            let m = (k + 1) / 2;
            (num_traits::pow(pb.clone(), (2 * m + 1) as usize) + 1) / (pb + 1)
        }
        k => {
            let m = k / 2;
            let p2 = &pb * &pb;
            (num_traits::pow(pb.clone(), (2 * m + 2) as usize) - &p2) / (p2 - 1)
        }
    })
}

/// rho(k) as an i64; errors if it does not fit.
pub fn rho_i64(p: u32, k: i64) -> Result<i64> {
    rho(p, k)?
        .to_i64()
        .ok_or_else(|| Error::OutOfRange(format!("rho({k}) at p={p} exceeds i64")))
}

/// p-adic valuation of a nonzero integer.
pub fn vp(p: u32, i: &BigInt) -> Result<u32> {
    check_prime(p)?;
    if i.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let pb = BigInt::from(p);
    let mut x = i.abs();
    let mut v = 0;
    while (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    Ok(v)
}

/// p-adic valuation of a nonzero i64.
pub fn vp_i64(p: u32, i: i64) -> Result<u32> {
    if i == 0 {
        return Err(Error::ValuationOfZero);
    }
    let mut x = i.unsigned_abs();
    let p = p as u64;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Ok(v)
}

/// Exact p-power as i64.
pub fn pow_i64(p: u32, e: u32) -> i64 {
    (p as i64).checked_pow(e).expect("p-power overflows i64")
}

/// C(i+j, i) mod p, by Lucas' theorem on base-p digits.
pub fn binom_mod_p(p: u32, i: u64, j: u64) -> Result<FpScalar> {
    check_prime(p)?;
    Ok(FpScalar::new(binom_lucas(p, i + j, i) as i64, p).expect("prime checked"))
}

/// C(n, k) mod p by Lucas; assumes p prime.
pub(crate) fn binom_lucas(p: u32, mut n: u64, mut k: u64) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p64, k % p64);
        if b > a {
            return 0;
        }
        acc = acc * small_binom(a, b, p64) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let mut inv = 1u64;
    let mut base = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    num * inv % p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values_p5() {
        let r: Vec<i64> = (-1..=4).map(|k| rho_i64(5, k).unwrap()).collect();
        assert_eq!(r, vec![1, 0, 21, 25, 521, 650]);
        assert!(rho(5, -2).is_err());
        assert!(rho(4, 1).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(vp_i64(5, 50).unwrap(), 2);
        assert_eq!(vp(5, &BigInt::from(-125)).unwrap(), 3);
        assert_eq!(vp(5, &BigInt::zero()), Err(Error::ValuationOfZero));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(binom_mod_p(5, 2, 3).unwrap().value(), 0);
        assert_eq!(binom_mod_p(5, 5, 5).unwrap().value(), 2);
    }
}

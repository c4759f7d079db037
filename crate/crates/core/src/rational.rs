//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Ground field scalar. Always kept in lowest terms with a positive denominator.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// `(-1)^k` as a scalar.
pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Serializes as `p/q`, or `p` when the denominator is one.
pub fn to_string(x: &Q) -> String {
    x.to_string()
}

pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad rational `{s}`")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(n, d))
}

/// Adds `c` into `map[key]`, removing the entry when it cancels.
pub(crate) fn add_into<K: Ord>(map: &mut std::collections::BTreeMap<K, Q>, key: K, c: Q) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
        assert_eq!(to_string(&frac(3, 2)), "3/2");
        assert_eq!(to_string(&q(-2)), "-2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}

//! p-adic exponential and logarithm by truncated power series.
//!
//! Truncation is exact: terms are summed until every omitted term provably
//! has valuation at least `target_digits`, and the result is then capped at
//! absolute precision `target_digits`.

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};

pub use crate::domain::in_ep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesBudget {
    pub max_terms: u32,
    pub target_digits: u32,
}

impl SeriesBudget {
    pub fn new(max_terms: u32, target_digits: u32) -> Self {
        SeriesBudget { max_terms, target_digits }
    }

    /// Enough terms for `target_digits` absolute digits at any valuation >= 1.
    pub fn for_digits(target_digits: u32) -> Self {
        SeriesBudget { max_terms: 4 * target_digits + 16, target_digits }
    }
}

/// Sum of base-p digits of `n`.
fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// `ord_p(n!)` by Legendre's formula `(n - s_p(n)) / (p - 1)`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    (n - digit_sum(n, p)) / (p - 1)
}

fn ord_p(mut n: u64, p: u64) -> u64 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// `floor(log_p n)`, an upper bound for `ord_p(n)`.
fn floor_log(mut n: u64, p: u64) -> u64 {
    let mut k = 0;
    while n >= p {
        n /= p;
        k += 1;
    }
    k
}

fn require_odd_prime(prime: u64) -> Result<()> {
    if prime < 3 {
        Err(Error::domain("exp/log are only provided for p >= 3"))
    } else {
        Ok(())
    }
}

/// `log_p(x) = sum_{n>=1} (-1)^(n+1) (x-1)^n / n` for `|x - 1|_p < 1`.
pub fn padic_log(x: &PadicNumber, budget: SeriesBudget) -> Result<PadicNumber> {
    let p = x.prime();
    require_odd_prime(p)?;
    let one = PadicNumber::one(p, x.digits().max(1));
    let t = x.sub(&one)?;
    let v = match t.valuation() {
        Valuation::Infinite => return Ok(PadicNumber::zero(p).with_precision(target(budget, &t))),
        Valuation::Finite(v) if v >= 1 => v as u64,
        Valuation::Finite(_) => {
            return Err(Error::domain(format!("log needs |x - 1| < 1, got x = {x}")));
        }
    };
    let goal = budget.target_digits as u64;
    let mut sum = PadicNumber::zero(p);
    let mut power = t.clone();
    let mut n = 1u64;
    // n*v - log_p(n) is increasing, so once it reaches the goal every later
    // term is below the target too
    while n * v < goal + floor_log(n, p) {
        if n > budget.max_terms as u64 {
            return Err(Error::precision(format!("log series needs more than {} terms", budget.max_terms)));
        }
        if n * v - ord_p(n, p) < goal {
            let denom = PadicNumber::from_integer(n as i64, p, power.digits().max(1))?;
            let term = power.div(&denom)?;
            sum = if n % 2 == 1 { sum.add(&term)? } else { sum.sub(&term)? };
        }
        power = power.mul(&t)?;
        n += 1;
    }
    Ok(sum.with_precision(target(budget, &sum)))
}

/// `exp_p(x) = sum_{n>=0} x^n / n!` for `|x|_p < p^(-1/(p-1))`.
pub fn padic_exp(x: &PadicNumber, budget: SeriesBudget) -> Result<PadicNumber> {
    let p = x.prime();
    require_odd_prime(p)?;
    let digits = x.digits().max(budget.target_digits).max(1);
    let one = PadicNumber::one(p, digits);
    let v = match x.valuation() {
        Valuation::Infinite => return Ok(one.with_precision(target(budget, x))),
        Valuation::Finite(v) if v >= 1 => v as u64,
        Valuation::Finite(_) => {
            return Err(Error::domain(format!("exp needs valuation >= 1, got x = {x}")));
        }
    };
    let goal = budget.target_digits as u64;
    let mut sum = one;
    let mut term = PadicNumber::one(p, digits);
    let mut n = 1u64;
    // ord(n!) <= (n-1)/(p-1), so n*v - (n-1)/(p-1) bounds term valuations
    // from below and is increasing in n
    while n * v * (p - 1) < goal * (p - 1) + (n - 1) {
        if n > budget.max_terms as u64 {
            return Err(Error::precision(format!("exp series needs more than {} terms", budget.max_terms)));
        }
        let denom = PadicNumber::from_integer(n as i64, p, x.digits().max(1))?;
        term = term.mul(x)?.div(&denom)?;
        if n * v - factorial_valuation(n, p) < goal {
            sum = sum.add(&term)?;
        }
        n += 1;
    }
    Ok(sum.with_precision(target(budget, &sum)))
}

fn target(budget: SeriesBudget, x: &PadicNumber) -> i64 {
    let t = budget.target_digits as i64;
    x.precision().map_or(t, |p| p.min(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Qp;
    use num_bigint::BigUint;

    #[test]
    fn legendre() {
        // 10! = 2^8 * 3^4 * 5^2 * 7
        assert_eq!(factorial_valuation(10, 2), 8);
        assert_eq!(factorial_valuation(10, 3), 4);
        assert_eq!(factorial_valuation(10, 5), 2);
        assert_eq!(factorial_valuation(10, 7), 1);
        assert_eq!(factorial_valuation(0, 5), 0);
    }

    #[test]
    fn log_of_one_and_six() {
        let q = Qp::new(5, 20).unwrap();
        let b = SeriesBudget::for_digits(20);
        assert!(padic_log(&q.one(), b).unwrap().is_zero());
        let l = padic_log(&q.int(6), b).unwrap();
        assert_eq!(l.residue(2).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn exp_of_zero_and_five() {
        let q = Qp::new(5, 20).unwrap();
        let b = SeriesBudget::for_digits(20);
        let e0 = padic_exp(&q.zero(), b).unwrap();
        assert_eq!(e0.residue(20).unwrap(), BigUint::from(1u32));
        let e = padic_exp(&q.int(5), b).unwrap();
        assert_eq!(e.residue(2).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn domains_enforced() {
        let q = Qp::new(5, 10).unwrap();
        let b = SeriesBudget::for_digits(10);
        assert!(matches!(padic_log(&q.int(2), b), Err(Error::Domain(_))));
        assert!(matches!(padic_exp(&q.int(2), b), Err(Error::Domain(_))));
        let q2 = Qp::new(2, 10).unwrap();
        assert!(padic_exp(&q2.int(4), b).is_err());
    }

    #[test]
    fn budget_too_small() {
        let q = Qp::new(5, 30).unwrap();
        assert!(matches!(padic_exp(&q.int(5), SeriesBudget::new(3, 30)), Err(Error::Precision(_))));
    }

    #[test]
    fn ep_closed_under_product_small() {
        let q = Qp::new(3, 8).unwrap();
        let a = q.int(4);
        let b = q.int(7);
        assert!(in_ep(&a.mul(&b).unwrap()));
        assert!(!in_ep(&q.int(3)));
    }
}

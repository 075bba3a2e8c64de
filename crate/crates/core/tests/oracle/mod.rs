//! Independent reference computations in plain machine integers.
//!
//! Everything here works modulo `p^k` with `u64` arithmetic and exhaustive
//! search, sharing no code with the library.

#![allow(dead_code)]

pub fn pow(p: u64, k: u32) -> u64 {
    p.pow(k)
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

pub fn mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powm(a: u64, e: u32, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| mul(acc, a, m))
}

/// `(a xy + b(x+y) + c) / (a1 xy + b1(x+y) + c1)` mod `m`.
pub fn mobius(c: [i64; 6], x: u64, y: u64, m: u64) -> Option<u64> {
    let [a, b, cc, a1, b1, c1] = c.map(|v| reduce(v, m));
    let xy = mul(x, y, m);
    let s = (x + y) % m;
    let num = (mul(a, xy, m) + mul(b, s, m) + cc) % m;
    let den = (mul(a1, xy, m) + mul(b1, s, m) + c1) % m;
    Some(mul(num, inv_mod(den, m)?, m))
}

/// Residues `u mod p^k` with `u = 1 mod p`.
pub fn ep_residues(p: u64, k: u32) -> impl Iterator<Item = u64> {
    (0..pow(p, k - 1)).map(move |t| 1 + p * t)
}

/// Residues `u mod p^k` with `p` not dividing `u`.
pub fn unit_residues(p: u64, k: u32) -> impl Iterator<Item = u64> {
    (1..pow(p, k)).filter(move |u| u % p != 0)
}

/// All `u` in `candidates` with `u = g(u) mod m`.
pub fn fixed_points(candidates: impl Iterator<Item = u64>, m: u64, g: impl Fn(u64) -> Option<u64>) -> Vec<u64> {
    candidates.filter(|&u| g(u) == Some(u % m)).collect()
}

/// The root of `u = f(u,u)^n` in `E_p` mod `p^k`.
pub fn mobius_power_roots(c: [i64; 6], n: u32, p: u64, k: u32) -> Vec<u64> {
    let m = pow(p, k);
    fixed_points(ep_residues(p, k), m, |u| mobius(c, u, u, m).map(|v| powm(v, n, m)))
}

/// Exact rational `num/den` reduced modulo `m`.
pub fn ratio_mod(num: i128, den: i128, m: u64) -> Option<u64> {
    let n = num.rem_euclid(m as i128) as u64;
    let d = den.rem_euclid(m as i128) as u64;
    Some(mul(n, inv_mod(d, m)?, m))
}

/// `(P(x) + C) / (Q(x) + C1)` with monomials `(exponents, coefficient)`.
pub fn ratpoly(num: &[(Vec<u32>, i64)], den: &[(Vec<u32>, i64)], c: i64, c1: i64, xs: &[u64], m: u64) -> Option<u64> {
    let poly = |terms: &[(Vec<u32>, i64)]| {
        terms.iter().fold(0, |acc, (e, a)| {
            let mono = xs.iter().zip(e).fold(reduce(*a, m), |t, (&x, &k)| mul(t, powm(x, k, m), m));
            (acc + mono) % m
        })
    };
    let n = (poly(num) + reduce(c, m)) % m;
    let d = (poly(den) + reduce(c1, m)) % m;
    Some(mul(n, inv_mod(d, m)?, m))
}

/// `f(x)_k = (sum_j a[k][j] x_j + a0[k]) / (sum_j b[k][j] x_j + b0[k])`.
pub fn linfrac(a: &[Vec<i64>], a0: &[i64], b: &[Vec<i64>], b0: &[i64], x: &[u64], m: u64) -> Option<Vec<u64>> {
    (0..x.len())
        .map(|k| {
            let mut num = reduce(a0[k], m);
            let mut den = reduce(b0[k], m);
            for j in 0..x.len() {
                num = (num + mul(reduce(a[k][j], m), x[j], m)) % m;
                den = (den + mul(reduce(b[k][j], m), x[j], m)) % m;
            }
            Some(mul(num, inv_mod(den, m)?, m))
        })
        .collect()
}

/// `(F(x))_k = lambda_k (a x_k + f) / (b + f)` with `f = p sum_j x_j + 1`.
pub fn km2009(theta: i64, p: u64, x: &[u64], m: u64) -> Option<Vec<u64>> {
    let b = reduce(theta - 1, m);
    let a = mul(p, b, m);
    let f = (mul(p, x.iter().sum::<u64>() % m, m) + 1) % m;
    let inv = inv_mod((b + f) % m, m)?;
    Some(x.iter().map(|&xk| mul((mul(a, xk, m) + f) % m, inv, m)).collect())
}

/// `prod_{j=1..n} sigma^j(y)` for a truncated sequence.
pub fn shifted_product(y: &[u64], n: usize, m: u64) -> Vec<u64> {
    (0..y.len()).map(|i| (1..=n).fold(1 % m, |acc, j| mul(acc, y.get(i + j).copied().unwrap_or(0), m))).collect()
}

/// Every length-`len` vector over `0..m`.
pub fn all_vectors(len: usize, m: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |r| {
                    let mut w = v.clone();
                    w.push(r);
                    w
                })
            })
            .collect();
    }
    out
}

fn ord(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// `p^e * (unit / (c * p^f))` mod `p^k`, or 0 when the valuation is at least `k`.
fn term(p: u64, e: u32, num_unit: u64, den: u64, k: u32) -> u64 {
    let f = ord(den, p);
    let m = pow(p, k);
    if e >= f + k {
        return 0;
    }
    let d = den / pow(p, f);
    let scale = pow(p, e - f);
    mul(mul(scale % m, num_unit % m, m), inv_mod(d % m, m).unwrap(), m)
}

/// `sum_{n < terms} x^n / n!` mod `p^k` for `x = p^e * u`, `e >= 1`.
pub fn exp_partial(e: u32, u: u64, p: u64, k: u32, terms: u32) -> u64 {
    let m = pow(p, k);
    let mut acc = 1 % m;
    for n in 1..terms as u64 {
        // n! = p^f * cofactor, with the cofactor kept mod p^k
        let f = (1..=n).map(|i| ord(i, p)).sum::<u32>();
        let cofactor = (1..=n).fold(1u64, |c, i| mul(c, i / pow(p, ord(i, p)), m));
        let v = e * n as u32;
        if v >= f + k {
            continue;
        }
        let num = mul(pow(p, v - f) % m, powm(u, n as u32, m), m);
        acc = (acc + mul(num, inv_mod(cofactor, m).unwrap(), m)) % m;
    }
    acc
}

/// `sum_{1 <= n < terms} (-1)^(n+1) t^n / n` mod `p^k` for `t = p^e * u`.
pub fn log1p_partial(e: u32, u: u64, p: u64, k: u32, terms: u32) -> u64 {
    let m = pow(p, k);
    let mut acc = 0;
    for n in 1..terms {
        let v = e * n;
        let t = term(p, v, powm(u, n, m), n as u64, k);
        acc = if n % 2 == 1 { (acc + t) % m } else { (acc + m - t) % m };
    }
    acc
}

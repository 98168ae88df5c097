//! Modular arithmetic on small moduli and the structure of `(Z/mZ)^x`.

use num_integer::Integer;

use crate::error::{invalid, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
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

/// Trial division; the moduli and primes handled here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `lo..=hi`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=n)
        .filter(|&k| sieve[k])
        .map(|k| k as u64)
        .collect()
}

/// Prime factorization as `(p, k)` pairs with ascending `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Multiplicative order of `a` modulo `m`.
pub fn element_order(m: u64, a: u64) -> Result<u64> {
    if m == 0 {
        return invalid("modulus must be positive");
    }
    let a = a % m;
    if a.gcd(&m) != 1 {
        return invalid(format!("{a} is not a unit modulo {m}"));
    }
    // the order divides phi(m); strip prime factors while the power stays 1
    let mut order = euler_phi(m);
    for (q, _) in factorize(order) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Smallest generator of the cyclic group `(Z/p^k)^x` for an odd prime `p`.
fn primitive_root_odd_prime_power(p: u64, k: u32) -> u64 {
    let pk = p.pow(k);
    let phi = pk / p * (p - 1);
    (2..pk)
        .find(|&g| {
            g % p != 0
                && factorize(phi)
                    .iter()
                    .all(|&(q, _)| pow_mod(g, phi / q, pk) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

/// Solves `x = r mod q`, `x = 1 mod m/q` for coprime `q`, `m/q`.
fn crt_lift(r: u64, q: u64, m: u64) -> u64 {
    let rest = m / q;
    if rest == 1 {
        return r % m;
    }
    // x = 1 + rest * t with rest * t = r - 1 (mod q)
    let inv = mod_inverse(rest % q, q).expect("coprime CRT factors");
    let t = mul_mod((r + q - 1) % q, inv, q);
    (1 + rest * t) % m
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// An independent-generator presentation of `(Z/mZ)^x`.
///
/// Every unit has a unique exponent vector `e` with
/// `a = prod generators[i]^e[i]`, `0 <= e[i] < orders[i]`.
#[derive(Clone, Debug)]
pub struct UnitGroupPresentation {
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    // residue -> mixed-radix index of its exponent vector, u32::MAX for non-units
    index: Vec<u32>,
}

impl UnitGroupPresentation {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_unit(&self, a: u64) -> bool {
        self.index[(a % self.modulus) as usize] != u32::MAX
    }

    /// Exponent vector of the unit `a` in the generator basis.
    pub fn exponents(&self, a: u64) -> Result<Vec<u64>> {
        let idx = self.index[(a % self.modulus) as usize];
        if idx == u32::MAX {
            return invalid(format!("{a} is not a unit modulo {}", self.modulus));
        }
        let mut rest = idx as u64;
        Ok(self
            .orders
            .iter()
            .map(|&n| {
                let e = rest % n;
                rest /= n;
                e
            })
            .collect())
    }

    /// The unit with the given exponent vector.
    pub fn element(&self, exponents: &[u64]) -> u64 {
        self.generators
            .iter()
            .zip(exponents)
            .fold(1 % self.modulus, |acc, (&g, &e)| {
                mul_mod(acc, pow_mod(g, e, self.modulus), self.modulus)
            })
    }

    /// All units in ascending order.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.modulus).filter(move |&a| self.index[a as usize] != u32::MAX)
    }
}

/// Builds the presentation from the prime-power factorization of `m`:
/// primitive roots for odd prime powers and `{-1, 5}` for powers of two,
/// each lifted through the Chinese remainder theorem.
pub fn unit_group_structure(m: u64) -> Result<UnitGroupPresentation> {
    if m < 3 {
        return invalid(format!("modulus must be at least 3, got {m}"));
    }
    if m > u32::MAX as u64 / 2 {
        return invalid(format!("modulus {m} is too large"));
    }
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (p, k) in factorize(m) {
        let q = p.pow(k);
        if p == 2 {
            match k {
                1 => {}
                2 => {
                    generators.push(crt_lift(3, q, m));
                    orders.push(2);
                }
                _ => {
                    generators.push(crt_lift(q - 1, q, m));
                    orders.push(2);
                    generators.push(crt_lift(5, q, m));
                    orders.push(q / 4);
                }
            }
        } else {
            generators.push(crt_lift(primitive_root_odd_prime_power(p, k), q, m));
            orders.push(q / p * (p - 1));
        }
    }

    let mut index = vec![u32::MAX; m as usize];
    // walk exponent vectors in mixed-radix order, first generator fastest
    let total: u64 = orders.iter().product();
    let mut exps = vec![0u64; orders.len()];
    let mut current = 1 % m;
    for flat in 0..total {
        index[current as usize] = flat as u32;
        for i in 0..exps.len() {
            exps[i] += 1;
            if exps[i] < orders[i] {
                current = mul_mod(current, generators[i], m);
                break;
            }
            exps[i] = 0;
            // g^{n-1} * g = 1: undo the wrapped coordinate
            current = mul_mod(current, generators[i], m);
        }
    }
    debug_assert_eq!(
        index.iter().filter(|&&i| i != u32::MAX).count() as u64,
        euler_phi(m)
    );
    Ok(UnitGroupPresentation {
        modulus: m,
        generators,
        orders,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn brute_order(m: u64, a: u64) -> u64 {
        let mut x = a % m;
        let mut k = 1;
        while x != 1 {
            x = x * a % m;
            k += 1;
        }
        k
    }

    #[test]
    fn structure_of_27() {
        let u = unit_group_structure(27).unwrap();
        assert_eq!(u.orders(), &[18]);
        assert_eq!(u.generators(), &[2]);
        assert_eq!(pow_mod(2, 9, 27), 26);
        assert_eq!(brute_order(27, 2), 18);
    }

    #[test]
    fn structure_of_4_and_8() {
        let u = unit_group_structure(4).unwrap();
        assert_eq!(u.generators(), &[3]);
        assert_eq!(u.orders(), &[2]);

        let u = unit_group_structure(8).unwrap();
        assert_eq!(u.orders(), &[2, 2]);
        for &g in u.generators() {
            assert_eq!(brute_order(8, g), 2);
        }
        let units: Vec<u64> = u.units().collect();
        assert_eq!(units, vec![1, 3, 5, 7]);
    }

    #[test]
    fn small_moduli_rejected() {
        assert!(matches!(
            unit_group_structure(2),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            unit_group_structure(0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(element_order(27, 26).unwrap(), 2);
        assert_eq!(element_order(27, 4).unwrap(), 9);
        assert_eq!(brute_order(27, 4), 9);
        assert_eq!(element_order(5, 2).unwrap(), 4);
        assert!(matches!(element_order(27, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn element_order_matches_brute_force() {
        for m in 2..120u64 {
            for a in 1..m {
                if a.gcd(&m) == 1 {
                    let ord = element_order(m, a).unwrap();
                    assert_eq!(ord, brute_order(m, a), "m={m} a={a}");
                    assert_eq!(euler_phi(m) % ord, 0);
                }
            }
        }
    }

    #[test]
    fn every_unit_has_exactly_one_exponent_vector() {
        for m in 3..=200u64 {
            let u = unit_group_structure(m).unwrap();
            assert_eq!(u.order(), euler_phi(m), "m={m}");
            for (&g, &n) in u.generators().iter().zip(u.orders()) {
                assert_eq!(g.gcd(&m), 1);
                assert_eq!(brute_order(m, g), n, "m={m} g={g}");
            }
            // enumerate every exponent vector and count hits
            let mut hits = vec![0u32; m as usize];
            let mut exps = vec![0u64; u.orders().len()];
            loop {
                let a = u.element(&exps);
                hits[a as usize] += 1;
                assert_eq!(u.exponents(a).unwrap(), exps);
                let mut i = 0;
                while i < exps.len() {
                    exps[i] += 1;
                    if exps[i] < u.orders()[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if i == exps.len() {
                    break;
                }
            }
            for a in 0..m {
                let expected = u32::from(a.gcd(&m) == 1);
                assert_eq!(hits[a as usize], expected, "m={m} a={a}");
            }
        }
    }

    #[test]
    fn primes_and_divisors() {
        assert_eq!(primes_in(2, 20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_in(10, 4), Vec::<u64>::new());
        assert!(is_prime(109) && is_prime(31) && !is_prime(1) && !is_prime(91));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(3, 9), None);
    }
}

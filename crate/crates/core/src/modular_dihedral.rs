//! Exact arithmetic in `Z_n`, the dihedral group `D_2n`, and the affine
//! maps `psi_{u,v}` that realize its automorphisms.
//!
//! Elements are kept in the canonical form `s^eps * r^e` with the
//! reflection flag on the left and `0 <= e < n`, so equality is
//! structural. The text syntax `r^a*s` is normalized to `s*r^{-a}` at
//! parse time.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// An element of the dihedral group `D_2n` in canonical form `s^eps r^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    reflect: bool,
    exp: usize,
    n: usize,
}

impl DihedralElement {
    pub fn new(reflect: bool, exp: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("modulus must be >= 1".into()));
        }
        Ok(Self { reflect, exp: exp % n, n })
    }

    pub fn identity(n: usize) -> Self {
        Self { reflect: false, exp: 0, n }
    }

    pub fn rotation(exp: usize, n: usize) -> Self {
        Self { reflect: false, exp: exp % n, n }
    }

    pub fn reflection(exp: usize, n: usize) -> Self {
        Self { reflect: true, exp: exp % n, n }
    }

    pub fn is_identity(&self) -> bool {
        !self.reflect && self.exp == 0
    }

    pub fn is_rotation(&self) -> bool {
        !self.reflect
    }

    pub fn is_reflection(&self) -> bool {
        self.reflect
    }

    pub fn exp(&self) -> usize {
        self.exp
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    /// Group product. With both operands in canonical form,
    /// `(s^a r^x)(s^b r^y) = s^(a xor b) r^(y + (-1)^b x)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch(self.n, other.n));
        }
        let n = self.n;
        let exp = if other.reflect {
            (other.exp + n - self.exp % n) % n
        } else {
            (self.exp + other.exp) % n
        };
        Ok(Self { reflect: self.reflect ^ other.reflect, exp, n })
    }

    pub fn inv(&self) -> Self {
        if self.reflect {
            *self
        } else {
            Self { reflect: false, exp: (self.n - self.exp) % self.n, n: self.n }
        }
    }

    /// Least `m >= 1` with `a^m = e`.
    pub fn order(&self) -> usize {
        if self.reflect {
            2
        } else if self.exp == 0 {
            1
        } else {
            self.n / self.n.gcd(&self.exp)
        }
    }

    /// Parse the element grammar `e`, `r^3`, `s`, `s*r^3`, `r^3*s`.
    /// Exponents are decimal, reduced mod `n`; `r^3*s` normalizes to
    /// `s*r^{n-3}`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let err = |msg: &str| Error::Parse(text.to_string(), msg.to_string());
        if n == 0 {
            return Err(Error::Invalid("modulus must be >= 1".into()));
        }
        let t = text.trim();
        if t == "e" {
            return Ok(Self::identity(n));
        }
        let parts: Vec<&str> = t.split('*').collect();
        let parse_factor = |f: &str| -> Result<(bool, usize)> {
            if f == "s" {
                Ok((true, 0))
            } else if f == "r" {
                Ok((false, 1 % n))
            } else if let Some(rest) = f.strip_prefix("r^") {
                let e: i64 = rest
                    .parse()
                    .map_err(|_| err("exponent is not a decimal integer"))?;
                let m = n as i64;
                Ok((false, (((e % m) + m) % m) as usize))
            } else {
                Err(err("expected `e`, `s`, `r` or `r^<int>`"))
            }
        };
        match parts.as_slice() {
            [one] => {
                let (refl, exp) = parse_factor(one)?;
                Ok(Self { reflect: refl, exp, n })
            }
            [a, b] => {
                let (ra, ea) = parse_factor(a)?;
                let (rb, eb) = parse_factor(b)?;
                match (ra, rb) {
                    // s * r^e is already canonical
                    (true, false) => Ok(Self { reflect: true, exp: eb, n }),
                    // r^e * s = s * r^{-e}
                    (false, true) => Ok(Self { reflect: true, exp: (n - ea) % n, n }),
                    _ => Err(err("expected one rotation and one reflection factor")),
                }
            }
            _ => Err(err("too many factors")),
        }
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.reflect, self.exp) {
            (false, 0) => write!(f, "e"),
            (false, e) => write!(f, "r^{e}"),
            (true, 0) => write!(f, "s"),
            (true, e) => write!(f, "s*r^{e}"),
        }
    }
}

/// The affine map `psi_{u,v}: r -> r^u, s -> r^v s` on `D_2n`, identified
/// with `x -> ux + v` on exponents. Requires `gcd(u, n) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    u: usize,
    v: usize,
    n: usize,
}

impl AffineMap {
    pub fn new(u: usize, v: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("modulus must be >= 1".into()));
        }
        let u = u % n;
        if n > 1 && u.gcd(&n) != 1 {
            return Err(Error::NonUnit(u, n));
        }
        Ok(Self { u, v: v % n, n })
    }

    pub fn identity(n: usize) -> Self {
        Self { u: 1 % n, v: 0, n }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    /// `psi_{u,v}(r^e) = r^{ue}` and `psi_{u,v}(s r^e) = s r^{ue - v}`.
    pub fn apply(&self, g: &DihedralElement) -> Result<DihedralElement> {
        if g.modulus() != self.n {
            return Err(Error::ModulusMismatch(self.n, g.modulus()));
        }
        let n = self.n;
        let ue = (self.u * g.exp()) % n;
        if g.is_reflection() {
            Ok(DihedralElement::reflection((ue + n - self.v) % n, n))
        } else {
            Ok(DihedralElement::rotation(ue, n))
        }
    }

    /// `(u1,v1) o (u2,v2) = (u1 u2, v1 + u1 v2)`, so that
    /// `compose(a, b).apply(g) = a.apply(b.apply(g))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch(self.n, other.n));
        }
        let n = self.n;
        Ok(Self {
            u: (self.u * other.u) % n,
            v: (self.v + self.u * other.v) % n,
            n,
        })
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        let uinv = mod_inverse(self.u, n).expect("u is a unit");
        Self { u: uinv, v: (n - (uinv * self.v) % n) % n, n }
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Multiplicative inverse of `u` mod `n`, if `gcd(u, n) = 1`.
pub fn mod_inverse(u: usize, n: usize) -> Option<usize> {
    if n == 1 {
        return Some(0);
    }
    let ext = (u as i64).extended_gcd(&(n as i64));
    if ext.gcd != 1 {
        return None;
    }
    let m = n as i64;
    Some((((ext.x % m) + m) % m) as usize)
}

/// Units of `Z_n` in ascending order. Empty for `n = 1`.
pub fn units(n: usize) -> Vec<usize> {
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

/// Multiplicative closure of `gens` inside `(Z_n)^x`.
pub fn unit_subgroup(gens: &[usize], n: usize) -> Result<std::collections::BTreeSet<usize>> {
    use std::collections::BTreeSet;
    for &g in gens {
        if n > 1 && (g % n).gcd(&n) != 1 {
            return Err(Error::NonUnit(g % n, n));
        }
    }
    let one = 1 % n;
    let mut set: BTreeSet<usize> = BTreeSet::new();
    set.insert(one);
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = (x * (g % n)) % n;
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(set)
}

/// `gcd(n, x_1, ..., x_k)` with the `x_i` reduced mod `n`; the empty list
/// gives `n`.
pub fn gcd_all(n: usize, xs: &[usize]) -> usize {
    xs.iter().fold(n, |acc, &x| acc.gcd(&(x % n)))
}

//! The two base rings: the integers and the residue rings `Z/n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;

/// Base ring of every computation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RingSpec {
    Integers,
    /// `Z/n` with `n >= 2`. Construct through [`RingSpec::modulo`].
    IntegersMod(Int),
}

impl RingSpec {
    pub fn integers() -> Self {
        RingSpec::Integers
    }

    pub fn modulo(n: impl Into<Int>) -> Result<Self> {
        let n = n.into();
        if n < Int::from(2) {
            return Err(Error::InvalidModulus(n.to_string()));
        }
        Ok(RingSpec::IntegersMod(n))
    }

    pub fn modulus(&self) -> Option<&Int> {
        match self {
            RingSpec::Integers => None,
            RingSpec::IntegersMod(n) => Some(n),
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, RingSpec::Integers)
    }

    /// Canonical representative: identity over `Z`, residue in `[0, n)` over `Z/n`.
    pub fn reduce(&self, a: Int) -> Int {
        match self {
            RingSpec::Integers => a,
            RingSpec::IntegersMod(n) => a.mod_floor(n),
        }
    }

    pub fn elem(&self, a: i64) -> Int {
        self.reduce(Int::from(a))
    }

    pub fn add(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Int) -> Int {
        self.reduce(-a)
    }

    pub fn is_unit(&self, a: &Int) -> bool {
        match self {
            RingSpec::Integers => a.abs().is_one(),
            RingSpec::IntegersMod(n) => a.gcd(n).is_one(),
        }
    }

    /// Inverse of a unit.
    pub fn inverse(&self, a: &Int) -> Option<Int> {
        match self {
            RingSpec::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            RingSpec::IntegersMod(n) => mod_inverse(a, n),
        }
    }

    /// Size used for pivot selection: `|a|` over `Z`, `gcd(a, n)` over `Z/n`.
    /// Zero has no norm.
    pub fn norm(&self, a: &Int) -> Option<Int> {
        if a.is_zero() {
            return None;
        }
        Some(match self {
            RingSpec::Integers => a.abs(),
            RingSpec::IntegersMod(n) => a.gcd(n),
        })
    }

    /// Canonical generator of the principal ideal `(a)`: `|a|` over `Z`,
    /// `gcd(a, n)` over `Z/n` (with the zero ideal written as `0`).
    pub fn ideal_generator(&self, a: &Int) -> Int {
        match self {
            RingSpec::Integers => a.abs(),
            RingSpec::IntegersMod(n) => {
                let g = self.reduce(a.clone()).gcd(n);
                if &g == n {
                    Int::zero()
                } else {
                    g
                }
            }
        }
    }

    /// Canonical generator of the ideal `(a, b)`.
    pub fn ideal_sum(&self, a: &Int, b: &Int) -> Int {
        self.ideal_generator(&a.gcd(b))
    }

    /// A unit `s` with `s * a` equal to the canonical generator of `(a)`.
    pub fn normalizing_unit(&self, a: &Int) -> Int {
        match self {
            RingSpec::Integers => {
                if a.is_negative() {
                    Int::from(-1)
                } else {
                    Int::one()
                }
            }
            RingSpec::IntegersMod(n) => {
                if a.is_zero() {
                    return Int::one();
                }
                let g = a.gcd(n);
                let m = n / &g;
                let a_red = a / &g;
                // a_red is invertible modulo m; lift the inverse to a unit modulo n.
                let base =
                    if m.is_one() { Int::zero() } else { mod_inverse(&a_red, &m).expect("cofactor is coprime to n/g") };
                let mut s = base;
                loop {
                    if s.gcd(n).is_one() {
                        return s;
                    }
                    s += &m;
                }
            }
        }
    }

    /// `q` with `a * q = b`, when `a` divides `b` in the ring.
    pub fn divide(&self, a: &Int, b: &Int) -> Option<Int> {
        match self {
            RingSpec::Integers => {
                if a.is_zero() {
                    return if b.is_zero() { Some(Int::zero()) } else { None };
                }
                let (q, r) = b.div_rem(a);
                if r.is_zero() {
                    Some(q)
                } else {
                    None
                }
            }
            RingSpec::IntegersMod(n) => {
                let a = self.reduce(a.clone());
                let b = self.reduce(b.clone());
                let g = a.gcd(n);
                if !(&b % &g).is_zero() {
                    return None;
                }
                let m = n / &g;
                if m.is_one() {
                    return Some(Int::zero());
                }
                let inv = mod_inverse(&(&a / &g), &m).expect("cofactor is coprime to n/g");
                Some(self.reduce((&b / &g) * inv))
            }
        }
    }

    pub fn divides(&self, a: &Int, b: &Int) -> bool {
        self.divide(a, b).is_some()
    }

    /// Generator of the annihilator ideal of `a`.
    pub fn annihilator(&self, a: &Int) -> Int {
        match self {
            RingSpec::Integers => {
                if a.is_zero() {
                    Int::one()
                } else {
                    Int::zero()
                }
            }
            RingSpec::IntegersMod(n) => {
                let g = self.reduce(a.clone()).gcd(n);
                self.reduce(n / g)
            }
        }
    }

    /// Number of elements of `R/(d)`, `None` when infinite.
    pub fn quotient_order(&self, d: &Int) -> Option<Int> {
        match self {
            RingSpec::Integers => {
                if d.is_zero() {
                    None
                } else {
                    Some(d.abs())
                }
            }
            RingSpec::IntegersMod(n) => {
                let g = self.reduce(d.clone()).gcd(n);
                Some(g)
            }
        }
    }

    /// Display name used in manifests and reports: `Z` or `Z/n`.
    pub fn name(&self) -> String {
        match self {
            RingSpec::Integers => "Z".to_string(),
            RingSpec::IntegersMod(n) => format!("Z/{n}"),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Extended gcd over the integers: `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn extended_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn mod_inverse(a: &Int, n: &Int) -> Option<Int> {
    let (g, s, _) = extended_gcd(&a.mod_floor(n), n);
    if g.is_one() {
        Some(s.mod_floor(n))
    } else {
        None
    }
}

//! Exact scalars: arbitrary-precision rationals and prime fields.
//!
//! Every computation in this crate runs over one of these two fields; there is
//! no floating point anywhere. Rationals are kept in lowest terms with a
//! positive denominator (the `BigRational` normal form), prime-field elements
//! as canonical representatives in `0..p`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;

/// Ground-field descriptor carried by an algebra context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    /// The rational numbers.
    Q,
    /// The prime field with `p` elements.
    Fp(u64),
}

impl FieldSpec {
    pub fn validate(self) -> Result<(), String> {
        match self {
            FieldSpec::Q => Ok(()),
            FieldSpec::Fp(p) => {
                if is_prime(p) {
                    Ok(())
                } else {
                    Err(format!("modulus {p} is not prime"))
                }
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Q => 0,
            FieldSpec::Fp(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.integer(0)
    }

    pub fn one(self) -> Scalar {
        self.integer(1)
    }

    pub fn integer(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Fp(p) => Scalar::Fp {
                p,
                val: n.rem_euclid(p as i64) as u64,
            },
        }
    }

    /// `num/den` as a field element; fails when `den` vanishes in the field.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar, String> {
        if den == 0 {
            return Err("zero denominator".into());
        }
        match self {
            FieldSpec::Q => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            FieldSpec::Fp(_) => {
                let d = self.integer(den);
                if d.is_zero() {
                    return Err(format!("denominator {den} vanishes in {self:?}"));
                }
                Ok(self.integer(num).div(&d))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element. Mixing elements of different fields is a
/// programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Fp { p: u64, val: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Q,
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "mixed field contexts");
                Scalar::Fp {
                    p: *p,
                    val: addmod(*a, *b, *p),
                }
            }
            _ => panic!("mixed field contexts"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "mixed field contexts");
                Scalar::Fp {
                    p: *p,
                    val: mulmod(*a, *b, *p),
                }
            }
            _ => panic!("mixed field contexts"),
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: invmod(*val, *p),
            },
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Parses "n" or "n/d" in the given field.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar, String> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (text, None),
        };
        let n: i64 = num
            .parse()
            .map_err(|_| format!("bad integer literal `{num}`"))?;
        match den {
            None => Ok(field.integer(n)),
            Some(d) => {
                let d: i64 = d
                    .parse()
                    .map_err(|_| format!("bad integer literal `{d}`"))?;
                field.ratio(n, d)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

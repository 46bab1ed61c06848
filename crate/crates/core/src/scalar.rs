//! Exact field scalars: arbitrary-precision rationals and prime fields GF(p).
//!
//! Every computation in this crate runs over a single [`Field`] descriptor.
//! Scalars carry their field tag; mixing scalars from different fields is a
//! programming error and panics with a descriptive message.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;
use std::str::FromStr;

/// Descriptor of the coefficient field shared across one computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
pub enum Field {
    /// The rational numbers, with arbitrary-precision arithmetic.
    Rational,
    /// The prime field GF(p). `p` must be prime; this is checked on parse.
    Prime(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(Box::new(BigRational::zero())),
            Field::Prime(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(Box::new(BigRational::one())),
            Field::Prime(p) => Scalar::Fp { v: 1 % *p, p: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { v: m, p: *p }
            }
        }
    }

    /// Parses `"Q"` or `"GF(p)"` with p prime.
    pub fn parse(s: &str) -> Result<Field, String> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(inner) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = inner
                .trim()
                .parse()
                .map_err(|_| format!("invalid prime in field spec `{s}`"))?;
            if !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
            if p >= (1u64 << 31) {
                return Err(format!("prime {p} too large (must be < 2^31)"));
            }
            return Ok(Field::Prime(p));
        }
        Err(format!("unrecognized field `{s}`; expected `Q` or `GF(p)`"))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator (guaranteed by `BigRational`); GF(p) values live in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(Box<BigRational>),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn check(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                other.field()
            );
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a + &**b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: (a + b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a - &**b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: (a + p - b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a * &**b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(Box::new(-&**a)),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(a) => Scalar::Rat(Box::new(a.recip())),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero"))
    }

    /// Parses an integer or `num/den` literal into the given field.
    pub fn parse(field: Field, s: &str) -> Result<Scalar, String> {
        let t = s.trim();
        match field {
            Field::Rational => {
                let r = if let Some((n, d)) = t.split_once('/') {
                    let n = BigInt::from_str(n.trim()).map_err(|e| e.to_string())?;
                    let d = BigInt::from_str(d.trim()).map_err(|e| e.to_string())?;
                    if d.is_zero() {
                        return Err(format!("zero denominator in `{s}`"));
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(BigInt::from_str(t).map_err(|e| e.to_string())?)
                };
                Ok(Scalar::Rat(Box::new(r)))
            }
            Field::Prime(p) => {
                if let Some((n, d)) = t.split_once('/') {
                    let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator `{s}`"))?;
                    let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator `{s}`"))?;
                    let num = field.from_i64(n);
                    let den = field.from_i64(d);
                    den.inv()
                        .map(|i| num.mul(&i))
                        .ok_or_else(|| format!("denominator is zero mod {p} in `{s}`"))
                } else {
                    let n: i64 = t.parse().map_err(|_| format!("bad integer `{s}`"))?;
                    Ok(field.from_i64(n))
                }
            }
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
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
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    #[test]
    fn rational_arithmetic_reduces() {
        let f = Field::Rational;
        let half = Scalar::parse(f, "1/2").unwrap();
        let third = Scalar::parse(f, "2/6").unwrap();
        assert_eq!(third.to_string(), "1/3");
        let s = half.add(&third);
        assert_eq!(s.to_string(), "5/6");
        assert_eq!(half.mul(&f.from_i64(2)), f.one());
    }

    #[test]
    fn negative_rationals_have_positive_denominator() {
        let f = Field::Rational;
        let x = Scalar::parse(f, "3/-6").unwrap();
        match &x {
            Scalar::Rat(r) => {
                assert!(r.denom().is_positive());
                assert_eq!(x.to_string(), "-1/2");
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn prime_field_ops() {
        let f = Field::parse("GF(7)").unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(a.mul(&b), f.from_i64(6)); // 20 = 6 mod 7
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.inv().unwrap().mul(&a), f.one());
        assert_eq!(f.from_i64(-3), f.from_i64(4));
    }

    #[test]
    fn field_parse_rejects_composite() {
        assert!(Field::parse("GF(6)").is_err());
        assert!(Field::parse("GF(1)").is_err());
        assert!(Field::parse("R").is_err());
        assert_eq!(Field::parse("GF(2)").unwrap(), Field::Prime(2));
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_is_rejected() {
        let a = Field::Rational.one();
        let b = Field::Prime(5).one();
        let _ = a.add(&b);
    }

    #[test]
    fn gf2_behaves() {
        let f = Field::Prime(2);
        let one = f.one();
        assert!(one.add(&one).is_zero());
        assert_eq!(one.neg(), one);
    }
}

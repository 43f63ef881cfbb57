use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational `{}`", self.0)
    }
}

impl std::error::Error for ParseRatError {}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Accepts `p`, `p/q` and plain decimals such as `-0.25`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let mut p: BigInt = digits.parse().map_err(|_| err())?;
        if neg {
            p = -p;
        }
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rat::new(p, q));
    }
    let p: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(p))
}

/// Always `numerator/denominator`, denominator positive and reduced.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(p), Some(q)) if p.is_finite() && q.is_finite() => p / q,
        _ => {
            // huge operands: shift both down before dividing
            let bits = r.numer().bits().max(r.denom().bits()) as i64 - 60;
            let shift = bits.max(0) as usize;
            let p = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let q = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            p / q
        }
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn gcd_of(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Divides out the content and returns `(primitive, content)`; the zero vector is returned unchanged.
pub fn primitive_part(values: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let g = gcd_of(values);
    if g.is_zero() {
        return (values.to_vec(), BigInt::zero());
    }
    (values.iter().map(|v| v / &g).collect(), g)
}

/// Scales a rational vector to the primitive integer vector with the same direction.
pub fn primitive_integer_direction(values: &[Rat]) -> Vec<BigInt> {
    let l = lcm_of_denominators(values.iter());
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
        .collect();
    primitive_part(&ints).0
}

/// Smallest-denominator rational within `tol` of `x` (Stern-Brocot descent on continued fractions).
pub fn simplest_rational_within(x: f64, tol: f64) -> Rat {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    let tol = tol.abs().max(f64::EPSILON * x.abs());
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        let cand = Rat::new(p2.clone(), q2.clone());
        if (to_f64(&cand) - x).abs() <= tol {
            return cand;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
        if !r.is_finite() || r.abs() > 9.0e15 {
            break;
        }
    }
    Rat::new(p1, q1)
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn bigint_sign(v: &BigInt) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

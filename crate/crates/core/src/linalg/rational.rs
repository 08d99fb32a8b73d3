use num::{BigInt, BigRational, Integer as _, One, Signed, Zero};

use super::LinalgError;

pub type Integer = BigInt;
pub type Rational = BigRational;
pub type IntVec = Vec<Integer>;
pub type QVec = Vec<Rational>;
pub type IntMatrix = Vec<IntVec>;
pub type QMatrix = Vec<QVec>;

pub fn int(i: i64) -> Integer {
    Integer::from(i)
}

/// Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(int(numer), int(denom))
}

pub fn to_qvec(v: &[Integer]) -> QVec {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// `None` if some entry is not an integer.
pub fn to_int_vec(v: &[Rational]) -> Option<IntVec> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_qi(a: &[Rational], b: &[Integer]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Integer], b: &[Integer]) -> Integer {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Integer::zero(), |acc, (x, y)| acc + x * y)
}

fn gcd_of(v: &[Integer]) -> Integer {
    v.iter().fold(Integer::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive(v: &[Integer]) -> IntVec {
    let g = gcd_of(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[Integer]) -> bool {
    gcd_of(v).is_one()
}

/// The primitive integer vector on the ray through a nonzero rational vector.
pub fn clear_denominators(v: &[Rational]) -> IntVec {
    let l = v
        .iter()
        .fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntVec = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(&scaled)
}

/// Canonical text form: `p/q` in lowest terms with positive `q`, or `p` when `q = 1`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Accepts `p` or `p/q` with an optional leading minus on `p` and `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let bad = || LinalgError::MalformedRational(s.to_string());
    let parse_int = |t: &str, signed: bool| -> Option<Integer> {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    };
    match s.split_once('/') {
        None => parse_int(s, true).map(Rational::from_integer).ok_or_else(bad),
        Some((p, q)) => {
            let p = parse_int(p, true).ok_or_else(bad)?;
            let q = parse_int(q, false).ok_or_else(bad)?;
            if q.is_zero() || q.is_negative() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

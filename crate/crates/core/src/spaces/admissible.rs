use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number used for the exponent bookkeeping.
pub type Rational = Ratio<i128>;

/// Parses `a/b`, an integer, or a finite decimal such as `1.001` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::param("rational", format!("cannot parse `{text}`"));
    if let Some((a, b)) = t.split_once('/') {
        let (a, b) = (parse_rational(a)?, parse_rational(b)?);
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(a / b);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 30
    {
        return Err(bad());
    }
    let digits: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let v = Rational::new(digits, 10i128.pow(frac.len() as u32));
    Ok(if neg { -v } else { v })
}

fn q(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

fn to_f64(x: &Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Which well-posedness statement to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statement {
    /// General `1 < r <= 2` result.
    Thm11,
    /// The `r = 2` result with `1/2 < s < 1`.
    Thm12,
    /// The interpolated exponents between the two.
    Cor13,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statement::Thm11 => "thm11",
            Statement::Thm12 => "thm12",
            Statement::Cor13 => "cor13",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    fn holds(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Eq => a == b,
        }
    }
}

fn ser_q<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// One inequality of a statement, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    #[serde(serialize_with = "ser_q")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(serialize_with = "ser_q")]
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub which: Statement,
    #[serde(serialize_with = "ser_q")]
    pub r: Rational,
    #[serde(serialize_with = "ser_q")]
    pub s: Rational,
    #[serde(serialize_with = "ser_q")]
    pub l: Rational,
    #[serde(serialize_with = "ser_q")]
    pub m: Rational,
    pub admissible: bool,
    pub conditions: Vec<Condition>,
}

impl AdmissibilityReport {
    pub fn violated(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect()
    }
}

struct Builder(Vec<Condition>);

impl Builder {
    fn add(&mut self, name: &str, lhs: Rational, relation: Relation, rhs: Rational) {
        let holds = relation.holds(&lhs, &rhs);
        self.0.push(Condition { name: name.to_string(), lhs, relation, rhs, holds });
    }
}

fn check_range(r: &Rational, allow_one: bool) -> Result<()> {
    let lo_ok = if allow_one { *r >= Rational::one() } else { *r > Rational::one() };
    if !lo_ok || *r > q(2, 1) {
        return Err(Error::param("r", format!("{r} is outside {}1, 2]", if allow_one { "[" } else { "(" })));
    }
    Ok(())
}

/// Evaluates every hypothesis of the chosen statement for `(r, s, l, m)`.
pub fn admissible(r: Rational, s: Rational, l: Rational, m: Rational, which: Statement) -> Result<AdmissibilityReport> {
    check_range(&r, false)?;
    use Relation::*;
    let one = Rational::one();
    let inv = one / r;
    let mut b = Builder(Vec::new());
    match which {
        Statement::Thm11 => {
            b.add("s >= 1", s, Ge, one);
            b.add("l >= 1", l, Ge, one);
            b.add("m >= 1", m, Ge, one);
            b.add("s > 25/(16r) - 1/4", s, Gt, q(25, 16) * inv - q(1, 4));
            b.add("l > 13/(8r) - 1/2", l, Gt, q(13, 8) * inv - q(1, 2));
            b.add("m > 13/(8r) - 1/2", m, Gt, q(13, 8) * inv - q(1, 2));
            b.add("s - 1 <= l", s - one, Le, l);
            b.add("l <= s + 1", l, Le, s + one);
            b.add("s - 1 <= m", s - one, Le, m);
            b.add("m <= s + 1", m, Le, s + one);
            b.add("2l - s > 7/(4r) - 1", l * 2 - s, Gt, q(7, 4) * inv - one);
            b.add("2s - l > 3/(2r)", s * 2 - l, Gt, q(3, 2) * inv);
            b.add("2m - s > 7/(4r) - 1", m * 2 - s, Gt, q(7, 4) * inv - one);
            b.add("2s - m > 7/(4r) - 1", s * 2 - m, Gt, q(7, 4) * inv - one);
        }
        Statement::Thm12 => {
            b.add("r = 2", r, Eq, q(2, 1));
            b.add("s > 1/2", s, Gt, q(1, 2));
            b.add("s < 1", s, Lt, one);
            b.add("l < 2s - 3/4", l, Lt, s * 2 - q(3, 4));
            b.add("m = 1/2", m, Eq, q(1, 2));
        }
        Statement::Cor13 => {
            b.add("s > 13/(8r) - 5/16", s, Gt, q(13, 8) * inv - q(5, 16));
            b.add("l > 7/(4r) - 5/8", l, Gt, q(7, 4) * inv - q(5, 8));
            b.add("m > 5/(4r) - 1/8", m, Gt, q(5, 4) * inv - q(1, 8));
        }
    }
    let admissible = b.0.iter().all(|c| c.holds);
    Ok(AdmissibilityReport { which, r, s, l, m, admissible, conditions: b.0 })
}

/// Scaling-critical regularity `2/r - 1`; `r = 1` is accepted as the endpoint value.
pub fn critical_exponent(r: Rational) -> Result<Rational> {
    check_range(&r, true)?;
    Ok(q(2, 1) / r - Rational::one())
}

/// Infimum exponents `(s, l, m)` of a statement at `r` (`r = 1` is the limiting value).
///
/// For the general statement these are the single-variable lower bounds combined with
/// `s, l, m >= 1`; the coupled inequalities are implied near them.
pub fn thresholds(r: Rational, which: Statement) -> Result<[Rational; 3]> {
    check_range(&r, true)?;
    let one = Rational::one();
    let inv = one / r;
    Ok(match which {
        Statement::Thm11 => {
            let s = (q(25, 16) * inv - q(1, 4)).max(one);
            let l = (q(13, 8) * inv - q(1, 2)).max(one);
            [s, l, l]
        }
        Statement::Thm12 => {
            if r != q(2, 1) {
                return Err(Error::param("r", "the r = 2 statement needs r = 2"));
            }
            [q(1, 2), q(1, 4), q(1, 2)]
        }
        Statement::Cor13 => [q(13, 8) * inv - q(5, 16), q(7, 4) * inv - q(5, 8), q(5, 4) * inv - q(1, 8)],
    })
}

/// Distance of the thresholds above the critical exponent, per field.
pub fn gap(r: Rational, which: Statement) -> Result<[Rational; 3]> {
    let c = critical_exponent(r)?;
    let t = thresholds(r, which)?;
    Ok([t[0] - c, t[1] - c, t[2] - c])
}

/// The interpolated exponents `(s, l, m)` at `r` with margin `eps`.
pub fn cor13_point(r: Rational, eps: Rational) -> Result<[Rational; 3]> {
    let t = thresholds(r, Statement::Cor13)?;
    Ok([t[0] + eps, t[1] + eps, t[2] + eps])
}

/// Floating-point view of a rational, for reporting.
pub fn approx(x: &Rational) -> f64 {
    to_f64(x)
}

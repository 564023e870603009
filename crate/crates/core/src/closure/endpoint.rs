use std::collections::HashMap;
use std::fmt;

use crate::certified::{compare, tail_product_euler, CertOrder, Enclosure, Precision};
use crate::error::Result;
use crate::primes;
use crate::sigma::SigmaEvaluator;

/// One multiplicative piece of an interval endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `u_m = prod_{t > m} 1/(1 - p_t^{-r})`; `Tail(0)` is `zeta(r)`.
    Tail(usize),
    /// `sigma_{-r}(p^exp)`, `exp >= 1`.
    Power { p: u64, exp: u32 },
    /// `sigma_{-r}(p^inf)`.
    Limit(u64),
}

/// An endpoint kept as an exact expression so it can be re-evaluated at a
/// higher precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// Product of factors; the empty product is 1.
    Product(Vec<Factor>),
    Max(Box<Endpoint>, Box<Endpoint>),
    Min(Box<Endpoint>, Box<Endpoint>),
}

impl Endpoint {
    pub fn one() -> Self {
        Endpoint::Product(Vec::new())
    }

    pub fn tail(m: usize) -> Self {
        Endpoint::Product(vec![Factor::Tail(m)])
    }

    pub fn sigma_power(p: u64, exp: u32) -> Self {
        Endpoint::one().times(Factor::Power { p, exp })
    }

    /// Multiplies by `factor` and normalizes: `sigma(p^0)` disappears, and
    /// `u_m * sigma(p_m^inf)` collapses to `u_{m-1}`.
    pub fn times(&self, factor: Factor) -> Self {
        match self {
            Endpoint::Product(factors) => {
                let mut factors = factors.clone();
                if !matches!(factor, Factor::Power { exp: 0, .. }) {
                    factors.push(factor);
                }
                Endpoint::Product(normalize(factors))
            }
            Endpoint::Max(a, b) => {
                Endpoint::Max(Box::new(a.times(factor.clone())), Box::new(b.times(factor)))
            }
            Endpoint::Min(a, b) => {
                Endpoint::Min(Box::new(a.times(factor.clone())), Box::new(b.times(factor)))
            }
        }
    }

    pub fn factors(&self) -> Option<&[Factor]> {
        match self {
            Endpoint::Product(f) => Some(f),
            _ => None,
        }
    }
}

fn normalize(mut factors: Vec<Factor>) -> Vec<Factor> {
    loop {
        let tail = factors
            .iter()
            .position(|f| matches!(f, Factor::Tail(m) if *m > 0));
        let Some(i) = tail else { break };
        let Factor::Tail(m) = factors[i] else {
            unreachable!()
        };
        let p = primes::covering_index(m)
            .nth_prime(m)
            .expect("table covers index");
        let Some(j) = factors.iter().position(|f| *f == Factor::Limit(p)) else {
            break;
        };
        factors[i] = Factor::Tail(m - 1);
        factors.remove(j);
    }
    factors.sort();
    factors
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Tail(0) => write!(f, "zeta(r)"),
            Factor::Tail(m) => write!(f, "u_{m}"),
            Factor::Power { p, exp: 1 } => write!(f, "sigma({p})"),
            Factor::Power { p, exp } => write!(f, "sigma({p}^{exp})"),
            Factor::Limit(p) => write!(f, "sigma({p}^inf)"),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Product(factors) if factors.is_empty() => write!(f, "1"),
            Endpoint::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
            Endpoint::Max(a, b) => write!(f, "max({a}, {b})"),
            Endpoint::Min(a, b) => write!(f, "min({a}, {b})"),
        }
    }
}

/// Evaluates endpoint expressions at a fixed `r` and precision, caching
/// factor values.
pub struct Evaluator {
    r: Enclosure,
    prec: Precision,
    sigma: SigmaEvaluator,
    tails: HashMap<usize, Enclosure>,
}

impl Evaluator {
    pub fn new(r: &Enclosure, prec: Precision) -> Result<Self> {
        let bits = prec.bits().max(r.prec());
        let r = r.with_prec(bits);
        Ok(Self {
            sigma: SigmaEvaluator::new(&r)?,
            r,
            prec,
            tails: HashMap::new(),
        })
    }

    pub fn r(&self) -> &Enclosure {
        &self.r
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn refined(&self) -> Result<Self> {
        Evaluator::new(&self.r, self.prec.refined())
    }

    pub fn factor(&mut self, factor: &Factor) -> Result<Enclosure> {
        Ok(match *factor {
            Factor::Tail(m) => {
                if let Some(v) = self.tails.get(&m) {
                    return Ok(v.clone());
                }
                let v = tail_product_euler(m, &self.r, self.prec)?;
                self.tails.insert(m, v.clone());
                v
            }
            Factor::Power { p, exp } => self.sigma.prime_power(p, exp),
            Factor::Limit(p) => self.sigma.prime_inf(p),
        })
    }

    pub fn eval(&mut self, endpoint: &Endpoint) -> Result<Enclosure> {
        match endpoint {
            Endpoint::Product(factors) => {
                let mut acc = Enclosure::from_int(1, self.r.prec());
                for f in factors {
                    acc = &acc * &self.factor(f)?;
                }
                Ok(acc)
            }
            Endpoint::Max(a, b) => Ok(self.eval(a)?.max(&self.eval(b)?)),
            Endpoint::Min(a, b) => Ok(self.eval(a)?.min(&self.eval(b)?)),
        }
    }
}

/// Order of two endpoint values, refined through the precision ladder
/// before giving up. Structurally identical expressions compare `Equal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    Equal,
    Greater,
    Undecided,
}

pub fn relate(
    x: &Endpoint,
    x_val: &Enclosure,
    y: &Endpoint,
    y_val: &Enclosure,
    ev: &Evaluator,
) -> Result<Relation> {
    if x == y {
        return Ok(Relation::Equal);
    }
    match compare(x_val, y_val) {
        CertOrder::Less => return Ok(Relation::Less),
        CertOrder::Greater => return Ok(Relation::Greater),
        CertOrder::Overlapping => {}
    }
    let mut finer = ev.refined()?;
    for _ in 1..crate::certified::MAX_REFINEMENTS + 1 {
        match compare(&finer.eval(x)?, &finer.eval(y)?) {
            CertOrder::Less => return Ok(Relation::Less),
            CertOrder::Greater => return Ok(Relation::Greater),
            CertOrder::Overlapping => finer = finer.refined()?,
        }
    }
    Ok(Relation::Undecided)
}

use std::fmt;
use std::str::FromStr;

use aclattice::oracle::{self, EnumerationBudget};
use aclattice::{size_auto, size_even_odd, size_multilevel, size_pivot, Count, Error, Interval, Parity, Result};

/// How `interval size` counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SizeMethod {
    Brute,
    Even,
    Odd,
    Auto,
    Pivot(usize),
    Multi(Vec<usize>),
}

impl FromStr for SizeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("bad method `{s}`; expected brute, even, odd, auto, pivot:k or multi:k1,k2,..."));
        let levels = |rest: &str| -> Result<Vec<usize>> {
            rest.split(',').map(|k| k.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        Ok(match s {
            "brute" => SizeMethod::Brute,
            "even" => SizeMethod::Even,
            "odd" => SizeMethod::Odd,
            "auto" => SizeMethod::Auto,
            _ => match s.split_once(':') {
                Some(("pivot", k)) => SizeMethod::Pivot(k.trim().parse().map_err(|_| bad())?),
                Some(("multi", ks)) => SizeMethod::Multi(levels(ks)?),
                _ => return Err(bad()),
            },
        })
    }
}

impl fmt::Display for SizeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeMethod::Brute => f.write_str("brute"),
            SizeMethod::Even => f.write_str("even"),
            SizeMethod::Odd => f.write_str("odd"),
            SizeMethod::Auto => f.write_str("auto"),
            SizeMethod::Pivot(k) => write!(f, "pivot:{k}"),
            SizeMethod::Multi(ks) => {
                let ks: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                write!(f, "multi:{}", ks.join(","))
            }
        }
    }
}

impl SizeMethod {
    pub fn size(&self, i: &Interval, budget: EnumerationBudget) -> Result<Count> {
        match self {
            SizeMethod::Brute => oracle::size_brute(i, budget),
            SizeMethod::Even => size_even_odd(i, Parity::Top),
            SizeMethod::Odd => size_even_odd(i, Parity::BelowTop),
            SizeMethod::Auto => size_auto(i),
            SizeMethod::Pivot(k) => size_pivot(i, *k),
            SizeMethod::Multi(ks) => size_multilevel(i, ks),
        }
    }
}

/// How `dedekind` and `bench` compute `|𝒜_n|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DedekindMethod {
    Brute,
    /// `size_auto([⊥, ⊤])`.
    Levels,
    Product,
    /// Any interval method applied to `[⊥, ⊤]`.
    Interval(SizeMethod),
}

impl FromStr for DedekindMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "brute" => DedekindMethod::Brute,
            "levels" => DedekindMethod::Levels,
            "product" => DedekindMethod::Product,
            _ => DedekindMethod::Interval(s.parse().map_err(|_| {
                Error::Usage(format!(
                    "bad method `{s}`; expected brute, levels, product, even, odd, pivot:k or multi:k1,..."
                ))
            })?),
        })
    }
}

impl fmt::Display for DedekindMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DedekindMethod::Brute => f.write_str("brute"),
            DedekindMethod::Levels => f.write_str("levels"),
            DedekindMethod::Product => f.write_str("product"),
            DedekindMethod::Interval(m) => m.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        for s in ["brute", "even", "odd", "auto", "pivot:2", "multi:1,3"] {
            assert_eq!(s.parse::<SizeMethod>().unwrap().to_string(), s);
        }
        assert_eq!("multi: 1, 3".parse::<SizeMethod>().unwrap(), SizeMethod::Multi(vec![1, 3]));
        for s in ["", "pivot", "pivot:x", "multi:", "levels"] {
            assert!(s.parse::<SizeMethod>().is_err(), "{s}");
        }
        assert_eq!("levels".parse::<DedekindMethod>().unwrap(), DedekindMethod::Levels);
        assert_eq!(
            "pivot:3".parse::<DedekindMethod>().unwrap(),
            DedekindMethod::Interval(SizeMethod::Pivot(3))
        );
        assert!("fast".parse::<DedekindMethod>().is_err());
    }
}

use dop_core::{Error, ParameterSet, PearsonWeight, Result};

use crate::cli::WeightArgs;

/// Weight as given on the command line, validated.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub eta: String,
    pub prec: usize,
    pub weight: PearsonWeight,
}

pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

impl RunConfig {
    pub fn from_args(args: &WeightArgs) -> Result<Self> {
        if args.prec < 32 {
            return Err(Error::Domain(format!("precision {} is below 32 bits", args.prec)));
        }
        let a = split_list(&args.a);
        let b = split_list(&args.b);
        let eta = args.eta.trim().to_string();
        let ar: Vec<&str> = a.iter().map(String::as_str).collect();
        let br: Vec<&str> = b.iter().map(String::as_str).collect();
        let params = ParameterSet::parse(&ar, &br, &eta, args.prec)?;
        Ok(RunConfig {
            a,
            b,
            eta,
            prec: args.prec,
            weight: PearsonWeight::new(params),
        })
    }

    /// Decimal digits carried by `prec` bits.
    pub fn digits(&self) -> usize {
        digits(self.prec)
    }
}

pub fn digits(prec: usize) -> usize {
    (prec * 30103 / 100_000).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert!(split_list("").is_empty());
        assert_eq!(split_list("1.5, 2"), ["1.5", "2"]);
    }

    #[test]
    fn digits_of_precision() {
        assert_eq!(digits(256), 77);
        assert_eq!(digits(53), 15);
    }
}

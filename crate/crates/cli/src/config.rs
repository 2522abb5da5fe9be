use msk_core::comoment::{Mode, VerifyOptions};
use msk_core::lie::Caps;
use msk_core::{Error, Result};

use crate::{AlgebraName, Format, ModeArg};

#[derive(Clone, Debug)]
pub enum Command {
    Homology {
        algebra: AlgebraName,
        n: Option<usize>,
        degrees: Option<String>,
    },
    Obstruction {
        case: String,
        seed: u64,
    },
    Verify {
        case: String,
        n: Option<usize>,
        samples: usize,
        precision: u32,
        tolerance: String,
        seed: u64,
        mode: Option<ModeArg>,
        equivariance: bool,
        perturb: bool,
    },
    Predict {
        case: String,
        n: Option<usize>,
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub max_dim: usize,
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        Caps { max_dim: self.max_dim }
    }

    /// Options for `verify`, validated.
    pub fn verify_options(&self, default_mode: Mode) -> Result<VerifyOptions> {
        let Command::Verify {
            samples,
            precision,
            tolerance,
            seed,
            mode,
            ..
        } = &self.command
        else {
            return Err(Error::InvalidConfig("not a verify command".into()));
        };
        let opts = VerifyOptions {
            mode: match mode {
                Some(ModeArg::Exact) => Mode::Exact,
                Some(ModeArg::Numeric) => Mode::Numeric,
                None => default_mode,
            },
            samples: *samples,
            digits: *precision,
            tolerance: tolerance.clone(),
            seed: *seed,
            caps: self.caps(),
        };
        opts.validate()?;
        Ok(opts)
    }
}

/// `a..b` or a single degree `a`, inclusive.
pub fn parse_degrees(s: &str, max: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("degree range {s:?}; expected a..b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().trim_start_matches('=').parse().map_err(|_| bad())?,
        ),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a > b || b > max {
        return Err(Error::InvalidConfig(format!("degrees {a}..{b} outside 0..{max}")));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("1..3", 6).unwrap(), (1, 3));
        assert_eq!(parse_degrees("3", 6).unwrap(), (3, 3));
        assert_eq!(parse_degrees("0..=2", 6).unwrap(), (0, 2));
        assert!(parse_degrees("3..1", 6).is_err());
        assert!(parse_degrees("1..9", 6).is_err());
        assert!(parse_degrees("x", 6).is_err());
    }
}

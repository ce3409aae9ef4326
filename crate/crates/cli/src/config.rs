//! Run configuration: defaults, then a `key = value` file, then flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSource {
    BuiltinDelta,
    Path(PathBuf),
}

impl FromStr for SeedSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "" => Err("empty seed".into()),
            "builtin-delta" => Ok(SeedSource::BuiltinDelta),
            path => Ok(SeedSource::Path(PathBuf::from(path))),
        }
    }
}

/// Values that may come from the command line or the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub q_prec: Option<i64>,
    pub digits: Option<u32>,
    pub max_m: Option<u32>,
    pub seed: Option<SeedSource>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    pub seed_rng: Option<u64>,
    pub cases: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prime: u64,
    pub q_prec: i64,
    pub digits: u32,
    pub max_m: u32,
    pub seed: SeedSource,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    pub seed_rng: u64,
    pub cases: usize,
}

pub const DEFAULT_SEED_RNG: u64 = 20240601;

/// Largest `m` with `p^m` inside the budget used for exploratory primes.
fn default_max_m(p: u64) -> u32 {
    if p == 3 {
        return 7;
    }
    let mut m = 1;
    while p.checked_pow(m + 1).is_some_and(|x| x <= 6561) {
        m += 1;
    }
    m
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("bad value for `{key}`: {value}"))
}

/// Reads a config file of `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Overrides, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Overrides, String> {
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let key = key.trim().replace('_', "-");
        if seen.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("line {}: `{key}` given twice", i + 1));
        }
    }
    let mut o = Overrides::default();
    for (key, value) in &seen {
        match key.as_str() {
            "prime" => o.prime = Some(parse(key, value)?),
            "q-prec" => o.q_prec = Some(parse(key, value)?),
            "digits" => o.digits = Some(parse(key, value)?),
            "max-m" => o.max_m = Some(parse(key, value)?),
            "seed" => o.seed = Some(value.parse()?),
            "format" => o.format = Some(Format::from_str(value, true).map_err(|_| format!("bad format: {value}"))?),
            "out" => o.out = Some(PathBuf::from(value)),
            "suite" => o.suite = Some(value.clone()),
            "seed-rng" => o.seed_rng = Some(parse(key, value)?),
            "cases" => o.cases = Some(parse(key, value)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
    }
    Ok(o)
}

impl RunConfig {
    /// Flags win over the file, the file over defaults.
    pub fn resolve(flags: Overrides, file: Overrides) -> Result<Self, String> {
        let prime = flags.prime.or(file.prime).unwrap_or(3);
        let max_m = flags.max_m.or(file.max_m).unwrap_or_else(|| default_max_m(prime));
        let q_prec = match flags.q_prec.or(file.q_prec) {
            Some(q) => q,
            None => mockpadic::demo::default_q_precision(prime, max_m).ok_or("p^max_m overflows")?,
        };
        let config = RunConfig {
            prime,
            q_prec,
            digits: flags.digits.or(file.digits).unwrap_or(100),
            max_m,
            seed: flags.seed.or(file.seed).unwrap_or(SeedSource::BuiltinDelta),
            format: flags.format.or(file.format).unwrap_or(Format::Text),
            out: flags.out.or(file.out),
            suite: flags.suite.or(file.suite),
            seed_rng: flags.seed_rng.or(file.seed_rng).unwrap_or(DEFAULT_SEED_RNG),
            cases: flags.cases.or(file.cases).unwrap_or(100),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !mockpadic::exactnum::is_prime(self.prime) {
            return Err(format!("{} is not prime", self.prime));
        }
        if self.digits < 10 {
            return Err(format!("digit precision {} is below 10", self.digits));
        }
        if self.max_m == 0 {
            return Err("max-m must be positive".into());
        }
        let needed = self.prime.checked_pow(self.max_m).ok_or("p^max_m overflows")?;
        if self.q_prec < 0 || (self.q_prec as u64) < needed {
            return Err(format!("q precision {} is below p^max_m = {needed}", self.q_prec));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_config("prime = 5\nmax_m = 3  # short run\nformat = json\n").unwrap();
        let flags = Overrides { prime: Some(3), ..Overrides::default() };
        let c = RunConfig::resolve(flags, file).unwrap();
        assert_eq!((c.prime, c.max_m, c.q_prec, c.format), (3, 3, 6561, Format::Json));
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(Overrides::default(), Overrides::default()).unwrap();
        assert_eq!((c.prime, c.max_m, c.q_prec, c.digits), (3, 7, 6561, 100));
        assert_eq!(c.seed, SeedSource::BuiltinDelta);
        let five = RunConfig::resolve(Overrides { prime: Some(5), ..Overrides::default() }, Overrides::default()).unwrap();
        assert_eq!((five.max_m, five.q_prec), (5, 6561));
    }

    #[test]
    fn bad_files_and_values() {
        assert!(parse_config("nonsense").is_err());
        assert!(parse_config("colour = red").is_err());
        assert!(parse_config("prime = x").is_err());
        assert!(parse_config("prime = 3\nprime = 5").is_err());
        let small = Overrides { q_prec: Some(10), ..Overrides::default() };
        assert!(RunConfig::resolve(small, Overrides::default()).is_err());
        let composite = Overrides { prime: Some(9), ..Overrides::default() };
        assert!(RunConfig::resolve(composite, Overrides::default()).is_err());
    }
}

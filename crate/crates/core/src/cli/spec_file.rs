//! JSON description of a protocol, as read by the command line.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Word};
use crate::combinators::{build_restart, build_serial, compose, RestartSpec, SerialChain};
use crate::dist::{Dist, Ratio};
use crate::error::{Error, Result};
use crate::prefix::PrefixCode;
use crate::protocol::Protocol;
use crate::reductions::{
    arbitrary_to_uniform, biased_to_uniform, uniform_to_arbitrary, uniform_to_rational, uniform_to_uniform,
    ResidualProtocol,
};

/// A probability written as `[numerator, denominator]`.
pub type RationalPair = [u64; 2];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    #[serde(rename = "in")]
    pub input: String,
    #[serde(rename = "out")]
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformUniform {
    pub d: usize,
    pub c: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformRational {
    pub d: usize,
    pub numerators: Vec<u64>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformArbitrary {
    pub d: usize,
    pub target: Vec<RationalPair>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArbitraryUniform {
    pub source: Vec<RationalPair>,
    pub c: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasedUniform {
    pub r: u64,
    pub k: usize,
}

/// A restart protocol listed rule by rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Explicit {
    /// One glyph per input symbol; digits then letters when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_glyphs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_glyphs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_size: Option<usize>,
    /// Input distribution; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<RationalPair>>,
    /// Target distribution; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<RationalPair>>,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Compose {
    pub first: Box<ProtocolSpecFile>,
    pub second: Box<ProtocolSpecFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Serial {
    pub components: Vec<ProtocolSpecFile>,
}

/// A protocol description, tagged by its `"family"` key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProtocolSpecFile {
    UniformUniform(UniformUniform),
    UniformRational(UniformRational),
    UniformArbitrary(UniformArbitrary),
    ArbitraryUniform(ArbitraryUniform),
    BiasedUniform(BiasedUniform),
    Explicit(Explicit),
    Compose(Compose),
    Serial(Serial),
}

fn join(path: &str, rest: &str) -> String {
    match (path.is_empty(), rest.is_empty() || rest == ".") {
        (true, true) => ".".into(),
        (true, false) => rest.into(),
        (false, true) => path.into(),
        (false, false) => format!("{path}.{rest}"),
    }
}

fn decode_as<T: serde::de::DeserializeOwned>(value: serde_json::Value, path: &str) -> std::result::Result<T, String> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        format!("{}: {}", join(path, &inner), e.into_inner())
    })
}

fn decode(value: serde_json::Value, path: &str) -> std::result::Result<ProtocolSpecFile, String> {
    let serde_json::Value::Object(mut map) = value else {
        return Err(format!("{}: expected an object", join(path, "")));
    };
    let family = match map.remove("family") {
        Some(serde_json::Value::String(f)) => f,
        Some(_) => return Err(format!("{}: expected a string", join(path, "family"))),
        None => return Err(format!("{}: missing field `family`", join(path, ""))),
    };
    let rest = serde_json::Value::Object(map.clone());
    Ok(match family.as_str() {
        "uniform_uniform" => ProtocolSpecFile::UniformUniform(decode_as(rest, path)?),
        "uniform_rational" => ProtocolSpecFile::UniformRational(decode_as(rest, path)?),
        "uniform_arbitrary" => ProtocolSpecFile::UniformArbitrary(decode_as(rest, path)?),
        "arbitrary_uniform" => ProtocolSpecFile::ArbitraryUniform(decode_as(rest, path)?),
        "biased_uniform" => ProtocolSpecFile::BiasedUniform(decode_as(rest, path)?),
        "explicit" => ProtocolSpecFile::Explicit(decode_as(rest, path)?),
        "compose" => {
            let mut take = |key: &str| {
                map.remove(key)
                    .ok_or_else(|| format!("{}: missing field `{key}`", join(path, "")))
            };
            let first = take("first")?;
            let second = take("second")?;
            if let Some(extra) = map.keys().next() {
                return Err(format!("{}: unknown field `{extra}`", join(path, "")));
            }
            ProtocolSpecFile::Compose(Compose {
                first: Box::new(decode(first, &join(path, "first"))?),
                second: Box::new(decode(second, &join(path, "second"))?),
            })
        }
        "serial" => {
            let Some(serde_json::Value::Array(items)) = map.remove("components") else {
                return Err(format!("{}: expected an array", join(path, "components")));
            };
            if let Some(extra) = map.keys().next() {
                return Err(format!("{}: unknown field `{extra}`", join(path, "")));
            }
            let components = items
                .into_iter()
                .enumerate()
                .map(|(i, v)| decode(v, &join(path, &format!("components[{i}]"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            ProtocolSpecFile::Serial(Serial { components })
        }
        other => return Err(format!("{}: unknown family `{other}`", join(path, "family"))),
    })
}

/// A protocol built from a spec file, with its distributions and glyphs.
pub struct Loaded {
    pub protocol: Arc<dyn Protocol>,
    pub mu: Dist,
    pub nu: Dist,
    pub input: Alphabet,
    pub output: Alphabet,
    /// Present for single restart protocols.
    pub restart: Option<RestartSpec>,
    /// Present for the staged uniform-to-arbitrary construction.
    pub staged: Option<Arc<ResidualProtocol>>,
}

fn dist_of(pairs: &[RationalPair], what: &str) -> Result<Dist> {
    if pairs.iter().any(|p| p[1] == 0) {
        return Err(Error::InvalidDist(format!("{what}: zero denominator")));
    }
    let tuples: Vec<(u64, u64)> = pairs.iter().map(|p| (p[0], p[1])).collect();
    Dist::from_ratios(&tuples).map_err(|e| Error::InvalidDist(format!("{what}: {e}")))
}

fn pairs_of(dist: &Dist) -> Result<Vec<RationalPair>> {
    dist.probs()
        .iter()
        .map(|p| {
            let n = p.numer().to_u64();
            let d = p.denom().to_u64();
            match (n, d) {
                (Some(n), Some(d)) => Ok([n, d]),
                _ => Err(Error::OutOfRange("probability does not fit in 64-bit integers".into())),
            }
        })
        .collect()
}

fn alphabet_of(glyphs: &Option<String>, size: Option<usize>, what: &str) -> Result<Alphabet> {
    let alphabet = match (glyphs, size) {
        (Some(g), _) => Alphabet::with_glyphs(g.chars())?,
        (None, Some(n)) => Alphabet::new(n)?,
        (None, None) => return Err(Error::InvalidParameter(format!("{what}: give glyphs or a size"))),
    };
    if let (Some(_), Some(n)) = (glyphs, size) {
        if alphabet.size() != n {
            return Err(Error::AlphabetMismatch(format!(
                "{what}: {} glyphs for size {n}",
                alphabet.size()
            )));
        }
    }
    Ok(alphabet)
}

fn parse_word(alphabet: &Alphabet, text: &str, what: &str) -> Result<Word> {
    alphabet
        .parse(text)
        .map_err(|pos| Error::InvalidParameter(format!("{what}: unknown glyph at byte {pos}")))
}

impl ProtocolSpecFile {
    /// Parses a spec; errors name the offending location, e.g. `first.k`.
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| format!(".: {e}"))?;
        decode(value, "")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    /// Builds the restart spec of a finite family, or `None` for families
    /// that are not single restart protocols.
    pub fn restart_spec(&self) -> Result<Option<RestartSpec>> {
        Ok(Some(match self {
            Self::UniformUniform(UniformUniform { d, c, k }) => uniform_to_uniform(*d, *c, *k)?,
            Self::UniformRational(UniformRational { d, numerators, k }) => uniform_to_rational(*d, numerators, *k)?,
            Self::ArbitraryUniform(ArbitraryUniform { source, c, k }) => {
                arbitrary_to_uniform(&dist_of(source, "source")?, *c, *k)?
            }
            Self::BiasedUniform(BiasedUniform { r, k }) => biased_to_uniform(*r, *k)?,
            Self::Explicit(e @ Explicit { mu, nu, rules, .. }) => {
                let (input, output) = e.alphabets()?;
                let mut words = Vec::with_capacity(rules.len());
                let mut outputs = Vec::with_capacity(rules.len());
                for (i, rule) in rules.iter().enumerate() {
                    words.push(parse_word(&input, &rule.input, &format!("rules[{i}].in"))?);
                    outputs.push(parse_word(&output, &rule.output, &format!("rules[{i}].out"))?);
                }
                let mu = match mu {
                    Some(p) => dist_of(p, "mu")?,
                    None => Dist::uniform(input.size())?,
                };
                let nu = match nu {
                    Some(p) => dist_of(p, "nu")?,
                    None => Dist::uniform(output.size())?,
                };
                if mu.size() != input.size() || nu.size() != output.size() {
                    return Err(Error::AlphabetMismatch(
                        "distribution and glyph table sizes differ".into(),
                    ));
                }
                RestartSpec::new(PrefixCode::new(input.size(), words)?, outputs, mu, nu)?
            }
            _ => return Ok(None),
        }))
    }

    pub fn load(&self) -> Result<Loaded> {
        if let Some(spec) = self.restart_spec()? {
            let (input, output) = match self {
                Self::Explicit(e) => e.alphabets()?,
                _ => (Alphabet::new(spec.mu().size())?, Alphabet::new(spec.nu().size())?),
            };
            return Ok(Loaded {
                protocol: Arc::new(build_restart(&spec)?),
                mu: spec.mu().clone(),
                nu: spec.nu().clone(),
                input,
                output,
                restart: Some(spec),
                staged: None,
            });
        }
        match self {
            Self::UniformArbitrary(UniformArbitrary { d, target, k }) => {
                let target = dist_of(target, "target")?;
                let staged = Arc::new(uniform_to_arbitrary(*d, &target, *k)?);
                Ok(Loaded {
                    protocol: staged.clone(),
                    mu: Dist::uniform(*d)?,
                    nu: target.clone(),
                    input: Alphabet::new(*d)?,
                    output: Alphabet::new(target.size())?,
                    restart: None,
                    staged: Some(staged),
                })
            }
            Self::Compose(Compose { first, second }) => {
                let a = first.load()?;
                let b = second.load()?;
                if a.nu.probs() != b.mu.probs() {
                    return Err(Error::AlphabetMismatch(
                        "the first protocol's target differs from the second protocol's source".into(),
                    ));
                }
                Ok(Loaded {
                    protocol: Arc::new(compose(a.protocol, b.protocol)?),
                    mu: a.mu,
                    nu: b.nu,
                    input: a.input,
                    output: b.output,
                    restart: None,
                    staged: None,
                })
            }
            Self::Serial(Serial { components }) => {
                let mut specs = Vec::with_capacity(components.len());
                for (i, c) in components.iter().enumerate() {
                    let spec = c.restart_spec()?.ok_or_else(|| {
                        Error::InvalidParameter(format!("components[{i}]: serial components must be restart protocols"))
                    })?;
                    specs.push(spec);
                }
                let first = components.first().ok_or(Error::EmptyChain)?.load()?;
                let chain = SerialChain::from_specs(specs)?;
                Ok(Loaded {
                    protocol: Arc::new(build_serial(&chain)?),
                    mu: first.mu,
                    nu: first.nu,
                    input: first.input,
                    output: first.output,
                    restart: None,
                    staged: None,
                })
            }
            _ => unreachable!("restart families handled above"),
        }
    }
}

impl Explicit {
    fn alphabets(&self) -> Result<(Alphabet, Alphabet)> {
        let in_size = self.input_size.or(self.mu.as_ref().map(Vec::len));
        let out_size = self.output_size.or(self.nu.as_ref().map(Vec::len));
        Ok((
            alphabet_of(&self.input_glyphs, in_size, "input")?,
            alphabet_of(&self.output_glyphs, out_size, "output")?,
        ))
    }
}

/// The explicit spec file describing `spec` rule by rule.
pub fn explicit_from_spec(spec: &RestartSpec, input: &Alphabet, output: &Alphabet) -> Result<ProtocolSpecFile> {
    let glyphs = |a: &Alphabet| -> Result<String> {
        (0..a.size() as u32)
            .map(|s| {
                a.glyph(s)
                    .ok_or_else(|| Error::OutOfRange(format!("no glyph for symbol {s}")))
            })
            .collect()
    };
    let rules = spec
        .entries()
        .map(|(x, y)| {
            Ok(Rule {
                input: input.render(x)?,
                output: output.render(y)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProtocolSpecFile::Explicit(Explicit {
        input_glyphs: Some(glyphs(input)?),
        output_glyphs: Some(glyphs(output)?),
        mu: Some(pairs_of(spec.mu())?),
        nu: Some(pairs_of(spec.nu())?),
        rules,
        ..Explicit::default()
    }))
}

/// Parses a decimal such as `0.001` or a fraction such as `1/64` exactly.
pub fn parse_exact(text: &str) -> std::result::Result<Ratio, String> {
    let text = text.trim();
    let bad = || format!("not a decimal or fraction: {text:?}");
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (whole.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let digits = if digits == "-" || digits.is_empty() {
        "0".to_string()
    } else {
        digits
    };
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(Ratio::new(n, BigInt::from(10u32).pow(frac.len() as u32)))
}

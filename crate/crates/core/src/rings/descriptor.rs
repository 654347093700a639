use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Base ring as written in a descriptor, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseSpec {
    Rationals,
    IntegersMod(u64),
}

/// A nilpotent generator `name` with `name^order = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub order: u32,
}

/// Textual form: `Q`, `Z/4`, `Q[e;2]`, `Q[e1;2,e2;3]`, `Z/4[e;2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    pub base: BaseSpec,
    pub generators: Vec<Generator>,
}

impl RingDescriptor {
    pub fn rationals() -> Self {
        RingDescriptor { base: BaseSpec::Rationals, generators: Vec::new() }
    }

    pub fn new(base: BaseSpec, generators: &[(&str, u32)]) -> Self {
        RingDescriptor {
            base,
            generators: generators.iter().map(|(n, o)| Generator { name: (*n).to_string(), order: *o }).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let BaseSpec::IntegersMod(m) = self.base {
            if m < 2 {
                return Err(Error::Descriptor(format!("modulus {m} must be at least 2")));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            if !is_identifier(&g.name) {
                return Err(Error::Descriptor(format!("`{}` is not a valid generator name", g.name)));
            }
            if g.name == "t" {
                return Err(Error::Descriptor("`t` is reserved for the series variable".into()));
            }
            if g.order < 2 {
                return Err(Error::Descriptor(format!(
                    "generator `{}` has order {}; orders must be at least 2",
                    g.name, g.order
                )));
            }
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Descriptor(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (base_part, gens_part) = match s.find('[') {
            Some(i) => {
                if !s.ends_with(']') {
                    return Err(Error::Descriptor(format!("missing `]` in `{text}`")));
                }
                (&s[..i], Some(&s[i + 1..s.len() - 1]))
            }
            None => (&s[..], None),
        };
        let base = if base_part == "Q" {
            BaseSpec::Rationals
        } else if let Some(m) = base_part.strip_prefix("Z/") {
            BaseSpec::IntegersMod(m.parse().map_err(|_| Error::Descriptor(format!("bad modulus `{m}`")))?)
        } else {
            return Err(Error::Descriptor(format!("unknown base ring `{base_part}`")));
        };
        let mut generators = Vec::new();
        if let Some(g) = gens_part {
            for item in g.split(',') {
                let (name, order) = item
                    .split_once(';')
                    .ok_or_else(|| Error::Descriptor(format!("expected `name;order`, got `{item}`")))?;
                let order = order.parse().map_err(|_| Error::Descriptor(format!("bad order `{order}`")))?;
                generators.push(Generator { name: name.to_string(), order });
            }
        }
        let d = RingDescriptor { base, generators };
        d.validate()?;
        Ok(d)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseSpec::Rationals => write!(f, "Q")?,
            BaseSpec::IntegersMod(m) => write!(f, "Z/{m}")?,
        }
        if !self.generators.is_empty() {
            let parts: Vec<String> = self.generators.iter().map(|g| format!("{};{}", g.name, g.order)).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["Q", "Z/4", "Q[e;2]", "Q[e1;2,e2;3]", "Z/4[e;2]"] {
            let d: RingDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn rejects_garbage() {
        for s in ["R", "Z/", "Z/x", "Q[e]", "Q[e;2", "Q[1e;2]", "Q[e;0]"] {
            assert!(s.parse::<RingDescriptor>().is_err(), "{s}");
        }
    }
}

//! Text form of profiles: `name(arg, arg; arg ...)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::families::{make_bump, make_gauss, make_hermmod, make_polygauss, make_u0, make_u1, make_u2};
use super::RadialProfile;
use crate::error::{Error, Result};

/// A named constructor reachable from the profile text form.
pub trait ProfileFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn signature(&self) -> &'static str;
    fn build(&self, args: &[f64]) -> Result<RadialProfile>;
}

/// Families addressable by name. [`FamilyRegistry::builtin`] holds the
/// standard set; callers may register more.
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn ProfileFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Simple("gauss", "gauss(a)", |a| {
            arity(a, 1)?;
            make_gauss(a[0])
        })));
        r.register(Box::new(Simple("polygauss", "polygauss(a; c0, c1, ...)", |a| {
            if a.len() < 2 {
                return Err(Error::invalid("polygauss takes a rate and at least one coefficient"));
            }
            make_polygauss(a[0], &a[1..])
        })));
        r.register(Box::new(Simple("bump", "bump(center, width)", |a| {
            arity(a, 2)?;
            make_bump(a[0], a[1])
        })));
        r.register(Box::new(Simple("u0", "u0(alpha)", |a| {
            arity(a, 1)?;
            make_u0(a[0])
        })));
        r.register(Box::new(Simple("u1", "u1(alpha, beta)", |a| {
            arity(a, 2)?;
            make_u1(a[0], a[1])
        })));
        r.register(Box::new(Simple("u2", "u2(t, alpha, beta)", |a| {
            arity(a, 3)?;
            make_u2(a[0], a[1], a[2])
        })));
        r.register(Box::new(Simple("hermmod", "hermmod(eps, i, a)", |a| {
            arity(a, 3)?;
            let i = a[1];
            if i < 0.0 || i.fract() != 0.0 {
                return Err(Error::invalid(format!("hermite index must be a nonnegative integer, got {i}")));
            }
            make_hermmod(a[0], i as u32, a[2])
        })));
        r
    }

    pub fn register(&mut self, family: Box<dyn ProfileFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn signatures(&self) -> Vec<&'static str> {
        self.families.values().map(|f| f.signature()).collect()
    }

    pub fn build(&self, spec: &str) -> Result<RadialProfile> {
        let call = parse_call(spec)?;
        let family = self.families.get(call.name.as_str()).ok_or_else(|| Error::Parse {
            position: call.name_position,
            message: format!(
                "unknown profile family '{}' (known: {})",
                call.name,
                self.names().join(", ")
            ),
        })?;
        let profile = family.build(&call.args).map_err(|e| match e {
            Error::InvalidParameter(m) => Error::InvalidParameter(format!("{}: {m}", family.signature())),
            other => other,
        })?;
        Ok(RadialProfile::from_arc(profile.shape.clone(), spec.trim()))
    }
}

struct Simple(&'static str, &'static str, fn(&[f64]) -> Result<RadialProfile>);

impl ProfileFamily for Simple {
    fn name(&self) -> &'static str {
        self.0
    }
    fn signature(&self) -> &'static str {
        self.1
    }
    fn build(&self, args: &[f64]) -> Result<RadialProfile> {
        (self.2)(args)
    }
}

fn arity(args: &[f64], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::invalid(format!("expected {n} arguments, got {}", args.len())))
    }
}

/// Builds a profile from its text form using the built-in families.
pub fn make_family(spec: &str) -> Result<RadialProfile> {
    static REGISTRY: OnceLock<FamilyRegistry> = OnceLock::new();
    REGISTRY.get_or_init(FamilyRegistry::builtin).build(spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Call {
    pub name: String,
    pub name_position: usize,
    pub args: Vec<f64>,
}

/// Parses `name "(" number { ("," | ";") number } ")"` with optional
/// whitespace. Errors carry the byte offset of the offending character.
pub fn parse_call(src: &str) -> Result<Call> {
    let bytes = src.as_bytes();
    let mut pos = 0;
    let err = |position: usize, message: String| Error::Parse { position, message };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    let name_position = pos;
    while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
        pos += 1;
    }
    if pos == name_position || !bytes[name_position].is_ascii_alphabetic() {
        return Err(err(name_position, "expected a family name".into()));
    }
    let name = src[name_position..pos].to_string();
    skip_ws(&mut pos);
    if pos >= bytes.len() || bytes[pos] != b'(' {
        return Err(err(pos, "expected '('".into()));
    }
    pos += 1;

    let mut args = Vec::new();
    loop {
        skip_ws(&mut pos);
        if args.is_empty() && pos < bytes.len() && bytes[pos] == b')' {
            pos += 1;
            break;
        }
        let start = pos;
        while pos < bytes.len() && matches!(bytes[pos], b'0'..=b'9' | b'.' | b'+' | b'-' | b'e' | b'E') {
            pos += 1;
        }
        if start == pos {
            return Err(err(start, "expected a number".into()));
        }
        let text = &src[start..pos];
        let value: f64 = text
            .parse()
            .map_err(|_| err(start, format!("'{text}' is not a decimal number")))?;
        if !value.is_finite() {
            return Err(err(start, format!("'{text}' is not finite")));
        }
        args.push(value);
        skip_ws(&mut pos);
        match bytes.get(pos) {
            Some(b',') | Some(b';') => pos += 1,
            Some(b')') => {
                pos += 1;
                break;
            }
            Some(_) => return Err(err(pos, "expected ',', ';' or ')'".into())),
            None => return Err(err(pos, "unterminated argument list".into())),
        }
    }
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(err(pos, "trailing characters after ')'".into()));
    }
    Ok(Call {
        name,
        name_position,
        args,
    })
}

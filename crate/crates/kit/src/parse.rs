//! Ring, module and poset spec strings, with their JSON mirrors.
//!
//! ```text
//! ring    := factor ( "x" factor )*
//! factor  := "Z/" int
//!          | "GF(" int ")[x]/(" poly ")"
//!          | "F" int                       (GF(p)[x]/(f) shorthand for F4, F8, F9)
//!          | "ideal(" ring "," module ")"
//!          | "(" ring ")"
//! module  := summand ( "+" summand )* [ "over" ring ] | "0 over" ring
//! summand := factor [ "/(" elem ( "," elem )* ")" ] | "R" [ "/(" ... ")" ]
//! ```
//!
//! Without `over`, the base ring is the first summand's ring. Over `Z/n`, a
//! summand `Z/k` with `k | n` means `R/(k)`.

use std::path::Path;

use spectral_core::finring::RingSpec;
use spectral_core::modlat::ModuleSpec;
use spectral_core::topo::Poset;

use crate::error::KitError;
use crate::formats::PosetJson;

type PResult<T> = Result<T, KitError>;

fn err<T>(msg: impl Into<String>) -> PResult<T> {
    Err(KitError::Parse(msg.into()))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            err(format!("expected {token:?} at {:?}", self.rest()))
        }
    }

    fn number(&mut self) -> PResult<usize> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return err(format!("expected a number at {:?}", self.rest()));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| KitError::Parse(format!("number {digits} is too large")))
    }

    /// Text up to the `)` matching an already consumed `(`.
    fn balanced(&mut self) -> PResult<&'a str> {
        let start = self.pos;
        let mut depth = 1usize;
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos = start + i + 1;
                        return Ok(&self.src[start..start + i]);
                    }
                }
                _ => {}
            }
        }
        err("unbalanced parentheses")
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

/// Splits on `sep` at parenthesis depth zero.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses `1+x+x^2`, `2x^3+1`, `x^2` into low-to-high coefficients mod `p`.
pub fn parse_poly(src: &str, p: usize) -> PResult<Vec<usize>> {
    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return err("empty polynomial");
    }
    let mut coeffs: Vec<usize> = Vec::new();
    for term in compact.split('+') {
        let (coeff, degree) = match term.find('x') {
            None => (term, 0usize),
            Some(i) => {
                let c = term[..i].trim_end_matches('*');
                let d = &term[i + 1..];
                let degree = if d.is_empty() {
                    1
                } else if let Some(e) = d.strip_prefix('^') {
                    e.parse().map_err(|_| KitError::Parse(format!("bad exponent in {term:?}")))?
                } else {
                    return err(format!("bad polynomial term {term:?}"));
                };
                (c, degree)
            }
        };
        let c: usize = if coeff.is_empty() {
            1
        } else {
            coeff
                .parse()
                .map_err(|_| KitError::Parse(format!("bad coefficient in {term:?}")))?
        };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, 0);
        }
        coeffs[degree] = (coeffs[degree] + c) % p.max(1);
    }
    Ok(coeffs)
}

fn field_shorthand(q: usize) -> PResult<RingSpec> {
    let (p, coeffs) = match q {
        2 => (2, vec![0, 1]),
        3 => (3, vec![0, 1]),
        4 => (2, vec![1, 1, 1]),
        5 => (5, vec![0, 1]),
        7 => (7, vec![0, 1]),
        8 => (2, vec![1, 1, 0, 1]),
        9 => (3, vec![1, 0, 1]),
        _ => return err(format!("no built-in field F{q}; use GF(p)[x]/(f)")),
    };
    Ok(RingSpec::PolyQuot { p, coeffs })
}

fn factor(c: &mut Cursor<'_>) -> PResult<RingSpec> {
    if c.eat("(") {
        let inner = c.balanced()?;
        return parse_ring(inner);
    }
    if c.eat("Z/") {
        return Ok(RingSpec::ZMod(c.number()?));
    }
    if c.eat("GF(") {
        let p = c.number()?;
        c.expect(")")?;
        c.expect("[x]/(")?;
        let poly = c.balanced()?;
        return Ok(RingSpec::PolyQuot {
            p,
            coeffs: parse_poly(poly, p)?,
        });
    }
    if c.eat("ideal(") {
        let inner = c.balanced()?;
        let parts = split_top(inner, ',');
        if parts.len() != 2 {
            return err("ideal(R, M) takes a ring and a module");
        }
        let base = parse_ring(parts[0])?;
        let module = parse_summands(parts[1], Some(base))?;
        return Ok(RingSpec::Idealization(Box::new(module)));
    }
    if c.eat("F") {
        return field_shorthand(c.number()?);
    }
    err(format!("expected a ring at {:?}", c.rest()))
}

fn ring_expr(c: &mut Cursor<'_>) -> PResult<RingSpec> {
    let mut acc = factor(c)?;
    while c.eat("x") || c.eat("×") {
        let rhs = factor(c)?;
        acc = RingSpec::product(acc, rhs);
    }
    Ok(acc)
}

/// Parses a ring spec string such as `Z/4 x Z/3`.
pub fn parse_ring(src: &str) -> PResult<RingSpec> {
    let mut c = Cursor::new(src);
    let spec = ring_expr(&mut c)?;
    if !c.at_end() {
        return err(format!("trailing input {:?} in ring spec", c.rest()));
    }
    Ok(spec)
}

enum SummandRing {
    Base,
    Spec(RingSpec),
}

fn parse_summand(src: &str) -> PResult<(SummandRing, Vec<String>)> {
    let mut c = Cursor::new(src);
    let ring = if c.eat("R") {
        SummandRing::Base
    } else {
        SummandRing::Spec(factor(&mut c)?)
    };
    let mut gens = Vec::new();
    if c.eat("/(") {
        let inner = c.balanced()?;
        gens = split_top(inner, ',')
            .into_iter()
            .map(|g| g.chars().filter(|c| !c.is_whitespace()).collect::<String>())
            .filter(|g| !g.is_empty())
            .collect();
    }
    if !c.at_end() {
        return err(format!("trailing input {:?} in summand", c.rest()));
    }
    Ok((ring, gens))
}

fn parse_summands(src: &str, base: Option<RingSpec>) -> PResult<ModuleSpec> {
    let trimmed = src.trim();
    if trimmed == "0" {
        return match base {
            Some(ring) => Ok(ModuleSpec { ring, summands: vec![] }),
            None => err("the zero module needs an explicit base ring: 0 over R"),
        };
    }
    let parsed: Vec<(SummandRing, Vec<String>)> =
        split_top(trimmed, '+').into_iter().map(parse_summand).collect::<PResult<_>>()?;
    let ring = match base {
        Some(r) => r,
        None => match &parsed[0].0 {
            SummandRing::Spec(r) => r.clone(),
            SummandRing::Base => return err("summand R needs an explicit base ring: ... over R"),
        },
    };
    let mut summands = Vec::with_capacity(parsed.len());
    for (sr, gens) in parsed {
        let mut gens = gens;
        match sr {
            SummandRing::Base => {}
            SummandRing::Spec(s) if s == ring => {}
            SummandRing::Spec(RingSpec::ZMod(k)) => match ring {
                RingSpec::ZMod(n) if k >= 1 && n % k == 0 && gens.is_empty() => gens.push(k.to_string()),
                _ => return err(format!("summand Z/{k} is not a cyclic quotient of {ring}")),
            },
            SummandRing::Spec(s) => return err(format!("summand ring {s} differs from base ring {ring}")),
        }
        summands.push(gens);
    }
    Ok(ModuleSpec { ring, summands })
}

/// Parses a module spec such as `Z/2 + Z/3 over Z/6` or `R/(2) + R over Z/4`.
pub fn parse_module(src: &str) -> PResult<ModuleSpec> {
    let parts = split_top(src, ' ');
    // locate a top-level " over " token
    let mut offset = 0usize;
    let mut split_at = None;
    for part in &parts {
        if *part == "over" {
            split_at = Some(offset);
        }
        offset += part.len() + 1;
    }
    match split_at {
        Some(at) => {
            let base = parse_ring(&src[at + "over".len()..])?;
            parse_summands(&src[..at], Some(base))
        }
        None => parse_summands(src, None),
    }
}

fn looks_like_json(s: &str) -> bool {
    s.trim_start().starts_with('{')
}

fn read_file(path: &str) -> PResult<String> {
    std::fs::read_to_string(path).map_err(|e| KitError::Io(format!("{path}: {e}")))
}

fn json_text(arg: &str) -> PResult<Option<String>> {
    if looks_like_json(arg) {
        return Ok(Some(arg.to_string()));
    }
    if arg.ends_with(".json") {
        return Ok(Some(read_file(arg)?));
    }
    Ok(None)
}

/// A `--ring` argument: spec string, inline JSON, or a `.json` file.
pub fn ring_arg(arg: &str) -> PResult<RingSpec> {
    match json_text(arg)? {
        Some(text) => serde_json::from_str(&text).map_err(|e| KitError::Parse(format!("ring JSON: {e}"))),
        None => parse_ring(arg),
    }
}

/// A `--module` argument: spec string, inline JSON, or a `.json` file.
pub fn module_arg(arg: &str) -> PResult<ModuleSpec> {
    match json_text(arg)? {
        Some(text) => serde_json::from_str(&text).map_err(|e| KitError::Parse(format!("module JSON: {e}"))),
        None => parse_module(arg),
    }
}

/// A `--poset` argument: a JSON file or inline JSON, or one of the
/// shorthands `chainN` and `antichainN`.
pub fn poset_arg(arg: &str) -> PResult<Poset> {
    if let Some(text) = json_text(arg)? {
        let pj: PosetJson = serde_json::from_str(&text).map_err(|e| KitError::Parse(format!("poset JSON: {e}")))?;
        return pj.to_poset();
    }
    if Path::new(arg).is_file() {
        let pj: PosetJson =
            serde_json::from_str(&read_file(arg)?).map_err(|e| KitError::Parse(format!("poset JSON: {e}")))?;
        return pj.to_poset();
    }
    let shorthand = |prefix: &str| arg.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if let Some(n) = shorthand("antichain") {
        return Ok(Poset::antichain(n));
    }
    if let Some(n) = shorthand("chain") {
        return Ok(Poset::chain(n));
    }
    err(format!("cannot read poset {arg:?}: expected a JSON file, inline JSON, chainN or antichainN"))
}

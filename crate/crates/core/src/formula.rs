//! Patterns and formulas with reversal, the family `phi_k`, and the dot
//! notation front end.
//!
//! The text grammar: fragments separated by `.`, symbols separated by
//! whitespace, and a symbol is an identifier optionally suffixed `^R` to mark
//! reversal (the ASCII rendering of an overline).

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

/// A pattern variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(pub String);

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Plain,
    Reversed,
}

/// One occurrence of a variable inside a fragment, possibly mirrored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FragmentSymbol {
    pub var: Variable,
    pub polarity: Polarity,
}

impl FragmentSymbol {
    pub fn plain(name: &str) -> FragmentSymbol {
        FragmentSymbol { var: Variable(name.to_string()), polarity: Polarity::Plain }
    }

    pub fn reversed(name: &str) -> FragmentSymbol {
        FragmentSymbol { var: Variable(name.to_string()), polarity: Polarity::Reversed }
    }
}

impl fmt::Display for FragmentSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Plain => write!(f, "{}", self.var),
            Polarity::Reversed => write!(f, "{}^R", self.var),
        }
    }
}

/// A nonempty sequence of fragment symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    symbols: Vec<FragmentSymbol>,
}

impl Pattern {
    pub fn new(symbols: Vec<FragmentSymbol>) -> Result<Pattern> {
        if symbols.is_empty() {
            return Err(Error::EmptyFragment(0));
        }
        Ok(Pattern { symbols })
    }

    pub fn symbols(&self) -> &[FragmentSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A finite set of fragments. Equality is order-insensitive: fragments are
/// deduplicated and kept in canonical order (longest first, then lexicographic
/// on the rendered text).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    fragments: Vec<Pattern>,
}

impl Formula {
    pub fn new(mut fragments: Vec<Pattern>) -> Result<Formula> {
        if fragments.is_empty() {
            return Err(Error::EmptyFormula);
        }
        fragments.sort_by(|a, b| {
            b.len().cmp(&a.len()).then_with(|| a.to_string().cmp(&b.to_string()))
        });
        fragments.dedup();
        Ok(Formula { fragments })
    }

    pub fn fragments(&self) -> &[Pattern] {
        &self.fragments
    }

    /// All variables, in canonical order.
    pub fn variables(&self) -> BTreeSet<Variable> {
        self.fragments
            .iter()
            .flat_map(|p| p.symbols().iter().map(|s| s.var.clone()))
            .collect()
    }

    /// Variables `z` such that both `z` and `z^R` appear somewhere.
    pub fn reversed_variables(&self) -> BTreeSet<Variable> {
        let mut plain = BTreeSet::new();
        let mut reversed = BTreeSet::new();
        for p in &self.fragments {
            for s in p.symbols() {
                match s.polarity {
                    Polarity::Plain => plain.insert(s.var.clone()),
                    Polarity::Reversed => reversed.insert(s.var.clone()),
                };
            }
        }
        plain.intersection(&reversed).cloned().collect()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.fragments.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The family `phi_k = x y1 ... yk x . y1^R . ... . yk^R`.
pub fn make_phi(k: usize) -> Result<Formula> {
    if k == 0 {
        return Err(Error::InvalidArgument("phi_k starts at k = 1".into()));
    }
    let mut long = vec![FragmentSymbol::plain("x")];
    for i in 1..=k {
        long.push(FragmentSymbol::plain(&format!("y{i}")));
    }
    long.push(FragmentSymbol::plain("x"));
    let mut fragments = vec![Pattern::new(long)?];
    for i in 1..=k {
        fragments.push(Pattern::new(vec![FragmentSymbol::reversed(&format!("y{i}"))])?);
    }
    Formula::new(fragments)
}

/// Parses the dot notation. Round-trips with `Display` up to whitespace.
pub fn parse_formula(text: &str) -> Result<Formula> {
    if text.trim().is_empty() {
        return Err(Error::EmptyFormula);
    }
    let mut fragments = Vec::new();
    let mut offset = 0usize;
    for piece in text.split('.') {
        let mut symbols = Vec::new();
        for token in piece.split_whitespace() {
            symbols.push(parse_symbol(token, offset + find_in(piece, token))?);
        }
        if symbols.is_empty() {
            return Err(Error::EmptyFragment(offset));
        }
        fragments.push(Pattern::new(symbols)?);
        offset += piece.len() + 1;
    }
    Formula::new(fragments)
}

fn find_in(piece: &str, token: &str) -> usize {
    piece.find(token).unwrap_or(0)
}

fn parse_symbol(token: &str, pos: usize) -> Result<FragmentSymbol> {
    let (name, polarity) = match token.strip_suffix("^R") {
        Some(name) => (name, Polarity::Reversed),
        None => (token, Polarity::Plain),
    };
    if name.is_empty()
        || token.contains('^') && !token.ends_with("^R")
        || name.contains('^')
        || !name.chars().next().unwrap().is_ascii_alphabetic()
        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        return Err(Error::BadSymbol { token: token.to_string(), pos });
    }
    Ok(FragmentSymbol { var: Variable(name.to_string()), polarity })
}

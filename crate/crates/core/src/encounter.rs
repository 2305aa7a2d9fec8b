//! Deciding whether a formula with reversal occurs in a finite word through a
//! non-erasing, reversal-respecting morphism.
//!
//! The search is a depth-first walk over the formula's variables. Candidate
//! images are factors of the host word (or reversals of factors, for a
//! variable that only ever appears mirrored), tried shortest first and then by
//! leftmost occurrence, so the first witness found is deterministic. Once a
//! variable is bound, every maximal fully-bound segment of every fragment must
//! still occur in the host, and the bound lengths plus one letter per unbound
//! symbol must fit; both checks only ever discard branches with no completion,
//! so they do not change the result.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::formula::{Formula, Pattern, Polarity, Variable};
use crate::word::Word;
use crate::{Error, Result};

/// A map from variables to nonempty images. The image of a reversed symbol is
/// always computed as the reversal of the stored image, never stored
/// separately, so reversal-respect holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    images: BTreeMap<Variable, Word>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment { images: BTreeMap::new() }
    }

    pub fn insert(&mut self, var: Variable, image: Word) -> Result<()> {
        if image.is_empty() {
            return Err(Error::EmptyImage(var.0));
        }
        self.images.insert(var, image);
        Ok(())
    }

    pub fn get(&self, var: &Variable) -> Option<&Word> {
        self.images.get(var)
    }

    pub fn images(&self) -> &BTreeMap<Variable, Word> {
        &self.images
    }
}

impl Default for Assignment {
    fn default() -> Self {
        Self::new()
    }
}

/// The image of a fragment: concatenation of variable images, reversing the
/// image wherever the symbol polarity is reversed.
pub fn instantiate(p: &Pattern, a: &Assignment) -> Result<Word> {
    let mut out: Option<Word> = None;
    for sym in p.symbols() {
        let image = a
            .get(&sym.var)
            .ok_or_else(|| Error::MissingVariable(sym.var.0.clone()))?;
        let piece = match sym.polarity {
            Polarity::Plain => image.clone(),
            Polarity::Reversed => image.reverse(),
        };
        out = Some(match out {
            None => piece,
            Some(acc) => acc.concat(&piece)?,
        });
    }
    out.ok_or(Error::EmptyFragment(0))
}

/// Evidence that a formula occurs: the assignment plus, for each fragment,
/// the leftmost start position of its image in the host word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Assignment,
    pub placements: BTreeMap<String, usize>,
}

impl Witness {
    /// Re-instantiates every fragment and re-checks its recorded placement.
    pub fn validate(&self, w: &Word, f: &Formula) -> Result<bool> {
        for fragment in f.fragments() {
            let image = instantiate(fragment, &self.assignment)?;
            let pos = match self.placements.get(&fragment.to_string()) {
                Some(&p) => p,
                None => return Ok(false),
            };
            if pos + image.len() > w.len() || w.factor(pos, image.len()) != image {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            assignment: BTreeMap<&'a str, String>,
            placements: &'a BTreeMap<String, usize>,
        }
        let assignment = self
            .assignment
            .images()
            .iter()
            .map(|(v, w)| (v.0.as_str(), w.to_string()))
            .collect();
        let mut map = serializer.serialize_map(Some(2))?;
        let view = View { assignment, placements: &self.placements };
        map.serialize_entry("assignment", &view.assignment)?;
        map.serialize_entry("placements", view.placements)?;
        map.end()
    }
}

/// Returns a witness iff some non-erasing reversal-respecting assignment makes
/// every fragment's image a factor of `w`; `None` iff `w` avoids `f`.
pub fn encounters(w: &Word, f: &Formula) -> Option<Witness> {
    Search::new(w, f).run()
}

pub fn avoids(w: &Word, f: &Formula) -> bool {
    encounters(w, f).is_none()
}

/// Exhaustive reference decision with no pruning and nothing shared with the
/// main engine: every variable ranges over every nonempty factor of `w` and
/// every reversal of one. Intended for hosts of a dozen letters or so.
pub fn oracle_encounters(w: &Word, f: &Formula) -> bool {
    let n = w.len();
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    for start in 0..n {
        for len in 1..=n - start {
            let u = w.factor(start, len);
            let r = u.reverse();
            if seen.insert(u.ids().to_vec()) {
                candidates.push(u);
            }
            if seen.insert(r.ids().to_vec()) {
                candidates.push(r);
            }
        }
    }
    let vars: Vec<Variable> = f.variables().into_iter().collect();
    let mut assignment = Assignment::new();
    oracle_rec(w, f, &vars, 0, &candidates, &mut assignment)
}

fn oracle_rec(
    w: &Word,
    f: &Formula,
    vars: &[Variable],
    depth: usize,
    candidates: &[Word],
    assignment: &mut Assignment,
) -> bool {
    if depth == vars.len() {
        return f.fragments().iter().all(|p| {
            let image = instantiate(p, assignment).expect("all variables bound");
            w.is_factor(&image).expect("same alphabet")
        });
    }
    for cand in candidates {
        assignment
            .insert(vars[depth].clone(), cand.clone())
            .expect("nonempty candidate");
        if oracle_rec(w, f, vars, depth + 1, candidates, assignment) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// The pruned search.

struct ResolvedSymbol {
    var: usize,
    reversed: bool,
}

struct ResolvedFragment {
    symbols: Vec<ResolvedSymbol>,
    text: String,
}

struct Search<'a> {
    host: &'a [u8],
    alphabet: Arc<crate::word::Alphabet>,
    fragments: Vec<ResolvedFragment>,
    vars: Vec<Variable>,
    plain_occurs: Vec<bool>,
    reversed_occurs: Vec<bool>,
    /// Distinct factor contents -> ascending occurrence starts.
    occ: HashMap<Vec<u8>, Vec<usize>>,
    /// Distinct factors sorted by (length, first occurrence).
    factors: Vec<Vec<u8>>,
    /// For each start position, the lengths L (ascending) such that
    /// host[e..e+L] and its reversal are both factors. Only populated when the
    /// formula has a variable appearing with both polarities.
    reversible_lens: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(w: &'a Word, f: &Formula) -> Search<'a> {
        let host = w.ids();
        let n = host.len();

        // Variable order: first occurrence in the longest fragment (canonical
        // order puts it first), then first occurrence in the remaining
        // fragments.
        let mut vars: Vec<Variable> = Vec::new();
        for p in f.fragments() {
            for s in p.symbols() {
                if !vars.contains(&s.var) {
                    vars.push(s.var.clone());
                }
            }
        }
        let var_index: HashMap<&Variable, usize> =
            vars.iter().enumerate().map(|(i, v)| (v, i)).collect();

        let mut plain_occurs = vec![false; vars.len()];
        let mut reversed_occurs = vec![false; vars.len()];
        let fragments = f
            .fragments()
            .iter()
            .map(|p| ResolvedFragment {
                text: p.to_string(),
                symbols: p
                    .symbols()
                    .iter()
                    .map(|s| {
                        let var = var_index[&s.var];
                        match s.polarity {
                            Polarity::Plain => plain_occurs[var] = true,
                            Polarity::Reversed => reversed_occurs[var] = true,
                        }
                        ResolvedSymbol { var, reversed: s.polarity == Polarity::Reversed }
                    })
                    .collect(),
            })
            .collect();

        let mut occ: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
        let mut factors: Vec<Vec<u8>> = Vec::new();
        for len in 1..=n {
            for start in 0..=n - len {
                let content = host[start..start + len].to_vec();
                occ.entry(content.clone())
                    .or_insert_with(|| {
                        factors.push(content.clone());
                        Vec::new()
                    })
                    .push(start);
            }
        }
        // `factors` is already in (length, first occurrence) order by
        // construction of the loops above.

        let needs_reversible = (0..vars.len()).any(|v| plain_occurs[v] && reversed_occurs[v]);
        let mut reversible_lens = vec![Vec::new(); n];
        if needs_reversible {
            for (e, lens) in reversible_lens.iter_mut().enumerate() {
                for len in 1..=n - e {
                    let sub = &host[e..e + len];
                    let rev: Vec<u8> = sub.iter().rev().copied().collect();
                    if occ.contains_key(&rev[..]) {
                        lens.push(len);
                    }
                }
            }
        }

        Search {
            host,
            alphabet: Arc::clone(w.alphabet()),
            fragments,
            vars,
            plain_occurs,
            reversed_occurs,
            occ,
            factors,
            reversible_lens,
        }
    }

    fn run(&self) -> Option<Witness> {
        let n = self.host.len();
        for frag in &self.fragments {
            if frag.symbols.len() > n {
                return None;
            }
        }
        let mut bindings: Vec<Option<Vec<u8>>> = vec![None; self.vars.len()];
        self.dfs(0, &mut bindings)
    }

    fn dfs(&self, depth: usize, bindings: &mut Vec<Option<Vec<u8>>>) -> Option<Witness> {
        if depth == self.vars.len() {
            return Some(self.finish(bindings));
        }
        for cand in self.candidates(depth, bindings) {
            bindings[depth] = Some(cand);
            if self.consistent(bindings) {
                if let Some(witness) = self.dfs(depth + 1, bindings) {
                    return Some(witness);
                }
            }
            bindings[depth] = None;
        }
        None
    }

    /// Every maximal fully-bound segment of every fragment must occur in the
    /// host, and bound lengths plus one letter per unbound symbol must fit.
    fn consistent(&self, bindings: &[Option<Vec<u8>>]) -> bool {
        let n = self.host.len();
        for frag in &self.fragments {
            let mut min_len = 0usize;
            let mut segment: Vec<u8> = Vec::new();
            for sym in &frag.symbols {
                match &bindings[sym.var] {
                    Some(image) => {
                        min_len += image.len();
                        if sym.reversed {
                            segment.extend(image.iter().rev());
                        } else {
                            segment.extend_from_slice(image);
                        }
                    }
                    None => {
                        min_len += 1;
                        if !segment.is_empty() && !self.occurs(&segment) {
                            return false;
                        }
                        segment.clear();
                    }
                }
            }
            if min_len > n {
                return false;
            }
            if !segment.is_empty() && !self.occurs(&segment) {
                return false;
            }
        }
        true
    }

    fn occurs(&self, content: &[u8]) -> bool {
        content.len() <= self.host.len() && self.occ.contains_key(content)
    }

    fn finish(&self, bindings: &[Option<Vec<u8>>]) -> Witness {
        let mut assignment = Assignment::new();
        for (i, var) in self.vars.iter().enumerate() {
            let ids = bindings[i].clone().expect("fully bound");
            let image = Word::from_ids(Arc::clone(&self.alphabet), ids)
                .expect("ids come from the host");
            assignment.insert(var.clone(), image).expect("nonempty image");
        }
        let mut placements = BTreeMap::new();
        for frag in &self.fragments {
            let mut image = Vec::new();
            for sym in &frag.symbols {
                let bound = bindings[sym.var].as_ref().expect("fully bound");
                if sym.reversed {
                    image.extend(bound.iter().rev());
                } else {
                    image.extend_from_slice(bound);
                }
            }
            let pos = self.occ[&image][0];
            placements.insert(frag.text.clone(), pos);
        }
        Witness { assignment, placements }
    }

    /// Candidate images for the next variable, shortest first and then by
    /// leftmost occurrence. When some fragment has this variable right after a
    /// nonempty fully-bound prefix (or right before a fully-bound suffix), the
    /// candidates are read off the prefix's occurrence positions; otherwise
    /// every factor of the host is a candidate. A variable appearing only
    /// mirrored draws its images from reversals of factors instead.
    fn candidates(&self, var: usize, bindings: &[Option<Vec<u8>>]) -> Vec<Vec<u8>> {
        let n = self.host.len();
        let raw: Vec<Vec<u8>> = if let Some((positions, reversed_slot, both)) =
            self.prefix_anchor(var, bindings)
        {
            let mut out = Vec::new();
            for e in positions {
                if both {
                    for &len in &self.reversible_lens[e] {
                        out.push(self.slot_image(e, len, reversed_slot));
                    }
                } else {
                    for len in 1..=n - e {
                        out.push(self.slot_image(e, len, reversed_slot));
                    }
                }
            }
            out
        } else if let Some((ends, reversed_slot)) = self.suffix_anchor(var, bindings) {
            let mut out = Vec::new();
            for q in ends {
                for len in 1..=q {
                    out.push(self.slot_image(q - len, len, reversed_slot));
                }
            }
            out
        } else if self.plain_occurs[var] {
            self.factors.clone()
        } else {
            // Only mirrored occurrences: the reversal of the image must be a
            // factor, the image itself need not be.
            self.factors.iter().map(|f| f.iter().rev().copied().collect()).collect()
        };

        let mut seen = HashSet::new();
        let mut out: Vec<(usize, usize, Vec<u8>)> = Vec::new();
        for cand in raw {
            if cand.is_empty() || !seen.insert(cand.clone()) {
                continue;
            }
            if self.plain_occurs[var] && !self.occurs(&cand) {
                continue;
            }
            let rev: Vec<u8> = cand.iter().rev().copied().collect();
            if self.reversed_occurs[var] && !self.occurs(&rev) {
                continue;
            }
            let first = match self.occ.get(&cand[..]) {
                Some(positions) => positions[0],
                None => self.occ[&rev[..]][0],
            };
            out.push((cand.len(), first, cand));
        }
        out.sort();
        out.into_iter().map(|(_, _, c)| c).collect()
    }

    fn slot_image(&self, start: usize, len: usize, reversed_slot: bool) -> Vec<u8> {
        let sub = &self.host[start..start + len];
        if reversed_slot {
            sub.iter().rev().copied().collect()
        } else {
            sub.to_vec()
        }
    }

    /// Positions right after occurrences of a nonempty fully-bound prefix
    /// ending at the first slot of `var` in some fragment. The extra flag says
    /// whether `var` carries both polarities (enabling the reversible-length
    /// index).
    fn prefix_anchor(
        &self,
        var: usize,
        bindings: &[Option<Vec<u8>>],
    ) -> Option<(Vec<usize>, bool, bool)> {
        for frag in &self.fragments {
            let mut prefix: Vec<u8> = Vec::new();
            for sym in &frag.symbols {
                if sym.var == var {
                    if prefix.is_empty() {
                        break;
                    }
                    let positions = match self.occ.get(&prefix[..]) {
                        Some(p) => p,
                        None => return Some((Vec::new(), sym.reversed, false)),
                    };
                    let ends: Vec<usize> = positions
                        .iter()
                        .map(|&p| p + prefix.len())
                        .filter(|&e| e < self.host.len())
                        .collect();
                    let both = self.plain_occurs[var] && self.reversed_occurs[var];
                    return Some((ends, sym.reversed, both));
                }
                match &bindings[sym.var] {
                    Some(image) => {
                        if sym.reversed {
                            prefix.extend(image.iter().rev());
                        } else {
                            prefix.extend_from_slice(image);
                        }
                    }
                    None => break,
                }
            }
        }
        None
    }

    /// End positions of occurrences of a nonempty fully-bound suffix starting
    /// right after the last slot of `var` in some fragment.
    fn suffix_anchor(
        &self,
        var: usize,
        bindings: &[Option<Vec<u8>>],
    ) -> Option<(Vec<usize>, bool)> {
        for frag in &self.fragments {
            let mut suffix: Vec<u8> = Vec::new();
            for sym in frag.symbols.iter().rev() {
                if sym.var == var {
                    if suffix.is_empty() {
                        break;
                    }
                    let positions = match self.occ.get(&suffix[..]) {
                        Some(p) => p,
                        None => return Some((Vec::new(), sym.reversed)),
                    };
                    let ends: Vec<usize> =
                        positions.iter().copied().filter(|&p| p > 0).collect();
                    return Some((ends, sym.reversed));
                }
                match &bindings[sym.var] {
                    Some(image) => {
                        let mut piece: Vec<u8> = if sym.reversed {
                            image.iter().rev().copied().collect()
                        } else {
                            image.clone()
                        };
                        piece.extend_from_slice(&suffix);
                        suffix = piece;
                    }
                    None => break,
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{make_phi, parse_formula};
    use crate::word::Alphabet;

    fn host(s: &str) -> Word {
        Word::parse_inferred(s).unwrap()
    }

    #[test]
    fn instantiate_examples() {
        let bin = Alphabet::new("01").unwrap();
        let mut a = Assignment::new();
        a.insert(Variable("x".into()), Word::parse(&bin, "0").unwrap()).unwrap();
        a.insert(Variable("y1".into()), Word::parse(&bin, "1").unwrap()).unwrap();
        let phi1 = make_phi(1).unwrap();
        assert_eq!(instantiate(&phi1.fragments()[0], &a).unwrap().to_string(), "010");

        let mut b = Assignment::new();
        b.insert(Variable("y1".into()), Word::parse(&bin, "01").unwrap()).unwrap();
        assert_eq!(instantiate(&phi1.fragments()[1], &b).unwrap().to_string(), "10");

        let ab = Alphabet::new("ab").unwrap();
        let f = parse_formula("x y^R x").unwrap();
        let mut c = Assignment::new();
        c.insert(Variable("x".into()), Word::parse(&ab, "a").unwrap()).unwrap();
        c.insert(Variable("y".into()), Word::parse(&ab, "ab").unwrap()).unwrap();
        assert_eq!(instantiate(&f.fragments()[0], &c).unwrap().to_string(), "abaa");
    }

    #[test]
    fn instantiate_missing_variable() {
        let phi1 = make_phi(1).unwrap();
        let err = instantiate(&phi1.fragments()[0], &Assignment::new()).unwrap_err();
        assert!(err.to_string().contains('x'));
    }

    #[test]
    fn encounters_phi1() {
        let phi1 = make_phi(1).unwrap();
        let w = host("0110");
        let witness = encounters(&w, &phi1).unwrap();
        assert!(witness.validate(&w, &phi1).unwrap());

        assert!(encounters(&host("012"), &phi1).is_none());

        let w = host("aba");
        let witness = encounters(&w, &phi1).unwrap();
        assert_eq!(witness.assignment.get(&Variable("x".into())).unwrap().to_string(), "a");
        assert_eq!(witness.assignment.get(&Variable("y1".into())).unwrap().to_string(), "b");
    }

    #[test]
    fn oracle_examples() {
        let phi1 = make_phi(1).unwrap();
        assert!(oracle_encounters(&host("0110"), &phi1));
        assert!(!oracle_encounters(&host("01"), &phi1));
    }

    #[test]
    fn witness_serializes_with_stable_keys() {
        let phi1 = make_phi(1).unwrap();
        let w = host("0110");
        let witness = encounters(&w, &phi1).unwrap();
        let json = serde_json::to_string(&witness).unwrap();
        assert!(json.starts_with("{\"assignment\""), "{json}");
        assert!(json.contains("placements"));
    }

    #[test]
    fn reversed_only_variable_uses_reversed_factors() {
        // y only appears mirrored: the image's reversal must be a factor, the
        // image itself need not be.
        let f = parse_formula("y^R y^R").unwrap();
        let w = host("0101");
        // h(y) = "10" gives h(y^R y^R) = "0101".
        let witness = encounters(&w, &f).unwrap();
        assert!(witness.validate(&w, &f).unwrap());
    }

    #[test]
    fn empty_host_avoids_everything() {
        let empty = Word::empty(Alphabet::new("01").unwrap());
        assert!(avoids(&empty, &make_phi(1).unwrap()));
    }
}

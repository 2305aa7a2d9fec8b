//! Exhaustive backtracking proofs of k-unavoidability, an avoider census per
//! length, and the 3-cyclic encounter scan.
//!
//! The prover extends words letter by letter, pruning any word that
//! encounters the formula; the full word is re-checked after every extension.
//! A closed tree certifies unavoidability. For reproducible verdicts the
//! search is two-phase: a small sequential frontier, then one independent
//! search per frontier word. The per-subtree results do not depend on how
//! many workers run them, and they are merged in a fixed order, so the
//! verdict is identical for any `--jobs` value.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclic::{build_cyclic, ExponentWord};
use crate::encounter::{encounters, instantiate, Assignment, Witness};
use crate::formula::{make_phi, Formula, Variable};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};

/// Mandatory search limits; the prover never runs unbounded.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_depth: usize,
    pub max_nodes: u64,
}

impl Budget {
    pub fn new(max_depth: usize, max_nodes: u64) -> Result<Budget> {
        if max_depth == 0 || max_nodes == 0 {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        Ok(Budget { max_depth, max_nodes })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    /// The search tree was fully closed: no word over the alphabet avoids the
    /// formula beyond `max_depth`.
    Unavoidable,
    /// An avoiding word of the full depth budget exists.
    AvoiderEvidence,
    /// The node budget ran out first.
    BudgetExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Length of the longest avoiding word seen.
    pub max_depth: usize,
    pub nodes_visited: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
}

/// Census of avoiding words: exact count per length.
#[derive(Debug, Clone, Serialize)]
pub struct CensusTable {
    /// `counts[l]` is the number of words of length exactly `l` over the
    /// alphabet that avoid the formula.
    pub counts: Vec<u64>,
}

// Depth at which the sequential frontier hands over to per-subtree searches.
const SPLIT_DEPTH: usize = 3;

struct SubtreeOutcome {
    nodes: u64,
    max_depth: usize,
    evidence: Option<Vec<u8>>,
    exhausted: bool,
}

/// Depth-first proof that no word over `A_k` longer than some finite bound
/// avoids `f`. Symmetry reduction: letters are introduced in canonical
/// first-occurrence order, which is sound because encounters are invariant
/// under letter permutations.
pub fn prove_unavoidable(f: &Formula, k: usize, budget: Budget, jobs: usize) -> Result<Verdict> {
    Budget::new(budget.max_depth, budget.max_nodes)?;
    let alphabet = Alphabet::canonical(k)?;

    let split = SPLIT_DEPTH.min(budget.max_depth);
    let mut nodes = 0u64;
    let mut max_depth = 0usize;
    let mut frontier: Vec<(Vec<u8>, usize)> = Vec::new();
    let mut word = Vec::new();
    let exhausted = collect_frontier(
        f,
        &alphabet,
        k,
        &mut word,
        0,
        split,
        budget.max_nodes,
        &mut nodes,
        &mut max_depth,
        &mut frontier,
    );
    if exhausted {
        return Ok(finish_verdict(VerdictKind::BudgetExhausted, max_depth, nodes, None, &alphabet));
    }
    if budget.max_depth == split && frontier.iter().any(|(w, _)| w.len() == split) {
        let example = frontier.iter().find(|(w, _)| w.len() == split).map(|(w, _)| w.clone());
        return Ok(finish_verdict(
            VerdictKind::AvoiderEvidence,
            max_depth,
            nodes,
            example,
            &alphabet,
        ));
    }

    let outcomes: Vec<SubtreeOutcome> = run_jobs(jobs, || {
        frontier
            .par_iter()
            .map(|(start, distinct)| {
                prove_subtree(f, &alphabet, k, start.clone(), *distinct, budget)
            })
            .collect()
    })?;

    let mut kind = VerdictKind::Unavoidable;
    let mut example = None;
    for outcome in outcomes {
        nodes += outcome.nodes;
        max_depth = max_depth.max(outcome.max_depth);
        if let Some(ev) = outcome.evidence {
            kind = VerdictKind::AvoiderEvidence;
            example = Some(ev);
            break;
        }
        if outcome.exhausted || nodes > budget.max_nodes {
            kind = VerdictKind::BudgetExhausted;
            break;
        }
    }
    Ok(finish_verdict(kind, max_depth, nodes, example, &alphabet))
}

fn finish_verdict(
    kind: VerdictKind,
    max_depth: usize,
    nodes_visited: u64,
    example: Option<Vec<u8>>,
    alphabet: &Arc<Alphabet>,
) -> Verdict {
    let example = example.map(|ids| {
        Word::from_ids(Arc::clone(alphabet), ids)
            .expect("ids in range")
            .to_string()
    });
    Verdict { kind, max_depth, nodes_visited, example }
}

/// Sequential walk to the split depth. Returns true if the node budget ran
/// out. Frontier entries are avoiding words together with their distinct
/// letter count; words shorter than the split depth that cannot be extended
/// are leaves and need no subtree.
#[allow(clippy::too_many_arguments)]
fn collect_frontier(
    f: &Formula,
    alphabet: &Arc<Alphabet>,
    k: usize,
    word: &mut Vec<u8>,
    distinct: usize,
    split: usize,
    node_budget: u64,
    nodes: &mut u64,
    max_depth: &mut usize,
    frontier: &mut Vec<(Vec<u8>, usize)>,
) -> bool {
    if word.len() == split {
        frontier.push((word.clone(), distinct));
        return false;
    }
    for letter in 0..=distinct.min(k - 1) {
        *nodes += 1;
        if *nodes > node_budget {
            return true;
        }
        word.push(letter as u8);
        let candidate = Word::from_ids(Arc::clone(alphabet), word.clone()).expect("in range");
        if encounters(&candidate, f).is_none() {
            *max_depth = (*max_depth).max(word.len());
            let new_distinct = distinct.max(letter + 1);
            if collect_frontier(
                f, alphabet, k, word, new_distinct, split, node_budget, nodes, max_depth, frontier,
            ) {
                word.pop();
                return true;
            }
        }
        word.pop();
    }
    false
}

fn prove_subtree(
    f: &Formula,
    alphabet: &Arc<Alphabet>,
    k: usize,
    mut start: Vec<u8>,
    distinct: usize,
    budget: Budget,
) -> SubtreeOutcome {
    let mut outcome = SubtreeOutcome {
        nodes: 0,
        max_depth: start.len(),
        evidence: None,
        exhausted: false,
    };
    prove_rec(f, alphabet, k, &mut start, distinct, budget, &mut outcome);
    outcome
}

fn prove_rec(
    f: &Formula,
    alphabet: &Arc<Alphabet>,
    k: usize,
    word: &mut Vec<u8>,
    distinct: usize,
    budget: Budget,
    outcome: &mut SubtreeOutcome,
) {
    if word.len() == budget.max_depth {
        outcome.evidence = Some(word.clone());
        return;
    }
    for letter in 0..=distinct.min(k - 1) {
        outcome.nodes += 1;
        if outcome.nodes > budget.max_nodes {
            outcome.exhausted = true;
            return;
        }
        word.push(letter as u8);
        let candidate = Word::from_ids(Arc::clone(alphabet), word.clone()).expect("in range");
        if encounters(&candidate, f).is_none() {
            outcome.max_depth = outcome.max_depth.max(word.len());
            prove_rec(f, alphabet, k, word, distinct.max(letter + 1), budget, outcome);
            if outcome.evidence.is_some() || outcome.exhausted {
                word.pop();
                return;
            }
        }
        word.pop();
    }
}

/// Exact counts of avoiding words per length over `A_k` (no symmetry
/// reduction), via the same pruned depth-first extension.
pub fn census(f: &Formula, k: usize, max_len: usize, jobs: usize) -> Result<CensusTable> {
    let alphabet = Alphabet::canonical(k)?;
    let mut counts = vec![0u64; max_len + 1];
    // The empty word avoids every formula: fragments are nonempty.
    counts[0] = 1;
    if max_len == 0 {
        return Ok(CensusTable { counts });
    }

    let split = SPLIT_DEPTH.min(max_len);
    let mut frontier: Vec<Vec<u8>> = Vec::new();
    let mut word = Vec::new();
    census_frontier(f, &alphabet, k, &mut word, split, &mut counts, &mut frontier);
    if split == max_len {
        return Ok(CensusTable { counts });
    }

    let partials: Vec<Vec<u64>> = run_jobs(jobs, || {
        frontier
            .par_iter()
            .map(|start| {
                let mut sub = vec![0u64; max_len + 1];
                let mut word = start.clone();
                census_rec(f, &alphabet, k, &mut word, max_len, &mut sub);
                sub
            })
            .collect()
    })?;
    for partial in partials {
        for (total, part) in counts.iter_mut().zip(partial) {
            *total += part;
        }
    }
    Ok(CensusTable { counts })
}

fn census_frontier(
    f: &Formula,
    alphabet: &Arc<Alphabet>,
    k: usize,
    word: &mut Vec<u8>,
    split: usize,
    counts: &mut [u64],
    frontier: &mut Vec<Vec<u8>>,
) {
    if word.len() == split {
        frontier.push(word.clone());
        return;
    }
    for letter in 0..k {
        word.push(letter as u8);
        let candidate = Word::from_ids(Arc::clone(alphabet), word.clone()).expect("in range");
        if encounters(&candidate, f).is_none() {
            counts[word.len()] += 1;
            census_frontier(f, alphabet, k, word, split, counts, frontier);
        }
        word.pop();
    }
}

fn census_rec(
    f: &Formula,
    alphabet: &Arc<Alphabet>,
    k: usize,
    word: &mut Vec<u8>,
    max_len: usize,
    counts: &mut [u64],
) {
    if word.len() == max_len {
        return;
    }
    for letter in 0..k {
        word.push(letter as u8);
        let candidate = Word::from_ids(Arc::clone(alphabet), word.clone()).expect("in range");
        if encounters(&candidate, f).is_none() {
            counts[word.len()] += 1;
            census_rec(f, alphabet, k, word, max_len, counts);
        }
        word.pop();
    }
}

fn run_jobs<T: Send>(jobs: usize, work: impl FnOnce() -> Vec<T> + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(work))
}

/// Which route produced a 3-cyclic scan witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanRoute {
    /// k = 2 (mod 3): one letter of a block, then k whole blocks.
    CaseOne,
    /// k = 0 (mod 3): either three exponent-1 blocks as the x image, or a
    /// split of a block with exponent at least 2.
    CaseTwo,
    /// k = 1 (mod 3): two exponent-1 blocks as the x image, or a split of a
    /// tall block, or splits of two adjacent blocks.
    CaseThree,
    /// General encounter search.
    Engine,
}

/// Builds the 3-cyclic word over the first `prefix_cap` exponents of `w` and
/// finds an encounter of `phi_k` in it, preferring the aligned block-shaped
/// witnesses before falling back to the general engine.
pub fn cyclic3_scan(
    k: usize,
    w: &ExponentWord,
    prefix_cap: usize,
) -> Result<Option<(Witness, ScanRoute)>> {
    if k == 0 {
        return Err(Error::InvalidArgument("cyclic3_scan needs k >= 1".into()));
    }
    let exps: Vec<u32> = w.exponents().iter().copied().take(prefix_cap.max(1)).collect();
    let prefix = ExponentWord::new(exps)?;
    let alphabet = Alphabet::canonical(3)?;
    let host = build_cyclic(3, &prefix, &alphabet)?;
    let phi = make_phi(k)?;
    let e = prefix.exponents();
    let nblocks = e.len();

    let block_word = |i: usize, count: u32| -> Word {
        let id = (i % 3) as u8;
        Word::from_ids(Arc::clone(&alphabet), vec![id; count as usize]).expect("small ids")
    };
    let letters = |pieces: &[(usize, u32)]| -> Word {
        let mut ids = Vec::new();
        for &(i, count) in pieces {
            ids.extend(vec![(i % 3) as u8; count as usize]);
        }
        Word::from_ids(Arc::clone(&alphabet), ids).expect("small ids")
    };

    let try_shape = |x: Word, ys: Vec<Word>| -> Option<Witness> {
        if ys.len() != k || ys.iter().any(|y| y.is_empty()) || x.is_empty() {
            return None;
        }
        let mut assignment = Assignment::new();
        assignment.insert(Variable("x".into()), x).ok()?;
        for (i, y) in ys.into_iter().enumerate() {
            assignment.insert(Variable(format!("y{}", i + 1)), y).ok()?;
        }
        witness_from_assignment(&host, &phi, assignment)
    };

    match k % 3 {
        2 => {
            for t in 0..nblocks.saturating_sub(k + 1) {
                let x = block_word(t, 1);
                let ys: Vec<Word> = (1..=k).map(|i| block_word(t + i, e[t + i])).collect();
                if let Some(witness) = try_shape(x, ys) {
                    return Ok(Some((witness, ScanRoute::CaseOne)));
                }
            }
        }
        0 => {
            for t in 0..nblocks {
                // All-ones shape: x spans three unit blocks on both sides.
                if t + k + 5 < nblocks
                    && (t..t + 3).all(|i| e[i] == 1)
                    && (t + k + 3..t + k + 6).all(|i| e[i] == 1)
                {
                    let x = letters(&[(t, 1), (t + 1, 1), (t + 2, 1)]);
                    let ys: Vec<Word> =
                        (1..=k).map(|i| block_word(t + 2 + i, e[t + 2 + i])).collect();
                    if let Some(witness) = try_shape(x, ys) {
                        return Ok(Some((witness, ScanRoute::CaseTwo)));
                    }
                }
                // Tall-block shape: split a block with exponent > 1.
                if t + k < nblocks && e[t + 1] > 1 {
                    let x = block_word(t, 1);
                    let mut ys = vec![block_word(t + 1, 1), block_word(t + 1, e[t + 1] - 1)];
                    ys.extend((3..=k).map(|i| block_word(t + i - 1, e[t + i - 1])));
                    if let Some(witness) = try_shape(x, ys) {
                        return Ok(Some((witness, ScanRoute::CaseTwo)));
                    }
                }
            }
        }
        _ => {
            if k >= 4 {
                for t in 0..nblocks {
                    // All-ones shape: x spans two unit blocks on both sides.
                    if t + k + 3 < nblocks
                        && e[t] == 1
                        && e[t + 1] == 1
                        && e[t + k + 2] == 1
                        && e[t + k + 3] == 1
                    {
                        let x = letters(&[(t, 1), (t + 1, 1)]);
                        let ys: Vec<Word> =
                            (1..=k).map(|i| block_word(t + 1 + i, e[t + 1 + i])).collect();
                        if let Some(witness) = try_shape(x, ys) {
                            return Ok(Some((witness, ScanRoute::CaseThree)));
                        }
                    }
                    // One block with exponent > 2.
                    if t + k - 1 < nblocks && e[t + 1] > 2 {
                        let x = block_word(t, 1);
                        let mut ys = vec![
                            block_word(t + 1, 1),
                            block_word(t + 1, 1),
                            block_word(t + 1, e[t + 1] - 2),
                        ];
                        ys.extend((4..=k).map(|i| block_word(t + i - 2, e[t + i - 2])));
                        if let Some(witness) = try_shape(x, ys) {
                            return Ok(Some((witness, ScanRoute::CaseThree)));
                        }
                    }
                    // Two adjacent blocks with exponents >= 2.
                    if t + k - 1 < nblocks && e[t + 1] >= 2 && e[t + 2] >= 2 {
                        let x = block_word(t, 1);
                        let mut ys = vec![
                            block_word(t + 1, 1),
                            block_word(t + 1, e[t + 1] - 1),
                            block_word(t + 2, 1),
                            block_word(t + 2, e[t + 2] - 1),
                        ];
                        ys.extend((5..=k).map(|i| block_word(t + i - 2, e[t + i - 2])));
                        if let Some(witness) = try_shape(x, ys) {
                            return Ok(Some((witness, ScanRoute::CaseThree)));
                        }
                    }
                }
            }
        }
    }

    Ok(encounters(&host, &phi).map(|w| (w, ScanRoute::Engine)))
}

/// Turns a full assignment into a witness by locating every fragment's image,
/// or `None` if some fragment does not occur.
fn witness_from_assignment(host: &Word, f: &Formula, assignment: Assignment) -> Option<Witness> {
    let mut placements = std::collections::BTreeMap::new();
    for fragment in f.fragments() {
        let image = instantiate(fragment, &assignment).ok()?;
        let positions = host.factor_positions(&image).ok()?;
        placements.insert(fragment.to_string(), *positions.first()?);
    }
    Some(Witness { assignment, placements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn phi1_unary_closes_at_two() {
        let phi1 = make_phi(1).unwrap();
        let verdict =
            prove_unavoidable(&phi1, 1, Budget::new(10, 10_000).unwrap(), 1).unwrap();
        assert_eq!(verdict.kind, VerdictKind::Unavoidable);
        assert_eq!(verdict.max_depth, 2);
    }

    #[test]
    fn phi1_four_letters_has_avoiders() {
        let phi1 = make_phi(1).unwrap();
        let verdict =
            prove_unavoidable(&phi1, 4, Budget::new(20, 1_000_000).unwrap(), 1).unwrap();
        assert_eq!(verdict.kind, VerdictKind::AvoiderEvidence);
        let example = verdict.example.unwrap();
        assert_eq!(example.len(), 20);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let phi1 = make_phi(1).unwrap();
        let verdict = prove_unavoidable(&phi1, 3, Budget::new(50, 20).unwrap(), 1).unwrap();
        assert_eq!(verdict.kind, VerdictKind::BudgetExhausted);
        assert!(prove_unavoidable(&phi1, 3, Budget { max_depth: 0, max_nodes: 5 }, 1).is_err());
    }

    #[test]
    fn census_of_squares_over_two_letters() {
        let xx = parse_formula("x x").unwrap();
        let table = census(&xx, 2, 4, 1).unwrap();
        assert_eq!(table.counts, vec![1, 2, 2, 2, 0]);
    }

    #[test]
    fn census_matches_prover_closure() {
        let phi1 = make_phi(1).unwrap();
        let verdict =
            prove_unavoidable(&phi1, 2, Budget::new(30, 1_000_000).unwrap(), 1).unwrap();
        assert_eq!(verdict.kind, VerdictKind::Unavoidable);
        let table = census(&phi1, 2, verdict.max_depth + 1, 1).unwrap();
        assert!(table.counts[verdict.max_depth] > 0);
        assert_eq!(table.counts[verdict.max_depth + 1], 0);
    }

    #[test]
    fn scan_constant_word_uses_case_shapes() {
        let ones = ExponentWord::new(vec![1; 30]).unwrap();
        for k in 2..=8usize {
            let (witness, route) = cyclic3_scan(k, &ones, 30).unwrap().unwrap();
            let expected = match k % 3 {
                2 => ScanRoute::CaseOne,
                0 => ScanRoute::CaseTwo,
                _ => ScanRoute::CaseThree,
            };
            assert_eq!(route, expected, "k = {k}");
            let host = build_cyclic(3, &ones, &Alphabet::canonical(3).unwrap()).unwrap();
            assert!(witness.validate(&host, &make_phi(k).unwrap()).unwrap());
        }
    }

    #[test]
    fn scan_k1_falls_back_to_engine() {
        let ones = ExponentWord::new(vec![1; 12]).unwrap();
        let (witness, route) = cyclic3_scan(1, &ones, 12).unwrap().unwrap();
        assert_eq!(route, ScanRoute::Engine);
        let host = build_cyclic(3, &ones, &Alphabet::canonical(3).unwrap()).unwrap();
        assert!(witness.validate(&host, &make_phi(1).unwrap()).unwrap());
    }
}

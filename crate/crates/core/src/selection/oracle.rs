use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    oracle_in_caps, Anchor, AnchorReading, SelectionMode, SelectionProblem, ORACLE_SEQUENCE_CAP,
};
use crate::error::{Error, Result};
use crate::fintop::{Cover, PointSet};

/// Outcome of the bounded game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub holds: bool,
    pub length: usize,
    pub refutation: Option<OracleRefutation>,
}

/// The canonical-first sequence the player loses on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRefutation {
    pub anchor: Option<Anchor>,
    pub prefix: Vec<Cover>,
    /// Repeated forever after the prefix.
    pub tail: Cover,
}

impl OracleRefutation {
    pub fn sequence(&self) -> Vec<Cover> {
        let mut s = self.prefix.clone();
        s.push(self.tail.clone());
        s
    }
}

/// What a selection so far has accumulated: whether every set was open
/// where the target demands it, the union, and the union of closures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Acc {
    open: bool,
    union: PointSet,
    closures: PointSet,
}

impl Acc {
    const NOTHING: Acc = Acc {
        open: true,
        union: PointSet::EMPTY,
        closures: PointSet::EMPTY,
    };

    fn join(self, other: Acc) -> Acc {
        Acc {
            open: self.open && other.open,
            union: self.union.union(other.union),
            closures: self.closures.union(other.closures),
        }
    }
}

/// Plays the selection game against every adversary sequence of the form
/// `C₁ … C_{L−1}` followed by `C_L` repeated forever, over irredundant
/// covers. Prefixes are explored depth-first, carrying the set of
/// accumulations the player can have reached, so shared prefixes are
/// evaluated once. Lengths are
/// nested (a length-`L` sequence is the length-`L+1` sequence padding its
/// prefix with the tail), hence a failure at `L` persists at `L+1`.
pub fn oracle_bounded(p: &SelectionProblem, len: usize, point_cap: usize) -> Result<OracleVerdict> {
    p.validate()?;
    let covers =
        p.y.topology(p.source)
            .enumerate_irredundant_covers(p.source, point_cap)?;
    if !oracle_in_caps(p, &covers) {
        return Err(Error::CapExceeded {
            what: "selection oracle covers",
            got: covers.len(),
            cap: super::ORACLE_COVER_CAP,
        });
    }
    oracle_with_covers(p, &covers, len)
}

/// The bounded game over an explicit adversary cover list (for instance
/// every cover rather than the irredundant ones).
pub fn oracle_with_covers(
    p: &SelectionProblem,
    covers: &[Cover],
    len: usize,
) -> Result<OracleVerdict> {
    if len == 0 {
        return Err(Error::Invalid(
            "oracle sequence length must be at least 1".into(),
        ));
    }
    let count = (0..len).try_fold(1usize, |acc, _| acc.checked_mul(covers.len()));
    match count {
        Some(c) if c <= ORACLE_SEQUENCE_CAP => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "oracle adversary sequences",
                got: count.unwrap_or(usize::MAX),
                cap: ORACLE_SEQUENCE_CAP,
            })
        }
    }
    for anchor in p.slots() {
        let game = Game::new(p, covers, anchor);
        let mut prefix = Vec::new();
        if let Some((pre, tail)) =
            game.refute(&mut prefix, &BTreeSet::from([Acc::NOTHING]), len - 1)
        {
            return Ok(OracleVerdict {
                holds: false,
                length: len,
                refutation: Some(OracleRefutation {
                    anchor,
                    prefix: pre.iter().map(|&i| covers[i].clone()).collect(),
                    tail: covers[tail].clone(),
                }),
            });
        }
    }
    Ok(OracleVerdict {
        holds: true,
        length: len,
        refutation: None,
    })
}

struct Game<'a> {
    p: &'a SelectionProblem,
    covers: &'a [Cover],
    anchor: Option<Anchor>,
    /// Per cover: whether the side condition holds, single-position moves,
    /// and what infinitely many repetitions can accumulate.
    side: Vec<bool>,
    moves: Vec<Vec<Acc>>,
    tails: Vec<Vec<Acc>>,
}

impl<'a> Game<'a> {
    fn new(p: &'a SelectionProblem, covers: &'a [Cover], anchor: Option<Anchor>) -> Self {
        let side = covers
            .iter()
            .map(|c| anchor.is_none_or(|a| c.union().contains(a.start)))
            .collect();
        let moves: Vec<Vec<Acc>> = covers
            .iter()
            .map(|c| position_moves(p, c, anchor))
            .collect();
        let tails = moves.iter().map(|m| repeat_closure(m)).collect();
        Game {
            p,
            covers,
            anchor,
            side,
            moves,
            tails,
        }
    }

    fn wins(&self, acc: Acc) -> bool {
        if !acc.open {
            return false;
        }
        let anchor_ok = match (self.p.reading, self.anchor) {
            (AnchorReading::Union, Some(a)) => acc.union.contains(a.end),
            _ => true,
        };
        anchor_ok && self.p.target_met(acc.union, acc.closures)
    }

    /// First (prefix, tail) in lexicographic order the player cannot answer.
    fn refute(
        &self,
        prefix: &mut Vec<usize>,
        states: &BTreeSet<Acc>,
        remaining: usize,
    ) -> Option<(Vec<usize>, usize)> {
        if remaining == 0 {
            for tail in 0..self.covers.len() {
                if !self.side[tail] || prefix.iter().any(|&c| !self.side[c]) {
                    continue;
                }
                let won = states
                    .iter()
                    .any(|s| self.tails[tail].iter().any(|&t| self.wins(s.join(t))));
                if !won {
                    return Some((prefix.clone(), tail));
                }
            }
            return None;
        }
        for c in 0..self.covers.len() {
            let next: BTreeSet<Acc> = states
                .iter()
                .flat_map(|s| self.moves[c].iter().map(move |&m| s.join(m)))
                .collect();
            prefix.push(c);
            let found = self.refute(prefix, &next, remaining - 1);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn acc_of(p: &SelectionProblem, u: PointSet) -> Acc {
    Acc {
        open: p
            .required_openness()
            .is_none_or(|j| p.y.topology(j).is_open(u)),
        union: u,
        closures: p.closure_j(u),
    }
}

/// Everything one position may contribute, per the literal definitions.
fn position_moves(p: &SelectionProblem, cover: &Cover, anchor: Option<Anchor>) -> Vec<Acc> {
    let pool = p.pool_of(cover);
    let end = anchor.map(|a| a.end);
    let per_set = p.reading == AnchorReading::PerSet;
    let mut out = BTreeSet::new();
    match p.mode {
        SelectionMode::Single => {
            for &u in &pool {
                if per_set && end.is_some_and(|e| !u.contains(e)) {
                    continue;
                }
                out.insert(acc_of(p, u));
            }
        }
        SelectionMode::Finite => {
            // Every finite subfamily, including the empty one.
            let mut memo = vec![Acc::NOTHING; 1 << pool.len()];
            for mask in 1..memo.len() {
                let low = mask.trailing_zeros() as usize;
                memo[mask] = memo[mask & (mask - 1)].join(acc_of(p, pool[low]));
            }
            for acc in memo {
                if per_set && end.is_some_and(|e| !acc.union.contains(e)) {
                    continue;
                }
                out.insert(acc);
            }
        }
    }
    out.into_iter().collect()
}

/// Joins of nonempty finite collections of moves: infinitely many
/// positions can realise any of them.
fn repeat_closure(moves: &[Acc]) -> Vec<Acc> {
    let mut all: BTreeSet<Acc> = moves.iter().copied().collect();
    loop {
        let grown: BTreeSet<Acc> = all
            .iter()
            .flat_map(|&a| moves.iter().map(move |&m| a.join(m)))
            .collect();
        let before = all.len();
        all.extend(grown);
        if all.len() == before {
            return all.into_iter().collect();
        }
    }
}

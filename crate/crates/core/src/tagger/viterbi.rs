//! Second-order Viterbi decoding over a tag lattice.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{TagSym, TaggerError, TrigramModel};
use crate::tagset::Tag;

/// A token with its candidate tags and lexical probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeToken {
    pub word: String,
    pub candidates: Vec<(Tag, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TagLattice {
    pub tokens: Vec<LatticeToken>,
}

impl TagLattice {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Every token needs at least one distinct candidate with positive
    /// probability, and the probabilities must sum to 1.
    pub fn validate(&self) -> Result<(), TaggerError> {
        for (index, tok) in self.tokens.iter().enumerate() {
            let bad = |message: &str| TaggerError::InvalidLattice {
                index,
                message: message.into(),
            };
            if tok.candidates.is_empty() {
                return Err(bad("no candidates"));
            }
            if tok.candidates.iter().any(|(_, p)| !(p.is_finite() && *p > 0.0)) {
                return Err(bad("probabilities must be positive"));
            }
            let sum: f64 = tok.candidates.iter().map(|(_, p)| p).sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(bad("probabilities do not sum to 1"));
            }
            let mut tags: Vec<Tag> = tok.candidates.iter().map(|(t, _)| *t).collect();
            tags.sort();
            tags.dedup();
            if tags.len() != tok.candidates.len() {
                return Err(bad("duplicate candidate"));
            }
        }
        Ok(())
    }
}

/// Log score of one path: `s = (s + ln lex) + ln ctx` per token, then the
/// transition into the closing boundary. `choice[i]` indexes the candidates
/// of token `i`.
pub fn path_score<F>(lattice: &TagLattice, choice: &[usize], ctx: F) -> f64
where
    F: Fn(&TagSym, &TagSym, &TagSym) -> f64,
{
    let mut x = TagSym::Boundary;
    let mut y = TagSym::Boundary;
    let mut s = 0.0;
    for (tok, &c) in lattice.tokens.iter().zip(choice) {
        let (tag, p) = tok.candidates[c];
        let z = TagSym::Tag(tag);
        s = (s + libm::log(p)) + libm::log(ctx(&x, &y, &z));
        x = y;
        y = z;
    }
    s + libm::log(ctx(&x, &y, &TagSym::Boundary))
}

#[derive(Clone, Copy)]
struct Cell {
    score: f64,
    back: usize,
}

/// Best-scoring tag sequence. Among exactly tied paths the one whose
/// rendered tag sequence is lexicographically smallest wins.
pub fn decode<F>(lattice: &TagLattice, ctx: F) -> Vec<Tag>
where
    F: Fn(&TagSym, &TagSym, &TagSym) -> f64,
{
    let n = lattice.tokens.len();
    if n == 0 {
        return Vec::new();
    }
    let syms: Vec<Vec<TagSym>> = lattice
        .tokens
        .iter()
        .map(|t| t.candidates.iter().map(|(tag, _)| TagSym::Tag(*tag)).collect())
        .collect();
    let renders: Vec<Vec<String>> = lattice
        .tokens
        .iter()
        .map(|t| t.candidates.iter().map(|(tag, _)| tag.render()).collect())
        .collect();
    let lnlex: Vec<Vec<f64>> = lattice
        .tokens
        .iter()
        .map(|t| t.candidates.iter().map(|(_, p)| libm::log(*p)).collect())
        .collect();
    let boundary = [TagSym::Boundary];
    // states at position i are (a, b): a over symbols of i-1, b over i
    let prev_syms = |i: usize| -> &[TagSym] {
        if i == 0 {
            &boundary
        } else {
            &syms[i - 1]
        }
    };
    let mut tables: Vec<Vec<Vec<Cell>>> = Vec::with_capacity(n);

    // candidate indices of positions 0..=i ending in state (a, b) at i
    let reconstruct = |tables: &Vec<Vec<Vec<Cell>>>, i: usize, a: usize, b: usize| -> Vec<usize> {
        let mut path = alloc::vec![0; i + 1];
        let (mut a, mut b) = (a, b);
        let mut k = i;
        loop {
            path[k] = b;
            if k == 0 {
                break;
            }
            let w = tables[k][a][b].back;
            b = a;
            a = w;
            k -= 1;
        }
        path
    };
    let cmp_paths = |p: &[usize], q: &[usize]| -> Ordering {
        for (k, (x, y)) in p.iter().zip(q).enumerate() {
            match renders[k][*x].cmp(&renders[k][*y]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    };

    for i in 0..n {
        let pa = prev_syms(i);
        let mut table = alloc::vec![alloc::vec![Cell { score: f64::NEG_INFINITY, back: 0 }; syms[i].len()]; pa.len()];
        for (ai, a) in pa.iter().enumerate() {
            for (bi, b) in syms[i].iter().enumerate() {
                if i == 0 {
                    let s = (0.0 + lnlex[0][bi]) + libm::log(ctx(&TagSym::Boundary, a, b));
                    table[ai][bi] = Cell { score: s, back: 0 };
                    continue;
                }
                let pw = prev_syms(i - 1);
                let mut best: Option<Cell> = None;
                for (wi, w) in pw.iter().enumerate() {
                    let prev = tables[i - 1][wi][ai].score;
                    let s = (prev + lnlex[i][bi]) + libm::log(ctx(w, a, b));
                    let cand = Cell { score: s, back: wi };
                    best = match best {
                        None => Some(cand),
                        Some(cur) if s > cur.score => Some(cand),
                        Some(cur) if s == cur.score => {
                            let p = reconstruct(&tables, i - 1, cur.back, ai);
                            let q = reconstruct(&tables, i - 1, wi, ai);
                            if cmp_paths(&q, &p) == Ordering::Less {
                                Some(cand)
                            } else {
                                Some(cur)
                            }
                        }
                        keep => keep,
                    };
                }
                table[ai][bi] = best.expect("non-empty predecessor set");
            }
        }
        tables.push(table);
    }

    let last = n - 1;
    let mut best: Option<(f64, usize, usize)> = None;
    for (ai, a) in prev_syms(last).iter().enumerate() {
        for (bi, b) in syms[last].iter().enumerate() {
            let s = tables[last][ai][bi].score + libm::log(ctx(a, b, &TagSym::Boundary));
            best = match best {
                None => Some((s, ai, bi)),
                Some((cur, _, _)) if s > cur => Some((s, ai, bi)),
                Some((cur, ca, cb)) if s == cur => {
                    let p = reconstruct(&tables, last, ca, cb);
                    let q = reconstruct(&tables, last, ai, bi);
                    if cmp_paths(&q, &p) == Ordering::Less {
                        Some((s, ai, bi))
                    } else {
                        Some((cur, ca, cb))
                    }
                }
                keep => keep,
            };
        }
    }
    let (_, a, b) = best.expect("non-empty lattice");
    reconstruct(&tables, last, a, b)
        .into_iter()
        .enumerate()
        .map(|(k, c)| lattice.tokens[k].candidates[c].0)
        .collect()
}

impl TrigramModel {
    /// Tags one sentence given its lattice.
    pub fn tag_sentence<S: AsRef<str>>(&self, tokens: &[S], lattice: &TagLattice) -> Result<Vec<Tag>, TaggerError> {
        if tokens.len() != lattice.len() {
            return Err(TaggerError::LatticeMismatch {
                tokens: tokens.len(),
                lattice: lattice.len(),
            });
        }
        lattice.validate()?;
        Ok(self.decode(lattice))
    }

    /// Viterbi decoding with this model's contextual probabilities.
    pub fn decode(&self, lattice: &TagLattice) -> Vec<Tag> {
        decode(lattice, |x, y, z| self.contextual_prob(x, y, z))
    }
}

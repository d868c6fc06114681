//! Free group words in syllable (run-length) form.
//!
//! A word is a sequence of syllables `g^e` with nonzero exponents and no two
//! adjacent syllables on the same generator. Freely reduced form is the only
//! form a `Word` can be observed in, so equality is syntactic. Run-length
//! storage matters: the expansion of a left-normed commutator `[a,_n x]`
//! doubles in length with each nesting, and exponents grow large once words
//! are raised to powers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::int::Int;

/// A named free generator together with its position in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: usize,
}

/// A freely reduced word over generators identified by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Word {
    syllables: Vec<(usize, Int)>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// The single-syllable word `g^e` (identity if `e = 0`).
    pub fn generator_power(gen: usize, exp: Int) -> Word {
        if exp.is_zero() {
            Word::identity()
        } else {
            Word {
                syllables: vec![(gen, exp)],
            }
        }
    }

    pub fn generator(gen: usize) -> Word {
        Word::generator_power(gen, Int::ONE)
    }

    /// Builds a word from raw syllables, freely reducing.
    pub fn from_syllables<I: IntoIterator<Item = (usize, Int)>>(syllables: I) -> Word {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push_syllable(g, e);
        }
        w
    }

    fn push_syllable(&mut self, gen: usize, exp: Int) {
        if exp.is_zero() {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == gen {
                last.1 += &exp;
                if last.1.is_zero() {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((gen, exp));
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(usize, Int)] {
        &self.syllables
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Indices of all generators occurring in the word, deduplicated, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.syllables.iter().map(|(g, _)| *g).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|(g, _)| *g).max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (g, e) in &other.syllables {
            w.push_syllable(*g, e.clone());
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|(g, e)| (*g, -e))
                .collect(),
        }
    }

    /// The commutator `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse()
            .concat(&other.inverse())
            .concat(self)
            .concat(other)
    }

    /// Total number of letters; exponents count with multiplicity.
    pub fn letter_length(&self) -> Int {
        let mut n = Int::ZERO;
        for (_, e) in &self.syllables {
            n += &e.abs();
        }
        n
    }

    /// Exponent sum of each generator up to `gen_count`, for abelianization.
    pub fn exponent_sums(&self, gen_count: usize) -> Vec<Int> {
        let mut sums = vec![Int::ZERO; gen_count];
        for (g, e) in &self.syllables {
            sums[*g] += e;
        }
        sums
    }
}

/// The left-normed commutator `[w1, w2, ..., wk] = [[..[w1,w2],..], wk]`
/// as a freely reduced word. A single argument is returned unchanged.
pub fn left_normed_comm_word(args: &[Word]) -> Word {
    assert!(!args.is_empty(), "left-normed commutator of no arguments");
    let mut acc = args[0].clone();
    for w in &args[1..] {
        acc = acc.commutator(w);
    }
    acc
}

/// Error from substituting into a word with an incomplete assignment.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("no assignment for generator index {gen}")]
pub struct MissingAssignment {
    pub gen: usize,
}

/// Homomorphic image of `w` under `gen -> assignment(gen)`, freely reduced.
pub fn substitute_word(
    w: &Word,
    assignment: &dyn Fn(usize) -> Option<Word>,
) -> Result<Word, MissingAssignment> {
    let mut out = Word::identity();
    for (g, e) in w.syllables() {
        let image = assignment(*g).ok_or(MissingAssignment { gen: *g })?;
        out = out.concat(&word_power(&image, e));
    }
    Ok(out)
}

/// `w^e` as a freely reduced word. The word is split as
/// `prefix * core * prefix^-1` with `core` cyclically reduced; only the core
/// gets repeated, and a single-syllable core costs nothing regardless of `e`.
pub fn word_power(w: &Word, e: &Int) -> Word {
    if e.is_zero() || w.is_identity() {
        return Word::identity();
    }
    if e.is_one() {
        return w.clone();
    }
    let (base, n) = if e.is_negative() {
        (w.inverse(), -e.clone())
    } else {
        (w.clone(), e.clone())
    };
    if n.is_one() {
        return base;
    }

    let mut syl = base.syllables.clone();
    let mut prefix: Vec<(usize, Int)> = Vec::new();
    let core_power: Word;
    loop {
        let len = syl.len();
        if len == 0 {
            core_power = Word::identity();
            break;
        }
        if len == 1 {
            let (g, m) = syl[0].clone();
            core_power = Word::generator_power(g, &m * &n);
            break;
        }
        if syl[0].0 != syl[len - 1].0 {
            core_power = repeat_cyclically_reduced(&syl, &n);
            break;
        }
        let sum = &syl[0].1 + &syl[len - 1].1;
        if sum.is_zero() {
            prefix.push(syl[0].clone());
            syl.pop();
            syl.remove(0);
        } else {
            // w = g^a m g^b with a+b != 0 and m nonempty avoiding g at its
            // ends, so w^n = g^a (m g^(a+b))^(n-1) m g^b with no further
            // cancellation.
            let (g, a) = syl[0].clone();
            let b = syl[len - 1].1.clone();
            let middle = syl[1..len - 1].to_vec();
            let mut inner = middle.clone();
            inner.push((g, sum));
            let mut result = Word::generator_power(g, a);
            result = result.concat(&repeat_cyclically_reduced(&inner, &(&n - &Int::ONE)));
            result = result.concat(&Word { syllables: middle });
            result = result.concat(&Word::generator_power(g, b));
            core_power = result;
            break;
        }
    }
    let pre = Word { syllables: prefix };
    pre.concat(&core_power).concat(&pre.inverse())
}

/// `n` plain copies of a cyclically reduced syllable list (first and last
/// generators differ, so seams never interact).
fn repeat_cyclically_reduced(syl: &[(usize, Int)], n: &Int) -> Word {
    if n.is_zero() {
        return Word::identity();
    }
    debug_assert!(syl.len() >= 2 && syl[0].0 != syl[syl.len() - 1].0);
    let reps = n
        .to_usize()
        .expect("word power exponent too large to materialize");
    let mut out = Vec::with_capacity(syl.len() * reps);
    for _ in 0..reps {
        out.extend_from_slice(syl);
    }
    Word { syllables: out }
}

impl fmt::Display for Word {
    /// Renders with placeholder names `gN`; presentations render with real
    /// names via [`crate::fp::FpPresentation::format_word`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e.is_one() {
                write!(f, "g{g}")?;
            } else {
                write!(f, "g{g}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(i: usize) -> Word {
        Word::generator(i)
    }

    #[test]
    fn free_reduction_is_eager() {
        let w = Word::from_syllables([
            (0, Int::from(1)),
            (1, Int::from(2)),
            (1, Int::from(-2)),
            (0, Int::from(-1)),
        ]);
        assert!(w.is_identity());
    }

    #[test]
    fn commutator_of_two_generators() {
        // [a, b] = a^-1 b^-1 a b
        let c = left_normed_comm_word(&[gen(0), gen(1)]);
        assert_eq!(
            c.syllables(),
            &[
                (0, Int::from(-1)),
                (1, Int::from(-1)),
                (0, Int::from(1)),
                (1, Int::from(1)),
            ]
        );
    }

    #[test]
    fn single_argument_unchanged() {
        let w = gen(3);
        assert_eq!(left_normed_comm_word(&[w.clone()]), w);
    }

    #[test]
    fn abb_commutator_reduces_to_nine_syllables() {
        // Independent check by direct expansion: [a,b,b] expands to
        // (a^-1 b^-1 a b)^-1 b^-1 (a^-1 b^-1 a b) b. The only reduction is
        // the final b merging into b^2, leaving
        // b^-1 a^-1 b a b^-1 a^-1 b^-1 a b^2: nine syllables, ten letters.
        let abb = left_normed_comm_word(&[gen(0), gen(1), gen(1)]);
        let ab = gen(0).commutator(&gen(1));
        let by_hand = ab
            .inverse()
            .concat(&gen(1).inverse())
            .concat(&ab)
            .concat(&gen(1));
        assert_eq!(abb, by_hand);
        assert_eq!(abb.syllable_count(), 9);
        assert_eq!(abb.letter_length(), Int::from(10));
    }

    #[test]
    fn left_normed_nesting_matches_two_step() {
        let args = [gen(0), gen(1), gen(2), gen(1)];
        let all = left_normed_comm_word(&args);
        let head = left_normed_comm_word(&args[..3]);
        let two_step = left_normed_comm_word(&[head, args[3].clone()]);
        assert_eq!(all, two_step);
    }

    #[test]
    fn substitution_is_homomorphic() {
        let w = left_normed_comm_word(&[gen(0), gen(2)]);
        let sub = |g: usize| -> Option<Word> {
            match g {
                0 => Some(gen(0)),
                2 => Some(gen(1).concat(&gen(0))),
                _ => None,
            }
        };
        let u = gen(0);
        let v = gen(2);
        let uv = u.concat(&v);
        let image_uv = substitute_word(&uv, &sub).unwrap();
        let product = substitute_word(&u, &sub)
            .unwrap()
            .concat(&substitute_word(&v, &sub).unwrap());
        assert_eq!(image_uv, product);
        assert!(substitute_word(&w, &sub).is_ok());
    }

    #[test]
    fn substituting_generator_into_own_commutator_cancels() {
        // [a, x] with x -> a becomes [a, a] = 1
        let w = left_normed_comm_word(&[gen(0), gen(1)]);
        let sub = |g: usize| -> Option<Word> {
            match g {
                0 | 1 => Some(gen(0)),
                _ => None,
            }
        };
        assert!(substitute_word(&w, &sub).unwrap().is_identity());
    }

    #[test]
    fn substitution_missing_assignment_errors() {
        let w = gen(5);
        let sub = |_: usize| -> Option<Word> { None };
        assert_eq!(substitute_word(&w, &sub), Err(MissingAssignment { gen: 5 }));
    }

    #[test]
    fn word_power_agrees_with_repeated_concat() {
        let w = gen(0).concat(&gen(1)).concat(&gen(0).inverse());
        for e in -5i64..=5 {
            let mut by_concat = Word::identity();
            let reps = e.unsigned_abs();
            let base = if e < 0 { w.inverse() } else { w.clone() };
            for _ in 0..reps {
                by_concat = by_concat.concat(&base);
            }
            assert_eq!(word_power(&w, &Int::from(e)), by_concat, "e = {e}");
        }
    }
}

//! Collection from the left and the element operations built on it.
//!
//! The only primitive is `acc := acc * g_j^e` on a normalized accumulator.
//! When the accumulator has support above `j`, that suffix is detached and
//! conjugated past the incoming syllable (`t * g = g * t^g`), which recurses
//! into strictly higher weights and therefore terminates on any presentation
//! whose tails respect the weight filtration. Conjugation by a negative
//! generator power has no stored tail; `g_k^{g_j^{-1}}` is derived on demand
//! from `x^{g^{-1}} = x * ([x,g]^{-1})^{g^{-1}}` and cached.

use crate::fp::Relator;
use crate::int::Int;
use crate::word::Word;

use super::{ExponentVector, GenIndex, PcError, PcPresentation, RelativeOrder};


/// Order of a group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(Int),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&Int> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "Infinite"),
        }
    }
}

impl PcPresentation {
    /// Normal form of the element represented by a free word over the pc
    /// generators.
    pub fn collect(&self, w: &Word) -> Result<ExponentVector, PcError> {
        if let Some(g) = w.max_generator() {
            if g >= self.gen_count() {
                return Err(PcError::UnknownGenerator {
                    gen: g,
                    count: self.gen_count(),
                });
            }
        }
        let mut acc = self.identity();
        for (g, e) in w.syllables() {
            self.mult_gen_pow(&mut acc, *g, e);
        }
        Ok(acc)
    }

    /// Normal form of `prod g_i^{raw[i]}` taken in ascending index order.
    pub fn vector_from_exponents(&self, raw: &[Int]) -> ExponentVector {
        assert_eq!(raw.len(), self.gen_count());
        let mut acc = self.identity();
        for (i, e) in raw.iter().enumerate() {
            if !e.is_zero() {
                self.mult_gen_pow(&mut acc, i, e);
            }
        }
        acc
    }

    pub fn multiply(&self, a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
        let mut acc = a.clone();
        self.mult_vector(&mut acc, b);
        acc
    }

    pub fn inverse(&self, a: &ExponentVector) -> ExponentVector {
        let mut acc = self.identity();
        let syllables: Vec<(usize, Int)> =
            a.syllables().map(|(i, e)| (i, e.clone())).collect();
        for (i, e) in syllables.into_iter().rev() {
            self.mult_gen_pow(&mut acc, i, &(-e));
        }
        acc
    }

    /// `a^n` by repeated squaring; negative exponents go through the inverse.
    pub fn power(&self, a: &ExponentVector, n: &Int) -> ExponentVector {
        if n.is_zero() || a.is_zero() {
            return self.identity();
        }
        let (mut base, mut m) = if n.is_negative() {
            (self.inverse(a), -n.clone())
        } else {
            (a.clone(), n.clone())
        };
        let two = Int::from(2);
        let mut result = self.identity();
        loop {
            let (q, r) = m.div_rem_euclid(&two);
            if r.is_one() {
                result = self.multiply(&result, &base);
            }
            if !q.is_positive() {
                break;
            }
            base = self.multiply(&base, &base);
            m = q;
        }
        result
    }

    /// `a^b = b^-1 a b`.
    pub fn conjugate_elt(&self, a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
        let mut acc = self.inverse(b);
        self.mult_vector(&mut acc, a);
        self.mult_vector(&mut acc, b);
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`, computed as `(b a)^-1 (a b)`.
    pub fn commutator_elt(&self, a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
        let ba = self.multiply(b, a);
        let mut acc = self.inverse(&ba);
        self.mult_vector(&mut acc, a);
        self.mult_vector(&mut acc, b);
        acc
    }

    /// `[a1, a2, ..., ak]` left-normed; a single argument is returned as is.
    pub fn left_normed_commutator_elt(&self, args: &[ExponentVector]) -> ExponentVector {
        assert!(!args.is_empty(), "left-normed commutator of no arguments");
        let mut acc = args[0].clone();
        for b in &args[1..] {
            acc = self.commutator_elt(&acc, b);
        }
        acc
    }

    /// Least `n >= 1` with `a^n = 1`, or `Infinite`. Walks the weight
    /// filtration: if the leading exponent sits at an infinite-order
    /// generator the element has infinite order; otherwise a minimal power
    /// clears the leading coordinate and the problem recurses strictly
    /// deeper. Never enumerates elements.
    pub fn order_of(&self, a: &ExponentVector) -> Order {
        let mut acc = a.clone();
        let mut total = Int::ONE;
        let mut last: Option<usize> = None;
        while let Some(l) = acc.leading() {
            assert!(
                last.is_none_or(|p| l > p),
                "leading index failed to increase during order computation; presentation inconsistent"
            );
            last = Some(l);
            match self.relative_order(l) {
                RelativeOrder::Infinite => return Order::Infinite,
                RelativeOrder::Finite(o) => {
                    let g = acc.get(l).gcd(o);
                    let (m, rem) = o.div_rem_euclid(&g);
                    debug_assert!(rem.is_zero());
                    acc = self.power(&acc, &m);
                    total *= &m;
                }
            }
        }
        Order::Finite(total)
    }

    /// Homomorphic image of a free word under per-generator images.
    pub fn evaluate_word(
        &self,
        images: &[Option<ExponentVector>],
        w: &Word,
    ) -> Result<ExponentVector, PcError> {
        let mut acc = self.identity();
        for (g, e) in w.syllables() {
            let img = images
                .get(*g)
                .and_then(Option::as_ref)
                .ok_or(PcError::MissingImage { gen: *g })?;
            self.mult_elt_power(&mut acc, img, e);
        }
        Ok(acc)
    }

    /// Evaluates a relator, preferring the nested-commutator route when the
    /// relator carries left-normed bracket structure; the result equals the
    /// word route by the homomorphism property.
    pub fn evaluate_relator(
        &self,
        images: &[Option<ExponentVector>],
        r: &Relator,
    ) -> Result<ExponentVector, PcError> {
        match &r.comm {
            Some(args) => {
                let mut values = Vec::with_capacity(args.len());
                for w in args {
                    values.push(self.evaluate_word(images, w)?);
                }
                Ok(self.left_normed_commutator_elt(&values))
            }
            None => self.evaluate_word(images, &r.word),
        }
    }

    // ------------------------------------------------------------------
    // collection internals
    // ------------------------------------------------------------------

    pub(crate) fn mult_vector(&self, acc: &mut ExponentVector, v: &ExponentVector) {
        let syllables: Vec<(usize, Int)> = v.syllables().map(|(i, e)| (i, e.clone())).collect();
        for (i, e) in syllables {
            self.mult_gen_pow(acc, i, &e);
        }
    }

    /// `acc := acc * v^f`.
    fn mult_elt_power(&self, acc: &mut ExponentVector, v: &ExponentVector, f: &Int) {
        if f.is_one() {
            self.mult_vector(acc, v);
        } else if (-f.clone()).is_one() {
            let inv = self.inverse(v);
            self.mult_vector(acc, &inv);
        } else if !f.is_zero() {
            let w = self.power(v, f);
            self.mult_vector(acc, &w);
        }
    }

    /// `acc := acc * g_j^e` for a normalized accumulator.
    pub(crate) fn mult_gen_pow(&self, acc: &mut ExponentVector, j: GenIndex, e: &Int) {
        if e.is_zero() {
            return;
        }
        let n = self.gen_count();
        let has_suffix = (j + 1..n).any(|k| !acc.get(k).is_zero());
        if !has_suffix {
            self.mult_easy(acc, j, e);
            return;
        }
        // acc = h * t with t above j; then h t g^e = (h g^e) t^(g^e).
        let mut suffix: Vec<(usize, Int)> = Vec::new();
        for k in j + 1..n {
            if !acc.get(k).is_zero() {
                let v = std::mem::take(acc.entry_mut(k));
                suffix.push((k, v));
            }
        }
        self.mult_easy(acc, j, e);
        let conjugated = self.conj_syllables_by_gen_pow(&suffix, j, e);
        self.mult_vector(acc, &conjugated);
    }

    /// `acc := acc * g_j^e` when `acc` has no support above `j`.
    fn mult_easy(&self, acc: &mut ExponentVector, j: GenIndex, e: &Int) {
        debug_assert!((j + 1..self.gen_count()).all(|k| acc.get(k).is_zero()));
        *acc.entry_mut(j) += e;
        if let RelativeOrder::Finite(o) = self.relative_order(j) {
            let (q, r) = acc.get(j).div_rem_euclid(o);
            if !q.is_zero() {
                acc.set(j, r);
                if let Some(tail) = self.power_tail(j) {
                    let t = self.power(tail, &q);
                    for (k, v) in t.syllables() {
                        acc.set(k, v.clone());
                    }
                }
            }
        }
    }

    /// Normal form of `(prod g_k^{f_k})^(g_j^e)` for syllables all above `j`.
    fn conj_syllables_by_gen_pow(
        &self,
        syllables: &[(usize, Int)],
        j: GenIndex,
        e: &Int,
    ) -> ExponentVector {
        debug_assert!(syllables.iter().all(|(k, _)| *k > j));
        if e.is_zero() {
            let mut v = self.identity();
            for (k, f) in syllables {
                v.set(*k, f.clone());
            }
            return v;
        }
        let one = Int::ONE;
        let minus_one = Int::from(-1);
        if *e == one || *e == minus_one {
            let mut acc = self.identity();
            for (k, f) in syllables {
                let c = if *e == one {
                    self.conj_gen(*k, j)
                } else {
                    self.conj_gen_inv(*k, j)
                };
                self.mult_elt_power(&mut acc, &c, f);
            }
            return acc;
        }
        // Conjugation by g^e via doubling: x^(g^(2q+r)) = ((x^(g^q))^(g^q))^(g^r).
        let two = Int::from(2);
        let (q, r) = e.div_rem_euclid(&two);
        let mut v = self.conj_syllables_by_gen_pow(syllables, j, &q);
        v = self.conj_vector_by_gen_pow(&v, j, &q);
        if r.is_one() {
            v = self.conj_vector_by_gen_pow(&v, j, &one);
        }
        v
    }

    /// `x^(g_j^e)` for a normalized `x` supported strictly above `j`.
    fn conj_vector_by_gen_pow(&self, x: &ExponentVector, j: GenIndex, e: &Int) -> ExponentVector {
        let syllables: Vec<(usize, Int)> = x.syllables().map(|(i, v)| (i, v.clone())).collect();
        self.conj_syllables_by_gen_pow(&syllables, j, e)
    }

    /// `g_k^(g_j)` for `k > j`, straight from the stored tail.
    fn conj_gen(&self, k: GenIndex, j: GenIndex) -> ExponentVector {
        let mut v = self.generator(k);
        if let Some(tail) = self.conj_tail(j, k) {
            for (i, f) in tail.syllables() {
                v.set(i, f.clone());
            }
        }
        v
    }

    /// `g_k^(g_j^{-1})` for `k > j`, derived and cached. Uses
    /// `x^(g^{-1}) = x * ([x, g]^{-1})^(g^{-1})`; the commutator is the
    /// stored tail, whose support is strictly above `k`, so the recursion
    /// climbs the generator list and terminates.
    fn conj_gen_inv(&self, k: GenIndex, j: GenIndex) -> ExponentVector {
        if let Some(hit) = self.cached_inv_conj(j, k) {
            return hit;
        }
        let result = match self.conj_tail(j, k) {
            None => self.generator(k),
            Some(tail) => {
                let tail_inv = self.inverse(tail);
                let conj = self.conj_vector_by_gen_pow(&tail_inv, j, &Int::from(-1));
                let mut acc = self.generator(k);
                self.mult_vector(&mut acc, &conj);
                acc
            }
        };
        self.store_inv_conj(j, k, result.clone());
        result
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::heisenberg;
    use super::*;

    fn vec3(a: i64, b: i64, c: i64) -> ExponentVector {
        ExponentVector::from_entries(vec![Int::from(a), Int::from(b), Int::from(c)])
    }

    /// 3x3 unitriangular integer matrix model: (p, q, r) stands for
    /// I + p*E12 + q*E23 + r*E13; multiplication gives the faithful witness
    /// for every Heisenberg assertion below.
    fn model_mul(x: (i64, i64, i64), y: (i64, i64, i64)) -> (i64, i64, i64) {
        (x.0 + y.0, x.1 + y.1, x.2 + y.2 + x.0 * y.1)
    }

    fn to_model(v: &ExponentVector) -> (i64, i64, i64) {
        // g1^p g2^q g3^r
        let p = v.get(0).to_i64().unwrap();
        let q = v.get(1).to_i64().unwrap();
        let r = v.get(2).to_i64().unwrap();
        model_mul(model_mul((p, 0, 0), (0, q, 0)), (0, 0, r))
    }

    #[test]
    fn collect_heisenberg_examples() {
        let h = heisenberg();
        // g2 * g1 -> (1,1,1), verified in the matrix model
        let w = Word::generator(1).concat(&Word::generator(0));
        let got = h.collect(&w).unwrap();
        assert_eq!(got, vec3(1, 1, 1));
        assert_eq!(to_model(&got), model_mul((0, 1, 0), (1, 0, 0)));

        // g1^-1 g2 g1 -> (0,1,1)
        let w = Word::generator_power(0, Int::from(-1))
            .concat(&Word::generator(1))
            .concat(&Word::generator(0));
        assert_eq!(h.collect(&w).unwrap(), vec3(0, 1, 1));

        assert!(h.collect(&Word::identity()).unwrap().is_zero());
    }

    #[test]
    fn multiply_heisenberg_examples() {
        let h = heisenberg();
        assert_eq!(h.multiply(&vec3(0, 1, 0), &vec3(1, 0, 0)), vec3(1, 1, 1));
        assert_eq!(h.multiply(&vec3(1, 0, 0), &vec3(0, 1, 0)), vec3(1, 1, 0));
        let a = vec3(2, -1, 3);
        assert_eq!(h.multiply(&a, &h.identity()), a);
    }

    #[test]
    fn multiplication_matches_matrix_model() {
        let h = heisenberg();
        let range = [-2i64, -1, 0, 1, 2];
        for &p in &range {
            for &q in &range {
                for &r in &[-1i64, 0, 2] {
                    for &p2 in &range {
                        for &q2 in &range {
                            let a = h.vector_from_exponents(&[
                                Int::from(p),
                                Int::from(q),
                                Int::from(r),
                            ]);
                            let b = h.vector_from_exponents(&[
                                Int::from(p2),
                                Int::from(q2),
                                Int::ZERO,
                            ]);
                            let prod = h.multiply(&a, &b);
                            assert_eq!(
                                to_model(&prod),
                                model_mul(to_model(&a), to_model(&b)),
                                "({p},{q},{r}) * ({p2},{q2},0)"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_and_power() {
        let h = heisenberg();
        let a = vec3(2, -3, 1);
        assert!(h.multiply(&a, &h.inverse(&a)).is_zero());
        assert!(h.multiply(&h.inverse(&a), &a).is_zero());
        assert!(h.inverse(&h.identity()).is_zero());

        let mut by_mult = h.identity();
        for _ in 0..7 {
            by_mult = h.multiply(&by_mult, &a);
        }
        assert_eq!(h.power(&a, &Int::from(7)), by_mult);
        assert_eq!(h.power(&a, &Int::from(-7)), h.inverse(&by_mult));
        assert!(h.power(&a, &Int::ZERO).is_zero());
    }

    #[test]
    fn commutator_of_generators_is_central_generator() {
        let h = heisenberg();
        // [g2, g1] = g3
        assert_eq!(
            h.commutator_elt(&vec3(0, 1, 0), &vec3(1, 0, 0)),
            vec3(0, 0, 1)
        );
        // left-normed with a single argument
        let a = vec3(1, 2, 0);
        assert_eq!(h.left_normed_commutator_elt(&[a.clone()]), a);
    }

    #[test]
    fn orders_in_finite_cyclic() {
        // Z/6 as a single generator of relative order 6.
        let p = PcPresentation::from_parts(
            1,
            vec![1],
            vec![RelativeOrder::Finite(Int::from(6))],
            Default::default(),
            Default::default(),
            vec![super::super::Definition::ImageOfFreeGen(0)],
            vec![],
        )
        .unwrap();
        let g = p.generator(0);
        assert_eq!(p.order_of(&g), Order::Finite(Int::from(6)));
        assert_eq!(p.order_of(&p.power(&g, &Int::from(2))), Order::Finite(Int::from(3)));
        assert_eq!(p.order_of(&p.identity()), Order::Finite(Int::ONE));
    }

    #[test]
    fn orders_in_heisenberg_are_infinite() {
        let h = heisenberg();
        assert_eq!(h.order_of(&vec3(0, 0, 1)), Order::Infinite);
        assert_eq!(h.order_of(&h.identity()), Order::Finite(Int::ONE));
    }

    #[test]
    fn evaluate_word_and_relator_agree() {
        let h = heisenberg();
        let images = vec![Some(vec3(1, 0, 0)), Some(vec3(0, 1, 0))];
        let rel = crate::fp::Relator::left_normed(vec![
            Word::generator(0),
            Word::generator(1),
        ]);
        let via_word = h.evaluate_word(&images, &rel.word).unwrap();
        let via_elts = h.evaluate_relator(&images, &rel).unwrap();
        assert_eq!(via_word, via_elts);
        assert_eq!(via_word, vec3(0, 0, -1)); // [g1, g2] = g3^-1
    }

    #[test]
    fn evaluate_word_missing_image_errors() {
        let h = heisenberg();
        let images = vec![Some(vec3(1, 0, 0)), None];
        let err = h.evaluate_word(&images, &Word::generator(1));
        assert!(matches!(err, Err(PcError::MissingImage { gen: 1 })));
    }

    #[test]
    fn finite_order_generator_with_tail_carries() {
        // <x, z | x^2 = z, z central infinite>: the group is Z presented
        // with a finite relative order; x^5 must collect to x z^2.
        let mut tails = std::collections::BTreeMap::new();
        let mut t = ExponentVector::zero(2);
        t.set(1, Int::ONE);
        tails.insert(0, t);
        let p = PcPresentation::from_parts(
            2,
            vec![1, 1],
            vec![
                RelativeOrder::Finite(Int::from(2)),
                RelativeOrder::Infinite,
            ],
            tails,
            Default::default(),
            vec![
                super::super::Definition::ImageOfFreeGen(0),
                super::super::Definition::PowerTailOf(0),
            ],
            vec![],
        )
        .unwrap();
        let x = p.generator(0);
        let x5 = p.power(&x, &Int::from(5));
        assert_eq!(x5, ExponentVector::from_entries(vec![Int::ONE, Int::from(2)]));
        assert_eq!(p.order_of(&x), Order::Infinite);
    }
}

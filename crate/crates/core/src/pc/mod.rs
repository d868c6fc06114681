//! Weighted polycyclic (nilpotent) presentations and exact element
//! arithmetic via collection from the left.
//!
//! A presentation has generators `g_1 < g_2 < ... < g_n` with nondecreasing
//! positive weights, a relative order per generator (finite orders come with
//! a power tail `g_i^{o_i} = tail` supported above `i`), and conjugation
//! tails `g_j^{g_i} = g_j * t(i,j)` for `i < j` supported above `j`. Every
//! element has a unique normal form `g_1^{e_1} ... g_n^{e_n}` with
//! `0 <= e_i < o_i` at finite-order generators.

mod collect;
mod consistency;

pub use consistency::Violation;

use std::collections::BTreeMap;
use std::sync::RwLock;

use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::int::Int;

pub type GenIndex = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelativeOrder {
    Finite(Int),
    Infinite,
}

impl RelativeOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, RelativeOrder::Finite(_))
    }

    pub fn finite(&self) -> Option<&Int> {
        match self {
            RelativeOrder::Finite(o) => Some(o),
            RelativeOrder::Infinite => None,
        }
    }
}

impl std::fmt::Display for RelativeOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelativeOrder::Finite(o) => write!(f, "{o}"),
            RelativeOrder::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for RelativeOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RelativeOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<RelativeOrder, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            Ok(RelativeOrder::Infinite)
        } else {
            text.parse::<Int>()
                .map(RelativeOrder::Finite)
                .map_err(D::Error::custom)
        }
    }
}

/// How a pc generator came to exist; the commutator tree rooted at the free
/// generators is recoverable by following definitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definition {
    /// Weight-1 generator: image of the free generator with this index.
    ImageOfFreeGen(usize),
    /// `g = [g_j, g_i]` with `j > i`, stored as `Commutator(j, i)`.
    Commutator(GenIndex, GenIndex),
    /// Generator introduced by the power relation of `g_i`.
    PowerTailOf(GenIndex),
}

/// Normal form of a group element as a dense integer exponent tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    entries: Vec<Int>,
}

impl ExponentVector {
    pub fn zero(n: usize) -> ExponentVector {
        ExponentVector {
            entries: vec![Int::ZERO; n],
        }
    }

    pub fn from_entries(entries: Vec<Int>) -> ExponentVector {
        ExponentVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Int {
        &self.entries[i]
    }

    pub(crate) fn set(&mut self, i: usize, v: Int) {
        self.entries[i] = v;
    }

    pub(crate) fn entry_mut(&mut self, i: usize) -> &mut Int {
        &mut self.entries[i]
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Int::is_zero)
    }

    /// Index of the first nonzero exponent.
    pub fn leading(&self) -> Option<usize> {
        self.entries.iter().position(|v| !v.is_zero())
    }

    /// Nonzero entries in ascending index order.
    pub fn syllables(&self) -> impl Iterator<Item = (usize, &Int)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v))
    }

    pub fn support(&self) -> Vec<usize> {
        self.syllables().map(|(i, _)| i).collect()
    }

    /// Extends with zeros to length `n` (used when a presentation grows).
    pub fn padded(&self, n: usize) -> ExponentVector {
        let mut entries = self.entries.clone();
        entries.resize(n, Int::ZERO);
        ExponentVector { entries }
    }

    /// Truncates or pads to length `n`; the caller asserts the dropped
    /// coordinates are zero.
    pub(crate) fn resized(&self, n: usize) -> ExponentVector {
        debug_assert!(self.entries.iter().skip(n).all(Int::is_zero));
        let mut entries = self.entries.clone();
        entries.resize(n, Int::ZERO);
        ExponentVector { entries }
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.entries.len())?;
        let nz: Vec<(usize, &Int)> = self.syllables().collect();
        map.serialize_entry("nz", &nz)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for ExponentVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ExponentVector, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            nz: Vec<(usize, Int)>,
        }
        let r = Repr::deserialize(d)?;
        let mut v = ExponentVector::zero(r.n);
        for (i, e) in r.nz {
            if i >= r.n {
                return Err(D::Error::custom("exponent index out of range"));
            }
            v.set(i, e);
        }
        Ok(v)
    }
}

/// Structural error from assembling a pc presentation.
#[derive(Debug, thiserror::Error)]
pub enum PcError {
    #[error("weights must be positive and nondecreasing")]
    BadWeights,
    #[error("relative order of generator {0} must be at least 2")]
    BadOrder(usize),
    #[error("power tail of generator {gen} has support at or below it")]
    BadPowerTail { gen: usize },
    #[error("conjugation tail ({i},{j}) has support at or below {j}")]
    BadConjTail { i: usize, j: usize },
    #[error("word references generator {gen}, presentation has {count}")]
    UnknownGenerator { gen: usize, count: usize },
    #[error("no image supplied for free generator {gen}")]
    MissingImage { gen: usize },
}

pub struct PcPresentation {
    gen_count: usize,
    weights: Vec<u32>,
    relative_orders: Vec<RelativeOrder>,
    /// Nontrivial power tails only; a finite-order generator without an
    /// entry has `g^o = 1`.
    power_tails: BTreeMap<GenIndex, ExponentVector>,
    /// Nontrivial conjugation tails only, keyed by `(i, j)` with `i < j`.
    conj_tails: BTreeMap<(GenIndex, GenIndex), ExponentVector>,
    definitions: Vec<Definition>,
    /// Named images of the original free generators.
    epimorphism: Vec<(String, ExponentVector)>,
    /// Lazily filled `g_k^{g_j^{-1}}` values; derived data only.
    inv_conj_cache: RwLock<BTreeMap<(GenIndex, GenIndex), ExponentVector>>,
}

impl Clone for PcPresentation {
    fn clone(&self) -> PcPresentation {
        PcPresentation {
            gen_count: self.gen_count,
            weights: self.weights.clone(),
            relative_orders: self.relative_orders.clone(),
            power_tails: self.power_tails.clone(),
            conj_tails: self.conj_tails.clone(),
            definitions: self.definitions.clone(),
            epimorphism: self.epimorphism.clone(),
            inv_conj_cache: RwLock::new(BTreeMap::new()),
        }
    }
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &PcPresentation) -> bool {
        self.gen_count == other.gen_count
            && self.weights == other.weights
            && self.relative_orders == other.relative_orders
            && self.power_tails == other.power_tails
            && self.conj_tails == other.conj_tails
            && self.definitions == other.definitions
            && self.epimorphism == other.epimorphism
    }
}

impl Eq for PcPresentation {}

impl std::fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PcPresentation")
            .field("gen_count", &self.gen_count)
            .field("weights", &self.weights)
            .field("relative_orders", &self.relative_orders)
            .field("power_tails", &self.power_tails)
            .field("conj_tails", &self.conj_tails)
            .field("definitions", &self.definitions)
            .finish_non_exhaustive()
    }
}

impl PcPresentation {
    /// Assembles a presentation, validating the structural invariants
    /// (weight monotonicity, tail supports, order bounds). Consistency is a
    /// semantic property checked separately via [`PcPresentation::consistency_check`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        gen_count: usize,
        weights: Vec<u32>,
        relative_orders: Vec<RelativeOrder>,
        power_tails: BTreeMap<GenIndex, ExponentVector>,
        conj_tails: BTreeMap<(GenIndex, GenIndex), ExponentVector>,
        definitions: Vec<Definition>,
        epimorphism: Vec<(String, ExponentVector)>,
    ) -> Result<PcPresentation, PcError> {
        if weights.len() != gen_count
            || relative_orders.len() != gen_count
            || definitions.len() != gen_count
        {
            return Err(PcError::BadWeights);
        }
        if weights.windows(2).any(|w| w[0] > w[1]) || weights.iter().any(|&w| w == 0) {
            return Err(PcError::BadWeights);
        }
        for (i, o) in relative_orders.iter().enumerate() {
            if let RelativeOrder::Finite(o) = o {
                if *o < Int::from(2) {
                    return Err(PcError::BadOrder(i));
                }
            }
        }
        let mut power_tails = power_tails;
        let mut conj_tails = conj_tails;
        power_tails.retain(|_, t| !t.is_zero());
        conj_tails.retain(|_, t| !t.is_zero());
        for (&i, t) in &power_tails {
            if t.len() != gen_count || t.leading().is_some_and(|l| l <= i) {
                return Err(PcError::BadPowerTail { gen: i });
            }
        }
        for (&(i, j), t) in &conj_tails {
            if i >= j || t.len() != gen_count || t.leading().is_some_and(|l| l <= j) {
                return Err(PcError::BadConjTail { i, j });
            }
        }
        Ok(PcPresentation {
            gen_count,
            weights,
            relative_orders,
            power_tails,
            conj_tails,
            definitions,
            epimorphism,
            inv_conj_cache: RwLock::new(BTreeMap::new()),
        })
    }

    /// The free abelian presentation of the given rank (no tails).
    pub fn free_abelian(names: &[&str]) -> PcPresentation {
        let n = names.len();
        let epi = names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let mut v = ExponentVector::zero(n);
                v.set(i, Int::ONE);
                (name.to_string(), v)
            })
            .collect();
        PcPresentation::from_parts(
            n,
            vec![1; n],
            vec![RelativeOrder::Infinite; n],
            BTreeMap::new(),
            BTreeMap::new(),
            (0..n).map(Definition::ImageOfFreeGen).collect(),
            epi,
        )
        .expect("free abelian presentation is structurally valid")
    }

    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    pub fn weight(&self, i: GenIndex) -> u32 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Nilpotency class: the largest generator weight (0 if trivial).
    pub fn class(&self) -> u32 {
        self.weights.last().copied().unwrap_or(0)
    }

    pub fn relative_order(&self, i: GenIndex) -> &RelativeOrder {
        &self.relative_orders[i]
    }

    pub fn relative_orders(&self) -> &[RelativeOrder] {
        &self.relative_orders
    }

    pub fn power_tail(&self, i: GenIndex) -> Option<&ExponentVector> {
        self.power_tails.get(&i)
    }

    pub fn conj_tail(&self, i: GenIndex, j: GenIndex) -> Option<&ExponentVector> {
        self.conj_tails.get(&(i, j))
    }

    pub fn conj_tails(&self) -> &BTreeMap<(GenIndex, GenIndex), ExponentVector> {
        &self.conj_tails
    }

    pub fn definition(&self, i: GenIndex) -> &Definition {
        &self.definitions[i]
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    pub fn epimorphism(&self) -> &[(String, ExponentVector)] {
        &self.epimorphism
    }

    pub fn epimorphism_image(&self, name: &str) -> Option<&ExponentVector> {
        self.epimorphism
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn identity(&self) -> ExponentVector {
        ExponentVector::zero(self.gen_count)
    }

    pub fn generator(&self, i: GenIndex) -> ExponentVector {
        let mut v = self.identity();
        v.set(i, Int::ONE);
        v
    }

    pub fn generators_of_weight(&self, w: u32) -> Vec<GenIndex> {
        (0..self.gen_count)
            .filter(|&i| self.weights[i] == w)
            .collect()
    }

    /// Minimal weight over the support of `v`, `None` for the identity.
    pub fn weight_of(&self, v: &ExponentVector) -> Option<u32> {
        v.leading().map(|l| self.weights[l])
    }

    pub(crate) fn cached_inv_conj(&self, j: GenIndex, k: GenIndex) -> Option<ExponentVector> {
        self.inv_conj_cache
            .read()
            .expect("inverse-conjugate cache poisoned")
            .get(&(j, k))
            .cloned()
    }

    pub(crate) fn store_inv_conj(&self, j: GenIndex, k: GenIndex, v: ExponentVector) {
        self.inv_conj_cache
            .write()
            .expect("inverse-conjugate cache poisoned")
            .insert((j, k), v);
    }

    /// Canonical JSON document: fixed field order, integers as decimal
    /// strings, maps as sorted arrays. Byte-identical across runs for equal
    /// presentations.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serialization cannot fail")
    }

    /// Canonical JSON with the epimorphism generator names blanked, so that
    /// presentation comparison sees structure and images but not spelling.
    pub fn structural_json(&self) -> String {
        let mut copy = self.clone();
        for (name, _) in copy.epimorphism.iter_mut() {
            *name = String::new();
        }
        copy.canonical_json()
    }
}

impl Serialize for PcPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct PowerTails<'a>(&'a BTreeMap<GenIndex, ExponentVector>);
        impl Serialize for PowerTails<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (i, t) in self.0 {
                    seq.serialize_element(&(i, t))?;
                }
                seq.end()
            }
        }
        struct ConjTails<'a>(&'a BTreeMap<(GenIndex, GenIndex), ExponentVector>);
        impl Serialize for ConjTails<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (&(i, j), t) in self.0 {
                    seq.serialize_element(&(i, j, t))?;
                }
                seq.end()
            }
        }
        let mut map = s.serialize_map(Some(7))?;
        map.serialize_entry("genCount", &self.gen_count)?;
        map.serialize_entry("weights", &self.weights)?;
        map.serialize_entry("relativeOrders", &self.relative_orders)?;
        map.serialize_entry("powerTails", &PowerTails(&self.power_tails))?;
        map.serialize_entry("conjTails", &ConjTails(&self.conj_tails))?;
        map.serialize_entry("definitions", &self.definitions)?;
        map.serialize_entry("epimorphism", &self.epimorphism)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for PcPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<PcPresentation, D::Error> {
        #[derive(Deserialize)]
        #[serde(rename_all = "camelCase")]
        struct Repr {
            gen_count: usize,
            weights: Vec<u32>,
            relative_orders: Vec<RelativeOrder>,
            power_tails: Vec<(GenIndex, ExponentVector)>,
            conj_tails: Vec<(GenIndex, GenIndex, ExponentVector)>,
            definitions: Vec<Definition>,
            epimorphism: Vec<(String, ExponentVector)>,
        }
        let r = Repr::deserialize(d)?;
        PcPresentation::from_parts(
            r.gen_count,
            r.weights,
            r.relative_orders,
            r.power_tails.into_iter().collect(),
            r.conj_tails
                .into_iter()
                .map(|(i, j, t)| ((i, j), t))
                .collect(),
            r.definitions,
            r.epimorphism,
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The discrete Heisenberg group: g2^{g1} = g2 g3, g3 central.
    pub(crate) fn heisenberg() -> PcPresentation {
        let mut conj = BTreeMap::new();
        let mut tail = ExponentVector::zero(3);
        tail.set(2, Int::ONE);
        conj.insert((0, 1), tail);
        PcPresentation::from_parts(
            3,
            vec![1, 1, 2],
            vec![RelativeOrder::Infinite; 3],
            BTreeMap::new(),
            conj,
            vec![
                Definition::ImageOfFreeGen(0),
                Definition::ImageOfFreeGen(1),
                Definition::Commutator(1, 0),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn structural_validation_rejects_bad_tails() {
        let mut conj = BTreeMap::new();
        let mut t = ExponentVector::zero(2);
        t.set(1, Int::ONE);
        conj.insert((0, 1), t);
        // tail of (0,1) supported at index 1 = j: invalid
        let err = PcPresentation::from_parts(
            2,
            vec![1, 1],
            vec![RelativeOrder::Infinite; 2],
            BTreeMap::new(),
            conj,
            vec![Definition::ImageOfFreeGen(0), Definition::ImageOfFreeGen(1)],
            vec![],
        );
        assert!(matches!(err, Err(PcError::BadConjTail { i: 0, j: 1 })));
    }

    #[test]
    fn canonical_json_is_stable() {
        let h = heisenberg();
        let a = h.canonical_json();
        let b = h.clone().canonical_json();
        assert_eq!(a, b);
        let back: PcPresentation = serde_json::from_str(&a).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn exponent_vector_serde_round_trip() {
        let mut v = ExponentVector::zero(4);
        v.set(1, Int::from(-5));
        v.set(3, "900000000000000000000".parse().unwrap());
        let js = serde_json::to_string(&v).unwrap();
        let back: ExponentVector = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn class_and_weight_queries() {
        let h = heisenberg();
        assert_eq!(h.class(), 2);
        assert_eq!(h.generators_of_weight(1), vec![0, 1]);
        assert_eq!(h.weight_of(&h.generator(2)), Some(2));
        assert_eq!(h.weight_of(&h.identity()), None);
    }
}

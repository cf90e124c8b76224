//! Standard monomials of U(L), the straightening algorithm to PBW normal
//! form, left multiplication by degree-1 elements, and the symmetric-algebra
//! splitting enumerator that drives the convolution bracket.

use std::collections::BTreeMap;
use std::fmt;

use dashmap::DashMap;
use smallvec::SmallVec;

use crate::lie::{LieAlgebra, Vector};
use crate::scalar::Scalar;

type Letters = SmallVec<[u16; 8]>;

/// A standard monomial: basis indices sorted nondecreasing. The empty
/// monomial is the unit of U(L). Ordering is degree-then-lexicographic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StdMonomial {
    factors: Letters,
}

impl StdMonomial {
    pub fn one() -> Self {
        StdMonomial { factors: Letters::new() }
    }

    /// Builds a monomial from already-sorted factors. Panics on disorder.
    pub fn from_sorted(factors: impl IntoIterator<Item = u16>) -> Self {
        let factors: Letters = factors.into_iter().collect();
        assert!(
            factors.windows(2).all(|w| w[0] <= w[1]),
            "standard monomial factors must be nondecreasing"
        );
        StdMonomial { factors }
    }

    /// Sorts arbitrary letters into the standard monomial on the same multiset.
    pub fn from_multiset(letters: impl IntoIterator<Item = u16>) -> Self {
        let mut factors: Letters = letters.into_iter().collect();
        factors.sort_unstable();
        StdMonomial { factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[u16] {
        &self.factors
    }

    pub fn min_factor(&self) -> Option<u16> {
        self.factors.first().copied()
    }

    /// Splits off the minimal factor: `e_j * R`.
    pub fn split_first(&self) -> Option<(u16, StdMonomial)> {
        let (&first, rest) = self.factors.split_first()?;
        Some((first, StdMonomial { factors: rest.iter().copied().collect() }))
    }

    /// Product in the symmetric algebra: multiset union.
    pub fn product(&self, other: &StdMonomial) -> StdMonomial {
        let mut factors = Letters::with_capacity(self.degree() + other.degree());
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x <= y {
                        factors.push(x);
                        a.next();
                    } else {
                        factors.push(y);
                        b.next();
                    }
                }
                (Some(_), None) => {
                    factors.extend(a.cloned());
                    break;
                }
                (None, _) => {
                    factors.extend(b.cloned());
                    break;
                }
            }
        }
        StdMonomial { factors }
    }

    /// Prepends a letter; panics unless the result stays standard.
    pub fn prefixed(&self, letter: u16) -> StdMonomial {
        assert!(
            self.min_factor().is_none_or(|m| letter <= m),
            "prefix letter must not exceed the minimal factor"
        );
        let mut factors = Letters::with_capacity(self.degree() + 1);
        factors.push(letter);
        factors.extend(self.factors.iter().copied());
        StdMonomial { factors }
    }

    /// Distinct letters with multiplicities.
    pub fn multiplicities(&self) -> Vec<(u16, usize)> {
        let mut out: Vec<(u16, usize)> = Vec::new();
        for &l in &self.factors {
            match out.last_mut() {
                Some((letter, count)) if *letter == l => *count += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Text form for reports: basis names with caret powers, `1` when empty.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.multiplicities()
            .iter()
            .map(|&(l, m)| {
                let name = &names[l as usize];
                if m == 1 { name.clone() } else { format!("{name}^{m}") }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for StdMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for StdMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for StdMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.multiplicities().iter().map(|&(l, m)| {
                if m == 1 { format!("e{l}") } else { format!("e{l}^{m}") }
            }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An unnormalized product of basis letters in arbitrary order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    factors: Vec<u16>,
}

impl Word {
    pub fn new(factors: impl IntoIterator<Item = u16>) -> Self {
        Word { factors: factors.into_iter().collect() }
    }

    pub fn factors(&self) -> &[u16] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// A finite K-linear combination of standard monomials: an element of U(L)
/// in PBW normal form. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UElement {
    terms: BTreeMap<StdMonomial, Scalar>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement { terms: BTreeMap::new() }
    }

    pub fn monomial(m: StdMonomial, c: Scalar) -> Self {
        let mut e = UElement::zero();
        e.add_term(m, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &StdMonomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StdMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: StdMonomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &UElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in other.iter() {
            self.add_term(m.clone(), &(x * c));
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(StdMonomial::degree).max().unwrap_or(0)
    }
}

impl fmt::Debug for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(m, c)| if c.is_one() { format!("{m:?}") } else { format!("({c}){m:?}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Straightening context for U(L): owns the algebra and a concurrent memo
/// table keyed by unnormalized words. Safe for shared concurrent use once
/// constructed; normalization is pure.
pub struct Envelope {
    algebra: LieAlgebra,
    memo: DashMap<Vec<u16>, UElement>,
}

impl Envelope {
    /// Callers are expected to have validated the algebra; straightening is
    /// confluent only under the Jacobi identity.
    pub fn new(algebra: LieAlgebra) -> Self {
        Envelope { algebra, memo: DashMap::new() }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// PBW normal form: repeatedly rewrites the leftmost adjacent inversion
    /// `e_a e_b` (a > b) as `e_b e_a + [e_a, e_b]` until every word is sorted.
    pub fn normalize_word(&self, w: &Word) -> UElement {
        self.normalize(w.factors())
    }

    fn normalize(&self, w: &[u16]) -> UElement {
        let field = self.algebra.field();
        let inversion = w.windows(2).position(|pair| pair[0] > pair[1]);
        let Some(t) = inversion else {
            return UElement::monomial(
                StdMonomial::from_sorted(w.iter().copied()),
                field.one(),
            );
        };
        if let Some(hit) = self.memo.get(w) {
            return hit.clone();
        }
        let (a, b) = (w[t], w[t + 1]);
        let mut swapped = w.to_vec();
        swapped.swap(t, t + 1);
        let mut result = self.normalize(&swapped);
        // [e_a, e_b] with a > b, expanded over structure constants.
        let bracket = self.algebra.bracket_basis(a as usize, b as usize);
        for (k, c) in bracket.iter() {
            let mut shorter = Vec::with_capacity(w.len() - 1);
            shorter.extend_from_slice(&w[..t]);
            shorter.push(k as u16);
            shorter.extend_from_slice(&w[t + 2..]);
            result.add_scaled(&self.normalize(&shorter), c);
        }
        self.memo.insert(w.to_vec(), result.clone());
        result
    }

    /// `u * E` in U(L), extended linearly over the coordinates of u.
    pub fn left_mul(&self, u: &Vector, e: &StdMonomial) -> UElement {
        assert_eq!(u.dim(), self.algebra.dim(), "element dimension mismatch");
        let mut out = UElement::zero();
        for (i, c) in u.iter() {
            out.add_scaled(&self.left_mul_basis(i as u16, e), c);
        }
        out
    }

    /// `e_i * E` in U(L).
    pub fn left_mul_basis(&self, letter: u16, e: &StdMonomial) -> UElement {
        if e.min_factor().is_none_or(|m| letter <= m) {
            return UElement::monomial(e.prefixed(letter), self.algebra.field().one());
        }
        let mut word = Vec::with_capacity(e.degree() + 1);
        word.push(letter);
        word.extend_from_slice(e.factors());
        self.normalize(&word)
    }
}

/// All ordered pairs `(I, J)` of standard monomials with `I * J = E` in the
/// symmetric algebra, each pair exactly once. The count is the product of
/// `m_i + 1` over the multiplicities of E.
pub fn splittings(e: &StdMonomial) -> Vec<(StdMonomial, StdMonomial)> {
    let mults = e.multiplicities();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = vec![0; mults.len()];
    loop {
        let mut left = Letters::new();
        let mut right = Letters::new();
        for (t, &(letter, m)) in mults.iter().enumerate() {
            for _ in 0..chosen[t] {
                left.push(letter);
            }
            for _ in 0..m - chosen[t] {
                right.push(letter);
            }
        }
        out.push((StdMonomial { factors: left }, StdMonomial { factors: right }));
        // Odometer over 0..=m_t per distinct letter.
        let mut t = 0;
        loop {
            if t == mults.len() {
                return out;
            }
            if chosen[t] < mults[t].1 {
                chosen[t] += 1;
                break;
            }
            chosen[t] = 0;
            t += 1;
        }
    }
}

/// Multiplicity of the ordered splitting `(left, right)` inside the
/// coproduct of U(L): per distinct letter, the number of ways to choose
/// which copies go left, `C(m_left + m_right, m_left)`.
pub fn splitting_weight(left: &StdMonomial, right: &StdMonomial) -> u64 {
    let mut weight = 1u64;
    let (lm, rm) = (left.multiplicities(), right.multiplicities());
    let (mut a, mut b) = (lm.iter().peekable(), rm.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some(&&(la, ma)), Some(&&(lb, mb))) => {
                if la == lb {
                    weight *= binomial(ma + mb, ma) as u64;
                    a.next();
                    b.next();
                } else if la < lb {
                    a.next();
                } else {
                    b.next();
                }
            }
            _ => return weight,
        }
    }
}

/// All standard monomials of degree at most `max_degree` over `dim` letters,
/// in degree-then-lexicographic order. The count is C(dim + D, D).
pub fn monomials_up_to(dim: usize, max_degree: usize) -> Vec<StdMonomial> {
    let mut out = vec![StdMonomial::one()];
    let mut current: Vec<StdMonomial> = vec![StdMonomial::one()];
    for _ in 1..=max_degree {
        let mut next = Vec::new();
        for m in &current {
            let lo = m.factors().last().copied().unwrap_or(0);
            for letter in lo..dim as u16 {
                let mut factors: Letters = m.factors().iter().copied().collect();
                factors.push(letter);
                next.push(StdMonomial { factors });
            }
        }
        // Suffix extension enumerates each degree in lexicographic order.
        next.sort();
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

/// Binomial coefficient as usize; used for enumeration cross-checks.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for t in 0..k.min(n - k) {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

//! Exact arithmetic in the monoid algebra `Z[S]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monoid::{ElementId, Monoid};

/// A finite integer combination of monoid elements. Zero coefficients are
/// never stored, so equality is coefficient-wise equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    tag: u64,
    coeffs: BTreeMap<ElementId, BigInt>,
}

impl AlgebraElement {
    pub fn coefficient(&self, x: ElementId) -> BigInt {
        self.coeffs.get(&x).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in element-id order.
    pub fn support(&self) -> Vec<ElementId> {
        self.coeffs.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ElementId, &BigInt)> {
        self.coeffs.iter().map(|(&x, c)| (x, c))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(word, coefficient)` pairs sorted by word in shortlex order.
    pub fn word_terms(&self, m: &Monoid) -> Vec<(Vec<usize>, BigInt)> {
        let mut out: Vec<(Vec<usize>, BigInt)> = self.terms().map(|(x, c)| (m.word(x).to_vec(), c.clone())).collect();
        out.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Human-readable form such as `1 - a - b + ab`.
    pub fn display(&self, m: &Monoid) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (word, c)) in self.word_terms(m).into_iter().enumerate() {
            let negative = c < BigInt::zero();
            let magnitude = if negative { -c } else { c };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let w = m.render(&word);
            if magnitude.is_one() {
                out.push_str(&w);
            } else if word.is_empty() {
                out.push_str(&magnitude.to_string());
            } else {
                out.push_str(&format!("{magnitude}*{w}"));
            }
        }
        out
    }
}

/// Arithmetic context tied to one monoid.
#[derive(Clone, Copy, Debug)]
pub struct Algebra<'m> {
    monoid: &'m Monoid,
}

/// Outcome of raising an element to successive powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerOutcome {
    /// `power = a^exponent` with `a^(exponent+1) = a^exponent`, the least such exponent.
    Stable { power: AlgebraElement, exponent: usize },
    /// No `N <= cap` satisfies `a^(N+1) = a^N`.
    NonStabilizing { cap: usize, last: AlgebraElement },
}

impl PowerOutcome {
    pub fn stable(self) -> Option<(AlgebraElement, usize)> {
        match self {
            PowerOutcome::Stable { power, exponent } => Some((power, exponent)),
            PowerOutcome::NonStabilizing { .. } => None,
        }
    }
}

impl<'m> Algebra<'m> {
    pub fn new(monoid: &'m Monoid) -> Self {
        Algebra { monoid }
    }

    pub fn monoid(&self) -> &'m Monoid {
        self.monoid
    }

    fn wrap(&self, coeffs: BTreeMap<ElementId, BigInt>) -> AlgebraElement {
        AlgebraElement { tag: self.monoid.tag(), coeffs }
    }

    fn owns(&self, a: &AlgebraElement) -> Result<()> {
        if a.tag == self.monoid.tag() {
            Ok(())
        } else {
            Err(Error::MonoidMismatch)
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        self.wrap(BTreeMap::new())
    }

    pub fn one(&self) -> AlgebraElement {
        self.basis(self.monoid.identity())
    }

    pub fn basis(&self, x: ElementId) -> AlgebraElement {
        self.term(x, BigInt::one())
    }

    pub fn term(&self, x: ElementId, coeff: BigInt) -> AlgebraElement {
        self.from_terms([(x, coeff)])
    }

    /// Sums the given terms, combining repeated elements.
    pub fn from_terms<I>(&self, terms: I) -> AlgebraElement
    where
        I: IntoIterator<Item = (ElementId, BigInt)>,
    {
        let mut coeffs: BTreeMap<ElementId, BigInt> = BTreeMap::new();
        for (x, c) in terms {
            assert!(self.monoid.contains(x), "element {x} outside the monoid");
            *coeffs.entry(x).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        self.wrap(coeffs)
    }

    /// `1 - x` for a monoid element `x`.
    pub fn one_minus(&self, x: ElementId) -> AlgebraElement {
        self.from_terms([(self.monoid.identity(), BigInt::one()), (x, -BigInt::one())])
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.owns(a)?;
        self.owns(b)?;
        let mut coeffs = a.coeffs.clone();
        for (x, c) in &b.coeffs {
            *coeffs.entry(*x).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(self.wrap(coeffs))
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(a, &self.scale(b, &-BigInt::one())?)
    }

    pub fn scale(&self, a: &AlgebraElement, k: &BigInt) -> Result<AlgebraElement> {
        self.owns(a)?;
        if k.is_zero() {
            return Ok(self.zero());
        }
        Ok(self.wrap(a.coeffs.iter().map(|(&x, c)| (x, c * k)).collect()))
    }

    pub fn sum<'a, I>(&self, items: I) -> Result<AlgebraElement>
    where
        I: IntoIterator<Item = &'a AlgebraElement>,
    {
        items.into_iter().try_fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Bilinear extension of the monoid product.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.owns(a)?;
        self.owns(b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero());
        }
        let m = self.monoid;
        let mut dense: Vec<BigInt> = vec![BigInt::zero(); m.size()];
        let mut touched = vec![false; m.size()];
        for (&x, cx) in &a.coeffs {
            for (&y, cy) in &b.coeffs {
                let xy = m.mul(x, y).index();
                touched[xy] = true;
                let slot = &mut dense[xy];
                if cx.is_one() {
                    *slot += cy;
                } else {
                    *slot += cx * cy;
                }
            }
        }
        let coeffs = dense
            .into_iter()
            .enumerate()
            .filter(|(i, c)| touched[*i] && !c.is_zero())
            .map(|(i, c)| (ElementId::new(i), c))
            .collect();
        Ok(self.wrap(coeffs))
    }

    /// Product of the factors in the order given; the empty product is `1`.
    pub fn product<'a, I>(&self, factors: I) -> Result<AlgebraElement>
    where
        I: IntoIterator<Item = &'a AlgebraElement>,
    {
        factors.into_iter().try_fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, a: &AlgebraElement, exponent: usize) -> Result<AlgebraElement> {
        let mut acc = self.one();
        for _ in 0..exponent {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Finds the least `N >= 1` (up to `cap`) with `a^(N+1) = a^N`.
    pub fn power_until_stable(&self, a: &AlgebraElement, cap: usize) -> Result<PowerOutcome> {
        self.owns(a)?;
        let mut current = a.clone();
        for exponent in 1..=cap {
            let next = self.mul(&current, a)?;
            if next == current {
                return Ok(PowerOutcome::Stable { power: current, exponent });
            }
            current = next;
        }
        Ok(PowerOutcome::NonStabilizing { cap, last: current })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{free_lrb, hecke_a, hecke_element};
    use crate::monoid::DEFAULT_CAP;

    fn lrb() -> Monoid {
        free_lrb(2, DEFAULT_CAP).unwrap().with_generator_names(vec!["a".into(), "b".into()]).unwrap()
    }

    fn parse(alg: &Algebra, text: &[(&str, i64)]) -> AlgebraElement {
        let m = alg.monoid();
        alg.from_terms(text.iter().map(|&(w, c)| (m.element_of(w).unwrap(), BigInt::from(c))))
    }

    #[test]
    fn linear_operations() {
        let m = lrb();
        let alg = Algebra::new(&m);
        let a = m.element_of("a").unwrap();
        let one_minus_a = alg.one_minus(a);
        assert_eq!(alg.add(&one_minus_a, &alg.basis(a)).unwrap(), alg.one());
        assert!(alg.scale(&one_minus_a, &BigInt::zero()).unwrap().is_zero());
        assert!(alg.sub(&one_minus_a, &one_minus_a).unwrap().is_zero());
        assert_eq!(one_minus_a.coefficient(m.identity()), BigInt::one());
        assert!(alg.zero().support().is_empty());
    }

    #[test]
    fn b_empty_is_idempotent_in_free_lrb() {
        let m = lrb();
        let alg = Algebra::new(&m);
        let [a, b] = ["a", "b"].map(|w| m.element_of(w).unwrap());
        let b_empty = alg.mul(&alg.one_minus(a), &alg.one_minus(b)).unwrap();
        assert_eq!(b_empty, parse(&alg, &[("1", 1), ("a", -1), ("b", -1), ("ab", 1)]));
        assert_eq!(alg.mul(&b_empty, &b_empty).unwrap(), b_empty);
        assert_eq!(alg.mul(&alg.one(), &b_empty).unwrap(), b_empty);
        assert_eq!(b_empty.display(&m), "1 - a - b + ab");
        match alg.power_until_stable(&b_empty, 5).unwrap() {
            PowerOutcome::Stable { power, exponent } => {
                assert_eq!(power, b_empty);
                assert_eq!(exponent, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hecke_product_expansion() {
        let m = hecke_a(5, DEFAULT_CAP).unwrap();
        let alg = Algebra::new(&m);
        let h = |w| hecke_element(&m, w).unwrap();
        let lhs = alg.mul(&alg.one_minus(h("4")), &alg.basis(h("123121"))).unwrap();
        let rhs = alg.from_terms([(h("123121"), BigInt::one()), (h("4123121"), -BigInt::one())]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_two_group_never_stabilizes() {
        let m = Monoid::from_table(&[vec![0, 1], vec![1, 0]], 0, &[1]).unwrap();
        let alg = Algebra::new(&m);
        let x = m.generators()[0];
        let one_minus_x = alg.one_minus(x);
        for k in 1..10usize {
            let expected = alg.scale(&one_minus_x, &(BigInt::one() << (k - 1))).unwrap();
            assert_eq!(alg.pow(&one_minus_x, k).unwrap(), expected);
        }
        assert!(matches!(
            alg.power_until_stable(&one_minus_x, 30).unwrap(),
            PowerOutcome::NonStabilizing { cap: 30, .. }
        ));
    }

    #[test]
    fn rejects_elements_of_other_monoids() {
        let m1 = lrb();
        let m2 = lrb();
        let a1 = Algebra::new(&m1);
        let a2 = Algebra::new(&m2);
        assert!(matches!(a1.mul(&a1.one(), &a2.one()), Err(Error::MonoidMismatch)));
        assert!(matches!(a1.add(&a2.one(), &a1.one()), Err(Error::MonoidMismatch)));
        // Clones share the tag.
        let m3 = m1.clone();
        assert!(Algebra::new(&m3).mul(&a1.one(), &a1.one()).is_ok());
    }
}

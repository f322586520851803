//! Finite monoids given by generators.
//!
//! A [`Monoid`] is an immutable multiplication table over dense element ids.
//! Ids are assigned in breadth-first discovery order from the identity
//! (processing right products `x * g` in generator order), so id order is
//! the shortlex order of the elements' minimal generator words and element
//! `0` is always the identity.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Tables up to this size have associativity checked on all triples.
pub const DEFAULT_ASSOCIATIVITY_BOUND: usize = 256;

static NEXT_TAG: AtomicU64 = AtomicU64::new(1);

/// Dense handle into a monoid's element table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    pub fn new(index: usize) -> Self {
        ElementId(u32::try_from(index).expect("element index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A full transformation of `{0, .., degree - 1}`, acting on the right of
/// points: the product `s * t` first applies `s`, then `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<usize>,
}

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        if let Some((point, &image)) = images.iter().enumerate().find(|(_, &i)| i >= degree) {
            return Err(Error::InvalidImage { point, image, degree });
        }
        Ok(Transformation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Transformation { images: (0..degree).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// `result[p] = other[self[p]]`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Transformation) -> Transformation {
        Transformation { images: self.images.iter().map(|&p| other.images[p]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Result of a breadth-first closure over canonical element forms.
struct Closure<K> {
    elements: Vec<K>,
    /// `right[x][g]` is the id of `x * generator_g`.
    right: Vec<Vec<u32>>,
    parent: Vec<u32>,
    last: Vec<u32>,
}

fn bfs_closure<K, F>(identity: K, generators: &[K], mul: F, cap: usize) -> Result<Closure<K>>
where
    K: Clone + Eq + Hash,
    F: Fn(&K, &K) -> K,
{
    let mut index: HashMap<K, u32> = HashMap::new();
    let mut elements = vec![identity.clone()];
    let mut parent = vec![0];
    let mut last = vec![u32::MAX];
    let mut right: Vec<Vec<u32>> = Vec::new();
    index.insert(identity, 0);

    let mut head = 0;
    while head < elements.len() {
        let mut row = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            let product = mul(&elements[head], g);
            let id = match index.entry(product) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded { cap, partial: elements.len() + 1 });
                    }
                    let id = elements.len() as u32;
                    elements.push(e.key().clone());
                    e.insert(id);
                    parent.push(head as u32);
                    last.push(gi as u32);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        head += 1;
    }
    Ok(Closure { elements, right, parent, last })
}

/// An immutable finite monoid with a fixed, ordered generating list.
#[derive(Clone, Debug)]
pub struct Monoid {
    tag: u64,
    size: usize,
    table: Vec<u32>,
    generators: Vec<ElementId>,
    names: Vec<String>,
    words: Vec<Vec<usize>>,
    transformations: Option<Vec<Transformation>>,
    origin: Option<Vec<usize>>,
    associativity_verified: bool,
}

impl Monoid {
    /// Closes a set of transformations under composition, starting from the
    /// identity transformation.
    pub fn close(generators: &[Transformation], cap: usize) -> Result<Monoid> {
        let degree = generators.first().ok_or(Error::NoGenerators)?.degree();
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let closure = bfs_closure(Transformation::identity(degree), generators, |x, g| x.compose_unchecked(g), cap)?;
        let size = closure.elements.len();
        let generator_ids: Vec<ElementId> = closure.right[0].iter().map(|&id| ElementId(id)).collect();

        // Column y is filled from column parent(y): x * y = (x * parent(y)) * last(y).
        let mut table = vec![0u32; size * size];
        for x in 0..size {
            table[x * size] = x as u32;
        }
        for y in 1..size {
            let p = closure.parent[y] as usize;
            let g = closure.last[y] as usize;
            for x in 0..size {
                let xp = table[x * size + p] as usize;
                table[x * size + y] = closure.right[xp][g];
            }
        }

        Ok(Monoid {
            tag: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
            size,
            table,
            names: default_names(generator_ids.len()),
            generators: generator_ids,
            words: words_from_tree(&closure.parent, &closure.last),
            transformations: Some(closure.elements),
            origin: None,
            associativity_verified: true,
        })
    }

    /// Wraps an explicit multiplication table, `table[x][y] = x * y`.
    pub fn from_table(table: &[Vec<usize>], identity: usize, generators: &[usize]) -> Result<Monoid> {
        Self::from_table_with_bound(table, identity, generators, DEFAULT_ASSOCIATIVITY_BOUND)
    }

    /// Like [`Monoid::from_table`], checking associativity exhaustively only
    /// when the table has at most `associativity_bound` rows.
    pub fn from_table_with_bound(
        table: &[Vec<usize>],
        identity: usize,
        generators: &[usize],
        associativity_bound: usize,
    ) -> Result<Monoid> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {x} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidTable(format!("row {x} contains out-of-range entry {bad}")));
            }
        }
        if identity >= n {
            return Err(Error::InvalidElement(identity));
        }
        for (x, row) in table.iter().enumerate() {
            if table[identity][x] != x || row[identity] != x {
                return Err(Error::IdentityAxiom { element: x });
            }
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::InvalidElement(g));
        }
        let associativity_verified = n <= associativity_bound;
        if associativity_verified {
            for x in 0..n {
                for y in 0..n {
                    let xy = table[x][y];
                    for z in 0..n {
                        if table[xy][z] != table[x][table[y][z]] {
                            return Err(Error::NotAssociative { x, y, z });
                        }
                    }
                }
            }
        }

        let closure = bfs_closure(identity, generators, |&x, &g| table[x][g], usize::MAX)?;
        if closure.elements.len() != n {
            return Err(Error::NotGenerating { reached: closure.elements.len(), size: n });
        }
        let mut new_id = vec![0u32; n];
        for (id, &row) in closure.elements.iter().enumerate() {
            new_id[row] = id as u32;
        }
        let mut packed = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let (ox, oy) = (closure.elements[x], closure.elements[y]);
                packed[x * n + y] = new_id[table[ox][oy]];
            }
        }
        let generator_ids: Vec<ElementId> = generators.iter().map(|&g| ElementId(new_id[g])).collect();

        Ok(Monoid {
            tag: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
            size: n,
            table: packed,
            names: default_names(generator_ids.len()),
            generators: generator_ids,
            words: words_from_tree(&closure.parent, &closure.last),
            transformations: None,
            origin: Some(closure.elements),
            associativity_verified,
        })
    }

    /// Replaces the generator labels used when rendering words.
    pub fn with_generator_names(mut self, names: Vec<String>) -> Result<Monoid> {
        if names.len() != self.generators.len() {
            return Err(Error::Spec {
                field: "names".into(),
                reason: format!("expected {} names, got {}", self.generators.len(), names.len()),
            });
        }
        if names.iter().any(|n| n.is_empty() || n.contains('-')) {
            return Err(Error::Spec {
                field: "names".into(),
                reason: "names must be nonempty and must not contain '-'".into(),
            });
        }
        self.names = names;
        Ok(self)
    }

    /// Process-unique tag shared by clones; used to reject mixing algebra
    /// elements from different monoids.
    pub fn tag(&self) -> u64 {
        self.tag
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> ElementId {
        ElementId::IDENTITY
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = ElementId> + Clone {
        (0..self.size as u32).map(ElementId)
    }

    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, x: ElementId) -> bool {
        x.index() < self.size
    }

    pub fn check(&self, x: ElementId) -> Result<ElementId> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::InvalidElement(x.index()))
        }
    }

    #[inline]
    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        ElementId(self.table[x.index() * self.size + y.index()])
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<I: IntoIterator<Item = ElementId>>(&self, factors: I) -> ElementId {
        factors.into_iter().fold(self.identity(), |acc, x| self.mul(acc, x))
    }

    pub fn is_idempotent(&self, x: ElementId) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements().filter(move |&x| self.is_idempotent(x))
    }

    /// The unique idempotent among the positive powers of `x`.
    pub fn idempotent_power(&self, x: ElementId) -> ElementId {
        let mut powers = vec![x];
        let mut seen: HashMap<ElementId, usize> = HashMap::from([(x, 1)]);
        let mut current = x;
        let (start, period) = loop {
            current = self.mul(current, x);
            let exponent = powers.len() + 1;
            if let Some(&first) = seen.get(&current) {
                break (first, exponent - first);
            }
            seen.insert(current, exponent);
            powers.push(current);
        };
        // x^k for k >= start is periodic; the idempotent is the power with k ≡ 0 mod period.
        let k = start.div_ceil(period) * period;
        powers[k - 1]
    }

    /// Shortlex-least word (as generator indices) reaching `x`.
    pub fn word(&self, x: ElementId) -> &[usize] {
        &self.words[x.index()]
    }

    /// Evaluates a word of generator indices left to right.
    pub fn evaluate(&self, word: &[usize]) -> Result<ElementId> {
        word.iter().try_fold(self.identity(), |acc, &g| {
            let gen = *self.generators.get(g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))?;
            Ok(self.mul(acc, gen))
        })
    }

    fn names_single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Renders a generator word: concatenated when every name is a single
    /// character, dash-separated otherwise. The empty word renders as `1`.
    pub fn render(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let sep = if self.names_single_char() { "" } else { "-" };
        word.iter().map(|&g| self.names[g].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn render_element(&self, x: ElementId) -> String {
        self.render(self.word(x))
    }

    /// Parses a word in the format produced by [`Monoid::render`].
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() || (text == "1" && !self.names.iter().any(|n| n == "1")) {
            return Ok(Vec::new());
        }
        let lookup = |tok: &str| {
            self.names.iter().position(|n| n == tok).ok_or_else(|| Error::UnknownGenerator(tok.to_string()))
        };
        if text.contains('-') {
            text.split('-').map(lookup).collect()
        } else if self.names_single_char() {
            text.chars().map(|c| lookup(&c.to_string())).collect()
        } else {
            Ok(vec![lookup(text)?])
        }
    }

    pub fn element_of(&self, text: &str) -> Result<ElementId> {
        self.evaluate(&self.parse_word(text)?)
    }

    /// The transformation realizing `x`, for monoids built by [`Monoid::close`].
    pub fn transformation(&self, x: ElementId) -> Option<&Transformation> {
        self.transformations.as_ref().map(|t| &t[x.index()])
    }

    /// The row index of `x` in the table passed to [`Monoid::from_table`].
    pub fn table_row(&self, x: ElementId) -> Option<usize> {
        self.origin.as_ref().map(|o| o[x.index()])
    }

    /// False when a user table was too large for the exhaustive check.
    pub fn associativity_verified(&self) -> bool {
        self.associativity_verified
    }

    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|x| self.table[x * self.size..(x + 1) * self.size].iter().map(|&v| v as usize).collect())
            .collect()
    }
}

fn default_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("g{i}")).collect()
}

fn words_from_tree(parent: &[u32], last: &[u32]) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = Vec::with_capacity(parent.len());
    words.push(Vec::new());
    for y in 1..parent.len() {
        let mut w = words[parent[y] as usize].clone();
        w.push(last[y] as usize);
        words.push(w);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    fn matrix_monoid() -> Monoid {
        Monoid::close(&[t(&[0, 2, 2]), t(&[1, 1, 2])], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn compose_acts_on_the_right() {
        let g1 = t(&[0, 2, 2]);
        let g2 = t(&[1, 1, 2]);
        assert_eq!(g1.compose(&g2).unwrap(), t(&[1, 2, 2]));
        assert_eq!(g1.compose(&g1).unwrap(), g1);
        assert_eq!(Transformation::identity(3).compose(&g2).unwrap(), g2);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = t(&[0, 1]).compose(&t(&[0, 1, 2])).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn transformation_rejects_bad_images() {
        assert!(matches!(
            Transformation::new(vec![0, 3, 1]),
            Err(Error::InvalidImage { point: 1, image: 3, degree: 3 })
        ));
    }

    #[test]
    fn matrix_example_has_five_elements() {
        let m = matrix_monoid();
        assert_eq!(m.size(), 5);
        let imgs: Vec<Vec<usize>> = m.elements().map(|x| m.transformation(x).unwrap().images().to_vec()).collect();
        // 1, g1, g2, g1g2, g2g1 in shortlex order.
        assert_eq!(imgs, vec![vec![0, 1, 2], vec![0, 2, 2], vec![1, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]);
        assert_eq!(m.render_element(ElementId::new(3)), "g0-g1");
    }

    #[test]
    fn identity_generator_gives_trivial_monoid() {
        let m = Monoid::close(&[Transformation::identity(4)], DEFAULT_CAP).unwrap();
        assert_eq!(m.size(), 1);
        assert_eq!(m.generators(), &[ElementId::IDENTITY]);
    }

    #[test]
    fn close_reports_cap() {
        let cycle = t(&[1, 2, 3, 4, 0]);
        match Monoid::close(&[cycle], 3) {
            Err(Error::CapExceeded { cap: 3, partial }) => assert_eq!(partial, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Monoid::close(&[], 3), Err(Error::NoGenerators)));
    }

    #[test]
    fn words_evaluate_to_their_elements() {
        let m = matrix_monoid();
        for x in m.elements() {
            assert_eq!(m.evaluate(m.word(x)).unwrap(), x);
        }
    }

    #[test]
    fn idempotent_power_cases() {
        let m = matrix_monoid();
        let g1g2 = ElementId::new(3);
        assert!(!m.is_idempotent(g1g2));
        assert_eq!(m.idempotent_power(g1g2), ElementId::new(4));
        assert_eq!(m.idempotent_power(ElementId::new(1)), ElementId::new(1));

        let group = Monoid::from_table(&[vec![0, 1], vec![1, 0]], 0, &[1]).unwrap();
        assert_eq!(group.idempotent_power(ElementId::new(1)), ElementId::IDENTITY);

        // Cycle of length 3 preceded by a tail of length 2: x^3 is idempotent.
        let tail = Monoid::close(&[t(&[1, 2, 3, 4, 2])], DEFAULT_CAP).unwrap();
        let x = tail.generators()[0];
        let e = tail.idempotent_power(x);
        assert!(tail.is_idempotent(e));
        assert_eq!(e, tail.product([x, x, x]));
    }

    #[test]
    fn from_table_validates() {
        assert!(Monoid::from_table(&[vec![0]], 0, &[]).unwrap().size() == 1);
        assert!(matches!(Monoid::from_table(&[vec![0, 1], vec![0, 1]], 0, &[1]), Err(Error::IdentityAxiom { .. })));
        // x*x = 1, y*y = y, x*y = y, y*x = x  (not associative: (x*y)*x = x, x*(y*x) = 1)
        let table = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 2]];
        assert!(matches!(Monoid::from_table(&table, 0, &[1, 2]), Err(Error::NotAssociative { .. })));
        assert!(matches!(
            Monoid::from_table(&[vec![0, 1], vec![1, 1]], 0, &[]),
            Err(Error::NotGenerating { reached: 1, size: 2 })
        ));
        assert!(matches!(Monoid::from_table(&[vec![0, 2]], 0, &[]), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn large_tables_are_flagged_unverified() {
        let n = 4;
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        let m = Monoid::from_table_with_bound(&table, 0, &[1], 3).unwrap();
        assert!(!m.associativity_verified());
        assert!(Monoid::from_table(&table, 0, &[1]).unwrap().associativity_verified());
    }

    #[test]
    fn rebuilding_from_own_table_is_identical() {
        let m = matrix_monoid();
        let gens: Vec<usize> = m.generators().iter().map(|g| g.index()).collect();
        let rebuilt = Monoid::from_table(&m.multiplication_table(), 0, &gens).unwrap();
        assert_eq!(rebuilt.multiplication_table(), m.multiplication_table());
        for x in m.elements() {
            assert_eq!(rebuilt.word(x), m.word(x));
        }
    }

    #[test]
    fn parse_and_render_words() {
        let m = matrix_monoid().with_generator_names(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(m.render_element(ElementId::new(4)), "ba");
        assert_eq!(m.parse_word("ab").unwrap(), vec![0, 1]);
        assert_eq!(m.parse_word("1").unwrap(), Vec::<usize>::new());
        assert!(matches!(m.parse_word("ac"), Err(Error::UnknownGenerator(_))));
        assert_eq!(m.element_of("aab").unwrap(), ElementId::new(3));
    }
}

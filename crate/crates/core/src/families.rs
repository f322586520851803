//! Built-in monoid families: free left regular bands and type-A 0-Hecke monoids.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monoid::{ElementId, Monoid, Transformation};

/// Injective words over `k` letters, ordered by length then lexicographically.
fn injective_words(k: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &level {
            for letter in 0..k {
                if !w.contains(&letter) {
                    let mut v: Vec<usize> = w.clone();
                    v.push(letter);
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    words
}

fn falling_factorial_sum(k: usize) -> Option<usize> {
    let mut total: usize = 1;
    let mut term: usize = 1;
    for i in 0..k {
        term = term.checked_mul(k - i)?;
        total = total.checked_add(term)?;
    }
    Some(total)
}

/// The free left regular band on `k` generators: words without repeated
/// letters, multiplied by concatenation keeping only first occurrences.
pub fn free_lrb(k: usize, cap: usize) -> Result<Monoid> {
    if k == 0 {
        return Err(Error::Spec { field: "k".into(), reason: "must be at least 1".into() });
    }
    match falling_factorial_sum(k) {
        Some(size) if size <= cap => {}
        _ => return Err(Error::CapExceeded { cap, partial: 0 }),
    }
    let words = injective_words(k);
    let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let table: Vec<Vec<usize>> = words
        .iter()
        .map(|x| {
            words
                .iter()
                .map(|y| {
                    let mut w = x.clone();
                    w.extend(y.iter().filter(|l| !x.contains(l)));
                    index[w.as_slice()]
                })
                .collect()
        })
        .collect();
    let generators: Vec<usize> = (0..k).map(|l| index[[l].as_slice()]).collect();
    Monoid::from_table(&table, 0, &generators)
}

/// All permutations of `0..n` in lexicographic one-line order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut all = vec![current.clone()];
    // Standard next-permutation.
    while let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) {
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        all.push(current.clone());
    }
    all
}

pub fn inversions(w: &[usize]) -> usize {
    (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
}

/// The 0-Hecke monoid of the symmetric group on `n` letters, realized on the
/// `n!` permutations: `T_i` sends `w` to `w s_i` when that increases length
/// and fixes `w` otherwise.
pub fn hecke_a(n: usize, cap: usize) -> Result<Monoid> {
    if n < 2 {
        return Err(Error::Spec { field: "n".into(), reason: "must be at least 2".into() });
    }
    let order = (1..=n).try_fold(1usize, |acc, i| acc.checked_mul(i));
    let order = match order {
        Some(o) if o <= cap => o,
        _ => return Err(Error::CapExceeded { cap, partial: 0 }),
    };
    let perms = permutations(n);
    let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let generators = (1..n)
        .map(|i| {
            let images = perms
                .iter()
                .enumerate()
                .map(|(p, w)| {
                    if w[i - 1] < w[i] {
                        let mut ws = w.clone();
                        ws.swap(i - 1, i);
                        index[ws.as_slice()]
                    } else {
                        p
                    }
                })
                .collect();
            Transformation::new(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Monoid::close(&generators, cap)?;
    if m.size() != order {
        return Err(Error::Inconsistent(format!("H(0) of S_{n} has {} elements, expected {order}", m.size())));
    }
    m.with_generator_names((1..n).map(|i| format!("T{i}")).collect())
}

/// Evaluates a 0-Hecke word written as generator subscripts, e.g. `"1214"`
/// for `T1 T2 T1 T4`.
pub fn hecke_element(m: &Monoid, subscripts: &str) -> Result<ElementId> {
    let word = subscripts
        .chars()
        .map(|c| {
            c.to_digit(10)
                .filter(|&d| d >= 1 && (d as usize) <= m.generators().len())
                .map(|d| d as usize - 1)
                .ok_or_else(|| Error::UnknownGenerator(c.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    m.evaluate(&word)
}

/// The permutation underlying a 0-Hecke element: the image of the identity
/// permutation under its action.
pub fn hecke_permutation(m: &Monoid, n: usize, x: ElementId) -> Option<Vec<usize>> {
    let t = m.transformation(x)?;
    permutations(n).into_iter().nth(t.apply(0))
}

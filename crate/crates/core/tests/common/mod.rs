//! Naive reference implementations on plain image vectors (0-based), kept
//! independent of the library so they can serve as oracles.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use normcore::{PermutationGroup, Transformation};

pub type Map = Vec<usize>;

/// `x -> b(a(x))`.
pub fn then(a: &[usize], b: &[usize]) -> Map {
    a.iter().map(|&x| b[x]).collect()
}

pub fn inverse(p: &[usize]) -> Map {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// `g^-1 a g`.
pub fn conjugate(a: &[usize], g: &[usize]) -> Map {
    then(&then(&inverse(g), a), g)
}

pub fn rank(a: &[usize]) -> usize {
    a.iter().collect::<HashSet<_>>().len()
}

pub fn is_perm(a: &[usize]) -> bool {
    rank(a) == a.len()
}

/// Closure under right multiplication by the generators, generators included.
pub fn semigroup(gens: &[Map]) -> HashSet<Map> {
    let mut seen: HashSet<Map> = gens.iter().cloned().collect();
    let mut queue: VecDeque<Map> = seen.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = then(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Every element of the group generated by `gens`, including the identity.
pub fn group(n: usize, gens: &[Map]) -> HashSet<Map> {
    let mut all = semigroup(gens);
    all.insert((0..n).collect());
    all
}

pub fn group_of(g: &PermutationGroup) -> HashSet<Map> {
    let gens: Vec<Map> = g
        .generators()
        .iter()
        .map(|p| p.images().iter().map(|&x| x as usize).collect())
        .collect();
    group(g.degree(), &gens)
}

pub fn images(t: &Transformation) -> Map {
    t.images().iter().map(|&x| x as usize).collect()
}

pub fn all_maps(n: usize) -> Vec<Map> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut i| {
            let mut v = vec![0; n];
            for k in (0..n).rev() {
                v[k] = i % n;
                i /= n;
            }
            v
        })
        .collect()
}

pub fn singular_maps(n: usize) -> Vec<Map> {
    all_maps(n).into_iter().filter(|a| !is_perm(a)).collect()
}

/// `<a, G> \ G` for a singular `a`, by brute force.
pub fn generated_minus_group(a: &[usize], elements: &HashSet<Map>) -> HashSet<Map> {
    let mut gens: Vec<Map> = elements.iter().cloned().collect();
    gens.push(a.to_vec());
    semigroup(&gens)
        .into_iter()
        .filter(|x| !is_perm(x))
        .collect()
}

/// `<a^G>` by brute force.
pub fn conjugate_closure(a: &[usize], elements: &HashSet<Map>) -> HashSet<Map> {
    let gens: HashSet<Map> = elements.iter().map(|g| conjugate(a, g)).collect();
    semigroup(&gens.into_iter().collect::<Vec<_>>())
}

/// The definition: `G` is a-normalizing iff `<a, G> \ G = <a^G>`.
pub fn is_a_normalizing(a: &[usize], elements: &HashSet<Map>) -> bool {
    generated_minus_group(a, elements) == conjugate_closure(a, elements)
}

/// All set partitions of `0..n` as class labels.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            go(i + 1, n, cur, blocks.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Primitive: transitive and no invariant partition other than the trivial two.
pub fn is_primitive(n: usize, elements: &HashSet<Map>) -> bool {
    if !is_transitive(n, elements) {
        return false;
    }
    set_partitions(n).iter().all(|p| {
        let blocks = p.iter().max().map_or(0, |m| m + 1);
        if blocks == 1 || blocks == n {
            return true;
        }
        let invariant = elements
            .iter()
            .all(|g| (0..n).all(|x| (0..n).all(|y| (p[x] == p[y]) == (p[g[x]] == p[g[y]]))));
        !invariant
    })
}

pub fn is_transitive(n: usize, elements: &HashSet<Map>) -> bool {
    let orbit: HashSet<usize> = elements.iter().map(|g| g[0]).collect();
    orbit.len() == n
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Every `i`-set can be mapped into every `j`-set.
pub fn is_ij_homogeneous(n: usize, i: usize, j: usize, elements: &HashSet<Map>) -> bool {
    let is = subsets(n, i);
    let js = subsets(n, j);
    is.iter().all(|a| {
        js.iter().all(|b| {
            elements
                .iter()
                .any(|g| a.iter().all(|&x| b.contains(&g[x])))
        })
    })
}

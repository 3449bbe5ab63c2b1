//! Candidate groups of small degree, built from their algebraic definitions.
//!
//! Affine groups act on field elements or vectors, projective groups on the
//! projective line with `∞` as the last point. Field element `x` of `GF(q)`
//! is point `x + 1`; for `GF(8)` the element is the 3-bit coefficient vector
//! of a polynomial modulo `x^3 + x + 1`. Vectors `(u, v)` of `GF(3)^2` are
//! point `3u + v + 1`.

use crate::error::{Error, Result};
use crate::groups::PermutationGroup;
use crate::transform::{Permutation, MAX_DEGREE};

/// A catalog label with the degree it lives on and its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub degree: usize,
    pub order: u64,
}

/// Degree-specific groups, with orders.
const FIXED: &[(&str, usize, u64)] = &[
    ("C5", 5, 5),
    ("D10", 5, 10),
    ("AGL(1,5)", 5, 20),
    ("PSL(2,5)", 6, 60),
    ("PGL(2,5)", 6, 120),
    ("AGL(1,7)", 7, 42),
    ("AGL(1,8)", 8, 56),
    ("AGammaL(1,8)", 8, 168),
    ("ASL(3,2)", 8, 1344),
    ("PSL(2,7)", 8, 168),
    ("PGL(2,7)", 8, 336),
    ("PSL(2,8)", 9, 504),
    ("PGammaL(2,8)", 9, 1512),
    ("ASL(2,3)", 9, 216),
    ("AGL(2,3)", 9, 432),
    ("M12", 12, 95040),
];

/// Generators of the Mathieu group `M12` in 1-based cycle notation.
pub const M12_GENERATORS: [&str; 6] = [
    "(1 2 3)(4 5 6)(7 8 9)",
    "(2 4 3 7)(5 6 9 8)",
    "(2 9 3 5)(4 6 7 8)",
    "(1 10)(4 7)(5 6)(8 9)",
    "(4 8)(5 9)(6 7)(10 11)",
    "(4 7)(5 8)(6 9)(11 12)",
];

/// Canonical spelling of a label: `Γ` and `Gamma_` become `Gamma`,
/// `D(2*5)` becomes `D10`, and `A_9`/`A9` become `A`.
pub fn canonical_label(label: &str) -> String {
    let mut s: String = label
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace('Γ', "Gamma")
        .replace("Gamma_", "Gamma");
    if s.eq_ignore_ascii_case("trivial") || s == "{1}" || s == "()" {
        s = "1".into();
    }
    if s == "D(2*5)" {
        s = "D10".into();
    }
    for family in ["A", "S"] {
        if let Some(rest) = s.strip_prefix(family) {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            if rest.is_empty() || rest.chars().all(|c| c.is_ascii_digit()) {
                return family.into();
            }
        }
    }
    if let Some(&(fixed, _, _)) = FIXED.iter().find(|(l, _, _)| l.eq_ignore_ascii_case(&s)) {
        return fixed.into();
    }
    s
}

fn family_degree(label: &str) -> Option<usize> {
    let s: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = s.strip_prefix('A').or_else(|| s.strip_prefix('S'))?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    rest.parse().ok()
}

/// Display label for a catalog group at a degree, e.g. `A9` for `A` at 9.
pub fn display_label(label: &str, degree: usize) -> String {
    match canonical_label(label).as_str() {
        "A" => format!("A{degree}"),
        "S" => format!("S{degree}"),
        other => other.to_string(),
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Every candidate examined at `degree`: the trivial, alternating and
/// symmetric groups plus the degree-specific groups.
pub fn candidates(degree: usize) -> Vec<CatalogEntry> {
    let mut out = vec![CatalogEntry {
        label: "1".into(),
        degree,
        order: 1,
    }];
    if degree >= 3 {
        out.push(CatalogEntry {
            label: format!("A{degree}"),
            degree,
            order: factorial(degree) / 2,
        });
    }
    if degree >= 2 {
        out.push(CatalogEntry {
            label: format!("S{degree}"),
            degree,
            order: factorial(degree),
        });
    }
    out.extend(
        FIXED
            .iter()
            .filter(|(_, d, _)| *d == degree)
            .map(|&(label, degree, order)| CatalogEntry {
                label: label.into(),
                degree,
                order,
            }),
    );
    out
}

/// Groups that are normalizing at `degree` according to the classification
/// for `4 <= degree <= 9`.
pub fn expected_normalizing(degree: usize) -> Vec<String> {
    let mut out = vec!["1".to_string(), format!("A{degree}"), format!("S{degree}")];
    match degree {
        5 => out.push("AGL(1,5)".into()),
        6 => out.extend(["PSL(2,5)".into(), "PGL(2,5)".into()]),
        9 => out.extend(["PSL(2,8)".into(), "PGammaL(2,8)".into()]),
        _ => {}
    }
    out
}

/// Builds the named group on `degree` points.
pub fn catalog(label: &str, degree: usize) -> Result<PermutationGroup> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(degree));
    }
    let canon = canonical_label(label);
    let mismatch = || Error::GroupDegree {
        label: label.to_string(),
        degree,
    };
    if let Some(d) = family_degree(label) {
        if d != degree {
            return Err(mismatch());
        }
    }
    let gens = match canon.as_str() {
        "1" => Vec::new(),
        "S" => symmetric_generators(degree)?,
        "A" => alternating_generators(degree)?,
        other => {
            let &(_, fixed_degree, _) = FIXED
                .iter()
                .find(|(l, _, _)| *l == other)
                .ok_or_else(|| Error::UnknownGroup(label.to_string()))?;
            if fixed_degree != degree {
                return Err(mismatch());
            }
            fixed_generators(other)?
        }
    };
    PermutationGroup::new(display_label(&canon, degree), degree, gens)
}

fn symmetric_generators(n: usize) -> Result<Vec<Permutation>> {
    if n == 1 {
        return Ok(Vec::new());
    }
    let long: Vec<usize> = (1..=n).collect();
    Ok(vec![
        Permutation::from_cycles(n, &[vec![1, 2]])?,
        Permutation::from_cycles(n, &[long])?,
    ])
}

fn alternating_generators(n: usize) -> Result<Vec<Permutation>> {
    if n < 3 {
        return Ok(Vec::new());
    }
    // (1 2 3) with an even long cycle: (1..n) for odd n, (2..n) for even n.
    let long: Vec<usize> = if n % 2 == 1 {
        (1..=n).collect()
    } else {
        (2..=n).collect()
    };
    Ok(vec![
        Permutation::from_cycles(n, &[vec![1, 2, 3]])?,
        Permutation::from_cycles(n, &[long])?,
    ])
}

/// A finite field of order `q` with elements `0..q`.
struct Field {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl Field {
    fn prime(p: usize) -> Self {
        Self {
            q: p,
            add: (0..p)
                .map(|x| (0..p).map(|y| (x + y) % p).collect())
                .collect(),
            mul: (0..p)
                .map(|x| (0..p).map(|y| (x * y) % p).collect())
                .collect(),
        }
    }

    /// `GF(8)` as `GF(2)[x] / (x^3 + x + 1)`.
    fn gf8() -> Self {
        let mulpoly = |mut a: usize, mut b: usize| {
            let mut r = 0;
            while b != 0 {
                if b & 1 != 0 {
                    r ^= a;
                }
                b >>= 1;
                a <<= 1;
                if a & 0b1000 != 0 {
                    a ^= 0b1011;
                }
            }
            r
        };
        Self {
            q: 8,
            add: (0..8).map(|x| (0..8).map(|y| x ^ y).collect()).collect(),
            mul: (0..8)
                .map(|x| (0..8).map(|y| mulpoly(x, y)).collect())
                .collect(),
        }
    }

    fn inv(&self, x: usize) -> usize {
        (1..self.q)
            .find(|&y| self.mul[x][y] == 1)
            .expect("nonzero field element")
    }

    fn neg(&self, x: usize) -> usize {
        (0..self.q)
            .find(|&y| self.add[x][y] == 0)
            .expect("additive inverse")
    }

    fn primitive_element(&self) -> usize {
        (2..self.q)
            .find(|&w| {
                let mut x = w;
                let mut order = 1;
                while x != 1 {
                    x = self.mul[x][w];
                    order += 1;
                }
                order == self.q - 1
            })
            .unwrap_or(1)
    }

    /// Affine map `x -> a x + b` on points `1..=q`.
    fn affine(&self, a: usize, b: usize) -> Result<Permutation> {
        self.affine_with(|x| self.add[self.mul[a][x]][b])
    }

    fn affine_with(&self, f: impl Fn(usize) -> usize) -> Result<Permutation> {
        let images: Vec<usize> = (0..self.q).map(f).collect();
        Permutation::new(&images)
    }

    /// Möbius map `x -> (a x + b) / (c x + d)` on `GF(q) ∪ {∞}`, with `∞`
    /// the point `q + 1`.
    fn mobius(&self, a: usize, b: usize, c: usize, d: usize) -> Result<Permutation> {
        let inf = self.q;
        let images: Vec<usize> = (0..=self.q)
            .map(|x| {
                if x == inf {
                    if c == 0 {
                        inf
                    } else {
                        self.mul[a][self.inv(c)]
                    }
                } else {
                    let num = self.add[self.mul[a][x]][b];
                    let den = self.add[self.mul[c][x]][d];
                    if den == 0 {
                        inf
                    } else {
                        self.mul[num][self.inv(den)]
                    }
                }
            })
            .collect();
        Permutation::new(&images)
    }

    /// The Frobenius map `x -> x^2` on the projective line, fixing `∞`.
    fn frobenius_projective(&self) -> Result<Permutation> {
        let images: Vec<usize> = (0..=self.q)
            .map(|x| if x == self.q { x } else { self.mul[x][x] })
            .collect();
        Permutation::new(&images)
    }
}

fn affine_line(p: usize, multiplier: Option<usize>) -> Result<Vec<Permutation>> {
    let f = Field::prime(p);
    let w = multiplier.unwrap_or_else(|| f.primitive_element());
    Ok(vec![f.affine(1, 1)?, f.affine(w, 0)?])
}

fn projective_line(f: &Field, full: bool) -> Result<Vec<Permutation>> {
    let w = f.primitive_element();
    let one = 1;
    let zero = 0;
    let minus_one = f.neg(one);
    let scale = if full { w } else { f.mul[w][w] };
    Ok(vec![
        f.mobius(one, one, zero, one)?,
        f.mobius(scale, zero, zero, one)?,
        f.mobius(zero, minus_one, one, zero)?,
    ])
}

/// Linear map on `GF(3)^2` given by a 2x2 matrix acting on row vectors.
fn gf3_plane(m: [[usize; 2]; 2], shift: (usize, usize)) -> Result<Permutation> {
    let images: Vec<usize> = (0..9)
        .map(|p| {
            let (u, v) = (p / 3, p % 3);
            let nu = (u * m[0][0] + v * m[1][0] + shift.0) % 3;
            let nv = (u * m[0][1] + v * m[1][1] + shift.1) % 3;
            3 * nu + nv
        })
        .collect();
    Permutation::new(&images)
}

fn fixed_generators(label: &str) -> Result<Vec<Permutation>> {
    let id = [[1, 0], [0, 1]];
    match label {
        "C5" => Ok(vec![Permutation::from_cycles(5, &[vec![1, 2, 3, 4, 5]])?]),
        "D10" => Ok(vec![
            Permutation::from_cycles(5, &[vec![1, 2, 3, 4, 5]])?,
            Permutation::from_cycles(5, &[vec![2, 5], vec![3, 4]])?,
        ]),
        "AGL(1,5)" => affine_line(5, None),
        "AGL(1,7)" => affine_line(7, None),
        "PSL(2,5)" => projective_line(&Field::prime(5), false),
        "PGL(2,5)" => projective_line(&Field::prime(5), true),
        "PSL(2,7)" => projective_line(&Field::prime(7), false),
        "PGL(2,7)" => projective_line(&Field::prime(7), true),
        "AGL(1,8)" | "AGammaL(1,8)" | "ASL(3,2)" => {
            let f = Field::gf8();
            let w = f.primitive_element();
            let mut gens = vec![f.affine(1, 1)?, f.affine(w, 0)?];
            if label != "AGL(1,8)" {
                gens.push(f.affine_with(|x| f.mul[x][x])?);
            }
            if label == "ASL(3,2)" {
                // swapping the first two coordinates is GF(2)-linear but not
                // semilinear over GF(8), so it completes GL(3,2)
                gens.push(f.affine_with(|x| (x & 0b100) | ((x & 1) << 1) | ((x >> 1) & 1))?);
            }
            Ok(gens)
        }
        "PSL(2,8)" | "PGammaL(2,8)" => {
            let f = Field::gf8();
            // in characteristic 2 every scalar is a square, so PSL = PGL
            let mut gens = projective_line(&f, true)?;
            if label == "PGammaL(2,8)" {
                gens.push(f.frobenius_projective()?);
            }
            Ok(gens)
        }
        "ASL(2,3)" | "AGL(2,3)" => {
            let mut gens = vec![
                gf3_plane(id, (0, 1))?,
                gf3_plane(id, (1, 0))?,
                gf3_plane([[1, 1], [0, 1]], (0, 0))?,
                gf3_plane([[1, 0], [1, 1]], (0, 0))?,
            ];
            if label == "AGL(2,3)" {
                gens.push(gf3_plane([[2, 0], [0, 1]], (0, 0))?);
            }
            Ok(gens)
        }
        "M12" => M12_GENERATORS
            .iter()
            .map(|g| crate::parse::parse_permutation(g, 12))
            .collect(),
        _ => Err(Error::UnknownGroup(label.to_string())),
    }
}

/// Stable 64-bit FNV-1a digest of a group's degree and generators.
pub fn group_digest(group: &PermutationGroup) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut feed = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(PRIME);
    };
    feed(group.degree() as u8);
    for g in group.generators() {
        for &p in g.images() {
            feed(p);
        }
        feed(0xff);
    }
    h
}

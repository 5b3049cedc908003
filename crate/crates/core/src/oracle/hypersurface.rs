//! `H^2_{(a,c)}(A)` for `A = K[a,b,c]/(b^2 - ac)`, every variable in degree
//! 2, computed on `A` itself: normal monomials `a^i b^e c^j` with `e ≤ 1`,
//! products rewritten by `b^2 → ac`, and a private sparse elimination.

use std::collections::BTreeMap;

use crate::scalars::{Field, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Normal {
    a: u32,
    b: u32,
    c: u32,
}

impl Normal {
    fn times(self, other: Normal) -> Normal {
        let mut m = Normal { a: self.a + other.a, b: self.b + other.b, c: self.c + other.c };
        if m.b >= 2 {
            m.b -= 2;
            m.a += 1;
            m.c += 1;
        }
        m
    }
}

/// Normal monomials of polynomial degree `deg` (zero for odd or negative).
fn basis(deg: i64) -> Vec<Normal> {
    if deg < 0 || deg % 2 != 0 {
        return Vec::new();
    }
    let total = (deg / 2) as u32;
    let mut out = Vec::new();
    for b in 0..=1.min(total) {
        for a in 0..=total - b {
            out.push(Normal { a, b, c: total - b - a });
        }
    }
    out
}

type Row = BTreeMap<usize, Scalar>;

/// Rank of the span of sparse vectors.
fn rank(field: Field, vectors: Vec<Row>) -> usize {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for mut v in vectors {
        while let Some((&lead, coeff)) = v.iter().next().map(|(k, c)| (k, c.clone())) {
            match pivots.get(&lead) {
                Some(p) => {
                    // p is normalized with p[lead] = 1.
                    for (k, c) in p {
                        let updated = &v.get(k).cloned().unwrap_or_else(|| field.zero()) - &(&coeff * c);
                        if updated.is_zero() {
                            v.remove(k);
                        } else {
                            v.insert(*k, updated);
                        }
                    }
                }
                None => {
                    let inv = coeff.inv().expect("nonzero lead");
                    let normalized = v.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Index of the top Čech term `A_{d + 4t} / (ac)^t`.
struct Top {
    index: BTreeMap<Normal, usize>,
}

impl Top {
    fn new(d: i64, t: u32) -> Top {
        let index = basis(d + 4 * i64::from(t)).into_iter().enumerate().map(|(k, m)| (m, k)).collect();
        Top { index }
    }

    fn vector(&self, terms: &[(Normal, Scalar)]) -> Row {
        let mut row = Row::new();
        for (m, c) in terms {
            row.insert(self.index[m], c.clone());
        }
        row
    }
}

/// Boundaries in the top term at level `t`:
/// `m / a^t ↦ m c^t / (ac)^t` and `m / c^t ↦ -m a^t / (ac)^t`.
fn boundaries(field: Field, top: &Top, d: i64, t: u32) -> Vec<Row> {
    let ct = Normal { a: 0, b: 0, c: t };
    let at = Normal { a: t, b: 0, c: 0 };
    let mut rows = Vec::new();
    for m in basis(d + 2 * i64::from(t)) {
        rows.push(top.vector(&[(m.times(ct), field.one())]));
        rows.push(top.vector(&[(m.times(at), -field.one())]));
    }
    rows
}

/// `dim H^2_{(a,c)}(A)_d`: the image of level `t` in level `t + 2` with `t`
/// large enough that every class of degree `d` already appears.
pub fn hypersurface_a1_oracle(d: i64) -> u64 {
    let field = Field::Rationals;
    let t = (d.unsigned_abs() as u32) + 2;
    let big = t + 2;
    let top = Top::new(d, big);
    let bnd = boundaries(field, &top, d, big);
    let shift = Normal { a: big - t, b: 0, c: big - t };
    let lifted: Vec<Row> = basis(d + 4 * i64::from(t))
        .into_iter()
        .map(|m| top.vector(&[(m.times(shift), field.one())]))
        .collect();
    let base = rank(field, bnd.clone());
    let joined = rank(field, bnd.into_iter().chain(lifted).collect());
    (joined - base) as u64
}

//! Facet enumeration of a polytope known only through a linear optimization
//! oracle, by growing an inner hull until every facet is confirmed.

use num::{One, Signed, Zero};

use super::halfspace::Halfspace;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Upper limit on the number of hull facets kept at any time.
pub const HULL_FACET_CAP: usize = 20_000;

struct Facet {
    h: Halfspace,
    confirmed: bool,
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
}

/// A nonzero vector orthogonal to every row, if the rows have rank `d − 1`.
fn normal_of(rows: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r != d - 1 {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c))?;
    let mut a = vec![Rational::zero(); d];
    a[free] = Rational::one();
    for (row, &c) in pivots.iter().enumerate() {
        a[c] = -m[row][free].clone();
    }
    Some(a)
}

/// The supporting hyperplane through `through`, with every point of `points`
/// on its `≤` side, or `None` if there is none.
fn facet_through(through: &[&Vec<Rational>], points: &[Vec<Rational>]) -> Option<Halfspace> {
    let d = through[0].len();
    let base = through[0];
    let rows: Vec<Vec<Rational>> = through[1..]
        .iter()
        .map(|x| x.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut a = normal_of(&rows, d)?;
    let b = dot(&a, base);
    let mut sign = 0i8;
    for x in points {
        let s = dot(&a, x) - &b;
        let here = if s.is_positive() {
            1
        } else if s.is_negative() {
            -1
        } else {
            0
        };
        if here == 0 {
            continue;
        }
        if sign == 0 {
            sign = here;
        } else if sign != here {
            return None;
        }
    }
    match sign {
        0 => None,
        1 => {
            for v in a.iter_mut() {
                *v = -&*v;
            }
            Some(Halfspace::le(a, -b).normalized())
        }
        _ => Some(Halfspace::le(a, b).normalized()),
    }
}

fn subsets<T: Copy>(items: &[T], size: usize, visit: &mut impl FnMut(&[T])) {
    fn go<T: Copy>(
        items: &[T],
        size: usize,
        start: usize,
        cur: &mut Vec<T>,
        visit: &mut impl FnMut(&[T]),
    ) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, size, i + 1, cur, visit);
            cur.pop();
        }
    }
    go(items, size, 0, &mut Vec::with_capacity(size), visit);
}

/// Irredundant facets of a bounded polytope `Q ⊆ ℝ^d_{≥0}` that contains the
/// origin, is closed under decreasing coordinates, and is full-dimensional.
///
/// `lexmax(a)` must return the lexicographically largest point of `Q` among
/// the maximizers of `a · x` (maximize `a · x`, then `x_1`, then `x_2`, …),
/// which is always a vertex.
pub fn down_closed_facets(
    d: usize,
    mut lexmax: impl FnMut(&[Rational]) -> Result<Vec<Rational>>,
) -> Result<Vec<Halfspace>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut points = vec![vec![Rational::zero(); d]];
    let mut simplex = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[i] = Rational::one();
        let top = lexmax(&e)?[i].clone();
        if !top.is_positive() {
            return Err(Error::invariant(format!(
                "coordinate {} is identically zero; the set is not full-dimensional",
                i + 1
            )));
        }
        simplex.push(Rational::one() / &top);
        e[i] = top;
        points.push(e);
    }
    let mut facets: Vec<Facet> = (0..d)
        .map(|i| Facet {
            h: Halfspace::nonneg(d, i),
            confirmed: true,
        })
        .collect();
    facets.push(Facet {
        h: Halfspace::le(simplex, Rational::one()).normalized(),
        confirmed: false,
    });

    while let Some(f) = facets.iter().position(|f| !f.confirmed) {
        let a = facets[f].h.coeffs.clone();
        let p = lexmax(&a)?;
        if dot(&a, &p) <= facets[f].h.bound {
            facets[f].confirmed = true;
            continue;
        }
        let visible: Vec<bool> = facets
            .iter()
            .map(|f| dot(&f.h.coeffs, &p) > f.h.bound)
            .collect();
        let on = |h: &Halfspace, x: &[Rational]| dot(&h.coeffs, x) == h.bound;
        let horizon: Vec<usize> = (0..points.len())
            .filter(|&x| {
                let mut seen = (false, false);
                for (fc, &vis) in facets.iter().zip(&visible) {
                    if on(&fc.h, &points[x]) {
                        if vis {
                            seen.0 = true;
                        } else {
                            seen.1 = true;
                        }
                    }
                }
                seen.0 && seen.1
            })
            .collect();
        let mut next: Vec<Facet> = facets
            .into_iter()
            .zip(&visible)
            .filter_map(|(f, &vis)| (!vis).then_some(f))
            .collect();
        points.push(p);
        let p = points.last().unwrap();
        let mut fresh: Vec<Halfspace> = Vec::new();
        subsets(&horizon, d - 1, &mut |pick| {
            let mut through: Vec<&Vec<Rational>> = vec![p];
            through.extend(pick.iter().map(|&x| &points[x]));
            if let Some(h) = facet_through(&through, &points) {
                if !fresh.contains(&h) && !next.iter().any(|f| f.h == h) {
                    fresh.push(h);
                }
            }
        });
        next.extend(fresh.into_iter().map(|h| Facet {
            h,
            confirmed: false,
        }));
        if next.len() > HULL_FACET_CAP {
            return Err(Error::resource(format!(
                "hull projection exceeded {HULL_FACET_CAP} facets"
            )));
        }
        facets = next;
    }
    let mut out: Vec<Halfspace> = facets.into_iter().map(|f| f.h).collect();
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then_with(|| a.bound.cmp(&b.bound)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::lp::{lp_solve, LpOutcome, Sense};
    use super::super::polytope::{remove_redundant, Polytope};
    use super::super::rational::rat;
    use super::*;

    fn le(c: &[i64], b: i64) -> Halfspace {
        Halfspace::le(c.iter().map(|&v| rat(v)).collect(), rat(b))
    }

    /// Lexicographic maximizer over an explicit H-representation.
    fn oracle(hs: Vec<Halfspace>) -> impl FnMut(&[Rational]) -> Result<Vec<Rational>> {
        move |a: &[Rational]| {
            let d = a.len();
            let mut cons = hs.clone();
            let mut dirs = vec![a.to_vec()];
            for i in 0..d {
                let mut e = vec![rat(0); d];
                e[i] = rat(1);
                dirs.push(e);
            }
            let mut point = Vec::new();
            for dir in dirs {
                let LpOutcome::Optimal { point: x, value } =
                    lp_solve(&dir, &cons, Sense::Maximize)?
                else {
                    panic!("bounded nonempty test polytope");
                };
                cons.push(Halfspace::eq(dir, value));
                point = x;
            }
            Ok(point)
        }
    }

    fn check(d: usize, hs: Vec<Halfspace>) {
        let expect = remove_redundant(&Polytope::new(d, hs.clone()).unwrap());
        let got = down_closed_facets(d, oracle(hs)).unwrap();
        assert_eq!(
            remove_redundant(&Polytope::new(d, got.clone()).unwrap()),
            expect
        );
        assert_eq!(got.len(), expect.halfspaces().len());
    }

    #[test]
    fn pentagon() {
        check(
            2,
            vec![
                le(&[2, 1], 5),
                le(&[1, 2], 5),
                le(&[1, 1], 3),
                le(&[-1, 0], 0),
                le(&[0, -1], 0),
            ],
        );
    }

    #[test]
    fn degenerate_three_and_four_dimensional() {
        let mut hs = vec![
            le(&[1, 1, 1], 3),
            le(&[1, 0, 0], 2),
            le(&[0, 1, 1], 2),
            le(&[2, 1, 1], 5),
        ];
        hs.extend((0..3).map(|i| Halfspace::nonneg(3, i)));
        check(3, hs);
        let mut hs = vec![
            le(&[1, 1, 1, 1], 4),
            le(&[1, 1, 0, 0], 2),
            le(&[0, 0, 1, 1], 3),
            le(&[2, 0, 1, 0], 3),
        ];
        hs.extend((0..4).map(|i| Halfspace::nonneg(4, i)));
        check(4, hs);
        let mut cube: Vec<Halfspace> = (0..4).map(|i| Halfspace::nonneg(4, i)).collect();
        for i in 0..4 {
            let mut c = vec![0; 4];
            c[i] = 1;
            cube.push(le(&c, 1));
        }
        check(4, cube);
    }
}

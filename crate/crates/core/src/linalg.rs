//! Dense exact linear algebra over Q and real quadratic fields.
//!
//! Matrices are lists of rows; vectors act on the left (`v * M`).

use rug::Rational;

use crate::coeffring::QuadElement;

pub type Matrix = Vec<Vec<QuadElement>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot columns.
pub fn rref(rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &Matrix) -> usize {
    let mut m = rows.clone();
    rref(&mut m).len()
}

/// Basis of `{x : M x = 0}` (column vectors), one vector per free column.
pub fn kernel(rows: &Matrix) -> Vec<Vec<QuadElement>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![QuadElement::zero(); ncols];
            v[f] = QuadElement::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[i][f];
            }
            v
        })
        .collect()
}

/// Basis of `{x : x M = 0}`.
pub fn left_kernel(rows: &Matrix) -> Vec<Vec<QuadElement>> {
    kernel(&transpose(rows))
}

pub fn transpose(rows: &Matrix) -> Matrix {
    let ncols = rows.first().map_or(0, Vec::len);
    (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

/// `v * M`.
pub fn vec_mat(v: &[QuadElement], m: &Matrix) -> Vec<QuadElement> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![QuadElement::zero(); ncols];
    for (c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o += &(c * x);
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { QuadElement::one() } else { QuadElement::zero() }).collect())
        .collect()
}

/// Coefficients `c` with `target = sum c_i * rows_i`, if `target` lies in the row span.
pub fn solve_left(rows: &Matrix, target: &[QuadElement]) -> Option<Vec<QuadElement>> {
    let n = rows.len();
    // Augment the transpose: columns are the rows, last column the target.
    let mut aug: Matrix = (0..target.len())
        .map(|c| {
            let mut r: Vec<QuadElement> = rows.iter().map(|row| row[c].clone()).collect();
            r.push(target[c].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut sol = vec![QuadElement::zero(); n];
    for (i, &pc) in pivots.iter().enumerate() {
        sol[pc] = aug[i][n].clone();
    }
    Some(sol)
}

/// Characteristic polynomial `det(x I - M)` of a square matrix, lowest degree first
/// (Faddeev-LeVerrier; fine for the small matrices that occur here).
pub fn charpoly(m: &Matrix) -> Vec<QuadElement> {
    let n = m.len();
    let mut coeffs = vec![QuadElement::zero(); n + 1];
    coeffs[n] = QuadElement::one();
    let mut mk = identity(n);
    for k in 1..=n {
        let am = mat_mul(m, &mk);
        let tr: QuadElement = (0..n).map(|i| am[i][i].clone()).sum();
        let c = (-&tr).mul_rational(&Rational::from((1, k as i64)));
        coeffs[n - k] = c.clone();
        mk = am;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    coeffs
}

/// `p(M)` for a polynomial given lowest degree first (Horner).
pub fn poly_at_matrix(p: &[QuadElement], m: &Matrix) -> Matrix {
    let n = m.len();
    let mut acc = vec![vec![QuadElement::zero(); n]; n];
    for c in p.iter().rev() {
        acc = mat_mul(&acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

/// Scales a vector to be primitive integral: coordinates (both rational parts of
/// each entry) become coprime integers, with the first nonzero rational part positive.
pub fn primitive_integral(v: &[QuadElement]) -> Vec<QuadElement> {
    use rug::Integer;
    let mut den = Integer::from(1);
    for e in v {
        den.lcm_mut(&e.denominator());
    }
    let scaled: Vec<QuadElement> = v.iter().map(|e| e.mul_integer(&den)).collect();
    let mut g = Integer::new();
    for e in &scaled {
        g.gcd_mut(e.x().numer());
        g.gcd_mut(e.y().numer());
    }
    if g == 0 {
        return scaled;
    }
    let first_negative = scaled
        .iter()
        .flat_map(|e| [e.x(), e.y()])
        .find(|q| **q != 0)
        .is_some_and(|q| *q < 0);
    if first_negative {
        g = -g;
    }
    let inv = Rational::from((Integer::from(1), g));
    scaled.iter().map(|e| e.mul_rational(&inv)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| QuadElement::from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        let col: Matrix = k[0].iter().map(|x| vec![x.clone()]).collect();
        assert!(mat_mul(&a, &col).iter().all(|r| r[0].is_zero()));
    }

    #[test]
    fn solve_in_span() {
        let rows = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let t: Vec<QuadElement> = [2, 3, 5].iter().map(|&x| QuadElement::from_i64(x)).collect();
        let c = solve_left(&rows, &t).unwrap();
        assert_eq!(c, vec![QuadElement::from_i64(2), QuadElement::from_i64(3)]);
        let bad: Vec<QuadElement> = [2, 3, 6].iter().map(|&x| QuadElement::from_i64(x)).collect();
        assert!(solve_left(&rows, &bad).is_none());
    }

    #[test]
    fn charpoly_and_cayley_hamilton() {
        let a = m(&[&[2, 1, 0], &[0, 3, 4], &[1, 0, -1]]);
        let p = charpoly(&a);
        let z = poly_at_matrix(&p, &a);
        assert!(z.iter().flatten().all(QuadElement::is_zero));
        // trace 4 appears as -4 in the x^2 coefficient
        assert_eq!(p[2], QuadElement::from_i64(-4));
    }

    #[test]
    fn primitive() {
        let v = vec![
            QuadElement::rational(Rational::from((-2, 3))),
            QuadElement::rational(Rational::from((4, 9))),
        ];
        let p = primitive_integral(&v);
        assert_eq!(p, vec![QuadElement::from_i64(3), QuadElement::from_i64(-2)]);
    }
}

use itertools::Itertools;

use super::{FieldError, KForm, KVector};
use crate::exprs::ScalarExpr;

/// Exterior derivative. On a top-degree form the result is the zero form of
/// degree `k + 1` (with no components).
pub fn exterior_derivative(w: &KForm) -> KForm {
    let k = w.degree();
    let dim = w.dim();
    let mut out = KForm::zero(k + 1, dim);
    if k + 1 > dim {
        return out;
    }
    for tuple in (0..dim).combinations(k + 1) {
        let mut acc = ScalarExpr::zero();
        for r in 0..=k {
            let mut rest = tuple.clone();
            let var = rest.remove(r);
            let c = w.get(&rest);
            if c.is_zero() {
                continue;
            }
            let d = c.differentiate(var);
            acc = if r % 2 == 0 { &acc + &d } else { &acc - &d };
        }
        out.set_sorted(tuple, acc);
    }
    out
}

/// Half the Schouten bracket of a bivector with itself:
/// `J^{ijk} = Pi^{il} d_l Pi^{jk} + Pi^{jl} d_l Pi^{ki} + Pi^{kl} d_l Pi^{ij}`.
pub fn schouten_half(pi: &KVector) -> Result<KVector, FieldError> {
    if pi.degree() != 2 {
        return Err(FieldError::DegreeMismatch {
            expected: 2,
            got: pi.degree(),
        });
    }
    let n = pi.dim();
    let m = pi.matrix()?;
    // dpi[l][a][b] = d_l Pi^{ab}
    let dpi: Vec<Vec<Vec<ScalarExpr>>> = (0..n)
        .map(|l| {
            (0..n)
                .map(|a| (0..n).map(|b| m[a][b].differentiate(l)).collect())
                .collect()
        })
        .collect();
    let cyc = |i: usize, j: usize, k: usize| -> ScalarExpr {
        (0..n)
            .filter(|&l| !m[i][l].is_zero() && !dpi[l][j][k].is_zero())
            .map(|l| &m[i][l] * &dpi[l][j][k])
            .sum()
    };
    let mut out = KVector::zero(3, n);
    for t in (0..n).combinations(3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let v = &(&cyc(i, j, k) + &cyc(j, k, i)) + &cyc(k, i, j);
        out.set_sorted(t, v);
    }
    Ok(out)
}

const PERMS3: [([usize; 3], i32); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

/// `C^{ijk} = Pi^{il} Pi^{jm} Pi^{kn} H_{lmn}`, summed over `l, m, n`.
pub fn triple_contraction(h: &KForm, pi: &KVector) -> Result<KVector, FieldError> {
    if h.degree() != 3 {
        return Err(FieldError::DegreeMismatch {
            expected: 3,
            got: h.degree(),
        });
    }
    if pi.degree() != 2 {
        return Err(FieldError::DegreeMismatch {
            expected: 2,
            got: pi.degree(),
        });
    }
    if h.dim() != pi.dim() {
        return Err(FieldError::DimensionMismatch(h.dim(), pi.dim()));
    }
    let n = pi.dim();
    let m = pi.matrix()?;
    let h_terms: Vec<(&Vec<usize>, &ScalarExpr)> = h.components().collect();
    // H is summed over its stored increasing tuples; each expands to the 3!
    // orderings with the permutation sign.
    let component = |i: usize, j: usize, k: usize| -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for (lmn, hv) in &h_terms {
            for (p, sign) in PERMS3 {
                let (l, mm, nn) = (lmn[p[0]], lmn[p[1]], lmn[p[2]]);
                if m[i][l].is_zero() || m[j][mm].is_zero() || m[k][nn].is_zero() {
                    continue;
                }
                let t = &(&(&m[i][l] * &m[j][mm]) * &m[k][nn]) * *hv;
                acc = if sign > 0 { &acc + &t } else { &acc - &t };
            }
        }
        acc
    };
    let mut out = KVector::zero(3, n);
    for t in (0..n).combinations(3) {
        let v = component(t[0], t[1], t[2]);
        let swapped = component(t[1], t[0], t[2]);
        if !(&v + &swapped).is_zero() {
            return Err(FieldError::NotAntisymmetric(t));
        }
        out.set_sorted(t, v);
    }
    Ok(out)
}

/// Inverse of a non-degenerate 2-form, read as a bivector:
/// `Pi^{ij} = (omega^{-1})^{ij}`, so that `Pi^{ij} omega_{jk} = delta^i_k`.
pub fn invert_two_form(w: &KForm) -> Result<KVector, FieldError> {
    if w.degree() != 2 {
        return Err(FieldError::DegreeMismatch {
            expected: 2,
            got: w.degree(),
        });
    }
    let n = w.dim();
    if n % 2 == 1 {
        return Err(FieldError::OddDimension(n));
    }
    // Gauss-Jordan on [omega | I] over the field of rational functions.
    let mut a = w.matrix()?;
    let mut inv: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ScalarExpr::one()
                    } else {
                        ScalarExpr::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(FieldError::DegenerateForm)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip().expect("pivot is nonzero");
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    let mut out = KVector::zero(2, n);
    for t in (0..n).combinations(2) {
        let v = inv[t[0]][t[1]].clone();
        out.set_sorted(t, v);
    }
    Ok(out)
}

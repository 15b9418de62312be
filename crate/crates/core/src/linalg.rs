//! Small dense complex solves. Sizes are fixed and tiny, so plain arrays beat
//! pulling in a linear-algebra crate.

use num_complex::Complex64;

/// Solves `a x = b` for each right-hand side in `rhs` by Gaussian elimination
/// with partial pivoting after row and column equilibration. Returns `None`
/// when a pivot of the equilibrated matrix drops below `rel_tol`.
pub(crate) fn solve<const N: usize, const M: usize>(
    mut a: [[Complex64; N]; N],
    mut rhs: [[Complex64; N]; M],
    rel_tol: f64,
) -> Option<[[Complex64; N]; M]> {
    for r in 0..N {
        let m = a[r].iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        if !(m > 0.0 && m.is_finite()) {
            return None;
        }
        for z in a[r].iter_mut() {
            *z /= m;
        }
        for b in rhs.iter_mut() {
            b[r] /= m;
        }
    }
    let mut col_scale = [1.0; N];
    for (c, cs) in col_scale.iter_mut().enumerate() {
        let m = (0..N).map(|r| a[r][c].norm()).fold(0.0_f64, f64::max);
        if !(m > 0.0) {
            return None;
        }
        for row in a.iter_mut() {
            row[c] /= m;
        }
        *cs = m;
    }
    let floor = rel_tol;
    for col in 0..N {
        let (piv, mag) = (col..N)
            .map(|r| (r, a[r][col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(mag > floor) {
            return None;
        }
        if piv != col {
            a.swap(piv, col);
            for b in rhs.iter_mut() {
                b.swap(piv, col);
            }
        }
        let inv = a[col][col].inv();
        for r in col + 1..N {
            let f = a[r][col] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pivot_row = a[col];
            for (x, p) in a[r].iter_mut().zip(pivot_row).skip(col) {
                *x -= f * p;
            }
            for b in rhs.iter_mut() {
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    for b in rhs.iter_mut() {
        for r in (0..N).rev() {
            let mut acc = b[r];
            for c in r + 1..N {
                acc -= a[r][c] * b[c];
            }
            b[r] = acc / a[r][r];
        }
        for (z, cs) in b.iter_mut().zip(col_scale) {
            *z /= cs;
        }
    }
    Some(rhs)
}

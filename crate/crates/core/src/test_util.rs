//! Shared oracles for unit tests.

use crate::rational::Rational;

/// Solves `A·x = b` over the rationals by Gauss–Jordan elimination; `A`
/// square and invertible.
pub(crate) fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("invertible");
        a.swap(p, c);
        b.swap(p, c);
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &a[r][k] - &f * &a[c][k];
                a[r][k] = v;
            }
            let v = &b[r] - &f * &b[c];
            b[r] = v;
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

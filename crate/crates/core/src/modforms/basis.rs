//! Level one bases and the weakly holomorphic solver.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::eisenstein::eisenstein;
use super::eta::delta_power;
use super::ModFormError;
use crate::exactnum::ExactRational;
use crate::qseries::{QSeries, SeriesMeta};

/// Dimension of `M_k(SL_2(Z))`.
pub fn level_one_dimension(k: i64) -> usize {
    if k < 0 || k % 2 == 1 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// `E_4^a E_6^b` of weight `w`, with `b` in {0, 1}.
fn e4_e6_monomial(w: i64, prec: i64) -> Result<QSeries, ModFormError> {
    let b = if w % 4 == 0 { 0 } else { 1 };
    let a = (w - 6 * b) / 4;
    if a < 0 {
        return Err(ModFormError::InvalidWeight(w));
    }
    let p = prec as usize;
    let mut f = QSeries::from_integers(0, prec, vec![1.into()])?;
    if a > 0 {
        f = eisenstein(4, p)?.pow(a as u32)?;
    }
    if b == 1 {
        f = &f * &eisenstein(6, p)?;
    }
    Ok(f)
}

/// Miller basis of `M_k`: element `i` has `a(j) = [i == j]` for `j < dim`.
pub fn miller_basis(k: i64, prec: i64) -> Result<Vec<QSeries>, ModFormError> {
    if k < 0 || k % 2 == 1 {
        return Err(ModFormError::InvalidWeight(k));
    }
    let d = level_one_dimension(k);
    let prec = prec.max(d as i64);
    let mut rows: Vec<QSeries> = Vec::with_capacity(d);
    for i in 0..d as i64 {
        let g = e4_e6_monomial(k - 12 * i, prec)?;
        let f = if i == 0 { g } else { &delta_power(i, prec) * &g };
        rows.push(f.truncate(prec));
    }
    // rows[i] = q^i + ...; clear the entries above the diagonal from the bottom up.
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = rows[i].coefficient(j as i64)?;
            if !c.is_zero() {
                rows[i] = &rows[i] - &rows[j].scale(&c);
            }
        }
    }
    let meta = SeriesMeta { weight: Some(k), level: Some(1), character: None };
    Ok(rows.into_iter().map(|r| r.with_meta(meta.clone())).collect())
}

/// Writes a holomorphic form as `sum x_i B_i` in the Miller basis and reports
/// the first exponent where the combination differs from `f`, if any.
pub fn decompose_in_basis(f: &QSeries, basis: &[QSeries]) -> Result<(Vec<ExactRational>, Option<i64>), ModFormError> {
    let x: Vec<ExactRational> = (0..basis.len() as i64).map(|i| f.coefficient(i)).collect::<Result<_, _>>()?;
    let mut combo = QSeries::rational_zero(f.prec());
    for (b, c) in basis.iter().zip(&x) {
        combo = &combo + &b.scale(c);
    }
    let diff = f - &combo;
    Ok((x, diff.valuation()))
}

/// The unique weight-`k` weakly holomorphic form with the given principal part
/// (exponents `<= 0`; unlisted negative exponents are zero) and vanishing at
/// the listed exponents.
pub fn weakly_holomorphic_solve(
    k: i64,
    principal: &BTreeMap<i64, ExactRational>,
    vanishing: &BTreeSet<i64>,
    prec: i64,
) -> Result<QSeries, ModFormError> {
    if k % 2 == 1 {
        return Err(ModFormError::InvalidWeight(k));
    }
    if let Some((&e, _)) = principal.iter().find(|(&e, _)| e > 0) {
        return Err(ModFormError::InvalidConstraint(e));
    }
    let t = principal.keys().next().map_or(0, |&e| (-e).max(0));
    let w = k + 12 * t;
    let d = level_one_dimension(w);

    let mut constraints: BTreeMap<i64, ExactRational> = BTreeMap::new();
    for e in -t..0 {
        constraints.insert(e, principal.get(&e).cloned().unwrap_or_default());
    }
    if let Some(c) = principal.get(&0) {
        constraints.insert(0, c.clone());
    }
    for &e in vanishing {
        if let Some(prev) = constraints.insert(e, ExactRational::zero()) {
            if !prev.is_zero() {
                return Err(ModFormError::Obstructed);
            }
        }
    }

    let top = constraints.keys().next_back().copied().unwrap_or(0);
    let small = (top + t + 1).max(d as i64);
    let inv = delta_power(-t, small - t);
    let small_basis = miller_basis(w, small)?;
    let columns: Vec<QSeries> = small_basis.iter().map(|b| b * &inv).collect();

    let mut matrix: Vec<Vec<ExactRational>> = Vec::new();
    for (&e, value) in &constraints {
        let mut row: Vec<ExactRational> =
            columns.iter().map(|c| c.coefficient(e)).collect::<Result<_, _>>()?;
        row.push(value.clone());
        matrix.push(row);
    }
    let x = solve_unique(matrix, d)?;

    let mut g = QSeries::rational_zero(prec + t);
    for (b, c) in miller_basis(w, prec + t)?.iter().zip(&x) {
        if !c.is_zero() {
            g = &g + &b.truncate(prec + t).scale(c);
        }
    }
    let f = if t == 0 { g.truncate(prec) } else { (&g * &delta_power(-t, prec)).truncate(prec) };
    Ok(f.with_meta(SeriesMeta { weight: Some(k), level: Some(1), character: None }))
}

/// Gauss-Jordan elimination on an augmented matrix with `n` unknowns.
fn solve_unique(mut m: Vec<Vec<ExactRational>>, n: usize) -> Result<Vec<ExactRational>, ModFormError> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(r) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < pivot_row {
                    let (a, b) = m.split_at_mut(pivot_row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[pivot_row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &factor * s;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[n].is_zero()) {
        return Err(ModFormError::Obstructed);
    }
    if pivots.len() < n {
        return Err(ModFormError::Underdetermined { rank: pivots.len(), dim: n });
    }
    let mut x = vec![ExactRational::zero(); n];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = m[row][n].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    #[test]
    fn dimensions() {
        let dims: Vec<usize> = (0..=26).step_by(2).map(level_one_dimension).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3, 2]);
    }

    #[test]
    fn miller_basis_is_echelon() {
        let basis = miller_basis(24, 20).unwrap();
        assert_eq!(basis.len(), 3);
        for (i, b) in basis.iter().enumerate() {
            for j in 0..3 {
                let expected = if i == j { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(b.coefficient(j as i64).unwrap(), expected);
            }
            assert!(b.iter().all(|(_, c)| c.is_integer()));
        }
    }

    #[test]
    fn holomorphic_e12_solution() {
        let principal = BTreeMap::from([(0, rat(1, 1))]);
        let vanishing = BTreeSet::from([1]);
        let f = weakly_holomorphic_solve(12, &principal, &vanishing, 10).unwrap();
        let e12 = eisenstein(12, 10).unwrap();
        let delta = delta_power(1, 10);
        let expected = &e12 - &delta.scale(&rat(65520, 691));
        assert_eq!(f, expected.with_meta(f.meta.clone()));
    }

    #[test]
    fn only_zero_vanishes_at_zero_and_one() {
        let f = weakly_holomorphic_solve(12, &BTreeMap::new(), &BTreeSet::from([0, 1]), 10).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn underdetermined_and_obstructed() {
        let err = weakly_holomorphic_solve(24, &BTreeMap::new(), &BTreeSet::from([0]), 10).unwrap_err();
        assert!(matches!(err, ModFormError::Underdetermined { rank: 1, dim: 3 }));
        let err = weakly_holomorphic_solve(12, &BTreeMap::from([(0, rat(1, 1))]), &BTreeSet::from([1, 2]), 10);
        assert_eq!(err.unwrap_err(), ModFormError::Obstructed);
    }

    #[test]
    fn seed_form_low_coefficients() {
        let principal = BTreeMap::from([(-1, rat(-1, 1))]);
        let f = weakly_holomorphic_solve(12, &principal, &BTreeSet::from([0, 1]), 5).unwrap();
        assert_eq!(f.coefficient(-1).unwrap(), rat(-1, 1));
        assert_eq!(f.coefficient(0).unwrap(), rat(0, 1));
        assert_eq!(f.coefficient(1).unwrap(), rat(0, 1));
        // 11! c(2) = -929888675100 and a(2) = 2^11 c(2)
        let expected = rat_int(-929888675100i64) * rat_int(2048) / rat_int(39916800);
        assert_eq!(f.coefficient(2).unwrap(), expected);
    }
}

use super::gf::{FieldCtx, FieldElement};
use crate::error::FieldError;

/// `Σ_j coeffs[j] · u^j`, by Horner's rule.
pub fn evaluate(ctx: &FieldCtx, coeffs: &[FieldElement], u: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &a| ctx.add(ctx.mul(acc, u), a))
}

/// Solves `Σ_j a_j u_i^j = v_i` for `a_0..a_{n-1}` by Gaussian elimination.
pub fn solve_vandermonde(
    ctx: &FieldCtx,
    us: &[FieldElement],
    vs: &[FieldElement],
) -> Result<Vec<FieldElement>, FieldError> {
    let n = us.len();
    if vs.len() != n {
        return Err(FieldError::LengthMismatch {
            us: n,
            vs: vs.len(),
        });
    }
    for (i, u) in us.iter().enumerate() {
        if us[..i].contains(u) {
            return Err(FieldError::Singular);
        }
    }

    // augmented rows [u^0, u^1, ..., u^{n-1} | v]
    let mut rows: Vec<Vec<FieldElement>> = us
        .iter()
        .zip(vs)
        .map(|(&u, &v)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut power = FieldElement::ONE;
            for _ in 0..n {
                row.push(power);
                power = ctx.mul(power, u);
            }
            row.push(v);
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(FieldError::Singular)?;
        rows.swap(col, pivot);
        let inv = ctx.inv(rows[col][col])?;
        for entry in rows[col].iter_mut() {
            *entry = ctx.mul(*entry, inv);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if r == col || factor.is_zero() {
                continue;
            }
            for (entry, &p) in row.iter_mut().zip(&pivot_row) {
                *entry = ctx.add(*entry, ctx.mul(factor, p));
            }
        }
    }
    Ok(rows.into_iter().map(|row| row[n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gf::build_field;

    #[test]
    fn one_by_one() {
        let ctx = build_field(6).unwrap();
        let v = ctx.element(37).unwrap();
        let u = ctx.element(5).unwrap();
        assert_eq!(solve_vandermonde(&ctx, &[u], &[v]).unwrap(), vec![v]);
    }

    #[test]
    fn gf4_two_points_matches_enumeration() {
        // us = (1, x); for every (a0, a1) the forward values determine it uniquely
        let ctx = build_field(2).unwrap();
        let us = [FieldElement::ONE, ctx.element(0b10).unwrap()];
        for a0 in ctx.elements() {
            for a1 in ctx.elements() {
                let vs: Vec<FieldElement> =
                    us.iter().map(|&u| evaluate(&ctx, &[a0, a1], u)).collect();
                let preimages: Vec<(FieldElement, FieldElement)> = ctx
                    .elements()
                    .flat_map(|b0| ctx.elements().map(move |b1| (b0, b1)))
                    .filter(|&(b0, b1)| {
                        us.iter()
                            .zip(&vs)
                            .all(|(&u, &v)| evaluate(&ctx, &[b0, b1], u) == v)
                    })
                    .collect();
                assert_eq!(preimages, vec![(a0, a1)]);
                assert_eq!(solve_vandermonde(&ctx, &us, &vs).unwrap(), vec![a0, a1]);
            }
        }
    }

    #[test]
    fn duplicate_points_are_singular() {
        let ctx = build_field(6).unwrap();
        let u = ctx.element(3).unwrap();
        assert_eq!(
            solve_vandermonde(&ctx, &[u, u], &[FieldElement::ONE, FieldElement::ZERO]),
            Err(FieldError::Singular)
        );
        assert_eq!(
            solve_vandermonde(&ctx, &[u], &[]),
            Err(FieldError::LengthMismatch { us: 1, vs: 0 })
        );
    }

    #[test]
    fn empty_system() {
        let ctx = build_field(2).unwrap();
        assert_eq!(solve_vandermonde(&ctx, &[], &[]).unwrap(), vec![]);
    }
}

//! Independent second code paths used to cross-check the product layer.
//!
//! Nothing here is called by the production paths: the residue-engine
//! products pair truncated kernel series against mode actions, the Wick
//! expansion computes untwisted modes from the normal-ordered generating
//! function, and the classical integer-level formulas are written without
//! any of the step-function machinery. Agreement is asserted by tests and
//! the acceptance suite, never assumed.

use crate::error::{Error, Result};
use crate::fock::{FockKey, FockVector, Sector, VoaContext};
use crate::laurent::{expand_kernel, TruncSeries};
use crate::rat::{int_binomial, rat_binomial, FracExp, Rat};
use crate::zhu::ZhuContext;

/// Pair a certified kernel series against the mode family of `u` on
/// `target`: sum of kernel[e] * u_e target over the support. Refuses when
/// the certified range does not cover every mode that can act.
pub fn pair_kernel(
    voa: &VoaContext,
    kernel: &TruncSeries,
    u: &FockVector,
    target: &FockVector,
) -> Result<FockVector> {
    if u.is_zero() || target.is_zero() {
        return Ok(FockVector::zero(target.sector()));
    }
    let du2 = u.max_depth2().unwrap_or(0);
    let dt2 = target.max_depth2().unwrap_or(0);
    let top_mode = FracExp::from_doubled(du2 + dt2 - 2);
    if !kernel.certified_through(top_mode) {
        return Err(Error::UncertifiedResidue {
            order: kernel.trunc().unwrap(),
        });
    }
    let mut acc = FockVector::zero(target.sector());
    for (e, c) in kernel.support() {
        let part = voa.mode_act(u, *e, target)?;
        acc.add_scaled(&part, c);
    }
    Ok(acc)
}

fn homogeneous(u: &FockVector) -> Result<(i64, u32)> {
    u.homogeneous_type()
        .ok_or_else(|| Error::InvalidArgument("oracle products take homogeneous operands".into()))
}

/// Circle product through the series engine.
pub fn circ_via_residue(ctx: &ZhuContext, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    if u.is_zero() || v.is_zero() {
        return Ok(FockVector::zero(v.sector()));
    }
    let (wu2, pu) = homogeneous(u)?;
    let r = if ctx.voa.order() == 1 { 0 } else { pu };
    let (alpha, dpow) = ctx.kernel(wu2, r)?;
    let e_max = (wu2 + v.max_depth2().unwrap_or(0) - 2) / 2;
    let order = (e_max + dpow).max(0) as u32;
    let kernel = expand_kernel(&alpha, dpow, order);
    pair_kernel(&ctx.voa, &kernel, u, v)
}

/// Left star product through the series engine: the kernel is assembled by
/// series addition of the shifted binomial expansions.
pub fn star_left_via_residue(ctx: &ZhuContext, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    if u.is_zero() || v.is_zero() {
        return Ok(FockVector::zero(v.sector()));
    }
    let (wu2, pu) = homogeneous(u)?;
    if ctx.voa.order() > 1 && pu != 0 {
        return Ok(FockVector::zero(v.sector()));
    }
    let l = ctx.l();
    let alpha = Rat::new(wu2, 2) + Rat::from_int(l);
    let e_max = (wu2 + v.max_depth2().unwrap_or(0) - 2) / 2;
    let mut kernel = TruncSeries::zero_certified_to(FracExp::from_int(e_max.max(0)));
    for m in 0..=l {
        let c = int_binomial(m + l, l as u32);
        let c = if m % 2 == 0 { c } else { -c };
        let order = (e_max + m + l + 1).max(0) as u32;
        kernel = kernel.add(&expand_kernel(&alpha, m + l + 1, order).scale(&c));
    }
    pair_kernel(&ctx.voa, &kernel, u, v)
}

/// Right star product through the series engine.
pub fn star_right_via_residue(ctx: &ZhuContext, w: &FockVector, u: &FockVector) -> Result<FockVector> {
    if u.is_zero() || w.is_zero() {
        return Ok(FockVector::zero(w.sector()));
    }
    let (wu2, pu) = homogeneous(u)?;
    if ctx.voa.order() > 1 && pu != 0 {
        return Ok(FockVector::zero(w.sector()));
    }
    let l = ctx.l();
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    let e_max = (wu2 + w.max_depth2().unwrap_or(0) - 2) / 2;
    let mut kernel = TruncSeries::zero_certified_to(FracExp::from_int(e_max.max(0)));
    for m in 0..=l {
        let c = int_binomial(m + l, l as u32) * sign.clone();
        let alpha = Rat::new(wu2, 2) + Rat::from_int(m - 1);
        let order = (e_max + m + l + 1).max(0) as u32;
        kernel = kernel.add(&expand_kernel(&alpha, m + l + 1, order).scale(&c));
    }
    pair_kernel(&ctx.voa, &kernel, u, w)
}

/// Oscillator coefficient of the derived field: the m-th mode of the
/// normal-ordered factor carrying depth n contributes
/// (-1)^{n-1} C(m+n-1, n-1).
fn derived_coeff(n: i64, m: i64) -> Rat {
    let c = int_binomial(m + n - 1, (n - 1) as u32);
    if (n - 1).rem_euclid(2) == 0 {
        c
    } else {
        -c
    }
}

fn apply_annihilators(modes: &[i64], w: &FockKey) -> (Rat, Option<FockKey>) {
    let mut coef = Rat::one();
    let mut depths: Vec<u16> = w.depths().iter().map(|d| d.doubled().unwrap() as u16).collect();
    for &m in modes {
        let d2 = (2 * m) as u16;
        let count = depths.iter().filter(|&&x| x == d2).count();
        if count == 0 {
            return (Rat::zero(), None);
        }
        coef = coef * Rat::from_int(m) * Rat::from_int(count as i64);
        let pos = depths.iter().position(|&x| x == d2).unwrap();
        depths.remove(pos);
    }
    (coef, Some(FockKey::from_doubled(Sector::Untwisted, depths).unwrap()))
}

/// Untwisted mode action computed by brute Wick expansion of the
/// normal-ordered product: enumerate all oscillator assignments for the
/// factors of `u` subject to the total-degree constraint, apply annihilation
/// modes to `w` and prepend the creations.
pub fn wick_mode_act(u: &FockKey, k: i64, w: &FockKey) -> FockVector {
    assert_eq!(u.sector(), Sector::Untwisted);
    assert_eq!(w.sector(), Sector::Untwisted);
    let factors: Vec<i64> = u.depths().iter().map(|d| d.numer()).collect();
    let target: i64 = k + 1 - factors.iter().sum::<i64>();
    let result_w2 = w.depth2() + u.depth2() - 2 * k - 2;
    if result_w2 < 0 {
        return FockVector::zero(Sector::Untwisted);
    }
    let max_create = result_w2 / 2; // no single created depth can exceed the result weight
    let max_ann = w.depths().iter().map(|d| d.numer()).max().unwrap_or(0);

    let mut acc = FockVector::zero(Sector::Untwisted);
    let mut assignment: Vec<i64> = Vec::with_capacity(factors.len());

    fn recurse(
        factors: &[i64],
        idx: usize,
        remaining: i64,
        max_create: i64,
        max_ann: i64,
        assignment: &mut Vec<i64>,
        w: &FockKey,
        acc: &mut FockVector,
    ) {
        let left = (factors.len() - idx) as i64;
        if idx == factors.len() {
            if remaining != 0 {
                return;
            }
            let mut coef = Rat::one();
            for (i, &m) in assignment.iter().enumerate() {
                coef = coef * derived_coeff(factors[i], m);
                if coef.is_zero() {
                    return;
                }
            }
            let ann: Vec<i64> = assignment.iter().copied().filter(|&m| m > 0).collect();
            let (ann_coef, rest) = apply_annihilators(&ann, w);
            if ann_coef.is_zero() {
                return;
            }
            let rest = rest.unwrap();
            let mut depths: Vec<u16> = rest.depths().iter().map(|d| (2 * d.numer()) as u16).collect();
            for &m in assignment.iter().filter(|&&m| m < 0) {
                depths.push((-2 * m) as u16);
            }
            let key = FockKey::from_doubled(Sector::Untwisted, depths).unwrap();
            acc.add_term(key, &(coef * ann_coef));
            return;
        }
        // feasibility window: the remaining factors each lie in
        // [-max_create, max_ann], so m must leave an achievable tail sum
        let mut m = (-max_create).max(remaining - (left - 1) * max_ann);
        let top = max_ann.min(remaining + (left - 1) * max_create);
        while m <= top {
            if m != 0 {
                assignment.push(m);
                recurse(factors, idx + 1, remaining - m, max_create, max_ann, assignment, w, acc);
                assignment.pop();
            }
            m += 1;
        }
    }

    recurse(
        &factors,
        0,
        target,
        max_create,
        max_ann,
        &mut assignment,
        w,
        &mut acc,
    );
    acc
}

/// Classical integer-level circle product, written directly from the
/// untwisted definitions with denominator power 2l+2.
pub fn classical_circ(voa: &VoaContext, l: i64, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    let (wu2, _) = homogeneous(u)?;
    let alpha = Rat::new(wu2, 2) + Rat::from_int(l);
    let dv2 = v.max_depth2().unwrap_or(0);
    let jmax = (wu2 + dv2 - 2) / 2 + 2 * l + 2;
    let mut acc = FockVector::zero(v.sector());
    for j in 0..=jmax.max(-1) {
        let c = rat_binomial(&alpha, j as u32);
        if c.is_zero() {
            continue;
        }
        acc.add_scaled(&voa.mode_act(u, FracExp::from_int(j - 2 * l - 2), v)?, &c);
    }
    Ok(acc)
}

/// Classical integer-level left product.
pub fn classical_star_left(voa: &VoaContext, l: i64, u: &FockVector, v: &FockVector) -> Result<FockVector> {
    let (wu2, _) = homogeneous(u)?;
    let alpha = Rat::new(wu2, 2) + Rat::from_int(l);
    let dv2 = v.max_depth2().unwrap_or(0);
    let mut acc = FockVector::zero(v.sector());
    for m in 0..=l {
        let outer = int_binomial(m + l, l as u32);
        let outer = if m % 2 == 0 { outer } else { -outer };
        for j in 0..=((wu2 + dv2 - 2) / 2 + m + l + 1).max(-1) {
            let c = rat_binomial(&alpha, j as u32);
            if c.is_zero() {
                continue;
            }
            acc.add_scaled(
                &voa.mode_act(u, FracExp::from_int(j - m - l - 1), v)?,
                &(&outer * &c),
            );
        }
    }
    Ok(acc)
}

/// Classical integer-level right product.
pub fn classical_star_right(voa: &VoaContext, l: i64, w: &FockVector, u: &FockVector) -> Result<FockVector> {
    let (wu2, _) = homogeneous(u)?;
    let sign = if l % 2 == 0 { Rat::one() } else { -Rat::one() };
    let dw2 = w.max_depth2().unwrap_or(0);
    let mut acc = FockVector::zero(w.sector());
    for m in 0..=l {
        let outer = int_binomial(m + l, l as u32) * sign.clone();
        let alpha = Rat::new(wu2, 2) + Rat::from_int(m - 1);
        for j in 0..=((wu2 + dw2 - 2) / 2 + m + l + 1).max(-1) {
            let c = rat_binomial(&alpha, j as u32);
            if c.is_zero() {
                continue;
            }
            acc.add_scaled(
                &voa.mode_act(u, FracExp::from_int(j - m - l - 1), w)?,
                &(&outer * &c),
            );
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{keys_up_to, Aut};
    use crate::rat::ModIndex;
    use crate::zhu::{circ_v, star_right_v, star_v};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wick_agrees_with_recursion() {
        let voa = VoaContext::new(Aut::Id, 14);
        let mut rng = ChaCha8Rng::seed_from_u64(0xf0c5);
        let u_keys = keys_up_to(Sector::Untwisted, 8);
        let w_keys = keys_up_to(Sector::Untwisted, 8);
        for _ in 0..200 {
            let uk = u_keys.choose(&mut rng).unwrap();
            let wk = w_keys.choose(&mut rng).unwrap();
            let k = rng.gen_range(-4i64..=4);
            let direct = voa
                .mode_act(
                    &FockVector::monomial(uk.clone()),
                    FracExp::from_int(k),
                    &FockVector::monomial(wk.clone()),
                )
                .unwrap();
            let wick = wick_mode_act(uk, k, wk);
            assert_eq!(direct, wick, "mismatch at u={uk}, k={k}, w={wk}");
        }
    }

    #[test]
    fn residue_paths_match_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xce11);
        for (aut, l, i) in [
            (Aut::Id, 0u32, 0u32),
            (Aut::Id, 1, 0),
            (Aut::Theta, 0, 0),
            (Aut::Theta, 0, 1),
            (Aut::Theta, 1, 0),
        ] {
            let voa = VoaContext::new(aut, 16);
            let t = voa.order();
            let ctx = ZhuContext::new(voa, ModIndex::new(l, i, t).unwrap()).unwrap();
            let keys = keys_up_to(Sector::Untwisted, 6);
            for _ in 0..25 {
                let uk = keys.choose(&mut rng).unwrap();
                let u = FockVector::monomial(uk.clone());
                let mut v = FockVector::zero(Sector::Untwisted);
                for _ in 0..rng.gen_range(1..=2) {
                    v.add_term(
                        keys.choose(&mut rng).unwrap().clone(),
                        &Rat::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)),
                    );
                }
                assert_eq!(
                    circ_v(&ctx, &u, &v).unwrap(),
                    circ_via_residue(&ctx, &u, &v).unwrap()
                );
                assert_eq!(
                    star_v(&ctx, &u, &v).unwrap(),
                    star_left_via_residue(&ctx, &u, &v).unwrap()
                );
                assert_eq!(
                    star_right_v(&ctx, &v, &u).unwrap(),
                    star_right_via_residue(&ctx, &v, &u).unwrap()
                );
            }
        }
    }

    #[test]
    fn classical_formulas_match_general_path_at_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc1a5);
        for l in 0u32..=1 {
            let voa = VoaContext::new(Aut::Id, 14);
            let ctx = ZhuContext::new(voa.clone(), ModIndex::new(l, 0, 1).unwrap()).unwrap();
            let keys = keys_up_to(Sector::Untwisted, 6);
            for _ in 0..50 {
                let uk = keys.choose(&mut rng).unwrap();
                let u = FockVector::monomial(uk.clone());
                let v = FockVector::monomial(keys.choose(&mut rng).unwrap().clone());
                assert_eq!(
                    circ_v(&ctx, &u, &v).unwrap(),
                    classical_circ(&voa, i64::from(l), &u, &v).unwrap()
                );
                assert_eq!(
                    star_v(&ctx, &u, &v).unwrap(),
                    classical_star_left(&voa, i64::from(l), &u, &v).unwrap()
                );
                assert_eq!(
                    star_right_v(&ctx, &v, &u).unwrap(),
                    classical_star_right(&voa, i64::from(l), &v, &u).unwrap()
                );
            }
        }
    }
}

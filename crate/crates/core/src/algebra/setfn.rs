//! Functions on the subset lattice of a small ground set `{0, .., r-1}`.
//!
//! Subsets are bitmasks. The transforms here are dense and exponential in `r`;
//! they serve as reference implementations for the engine's recurrences.

use super::ring::RingElement;
use super::AlgebraError;

pub const MAX_GROUND_SET: usize = 25;

#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction<T> {
    ground: usize,
    values: Vec<T>,
}

impl<T: RingElement> SetFunction<T> {
    pub fn new(ground: usize, values: Vec<T>) -> Result<Self, AlgebraError> {
        if ground > MAX_GROUND_SET {
            return Err(AlgebraError::GroundSetTooLarge(ground));
        }
        if values.len() != 1usize << ground {
            return Err(AlgebraError::TableLength { expected: 1 << ground, found: values.len() });
        }
        Ok(SetFunction { ground, values })
    }

    pub fn from_fn(ground: usize, f: impl FnMut(usize) -> T) -> Result<Self, AlgebraError> {
        if ground > MAX_GROUND_SET {
            return Err(AlgebraError::GroundSetTooLarge(ground));
        }
        Self::new(ground, (0..1usize << ground).map(f).collect())
    }

    /// `f_A`: `value` at `set`, zero elsewhere.
    pub fn singleton(ground: usize, set: usize, value: T) -> Result<Self, AlgebraError> {
        let zero = value.zero_like();
        Self::from_fn(ground, |x| if x == set { value.clone() } else { zero.clone() })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, set: usize) -> &T {
        &self.values[set]
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ground != other.ground {
            return Err(AlgebraError::GroundSetMismatch(self.ground, other.ground));
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect();
        Ok(SetFunction { ground: self.ground, values })
    }

    pub fn pointwise_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect();
        Ok(SetFunction { ground: self.ground, values })
    }
}

fn sweep<T: RingElement>(values: &mut [T], ground: usize, subtract: bool) {
    for bit in 0..ground {
        let b = 1usize << bit;
        for y in 0..values.len() {
            if y & b != 0 {
                let lower = values[y ^ b].clone();
                values[y] = if subtract { values[y].sub(&lower) } else { values[y].add(&lower) };
            }
        }
    }
}

/// `ζf[Y] = Σ_{X ⊆ Y} f[X]`.
pub fn zeta<T: RingElement>(f: &SetFunction<T>) -> SetFunction<T> {
    let mut values = f.values.clone();
    sweep(&mut values, f.ground, false);
    SetFunction { ground: f.ground, values }
}

/// `μf[Y] = Σ_{X ⊆ Y} (-1)^{|Y \ X|} f[X]`, the inverse of [`zeta`].
pub fn mobius<T: RingElement>(f: &SetFunction<T>) -> SetFunction<T> {
    let mut values = f.values.clone();
    sweep(&mut values, f.ground, true);
    SetFunction { ground: f.ground, values }
}

/// `(f * g)[X] = Σ_{X' ⊆ X} f[X'] g[X \ X']`, by direct summation.
pub fn subset_convolve<T: RingElement>(f: &SetFunction<T>, g: &SetFunction<T>) -> Result<SetFunction<T>, AlgebraError> {
    f.check_same(g)?;
    let zero = f.values[0].zero_like();
    SetFunction::from_fn(f.ground, |x| {
        let mut acc = zero.clone();
        let mut sub = x;
        loop {
            acc = acc.add(&f.values[sub].mul(&g.values[x & !sub]));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & x;
        }
        acc
    })
}

/// `(f *_u g)[X] = Σ_{X1 ∪ X2 = X} f[X1] g[X2]`, by direct summation over pairs.
pub fn union_product<T: RingElement>(f: &SetFunction<T>, g: &SetFunction<T>) -> Result<SetFunction<T>, AlgebraError> {
    f.check_same(g)?;
    let mut out: Vec<T> = vec![f.values[0].zero_like(); f.values.len()];
    for (x1, a) in f.values.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (x2, b) in g.values.iter().enumerate() {
            let u = x1 | x2;
            out[u] = out[u].add(&a.mul(b));
        }
    }
    SetFunction::new(f.ground, out)
}

/// A sequence `f^0, .., f^r` with `f^i[X] = f[X]` at `i = |X|` and `0` below.
#[derive(Clone, Debug, PartialEq)]
pub struct Relaxation<T> {
    ranks: Vec<SetFunction<T>>,
}

impl<T: RingElement> Relaxation<T> {
    pub fn new(ranks: Vec<SetFunction<T>>) -> Result<Self, AlgebraError> {
        let Some(first) = ranks.first() else {
            return Err(AlgebraError::RankCount { expected: 1, found: 0 });
        };
        let ground = first.ground;
        if ranks.len() != ground + 1 {
            return Err(AlgebraError::RankCount { expected: ground + 1, found: ranks.len() });
        }
        if let Some(bad) = ranks.iter().find(|f| f.ground != ground) {
            return Err(AlgebraError::GroundSetMismatch(ground, bad.ground));
        }
        Ok(Relaxation { ranks })
    }

    pub fn ground(&self) -> usize {
        self.ranks[0].ground
    }

    pub fn rank(&self, i: usize) -> &SetFunction<T> {
        &self.ranks[i]
    }

    pub fn ranks(&self) -> &[SetFunction<T>] {
        &self.ranks
    }

    /// The function this relaxation stands for: `X ↦ f^{|X|}[X]`.
    pub fn diagonal(&self) -> SetFunction<T> {
        SetFunction {
            ground: self.ground(),
            values: (0..1usize << self.ground())
                .map(|x| self.ranks[x.count_ones() as usize].values[x].clone())
                .collect(),
        }
    }

    /// Checks the defining property against `f`.
    pub fn relaxes(&self, f: &SetFunction<T>) -> bool {
        if f.ground != self.ground() {
            return false;
        }
        self.ranks.iter().enumerate().all(|(i, fi)| {
            fi.values.iter().enumerate().all(|(x, v)| {
                let size = x.count_ones() as usize;
                match i.cmp(&size) {
                    std::cmp::Ordering::Equal => *v == f.values[x],
                    std::cmp::Ordering::Less => v.is_zero(),
                    std::cmp::Ordering::Greater => true,
                }
            })
        })
    }
}

/// Fixes the unconstrained part: `f^i[X] = f[X]` when `|X| <= i`, else zero.
pub fn canonical_relaxation<T: RingElement>(f: &SetFunction<T>) -> Relaxation<T> {
    let zero = f.values[0].zero_like();
    let ranks = (0..=f.ground)
        .map(|i| SetFunction {
            ground: f.ground,
            values: f
                .values
                .iter()
                .enumerate()
                .map(|(x, v)| if x.count_ones() as usize <= i { v.clone() } else { zero.clone() })
                .collect(),
        })
        .collect();
    Relaxation { ranks }
}

/// `a^i = Σ_{j=0..i} b^j *_u c^{i-j}`; its diagonal is the subset convolution.
pub fn ranked_union_convolve<T: RingElement>(
    b: &Relaxation<T>,
    c: &Relaxation<T>,
) -> Result<Relaxation<T>, AlgebraError> {
    if b.ranks.len() != c.ranks.len() {
        return Err(AlgebraError::RankCount { expected: b.ranks.len(), found: c.ranks.len() });
    }
    b.ranks[0].check_same(&c.ranks[0])?;
    let mut ranks = Vec::with_capacity(b.ranks.len());
    for i in 0..b.ranks.len() {
        let mut acc: Option<SetFunction<T>> = None;
        for j in 0..=i {
            let term = union_product(&b.ranks[j], &c.ranks[i - j])?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.pointwise_add(&term)?,
            });
        }
        ranks.push(acc.expect("at least one term"));
    }
    Ok(Relaxation { ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{Ring, RingValue};
    use crate::algebra::Int;
    use proptest::prelude::*;

    fn ints(ground: usize, vals: &[i64]) -> SetFunction<RingValue> {
        SetFunction::new(ground, vals.iter().map(|&v| RingValue::int(v)).collect()).unwrap()
    }

    fn constant(ground: usize, v: i64) -> SetFunction<RingValue> {
        SetFunction::from_fn(ground, |_| RingValue::int(v)).unwrap()
    }

    fn arb_fn(ground: usize) -> impl Strategy<Value = SetFunction<RingValue>> {
        prop::collection::vec(-20i64..20, 1 << ground).prop_map(move |v| ints(ground, &v))
    }

    fn brute_zeta(f: &SetFunction<RingValue>) -> Vec<i64> {
        let n = f.values().len();
        (0..n)
            .map(|y| (0..n).filter(|x| x & y == *x).map(|x| f.get(x).value().to_string().parse::<i64>().unwrap()).sum())
            .collect()
    }

    #[test]
    fn zeta_of_singleton_is_up_set_indicator() {
        let a = 0b101;
        let f = SetFunction::singleton(3, a, RingValue::int(1)).unwrap();
        let z = zeta(&f);
        for y in 0..8 {
            let expect = if y & a == a { 1 } else { 0 };
            assert_eq!(z.get(y), &RingValue::int(expect));
        }
    }

    #[test]
    fn zeta_of_constant_counts_subsets() {
        let z = zeta(&constant(3, 1));
        for y in 0..8usize {
            assert_eq!(z.get(y), &RingValue::int(1 << y.count_ones()));
        }
    }

    #[test]
    fn mobius_of_constant_is_empty_indicator() {
        let m = mobius(&constant(3, 1));
        assert_eq!(m.get(0), &RingValue::int(1));
        for y in 1..8 {
            assert_eq!(m.get(y), &RingValue::int(0));
        }
    }

    #[test]
    fn subset_convolution_of_ones_is_power_of_two() {
        let c = subset_convolve(&constant(4, 1), &constant(4, 1)).unwrap();
        for x in 0..16usize {
            assert_eq!(c.get(x), &RingValue::int(1 << x.count_ones()));
        }
    }

    #[test]
    fn empty_singleton_is_convolution_identity() {
        let id = SetFunction::singleton(3, 0, RingValue::int(1)).unwrap();
        let g = ints(3, &[3, -1, 4, 1, -5, 9, 2, 6]);
        assert_eq!(subset_convolve(&id, &g).unwrap(), g);
    }

    #[test]
    fn union_of_singletons_lands_on_union() {
        let f = SetFunction::singleton(4, 0b0011, RingValue::int(1)).unwrap();
        let g = SetFunction::singleton(4, 0b0110, RingValue::int(1)).unwrap();
        let u = union_product(&f, &g).unwrap();
        for x in 0..16 {
            assert_eq!(u.get(x), &RingValue::int(i64::from(x == 0b0111)));
        }
    }

    #[test]
    fn union_product_of_ones_counts_covering_pairs() {
        // Pairs (X1, X2) with X1 ∪ X2 = X: each element of X lies in X1 only,
        // X2 only, or both, giving 3^{|X|}. Checked against pair enumeration.
        let u = union_product(&constant(3, 1), &constant(3, 1)).unwrap();
        for x in 0..8usize {
            let pairs =
                (0..8usize).flat_map(|a| (0..8usize).map(move |b| (a, b))).filter(|(a, b)| a | b == x).count() as i64;
            assert_eq!(pairs, 3i64.pow(x.count_ones()));
            assert_eq!(u.get(x), &RingValue::int(pairs));
        }
    }

    #[test]
    fn canonical_relaxation_of_ones() {
        let r = canonical_relaxation(&constant(2, 1));
        assert_eq!(r.rank(0), &ints(2, &[1, 0, 0, 0]));
        assert_eq!(r.rank(2), &constant(2, 1));
    }

    #[test]
    fn rank_trick_on_ones() {
        let f = constant(3, 1);
        let r = canonical_relaxation(&f);
        let out = ranked_union_convolve(&r, &r).unwrap();
        for x in 0..8usize {
            assert_eq!(out.diagonal().get(x), &RingValue::int(1 << x.count_ones()));
        }
    }

    #[test]
    fn mismatches_are_errors() {
        assert!(subset_convolve(&constant(2, 1), &constant(3, 1)).is_err());
        assert!(union_product(&constant(2, 1), &constant(3, 1)).is_err());
        let a = canonical_relaxation(&constant(2, 1));
        let b = canonical_relaxation(&constant(3, 1));
        assert!(ranked_union_convolve(&a, &b).is_err());
        assert!(SetFunction::<RingValue>::new(2, vec![RingValue::int(0); 3]).is_err());
        assert!(SetFunction::from_fn(26, |_| RingValue::int(0)).is_err());
    }

    proptest! {
        #[test]
        fn zeta_matches_double_loop(f in arb_fn(6)) {
            let z = zeta(&f);
            let brute = brute_zeta(&f);
            for (y, b) in brute.iter().enumerate() {
                prop_assert_eq!(z.get(y), &RingValue::int(*b));
            }
        }

        #[test]
        fn zeta_mobius_invert(f in arb_fn(7)) {
            prop_assert_eq!(mobius(&zeta(&f)), f.clone());
            prop_assert_eq!(zeta(&mobius(&f)), f);
        }

        #[test]
        fn union_product_is_pointwise_in_zeta_domain(f in arb_fn(5), g in arb_fn(5)) {
            let lhs = zeta(&union_product(&f, &g).unwrap());
            let rhs = zeta(&f).pointwise_mul(&zeta(&g)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn canonical_relaxation_relaxes(f in arb_fn(5)) {
            let r = canonical_relaxation(&f);
            prop_assert!(r.relaxes(&f));
            prop_assert_eq!(r.rank(5), &f);
            prop_assert_eq!(r.diagonal(), f);
        }

        #[test]
        fn rank_trick_recovers_subset_convolution(f in arb_fn(5), g in arb_fn(5)) {
            let out = ranked_union_convolve(&canonical_relaxation(&f), &canonical_relaxation(&g)).unwrap();
            let conv = subset_convolve(&f, &g).unwrap();
            prop_assert!(out.relaxes(&conv));
        }

        #[test]
        fn modular_transforms_match_reduced(f in arb_fn(4), g in arb_fn(4), m in 2i64..1000) {
            let ring = Ring::modular(Int::from(m)).unwrap();
            let reduce = |h: &SetFunction<RingValue>| SetFunction::new(
                h.ground(), h.values().iter().map(|v| v.reduced(&ring)).collect()).unwrap();
            let (fm, gm) = (reduce(&f), reduce(&g));
            prop_assert_eq!(reduce(&zeta(&f)), zeta(&fm));
            prop_assert_eq!(reduce(&mobius(&f)), mobius(&fm));
            prop_assert_eq!(reduce(&subset_convolve(&f, &g).unwrap()), subset_convolve(&fm, &gm).unwrap());
            prop_assert_eq!(reduce(&union_product(&f, &g).unwrap()), union_product(&fm, &gm).unwrap());
        }
    }
}

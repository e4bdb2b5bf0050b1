//! Property-based tests: algebraic laws that must hold for arbitrary
//! inputs, not just the hand-picked fixtures.

use cocycle::formats;
use cocycle::fourier::{self, Side};
use cocycle::group::{Group, GroupFunction};
use cocycle::repr::{decompose_irreps, IrrepBasis};
use cocycle::Complex64;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

/// Shared pool of groups with precomputed bases so each proptest case
/// stays cheap.
fn pool() -> &'static [(Arc<Group>, Arc<IrrepBasis>)] {
    static POOL: OnceLock<Vec<(Arc<Group>, Arc<IrrepBasis>)>> = OnceLock::new();
    POOL.get_or_init(|| {
        [
            Group::cyclic(6).unwrap(),
            Group::symmetric(3).unwrap(),
            Group::dihedral(4).unwrap(),
            Group::quaternion8().unwrap(),
        ]
        .into_iter()
        .map(|g| {
            let g = Arc::new(g);
            let basis = Arc::new(decompose_irreps(&g, 42).unwrap());
            (g, basis)
        })
        .collect()
    })
}

fn function_on(group: &Arc<Group>, raw: &[(f64, f64)]) -> GroupFunction {
    GroupFunction::from_fn(Arc::clone(group), |x| {
        let (re, im) = raw[x % raw.len()];
        Complex64::new(re, im)
    })
}

const VAL: std::ops::Range<f64> = -4.0..4.0;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Right translations compose contravariantly through the product:
    /// translating by z then y equals translating by y*z.
    #[test]
    fn right_translations_compose(
        which in 0usize..4,
        y in 0usize..6,
        z in 0usize..6,
        raw in prop::collection::vec((VAL, VAL), 12),
    ) {
        let (group, _) = &pool()[which];
        let y = y % group.order();
        let z = z % group.order();
        let f = function_on(group, &raw);
        let one_step = fourier::translate(&f, group.mul(y, z), Side::Right);
        let two_step = fourier::translate(&fourier::translate(&f, z, Side::Right), y, Side::Right);
        prop_assert!(one_step.sup_distance(&two_step) == 0.0);
    }

    /// Left translations compose covariantly: translating by z then y
    /// equals translating by y*z as well (the inverse in the definition
    /// flips the order back).
    #[test]
    fn left_translations_compose(
        which in 0usize..4,
        y in 0usize..6,
        z in 0usize..6,
        raw in prop::collection::vec((VAL, VAL), 12),
    ) {
        let (group, _) = &pool()[which];
        let y = y % group.order();
        let z = z % group.order();
        let f = function_on(group, &raw);
        let one_step = fourier::translate(&f, group.mul(y, z), Side::Left);
        let two_step = fourier::translate(&fourier::translate(&f, z, Side::Left), y, Side::Left);
        prop_assert!(one_step.sup_distance(&two_step) == 0.0);
    }

    /// Energy identity: the averaged squared norm of f equals the
    /// dimension-weighted block energy of its transform.
    #[test]
    fn transform_preserves_energy(
        which in 0usize..4,
        raw in prop::collection::vec((VAL, VAL), 12),
    ) {
        let (group, basis) = &pool()[which];
        let f = function_on(group, &raw);
        let coeffs = fourier::transform(&f, basis).unwrap();
        let lhs: f64 = f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / group.order() as f64;
        let rhs: f64 = coeffs
            .blocks()
            .iter()
            .zip(basis.dims())
            .map(|(block, d)| block.frobenius_norm().powi(2) / d as f64)
            .sum();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs));
    }

    /// Transform is linear in the function argument.
    #[test]
    fn transform_is_linear(
        which in 0usize..4,
        raw_a in prop::collection::vec((VAL, VAL), 12),
        raw_b in prop::collection::vec((VAL, VAL), 12),
        scale in VAL,
    ) {
        let (group, basis) = &pool()[which];
        let a = function_on(group, &raw_a);
        let b = function_on(group, &raw_b);
        let combined = GroupFunction::from_fn(Arc::clone(group), |x| {
            a.value(x) * scale + b.value(x)
        });
        let lhs = fourier::transform(&combined, basis).unwrap();
        let rhs_a = fourier::transform(&a, basis).unwrap();
        let rhs_b = fourier::transform(&b, basis).unwrap();
        for (k, block) in lhs.blocks().iter().enumerate() {
            let expect = rhs_a.block(k).scale(Complex64::new(scale, 0.0)).add(rhs_b.block(k));
            prop_assert!(block.distance(&expect) <= 1e-10 * (1.0 + expect.frobenius_norm()));
        }
    }

    /// Inverse elements satisfy the anti-homomorphism law, and inversion
    /// is an involution.
    #[test]
    fn inverse_laws(which in 0usize..4, x in 0usize..24, y in 0usize..24) {
        let (group, _) = &pool()[which];
        let x = x % group.order();
        let y = y % group.order();
        prop_assert_eq!(group.inv(group.inv(x)), x);
        prop_assert_eq!(
            group.inv(group.mul(x, y)),
            group.mul(group.inv(y), group.inv(x))
        );
        prop_assert_eq!(group.mul(x, group.inv(x)), group.identity());
    }

    /// The builtin-spec parser returns an error, never panics, on
    /// arbitrary input strings.
    #[test]
    fn group_spec_parser_never_panics(spec in ".{0,40}") {
        let _ = formats::parse_group_spec(&spec);
    }

    /// Specs that do parse yield validated groups with the advertised
    /// product order.
    #[test]
    fn parsed_products_multiply_orders(n in 1usize..8, m in 2usize..6) {
        let spec = format!("z{n}xd{m}");
        let group = formats::parse_group_spec(&spec).unwrap();
        prop_assert_eq!(group.order(), n * 2 * m);
    }

    /// Function JSON round-trips bit-exactly through render and reparse
    /// for arbitrary finite values.
    #[test]
    fn function_json_round_trip_is_bit_exact(
        bits in prop::collection::vec((any::<u64>(), any::<u64>()), 6)
    ) {
        let z6 = &pool()[0].0;
        let clamp = |b: u64| {
            let v = f64::from_bits(b);
            if v.is_finite() { v } else { 0.0 }
        };
        let f = GroupFunction::from_fn(Arc::clone(z6), |x| {
            Complex64::new(clamp(bits[x].0), clamp(bits[x].1))
        });
        let text = formats::function_to_json(&f).render();
        let back = formats::parse_function_json(&text, z6).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            // Negative zero is normalized on output; values are otherwise
            // reproduced bit for bit.
            let fix = |v: f64| if v == 0.0 { 0.0f64 } else { v };
            prop_assert_eq!(a.re.to_bits(), fix(b.re).to_bits());
            prop_assert_eq!(a.im.to_bits(), fix(b.im).to_bits());
        }
        prop_assert_eq!(formats::function_to_json(&back).render(), text);
    }
}

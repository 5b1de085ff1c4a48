//! Interval enclosures checked against 256-bit reference values, plus
//! inclusion monotonicity and invertibility soundness.

use hypcert::interval::interval_matrix_invertible;
use hypcert::{Interval, IntervalMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rug::Float;

const PREC: u32 = 256;

fn big(x: f64) -> Float {
    Float::with_val(PREC, x)
}

fn encloses(i: Interval, r: &Float) -> bool {
    *r >= i.lo() && *r <= i.hi()
}

fn point(x: f64) -> Interval {
    Interval::point(x)
}

/// A point of `[lo, hi]` at fraction `t`, clamped into the interval.
fn inside(i: Interval, t: f64) -> f64 {
    (i.lo() + t * (i.hi() - i.lo())).clamp(i.lo(), i.hi())
}

fn interval_in(lo: f64, hi: f64) -> impl Strategy<Value = Interval> {
    (lo..hi, 0.0..1.0f64).prop_map(move |(a, w)| {
        let b = (a + w * (hi - lo) * 0.1).min(hi);
        Interval::new(a, b).unwrap()
    })
}

/// `inner ⊆ outer`, with `outer` obtained by widening `inner`.
fn nested(lo: f64, hi: f64) -> impl Strategy<Value = (Interval, Interval)> {
    (interval_in(lo, hi), 0.0..1.0f64, 0.0..1.0f64).prop_map(move |(a, l, r)| {
        let span = (hi - lo) * 0.05;
        let outer = Interval::new((a.lo() - l * span).max(lo), (a.hi() + r * span).min(hi)).unwrap();
        (a, outer)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arithmetic_on_points_encloses_exact(x in -1e6..1e6f64, y in -1e6..1e6f64) {
        let (a, b) = (point(x), point(y));
        prop_assert!(encloses(a + b, &(big(x) + big(y))));
        prop_assert!(encloses(a - b, &(big(x) - big(y))));
        prop_assert!(encloses(a * b, &(big(x) * big(y))));
        if y != 0.0 {
            prop_assert!(encloses(a.checked_div(b).unwrap(), &(big(x) / big(y))));
        }
        prop_assert!(encloses(a.sqr(), &big(x).square()));
    }

    #[test]
    fn tiny_and_huge_products_enclose_exact(x in -1e-150..1e-150f64, y in -1e150..1e150f64) {
        let (a, b) = (point(x), point(y));
        prop_assert!(encloses(a * b, &(big(x) * big(y))));
        prop_assert!(encloses(a * a, &(big(x) * big(x))));
        prop_assert!(encloses(b.checked_div(point(3.0)).unwrap(), &(big(y) / 3u32)));
    }

    #[test]
    fn transcendentals_on_points_enclose_exact(x in -700.0..700.0f64, t in 0.0..1.0f64) {
        let a = point(x);
        prop_assert!(encloses(a.exp(), &big(x).exp()));
        prop_assert!(encloses(a.cosh(), &big(x).cosh()));
        prop_assert!(encloses(a.cos(), &big(x).cos()));
        prop_assert!(encloses(a.sin(), &big(x).sin()));
        let p = x.abs() + 1e-300;
        prop_assert!(encloses(point(p).sqrt().unwrap(), &big(p).sqrt()));
        prop_assert!(encloses(point(p).ln().unwrap(), &big(p).ln()));
        let q = 1.0 + x.abs();
        prop_assert!(encloses(point(q).acosh().unwrap(), &big(q).acosh()));
        let c = 2.0 * t - 1.0;
        prop_assert!(encloses(point(c).acos().unwrap(), &big(c).acos()));
    }

    #[test]
    fn acosh_and_acos_near_their_branch_points(k in 0u32..60) {
        let d = (2.0f64).powi(-(k as i32));
        let q = 1.0 + d;
        prop_assert!(encloses(point(q).acosh().unwrap(), &big(q).acosh()));
        for c in [1.0 - d, -1.0 + d] {
            prop_assert!(encloses(point(c).acos().unwrap(), &big(c).acos()));
        }
    }

    #[test]
    fn operations_on_boxes_enclose_member_results(
        a in interval_in(-50.0, 50.0),
        b in interval_in(0.5, 50.0),
        s in 0.0..1.0f64,
        u in 0.0..1.0f64,
    ) {
        let (x, y) = (inside(a, s), inside(b, u));
        prop_assert!(encloses(a + b, &(big(x) + big(y))));
        prop_assert!(encloses(a - b, &(big(x) - big(y))));
        prop_assert!(encloses(a * b, &(big(x) * big(y))));
        prop_assert!(encloses(a.checked_div(b).unwrap(), &(big(x) / big(y))));
        prop_assert!(encloses(a.sqr(), &big(x).square()));
        prop_assert!(encloses(a.cos(), &big(x).cos()));
        prop_assert!(encloses(a.sin(), &big(x).sin()));
        prop_assert!(encloses(a.exp(), &big(x).exp()));
        prop_assert!(encloses(a.cosh(), &big(x).cosh()));
        prop_assert!(encloses(b.sqrt().unwrap(), &big(y).sqrt()));
        prop_assert!(encloses(b.ln().unwrap(), &big(y).ln()));
        let q = Interval::ONE + b;
        prop_assert!(encloses(q.acosh().unwrap(), &(big(1.0) + big(y)).acosh()));
    }

    #[test]
    fn acos_on_boxes_encloses_member_results(a in interval_in(-1.0, 1.0), s in 0.0..1.0f64) {
        let x = inside(a, s);
        prop_assert!(encloses(a.acos().unwrap(), &big(x).acos()));
    }

    #[test]
    fn inclusion_monotonicity((a, a2) in nested(-20.0, 20.0), (b, b2) in nested(0.25, 20.0)) {
        prop_assert!(a2.encloses(a) && b2.encloses(b));
        prop_assert!((a2 + b2).encloses(a + b));
        prop_assert!((a2 - b2).encloses(a - b));
        prop_assert!((a2 * b2).encloses(a * b));
        prop_assert!(a2.checked_div(b2).unwrap().encloses(a.checked_div(b).unwrap()));
        prop_assert!(a2.sqr().encloses(a.sqr()));
        prop_assert!(a2.exp().encloses(a.exp()));
        prop_assert!(a2.cosh().encloses(a.cosh()));
        prop_assert!(a2.cos().encloses(a.cos()));
        prop_assert!(a2.sin().encloses(a.sin()));
        prop_assert!(b2.sqrt().unwrap().encloses(b.sqrt().unwrap()));
        prop_assert!(b2.ln().unwrap().encloses(b.ln().unwrap()));
        let (q, q2) = (Interval::ONE + b, Interval::ONE + b2);
        prop_assert!(q2.acosh().unwrap().encloses(q.acosh().unwrap()));
    }

    #[test]
    fn acos_inclusion_monotonicity((a, a2) in nested(-1.0, 1.0)) {
        prop_assert!(a2.acos().unwrap().encloses(a.acos().unwrap()));
    }

    #[test]
    fn decimal_round_trip_encloses(a in interval_in(-1e3, 1e3)) {
        let (lo, hi) = a.to_decimal_pair();
        prop_assert!(big(lo.parse().unwrap()) <= a.lo());
        prop_assert!(big(hi.parse().unwrap()) >= a.hi());
        prop_assert!(Interval::from_decimal_pair(&lo, &hi).unwrap().encloses(a));
    }
}

fn seeded_matrix(n: usize, seed: u64) -> DMatrix<f64> {
    // xorshift, enough for well-spread test entries
    let mut s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    DMatrix::from_fn(n, n, |_, _| {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn planted_singular_members_are_never_certified(
        n in 2usize..7,
        seed in any::<u64>(),
        rank_drop in 1usize..3,
        radius_exp in -12i32..-1,
    ) {
        // Rank-deficient midpoint: the last `rank_drop` columns are
        // combinations of the others. The radius covers the rounding of
        // those combinations, so the exact singular matrix is a member.
        let mut m = seeded_matrix(n, seed);
        let k = rank_drop.min(n - 1);
        let w = seeded_matrix(n, seed ^ 0x5555);
        for c in n - k..n {
            for r in 0..n {
                m[(r, c)] = (0..n - k).map(|j| w[(j, c)] * m[(r, j)]).sum();
            }
        }
        let rad = 10f64.powi(radius_exp);
        let enc = IntervalMatrix::from_fn(n, n, |r, c| Interval::around(m[(r, c)], rad));
        prop_assert!(enc.contains_point(&m));
        prop_assert!(!interval_matrix_invertible(&enc));
    }

    #[test]
    fn planted_singular_member_off_center(n in 2usize..6, seed in any::<u64>(), t in 0.0..1.0f64) {
        // A singular matrix S inside a box whose midpoint is nonsingular.
        let a = seeded_matrix(n, seed);
        let mut s = a.clone();
        for r in 0..n {
            s[(r, n - 1)] = s[(r, 0)];
        }
        let enc = IntervalMatrix::from_fn(n, n, |r, c| {
            let (x, y) = (a[(r, c)], s[(r, c)]);
            let mid = x + t * (y - x);
            Interval::hull(mid - (y - x).abs() - 1e-12, mid + (y - x).abs() + 1e-12)
        });
        prop_assert!(enc.contains_point(&s));
        prop_assert!(!interval_matrix_invertible(&enc));
    }

    #[test]
    fn thin_boxes_around_well_conditioned_matrices_are_certified(n in 1usize..8, seed in any::<u64>()) {
        let m = seeded_matrix(n, seed) + DMatrix::identity(n, n) * (2.0 * n as f64);
        let enc = IntervalMatrix::from_fn(n, n, |r, c| Interval::around(m[(r, c)], 1e-12));
        prop_assert!(interval_matrix_invertible(&enc));
    }
}

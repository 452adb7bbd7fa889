use std::cmp::Ordering;

use interval_rank::format::{parse_interval_matrix, parse_rational_matrix, write_interval_matrix, write_rational_matrix};
use interval_rank::linalg::{
    field_rank, kernel_basis, lp_feasible, rank, rational_solution_near, Inequality, LinearSystem, Matrix,
    RationalMatrix,
};
use interval_rank::number::{int, rat, IntervalMatrix, QuadExt, RatInterval, Rational};
use interval_rank::rohn::{rect_full_rank, regularity_oracle, square_full_rank};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn unit() -> impl Strategy<Value = Rational> {
    (0i64..=16).prop_map(|n| rat(n, 16))
}

fn interval() -> impl Strategy<Value = RatInterval> {
    (rational(), rational()).prop_map(|(a, b)| RatInterval::hull(a, b))
}

fn lerp(iv: &RatInterval, t: &Rational) -> Rational {
    iv.lo() + (iv.hi() - iv.lo()) * t
}

fn rational_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![Just(int(0)), rational()], r * c)
            .prop_map(move |v| Matrix::from_vec(r, c, v).unwrap())
    })
}

fn interval_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = IntervalMatrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(interval(), r * c).prop_map(move |v| Matrix::from_vec(r, c, v).unwrap())
    })
}

fn square_interval_matrix(max: usize) -> impl Strategy<Value = IntervalMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(interval(), n * n).prop_map(move |v| Matrix::from_vec(n, n, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interval_ops_contain_pointwise_results(a in interval(), b in interval(), s in unit(), t in unit()) {
        let (x, y) = (lerp(&a, &s), lerp(&b, &t));
        prop_assert!(a.add(&b).contains(&(&x + &y)));
        prop_assert!(a.sub(&b).contains(&(&x - &y)));
        prop_assert!(a.mul(&b).contains(&(&x * &y)));
        match a.div(&b) {
            Ok(q) => prop_assert!(q.contains(&(&x / &y))),
            Err(_) => prop_assert!(b.contains_zero()),
        }
    }

    #[test]
    fn quad_order_matches_difference_sign(d in prop::sample::select(vec![2u64, 3, 5, 7]), a in rational(), b in rational(), c in rational(), e in rational()) {
        let x = QuadExt::new(a, b, d).unwrap();
        let w = QuadExt::new(c, e, d).unwrap();
        let diff = &x - &w;
        prop_assert_eq!(x.partial_cmp(&w), Some(diff.signum()));
        let (lo, hi) = diff.enclosure(40);
        match diff.signum() {
            Ordering::Less => prop_assert!(lo < int(0)),
            Ordering::Greater => prop_assert!(hi > int(0)),
            Ordering::Equal => prop_assert!(lo <= int(0) && hi >= int(0)),
        }
    }

    #[test]
    fn quad_field_identities(d in prop::sample::select(vec![2u64, 3, 5, 7]), a in rational(), b in rational(), c in rational(), e in rational()) {
        let x = QuadExt::new(a, b, d).unwrap();
        let y = QuadExt::new(c, e, d).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
    }

    #[test]
    fn kernel_basis_spans_the_kernel(a in rational_matrix(4, 6)) {
        let basis = kernel_basis(&a);
        prop_assert_eq!(basis.len(), a.cols() - rank(&a));
        for v in &basis {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|x| *x == int(0)));
        }
        if !basis.is_empty() {
            prop_assert_eq!(rank(&Matrix::from_rows(basis).unwrap()), a.cols() - rank(&a));
        }
    }

    #[test]
    fn rank_agrees_across_fields_and_transpose(a in rational_matrix(5, 5)) {
        let r = rank(&a);
        prop_assert_eq!(r, rank(&a.transpose()));
        prop_assert_eq!(r, field_rank(&a.to_quad()));
        prop_assert!(r <= a.rows().min(a.cols()));
    }

    #[test]
    fn rational_solution_near_lands_in_box(
        coeffs in prop::collection::vec(rational(), 3),
        irr in prop::collection::vec(rational(), 3),
    ) {
        // x0 + c1 x1 + c2 x2 = rhs, with the point chosen on the plane.
        let s = QuadExt::sqrt(2).unwrap();
        let mut point: Vec<QuadExt> = irr.iter().map(|b| QuadExt::from_rational(int(1)) + s.scale(b)).collect();
        point[0] = QuadExt::from_rational(coeffs[0].clone())
            - point[1].scale(&coeffs[1])
            - point[2].scale(&coeffs[2]);
        let rhs = coeffs[0].clone();
        let sys = LinearSystem::from_equations(3, vec![(vec![int(1), coeffs[1].clone(), coeffs[2].clone()], rhs)]).unwrap();
        let bx: Vec<RatInterval> = point.iter().map(|x| {
            let (lo, hi) = x.enclosure(4);
            RatInterval::new(lo - int(1), hi + int(1)).unwrap()
        }).collect();
        let x = rational_solution_near(&sys, &point, &bx).unwrap();
        prop_assert!(sys.is_solved_by(&x));
        prop_assert!(x.iter().zip(&bx).all(|(v, iv)| iv.contains(v)));
    }

    #[test]
    fn lp_matches_box_vertex_minimum(bx in prop::collection::vec(interval(), 1..=4), c in prop::collection::vec(rational(), 4), rhs in rational()) {
        let n = bx.len();
        let c = &c[..n];
        let mut system = Vec::new();
        for (k, iv) in bx.iter().enumerate() {
            let mut e = vec![int(0); n];
            e[k] = int(1);
            system.push(Inequality::ge(e.clone(), iv.lo().clone()));
            system.push(Inequality::le(e, iv.hi().clone()));
        }
        system.push(Inequality::le(c.to_vec(), rhs.clone()));
        let min: Rational = (0..1u32 << n)
            .map(|t| (0..n).map(|k| &c[k] * if t >> k & 1 == 1 { bx[k].hi() } else { bx[k].lo() }).sum::<Rational>())
            .min()
            .unwrap();
        let found = lp_feasible(n, &system);
        prop_assert_eq!(found.is_some(), min <= rhs);
        if let Some(x) = found {
            prop_assert!(system.iter().all(|ineq| ineq.holds(&x)));
        }
    }

    #[test]
    fn full_rank_tests_agree(m in square_interval_matrix(3)) {
        let fast = square_full_rank(&m).unwrap();
        prop_assert_eq!(fast, regularity_oracle(&m).unwrap());
        prop_assert_eq!(fast, rect_full_rank(&m));
    }

    #[test]
    fn matrix_files_round_trip(m in interval_matrix(4, 4), r in rational_matrix(4, 4)) {
        prop_assert_eq!(parse_interval_matrix(&write_interval_matrix(&m)).unwrap(), m);
        prop_assert_eq!(parse_rational_matrix(&write_rational_matrix(&r)).unwrap(), r);
    }
}

//! Property-based invariants: exact jets against finite differences,
//! deformation bounds, bracket bilinearity, serialization round trips.

use cohomlab::catalog;
use cohomlab::cheeger::cheeger_deform;
use cohomlab::profile::{Form, WarpProfile};
use proptest::prelude::*;

proptest! {
    #[test]
    fn poly_jets_match_finite_differences(
        coeffs in prop::collection::vec(-2.0f64..2.0, 1..6),
        center in -1.0f64..1.0,
        t in -2.0f64..2.0,
    ) {
        let form = Form::Poly { coeffs, center };
        let h = 1e-5;
        let j = form.eval(t);
        let fp = form.eval(t + h).f;
        let fm = form.eval(t - h).f;
        let df_fd = (fp - fm) / (2.0 * h);
        let ddf_fd = (fp - 2.0 * j.f + fm) / (h * h);
        prop_assert!((j.df - df_fd).abs() < 1e-6 * (1.0 + j.df.abs()));
        prop_assert!((j.ddf - ddf_fd).abs() < 1e-3 * (1.0 + j.ddf.abs()));
    }

    #[test]
    fn cheeger_deform_bounded_and_monotone(
        phi in 1e-3f64..50.0,
        delta in 1e-3f64..50.0,
        bump in 1e-3f64..1.0,
    ) {
        let v = cheeger_deform(&[phi], delta).unwrap()[0];
        prop_assert!(v > 0.0);
        prop_assert!(v < phi.min(delta));
        let v_delta = cheeger_deform(&[phi], delta + bump).unwrap()[0];
        let v_phi = cheeger_deform(&[phi + bump], delta).unwrap()[0];
        prop_assert!(v_delta > v);
        prop_assert!(v_phi > v);
    }

    #[test]
    fn bracket_bilinear_su2(
        x in prop::array::uniform3(-2.0f64..2.0),
        xp in prop::array::uniform3(-2.0f64..2.0),
        y in prop::array::uniform3(-2.0f64..2.0),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let alg = catalog::su2::<f64>();
        let combo: Vec<f64> = x.iter().zip(&xp).map(|(&u, &v)| a * u + b * v).collect();
        let lhs = alg.bracket(&combo, &y.to_vec()).unwrap();
        let b1 = alg.bracket(&x.to_vec(), &y.to_vec()).unwrap();
        let b2 = alg.bracket(&xp.to_vec(), &y.to_vec()).unwrap();
        for k in 0..3 {
            prop_assert!((lhs[k] - (a * b1[k] + b * b2[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn bracket_antisymmetric_so4(
        x in prop::collection::vec(-2.0f64..2.0, 6),
        y in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let alg = catalog::so_n::<f64>(4);
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        for k in 0..6 {
            prop_assert!((xy[k] + yx[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_json_round_trip(
        c0 in 0.1f64..3.0,
        a in 0.5f64..2.0,
        b in 0.01f64..0.4,
    ) {
        let p = WarpProfile::from_pieces(vec![
            cohomlab::profile::Piece { lo: 1.0, hi: 2.0, form: Form::CheegerCone { c0 } },
            cohomlab::profile::Piece {
                lo: 2.0,
                hi: 3.0,
                form: Form::Offset {
                    offset: a,
                    inner: Box::new(Form::Sine { amplitude: b, frequency: 1.0 }),
                },
            },
        ]).unwrap();
        let q = WarpProfile::<f64>::from_json(&p.to_json()).unwrap();
        for i in 0..20 {
            let t = 1.05 + 1.9 * (i as f64) / 19.0;
            let (jp, jq) = (p.eval(t).unwrap(), q.eval(t).unwrap());
            prop_assert_eq!(jp.f.to_bits(), jq.f.to_bits());
            prop_assert_eq!(jp.df.to_bits(), jq.df.to_bits());
        }
    }

    #[test]
    fn adjoint_exp_orthogonality_su2(
        x in prop::array::uniform3(-5.0f64..5.0),
    ) {
        let alg = catalog::su2::<f64>();
        let ad = alg.adjoint_exp(&x.to_vec()).unwrap();
        let gram = ad.transpose().matmul(&ad);
        let dev = gram.sub(&cohomlab::linalg::Mat::identity(3)).max_abs();
        prop_assert!(dev < 1e-10, "orthogonality deviation {}", dev);
    }
}

use proptest::prelude::*;

use shilov_core::arith::{parse_rat, rat, LogVal, Rat};
use shilov_core::config::{ExperimentConfig, Format};
use shilov_core::metrics::{point_val, spec_val, MetricSpec, MonomialPoint};
use shilov_core::{ExpVec, HahnSeries, HomPoly};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn exact_series() -> impl Strategy<Value = HahnSeries> {
    prop::collection::vec((small_rat(), small_rat()), 1..4)
        .prop_map(|terms| HahnSeries::from_terms(terms.into_iter().map(|(e, c)| (c, e)), LogVal::Infinite))
}

fn point(d: usize) -> impl Strategy<Value = MonomialPoint> {
    (prop::collection::vec(small_rat(), d + 1), small_rat()).prop_map(|(w, c)| MonomialPoint::new(w, c))
}

fn spec() -> impl Strategy<Value = MetricSpec> {
    (1usize..=3)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(point(d), 1..5)))
        .prop_filter_map("duplicate points", |(d, pts)| MetricSpec::new(d, pts).ok())
}

fn poly(vars: usize) -> impl Strategy<Value = HomPoly> {
    let expo = prop::collection::vec(0u32..3, vars);
    prop::collection::vec((expo, exact_series()), 1..4).prop_map(move |terms| {
        let n: u32 = 2 * vars as u32;
        let mut f = HomPoly::zero(vars, n as usize);
        for (mut e, c) in terms {
            // pad the last exponent so every term has total degree n
            let s: u32 = e.iter().sum();
            *e.last_mut().unwrap() += n - s;
            f = f.add(&HomPoly::monomial(c, ExpVec::new(e))).unwrap();
        }
        f
    })
}

proptest! {
    #[test]
    fn rationals_print_and_parse_back(r in small_rat()) {
        prop_assert_eq!(parse_rat(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn series_valuation_is_multiplicative(a in exact_series(), b in exact_series()) {
        let (va, vb) = (a.valuation(), b.valuation());
        let prod = a.mul(&b).valuation();
        match (va, vb) {
            (LogVal::Finite(x), LogVal::Finite(y)) => prop_assert_eq!(prod, LogVal::Finite(x + y)),
            _ => prop_assert!(prod.is_infinite()),
        }
    }

    #[test]
    fn series_valuation_is_ultrametric(a in exact_series(), b in exact_series()) {
        let (va, vb) = (a.valuation(), b.valuation());
        let vs = a.add(&b).valuation();
        prop_assert!(vs >= va.clone().min(vb.clone()));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
    }

    #[test]
    fn exact_division_undoes_multiplication(a in exact_series(), b in exact_series()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }

    #[test]
    fn config_round_trips(s in spec()) {
        let cfg = ExperimentConfig::from_spec(&s);
        for fmt in [Format::Toml, Format::Json] {
            let back = ExperimentConfig::parse(&cfg.to_text(fmt).unwrap(), fmt).unwrap();
            prop_assert_eq!(back.spec().unwrap(), s.clone());
        }
    }

    #[test]
    fn gauss_valuation_is_multiplicative(p in point(2), f in poly(3), g in poly(3)) {
        let lhs = point_val(&p, &f.mul(&g).unwrap());
        let rhs = match (point_val(&p, &f), point_val(&p, &g)) {
            (LogVal::Finite(x), LogVal::Finite(y)) => LogVal::Finite(x + y),
            _ => LogVal::Infinite,
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dominated_points_do_not_change_the_sup(s in spec(), bump in prop::collection::vec(0i64..4, 4), f in poly(4)) {
        prop_assume!(s.d() == 3);
        let base = &s.points()[0];
        let w = base.w.iter().zip(&bump).map(|(x, b)| x + rat(*b, 1)).collect();
        let mut pts = s.points().to_vec();
        pts.push(MonomialPoint::new(w, base.c.clone()));
        if let Ok(bigger) = MetricSpec::new(3, pts) {
            prop_assert_eq!(spec_val(&bigger, &f), spec_val(&s, &f));
        }
    }
}

use qtheta_core::identities::{effective_order, registry, verify_case};

#[test]
fn every_entry_passes_at_default_order() {
    let mut failed = Vec::new();
    for case in registry() {
        let start = std::time::Instant::now();
        let rep = verify_case(&case, effective_order(&case, None));
        eprintln!("{:<32} {:>8.2?} {:?}", case.name, start.elapsed(), rep.as_ref().map(|r| r.pass));
        match rep {
            Ok(r) if r.pass => {}
            other => failed.push((case.name.clone(), other)),
        }
    }
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn no_case_is_vacuous() {
    for case in registry() {
        let order = effective_order(&case, None);
        let comps = case.build_valid(order).unwrap();
        assert!(
            comps.iter().any(|c| !c.lhs.truncate(order).is_zero() || !c.rhs.truncate(order).is_zero()),
            "{} only compares zero with zero",
            case.name
        );
    }
}

#[test]
fn expressions_reproduce_each_identity() {
    use qtheta_core::dsl::{eval_valid, parse, render};
    let mut checked = 0;
    for case in registry() {
        let Some((lhs, rhs)) = &case.expressions else { continue };
        let cfg = case.config().unwrap();
        let order = effective_order(&case, None);
        let mut sides = Vec::new();
        for text in [lhs, rhs] {
            let ast = parse(text).unwrap_or_else(|e| panic!("{}: {e}", case.name));
            assert_eq!(parse(&render(&ast)).unwrap(), ast, "{}", case.name);
            sides.push(eval_valid(&ast, &cfg, order).unwrap());
        }
        assert!(sides[0].eq_upto(&sides[1], order).unwrap().is_equal(), "{}", case.name);
        // and the hand-built sides agree with the parsed ones
        let built = &case.build_valid(order).unwrap()[0];
        assert!(built.lhs.eq_upto(&sides[0], order).unwrap().is_equal(), "{}", case.name);
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} expressible cases");
}

#[test]
fn perturbed_case_reports_first_divergence() {
    use qtheta_core::identities::{find, Comparison, IdentityCase};
    use qtheta_core::{AnalyticSeries, Rat};
    use std::sync::Arc;

    let inner = find("jacobi_derivative").unwrap();
    let bump = Rat::new(7, 8);
    let perturbed = IdentityCase::new(
        "jacobi_perturbed",
        "jacobi_derivative with rhs + π·q^(7/8)",
        inner.kind,
        inner.default_order,
        Arc::new(move |cfg, t| {
            let mut comps = inner.build(cfg, t)?;
            let c: &mut Comparison = &mut comps[0];
            let m = AnalyticSeries::monomial(cfg, 1, cfg.field().one(), bump, t)?;
            c.rhs = c.rhs.add(&m)?;
            Ok(comps)
        }),
    );
    let rep = verify_case(&perturbed, Rat::from_integer(30)).unwrap();
    assert!(!rep.pass);
    let f = rep.failure.unwrap();
    assert_eq!(f.exponent, bump);
    assert_ne!(f.lhs, f.rhs);
    // below the bump the perturbed identity still holds
    assert!(verify_case(&perturbed, bump).unwrap().pass);
}

#[test]
fn verify_is_order_monotone() {
    use qtheta_core::identities::verify;
    use qtheta_core::Rat;
    for name in ["cusp_gamma6_0third", "deriv_1_third", "jet_two_theta_sum"] {
        let a = verify(name, Some(Rat::from_integer(40))).unwrap();
        let b = verify(name, Some(Rat::from_integer(40))).unwrap();
        assert_eq!(a, b);
        assert!(a.pass && a.order == Rat::from_integer(40));
        assert_eq!(verify(name, Some(Rat::from_integer(3))).unwrap().order, Rat::from_integer(if name.starts_with("jet") { 20 } else { 30 }));
    }
}

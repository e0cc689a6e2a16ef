use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use qtheta_core::identities::{self, effective_order, IdentityCase, IdentityError, VerifyReport};
use qtheta_core::thetagen::{eta_product, eta_series, theta_series, theta_triple_product, ThetaSpec};
use qtheta_core::{Config, Rat};

/// Characteristics appearing in the identities, as `(ε, ε')`.
pub const CHARACTERISTICS: [(i64, (i64, i64)); 15] = [
    (0, (0, 1)),
    (1, (0, 1)),
    (0, (1, 1)),
    (1, (1, 1)),
    (1, (1, 2)),
    (0, (1, 2)),
    (1, (1, 3)),
    (1, (2, 3)),
    (1, (4, 3)),
    (0, (1, 3)),
    (0, (2, 3)),
    (1, (1, 4)),
    (1, (3, 4)),
    (0, (1, 4)),
    (0, (3, 4)),
];

/// τ multipliers the identities evaluate theta at.
pub const TAU_MULTS: [(i64, i64); 5] = [(1, 1), (2, 1), (4, 1), (1, 2), (3, 2)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn theta_pair(cfg: &Config, eps: Rat, ep: Rat, k: Rat, order: Rat) -> Check {
    let name = format!("triple_product[{eps},{ep}]({k}t)");
    let def = theta_series(cfg, &ThetaSpec::new(eps, ep, k, 0), order);
    let prod = theta_triple_product(cfg, eps, ep, k, order);
    match (def, prod) {
        (Ok(a), Ok(b)) => match a.eq_upto(&b, order) {
            Ok(r) if r.is_equal() => check(name, true, format!("equal below q^{order}")),
            Ok(r) => check(name, false, format!("{r:?}")),
            Err(e) => check(name, false, e.to_string()),
        },
        (Err(e), _) | (_, Err(e)) => check(name, false, e.to_string()),
    }
}

/// Definition sum against triple product for every characteristic and τ multiplier.
pub fn triple_product_checks(order: Rat) -> Vec<Check> {
    let cfg = Config::default();
    let mut out = Vec::new();
    for (e, (n, d)) in CHARACTERISTICS {
        for (kn, kd) in TAU_MULTS {
            out.push(theta_pair(&cfg, Rat::from_integer(e), Rat::new(n, d), Rat::new(kn, kd), order));
        }
    }
    // the level-k expressions use [1,(1+2l)/k] over Q(ζ_lcm(4k,24))
    let one = Rat::from_integer(1);
    for k in identities::FK_PRIMES {
        let Ok(cfg) = identities::fk_config(k) else { continue };
        for l in 0..=(k as i64 - 3) / 2 {
            out.push(theta_pair(&cfg, one, Rat::new(1 + 2 * l, k as i64), one, order));
        }
    }
    out
}

/// Pentagonal eta against the raw product.
pub fn eta_checks(order: Rat) -> Vec<Check> {
    let cfg = Config::default();
    [1, 2, 3]
        .into_iter()
        .map(|k| {
            let k = Rat::from_integer(k);
            let name = format!("eta_product({k}t)");
            match (eta_series(&cfg, k, order), eta_product(&cfg, k, order)) {
                (Ok(a), Ok(b)) if a == b => check(name, true, format!("equal below q^{order}")),
                (Ok(_), Ok(_)) => check(name, false, "pentagonal and product expansions differ"),
                (Err(e), _) | (_, Err(e)) => check(name, false, e.to_string()),
            }
        })
        .collect()
}

/// Registry entries rerun as self checks.
pub const STRUCTURAL: [&str; 4] = [
    "jacobi_derivative",
    "heat_equation",
    "farkas_kra_lemma_1",
    "farkas_kra_lemma_2",
];

pub fn structural_checks(registry: &[IdentityCase], order: Rat) -> Vec<Check> {
    STRUCTURAL
        .iter()
        .map(|name| match registry.iter().find(|c| c.name == *name) {
            None => check(*name, false, "not in registry"),
            Some(case) => match identities::verify_case(case, effective_order(case, Some(order))) {
                Ok(r) if r.pass => check(*name, true, format!("equal below q^{}", r.order)),
                Ok(r) => check(*name, false, format!("{:?}", r.failure)),
                Err(e) => check(*name, false, e.to_string()),
            },
        })
        .collect()
}

pub fn selftest(registry: &[IdentityCase]) -> Vec<Check> {
    let thirty = Rat::from_integer(30);
    let mut out = triple_product_checks(thirty);
    out.extend(eta_checks(Rat::from_integer(100)));
    out.extend(structural_checks(registry, thirty));
    out
}

/// Verifies the cases on `jobs` threads; reports come back in input order.
pub fn verify_parallel(
    cases: &[IdentityCase],
    order: Option<Rat>,
    jobs: usize,
) -> Vec<Result<VerifyReport, IdentityError>> {
    let jobs = jobs.clamp(1, cases.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<VerifyReport, IdentityError>>>> =
        Mutex::new(vec![None; cases.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(case) = cases.get(i) else { break };
                let r = identities::verify_case(case, effective_order(case, order));
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every index visited"))
        .collect()
}

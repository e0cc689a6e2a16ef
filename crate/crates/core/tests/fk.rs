use qtheta_core::identities::{fk_cusp_series, IdentityError};
use qtheta_core::Rat;

#[test]
fn vanishes_for_small_primes() {
    for k in [3, 5, 7, 13] {
        let s = fk_cusp_series(k, Rat::from_integer(20)).unwrap();
        assert!(s.is_zero(), "k={k}");
        assert_eq!(s.valid_to(), Rat::from_integer(20));
    }
}

// The expression also vanishes at k = 11; an independent floating-point
// evaluation (direct theta sums, eta product, numeric d/dτ at 40 digits) agrees.
#[test]
fn eleven_observed_zero_through_q20() {
    let s = fk_cusp_series(11, Rat::from_integer(20)).unwrap();
    assert!(s.is_zero());
}

#[test]
fn rejects_composites_and_large_primes() {
    for k in [1, 9, 15, 17] {
        assert_eq!(fk_cusp_series(k, Rat::from_integer(4)), Err(IdentityError::UnsupportedK(k)));
    }
}

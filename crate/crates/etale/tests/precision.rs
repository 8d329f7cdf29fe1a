use etale::galois::{Convention, LegendreMap};
use etale::Curve;

#[test]
fn quintic_derivative_is_stable_in_precision() {
    // E[5^3] lives over F_{61^125}, above the default extension cap
    let c = Curve::from_ints(61, 5, 0, 4).unwrap().recapped(125).unwrap();
    let dl = LegendreMap::new(&c).unwrap();
    let up = LegendreMap::with(&c, dl.prec + 1, Convention::Arithmetic).unwrap();
    assert_eq!(up.frob.m, 125);
    assert_eq!(up.matrix().unwrap(), dl.matrix().unwrap());
}

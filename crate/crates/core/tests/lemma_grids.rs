use rso_core::bounds::{default_explicit_grid, default_general_grid, GeneralGrid, GeneralPart};
use rso_core::Error;

fn tally<T: std::fmt::Debug>(points: &[T], eval: impl Fn(&T) -> rso_core::Result<rso_core::bounds::LemmaCheck>) -> (usize, usize) {
    let (mut checked, mut skipped) = (0, 0);
    for pt in points {
        match eval(pt) {
            Ok(c) => {
                assert!(c.holds, "{pt:?}: lhs {} > rhs {}", c.lhs, c.rhs);
                checked += 1;
            }
            Err(Error::Domain(_)) => skipped += 1,
            Err(e) => panic!("{pt:?}: {e}"),
        }
    }
    (checked, skipped)
}

#[test]
fn general_default_grid_holds() {
    let pts = default_general_grid().points();
    let (checked, skipped) = tally(&pts, |p| p.evaluate());
    assert_eq!(checked + skipped, pts.len());
    // part ii skips p < q; part iii skips small a when p = 2
    assert!(skipped > 0 && checked > pts.len() / 2);
}

#[test]
fn general_sharper_forward_form_holds() {
    let grid = GeneralGrid { parts: vec![GeneralPart::IIStrong], ..default_general_grid() };
    let pts = grid.points();
    let (checked, _) = tally(&pts, |p| p.evaluate());
    assert!(checked > 0);
}

#[test]
fn explicit_default_grid_holds() {
    let pts = default_explicit_grid().points();
    let (checked, skipped) = tally(&pts, |p| p.evaluate());
    // c parts skip T = 1, c.iii skips eta*L1 < 1/2
    assert_eq!(skipped, 3 * 9 + 4 * 3);
    assert_eq!(checked, pts.len() - skipped);
}

use serde::{Deserialize, Serialize};

use super::{product, BitopPath, Homotopy, IntervalModel};
use crate::dynamics::{compose, is_pairwise_continuous, ContinuityWitness, PointMap};
use crate::error::{Error, Result};

/// A table cell that disagrees with a boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryViolation {
    pub x: usize,
    pub t: usize,
    pub expected: usize,
    pub actual: usize,
}

/// Verification outcome with separate boundary and continuity witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyVerdict {
    pub holds: bool,
    pub boundary: Option<BoundaryViolation>,
    pub continuity: Option<ContinuityWitness>,
}

impl HomotopyVerdict {
    fn from_parts(
        boundary: Option<BoundaryViolation>,
        continuity: Option<ContinuityWitness>,
    ) -> Self {
        HomotopyVerdict {
            holds: boundary.is_none() && continuity.is_none(),
            boundary,
            continuity,
        }
    }

    pub fn boundary_ok(&self) -> bool {
        self.boundary.is_none()
    }

    pub fn continuity_ok(&self) -> bool {
        self.continuity.is_none()
    }
}

/// Pairwise continuity of `H` on the product of the domain and the model.
fn continuity_witness(h: &Homotopy) -> Result<Option<ContinuityWitness>> {
    let prod = product(h.x(), h.interval().space())?;
    Ok(is_pairwise_continuous(prod.space(), h.y(), &h.as_point_map())?.witness)
}

fn first_violation(
    h: &Homotopy,
    cells: impl IntoIterator<Item = (usize, usize, usize)>,
) -> Option<BoundaryViolation> {
    cells.into_iter().find_map(|(x, t, expected)| {
        let actual = h.value(x, t);
        (actual != expected).then_some(BoundaryViolation {
            x,
            t,
            expected,
            actual,
        })
    })
}

fn check_self_map(m: &PointMap, n: usize, what: &str) -> Result<()> {
    if m.dom_n() != n || m.cod_n() != n {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be a self-map of {n} points, got {}→{}",
            m.dom_n(),
            m.cod_n()
        )));
    }
    Ok(())
}

/// `H(x, e0) = start(x)`, `H(x, e1) = end(x)` for every `x`, plus continuity.
pub fn verify_with_ends(h: &Homotopy, start: &PointMap, end: &PointMap) -> Result<HomotopyVerdict> {
    for m in [start, end] {
        if m.dom_n() != h.x().n() || m.cod_n() != h.y().n() {
            return Err(Error::ShapeMismatch(
                "boundary map does not fit the homotopy".into(),
            ));
        }
    }
    let (e0, e1) = (h.interval().e0(), h.interval().e1());
    let boundary = first_violation(
        h,
        (0..h.x().n()).flat_map(|x| [(x, e0, start.apply(x)), (x, e1, end.apply(x))]),
    );
    Ok(HomotopyVerdict::from_parts(
        boundary,
        continuity_witness(h)?,
    ))
}

/// `H(x, 0) = (F∘f)(x)` and `H(x, 1) = (g∘F)(x)` with `F` the stored bridge.
pub fn verify_btds_homotopy(h: &Homotopy, f: &PointMap, g: &PointMap) -> Result<HomotopyVerdict> {
    check_self_map(f, h.x().n(), "f")?;
    check_self_map(g, h.y().n(), "g")?;
    let start = compose(h.bridge(), f)?;
    let end = compose(g, h.bridge())?;
    verify_with_ends(h, &start, &end)
}

/// Boundary conditions only along the orbit `x_{n+1} = f(x_n)` of `x0`:
/// `H(x_{n+1}, 0) = (F∘f)(x_n)` and `H(x_{n+1}, 1) = (g∘F)(x_n)` for
/// `n < budget`, stopping once the orbit repeats.
pub fn verify_iteration_homotopy(
    h: &Homotopy,
    f: &PointMap,
    g: &PointMap,
    x0: usize,
    budget: usize,
) -> Result<HomotopyVerdict> {
    check_self_map(f, h.x().n(), "f")?;
    check_self_map(g, h.y().n(), "g")?;
    if x0 >= h.x().n() {
        return Err(Error::OutOfRange {
            point: x0,
            n: h.x().n(),
        });
    }
    let boundary = first_violation(h, iteration_cells(h, f, g, x0, budget));
    Ok(HomotopyVerdict::from_parts(
        boundary,
        continuity_witness(h)?,
    ))
}

/// `(cell x, cell t, required value)` triples of the iteration conditions.
pub(crate) fn iteration_cells(
    h: &Homotopy,
    f: &PointMap,
    g: &PointMap,
    x0: usize,
    budget: usize,
) -> Vec<(usize, usize, usize)> {
    iteration_pins(h.bridge(), f, g, h.interval(), x0, budget)
}

pub(crate) fn iteration_pins(
    bridge: &PointMap,
    f: &PointMap,
    g: &PointMap,
    interval: &IntervalModel,
    x0: usize,
    budget: usize,
) -> Vec<(usize, usize, usize)> {
    let (e0, e1) = (interval.e0(), interval.e1());
    let mut seen = Vec::new();
    let mut cells = Vec::new();
    let mut xn = x0;
    while seen.len() < budget && !seen.contains(&xn) {
        seen.push(xn);
        let next = f.apply(xn);
        cells.push((next, e0, bridge.apply(f.apply(xn))));
        cells.push((next, e1, g.apply(bridge.apply(xn))));
        xn = next;
    }
    cells
}

/// Path homotopy over `domain × T`: interior rows `m` satisfy
/// `H(m, 0) = (F∘f)(m)` and `H(m, 1) = (g∘F)(m)`; the endpoint rows are
/// constant at the path's start and end for every time level.
pub fn verify_path_homotopy(
    h: &Homotopy,
    domain: &IntervalModel,
    f: &PointMap,
    g: &PointMap,
    path: &BitopPath,
) -> Result<HomotopyVerdict> {
    if h.x() != domain.space() || path.interval() != domain {
        return Err(Error::ShapeMismatch(
            "path homotopy domain must be the path's interval model".into(),
        ));
    }
    if h.bridge() != path.map() || h.y() != path.y() {
        return Err(Error::ShapeMismatch(
            "homotopy bridge must be the path".into(),
        ));
    }
    check_self_map(f, domain.n(), "f")?;
    check_self_map(g, h.y().n(), "g")?;
    let boundary = first_violation(h, path_pins(domain, h.interval(), f, g, path));
    Ok(HomotopyVerdict::from_parts(
        boundary,
        continuity_witness(h)?,
    ))
}

pub(crate) fn path_pins(
    domain: &IntervalModel,
    interval: &IntervalModel,
    f: &PointMap,
    g: &PointMap,
    path: &BitopPath,
) -> Vec<(usize, usize, usize)> {
    let (e0, e1) = (interval.e0(), interval.e1());
    let bridge = path.map();
    let mut cells = Vec::new();
    for t in 0..interval.n() {
        cells.push((domain.e0(), t, path.start()));
        cells.push((domain.e1(), t, path.end()));
    }
    for m in domain.interior().iter() {
        cells.push((m, e0, bridge.apply(f.apply(m))));
        cells.push((m, e1, g.apply(bridge.apply(m))));
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitop::BitopSpace;
    use crate::fintop::{FiniteTopology, PointSet, TopologyIndex};
    use crate::homotopy::standard_interval;

    fn s(points: &[usize]) -> PointSet {
        PointSet::from_points(points.iter().copied())
    }

    fn x_space() -> BitopSpace {
        BitopSpace::new(FiniteTopology::discrete(4), FiniteTopology::indiscrete(4)).unwrap()
    }

    fn y_space() -> BitopSpace {
        let psi1 = FiniteTopology::from_open_family(
            3,
            &[s(&[]), s(&[0, 1, 2]), s(&[0]), s(&[0, 1])],
            true,
        )
        .unwrap();
        BitopSpace::new(psi1, FiniteTopology::indiscrete(3)).unwrap()
    }

    fn k_table(h_at: impl Fn(usize, usize) -> usize) -> Homotopy {
        let bridge = PointMap::new(3, vec![0, 1, 2, 2]).unwrap();
        Homotopy::from_fn(
            x_space(),
            y_space(),
            standard_interval(1).unwrap(),
            bridge,
            h_at,
        )
        .unwrap()
    }

    #[test]
    fn constant_homotopy_verifies() {
        let x = BitopSpace::discrete(2);
        let y = BitopSpace::discrete(2);
        let bridge = PointMap::constant(2, 2, 1).unwrap();
        let h = Homotopy::from_fn(x, y, standard_interval(1).unwrap(), bridge, |_, _| 1).unwrap();
        let f = PointMap::identity(2);
        let g = PointMap::constant(2, 2, 1).unwrap();
        let v = verify_btds_homotopy(&h, &f, &g).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn example_k_boundaries_hold_but_continuity_fails() {
        let gf = [1, 2, 0, 0];
        let k = k_table(|x, t| if t == 0 { 1 } else { gf[x] });
        let f = PointMap::constant(4, 4, 1).unwrap();
        let g = PointMap::new(3, vec![1, 2, 0]).unwrap();
        let v = verify_btds_homotopy(&k, &f, &g).unwrap();
        assert!(v.boundary_ok());
        assert!(!v.continuity_ok());
        assert!(!v.holds);
        assert_eq!(v.continuity.unwrap().index, TopologyIndex::First);
    }

    #[test]
    fn reflexive_construction() {
        let x =
            BitopSpace::new(FiniteTopology::discrete(3), FiniteTopology::indiscrete(3)).unwrap();
        let f = PointMap::new(3, vec![1, 1, 2]).unwrap();
        let h = Homotopy::from_fn(
            x.clone(),
            x,
            standard_interval(1).unwrap(),
            PointMap::identity(3),
            |xx, _| f.apply(xx),
        )
        .unwrap();
        assert!(verify_btds_homotopy(&h, &f, &f).unwrap().holds);
    }

    #[test]
    fn reverse_swaps_roles() {
        let gf = [1, 2, 0, 0];
        let k = k_table(|x, t| if t == 0 { 1 } else { gf[x] });
        let r = k.reverse();
        assert_eq!(r.reverse(), k);
        for (x, &v) in gf.iter().enumerate() {
            assert_eq!(r.value(x, 0), v);
            assert_eq!(r.value(x, 2), 1);
        }
        let start = PointMap::new(3, gf.to_vec()).unwrap();
        let end = PointMap::constant(4, 3, 1).unwrap();
        assert!(verify_with_ends(&r, &start, &end).unwrap().boundary_ok());
    }

    #[test]
    fn iteration_conditions_follow_orbit_only() {
        // f ≡ 0 on two points: orbit of 0 is just 0, so only H(0, ·) is pinned.
        let x = BitopSpace::discrete(2);
        let y = BitopSpace::discrete(2);
        let f = PointMap::constant(2, 2, 0).unwrap();
        let g = PointMap::identity(2);
        let bridge = PointMap::identity(2);
        // Row 1 violates the plain boundary condition but is off-orbit.
        let h = Homotopy::from_fn(x, y, standard_interval(1).unwrap(), bridge, |xx, _| {
            if xx == 0 {
                0
            } else {
                1
            }
        })
        .unwrap();
        assert!(verify_iteration_homotopy(&h, &f, &g, 0, 10).unwrap().holds);
        assert!(!verify_btds_homotopy(&h, &f, &g).unwrap().boundary_ok());
    }

    #[test]
    fn iteration_three_cycle_pins_three_rows() {
        let y = BitopSpace::indiscrete(3);
        let cyc = PointMap::new(3, vec![1, 2, 0]).unwrap();
        let interval = standard_interval(1).unwrap();
        let pins = iteration_pins(&PointMap::identity(3), &cyc, &cyc, &interval, 0, 10);
        let rows: Vec<usize> = pins.iter().map(|c| c.0).collect();
        assert_eq!(rows, vec![1, 1, 2, 2, 0, 0]);
        let h =
            Homotopy::from_fn(y.clone(), y, interval, PointMap::identity(3), |xx, _| xx).unwrap();
        assert!(
            verify_iteration_homotopy(&h, &cyc, &cyc, 0, 10)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn path_homotopy_checks() {
        let dom = standard_interval(1).unwrap();
        let y = BitopSpace::indiscrete(2);
        let path = BitopPath::constant(dom.clone(), y.clone(), 0).unwrap();
        let id = PointMap::identity(3);
        let g = PointMap::identity(2);
        let h = Homotopy::from_fn(
            dom.space().clone(),
            y.clone(),
            standard_interval(1).unwrap(),
            path.map().clone(),
            |_, _| 0,
        )
        .unwrap();
        assert!(
            verify_path_homotopy(&h, &dom, &id, &g, &path)
                .unwrap()
                .holds
        );

        let bad = Homotopy::from_fn(
            dom.space().clone(),
            y,
            standard_interval(1).unwrap(),
            path.map().clone(),
            |m, t| if m == 0 && t == 1 { 1 } else { 0 },
        )
        .unwrap();
        let v = verify_path_homotopy(&bad, &dom, &id, &g, &path).unwrap();
        assert_eq!(
            v.boundary,
            Some(BoundaryViolation {
                x: 0,
                t: 1,
                expected: 0,
                actual: 1
            })
        );
    }

    #[test]
    fn shape_errors() {
        let gf = [1, 2, 0, 0];
        let k = k_table(|x, t| if t == 0 { 1 } else { gf[x] });
        let wrong = PointMap::identity(3);
        assert!(matches!(
            verify_btds_homotopy(&k, &wrong, &wrong),
            Err(Error::ShapeMismatch(_))
        ));
    }
}

//! JSON interchange format for bilinear maps: group factor lists plus the
//! generator grid, `grid[i][j]` holding the target coordinates of the value
//! on (e_i, e_j).

use serde::{Deserialize, Serialize};

use abpair::{BilinearMap, Error, FinAbGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireMap {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    pub target: Vec<u64>,
    pub grid: Vec<Vec<Vec<u64>>>,
}

impl WireMap {
    pub fn from_map(f: &BilinearMap) -> Self {
        WireMap {
            left: f.left().factors().to_vec(),
            right: f.right().factors().to_vec(),
            target: f.target().factors().to_vec(),
            grid: f
                .grid()
                .iter()
                .map(|row| row.iter().map(|cell| cell.coords().to_vec()).collect())
                .collect(),
        }
    }

    pub fn into_map(self) -> Result<BilinearMap, Error> {
        let left = FinAbGroup::new(self.left)?;
        let right = FinAbGroup::new(self.right)?;
        let target = FinAbGroup::new(self.target)?;
        let mut grid = Vec::with_capacity(self.grid.len());
        for (i, row) in self.grid.iter().enumerate() {
            let mut cells = Vec::with_capacity(row.len());
            for (j, coords) in row.iter().enumerate() {
                if coords.len() == target.arity() {
                    for (&c, &d) in coords.iter().zip(target.factors()) {
                        if c >= d {
                            return Err(Error::Invalid(format!(
                                "grid[{i}][{j}] coordinate {c} is out of range for Z{d}"
                            )));
                        }
                    }
                }
                cells.push(target.element(coords)?);
            }
            grid.push(cells);
        }
        BilinearMap::new(left, right, target, grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use abpair::canonical_map;

    #[test]
    fn round_trips_through_json() {
        let f = canonical_map(
            &FinAbGroup::new(vec![6, 4]).unwrap(),
            &FinAbGroup::new(vec![4]).unwrap(),
        );
        let wire = WireMap::from_map(&f);
        let text = serde_json::to_string(&wire).unwrap();
        let back: WireMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, wire);
        assert_eq!(back.into_map().unwrap(), f);
    }

    #[test]
    fn rejects_grids_that_violate_the_order_constraint() {
        let wire = WireMap {
            left: vec![2],
            right: vec![2],
            target: vec![4],
            grid: vec![vec![vec![1]]],
        };
        assert!(matches!(wire.into_map(), Err(Error::OrderConstraint { .. })));
    }

    #[test]
    fn rejects_out_of_range_coordinates_and_bad_shapes() {
        let out_of_range = WireMap {
            left: vec![2],
            right: vec![2],
            target: vec![2],
            grid: vec![vec![vec![5]]],
        };
        assert!(out_of_range.into_map().is_err());
        let jagged = WireMap {
            left: vec![2, 2],
            right: vec![2],
            target: vec![2],
            grid: vec![vec![vec![0]]],
        };
        assert!(matches!(jagged.into_map(), Err(Error::ArityMismatch { .. })));
    }
}

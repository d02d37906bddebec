use crate::asymptotic::AsymptoticSet;
use crate::error::{Error, Result};
use crate::facon::{Cell, FaconSearch, Family};
use crate::groebner::Ideal;
use crate::poly::Polynomial;

const MAX_COMPONENTS: usize = 12;

/// Cells of the component arrangement: for each nonempty set `T` of
/// components, the points where exactly the components in `T` vanish.
/// Empty cells are dropped. Order: by `|T|`, then lexicographically.
pub fn arrangement_cells(sf: &AsymptoticSet) -> Result<Vec<Cell>> {
    let comps = sf.polynomials();
    let m = comps.len();
    if m > MAX_COMPONENTS {
        return Err(Error::ResourceLimit(format!(
            "{m} components exceed the arrangement limit of {MAX_COMPONENTS}"
        )));
    }
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << m))
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut cells = Vec::new();
    for t in subsets {
        let inside = Ideal::new(&sf.target, t.iter().map(|&i| comps[i].clone()));
        let opens: Vec<Polynomial> = (0..m).filter(|i| !t.contains(i)).map(|i| comps[i].clone()).collect();
        let h = opens.iter().fold(Polynomial::one(&sf.target), |acc, p| &acc * p);
        let closure = if opens.is_empty() {
            inside
        } else {
            inside.saturate(&h)?
        };
        if closure.is_unit()? {
            continue;
        }
        let cell = Cell::new(closure, opens, t)?;
        if !cell.is_empty() {
            cells.push(cell);
        }
    }
    Ok(cells)
}

/// A cell with its façon data.
#[derive(Clone, Debug)]
pub struct CellFacons {
    pub cell: Cell,
    /// Every family with a limit in the cell.
    pub families: Vec<Family>,
    /// One generic witness per façon, sorted by label.
    pub facons: Vec<Family>,
    /// Index of the class of cells sharing the same façon set.
    pub class: usize,
}

impl CellFacons {
    pub fn labels(&self) -> Vec<String> {
        self.facons.iter().map(|f| f.facon.to_string()).collect()
    }
}

/// Façon sets per cell; cells with equal sets share a class index.
pub fn partition_by_facons(sf: &AsymptoticSet, search: &FaconSearch) -> Result<Vec<CellFacons>> {
    let mut out: Vec<CellFacons> = Vec::new();
    let mut classes: Vec<Vec<String>> = Vec::new();
    for cell in arrangement_cells(sf)? {
        let families = search.families_on(&cell)?;
        let facons = crate::facon::generic_witnesses(families.clone());
        let labels: Vec<String> = facons.iter().map(|f| f.facon.to_string()).collect();
        let class = match classes.iter().position(|c| *c == labels) {
            Some(k) => k,
            None => {
                classes.push(labels);
                classes.len() - 1
            }
        };
        out.push(CellFacons {
            cell,
            families,
            facons,
            class,
        });
    }
    Ok(out)
}

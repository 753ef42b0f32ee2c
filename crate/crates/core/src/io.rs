//! Text formats: group and subgroup spec strings, window JSON files.
//!
//! Groups are written `Z12` or `Z4xZ2` (case-insensitive, whitespace
//! ignored). Subgroups are `full`, `trivial`, `gen:<elem>(;<elem>)*` or
//! `elems:<elem>(;<elem>)*`, an element being `a1,...,ak`. In a cyclic group
//! commas may also separate elements, so `gen:2,3` and `elems:0,6` work.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GaborError, Result};
use crate::group::{FiniteAbelianGroup, Subgroup};
use crate::transforms::Window;

fn compact(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase()
}

pub fn parse_group(spec: &str) -> Result<FiniteAbelianGroup> {
    let s = compact(spec);
    if s.is_empty() {
        return Err(GaborError::Parse("empty group spec".into()));
    }
    let factors = s
        .split('x')
        .map(|part| {
            part.strip_prefix('z')
                .and_then(|n| n.parse::<i64>().ok())
                .ok_or_else(|| GaborError::Parse(format!("bad factor {part:?} in group spec {spec:?}")))
        })
        .collect::<Result<Vec<i64>>>()?;
    FiniteAbelianGroup::new(&factors).map_err(|e| GaborError::Parse(e.to_string()))
}

/// Index of the element `a1,...,ak`; residues are reduced.
pub fn parse_element(g: &FiniteAbelianGroup, spec: &str) -> Result<usize> {
    let residues = compact(spec)
        .split(',')
        .map(|a| {
            a.parse::<i64>()
                .map_err(|_| GaborError::Parse(format!("bad residue {a:?} in element {spec:?}")))
        })
        .collect::<Result<Vec<i64>>>()?;
    if residues.len() != g.rank() {
        return Err(GaborError::Parse(format!(
            "element {spec:?} has {} residues, {g} needs {}",
            residues.len(),
            g.rank()
        )));
    }
    g.index_reduced(&residues)
        .map_err(|e| GaborError::Parse(e.to_string()))
}

fn parse_element_list(g: &FiniteAbelianGroup, list: &str) -> Result<Vec<usize>> {
    let items: Vec<&str> = if g.rank() == 1 {
        list.split([';', ',']).collect()
    } else {
        list.split(';').collect()
    };
    items
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|e| parse_element(g, e))
        .collect()
}

pub fn parse_subgroup(g: &FiniteAbelianGroup, spec: &str) -> Result<Subgroup> {
    let s = compact(spec);
    let to_parse = |e: GaborError| GaborError::Parse(format!("subgroup spec {spec:?}: {e}"));
    match s.as_str() {
        "full" => return Ok(Subgroup::full(g)),
        "trivial" => return Ok(Subgroup::trivial(g)),
        _ => {}
    }
    if let Some(list) = s.strip_prefix("gen:") {
        let gens = parse_element_list(g, list)?;
        Subgroup::generated_by(g, &gens).map_err(to_parse)
    } else if let Some(list) = s.strip_prefix("elems:") {
        let elems = parse_element_list(g, list)?;
        Subgroup::from_elements(g, &elems).map_err(to_parse)
    } else {
        Err(GaborError::Parse(format!(
            "subgroup spec {spec:?} must be full, trivial, gen:... or elems:..."
        )))
    }
}

/// A spec string that [`parse_subgroup`] maps back to `s`.
pub fn subgroup_spec(s: &Subgroup) -> String {
    let gens = s.generators();
    if gens.is_empty() {
        return "trivial".into();
    }
    let g = s.parent();
    let elems: Vec<String> = gens
        .iter()
        .map(|&x| {
            g.element(x)
                .0
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("gen:{}", elems.join(";"))
}

#[derive(Serialize, Deserialize)]
struct WindowFile {
    group: Vec<i64>,
    values: Vec<[f64; 2]>,
}

pub fn window_from_json(text: &str) -> Result<Window> {
    let file: WindowFile = serde_json::from_str(text)?;
    let g = FiniteAbelianGroup::new(&file.group)?;
    if file.values.len() != g.order() {
        return Err(GaborError::Shape(format!(
            "window file has {} values, {g} has order {}",
            file.values.len(),
            g.order()
        )));
    }
    Window::new(&g, file.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
}

pub fn window_to_json(w: &Window) -> String {
    let file = WindowFile {
        group: w.group().factors().iter().map(|&l| l as i64).collect(),
        values: w.values().iter().map(|v| [v.re, v.im]).collect(),
    };
    serde_json::to_string(&file).expect("window serializes")
}

pub fn read_window(path: &Path) -> Result<Window> {
    window_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_window(path: &Path, w: &Window) -> Result<()> {
    std::fs::write(path, window_to_json(w) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_specs() {
        assert_eq!(parse_group("Z12").unwrap().factors(), &[12]);
        assert_eq!(parse_group(" z4 X z2 ").unwrap().factors(), &[4, 2]);
        for bad in ["Z5x", "", "Z0", "12", "Zx3", "Z-2"] {
            assert!(matches!(parse_group(bad), Err(GaborError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn subgroup_specs() {
        let g = parse_group("Z12").unwrap();
        assert_eq!(parse_subgroup(&g, "gen:2").unwrap().elements(), &[0, 2, 4, 6, 8, 10]);
        assert_eq!(parse_subgroup(&g, "gen:4,6").unwrap().order(), 6);
        assert_eq!(parse_subgroup(&g, "elems:0,6").unwrap().elements(), &[0, 6]);
        assert_eq!(parse_subgroup(&g, "full").unwrap().order(), 12);
        assert_eq!(parse_subgroup(&g, "trivial").unwrap().order(), 1);
        assert!(parse_subgroup(&g, "elems:0,5").is_err());
        assert!(parse_subgroup(&g, "gen:x").is_err());
        assert!(parse_subgroup(&g, "2").is_err());

        let g = parse_group("Z2xZ4").unwrap();
        let s = parse_subgroup(&g, "gen:1,0;0,2").unwrap();
        assert_eq!(s.order(), 4);
        assert!(parse_subgroup(&g, "gen:1").is_err());
    }

    #[test]
    fn subgroup_specs_round_trip() {
        for spec in ["Z12", "Z2xZ4", "Z3xZ3", "Z2xZ2xZ2"] {
            let g = parse_group(spec).unwrap();
            assert_eq!(parse_group(&g.to_string()).unwrap(), g);
            for s in crate::group::all_subgroups(&g).unwrap() {
                assert_eq!(parse_subgroup(&g, &subgroup_spec(&s)).unwrap(), s);
            }
        }
    }

    #[test]
    fn window_json_round_trip() {
        let g = parse_group("Z3").unwrap();
        let w = Window::new(&g, vec![Complex64::new(1.0, -0.5), Complex64::new(0.1, 0.0), Complex64::new(-2.0, 3.0)])
            .unwrap();
        assert_eq!(window_from_json(&window_to_json(&w)).unwrap(), w);
        let short = r#"{"group":[3],"values":[[1,0],[0,0]]}"#;
        assert!(matches!(window_from_json(short), Err(GaborError::Shape(_))));
    }
}

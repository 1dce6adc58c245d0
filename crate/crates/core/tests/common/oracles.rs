//! Independent reference implementations shared by the test targets.

use std::collections::HashSet;
use std::process::Command;

use ecofjsp::decode::Genotype;
use ecofjsp::model::{enrich, EnergyProfile, EnrichedInstance, Instance};
use ecofjsp::ObjectiveVector;

/// Peels non-dominated layers one at a time by checking every pair.
pub fn naive_fronts(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let better = |a: &ObjectiveVector, b: &ObjectiveVector| {
            let (x, y) = (a.as_array(), b.as_array());
            (0..3).all(|m| x[m] <= y[m]) && (0..3).any(|m| x[m] < y[m])
        };
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| better(&objs[j], &objs[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Sections of an LP file read back independently of the writer.
pub struct ParsedLp {
    pub rows: usize,
    pub binaries: HashSet<String>,
    pub fixed_zero: HashSet<String>,
    pub row_names: Vec<String>,
}

pub fn parse_lp(text: &str) -> ParsedLp {
    let mut section = "";
    let mut parsed = ParsedLp {
        rows: 0,
        binaries: HashSet::new(),
        fixed_zero: HashSet::new(),
        row_names: Vec::new(),
    };
    for line in text.lines() {
        let t = line.trim();
        match t {
            "Subject To" | "Bounds" | "Binary" | "End" => {
                section = t;
                continue;
            }
            _ if t.starts_with("Minimize") => {
                section = "Minimize";
                continue;
            }
            _ => {}
        }
        match section {
            "Subject To" => {
                if let Some((name, _)) = t.split_once(':') {
                    if !name.contains(' ') {
                        parsed.rows += 1;
                        parsed.row_names.push(name.to_string());
                    }
                }
            }
            "Bounds" => {
                if let Some(v) = t.strip_suffix(" = 0") {
                    parsed.fixed_zero.insert(v.to_string());
                }
            }
            "Binary" => {
                parsed
                    .binaries
                    .extend(t.split_whitespace().map(str::to_string));
            }
            _ => {}
        }
    }
    parsed
}

const SOLVE_PY: &str = r#"
import sys, highspy
h = highspy.Highs()
h.setOptionValue("output_flag", False)
h.setOptionValue("mip_rel_gap", 0.0)
h.setOptionValue("mip_abs_gap", 1e-9)
h.readModel(sys.argv[1])
h.run()
print(h.modelStatusToString(h.getModelStatus()))
print(repr(h.getInfo().objective_function_value))
"#;

pub fn solver_available() -> bool {
    Command::new("python3")
        .args(["-c", "import highspy"])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

pub fn solve_lp(text: &str) -> (String, f64) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.lp");
    std::fs::write(&path, text).unwrap();
    let out = Command::new("python3")
        .args(["-c", SOLVE_PY])
        .arg(&path)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    let status = lines.next().unwrap_or_default().to_string();
    let value = lines
        .next()
        .and_then(|v| v.parse().ok())
        .unwrap_or(f64::NAN);
    (status, value)
}

/// Three jobs of two operations on two machines. Steps 0 to 3 each break the
/// price or the emission cap of the first operation; steps 4 and 5 meet both.
pub fn worked_example() -> (EnrichedInstance, Genotype) {
    let inst = Instance::new(
        2,
        vec![
            vec![vec![(0, 3), (1, 2)], vec![(0, 2)]],
            vec![vec![(0, 2)], vec![(1, 1), (0, 2)]],
            vec![vec![(1, 3)], vec![(0, 1), (1, 2)]],
        ],
    )
    .unwrap();
    let price = vec![
        5.0, 0.5, 3.0, 0.8, 0.9, 1.0, 6.0, 4.0, 2.0, 0.7, 3.5, 5.0, 1.5, 0.6, 2.5, 4.5,
    ];
    let emission = vec![
        2.0, 7.0, 3.0, 9.0, 3.0, 4.0, 8.0, 6.0, 2.5, 5.0, 7.5, 3.5, 1.0, 6.5, 4.5, 2.0,
    ];
    let e = enrich(
        inst,
        EnergyProfile::new(15, price, emission).unwrap(),
        500.0,
    )
    .unwrap();
    let g = Genotype {
        sequence: vec![0, 1, 2, 0, 2, 1],
        machine: vec![1, 0, 0, 0, 0, 1],
        price_cap: vec![1.0, 6.0, 6.0, 6.0, 6.0, 6.0],
        emission_cap: vec![4.0, 9.0, 9.0, 9.0, 9.0, 9.0],
    };
    (e, g)
}

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EnrichedInstance;

/// Which objective the emitted model minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Makespan,
    Cost,
    Emissions,
}

impl Objective {
    pub fn variable(self) -> &'static str {
        match self {
            Objective::Makespan => "cmax",
            Objective::Cost => "psum",
            Objective::Emissions => "esum",
        }
    }
}

/// Scalarization of the three-objective model for one solver call.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpEmission {
    pub objective: Objective,
    pub eps_makespan: Option<f64>,
    pub eps_cost: Option<f64>,
    pub eps_emissions: Option<f64>,
    /// Big-M constant; `None` uses `2 * |T|`.
    pub big_l: Option<f64>,
    /// Refuse instances with more start-indicator variables than this.
    pub max_variables: usize,
}

impl MilpEmission {
    pub fn new(objective: Objective) -> Self {
        Self {
            objective,
            eps_makespan: None,
            eps_cost: None,
            eps_emissions: None,
            big_l: None,
            max_variables: 200_000,
        }
    }

    /// Epsilon rows actually emitted: bounds on the two non-minimized
    /// objectives that are present.
    fn epsilon_rows(&self) -> Vec<(&'static str, &'static str, f64)> {
        [
            (Objective::Makespan, "eps_makespan", self.eps_makespan),
            (Objective::Cost, "eps_cost", self.eps_cost),
            (Objective::Emissions, "eps_emissions", self.eps_emissions),
        ]
        .into_iter()
        .filter(|(o, _, _)| *o != self.objective)
        .filter_map(|(o, name, eps)| eps.map(|v| (name, o.variable(), v)))
        .collect()
    }
}

/// Closed-form sizes of the emitted model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MilpCounts {
    pub x: usize,
    pub y: usize,
    pub p: usize,
    pub s: usize,
    pub c: usize,
    pub rows: usize,
}

/// Variable and row counts for `|O|` operations, `|J|` jobs, `|M|`
/// machines, `|T|` steps and `eps_rows` epsilon rows.
pub fn milp_counts(
    ops: usize,
    jobs: usize,
    machines: usize,
    steps: usize,
    eps_rows: usize,
) -> MilpCounts {
    let om = ops * machines;
    let pairs = ops * ops.saturating_sub(1) / 2;
    MilpCounts {
        x: om,
        y: machines * pairs,
        p: om * steps,
        s: om,
        c: om,
        // makespan, start/end gating, duration, x-p link: one row per (i,j,k)
        // cost and emission definitions: 2; assignment: |O|;
        // precedence: |O| - |J|; disjunction: 2 per pair and machine;
        // start-indicator linking: 2 per (i,j,k,t)
        rows: 4 * om + 2 + ops + (ops - jobs) + 2 * machines * pairs + 2 * om * steps + eps_rows,
    }
}

struct Lp {
    text: String,
    rows: usize,
}

impl Lp {
    fn row(&mut self, name: &str, terms: &[(f64, String)], sense: &str, rhs: f64) {
        let _ = write!(self.text, " {name}:");
        let mut written = 0;
        for (coef, var) in terms {
            if *coef == 0.0 {
                continue;
            }
            if written > 0 && written % 8 == 0 {
                self.text.push_str("\n  ");
            }
            let sign = if *coef < 0.0 { '-' } else { '+' };
            let mag = coef.abs();
            if mag == 1.0 {
                let _ = write!(self.text, " {sign} {var}");
            } else {
                let _ = write!(self.text, " {sign} {mag} {var}");
            }
            written += 1;
        }
        if written == 0 {
            self.text.push_str(" 0 cmax");
        }
        let _ = writeln!(self.text, " {sense} {rhs}");
        self.rows += 1;
    }
}

/// Emits the time-indexed mixed-integer model in LP file format.
///
/// Variables use one-based job, operation and machine indices and
/// zero-based time steps: `x_i_j_k`, `y_i_j_i'_j'_k`, `p_i_j_k_t`,
/// `s_i_j_k`, `c_i_j_k`, `cmax`, `psum`, `esum`. All machines get variable
/// copies; ineligible ones and start steps that would overrun the horizon are
/// fixed to zero in the `Bounds` section.
pub fn emit_milp(e: &EnrichedInstance, m: &MilpEmission) -> Result<String> {
    let inst = e.instance();
    let (n_ops, n_jobs, n_mach, n_steps) = (
        inst.total_operations(),
        inst.job_count(),
        inst.machine_count(),
        e.horizon(),
    );
    let eps = m.epsilon_rows();
    let counts = milp_counts(n_ops, n_jobs, n_mach, n_steps, eps.len());
    if counts.p > m.max_variables {
        return Err(Error::Limit(format!(
            "{} start-indicator variables ({} ops x {} machines x {} steps) exceed the cap of {}",
            counts.p, n_ops, n_mach, n_steps, m.max_variables
        )));
    }
    let big_l = m.big_l.unwrap_or(2.0 * n_steps as f64);
    if big_l < 2.0 * n_steps as f64 {
        return Err(Error::Parameter(format!(
            "big L {big_l} is below 2|T| = {}",
            2 * n_steps
        )));
    }

    let tag = |op: usize| {
        let (i, j) = inst.op_ref(op);
        format!("{}_{}", i + 1, j + 1)
    };
    let var = |prefix: &str, op: usize, k: usize| format!("{prefix}_{}_{}", tag(op), k + 1);
    let pvar = |op: usize, k: usize, t: usize| format!("p_{}_{}_{t}", tag(op), k + 1);
    let duration = |op: usize, k: usize| {
        let spec = inst.operation(op);
        spec.option_for_machine(k).map(|o| spec.options[o].duration)
    };

    let mut lp = Lp {
        text: String::new(),
        rows: 0,
    };
    let _ = writeln!(
        lp.text,
        "\\ energy-aware FJSP: |O|={n_ops} |J|={n_jobs} |M|={n_mach} |T|={n_steps} L={big_l}"
    );
    let _ = writeln!(
        lp.text,
        "Minimize\n obj: {}\nSubject To",
        m.objective.variable()
    );

    for op in 0..n_ops {
        for k in 0..n_mach {
            lp.row(
                &format!("makespan_{}_{}", tag(op), k + 1),
                &[(1.0, "cmax".into()), (-1.0, var("c", op, k))],
                ">=",
                0.0,
            );
        }
    }

    let mut cost_terms = vec![(1.0, "psum".to_string())];
    let mut em_terms = vec![(1.0, "esum".to_string())];
    for op in 0..n_ops {
        let job = inst.operation(op).job;
        for k in 0..n_mach {
            let Some(tau) = duration(op, k) else { continue };
            for t in 0..n_steps.saturating_sub(tau - 1) {
                let c = e.window_cost(job, t, tau);
                cost_terms.push((-c.cost, pvar(op, k, t)));
                em_terms.push((-c.emissions, pvar(op, k, t)));
            }
        }
    }
    lp.row("cost", &cost_terms, "=", 0.0);
    lp.row("emissions", &em_terms, "=", 0.0);

    for op in 0..n_ops {
        let terms: Vec<(f64, String)> = (0..n_mach).map(|k| (1.0, var("x", op, k))).collect();
        lp.row(&format!("assign_{}", tag(op)), &terms, "=", 1.0);
    }

    for op in 0..n_ops {
        for k in 0..n_mach {
            lp.row(
                &format!("gate_{}_{}", tag(op), k + 1),
                &[
                    (1.0, var("s", op, k)),
                    (1.0, var("c", op, k)),
                    (-big_l, var("x", op, k)),
                ],
                "<=",
                0.0,
            );
        }
    }
    for op in 0..n_ops {
        for k in 0..n_mach {
            let tau = duration(op, k).unwrap_or(0) as f64;
            lp.row(
                &format!("duration_{}_{}", tag(op), k + 1),
                &[
                    (1.0, var("c", op, k)),
                    (-1.0, var("s", op, k)),
                    (-big_l, var("x", op, k)),
                ],
                ">=",
                tau - big_l,
            );
        }
    }
    for op in 0..n_ops {
        if inst.operation(op).position == 0 {
            continue;
        }
        let mut terms: Vec<(f64, String)> = (0..n_mach).map(|k| (1.0, var("s", op, k))).collect();
        terms.extend((0..n_mach).map(|k| (-1.0, var("c", op - 1, k))));
        lp.row(&format!("precedence_{}", tag(op)), &terms, ">=", 0.0);
    }

    let mut ys = Vec::with_capacity(counts.y);
    for k in 0..n_mach {
        for a in 0..n_ops {
            for b in a + 1..n_ops {
                let y = format!("y_{}_{}_{}", tag(a), tag(b), k + 1);
                // y = 1: a precedes b on k
                lp.row(
                    &format!("before_{}_{}_{}", tag(a), tag(b), k + 1),
                    &[
                        (1.0, var("s", a, k)),
                        (-1.0, var("c", b, k)),
                        (big_l, y.clone()),
                    ],
                    ">=",
                    0.0,
                );
                lp.row(
                    &format!("after_{}_{}_{}", tag(a), tag(b), k + 1),
                    &[
                        (1.0, var("s", b, k)),
                        (-1.0, var("c", a, k)),
                        (-big_l, y.clone()),
                    ],
                    ">=",
                    -big_l,
                );
                ys.push(y);
            }
        }
    }

    for op in 0..n_ops {
        for k in 0..n_mach {
            let mut terms = vec![(1.0, var("x", op, k))];
            terms.extend((0..n_steps).map(|t| (-1.0, pvar(op, k, t))));
            lp.row(&format!("link_{}_{}", tag(op), k + 1), &terms, "=", 0.0);
        }
    }
    for op in 0..n_ops {
        for k in 0..n_mach {
            for t in 0..n_steps {
                lp.row(
                    &format!("start_lo_{}_{}_{t}", tag(op), k + 1),
                    &[(1.0, var("s", op, k)), (-big_l, pvar(op, k, t))],
                    ">=",
                    t as f64 - big_l,
                );
                lp.row(
                    &format!("start_hi_{}_{}_{t}", tag(op), k + 1),
                    &[(1.0, var("s", op, k)), (big_l, pvar(op, k, t))],
                    "<=",
                    t as f64 + big_l,
                );
            }
        }
    }
    for (name, variable, bound) in &eps {
        lp.row(name, &[(1.0, variable.to_string())], "<=", *bound);
    }
    debug_assert_eq!(lp.rows, counts.rows);

    let mut text = lp.text;
    text.push_str("Bounds\n psum free\n");
    for op in 0..n_ops {
        for k in 0..n_mach {
            match duration(op, k) {
                None => {
                    let _ = writeln!(text, " {} = 0", var("x", op, k));
                    for t in 0..n_steps {
                        let _ = writeln!(text, " {} = 0", pvar(op, k, t));
                    }
                }
                Some(tau) => {
                    for t in (n_steps + 1).saturating_sub(tau)..n_steps {
                        let _ = writeln!(text, " {} = 0", pvar(op, k, t));
                    }
                }
            }
        }
    }
    text.push_str("Binary\n");
    for op in 0..n_ops {
        for k in 0..n_mach {
            let _ = writeln!(text, " {}", var("x", op, k));
        }
    }
    for y in &ys {
        let _ = writeln!(text, " {y}");
    }
    for op in 0..n_ops {
        for k in 0..n_mach {
            for t in 0..n_steps {
                let _ = writeln!(text, " {}", pvar(op, k, t));
            }
        }
    }
    text.push_str("End\n");
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enrich, EnergyProfile, Instance};

    fn two_ops_two_machines() -> EnrichedInstance {
        let inst = Instance::new(2, vec![vec![vec![(0, 1), (1, 2)], vec![(1, 1)]]]).unwrap();
        enrich(
            inst,
            EnergyProfile::new(15, vec![10.0, -4.0, 6.0, 8.0], vec![1.0, 2.0, 3.0, 4.0]).unwrap(),
            500.0,
        )
        .unwrap()
    }

    fn declared(lp: &str, prefix: &str) -> usize {
        let binary = lp.split("Binary\n").nth(1).unwrap();
        binary
            .lines()
            .filter(|l| l.trim_start().starts_with(prefix))
            .count()
    }

    #[test]
    fn variable_counts_for_small_case() {
        let lp = emit_milp(&two_ops_two_machines(), &MilpEmission::new(Objective::Cost)).unwrap();
        assert_eq!(declared(&lp, "x_"), 4);
        assert_eq!(declared(&lp, "p_"), 16);
        assert_eq!(declared(&lp, "y_"), 2);
        assert!(lp.starts_with('\\'));
        assert!(lp.contains("Minimize\n obj: psum\n"));
        assert!(lp.ends_with("End\n"));
        assert!(!lp.contains("eps_"));
    }

    #[test]
    fn epsilon_rows_only_for_other_objectives() {
        let mut m = MilpEmission::new(Objective::Makespan);
        m.eps_cost = Some(12.5);
        m.eps_emissions = Some(800.0);
        m.eps_makespan = Some(3.0);
        let lp = emit_milp(&two_ops_two_machines(), &m).unwrap();
        assert!(lp.contains(" eps_cost: + psum <= 12.5\n"));
        assert!(lp.contains(" eps_emissions: + esum <= 800\n"));
        assert!(!lp.contains("eps_makespan"));
    }

    #[test]
    fn cap_refuses_large_models() {
        let mut m = MilpEmission::new(Objective::Cost);
        m.max_variables = 15;
        assert!(matches!(
            emit_milp(&two_ops_two_machines(), &m),
            Err(Error::Limit(_))
        ));
    }

    #[test]
    fn small_big_l_rejected() {
        let mut m = MilpEmission::new(Objective::Cost);
        m.big_l = Some(3.0);
        assert!(emit_milp(&two_ops_two_machines(), &m).is_err());
    }

    #[test]
    fn overrunning_starts_are_fixed() {
        let lp = emit_milp(&two_ops_two_machines(), &MilpEmission::new(Objective::Cost)).unwrap();
        let bounds = lp
            .split("Bounds\n")
            .nth(1)
            .unwrap()
            .split("Binary\n")
            .next()
            .unwrap();
        // (1,1) on machine 2 takes two steps: start 3 overruns
        assert!(bounds.contains(" p_1_1_2_3 = 0\n"));
        assert!(!bounds.contains(" p_1_1_2_2 = 0\n"));
        // (1,2) is ineligible on machine 1
        assert!(bounds.contains(" x_1_2_1 = 0\n"));
    }
}

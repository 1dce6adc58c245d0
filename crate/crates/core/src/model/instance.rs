use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One eligible machine for an operation together with its processing time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineOption {
    /// Zero-based machine index.
    pub machine: usize,
    /// Processing time in time steps, always positive.
    pub duration: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationSpec {
    /// Zero-based job index.
    pub job: usize,
    /// Zero-based position within the job.
    pub position: usize,
    pub options: Vec<MachineOption>,
}

impl OperationSpec {
    pub fn option_for_machine(&self, machine: usize) -> Option<usize> {
        self.options.iter().position(|o| o.machine == machine)
    }

    pub fn max_duration(&self) -> usize {
        self.options.iter().map(|o| o.duration).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    /// Zero-based job index.
    pub index: usize,
    /// Operations in precedence order.
    pub operations: Vec<OperationSpec>,
}

/// A flexible job shop instance.
///
/// Operations are addressed either by `(job, position)` or by a flat
/// operation id that enumerates jobs in order and operations within each
/// job in precedence order. All indices are zero-based; file formats and
/// exports use one-based numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    jobs: Vec<Job>,
    machine_count: usize,
    offsets: Vec<usize>,
    refs: Vec<(usize, usize)>,
}

impl Instance {
    /// Builds an instance from per-job, per-operation option lists.
    ///
    /// `jobs[i][j]` lists the `(machine, duration)` pairs of operation `j` of
    /// job `i` with zero-based machine indices.
    pub fn new(machine_count: usize, jobs: Vec<Vec<Vec<(usize, usize)>>>) -> Result<Self> {
        if machine_count == 0 {
            return Err(Error::Parameter("machine count must be positive".into()));
        }
        let mut built = Vec::with_capacity(jobs.len());
        for (i, ops) in jobs.into_iter().enumerate() {
            if ops.is_empty() {
                return Err(Error::Parameter(format!("job {} has no operations", i + 1)));
            }
            let mut operations = Vec::with_capacity(ops.len());
            for (j, opts) in ops.into_iter().enumerate() {
                if opts.is_empty() {
                    return Err(Error::Parameter(format!(
                        "operation ({},{}) has no eligible machine",
                        i + 1,
                        j + 1
                    )));
                }
                let mut options: Vec<MachineOption> = Vec::with_capacity(opts.len());
                for (machine, duration) in opts {
                    if machine >= machine_count {
                        return Err(Error::Parameter(format!(
                            "operation ({},{}) names machine {} of {}",
                            i + 1,
                            j + 1,
                            machine + 1,
                            machine_count
                        )));
                    }
                    if duration == 0 {
                        return Err(Error::Parameter(format!(
                            "operation ({},{}) has zero duration on machine {}",
                            i + 1,
                            j + 1,
                            machine + 1
                        )));
                    }
                    if options.iter().any(|o| o.machine == machine) {
                        return Err(Error::Parameter(format!(
                            "operation ({},{}) lists machine {} twice",
                            i + 1,
                            j + 1,
                            machine + 1
                        )));
                    }
                    options.push(MachineOption { machine, duration });
                }
                operations.push(OperationSpec {
                    job: i,
                    position: j,
                    options,
                });
            }
            built.push(Job {
                index: i,
                operations,
            });
        }
        let mut offsets = Vec::with_capacity(built.len());
        let mut refs = Vec::new();
        for job in &built {
            offsets.push(refs.len());
            refs.extend((0..job.operations.len()).map(|j| (job.index, j)));
        }
        Ok(Self {
            jobs: built,
            machine_count,
            offsets,
            refs,
        })
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    pub fn machine_count(&self) -> usize {
        self.machine_count
    }

    pub fn total_operations(&self) -> usize {
        self.refs.len()
    }

    /// Number of operations of each job (the multiset of the sequence string).
    pub fn operation_counts(&self) -> Vec<usize> {
        self.jobs.iter().map(|j| j.operations.len()).collect()
    }

    pub fn op_id(&self, job: usize, position: usize) -> usize {
        self.offsets[job] + position
    }

    /// `(job, position)` of a flat operation id.
    pub fn op_ref(&self, op: usize) -> (usize, usize) {
        self.refs[op]
    }

    pub fn operation(&self, op: usize) -> &OperationSpec {
        let (i, j) = self.refs[op];
        &self.jobs[i].operations[j]
    }

    pub fn operations(&self) -> impl Iterator<Item = &OperationSpec> {
        self.jobs.iter().flat_map(|j| j.operations.iter())
    }

    /// Sum over operations of the longest eligible duration; a trivial upper
    /// bound on the makespan of a semi-active schedule.
    pub fn serial_horizon(&self) -> usize {
        self.operations().map(OperationSpec::max_duration).sum()
    }
}

/// Parses the classic Brandimarte/Hurink FJSP text layout.
///
/// Line 1 holds `<jobs> <machines> [<avg machines per op>]`; every following
/// non-empty line describes one job as
/// `<#ops> { <#options> { <machine> <duration> } }`. Machines are one-based.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 3 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("expected `<jobs> <machines> [<avg>]`, found {header:?}"),
        });
    }
    let job_count = parse_token(head[0], header_line, "job count")?;
    let machine_count = parse_token(head[1], header_line, "machine count")?;
    if machine_count == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "machine count must be positive".into(),
        });
    }
    if let Some(avg) = head.get(2) {
        avg.parse::<f64>().map_err(|_| Error::Parse {
            line: header_line,
            message: format!("average flexibility {avg:?} is not a number"),
        })?;
    }

    let mut jobs = Vec::with_capacity(job_count);
    for i in 0..job_count {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: header_line + i + 1,
            message: format!("truncated body: expected {job_count} job lines, found {i}"),
        })?;
        let mut tokens = line.split_whitespace();
        let mut next = |what: &str| -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("truncated job line: missing {what}"),
            })?;
            parse_token(tok, line_no, what)
        };
        let op_count = next("operation count")?;
        if op_count == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: "job has no operations".into(),
            });
        }
        let mut ops = Vec::with_capacity(op_count);
        for j in 0..op_count {
            let option_count = next("option count")?;
            if option_count == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("operation {} has no eligible machine", j + 1),
                });
            }
            let mut opts = Vec::with_capacity(option_count);
            for _ in 0..option_count {
                let machine = next("machine")?;
                let duration = next("duration")?;
                if machine == 0 || machine > machine_count {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("machine {machine} out of range 1..={machine_count}"),
                    });
                }
                if duration == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("operation {} has zero duration", j + 1),
                    });
                }
                opts.push((machine - 1, duration));
            }
            ops.push(opts);
        }
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unexpected trailing token {extra:?}"),
            });
        }
        jobs.push(ops);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            message: format!("more job lines than the {job_count} declared"),
        });
    }
    Instance::new(machine_count, jobs).map_err(|e| Error::Parse {
        line: header_line,
        message: e.to_string(),
    })
}

fn parse_token(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| Error::Parse {
        line,
        message: format!("{what} {tok:?} is not a non-negative integer"),
    })
}

/// Writes an instance back in the Brandimarte layout.
pub fn write_instance(instance: &Instance) -> String {
    let total_options: usize = instance.operations().map(|o| o.options.len()).sum();
    let avg = if instance.total_operations() == 0 {
        0.0
    } else {
        total_options as f64 / instance.total_operations() as f64
    };
    let mut out = format!(
        "{} {} {}\n",
        instance.job_count(),
        instance.machine_count(),
        (avg * 100.0).round() / 100.0
    );
    for job in instance.jobs() {
        let _ = write!(out, "{}", job.operations.len());
        for op in &job.operations {
            let _ = write!(out, " {}", op.options.len());
            for o in &op.options {
                let _ = write!(out, " {} {}", o.machine + 1, o.duration);
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let inst = parse_instance("1 1\n1 1 1 2\n").unwrap();
        assert_eq!(inst.job_count(), 1);
        assert_eq!(inst.total_operations(), 1);
        assert_eq!(
            inst.operation(0).options,
            vec![MachineOption {
                machine: 0,
                duration: 2
            }]
        );
    }

    #[test]
    fn optional_average_token_is_ignored() {
        let a = parse_instance("2 2 1.5\n1 2 1 3 2 4\n2 1 2 1 1 1 5\n").unwrap();
        let b = parse_instance("2 2\n1 2 1 3 2 4\n2 1 2 1 1 1 5\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_operations(), 3);
        assert_eq!(a.op_id(1, 1), 2);
        assert_eq!(a.op_ref(2), (1, 1));
    }

    #[test]
    fn machine_out_of_range_names_line() {
        let err = parse_instance("1 2\n1 1 3 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn truncated_body() {
        let err = parse_instance("2 1\n1 1 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_instance("1 1\n2 1 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn malformed_header() {
        assert!(matches!(
            parse_instance("x 1\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_instance("").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_instance("1 1 2 3\n1 1 1 1\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn duplicate_machine_rejected() {
        assert!(parse_instance("1 2\n1 2 1 2 1 3\n").is_err());
    }

    #[test]
    fn write_then_parse_keeps_counts() {
        let text = "3 4 2\n2 2 1 3 4 2 1 2 5\n1 3 1 1 2 2 3 3\n3 1 4 7 1 1 1 1 2 2\n";
        let inst = parse_instance(text).unwrap();
        let again = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(inst, again);
    }
}

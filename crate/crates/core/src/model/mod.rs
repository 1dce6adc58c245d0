//! Problem data: flexible job shop instances, energy market profiles, and
//! the per-operation energy cost and emission primitives.

pub mod benchmark;
mod energy;
mod instance;

pub use energy::{
    generate_synthetic_profile, load_energy_profile, parse_market_csv, price_emission_correlation,
    EnergyProfile, HourlyMarket, SyntheticMarket,
};
pub use instance::{parse_instance, write_instance, Instance, Job, MachineOption, OperationSpec};

use crate::error::{Error, Result};

pub const DEFAULT_BASE_DEMAND_KW: f64 = 500.0;

/// Energy cost (EUR) and emissions (gCO2eq) of one placed operation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OpCost {
    pub cost: f64,
    pub emissions: f64,
}

/// An instance with a per-job power demand and an attached energy profile.
#[derive(Debug, Clone, PartialEq)]
pub struct EnrichedInstance {
    instance: Instance,
    profile: EnergyProfile,
    base_demand_kw: f64,
    demand_kw: Vec<f64>,
}

/// Attaches `profile` to `instance` with job `i` (one-based) drawing
/// `base_demand_kw * i / |J|` kW for the whole of each of its operations.
pub fn enrich(
    instance: Instance,
    profile: EnergyProfile,
    base_demand_kw: f64,
) -> Result<EnrichedInstance> {
    if !(base_demand_kw > 0.0 && base_demand_kw.is_finite()) {
        return Err(Error::Parameter(format!(
            "base demand must be positive, got {base_demand_kw}"
        )));
    }
    if profile.is_empty() {
        return Err(Error::Parameter("energy profile is empty".into()));
    }
    let n = instance.job_count() as f64;
    let demand_kw = (1..=instance.job_count())
        .map(|i| base_demand_kw * i as f64 / n)
        .collect();
    Ok(EnrichedInstance {
        instance,
        profile,
        base_demand_kw,
        demand_kw,
    })
}

impl EnrichedInstance {
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn profile(&self) -> &EnergyProfile {
        &self.profile
    }

    pub fn base_demand_kw(&self) -> f64 {
        self.base_demand_kw
    }

    /// Power demand of a zero-based job index.
    pub fn demand_kw(&self, job: usize) -> f64 {
        self.demand_kw[job]
    }

    /// Number of time steps |T| of the attached profile.
    pub fn horizon(&self) -> usize {
        self.profile.len()
    }

    /// Energy drawn by `job` during one time step, in kWh.
    pub fn step_energy_kwh(&self, job: usize) -> f64 {
        self.demand_kw[job] * f64::from(self.profile.step_minutes()) / 60.0
    }

    /// Energy of an operation option over its whole duration, in kWh.
    pub fn operation_energy_kwh(&self, op: usize, option: usize) -> f64 {
        let spec = self.instance.operation(op);
        self.step_energy_kwh(spec.job) * spec.options[option].duration as f64
    }

    /// Cost and emissions of operation `(job, position)` on `machine`
    /// starting at step `start`; all indices zero-based.
    pub fn op_cost(
        &self,
        job: usize,
        position: usize,
        machine: usize,
        start: usize,
    ) -> Result<OpCost> {
        let op = self
            .instance
            .jobs()
            .get(job)
            .and_then(|j| j.operations.get(position))
            .ok_or_else(|| {
                Error::Parameter(format!("no operation ({},{})", job + 1, position + 1))
            })?;
        let option = op.option_for_machine(machine).ok_or_else(|| {
            Error::Parameter(format!(
                "machine {} is not eligible for operation ({},{})",
                machine + 1,
                job + 1,
                position + 1
            ))
        })?;
        self.option_cost(
            self.instance.op_id(job, position),
            option,
            start,
            self.horizon(),
        )
    }

    /// Cost and emissions of flat operation `op` on its `option`, starting at
    /// `start`, within a horizon of `horizon` steps. Steps past the profile
    /// length read the tiled series.
    pub fn option_cost(
        &self,
        op: usize,
        option: usize,
        start: usize,
        horizon: usize,
    ) -> Result<OpCost> {
        let spec = self.instance.operation(op);
        let duration = spec.options[option].duration;
        if start + duration > horizon {
            return Err(Error::Horizon {
                job: spec.job + 1,
                op: spec.position + 1,
                start,
                duration,
                horizon,
            });
        }
        Ok(self.window_cost(spec.job, start, duration))
    }

    /// Cost and emissions of `job` drawing power over `[start, start+duration)`.
    pub fn window_cost(&self, job: usize, start: usize, duration: usize) -> OpCost {
        let (mut price, mut emission) = (0.0, 0.0);
        for s in start..start + duration {
            price += self.profile.price_at(s);
            emission += self.profile.emission_at(s);
        }
        let kwh = self.step_energy_kwh(job);
        OpCost {
            cost: price * kwh / 1000.0,
            emissions: emission * kwh,
        }
    }

    /// Same instance and demands over a different profile.
    pub fn with_profile(&self, profile: EnergyProfile) -> Result<Self> {
        enrich(self.instance.clone(), profile, self.base_demand_kw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_op(
        duration: usize,
        price: Vec<f64>,
        emission: Vec<f64>,
        base: f64,
    ) -> EnrichedInstance {
        let inst = Instance::new(1, vec![vec![vec![(0, duration)]]]).unwrap();
        enrich(inst, EnergyProfile::new(15, price, emission).unwrap(), base).unwrap()
    }

    #[test]
    fn demand_formula() {
        let inst = Instance::new(1, (0..10).map(|_| vec![vec![(0, 1)]]).collect()).unwrap();
        let e = enrich(
            inst,
            EnergyProfile::new(15, vec![1.0], vec![1.0]).unwrap(),
            500.0,
        )
        .unwrap();
        assert_eq!(e.demand_kw(9), 500.0);
        assert_eq!(e.demand_kw(0), 50.0);

        let one = single_op(1, vec![1.0], vec![1.0], 500.0);
        assert_eq!(one.demand_kw(0), 500.0);

        let inst = Instance::new(1, (0..15).map(|_| vec![vec![(0, 1)]]).collect()).unwrap();
        let e = enrich(
            inst,
            EnergyProfile::new(15, vec![1.0], vec![1.0]).unwrap(),
            500.0,
        )
        .unwrap();
        assert_eq!(e.demand_kw(5), 200.0);
    }

    #[test]
    fn enrich_rejects_bad_inputs() {
        let inst = Instance::new(1, vec![vec![vec![(0, 1)]]]).unwrap();
        let p = EnergyProfile::new(15, vec![1.0], vec![1.0]).unwrap();
        assert!(enrich(inst.clone(), p.clone(), 0.0).is_err());
        assert!(enrich(inst.clone(), p, -3.0).is_err());
        let empty = EnergyProfile::new(15, vec![], vec![]).unwrap();
        assert!(enrich(inst, empty, 500.0).is_err());
    }

    #[test]
    fn constant_price_cost() {
        let e = single_op(2, vec![100.0; 4], vec![0.0; 4], 500.0);
        let c = e.op_cost(0, 0, 0, 0).unwrap();
        assert_eq!(c.cost, 25.0);
        assert_eq!(c.emissions, 0.0);
    }

    #[test]
    fn negative_price_nets_out() {
        let inst = Instance::new(1, (0..5).map(|_| vec![vec![(0, 2)]]).collect()).unwrap();
        let e = enrich(
            inst,
            EnergyProfile::new(15, vec![-10.0, 40.0], vec![1.0, 1.0]).unwrap(),
            500.0,
        )
        .unwrap();
        // job 2 of 5 draws 200 kW
        let c = e.op_cost(1, 0, 0, 0).unwrap();
        assert!((c.cost - 1.5).abs() < 1e-12, "{}", c.cost);
    }

    #[test]
    fn overrun_is_a_horizon_error() {
        let e = single_op(2, vec![1.0; 3], vec![1.0; 3], 500.0);
        assert!(e.op_cost(0, 0, 0, 1).is_ok());
        assert!(matches!(e.op_cost(0, 0, 0, 2), Err(Error::Horizon { .. })));
        assert!(matches!(e.op_cost(0, 0, 1, 0), Err(Error::Parameter(_))));
    }
}

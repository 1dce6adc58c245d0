use chrono::{DateTime, NaiveDateTime, TimeZone, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PRICE_COLUMN: &str = "price_eur_mwh";
pub const EMISSION_COLUMN: &str = "emission_g_per_kwh";
pub const TIMESTAMP_COLUMN: &str = "timestamp";

/// Per-time-step electricity price (EUR/MWh) and emission factor
/// (gCO2eq/kWh). Prices may be negative, emission factors may not.
///
/// Indexing beyond the end wraps around, which is how horizon extension
/// tiles the series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    step_minutes: u32,
    price: Vec<f64>,
    emission: Vec<f64>,
}

impl EnergyProfile {
    pub fn new(step_minutes: u32, price: Vec<f64>, emission: Vec<f64>) -> Result<Self> {
        if step_minutes == 0 {
            return Err(Error::Parameter("step length must be positive".into()));
        }
        if price.len() != emission.len() {
            return Err(Error::Parameter(format!(
                "price series has {} steps but emission series has {}",
                price.len(),
                emission.len()
            )));
        }
        if let Some(s) = price.iter().position(|p| !p.is_finite()) {
            return Err(Error::Parameter(format!("price at step {s} is not finite")));
        }
        if let Some(s) = emission.iter().position(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::Parameter(format!(
                "emission factor at step {s} is negative or not finite"
            )));
        }
        Ok(Self {
            step_minutes,
            price,
            emission,
        })
    }

    pub fn step_minutes(&self) -> u32 {
        self.step_minutes
    }

    pub fn len(&self) -> usize {
        self.price.len()
    }

    pub fn is_empty(&self) -> bool {
        self.price.is_empty()
    }

    pub fn prices(&self) -> &[f64] {
        &self.price
    }

    pub fn emissions(&self) -> &[f64] {
        &self.emission
    }

    #[inline]
    pub fn price_at(&self, step: usize) -> f64 {
        self.price[step % self.price.len()]
    }

    #[inline]
    pub fn emission_at(&self, step: usize) -> f64 {
        self.emission[step % self.emission.len()]
    }

    pub fn price_range(&self) -> (f64, f64) {
        min_max(&self.price)
    }

    pub fn emission_range(&self) -> (f64, f64) {
        min_max(&self.emission)
    }

    /// Prefix of length `steps`, tiling the series when `steps` exceeds it.
    pub fn resized(&self, steps: usize) -> Self {
        Self {
            step_minutes: self.step_minutes,
            price: (0..steps).map(|s| self.price_at(s)).collect(),
            emission: (0..steps).map(|s| self.emission_at(s)).collect(),
        }
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

/// Hourly market data as delivered by the exchange.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyMarket {
    pub start: DateTime<Utc>,
    pub price: Vec<f64>,
    pub emission: Vec<f64>,
}

impl HourlyMarket {
    /// Piecewise-constant expansion to `step_minutes` resolution.
    pub fn expand(&self, step_minutes: u32) -> Result<EnergyProfile> {
        if step_minutes == 0 || 60 % step_minutes != 0 {
            return Err(Error::Parameter(format!(
                "step length {step_minutes} min does not divide an hour"
            )));
        }
        let reps = (60 / step_minutes) as usize;
        let widen = |xs: &[f64]| -> Vec<f64> {
            xs.iter()
                .flat_map(|&x| std::iter::repeat(x).take(reps))
                .collect()
        };
        EnergyProfile::new(step_minutes, widen(&self.price), widen(&self.emission))
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{TIMESTAMP_COLUMN},{PRICE_COLUMN},{EMISSION_COLUMN}\n");
        for (h, (p, e)) in self.price.iter().zip(&self.emission).enumerate() {
            let ts = self.start + chrono::Duration::hours(h as i64);
            out.push_str(&format!(
                "{},{},{}\n",
                ts.format("%Y-%m-%dT%H:%M:%SZ"),
                p,
                e
            ));
        }
        out
    }
}

fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let raw = raw.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(raw) {
        return Some(t.with_timezone(&Utc));
    }
    for fmt in [
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(t) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(Utc.from_utc_datetime(&t));
        }
    }
    None
}

/// Reads the hourly market CSV (`timestamp,price_eur_mwh,emission_g_per_kwh`).
///
/// Row numbers in errors are file line numbers, the header being row 1.
pub fn parse_market_csv(csv_text: &str) -> Result<HourlyMarket> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Ingest {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim_start_matches('\u{feff}') == name)
            .ok_or_else(|| Error::Ingest {
                row: 1,
                message: format!("missing column {name:?}"),
            })
    };
    let (ts_col, price_col, em_col) = (
        column(TIMESTAMP_COLUMN)?,
        column(PRICE_COLUMN)?,
        column(EMISSION_COLUMN)?,
    );

    let mut start = None;
    let mut last: Option<DateTime<Utc>> = None;
    let mut price = Vec::new();
    let mut emission = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let row = n + 2;
        let record = record.map_err(|e| Error::Ingest {
            row,
            message: e.to_string(),
        })?;
        let cell = |col: usize, name: &str| -> Result<&str> {
            record.get(col).ok_or_else(|| Error::Ingest {
                row,
                message: format!("missing cell {name:?}"),
            })
        };
        let ts = parse_timestamp(cell(ts_col, TIMESTAMP_COLUMN)?).ok_or_else(|| Error::Ingest {
            row,
            message: format!("unreadable timestamp {:?}", record.get(ts_col)),
        })?;
        let number = |col: usize, name: &str| -> Result<f64> {
            let raw = cell(col, name)?;
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Ingest {
                    row,
                    message: format!("{name} {raw:?} is not numeric"),
                })
        };
        let p = number(price_col, PRICE_COLUMN)?;
        let e = number(em_col, EMISSION_COLUMN)?;
        if e < 0.0 {
            return Err(Error::Ingest {
                row,
                message: format!("negative emission factor {e}"),
            });
        }
        if let Some(prev) = last {
            let gap = ts.signed_duration_since(prev);
            if gap <= chrono::Duration::zero() {
                return Err(Error::Ingest {
                    row,
                    message: format!("timestamp {ts} does not follow {prev}"),
                });
            }
            if gap != chrono::Duration::hours(1) {
                return Err(Error::Ingest {
                    row,
                    message: format!("gap of {} min after {prev}", gap.num_minutes()),
                });
            }
        } else {
            start = Some(ts);
        }
        last = Some(ts);
        price.push(p);
        emission.push(e);
    }
    let start = start.ok_or(Error::Ingest {
        row: 2,
        message: "no data rows".into(),
    })?;
    Ok(HourlyMarket {
        start,
        price,
        emission,
    })
}

/// Loads an hourly market CSV and expands it to `step_minutes` resolution.
pub fn load_energy_profile(csv_text: &str, step_minutes: u32) -> Result<EnergyProfile> {
    parse_market_csv(csv_text)?.expand(step_minutes)
}

/// Parameters of the synthetic market generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticMarket {
    pub seed: u64,
    pub hours: usize,
    pub price_mean: f64,
    pub price_sd: f64,
    pub emission_mean: f64,
    pub emission_sd: f64,
    pub correlation: f64,
    /// Lag-one autocorrelation of both latent series. Zero gives white noise.
    pub persistence: f64,
}

impl Default for SyntheticMarket {
    fn default() -> Self {
        Self {
            seed: 0,
            hours: 168,
            price_mean: 170.0,
            price_sd: 60.0,
            emission_mean: 430.0,
            emission_sd: 90.0,
            correlation: 0.72,
            persistence: 0.8,
        }
    }
}

impl SyntheticMarket {
    /// Draws correlated hourly series from a Gaussian copula over two
    /// independent AR(1) latent processes. Emission factors are clamped at 0.
    pub fn generate(&self) -> Result<HourlyMarket> {
        if self.hours == 0 {
            return Err(Error::Parameter("hours must be at least 1".into()));
        }
        if !(self.correlation.abs() <= 1.0) {
            return Err(Error::Parameter(format!(
                "correlation {} outside [-1, 1]",
                self.correlation
            )));
        }
        if !(self.price_sd >= 0.0 && self.emission_sd >= 0.0) {
            return Err(Error::Parameter("standard deviations must be >= 0".into()));
        }
        if !(0.0..1.0).contains(&self.persistence) {
            return Err(Error::Parameter(format!(
                "persistence {} outside [0, 1)",
                self.persistence
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let phi = self.persistence;
        let innovation = (1.0 - phi * phi).sqrt();
        let mix = (1.0 - self.correlation * self.correlation).max(0.0).sqrt();
        let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
        let (mut z1, mut z2) = (draw(), draw());
        let mut price = Vec::with_capacity(self.hours);
        let mut emission = Vec::with_capacity(self.hours);
        for h in 0..self.hours {
            if h > 0 {
                z1 = phi * z1 + innovation * draw();
                z2 = phi * z2 + innovation * draw();
            }
            let w = self.correlation * z1 + mix * z2;
            price.push(self.price_mean + self.price_sd * z1);
            emission.push((self.emission_mean + self.emission_sd * w).max(0.0));
        }
        Ok(HourlyMarket {
            start: Utc.with_ymd_and_hms(2022, 2, 1, 0, 0, 0).unwrap(),
            price,
            emission,
        })
    }
}

/// Synthetic stand-in for recorded market data, expanded to 15-minute steps.
pub fn generate_synthetic_profile(params: &SyntheticMarket) -> Result<EnergyProfile> {
    params.generate()?.expand(15)
}

/// Sample Pearson correlation of price and emission series.
pub fn price_emission_correlation(profile: &EnergyProfile) -> Result<f64> {
    pearson(profile.prices(), profile.emissions())
}

pub(crate) fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(Error::UndefinedCorrelation(format!(
            "need two equally long series with at least 2 points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

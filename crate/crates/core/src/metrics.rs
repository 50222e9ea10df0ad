//! Social cost, efficiency ratios, and trace/summary files.
//!
//! The social cost of a profile is its worst interval velocity,
//! `min_r (a * n_r + b) = a * max_r n_r + b`. The optimum spreads vehicles as
//! evenly as possible, so its busiest interval carries `ceil((N + M) / R)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{Game, Occupancy, VelocityModel};
use crate::learning::Trace;

pub fn social_cost(occ: &Occupancy, vm: &VelocityModel) -> f64 {
    vm.speed(occ.max_total())
}

pub fn optimal_social_cost(
    cars: usize,
    trucks: usize,
    intervals: usize,
    vm: &VelocityModel,
) -> f64 {
    let vehicles = (cars + trucks) as u32;
    vm.speed(vehicles.div_ceil(intervals as u32))
}

/// Interval counts of one value-of-time group of cars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupShift {
    pub value_of_time: f64,
    pub cars: usize,
    pub at_preferred: Vec<u32>,
    pub at_final: Vec<u32>,
    /// `at_final - at_preferred` per interval.
    pub shift: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub s_nash: f64,
    pub s_optimal: f64,
    pub s_preference: f64,
    pub ratio_nash: f64,
    pub ratio_preference: f64,
    pub iterations: usize,
    pub converged: bool,
    pub certified_at: Option<usize>,
    pub final_n: Vec<u32>,
    pub final_m: Vec<u32>,
    pub preference_n: Vec<u32>,
    pub max_truck_concentration: u32,
    /// Present when cars carry more than one value of time.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub value_of_time_groups: Vec<GroupShift>,
}

impl Summary {
    pub fn from_trace(game: &Game, trace: &Trace) -> Result<Summary> {
        let vm = &game.config().velocity;
        let final_occ = game.occupancy(&trace.final_profile)?;
        let preferred = game.population().preferred_profile();
        let pref_occ = game.occupancy(&preferred)?;

        let s_nash = social_cost(&final_occ, vm);
        let s_optimal =
            optimal_social_cost(game.num_cars(), game.num_trucks(), game.intervals(), vm);
        let s_preference = social_cost(&pref_occ, vm);

        let mut groups: Vec<GroupShift> = Vec::new();
        let r_count = game.intervals();
        for (car, (&z, &t)) in game
            .population()
            .cars
            .iter()
            .zip(trace.final_profile.cars.iter().zip(&preferred.cars))
        {
            let k = match groups
                .iter()
                .position(|g| g.value_of_time == car.value_of_time)
            {
                Some(k) => k,
                None => {
                    groups.push(GroupShift {
                        value_of_time: car.value_of_time,
                        cars: 0,
                        at_preferred: vec![0; r_count],
                        at_final: vec![0; r_count],
                        shift: vec![0; r_count],
                    });
                    groups.len() - 1
                }
            };
            let g = &mut groups[k];
            g.cars += 1;
            g.at_preferred[t.index()] += 1;
            g.at_final[z.index()] += 1;
        }
        if groups.len() < 2 {
            groups.clear();
        }
        for g in &mut groups {
            for r in 0..r_count {
                g.shift[r] = g.at_final[r] as i64 - g.at_preferred[r] as i64;
            }
        }

        Ok(Summary {
            s_nash,
            s_optimal,
            s_preference,
            ratio_nash: s_optimal / s_nash,
            ratio_preference: s_optimal / s_preference,
            iterations: trace.iterations,
            converged: trace.certified,
            certified_at: trace.certified_at,
            max_truck_concentration: final_occ.max_trucks(),
            final_n: final_occ.total,
            final_m: final_occ.trucks,
            preference_n: pref_occ.total,
            value_of_time_groups: groups,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    /// `occupancy.csv` with `t,r,n_r,m_r`.
    Csv,
    /// `summary.json`.
    Json,
    /// `truck_occupancy.csv` with `t,r,m_r`.
    TruckCsv,
}

impl std::str::FromStr for OutputFormat {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "truck_csv" | "trucks" => Ok(OutputFormat::TruckCsv),
            other => Err(GameError::config(
                "output.formats",
                format!("unknown format {other:?}"),
            )),
        }
    }
}

/// Formats a double with 17 significant digits in plain decimal notation.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn occupancy_csv(trace: &Trace) -> String {
    let mut out = String::from("t,r,n_r,m_r\n");
    for rec in &trace.records {
        for (r, (&n, &m)) in rec
            .occupancy
            .total
            .iter()
            .zip(&rec.occupancy.trucks)
            .enumerate()
        {
            let _ = writeln!(out, "{},{},{},{}", rec.t, r + 1, n, m);
        }
    }
    out
}

pub fn truck_occupancy_csv(trace: &Trace) -> String {
    let mut out = String::from("t,r,m_r\n");
    for rec in &trace.records {
        for (r, &m) in rec.occupancy.trucks.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", rec.t, r + 1, m);
        }
    }
    out
}

pub fn summary_json(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| GameError::io(path, e))
}

/// Writes the requested files into `dir`, creating it if needed.
pub fn emit(trace: &Trace, summary: &Summary, dir: &Path, formats: &[OutputFormat]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| GameError::io(dir, e))?;
    for format in formats {
        match format {
            OutputFormat::Csv => write_file(&dir.join("occupancy.csv"), &occupancy_csv(trace))?,
            OutputFormat::Json => write_file(&dir.join("summary.json"), &summary_json(summary))?,
            OutputFormat::TruckCsv => write_file(
                &dir.join("truck_occupancy.csv"),
                &truck_occupancy_csv(trace),
            )?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{ActionProfile, Interval};
    use crate::learning::{Algorithm, IterationRecord};

    const VM: VelocityModel = VelocityModel {
        a: -0.0110,
        b: 84.9696,
    };

    #[test]
    fn optimal_cost_examples() {
        assert!((optimal_social_cost(10000, 100, 8, &VM) - 71.0766).abs() < 1e-4);
        assert_eq!(optimal_social_cost(0, 0, 8, &VM), VM.b);
        assert_eq!(optimal_social_cost(5, 3, 8, &VM), VM.a + VM.b);
    }

    #[test]
    fn social_cost_examples() {
        let uniform = Occupancy {
            total: vec![1000; 8],
            trucks: vec![0; 8],
        };
        assert_eq!(social_cost(&uniform, &VM), VM.a * 1000.0 + VM.b);
        let peaked = Occupancy {
            total: vec![800, 1700, 2525, 1700, 900, 900, 900, 675],
            trucks: vec![0; 8],
        };
        assert!((social_cost(&peaked, &VM) - 57.1946).abs() < 1e-9);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(fmt_f64(64.335), "64.334999999999994");
        assert_eq!(fmt_f64(1.5), "1.5000000000000000");
        assert_eq!(fmt_f64(-0.011), "-0.010999999999999999");
        assert_eq!(fmt_f64(0.011).parse::<f64>().unwrap(), 0.011);
    }

    #[test]
    fn csv_has_one_row_per_day_and_interval() {
        let rec = |t| IterationRecord {
            t,
            occupancy: Occupancy {
                total: vec![3, 1],
                trucks: vec![1, 0],
            },
            car_switches: 0,
            truck_switches: 0,
        };
        let trace = Trace {
            algorithm: Algorithm::Jsfp,
            seed: 1,
            records: vec![rec(0), rec(1)],
            final_profile: ActionProfile {
                cars: vec![Interval::new(1)],
                trucks: vec![],
            },
            certified: false,
            certified_at: None,
            iterations: 2,
            last_witness: None,
        };
        let csv = occupancy_csv(&trace);
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(csv.lines().nth(1).unwrap(), "0,1,3,1");
        assert_eq!(truck_occupancy_csv(&trace).lines().nth(4).unwrap(), "1,2,0");
    }
}

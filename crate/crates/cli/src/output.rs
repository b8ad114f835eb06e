//! CSV emission and parsing.
//!
//! Floats are written with 17 significant digits so they parse back exactly.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use bec_decay::thermal_cloud::{local_densities, ThermalCloud, CUTOFF_KT};
use bec_decay::{Channel, EquilibriumSummary, Trajectory};

pub const TRAJECTORY_HEADER: [&str; 18] = [
    "t_s",
    "N_C",
    "N_T",
    "T_K",
    "mu_J",
    "E_T_J",
    "Ndot_bg",
    "Ndot_2b",
    "Ndot_3b",
    "Edot_J",
    "Ndot_CC",
    "Ndot_CT",
    "Ndot_TT",
    "Ndot_CCC",
    "Ndot_CCT",
    "Ndot_CTT",
    "Ndot_TTT",
    "condition",
];

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

/// Trajectory CSV with a trailing `# termination:` line.
pub fn write_trajectory(path: &Path, trajectory: &Trajectory) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(TRAJECTORY_HEADER).map_err(csv_error)?;
    for p in &trajectory.points {
        let l = &p.losses;
        let mut row =
            vec![p.t, p.n_c, p.n_t, p.temperature, p.mu, p.e_t, l.background(), l.two_body(), l.three_body(), l.edot()];
        row.extend(Channel::ALL[1..].iter().map(|&c| l.channel(c).total()));
        let mut record: Vec<String> = row.into_iter().map(format_float).collect();
        record.push(p.condition.map(format_float).unwrap_or_default());
        w.write_record(&record).map_err(csv_error)?;
    }
    let mut file = w.into_inner().map_err(|e| e.into_error())?;
    writeln!(file, "# mode: {}", trajectory.mode)?;
    writeln!(file, "# termination: {}", trajectory.termination)?;
    file.sync_all()
}

/// Parsed trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    /// Empty cells read as NaN.
    pub rows: Vec<Vec<f64>>,
    pub comments: Vec<String>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn termination(&self) -> Option<&str> {
        self.comments.iter().find_map(|c| c.strip_prefix("termination: "))
    }
}

pub fn read_table(path: &Path) -> io::Result<Table> {
    let text = std::fs::read_to_string(path)?;
    let comments = text.lines().filter_map(|l| l.strip_prefix('#')).map(|l| l.trim().to_string()).collect::<Vec<_>>();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let row = record
            .iter()
            .map(|cell| {
                if cell.is_empty() {
                    Ok(f64::NAN)
                } else {
                    cell.parse::<f64>().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
                }
            })
            .collect::<io::Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows, comments })
}

/// Radial profiles along the rescaled radius `u` (m).
pub fn write_profile(path: &Path, summary: &EquilibriumSummary, points: usize) -> io::Result<()> {
    let profile = summary.profile();
    let trap = profile.trap();
    let kt = bec_decay::constants::PhysConstants::K_B * summary.state().temperature();
    let v_max = profile.mu_cloud().max(0.0) + CUTOFF_KT * kt;
    let u_max = (2.0 * v_max / profile.mass()).sqrt() / trap.mean_omega();
    let cloud = ThermalCloud::Equilibrium { temperature: summary.state().temperature() };
    let scale = trap.mean_omega() / trap.omega()[0];

    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(["u_m", "n_C_m3", "n_T_m3", "e_T_Jm3"]).map_err(csv_error)?;
    for i in 0..points {
        let u = u_max * i as f64 / (points - 1).max(1) as f64;
        let local = local_densities([u * scale, 0.0, 0.0], profile, &cloud);
        w.write_record([u, local.n_c, local.n_t, local.e_t].map(format_float)).map_err(csv_error)?;
    }
    w.flush()
}

/// Appends rows to `path`, writing `header` first when the file is new.
pub fn append_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(header).map_err(csv_error)?;
    }
    for row in rows {
        w.write_record(row).map_err(csv_error)?;
    }
    w.flush()
}

pub fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(row).map_err(csv_error)?;
    }
    w.flush()
}

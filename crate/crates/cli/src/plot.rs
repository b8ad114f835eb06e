//! SVG overlay of condensate decay curves with a temperature inset.

use std::path::Path;

use bec_decay::{RunMode, Trajectory};
use plotters::prelude::*;

type PlotResult = Result<(), Box<dyn std::error::Error>>;

fn style(mode: RunMode) -> (RGBColor, Option<(u32, u32)>) {
    match mode {
        RunMode::Full => (BLACK, None),
        RunMode::SimpleAttribution => (RGBColor(0, 90, 180), Some((10, 6))),
        RunMode::SimpleLiteral => (RGBColor(0, 140, 70), Some((14, 4))),
        RunMode::PureCondensate => (RGBColor(180, 30, 30), Some((2, 4))),
        RunMode::Ideal => (RGBColor(120, 120, 120), Some((6, 3))),
    }
}

/// Plots `N_C(t)` of every run; the full model's `T(t)` goes in an inset.
pub fn plot_runs(path: &Path, runs: &[(RunMode, &Trajectory)], t_end: f64) -> PlotResult {
    let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
    root.fill(&WHITE)?;
    let n_max = runs.iter().flat_map(|(_, t)| t.points.iter().map(|p| p.n_c)).fold(1.0, f64::max);

    let mut chart = ChartBuilder::on(&root)
        .margin(20)
        .x_label_area_size(45)
        .y_label_area_size(70)
        .build_cartesian_2d(0.0..t_end, 0.0..1.05 * n_max)?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc("t (s)")
        .y_desc("N_C")
        .y_label_formatter(&|v| format!("{v:.1e}"))
        .draw()?;

    for (mode, trajectory) in runs {
        let (color, dash) = style(*mode);
        let points: Vec<(f64, f64)> = trajectory.points.iter().map(|p| (p.t, p.n_c)).collect();
        let stroke = color.stroke_width(2);
        match dash {
            None => chart.draw_series(LineSeries::new(points, stroke))?,
            Some((size, gap)) => chart.draw_series(DashedLineSeries::new(points, size, gap, stroke))?,
        }
        .label(mode.label())
        .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .position(SeriesLabelPosition::LowerLeft)
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()?;

    if let Some((_, full)) = runs.iter().find(|(m, _)| *m == RunMode::Full) {
        let temps: Vec<(f64, f64)> = full.points.iter().map(|p| (p.t, p.temperature * 1e6)).collect();
        if let Some(&(t_last, _)) = temps.last() {
            let (lo, hi) = temps.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
            let pad = 0.1 * (hi - lo).max(1e-3 * hi);
            let inset = root.clone().shrink((470, 40), (300, 200));
            inset.fill(&WHITE)?;
            let mut small = ChartBuilder::on(&inset)
                .margin(8)
                .x_label_area_size(30)
                .y_label_area_size(60)
                .build_cartesian_2d(0.0..t_last.max(f64::MIN_POSITIVE), (lo - pad)..(hi + pad))?;
            small
                .configure_mesh()
                .disable_mesh()
                .x_desc("t (s)")
                .y_desc("T (μK)")
                .y_label_formatter(&|v| format!("{v:.3}"))
                .draw()?;
            small.draw_series(LineSeries::new(temps, BLACK.stroke_width(1)))?;
        }
    }
    root.present()?;
    Ok(())
}

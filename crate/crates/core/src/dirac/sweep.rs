use rayon::prelude::*;

use super::{build_channel, channel_spectrum, DiracChannelSpec, GridScheme, GridSpec, SpectrumSettings};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One `(ν, grid)` cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub nu: T,
    pub grid_n: usize,
    pub grid_scheme: GridScheme,
    pub r_min: T,
    pub r_max: T,
    /// `λ_min(M_0)`; NaN when the cell failed.
    pub margin: T,
    /// Margin minus the margin of the previous grid at the same `ν`.
    pub margin_trend: Option<T>,
    pub c2_numeric: Option<T>,
    pub c2_analytic: Option<T>,
    pub e1_numeric: Option<T>,
    pub e1_analytic: Option<T>,
    pub note: Option<String>,
}

/// Margins of a coupling sweep together with the estimated critical coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<T> {
    pub kappa: i32,
    pub gamma: T,
    /// `ν`-major, grids in input order within each `ν`.
    pub rows: Vec<SweepRow<T>>,
    /// Estimate on the last (finest) grid.
    pub nu_star: Option<T>,
    /// Estimate per grid, in input order.
    pub nu_star_by_grid: Vec<(GridSpec<T>, Option<T>)>,
}

impl<T: Scalar> SweepReport<T> {
    pub fn row(&self, nu: T, grid_n: usize) -> Option<&SweepRow<T>> {
        self.rows.iter().find(|r| r.nu == nu && r.grid_n == grid_n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings<T> {
    pub spectrum: SpectrumSettings<T>,
    /// Compute `c2` and the lowest energy in cells with a positive margin.
    pub with_spectrum: bool,
    /// Width of the final bracket on `ν*`.
    pub nu_star_tol: T,
}

impl<T: Scalar> Default for SweepSettings<T> {
    fn default() -> Self {
        Self {
            spectrum: SpectrumSettings::default(),
            with_spectrum: true,
            nu_star_tol: T::lit(1e-4),
        }
    }
}

fn margin_at<T: Scalar>(kappa: i32, nu: T, gamma: T, grid: &GridSpec<T>) -> Result<T> {
    let spec = DiracChannelSpec::new(kappa, nu, gamma)?;
    build_channel(&spec, &grid.build()?)?.positivity_margin(T::zero())
}

fn sweep_cell<T: Scalar>(kappa: i32, nu: T, gamma: T, grid: &GridSpec<T>, settings: &SweepSettings<T>) -> SweepRow<T> {
    let mut row = SweepRow {
        nu,
        grid_n: grid.n,
        grid_scheme: grid.scheme,
        r_min: grid.r_min,
        r_max: grid.r_max,
        margin: T::nan(),
        margin_trend: None,
        c2_numeric: None,
        c2_analytic: None,
        e1_numeric: None,
        e1_analytic: None,
        note: None,
    };
    let spec = match DiracChannelSpec::new(kappa, nu, gamma) {
        Ok(s) => s,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    row.c2_analytic = spec.c2_analytic();
    row.e1_analytic = spec.ground_energy();
    let outcome = (|| -> Result<()> {
        let radial = grid.build()?;
        let op = build_channel(&spec, &radial)?;
        row.margin = op.positivity_margin(T::zero())?;
        if !(row.margin > T::zero()) || !settings.with_spectrum {
            return Ok(());
        }
        row.c2_numeric = Some(op.find_c2(settings.spectrum.tolerances.bisection)?);
        let e = channel_spectrum(&spec, &radial, 1, settings.spectrum.eigen_tol)?;
        row.e1_numeric = e.first().copied();
        Ok(())
    })();
    if let Err(e) = outcome {
        row.note = Some(e.to_string());
    }
    row
}

/// Tabulates `λ_min(M_0)` over all `(ν, grid)` pairs and estimates the
/// critical coupling `ν*` on each grid.
///
/// `ν*` is bracketed between the largest listed `ν` with a nonnegative margin
/// and the next listed `ν` with a negative one, then refined by bisection
/// (the margin decreases monotonically in `ν`). Cells are independent and run
/// in parallel; row order follows the input. Cell failures are recorded in
/// [`SweepRow::note`] rather than returned.
pub fn hardy_sweep<T: Scalar>(
    kappa: i32,
    nus: &[T],
    gamma: T,
    grids: &[GridSpec<T>],
    settings: &SweepSettings<T>,
) -> Result<SweepReport<T>> {
    if nus.is_empty() || grids.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one nu and one grid".into()));
    }
    let cells: Vec<(T, GridSpec<T>)> = nus
        .iter()
        .flat_map(|&nu| grids.iter().map(move |g| (nu, *g)))
        .collect();
    let mut rows: Vec<SweepRow<T>> = cells
        .par_iter()
        .map(|(nu, g)| sweep_cell(kappa, *nu, gamma, g, settings))
        .collect();
    for chunk in rows.chunks_mut(grids.len()) {
        for j in 1..chunk.len() {
            let (prev, cur) = (chunk[j - 1].margin, chunk[j].margin);
            if prev.is_finite() && cur.is_finite() {
                chunk[j].margin_trend = Some(cur - prev);
            }
        }
    }

    let nu_star_by_grid: Vec<(GridSpec<T>, Option<T>)> = grids
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            let margins: Vec<(T, T)> = rows
                .iter()
                .skip(gi)
                .step_by(grids.len())
                .map(|r| (r.nu, r.margin))
                .collect();
            (*g, estimate_nu_star(kappa, gamma, g, &margins, settings.nu_star_tol))
        })
        .collect();
    let nu_star = nu_star_by_grid.last().and_then(|p| p.1);
    Ok(SweepReport {
        kappa,
        gamma,
        rows,
        nu_star,
        nu_star_by_grid,
    })
}

fn estimate_nu_star<T: Scalar>(kappa: i32, gamma: T, grid: &GridSpec<T>, margins: &[(T, T)], tol: T) -> Option<T> {
    let mut sorted: Vec<(T, T)> = margins.iter().copied().filter(|p| p.1.is_finite()).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let first_neg = sorted.iter().position(|p| p.1 < T::zero())?;
    let mut hi = sorted[first_neg].0;
    if first_neg == 0 {
        return Some(hi);
    }
    let mut lo = sorted[first_neg - 1].0;
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        match margin_at(kappa, mid, gamma, grid) {
            Ok(m) if m >= T::zero() => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => return None,
        }
    }
    Some(hi)
}

/// Refinement study of a single channel over a list of grids.
pub fn convergence_study<T: Scalar>(
    spec: &DiracChannelSpec<T>,
    grids: &[GridSpec<T>],
    settings: &SweepSettings<T>,
) -> Result<SweepReport<T>> {
    hardy_sweep(spec.kappa, &[spec.nu], spec.gamma, grids, settings)
}

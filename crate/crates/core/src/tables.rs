//! Plain comma-separated exports of surfaces, spectra and ensemble results.
//!
//! Floats use Rust's shortest round-trip formatting, so identical values
//! always produce identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::mfdfa::{FluctuationSurface, MultifractalSpectrum};
use crate::mftest::EnsembleStats;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Long format: `q,s,F,excluded,boxes`.
pub fn write_surface(w: &mut impl Write, surface: &FluctuationSurface) -> Result<()> {
    writeln!(w, "q,s,F,excluded,boxes")?;
    for (i, q) in surface.q_grid.iter().enumerate() {
        for (j, s) in surface.scale_grid.iter().enumerate() {
            writeln!(
                w,
                "{q},{s},{},{},{}",
                surface.values[i][j], surface.excluded[i][j], surface.boxes[j]
            )?;
        }
    }
    Ok(())
}

/// `q,H,stderr,r2,tau,alpha,f`.
pub fn write_spectrum(w: &mut impl Write, spec: &MultifractalSpectrum) -> Result<()> {
    writeln!(w, "q,H,stderr,r2,tau,alpha,f")?;
    for i in 0..spec.q_grid.len() {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            spec.q_grid[i],
            spec.hurst[i],
            spec.hurst_stderr[i],
            spec.hurst_r_squared[i],
            spec.tau[i],
            spec.alpha[i],
            spec.f[i]
        )?;
    }
    Ok(())
}

/// Per-order ensemble means and standard deviations.
pub fn write_ensemble_stats(w: &mut impl Write, st: &EnsembleStats) -> Result<()> {
    writeln!(w, "q,H_mean,H_std,tau_mean,tau_std,alpha_mean,alpha_std,f_mean,f_std")?;
    for i in 0..st.q_grid.len() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            st.q_grid[i],
            st.mean_hurst[i],
            st.std_hurst[i],
            st.mean_tau[i],
            st.std_tau[i],
            st.mean_alpha[i],
            st.std_alpha[i],
            st.mean_f[i],
            st.std_f[i]
        )?;
    }
    Ok(())
}

/// Raw `delta_alpha` and `delta_f` of every surrogate, one row each.
pub fn write_width_samples(w: &mut impl Write, st: &EnsembleStats, seeds: &[u64]) -> Result<()> {
    writeln!(w, "surrogate,seed,delta_alpha,delta_f")?;
    for (i, (da, df)) in st.delta_alpha.iter().zip(&st.delta_f).enumerate() {
        let seed = seeds.get(i).copied().unwrap_or_default();
        writeln!(w, "{i},{seed},{da},{df}")?;
    }
    Ok(())
}

pub fn save_surface(path: &Path, surface: &FluctuationSurface) -> Result<()> {
    let mut w = create(path)?;
    write_surface(&mut w, surface)?;
    Ok(w.flush()?)
}

pub fn save_spectrum(path: &Path, spec: &MultifractalSpectrum) -> Result<()> {
    let mut w = create(path)?;
    write_spectrum(&mut w, spec)?;
    Ok(w.flush()?)
}

pub fn save_ensemble_stats(path: &Path, st: &EnsembleStats) -> Result<()> {
    let mut w = create(path)?;
    write_ensemble_stats(&mut w, st)?;
    Ok(w.flush()?)
}

pub fn save_width_samples(path: &Path, st: &EnsembleStats, seeds: &[u64]) -> Result<()> {
    let mut w = create(path)?;
    write_width_samples(&mut w, st, seeds)?;
    Ok(w.flush()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfdfa::{q_grid, DetrendOrder};

    #[test]
    fn spectrum_table_layout() {
        let q = q_grid(-1.0, 1.0, 0.5).unwrap();
        let n = q.len();
        let spec = MultifractalSpectrum::from_hurst(&q, DetrendOrder::Linear, &vec![0.5; n], vec![0.0; n], vec![1.0; n])
            .unwrap();
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &spec).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "q,H,stderr,r2,tau,alpha,f");
        assert_eq!(lines.len(), n + 1);
        assert_eq!(lines[3], "0,0.5,0,1,-1,0.5,1");
    }

    #[test]
    fn surface_table_rows() {
        let surface = FluctuationSurface {
            q_grid: vec![-1.0, 2.0],
            scale_grid: vec![10, 20],
            detrend_order: DetrendOrder::Linear,
            values: vec![vec![1.0, 2.0], vec![3.0, 4.5]],
            excluded: vec![vec![0, 1], vec![0, 0]],
            boxes: vec![8, 4],
        };
        let mut buf = Vec::new();
        write_surface(&mut buf, &surface).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "q,s,F,excluded,boxes\n-1,10,1,0,8\n-1,20,2,1,4\n2,10,3,0,8\n2,20,4.5,0,4\n");
    }
}

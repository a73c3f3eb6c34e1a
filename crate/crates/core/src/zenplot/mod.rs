//! Zenplots: zigzag layouts of alternating 1D and 2D panels rendered to SVG.

mod layout;
mod render;
mod style;

pub use layout::{
    default_zigzag, layout, layout_sequence, place_cells, Cell, CellKind, Direction, DirectionSeq,
    LayoutGrid, DEFAULT_WIDTH,
};
pub use render::render;
pub use style::Style;

use crate::error::{Error, Result};
use crate::margins::{Acf, QQEnvelope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelKind {
    Scatter,
    Acf,
    Qq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PanelData {
    Scatter {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Acf {
        /// Autocorrelations at lags `1..=values.len()`.
        values: Vec<f64>,
        band: f64,
    },
    Qq {
        /// Sorted sample.
        sample: Vec<f64>,
        theoretical: Vec<f64>,
        envelope: Option<QQEnvelope>,
    },
}

/// Content of one 2D panel.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    pub data: PanelData,
    /// Caption drawn inside the panel, e.g. the column name.
    pub title: Option<String>,
}

impl PanelSpec {
    pub fn kind(&self) -> PanelKind {
        match self.data {
            PanelData::Scatter { .. } => PanelKind::Scatter,
            PanelData::Acf { .. } => PanelKind::Acf,
            PanelData::Qq { .. } => PanelKind::Qq,
        }
    }
}

pub fn scatter_panel(u: &[f64], v: &[f64]) -> Result<PanelSpec> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(PanelSpec {
        data: PanelData::Scatter {
            x: u.to_vec(),
            y: v.to_vec(),
        },
        title: None,
    })
}

/// ACF panel from lag 1 onwards (lag 0 is dropped).
pub fn acf_panel(acf: &Acf) -> PanelSpec {
    PanelSpec {
        data: PanelData::Acf {
            values: acf.values.iter().skip(1).copied().collect(),
            band: acf.band,
        },
        title: None,
    }
}

/// Q-Q panel of `sample` against theoretical quantiles; the sample is
/// sorted here.
pub fn qq_panel(sample: &[f64], theoretical: &[f64], envelope: Option<QQEnvelope>) -> Result<PanelSpec> {
    if sample.len() != theoretical.len() {
        return Err(Error::DimensionMismatch {
            expected: theoretical.len(),
            got: sample.len(),
        });
    }
    if let Some(e) = &envelope {
        if e.n != sample.len() {
            return Err(Error::DimensionMismatch {
                expected: sample.len(),
                got: e.n,
            });
        }
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(PanelSpec {
        data: PanelData::Qq {
            sample: sorted,
            theoretical: theoretical.to_vec(),
            envelope,
        },
        title: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::margins::acf;

    #[test]
    fn panel_constructors() {
        let p = qq_panel(&[3.0, 1.0, 2.0], &[-1.0, 0.0, 1.0], None).unwrap();
        match p.data {
            PanelData::Qq { sample, .. } => assert_eq!(sample, vec![1.0, 2.0, 3.0]),
            _ => unreachable!(),
        }
        assert!(scatter_panel(&[0.1], &[0.2, 0.3]).is_err());
        let a = acf(&[1.0, 3.0, 2.0, 5.0, 4.0, 6.0], 4).unwrap();
        match acf_panel(&a).data {
            PanelData::Acf { values, .. } => assert_eq!(values.len(), 4),
            _ => unreachable!(),
        }
    }
}

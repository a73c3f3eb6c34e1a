use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global drawing parameters.
///
/// Overrides are read from `key = value` lines; blank lines and lines
/// starting with `#` are ignored. Keys are the field names below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    /// Side of a 2D panel in SVG user units.
    pub panel_size: f64,
    /// Thickness of a 1D panel as a fraction of `panel_size`.
    pub gap: f64,
    pub point_opacity: f64,
    /// Point radius as a fraction of `panel_size`.
    pub point_radius: f64,
    pub point_color: String,
    pub line_color: String,
    pub frame_color: String,
    pub background: String,
    pub font_size: f64,
    pub font_family: String,
    /// Envelope fills from darkest to lightest: 90%, 95%, 99%, range.
    pub band_greys: [String; 4],
}

impl Default for Style {
    fn default() -> Self {
        Self {
            panel_size: 120.0,
            gap: 0.2,
            point_opacity: 0.25,
            point_radius: 0.008,
            point_color: "#000000".into(),
            line_color: "#000000".into(),
            frame_color: "#999999".into(),
            background: "#ffffff".into(),
            font_size: 10.0,
            font_family: "sans-serif".into(),
            band_greys: [
                "#6e6e6e".into(),
                "#999999".into(),
                "#c4c4c4".into(),
                "#e6e6e6".into(),
            ],
        }
    }
}

fn parse_num(key: &str, value: &str, line: usize) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            row: line,
            column: key.to_string(),
            message: format!("expected a number, found \"{value}\""),
        })
}

impl Style {
    pub fn apply_overrides(&mut self, text: &str) -> Result<()> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                row: k + 1,
                column: line.to_string(),
                message: "expected key = value".into(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let row = k + 1;
            match key {
                "panel_size" => self.panel_size = parse_num(key, value, row)?,
                "gap" => self.gap = parse_num(key, value, row)?,
                "point_opacity" => self.point_opacity = parse_num(key, value, row)?,
                "point_radius" => self.point_radius = parse_num(key, value, row)?,
                "font_size" => self.font_size = parse_num(key, value, row)?,
                "point_color" => self.point_color = value.to_string(),
                "line_color" => self.line_color = value.to_string(),
                "frame_color" => self.frame_color = value.to_string(),
                "background" => self.background = value.to_string(),
                "font_family" => self.font_family = value.to_string(),
                "band_grey_90" => self.band_greys[0] = value.to_string(),
                "band_grey_95" => self.band_greys[1] = value.to_string(),
                "band_grey_99" => self.band_greys[2] = value.to_string(),
                "band_grey_range" => self.band_greys[3] = value.to_string(),
                other => {
                    return Err(Error::Parse {
                        row,
                        column: other.to_string(),
                        message: "unknown style key".into(),
                    })
                }
            }
        }
        if !(self.panel_size > 0.0 && self.gap >= 0.0 && (0.0..=1.0).contains(&self.point_opacity)) {
            return Err(Error::InvalidArgument(
                "style needs panel_size > 0, gap >= 0 and point_opacity in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::io::io_err(path, e))?;
        let mut s = Style::default();
        s.apply_overrides(&text)
            .map_err(|e| e.context(path.display().to_string()))?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut s = Style::default();
        s.apply_overrides("# comment\npoint_opacity = 0.5\n\nband_grey_range=#eeeeee\n")
            .unwrap();
        assert_eq!(s.point_opacity, 0.5);
        assert_eq!(s.band_greys[3], "#eeeeee");
        assert!(Style::default().apply_overrides("colour = red").is_err());
        assert!(Style::default().apply_overrides("gap = wide").is_err());
        assert!(Style::default().apply_overrides("point_opacity = 2").is_err());
    }
}

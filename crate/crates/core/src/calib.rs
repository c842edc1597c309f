//! Per-device lenticular calibration, read from JSON.
//!
//! Schema (unknown keys are ignored):
//!
//! | key        | meaning                                   | required |
//! |------------|-------------------------------------------|----------|
//! | `pitch`    | lens pitch in subpixels                   | yes      |
//! | `slope`    | tangent of the lens slant                 | yes      |
//! | `center`   | horizontal subpixel offset                | yes      |
//! | `views`    | number of views                           | yes      |
//! | `screenW`  | panel width in pixels                     | yes      |
//! | `screenH`  | panel height in pixels                    | yes      |
//! | `dpi`      | panel density, informational              | no       |
//! | `viewCone` | view cone in degrees, defaults to 50      | no       |
//!
//! Each value may be a bare number or an object `{"value": <number>}`, the
//! shape device exports use.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const DEFAULT_VIEW_CONE_DEG: f64 = 50.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    /// Lens pitch in subpixel units.
    pub pitch_x: f64,
    /// Tangent of the slant between lenses and pixel columns.
    pub slope_tan: f64,
    /// Horizontal subpixel offset.
    pub i_off: f64,
    pub n_views: u32,
    pub panel_width: u32,
    pub panel_height: u32,
    pub view_cone_deg: f64,
    pub dpi: Option<f64>,
}

impl Calibration {
    pub fn new(
        pitch_x: f64,
        slope_tan: f64,
        i_off: f64,
        n_views: u32,
        panel_width: u32,
        panel_height: u32,
    ) -> Result<Self> {
        let cal = Self {
            pitch_x,
            slope_tan,
            i_off,
            n_views,
            panel_width,
            panel_height,
            view_cone_deg: DEFAULT_VIEW_CONE_DEG,
            dpi: None,
        };
        cal.validate()?;
        Ok(cal)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCalibration(msg));
        if !(self.pitch_x.is_finite() && self.pitch_x > 0.0) {
            return bad(format!("pitch must be positive, got {}", self.pitch_x));
        }
        if !self.slope_tan.is_finite() || !self.i_off.is_finite() {
            return bad("slope and center must be finite".into());
        }
        if self.n_views < 2 {
            return bad(format!("at least 2 views required, got {}", self.n_views));
        }
        if self.panel_width == 0 || self.panel_height == 0 {
            return bad(format!(
                "panel {}x{} must be non-empty",
                self.panel_width, self.panel_height
            ));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::InvalidCalibration("top level must be an object".into()))?;

        let cal = Self {
            pitch_x: required(obj, "pitch")?,
            slope_tan: required(obj, "slope")?,
            i_off: required(obj, "center")?,
            n_views: required_count(obj, "views")?,
            panel_width: required_count(obj, "screenW")?,
            panel_height: required_count(obj, "screenH")?,
            view_cone_deg: optional(obj, "viewCone")?.unwrap_or(DEFAULT_VIEW_CONE_DEG),
            dpi: optional(obj, "dpi")?,
        };
        cal.validate()?;
        Ok(cal)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("pitch".into(), self.pitch_x.into());
        obj.insert("slope".into(), self.slope_tan.into());
        obj.insert("center".into(), self.i_off.into());
        if let Some(dpi) = self.dpi {
            obj.insert("dpi".into(), dpi.into());
        }
        obj.insert("screenW".into(), self.panel_width.into());
        obj.insert("screenH".into(), self.panel_height.into());
        obj.insert("views".into(), self.n_views.into());
        obj.insert("viewCone".into(), self.view_cone_deg.into());
        Value::Object(obj)
    }
}

fn number(obj: &Map<String, Value>, key: &'static str) -> Result<Option<f64>> {
    let value = match obj.get(key) {
        None | Some(Value::Null) => return Ok(None),
        Some(Value::Object(inner)) => inner.get("value").unwrap_or(&Value::Null),
        Some(v) => v,
    };
    value
        .as_f64()
        .map(Some)
        .ok_or(Error::NonNumeric { field: key })
}

fn required(obj: &Map<String, Value>, key: &'static str) -> Result<f64> {
    number(obj, key)?.ok_or(Error::MissingField(key))
}

fn optional(obj: &Map<String, Value>, key: &'static str) -> Result<Option<f64>> {
    number(obj, key)
}

fn required_count(obj: &Map<String, Value>, key: &'static str) -> Result<u32> {
    let v = required(obj, key)?;
    if v.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&v) {
        return Err(Error::InvalidCalibration(format!(
            "\"{key}\" must be a positive integer, got {v}"
        )));
    }
    Ok(v as u32)
}

pub fn load_calibration(path: impl AsRef<Path>) -> Result<Calibration> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Calibration::from_json_str(&text)
}

pub fn save_calibration(cal: &Calibration, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&cal.to_json())?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"{
        "pitch": 20.36, "slope": -0.1852, "center": 0.3, "dpi": 338,
        "screenW": 2560, "screenH": 1600, "views": 32, "serial": "LKG-X"
    }"#;

    #[test]
    fn parses_reference_fixture() {
        let cal = Calibration::from_json_str(FIXTURE).unwrap();
        assert_eq!((cal.panel_width, cal.panel_height), (2560, 1600));
        assert_eq!(cal.n_views, 32);
        assert_eq!(cal.pitch_x, 20.36);
        assert_eq!(cal.slope_tan, -0.1852);
        assert_eq!(cal.i_off, 0.3);
        assert_eq!(cal.dpi, Some(338.0));
        assert_eq!(cal.view_cone_deg, 50.0);
    }

    #[test]
    fn accepts_wrapped_values() {
        let cal = Calibration::from_json_str(
            r#"{"pitch": {"value": 12.5}, "slope": {"value": 0.1}, "center": {"value": -2},
                "screenW": {"value": 64}, "screenH": 40, "views": {"value": 45}, "viewCone": {"value": 40}}"#,
        )
        .unwrap();
        assert_eq!(cal.pitch_x, 12.5);
        assert_eq!(cal.n_views, 45);
        assert_eq!(cal.view_cone_deg, 40.0);
    }

    #[test]
    fn missing_fields_are_named() {
        for key in ["pitch", "slope", "center", "screenW", "screenH", "views"] {
            let mut v: Value = serde_json::from_str(FIXTURE).unwrap();
            v.as_object_mut().unwrap().remove(key);
            let err = Calibration::from_json_str(&v.to_string()).unwrap_err();
            assert!(matches!(err, Error::MissingField(k) if k == key));
            assert!(err.to_string().contains(key));
        }
    }

    #[test]
    fn rejects_bad_values() {
        let non_numeric = FIXTURE.replace("20.36", "\"wide\"");
        assert!(matches!(
            Calibration::from_json_str(&non_numeric),
            Err(Error::NonNumeric { field: "pitch" })
        ));
        assert!(matches!(
            Calibration::from_json_str("{not json"),
            Err(Error::Json(_))
        ));
        assert!(Calibration::from_json_str(&FIXTURE.replace("20.36", "-1")).is_err());
        assert!(
            Calibration::from_json_str(&FIXTURE.replace("\"views\": 32", "\"views\": 1")).is_err()
        );
        assert!(Calibration::from_json_str(&FIXTURE.replace("2560", "25.5")).is_err());
        assert!(Calibration::from_json_str("[1, 2]").is_err());
    }

    #[test]
    fn reserialization_roundtrip() {
        let cal = Calibration::from_json_str(FIXTURE).unwrap();
        let again = Calibration::from_json_str(&cal.to_json().to_string()).unwrap();
        assert_eq!(again, cal);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cal.json");
        save_calibration(&cal, &path).unwrap();
        assert_eq!(load_calibration(&path).unwrap(), cal);
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_calibration("/nonexistent/cal.json").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/cal.json"));
    }
}

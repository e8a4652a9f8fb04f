use crate::error::{Error, Result};

/// Rotation of a Foucault pendulum's swing plane over one sidereal day, in
/// degrees: `360 sin(latitude)`. Positive values are clockwise as seen from
/// above, which is the sense of rotation in the northern hemisphere.
pub fn foucault_rotation(latitude_degrees: f64) -> Result<f64> {
    if !(-90.0..=90.0).contains(&latitude_degrees) {
        return Err(Error::OutOfRange {
            value: latitude_degrees,
            min: -90.0,
            max: 90.0,
        });
    }
    Ok(360.0 * latitude_degrees.to_radians().sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_equator_and_paris() {
        assert_eq!(foucault_rotation(90.0).unwrap(), 360.0);
        assert_eq!(foucault_rotation(0.0).unwrap(), 0.0);
        assert_eq!(foucault_rotation(-90.0).unwrap(), -360.0);
        let paris = foucault_rotation(48.8566).unwrap();
        assert!((271.0..=271.2).contains(&paris), "{paris}");
    }

    #[test]
    fn rejects_impossible_latitudes() {
        assert!(matches!(foucault_rotation(90.5), Err(Error::OutOfRange { .. })));
        assert!(foucault_rotation(f64::NAN).is_err());
    }
}

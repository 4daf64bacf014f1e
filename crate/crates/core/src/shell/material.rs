//! Linear elastic shell material under the plane-stress assumption.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Material {
    pub youngs: f64,
    pub poisson: f64,
    pub thickness: f64,
}

impl Material {
    pub fn new(youngs: f64, poisson: f64, thickness: f64) -> Result<Self> {
        if !(youngs > 0.0) {
            return Err(Error::InvalidPatch(format!("Young's modulus {youngs} must be positive")));
        }
        if !(0.0..0.5).contains(&poisson) {
            return Err(Error::InvalidPatch(format!("Poisson ratio {poisson} outside [0, 0.5)")));
        }
        if !(thickness > 0.0) {
            return Err(Error::InvalidPatch(format!("thickness {thickness} must be positive")));
        }
        Ok(Material {
            youngs,
            poisson,
            thickness,
        })
    }

    /// Plane-stress shear Lame constant mu = E / (2 (1 + nu)).
    pub fn mu(&self) -> f64 {
        self.youngs / (2.0 * (1.0 + self.poisson))
    }

    /// Plane-stress first Lame constant lambda = E nu / (1 - nu^2).
    pub fn lambda(&self) -> f64 {
        self.youngs * self.poisson / (1.0 - self.poisson * self.poisson)
    }

    /// Flexural rigidity D_B = E t^3 / (12 (1 - nu^2)).
    pub fn flexural_rigidity(&self) -> f64 {
        self.youngs * self.thickness.powi(3) / (12.0 * (1.0 - self.poisson * self.poisson))
    }

    /// Thickness-coordinate range of the pre-integrated continuum,
    /// zeta in [-t/2, t/2].
    pub fn thickness_range(&self) -> (f64, f64) {
        (-0.5 * self.thickness, 0.5 * self.thickness)
    }
}

use num::complex::Complex64;

/// Numerical thresholds. The axis band is relative: a point z counts as on
/// the imaginary axis when |Re z| <= axis_band·(1 + |z|). The PSD floor is
/// `-psd_rel·‖H‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub axis_band: f64,
    pub psd_rel: f64,
    pub residual_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            axis_band: 1e-9,
            psd_rel: 1e-9,
            residual_tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionTag {
    OpenLhp,
    Axis,
    OpenRhp,
}

impl Tolerance {
    pub fn band(&self, z: Complex64) -> f64 {
        self.axis_band * (1.0 + z.norm())
    }

    pub fn classify(&self, z: Complex64) -> RegionTag {
        let b = self.band(z);
        if z.re < -b {
            RegionTag::OpenLhp
        } else if z.re > b {
            RegionTag::OpenRhp
        } else {
            RegionTag::Axis
        }
    }

    /// Same policy with the band scaled by ten; verdicts that change under
    /// this are reported as inconclusive.
    pub fn widened(&self) -> Tolerance {
        Tolerance {
            axis_band: self.axis_band * 10.0,
            ..*self
        }
    }

    pub fn psd_floor(&self, norm: f64) -> f64 {
        -self.psd_rel * norm
    }
}

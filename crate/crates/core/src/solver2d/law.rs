use crate::error::{Error, Result};
use crate::flux::GasModel;

/// A conservation law `∂q/∂t + div F(q) = s` seen through its reconstruction variables `w`.
pub trait Law<const N: usize> {
    /// Conservative to reconstruction variables.
    fn to_recon(&self, q: &[f64; N]) -> Result<[f64; N]>;
    fn to_conservative(&self, w: &[f64; N]) -> [f64; N];
    fn admissible(&self, w: &[f64; N]) -> bool;
    /// Projected flux `F(w)·n̂`.
    fn flux(&self, w: &[f64; N], n: [f64; 2]) -> [f64; N];
    /// `∂(F·n̂)/∂w`.
    fn flux_jacobian(&self, w: &[f64; N], n: [f64; 2]) -> [[f64; N]; N];
    /// Upwind dissipation `D̂_n (q(w_R) - q(w_L))`.
    fn dissipation(&self, wl: &[f64; N], wr: &[f64; N], n: [f64; 2]) -> Result<[f64; N]>;
    /// Largest wave speed along `n̂`.
    fn spectral_radius(&self, w: &[f64; N], n: [f64; 2]) -> f64;

    /// `½(f(w_L) + f(w_R)) - ½ D̂_n (q_R - q_L)`.
    fn numerical_flux(&self, wl: &[f64; N], wr: &[f64; N], n: [f64; 2]) -> Result<[f64; N]> {
        let (fl, fr) = (self.flux(wl, n), self.flux(wr, n));
        let d = self.dissipation(wl, wr, n)?;
        Ok(std::array::from_fn(|i| 0.5 * (fl[i] + fr[i] - d[i])))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EulerFlux {
    Roe { entropy_fix: Option<f64> },
    Rusanov,
}

impl std::str::FromStr for EulerFlux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roe" => Ok(EulerFlux::Roe { entropy_fix: None }),
            "rusanov" => Ok(EulerFlux::Rusanov),
            other => Err(Error::Config(format!("unknown Euler flux '{other}'"))),
        }
    }
}

/// Euler equations reconstructed in primitive variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerLaw {
    pub gas: GasModel,
    pub flux: EulerFlux,
}

impl EulerLaw {
    pub fn new(flux: EulerFlux) -> Self {
        Self { gas: GasModel::default(), flux }
    }
}

impl Law<4> for EulerLaw {
    #[inline]
    fn to_recon(&self, q: &[f64; 4]) -> Result<[f64; 4]> {
        self.gas.primitive(q)
    }

    #[inline]
    fn to_conservative(&self, w: &[f64; 4]) -> [f64; 4] {
        self.gas.conservative(w)
    }

    #[inline]
    fn admissible(&self, w: &[f64; 4]) -> bool {
        w[0] > 0.0 && w[3] > 0.0 && w.iter().all(|x| x.is_finite())
    }

    #[inline]
    fn flux(&self, w: &[f64; 4], n: [f64; 2]) -> [f64; 4] {
        let [r, u, v, p] = *w;
        let un = u * n[0] + v * n[1];
        let h = self.gas.total_enthalpy(w);
        [r * un, r * u * un + p * n[0], r * v * un + p * n[1], r * un * h]
    }

    #[inline]
    fn flux_jacobian(&self, w: &[f64; 4], n: [f64; 2]) -> [[f64; 4]; 4] {
        self.gas.flux_jacobian_unchecked(w, n)
    }

    #[inline]
    fn dissipation(&self, wl: &[f64; 4], wr: &[f64; 4], n: [f64; 2]) -> Result<[f64; 4]> {
        match self.flux {
            EulerFlux::Roe { entropy_fix } => self.gas.roe_dissipation(wl, wr, n, entropy_fix),
            EulerFlux::Rusanov => self.gas.rusanov_dissipation(wl, wr, n),
        }
    }

    #[inline]
    fn spectral_radius(&self, w: &[f64; 4], n: [f64; 2]) -> f64 {
        (w[1] * n[0] + w[2] * n[1]).abs() + self.gas.sound_speed(w)
    }
}

/// Scalar law with flux `F(u) = a u` or `F(u) = b u²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarLaw {
    Linear { a: [f64; 2] },
    Burgers { b: [f64; 2] },
}

impl ScalarLaw {
    #[inline]
    fn speed(&self, u: f64, n: [f64; 2]) -> f64 {
        match *self {
            ScalarLaw::Linear { a } => a[0] * n[0] + a[1] * n[1],
            ScalarLaw::Burgers { b } => (b[0] * n[0] + b[1] * n[1]) * u,
        }
    }
}

impl Law<1> for ScalarLaw {
    fn to_recon(&self, q: &[f64; 1]) -> Result<[f64; 1]> {
        Ok(*q)
    }

    fn to_conservative(&self, w: &[f64; 1]) -> [f64; 1] {
        *w
    }

    fn admissible(&self, w: &[f64; 1]) -> bool {
        w[0].is_finite()
    }

    #[inline]
    fn flux(&self, w: &[f64; 1], n: [f64; 2]) -> [f64; 1] {
        match *self {
            ScalarLaw::Linear { a } => [(a[0] * n[0] + a[1] * n[1]) * w[0]],
            ScalarLaw::Burgers { b } => [(b[0] * n[0] + b[1] * n[1]) * 0.5 * w[0] * w[0]],
        }
    }

    #[inline]
    fn flux_jacobian(&self, w: &[f64; 1], n: [f64; 2]) -> [[f64; 1]; 1] {
        [[self.speed(w[0], n)]]
    }

    #[inline]
    fn dissipation(&self, wl: &[f64; 1], wr: &[f64; 1], n: [f64; 2]) -> Result<[f64; 1]> {
        Ok([self.speed(0.5 * (wl[0] + wr[0]), n).abs() * (wr[0] - wl[0])])
    }

    fn spectral_radius(&self, w: &[f64; 1], n: [f64; 2]) -> f64 {
        self.speed(w[0], n).abs()
    }
}

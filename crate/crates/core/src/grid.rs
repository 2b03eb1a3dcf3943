use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform tensor grid over `[x_min, x_max] × [t_min, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Result<Self> {
        let g = Self { x_min, x_max, nx, t_min, t_max, nt };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.t_min, self.t_max].iter().all(|v| v.is_finite());
        if self.nx == 0 || self.nt == 0 {
            return Err(Error::InvalidGrid("empty grid".into()));
        }
        if !finite || self.x_max < self.x_min || self.t_max < self.t_min {
            return Err(Error::InvalidGrid(format!("bad bounds {self:?}")));
        }
        if (self.nx == 1 && self.x_max != self.x_min) || (self.nt == 1 && self.t_max != self.t_min) {
            return Err(Error::InvalidGrid("single point with non-degenerate range".into()));
        }
        Ok(())
    }

    /// `x ∈ [−10, 10]` with 401 points, `t ∈ [0, 2]` with 201 points, unless
    /// `RD_GRID_DEFAULT` holds a valid `xmin,xmax,nx,tmin,tmax,nt`.
    pub fn default_grid() -> Self {
        std::env::var("RD_GRID_DEFAULT")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(Self { x_min: -10.0, x_max: 10.0, nx: 401, t_min: 0.0, t_max: 2.0, nt: 201 })
    }

    pub fn hx(&self) -> f64 {
        if self.nx > 1 {
            (self.x_max - self.x_min) / (self.nx - 1) as f64
        } else {
            0.0
        }
    }

    pub fn ht(&self) -> f64 {
        if self.nt > 1 {
            (self.t_max - self.t_min) / (self.nt - 1) as f64
        } else {
            0.0
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx { self.x_max } else { self.x_min + self.hx() * i as f64 }
    }

    pub fn t(&self, j: usize) -> f64 {
        if j + 1 == self.nt { self.t_max } else { self.t_min + self.ht() * j as f64 }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.nt).map(|j| self.t(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::InvalidGrid(format!("expected 6 comma-separated values, got `{s}`")));
        }
        let f = |i: usize| parts[i].parse::<f64>().map_err(|_| Error::InvalidGrid(format!("bad number `{}`", parts[i])));
        let n = |i: usize| parts[i].parse::<usize>().map_err(|_| Error::InvalidGrid(format!("bad count `{}`", parts[i])));
        Self::new(f(0)?, f(1)?, n(2)?, f(3)?, f(4)?, n(5)?)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.x_min, self.x_max, self.nx, self.t_min, self.t_max, self.nt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_endpoints() {
        let g: GridSpec = "-10,10,401,0,2,201".parse().unwrap();
        assert_eq!(g.x(0), -10.0);
        assert_eq!(g.x(400), 10.0);
        assert!((g.hx() - 0.05).abs() < 1e-15);
        assert_eq!(g.t(200), 2.0);
        assert!("1,2,3".parse::<GridSpec>().is_err());
        assert!(GridSpec::new(0.0, 1.0, 0, 0.0, 1.0, 3).is_err());
    }
}

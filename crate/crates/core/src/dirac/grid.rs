use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridScheme {
    Uniform,
    Logarithmic,
}

impl fmt::Display for GridScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridScheme::Uniform => "uniform",
            GridScheme::Logarithmic => "logarithmic",
        })
    }
}

impl FromStr for GridScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GridScheme::Uniform),
            "logarithmic" | "log" => Ok(GridScheme::Logarithmic),
            other => Err(Error::InvalidArgument(format!("unknown grid scheme `{other}`"))),
        }
    }
}

/// Parameters of a radial grid, before the nodes are laid out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub scheme: GridScheme,
    pub n: usize,
    pub r_min: T,
    pub r_max: T,
}

impl<T: Scalar> GridSpec<T> {
    /// Logarithmic grid on `[1e-4, 100]`.
    pub fn logarithmic(n: usize) -> Self {
        Self {
            scheme: GridScheme::Logarithmic,
            n,
            r_min: T::lit(1e-4),
            r_max: T::lit(100.0),
        }
    }

    pub fn with_r_min(self, r_min: T) -> Self {
        Self { r_min, ..self }
    }

    pub fn build(&self) -> Result<RadialGrid<T>> {
        RadialGrid::build(self.scheme, self.n, self.r_min, self.r_max)
    }
}

/// Increasing nodes on `[r_min, r_max]`, the truncated half-line.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid<T> {
    scheme: GridScheme,
    nodes: Vec<T>,
}

impl<T: Scalar> RadialGrid<T> {
    pub fn build(scheme: GridScheme, n: usize, r_min: T, r_max: T) -> Result<Self> {
        if !(r_min > T::zero() && r_max > r_min && r_max.is_finite()) {
            return Err(Error::BadRange(format!(
                "need 0 < r_min < r_max, got r_min = {r_min}, r_max = {r_max}"
            )));
        }
        if n < 2 {
            return Err(Error::BadRange(format!("need at least 2 nodes, got {n}")));
        }
        let last = T::from_count(n - 1);
        let mut nodes: Vec<T> = match scheme {
            GridScheme::Uniform => {
                let h = (r_max - r_min) / last;
                (0..n).map(|j| r_min + h * T::from_count(j)).collect()
            }
            GridScheme::Logarithmic => {
                let ratio = r_max / r_min;
                (0..n)
                    .map(|j| r_min * ratio.powf(T::from_count(j) / last))
                    .collect()
            }
        };
        nodes[0] = r_min;
        nodes[n - 1] = r_max;
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadRange("nodes are not strictly increasing".into()));
        }
        Ok(Self { scheme, nodes })
    }

    pub fn scheme(&self) -> GridScheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn r_min(&self) -> T {
        self.nodes[0]
    }

    pub fn r_max(&self) -> T {
        self.nodes[self.n() - 1]
    }

    pub fn spec(&self) -> GridSpec<T> {
        GridSpec {
            scheme: self.scheme,
            n: self.n(),
            r_min: self.r_min(),
            r_max: self.r_max(),
        }
    }

    /// Forward cell widths `r_{j+1} - r_j`, continued past the last node
    /// with the scheme's spacing rule (constant step or constant ratio).
    pub fn cell_widths(&self) -> Vec<T> {
        let n = self.n();
        let mut h: Vec<T> = self.nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let tail = match self.scheme {
            GridScheme::Uniform => h[n - 2],
            GridScheme::Logarithmic => {
                let ratio = (self.r_max() / self.r_min()).powf(T::one() / T::from_count(n - 1));
                self.r_max() * (ratio - T::one())
            }
        };
        h.push(tail);
        h
    }

    /// Backward cell widths `r_j - r_{j-1}`, continued before the first node.
    pub fn backward_cell_widths(&self) -> Vec<T> {
        let n = self.n();
        let head = match self.scheme {
            GridScheme::Uniform => self.nodes[1] - self.nodes[0],
            GridScheme::Logarithmic => {
                let ratio = (self.r_max() / self.r_min()).powf(T::one() / T::from_count(n - 1));
                self.r_min() * (T::one() - ratio.recip())
            }
        };
        std::iter::once(head)
            .chain(self.nodes.windows(2).map(|w| w[1] - w[0]))
            .collect()
    }
}

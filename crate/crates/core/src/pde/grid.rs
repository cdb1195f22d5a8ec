/// Uniform grid of interior nodes on `[0,1]^dim`, `dim ∈ {1, 2}`.
///
/// Boundary values are implicit zeros. Node `(i, j)` of the square has flat
/// index `i · points_per_axis + j`, with `i` running along `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
}

impl Grid {
    pub fn line(points: usize) -> Self {
        assert!(points > 0, "grid needs at least one interior point");
        Self {
            dim: 1,
            points_per_axis: points,
        }
    }

    pub fn square(points_per_axis: usize) -> Self {
        assert!(
            points_per_axis > 0,
            "grid needs at least one interior point"
        );
        Self {
            dim: 2,
            points_per_axis,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.points_per_axis as f64 + 1.0)
    }

    /// `h^dim`: the weight of the midpoint-style quadrature
    /// `⟨f, g⟩ ≈ h^dim Σ f_i g_i`.
    pub fn quad_weight(&self) -> f64 {
        let h = self.spacing();
        if self.dim == 1 {
            h
        } else {
            h * h
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Coordinate of the `i`-th interior point along an axis.
    pub fn axis_coord(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.spacing()
    }

    /// Coordinates of flat node `idx` (the second entry is 0 in 1D).
    pub fn node(&self, idx: usize) -> [f64; 2] {
        if self.dim == 1 {
            [self.axis_coord(idx), 0.0]
        } else {
            let m = self.points_per_axis;
            [self.axis_coord(idx / m), self.axis_coord(idx % m)]
        }
    }
}

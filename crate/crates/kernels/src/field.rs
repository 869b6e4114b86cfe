use num_complex::Complex64;
use scattering1d::SpatialGrid;

/// How the diagonal of a sampled kernel is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalConvention {
    /// The x == y entries hold the finite analytic limit.
    AnalyticLimit,
    /// The x == y entries are zeroed; the kernel is a principal value there.
    PrincipalValueZero,
}

impl DiagonalConvention {
    fn label(self) -> &'static str {
        match self {
            DiagonalConvention::AnalyticLimit => "analytic-limit",
            DiagonalConvention::PrincipalValueZero => "principal-value-zero",
        }
    }
}

/// A two-point kernel sampled on the product of a spatial grid with itself.
#[derive(Debug, Clone)]
pub struct KernelField {
    grid: SpatialGrid,
    /// Row-major: values[i * n + j] = K(x_i, x_j).
    values: Vec<Complex64>,
    convention: DiagonalConvention,
}

impl KernelField {
    pub fn from_values(
        grid: SpatialGrid,
        values: Vec<Complex64>,
        convention: DiagonalConvention,
    ) -> Self {
        let n = grid.points().len();
        assert_eq!(values.len(), n * n, "values must fill the grid product");
        Self { grid, values, convention }
    }

    /// Samples a pointwise rule K(x_i, x_j); the diagonal comes from
    /// `diagonal` under the analytic-limit convention.
    pub fn from_fn(
        grid: SpatialGrid,
        kernel: impl Fn(f64, f64) -> Complex64,
        diagonal: impl Fn(f64) -> Complex64,
    ) -> Self {
        let xs = grid.points().to_vec();
        let n = xs.len();
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in xs.iter().enumerate() {
                values[i * n + j] = if i == j { diagonal(x) } else { kernel(x, y) };
            }
        }
        Self { grid, values, convention: DiagonalConvention::AnalyticLimit }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn convention(&self) -> DiagonalConvention {
        self.convention
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.points().len() + j]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Largest |K(x_i, x_j) - conj(K(x_j, x_i))| off the diagonal.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.grid.points().len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.value(i, j) - self.value(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest |K(x_i, x_j) + K(x_j, x_i)| off the diagonal.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.grid.points().len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.value(i, j) + self.value(j, i)).norm());
            }
        }
        worst
    }

    /// One `x,y,re,im` row per entry, full precision.
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "x,y,re,im")?;
        let xs = self.grid.points();
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in xs.iter().enumerate() {
                let v = self.value(i, j);
                writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", x, y, v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Compact description of the sampling, suitable as a CSV sidecar.
    pub fn header_json(&self) -> String {
        let xs = self.grid.points();
        format!(
            "{{\"points\":{},\"extent\":{:.16e},\"spacing\":{:.16e},\"diagonal\":\"{}\"}}",
            xs.len(),
            self.grid.extent(),
            self.grid.spacing(),
            self.convention.label()
        )
    }
}

use std::fmt;

/// A point of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "lattice point needs at least one coordinate");
        LatticePoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        LatticePoint(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn sub(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, t: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * t).collect())
    }

    /// Appends a coordinate.
    pub fn lift(&self, last: i64) -> LatticePoint {
        let mut v = self.0.clone();
        v.push(last);
        LatticePoint(v)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint::new(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint::new(v.to_vec())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `normal · x <= offset`, with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl HalfSpace {
    /// `offset - normal·x`: the lattice distance of `x` to the bounding hyperplane.
    pub fn slack(&self, x: &[i64]) -> i128 {
        self.offset as i128 - crate::arith::dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.slack(x) >= 0
    }
}

/// Points from a slice of coordinate arrays.
pub fn points<const N: usize>(v: &[[i64; N]]) -> Vec<LatticePoint> {
    v.iter().map(|p| LatticePoint::from(*p)).collect()
}

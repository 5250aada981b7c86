use std::fmt;

use super::ChainError;

/// A map `f: [n] → [m]` with `f(0) = 0` and `f(j) − f(i) ≥ j − i` for `j > i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelMap {
    images: Vec<usize>,
    m: usize,
}

impl LevelMap {
    /// `images[i]` is `f(i)`; `m` is the depth of the codomain.
    pub fn new(images: Vec<usize>, m: usize) -> Result<Self, ChainError> {
        match images.first() {
            None => return Err(ChainError::BadLevelMap("empty".into())),
            Some(&f0) if f0 != 0 => {
                return Err(ChainError::BadLevelMap(format!("f(0) = {f0}, expected 0")))
            }
            _ => {}
        }
        for (i, w) in images.windows(2).enumerate() {
            if w[1] < w[0] + 1 {
                return Err(ChainError::BadLevelMap(format!(
                    "f({}) = {} and f({}) = {} violate the gap law",
                    i,
                    w[0],
                    i + 1,
                    w[1]
                )));
            }
        }
        let last = *images.last().unwrap();
        if last > m {
            return Err(ChainError::BadLevelMap(format!(
                "f({}) = {last} exceeds {m}",
                images.len() - 1
            )));
        }
        Ok(LevelMap { images, m })
    }

    pub fn identity(n: usize) -> Self {
        LevelMap {
            images: (0..=n).collect(),
            m: n,
        }
    }

    pub fn n(&self) -> usize {
        self.images.len() - 1
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.n() == self.m
    }

    /// Whether every level of `[m]` is hit.
    pub fn is_surjective(&self) -> bool {
        self.is_identity()
    }

    /// `f;g`, i.e. `i ↦ g(f(i))`.
    pub fn then(&self, g: &LevelMap) -> Result<LevelMap, ChainError> {
        if self.m != g.n() {
            return Err(ChainError::ChainMismatch);
        }
        Ok(LevelMap {
            images: self.images.iter().map(|&x| g.get(x)).collect(),
            m: g.m,
        })
    }
}

impl fmt::Display for LevelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_law() {
        assert!(LevelMap::new(vec![0, 1], 2).is_ok());
        assert!(LevelMap::new(vec![0, 2], 2).is_ok());
        assert!(LevelMap::new(vec![1], 2).is_err());
        assert!(LevelMap::new(vec![0, 2, 2], 3).is_err());
        assert!(LevelMap::new(vec![0, 3], 2).is_err());
    }

    #[test]
    fn equal_depths_force_identity() {
        for x in 0..=3 {
            let ok = LevelMap::new(vec![0, x, 2], 2).is_ok();
            assert_eq!(ok, x == 1);
        }
    }

    #[test]
    fn composition() {
        let f = LevelMap::new(vec![0, 2], 2).unwrap();
        let g = LevelMap::new(vec![0, 1, 3], 4).unwrap();
        assert_eq!(f.then(&g).unwrap().images(), &[0, 3]);
        assert!(g.then(&f).is_err());
        assert_eq!(f.to_string(), "[0, 2]");
    }
}

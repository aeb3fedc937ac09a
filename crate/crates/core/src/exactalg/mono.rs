use std::cmp::Ordering;

/// Exponent vector with trailing zeros trimmed, so equal monomials have equal
/// representations regardless of how many variables are in scope.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Mono(v)
    }

    pub fn from_exps(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Mono(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// One past the largest variable index that occurs.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        Mono((0..n).map(|i| self.exp(i) + o.exp(i)).collect())
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut v = Vec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let (a, b) = (self.exp(i), o.exp(i));
            if b > a {
                return None;
            }
            v.push(a - b);
        }
        Some(Mono::from_exps(v))
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Mono {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Mono::from_exps(v)
    }

    /// Remaps variable `i` to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Mono {
        let mut v = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let j = map[i];
            if v.len() <= j {
                v.resize(j + 1, 0);
            }
            v[j] += e;
        }
        Mono::from_exps(v)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            let n = self.0.len().max(o.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&o.exp(i)) {
                    Ordering::Equal => continue,
                    c => return c,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_first_variable_dominates() {
        let z1 = Mono::var(0);
        let z2 = Mono::var(1);
        assert!(z1 > z2);
        assert!(Mono::from_exps(vec![0, 2]) > z1);
        assert!(Mono::from_exps(vec![2, 0]) > Mono::from_exps(vec![1, 1]));
        assert_eq!(Mono::from_exps(vec![1, 0, 0]), z1);
    }

    #[test]
    fn division() {
        let a = Mono::from_exps(vec![2, 1]);
        assert_eq!(a.div(&Mono::var(0)), Some(Mono::from_exps(vec![1, 1])));
        assert_eq!(Mono::var(0).div(&a), None);
    }
}

//! Small numeric helpers shared across the algorithm modules.

/// `⌈log2(x)⌉` for `x >= 1`; returns 0 for `x <= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Iterated base-2 logarithm: how many times `log2` must be applied to reach a
/// value `<= 1`.
pub fn log_star(n: f64) -> u32 {
    let mut x = n;
    let mut count = 0;
    while x > 1.0 {
        x = x.log2();
        count += 1;
        if count > 64 {
            break;
        }
    }
    count
}

/// Trial-division primality; the moduli used by the cover-free construction
/// are tiny.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut f = 3;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Smallest prime `>= q`.
pub fn next_prime_at_least(q: u64) -> u64 {
    let mut p = q.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// `⌈a / b⌉` for positive integers.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Dense bit set over `0..len`, used for palette bookkeeping in node programs.
#[derive(Clone, Debug, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn with_capacity(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        let (w, b) = (i as usize / 64, i % 64);
        w < self.words.len() && self.words[w] & (1u64 << b) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: u32) -> bool {
        let (w, b) = (i as usize / 64, i % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1u64 << b) == 0;
        self.words[w] |= 1u64 << b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: u32) {
        let (w, b) = (i as usize / 64, i % 64);
        if w < self.words.len() {
            self.words[w] &= !(1u64 << b);
        }
    }

    /// Smallest value in `0..bound` not present in the set.
    pub fn first_absent_below(&self, bound: u32) -> Option<u32> {
        (0..bound).find(|&i| !self.contains(i))
    }
}

/// Ordinary least squares fit `y = a + b*x`, returning `(a, b, r_squared)`.
///
/// Used by the round-scaling regressions; with fewer than two distinct x
/// values the fit is degenerate and `r_squared` is 0.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return (my, 0.0, 0.0);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (a, b, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_small_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1 << 16), 16);
    }

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(1.0), 0);
        assert_eq!(log_star(2.0), 1);
        assert_eq!(log_star(4.0), 2);
        assert_eq!(log_star(16.0), 3);
        assert_eq!(log_star(65536.0), 4);
    }

    #[test]
    fn primes() {
        assert!(is_prime(2));
        assert!(is_prime(193));
        assert!(!is_prime(1));
        assert!(!is_prime(129));
        assert_eq!(next_prime_at_least(24), 29);
        assert_eq!(next_prime_at_least(97), 97);
    }

    #[test]
    fn bitset_roundtrip() {
        let mut b = BitSet::with_capacity(130);
        assert!(b.insert(129));
        assert!(!b.insert(129));
        assert!(b.contains(129));
        b.remove(129);
        assert!(!b.contains(129));
        assert_eq!(b.first_absent_below(3), Some(0));
        b.insert(0);
        b.insert(1);
        assert_eq!(b.first_absent_below(3), Some(2));
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [5.0, 7.0, 9.0, 11.0];
        let (a, b, r2) = linear_fit(&xs, &ys);
        assert!((a - 3.0).abs() < 1e-12);
        assert!((b - 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}

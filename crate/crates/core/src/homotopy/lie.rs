//! Free graded Lie algebras inside the tensor algebra, with the Lyndon basis.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::exact::Scalar;

pub type Word = Vec<usize>;

/// A noncommutative polynomial: words in the generators with coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<Word, Scalar>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(i: usize) -> Self {
        Self::word(vec![i], Scalar::one())
    }

    pub fn word(w: Word, c: Scalar) -> Self {
        let mut t = Self::zero();
        t.add_term(w, &c);
        t
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, o: &TensorElement) {
        for (w, x) in &o.terms {
            self.add_term(w.clone(), &(c * x));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut t = Self::zero();
        t.add_scaled(c, self);
        t
    }

    /// Concatenation product, dropping words longer than `max_len`.
    pub fn mul(&self, o: &TensorElement, max_len: usize) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                if u.len() + v.len() <= max_len {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    out.add_term(w, &(a * b));
                }
            }
        }
        out
    }

    /// Graded commutator `[u, v] = uv − (−1)^{|u||v|} vu` of homogeneous elements.
    pub fn bracket(&self, o: &TensorElement, du: i64, dv: i64, max_len: usize) -> Self {
        let mut out = self.mul(o, max_len);
        let sign = if (du * dv).rem_euclid(2) == 1 { Scalar::one() } else { -Scalar::one() };
        out.add_scaled(&sign, &o.mul(self, max_len));
        out
    }

    pub fn truncate(&self, max_len: usize) -> Self {
        Self { terms: self.terms.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Extends `gen ↦ images[gen]` to a derivation of odd degree, using the
    /// generator degrees for the Koszul signs.
    pub fn apply_odd_derivation(&self, images: &[TensorElement], degrees: &[i64], max_len: usize) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut prefix_deg = 0;
            for t in 0..w.len() {
                let sign = if prefix_deg % 2 == 0 { c.clone() } else { -c };
                for (img, x) in &images[w[t]].terms {
                    let len = w.len() - 1 + img.len();
                    if len > max_len {
                        continue;
                    }
                    let mut nw = Vec::with_capacity(len);
                    nw.extend_from_slice(&w[..t]);
                    nw.extend_from_slice(img);
                    nw.extend_from_slice(&w[t + 1..]);
                    out.add_term(nw, &(&sign * x));
                }
                prefix_deg += degrees[w[t]].rem_euclid(2);
            }
        }
        out
    }
}

pub fn word_degree(w: &[usize], degrees: &[i64]) -> i64 {
    w.iter().map(|&g| degrees[g]).sum()
}

/// Strictly smaller than all its proper rotations.
pub fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    n > 0 && (1..n).all(|k| w[k..].iter().chain(&w[..k]).cmp(w.iter()) == std::cmp::Ordering::Greater)
}

/// All Lyndon words of length `len` on `k` letters, in lexicographic order (Duval).
pub fn lyndon_words(k: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == len {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

/// `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[usize]) -> (&[usize], &[usize]) {
    let k = (1..w.len()).find(|&k| is_lyndon(&w[k..])).expect("length ≥ 2");
    (&w[..k], &w[k..])
}

/// The bracketing `P(w) = [P(u), P(v)]` of a Lyndon word.
pub fn standard_bracket(w: &[usize], degrees: &[i64]) -> TensorElement {
    if w.len() == 1 {
        return TensorElement::generator(w[0]);
    }
    let (u, v) = standard_factorization(w);
    let (pu, pv) = (standard_bracket(u, degrees), standard_bracket(v, degrees));
    pu.bracket(&pv, word_degree(u, degrees), word_degree(v, degrees), usize::MAX)
}

/// One element of the Lyndon basis of a free graded Lie algebra: `P(w)`, or
/// `[P(w), P(w)]` for a Lyndon word of odd degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasisElement {
    pub word: Word,
    pub square: bool,
    pub element: TensorElement,
}

impl LieBasisElement {
    pub fn length(&self) -> usize {
        self.word.len() * if self.square { 2 } else { 1 }
    }

    pub fn label(&self) -> String {
        let w: Vec<String> = self.word.iter().map(|g| format!("x{g}")).collect();
        let w = w.join("");
        if self.square {
            format!("[{w},{w}]")
        } else {
            w
        }
    }
}

/// Words of length `len` and total degree `deg` on generators with the given
/// degrees, all of which are `≥ 0`.
fn words_of(len: usize, deg: i64, degrees: &[i64]) -> Vec<Word> {
    fn go(len: usize, deg: i64, degrees: &[i64], max: i64, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == len {
            if deg == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let left = (len - cur.len()) as i64;
        for (g, &d) in degrees.iter().enumerate() {
            if d > deg || deg - d > (left - 1) * max {
                continue;
            }
            cur.push(g);
            go(len, deg - d, degrees, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let max = degrees.iter().copied().max().unwrap_or(0);
    go(len, deg, degrees, max, &mut Vec::new(), &mut out);
    out
}

/// Lyndon basis of the free graded Lie algebra in degree `deg` and bracket
/// length `len`.
pub fn lie_basis(len: usize, deg: i64, degrees: &[i64]) -> Vec<LieBasisElement> {
    assert!(degrees.iter().all(|&d| d >= 0), "generator degrees must be non-negative");
    let mut out: Vec<LieBasisElement> = words_of(len, deg, degrees)
        .into_iter()
        .filter(|w| is_lyndon(w))
        .map(|w| {
            let element = standard_bracket(&w, degrees);
            LieBasisElement { word: w, square: false, element }
        })
        .collect();
    if len % 2 == 0 && deg % 2 == 0 && (deg / 2) % 2 != 0 {
        for w in words_of(len / 2, deg / 2, degrees).into_iter().filter(|w| is_lyndon(w)) {
            let p = standard_bracket(&w, degrees);
            let element = p.bracket(&p, deg / 2, deg / 2, usize::MAX);
            out.push(LieBasisElement { word: w, square: true, element });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_small() {
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert!(is_lyndon(&[0, 1]) && !is_lyndon(&[1, 0]) && !is_lyndon(&[0, 0]));
    }

    #[test]
    fn odd_generator_square_survives() {
        let b = lie_basis(2, 2, &[1]);
        assert_eq!(b.len(), 1);
        assert!(b[0].square);
        assert_eq!(b[0].element, TensorElement::word(vec![0, 0], Scalar::int(2)));
        assert!(lie_basis(2, 0, &[0]).is_empty());
        assert!(lie_basis(3, 3, &[1]).is_empty());
    }

    #[test]
    fn derivation_signs() {
        // d x0 = x1 with |x0| = 1, |x1| = 0: d(x0 x0) = x1 x0 − x0 x1
        let imgs = vec![TensorElement::generator(1), TensorElement::zero()];
        let e = TensorElement::word(vec![0, 0], Scalar::one());
        let got = e.apply_odd_derivation(&imgs, &[1, 0], 10);
        let mut want = TensorElement::word(vec![1, 0], Scalar::one());
        want.add_term(vec![0, 1], &-Scalar::one());
        assert_eq!(got, want);
    }
}
